"""Alphabets, finite words and morphisms of free monoids.

Letters are canonicalized to indices 0..n-1 internally; external symbols are
arbitrary strings.  The symbol order of an Alphabet is fixed and determines
the coordinate order of every vector and matrix indexed by it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence


class MorphismError(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]

    def __post_init__(self):
        if len(self.symbols) < 1:
            raise ValueError("alphabet needs at least one letter")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet letters must be pairwise distinct")

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise KeyError(f"letter {symbol!r} not in alphabet {self.symbols}") from None

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.symbols

    def __iter__(self):
        return iter(range(self.size))

    def single_char(self) -> bool:
        return all(len(s) == 1 for s in self.symbols)


@dataclass(frozen=True)
class Word:
    """Immutable finite word; equality is sequence equality."""

    alphabet: Alphabet
    indices: tuple[int, ...]

    def __post_init__(self):
        for i in self.indices:
            if not 0 <= i < self.alphabet.size:
                raise ValueError(f"letter index {i} out of range")

    @staticmethod
    def from_symbols(alphabet: Alphabet, symbols: Iterable[str]) -> "Word":
        return Word(alphabet, tuple(alphabet.index(s) for s in symbols))

    @staticmethod
    def parse(alphabet: Alphabet, text: str) -> "Word":
        """Contiguous single-char letters, or whitespace-separated tokens."""
        if text.strip() == "":
            return Word(alphabet, ())
        tokens = text.split() if any(c.isspace() for c in text.strip()) else list(text)
        return Word.from_symbols(alphabet, tokens)

    def __len__(self) -> int:
        return len(self.indices)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.alphabet, self.indices[i])
        return self.indices[i]

    def __iter__(self):
        return iter(self.indices)

    def __add__(self, other: "Word") -> "Word":
        if self.alphabet != other.alphabet:
            raise MorphismError("cannot concatenate words over different alphabets")
        return Word(self.alphabet, self.indices + other.indices)

    def symbols(self) -> list[str]:
        return [self.alphabet.symbols[i] for i in self.indices]

    def __str__(self) -> str:
        syms = self.symbols()
        return "".join(syms) if self.alphabet.single_char() else " ".join(syms)

    def is_empty(self) -> bool:
        return not self.indices

    def parikh(self) -> tuple[int, ...]:
        counts = [0] * self.alphabet.size
        for i in self.indices:
            counts[i] += 1
        return tuple(counts)

    def factors(self, max_length: Optional[int] = None) -> set[tuple[int, ...]]:
        """All nonempty factors (as index tuples) of length <= max_length."""
        n = len(self.indices)
        cap = n if max_length is None else min(max_length, n)
        out: set[tuple[int, ...]] = set()
        for length in range(1, cap + 1):
            for start in range(n - length + 1):
                out.add(self.indices[start : start + length])
        return out

    def occurrences(self, u: tuple[int, ...]) -> list[int]:
        m, n = len(u), len(self.indices)
        return [i for i in range(n - m + 1) if self.indices[i : i + m] == u]


def parikh(w: Word) -> tuple[int, ...]:
    return w.parikh()


class Morphism:
    """Non-erasing, letter-onto morphism between free monoids (a substitution).

    Both properties are validated eagerly; violating either is an error.
    """

    def __init__(self, domain: Alphabet, codomain: Alphabet, images: Sequence[Word]):
        if len(images) != domain.size:
            raise MorphismError("need one image per domain letter")
        seen = set()
        for w in images:
            if w.alphabet != codomain:
                raise MorphismError("image over wrong codomain alphabet")
            if len(w) == 0:
                raise MorphismError("erasing morphism: empty image")
            seen.update(w.indices)
        if seen != set(range(codomain.size)):
            missing = [codomain.symbols[i] for i in range(codomain.size) if i not in seen]
            raise MorphismError(f"not letter-onto: {missing} never occur in images")
        self.domain = domain
        self.codomain = codomain
        self.images = tuple(images)

    def image(self, letter: int) -> Word:
        return self.images[letter]

    def __call__(self, w: Word) -> Word:
        return self.apply(w)

    def apply(self, w: Word) -> Word:
        if w.alphabet != self.domain:
            raise MorphismError("word is not over the domain alphabet")
        out: list[int] = []
        for i in w.indices:
            out.extend(self.images[i].indices)
        return Word(self.codomain, tuple(out))

    def compose(self, other: "Morphism") -> "Morphism":
        """self after other: (self.compose(other))(w) == self(other(w))."""
        if other.codomain != self.domain:
            raise MorphismError("alphabet mismatch in composition")
        return Morphism(other.domain, self.codomain, [self.apply(w) for w in other.images])

    def incidence(self) -> list[list[int]]:
        """Rows indexed by codomain, columns by domain: entry (b, a) = |image(a)|_b."""
        m = [[0] * self.domain.size for _ in range(self.codomain.size)]
        for a in range(self.domain.size):
            for b in self.images[a].indices:
                m[b][a] += 1
        return m

    def is_left_proper(self) -> bool:
        return len({w.indices[0] for w in self.images}) == 1

    def is_right_proper(self) -> bool:
        return len({w.indices[-1] for w in self.images}) == 1

    def is_proper(self) -> bool:
        return self.is_left_proper() and self.is_right_proper()

    def constant_length(self) -> Optional[int]:
        lengths = {len(w) for w in self.images}
        return lengths.pop() if len(lengths) == 1 else None

    def is_endomorphism(self) -> bool:
        return self.domain == self.codomain

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Morphism)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.domain, self.codomain, self.images))

    def __str__(self) -> str:
        return "; ".join(
            f"{self.domain.symbols[a]} -> {self.images[a]}" for a in range(self.domain.size)
        )

    def __repr__(self) -> str:
        return f"Morphism({self})"


def incidence_matrix(m: Morphism) -> list[list[int]]:
    return m.incidence()


def identity_morphism(alphabet: Alphabet) -> Morphism:
    return Morphism(
        alphabet, alphabet, [Word(alphabet, (i,)) for i in range(alphabet.size)]
    )


# ---------------------------------------------------------------------------
# text format:  one `a -> w` line per letter, `#` comments, alphabet inferred
# ---------------------------------------------------------------------------


def parse_morphism_lines(lines: Iterable[str]) -> Morphism:
    """Parse the `a -> w` line format.

    Domain order is the order of left-hand sides; codomain order is first
    appearance in the images.  When the two letter sets coincide the
    left-hand order wins, so endomorphisms keep a single alphabet.
    """
    pairs: list[tuple[str, list[str]]] = []
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise MorphismError(f"expected 'a -> w': {raw!r}")
        lhs, rhs = line.split("->", 1)
        lhs = lhs.strip()
        rhs = rhs.strip()
        if not lhs or not rhs:
            raise MorphismError(f"incomplete rule: {raw!r}")
        tokens = rhs.split() if any(c.isspace() for c in rhs) else list(rhs)
        pairs.append((lhs, tokens))
    if not pairs:
        raise MorphismError("no rules found")
    domain_syms = [lhs for lhs, _ in pairs]
    if len(set(domain_syms)) != len(domain_syms):
        raise MorphismError("duplicate left-hand letter")
    image_syms: list[str] = []
    for _, tokens in pairs:
        for t in tokens:
            if t not in image_syms:
                image_syms.append(t)
    if set(image_syms) == set(domain_syms):
        codomain = Alphabet(tuple(domain_syms))
    else:
        codomain = Alphabet(tuple(image_syms))
    domain = Alphabet(tuple(domain_syms))
    images = [Word.from_symbols(codomain, tokens) for _, tokens in pairs]
    return Morphism(domain, codomain, images)


def format_morphism(m: Morphism) -> str:
    contiguous = m.domain.single_char() and m.codomain.single_char()
    lines = []
    for a in range(m.domain.size):
        syms = m.images[a].symbols()
        rhs = "".join(syms) if contiguous else " ".join(syms)
        lines.append(f"{m.domain.symbols[a]} -> {rhs}")
    return "\n".join(lines)


def parse_morphism(text: str) -> Morphism:
    return parse_morphism_lines(text.splitlines())
