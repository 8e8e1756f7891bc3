"""Directive sequences: eventually periodic (or depth-limited) chains of
substitutions tau_n : A_{n+1}* -> A_n*, with heights, growth predicates,
contraction and the prefix decomposition along the tower structure.

Heights follow the row convention: h_n(a) = |tau_{0,n}(a)| and the height
row vector satisfies h_{n+1} = h_n . M_{tau_n} with M(b, a) = |tau_n(a)|_b.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .words import Alphabet, Morphism, MorphismError, Word, identity_morphism


class DepthExhausted(ValueError):
    """Operation needs levels beyond the declared depth of the sequence."""


@dataclass(frozen=True)
class PrimitivityReport:
    witnesses: tuple[Optional[int], ...]  # per level: least m with M_{n,m} > 0

    def all_primitive(self) -> bool:
        return all(w is not None for w in self.witnesses)


@dataclass(frozen=True)
class DumontThomasLayers:
    """Layers (u_i, a_i), level n at index 0, built from a prefix position.

    u_i a_i is a prefix of tau_i(a_{i+1}); re-expanding
    tau_{n,m-1}(u_{m-1}) ... tau_n(u_{n+1}) u_n reproduces the prefix before
    position p, and a_n is the letter at position p.
    """

    level: int
    layers: tuple[tuple[Word, int], ...]


class DirectiveSequence:
    """A chain (tau_n), either preperiod+period or an explicit finite schedule.

    Chain consistency is validated: codomain(tau_{n+1}) == domain(tau_n) and,
    for the periodic form, the period wraps.  All alphabets must have at
    least two letters (one-letter subshifts are degenerate).
    """

    def __init__(
        self,
        preperiod: Sequence[Morphism] = (),
        period: Sequence[Morphism] = (),
        explicit: Sequence[Morphism] = (),
        recognizable_assumed: bool = True,
    ):
        if explicit and (preperiod or period):
            raise ValueError("give either preperiod/period or an explicit schedule")
        if not explicit and not period:
            raise ValueError("period must be nonempty")
        self.preperiod = tuple(preperiod)
        self.period = tuple(period)
        self.explicit = tuple(explicit)
        self.recognizable_assumed = recognizable_assumed
        chain = list(self.explicit) if self.explicit else list(self.preperiod) + list(self.period)
        for left, right in zip(chain, chain[1:]):
            if right.codomain != left.domain:
                raise MorphismError("chain mismatch: codomain(tau_{n+1}) != domain(tau_n)")
        if self.period and self.period[-1].domain != self.period[0].codomain:
            raise MorphismError("period does not wrap")
        for m in chain:
            if m.domain.size < 2 or m.codomain.size < 2:
                raise ValueError("subshift alphabets need at least two letters")
        self._range_cache: dict[tuple[int, int], Morphism] = {}

    # -- constructors --------------------------------------------------------

    @staticmethod
    def constant(m: Morphism, recognizable_assumed: bool = True) -> "DirectiveSequence":
        if not m.is_endomorphism():
            raise MorphismError("constant sequence needs an endomorphism")
        return DirectiveSequence(period=[m], recognizable_assumed=recognizable_assumed)

    # -- basic access ---------------------------------------------------------

    @property
    def is_eventually_periodic(self) -> bool:
        return not self.explicit

    @property
    def depth(self) -> Optional[int]:
        return len(self.explicit) if self.explicit else None

    def check_depth(self, n: int) -> None:
        if n < 0:
            raise ValueError("level must be nonnegative")
        if self.explicit and n > len(self.explicit):
            raise DepthExhausted(f"level {n} beyond declared depth {len(self.explicit)}")

    def morphism_at(self, n: int) -> Morphism:
        if n < 0:
            raise ValueError("level must be nonnegative")
        if self.explicit:
            if n >= len(self.explicit):
                raise DepthExhausted(f"no morphism at level {n}: depth {len(self.explicit)}")
            return self.explicit[n]
        if n < len(self.preperiod):
            return self.preperiod[n]
        return self.period[(n - len(self.preperiod)) % len(self.period)]

    def alphabet_at(self, n: int) -> Alphabet:
        self.check_depth(n)
        if self.explicit and n == len(self.explicit):
            return self.explicit[-1].domain
        return self.morphism_at(n).codomain

    # -- composition and expansion --------------------------------------------

    def compose_range(self, n: int, m: int) -> Morphism:
        """tau_{n,m} = tau_n o tau_{n+1} o ... o tau_{m-1}; identity when n == m."""
        if n > m:
            raise ValueError("need n <= m")
        self.check_depth(m)
        if n == m:
            return identity_morphism(self.alphabet_at(n))
        key = (n, m)
        if key not in self._range_cache:
            if m - n == 1:
                self._range_cache[key] = self.morphism_at(n)
            else:
                self._range_cache[key] = self.compose_range(n, m - 1).compose(
                    self.morphism_at(m - 1)
                )
        return self._range_cache[key]

    def expand_letter(self, n: int, m: int, letter: int) -> Word:
        """tau_{n,m}(letter) without materializing the whole composition."""
        self.check_depth(m)
        word = Word(self.alphabet_at(m), (letter,))
        for level in range(m - 1, n - 1, -1):
            word = self.morphism_at(level).apply(word)
        return word

    # -- heights ----------------------------------------------------------------

    def heights(self, n: int) -> tuple[int, ...]:
        """h_n(a) = |tau_{0,n}(a)| for a in A_n; all ones at n = 0."""
        self.check_depth(n)
        h = [1] * self.alphabet_at(0).size
        for level in range(n):
            mat = self.morphism_at(level).incidence()
            cols = len(mat[0])
            h = [sum(h[b] * mat[b][a] for b in range(len(mat))) for a in range(cols)]
        return tuple(h)

    def height_of(self, n: int, w: Word) -> int:
        h = self.heights(n)
        return sum(h[i] for i in w.indices)

    # -- growth predicates --------------------------------------------------------

    def is_positive(self, depth: int) -> list[bool]:
        out = []
        for n in range(depth):
            mat = self.morphism_at(n).incidence()
            out.append(all(x > 0 for row in mat for x in row))
        return out

    def primitivity_report(self, depth: int) -> PrimitivityReport:
        """Per level n < depth, the least m <= depth with M_{n,m} positive.

        None means "unknown within depth": primitivity is only
        semi-decidable, so absence of a witness is not a refutation.
        """
        witnesses: list[Optional[int]] = []
        for n in range(depth):
            found = None
            for m in range(n + 1, depth + 1):
                if self.explicit and m > len(self.explicit):
                    break
                mat = self.compose_range(n, m).incidence()
                if all(x > 0 for row in mat for x in row):
                    found = m
                    break
            witnesses.append(found)
        return PrimitivityReport(tuple(witnesses))

    def primitivity_witness(self, n: int, depth: int) -> Optional[int]:
        for m in range(n + 1, depth + 1):
            if self.explicit and m > len(self.explicit):
                return None
            mat = self.compose_range(n, m).incidence()
            if all(x > 0 for row in mat for x in row):
                return m
        return None

    # -- contraction ----------------------------------------------------------------

    def contraction(self, cut_points: Sequence[int]) -> "DirectiveSequence":
        """Contract along cut points n_0 < n_1 < ...: pieces tau_{n_i, n_{i+1}}.

        A leading identity piece (n_0 > 0 contributes tau_{0,n_0}) is kept so
        the level-0 subshift is unchanged.  For an eventually periodic input
        whose cuts eventually advance by a constant step aligned with the
        period, the result is eventually periodic; otherwise it is an
        explicit schedule of depth len(cut_points) - 1 (plus the lead piece).
        """
        cuts = list(cut_points)
        if len(cuts) < 2 or any(b <= a for a, b in zip(cuts, cuts[1:])):
            raise ValueError("cut points must be strictly increasing, at least two")
        if cuts[0] < 0:
            raise ValueError("cut points must be nonnegative")
        pieces: list[Morphism] = []
        if cuts[0] > 0:
            pieces.append(self.compose_range(0, cuts[0]))
        for a, b in zip(cuts, cuts[1:]):
            pieces.append(self.compose_range(a, b))
        if self.is_eventually_periodic and len(cuts) >= 2:
            step = cuts[1] - cuts[0]
            aligned = (
                all(b - a == step for a, b in zip(cuts, cuts[1:]))
                and step % len(self.period) == 0
                and cuts[0] >= len(self.preperiod)
            )
            if aligned:
                pre = pieces[:1] if cuts[0] > 0 else []
                return DirectiveSequence(
                    preperiod=pre,
                    period=[pieces[-1]],
                    recognizable_assumed=self.recognizable_assumed,
                )
        return DirectiveSequence(explicit=pieces, recognizable_assumed=self.recognizable_assumed)

    # -- compatible letter chain and point prefixes ------------------------------------

    def letter_chain(self, depth: int) -> list[int]:
        """Letters (a_n), n = 0..depth, with tau_n(a_{n+1}) starting with a_n.

        Eventually periodic sequences get a chain valid at every depth via a
        fixed point of the first-letter map over one period; explicit
        schedules are resolved backward from the declared depth (a documented
        limitation: the chain is only guaranteed up to that depth).
        """
        self.check_depth(depth)
        if self.explicit:
            top = len(self.explicit)
            chain_rev = [0]  # smallest letter at the top level
            for level in range(top - 1, -1, -1):
                chain_rev.append(self.morphism_at(level).image(chain_rev[-1]).indices[0])
            chain = chain_rev[::-1]
            return chain[: depth + 1]
        start = len(self.preperiod)
        p = len(self.period)
        period_map = self.compose_range(start, start + p)
        first = [period_map.image(a).indices[0] for a in range(period_map.domain.size)]
        # letters lying on cycles of the first-letter map; pick the smallest
        cyclic: set[int] = set()
        for a0 in range(len(first)):
            trail = []
            a = a0
            while a not in trail:
                trail.append(a)
                a = first[a]
            cyc = [a]
            b = first[a]
            while b != a:
                cyc.append(b)
                b = first[b]
            cyclic.update(cyc)
        anchor = min(cyclic)
        cycle_len = 1
        b = first[anchor]
        while b != anchor:
            cycle_len += 1
            b = first[b]
        # anchor is fixed by the first-letter map of `cycle_len` periods, so
        # placing it at any level start + k*p*cycle_len yields one consistent
        # chain regardless of the requested depth
        block = p * cycle_len
        k = 1
        while start + k * block <= depth + 1:
            k += 1
        top = start + k * block
        letters = {top: anchor}
        cur = anchor
        for level in range(top - 1, -1, -1):
            cur = self.morphism_at(level).image(cur).indices[0]
            letters[level] = cur
        return [letters[n] for n in range(depth + 1)]

    def point_prefix(self, n: int, min_length: int) -> Word:
        """Prefix of a point of the level-n subshift, at least min_length long.

        Expands tau_{n,m}(a_m) along the compatible letter chain, so the
        result is a genuine prefix of a limit point.
        """
        m = n + 1
        while True:
            self.check_depth(m)
            chain = self.letter_chain(m)
            word = self.expand_letter(n, m, chain[m])
            if len(word) >= min_length:
                return word
            if self.explicit and m == len(self.explicit):
                return word  # depth exhausted: best effort, caller sees length
            m += 1

    # -- prefix decomposition ------------------------------------------------------------

    def dumont_thomas_decompose(
        self, n: int, m: int, letter: int, position: int
    ) -> DumontThomasLayers:
        """Decompose position p inside tau_{n,m}(letter) into tower layers."""
        word = self.expand_letter(n, m, letter)
        if not 0 <= position < len(word):
            raise ValueError(f"position {position} out of range for length {len(word)}")
        layers_rev: list[tuple[Word, int]] = [(Word(self.alphabet_at(m), ()), letter)]
        p = position
        cur_letter = letter
        for level in range(m - 1, n - 1, -1):
            image = self.morphism_at(level).apply(Word(self.alphabet_at(level + 1), (cur_letter,)))
            # weights of the letters of `image` one level further down
            j, acc = 0, 0
            while True:
                w = len(self.expand_letter(n, level, image.indices[j]))
                if acc + w > p:
                    break
                acc += w
                j += 1
            layers_rev.append((image[:j], image.indices[j]))
            cur_letter = image.indices[j]
            p -= acc
        return DumontThomasLayers(n, tuple(layers_rev[::-1]))

    def dumont_thomas_expand(self, dt: DumontThomasLayers) -> Word:
        """Re-expansion tau_{n,m-1}(u_{m-1}) ... tau_n(u_{n+1}) u_n."""
        n = dt.level
        out = Word(self.alphabet_at(n), ())
        top = n + len(dt.layers) - 1
        for offset in range(len(dt.layers) - 1, -1, -1):
            u, _ = dt.layers[offset]
            level = n + offset
            if level == n:
                out = out + u
            else:
                expanded: list[int] = []
                for c in u.indices:
                    expanded.extend(self.expand_letter(n, level, c).indices)
                out = out + Word(self.alphabet_at(n), tuple(expanded))
        return out

    # -- decisiveness -----------------------------------------------------------------------

    def is_decisive(
        self,
        depth: int,
        component_provider: Callable[[int], Sequence[Sequence[tuple[int, str]]]],
    ) -> tuple[bool, Optional[tuple[int, int, int]]]:
        """First/last letters of images constant on graph components.

        component_provider(level) must return the connected components of the
        empty-word extension graph at that level, as sequences of vertices
        (letter, side) with side in {"L", "R"}.  Checks every level n < depth:
        a -> first letter of tau_n(a) constant on right vertices, and
        a -> last letter constant on left vertices.  Returns (ok, witness)
        where witness = (level, letter_a, letter_b) for the first violation.
        """
        for n in range(depth):
            tau = self.morphism_at(n)
            components = component_provider(n + 1)
            for comp in components:
                rights = [a for a, side in comp if side == "R"]
                lefts = [a for a, side in comp if side == "L"]
                firsts = {tau.image(a).indices[0] for a in rights}
                lasts = {tau.image(a).indices[-1] for a in lefts}
                if len(firsts) > 1:
                    bad = sorted(rights)[:2]
                    return False, (n, bad[0], bad[-1])
                if len(lasts) > 1:
                    bad = sorted(lefts)[:2]
                    return False, (n, bad[0], bad[-1])
        return True, None


# ---------------------------------------------------------------------------
# directive-sequence file format
# ---------------------------------------------------------------------------


def parse_directive_file(text: str) -> tuple[DirectiveSequence, dict[str, Morphism]]:
    """Parse named morphism blocks plus a [schedule] stanza.

    Without a schedule, a single morphism block denotes the constant
    sequence.  Returns the sequence and the named morphisms.
    """
    from .words import parse_morphism_lines

    sections: list[tuple[str, list[str]]] = []
    current: Optional[tuple[str, list[str]]] = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            current = (stripped[1:-1].strip(), [])
            sections.append(current)
        else:
            if current is None:
                raise MorphismError("content before any [section] header")
            current[1].append(line)
    morphisms: dict[str, Morphism] = {}
    schedule_lines: Optional[list[str]] = None
    for header, lines in sections:
        if header == "schedule":
            schedule_lines = lines
        elif header.startswith("morphism"):
            name = header[len("morphism") :].strip()
            if not name:
                raise MorphismError("morphism block needs a name")
            morphisms[name] = parse_morphism_lines(lines)
        else:
            raise MorphismError(f"unknown section [{header}]")
    if not morphisms:
        raise MorphismError("no morphism blocks found")
    if schedule_lines is None:
        if len(morphisms) != 1:
            raise MorphismError("several morphisms but no [schedule]")
        (only,) = morphisms.values()
        return DirectiveSequence.constant(only), morphisms

    entries: dict[str, str] = {}
    for line in schedule_lines:
        if "=" not in line:
            raise MorphismError(f"bad schedule line: {line!r}")
        key, val = line.split("=", 1)
        entries[key.strip()] = val.strip()

    def name_list(val: str) -> list[str]:
        val = val.strip()
        if not (val.startswith("[") and val.endswith("]")):
            raise MorphismError(f"expected [names]: {val!r}")
        inner = val[1:-1].strip()
        return [t.strip() for t in inner.split(",")] if inner else []

    def lookup(names: list[str]) -> list[Morphism]:
        out = []
        for nm in names:
            if nm not in morphisms:
                raise MorphismError(f"schedule references unknown morphism {nm!r}")
            out.append(morphisms[nm])
        return out

    if "explicit" in entries:
        names = name_list(entries["explicit"])
        if "depth" in entries and int(entries["depth"]) != len(names):
            raise MorphismError("depth does not match the explicit schedule length")
        ds = DirectiveSequence(explicit=lookup(names))
    else:
        pre = name_list(entries.get("preperiod", "[]"))
        per = name_list(entries.get("period", "[]"))
        ds = DirectiveSequence(preperiod=lookup(pre), period=lookup(per))
    ds._names = {  # retained for round-trip printing
        "explicit": name_list(entries["explicit"]) if "explicit" in entries else None,
        "preperiod": name_list(entries.get("preperiod", "[]")),
        "period": name_list(entries.get("period", "[]")),
    }
    return ds, morphisms


def format_directive_file(ds: DirectiveSequence, morphisms: dict[str, Morphism]) -> str:
    from .words import format_morphism

    blocks = []
    for name, m in morphisms.items():
        blocks.append(f"[morphism {name}]\n{format_morphism(m)}")
    names = getattr(ds, "_names", None)
    if names is None:
        by_obj = {id(m): name for name, m in morphisms.items()}

        def nm(m: Morphism) -> str:
            return by_obj[id(m)]

        if ds.explicit:
            names = {
                "explicit": [nm(m) for m in ds.explicit],
                "preperiod": [],
                "period": [],
            }
        else:
            names = {
                "explicit": None,
                "preperiod": [nm(m) for m in ds.preperiod],
                "period": [nm(m) for m in ds.period],
            }
    sched = ["[schedule]"]
    if names["explicit"] is not None:
        sched.append(f"explicit = [{', '.join(names['explicit'])}]")
        sched.append(f"depth = {len(names['explicit'])}")
    else:
        sched.append(f"preperiod = [{', '.join(names['preperiod'])}]")
        sched.append(f"period = [{', '.join(names['period'])}]")
    blocks.append("\n".join(sched))
    return "\n\n".join(blocks) + "\n"
