"""Level languages, factor complexity, extension graphs, return words,
dendricity and k-block presentations.

Level-n factors are collected from expansions tau_{n,m}(a) over growing
horizons m.  Since every morphism is letter-onto the factor sets grow
monotonically with the horizon, and the table is declared stabilized once a
positivity witness has appeared and the pooled set is unchanged across two
consecutive horizons.  That stopping rule is a desk-scale decision, not a
theorem, so the flag is part of the table and propagated to consumers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .directive import DirectiveSequence
from .words import Alphabet, Morphism, Word

Factor = tuple[int, ...]


class UnstableLanguage(ValueError):
    """The requested operation needs a stabilized factor table."""


class InternalInconsistency(AssertionError):
    """A hard combinatorial identity failed; indicates a generation bug."""


@dataclass(frozen=True)
class LanguageTable:
    level: int
    max_length: int
    factors: frozenset[Factor]
    stabilized: bool
    generation_horizon: int
    alphabet: Alphabet

    def of_length(self, k: int) -> list[Factor]:
        return sorted(w for w in self.factors if len(w) == k)

    def count(self, k: int) -> int:
        return sum(1 for w in self.factors if len(w) == k)

    def __contains__(self, w: Factor) -> bool:
        return tuple(w) in self.factors


_MAX_EXPANSION = 2_000_000  # total letters expanded per horizon increment


def factors(
    ds: DirectiveSequence,
    n: int,
    k: int,
    max_horizon: Optional[int] = None,
) -> LanguageTable:
    """All level-n factors of length <= k, with stabilization detection.

    The horizon is grown one level at a time.  If the sequence has a declared
    finite depth, or the expansion budget runs out, before the stopping rule
    fires, the table is returned with stabilized=False rather than raising.
    """
    cache = getattr(ds, "_factor_cache", None)
    if cache is None:
        cache = {}
        ds._factor_cache = cache
    key = (n, k, max_horizon)
    if key in cache:
        return cache[key]

    alphabet = ds.alphabet_at(n)
    if max_horizon is None:
        max_horizon = n + 64 if ds.depth is None else ds.depth
    current: frozenset[Factor] = frozenset()
    stable_rounds = 0
    witness: Optional[int] = None
    horizon = n
    m = n + 1
    while m <= max_horizon:
        pool: set[Factor] = set(current)
        total = 0
        top_alpha = ds.alphabet_at(m)
        for a in range(top_alpha.size):
            w = ds.expand_letter(n, m, a)
            total += len(w)
            pool.update(w.factors(k))
        horizon = m
        if witness is None:
            mat = ds.compose_range(n, m).incidence()
            if all(x > 0 for row in mat for x in row):
                witness = m
        new = frozenset(pool)
        if new == current and m > n + 1:
            stable_rounds += 1
        else:
            stable_rounds = 0
        current = new
        if witness is not None and stable_rounds >= 1:
            table = LanguageTable(n, k, current, True, horizon, alphabet)
            cache[key] = table
            return table
        if total > _MAX_EXPANSION:
            break
        m += 1
    table = LanguageTable(n, k, current, False, horizon, alphabet)
    cache[key] = table
    return table


def complexity(ds: DirectiveSequence, n: int, k: int) -> list[int]:
    """Factor counts p(1..k); requires a stabilized table."""
    table = factors(ds, n, k)
    if not table.stabilized:
        raise UnstableLanguage(f"level-{n} language not stabilized up to length {k}")
    counts = [table.count(j) for j in range(1, k + 1)]
    for a, b in zip(counts, counts[1:]):
        if b < a:
            raise InternalInconsistency("factor complexity must be nondecreasing")
    return counts


# ---------------------------------------------------------------------------
# extension graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionGraph:
    word: Factor
    alphabet: Alphabet
    left_vertices: frozenset[int]
    right_vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]

    @property
    def edge_count(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class ComponentPartition:
    """Connected components as vertex sets (letter, side), side in {L, R}."""

    components: tuple[tuple[tuple[int, str], ...], ...]
    left_classes: tuple[tuple[int, ...], ...]
    right_classes: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.components)


def extension_graph(ds: DirectiveSequence, n: int, w: Sequence[int]) -> ExtensionGraph:
    """Bipartite graph of one-letter extensions of the factor w at level n."""
    w = tuple(w)
    table = factors(ds, n, len(w) + 2)
    if not table.stabilized:
        raise UnstableLanguage(
            f"level-{n} language not stabilized to length {len(w) + 2}"
        )
    if w and w not in table.factors:
        raise ValueError(f"{w} is not a factor at level {n}")
    alpha = table.alphabet
    left = frozenset(a for a in range(alpha.size) if (a,) + w in table.factors)
    right = frozenset(b for b in range(alpha.size) if w + (b,) in table.factors)
    edges = frozenset(
        (a, b)
        for a in left
        for b in right
        if (a,) + w + (b,) in table.factors
    )
    return ExtensionGraph(w, alpha, left, right, edges)


def connected_components(g: ExtensionGraph) -> ComponentPartition:
    """Components of the bipartite graph, canonically ordered.

    Components sort by their smallest (letter, side) vertex with L before R,
    which fixes the basis order used by the coboundary space.
    """
    vertices = [(a, "L") for a in sorted(g.left_vertices)] + [
        (b, "R") for b in sorted(g.right_vertices)
    ]
    adj: dict[tuple[int, str], set[tuple[int, str]]] = {v: set() for v in vertices}
    for a, b in g.edges:
        adj[(a, "L")].add((b, "R"))
        adj[(b, "R")].add((a, "L"))
    seen: set[tuple[int, str]] = set()
    comps: list[list[tuple[int, str]]] = []
    for v in vertices:
        if v in seen:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            cur = stack.pop()
            comp.append(cur)
            for nb in adj[cur]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        comps.append(sorted(comp, key=lambda t: (t[0], t[1])))
    comps.sort(key=lambda c: [(a, 0 if s == "L" else 1) for a, s in c])
    lefts = tuple(
        tuple(a for a, s in comp if s == "L") for comp in comps
    )
    rights = tuple(
        tuple(a for a, s in comp if s == "R") for comp in comps
    )
    return ComponentPartition(tuple(tuple(c) for c in comps), lefts, rights)


def empty_word_components(ds: DirectiveSequence, n: int) -> ComponentPartition:
    return connected_components(extension_graph(ds, n, ()))


def sides_incomparable_check(ds: DirectiveSequence, n: int) -> bool:
    """For a disconnected empty-word graph of a primitive level, no component
    may have one side's letter set contained in the other's."""
    part = empty_word_components(ds, n)
    if part.count <= 1:
        return True
    for lefts, rights in zip(part.left_classes, part.right_classes):
        ls, rs = set(lefts), set(rights)
        if ls <= rs or rs <= ls:
            return False
    return True


def multiplicity(g: ExtensionGraph) -> int:
    """m(w) = edges - left vertices - right vertices + 1."""
    return g.edge_count - len(g.left_vertices) - len(g.right_vertices) + 1


def second_difference_check(ds: DirectiveSequence, n: int, k: int) -> bool:
    """sum of m(w) over |w| = j equals p(j+2) - 2 p(j+1) + p(j), j <= k-2.

    This is a hard combinatorial identity; a violation means the language
    generation is broken and raises InternalInconsistency.
    """
    table = factors(ds, n, k)
    if not table.stabilized:
        raise UnstableLanguage("language not stabilized")
    p = [1] + [table.count(j) for j in range(1, k + 1)]  # p[0] = 1 (empty word)
    for j in range(0, k - 1):
        words = [()] if j == 0 else table.of_length(j)
        total = sum(multiplicity(extension_graph(ds, n, w)) for w in words)
        expected = p[j + 2] - 2 * p[j + 1] + p[j]
        if total != expected:
            raise InternalInconsistency(
                f"bilateral multiplicity sum {total} != second difference "
                f"{expected} at length {j}"
            )
    return True


def is_dendric_up_to(
    ds: DirectiveSequence, n: int, k: int
) -> tuple[bool, Optional[Factor]]:
    """Every extension graph of every factor of length <= k is a tree."""
    table = factors(ds, n, k + 2)
    if not table.stabilized:
        raise UnstableLanguage("language not stabilized")
    for j in range(0, k + 1):
        words = [()] if j == 0 else table.of_length(j)
        for w in words:
            g = extension_graph(ds, n, w)
            part = connected_components(g)
            nv = len(g.left_vertices) + len(g.right_vertices)
            if part.count != 1 or g.edge_count != nv - 1:
                return False, w
    return True, None


# ---------------------------------------------------------------------------
# return words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReturnWordSet:
    target: Factor
    words: tuple[Factor, ...]
    scan_budget: int
    saturated: bool

    def parikh_rows(self, alphabet_size: int) -> list[list[int]]:
        rows = []
        for w in self.words:
            row = [0] * alphabet_size
            for i in w:
                row[i] += 1
            rows.append(row)
        return rows


def _returns_in(prefix: tuple[int, ...], u: Factor) -> set[Factor]:
    occ = []
    m = len(u)
    for i in range(len(prefix) - m + 1):
        if prefix[i : i + m] == u:
            occ.append(i)
    out: set[Factor] = set()
    for a, b in zip(occ, occ[1:]):
        out.add(prefix[a:b])
    return out


def return_words(
    ds: DirectiveSequence, n: int, u: Sequence[int], scan_budget: int
) -> ReturnWordSet:
    """Return words to u found by scanning a generated point prefix.

    The scanned word is a genuine prefix of a point of the level-n subshift
    (expansion along the compatible letter chain).  The set is flagged
    saturated when the half-budget scan already found everything.
    """
    u = tuple(u)
    if not u:
        raise ValueError("return words need a nonempty target")
    prefix = ds.point_prefix(n, scan_budget).indices[:scan_budget]
    half = _returns_in(prefix[: max(len(u) + 1, scan_budget // 2)], u)
    full = _returns_in(prefix, u)
    ordered = tuple(sorted(full, key=lambda w: (len(w), w)))
    return ReturnWordSet(u, ordered, scan_budget, saturated=(half == full and bool(full)))


# ---------------------------------------------------------------------------
# k-block presentations
# ---------------------------------------------------------------------------


def _block_alphabet(table: LanguageTable, k: int) -> tuple[Alphabet, dict[Factor, int]]:
    blocks = table.of_length(k)
    if not blocks:
        raise ValueError("no factors of the requested block length")
    alpha = table.alphabet
    if alpha.single_char():
        symbols = tuple("".join(alpha.symbols[i] for i in b) for b in blocks)
    else:
        symbols = tuple(",".join(alpha.symbols[i] for i in b) for b in blocks)
    return Alphabet(symbols), {b: i for i, b in enumerate(blocks)}


def _block_morphism(
    tau: Morphism,
    k: int,
    dom_alpha: Alphabet,
    dom_index: dict[Factor, int],
    dom_blocks: list[Factor],
    cod_alpha: Alphabet,
    cod_index: dict[Factor, int],
) -> Morphism:
    images = []
    for block in dom_blocks:
        word = tau.apply(Word(tau.domain, block))
        keep = len(tau.image(block[0]))
        letters = []
        for start in range(keep):
            window = word.indices[start : start + k]
            if len(window) < k or window not in cod_index:
                raise InternalInconsistency(
                    "sliding window fell outside the stored factor set"
                )
            letters.append(cod_index[window])
        images.append(Word(cod_alpha, tuple(letters)))
    return Morphism(dom_alpha, cod_alpha, images)


def block_presentation(ds: DirectiveSequence, k: int) -> DirectiveSequence:
    """Recode the sequence over the alphabets of length-k factors.

    The image of a block [a_1...a_k] keeps exactly the length-k windows of
    tau(a_1...a_k) that start inside tau(a_1).  Identity when k == 1.
    """
    if k < 1:
        raise ValueError("block length must be >= 1")
    if k == 1:
        return ds

    def data_at(level: int):
        table = factors(ds, level, k)
        if not table.stabilized:
            raise UnstableLanguage(f"level-{level} language not stabilized at length {k}")
        alpha, index = _block_alphabet(table, k)
        return alpha, index, table.of_length(k)

    if ds.is_eventually_periodic:
        total = len(ds.preperiod) + len(ds.period)
        infos = [data_at(level) for level in range(total + 1)]
        # levels congruent mod the period share their language, so the block
        # alphabet at level `total` equals the one at len(preperiod)
        morphs = []
        for level in range(total):
            cod_alpha, cod_index, _ = infos[level]
            dom_alpha, dom_index, dom_blocks = infos[level + 1]
            morphs.append(
                _block_morphism(
                    ds.morphism_at(level), k, dom_alpha, dom_index, dom_blocks,
                    cod_alpha, cod_index,
                )
            )
        return DirectiveSequence(
            preperiod=morphs[: len(ds.preperiod)],
            period=morphs[len(ds.preperiod) :],
            recognizable_assumed=ds.recognizable_assumed,
        )
    depth = len(ds.explicit)
    infos = [data_at(level) for level in range(depth + 1)]
    morphs = []
    for level in range(depth):
        cod_alpha, cod_index, _ = infos[level]
        dom_alpha, dom_index, dom_blocks = infos[level + 1]
        morphs.append(
            _block_morphism(
                ds.morphism_at(level), k, dom_alpha, dom_index, dom_blocks,
                cod_alpha, cod_index,
            )
        )
    return DirectiveSequence(explicit=morphs, recognizable_assumed=ds.recognizable_assumed)


def block_projection(word: Factor, block_alphabet: Alphabet, base: Alphabet) -> Factor:
    """First-coordinate projection of a word over a block alphabet."""
    out = []
    for i in word:
        sym = block_alphabet.symbols[i]
        first = sym.split(",")[0] if "," in sym else sym[0]
        out.append(base.index(first))
    return tuple(out)


# ---------------------------------------------------------------------------
# exports
# ---------------------------------------------------------------------------


def graph_to_dot(g: ExtensionGraph) -> str:
    alpha = g.alphabet
    lines = ["graph extension {"]
    for a in sorted(g.left_vertices):
        lines.append(f'  L_{alpha.symbols[a]} [side=left];')
    for b in sorted(g.right_vertices):
        lines.append(f'  R_{alpha.symbols[b]} [side=right];')
    for a, b in sorted(g.edges):
        lines.append(f"  L_{alpha.symbols[a]} -- R_{alpha.symbols[b]};")
    lines.append("}")
    return "\n".join(lines)


def table_to_json_dict(table: LanguageTable) -> dict:
    alpha = table.alphabet
    sep = "" if alpha.single_char() else " "
    return {
        "level": table.level,
        "max_length": table.max_length,
        "stabilized": table.stabilized,
        "factors": sorted(
            sep.join(alpha.symbols[i] for i in w) for w in table.factors
        ),
    }
