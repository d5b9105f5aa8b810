"""Boolean and ordinal (chain) factorization of formal contexts.

A factor chain covers an incidence (g,m) when some chain concept has g
in its extent and m in its intent, so chains are Ferrers subrelations of
the incidence. "Largest" always means most newly covered incidences;
ties prefer shorter chains, then lectic order. Small contexts (at most
12 concepts) are solved exactly by exhaustive chain enumeration; larger
ones use a greedy best-first chain descent through the lattice, adding
one threshold attribute at a time.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceeded, ConceptBudgetExceeded, OdskError, WrongFactorCount
from .fca import (DEFAULT_CONCEPT_BUDGET, ConceptLattice, FormalConcept,
                  FormalContext, _next_closure_intents, concepts)
from .order import _bits

EXACT_CONCEPT_LIMIT = 12

BooleanFactor = FormalConcept


@dataclass(frozen=True)
class OrdinalFactor:
    """Concept chain, listed by strictly increasing extent."""

    chain: tuple[FormalConcept, ...]

    def __len__(self) -> int:
        return len(self.chain)


@dataclass(frozen=True)
class Factorization:
    factors: tuple[OrdinalFactor, ...]
    covered: frozenset[tuple[str, str]]
    uncovered: frozenset[tuple[str, str]]


@dataclass(frozen=True)
class BooleanGreedyResult:
    factors: tuple[FormalConcept, ...]
    covered: frozenset[tuple[str, str]]
    uncovered: frozenset[tuple[str, str]]


def _tile_pairs(ctx: FormalContext, extent_mask: int, intent_mask: int):
    for g in _bits(extent_mask):
        for m in _bits(intent_mask):
            yield (g, m)


def _uncovered_cols(ctx: FormalContext, uncovered_rows: list[int]) -> list[int]:
    cols = [0] * len(ctx.attributes)
    for i, r in enumerate(uncovered_rows):
        for j in _bits(r):
            cols[j] |= 1 << i
    return cols


def boolean_greedy(ctx: FormalContext, k: int | None = None,
                   budget: int = DEFAULT_CONCEPT_BUDGET) -> BooleanGreedyResult:
    """Greedy Boolean factors: repeatedly take the concept covering the
    most uncovered incidences (lectic-first on ties) until everything is
    covered or k factors were chosen."""
    lat = concepts(ctx, budget=budget)
    unc = list(ctx.rows)
    chosen: list[int] = []
    while any(unc) and (k is None or len(chosen) < k):
        best = None
        for idx, (ext, itt) in enumerate(zip(lat.extent_masks, lat.intent_masks)):
            gain = sum(bin(unc[g] & itt).count("1") for g in _bits(ext))
            key = (-gain, idx)
            if best is None or key < best[0]:
                best = (key, idx, ext, itt)
        if best is None or -best[0][0] == 0:
            break
        _, idx, ext, itt = best
        chosen.append(idx)
        for g in _bits(ext):
            unc[g] &= ~itt
    covered = frozenset(
        (ctx.objects[g], ctx.attributes[m])
        for i in chosen
        for g, m in _tile_pairs(ctx, lat.extent_masks[i], lat.intent_masks[i]))
    uncovered = ctx.incidences() - covered
    return BooleanGreedyResult(
        tuple(lat.concepts[i] for i in chosen), covered, uncovered)


def _concept_count_at_most(ctx: FormalContext, limit: int) -> bool:
    try:
        for _ in _next_closure_intents(ctx, limit):
            pass
    except ConceptBudgetExceeded:
        return False
    return True


def _chain_best_exhaustive(ctx: FormalContext, lat: ConceptLattice,
                           unc_cols: list[int]) -> list[int]:
    """Exact best chain by DFS over all chains of the lattice.

    Chains are walked top-down, which is strictly increasing lectic
    index; scoring uses the newly-covered count with (cov desc, len asc,
    index tuple asc) tie-breaking.
    """
    n = len(lat)
    exts, itts = lat.extent_masks, lat.intent_masks
    below = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if exts[j] != exts[i] and exts[j] & ~exts[i] == 0:
                below[i].append(j)

    def marginal(i: int, prev_intent: int) -> int:
        gain = 0
        for m in _bits(itts[i] & ~prev_intent):
            gain += bin(unc_cols[m] & exts[i]).count("1")
        return gain

    best: list = [None]

    def consider(chain: list[int], cov: int):
        key = (-cov, len(chain), tuple(chain))
        if best[0] is None or key < best[0][0]:
            best[0] = (key, tuple(chain))

    def dfs(chain: list[int], cov: int):
        consider(chain, cov)
        last = chain[-1]
        for j in below[last]:
            chain.append(j)
            dfs(chain, cov + marginal(j, itts[last]))
            chain.pop()

    for i in range(n):
        dfs([i], marginal(i, 0))
    return list(best[0][1])


def _chain_best_descent(ctx: FormalContext, unc_cols: list[int]) -> list[tuple[int, int]]:
    """Greedy best-first chain descent for large lattices.

    Starting at the top concept, repeatedly tightens the extent by the
    attribute whose threshold covers the most uncovered incidences in
    its own column (ties: larger extent, then lectic-smaller extent).
    Returns (extent, intent) mask pairs, top-down.
    """
    full_g = (1 << len(ctx.objects)) - 1
    ext = full_g
    itt = ctx._intent_of(ext)
    chain = [(ext, itt)]
    while True:
        best = None
        for m in range(len(ctx.attributes)):
            if itt >> m & 1:
                continue
            ext2 = ext & ctx.cols[m]
            gain = bin(ext2 & unc_cols[m]).count("1")
            if gain == 0:
                continue
            key = (-gain, -bin(ext2).count("1"), tuple(_bits(ext2)))
            if best is None or key < best[0]:
                best = (key, ext2)
        if best is None:
            break
        ext = best[1]
        itt = ctx._intent_of(ext)
        chain.append((ext, itt))
    return chain


def largest_ordinal_factor(ctx: FormalContext,
                           uncovered: frozenset[tuple[str, str]] | None = None,
                           budget: int = DEFAULT_CONCEPT_BUDGET) -> OrdinalFactor:
    """The concept chain covering the most of ``uncovered`` (defaults to
    the whole incidence relation); exact for small lattices, greedy
    descent otherwise. Degenerate empty-tile chain members are pruned."""
    incidences = ctx.incidences()
    if uncovered is None:
        uncovered = incidences
    elif not uncovered <= incidences:
        raise OdskError("uncovered pairs must be incidences of the context")
    unc_rows = [0] * len(ctx.objects)
    for g, m in uncovered:
        unc_rows[ctx.objects.index(g)] |= 1 << ctx.attributes.index(m)
    unc_cols = _uncovered_cols(ctx, unc_rows)

    if len(ctx.objects) and _concept_count_at_most(
            ctx if len(ctx.attributes) <= len(ctx.objects) else ctx.transpose(),
            EXACT_CONCEPT_LIMIT):
        lat = concepts(ctx, budget=budget)
        idxs = _chain_best_exhaustive(ctx, lat, unc_cols)
        masks = [(lat.extent_masks[i], lat.intent_masks[i]) for i in idxs]
    else:
        masks = _chain_best_descent(ctx, unc_cols)

    masks = [(e, b) for e, b in masks if e and b]  # prune empty tiles
    masks.sort(key=lambda p: bin(p[0]).count("1"))  # increasing extent
    objs, attrs = ctx.objects, ctx.attributes
    chain = tuple(
        FormalConcept(tuple(objs[i] for i in _bits(e)),
                      tuple(attrs[j] for j in _bits(b)))
        for e, b in masks)
    return OrdinalFactor(chain)


def factor_tiles(ctx: FormalContext, factor: OrdinalFactor) -> frozenset[tuple[str, str]]:
    """All incidence pairs covered by a factor's concept tiles."""
    out = set()
    for c in factor.chain:
        for g in c.extent:
            for m in c.intent:
                out.add((g, m))
    return frozenset(out)


def ordinal_factorization(ctx: FormalContext, k: int,
                          budget: int = DEFAULT_CONCEPT_BUDGET) -> Factorization:
    """k successive largest ordinal factors on a shrinking uncovered set."""
    if k < 1:
        raise OdskError("need k >= 1 factors")
    incidences = ctx.incidences()
    uncovered = incidences
    factors = []
    for _ in range(k):
        factor = largest_ordinal_factor(ctx, uncovered, budget=budget)
        factors.append(factor)
        uncovered = uncovered - factor_tiles(ctx, factor)
    covered = incidences - uncovered
    return Factorization(tuple(factors), covered, uncovered)


# -- biplot ---------------------------------------------------------------


@dataclass(frozen=True)
class BiplotAxis:
    """Coordinates along one factor: an object covers exactly the
    attributes with coordinate at most its own."""

    length: int
    object_coord: tuple[tuple[str, int], ...]
    attribute_coord: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class Biplot:
    axes: tuple[BiplotAxis, BiplotAxis]

    def decode(self) -> frozenset[tuple[str, str]]:
        """Incidences reconstructable from the coordinates."""
        out = set()
        for axis in self.axes:
            attr = dict(axis.attribute_coord)
            for g, cg in axis.object_coord:
                for m, cm in attr.items():
                    if cg >= cm:
                        out.add((g, m))
        return frozenset(out)


def biplot(ctx: FormalContext, fz: Factorization) -> Biplot:
    """Coordinates for a two-factor factorization: object coordinate
    k+1-a(g) with a(g) the first chain level containing it, attribute
    coordinate k+1-t(m) with t(m) the last level still claiming it."""
    if len(fz.factors) != 2:
        raise WrongFactorCount(f"biplot needs exactly 2 factors, got {len(fz.factors)}")
    axes = []
    for factor in fz.factors:
        k = len(factor.chain)
        obj_coord = []
        for g in ctx.objects:
            a = next((i for i, c in enumerate(factor.chain, 1) if g in c.extent),
                     k + 1)
            obj_coord.append((g, k + 1 - a))
        att_coord = []
        for m in ctx.attributes:
            t = max((i for i, c in enumerate(factor.chain, 1) if m in c.intent),
                    default=0)
            att_coord.append((m, k + 1 - t))
        axes.append(BiplotAxis(k, tuple(obj_coord), tuple(att_coord)))
    return Biplot((axes[0], axes[1]))
