"""Dedekind-MacNeille completion and order dimension with realizers.

The completion is computed as the concept lattice of the context
(P, P, <=). Dimension search partitions the critical pairs into
reversible classes: a class is reversible iff the strict order plus the
reversed pairs stays acyclic, in which case a topological sort yields a
linear extension reversing exactly that class. Classes are filled in
lexicographic critical-pair order, first-fit with backtracking, so
results are deterministic.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from itertools import combinations, permutations

from .errors import BudgetExceeded, OdskError
from .fca import ConceptLattice, FormalContext, concepts
from .order import LinearExtension, Poset, _bits, intersect_linear_orders

DEFAULT_BUDGET_MS = 60_000
S3_SCAN_CAP = 100_000


def default_budget_ms() -> int:
    raw = os.environ.get("ODSK_BUDGET_MS")
    if raw:
        try:
            return int(raw)
        except ValueError as exc:
            raise OdskError(f"bad ODSK_BUDGET_MS value: {raw!r}") from exc
    return DEFAULT_BUDGET_MS


# -- Dedekind-MacNeille completion ---------------------------------------


@dataclass(frozen=True, eq=False)
class Completion:
    """Concept lattice of (P,P,<=) with the canonical embedding
    x -> (down(x), up(x)); new_nodes lists concepts without preimage."""

    lattice: ConceptLattice
    embedding: tuple[tuple[str, int], ...]
    new_nodes: tuple[int, ...]

    def embedding_map(self) -> dict[str, int]:
        return dict(self.embedding)

    def __len__(self) -> int:
        return len(self.lattice)


def dedekind_macneille(p: Poset) -> Completion:
    ctx = FormalContext(p.elements, p.elements, p.up)
    lat = concepts(ctx)
    by_extent = {e: i for i, e in enumerate(lat.extent_masks)}
    embedding = tuple(
        (name, by_extent[p.down[i]]) for i, name in enumerate(p.elements))
    image = {idx for _, idx in embedding}
    new_nodes = tuple(i for i in range(len(lat)) if i not in image)
    return Completion(lat, embedding, new_nodes)


# -- critical pairs -------------------------------------------------------


def _critical_pair_indices(p: Poset) -> list[tuple[int, int]]:
    n = len(p)
    out = []
    for a in range(n):
        up_a = p.up[a] & ~(1 << a)
        dn_a = p.down[a] & ~(1 << a)
        for b in range(n):
            if a == b or (p.up[a] >> b & 1) or (p.up[b] >> a & 1):
                continue
            dn_b = p.down[b] & ~(1 << b)
            up_b = p.up[b] & ~(1 << b)
            if dn_a & ~dn_b == 0 and up_b & ~up_a == 0:
                out.append((a, b))
    return out


def critical_pairs(p: Poset) -> tuple[tuple[str, str], ...]:
    """All incomparable (a,b) with every predecessor of a below b and
    every successor of b above a."""
    return tuple((p.elements[a], p.elements[b])
                 for a, b in _critical_pair_indices(p))


# -- dimension search ------------------------------------------------------


@dataclass(frozen=True)
class Realizer:
    extensions: tuple[LinearExtension, ...]

    def serialize(self) -> str:
        """One permutation per line, elements comma-separated."""
        return "\n".join(",".join(ext.order) for ext in self.extensions) + "\n"


@dataclass(frozen=True)
class DimensionResult:
    dim: int
    realizer: Realizer


class _Timeout(Exception):
    pass


def _closure_add(rows: list[int], n: int, u: int, v: int):
    """Add arc u->v to a transitively closed digraph.

    Returns an undo list, or None if the arc would close a cycle.
    """
    if rows[v] >> u & 1:
        return None
    if rows[u] >> v & 1:
        return []
    undo = []
    target = rows[v] | (1 << v)
    for x in range(n):
        if x == u or (rows[x] >> u & 1):
            merged = rows[x] | target
            if merged != rows[x]:
                undo.append((x, rows[x]))
                rows[x] = merged
    return undo


def _topo_extension(p: Poset, rows: list[int]) -> LinearExtension:
    """Topological sort of a closed precedence digraph, repeatedly taking
    the lexicographically smallest available element."""
    n = len(p)
    remaining = set(range(n))
    out = []
    while remaining:
        ready = [x for x in remaining
                 if not any((rows[y] >> x & 1) for y in remaining if y != x)]
        pick = min(ready, key=lambda x: p.elements[x])
        out.append(p.elements[pick])
        remaining.remove(pick)
    return LinearExtension(tuple(out))


def _search_partition(p: Poset, crit: list[tuple[int, int]], k: int,
                      deadline: float):
    """First-fit backtracking partition of critical pairs into k
    reversible classes; returns class digraphs or None."""
    n = len(p)
    if time.monotonic() > deadline:
        raise _Timeout
    strict = [p.up[i] & ~(1 << i) for i in range(n)]
    classes = [strict[:] for _ in range(k)]
    counter = [0]

    def rec(idx: int, used: int) -> bool:
        counter[0] += 1
        if counter[0] % 256 == 0 and time.monotonic() > deadline:
            raise _Timeout
        if idx == len(crit):
            return True
        a, b = crit[idx]
        for c in range(min(used + 1, k)):
            undo = _closure_add(classes[c], n, b, a)
            if undo is not None:
                if rec(idx + 1, max(used, c + 1)):
                    return True
                for x, old in undo:
                    classes[c][x] = old
        return False

    return classes if rec(0, 0) else None


def _greedy_peel_classes(p: Poset, crit: list[tuple[int, int]]) -> list[list[int]]:
    """Peel reversible classes off the critical pairs in lexicographic
    order; certifies an upper bound (and a realizer) greedily."""
    n = len(p)
    strict = [p.up[i] & ~(1 << i) for i in range(n)]
    remaining = list(crit)
    classes = []
    while remaining:
        rows = strict[:]
        leftover = []
        for a, b in remaining:
            if _closure_add(rows, n, b, a) is None:
                leftover.append((a, b))
        classes.append(rows)
        if len(leftover) == len(remaining):  # pragma: no cover - defensive
            raise OdskError("irreversible critical pair")
        remaining = leftover
    return classes


def _find_standard_example_3(p: Poset, cap: int = S3_SCAN_CAP) -> bool:
    """Bounded scan for a 6-element standard-example suborder
    (a_i < b_j iff i != j); finding one certifies dimension >= 3."""
    n = len(p)
    inc = []
    for i in range(n):
        mask = 0
        for j in range(n):
            if i != j and not (p.up[i] >> j & 1) and not (p.up[j] >> i & 1):
                mask |= 1 << j
        inc.append(mask)
    antichain3 = [t for t in combinations(range(n), 3)
                  if (inc[t[0]] >> t[1] & 1) and (inc[t[0]] >> t[2] & 1)
                  and (inc[t[1]] >> t[2] & 1)]
    strict = [p.up[i] & ~(1 << i) for i in range(n)]
    candidates = 0
    for A in antichain3:
        amask = sum(1 << a for a in A)
        for B in antichain3:
            if sum(1 << b for b in B) & amask:
                continue
            for sigma in permutations(B):
                candidates += 1
                if candidates > cap:
                    return False
                ok = True
                for i, a in enumerate(A):
                    for j, b in enumerate(sigma):
                        want = i != j
                        if bool(strict[a] >> b & 1) != want or (strict[b] >> a & 1):
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    return True
    return False


def dimension_bounds(p: Poset) -> tuple[int, int]:
    """Certified (lower, upper) dimension bounds.

    Upper: min of the width and the greedy reversible-class peel count.
    Lower: 1 for chains, else 2, raised to 3 when a standard-example
    suborder is found within the scan cap.
    """
    if len(p) == 0:
        return (1, 1)
    crit = _critical_pair_indices(p)
    if not p.incomparable_pairs():
        return (1, 1)
    lower = 2
    if _find_standard_example_3(p):
        lower = 3
    width, _ = p.width_height()
    upper = max(1, min(width, len(_greedy_peel_classes(p, crit))))
    return (lower, max(lower, upper))


def order_dimension(p: Poset, max_k: int | None = None,
                    budget_ms: int | None = None) -> DimensionResult:
    """Exact order dimension with a verified realizer.

    Searches k = lower..max_k (default: up to the certified upper bound);
    raises BudgetExceeded carrying certified bounds when the time budget
    runs out or max_k is exhausted.
    """
    if max_k is not None and max_k < 1:
        raise OdskError("max_k must be >= 1")
    budget = default_budget_ms() if budget_ms is None else budget_ms
    deadline = time.monotonic() + budget / 1000.0

    n = len(p)
    if n == 0:
        return DimensionResult(1, Realizer((LinearExtension(()),)))
    if not p.incomparable_pairs():
        ext = p.greedy_linear_extension()
        return DimensionResult(1, Realizer((ext,)))

    crit = _critical_pair_indices(p)
    lower, upper = dimension_bounds(p)
    k_cap = upper if max_k is None else max_k
    k = max(lower, 2)
    proven_lower = k
    while k <= k_cap:
        try:
            found = _search_partition(p, crit, k, deadline)
        except _Timeout:
            raise BudgetExceeded(
                f"dimension search timed out at k={k}",
                lower=proven_lower, upper=upper) from None
        if found is not None:
            exts = tuple(_topo_extension(p, rows) for rows in found)
            realizer = Realizer(exts)
            verify = intersect_linear_orders(exts)
            if sorted(verify.covers) != sorted(p.covers):  # pragma: no cover
                raise OdskError("realizer verification failed")
            return DimensionResult(k, realizer)
        proven_lower = k + 1
        k += 1
    raise BudgetExceeded(
        f"no realizer with at most {k_cap} extensions",
        lower=proven_lower, upper=upper)
