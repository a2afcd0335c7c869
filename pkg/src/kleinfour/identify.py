"""Fixed-point subalgebras and reductive type identification.

A subalgebra is held as an echelon-normalized (RREF) basis in the canonical
coordinates of its ambient structure table.  Identification decomposes the
subalgebra under the fixed part of the ambient Cartan, reads off the weight
root system, recovers Cartan integers from actual coroot brackets
2*mu([e,f])/nu([e,f]), and matches components against the finite-type catalog
by exhaustive permutation (fine at rank <= 8).

The positivity functional uses coordinates (1, M, M^2, ...) on weights scaled
to a common integer grid with all entries below M in absolute value; base-M
digit uniqueness then guarantees it never vanishes on a nonzero weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .exactq import QMatrix, as_num, kernel, rank as mat_rank, rref
from .autos import Automorphism
from .rootsys import StructureTable, validate_cartan

Coords = Tuple[int, ...]


class IdentifyError(Exception):
    """Identification pipeline failure (reported, never guessed around)."""


# ---------------------------------------------------------------------------
# Subalgebras
# ---------------------------------------------------------------------------

class Subalgebra:
    """Exact spanning set inside an ambient algebra, closed under bracket."""

    __slots__ = ("table", "rows", "pivots", "dim", "_by_pivot")

    def __init__(self, table: StructureTable, rows, pivots):
        self.table = table
        self.rows: Tuple[dict, ...] = tuple(
            {j: as_num(x) for j, x in enumerate(r) if x} if not isinstance(r, dict) else r
            for r in rows
        )
        self.pivots: Tuple[int, ...] = tuple(pivots)
        self.dim = len(self.rows)
        self._by_pivot = dict(zip(self.pivots, self.rows))

    def reduce(self, vec: dict) -> Tuple[dict, dict]:
        """Split a sparse vector into (basis coefficients, residual)."""
        v = dict(vec)
        coeffs: dict = {}
        for idx, c in enumerate(self.pivots):
            f = v.get(c)
            if f:
                coeffs[idx] = f
                for j, x in self._by_pivot[c].items():
                    nv = v.get(j, 0) - f * x
                    if nv:
                        v[j] = nv
                    else:
                        v.pop(j, None)
        return coeffs, v

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[1]

    def dense_rows(self) -> List[tuple]:
        n = self.table.dim
        out = []
        for r in self.rows:
            row = [0] * n
            for j, x in r.items():
                row[j] = x
            out.append(tuple(row))
        return out


def subalgebra_from_vectors(
    table: StructureTable, vectors: Sequence[Sequence], check_closed: bool = True
) -> Subalgebra:
    rows, pivots = rref(vectors)
    s = Subalgebra(table, rows, pivots)
    if check_closed:
        _verify_closed(s)
    return s


def _verify_closed(s: Subalgebra) -> None:
    for i in range(s.dim):
        for j in range(i + 1, s.dim):
            w = s.table.bracket(s.rows[i], s.rows[j])
            if w and not s.contains(w):
                raise IdentifyError(
                    f"span is not bracket-closed: [row {i}, row {j}] escapes"
                )


def fixed_subalgebra(table: StructureTable, autos: Sequence[Automorphism]) -> Subalgebra:
    """Joint fixed-point subalgebra of certified automorphisms.

    The empty list yields the whole algebra.  Membership of every pairwise
    bracket in the span is verified, not assumed.
    """
    dim = table.dim
    for a in autos:
        if not isinstance(a, Automorphism):
            raise IdentifyError("uncertified automorphism rejected")
        if a.table is not table:
            raise IdentifyError("automorphism acts on a different algebra")
    if not autos:
        eye = [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
        return subalgebra_from_vectors(table, eye, check_closed=False)
    stacked: List[List] = []
    for a in autos:
        rows = [[0] * dim for _ in range(dim)]
        for j, col in enumerate(a.cols):
            for r, v in col.items():
                rows[r][j] = v
        for r in range(dim):
            rows[r][r] -= 1
        stacked.extend(rows)
    vecs = kernel(QMatrix(stacked))
    return subalgebra_from_vectors(table, vecs)


def center_of(s: Subalgebra) -> Subalgebra:
    """Elements of s commuting with all of s.

    Refines the candidate space one constraint at a time: intersecting with
    ker(ad b_j |_candidates) usually collapses the space after a few basis
    elements, so the linear systems stay small.
    """
    if s.dim == 0:
        return s
    cur: List[dict] = [dict(r) for r in s.rows]
    for j in range(s.dim):
        if not cur:
            break
        target = s.rows[j]
        images = [s.table.bracket(v, target) for v in cur]
        coords = sorted(set().union(*[set(im) for im in images]))
        if not coords:
            continue
        mat = QMatrix([[im.get(c, 0) for im in images] for c in coords])
        combos = kernel(mat)
        nxt: List[dict] = []
        for combo in combos:
            acc: dict = {}
            for t, x in enumerate(combo):
                if x:
                    for coord, v in cur[t].items():
                        nv = acc.get(coord, 0) + x * v
                        if nv:
                            acc[coord] = nv
                        else:
                            acc.pop(coord, None)
            nxt.append(acc)
        cur = nxt
    vectors = []
    for v in cur:
        vectors.append([v.get(j, 0) for j in range(s.table.dim)])
    return subalgebra_from_vectors(s.table, vectors, check_closed=False)


# ---------------------------------------------------------------------------
# Reductive types
# ---------------------------------------------------------------------------

_SIMPLE_DIM = {"A": lambda n: n * (n + 2), "B": lambda n: n * (2 * n + 1),
               "C": lambda n: n * (2 * n + 1), "D": lambda n: n * (2 * n - 1),
               "E": {6: 78, 7: 133, 8: 248}, "F": {4: 52}, "G": {2: 14}}

_SIMPLE_ROOT_COUNT = {"A": lambda n: n * (n + 1), "B": lambda n: 2 * n * n,
                      "C": lambda n: 2 * n * n, "D": lambda n: 2 * n * (n - 1),
                      "E": {6: 72, 7: 126, 8: 240}, "F": {4: 48}, "G": {2: 12}}


def simple_dim(letter: str, rank: int) -> int:
    v = _SIMPLE_DIM[letter]
    return v[rank] if isinstance(v, dict) else v(rank)


def simple_root_count(letter: str, rank: int) -> int:
    v = _SIMPLE_ROOT_COUNT[letter]
    return v[rank] if isinstance(v, dict) else v(rank)


@dataclass(frozen=True)
class ReductiveType:
    """Multiset of simple summands plus an abelian center dimension."""

    summands: Tuple[Tuple[str, int], ...]
    center_dim: int

    @staticmethod
    def make(summands: Sequence[Tuple[str, int]], center_dim: int) -> "ReductiveType":
        key = lambda s: (-simple_dim(*s), s[0], -s[1])
        return ReductiveType(tuple(sorted(summands, key=key)), center_dim)

    def dim(self) -> int:
        return sum(simple_dim(l, n) for l, n in self.summands) + self.center_dim

    def rank(self) -> int:
        return sum(n for _, n in self.summands) + self.center_dim

    def __str__(self) -> str:
        parts = [f"{l}{n}" for l, n in self.summands]
        if self.center_dim == 1:
            parts.append("u(1)")
        elif self.center_dim > 1:
            parts.append(f"{self.center_dim}u(1)")
        return "+".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Cartan matrix matching
# ---------------------------------------------------------------------------

def _catalog_for_rank(n: int) -> List[Tuple[str, int]]:
    out: List[Tuple[str, int]] = [("A", n)]
    if n >= 2:
        out.append(("B", n))
    if n >= 3:
        out.append(("C", n))
    if n >= 4:
        out.append(("D", n))
    if n in (6, 7, 8):
        out.append(("E", n))
    if n == 4:
        out.append(("F", 4))
    if n == 2:
        out.append(("G", 2))
    return out


def match_cartan(A: Sequence[Sequence[int]]) -> Tuple[str, int]:
    """Simple type label of a Cartan matrix, up to simultaneous permutation.

    B2 is reported for the rank-2 double-bond matrix (C2 is the same type)
    and A3 for the D3 presentation; first match in catalog order A..G wins.
    """
    from .rootsys import cartan_matrix

    validate_cartan(A)
    n = len(A)
    if n > 8:
        raise IdentifyError(f"rank {n} exceeds the matching catalog (rank <= 8)")
    sig = sorted(tuple(sorted(row)) for row in A)
    for letter, r in _catalog_for_rank(n):
        C = cartan_matrix(f"{letter}{r}")
        if sorted(tuple(sorted(row)) for row in C) != sig:
            continue
        for p in permutations(range(n)):
            if all(A[p[i]][p[j]] == C[i][j] for i in range(n) for j in range(n)):
                return (letter, r)
    raise IdentifyError(f"no finite-type match for Cartan matrix {A}")


# ---------------------------------------------------------------------------
# Weight decomposition and type identification
# ---------------------------------------------------------------------------

def _intersect_with_coords(s: Subalgebra, coordset: frozenset) -> List[dict]:
    """Basis of {v in s : support(v) within coordset}, via the RREF pivots.

    In RREF every pivot column is zero in all other rows, so any member
    supported inside coordset is a combination of rows whose pivot lies in
    coordset; a small kernel cleans up tails that stick out.
    """
    cand = [
        (r, row)
        for r, row in zip(s.pivots, s.rows)
        if r in coordset
    ]
    if not cand:
        return []
    outside: Dict[int, List] = {}
    for idx, (_, row) in enumerate(cand):
        for j, x in row.items():
            if j not in coordset:
                outside.setdefault(j, [0] * len(cand))[idx] = x
    if not outside:
        return [dict(row) for _, row in cand]
    combos = kernel(QMatrix([outside[j] for j in sorted(outside)]))
    out = []
    for combo in combos:
        acc: dict = {}
        for idx, c in enumerate(combo):
            if c:
                for j, x in cand[idx][1].items():
                    nv = acc.get(j, 0) + c * x
                    if nv:
                        acc[j] = nv
                    else:
                        acc.pop(j, None)
        out.append(acc)
    return out


def _cartan_part(s: Subalgebra) -> List[dict]:
    return _intersect_with_coords(s, frozenset(range(s.table.rank)))


def _centralizer_dim_of_toral(s: Subalgebra, toral: List[dict]) -> int:
    k = s.dim
    rows: Dict[Tuple[int, int], List] = {}
    for tix, t in enumerate(toral):
        for i in range(k):
            w = s.table.bracket(t, s.rows[i])
            for coord, v in w.items():
                rows.setdefault((tix, coord), [0] * k)[i] = v
    if not rows:
        return k
    return k - mat_rank(QMatrix([rows[key] for key in sorted(rows)]))


def identify_type(s: Subalgebra) -> ReductiveType:
    """Reductive isomorphism type (simple summands + center dimension).

    Requires the ambient Cartan's fixed part to be maximal toral in s; this is
    checked, and failure is an error rather than a silent regular-element
    search.
    """
    table = s.table
    rs = table.rs
    rank_amb = table.rank
    toral = _cartan_part(s)
    t_dim = len(toral)
    if s.dim == 0:
        return ReductiveType.make([], 0)
    cdim = _centralizer_dim_of_toral(s, toral)
    if cdim != t_dim:
        raise IdentifyError(
            f"Cartan part (dim {t_dim}) is not maximal toral: centralizer has dim {cdim}; "
            "a regular-element extension would be needed"
        )

    # weights: restrictions of ambient roots to the toral part
    def evaluate(coords: Coords, h: dict) -> Fraction:
        return sum(
            (Fraction(v) * rs.pairing(coords, i) for i, v in h.items()),
            Fraction(0),
        )

    classes: Dict[tuple, List[int]] = {}
    for ridx, root in enumerate(rs.roots):
        mu = tuple(evaluate(root.coords, h) for h in toral)
        if any(mu):
            classes.setdefault(mu, []).append(ridx)

    weight_vecs: Dict[tuple, dict] = {}
    weight_rep: Dict[tuple, Coords] = {}
    total = t_dim
    for mu, ridxs in sorted(classes.items()):
        coordset = frozenset(rank_amb + r for r in ridxs)
        part = _intersect_with_coords(s, coordset)
        if len(part) > 1:
            raise IdentifyError(f"weight multiplicity {len(part)} > 1 at {mu}")
        if part:
            weight_vecs[mu] = part[0]
            weight_rep[mu] = rs.roots[ridxs[0]].coords
            total += 1
    if total != s.dim:
        raise IdentifyError(
            f"weight decomposition misses {s.dim - total} dimensions"
        )

    weights = sorted(weight_vecs)
    for mu in weights:
        if tuple(-x for x in mu) not in weight_vecs:
            raise IdentifyError(f"weight set is not negation-stable at {mu}")

    if not weights:
        return ReductiveType.make([], t_dim)

    # integer grid + provably generic positivity functional
    den = 1
    for mu in weights:
        for x in mu:
            d = Fraction(x).denominator
            den = den // gcd(den, d) * d
    grid = {mu: tuple(int(x * den) for x in mu) for mu in weights}
    M = 1 + max(abs(e) for g in grid.values() for e in g)
    fval = {mu: sum(e * M**i for i, e in enumerate(grid[mu])) for mu in weights}
    if any(v == 0 for v in fval.values()):
        raise IdentifyError("positivity functional vanished on a weight")
    positive = [mu for mu in weights if fval[mu] > 0]
    posset = set(positive)

    def decomposable(mu):
        for nu in positive:
            if nu != mu:
                diff = tuple(a - b for a, b in zip(mu, nu))
                if diff in posset:
                    return True
        return False

    simple = sorted((mu for mu in positive if not decomposable(mu)), key=lambda m: grid[m])

    # Cartan integers from coroot brackets
    coroot_elts: List[dict] = []
    for mu in simple:
        e = weight_vecs[mu]
        f = weight_vecs[tuple(-x for x in mu)]
        h = table.bracket(e, f)
        if not h or any(j >= rank_amb for j in h):
            raise IdentifyError(f"coroot bracket escapes the Cartan at weight {mu}")
        coroot_elts.append(h)
    C: List[List[int]] = []
    for a, mu in enumerate(simple):
        row = []
        for b, nu in enumerate(simple):
            h = coroot_elts[b]
            denom = evaluate(weight_rep[nu], h)
            if denom == 0:
                raise IdentifyError(f"degenerate coroot at weight {nu}")
            val = 2 * evaluate(weight_rep[mu], h) / denom
            if val.denominator != 1:
                raise IdentifyError(f"non-integral Cartan pairing at ({mu}, {nu})")
            row.append(int(val))
        C.append(row)

    # split into connected components and match each
    n = len(simple)
    comp_of = [-1] * n
    comps: List[List[int]] = []
    for start in range(n):
        if comp_of[start] >= 0:
            continue
        comp = [start]
        comp_of[start] = len(comps)
        stack = [start]
        while stack:
            x = stack.pop()
            for y in range(n):
                if comp_of[y] < 0 and C[x][y] != 0:
                    comp_of[y] = len(comps)
                    comp.append(y)
                    stack.append(y)
        comps.append(sorted(comp))
    summands = []
    for comp in comps:
        sub = [[C[i][j] for j in comp] for i in comp]
        summands.append(match_cartan(sub))

    # accounting invariants
    if mat_rank(QMatrix([list(grid[mu]) for mu in weights])) != n:
        raise IdentifyError("weight lattice rank disagrees with the simple system")
    center_dim = t_dim - n
    out = ReductiveType.make(summands, center_dim)
    if out.dim() != s.dim:
        raise IdentifyError(
            f"dimension accounting failed: {out} has dim {out.dim()}, subalgebra has {s.dim}"
        )
    if sum(simple_root_count(l, r) for l, r in out.summands) != len(weights):
        raise IdentifyError("root-count accounting failed")
    return out
