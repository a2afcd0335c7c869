"""Root systems from Cartan matrices, Chevalley bases, Killing forms.

Roots are built by height induction over root strings, so the closed root set
comes out of the Cartan matrix alone.  The structure constants N(a,b) follow
the extraspecial-pair construction: positive roots get a fixed total order
(height, then lexicographic coordinates), the extraspecial pair of each
non-simple positive root gets the positive sign, and every other constant is
forced by antisymmetry, the negation rule N(-a,-b) = -N(a,b), and the standard
three- and four-root relations.  Magnitudes satisfy |N(a,b)| = p+1 where p is
the largest k with b - k*a a root; this is asserted for every pair.

Conventions, fixed once and used everywhere:
  - cartan[i][j] = <alpha_i, alpha_j^vee>  (column j carries the coroot)
  - pairing(alpha, j) = <alpha, alpha_j^vee> = sum_i m_i cartan[i][j]
  - basis order of a structure table: h_1..h_l, then x_a for positive a in
    canonical order, then x_{-a} mirrored.  This order is part of the public
    contract; automorphism matrices are comparable across runs because of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactq import QMatrix, as_num

Coords = Tuple[int, ...]


class CartanMatrixError(ValueError):
    """Raised for matrices that are not valid finite-type Cartan matrices."""


# ---------------------------------------------------------------------------
# Cartan matrix catalog
# ---------------------------------------------------------------------------

def cartan_matrix(label: str) -> Tuple[Tuple[int, ...], ...]:
    """Standard Cartan matrix for a simple type label like 'A3', 'E6', 'G2'."""
    letter, rank = label[0].upper(), int(label[1:])
    A = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]

    def edge(i, j, aij=-1, aji=-1):
        A[i][j] = aij
        A[j][i] = aji

    if letter == "A":
        for i in range(rank - 1):
            edge(i, i + 1)
    elif letter == "B":
        if rank < 2:
            raise CartanMatrixError("B requires rank >= 2")
        for i in range(rank - 2):
            edge(i, i + 1)
        edge(rank - 2, rank - 1, -2, -1)  # last simple root short
    elif letter == "C":
        if rank < 2:
            raise CartanMatrixError("C requires rank >= 2")
        for i in range(rank - 2):
            edge(i, i + 1)
        edge(rank - 2, rank - 1, -1, -2)  # last simple root long
    elif letter == "D":
        if rank < 3:
            raise CartanMatrixError("D requires rank >= 3")
        for i in range(rank - 2):
            edge(i, i + 1)
        edge(rank - 3, rank - 1)
    elif letter == "E":
        if rank not in (6, 7, 8):
            raise CartanMatrixError("E requires rank 6, 7 or 8")
        # Bourbaki numbering: node 2 hangs off node 4 of the chain 1-3-4-5-...
        chain = [0, 2, 3] + list(range(4, rank))
        for a, b in zip(chain, chain[1:]):
            edge(a, b)
        edge(1, 3)
    elif letter == "F":
        if rank != 4:
            raise CartanMatrixError("F requires rank 4")
        edge(0, 1)
        edge(1, 2, -2, -1)
        edge(2, 3)
    elif letter == "G":
        if rank != 2:
            raise CartanMatrixError("G requires rank 2")
        edge(0, 1, -1, -3)
    else:
        raise CartanMatrixError(f"unknown type letter {letter!r}")
    return tuple(tuple(r) for r in A)


def _symmetrizer(A: Sequence[Sequence[int]]) -> Tuple[Fraction, ...]:
    """Lengths L_i = (a_i, a_i)/2 with A[i][j] * L_j = A[j][i] * L_i, min 1."""
    n = len(A)
    L: List[Optional[Fraction]] = [None] * n
    for start in range(n):
        if L[start] is not None:
            continue
        L[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i == j or A[i][j] == 0:
                    continue
                want = L[i] * Fraction(A[j][i], A[i][j])
                if L[j] is None:
                    L[j] = want
                    stack.append(j)
                elif L[j] != want:
                    raise CartanMatrixError("matrix is not symmetrizable")
    lo = min(L)  # type: ignore[type-var]
    return tuple(x / lo for x in L)  # type: ignore[operator]


def validate_cartan(A: Sequence[Sequence[int]]) -> Tuple[Fraction, ...]:
    """Check finite-type axioms; return the symmetrizer lengths.

    Rejects with a diagnostic naming the failed axiom: integrality, diagonal,
    sign pattern, zero symmetry, symmetrizability, or positive definiteness.
    """
    n = len(A)
    for i, row in enumerate(A):
        if len(row) != n:
            raise CartanMatrixError("matrix is not square")
        for j, x in enumerate(row):
            if not isinstance(x, int):
                raise CartanMatrixError(f"entry ({i},{j}) is not an integer")
            if i == j and x != 2:
                raise CartanMatrixError(f"diagonal entry ({i},{i}) = {x} != 2")
            if i != j and x > 0:
                raise CartanMatrixError(f"off-diagonal entry ({i},{j}) = {x} > 0")
            if i != j and (x == 0) != (A[j][i] == 0):
                raise CartanMatrixError(f"zero pattern not symmetric at ({i},{j})")
    L = _symmetrizer(A)
    # positive definiteness of the symmetrization S[i][j] = A[i][j] * L[j]
    S = [[Fraction(A[i][j]) * L[j] for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        if _det([row[:k] for row in S[:k]]) <= 0:
            raise CartanMatrixError(
                f"symmetrized matrix not positive definite (order-{k} minor <= 0); "
                "not a finite-type Cartan matrix"
            )
    return L


def _det(M: List[List[Fraction]]) -> Fraction:
    n = len(M)
    M = [row[:] for row in M]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return det


# ---------------------------------------------------------------------------
# Root systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Root:
    coords: Coords
    height: int


class RootSystem:
    """The closed root set of a finite-type Cartan matrix.

    ``roots`` lists positives in (height, lex) order, then their negatives in
    the mirrored order; ``pairing`` gives alpha(H_beta) for the simple coroots.
    """

    def __init__(self, cartan: Sequence[Sequence[int]]):
        lengths = validate_cartan(cartan)
        self.cartan: Tuple[Tuple[int, ...], ...] = tuple(tuple(r) for r in cartan)
        self.rank = len(self.cartan)
        self.lengths = lengths
        pos = self._close_positive_roots()
        pos.sort(key=lambda c: (sum(c), c))
        roots: List[Root] = [Root(c, sum(c)) for c in pos]
        roots += [Root(tuple(-x for x in c), -sum(c)) for c in pos]
        self.roots: Tuple[Root, ...] = tuple(roots)
        self.npos = len(pos)
        self._index: Dict[Coords, int] = {r.coords: i for i, r in enumerate(self.roots)}

    def _close_positive_roots(self) -> List[Coords]:
        rank = self.rank
        simple = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
        found = set(simple)
        frontier = list(simple)
        while frontier:
            new: List[Coords] = []
            for a in frontier:
                for i, e in enumerate(simple):
                    # p = how far the string a, a-e, a-2e, ... continues down
                    p = 0
                    down = tuple(x - y for x, y in zip(a, e))
                    while down in found or tuple(-x for x in down) in found:
                        p += 1
                        down = tuple(x - y for x, y in zip(down, e))
                    if p - self.pairing(a, i) > 0:
                        up = tuple(x + y for x, y in zip(a, e))
                        if up not in found:
                            found.add(up)
                            new.append(up)
            frontier = new
            if len(found) > 10000:
                raise CartanMatrixError("root set does not close; not finite type")
        return sorted(found)

    # -- exact pairings ----------------------------------------------------

    def pairing(self, coords: Coords, i: int) -> int:
        """alpha(H_{alpha_i}) = <alpha, alpha_i^vee>."""
        return sum(m * self.cartan[j][i] for j, m in enumerate(coords) if m)

    def inner(self, a: Coords, b: Coords) -> Fraction:
        """(a, b) via the symmetrized Cartan form."""
        s = Fraction(0)
        for i, m in enumerate(a):
            if not m:
                continue
            for j, n in enumerate(b):
                if n and self.cartan[i][j]:
                    s += m * n * self.cartan[i][j] * self.lengths[j]
        return s

    def length2(self, a: Coords) -> Fraction:
        return self.inner(a, a)

    def coroot(self, coords: Coords) -> Tuple[int, ...]:
        """H_alpha as an integer combination of the simple coroots."""
        La = self.length2(coords) / 2
        out = []
        for i, m in enumerate(coords):
            c = m * self.lengths[i] / La
            if c.denominator != 1:
                raise ArithmeticError(f"non-integral coroot coefficient for {coords}")
            out.append(int(c))
        return tuple(out)

    def is_root(self, coords: Coords) -> bool:
        return coords in self._index

    def index(self, coords: Coords) -> int:
        return self._index[coords]

    def positive_roots(self) -> Tuple[Root, ...]:
        return self.roots[: self.npos]

    def string_down(self, a: Coords, b: Coords) -> int:
        """p = max k such that b - k*a is a root."""
        k = 0
        cur = tuple(x - y for x, y in zip(b, a))
        while cur in self._index:
            k += 1
            cur = tuple(x - y for x, y in zip(cur, a))
        return k


def build_root_system(cartan: Sequence[Sequence[int]]) -> RootSystem:
    """Construct the full root system; rejects non-finite-type input."""
    return RootSystem(cartan)


# ---------------------------------------------------------------------------
# Chevalley structure table
# ---------------------------------------------------------------------------

class StructureTable:
    """Sparse exact bracket table of a Chevalley basis.

    Basis: indices 0..rank-1 are the simple coroots h_i, index rank+k is the
    root vector of roots[k].  Brackets are stored for i < j only; the bracket
    of a pair (j, i) is the stored value negated, which makes the operational
    bracket antisymmetric by construction.
    """

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.rank = rs.rank
        self.npos = rs.npos
        self.dim = rs.rank + len(rs.roots)
        self._n: Dict[Tuple[Coords, Coords], int] = {}
        self._fill_structure_constants()
        self._bra: Dict[Tuple[int, int], Tuple[Tuple[int, int], ...]] = {}
        self._fill_brackets()

    # -- structure constants ------------------------------------------------

    def _fill_structure_constants(self) -> None:
        rs = self.rs
        pos = [r.coords for r in rs.positive_roots()]
        order = {c: i for i, c in enumerate(pos)}
        posset = set(pos)
        special: Dict[Tuple[Coords, Coords], int] = {}

        def neg(c: Coords) -> Coords:
            return tuple(-x for x in c)

        def add(a: Coords, b: Coords) -> Coords:
            return tuple(x + y for x, y in zip(a, b))

        def sub(a: Coords, b: Coords) -> Coords:
            return tuple(x - y for x, y in zip(a, b))

        def n_pos(a: Coords, b: Coords) -> int:
            if order[a] < order[b]:
                return special[(a, b)]
            return -special[(b, a)]

        memo: Dict[Tuple[Coords, Coords], int] = {}

        def n(a: Coords, b: Coords) -> int:
            key = (a, b)
            got = memo.get(key)
            if got is not None:
                return got
            ap, bp = a in posset, b in posset
            if ap and bp:
                val = n_pos(a, b)
            elif not ap and not bp:
                val = -n(neg(a), neg(b))
            elif not ap:
                val = -n(b, a)
            else:
                g = add(a, b)
                if g in posset:
                    v = -Fraction(rs.length2(g), rs.length2(a)) * n(neg(b), g)
                else:
                    v = Fraction(rs.length2(g), rs.length2(b)) * n(neg(g), a)
                if v.denominator != 1:
                    raise ArithmeticError(f"non-integral constant for {a}, {b}")
                val = int(v)
            memo[key] = val
            return val

        # fill special pairs, height-major (canonical positive order)
        for g in pos:
            if sum(g) < 2:
                continue
            pairs = []
            for a in pos:
                b = sub(g, a)
                if b in posset and order[a] < order[b]:
                    pairs.append((a, b))
            pairs.sort(key=lambda ab: order[ab[0]])
            ea, eb = pairs[0]  # extraspecial: minimal first member
            special[(ea, eb)] = rs.string_down(ea, eb) + 1
            for a, b in pairs[1:]:
                t = Fraction(0)
                d1 = sub(eb, a)
                if d1 in posset or neg(d1) in posset:
                    t += Fraction(n(eb, neg(a)) * n(ea, neg(b)), rs.length2(d1))
                d2 = sub(ea, a)
                if d2 in posset or neg(d2) in posset:
                    t += Fraction(n(neg(a), ea) * n(eb, neg(b)), rs.length2(d2))
                v = rs.length2(g) / special[(ea, eb)] * t
                if v.denominator != 1:
                    raise ArithmeticError(f"non-integral constant at {a} + {b} = {g}")
                special[(a, b)] = int(v)

        # tabulate N for every ordered pair of roots whose sum is a root,
        # asserting the string-length magnitude |N| = p + 1 throughout
        allroots = [r.coords for r in rs.roots]
        rootset = set(allroots)
        for a in allroots:
            for b in allroots:
                s = add(a, b)
                if s in rootset:
                    val = n(a, b)
                    p = rs.string_down(a, b)
                    if abs(val) != p + 1:
                        raise ArithmeticError(
                            f"|N{a},{b}| = {abs(val)} != p+1 = {p + 1}"
                        )
                    self._n[(a, b)] = val

    def n_constant(self, a: Coords, b: Coords) -> int:
        """N(a,b) for roots with a+b a root; 0 if a+b is not a root."""
        return self._n.get((a, b), 0)

    # -- bracket table -------------------------------------------------------

    def _fill_brackets(self) -> None:
        rs = self.rs
        rank = self.rank
        bra = self._bra
        # [h_i, x_a] = pairing(a, i) x_a
        for k, r in enumerate(rs.roots):
            xk = rank + k
            for i in range(rank):
                c = rs.pairing(r.coords, i)
                if c:
                    bra[(i, xk)] = ((xk, c),)
        # [x_a, x_b]
        for k1, r1 in enumerate(rs.roots):
            for k2, r2 in enumerate(rs.roots):
                i, j = rank + k1, rank + k2
                if i >= j:
                    continue
                s = tuple(x + y for x, y in zip(r1.coords, r2.coords))
                if not any(s):
                    co = rs.coroot(r1.coords)
                    bra[(i, j)] = tuple((t, c) for t, c in enumerate(co) if c)
                elif rs.is_root(s):
                    bra[(i, j)] = ((rank + rs.index(s), self._n[(r1.coords, r2.coords)]),)

    def pair_bracket(self, i: int, j: int) -> Tuple[Tuple[int, int], ...]:
        """[e_i, e_j] as a sparse coefficient tuple."""
        if i == j:
            return ()
        if i < j:
            return self._bra.get((i, j), ())
        return tuple((k, -c) for k, c in self._bra.get((j, i), ()))

    def bracket(self, u: dict, v: dict) -> dict:
        """Bracket of two sparse vectors {basis index: coefficient}."""
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                if i == j:
                    continue
                ab = a * b
                for k, c in self.pair_bracket(i, j):
                    nv = out.get(k, 0) + ab * c
                    if nv:
                        out[k] = nv
                    else:
                        out.pop(k, None)
        return out

    def basis_label(self, i: int) -> str:
        if i < self.rank:
            return f"h{i + 1}"
        r = self.rs.roots[i - self.rank]
        sign = "+" if r.height > 0 else "-"
        coords = ",".join(str(abs(c)) for c in r.coords)
        return f"x{sign}[{coords}]"


def chevalley_table(rs: RootSystem) -> StructureTable:
    """Integer Chevalley structure table with the extraspecial sign convention."""
    return StructureTable(rs)


# ---------------------------------------------------------------------------
# Killing form and structural scans
# ---------------------------------------------------------------------------

def ad_columns(dim: int, pair_bracket) -> List[Dict[int, Dict[int, int]]]:
    """For each basis index b, the sparse columns of ad(e_b)."""
    ads = []
    for b in range(dim):
        cols: Dict[int, Dict[int, int]] = {}
        for c in range(dim):
            w = pair_bracket(b, c)
            if w:
                cols[c] = dict(w)
        ads.append(cols)
    return ads


def killing_from_brackets(dim: int, pair_bracket) -> QMatrix:
    """B(e_i, e_j) = trace(ad e_i o ad e_j), computed from the trace directly."""
    ads = ad_columns(dim, pair_bracket)
    B = [[0] * dim for _ in range(dim)]
    for i in range(dim):
        adi = ads[i]
        for j in range(i, dim):
            s = 0
            for c, colj in ads[j].items():
                for m, v in colj.items():
                    coli = adi.get(m)
                    if coli:
                        w = coli.get(c)
                        if w:
                            s += v * w
            B[i][j] = s
            B[j][i] = s
    return QMatrix(B)


def killing_form(t: StructureTable) -> QMatrix:
    return killing_from_brackets(t.dim, t.pair_bracket)


def verify_antisymmetry(t) -> bool:
    """No diagonal brackets; [i,j] = -[j,i] for every stored pair."""
    for i in range(t.dim):
        if t.pair_bracket(i, i):
            return False
        for j in range(i + 1, t.dim):
            fwd = dict(t.pair_bracket(i, j))
            bwd = dict(t.pair_bracket(j, i))
            if fwd != {k: -c for k, c in bwd.items()}:
                return False
    return True


def jacobi_defect(t) -> Optional[Tuple[int, int, int]]:
    """First basis triple violating Jacobi, or None.

    Scans unordered triples i < j < k.  Together with the antisymmetry of the
    operational bracket and bilinearity this covers all ordered triples:
    permuting a triple only permutes/negates the three summands, and a triple
    with a repeated element reduces to [[u,v],u] + [[v,u],u] = 0.
    """
    dim = t.dim
    pb = t.pair_bracket
    for i in range(dim):
        for j in range(i + 1, dim):
            uv = pb(i, j)
            for k in range(j + 1, dim):
                acc: Dict[int, int] = {}
                for m, c in uv:  # [[i,j],k]
                    for r, d in pb(m, k):
                        acc[r] = acc.get(r, 0) + c * d
                for m, c in pb(j, k):  # [[j,k],i]
                    for r, d in pb(m, i):
                        acc[r] = acc.get(r, 0) + c * d
                for m, c in pb(k, i):  # [[k,i],j]
                    for r, d in pb(m, j):
                        acc[r] = acc.get(r, 0) + c * d
                if any(acc.values()):
                    return (i, j, k)
    return None


def verify_jacobi(t) -> bool:
    return jacobi_defect(t) is None


def verify_ad_invariance(t, killing: QMatrix) -> bool:
    """B([u,v],w) + B(v,[u,w]) = 0 on all basis triples."""
    dim = t.dim
    K = killing.entries
    pb = t.pair_bracket
    for u in range(dim):
        for v in range(dim):
            uv = pb(u, v)
            for w in range(dim):
                s = 0
                for m, c in uv:
                    s += c * K[m][w]
                for m, c in pb(u, w):
                    s += c * K[v][m]
                if s:
                    return False
    return True


# ---------------------------------------------------------------------------
# Serialization (golden-file schema)
# ---------------------------------------------------------------------------
# Schema: every number is a decimal string ("-3", "1/2") so files stay exact
# and never pass through floating point.
# RootSystem: {"cartan": [["2", ...], ...], "rank": "n", "npos": "n",
#              "roots": [{"coords": ["...", ...], "height": "h"}, ...]}
# StructureTable: {"rank": "n", "dim": "n", "roots": [["...", ...], ...],
#                  "brackets": [{"i": "i", "j": "j",
#                                "terms": [["k", "c"], ...]}, ...]}
# Basis indices: 0..rank-1 are the simple coroots, rank+k is the root vector
# of roots[k].  Brackets are listed for i < j in index order; absent pairs
# bracket to zero; [j, i] is the negation of [i, j].

def _numstr(x) -> str:
    return str(x)


def root_system_to_jsonable(rs: RootSystem) -> dict:
    return {
        "cartan": [[_numstr(x) for x in row] for row in rs.cartan],
        "rank": _numstr(rs.rank),
        "npos": _numstr(rs.npos),
        "roots": [
            {"coords": [_numstr(c) for c in r.coords], "height": _numstr(r.height)}
            for r in rs.roots
        ],
    }


def structure_table_to_jsonable(t: StructureTable) -> dict:
    brackets = []
    for (i, j) in sorted(t._bra):
        terms = [[_numstr(k), _numstr(c)] for k, c in t._bra[(i, j)]]
        brackets.append({"i": _numstr(i), "j": _numstr(j), "terms": terms})
    return {
        "rank": _numstr(t.rank),
        "dim": _numstr(t.dim),
        "roots": [[_numstr(c) for c in r.coords] for r in t.rs.roots],
        "brackets": brackets,
    }
