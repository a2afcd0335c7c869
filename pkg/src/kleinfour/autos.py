"""Automorphisms of a Chevalley-basis Lie algebra, with mandatory certificates.

Every constructor funnels through make_automorphism, which verifies the
homomorphism property [Au, Av] = A[u, v] on all basis pairs and computes the
order before the object exists.  Nothing downstream ever touches an
uncertified matrix; sign mistakes in the diagram-automorphism extension are
the dominant bug risk and this is the firewall.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exactq import QMatrix, as_num
from .rootsys import StructureTable

Cols = Tuple[Dict[int, object], ...]

_ORDER_CAP = 60


class CertificationError(Exception):
    """An automorphism candidate failed certification."""


class Automorphism:
    """Certified algebra automorphism in the canonical basis.

    ``cols[j]`` is the sparse image of basis vector j.  Instances are created
    by make_automorphism only and are immutable afterwards.
    """

    __slots__ = ("table", "cols", "order", "descriptor", "_matrix")

    def __init__(self, table: StructureTable, cols: Cols, order: int, descriptor: str):
        self.table = table
        self.cols = cols
        self.order = order
        self.descriptor = descriptor
        self._matrix: Optional[QMatrix] = None

    @property
    def certified(self) -> bool:
        return True

    def apply(self, vec: dict) -> dict:
        out: dict = {}
        for j, v in vec.items():
            for r, w in self.cols[j].items():
                nv = out.get(r, 0) + v * w
                if nv:
                    out[r] = nv
                else:
                    out.pop(r, None)
        return out

    def matrix(self) -> QMatrix:
        if self._matrix is None:
            n = self.table.dim
            rows = [[0] * n for _ in range(n)]
            for j, col in enumerate(self.cols):
                for r, v in col.items():
                    rows[r][j] = v
            self._matrix = QMatrix(rows)
        return self._matrix

    def trace(self):
        return as_num(sum(col.get(j, 0) for j, col in enumerate(self.cols)))

    def is_identity(self) -> bool:
        return self.order == 1

    def is_involution(self) -> bool:
        return self.order == 2

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Automorphism)
            and self.table is other.table
            and self.cols == other.cols
        )

    def __hash__(self):
        return hash(tuple(tuple(sorted(c.items())) for c in self.cols))

    def __repr__(self) -> str:
        return f"Automorphism({self.descriptor!r}, order={self.order})"


def _clean(vec: dict) -> dict:
    return {k: as_num(v) for k, v in vec.items() if v}


def compose_cols(a: Cols, b: Cols) -> Cols:
    """Columns of a∘b (apply b first)."""
    out = []
    for colb in b:
        acc: dict = {}
        for k, v in colb.items():
            for r, w in a[k].items():
                nv = acc.get(r, 0) + v * w
                if nv:
                    acc[r] = nv
                else:
                    acc.pop(r, None)
        out.append(_clean(acc))
    return tuple(out)


def _is_identity_cols(cols: Cols) -> bool:
    return all(col == {j: 1} for j, col in enumerate(cols))


def make_automorphism(table: StructureTable, cols: Sequence[dict], descriptor: str) -> Automorphism:
    """Certify and wrap a candidate matrix given by sparse columns.

    Checks: every bracket of basis pairs is intertwined exactly, and some
    power of the matrix is the identity (which also certifies invertibility).
    """
    dim = table.dim
    if len(cols) != dim:
        raise CertificationError(f"{descriptor}: expected {dim} columns")
    cc: Cols = tuple(_clean(dict(c)) for c in cols)
    pb = table.pair_bracket
    # pairs (i, j) with i < j cover everything: the operational bracket is
    # antisymmetric by construction and diagonal pairs bracket to zero
    for i in range(dim):
        ci = cc[i]
        for j in range(i + 1, dim):
            img: dict = {}
            for k, c in pb(i, j):
                for r, v in cc[k].items():
                    nv = img.get(r, 0) + c * v
                    if nv:
                        img[r] = nv
                    else:
                        img.pop(r, None)
            lhs = table.bracket(ci, cc[j])
            if _clean(lhs) != _clean(img):
                raise CertificationError(
                    f"{descriptor}: homomorphism fails at basis pair "
                    f"({table.basis_label(i)}, {table.basis_label(j)})"
                )
    power = cc
    order = None
    for n in range(1, _ORDER_CAP + 1):
        if _is_identity_cols(power):
            order = n
            break
        power = compose_cols(cc, power)
    if order is None:
        raise CertificationError(f"{descriptor}: order exceeds cap {_ORDER_CAP}")
    return Automorphism(table, cc, order, descriptor)


def identity_automorphism(table: StructureTable) -> Automorphism:
    return make_automorphism(table, [{j: 1} for j in range(table.dim)], "identity")


# ---------------------------------------------------------------------------
# Torus involutions and diagram automorphisms
# ---------------------------------------------------------------------------

def torus_involution(table: StructureTable, c: Sequence[int]) -> Automorphism:
    """exp(pi*sqrt(-1) ad H_c) for H_c = sum c_i H_{alpha_i}, c taken mod 2.

    Acts as identity on the Cartan and by (-1)^{alpha(H_c)} on each root
    vector; order 1 or 2.
    """
    rs = table.rs
    if len(c) != table.rank:
        raise ValueError(f"coefficient vector must have length {table.rank}")
    bits = tuple(x % 2 for x in c)
    cols: List[dict] = [{i: 1} for i in range(table.rank)]
    for k, r in enumerate(rs.roots):
        s = sum(bits[i] * rs.pairing(r.coords, i) for i in range(table.rank))
        cols.append({table.rank + k: -1 if s % 2 else 1})
    desc = "torus:" + ",".join(str(b) for b in bits)
    return make_automorphism(table, cols, desc)


def diagram_symmetries(cartan: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
    """All permutations p of simple roots with A[p(i)][p(j)] = A[i][j]."""
    from itertools import permutations

    n = len(cartan)
    out = []
    for p in permutations(range(n)):
        if all(cartan[p[i]][p[j]] == cartan[i][j] for i in range(n) for j in range(n)):
            out.append(p)
    return out


def diagram_automorphism(table: StructureTable, perm: Sequence[int]) -> Automorphism:
    """Automorphism induced by a Dynkin-diagram symmetry.

    On generators: h_i -> h_{perm(i)}, x_{+-alpha_i} -> x_{+-alpha_{perm(i)}}.
    Root vectors of non-simple roots are extended recursively through
    x_{a+b} = [x_a, x_b] / N(a, b), using the extraspecial decomposition of
    each positive root; the mirrored decomposition is used for negatives, so
    the sign on x_{-g} equals the sign on x_g.
    """
    rs = table.rs
    rank = table.rank
    perm = tuple(perm)
    if sorted(perm) != list(range(rank)):
        raise ValueError("not a permutation of the simple roots")
    if any(
        rs.cartan[perm[i]][perm[j]] != rs.cartan[i][j]
        for i in range(rank)
        for j in range(rank)
    ):
        raise ValueError("permutation is not a Cartan-matrix symmetry")

    def image_coords(coords):
        out = [0] * rank
        for i, m in enumerate(coords):
            out[perm[i]] = m
        return tuple(out)

    pos = [r.coords for r in rs.positive_roots()]
    order = {c: i for i, c in enumerate(pos)}
    posset = set(pos)
    eps: Dict[Tuple[int, ...], int] = {}
    for g in pos:
        if sum(g) == 1:
            eps[g] = 1
            continue
        # extraspecial decomposition g = a + b, minimal a in canonical order
        pair = None
        for a in pos:
            b = tuple(x - y for x, y in zip(g, a))
            if b in posset and order[a] < order[b]:
                pair = (a, b)
                break
        a, b = pair
        na = table.n_constant(a, b)
        nb = table.n_constant(image_coords(a), image_coords(b))
        v = Fraction(eps[a] * eps[b] * nb, na)
        if v.denominator != 1 or abs(v) != 1:
            raise CertificationError(f"diagram extension sign is not a unit at {g}")
        eps[g] = int(v)

    cols: List[dict] = [{perm[i]: 1} for i in range(rank)]
    for r in rs.roots:
        g = r.coords if r.height > 0 else tuple(-x for x in r.coords)
        img = image_coords(r.coords)
        cols.append({rank + rs.index(img): eps[g]})
    desc = "diagram:" + ",".join(str(p + 1) for p in perm)
    return make_automorphism(table, cols, desc)


def omega_automorphism(table: StructureTable) -> Automorphism:
    """The unique nontrivial involutive diagram automorphism, when it exists."""
    sym = [
        p
        for p in diagram_symmetries(table.rs.cartan)
        if p != tuple(range(table.rank))
        and all(p[p[i]] == i for i in range(table.rank))
    ]
    if len(sym) != 1:
        raise ValueError(
            f"expected exactly one nontrivial diagram involution, found {len(sym)}"
        )
    a = diagram_automorphism(table, sym[0])
    return Automorphism(a.table, a.cols, a.order, "omega")


# ---------------------------------------------------------------------------
# Composition, commutation, Klein groups
# ---------------------------------------------------------------------------

def compose(a: Automorphism, b: Automorphism) -> Automorphism:
    """a∘b, re-certified from scratch."""
    if a.table is not b.table:
        raise ValueError("automorphisms live on different algebras")
    cols = compose_cols(a.cols, b.cols)
    return make_automorphism(a.table, cols, f"{a.descriptor}*{b.descriptor}")


def commutes(a: Automorphism, b: Automorphism) -> bool:
    if a.table is not b.table:
        raise ValueError("automorphisms live on different algebras")
    return compose_cols(a.cols, b.cols) == compose_cols(b.cols, a.cols)


@dataclass(frozen=True)
class KleinGroup:
    """A Klein four subgroup given by two commuting involutions."""

    generators: Tuple[Automorphism, Automorphism]
    elements: Tuple[Automorphism, ...]  # (identity, a, b, ab)

    def nonidentity(self) -> Tuple[Automorphism, ...]:
        return self.elements[1:]


def make_klein(a: Automorphism, b: Automorphism) -> KleinGroup:
    """Validate the Klein four axioms; report the first violated one."""
    if a.table is not b.table:
        raise ValueError("generators live on different algebras")
    if not a.is_involution():
        raise ValueError(f"generator {a.descriptor} is not an involution")
    if not b.is_involution():
        raise ValueError(f"generator {b.descriptor} is not an involution")
    if not commutes(a, b):
        raise ValueError(f"generators {a.descriptor}, {b.descriptor} do not commute")
    if a == b:
        raise ValueError("generators are equal; the product would be the identity")
    ab = compose(a, b)
    if ab.is_identity():
        raise ValueError("product of generators is the identity")
    if not ab.is_involution():
        raise ValueError("product of generators is not an involution")
    ident = identity_automorphism(a.table)
    return KleinGroup((a, b), (ident, a, b, ab))


# ---------------------------------------------------------------------------
# Weyl-group lifts
# ---------------------------------------------------------------------------

def _exp_ad_cols(table: StructureTable, x: dict) -> Cols:
    """exp(ad x) for nilpotent x, column by column; terminates exactly."""
    cols = []
    for j in range(table.dim):
        total = {j: Fraction(1)}
        term: dict = {j: Fraction(1)}
        k = 1
        while term:
            nxt = table.bracket(x, term)
            term = {r: Fraction(v, k) for r, v in nxt.items() if v}
            for r, v in term.items():
                nv = total.get(r, 0) + v
                if nv:
                    total[r] = nv
                else:
                    total.pop(r, None)
            k += 1
            if k > 30:
                raise CertificationError("ad x is not nilpotent")
        cols.append(_clean(total))
    return tuple(cols)


def weyl_lift(table: StructureTable, i: int) -> Automorphism:
    """Inner lift of the simple reflection s_i.

    exp(ad x_{a_i}) exp(ad -x_{-a_i}) exp(ad x_{a_i}); permutes root spaces by
    s_i up to sign and acts on the Cartan by the reflection.
    """
    rs = table.rs
    if not 0 <= i < table.rank:
        raise ValueError(f"simple index out of range: {i}")
    simple = tuple(1 if j == i else 0 for j in range(table.rank))
    xp = {table.rank + rs.index(simple): 1}
    xm = {table.rank + rs.index(tuple(-c for c in simple)): -1}
    e_plus = _exp_ad_cols(table, xp)
    e_minus = _exp_ad_cols(table, xm)
    cols = compose_cols(e_plus, compose_cols(e_minus, e_plus))
    return make_automorphism(table, cols, f"weyl:{i + 1}")


def conjugate(w: Automorphism, a: Automorphism) -> Automorphism:
    """w a w^{-1}; the inverse comes from the certified order of w."""
    if w.table is not a.table:
        raise ValueError("automorphisms live on different algebras")
    inv = w.cols
    for _ in range(w.order - 2):
        inv = compose_cols(w.cols, inv)
    if w.order == 1:
        inv = tuple({j: 1} for j in range(w.table.dim))
    cols = compose_cols(w.cols, compose_cols(a.cols, inv))
    return make_automorphism(w.table, cols, f"conj({w.descriptor},{a.descriptor})")


# ---------------------------------------------------------------------------
# Textual descriptors (CLI surface)
# ---------------------------------------------------------------------------

def parse_descriptor(table: StructureTable, text: str) -> Automorphism:
    """Parse 'torus:c1,...,cl', 'omega', 'omega*torus:...' or 'identity'."""
    text = text.strip()
    if text in ("identity", "id"):
        return identity_automorphism(table)
    if text == "omega":
        return omega_automorphism(table)
    if text.startswith("omega*torus:"):
        om = omega_automorphism(table)
        tor = _parse_torus(table, text[len("omega*") :])
        return compose(om, tor)
    if text.startswith("torus:"):
        return _parse_torus(table, text)
    raise ValueError(f"cannot parse automorphism descriptor {text!r}")


def _parse_torus(table: StructureTable, text: str) -> Automorphism:
    body = text[len("torus:") :]
    try:
        c = [int(x) for x in body.split(",")]
    except ValueError:
        raise ValueError(f"bad torus coefficients {body!r}") from None
    if len(c) != table.rank:
        raise ValueError(
            f"torus descriptor needs {table.rank} coefficients, got {len(c)}"
        )
    return torus_involution(table, c)
