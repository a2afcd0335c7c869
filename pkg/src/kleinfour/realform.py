"""Compact real form, Cartan decompositions, real forms of fixed algebras.

The compact form is held in the rational basis
    u_a = X_a - X_{-a},   v_a = sqrt(-1)(X_a + X_{-a}),   w_i = sqrt(-1) h_i
for positive roots a; sqrt(-1) lives only in the basis labels, never in an
entry.  Structure constants in this basis are integers derived from the
Chevalley constants, and the Killing form must come out negative definite --
a definiteness failure signals a structure-constant bug and is fatal.

Real forms are described by a Cartan involution theta: k is its fixed part,
p its antifixed part (understood as multiplied by sqrt(-1) in the noncompact
form), and (g_type, k_type, signature) is looked up in a data catalog of real
form names.  Complexified types are identified on the complex side: theta
preserves the compact form, so the compact fixed space is a real form of the
complex fixed space and both have the same type and dimension (this equality
is asserted, not assumed).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple

from .exactq import QMatrix, as_num, kernel, rref, symmetric_inertia
from .autos import Automorphism, KleinGroup, commutes
from .identify import (
    IdentifyError,
    ReductiveType,
    Subalgebra,
    center_of,
    fixed_subalgebra,
    identify_type,
    subalgebra_from_vectors,
)
from .rootsys import StructureTable, killing_from_brackets


class RealFormError(Exception):
    """Compactness, commutation or Hermitian-type precondition failure."""


class CatalogMissError(KeyError):
    """No catalog row for a computed (g_type, k_type, signature) triple."""


# ---------------------------------------------------------------------------
# Compact form
# ---------------------------------------------------------------------------

class CompactBasis:
    """Rational structure table of the compact real form.

    Basis indices: 0..npos-1 are u_a, npos..2npos-1 are v_a (positive roots in
    canonical order), 2npos..2npos+rank-1 are w_i.
    """

    def __init__(self, table: StructureTable):
        rs = table.rs
        self.table = table
        self.rank = table.rank
        self.npos = rs.npos
        self.dim = 2 * rs.npos + table.rank
        self._bra: Dict[Tuple[int, int], Tuple[Tuple[int, int], ...]] = {}
        self._build(table)
        self.killing = killing_from_brackets(self.dim, self.pair_bracket)
        inertia = symmetric_inertia(self.killing)
        if inertia != (0, self.dim, 0):
            raise RealFormError(
                f"Killing form of the compact basis has inertia {inertia}, "
                f"expected (0, {self.dim}, 0); structure constants are wrong"
            )

    # index helpers
    def u(self, k: int) -> int:
        return k

    def v(self, k: int) -> int:
        return self.npos + k

    def w(self, i: int) -> int:
        return 2 * self.npos + i

    def label(self, i: int) -> str:
        if i < self.npos:
            return "u" + str(self.table.rs.roots[i].coords)
        if i < 2 * self.npos:
            return "v" + str(self.table.rs.roots[i - self.npos].coords)
        return f"w{i - 2 * self.npos + 1}"

    def _set(self, i: int, j: int, terms) -> None:
        terms = tuple((k, c) for k, c in terms if c)
        if not terms:
            return
        if i < j:
            self._bra[(i, j)] = terms
        else:
            self._bra[(j, i)] = tuple((k, -c) for k, c in terms)

    def _build(self, table: StructureTable) -> None:
        rs = table.rs
        npos = self.npos
        pos = [r.coords for r in rs.positive_roots()]
        index = {c: k for k, c in enumerate(pos)}
        N = table.n_constant

        def diff_term(a, b, base_sign: int):
            """base_sign * N(a,-b) * u_{a-b} with u_{-g} = -u_g folded in."""
            g = tuple(x - y for x, y in zip(a, b))
            if g in index:
                return [(self.u(index[g]), base_sign * N(a, tuple(-x for x in b)))]
            gm = tuple(-x for x in g)
            if gm in index:
                return [(self.u(index[gm]), -base_sign * N(a, tuple(-x for x in b)))]
            return []

        for ka, a in enumerate(pos):
            for kb, b in enumerate(pos):
                s = tuple(x + y for x, y in zip(a, b))
                srt = s in index
                # [u_a, v_b]; covers ka == kb, where the coroot appears
                terms: List[Tuple[int, int]] = []
                if ka == kb:
                    for i, c in enumerate(rs.coroot(a)):
                        if c:
                            terms.append((self.w(i), 2 * c))
                else:
                    if srt:
                        terms.append((self.v(index[s]), N(a, b)))
                    g = tuple(x - y for x, y in zip(a, b))
                    gm = tuple(-x for x in g)
                    if g in index:
                        terms.append((self.v(index[g]), N(a, tuple(-x for x in b))))
                    elif gm in index:
                        terms.append((self.v(index[gm]), N(a, tuple(-x for x in b))))
                self._set(self.u(ka), self.v(kb), terms)
                if ka < kb:
                    # [u_a, u_b] = N(a,b) u_{a+b} - N(a,-b) u~_{a-b}
                    terms = []
                    if srt:
                        terms.append((self.u(index[s]), N(a, b)))
                    terms += diff_term(a, b, -1)
                    self._set(self.u(ka), self.u(kb), terms)
                    # [v_a, v_b] = -N(a,b) u_{a+b} - N(a,-b) u~_{a-b}
                    terms = []
                    if srt:
                        terms.append((self.u(index[s]), -N(a, b)))
                    terms += diff_term(a, b, -1)
                    self._set(self.v(ka), self.v(kb), terms)
        for i in range(self.rank):
            for ka, a in enumerate(pos):
                c = rs.pairing(a, i)
                if c:
                    self._set(self.w(i), self.u(ka), [(self.v(ka), c)])
                    self._set(self.w(i), self.v(ka), [(self.u(ka), -c)])

    def pair_bracket(self, i: int, j: int) -> Tuple[Tuple[int, int], ...]:
        if i == j:
            return ()
        if i < j:
            return self._bra.get((i, j), ())
        return tuple((k, -c) for k, c in self._bra.get((j, i), ()))

    def bracket(self, u: dict, v: dict) -> dict:
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


def compact_form(table: StructureTable) -> CompactBasis:
    """Build the compact real form table; definiteness is verified inside."""
    return CompactBasis(table)


# ---------------------------------------------------------------------------
# Automorphisms in compact coordinates
# ---------------------------------------------------------------------------

def compact_matrix_cols(cb: CompactBasis, auto: Automorphism) -> Tuple[dict, ...]:
    """Columns of the automorphism on the compact basis; exact and verified.

    Each compact basis vector is split into real and imaginary complex-basis
    parts, pushed through the (rational) complex matrix, and recombined; any
    inconsistency means the map does not preserve the compact form.
    """
    table = cb.table
    rank = table.rank
    npos = cb.npos

    def convert(R: dict, I: dict, what: str) -> dict:
        out: dict = {}
        for j, x in R.items():
            if j < rank:
                raise RealFormError(
                    f"{auto.descriptor} does not preserve the compact basis "
                    f"(real Cartan component on {what})"
                )
        for k in range(npos):
            ip, im = rank + k, rank + npos + k
            a, am = R.get(ip, 0), R.get(im, 0)
            if am != -a:
                raise RealFormError(
                    f"{auto.descriptor} does not preserve the compact basis "
                    f"(real part mismatch on {what})"
                )
            if a:
                out[cb.u(k)] = a
            b, bm = I.get(ip, 0), I.get(im, 0)
            if b != bm:
                raise RealFormError(
                    f"{auto.descriptor} does not preserve the compact basis "
                    f"(imaginary part mismatch on {what})"
                )
            if b:
                out[cb.v(k)] = b
        for i in range(rank):
            c = I.get(i, 0)
            if c:
                out[cb.w(i)] = c
        return out

    cols: List[dict] = []
    for k in range(npos):
        ip, im = rank + k, rank + npos + k
        cols.append(convert(auto.apply({ip: 1, im: -1}), {}, cb.label(cb.u(k))))
    for k in range(npos):
        ip, im = rank + k, rank + npos + k
        cols.append(convert({}, auto.apply({ip: 1, im: 1}), cb.label(cb.v(k))))
    for i in range(rank):
        cols.append(convert({}, auto.apply({i: 1}), cb.label(cb.w(i))))
    return tuple(cols)


def _eigenspace_rows(cb: CompactBasis, cols: Sequence[dict], eigen: int):
    """RREF basis of the +-1 eigenspace of a compact-basis matrix."""
    dim = cb.dim
    rows = [[0] * dim for _ in range(dim)]
    for j, col in enumerate(cols):
        for r, v in col.items():
            rows[r][j] = v
    for r in range(dim):
        rows[r][r] -= eigen
    vecs = kernel(QMatrix(rows))
    return subalgebra_from_vectors(cb, vecs, check_closed=False)


def _span_brackets_into(cb: CompactBasis, xs: Subalgebra, ys: Subalgebra, target: Subalgebra) -> bool:
    for i in range(xs.dim):
        for j in range(ys.dim):
            w = cb.bracket(xs.rows[i], ys.rows[j])
            if w and not target.contains(w):
                return False
    return True


def _restricted_inertia(cb: CompactBasis, span: Subalgebra) -> Tuple[int, int, int]:
    B = cb.killing.entries
    k = span.dim
    G = [[0] * k for _ in range(k)]
    dense = []
    for r in span.rows:
        w = [0] * cb.dim
        for i, x in r.items():
            row = B[i]
            for j in range(cb.dim):
                if row[j]:
                    w[j] += x * row[j]
        dense.append(w)
    for a in range(k):
        wa = dense[a]
        for b in range(a, k):
            s = sum(wa[j] * x for j, x in span.rows[b].items())
            G[a][b] = s
            G[b][a] = s
    return symmetric_inertia(QMatrix(G))


# ---------------------------------------------------------------------------
# Catalog of real form names
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogRow:
    g_type: str
    k_type: str
    k_dim: int
    p_dim: int
    name: str


class Catalog:
    """Lookup (g_type, k_type, signature) -> canonical real form name."""

    def __init__(self, rows: Sequence[CatalogRow]):
        self.rows = tuple(rows)
        self._by_key: Dict[Tuple[str, str, int, int], str] = {}
        for r in self.rows:
            key = (r.g_type, r.k_type, r.k_dim, r.p_dim)
            if key in self._by_key and self._by_key[key] != r.name:
                raise ValueError(f"ambiguous catalog rows for {key}")
            self._by_key[key] = r.name
        self._validate_so_rows()

    def lookup(self, g_type: str, k_type: str, k_dim: int, p_dim: int) -> str:
        key = (g_type, k_type, k_dim, p_dim)
        try:
            return self._by_key[key]
        except KeyError:
            raise CatalogMissError(
                f"no real form catalogued for g_type={g_type}, k_type={k_type}, "
                f"signature=({k_dim},{p_dim})"
            ) from None

    def _validate_so_rows(self) -> None:
        # so(p,q) rows must satisfy dim = (p+q)(p+q-1)/2 and k = so(p)+so(q)
        pat = re.compile(r"^so\((\d+)(?:,(\d+))?\)(\+u\(1\))?$")
        for r in self.rows:
            m = pat.match(r.name)
            if not m:
                continue
            p = int(m.group(1))
            q = int(m.group(2)) if m.group(2) else 0
            extra = 1 if m.group(3) else 0
            n = p + q
            if r.k_dim + r.p_dim != n * (n - 1) // 2 + extra:
                raise ValueError(f"catalog row {r.name}: dimension mismatch")
            if r.k_dim != p * (p - 1) // 2 + q * (q - 1) // 2 + extra:
                raise ValueError(
                    f"catalog row {r.name}: k dimension mismatch "
                    f"(so({p})+so({q}) has dim {p*(p-1)//2 + q*(q-1)//2 + extra})"
                )
            summands: List[Tuple[str, int]] = []
            center = extra
            for m_part in (p, q):
                s, c = _so_type(m_part)
                summands += s
                center += c
            expect = str(ReductiveType.make(summands, center))
            if r.k_type != expect:
                raise ValueError(
                    f"catalog row {r.name}: k_type {r.k_type} != so(p)+so(q) = {expect}"
                )


def _so_type(n: int) -> Tuple[List[Tuple[str, int]], int]:
    if n <= 1:
        return [], 0
    if n == 2:
        return [], 1
    if n == 3:
        return [("A", 1)], 0
    if n == 4:
        return [("A", 1), ("A", 1)], 0
    if n == 5:
        return [("B", 2)], 0
    if n == 6:
        return [("A", 3)], 0
    return ([("D", n // 2)], 0) if n % 2 == 0 else ([("B", (n - 1) // 2)], 0)


def load_catalog(path: Optional[str] = None) -> Catalog:
    """Load the shipped catalog, or one from an explicit JSON path."""
    if path is None:
        data = json.loads(
            resources.files("kleinfour.data").joinpath("realform_catalog.json").read_text()
        )
    else:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    rows = [
        CatalogRow(r["g"], r["k"], int(r["signature"][0]), int(r["signature"][1]), r["name"])
        for r in data["real_forms"]
    ]
    return Catalog(rows)


# ---------------------------------------------------------------------------
# Descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RealFormDescriptor:
    """A Cartan decomposition k + p with identified types and catalog name."""

    theta: str                      # descriptor of the Cartan involution
    fixed_of: Tuple[str, ...]       # descriptors of the fixed group (empty: whole algebra)
    g_type: str
    k_type: str
    k_dim: int
    p_dim: int
    name: str

    @property
    def signature(self) -> Tuple[int, int]:
        return (self.k_dim, self.p_dim)


def _check_involution(theta: Automorphism) -> None:
    if theta.order not in (1, 2):
        raise RealFormError(
            f"{theta.descriptor} has order {theta.order}; Cartan involutions "
            "must square to the identity"
        )


def cartan_decomposition(
    cb: CompactBasis, theta: Automorphism, catalog: Optional[Catalog] = None
) -> RealFormDescriptor:
    """Split the compact form under theta and name the dual real form.

    k is the fixed part, p the antifixed part; the noncompact real form is
    k + sqrt(-1) p.  The bracket relations [k,k] in k, [k,p] in p, [p,p] in k
    and the definiteness of the Killing form on both parts are verified.
    """
    if catalog is None:
        catalog = load_catalog()
    _check_involution(theta)
    cols = compact_matrix_cols(cb, theta)
    kspan = _eigenspace_rows(cb, cols, 1)
    pspan = _eigenspace_rows(cb, cols, -1)
    if kspan.dim + pspan.dim != cb.dim:
        raise RealFormError("eigenspace dimensions do not fill the algebra")
    if not _span_brackets_into(cb, kspan, kspan, kspan):
        raise RealFormError("[k,k] escapes k")
    if not _span_brackets_into(cb, kspan, pspan, pspan):
        raise RealFormError("[k,p] escapes p")
    if not _span_brackets_into(cb, pspan, pspan, kspan):
        raise RealFormError("[p,p] escapes k")
    if _restricted_inertia(cb, kspan) != (0, kspan.dim, 0):
        raise RealFormError("Killing form on k is not negative definite")
    if pspan.dim and _restricted_inertia(cb, pspan) != (0, pspan.dim, 0):
        raise RealFormError("Killing form on p (compact coordinates) is not negative definite")
    g_type = identify_type(fixed_subalgebra(cb.table, []))
    k_complex = fixed_subalgebra(cb.table, [theta])
    if k_complex.dim != kspan.dim:
        raise RealFormError(
            f"complex fixed space has dim {k_complex.dim} but compact k has {kspan.dim}"
        )
    k_type = identify_type(k_complex)
    name = catalog.lookup(str(g_type), str(k_type), kspan.dim, pspan.dim)
    return RealFormDescriptor(
        theta.descriptor, (), str(g_type), str(k_type), kspan.dim, pspan.dim, name
    )


def _gamma_generators(gamma) -> List[Automorphism]:
    if isinstance(gamma, KleinGroup):
        return list(gamma.generators)
    if isinstance(gamma, Automorphism):
        return [gamma]  # rank-1 degenerate case
    raise TypeError("gamma must be a KleinGroup or a single Automorphism")


def real_fixed_subalgebra(
    cb: CompactBasis, gamma, theta: Automorphism, catalog: Optional[Catalog] = None
) -> RealFormDescriptor:
    """Real form of the gamma-fixed subalgebra inside the theta real form.

    k-part: compact fixed vectors of gamma also fixed by theta; p-part: those
    negated by theta.  Complexified types come from the complex-side fixed
    subalgebras of gamma and gamma+theta; their dimensions must match the
    compact computation exactly.
    """
    if catalog is None:
        catalog = load_catalog()
    gens = _gamma_generators(gamma)
    _check_involution(theta)
    for g in gens:
        if not commutes(g, theta):
            raise RealFormError(
                f"{g.descriptor} does not commute with theta = {theta.descriptor}"
            )
    gcols = [compact_matrix_cols(cb, g) for g in gens]
    tcols = compact_matrix_cols(cb, theta)

    dim = cb.dim
    stacked: List[List] = []
    for cols in gcols:
        rows = [[0] * dim for _ in range(dim)]
        for j, col in enumerate(cols):
            for r, v in col.items():
                rows[r][j] = v
        for r in range(dim):
            rows[r][r] -= 1
        stacked.extend(rows)
    fixed = subalgebra_from_vectors(cb, kernel(QMatrix(stacked)), check_closed=True)

    def part(eigen: int) -> Subalgebra:
        if fixed.dim == 0:
            return fixed
        cons: List[List] = []
        images = []
        for row in fixed.rows:
            img: dict = {}
            for j, x in row.items():
                for r, v in tcols[j].items():
                    img[r] = img.get(r, 0) + x * v
            images.append(img)
        coords = sorted(set().union(*[set(r) | set(i) for r, i in zip(fixed.rows, images)]))
        for c in coords:
            cons.append([images[t].get(c, 0) - eigen * fixed.rows[t].get(c, 0)
                         for t in range(fixed.dim)])
        combos = kernel(QMatrix(cons))
        vecs = []
        for combo in combos:
            acc: dict = {}
            for t, x in enumerate(combo):
                if x:
                    for j, v in fixed.rows[t].items():
                        acc[j] = acc.get(j, 0) + x * v
            vecs.append([acc.get(j, 0) for j in range(dim)])
        return subalgebra_from_vectors(cb, vecs, check_closed=False)

    kpart = part(1)
    ppart = part(-1)
    if kpart.dim + ppart.dim != fixed.dim:
        raise RealFormError("theta does not split the fixed algebra")
    if not _span_brackets_into(cb, kpart, kpart, kpart):
        raise RealFormError("[k,k] escapes k in the fixed algebra")
    if not _span_brackets_into(cb, kpart, ppart, ppart):
        raise RealFormError("[k,p] escapes p in the fixed algebra")
    if not _span_brackets_into(cb, ppart, ppart, kpart):
        raise RealFormError("[p,p] escapes k in the fixed algebra")

    g_complex = fixed_subalgebra(cb.table, gens)
    if g_complex.dim != fixed.dim:
        raise RealFormError(
            f"complex fixed space of gamma has dim {g_complex.dim}, "
            f"compact fixed space has {fixed.dim}"
        )
    g_type = identify_type(g_complex)
    k_complex = fixed_subalgebra(cb.table, gens + [theta])
    if k_complex.dim != kpart.dim:
        raise RealFormError(
            f"complex fixed space of gamma+theta has dim {k_complex.dim}, "
            f"compact k-part has {kpart.dim}"
        )
    k_type = identify_type(k_complex)
    name = catalog.lookup(str(g_type), str(k_type), kpart.dim, ppart.dim)
    return RealFormDescriptor(
        theta.descriptor,
        tuple(g.descriptor for g in gens),
        str(g_type),
        str(k_type),
        kpart.dim,
        ppart.dim,
        name,
    )


def is_holomorphic_type(cb: CompactBasis, sigma: Automorphism, theta: Automorphism) -> bool:
    """True iff sigma acts as the identity on the 1-dim center of k(theta).

    Requires sigma to commute with theta and theta to be of Hermitian type
    (center of k exactly 1-dimensional); both are verified.
    """
    if not commutes(sigma, theta):
        raise RealFormError(
            f"{sigma.descriptor} does not commute with theta = {theta.descriptor}"
        )
    _check_involution(theta)
    k_complex = fixed_subalgebra(cb.table, [theta])
    z = center_of(k_complex)
    if z.dim != 1:
        raise RealFormError(
            f"theta = {theta.descriptor} is not Hermitian: center of k has dim {z.dim}"
        )
    zvec = z.rows[0]
    return sigma.apply(zvec) == zvec
