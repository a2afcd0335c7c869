from fractions import Fraction

import pytest

from kleinfour.autos import (
    Automorphism,
    compose_cols,
    make_automorphism,
    make_klein,
    omega_automorphism,
    parse_descriptor,
    torus_involution,
    weyl_lift,
)
from kleinfour.exactq import symmetric_inertia
from kleinfour.identify import fixed_subalgebra
from kleinfour.realform import (
    CatalogMissError,
    RealFormError,
    cartan_decomposition,
    compact_form,
    compact_matrix_cols,
    is_holomorphic_type,
    load_catalog,
    real_fixed_subalgebra,
)
from kleinfour.rootsys import (
    build_root_system,
    cartan_matrix,
    chevalley_table,
    jacobi_defect,
)


# -- compact form -----------------------------------------------------------------

def test_a1_compact_form_is_su2():
    t = chevalley_table(build_root_system(cartan_matrix("A1")))
    cb = compact_form(t)
    assert cb.dim == 3
    assert symmetric_inertia(cb.killing) == (0, 3, 0)


def test_e6_compact_inertia_negative_definite(e6_compact):
    assert symmetric_inertia(e6_compact.killing) == (0, 78, 0)


def test_w_bracket_u_proportional_to_v(e6_compact):
    cb = e6_compact
    rs = cb.table.rs
    for i in range(6):
        for k in range(0, cb.npos, 5):
            terms = cb.pair_bracket(cb.w(i), cb.u(k))
            c = rs.pairing(rs.roots[k].coords, i)
            if c:
                assert terms == ((cb.v(k), c),)
            else:
                assert terms == ()


def test_compact_table_satisfies_jacobi(e6_compact):
    assert jacobi_defect(e6_compact) is None


def test_compact_brackets_are_integral(e6_compact):
    for terms in e6_compact._bra.values():
        for _, c in terms:
            assert isinstance(c, int)


# -- automorphisms in compact coordinates ---------------------------------------------

def test_torus_compact_matrix_is_diagonal(e6, e6_compact):
    a = torus_involution(e6, (1, 0, 0, 0, 0, 1))
    cols = compact_matrix_cols(e6_compact, a)
    for j, col in enumerate(cols):
        assert set(col) == {j}
        assert col[j] in (1, -1)


def test_weyl_lift_preserves_compact_form(e6, e6_compact):
    cols = compact_matrix_cols(e6_compact, weyl_lift(e6, 2))
    assert len(cols) == 78


def _unipotent_conjugate(table, root_coords, sigma):
    """exp(ad x_a) sigma exp(-ad x_a): certified, but moves the compact form
    whenever a pairs oddly with sigma's torus vector."""
    from kleinfour.autos import _exp_ad_cols

    rs = table.rs
    x = {6 + rs.index(root_coords): 1}
    e_cols = _exp_ad_cols(table, x)
    e_inv = _exp_ad_cols(table, {k: -v for k, v in x.items()})
    cols = compose_cols(e_cols, compose_cols(sigma.cols, e_inv))
    return make_automorphism(table, cols, "unipotent-conjugate")


def test_unipotent_conjugate_fails_compactness(e6, e6_compact):
    sigma = torus_involution(e6, (0, 1, 0, 0, 0, 0))
    moved = _unipotent_conjugate(e6, (0, 0, 0, 1, 0, 0), sigma)
    assert moved.order == 2
    assert moved != sigma
    with pytest.raises(RealFormError):
        compact_matrix_cols(e6_compact, moved)


# -- Cartan decompositions --------------------------------------------------------------

def test_identity_theta_gives_compact_form(e6, e6_compact, catalog):
    d = cartan_decomposition(e6_compact, parse_descriptor(e6, "identity"), catalog)
    assert d.signature == (78, 0)
    assert d.name == "e6(-78)"


def test_sigma2_gives_e6_minus_14(e6, e6_compact, catalog):
    theta = torus_involution(e6, (1, 0, 0, 0, 0, 1))
    d = cartan_decomposition(e6_compact, theta, catalog)
    assert d.signature == (46, 32)
    assert d.k_type == "D5+u(1)"
    assert d.name == "e6(-14)"


def test_omega_gives_e6_minus_26(e6, e6_compact, catalog):
    d = cartan_decomposition(e6_compact, omega_automorphism(e6), catalog)
    assert d.signature == (52, 26)
    assert d.k_type == "F4"
    assert d.name == "e6(-26)"


def test_decomposition_rejects_higher_order(e6, e6_compact, catalog):
    w = weyl_lift(e6, 0)
    assert w.order == 4
    with pytest.raises(RealFormError):
        cartan_decomposition(e6_compact, w, catalog)


# -- real fixed subalgebras ---------------------------------------------------------------

def test_klein_pair_names_so_8_1(ctx):
    cfg = ctx.rank3
    a = ctx.automorphism(cfg.a)
    b = ctx.automorphism(cfg.b)
    theta = ctx.automorphism(cfg.theta)
    d = real_fixed_subalgebra(ctx.cb, make_klein(a, b), theta, ctx.catalog)
    assert d.g_type == "B4"
    assert d.k_type == "D4"
    assert d.signature == (28, 8)
    assert d.name == "so(8,1)"


def test_rank_one_gamma_names_so_8_2_plus_u1(ctx):
    cfg = ctx.rank3
    b = ctx.automorphism(cfg.b)
    theta = ctx.automorphism(cfg.theta)
    d = real_fixed_subalgebra(ctx.cb, b, theta, ctx.catalog)
    assert d.g_type == "D5+u(1)"
    assert d.k_type == "D4+2u(1)"
    assert d.signature == (30, 16)
    assert d.name == "so(8,2)+u(1)"


def test_gamma_containing_theta_gives_compact_result(ctx):
    cfg = ctx.rank3
    a = ctx.automorphism(cfg.a)
    b = ctx.automorphism(cfg.b)
    d = real_fixed_subalgebra(ctx.cb, make_klein(a, b), b, ctx.catalog)
    assert d.signature == (36, 0)  # p-part vanishes: theta lies in gamma
    assert d.name == "so(9)"


def test_noncommuting_gamma_rejected(ctx, e6):
    from kleinfour.autos import commutes

    theta = torus_involution(e6, (1, 0, 0, 0, 0, 1))
    sigma = torus_involution(e6, (0, 1, 0, 0, 0, 0))
    # alpha_3 + alpha_4 pairs oddly with both torus vectors
    moved = _unipotent_conjugate(e6, (0, 0, 1, 1, 0, 0), sigma)
    assert not commutes(moved, theta)
    with pytest.raises(RealFormError, match="commute"):
        real_fixed_subalgebra(ctx.cb, moved, theta, ctx.catalog)


# -- holomorphic type ----------------------------------------------------------------------

def test_theta_is_holomorphic_for_itself(ctx):
    theta = ctx.automorphism(ctx.rank3.theta)
    assert is_holomorphic_type(ctx.cb, theta, theta) is True


def test_torus_sigma_is_holomorphic(ctx, e6):
    theta = ctx.automorphism(ctx.rank3.theta)
    sigma = torus_involution(e6, (0, 1, 0, 0, 0, 0))
    assert is_holomorphic_type(ctx.cb, sigma, theta) is True


def test_sigma3_generator_is_anti_holomorphic(ctx):
    theta = ctx.automorphism(ctx.rank3.theta)
    a = ctx.automorphism(ctx.rank3.a)
    assert is_holomorphic_type(ctx.cb, a, theta) is False


def test_non_hermitian_theta_rejected(ctx, e6):
    sigma1 = torus_involution(e6, (0, 1, 0, 0, 0, 0))  # k = A5+A1: no center
    with pytest.raises(RealFormError, match="Hermitian"):
        is_holomorphic_type(ctx.cb, sigma1, sigma1)


# -- catalog ----------------------------------------------------------------------------------

def test_catalog_so_consistency_and_miss(catalog):
    with pytest.raises(CatalogMissError):
        catalog.lookup("E6", "D5+u(1)", 45, 33)
    assert catalog.lookup("B4", "D4", 28, 8) == "so(8,1)"


def test_catalog_rejects_inconsistent_so_row(tmp_path):
    import json

    bad = {
        "real_forms": [
            {"g": "B4", "k": "D4", "signature": [27, 9], "name": "so(8,1)"}
        ]
    }
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    with pytest.raises(ValueError, match="k dimension mismatch"):
        load_catalog(str(p))
