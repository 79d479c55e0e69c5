import pytest

from wittenres import clifford as cl
from wittenres import oracle
from wittenres.operators import (build_laplace_data, cu_cw_symbol,
                                 order_zero_pieces, parametrix_symbols,
                                 symbol_of_a, symbol_of_b)
from wittenres.pdo import compose, evaluate_at_origin, terms_equal_taylor
from wittenres.reference import ab_symbol_reference, inverse_symbol_reference
from wittenres.tensor import collect
from wittenres.terms import Term, fct, mul_terms, normalize, sums_equal


def test_first_order_term_vanishes():
    data = build_laplace_data()
    assert data.t_a("a") == ()


def test_taylor_coefficient_antisymmetry():
    data = build_laplace_data()
    # T_ab + T_ba = 0 by the first-pair antisymmetry of the curvature
    both = list(data.t_ab("a", "b")) + list(data.t_ab("b", "a"))
    assert normalize(both) == ()
    # and the instantiated coefficient tensors agree with that sign
    assign = oracle.random_tensor_instantiation(3, 4)
    assert assign.riem[(2, 1, 4, 3)] == -assign.riem[(1, 2, 4, 3)]


def test_endomorphism_scalar_piece():
    data = build_laplace_data()
    scal_terms = [t for t in data.endo if not t.word]
    expr = collect(normalize(scal_terms))
    assert expr.coeff_lists() == {
        "s": [__import__("fractions").Fraction(1, 4)],
        "|V|^2": [__import__("fractions").Fraction(1)],
    }


def test_endomorphism_trace_self_consistency():
    # tr E = (s/4 + |V|^2) tr[id]: the curvature quartic and the mixed
    # derivative word die in the trace
    data = build_laplace_data()
    expr = collect(normalize(cl.trace(data.endo)))
    lists = expr.coeff_lists()
    assert set(lists) == {"s", "|V|^2"}


def test_parametrix_requires_known_power():
    data = build_laplace_data()
    with pytest.raises(ValueError):
        parametrix_symbols(data, 2)


def test_parametrix_top_component():
    par = parametrix_symbols(build_laplace_data(), 0)
    ref = inverse_symbol_reference(0)
    assert sums_equal(par.comps[(0, -2)].terms, ref.comps[(0, -2)].terms)


def test_derived_inverse_symbols_match_printed_display():
    # substituting the deformation data into the generic components must
    # reproduce the printed deformation-specific display term for term
    data = build_laplace_data()
    for off in (0, 1):
        eng = parametrix_symbols(data, off)
        ref = inverse_symbol_reference(off)
        for order, comp in ref.comps.items():
            assert sums_equal(eng.comps[order].terms, comp.terms), \
                (off, order)


def test_order_zero_symbol_at_origin():
    a = evaluate_at_origin(symbol_of_a())
    want = normalize([mul_terms(cl.c_vec("u", "r"), cl.chat_v("b"))])
    assert sums_equal(a.comps[(0, 0)].terms, want)


def test_first_order_symbol():
    a = symbol_of_a()
    (t,) = a.comps[(1, 0)].terms
    assert {f.kind for f in t.fac} == {"u", "xi"}
    re, im = t.coeff.evaluate(2)
    assert re == 0 and im == 1  # i c(u) c(xi)


def test_product_symbol_matches_printed_display():
    ab = compose(symbol_of_a(), symbol_of_b(), [(2, 0), (1, 0), (0, 0)])
    ref = ab_symbol_reference()
    for order in ((2, 0), (1, 0)):
        assert terms_equal_taylor(ab.comps[order].terms, ref[order]), order


def test_product_symbol_order_zero_matches_printed_display_slow():
    # the order-zero display, including the connection quadratics and all
    # derivative atoms
    ab = compose(symbol_of_a(), symbol_of_b(), [(0, 0)])
    ref = ab_symbol_reference()
    assert terms_equal_taylor(ab.comps[(0, 0)].terms, ref[(0, 0)])


def test_field_free_variant_drops_deformation():
    data = build_laplace_data(with_field=False)
    kinds = {f.kind for t in data.endo for f in t.fac}
    assert "dv" not in kinds and "vsq" not in kinds
    pieces = order_zero_pieces("w", with_field=False)
    assert pieces["vec"] == ()


def test_cu_cw_symbol_is_multiplication_operator():
    uw = cu_cw_symbol()
    assert uw.exact and list(uw.comps) == [(0, 0)]
