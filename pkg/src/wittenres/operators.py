"""Concrete symbol data for the deformed de Rham operator.

Builds the Laplace-type data (first-order connection term's Taylor
coefficients and the endomorphism), the three leading inverse-power symbol
components for the generalized laplacian, and the order-one symbols of the
left/right vector-field contractions A = c(u) D and B = c(w) D.

Normal coordinates throughout: the connection matrix vanishes at the base
point and its first Taylor coefficient is half a Riemann component, so
omega_st(e_p) = -<grad_p e_s, e_t> expands as -(1/2) R_lpts x^l.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

from .clifford import c, c_vec, c_xi, chat, chat_v
from .pdo import Component, PDOSymbol
from .scalars import S_I, S_ONE, Scalar
from .terms import F, Term, fct, map_labels, mul_sums, mul_terms, normalize


class LaplaceData(NamedTuple):
    """Witten-deformation data entering the inverse-symbol construction."""
    t_a: Callable[[str], tuple[Term, ...]]
    t_ab: Callable[[str, str], tuple[Term, ...]]
    endo: tuple[Term, ...]


def _scal(p, q=1) -> Scalar:
    return Scalar.frac(p, q)


def build_laplace_data(with_field: bool = True) -> LaplaceData:
    """T_a = 0, T_ab = -1/8 R_bats c_s c_t + 1/8 R_bats ch_s ch_t, and the
    endomorphism 1/8 R_ijkl ch_i ch_j c_k c_l + s/4 + c_i ch(dV_i) + |V|^2.

    with_field=False drops the deformation field V entirely (the plain
    de Rham-Hodge operator), for the degeneracy checks.
    """

    def t_a(a: str) -> tuple[Term, ...]:
        return ()

    def t_ab(a: str, b: str) -> tuple[Term, ...]:
        return (
            Term(_scal(-1, 8), (fct("riem", b, a, "t", "s"),),
                 (c("s"), c("t"))),
            Term(_scal(1, 8), (fct("riem", b, a, "t", "s"),),
                 (chat("s"), chat("t"))),
        )

    endo = (
        Term(_scal(1, 8), (fct("riem", "i", "j", "k", "l"),),
             (chat("i"), chat("j"), c("k"), c("l"))),
        Term(_scal(1, 4), (fct("scal"),)),
    )
    if with_field:
        endo = endo + (
            Term(S_ONE, (fct("dv", "i", "b"),), (c("i"), chat("b"))),
            Term(S_ONE, (fct("vsq"),)),
        )
    return LaplaceData(t_a, t_ab, endo)


def _with(t: Term, coeff: Scalar, extra: tuple[F, ...],
          norm: tuple[int, int]) -> Term:
    return Term(t.coeff * coeff, t.fac + extra, t.word,
                (t.norm[0] + norm[0], t.norm[1] + norm[1]), t.trid, t.vol)


def parametrix_symbols(data: LaplaceData, power_offset: int) -> PDOSymbol:
    """The three leading symbol components of the inverse power.

    power_offset 0 selects the full -2m power, 1 the -2m+2 power; the
    effective half-dimension is mt = m - power_offset and the components sit
    at orders -2mt, -2mt-1, -2mt-2.  Every norm exponent is derived from the
    homogeneity bookkeeping, not copied.
    """
    if power_offset not in (0, 1):
        raise ValueError(f"power_offset must be 0 or 1, got {power_offset}")
    off = power_offset
    mt = Scalar.poly((-off, 1))            # m - off
    mt1 = Scalar.poly((1 - off, 1))        # m - off + 1
    base = 2 * off                          # top order const (slope -2)
    n_main = (base - 2, -2)                 # |xi|^(-2mt-2)
    n_low = (base - 4, -2)                  # |xi|^(-2mt-4)

    top = [
        Term(S_ONE, (fct("delta", "a", "b"), fct("xi", "a"), fct("xi", "b")),
             (), n_main),
        Term(_scal(-1, 3) * mt,
             (fct("riem", "a", "j", "b", "k"), fct("x", "j"), fct("x", "k"),
              fct("xi", "a"), fct("xi", "b")), (), n_main),
    ]

    mid = [
        Term(_scal(-2, 3) * mt * S_I,
             (fct("ric", "a", "k"), fct("x", "k"), fct("xi", "a")), (),
             n_main),
    ]
    for t in data.t_a("a"):
        mid.append(_with(t, _scal(-2) * mt * S_I, (fct("xi", "a"),), n_main))
    for t in data.t_ab("a", "b"):
        mid.append(_with(t, _scal(-2) * mt * S_I,
                         (fct("x", "b"), fct("xi", "a")), n_main))

    low = [
        Term(_scal(1, 3) * mt * mt1,
             (fct("ric", "a", "b"), fct("xi", "a"), fct("xi", "b")), (),
             n_low),
    ]
    # -2 mt(mt+1) T_a T_b xi_a xi_b and mt T_a T_a (empty products when the
    # first-order term vanishes, as it does for this deformation)
    for t in mul_sums(data.t_a("a"), data.t_a("b")):
        low.append(_with(t, _scal(-2) * mt * mt1,
                         (fct("xi", "a"), fct("xi", "b")), n_low))
    for t in mul_sums(data.t_a("a"), data.t_a("a2")):
        low.append(_with(map_labels(t, {"a2": "a"}), mt, (), n_main))
    for t in data.t_ab("a", "b"):
        low.append(_with(t, _scal(2) * mt * mt1,
                         (fct("xi", "a"), fct("xi", "b")), n_low))
    for t in data.t_ab("a", "a"):
        low.append(_with(t, -mt, (), n_main))
    for t in data.endo:
        low.append(_with(t, -mt, (), n_main))

    comps = {
        (base, -2): Component(normalize(top), 2),
        (base - 1, -2): Component(normalize(mid), 1),
        (base - 2, -2): Component(normalize(low), 0),
    }
    return PDOSymbol(comps)


def order_zero_pieces(field: str,
                      with_field: bool = True) -> dict[str, tuple[Term, ...]]:
    """The three pieces of the order-zero symbol of c(field) D: the two
    connection words (with the x-linear curvature value of omega
    substituted) and c(field) chat(V)."""
    vec = c_vec(field, "r")
    conn_c = Term(_scal(1, 8),
                  (fct("riem", "l", "p", "t", "s"), fct("x", "l")),
                  (c("p"), c("s"), c("t")))
    conn_h = Term(_scal(-1, 8),
                  (fct("riem", "l", "p", "t", "s"), fct("x", "l")),
                  (c("p"), chat("s"), chat("t")))
    return {
        "conn_c": (mul_terms(vec, conn_c),),
        "conn_h": (mul_terms(vec, conn_h),),
        "vec": (mul_terms(vec, chat_v("b")),) if with_field else (),
    }


def _order_zero(field: str, with_field: bool) -> tuple[Term, ...]:
    pieces = order_zero_pieces(field, with_field)
    return pieces["conn_c"] + pieces["conn_h"] + pieces["vec"]


def _first_order_symbol(field: str, with_field: bool) -> PDOSymbol:
    top = mul_terms(c_vec(field, "r"), c_xi("f"))
    top = Term(top.coeff * S_I, top.fac, top.word, top.norm, top.trid,
               top.vol)
    comps = {
        (1, 0): Component(normalize([top]), None),
        (0, 0): Component(normalize(_order_zero(field, with_field)), None),
    }
    return PDOSymbol(comps, exact=True)


def symbol_of_a(with_field: bool = True) -> PDOSymbol:
    """sigma(c(u) D): i c(u) c(xi) at order one plus the order-zero part."""
    return _first_order_symbol("u", with_field)


def symbol_of_b(with_field: bool = True) -> PDOSymbol:
    """sigma(c(w) D): i c(w) c(xi) at order one plus the order-zero part."""
    return _first_order_symbol("w", with_field)


def cu_cw_symbol() -> PDOSymbol:
    """Multiplication operator c(u) c(w): a single order-zero component."""
    t = mul_terms(c_vec("u", "r"), c_vec("w", "k"))
    return PDOSymbol({(0, 0): Component(normalize([t]), None)}, exact=True)
