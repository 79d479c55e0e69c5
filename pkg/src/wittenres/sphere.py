"""Exact monomial integrals over the unit cosphere.

A monomial xi_{g1}...xi_{g2k} integrates to the sum over all (2k-1)!!
perfect pairings of delta products, times Vol(S^{n-1})/(n(n+2)...(n+2k-2)).
Pairings are enumerated directly; degrees here never exceed a handful, so
enumeration is cheap and symmetric by construction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .scalars import PolyM, P_ONE, RatM, Scalar, vol_sphere_value
from .terms import F, Idx, Term


def _pairings(slots: list):
    if not slots:
        yield ()
        return
    first = slots[0]
    for j in range(1, len(slots)):
        rest = slots[1:j] + slots[j + 1:]
        for tail in _pairings(rest):
            yield ((first, slots[j]),) + tail


def _moment_scalar(k: int, n) -> Scalar:
    """1 / (n (n+2) ... (n+2k-2)) with n either an int or the symbol 2m."""
    if n == "sym":
        den = P_ONE
        for j in range(k):
            den = den * PolyM((2 * j, 2))
        return Scalar(RatM(P_ONE, den))
    val = Fraction(1)
    for j in range(k):
        val /= n + 2 * j
    return Scalar.of(val)


def integrate_monomial(indices: Iterable[Idx], n="sym") -> tuple[Term, ...]:
    """Integral of the xi-monomial with the given index slots.

    Returns delta-pairing terms carrying one VolSphere token; odd length
    integrates to zero.
    """
    slots = list(indices)
    if len(slots) % 2:
        return ()
    k = len(slots) // 2
    pref = _moment_scalar(k, n)
    out = []
    for pairing in _pairings(slots):
        fac = tuple(F("delta", (a, b)) for a, b in pairing)
        out.append(Term(pref, fac, (), (0, 0), 0, 1))
    return tuple(out)


def integrate_term(t: Term, n="sym") -> tuple[Term, ...]:
    """Replace the xi factors of a term by their cosphere integral.

    The norm power must already have been consumed (set to one) by the
    caller; x factors must be gone.
    """
    if t.norm != (0, 0):
        raise ValueError(f"norm power {t.norm} not reduced before "
                         "integration")
    slots = [f.idx[0] for f in t.fac if f.kind == "xi"]
    rest = tuple(f for f in t.fac if f.kind != "xi")
    out = []
    for p in integrate_monomial(slots, n):
        out.append(Term(t.coeff * p.coeff, rest + p.fac, t.word, (0, 0),
                        t.trid, t.vol + p.vol))
    return tuple(out)


def vol_sphere(m):
    """Volume of the unit sphere S^{2m-1}.

    Symbolic m returns the token name; a concrete half-dimension returns the
    exact (rational, pi power) pair, demanding m >= 2 to match the engine's
    dimension contract.
    """
    if m == "sym":
        return "VolSphere"
    if not isinstance(m, int) or m < 2:
        raise ValueError(f"concrete half-dimension must be an int >= 2, "
                         f"got {m!r}")
    return vol_sphere_value(m)
