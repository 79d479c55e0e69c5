"""Homogeneous pseudodifferential symbol components in normal coordinates.

Orders are affine in the half-dimension symbol: (const, slope) stands for
const + slope*m, so a parametrix component sits at (c, -2) and a
differential operator's at (k, 0).  Each component records how many x-Taylor
orders it is exact to; requesting data beyond that raises TruncationError
rather than returning a silent zero.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

from .scalars import S_I, S_ONE, Scalar
from .terms import F, G, Idx, NormalizeError, Term, mul_terms, normalize

Order = tuple[int, int]


class TruncationError(Exception):
    """A composition asked for symbol data outside the stored truncation."""


class Component(NamedTuple):
    terms: tuple[Term, ...]
    xtrunc: int | None  # exact up to this x degree; None means exact


class PDOSymbol:
    """Graded collection of homogeneous components.

    exact=True marks finite symbols (differential operators): any absent
    order is identically zero.  Otherwise absent orders above the top are
    zero and everything below the lowest stored order is unknown.
    """

    def __init__(self, comps: dict[Order, Component], exact: bool = False,
                 at_origin: bool = False, check: bool = True):
        self.comps = dict(comps)
        self.exact = exact
        self.at_origin = at_origin
        if check:
            for order, comp in self.comps.items():
                for t in comp.terms:
                    deg = sum(1 for f in t.fac if f.kind == "xi")
                    got = (t.norm[0] + deg, t.norm[1])
                    if got != order:
                        raise ValueError(
                            f"term of homogeneity {got} stored at {order}: "
                            f"{t}")

    def orders(self) -> list[Order]:
        return sorted(self.comps)

    def component(self, order: Order) -> Component:
        if order in self.comps:
            return self.comps[order]
        if self.exact:
            return Component((), None)
        slopes = {o[1] for o in self.comps}
        if len(slopes) == 1:
            (slope,) = slopes
            top = max(o[0] for o in self.comps)
            if order[1] == slope and order[0] > top:
                return Component((), None)
        raise TruncationError(f"order {order} outside stored truncation "
                              f"{sorted(self.comps)}")

    def map_terms(self, fn) -> "PDOSymbol":
        return PDOSymbol({o: Component(fn(c.terms), c.xtrunc)
                          for o, c in self.comps.items()},
                         self.exact, self.at_origin, check=False)


def d_xi_terms(terms: Iterable[Term], j: Idx) -> tuple[Term, ...]:
    """Termwise xi-derivative: xi_a -> delta(a,j), |xi|^p -> p xi_j |xi|^(p-2)."""
    out = []
    for t in terms:
        for k, f in enumerate(t.fac):
            if f.kind == "xi":
                fac = t.fac[:k] + (F("delta", (f.idx[0], j)),) + t.fac[k + 1:]
                out.append(Term(t.coeff, fac, t.word, t.norm, t.trid, t.vol))
        if t.norm != (0, 0):
            p = Scalar.poly((t.norm[0], t.norm[1]))
            out.append(Term(t.coeff * p, t.fac + (F("xi", (j,)),), t.word,
                            (t.norm[0] - 2, t.norm[1]), t.trid, t.vol))
    return normalize(out)


_DERIV = {"u": "du", "w": "dw", "v": "dv"}


def d_x_terms(terms: Iterable[Term], j: Idx,
              strict: bool = True) -> tuple[Term, ...]:
    """Termwise x-derivative.

    Coordinate factors differentiate to deltas; vector-field components
    produce first-derivative atoms.  Curvature data is a Taylor coefficient
    at the base point and is constant.  Second derivatives of vector fields
    are not representable and raise in strict mode; non-strict mode treats
    the derivative atoms as carried constants (used when diffing the Taylor
    sectors two symbols actually store).
    """
    out = []
    for t in terms:
        for k, f in enumerate(t.fac):
            if f.kind == "x":
                fac = t.fac[:k] + (F("delta", (f.idx[0], j)),) + t.fac[k + 1:]
                out.append(Term(t.coeff, fac, t.word, t.norm, t.trid, t.vol))
            elif f.kind in _DERIV:
                fac = (t.fac[:k] + (F(_DERIV[f.kind], (j, f.idx[0])),)
                       + t.fac[k + 1:])
                out.append(Term(t.coeff, fac, t.word, t.norm, t.trid, t.vol))
            elif f.kind in ("du", "dw", "dv") and strict:
                raise NormalizeError("second derivative of a vector field "
                                     "is not representable")
    return normalize(out)


def d_xi(sym: PDOSymbol, j: Idx) -> PDOSymbol:
    return PDOSymbol(
        {(o[0] - 1, o[1]): Component(d_xi_terms(c.terms, j), c.xtrunc)
         for o, c in sym.comps.items()},
        sym.exact, sym.at_origin, check=False)


def d_x(sym: PDOSymbol, j: Idx) -> PDOSymbol:
    if sym.at_origin:
        raise NormalizeError("cannot x-differentiate an origin value")
    return PDOSymbol(
        {o: Component(d_x_terms(c.terms, j),
                      None if c.xtrunc is None else c.xtrunc - 1)
         for o, c in sym.comps.items()},
        sym.exact, check=False)


def _xt_sub(xt: int | None, k: int) -> int | None:
    return None if xt is None else xt - k


def _xt_min(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _fresh_labels(term_lists, count: int) -> list[str]:
    used = set()
    for terms in term_lists:
        for t in terms:
            for f in t.fac:
                used.update(i for i in f.idx if isinstance(i, str))
            used.update(g.idx for g in t.word if isinstance(g.idx, str))
    out = []
    j = 0
    while len(out) < count:
        cand = f"_a{j}"
        if cand not in used:
            out.append(cand)
        j += 1
    return out


def composition_summand(p: Component, q: Component,
                        nalpha: int) -> tuple[tuple[Term, ...], int | None]:
    """One block of the composition expansion:

        (-i)^a / a! * sum over a abstract slots of
        (d_xi^a p-terms) * (d_x^a q-terms).

    The multi-index sum collapses to an unrestricted sum over slot labels
    shared between the two halves.
    """
    left = p.terms
    labels = _fresh_labels((p.terms, q.terms), nalpha)
    for lab in labels:
        left = d_xi_terms(left, lab)
        if not left:
            return (), None
    qx = _xt_sub(q.xtrunc, nalpha)
    if qx is not None and qx < 0:
        raise TruncationError(
            f"{nalpha} x-derivative(s) exceed the stored x-Taylor order")
    right = q.terms
    for lab in labels:
        right = d_x_terms(right, lab)
    pref = S_ONE
    for k in range(nalpha):
        pref = pref * (-S_I)
        pref = pref * Scalar.frac(1, k + 1)
    out = [mul_terms(a, b) for a in left for b in right]
    if nalpha:
        out = [Term(t.coeff * pref, t.fac, t.word, t.norm, t.trid, t.vol)
               for t in out]
    # left unnormalized: callers evaluate at the origin first, which is far
    # cheaper than canonicalizing x-heavy products that are about to vanish
    return tuple(out), _xt_min(p.xtrunc, qx)


_ALPHA_CAP = 6


def compose(P: PDOSymbol, Q: PDOSymbol,
            targets: Iterable[Order]) -> PDOSymbol:
    """Symbol composition truncated to the requested orders.

    sigma(PQ) = sum_alpha (-i)^|a|/a! d_xi^a sigma(P) d_x^a sigma(Q), with
    |a| forced by homogeneity per component pair.  Missing but needed data
    raises TruncationError; a vanishing xi-derivative side short-circuits
    before the x side is examined.
    """
    if P.at_origin or Q.at_origin:
        raise NormalizeError("cannot compose origin values")
    comps: dict[Order, Component] = {}
    for target in targets:
        if not P.exact and P.comps:
            # a truncated left factor must hold every order the target can
            # draw on (the alpha = 0 pairing with Q's top already reaches
            # down to target - q_top)
            slopes = {o[1] for o in P.comps}
            if len(slopes) == 1:
                (sp,) = slopes
                qs = [o for o in Q.comps if o[1] == target[1] - sp]
                if qs:
                    q_top = max(o[0] for o in qs)
                    p_floor = min(o[0] for o in P.comps)
                    if target[0] - q_top < p_floor:
                        raise TruncationError(
                            f"left factor lacks orders below "
                            f"{(p_floor, sp)} needed for target {target}")
        acc: list[Term] = []
        xt: int | None = None
        have = False
        for p_ord in sorted(P.comps, reverse=True):
            pcomp = P.comps[p_ord]
            if not pcomp.terms:
                continue
            for nalpha in range(_ALPHA_CAP + 1):
                q_ord = (target[0] - p_ord[0] + nalpha, target[1] - p_ord[1])
                try:
                    qcomp = Q.component(q_ord)
                except TruncationError:
                    # only fatal if the xi side survives differentiation
                    probe = pcomp.terms
                    for lab in _fresh_labels((pcomp.terms,), nalpha):
                        probe = d_xi_terms(probe, lab)
                        if not probe:
                            break
                    if probe:
                        raise
                    continue
                if not qcomp.terms:
                    continue
                terms, sxt = composition_summand(pcomp, qcomp, nalpha)
                if terms:
                    acc.extend(terms)
                    xt = _xt_min(xt, sxt) if have else sxt
                    have = True
        comps[target] = Component(tuple(acc), xt)
    return PDOSymbol(comps, exact=False)


def _origin_terms(terms) -> list[Term]:
    return [t for t in terms if not any(f.kind == "x" for f in t.fac)]


def terms_equal_taylor(a: Iterable[Term], b: Iterable[Term],
                       xorder: int = 2) -> bool:
    """Equality of two symbol term sums as the Taylor data they carry.

    Compares the origin values of the sums and of their x-derivatives up to
    xorder against distinct free slot labels.  This is the faithful reading
    of x-truncated symbol data, and the free labels pin down factor sectors
    that pure relabeling cannot (two structurally identical curvature
    factors, say).
    """
    from .terms import sums_equal
    lab = _fresh_labels((a, b), xorder)
    ca, cb = tuple(a), tuple(b)
    for k in range(xorder + 1):
        if not sums_equal(_origin_terms(ca), _origin_terms(cb)):
            return False
        if k == xorder:
            break
        ca = d_x_terms(ca, lab[k], strict=False)
        cb = d_x_terms(cb, lab[k], strict=False)
    return True


def evaluate_at_origin(sym: PDOSymbol) -> PDOSymbol:
    """Drop every term of positive x-degree; requires each component's
    x-Taylor data to be valid at degree zero."""
    comps = {}
    for order, compo in sym.comps.items():
        if compo.xtrunc is not None and compo.xtrunc < 0:
            raise TruncationError("component no longer carries its value at "
                                  "the origin")
        kept = tuple(t for t in compo.terms
                     if not any(f.kind == "x" for f in t.fac))
        comps[order] = Component(kept, None)
    return PDOSymbol(comps, sym.exact, at_origin=True, check=False)
