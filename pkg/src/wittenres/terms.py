"""Shared exact term algebra.

A Term couples a Q(i)(m) coefficient with a multiset of indexed tensor
factors, an ordered word in the two Clifford generator families, a power of
|xi|, and unit tokens for tr[id] and Vol(S^{n-1}).  Index labels are either
concrete frame indices (int, 1-based) or symbolic labels (str).  A symbolic
label occurring exactly twice in a term is a dummy summed over 1..n; a label
occurring once is free.  Labels starting with "_" are reserved for generated
names.

normalize() rewrites a sum of terms to a canonical merged form:
  * deltas with a dummy slot are substituted away (delta(a,a) -> n = 2m),
  * Riemann/Ricci self-contractions reduce to Ricci / scalar curvature,
  * words are normal ordered (C family before CHAT, indices ascending,
    equal adjacent pairs contracted) with the anticommutator delta branches,
  * xi / x monomial labels are symmetrized (the monomials are symmetric),
  * dummies are renamed canonically and monoterm tensor symmetries are
    resolved by a minimal-presentation search with antisymmetry zero
    detection,
  * identical presentations are merged, zero coefficients dropped.
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterable, NamedTuple

from .scalars import S_N, S_ONE, S_ZERO, Scalar

Idx = int | str


class F(NamedTuple):
    kind: str
    idx: tuple[Idx, ...]


class G(NamedTuple):
    fam: str  # 'c' or 'h' (hat family)
    idx: Idx


class Term(NamedTuple):
    coeff: Scalar
    fac: tuple[F, ...]
    word: tuple[G, ...] = ()
    norm: tuple[int, int] = (0, 0)  # |xi| exponent: const + slope*m
    trid: int = 0
    vol: int = 0


class ContractViolation(Exception):
    """Malformed index structure (label used more than twice, etc.)."""


class NormalizeError(Exception):
    """Normalization could not complete."""


KIND_ARITY = {
    "scal": 0, "guw": 0, "ricuw": 0, "vsq": 0,
    "delta": 2, "ric": 2, "riem": 4,
    "u": 1, "w": 1, "v": 1,
    "du": 2, "dw": 2, "dv": 2,
    "xi": 1, "x": 1,
}
KIND_RANK = {k: i for i, k in enumerate(
    ("scal", "guw", "ricuw", "vsq", "riem", "ric", "delta",
     "u", "w", "v", "du", "dw", "dv", "xi", "x"))}
ATOM_KINDS = ("scal", "guw", "ricuw", "vsq")

# Monoterm symmetry variants: (slot permutation, sign).
_RIEM_VARIANTS = (
    ((0, 1, 2, 3), 1), ((1, 0, 2, 3), -1), ((0, 1, 3, 2), -1),
    ((1, 0, 3, 2), 1), ((2, 3, 0, 1), 1), ((3, 2, 0, 1), -1),
    ((2, 3, 1, 0), -1), ((3, 2, 1, 0), 1),
)
_SYM2_VARIANTS = (((0, 1), 1), ((1, 0), 1))

_MAX_REQUEUE = 60


def fct(kind: str, *idx: Idx) -> F:
    if len(idx) != KIND_ARITY[kind]:
        raise ValueError(f"{kind} takes {KIND_ARITY[kind]} indices, got {idx}")
    return F(kind, tuple(idx))


def idx_key(i: Idx):
    if isinstance(i, int):
        return (0, i, "")
    return (1, 0, i)


def gen_key(g: G):
    return (0 if g.fam == "c" else 1, idx_key(g.idx))


def factor_key(f: F):
    return (KIND_RANK[f.kind], tuple(idx_key(i) for i in f.idx))


def term_key(t: Term):
    return (tuple(factor_key(f) for f in t.fac),
            tuple(gen_key(g) for g in t.word),
            t.norm, t.trid, t.vol)


def label_counts(t: Term) -> dict[str, int]:
    counts: dict[str, int] = {}
    for f in t.fac:
        for i in f.idx:
            if isinstance(i, str):
                counts[i] = counts.get(i, 0) + 1
    for g in t.word:
        if isinstance(g.idx, str):
            counts[g.idx] = counts.get(g.idx, 0) + 1
    return counts


def map_labels(t: Term, sub: dict[str, Idx]) -> Term:
    if not sub:
        return t
    fac = tuple(F(f.kind, tuple(sub.get(i, i) if isinstance(i, str) else i
                                for i in f.idx)) for f in t.fac)
    word = tuple(G(g.fam, sub.get(g.idx, g.idx) if isinstance(g.idx, str)
                   else g.idx) for g in t.word)
    return Term(t.coeff, fac, word, t.norm, t.trid, t.vol)


def free_labels(t: Term) -> set[str]:
    return {lab for lab, c in label_counts(t).items() if c == 1}


def mul_terms(a: Term, b: Term) -> Term:
    """Product of two terms; dummies renamed apart, shared free labels kept
    (they become the contraction channels of the product)."""
    ca, cb = label_counts(a), label_counts(b)
    used = set(ca) | set(cb)
    fresh = 0

    def rename(counts):
        nonlocal fresh
        sub = {}
        for lab, c in counts.items():
            if c == 2:
                while f"_m{fresh}" in used:
                    fresh += 1
                sub[lab] = f"_m{fresh}"
                used.add(f"_m{fresh}")
                fresh += 1
            elif c > 2:
                raise ContractViolation(f"label {lab!r} occurs {c} times")
        return sub

    a = map_labels(a, rename(ca))
    b = map_labels(b, rename(cb))
    return Term(a.coeff * b.coeff, a.fac + b.fac, a.word + b.word,
                (a.norm[0] + b.norm[0], a.norm[1] + b.norm[1]),
                a.trid + b.trid, a.vol + b.vol)


def mul_sums(aa: Iterable[Term], bb: Iterable[Term]) -> tuple[Term, ...]:
    bb = tuple(bb)
    return tuple(mul_terms(a, b) for a in aa for b in bb)


def scale(terms: Iterable[Term], s: Scalar) -> tuple[Term, ...]:
    return tuple(Term(t.coeff * s, t.fac, t.word, t.norm, t.trid, t.vol)
                 for t in terms)


# ---------------------------------------------------------------------------
# reduction rules


def _riem_pair_sign(p: int, q: int):
    """Reduction of a dummy pair inside one Riemann factor.

    Positions {0,2}->+Ric, {0,3}->-Ric, {1,2}->-Ric, {1,3}->+Ric on the two
    remaining slots; {0,1} and {2,3} vanish by antisymmetry.
    """
    pair = (p, q)
    if pair in ((0, 1), (2, 3)):
        return None
    sign = {(0, 2): 1, (0, 3): -1, (1, 2): -1, (1, 3): 1}[pair]
    rest = [s for s in range(4) if s not in pair]
    return sign, rest


def _contract_once(t: Term, counts):
    """Apply one reduction rule. Returns None (no rule fired), 'zero',
    or a replacement Term."""
    for k, f in enumerate(t.fac):
        if f.kind == "riem":
            if f.idx[0] == f.idx[1] or f.idx[2] == f.idx[3]:
                return "zero"
            for p in range(4):
                i = f.idx[p]
                if isinstance(i, str) and counts.get(i) == 2:
                    for q in range(p + 1, 4):
                        if f.idx[q] == i:
                            red = _riem_pair_sign(p, q)
                            if red is None:
                                return "zero"
                            sign, rest = red
                            nf = F("ric", (f.idx[rest[0]], f.idx[rest[1]]))
                            coeff = t.coeff if sign == 1 else -t.coeff
                            fac = t.fac[:k] + (nf,) + t.fac[k + 1:]
                            return Term(coeff, fac, t.word, t.norm,
                                        t.trid, t.vol)
        elif f.kind == "ric":
            i = f.idx[0]
            if (f.idx[1] == i and isinstance(i, str)
                    and counts.get(i) == 2):
                fac = t.fac[:k] + (F("scal", ()),) + t.fac[k + 1:]
                return Term(t.coeff, fac, t.word, t.norm, t.trid, t.vol)
        elif f.kind == "delta":
            i, j = f.idx
            rest = t.fac[:k] + t.fac[k + 1:]
            if isinstance(i, int) and isinstance(j, int):
                if i == j:
                    return Term(t.coeff, rest, t.word, t.norm, t.trid, t.vol)
                return "zero"
            if i == j:  # same symbolic label: trace of the identity
                if counts.get(i) != 2:
                    raise ContractViolation(
                        f"delta({i},{i}) with label count {counts.get(i)}")
                return Term(t.coeff * S_N, rest, t.word, t.norm,
                            t.trid, t.vol)
            for a, b in ((i, j), (j, i)):
                if isinstance(a, str) and counts.get(a) == 2:
                    out = map_labels(
                        Term(t.coeff, rest, t.word, t.norm, t.trid, t.vol),
                        {a: b})
                    return out
            # both slots free (or free/concrete): delta is kept
    # paired xi factors with one dummy label: sum_a xi_a^2 = |xi|^2
    seen: dict[tuple, int] = {}
    for k, f in enumerate(t.fac):
        if f.kind in ("xi", "x"):
            i = f.idx[0]
            if isinstance(i, str) and counts.get(i) == 2:
                key = (f.kind, i)
                if key in seen:
                    if f.kind == "x":
                        raise NormalizeError("contracted x*x pair has no "
                                             "norm carrier")
                    fac = tuple(ff for n, ff in enumerate(t.fac)
                                if n not in (seen[key], k))
                    return Term(t.coeff, fac, t.word,
                                (t.norm[0] + 2, t.norm[1]), t.trid, t.vol)
                seen[key] = k
    # atom recognition on fully contracted pieces
    by_kind: dict[str, list[int]] = {}
    for k, f in enumerate(t.fac):
        by_kind.setdefault(f.kind, []).append(k)
    if "u" in by_kind and "w" in by_kind:
        for ku in by_kind["u"]:
            lu = t.fac[ku].idx[0]
            if not (isinstance(lu, str) and counts.get(lu) == 2):
                continue
            for kw in by_kind["w"]:
                if t.fac[kw].idx[0] == lu:
                    fac = tuple(ff for n, ff in enumerate(t.fac)
                                if n not in (ku, kw)) + (F("guw", ()),)
                    return Term(t.coeff, fac, t.word, t.norm, t.trid, t.vol)
            for kr in by_kind.get("ric", ()):
                ric = t.fac[kr]
                if lu not in ric.idx:
                    continue
                other = ric.idx[1] if ric.idx[0] == lu else ric.idx[0]
                if not (isinstance(other, str) and counts.get(other) == 2):
                    continue
                for kw in by_kind["w"]:
                    if t.fac[kw].idx[0] == other:
                        fac = tuple(ff for n, ff in enumerate(t.fac)
                                    if n not in (ku, kw, kr)) + (F("ricuw", ()),)
                        return Term(t.coeff, fac, t.word, t.norm,
                                    t.trid, t.vol)
    vs = by_kind.get("v", ())
    for a in range(len(vs)):
        la = t.fac[vs[a]].idx[0]
        if not (isinstance(la, str) and counts.get(la) == 2):
            continue
        for b in range(a + 1, len(vs)):
            if t.fac[vs[b]].idx[0] == la:
                fac = tuple(ff for n, ff in enumerate(t.fac)
                            if n not in (vs[a], vs[b])) + (F("vsq", ()),)
                return Term(t.coeff, fac, t.word, t.norm, t.trid, t.vol)
    return None


def _partner_keys(t: Term, counts):
    """Intrinsic sort keys for the word generators.

    A generator's index is ordered by what it contracts against (a concrete
    frame index, a free label, a factor slot, or another word position),
    never by the arbitrary dummy name, so normal ordering is stable under
    relabeling and different derivation paths straighten to the same form.
    """
    fmap: dict[str, tuple] = {}
    for f in t.fac:
        skey = _structural_key(f, counts)
        for slot, i in enumerate(f.idx):
            if isinstance(i, str) and counts.get(i) == 2:
                fmap[i] = (KIND_RANK[f.kind], slot, skey)
    keys = []
    for g in t.word:
        fam = 0 if g.fam == "c" else 1
        i = g.idx
        if isinstance(i, int):
            keys.append((fam, (0, (i,), ())))
        elif counts.get(i) == 1:
            keys.append((fam, (1, (0,), (i,))))
        elif i in fmap:
            rank, slot, skey = fmap[i]
            keys.append((fam, (2, (rank, slot), skey)))
        else:
            keys.append((fam, (3, (0,), ())))  # paired inside the word
    return keys


def _word_once(t: Term, counts):
    """One word rewriting step toward normal order, or None if ordered."""
    w = t.word
    keys = _partner_keys(t, counts)
    for p in range(len(w) - 1):
        g1, g2 = w[p], w[p + 1]
        if g1.fam == "h" and g2.fam == "c":
            nw = w[:p] + (g2, g1) + w[p + 2:]
            return [Term(-t.coeff, t.fac, nw, t.norm, t.trid, t.vol)]
        if g1.fam != g2.fam:
            continue
        if g1.idx == g2.idx:
            sign = -S_ONE if g1.fam == "c" else S_ONE
            coeff = t.coeff * sign
            if isinstance(g1.idx, str):
                if counts.get(g1.idx) == 2:
                    coeff = coeff * S_N  # the dummy pair sums to n
                else:
                    raise ContractViolation(
                        f"word label {g1.idx!r} occurs {counts.get(g1.idx)} "
                        "times")
            nw = w[:p] + w[p + 2:]
            return [Term(coeff, t.fac, nw, t.norm, t.trid, t.vol)]
        if keys[p] > keys[p + 1]:
            swapped = w[:p] + (g2, g1) + w[p + 2:]
            two = Scalar.of(-2) if g1.fam == "c" else Scalar.of(2)
            contracted = w[:p] + w[p + 2:]
            return [
                Term(-t.coeff, t.fac, swapped, t.norm, t.trid, t.vol),
                Term(t.coeff * two, t.fac + (F("delta", (g1.idx, g2.idx)),),
                     contracted, t.norm, t.trid, t.vol),
            ]
    return None


def _reduce(t: Term) -> list[Term]:
    out = []
    stack = [t]
    while stack:
        cur = stack.pop()
        if cur.coeff.is_zero():
            continue
        counts = label_counts(cur)
        if any(c > 2 for c in counts.values()):
            bad = [la for la, c in counts.items() if c > 2]
            raise ContractViolation(f"labels {bad} occur more than twice")
        step = _contract_once(cur, counts)
        if step == "zero":
            continue
        if step is not None:
            stack.append(step)
            continue
        wstep = _word_once(cur, counts)
        if wstep is not None:
            stack.extend(wstep)
            continue
        out.append(cur)
    return out


def _symmetrize(t: Term) -> list[Term]:
    """Average over permutations of the dummy xi (and x) monomial labels;
    the monomials are symmetric so this is value preserving."""
    out = [t]
    for kind in ("xi", "x"):
        nxt = []
        for cur in out:
            counts = label_counts(cur)
            cross = {f.idx[0] for f in cur.fac
                     if f.kind in ("xi", "x") and f.kind != kind}
            labs = [f.idx[0] for f in cur.fac
                    if f.kind == kind and isinstance(f.idx[0], str)
                    and counts.get(f.idx[0]) == 2 and f.idx[0] not in cross]
            if len(labs) < 2:
                nxt.append(cur)
                continue
            perms = list(permutations(labs))
            inv = Scalar.frac(1, len(perms))
            slots = [k for k, f in enumerate(cur.fac)
                     if f.kind == kind and f.idx[0] in labs]
            for perm in perms:
                sub = dict(zip(labs, perm))
                moved = map_labels(cur, sub)
                # restore the monomial slots themselves (relabel the rest)
                fac = list(moved.fac)
                for k in slots:
                    fac[k] = cur.fac[k]
                nxt.append(Term(cur.coeff * inv, tuple(fac), moved.word,
                                cur.norm, cur.trid, cur.vol))
        out = nxt
    return out


def _structural_key(f: F, counts):
    cls = []
    for i in f.idx:
        if isinstance(i, int):
            cls.append((0, i, ""))
        elif counts.get(i) == 1:
            cls.append((1, 0, i))
        else:
            cls.append((2, 0, ""))
    return (KIND_RANK[f.kind], tuple(cls))


def _variants(f: F):
    if f.kind == "riem":
        return [(F("riem", tuple(f.idx[p] for p in perm)), s)
                for perm, s in _RIEM_VARIANTS]
    if f.kind in ("delta", "ric"):
        return [(F(f.kind, tuple(f.idx[p] for p in perm)), s)
                for perm, s in _SYM2_VARIANTS]
    return [(f, 1)]


def _finalize(t: Term, counts):
    """Canonical minimal presentation, or a requeue list if the word must be
    re-sorted under canonical dummy names, or None when the term vanishes
    by antisymmetry."""
    # canonical names for word dummies come from the word scan alone
    wmap: dict[str, str] = {}
    for g in t.word:
        i = g.idx
        if isinstance(i, str) and counts.get(i) == 2 and i not in wmap:
            wmap[i] = f"_d{len(wmap):02d}"
    renamed_word = tuple(G(g.fam, wmap.get(g.idx, g.idx))
                         if isinstance(g.idx, str) else g for g in t.word)
    keys = _partner_keys(t, counts)
    for p in range(len(keys) - 1):
        if keys[p] > keys[p + 1]:
            # partner keys are rename invariant, so a reduced word can only
            # be unsorted here if a rewrite above left it stale: relabel
            # every dummy at once and re-sort
            full = {lab: f"_q{k:02d}" for k, lab in enumerate(wmap)}
            for f in t.fac:
                for i in f.idx:
                    if (isinstance(i, str) and counts.get(i) == 2
                            and i not in full):
                        full[i] = f"_q{len(full):02d}"
            return "requeue", _reduce(map_labels(t, full))
    # enumerate factor symmetry variants and orderings of structurally
    # identical factors; pick the lexicographically minimal presentation
    variant_lists = [_variants(f) for f in t.fac]
    base = sorted(range(len(t.fac)),
                  key=lambda k: _structural_key(t.fac[k], counts))
    groups = []
    start = 0
    for k in range(1, len(base) + 1):
        if (k == len(base)
                or _structural_key(t.fac[base[k]], counts)
                != _structural_key(t.fac[base[start]], counts)):
            groups.append(base[start:k])
            start = k
    orderings = [[]]
    for grp in groups:
        orderings = [o + list(p) for o in orderings
                     for p in permutations(grp)]
    choices = [[]]
    for vl in variant_lists:
        choices = [c + [v] for c in choices for v in vl]
    if len(orderings) * len(choices) > 200000:
        raise NormalizeError("canonical search space too large")

    best = None
    best_sign = 1
    sign_seen: dict[tuple, int] = {}
    for order in orderings:
        for choice in choices:
            sign = 1
            for _, s in choice:
                sign *= s
            sub = dict(wmap)
            fac_out = []
            for k in order:
                vf = choice[k][0]
                nidx = []
                for i in vf.idx:
                    if isinstance(i, str) and counts.get(i) == 2:
                        if i not in sub:
                            sub[i] = f"_d{len(sub):02d}"
                        nidx.append(sub[i])
                    else:
                        nidx.append(i)
                fac_out.append(F(vf.kind, tuple(nidx)))
            pres = (tuple(fac_out), renamed_word)
            prev = sign_seen.get(pres)
            if prev is None:
                sign_seen[pres] = sign
            elif prev != sign:
                return None  # t = -t under a symmetry: antisymmetric zero
            key = tuple(factor_key(f) for f in fac_out)
            if best is None or key < best[0]:
                best = (key, fac_out)
                best_sign = sign
    if best is None:
        out = Term(t.coeff, (), renamed_word, t.norm, t.trid, t.vol)
        return "done", out
    coeff = t.coeff if best_sign == 1 else -t.coeff
    return "done", Term(coeff, tuple(best[1]), renamed_word, t.norm,
                        t.trid, t.vol)


def normalize(terms: Iterable[Term]) -> tuple[Term, ...]:
    acc: dict[tuple, tuple[Scalar, Term]] = {}
    work = [(t, False, 0) for t in terms]
    while work:
        t, symmetrized, depth = work.pop()
        if t.coeff.is_zero():
            continue
        if depth > _MAX_REQUEUE:
            raise NormalizeError("canonical labeling did not stabilize")
        reduced = _reduce(t)
        if not symmetrized:
            for r in reduced:
                work.extend((s, True, depth) for s in _symmetrize(r))
            continue
        for r in reduced:
            res = _finalize(r, label_counts(r))
            if res is None:
                continue
            tag, payload = res
            if tag == "requeue":
                work.extend((x, True, depth + 1) for x in payload)
                continue
            out = payload
            key = term_key(out)
            if key in acc:
                acc[key] = (acc[key][0] + out.coeff, out)
            else:
                acc[key] = (out.coeff, out)
    final = []
    for key in sorted(acc):
        coeff, proto = acc[key]
        if not coeff.is_zero():
            final.append(Term(coeff, proto.fac, proto.word, proto.norm,
                              proto.trid, proto.vol))
    return tuple(final)


def sums_equal(a: Iterable[Term], b: Iterable[Term]) -> bool:
    diff = list(a) + [Term(-t.coeff, t.fac, t.word, t.norm, t.trid, t.vol)
                      for t in b]
    return not normalize(diff)
