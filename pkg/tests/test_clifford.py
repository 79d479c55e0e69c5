import random
from fractions import Fraction

import pytest

from wittenres import clifford as cl
from wittenres import oracle
from wittenres.scalars import S_ONE, Scalar
from wittenres.terms import (ContractViolation, F, Term, fct, normalize,
                             sums_equal)


def one(terms):
    assert len(terms) == 1, terms
    return terms[0]


def test_multiply_concatenates_without_reduction():
    a = (cl.word_term((cl.c(1),)),)
    prod = cl.multiply(a, a)
    assert len(prod) == 1
    assert prod[0].word == (cl.c(1), cl.c(1))
    # identity times p is p
    ident = (cl.word_term(()),)
    p = (cl.word_term((cl.c(1), cl.chat(2))),)
    assert cl.multiply(ident, p)[0].word == p[0].word
    mixed = cl.multiply((cl.word_term((cl.c(1),)),),
                        (cl.word_term((cl.chat(2),)),))
    assert mixed[0].word == (cl.c(1), cl.chat(2))


def test_normal_order_contractions():
    t = one(cl.normal_order((cl.c(1), cl.c(1))))
    assert t.word == () and t.coeff == Scalar.of(-1)
    t = one(cl.normal_order((cl.chat(1), cl.chat(1))))
    assert t.word == () and t.coeff == Scalar.of(1)
    t = one(cl.normal_order((cl.chat(2), cl.c(1))))
    assert t.word == (cl.c(1), cl.chat(2)) and t.coeff == Scalar.of(-1)


def test_normal_order_idempotent():
    rng = random.Random(11)
    for _ in range(120):
        word = tuple((cl.c if rng.random() < 0.5 else cl.chat)
                     (rng.randint(1, 4)) for _ in range(rng.randint(0, 6)))
        once = cl.normal_order(word)
        again = normalize(once)
        assert once == again


def test_scalar_part_examples():
    t = one(cl.scalar_part((cl.c("a"), cl.c("b"))))
    assert t.coeff == Scalar.of(-1)
    assert t.fac == (F("delta", ("a", "b")),)
    assert cl.scalar_part((cl.c("a"), cl.c("b"), cl.c("c"))) == ()
    assert one(cl.scalar_part(())).coeff == S_ONE
    # the quartic expansion: d_rj d_fp - d_rf d_jp + d_rp d_jf
    got = cl.scalar_part((cl.c("r"), cl.c("j"), cl.c("f"), cl.c("p")))
    want = [
        Term(S_ONE, (fct("delta", "r", "j"), fct("delta", "f", "p"))),
        Term(Scalar.of(-1), (fct("delta", "r", "f"), fct("delta", "j", "p"))),
        Term(S_ONE, (fct("delta", "r", "p"), fct("delta", "j", "f"))),
    ]
    assert sums_equal(got, want)


def test_scalar_part_hat_family_sign():
    t = one(cl.scalar_part((cl.chat("a"), cl.chat("b"))))
    assert t.coeff == S_ONE  # +delta for the hat family


def test_scalar_part_rejects_mixed_families():
    with pytest.raises(ContractViolation):
        cl.scalar_part((cl.c(1), cl.chat(1)))


def test_trace_basic_values():
    # tr[c(u)c(w)] = -g(u,w) tr[id]
    t = one(cl.trace(cl.multiply((cl.c_vec("u", "r"),),
                                 (cl.c_vec("w", "k"),))))
    assert t.fac == (F("guw", ()),) and t.coeff == Scalar.of(-1)
    assert t.trid == 1
    assert cl.trace([cl.word_term((cl.c(1), cl.chat(1)))]) == ()
    ident = one(cl.trace([cl.word_term(())]))
    assert ident.trid == 1 and ident.coeff == S_ONE
    # with m substituted, tr[id] = 2^(2m) is applied by the caller: 16 at m=2
    re, im = ident.coeff.evaluate(2)
    assert re * 2 ** 4 == 16 and im == 0


def test_trace_odd_family_count_vanishes():
    assert cl.trace([cl.word_term((cl.c(1), cl.c(2), cl.c(3)))]) == ()
    assert cl.trace([cl.word_term((cl.c(1), cl.c(2), cl.chat(1)))]) == ()


def test_trace_six_c_generators_against_curvature():
    # (1/8) R_jpts tr[c(u)c_j c(w)c_p c_s c_t] = (1/4 s g - 1/2 Ric) tr[id]
    base = Term(Scalar.frac(1, 8),
                (fct("riem", "j", "p", "t", "s"), fct("u", "r"),
                 fct("w", "k")),
                (cl.c("r"), cl.c("j"), cl.c("k"), cl.c("p"), cl.c("s"),
                 cl.c("t")))
    got = {(t.fac, str(t.coeff)) for t in cl.trace([base])}
    want = {
        ((F("scal", ()), F("guw", ())), "1/4"),
        ((F("ricuw", ()),), "-1/2"),
    }
    assert got == want


def test_trace_matches_matrix_oracle_randomized():
    rng = random.Random(23)
    for n in (4, 6):
        rep = oracle.matrix_rep(n)
        for _ in range(120):
            word = tuple((cl.c if rng.random() < 0.5 else cl.chat)
                         (rng.randint(1, n))
                         for _ in range(rng.randint(0, 8)))
            sym = cl.trace([cl.word_term(word)])
            if not sym:
                val = Fraction(0)
            else:
                re, im = one(sym).coeff.evaluate(Fraction(n, 2))
                assert im == 0
                val = re * 2 ** n
            assert val == rep.word_trace(word)


def test_trace_cyclicity_via_matrix_oracle():
    rng = random.Random(5)
    n = 4
    rep = oracle.matrix_rep(n)
    for _ in range(40):
        def rand_poly():
            out = []
            for _ in range(rng.randint(1, 3)):
                word = tuple((cl.c if rng.random() < 0.5 else cl.chat)
                             (rng.randint(1, n))
                             for _ in range(rng.randint(0, 4)))
                out.append(Term(Scalar.of(rng.randint(-3, 3)), (), word))
            return tuple(out)

        p, q = rand_poly(), rand_poly()

        def tr_val(terms):
            total = Fraction(0)
            for t in cl.trace(terms):
                re, im = t.coeff.evaluate(Fraction(n, 2))
                assert im == 0
                total += re * 2 ** n
            return total

        pq, qp = tr_val(cl.multiply(p, q)), tr_val(cl.multiply(q, p))
        assert pq == qp
        # and both agree with the matrix trace
        mat = sum(int(a.coeff.evaluate(2)[0]) * int(b.coeff.evaluate(2)[0])
                  * rep.word_trace(a.word + b.word)
                  for a in p for b in q)
        assert pq == mat
