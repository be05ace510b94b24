#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lcft/base_field.hpp"

using namespace lcft;

namespace {

BaseElem rand_elem(const BaseField& F, std::mt19937_64& rng, bool unit = false) {
    const FqCtx& k = F.kappa();
    std::vector<FqCtx::Elt> d;
    for (int i = 0; i < F.N(); ++i) {
        FqCtx::Elt dig = k.zero();
        for (auto& c : dig) c = static_cast<uint32_t>(rng() % F.p());
        if (i == 0 && unit && k.is_zero(dig)) dig = k.one();
        d.push_back(dig);
    }
    long v = unit ? 0 : static_cast<long>(rng() % 5) - 2;
    return F.from_digits(v, std::move(d));
}

}  // namespace

TEST_CASE("Q_3 digit arithmetic at N=3: 2 + 1 = 3 has digits (0,1,0)") {
    BaseField F(true, 3, 1, 1, 3);
    BaseElem s = F.add(F.from_int(2), F.from_int(1));
    CHECK(F.val(s) == 1);
    CHECK(F.kappa().eq(F.digit(s, 1), F.kappa().one()));
    CHECK(F.kappa().is_zero(F.digit(s, 0)));
    CHECK(F.kappa().is_zero(F.digit(s, 2)));
    CHECK(F.agree_prec(s, F.from_int(3)) >= 3);
}

TEST_CASE("a + 0 = a") {
    BaseField F(true, 3, 1, 2, 8);
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
        BaseElem a = rand_elem(F, rng);
        BaseElem s = F.add(a, F.zero(a.absprec()));
        CHECK(F.agree_prec(s, a) >= s.absprec());
    }
}

TEST_CASE("F_2((t)): t^-1 + (t^-1 + 1) = 1") {
    BaseField F(false, 2, 1, 1, 6);
    BaseElem tinv = F.shift(F.one(), -1);
    BaseElem other = F.add(tinv, F.one());
    BaseElem s = F.add(tinv, other);
    CHECK(F.agree_prec(s, F.one()) >= 4);
    CHECK(F.val(s) == 0);
}

TEST_CASE("geometric series: 1/(1+p) = 1 - p + p^2 in Q_p at N=3") {
    BaseField F(true, 5, 1, 1, 3);
    BaseElem x = F.add(F.one(), F.uniformizer());
    BaseElem i = F.inv(x);
    BaseElem expected = F.add(F.sub(F.one(), F.uniformizer()), F.mul(F.uniformizer(), F.uniformizer()));
    CHECK(F.agree_prec(i, expected) >= 3);
    CHECK(F.agree_prec(F.mul(i, x), F.one()) >= 3);
}

TEST_CASE("v(p^2 u) = 2 for a unit u; v(ab) = v(a) + v(b)") {
    BaseField F(true, 3, 1, 2, 10);
    std::mt19937_64 rng(11);
    BaseElem u = rand_elem(F, rng, true);
    CHECK(F.val(F.shift(u, 2)) == 2);
    for (int t = 0; t < 25; ++t) {
        BaseElem a = rand_elem(F, rng);
        BaseElem b = rand_elem(F, rng);
        CHECK(F.val(F.mul(a, b)) == F.val(a) + F.val(b));
        CHECK(F.val(F.add(a, b)) >= std::min(F.val(a), F.val(b)));
        if (F.val(a) != F.val(b)) CHECK(F.val(F.add(a, b)) == std::min(F.val(a), F.val(b)));
    }
}

TEST_CASE("fe_mul(t, t^-1) = 1 in F_q((t))") {
    BaseField F(false, 3, 1, 1, 8);
    BaseElem t = F.uniformizer();
    CHECK(F.agree_prec(F.mul(t, F.inv(t)), F.one()) >= 8);
}

TEST_CASE("ring axioms on random samples (both characteristics)") {
    std::mt19937_64 rng(23);
    for (bool mixed : {true, false}) {
        BaseField F(mixed, 2, 1, 2, 8);
        for (int t = 0; t < 15; ++t) {
            BaseElem a = rand_elem(F, rng), b = rand_elem(F, rng), c = rand_elem(F, rng);
            BaseElem lhs = F.mul(a, F.add(b, c));
            BaseElem rhs = F.add(F.mul(a, b), F.mul(a, c));
            long shared = std::min(lhs.absprec(), rhs.absprec());
            CHECK(F.agree_prec(lhs, rhs) >= shared);
            lhs = F.mul(F.mul(a, b), c);
            rhs = F.mul(a, F.mul(b, c));
            shared = std::min(lhs.absprec(), rhs.absprec());
            CHECK(F.agree_prec(lhs, rhs) >= shared);
            CHECK(F.agree_prec(F.mul(a, b), F.mul(b, a)) >= F.mul(a, b).absprec());
        }
    }
}

TEST_CASE("MixedFields on cross-field operands") {
    BaseField F1(true, 3, 1, 1, 5);
    BaseField F2(true, 3, 1, 2, 5);
    CHECK_THROWS_AS(F1.add(F1.one(), F2.one()), MixedFields);
}

TEST_CASE("DivisionByZeroToPrecision") {
    BaseField F(true, 3, 1, 1, 5);
    CHECK_THROWS_AS(F.inv(F.zero(5)), DivisionByZeroToPrecision);
}

TEST_CASE("frobenius fixes GF(q) digits, moves a GF(q^2) generator, has order m") {
    BaseField F(true, 3, 1, 2, 8);
    const FqCtx& k = F.kappa();
    // an element with digits in the prime subfield is fixed
    BaseElem a = F.from_int(7);
    CHECK(F.phi_fixed(a));
    // a generator of GF(9)^x is moved
    BaseElem g = F.lift_digit(k.generator());
    BaseElem pg = F.phi(g);
    CHECK(F.agree_prec(g, pg) < 1);
    // phi^m = id on random elements
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        BaseElem x = rand_elem(F, rng);
        CHECK(F.agree_prec(F.phi(x, 2), x) >= x.absprec());
    }
}

TEST_CASE("frobenius is a ring homomorphism") {
    for (bool mixed : {true, false}) {
        BaseField F(mixed, 2, 1, 3, 6);
        std::mt19937_64 rng(31);
        for (int t = 0; t < 10; ++t) {
            BaseElem a = rand_elem(F, rng), b = rand_elem(F, rng);
            BaseElem s1 = F.phi(F.add(a, b)), s2 = F.add(F.phi(a), F.phi(b));
            CHECK(F.agree_prec(s1, s2) >= std::min(s1.absprec(), s2.absprec()));
            BaseElem m1 = F.phi(F.mul(a, b)), m2 = F.mul(F.phi(a), F.phi(b));
            CHECK(F.agree_prec(m1, m2) >= std::min(m1.absprec(), m2.absprec()));
        }
    }
}

TEST_CASE("phi fixes the uniformizer") {
    BaseField F(true, 2, 1, 2, 8);
    CHECK(F.phi_fixed(F.uniformizer()));
}

TEST_CASE("char p: (a+b)^p = a^p + b^p exactly") {
    BaseField F(false, 3, 1, 2, 9);
    std::mt19937_64 rng(13);
    for (int t = 0; t < 10; ++t) {
        BaseElem a = rand_elem(F, rng, true), b = rand_elem(F, rng, true);
        BaseElem lhs = F.pow(F.add(a, b), 3);
        BaseElem rhs = F.add(F.pow(a, 3), F.pow(b, 3));
        CHECK(F.agree_prec(lhs, rhs) >= std::min(lhs.absprec(), rhs.absprec()));
    }
}

TEST_CASE("precision propagation: inverse keeps relative precision") {
    BaseField F(true, 3, 1, 1, 10);
    BaseElem a = F.shift(F.from_int(4), 3);  // val 3
    BaseElem i = F.inv(a);
    CHECK(F.val(i) == -3);
    CHECK(i.absprec() - i.val == a.absprec() - a.val);
}

TEST_CASE("zero-to-precision is tracked, not conflated with exact zero") {
    BaseField F(true, 3, 1, 1, 6);
    BaseElem z = F.sub(F.one(), F.one());
    CHECK(z.zero_to_prec());
    CHECK(z.absprec() == 6);
    // adding something of higher valuation than the bound stays zero-bound-limited
    BaseElem tail = F.shift(F.one(), 8);
    BaseElem s = F.add(z, tail);
    CHECK(s.zero_to_prec());
    CHECK(s.absprec() == 6);
}
