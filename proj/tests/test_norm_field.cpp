#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lcft/lubin_tate.hpp"
#include "lcft/norm_field.hpp"

using namespace lcft;

namespace {

const LubinTateTower& depth3_tower() {
    static LubinTateTower lt = build_lubin_tate_tower(3, 1, 8, {0, 3, 0, 1}, 3);
    return lt;
}

const LubinTateTower& depth2_tower_m2() {
    static LubinTateTower lt = build_lubin_tate_tower(3, 2, 8, {0, 3, 0, 1}, 2);
    return lt;
}

}  // namespace

TEST_CASE("prime vector validates with valuation 1; perturbation is rejected") {
    const LubinTateTower& lt = depth3_tower();
    NormField X(lt.tower);
    NormVector Pi = X.prime(lt.primes);
    CHECK(X.valuation(Pi) == 1);
    CHECK(X.classify(Pi) == NormField::Ring::MaximalIdeal);
    // all-ones is a valid unit
    NormVector ones = X.one();
    CHECK(X.valuation(ones) == 0);
    // perturb one coordinate by (1 + pi): no longer norm compatible
    std::vector<StageElem> bad = lt.primes;
    bad[2] = lt.tower.mul(bad[2], lt.tower.add(lt.tower.one(2), lt.tower.pi(2)));
    CHECK_THROWS_AS(X.from_coords(bad), NotNormCompatible);
}

TEST_CASE("stabilizing addition: a + 0 = a, a + (-a) = 0, ones + ones matches") {
    const LubinTateTower& lt = depth3_tower();
    NormField X(lt.tower);
    std::mt19937_64 rng(5);
    NormVector a = X.from_top(lt.tower.random_unit(3, rng));
    // a + 0: zero vector built from zero coordinates
    std::vector<StageElem> zc;
    for (int s = 0; s <= 3; ++s) zc.push_back(lt.tower.zero(s, lt.tower.abs_cap(s)));
    NormVector zero = X.from_coords(zc);
    AddRecord rec;
    NormVector sum = X.add(a, zero, &rec);
    CHECK(X.eq_stabilized(sum, a, 1));
    // a + (-a) = 0 to precision
    NormVector z = X.add(a, X.neg(a));
    CHECK(X.is_zero_stabilized(z));
    for (int k = 0; k < 3; ++k) CHECK(lt.tower.zero_to_prec(z.a[k]));
}

TEST_CASE("char p: p-fold sum of Pi vanishes to precision (stabilized at depth 3)") {
    const LubinTateTower& lt = depth3_tower();
    NormField X(lt.tower);
    NormVector Pi = X.prime(lt.primes);
    AddRecord rec;
    NormVector two = X.add(Pi, Pi, &rec);
    NormVector three = X.add(two, Pi, &rec);
    CHECK(X.is_zero_stabilized(three));
    for (int k = 0; k < 3; ++k) CHECK(lt.tower.zero_to_prec(three.a[k]));
    // and p-fold sum of a sampled unit vanishes too
    std::mt19937_64 rng(11);
    NormVector u = X.from_top(lt.tower.random_unit(3, rng));
    NormVector acc = X.add(u, u);
    acc = X.add(acc, u);
    CHECK(X.is_zero_stabilized(acc));
    for (int k = 0; k < 3; ++k) CHECK(lt.tower.zero_to_prec(acc.a[k]));
}

TEST_CASE("multiplication is componentwise and exact: nu(Pi*Pi) = 2, u*u^-1 = 1") {
    const LubinTateTower& lt = depth3_tower();
    NormField X(lt.tower);
    NormVector Pi = X.prime(lt.primes);
    CHECK(X.valuation(X.mul(Pi, Pi)) == 2);
    std::mt19937_64 rng(13);
    NormVector u = X.from_top(lt.tower.random_unit(3, rng));
    NormVector uu = X.mul(u, X.inv(u));
    CHECK(X.eq_weak(uu, X.one(), lt.tower.abs_cap(0) / 2));
    CHECK(X.valuation(Pi) == 1);
}

TEST_CASE("field axioms on sampled triples at the recorded precision") {
    const LubinTateTower& lt = depth3_tower();
    NormField X(lt.tower);
    std::mt19937_64 rng(17);
    for (int t = 0; t < 3; ++t) {
        NormVector a = X.from_top(lt.tower.random_unit(3, rng));
        NormVector b = X.from_top(lt.tower.random_unit(3, rng));
        NormVector c = X.from_top(lt.tower.random_unit(3, rng));
        AddRecord r1, r2;
        NormVector ab = X.add(a, b, &r1);
        NormVector bc = X.add(b, c, &r2);
        NormVector lhs = X.add(ab, c);
        NormVector rhs = X.add(a, bc);
        CHECK(X.eq_stabilized(lhs, rhs, 1));
        // commutativity (exact: same stabilized sequences)
        NormVector ba = X.add(b, a);
        CHECK(X.eq_stabilized(ab, ba, 1));
        // distributivity
        NormVector lhs2 = X.mul(a, ab);
        NormVector rhs2 = X.add(X.mul(a, a), X.mul(a, b));
        CHECK(X.eq_stabilized(lhs2, rhs2, 1));
    }
}

TEST_CASE("valuation is discrete: nu(ab) = nu(a) + nu(b), ultrametric on sums") {
    const LubinTateTower& lt = depth3_tower();
    NormField X(lt.tower);
    NormVector Pi = X.prime(lt.primes);
    std::mt19937_64 rng(19);
    NormVector u = X.from_top(lt.tower.random_unit(3, rng));
    NormVector x = X.mul(Pi, u);
    CHECK(X.valuation(x) == X.valuation(Pi) + X.valuation(u));
    NormVector s = X.add(x, Pi);
    CHECK(X.valuation(s) >= std::min(X.valuation(x), X.valuation(Pi)));
}

TEST_CASE("frobenius additivity in char p: (a+b)^p = a^p + b^p componentwise") {
    const LubinTateTower& lt = depth3_tower();
    NormField X(lt.tower);
    std::mt19937_64 rng(23);
    NormVector a = X.from_top(lt.tower.random_unit(3, rng));
    NormVector b = X.from_top(lt.tower.random_unit(3, rng));
    NormVector lhs = X.pow(X.add(a, b), 3);
    NormVector rhs = X.add(X.pow(a, 3), X.pow(b, 3));
    CHECK(X.eq_stabilized(lhs, rhs, 1));
}

TEST_CASE("unit filtration: Pi in the maximal ideal, ones at every level, 1+Pi at level 1") {
    const LubinTateTower& lt = depth3_tower();
    NormField X(lt.tower);
    NormVector Pi = X.prime(lt.primes);
    CHECK(X.classify(Pi) == NormField::Ring::MaximalIdeal);
    NormVector ones = X.one();
    CHECK(X.classify(ones) == NormField::Ring::Units);
    CHECK(X.unit_level(ones) >= lt.tower.abs_cap(3) / 2);  // 1 - 1 vanishes
    NormVector u = X.add(X.one(), Pi);
    CHECK(X.classify(u) == NormField::Ring::Units);
    CHECK(X.unit_level(u) == 1);
}

TEST_CASE("diamond membership: plain vectors yes, twisted K-coordinate no") {
    const LubinTateTower& lt = depth2_tower_m2();
    NormField X(lt.tower);
    NormVector ones = X.one();
    CHECK(X.diamond_member(ones));
    // multiply the K-tilde coordinate test subject by a GF(9)\GF(3) unit
    const FqCtx& kap = lt.tower.base().kappa();
    StageElem twist = lt.tower.lift_digit(2, kap.generator());
    NormVector tw_vec = X.from_top(twist);
    CHECK_FALSE(X.diamond_member(tw_vec));
    // plain member test: ones is plain, the twisted vector is not
    CHECK(X.plain_member(ones, 4));
    CHECK_FALSE(X.plain_member(tw_vec, 4));
}

TEST_CASE("galois action: id trivial, sigma(Pi)/Pi a validated unit, phi commutes") {
    const LubinTateTower& lt = depth2_tower_m2();
    NormField X(lt.tower);
    NormVector Pi = X.prime(lt.primes);
    GaloisElement id = lt.tower.galois_identity(2);
    NormVector same = X.galois_act(id, Pi);
    CHECK(X.eq_weak(same, Pi, 4));
    const GaloisElement& s = lt.sigma(2);
    NormVector sPi = X.galois_act(s, Pi);
    X.validate(sPi);
    NormVector ratio = X.mul(sPi, X.inv(Pi));
    CHECK(X.valuation(ratio) == 0);
    X.validate(ratio);
    // (a^tau)^phi = (a^phi)^tau
    std::mt19937_64 rng(29);
    NormVector y = X.from_top(lt.tower.random_unit(2, rng));
    NormVector lhs = X.phi(X.galois_act(s, y));
    NormVector rhs = X.galois_act(s, X.phi(y));
    CHECK(X.eq_weak(lhs, rhs, 4));
}

TEST_CASE("coleman norm: full tower to M = E_1; primes map to primes; identity at M = L") {
    const LubinTateTower& lt = depth2_tower_m2();
    NormField X(lt.tower);
    NormVector Pi = X.prime(lt.primes);
    NormVector PiM = X.coleman_norm(Pi, 1);
    X.validate(PiM);
    // the M/K prime vector: (pi_K, pi_1, pi_1)
    CHECK(lt.tower.eq_weak(PiM.a[0], lt.primes[0], 4));
    CHECK(lt.tower.eq_weak(PiM.a[1], lt.primes[1], 4));
    CHECK(lt.tower.eq_weak(PiM.a[2], lt.tower.embed(lt.primes[1], 1), 4));
    // identity: M = L
    NormVector same = X.coleman_norm(Pi, 2);
    CHECK(X.eq_weak(same, Pi, 4));
    // unit in, unit out, with diamond preserved
    std::mt19937_64 rng(31);
    NormVector u = X.from_top(lt.tower.random_unit(2, rng));
    NormVector nu_ = X.coleman_norm(u, 1);
    CHECK(X.valuation(nu_) == 0);
    NormVector plain = X.one();
    CHECK(X.plain_member(X.coleman_norm(plain, 1), 4));
}

TEST_CASE("lambda lift: prepends norms, maps Pi_{L/F} to Pi_{L/K}, F = K identity") {
    const LubinTateTower& lt = depth2_tower_m2();
    NormField X(lt.tower);
    // L/F vector over F = E_1: coordinates (pi_1, pi_2)
    std::vector<StageElem> tail = {lt.primes[1], lt.primes[2]};
    NormVector PiLF;
    PiLF.tw = &lt.tower;
    PiLF.base_stage = 1;
    PiLF.top_stage = 2;
    PiLF.a = tail;
    X.validate(PiLF);
    NormVector lifted = X.lambda_lift(PiLF);
    NormVector PiLK = X.prime(lt.primes);
    CHECK(X.eq_weak(lifted, PiLK, 4));
    // F = K: identity
    NormVector same = X.lambda_lift(PiLK);
    CHECK(X.eq_weak(same, PiLK, 4));
    // unit filtration preserved
    std::mt19937_64 rng(37);
    StageElem topu = lt.tower.random_unit(2, rng);
    NormVector uLF = X.from_top(topu, 1);
    NormVector ulift = X.lambda_lift(uLF);
    CHECK(X.valuation(ulift) == 0);
    X.validate(ulift);
}

TEST_CASE("epsilon embedding on the configured chain: identity at index 0, norms below") {
    const LubinTateTower& lt = depth3_tower();
    NormField X(lt.tower);
    std::mt19937_64 rng(41);
    NormVector a = X.from_top(lt.tower.random_unit(3, rng));
    NormVector b = X.from_top(lt.tower.random_unit(3, rng));
    NormVector ea = X.epsilon_embed(a, 1);
    CHECK(X.eq_weak(ea, a, 4));  // back-filling by norms reproduces a coherent vector
    CHECK(X.valuation(ea) == X.valuation(a));
    // multiplicativity
    NormVector eab = X.epsilon_embed(X.mul(a, b), 1);
    CHECK(X.eq_weak(eab, X.mul(ea, X.epsilon_embed(b, 1)), 4));
    // injectivity on samples: distinct in, distinct out
    CHECK_FALSE(X.eq_weak(ea, X.epsilon_embed(b, 1), 4));
    // index past depth
    CHECK_THROWS_AS(X.epsilon_embed(a, 7), StabilizationNotReached);
}

TEST_CASE("stabilization invariant: once two consecutive levels agree, deeper ones do too") {
    const LubinTateTower& lt = depth3_tower();
    NormField X(lt.tower);
    std::mt19937_64 rng(43);
    NormVector x = X.from_top(lt.tower.random_unit(3, rng));
    NormVector y = X.from_top(lt.tower.random_unit(3, rng));
    // coordinate 0: compare all consecutive norm sums by hand
    std::vector<StageElem> seq;
    for (int j = 0; j <= 3; ++j) {
        StageElem s = lt.tower.add(x.a[j], y.a[j]);
        seq.push_back(j > 0 ? lt.tower.norm_to(s, 0) : s);
    }
    // agreement between consecutive levels is nondecreasing with depth
    long prev_agree = -1;
    for (size_t j = 0; j + 1 < seq.size(); ++j) {
        StageElem diff = lt.tower.sub(seq[j], seq[j + 1]);
        long agree = lt.tower.known_zero_prec(diff);
        if (prev_agree >= 0) CHECK(agree >= prev_agree);
        prev_agree = agree;
    }
    CHECK(prev_agree > 0);
}
