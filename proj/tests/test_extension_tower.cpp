#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lcft/tower.hpp"
#include "lcft/unit_subgroup.hpp"

using namespace lcft;

namespace {

// Q_3(sqrt(3)) via x^2 - 3, with sigma(pi) = -pi
Tower q3_sqrt3(uint32_t m = 1, int N = 12) {
    Tower tw(BaseField(true, 3, 1, m, N));
    std::vector<StageElem> g = {tw.from_int(-3), tw.zero(0), tw.from_int(1)};
    tw.add_stage(g);
    tw.set_stage_generators(1, {tw.neg(tw.pi(1))}, 2);
    return tw;
}

}  // namespace

TEST_CASE("x^2 - 3 over Q_3 is accepted with e = 2") {
    Tower tw = q3_sqrt3();
    CHECK(tw.depth() == 1);
    CHECK(tw.e(1) == 2);
    CHECK(tw.e_total(1) == 2);
    // pi^2 = 3 in the stage
    StageElem sq = tw.mul(tw.pi(1), tw.pi(1));
    CHECK(tw.agree_prec(sq, tw.from_int(3, 1)) >= 20);
    CHECK(tw.val(tw.pi(1)) == 1);
    CHECK(tw.val(tw.from_int(3, 1)) == 2);
}

TEST_CASE("x^2 - 1 over Q_3 is rejected") {
    Tower tw(BaseField(true, 3, 1, 1, 8));
    std::vector<StageElem> g = {tw.from_int(-1), tw.zero(0), tw.from_int(1)};
    CHECK_THROWS_AS(tw.add_stage(g), NotEisenstein);
}

TEST_CASE("x^2 + 2x + 2 over Q_2 is Eisenstein (minimal polynomial of zeta_4 - 1)") {
    // hand check of the criterion: constant 2 has v=1, middle 2 has v=1, monic
    Tower tw(BaseField(true, 2, 1, 1, 12));
    std::vector<StageElem> g = {tw.from_int(2), tw.from_int(2), tw.from_int(1)};
    int s = tw.add_stage(g);
    CHECK(s == 1);
    CHECK(tw.e(1) == 2);
}

TEST_CASE("norm and trace on x^2 - 3: N(pi) = -3, tr(pi) = 0, N(u) = u^e") {
    Tower tw = q3_sqrt3();
    StageElem npi = tw.stage_norm(tw.pi(1));
    CHECK(tw.agree_prec(npi, tw.from_int(-3)) >= 10);
    StageElem tpi = tw.stage_trace(tw.pi(1));
    CHECK(tw.zero_to_prec(tpi));
    StageElem u = tw.from_int(5);
    StageElem nu = tw.stage_norm(tw.embed(u, 1));
    CHECK(tw.agree_prec(nu, tw.mul(u, u)) >= 10);
}

TEST_CASE("galois action: sigma(a + b pi) = a - b pi, id trivial, sigma^2 = id") {
    Tower tw = q3_sqrt3();
    GaloisElement sigma;
    sigma.tw = &tw;
    sigma.top = 1;
    sigma.img = {tw.neg(tw.pi(1))};
    StageElem a = tw.from_int(7), b = tw.from_int(4);
    StageElem x = tw.add(tw.embed(a, 1), tw.mul(tw.embed(b, 1), tw.pi(1)));
    StageElem sx = tw.apply(sigma, x);
    StageElem expected = tw.sub(tw.embed(a, 1), tw.mul(tw.embed(b, 1), tw.pi(1)));
    CHECK(tw.agree_prec(sx, expected) >= 20);
    GaloisElement id = tw.galois_identity(1);
    CHECK(tw.agree_prec(tw.apply(id, x), x) >= tw.absprec(x));
    CHECK(tw.galois_order(sigma) == 2);
    // norm is Galois-invariant, valuation preserved
    CHECK(tw.agree_prec(tw.stage_norm(sx), tw.stage_norm(x)) >= 10);
    CHECK(tw.val(sx) == tw.val(x));
}

TEST_CASE("norm transitivity N_{E2/E0} = N_{E1/E0} . N_{E2/E1}") {
    Tower tw = q3_sqrt3(1, 10);
    // a second stage: x^2 - pi_1 over E_1
    std::vector<StageElem> g2 = {tw.neg(tw.pi(1)), tw.zero(1), tw.one(1)};
    tw.add_stage(g2);
    std::mt19937_64 rng(99);
    for (int t = 0; t < 4; ++t) {
        StageElem x = tw.random_unit(2, rng);
        StageElem direct = tw.norm_to(x, 0);
        StageElem composed = tw.stage_norm(tw.stage_norm(x));
        CHECK(tw.agree_prec(direct, composed) >= 8);
    }
}

TEST_CASE("unramified model: phi fixes pi, commutes with Galois, m=1 is trivial") {
    Tower tw = q3_sqrt3(2, 10);
    CHECK(tw.phi_fixed(tw.pi(1)));
    GaloisElement sigma;
    sigma.tw = &tw;
    sigma.top = 1;
    sigma.img = {tw.neg(tw.pi(1))};
    std::mt19937_64 rng(3);
    for (int t = 0; t < 6; ++t) {
        StageElem y = tw.random_unit(1, rng);
        StageElem a = tw.phi(tw.apply(sigma, y));
        StageElem b = tw.apply(sigma, tw.phi(y));
        CHECK(tw.agree_prec(a, b) >= std::min(tw.absprec(a), tw.absprec(b)));
    }
    Tower triv = q3_sqrt3(1, 10);
    StageElem z = triv.random_unit(1, rng);
    CHECK(triv.phi_fixed(z));  // phi = id at m = 1
}

TEST_CASE("hensel refinement of a root seed") {
    Tower tw = q3_sqrt3(1, 14);
    const auto& g = tw.stage_poly(1);
    // seed pi(1 + pi): differs from the true root pi at valuation 2
    StageElem seed = tw.mul(tw.pi(1), tw.add(tw.one(1), tw.pi(1)));
    StageElem root = tw.hensel_refine_root(1, g, seed);
    CHECK(tw.agree_prec(root, tw.pi(1)) >= 26);
}

TEST_CASE("solve_norm_preimage round-trips and requests residue growth") {
    // m = 1: 2 is not a square in GF(3), so the tame part obstructs
    Tower small = q3_sqrt3(1, 8);
    CHECK_THROWS_AS(solve_norm_preimage(small, 1, 0, small.from_int(2), 6),
                    ResidueExtensionRequired);
    try {
        solve_norm_preimage(small, 1, 0, small.from_int(2), 6);
    } catch (const ResidueExtensionRequired& e) {
        CHECK(e.suggested_m == 2);
    }
    // m = 2: solvable; and N(v) reproduces u
    Tower big = q3_sqrt3(2, 8);
    StageElem u = big.from_int(2);
    StageElem v = solve_norm_preimage(big, 1, 0, u, 6);
    CHECK(big.agree_prec(big.norm_to(v, 0), u) >= 6);
    // u = 1 -> v = 1 accepted
    StageElem v1 = solve_norm_preimage(big, 1, 0, big.one(), 6);
    CHECK(big.agree_prec(big.norm_to(v1, 0), big.one()) >= 6);
    // random round-trip u = N(w)
    std::mt19937_64 rng(21);
    StageElem w = big.random_unit(1, rng);
    StageElem nw = big.norm_to(w, 0);
    StageElem v2 = solve_norm_preimage(big, 1, 0, nw, 6);
    CHECK(big.agree_prec(big.norm_to(v2, 0), nw) >= 6);
}

TEST_CASE("different valuation equals sum of i-values for the quadratic stage") {
    // for x^2 - 3 over Q_3: g'(pi) = 2 pi, v = 1; the nontrivial sigma has
    // v(sigma(pi) - pi) = v(-2 pi) = 1
    Tower tw = q3_sqrt3();
    CHECK(tw.different_val(1) == 1);
}

TEST_CASE("unit subgroup echelon: membership and witnesses") {
    Tower tw = q3_sqrt3(1, 8);
    // subgroup of squares of units at stage 1
    UnitSubgroup sq(tw, 1, 10);
    for (const auto& u : unit_generators(tw, 1, 10)) sq.insert(tw.mul(u, u), u);
    std::mt19937_64 rng(17);
    for (int t = 0; t < 5; ++t) {
        StageElem x = tw.random_unit(1, rng);
        auto r = sq.express(tw.mul(x, x));
        REQUIRE(r.ok);
        // witness w satisfies w^2 = x^2 mod U^(10)
        CHECK(tw.agree_prec(tw.mul(r.witness, r.witness), tw.mul(x, x)) >= 10);
    }
    // residue -1 = 2 is not a square in GF(3); the echelon must reject it
    auto r = sq.express(tw.from_int(-1, 1));
    CHECK_FALSE(r.ok);
    CHECK(r.residue_obstruction);
}
