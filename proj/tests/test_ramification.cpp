#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lcft/lubin_tate.hpp"
#include "lcft/ramification.hpp"

using namespace lcft;

namespace {

// brute-force oracle: min of nu(sigma x - x) over a spanning sample of O_L
long brute_force_i(const Tower& tw, int stage, const GaloisElement& sigma, std::mt19937_64& rng) {
    std::vector<StageElem> sample;
    sample.push_back(tw.pi(stage));
    sample.push_back(tw.one(stage));
    for (int k = 2; k <= 5; ++k) sample.push_back(tw.pi_pow(stage, k));
    sample.push_back(tw.add(tw.one(stage), tw.pi(stage)));
    for (int t = 0; t < 12; ++t) {
        StageElem u = tw.random_unit(stage, rng);
        sample.push_back(u);
        sample.push_back(tw.mul(u, tw.pi(stage)));
    }
    long best = tw.abs_cap(stage);
    for (const auto& x : sample) {
        StageElem d = tw.sub(tw.apply(sigma, x), x);
        if (tw.zero_to_prec(d)) continue;
        best = std::min(best, tw.val(d));
    }
    return best;
}

}  // namespace

TEST_CASE("i-values: identity infinite, Q_2(zeta_4) conjugation has i = 2, tame has i = 1") {
    LubinTateTower q2 = build_lubin_tate_tower(2, 1, 10, {0, 2, 1}, 2);
    IValue idv = i_value(q2.tower, 2, q2.sigma(1));
    CHECK(idv.infinite);
    IValue conj = i_value(q2.tower, 2, q2.sigma(3));
    CHECK_FALSE(conj.infinite);
    CHECK(conj.i == 2);

    LubinTateTower q3 = build_lubin_tate_tower(3, 1, 10, {0, 3, 3, 1}, 1);
    IValue tame = i_value(q3.tower, 1, q3.sigma(2));
    CHECK_FALSE(tame.infinite);
    CHECK(tame.i == 1);
}

TEST_CASE("i-value equals the brute-force minimum over a sampled O_L basis") {
    std::mt19937_64 rng(41);
    LubinTateTower q3 = build_lubin_tate_tower(3, 1, 8, {0, 3, 3, 1}, 2);
    for (const auto& s : q3.group) {
        if (q3.tower.galois_is_identity(s)) continue;
        IValue iv = i_value(q3.tower, 2, s);
        CHECK(iv.i == brute_force_i(q3.tower, 2, s, rng));
    }
}

TEST_CASE("gamma counts on Q_2(zeta_4): 2 for t <= 1, then 1") {
    LubinTateTower q2 = build_lubin_tate_tower(2, 1, 10, {0, 2, 1}, 2);
    auto G = distinct_restrictions(q2.tower, q2.group, 2);
    RamificationProfile pr = ramification_profile(q2.tower, 2, G);
    CHECK(gamma_count(pr, Rat(-1)) == 2);  // |G|
    CHECK(gamma_count(pr, Rat(0)) == 2);
    CHECK(gamma_count(pr, Rat(1)) == 2);
    CHECK(gamma_count(pr, Rat(3, 2)) == 1);
    CHECK(gamma_count(pr, Rat(100)) == 1);  // beyond the last break, only id
}

TEST_CASE("phi/psi for Q_2(zeta_4): identity to 1, slope 1/2 after; exact inverses") {
    LubinTateTower q2 = build_lubin_tate_tower(2, 1, 10, {0, 2, 1}, 2);
    auto G = distinct_restrictions(q2.tower, q2.group, 2);
    RamificationProfile pr = ramification_profile(q2.tower, 2, G);
    CHECK(pr.phi(Rat(-1, 2)) == Rat(-1, 2));  // phi(u) = u on [-1, 0]
    CHECK(pr.phi(Rat(0)) == Rat(0));
    CHECK(pr.phi(Rat(1)) == Rat(1));
    CHECK(pr.phi(Rat(3)) == Rat(2));  // 1 + (3-1)/2
    CHECK(pr.lower_breaks == std::vector<long>{1});
    REQUIRE(pr.upper_breaks.size() == 1);
    CHECK(pr.upper_breaks[0] == Rat(1));
    // phi . psi = id and psi . phi = id on breakpoints and samples
    for (Rat u : {Rat(-1), Rat(0), Rat(1, 3), Rat(1), Rat(7, 2), Rat(10)}) {
        CHECK(pr.phi(pr.psi(u)) == u);
        CHECK(pr.psi(pr.phi(u)) == u);
    }
}

TEST_CASE("tame cyclic stage: lower breaks {0}, G_0 = G, then trivial") {
    LubinTateTower q3 = build_lubin_tate_tower(3, 1, 10, {0, 3, 3, 1}, 1);
    auto G = distinct_restrictions(q3.tower, q3.group, 1);
    RamificationProfile pr = ramification_profile(q3.tower, 1, G);
    CHECK(pr.lower_breaks == std::vector<long>{0});
    auto filt = filtration(pr, false);
    REQUIRE(filt.size() == 1);
    CHECK(filt[0].brk == Rat(0));
    CHECK(filt[0].members.size() == 2);  // all of G at the break
}

TEST_CASE("Q_3(zeta_9)/Q_3: upper breaks {0,1}, integral (Hasse-Arf)") {
    LubinTateTower q3 = build_lubin_tate_tower(3, 1, 9, {0, 3, 3, 1}, 2);
    auto G = distinct_restrictions(q3.tower, q3.group, 2);
    CHECK(G.size() == 6);
    RamificationProfile pr = ramification_profile(q3.tower, 2, G);
    CHECK(pr.lower_breaks == std::vector<long>{0, 2});
    REQUIRE(pr.upper_breaks.size() == 2);
    CHECK(pr.upper_breaks[0] == Rat(0));
    CHECK(pr.upper_breaks[1] == Rat(1));
    CHECK(pr.hasse_arf_integral);
}

TEST_CASE("H_u = H cap G_u for the subgroup fixing E_1 (zeta_9 tower)") {
    LubinTateTower q3 = build_lubin_tate_tower(3, 1, 9, {0, 3, 3, 1}, 2);
    auto G = distinct_restrictions(q3.tower, q3.group, 2);
    auto H = subgroup_fixing(q3.tower, G, 1);
    CHECK(H.size() == 3);
    RamificationProfile prG = ramification_profile(q3.tower, 2, G);
    RamificationProfile prH = ramification_profile(q3.tower, 2, H);
    // every break of either filtration: members agree with the intersection
    for (long u : {0L, 1L, 2L, 3L}) {
        std::set<long> hu, hcapgu;
        for (const auto& iv : prH.ivalues)
            if (iv.infinite || iv.i >= u + 1) hu.insert(static_cast<long>(iv.sigma_index));
        for (const auto& iv : prG.ivalues) {
            if (!(iv.infinite || iv.i >= u + 1)) continue;
            // is G-member index also in H (by comparing group elements)?
            for (size_t hj = 0; hj < H.size(); ++hj)
                if (q3.tower.galois_eq(H[hj], G[iv.sigma_index]))
                    hcapgu.insert(static_cast<long>(hj));
        }
        std::set<long> hu_idx;
        for (long x : hu) hu_idx.insert(x);
        CHECK(hu_idx == hcapgu);
    }
}

TEST_CASE("sum of i-values over sigma != 1 equals the different valuation") {
    LubinTateTower q3 = build_lubin_tate_tower(3, 1, 9, {0, 3, 3, 1}, 2);
    auto G = distinct_restrictions(q3.tower, q3.group, 2);
    RamificationProfile pr = ramification_profile(q3.tower, 2, G);
    long sum = 0;
    for (const auto& iv : pr.ivalues)
        if (!iv.infinite) sum += iv.i;
    CHECK(sum == q3.tower.different_val(2));
}

TEST_CASE("Herbrand transitivity through F = Q_3(zeta_3), exact polylines") {
    LubinTateTower q3 = build_lubin_tate_tower(3, 1, 9, {0, 3, 3, 1}, 2);
    CHECK(herbrand_transitive(q3.tower, 2, 1));
    // trivial factors
    CHECK(herbrand_transitive(q3.tower, 2, 2));
    CHECK(herbrand_transitive(q3.tower, 1, 1));
}

TEST_CASE("phi concave increasing, psi convex increasing") {
    LubinTateTower q3 = build_lubin_tate_tower(3, 1, 9, {0, 3, 3, 1}, 2);
    auto G = distinct_restrictions(q3.tower, q3.group, 2);
    RamificationProfile pr = ramification_profile(q3.tower, 2, G);
    auto slopes = [](const Polyline& f) {
        std::vector<Rat> s;
        for (size_t j = 0; j + 1 < f.pts.size(); ++j)
            s.push_back((f.pts[j + 1].second - f.pts[j].second) /
                        (f.pts[j + 1].first - f.pts[j].first));
        s.push_back(f.final_slope);
        return s;
    };
    auto sp = slopes(pr.phi);
    for (size_t j = 0; j + 1 < sp.size(); ++j) CHECK(sp[j] >= sp[j + 1]);  // concave
    for (const Rat& s : sp) CHECK(s > Rat(0));
    auto sq = slopes(pr.psi);
    for (size_t j = 0; j + 1 < sq.size(); ++j) CHECK(sq[j] <= sq[j + 1]);  // convex
}

TEST_CASE("tower upper breaks: cyclotomic depth 3 over Q_3 gives {0,1,2}") {
    LubinTateTower q3 = build_lubin_tate_tower(3, 1, 6, {0, 3, 3, 1}, 3);
    auto breaks = tower_upper_breaks(q3.tower, 3);
    REQUIRE(breaks.size() == 3);
    CHECK(breaks[0].first == Rat(0));
    CHECK(breaks[0].second == 1);  // first appears at depth 1
    CHECK(breaks[1].first == Rat(1));
    CHECK(breaks[1].second == 2);
    CHECK(breaks[2].first == Rat(2));
    CHECK(breaks[2].second == 3);
    for (const auto& [b, d] : breaks) CHECK(b.is_integer());  // Hasse-Arf
}

TEST_CASE("quotient rule (G/H)^v = G^v H / H for the zeta_9 tower") {
    LubinTateTower q3 = build_lubin_tate_tower(3, 1, 9, {0, 3, 3, 1}, 2);
    auto G = distinct_restrictions(q3.tower, q3.group, 2);
    RamificationProfile prG = ramification_profile(q3.tower, 2, G);
    auto Q = distinct_restrictions(q3.tower, q3.group, 1);
    RamificationProfile prQ = ramification_profile(q3.tower, 1, Q);
    // upper break v of the quotient: (G/H)^v must equal the image of G^v
    for (const Rat& v : prQ.upper_breaks) {
        // members of (G/H)^v
        std::set<size_t> quot_members;
        long u_q = 0;
        {
            Rat uq = prQ.psi(v);
            for (const auto& iv : prQ.ivalues)
                if (iv.infinite || Rat(iv.i) >= uq + Rat(1)) quot_members.insert(iv.sigma_index);
            (void)u_q;
        }
        // image of G^v in the quotient
        std::set<size_t> image_members;
        Rat ug = prG.psi(v);
        for (const auto& iv : prG.ivalues) {
            if (!(iv.infinite || Rat(iv.i) >= ug + Rat(1))) continue;
            GaloisElement r = q3.tower.restrict(G[iv.sigma_index], 1);
            for (size_t qi = 0; qi < Q.size(); ++qi)
                if (q3.tower.galois_eq(r, Q[qi])) image_members.insert(qi);
        }
        CHECK(quot_members == image_members);
    }
}
