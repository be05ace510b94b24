#pragma once

#include <utility>
#include <vector>

#include "lcft/rational.hpp"
#include "lcft/tower.hpp"

namespace lcft {

// A continuous piecewise-linear function on [-1, infinity) with exact rational
// breakpoints, as needed for Hasse-Herbrand transition functions.
struct Polyline {
    std::vector<std::pair<Rat, Rat>> pts;  // (x, value), strictly increasing x, first at x = -1
    Rat final_slope;

    Rat operator()(const Rat& u) const;
};

Polyline polyline_canonical(Polyline f);   // merge collinear segments
Polyline polyline_inverse(const Polyline& f);
Polyline polyline_compose(const Polyline& outer, const Polyline& inner);
bool polyline_eq(const Polyline& a, const Polyline& b);

struct IValue {
    size_t sigma_index;  // position in the group list handed in
    bool infinite;       // sigma acts trivially on the stage (reported capped)
    long i;              // nu_L(sigma(pi) - pi) when finite, else the precision cap
};

struct RamificationProfile {
    int stage = 0;
    long group_order = 0;
    std::vector<IValue> ivalues;
    std::vector<long> lower_breaks;
    std::vector<Rat> upper_breaks;
    Polyline phi;
    Polyline psi;
    bool hasse_arf_integral = true;  // all upper breaks integral
};

// i_{L/K}(sigma) evaluated on the stage uniformizer; every stage is monogenic,
// so this realizes the minimum over O_L (the brute-force check lives in tests).
IValue i_value(const Tower& tw, int stage, const GaloisElement& sigma, size_t index = 0);

// gamma_t = #{sigma in the profile's group : i(sigma) >= t+1}
long gamma_count(const RamificationProfile& pr, const Rat& t);

// Lower/upper numbering data for the given automorphism list (the Galois group
// of E_stage over the base of the relative extension under study).
RamificationProfile ramification_profile(const Tower& tw, int stage,
                                         const std::vector<GaloisElement>& group);

struct FiltrationStep {
    Rat brk;                      // a break of the filtration
    std::vector<size_t> members;  // sigma indices in the group just above the break
};
std::vector<FiltrationStep> filtration(const RamificationProfile& pr, bool upper);

// subgroup of `group` fixing E_fixed_stage pointwise
std::vector<GaloisElement> subgroup_fixing(const Tower& tw,
                                           const std::vector<GaloisElement>& group,
                                           int fixed_stage);
// distinct restrictions of `group` to E_stage
std::vector<GaloisElement> distinct_restrictions(const Tower& tw,
                                                 const std::vector<GaloisElement>& group,
                                                 int stage);

// phi_{L/K} == phi_{F/K} . phi_{L/F} as exact polylines (F = stage f_stage);
// uses the tower's installed full group.
bool herbrand_transitive(const Tower& tw, int stage, int f_stage);

// union of upper breaks of E_i/K for 1 <= i <= depth, tagged with the first
// depth where each break appears; needs the full group of E_depth.
std::vector<std::pair<Rat, int>> tower_upper_breaks(const Tower& tw, int depth);

}  // namespace lcft
