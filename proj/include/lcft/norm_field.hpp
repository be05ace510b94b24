#pragma once

#include <optional>
#include <vector>

#include "lcft/tower.hpp"

namespace lcft {

// A truncated field-of-norms element: one coordinate per chain stage, stage
// norms carrying each coordinate to the previous one. base_stage > 0 models
// vectors over L/F (chain starting at E_F); top_stage < depth models vectors
// over a sub-tower M/K (chain E_i cap M, constant above M with identity
// norms). Coordinate k lives at stage min(base_stage + k, top_stage).
struct NormVector {
    const Tower* tw = nullptr;
    int base_stage = 0;
    int top_stage = 0;
    std::vector<StageElem> a;

    int chain_len() const { return static_cast<int>(a.size()); }
    int stage_of(int k) const { return std::min(base_stage + k, top_stage); }
};

// Result record of the stabilizing addition: where each coordinate's norm
// sequence stabilized and at what precision the limit is trusted.
struct AddRecord {
    std::vector<int> stabilized_at;   // chain index where the limit settled
    std::vector<long> agreement;      // agreement precision per coordinate (stage units)
};

// Field-of-norms arithmetic over one tower. All operations are pure; vectors
// must belong to this tower.
class NormField {
public:
    explicit NormField(const Tower& tw) : tw_(&tw) {}

    const Tower& tower() const { return *tw_; }

    // builders
    NormVector from_coords(std::vector<StageElem> coords, int base_stage = 0,
                           int top_stage = -1) const;       // validates
    NormVector from_top(const StageElem& top, int base_stage = 0, int top_stage = -1) const;
    NormVector one(int base_stage = 0, int top_stage = -1) const;
    NormVector prime(const std::vector<StageElem>& primes) const;  // Lubin-Tate primes

    // norm-compatibility and constant valuation; NotNormCompatible(level)
    void validate(const NormVector& v) const;
    long valuation(const NormVector& v) const;

    // eq. (addition): coordinate-wise stabilized norm limits; NotStabilized
    NormVector add(const NormVector& x, const NormVector& y, AddRecord* rec = nullptr) const;
    NormVector neg(const NormVector& x) const;
    NormVector sub(const NormVector& x, const NormVector& y, AddRecord* rec = nullptr) const;
    NormVector mul(const NormVector& x, const NormVector& y) const;  // componentwise
    NormVector inv(const NormVector& x) const;
    NormVector pow(const NormVector& x, long e) const;

    bool eq_weak(const NormVector& x, const NormVector& y, long floor = 1) const;

    // equality as truncated X-elements: compares the coordinates below the top
    // directly and the top coordinates through their stage norms. The top
    // coordinate of a stabilized sum is a raw representative (nothing deeper
    // exists to stabilize it against), so it only carries norm information.
    bool eq_stabilized(const NormVector& x, const NormVector& y, long floor = 1) const;
    // zero as a truncated X-element (the valuation reads the bottom coordinate)
    bool is_zero_stabilized(const NormVector& x) const;

    // unit filtration: sign of the valuation, principal level of units
    enum class Ring { NotIntegral, MaximalIdeal, Units };
    Ring classify(const NormVector& v) const;
    bool in_integers(const NormVector& v) const { return classify(v) != Ring::NotIntegral; }
    // nu_X(v - 1) via the stabilized subtraction (0 for non-principal units)
    long unit_level(const NormVector& v, AddRecord* rec = nullptr) const;

    // the K-tilde coordinate and the Fesenko diamond condition
    const StageElem& pr_ktilde(const NormVector& v) const;
    bool diamond_member(const NormVector& v) const;
    bool in_pr_kernel(const NormVector& v) const;  // ker Pr (the paper's U^1 of X~)

    // plain X(L/K)-membership: coherent with phi-fixed coordinates
    bool plain_member(const NormVector& v, long floor = 1) const;
    // congruence modulo U_{X(L/K)} (coset test used by the reciprocity maps)
    bool congruent_mod_plain_units(const NormVector& x, const NormVector& y, long floor = 1) const;

    // Galois action and coefficient Frobenius, coordinate-wise
    NormVector galois_act(const GaloisElement& s, const NormVector& v) const;
    NormVector phi(const NormVector& v, int k = 1) const;

    // Coleman norm map to the sub-tower M = E_{m_stage} (coordinate-wise
    // relative norms; repeated stages above M with identity norms)
    NormVector coleman_norm(const NormVector& v, int m_stage) const;

    // Lambda_{F/K}: prepend norm-computed coordinates below the base of an
    // L/F-vector, giving an L/K-vector
    NormVector lambda_lift(const NormVector& v) const;

    // epsilon embedding for a configured composite chain that coincides with
    // this tower's chain from index `stabilization_index` on: reuse the
    // coordinates above, back-fill by norms below, validate
    NormVector epsilon_embed(const NormVector& v, int stabilization_index) const;

    // greedy class level of U modulo U_{X(L/K)}: the largest principal-unit
    // level reachable by multiplying with a plain unit vector. conclusive is
    // false when the search exhausts the precision cap instead of finding an
    // obstruction.
    long class_unit_level(const NormVector& u, bool* conclusive) const;

private:
    void check(const NormVector& v) const;
    StageElem stabilized_coord(const NormVector& x, const NormVector& y, int k,
                               int* stab_at, long* agreement) const;

    const Tower* tw_;
};

}  // namespace lcft
