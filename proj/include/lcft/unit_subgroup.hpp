#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lcft/tower.hpp"

namespace lcft {

// An echelonized generating system for a subgroup of the units U/U^(cap) of a
// tower stage model, with witness tracking: every generator carries a payload
// element (typically its preimage under some homomorphism), and expressing x
// as a product of generators returns the matching product of payloads.
//
// Structure: the image of the subgroup in the residue field's multiplicative
// group is cyclic and handled by discrete logs; the principal part keeps one
// echelon of leading digits per unit level, closed under p-th powers. This
// decides membership exactly at the given precision cap.
class UnitSubgroup {
public:
    UnitSubgroup(const Tower& tw, int stage, long cap);

    void insert(const StageElem& gen, const StageElem& witness);

    struct Result {
        bool ok = false;
        StageElem witness;               // product of payloads when ok
        bool residue_obstruction = false;
        uint64_t residue_exp = 0;        // offending dlog exponent at level 0
        long level = -1;                 // offending principal level
        FqCtx::Elt leading;              // offending leading digit
    };

    // Decides x in <generators> mod U^(cap); x must be a unit known at least to
    // the cap. Pure (does not modify the structure).
    Result express(const StageElem& x) const;
    bool contains(const StageElem& x) const { return express(x).ok; }

    long cap() const { return cap_; }
    int stage() const { return stage_; }
    size_t pivot_count() const { return pivots_.size(); }

private:
    struct Pivot {
        long level;
        StageElem elt, elt_inv, wit, wit_inv;
        FqCtx::Elt lead;
    };

    // leading unit level and digit of u (u == 1 + lead*pi^level + ...)
    std::pair<long, FqCtx::Elt> leading_of(const StageElem& u) const;
    StageElem pow_signed(const StageElem& a, long long e) const;
    void insert_principal(StageElem u, StageElem w);
    // solve sum c_i * lead_i = target over F_p among pivots at one level
    std::optional<std::vector<uint32_t>> solve_level(long level, const FqCtx::Elt& target,
                                                     std::vector<size_t>& idx) const;

    const Tower* tw_;
    int stage_;
    long cap_;
    uint64_t group_order_;  // q^m - 1

    uint64_t res_d_ = 0;  // residue subgroup = <g^res_d_>; 0 means trivial
    StageElem res_elt_, res_elt_inv_, res_wit_, res_wit_inv_;
    std::vector<Pivot> pivots_;
};

// The standard generating family of the full unit group U/U^(cap) of a stage
// model: a lift of a residue-field generator plus 1 + beta*pi^k over an
// F_p-basis beta of the residue field, 1 <= k < cap.
std::vector<StageElem> unit_generators(const Tower& tw, int stage, long cap);

// Echelonized image of a homomorphism of unit groups: inserts (hom(u), u) for
// every standard generator u of the source stage's units. source_cap bounds the
// levels of source generators used.
UnitSubgroup image_subgroup(const Tower& tw, int source_stage, long source_cap, int target_stage,
                            long target_cap, const std::function<StageElem(const StageElem&)>& hom);

// Finds a unit v at source_stage with N_{source/target}(v) == u modulo
// U^(cap) of the target stage, by filtration descent through the echelonized
// norm image. Throws ResidueExtensionRequired with a minimal sufficient
// residue degree when GF(q^m) is too small.
StageElem solve_norm_preimage(const Tower& tw, int source_stage, int target_stage,
                              const StageElem& u, long cap);

// Smallest multiple m' of m such that x^n = c has a solution in GF(q^{m'}),
// given the order of c in GF(q^m)^x. 0 if none up to the search bound.
uint32_t minimal_residue_degree_for_root(uint64_t q, uint32_t m, uint64_t order_c, uint64_t n);

}  // namespace lcft
