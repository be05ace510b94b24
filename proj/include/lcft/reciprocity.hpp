#pragma once

#include <functional>
#include <optional>
#include <random>

#include "lcft/norm_field.hpp"
#include "lcft/ramification.hpp"
#include "lcft/unit_subgroup.hpp"

namespace lcft {

// Tower data the reciprocity maps operate on: stages, the full Galois group of
// the top stage, and (when available) the norm-compatible prime sequence.
struct TowerBundle {
    Tower tower;
    std::vector<GaloisElement> group;
    std::vector<StageElem> primes;

    explicit TowerBundle(Tower t) : tower(std::move(t)) { repoint_(); }
    TowerBundle(const TowerBundle& o);
    TowerBundle(TowerBundle&& o) noexcept;
    TowerBundle& operator=(const TowerBundle& o);
    TowerBundle& operator=(TowerBundle&& o) noexcept;

private:
    void repoint_();
};

// rebuilds the same tower at a larger residue degree (residue-extension growth)
using TowerFactory = std::function<TowerBundle(uint32_t m)>;

// A Frobenius lift tau* with tau*|_L = tau and tau*|unramified = phi^n, n >= 1.
struct FrobeniusLift {
    GaloisElement tau;
    int n = 1;
};

// --- Lang-type solvers -------------------------------------------------------

// Result of a Lang-type solve. The layered descent can hit an Artin-Schreier
// layer whose trace obstruction needs a larger residue field; the partial
// solver then stops there, returning the solution capped at the achieved
// precision (the equation's solutions at finite m genuinely live over growing
// unramified extensions; see the exposition's completed-K-tilde setting).
struct LangResult {
    StageElem v;              // capped at `achieved`
    long achieved = 0;        // residual vanishes modulo pi^achieved (stage units)
    bool complete = false;    // residual vanished to the working precision
    long obstructed_level = -1;
    uint32_t suggested_m = 0;
};

// Solves v^{1-phi} = c on the units of the stage model by filtration descent:
// discrete-log at the residue level, Artin-Schreier solves through the
// principal layers. Throws ResidueExtensionRequired only when the residue
// level itself is unsolvable (no partial solution exists at all).
// An optional RNG multiplies the result by a random phi-fixed unit (the
// solution's coset freedom), for independence tests.
LangResult solve_lang_partial(const Tower& tw, int stage, const StageElem& c,
                              std::mt19937_64* randomize = nullptr);

// strict form: throws ResidueExtensionRequired unless the solve is complete
StageElem solve_lang(const Tower& tw, int stage, const StageElem& c,
                     std::mt19937_64* randomize = nullptr);

// Twisted variant: v^{1-tau*} = c where tau* acts as tau on the stage and
// phi^n on coefficients (the fixed-field construction of the Neukirch map).
StageElem solve_lang_twisted(const Tower& tw, int stage, const GaloisElement& tau, int n,
                             const StageElem& c);

// --- abelian maps ------------------------------------------------------------

// Iwasawa-Neukirch map: the norm from the fixed field of tau* of one of its
// primes, as an element of U_K (the pi-part is normalized away). stage is the
// finite totally ramified stage L = E_stage.
StageElem neukirch_map(const Tower& tw, int stage, const FrobeniusLift& lift);

// class equality in K^x / N_{L/K}(L^x), decided in the capped unit quotient
bool same_class_mod_norms(const Tower& tw, int stage, const StageElem& x, const StageElem& y,
                          long cap);

// V(L/K) = <u^{sigma-1}> membership, decided modulo U^(cap)
UnitSubgroup build_v_subgroup(const Tower& tw, int stage, const std::vector<GaloisElement>& group,
                              long cap);

// Hazewinkel map u -> sigma_u: the unique automorphism whose pi-ratio matches
// v_u / phi(v_u) modulo V(L/K). Auto-refines the decision precision; throws
// AmbiguousClass if two candidates survive at full precision, and
// ResidueExtensionRequired when the residue degree cannot separate.
GaloisElement hazewinkel_map(const Tower& tw, int stage, const std::vector<GaloisElement>& group,
                             const StageElem& u);

// --- Fesenko reciprocity -----------------------------------------------------

struct FesenkoClass {
    NormVector rep;                        // U_sigma, a diamond unit vector
    std::optional<GaloisElement> preimage; // sigma (needed by the *-law)
    long verified_prec = 0;                // residual X-valuation of U^{1-phi} / Pi^{sigma-1}
    bool complete = false;                 // solved to the full working precision
    uint32_t suggested_m = 0;              // next residue degree when incomplete
};

// Solves U^{1-phi} = Pi^{sigma-1} from the top stage down, to the deepest
// precision attainable at the tower's residue degree; the verification record
// carries the achieved residual valuation.
FesenkoClass fesenko_solve(const TowerBundle& tb, const GaloisElement& sigma,
                           std::mt19937_64* randomize = nullptr);

// the *-composition U * V = U . V^{sigma_U} on solver-produced classes
FesenkoClass star_compose(const TowerBundle& tb, const FesenkoClass& a, const FesenkoClass& b);

// class congruence modulo U_{X(L/K)} (or the sub-/re-based chain's plain units)
bool fesenko_classes_equal(const Tower& tw, const NormVector& a, const NormVector& b, long floor = 1);

// --- verification reports ----------------------------------------------------

struct CheckLine {
    std::string id;
    bool pass = false;
    bool inconclusive = false;
    long precision = 0;
    std::string details;
};

// Coleman square: N_{L/M}(phi_{L/K}(sigma)) = phi_{M/K}(sigma|_M) for all sigma
std::vector<CheckLine> coleman_square_check(const TowerBundle& tb, int m_stage);
// lambda square: phi_{L/K}(sigma) = lambda_{F/K}(phi_{L/F}(sigma)) on Gal(L/F)
std::vector<CheckLine> lambda_square_check(const TowerBundle& tb, int f_stage);
// cocycle identity and injectivity of the Fesenko map on all pairs
std::vector<CheckLine> cocycle_check(const TowerBundle& tb);
// ramification theorem: tame sigma at class level 0, wild at its lower break
std::vector<CheckLine> ramification_theorem_check(const TowerBundle& tb);
// Pr composition: Pr(phi(sigma)) = iota(sigma) mod norms, exhaustive on a stage
std::vector<CheckLine> pr_composition_check(const TowerBundle& tb, int stage);

}  // namespace lcft
