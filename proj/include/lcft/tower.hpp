#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "lcft/base_field.hpp"

namespace lcft {

class Tower;

// An element of a tower stage E_s. Stage 0 is the base field; stage s > 0 is
// represented as a polynomial of degree < e_s in the stage uniformizer with
// coefficients one stage down.
struct StageElem {
    const Tower* tw = nullptr;
    int stage = 0;
    BaseElem b;                // stage == 0
    std::vector<StageElem> c;  // stage > 0, size e_s
};

// An automorphism of E_top fixing K, presented by its images of every stage
// uniformizer (img[i] = image of pi_{i+1}, an element of stage i+1). Galois
// stability of each stage means the images determine the action completely.
struct GaloisElement {
    const Tower* tw = nullptr;
    int top = 0;
    std::vector<StageElem> img;
};

// A finite chain of totally ramified Eisenstein stages over a common base
// model at residue degree m. Immutable after construction; all element
// operations are pure.
class Tower {
public:
    explicit Tower(BaseField base) : base_(std::move(base)) {}

    // stage data caches tower/field pointers; copies re-point them
    Tower(const Tower& o);
    Tower(Tower&& o) noexcept;
    Tower& operator=(const Tower& o);
    Tower& operator=(Tower&& o) noexcept;

    // Validates the Eisenstein criterion and installs stage arithmetic.
    // gen_image_polys are the declared generator images of the new stage's
    // uniformizer, as polynomial coefficients over the previous stage (may be
    // empty). Returns the new stage index. Throws NotEisenstein.
    int add_stage(std::vector<StageElem> g,
                  std::vector<std::vector<StageElem>> gen_image_polys = {},
                  unsigned declared_order = 0);
    // Installs generator images as stage elements after the stage is built,
    // checking they are roots of g realizing the declared cyclic order.
    void set_stage_generators(int stage, std::vector<StageElem> images, unsigned declared_order);

    // The full Galois group of the top stage over K when the builder knows it
    // (images validated as roots of the sigma-transformed stage polynomials).
    void set_full_group(std::vector<GaloisElement> group);
    bool has_full_group() const { return !full_group_.empty(); }
    const std::vector<GaloisElement>& full_group() const;
    void galois_validate(const GaloisElement& s) const;

    int depth() const { return static_cast<int>(stages_.size()); }
    unsigned e(int stage) const { return stages_.at(static_cast<size_t>(stage - 1)).e; }
    long e_total(int stage) const;           // ramification index of E_stage over K
    long abs_cap(int stage) const;           // stage-uniformizer precision window
    const BaseField& base() const { return base_; }
    const std::vector<StageElem>& stage_poly(int stage) const {
        return stages_.at(static_cast<size_t>(stage - 1)).g;
    }
    const std::vector<StageElem>& stage_gen_images(int stage) const {
        return stages_.at(static_cast<size_t>(stage - 1)).gen_images;
    }
    unsigned stage_declared_order(int stage) const {
        return stages_.at(static_cast<size_t>(stage - 1)).declared_order;
    }

    // element builders
    StageElem from_base(const BaseElem& a, int stage = 0) const;
    StageElem embed(const StageElem& x, int stage) const;
    StageElem zero(int stage, long absprec) const;
    StageElem zero(int stage) const { return zero(stage, abs_cap(stage)); }
    StageElem one(int stage = 0) const;
    StageElem from_int(long long v, int stage = 0) const;
    StageElem pi(int stage) const;                 // stage uniformizer (stage >= 1), or base uniformizer
    StageElem pi_pow(int stage, long k) const;
    StageElem lift_digit(int stage, const FqCtx::Elt& d) const;
    StageElem random_unit(int stage, std::mt19937_64& rng) const;

    // arithmetic (operands embedded to the higher of the two stages)
    StageElem add(const StageElem& a, const StageElem& b) const;
    StageElem sub(const StageElem& a, const StageElem& b) const;
    StageElem neg(const StageElem& a) const;
    StageElem mul(const StageElem& a, const StageElem& b) const;
    StageElem inv(const StageElem& a) const;
    StageElem div(const StageElem& a, const StageElem& b) const { return mul(a, inv(b)); }
    StageElem pow(const StageElem& a, long e) const;

    bool zero_to_prec(const StageElem& x) const;
    long val(const StageElem& x) const;       // PrecisionExhausted if undetermined
    long absprec(const StageElem& x) const;
    // largest k such that x == 0 mod pi^k is guaranteed at this precision
    long known_zero_prec(const StageElem& x) const;
    long agree_prec(const StageElem& a, const StageElem& b) const;
    bool eq_to(const StageElem& a, const StageElem& b, long k) const {
        return agree_prec(a, b) >= k;
    }
    // equality at whatever precision the comparison supports: the difference
    // has no known nonzero digit, and is determined at least past the floor
    bool eq_weak(const StageElem& a, const StageElem& b, long floor = 1) const {
        StageElem diff = sub(a, b);
        return zero_to_prec(diff) && absprec(diff) >= floor;
    }
    StageElem cap(const StageElem& x, long absprec) const;

    // Frobenius on the unramified coefficients; fixes every stage uniformizer.
    StageElem phi(const StageElem& x, int k = 1) const;
    bool phi_fixed(const StageElem& x) const;

    FqCtx::Elt residue(const StageElem& x) const;  // leading digit of a unit
    // canonical stage-uniformizer digits of x on [val, absprec)
    std::vector<FqCtx::Elt> digits(const StageElem& x) const;
    bool digits_in_base_subfield(const StageElem& x) const;

    // Horner evaluation of a polynomial with stage-s coefficients at a stage-s point
    StageElem eval_poly(const std::vector<StageElem>& coeffs, const StageElem& x) const;

    // Norm and trace one stage down via the multiplication matrix on the
    // power basis; norm_to composes stage norms.
    StageElem stage_norm(const StageElem& x) const;
    StageElem stage_trace(const StageElem& x) const;
    StageElem norm_to(const StageElem& x, int target_stage) const;

    // Newton refinement of a root seed of a monic polynomial over stage s-1,
    // evaluated at stage s. Requires the strong Hensel condition
    // v(g(seed)) > 2 v(g'(seed)); PrecisionExhausted otherwise.
    StageElem hensel_refine_root(int stage, const std::vector<StageElem>& g,
                                 const StageElem& seed) const;

    // valuation of the different of E_stage over K in stage units
    long different_val(int stage) const;

    // Galois machinery. frob_power applies phi^frob_power to the unramified
    // coefficients on top of the stage action (the tau* of Frobenius lifts).
    StageElem apply(const GaloisElement& s, const StageElem& x, int frob_power = 0) const;
    GaloisElement galois_identity(int top) const;
    GaloisElement compose(const GaloisElement& a, const GaloisElement& b) const;
    bool galois_eq(const GaloisElement& a, const GaloisElement& b) const;
    bool galois_is_identity(const GaloisElement& s) const;
    unsigned galois_order(const GaloisElement& s, unsigned cap = 4096) const;
    GaloisElement galois_inverse(const GaloisElement& s) const;
    // restriction to a lower stage (forgets the upper images)
    GaloisElement restrict(const GaloisElement& s, int top) const;

    // re-points an element's cached tower/field pointers at this tower (used
    // by owners that move a Tower together with elements referencing it)
    void adopt(StageElem& x) const { repoint_elem_(x); }
    void adopt(GaloisElement& s) const {
        s.tw = this;
        for (auto& im : s.img) repoint_elem_(im);
    }

    std::string str(const StageElem& x) const;

private:
    struct Stage {
        unsigned e = 0;
        std::vector<StageElem> g;           // monic Eisenstein, coefficients at stage-1
        std::vector<StageElem> gen_images;  // declared generator images (stage elements)
        unsigned declared_order = 0;
        StageElem inv_pi;                   // cached 1/pi at this stage
    };

    StageElem make(int stage, std::vector<StageElem> coeffs) const;
    StageElem mul_raw(int stage, const StageElem& a, const StageElem& b) const;
    StageElem pi_pow_raw_(int stage, long k) const;
    void lift_pair(StageElem& a, StageElem& b) const;
    void repoint_elem_(StageElem& x) const;
    void repoint_();

    BaseField base_;
    std::vector<Stage> stages_;
    std::vector<GaloisElement> full_group_;
};

inline StageElem operator+(const StageElem& a, const StageElem& b) { return a.tw->add(a, b); }
inline StageElem operator-(const StageElem& a, const StageElem& b) { return a.tw->sub(a, b); }
inline StageElem operator*(const StageElem& a, const StageElem& b) { return a.tw->mul(a, b); }
inline StageElem operator-(const StageElem& a) { return a.tw->neg(a); }

}  // namespace lcft
