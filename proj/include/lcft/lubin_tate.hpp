#pragma once

#include <map>
#include <vector>

#include "lcft/tower.hpp"

namespace lcft {

// Truncated one-variable series over a base field, c[k] = coefficient of x^k.
struct Series1 {
    std::vector<BaseElem> c;
};

// Truncated two-variable series, triangular by total degree:
// h[d][j] = coefficient of X^(d-j) Y^j.
struct Series2 {
    std::vector<std::vector<BaseElem>> h;
};

// The formal group attached to a Frobenius series f (f = pi x mod deg 2,
// f = x^q mod pi): group law F(X,Y) and endomorphisms [a]_f, built by the
// inductive degree-by-degree coefficient solve. Construction runs in its own
// deeper-precision base field, since each degree step divides by pi once;
// results are reported at the requested precision.
class FormalGroup {
public:
    // f_coeffs over `field` (coefficient k of x^k); degree_cap bounds all series.
    FormalGroup(const BaseField& field, std::vector<BaseElem> f_coeffs, int degree_cap);

    FormalGroup(const FormalGroup&) = delete;
    FormalGroup& operator=(const FormalGroup&) = delete;

    const BaseField& field() const { return field_; }
    int degree_cap() const { return cap_; }
    const Series1& frobenius_series() const { return f_; }
    const BaseElem& pi() const { return pi_; }  // the prime f is attached to

    // group law F(X,Y), F(X,0) = X, symmetric, associative to truncation
    const Series2& group_law();

    // [a]_f for integer a: a X mod deg 2, commutes with f to truncation
    const Series1& endomorphism(long long a);

    // evaluation helpers on tower elements (x of positive valuation)
    StageElem eval(const Series1& s, const Tower& tw, const StageElem& x) const;

private:
    Series1 solve_commuting(const BaseElem& linear);  // unique T = linear*X mod deg 2, f.T = T.f

    BaseField field_;       // requested-precision field
    BaseField work_;        // internal field with precision margin
    int cap_;
    Series1 f_;             // at requested precision
    Series1 fw_;            // at working precision
    BaseElem pi_;
    Series2 law_;
    bool law_built_ = false;
    std::map<long long, Series1> endos_;
};

// A Lubin-Tate torsion tower over Q_p (residue degree f = 1), with the
// Koch-de Shalit norm-compatible prime sequence and the full Galois group
// acting through unit representatives.
struct LubinTateTower {
    Tower tower;
    std::vector<StageElem> primes;      // primes[i] at stage i, norm-coherent
    std::vector<GaloisElement> group;   // Gal(E_depth / K)
    std::vector<long long> group_reps;  // unit representative per group element
    BaseElem pi_base;                   // the prime attached to f

    explicit LubinTateTower(Tower t) : tower(std::move(t)) {}
    LubinTateTower(const LubinTateTower& o);
    LubinTateTower(LubinTateTower&& o) noexcept;
    LubinTateTower& operator=(const LubinTateTower& o);
    LubinTateTower& operator=(LubinTateTower&& o) noexcept;

    const GaloisElement& sigma(long long a) const;  // group element acting as [a]

private:
    void repoint_();
};

// f_int are the integer coefficients of f (size q+1, monic, f_int[1] = pi).
// Throws NotFrobeniusSeries for malformed input, NormIncoherent if the prime
// sequence cannot be made norm-compatible at this precision.
LubinTateTower build_lubin_tate_tower(uint32_t p, uint32_t m, int N,
                                      const std::vector<long long>& f_int, int depth);

}  // namespace lcft
