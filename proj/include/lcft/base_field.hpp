#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lcft/errors.hpp"
#include "lcft/finite_field.hpp"

namespace lcft {

class BaseField;

// A truncated element of the (unramified-extended) base local field: valuation
// plus digit sequence in the residue field kappa = GF(p^{f*m}), one digit per
// power of the uniformizer. Empty digit vector means zero-to-precision: the
// element vanishes modulo pi^absprec and nothing more is known.
struct BaseElem {
    const BaseField* fld = nullptr;
    long val = 0;                    // exponent of the first stored digit
    std::vector<FqCtx::Elt> d;       // d[0] != 0 unless empty; size == absprec - val

    long absprec() const { return val + static_cast<long>(d.size()); }
    bool zero_to_prec() const { return d.empty(); }
};

// Arithmetic context for the base field K (p-adic or Laurent series) extended
// unramified to residue degree m: digit vectors with carries in mixed
// characteristic, plain series over GF(q^m) in equal characteristic. The
// Frobenius phi lifts x -> x^q, fixes the uniformizer, and has exact order m.
class BaseField {
public:
    // mixed = true: finite extension setting over Q_p (uniformizer p);
    // mixed = false: F_q((t)) (uniformizer t). q = p^f; coefficients in GF(q^m).
    BaseField(bool mixed, uint32_t p, uint32_t f, uint32_t m, int N);

    // elements cache a pointer to their field, so copies re-point the caches
    BaseField(const BaseField& o);
    BaseField(BaseField&& o) noexcept;
    BaseField& operator=(const BaseField& o);
    BaseField& operator=(BaseField&& o) noexcept;

    bool mixed() const { return mixed_; }
    uint32_t p() const { return p_; }
    uint32_t f() const { return f_; }
    uint32_t m() const { return m_; }
    int N() const { return N_; }
    uint64_t q() const { return q_; }
    const FqCtx& kappa() const { return *kappa_; }
    bool same(const BaseField& o) const;

    // constructors
    BaseElem zero(long absprec) const;
    BaseElem zero() const { return zero(N_); }
    BaseElem one() const;
    BaseElem from_int(long long v) const;
    BaseElem from_digits(long val, std::vector<FqCtx::Elt> digits) const;
    BaseElem uniformizer() const;
    BaseElem lift_digit(const FqCtx::Elt& a) const;  // unit lift of a residue digit

    // arithmetic (throws MixedFields when operands belong to different fields)
    BaseElem add(const BaseElem& a, const BaseElem& b) const;
    BaseElem sub(const BaseElem& a, const BaseElem& b) const;
    BaseElem neg(const BaseElem& a) const;
    BaseElem mul(const BaseElem& a, const BaseElem& b) const;
    BaseElem inv(const BaseElem& a) const;  // DivisionByZeroToPrecision on zero
    BaseElem div(const BaseElem& a, const BaseElem& b) const { return mul(a, inv(b)); }
    BaseElem shift(const BaseElem& a, long k) const;  // multiply by pi^k
    BaseElem pow(const BaseElem& a, long e) const;

    // Frobenius x -> x^q on digits (k-fold; k may be negative, phi^m = id)
    BaseElem phi(const BaseElem& a, int k = 1) const;

    long val(const BaseElem& a) const;  // PrecisionExhausted if zero-to-precision
    // largest j <= min(absprec) with a == b mod pi^j
    long agree_prec(const BaseElem& a, const BaseElem& b) const;
    bool eq_to(const BaseElem& a, const BaseElem& b, long k) const { return agree_prec(a, b) >= k; }

    FqCtx::Elt digit(const BaseElem& a, long k) const;   // coefficient of pi^k
    FqCtx::Elt residue_unit(const BaseElem& a) const;    // leading digit
    bool phi_fixed(const BaseElem& a) const;
    bool digits_in_base_subfield(const BaseElem& a) const;  // all digits in GF(q)

    BaseElem cap_abs(const BaseElem& a, long absprec) const;

    std::string str(const BaseElem& a) const;

private:
    BaseElem make(long val, std::vector<FqCtx::Elt> digits, long absprec) const;
    void check(const BaseElem& a) const;
    void check2(const BaseElem& a, const BaseElem& b) const;

    // mixed-characteristic digit multiply/add with carries via integer planes
    std::vector<FqCtx::Elt> carry_normalize(std::vector<std::vector<long long>> planes, size_t len) const;

    // the canonical Frobenius lift in mixed characteristic: evaluates the
    // y-polynomial view of a at the Hensel-lifted root of the modulus whose
    // residue is ybar^q
    BaseElem phi_once_mixed(const BaseElem& a) const;
    void init_frobenius();

    bool mixed_;
    uint32_t p_, f_, m_;
    int N_;
    uint64_t q_;
    std::shared_ptr<FqCtx> kappa_;
    std::vector<BaseElem> yimg_pows_;  // powers 0..fm-1 of the Frobenius image of y (mixed only)
};

inline BaseElem operator+(const BaseElem& a, const BaseElem& b) { return a.fld->add(a, b); }
inline BaseElem operator-(const BaseElem& a, const BaseElem& b) { return a.fld->sub(a, b); }
inline BaseElem operator*(const BaseElem& a, const BaseElem& b) { return a.fld->mul(a, b); }
inline BaseElem operator-(const BaseElem& a) { return a.fld->neg(a); }

}  // namespace lcft
