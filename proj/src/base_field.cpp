#include "lcft/base_field.hpp"

#include <algorithm>
#include <cmath>

namespace lcft {

BaseField::BaseField(bool mixed, uint32_t p, uint32_t f, uint32_t m, int N)
    : mixed_(mixed), p_(p), f_(f), m_(m), N_(N) {
    if (f < 1 || m < 1) throw std::invalid_argument("BaseField: f, m must be >= 1");
    if (N < 1) throw std::invalid_argument("BaseField: N must be >= 1");
    kappa_ = std::make_shared<FqCtx>(p, f * m);
    q_ = 1;
    for (uint32_t i = 0; i < f; ++i) q_ *= p;
    if (mixed_ && f_ * m_ > 1) init_frobenius();
}

BaseField::BaseField(const BaseField& o)
    : mixed_(o.mixed_), p_(o.p_), f_(o.f_), m_(o.m_), N_(o.N_), q_(o.q_), kappa_(o.kappa_),
      yimg_pows_(o.yimg_pows_) {
    for (auto& e : yimg_pows_) e.fld = this;
}

BaseField::BaseField(BaseField&& o) noexcept
    : mixed_(o.mixed_), p_(o.p_), f_(o.f_), m_(o.m_), N_(o.N_), q_(o.q_),
      kappa_(std::move(o.kappa_)), yimg_pows_(std::move(o.yimg_pows_)) {
    for (auto& e : yimg_pows_) e.fld = this;
}

BaseField& BaseField::operator=(const BaseField& o) {
    if (this != &o) {
        mixed_ = o.mixed_;
        p_ = o.p_;
        f_ = o.f_;
        m_ = o.m_;
        N_ = o.N_;
        q_ = o.q_;
        kappa_ = o.kappa_;
        yimg_pows_ = o.yimg_pows_;
        for (auto& e : yimg_pows_) e.fld = this;
    }
    return *this;
}

BaseField& BaseField::operator=(BaseField&& o) noexcept {
    if (this != &o) {
        mixed_ = o.mixed_;
        p_ = o.p_;
        f_ = o.f_;
        m_ = o.m_;
        N_ = o.N_;
        q_ = o.q_;
        kappa_ = std::move(o.kappa_);
        yimg_pows_ = std::move(o.yimg_pows_);
        for (auto& e : yimg_pows_) e.fld = this;
    }
    return *this;
}

void BaseField::init_frobenius() {
    // y as a residue digit, and the target residue ybar^q
    const uint32_t deg = f_ * m_;
    FqCtx::Elt ybar(kappa_->zero());
    ybar[1] = 1;
    BaseElem z = lift_digit(kappa_->pow(ybar, q_));
    // Newton for h(z) = 0 on the lifted modulus polynomial
    const auto& h = kappa_->modulus();
    auto h_at = [&](const BaseElem& x) {
        BaseElem acc = from_int(h[deg]);
        for (uint32_t i = deg; i-- > 0;) acc = add(mul(acc, x), from_int(h[i]));
        return acc;
    };
    auto dh_at = [&](const BaseElem& x) {
        BaseElem acc = from_int(static_cast<long long>(deg) * h[deg]);
        for (uint32_t i = deg; i-- > 1;) acc = add(mul(acc, x), from_int(static_cast<long long>(i) * h[i]));
        return acc;
    };
    for (int it = 0; it < N_ + 2; ++it) {
        BaseElem val_h = h_at(z);
        if (val_h.zero_to_prec() && val_h.val >= N_) break;
        z = sub(z, mul(val_h, inv(dh_at(z))));
    }
    BaseElem hz = h_at(z);
    if (!(hz.zero_to_prec() || hz.val >= N_))
        throw std::logic_error("BaseField: Frobenius lift did not converge");
    yimg_pows_.clear();
    yimg_pows_.push_back(one());
    for (uint32_t j = 1; j < deg; ++j) yimg_pows_.push_back(mul(yimg_pows_.back(), z));
}

BaseElem BaseField::phi_once_mixed(const BaseElem& a) const {
    const uint32_t deg = f_ * m_;
    if (deg == 1) return a;
    // plane j = p-adic digit string of the y^j coefficient
    BaseElem acc = zero(a.absprec() - a.val);
    for (uint32_t j = 0; j < deg; ++j) {
        std::vector<FqCtx::Elt> cj(a.d.size(), kappa_->zero());
        bool nonzero = false;
        for (size_t i = 0; i < a.d.size(); ++i) {
            if (a.d[i][j]) {
                cj[i] = kappa_->from_int(a.d[i][j]);
                nonzero = true;
            }
        }
        if (!nonzero) continue;
        BaseElem coeff = make(0, std::move(cj), static_cast<long>(a.d.size()));
        acc = add(acc, mul(coeff, yimg_pows_[j]));
    }
    BaseElem r = shift(acc, a.val);
    return r;
}

bool BaseField::same(const BaseField& o) const {
    return mixed_ == o.mixed_ && p_ == o.p_ && f_ == o.f_ && m_ == o.m_ && N_ == o.N_;
}

void BaseField::check(const BaseElem& a) const {
    if (a.fld == nullptr || !same(*a.fld)) throw MixedFields("element from a different base field");
}

void BaseField::check2(const BaseElem& a, const BaseElem& b) const {
    check(a);
    check(b);
}

BaseElem BaseField::make(long val, std::vector<FqCtx::Elt> digits, long absprec) const {
    // trim leading zeros, cap the window at N digits
    size_t lead = 0;
    while (lead < digits.size() && kappa_->is_zero(digits[lead])) ++lead;
    if (lead > 0) {
        digits.erase(digits.begin(), digits.begin() + lead);
        val += static_cast<long>(lead);
    }
    if (digits.empty()) {
        BaseElem z;
        z.fld = this;
        z.val = absprec;
        return z;
    }
    long rel = absprec - val;
    if (rel > N_) {
        rel = N_;
        absprec = val + N_;
    }
    digits.resize(static_cast<size_t>(rel), kappa_->zero());
    BaseElem e;
    e.fld = this;
    e.val = val;
    e.d = std::move(digits);
    (void)absprec;
    return e;
}

BaseElem BaseField::zero(long absprec) const {
    BaseElem z;
    z.fld = this;
    z.val = absprec;
    return z;
}

BaseElem BaseField::one() const { return from_int(1); }

BaseElem BaseField::from_int(long long v) const {
    if (!mixed_) {
        FqCtx::Elt c = kappa_->from_int(v);
        if (kappa_->is_zero(c)) return zero(N_);
        std::vector<FqCtx::Elt> d(static_cast<size_t>(N_), kappa_->zero());
        d[0] = c;
        return make(0, std::move(d), N_);
    }
    std::vector<FqCtx::Elt> d;
    long long c = v;
    for (int i = 0; i < N_; ++i) {
        long long r = c % static_cast<long long>(p_);
        if (r < 0) r += p_;
        d.push_back(kappa_->from_int(r));
        c = (c - r) / static_cast<long long>(p_);
    }
    return make(0, std::move(d), N_);
}

BaseElem BaseField::from_digits(long val, std::vector<FqCtx::Elt> digits) const {
    long absprec = val + static_cast<long>(digits.size());
    if (digits.size() > static_cast<size_t>(N_))
        throw std::invalid_argument("from_digits: more digits than precision N");
    // pad to a full window
    long pad = N_ - static_cast<long>(digits.size());
    for (long i = 0; i < pad; ++i) digits.push_back(kappa_->zero());
    absprec = val + N_;
    return make(val, std::move(digits), absprec);
}

BaseElem BaseField::uniformizer() const {
    std::vector<FqCtx::Elt> d(static_cast<size_t>(N_), kappa_->zero());
    d[0] = kappa_->one();
    return make(1, std::move(d), 1 + N_);
}

BaseElem BaseField::lift_digit(const FqCtx::Elt& a) const {
    if (kappa_->is_zero(a)) return zero(N_);
    std::vector<FqCtx::Elt> d(static_cast<size_t>(N_), kappa_->zero());
    d[0] = a;
    return make(0, std::move(d), N_);
}

std::vector<FqCtx::Elt> BaseField::carry_normalize(std::vector<std::vector<long long>> planes,
                                                   size_t len) const {
    const uint32_t deg = f_ * m_;
    // fold y-powers >= deg down with the (integer-lifted) modulus polynomial
    const auto& h = kappa_->modulus();
    for (size_t D = planes.size(); D-- > deg;) {
        for (uint32_t t = 0; t < deg; ++t) {
            if (!h[t]) continue;
            for (size_t i = 0; i < len; ++i)
                planes[D - deg + t][i] -= static_cast<long long>(h[t]) * planes[D][i];
        }
        planes.pop_back();
    }
    // per-coordinate carry propagation
    std::vector<FqCtx::Elt> out(len, kappa_->zero());
    for (uint32_t j = 0; j < deg; ++j) {
        long long carry = 0;
        for (size_t i = 0; i < len; ++i) {
            long long c = planes[j][i] + carry;
            long long r = c % p_;
            if (r < 0) r += p_;
            carry = (c - r) / p_;
            out[i][j] = static_cast<uint32_t>(r);
        }
    }
    return out;
}

BaseElem BaseField::add(const BaseElem& a, const BaseElem& b) const {
    check2(a, b);
    if (a.zero_to_prec() && b.zero_to_prec()) return zero(std::min(a.val, b.val));
    if (a.zero_to_prec()) return cap_abs(b, a.val);
    if (b.zero_to_prec()) return cap_abs(a, b.val);
    long val = std::min(a.val, b.val);
    long absprec = std::min(a.absprec(), b.absprec());
    if (absprec <= val) return zero(absprec);
    size_t len = static_cast<size_t>(absprec - val);
    if (!mixed_) {
        std::vector<FqCtx::Elt> d(len, kappa_->zero());
        for (size_t i = 0; i < len; ++i) {
            long k = val + static_cast<long>(i);
            d[i] = kappa_->add(digit(a, k), digit(b, k));
        }
        return make(val, std::move(d), absprec);
    }
    const uint32_t deg = f_ * m_;
    std::vector<std::vector<long long>> planes(deg, std::vector<long long>(len, 0));
    for (size_t i = 0; i < len; ++i) {
        long k = val + static_cast<long>(i);
        FqCtx::Elt da = digit(a, k), db = digit(b, k);
        for (uint32_t j = 0; j < deg; ++j) planes[j][i] = static_cast<long long>(da[j]) + db[j];
    }
    return make(val, carry_normalize(std::move(planes), len), absprec);
}

BaseElem BaseField::neg(const BaseElem& a) const {
    check(a);
    if (a.zero_to_prec()) return a;
    size_t len = a.d.size();
    if (!mixed_) {
        std::vector<FqCtx::Elt> d(len);
        for (size_t i = 0; i < len; ++i) d[i] = kappa_->neg(a.d[i]);
        return make(a.val, std::move(d), a.absprec());
    }
    const uint32_t deg = f_ * m_;
    std::vector<std::vector<long long>> planes(deg, std::vector<long long>(len, 0));
    for (size_t i = 0; i < len; ++i)
        for (uint32_t j = 0; j < deg; ++j) planes[j][i] = -static_cast<long long>(a.d[i][j]);
    return make(a.val, carry_normalize(std::move(planes), len), a.absprec());
}

BaseElem BaseField::sub(const BaseElem& a, const BaseElem& b) const { return add(a, neg(b)); }

BaseElem BaseField::mul(const BaseElem& a, const BaseElem& b) const {
    check2(a, b);
    if (a.zero_to_prec() || b.zero_to_prec()) {
        long va = a.zero_to_prec() ? a.val : a.val;  // zero: val == absprec bound
        long vb = b.zero_to_prec() ? b.val : b.val;
        return zero(va + vb);
    }
    long val = a.val + b.val;
    size_t len = std::min(a.d.size(), b.d.size());
    long absprec = val + static_cast<long>(len);
    if (!mixed_) {
        std::vector<FqCtx::Elt> d(len, kappa_->zero());
        for (size_t i = 0; i < len; ++i)
            for (size_t j = 0; i + j < len && j < b.d.size(); ++j) {
                if (i >= a.d.size()) break;
                d[i + j] = kappa_->add(d[i + j], kappa_->mul(a.d[i], b.d[j]));
            }
        return make(val, std::move(d), absprec);
    }
    const uint32_t deg = f_ * m_;
    // integer-lift convolution in both the pi direction and the y direction
    std::vector<std::vector<long long>> planes(2 * deg - 1, std::vector<long long>(len, 0));
    for (size_t i = 0; i < len && i < a.d.size(); ++i) {
        for (size_t j = 0; i + j < len && j < b.d.size(); ++j) {
            for (uint32_t u = 0; u < deg; ++u) {
                if (!a.d[i][u]) continue;
                for (uint32_t v = 0; v < deg; ++v) {
                    if (!b.d[j][v]) continue;
                    planes[u + v][i + j] += static_cast<long long>(a.d[i][u]) * b.d[j][v];
                }
            }
        }
    }
    return make(val, carry_normalize(std::move(planes), len), absprec);
}

BaseElem BaseField::inv(const BaseElem& a) const {
    check(a);
    if (a.zero_to_prec()) throw DivisionByZeroToPrecision("inverse of zero-to-precision element");
    long rel = static_cast<long>(a.d.size());
    // Newton iteration z <- z(2 - uz) on the unit part, doubling correct digits
    BaseElem u = shift(a, -a.val);  // unit
    BaseElem z = lift_digit(kappa_->inv(u.d[0]));
    long correct = 1;
    BaseElem two = from_int(2);
    while (correct < rel) {
        z = mul(z, sub(two, mul(u, z)));
        correct *= 2;
    }
    return shift(z, -a.val);
}

BaseElem BaseField::shift(const BaseElem& a, long k) const {
    check(a);
    BaseElem r = a;
    r.val += k;
    return r;
}

BaseElem BaseField::pow(const BaseElem& a, long e) const {
    if (e < 0) return inv(pow(a, -e));
    BaseElem r = one();
    BaseElem base = a;
    unsigned long ue = static_cast<unsigned long>(e);
    while (ue) {
        if (ue & 1) r = mul(r, base);
        base = mul(base, base);
        ue >>= 1;
    }
    return r;
}

BaseElem BaseField::phi(const BaseElem& a, int k) const {
    check(a);
    int kk = ((k % static_cast<int>(m_)) + static_cast<int>(m_)) % static_cast<int>(m_);
    if (kk == 0 || a.zero_to_prec()) return a;
    if (!mixed_) {
        uint64_t e = 1;
        for (int i = 0; i < kk; ++i) e *= q_;  // q^kk <= q^m = |kappa|, fits by FqCtx bound
        std::vector<FqCtx::Elt> d(a.d.size());
        for (size_t i = 0; i < a.d.size(); ++i) d[i] = kappa_->pow(a.d[i], e);
        return make(a.val, std::move(d), a.absprec());
    }
    BaseElem r = a;
    for (int i = 0; i < kk; ++i) r = phi_once_mixed(r);
    return r;
}

long BaseField::val(const BaseElem& a) const {
    check(a);
    if (a.zero_to_prec()) throw PrecisionExhausted("valuation of zero-to-precision element");
    return a.val;
}

long BaseField::agree_prec(const BaseElem& a, const BaseElem& b) const {
    BaseElem diff = sub(a, b);
    if (diff.zero_to_prec()) return diff.val;  // val bound == absprec for zero
    return diff.val;
}

FqCtx::Elt BaseField::digit(const BaseElem& a, long k) const {
    if (a.zero_to_prec() || k < a.val || k >= a.absprec()) return kappa_->zero();
    return a.d[static_cast<size_t>(k - a.val)];
}

FqCtx::Elt BaseField::residue_unit(const BaseElem& a) const {
    if (a.zero_to_prec()) throw PrecisionExhausted("residue of zero-to-precision element");
    return a.d[0];
}

bool BaseField::phi_fixed(const BaseElem& a) const {
    BaseElem pa = phi(a);
    return agree_prec(a, pa) >= std::min(a.absprec(), pa.absprec());
}

bool BaseField::digits_in_base_subfield(const BaseElem& a) const {
    for (const auto& dig : a.d)
        if (!kappa_->in_subfield(dig, f_)) return false;
    return true;
}

BaseElem BaseField::cap_abs(const BaseElem& a, long absprec) const {
    check(a);
    if (absprec >= a.absprec()) return a;
    if (a.zero_to_prec() || absprec <= a.val) return zero(std::min(absprec, a.val));
    std::vector<FqCtx::Elt> d(a.d.begin(), a.d.begin() + (absprec - a.val));
    return make(a.val, std::move(d), absprec);
}

std::string BaseField::str(const BaseElem& a) const {
    if (a.zero_to_prec()) return "O(pi^" + std::to_string(a.val) + ")";
    std::string s;
    for (size_t i = 0; i < a.d.size(); ++i) {
        if (kappa_->is_zero(a.d[i])) continue;
        if (!s.empty()) s += " + ";
        s += kappa_->str(a.d[i]) + "*pi^" + std::to_string(a.val + static_cast<long>(i));
    }
    if (s.empty()) s = "0";
    s += " + O(pi^" + std::to_string(a.absprec()) + ")";
    return s;
}

}  // namespace lcft
