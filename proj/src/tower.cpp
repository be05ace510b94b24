#include "lcft/tower.hpp"

#include <algorithm>
#include <climits>

namespace lcft {

namespace {
long ceil_div(long a, long b) {  // b > 0
    long q = a / b, r = a % b;
    return (r > 0) ? q + 1 : q;
}
}  // namespace

void Tower::repoint_elem_(StageElem& x) const {
    x.tw = this;
    if (x.stage == 0) {
        x.b.fld = &base_;
        return;
    }
    for (auto& cj : x.c) repoint_elem_(cj);
}

void Tower::repoint_() {
    for (auto& st : stages_) {
        for (auto& cj : st.g) repoint_elem_(cj);
        for (auto& im : st.gen_images) repoint_elem_(im);
        repoint_elem_(st.inv_pi);
    }
    for (auto& s : full_group_) {
        s.tw = this;
        for (auto& im : s.img) repoint_elem_(im);
    }
}

Tower::Tower(const Tower& o) : base_(o.base_), stages_(o.stages_), full_group_(o.full_group_) {
    repoint_();
}

Tower::Tower(Tower&& o) noexcept
    : base_(std::move(o.base_)), stages_(std::move(o.stages_)), full_group_(std::move(o.full_group_)) {
    repoint_();
}

Tower& Tower::operator=(const Tower& o) {
    if (this != &o) {
        base_ = o.base_;
        stages_ = o.stages_;
        full_group_ = o.full_group_;
        repoint_();
    }
    return *this;
}

Tower& Tower::operator=(Tower&& o) noexcept {
    if (this != &o) {
        base_ = std::move(o.base_);
        stages_ = std::move(o.stages_);
        full_group_ = std::move(o.full_group_);
        repoint_();
    }
    return *this;
}

long Tower::e_total(int stage) const {
    long e = 1;
    for (int i = 1; i <= stage; ++i) e *= this->e(i);
    return e;
}

long Tower::abs_cap(int stage) const { return base_.N() * e_total(stage); }

StageElem Tower::make(int stage, std::vector<StageElem> coeffs) const {
    StageElem x;
    x.tw = this;
    x.stage = stage;
    x.c = std::move(coeffs);
    return x;
}

StageElem Tower::from_base(const BaseElem& a, int stage) const {
    StageElem x;
    x.tw = this;
    x.stage = 0;
    x.b = a;
    return embed(x, stage);
}

StageElem Tower::embed(const StageElem& x, int stage) const {
    if (x.stage > stage) throw StageMismatch("cannot embed into a lower stage");
    StageElem cur = x;
    cur.tw = this;
    while (cur.stage < stage) {
        int s = cur.stage + 1;
        std::vector<StageElem> coeffs;
        coeffs.reserve(e(s));
        coeffs.push_back(cur);
        for (unsigned j = 1; j < e(s); ++j) coeffs.push_back(zero(s - 1, abs_cap(s - 1)));
        cur = make(s, std::move(coeffs));
    }
    return cur;
}

StageElem Tower::zero(int stage, long absprec) const {
    if (stage == 0) {
        StageElem x;
        x.tw = this;
        x.stage = 0;
        x.b = base_.zero(absprec);
        return x;
    }
    unsigned es = e(stage);
    std::vector<StageElem> coeffs;
    coeffs.reserve(es);
    for (unsigned j = 0; j < es; ++j)
        coeffs.push_back(zero(stage - 1, ceil_div(absprec - static_cast<long>(j), es)));
    return make(stage, std::move(coeffs));
}

StageElem Tower::one(int stage) const { return from_base(base_.one(), stage); }

StageElem Tower::from_int(long long v, int stage) const { return from_base(base_.from_int(v), stage); }

StageElem Tower::pi(int stage) const {
    if (stage == 0) return from_base(base_.uniformizer());
    unsigned es = e(stage);
    if (es == 1) return neg(embed(stage_poly(stage)[0], stage));
    std::vector<StageElem> coeffs;
    coeffs.reserve(es);
    coeffs.push_back(zero(stage - 1, abs_cap(stage - 1)));
    coeffs.push_back(one(stage - 1));
    for (unsigned j = 2; j < es; ++j) coeffs.push_back(zero(stage - 1, abs_cap(stage - 1)));
    return make(stage, std::move(coeffs));
}

StageElem Tower::pi_pow(int stage, long k) const {
    if (stage == 0) {
        StageElem x;
        x.tw = this;
        x.stage = 0;
        x.b = base_.shift(base_.one(), k);
        return x;
    }
    StageElem r = one(stage);
    const StageElem& base_elt = (k >= 0) ? pi(stage) : stages_[static_cast<size_t>(stage - 1)].inv_pi;
    long n = (k >= 0) ? k : -k;
    StageElem acc = base_elt;
    while (n) {
        if (n & 1) r = mul(r, acc);
        acc = mul(acc, acc);
        n >>= 1;
    }
    return r;
}

StageElem Tower::lift_digit(int stage, const FqCtx::Elt& d) const {
    return from_base(base_.lift_digit(d), stage);
}

StageElem Tower::random_unit(int stage, std::mt19937_64& rng) const {
    const FqCtx& k = base_.kappa();
    auto rand_digit = [&](bool nonzero) {
        FqCtx::Elt d = k.zero();
        do {
            for (auto& coeff : d) coeff = static_cast<uint32_t>(rng() % base_.p());
        } while (nonzero && k.is_zero(d));
        return d;
    };
    std::function<StageElem(int, bool)> build = [&](int s, bool unit) -> StageElem {
        if (s == 0) {
            std::vector<FqCtx::Elt> d;
            d.push_back(rand_digit(unit));
            for (int i = 1; i < base_.N(); ++i) d.push_back(rand_digit(false));
            StageElem x;
            x.tw = this;
            x.stage = 0;
            x.b = base_.from_digits(0, std::move(d));
            return x;
        }
        std::vector<StageElem> coeffs;
        for (unsigned j = 0; j < e(s); ++j) coeffs.push_back(build(s - 1, unit && j == 0));
        return make(s, std::move(coeffs));
    };
    return build(stage, true);
}

void Tower::lift_pair(StageElem& a, StageElem& b) const {
    if (a.stage < b.stage) a = embed(a, b.stage);
    if (b.stage < a.stage) b = embed(b, a.stage);
}

StageElem Tower::add(const StageElem& a0, const StageElem& b0) const {
    StageElem a = a0, b = b0;
    lift_pair(a, b);
    if (a.stage == 0) {
        a.b = base_.add(a.b, b.b);
        return a;
    }
    std::vector<StageElem> coeffs;
    coeffs.reserve(a.c.size());
    for (size_t j = 0; j < a.c.size(); ++j) coeffs.push_back(add(a.c[j], b.c[j]));
    return make(a.stage, std::move(coeffs));
}

StageElem Tower::neg(const StageElem& a) const {
    if (a.stage == 0) {
        StageElem r = a;
        r.b = base_.neg(a.b);
        return r;
    }
    std::vector<StageElem> coeffs;
    coeffs.reserve(a.c.size());
    for (const auto& cj : a.c) coeffs.push_back(neg(cj));
    return make(a.stage, std::move(coeffs));
}

StageElem Tower::sub(const StageElem& a, const StageElem& b) const { return add(a, neg(b)); }

StageElem Tower::mul_raw(int stage, const StageElem& a, const StageElem& b) const {
    unsigned es = e(stage);
    // convolution then Eisenstein fold of powers >= es
    std::vector<StageElem> conv;
    conv.reserve(2 * es - 1);
    for (unsigned d = 0; d < 2 * es - 1; ++d) conv.push_back(zero(stage - 1, LONG_MAX / 4));
    for (unsigned i = 0; i < es; ++i)
        for (unsigned j = 0; j < es; ++j) conv[i + j] = add(conv[i + j], mul(a.c[i], b.c[j]));
    const auto& g = stage_poly(stage);
    for (unsigned d = 2 * es - 2; d >= es && d < 2 * es; --d) {
        for (unsigned t = 0; t < es; ++t)
            conv[d - es + t] = sub(conv[d - es + t], mul(conv[d], g[t]));
        conv.pop_back();
    }
    return make(stage, std::move(conv));
}

StageElem Tower::mul(const StageElem& a0, const StageElem& b0) const {
    StageElem a = a0, b = b0;
    lift_pair(a, b);
    if (a.stage == 0) {
        a.b = base_.mul(a.b, b.b);
        return a;
    }
    return mul_raw(a.stage, a, b);
}

bool Tower::zero_to_prec(const StageElem& x) const {
    if (x.stage == 0) return x.b.zero_to_prec();
    for (const auto& cj : x.c)
        if (!zero_to_prec(cj)) return false;
    return true;
}

long Tower::known_zero_prec(const StageElem& x) const {
    if (x.stage == 0) return x.b.val;  // val == bound for zero windows
    unsigned es = e(x.stage);
    long best = LONG_MAX / 4;
    for (size_t j = 0; j < x.c.size(); ++j)
        best = std::min(best, es * known_zero_prec(x.c[j]) + static_cast<long>(j));
    return best;
}

long Tower::val(const StageElem& x) const {
    if (x.stage == 0) return base_.val(x.b);
    if (zero_to_prec(x)) throw PrecisionExhausted("valuation of zero-to-precision element");
    unsigned es = e(x.stage);
    long best = LONG_MAX / 4, unknown = LONG_MAX / 4;
    for (size_t j = 0; j < x.c.size(); ++j) {
        if (zero_to_prec(x.c[j]))
            unknown = std::min(unknown, es * absprec(x.c[j]) + static_cast<long>(j));
        else {
            long v;
            try {
                v = val(x.c[j]);
            } catch (const PrecisionExhausted&) {
                unknown = std::min(unknown, es * known_zero_prec(x.c[j]) + static_cast<long>(j));
                continue;
            }
            best = std::min(best, es * v + static_cast<long>(j));
        }
    }
    if (unknown < best)
        throw PrecisionExhausted("valuation not determined at this precision");
    return best;
}

long Tower::absprec(const StageElem& x) const {
    if (x.stage == 0) return x.b.absprec();
    unsigned es = e(x.stage);
    long r = LONG_MAX / 4;
    for (size_t j = 0; j < x.c.size(); ++j)
        r = std::min(r, es * absprec(x.c[j]) + static_cast<long>(j));
    return r;
}

long Tower::agree_prec(const StageElem& a, const StageElem& b) const {
    return known_zero_prec(sub(a, b));
}

StageElem Tower::cap(const StageElem& x, long absprec_cap) const {
    if (x.stage == 0) {
        StageElem r = x;
        r.b = base_.cap_abs(x.b, absprec_cap);
        return r;
    }
    unsigned es = e(x.stage);
    std::vector<StageElem> coeffs;
    coeffs.reserve(x.c.size());
    for (size_t j = 0; j < x.c.size(); ++j)
        coeffs.push_back(cap(x.c[j], ceil_div(absprec_cap - static_cast<long>(j), es)));
    return make(x.stage, std::move(coeffs));
}

StageElem Tower::phi(const StageElem& x, int k) const {
    if (x.stage == 0) {
        StageElem r = x;
        r.b = base_.phi(x.b, k);
        return r;
    }
    std::vector<StageElem> coeffs;
    coeffs.reserve(x.c.size());
    for (const auto& cj : x.c) coeffs.push_back(phi(cj, k));
    return make(x.stage, std::move(coeffs));
}

bool Tower::phi_fixed(const StageElem& x) const {
    StageElem px = phi(x);
    return agree_prec(x, px) >= std::min(absprec(x), absprec(px));
}

FqCtx::Elt Tower::residue(const StageElem& x) const {
    if (x.stage == 0) return base_.residue_unit(x.b);
    if (val(x) != 0) throw PrecisionExhausted("residue requires a unit");
    return residue(x.c[0]);
}

StageElem Tower::inv(const StageElem& x) const {
    if (x.stage == 0) {
        StageElem r = x;
        r.b = base_.inv(x.b);
        return r;
    }
    if (zero_to_prec(x)) throw DivisionByZeroToPrecision("inverse of zero-to-precision element");
    long k = val(x);
    StageElem w = (k == 0) ? x : mul(x, pi_pow(x.stage, -k));
    StageElem z = lift_digit(x.stage, base_.kappa().inv(residue(w)));
    StageElem two = from_int(2, x.stage);
    long target = absprec(w);
    for (long correct = 1; correct < target; correct *= 2) z = mul(z, sub(two, mul(w, z)));
    return (k == 0) ? z : mul(z, pi_pow(x.stage, -k));
}

StageElem Tower::pow(const StageElem& a, long e) const {
    if (e < 0) return inv(pow(a, -e));
    StageElem r = one(a.stage);
    StageElem acc = a;
    unsigned long ue = static_cast<unsigned long>(e);
    while (ue) {
        if (ue & 1) r = mul(r, acc);
        acc = mul(acc, acc);
        ue >>= 1;
    }
    return r;
}

std::vector<FqCtx::Elt> Tower::digits(const StageElem& x) const {
    const FqCtx& kap = base_.kappa();
    if (zero_to_prec(x)) return {};
    long v = val(x);
    long window = absprec(x) - v;
    StageElem cur = mul(x, pi_pow(x.stage, -v));
    std::vector<FqCtx::Elt> out;
    for (long k = 0; k < window; ++k) {
        if (zero_to_prec(cur)) {
            if (absprec(cur) <= 0) break;  // nothing more is known
            out.push_back(kap.zero());
            cur = mul(cur, pi_pow(x.stage, -1));
            continue;
        }
        long cv;
        try {
            cv = val(cur);
        } catch (const PrecisionExhausted&) {
            break;
        }
        if (cv > 0) {
            out.push_back(kap.zero());
        } else {
            FqCtx::Elt d = residue(cur);
            out.push_back(d);
            cur = sub(cur, lift_digit(x.stage, d));
        }
        cur = mul(cur, pi_pow(x.stage, -1));
    }
    return out;
}

bool Tower::digits_in_base_subfield(const StageElem& x) const {
    for (const auto& d : digits(x))
        if (!base_.kappa().in_subfield(d, base_.f())) return false;
    return true;
}

StageElem Tower::eval_poly(const std::vector<StageElem>& coeffs, const StageElem& x) const {
    if (coeffs.empty()) return zero(x.stage, abs_cap(x.stage));
    StageElem acc = embed(coeffs.back(), x.stage);
    for (size_t i = coeffs.size() - 1; i-- > 0;) acc = add(mul(acc, x), embed(coeffs[i], x.stage));
    return acc;
}

StageElem Tower::stage_norm(const StageElem& x) const {
    if (x.stage == 0) throw StageMismatch("stage_norm needs stage >= 1");
    int s = x.stage;
    unsigned es = e(s);
    if (zero_to_prec(x)) return zero(s - 1, ceil_div(absprec(x), es));
    // multiplication matrix on the power basis, then a valuation-pivoted determinant
    std::vector<std::vector<StageElem>> mat(es);
    StageElem col = x;
    StageElem pis = pi(s);
    for (unsigned j = 0; j < es; ++j) {
        mat[j] = col.c;  // column j as rows of stage-(s-1) coefficients
        if (j + 1 < es) col = mul(col, pis);
    }
    // mat[j][i] = coefficient i of x*pi^j; determinant over stage s-1
    StageElem det = one(s - 1);
    int sign = 1;
    for (unsigned k = 0; k < es; ++k) {
        long bestval = 0;
        int best = -1;
        for (unsigned r = k; r < es; ++r) {
            const StageElem& cand = mat[r][k];
            if (zero_to_prec(cand)) continue;
            long v;
            try {
                v = val(cand);
            } catch (const PrecisionExhausted&) {
                continue;
            }
            if (best < 0 || v < bestval) {
                best = static_cast<int>(r);
                bestval = v;
            }
        }
        if (best < 0) throw PrecisionExhausted("norm determinant lost all digits");
        if (static_cast<unsigned>(best) != k) {
            std::swap(mat[static_cast<unsigned>(best)], mat[k]);
            sign = -sign;
        }
        det = mul(det, mat[k][k]);
        StageElem pivinv = inv(mat[k][k]);
        for (unsigned r = k + 1; r < es; ++r) {
            if (zero_to_prec(mat[r][k])) continue;
            StageElem factor = mul(mat[r][k], pivinv);
            for (unsigned cidx = k; cidx < es; ++cidx)
                mat[r][cidx] = sub(mat[r][cidx], mul(factor, mat[k][cidx]));
        }
    }
    return sign == 1 ? det : neg(det);
}

StageElem Tower::stage_trace(const StageElem& x) const {
    if (x.stage == 0) throw StageMismatch("stage_trace needs stage >= 1");
    int s = x.stage;
    unsigned es = e(s);
    StageElem acc = zero(s - 1, abs_cap(s - 1));
    StageElem col = x;
    StageElem pis = pi(s);
    for (unsigned j = 0; j < es; ++j) {
        acc = add(acc, col.c[j]);
        if (j + 1 < es) col = mul(col, pis);
    }
    return acc;
}

StageElem Tower::norm_to(const StageElem& x, int target_stage) const {
    if (x.stage < target_stage) throw StageMismatch("norm_to goes downward only");
    StageElem cur = x;
    while (cur.stage > target_stage) cur = stage_norm(cur);
    return cur;
}

StageElem Tower::hensel_refine_root(int stage, const std::vector<StageElem>& g,
                                    const StageElem& seed) const {
    auto deriv = [&](void) {
        std::vector<StageElem> dg;
        for (size_t i = 1; i < g.size(); ++i)
            dg.push_back(mul(from_int(static_cast<long long>(i), g[i].stage), g[i]));
        return dg;
    };
    std::vector<StageElem> dg = deriv();
    StageElem z = embed(seed, stage);
    StageElem gz = eval_poly(g, z);
    StageElem dgz = eval_poly(dg, z);
    long vg = known_zero_prec(gz);
    long vd;
    try {
        vd = val(dgz);
    } catch (const PrecisionExhausted&) {
        throw PrecisionExhausted("hensel_refine_root: derivative undetermined");
    }
    if (!(vg > 2 * vd)) throw PrecisionExhausted("hensel_refine_root: seed not within Hensel radius");
    long last_vg = known_zero_prec(gz);
    for (int it = 0; it < 200 && !zero_to_prec(gz); ++it) {
        z = sub(z, mul(gz, inv(dgz)));
        gz = eval_poly(g, z);
        dgz = eval_poly(dg, z);
        long new_vg = known_zero_prec(gz);
        if (new_vg <= last_vg) throw PrecisionExhausted("hensel_refine_root: no convergence");
        last_vg = new_vg;
    }
    if (!zero_to_prec(gz)) throw PrecisionExhausted("hensel_refine_root: no convergence");
    // the root is pinned only modulo pi^(B - v(g')): digits beyond that carry
    // seed noise Newton cannot see through g
    return cap(z, known_zero_prec(gz) - val(dgz));
}

long Tower::different_val(int stage) const {
    if (stage == 0) return 0;
    const auto& g = stage_poly(stage);
    std::vector<StageElem> dg;
    for (size_t i = 1; i < g.size(); ++i)
        dg.push_back(mul(from_int(static_cast<long long>(i), g[i].stage), g[i]));
    StageElem d = eval_poly(dg, pi(stage));
    return val(d) + static_cast<long>(e(stage)) * different_val(stage - 1);
}

StageElem Tower::apply(const GaloisElement& s, const StageElem& x, int frob_power) const {
    if (x.stage > s.top) throw StageMismatch("automorphism does not act on this stage");
    if (x.stage == 0) {
        StageElem r = x;
        r.b = base_.phi(x.b, frob_power);
        return r;
    }
    std::vector<StageElem> coeffs;
    coeffs.reserve(x.c.size());
    for (const auto& cj : x.c) coeffs.push_back(apply(s, cj, frob_power));
    return eval_poly(coeffs, s.img[static_cast<size_t>(x.stage - 1)]);
}

GaloisElement Tower::galois_identity(int top) const {
    GaloisElement g;
    g.tw = this;
    g.top = top;
    for (int i = 1; i <= top; ++i) g.img.push_back(pi(i));
    return g;
}

GaloisElement Tower::compose(const GaloisElement& a, const GaloisElement& b) const {
    if (a.top != b.top) throw StageMismatch("composing automorphisms of different stages");
    GaloisElement g;
    g.tw = this;
    g.top = a.top;
    for (size_t i = 0; i < b.img.size(); ++i) g.img.push_back(apply(a, b.img[i]));
    return g;
}

bool Tower::galois_eq(const GaloisElement& a, const GaloisElement& b) const {
    if (a.top != b.top) return false;
    for (size_t i = 0; i < a.img.size(); ++i) {
        if (!eq_weak(a.img[i], b.img[i], abs_cap(static_cast<int>(i) + 1) / 2)) return false;
    }
    return true;
}

bool Tower::galois_is_identity(const GaloisElement& s) const {
    return galois_eq(s, galois_identity(s.top));
}

unsigned Tower::galois_order(const GaloisElement& s, unsigned cap) const {
    GaloisElement cur = s;
    for (unsigned k = 1; k <= cap; ++k) {
        if (galois_is_identity(cur)) return k;
        cur = compose(cur, s);
    }
    throw std::logic_error("galois_order: cap exceeded");
}

GaloisElement Tower::galois_inverse(const GaloisElement& s) const {
    unsigned ord = galois_order(s);
    GaloisElement r = galois_identity(s.top);
    for (unsigned k = 1; k < ord; ++k) r = compose(r, s);
    return r;
}

GaloisElement Tower::restrict(const GaloisElement& s, int top) const {
    if (top > s.top) throw StageMismatch("restrict: target above domain");
    GaloisElement g;
    g.tw = this;
    g.top = top;
    g.img.assign(s.img.begin(), s.img.begin() + top);
    return g;
}

int Tower::add_stage(std::vector<StageElem> g, std::vector<std::vector<StageElem>> gen_image_polys,
                     unsigned declared_order) {
    int s = depth() + 1;
    if (g.size() < 2) throw NotEisenstein("polynomial must have degree >= 1");
    unsigned es = static_cast<unsigned>(g.size() - 1);
    for (auto& coeff : g) coeff = embed(coeff, s - 1);
    // monic
    StageElem lead_diff = sub(g[es], one(s - 1));
    if (!zero_to_prec(lead_diff)) throw NotEisenstein("polynomial is not monic");
    // Eisenstein: constant term valuation exactly 1, others >= 1
    if (zero_to_prec(g[0]) || val(g[0]) != 1)
        throw NotEisenstein("constant term must have valuation exactly 1");
    for (unsigned j = 1; j < es; ++j) {
        if (zero_to_prec(g[j])) {
            if (absprec(g[j]) < 1) throw NotEisenstein("coefficient precision too low");
            continue;
        }
        if (val(g[j]) < 1) throw NotEisenstein("middle coefficient is a unit");
    }
    Stage st;
    st.e = es;
    st.g = g;
    st.declared_order = 0;
    stages_.push_back(std::move(st));

    // cached 1/pi: pi^e = -(g_0 + ... + g_{e-1} x^{e-1}) = (-g_0)(1 + H)
    Stage& stage_ref = stages_.back();
    {
        StageElem g0inv = inv(g[0]);
        StageElem H = zero(s, abs_cap(s));
        for (unsigned t = 1; t < es; ++t) {
            StageElem term = mul(embed(mul(g[t], g0inv), s), pi_pow_raw_(s, t));
            H = add(H, term);
        }
        StageElem one_plus_H = add(one(s), H);
        StageElem u = one(s);
        StageElem two = from_int(2, s);
        for (long correct = 1; correct < abs_cap(s); correct *= 2)
            u = mul(u, sub(two, mul(one_plus_H, u)));
        StageElem Ginv = mul(embed(neg(g0inv), s), u);
        stage_ref.inv_pi = mul(pi_pow_raw_(s, static_cast<long>(es) - 1), Ginv);
        // sanity: inv_pi * pi == 1 (tracked precision erodes a little per
        // nested stage, so verify against a generous floor)
        StageElem check = mul(stage_ref.inv_pi, pi(s));
        if (!eq_weak(check, one(s), 2 * abs_cap(s) / 3))
            throw std::logic_error("tower stage: 1/pi construction failed");
    }

    if (!gen_image_polys.empty()) {
        std::vector<StageElem> images;
        for (auto& poly : gen_image_polys) {
            if (poly.size() > es) throw std::invalid_argument("generator image degree too large");
            std::vector<StageElem> coeffs;
            for (auto& cj : poly) coeffs.push_back(embed(cj, s - 1));
            while (coeffs.size() < es) coeffs.push_back(zero(s - 1, abs_cap(s - 1)));
            images.push_back(make(s, std::move(coeffs)));
        }
        set_stage_generators(s, std::move(images), declared_order);
    }
    return s;
}

void Tower::set_stage_generators(int stage, std::vector<StageElem> images, unsigned declared_order) {
    Stage& stage_ref = stages_.at(static_cast<size_t>(stage - 1));
    for (auto& img : images) {
        img = embed(img, stage);
        StageElem residual = eval_poly(stage_ref.g, img);
        if (!zero_to_prec(residual))
            throw std::invalid_argument("galois generator image is not a root to precision");
        if (declared_order > 0) {
            StageElem cur = img;
            long floor = abs_cap(stage) / 2;
            for (unsigned k = 1; k < declared_order; ++k) {
                if (eq_weak(cur, pi(stage), floor))
                    throw std::invalid_argument("galois generator has smaller order than declared");
                cur = eval_poly(img.c, cur);
            }
            if (!eq_weak(cur, pi(stage), floor))
                throw std::invalid_argument("galois generator does not realize the declared order");
        }
    }
    stage_ref.gen_images = std::move(images);
    stage_ref.declared_order = declared_order;
}

void Tower::galois_validate(const GaloisElement& s) const {
    for (int i = 1; i <= s.top; ++i) {
        // sigma applied to g_i must vanish at sigma(pi_i)
        const auto& g = stage_poly(i);
        std::vector<StageElem> gs;
        gs.reserve(g.size());
        for (const auto& cj : g) gs.push_back(apply(s, cj));
        StageElem residual = eval_poly(gs, s.img[static_cast<size_t>(i - 1)]);
        if (!zero_to_prec(residual))
            throw std::invalid_argument("automorphism image is not a root of the stage polynomial");
    }
}

void Tower::set_full_group(std::vector<GaloisElement> group) {
    for (const auto& s : group) galois_validate(s);
    full_group_ = std::move(group);
}

const std::vector<GaloisElement>& Tower::full_group() const {
    if (full_group_.empty()) throw std::logic_error("tower has no installed Galois group");
    return full_group_;
}

StageElem Tower::pi_pow_raw_(int stage, long k) const {
    // positive pi powers during stage construction (inv_pi not yet available)
    StageElem r = one(stage);
    StageElem acc = pi(stage);
    while (k) {
        if (k & 1) r = mul(r, acc);
        acc = mul(acc, acc);
        k >>= 1;
    }
    return r;
}

std::string Tower::str(const StageElem& x) const {
    if (x.stage == 0) return base_.str(x.b);
    if (zero_to_prec(x)) return "O(pi_" + std::to_string(x.stage) + "^" + std::to_string(absprec(x)) + ")";
    long v = val(x);
    std::string sres;
    auto ds = digits(x);
    const FqCtx& kap = base_.kappa();
    for (size_t i = 0; i < ds.size(); ++i) {
        if (kap.is_zero(ds[i])) continue;
        if (!sres.empty()) sres += " + ";
        sres += kap.str(ds[i]) + "*pi_" + std::to_string(x.stage) + "^" + std::to_string(v + static_cast<long>(i));
    }
    if (sres.empty()) sres = "0";
    return sres + " + O(pi_" + std::to_string(x.stage) + "^" + std::to_string(absprec(x)) + ")";
}

}  // namespace lcft
