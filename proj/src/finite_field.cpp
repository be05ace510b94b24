#include "lcft/finite_field.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace lcft {

namespace {

// Polynomial helpers over F_p, dense coefficient vectors (low degree first).
using Poly = std::vector<uint32_t>;

Poly poly_mod(Poly a, const Poly& m, uint32_t p) {
    const size_t dm = m.size() - 1;
    while (a.size() > dm) {
        uint64_t lead = a.back();
        size_t shift = a.size() - 1 - dm;
        if (lead != 0) {
            for (size_t i = 0; i <= dm; ++i) {
                uint64_t t = a[shift + i] + (p - (lead * m[i]) % p) % p;
                a[shift + i] = static_cast<uint32_t>(t % p);
            }
        }
        a.pop_back();
    }
    return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, uint32_t p) {
    std::vector<uint64_t> prod(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + uint64_t(a[i]) * b[j]) % p;
    }
    Poly r(prod.size());
    for (size_t i = 0; i < prod.size(); ++i) r[i] = static_cast<uint32_t>(prod[i]);
    return poly_mod(std::move(r), m, p);
}

Poly poly_powmod(Poly base, uint64_t e, const Poly& m, uint32_t p) {
    Poly r{1};
    base = poly_mod(std::move(base), m, p);
    while (e) {
        if (e & 1) r = poly_mulmod(r, base, m, p);
        base = poly_mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

bool poly_is_zero(const Poly& a) {
    for (uint32_t c : a)
        if (c) return false;
    return true;
}

Poly poly_trim(Poly a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

Poly poly_gcd(Poly a, Poly b, uint32_t p) {
    a = poly_trim(std::move(a));
    b = poly_trim(std::move(b));
    while (!b.empty()) {
        // a mod b, with b made monic on the fly
        uint32_t lead = b.back();
        if (lead != 1) {
            // scale b monic
            uint64_t inv = 1, base = lead, e = p - 2;
            while (e) {
                if (e & 1) inv = inv * base % p;
                base = base * base % p;
                e >>= 1;
            }
            for (auto& c : b) c = static_cast<uint32_t>(uint64_t(c) * inv % p);
        }
        Poly r = poly_trim(poly_mod(a, b, p));
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// Irreducibility over F_p: x^{p^deg} == x mod f, and x^{p^{deg/ell}} - x coprime
// to f for every prime ell | deg.
bool is_irreducible(const Poly& f, uint32_t p) {
    uint32_t deg = static_cast<uint32_t>(f.size() - 1);
    Poly x{0, 1};
    Poly xp = x;
    // x^{p^k} mod f by repeated p-th powering
    std::vector<Poly> powers;  // powers[k] = x^{p^{k+1}} mod f
    for (uint32_t k = 0; k < deg; ++k) {
        xp = poly_powmod(xp, p, f, p);
        powers.push_back(xp);
    }
    Poly diff = powers[deg - 1];
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    if (!poly_is_zero(diff)) return false;
    for (uint32_t ell = 2; ell <= deg; ++ell) {
        if (deg % ell) continue;
        bool prime = true;
        for (uint32_t d = 2; d * d <= ell; ++d)
            if (ell % d == 0) prime = false;
        if (!prime) continue;
        Poly g = powers[deg / ell - 1];
        if (g.size() < 2) g.resize(2, 0);
        g[1] = (g[1] + p - 1) % p;
        Poly gc = poly_gcd(f, g, p);
        if (!(gc.size() == 1)) return false;
    }
    return true;
}

std::vector<std::pair<uint64_t, int>> factorize(uint64_t n) {
    std::vector<std::pair<uint64_t, int>> fs;
    for (uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) { n /= d; ++e; }
            fs.emplace_back(d, e);
        }
    }
    if (n > 1) fs.emplace_back(n, 1);
    return fs;
}

}  // namespace

std::vector<uint32_t> FqCtx::find_irreducible(uint32_t p, uint32_t deg) {
    if (deg == 1) return {0, 1};  // x
    // Enumerate monic degree-deg polynomials in lexicographic order of the
    // coefficient tuple (c_0, ..., c_{deg-1}).
    Poly f(deg + 1, 0);
    f[deg] = 1;
    while (true) {
        if (f[0] != 0 && is_irreducible(f, p)) return f;
        size_t i = 0;
        while (i < deg) {
            if (++f[i] < p) break;
            f[i] = 0;
            ++i;
        }
        if (i == deg) throw std::logic_error("no irreducible polynomial found");
    }
}

FqCtx::FqCtx(uint32_t p, uint32_t deg) : p_(p), deg_(deg) {
    if (p < 2) throw std::invalid_argument("FqCtx: p must be prime >= 2");
    for (uint32_t d = 2; d * d <= p; ++d)
        if (p % d == 0) throw std::invalid_argument("FqCtx: p is not prime");
    if (deg < 1) throw std::invalid_argument("FqCtx: degree must be >= 1");
    uint64_t q = 1;
    for (uint32_t i = 0; i < deg; ++i) {
        if (q > (uint64_t(1) << 62) / p) throw std::invalid_argument("FqCtx: field too large");
        q *= p;
    }
    q_ = q;
    modulus_ = find_irreducible(p, deg);
    q1_factors_ = factorize(q_ - 1);
    // deterministic generator: first element (in counting order) of order q-1
    for (uint64_t code = 1;; ++code) {
        Elt a(deg_, 0);
        uint64_t c = code;
        for (uint32_t i = 0; i < deg_ && c; ++i) {
            a[i] = static_cast<uint32_t>(c % p_);
            c /= p_;
        }
        if (is_zero(a)) continue;
        if (order(a) == q_ - 1) {
            gen_ = a;
            break;
        }
    }
}

FqCtx::Elt FqCtx::one() const {
    Elt e(deg_, 0);
    e[0] = 1;
    return e;
}

FqCtx::Elt FqCtx::from_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    Elt e(deg_, 0);
    e[0] = static_cast<uint32_t>(r);
    return e;
}

bool FqCtx::is_zero(const Elt& a) const {
    for (uint32_t c : a)
        if (c) return false;
    return true;
}

FqCtx::Elt FqCtx::add(const Elt& a, const Elt& b) const {
    Elt r(deg_);
    for (uint32_t i = 0; i < deg_; ++i) r[i] = (a[i] + b[i]) % p_;
    return r;
}

FqCtx::Elt FqCtx::sub(const Elt& a, const Elt& b) const {
    Elt r(deg_);
    for (uint32_t i = 0; i < deg_; ++i) r[i] = (a[i] + p_ - b[i]) % p_;
    return r;
}

FqCtx::Elt FqCtx::neg(const Elt& a) const {
    Elt r(deg_);
    for (uint32_t i = 0; i < deg_; ++i) r[i] = (p_ - a[i]) % p_;
    return r;
}

FqCtx::Elt FqCtx::reduce(std::vector<uint64_t> prod) const {
    Poly r(prod.size());
    for (size_t i = 0; i < prod.size(); ++i) r[i] = static_cast<uint32_t>(prod[i] % p_);
    r = poly_mod(std::move(r), modulus_, p_);
    r.resize(deg_, 0);
    return r;
}

FqCtx::Elt FqCtx::mul(const Elt& a, const Elt& b) const {
    std::vector<uint64_t> prod(2 * deg_ - 1, 0);
    for (uint32_t i = 0; i < deg_; ++i) {
        if (!a[i]) continue;
        for (uint32_t j = 0; j < deg_; ++j) prod[i + j] = (prod[i + j] + uint64_t(a[i]) * b[j]) % p_;
    }
    return reduce(std::move(prod));
}

FqCtx::Elt FqCtx::pow(const Elt& a, uint64_t e) const {
    Elt r = one();
    Elt base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

FqCtx::Elt FqCtx::inv(const Elt& a) const {
    if (is_zero(a)) throw std::domain_error("FqCtx::inv of zero");
    return pow(a, q_ - 2);
}

uint64_t FqCtx::order(const Elt& a) const {
    if (is_zero(a)) throw std::domain_error("FqCtx::order of zero");
    uint64_t ord = q_ - 1;
    for (const auto& [ell, e] : q1_factors_) {
        for (int i = 0; i < e; ++i) {
            uint64_t cand = ord / ell;
            if (eq(pow(a, cand), one()))
                ord = cand;
            else
                break;
        }
    }
    return ord;
}

std::optional<uint64_t> FqCtx::dlog(const Elt& a) const {
    if (is_zero(a)) return std::nullopt;
    // baby-step giant-step in the cyclic group of order q-1
    uint64_t n = q_ - 1;
    uint64_t s = 1;
    while (s * s < n) ++s;
    std::map<Elt, uint64_t> baby;
    Elt cur = one();
    for (uint64_t j = 0; j < s; ++j) {
        baby.emplace(cur, j);
        cur = mul(cur, gen_);
    }
    Elt giant_step = inv(pow(gen_, s));  // g^{-s}
    Elt y = a;
    for (uint64_t i = 0; i <= s; ++i) {
        auto it = baby.find(y);
        if (it != baby.end()) return (i * s + it->second) % n;
        y = mul(y, giant_step);
    }
    return std::nullopt;  // unreachable for nonzero input
}

bool FqCtx::in_subfield(const Elt& a, uint32_t sub_deg) const {
    uint64_t ps = 1;
    for (uint32_t i = 0; i < sub_deg; ++i) ps *= p_;
    return eq(pow(a, ps), a);
}

std::string FqCtx::str(const Elt& a) const {
    std::string s = "[";
    for (uint32_t i = 0; i < deg_; ++i) {
        if (i) s += ",";
        s += std::to_string(a[i]);
    }
    return s + "]";
}

}  // namespace lcft
