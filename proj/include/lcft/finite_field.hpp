#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lcft {

// GF(p^deg) in polynomial basis over F_p modulo a fixed monic irreducible.
// Elements are coefficient vectors of length deg (value semantics); all
// arithmetic goes through the context so representations stay comparable.
class FqCtx {
public:
    using Elt = std::vector<uint32_t>;

    // Builds GF(p^deg) over the deterministic modulus: the lexicographically
    // first monic irreducible of degree deg (so runs are reproducible).
    FqCtx(uint32_t p, uint32_t deg);

    uint32_t p() const { return p_; }
    uint32_t deg() const { return deg_; }
    // q = p^deg as unsigned 64-bit; construction rejects fields past 2^62.
    uint64_t size() const { return q_; }
    const std::vector<uint32_t>& modulus() const { return modulus_; }

    Elt zero() const { return Elt(deg_, 0); }
    Elt one() const;
    Elt from_int(long long v) const;  // image of an integer (prime subfield)

    bool is_zero(const Elt& a) const;
    bool eq(const Elt& a, const Elt& b) const { return a == b; }

    Elt add(const Elt& a, const Elt& b) const;
    Elt sub(const Elt& a, const Elt& b) const;
    Elt neg(const Elt& a) const;
    Elt mul(const Elt& a, const Elt& b) const;
    Elt inv(const Elt& a) const;
    Elt pow(const Elt& a, uint64_t e) const;

    // x -> x^p (absolute Frobenius); k-fold composition via pow.
    Elt frob_p(const Elt& a) const { return pow(a, p_); }

    // Multiplicative order of a nonzero element.
    uint64_t order(const Elt& a) const;

    // A fixed generator of GF(p^deg)^x (computed once, deterministic).
    const Elt& generator() const { return gen_; }

    // Discrete log base generator(); nullopt only for zero input.
    std::optional<uint64_t> dlog(const Elt& a) const;

    // Membership in the subfield GF(p^sub_deg) (sub_deg | deg): a^{p^sub_deg} == a.
    bool in_subfield(const Elt& a, uint32_t sub_deg) const;

    std::string str(const Elt& a) const;

private:
    static std::vector<uint32_t> find_irreducible(uint32_t p, uint32_t deg);
    Elt reduce(std::vector<uint64_t> prod) const;

    uint32_t p_;
    uint32_t deg_;
    uint64_t q_;
    std::vector<uint32_t> modulus_;  // length deg+1, monic
    Elt gen_;
    std::vector<std::pair<uint64_t, int>> q1_factors_;  // factorization of q-1
};

}  // namespace lcft
