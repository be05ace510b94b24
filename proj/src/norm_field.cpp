#include "lcft/norm_field.hpp"

#include <algorithm>

namespace lcft {

void NormField::check(const NormVector& v) const {
    if (v.tw != tw_) throw TowerMismatch("vector belongs to a different tower");
    if (v.a.empty()) throw TowerMismatch("empty norm vector");
}

NormVector NormField::from_coords(std::vector<StageElem> coords, int base_stage,
                                  int top_stage) const {
    NormVector v;
    v.tw = tw_;
    v.base_stage = base_stage;
    v.top_stage = (top_stage < 0) ? tw_->depth() : top_stage;
    v.a = std::move(coords);
    for (int k = 0; k < v.chain_len(); ++k)
        v.a[static_cast<size_t>(k)] = tw_->embed(v.a[static_cast<size_t>(k)], v.stage_of(k));
    validate(v);
    return v;
}

NormVector NormField::from_top(const StageElem& top, int base_stage, int top_stage) const {
    NormVector v;
    v.tw = tw_;
    v.base_stage = base_stage;
    v.top_stage = (top_stage < 0) ? tw_->depth() : top_stage;
    int len = tw_->depth() - base_stage + 1;
    std::vector<StageElem> coords(static_cast<size_t>(len), top);
    StageElem cur = tw_->embed(top, v.top_stage);
    for (int k = len - 1; k >= 0; --k) {
        int s = v.stage_of(k);
        if (cur.stage > s) cur = tw_->norm_to(cur, s);
        coords[static_cast<size_t>(k)] = cur;
    }
    v.a = std::move(coords);
    validate(v);
    return v;
}

NormVector NormField::one(int base_stage, int top_stage) const {
    int top = (top_stage < 0) ? tw_->depth() : top_stage;
    return from_top(tw_->one(top), base_stage, top_stage);
}

NormVector NormField::prime(const std::vector<StageElem>& primes) const {
    std::vector<StageElem> coords = primes;
    return from_coords(std::move(coords), 0, tw_->depth());
}

void NormField::validate(const NormVector& v) const {
    check(v);
    long v0 = LONG_MIN;
    for (int k = 0; k < v.chain_len(); ++k) {
        const StageElem& coord = v.a[static_cast<size_t>(k)];
        if (coord.stage != v.stage_of(k)) throw NotNormCompatible("coordinate at wrong stage", k);
        if (tw_->zero_to_prec(coord)) continue;
        long vk = tw_->val(coord);
        if (v0 == LONG_MIN) v0 = vk;
        // normalized valuations must agree across the chain (eq. of valuations)
        if (vk != v0) throw NotNormCompatible("valuation varies along the chain", k);
    }
    for (int k = 0; k + 1 < v.chain_len(); ++k) {
        const StageElem& lo = v.a[static_cast<size_t>(k)];
        const StageElem& hi = v.a[static_cast<size_t>(k + 1)];
        StageElem pushed = (hi.stage > lo.stage) ? tw_->norm_to(hi, lo.stage) : hi;
        if (!tw_->eq_weak(pushed, lo, std::min(tw_->absprec(pushed), tw_->absprec(lo)) / 2))
            throw NotNormCompatible("norm compatibility fails", k);
    }
}

long NormField::valuation(const NormVector& v) const {
    check(v);
    return tw_->val(v.a[0]);
}

StageElem NormField::stabilized_coord(const NormVector& x, const NormVector& y, int k,
                                      int* stab_at, long* agreement) const {
    int len = x.chain_len();
    int target_stage = x.stage_of(k);
    std::vector<StageElem> seq;
    for (int j = k; j < len; ++j) {
        StageElem sum = tw_->add(x.a[static_cast<size_t>(j)], y.a[static_cast<size_t>(j)]);
        seq.push_back(sum.stage > target_stage ? tw_->norm_to(sum, target_stage) : sum);
    }
    if (seq.size() == 1) {
        if (stab_at) *stab_at = k;
        if (agreement) *agreement = tw_->absprec(seq[0]);
        return seq[0];
    }
    // the deepest consecutive pair pins the trusted precision of the limit;
    // earlier pairs locate where the sequence settled
    StageElem last_diff = tw_->sub(seq[seq.size() - 1], seq[seq.size() - 2]);
    long A = tw_->known_zero_prec(last_diff);
    StageElem out = tw_->cap(seq.back(), A);
    if (!tw_->zero_to_prec(out)) {
        long rel = A - tw_->val(out);
        if (rel < 1)
            throw NotStabilized("norm addition did not stabilize at depth", static_cast<int>(A));
    }
    int settle = k + static_cast<int>(seq.size()) - 2;
    for (size_t j = 0; j + 1 < seq.size(); ++j) {
        StageElem d = tw_->sub(seq[j], seq[j + 1]);
        if (tw_->known_zero_prec(d) >= A) {
            settle = k + static_cast<int>(j);
            break;
        }
    }
    if (stab_at) *stab_at = settle;
    if (agreement) *agreement = A;
    return out;
}

NormVector NormField::add(const NormVector& x, const NormVector& y, AddRecord* rec) const {
    check(x);
    check(y);
    if (x.base_stage != y.base_stage || x.top_stage != y.top_stage)
        throw TowerMismatch("adding vectors over different chains");
    NormVector r;
    r.tw = tw_;
    r.base_stage = x.base_stage;
    r.top_stage = x.top_stage;
    if (rec) {
        rec->stabilized_at.assign(static_cast<size_t>(x.chain_len()), -1);
        rec->agreement.assign(static_cast<size_t>(x.chain_len()), -1);
    }
    for (int k = 0; k < x.chain_len(); ++k) {
        int stab = -1;
        long agree = -1;
        r.a.push_back(stabilized_coord(x, y, k, &stab, &agree));
        if (rec) {
            rec->stabilized_at[static_cast<size_t>(k)] = stab;
            rec->agreement[static_cast<size_t>(k)] = agree;
        }
    }
    validate(r);
    return r;
}

NormVector NormField::neg(const NormVector& x) const {
    check(x);
    // The additive inverse in X is multiplication by the order-2 torsion
    // vector: the coherent lift of -1 from the top (its lower coordinates are
    // +1 through even-degree stages; componentwise negation would not be
    // norm-compatible there).
    NormVector minus_one = from_top(tw_->neg(tw_->one(x.top_stage)), x.base_stage, x.top_stage);
    return mul(x, minus_one);
}

NormVector NormField::sub(const NormVector& x, const NormVector& y, AddRecord* rec) const {
    return add(x, neg(y), rec);
}

NormVector NormField::mul(const NormVector& x, const NormVector& y) const {
    check(x);
    check(y);
    if (x.base_stage != y.base_stage || x.top_stage != y.top_stage)
        throw TowerMismatch("multiplying vectors over different chains");
    NormVector r;
    r.tw = tw_;
    r.base_stage = x.base_stage;
    r.top_stage = x.top_stage;
    for (int k = 0; k < x.chain_len(); ++k)
        r.a.push_back(tw_->mul(x.a[static_cast<size_t>(k)], y.a[static_cast<size_t>(k)]));
    return r;
}

NormVector NormField::inv(const NormVector& x) const {
    check(x);
    NormVector r = x;
    for (auto& c : r.a) c = tw_->inv(c);
    return r;
}

NormVector NormField::pow(const NormVector& x, long e) const {
    check(x);
    NormVector r = x;
    for (auto& c : r.a) c = tw_->pow(c, e);
    return r;
}

bool NormField::eq_weak(const NormVector& x, const NormVector& y, long floor) const {
    check(x);
    check(y);
    if (x.chain_len() != y.chain_len()) return false;
    for (int k = 0; k < x.chain_len(); ++k)
        if (!tw_->eq_weak(x.a[static_cast<size_t>(k)], y.a[static_cast<size_t>(k)], floor))
            return false;
    return true;
}

bool NormField::eq_stabilized(const NormVector& x, const NormVector& y, long floor) const {
    check(x);
    check(y);
    if (x.chain_len() != y.chain_len()) return false;
    int last = x.chain_len() - 1;
    for (int k = 0; k < last; ++k)
        if (!tw_->eq_weak(x.a[static_cast<size_t>(k)], y.a[static_cast<size_t>(k)], floor))
            return false;
    if (last >= 1) return true;  // the top was already compared through coordinate last-1
    return tw_->eq_weak(x.a[0], y.a[0], floor);
}

bool NormField::is_zero_stabilized(const NormVector& x) const {
    check(x);
    int last = x.chain_len() - 1;
    for (int k = 0; k < last; ++k)
        if (!tw_->zero_to_prec(x.a[static_cast<size_t>(k)])) return false;
    if (last == 0) return tw_->zero_to_prec(x.a[0]);
    // the top coordinate vanishes as an X-observable when its norm does
    StageElem pushed = tw_->norm_to(x.a[static_cast<size_t>(last)], x.stage_of(last - 1));
    StageElem diff = tw_->sub(pushed, x.a[static_cast<size_t>(last - 1)]);
    return tw_->zero_to_prec(diff);
}

NormField::Ring NormField::classify(const NormVector& v) const {
    long val = valuation(v);
    if (val > 0) return Ring::MaximalIdeal;
    if (val == 0) return Ring::Units;
    return Ring::NotIntegral;
}

long NormField::unit_level(const NormVector& v, AddRecord* rec) const {
    check(v);
    if (valuation(v) != 0) throw std::invalid_argument("unit_level expects a unit vector");
    NormVector diff = sub(v, one(v.base_stage, v.top_stage), rec);
    // the X-valuation of v - 1, normalized: use the deepest coordinate
    const StageElem& top = diff.a.back();
    if (tw_->zero_to_prec(top)) return tw_->absprec(top);  // capped
    return tw_->val(top);
}

const StageElem& NormField::pr_ktilde(const NormVector& v) const {
    check(v);
    return v.a[0];
}

bool NormField::diamond_member(const NormVector& v) const {
    check(v);
    if (v.base_stage != 0) throw TowerMismatch("diamond condition reads the K-tilde coordinate");
    return tw_->digits_in_base_subfield(v.a[0]);
}

bool NormField::in_pr_kernel(const NormVector& v) const {
    check(v);
    return tw_->eq_weak(v.a[0], tw_->one(v.a[0].stage), tw_->abs_cap(v.a[0].stage) / 2);
}

bool NormField::plain_member(const NormVector& v, long floor) const {
    check(v);
    for (int k = 0; k < v.chain_len(); ++k) {
        const StageElem& c = v.a[static_cast<size_t>(k)];
        StageElem pc = tw_->phi(c);
        if (!tw_->eq_weak(c, pc, std::max(floor, 1L))) return false;
    }
    try {
        validate(v);
    } catch (const NotNormCompatible&) {
        return false;
    }
    return true;
}

bool NormField::congruent_mod_plain_units(const NormVector& x, const NormVector& y,
                                          long floor) const {
    NormVector q = mul(x, inv(y));
    if (valuation(q) != 0) return false;
    return plain_member(q, floor);
}

NormVector NormField::galois_act(const GaloisElement& s, const NormVector& v) const {
    check(v);
    NormVector r = v;
    for (auto& c : r.a) c = tw_->apply(s, c);
    return r;
}

NormVector NormField::phi(const NormVector& v, int k) const {
    check(v);
    NormVector r = v;
    for (auto& c : r.a) c = tw_->phi(c, k);
    return r;
}

NormVector NormField::coleman_norm(const NormVector& v, int m_stage) const {
    check(v);
    if (v.base_stage != 0 || v.top_stage != tw_->depth())
        throw TowerMismatch("coleman_norm expects a full-chain vector");
    if (m_stage < 0 || m_stage > tw_->depth()) throw TowerMismatch("sub-tower stage out of range");
    NormVector r;
    r.tw = tw_;
    r.base_stage = 0;
    r.top_stage = m_stage;
    for (int k = 0; k < v.chain_len(); ++k) {
        const StageElem& c = v.a[static_cast<size_t>(k)];
        int target = std::min(k, m_stage);
        r.a.push_back(c.stage > target ? tw_->norm_to(c, target) : c);
    }
    validate(r);
    return r;
}

NormVector NormField::lambda_lift(const NormVector& v) const {
    check(v);
    if (v.top_stage != tw_->depth())
        throw TowerMismatch("lambda_lift expects an L/F vector over the full tail");
    NormVector r;
    r.tw = tw_;
    r.base_stage = 0;
    r.top_stage = tw_->depth();
    const StageElem& bottom = v.a[0];
    for (int s = 0; s < v.base_stage; ++s) r.a.push_back(tw_->norm_to(bottom, s));
    for (const auto& c : v.a) r.a.push_back(c);
    validate(r);
    return r;
}

NormVector NormField::epsilon_embed(const NormVector& v, int stabilization_index) const {
    check(v);
    if (stabilization_index < 0 || stabilization_index >= v.chain_len())
        throw StabilizationNotReached("epsilon stabilization index exceeds the configured depth");
    NormVector r = v;
    const StageElem& anchor = v.a[static_cast<size_t>(stabilization_index)];
    for (int k = 0; k < stabilization_index; ++k)
        r.a[static_cast<size_t>(k)] = tw_->norm_to(anchor, v.stage_of(k));
    validate(r);
    return r;
}

long NormField::class_unit_level(const NormVector& u, bool* conclusive) const {
    check(u);
    if (valuation(u) != 0) throw std::invalid_argument("class_unit_level expects a unit vector");
    const FqCtx& kap = tw_->base().kappa();
    int top = u.a.back().stage;
    StageElem w = u.a.back();
    long cap = (tw_->absprec(w) * 3) / 4;  // conclusive horizon
    if (conclusive) *conclusive = true;
    // residue part: reducible by a plain unit iff the residue lies in GF(q)
    FqCtx::Elt r0 = tw_->residue(w);
    if (!kap.in_subfield(r0, tw_->base().f())) return 0;
    w = tw_->mul(w, tw_->inv(tw_->lift_digit(top, r0)));
    while (true) {
        StageElem t = tw_->sub(w, tw_->one(top));
        long lv = tw_->known_zero_prec(t);
        if (lv >= cap || tw_->zero_to_prec(t)) {
            if (conclusive) *conclusive = false;
            return std::min(lv, cap);
        }
        FqCtx::Elt d = tw_->residue(tw_->mul(t, tw_->pi_pow(top, -lv)));
        if (!kap.in_subfield(d, tw_->base().f())) return lv;  // obstruction: exact level
        w = tw_->mul(w, tw_->inv(tw_->add(tw_->one(top),
                                          tw_->mul(tw_->lift_digit(top, d), tw_->pi_pow(top, lv)))));
    }
}

}  // namespace lcft
