#include "lcft/unit_subgroup.hpp"

#include <numeric>

namespace lcft {

namespace {

// extended gcd with Bezout coefficients, used for exponent lattice folding
long long egcd(long long a, long long b, long long& s, long long& t) {
    if (b == 0) {
        s = 1;
        t = 0;
        return a;
    }
    long long s1, t1;
    long long g = egcd(b, a % b, s1, t1);
    s = t1;
    t = s1 - (a / b) * t1;
    return g;
}

}  // namespace

UnitSubgroup::UnitSubgroup(const Tower& tw, int stage, long cap)
    : tw_(&tw), stage_(stage), cap_(cap) {
    group_order_ = tw.base().kappa().size() - 1;
}

std::pair<long, FqCtx::Elt> UnitSubgroup::leading_of(const StageElem& u) const {
    StageElem diff = tw_->sub(u, tw_->one(u.stage));
    long lv = tw_->known_zero_prec(diff);
    if (lv >= cap_) return {cap_, tw_->base().kappa().zero()};
    if (tw_->zero_to_prec(diff)) {
        // knowledge ends before the cap: treat as trivial at the bound
        // (under-approximates inserted generators, never a false pivot)
        return {cap_, tw_->base().kappa().zero()};
    }
    StageElem shifted = tw_->mul(diff, tw_->pi_pow(stage_, -lv));
    return {lv, tw_->residue(shifted)};
}

StageElem UnitSubgroup::pow_signed(const StageElem& a, long long e) const {
    if (e >= 0) return tw_->pow(a, static_cast<long>(e));
    return tw_->pow(tw_->inv(a), static_cast<long>(-e));
}

std::optional<std::vector<uint32_t>> UnitSubgroup::solve_level(long level, const FqCtx::Elt& target,
                                                               std::vector<size_t>& idx) const {
    const FqCtx& kap = tw_->base().kappa();
    const uint32_t p = kap.p();
    idx.clear();
    for (size_t i = 0; i < pivots_.size(); ++i)
        if (pivots_[i].level == level) idx.push_back(i);
    const size_t n = idx.size();
    const uint32_t dim = kap.deg();
    std::vector<std::vector<uint32_t>> mat(dim, std::vector<uint32_t>(n + 1, 0));
    for (uint32_t r = 0; r < dim; ++r) {
        for (size_t i = 0; i < n; ++i) mat[r][i] = pivots_[idx[i]].lead[r];
        mat[r][n] = target[r];
    }
    size_t rank = 0;
    std::vector<size_t> where(n, SIZE_MAX);
    for (size_t col = 0; col < n && rank < dim; ++col) {
        size_t sel = SIZE_MAX;
        for (size_t r = rank; r < dim; ++r)
            if (mat[r][col]) { sel = r; break; }
        if (sel == SIZE_MAX) continue;
        std::swap(mat[sel], mat[rank]);
        uint64_t inv = 1, base = mat[rank][col], e = p - 2;
        while (e) { if (e & 1) inv = inv * base % p; base = base * base % p; e >>= 1; }
        for (size_t c = col; c <= n; ++c) mat[rank][c] = static_cast<uint32_t>(mat[rank][c] * inv % p);
        for (size_t r = 0; r < dim; ++r) {
            if (r == rank || !mat[r][col]) continue;
            uint32_t factor = mat[r][col];
            for (size_t c = col; c <= n; ++c)
                mat[r][c] = (mat[r][c] + p - static_cast<uint32_t>(uint64_t(factor) * mat[rank][c] % p)) % p;
        }
        where[col] = rank;
        ++rank;
    }
    for (size_t r = rank; r < dim; ++r)
        if (mat[r][n]) return std::nullopt;
    std::vector<uint32_t> sol(n, 0);
    for (size_t col = 0; col < n; ++col)
        if (where[col] != SIZE_MAX) sol[col] = mat[where[col]][n];
    // verify the combination reproduces the target
    FqCtx::Elt acc = kap.zero();
    for (size_t i = 0; i < n; ++i) {
        FqCtx::Elt scaled = pivots_[idx[i]].lead;
        for (auto& c : scaled) c = static_cast<uint32_t>(uint64_t(c) * sol[i] % p);
        acc = kap.add(acc, scaled);
    }
    if (!kap.eq(acc, target)) return std::nullopt;
    return sol;
}

void UnitSubgroup::insert_principal(StageElem u, StageElem w) {
    const FqCtx& kap = tw_->base().kappa();
    while (true) {
        auto [lv, lead] = leading_of(u);
        if (lv >= cap_) return;  // trivial mod U^(cap)
        std::vector<size_t> idx;
        auto sol = solve_level(lv, lead, idx);
        if (!sol) {
            Pivot pv;
            pv.level = lv;
            pv.elt = u;
            pv.elt_inv = tw_->inv(u);
            pv.wit = w;
            pv.wit_inv = tw_->inv(w);
            pv.lead = lead;
            pivots_.push_back(std::move(pv));
            insert_principal(tw_->pow(u, kap.p()), tw_->pow(w, kap.p()));
            return;
        }
        bool progress = false;
        for (size_t i = 0; i < idx.size(); ++i) {
            if (!(*sol)[i]) continue;
            u = tw_->mul(u, pow_signed(pivots_[idx[i]].elt_inv, (*sol)[i]));
            w = tw_->mul(w, pow_signed(pivots_[idx[i]].wit_inv, (*sol)[i]));
            progress = true;
        }
        if (!progress) return;
    }
}

void UnitSubgroup::insert(const StageElem& gen, const StageElem& witness) {
    const FqCtx& kap = tw_->base().kappa();
    if (tw_->val(gen) != 0) throw std::invalid_argument("UnitSubgroup::insert expects a unit");
    uint64_t a = kap.dlog(tw_->residue(gen)).value() % group_order_;
    if (a == 0) {
        insert_principal(gen, witness);
        return;
    }
    if (res_d_ == 0) {
        long long s, t;
        long long g = egcd(static_cast<long long>(a), static_cast<long long>(group_order_), s, t);
        res_d_ = static_cast<uint64_t>(g);
        res_elt_ = pow_signed(gen, s);
        res_wit_ = pow_signed(witness, s);
        res_elt_inv_ = tw_->inv(res_elt_);
        res_wit_inv_ = tw_->inv(res_wit_);
        uint64_t k = a / res_d_;
        insert_principal(tw_->mul(gen, pow_signed(res_elt_inv_, static_cast<long long>(k))),
                         tw_->mul(witness, pow_signed(res_wit_inv_, static_cast<long long>(k))));
        insert_principal(tw_->pow(res_elt_, static_cast<long>(group_order_ / res_d_)),
                         tw_->pow(res_wit_, static_cast<long>(group_order_ / res_d_)));
        return;
    }
    long long s, t;
    long long g = egcd(static_cast<long long>(res_d_), static_cast<long long>(a), s, t);
    if (static_cast<uint64_t>(g) < res_d_) {
        StageElem new_elt = tw_->mul(pow_signed(res_elt_, s), pow_signed(gen, t));
        StageElem new_wit = tw_->mul(pow_signed(res_wit_, s), pow_signed(witness, t));
        StageElem old_elt = res_elt_, old_wit = res_wit_;
        uint64_t old_d = res_d_;
        res_d_ = static_cast<uint64_t>(g);
        res_elt_ = new_elt;
        res_wit_ = new_wit;
        res_elt_inv_ = tw_->inv(res_elt_);
        res_wit_inv_ = tw_->inv(res_wit_);
        insert_principal(
            tw_->mul(old_elt, pow_signed(res_elt_inv_, static_cast<long long>(old_d / res_d_))),
            tw_->mul(old_wit, pow_signed(res_wit_inv_, static_cast<long long>(old_d / res_d_))));
        insert_principal(tw_->pow(res_elt_, static_cast<long>(group_order_ / res_d_)),
                         tw_->pow(res_wit_, static_cast<long>(group_order_ / res_d_)));
    }
    uint64_t k = a / res_d_;
    insert_principal(tw_->mul(gen, pow_signed(res_elt_inv_, static_cast<long long>(k))),
                     tw_->mul(witness, pow_signed(res_wit_inv_, static_cast<long long>(k))));
}

UnitSubgroup::Result UnitSubgroup::express(const StageElem& x) const {
    const FqCtx& kap = tw_->base().kappa();
    Result res;
    if (tw_->val(x) != 0) throw std::invalid_argument("UnitSubgroup::express expects a unit");
    StageElem cur = x;
    StageElem acc = tw_->one(stage_);
    uint64_t a = kap.dlog(tw_->residue(cur)).value() % group_order_;
    if (a != 0) {
        if (res_d_ == 0 || a % res_d_ != 0) {
            res.residue_obstruction = true;
            res.residue_exp = a;
            return res;
        }
        uint64_t k = a / res_d_;
        cur = tw_->mul(cur, pow_signed(res_elt_inv_, static_cast<long long>(k)));
        acc = tw_->mul(acc, pow_signed(res_wit_, static_cast<long long>(k)));
    }
    while (true) {
        auto [lv, lead] = leading_of(cur);
        if (lv >= cap_) {
            res.ok = true;
            res.witness = acc;
            return res;
        }
        std::vector<size_t> idx;
        auto sol = solve_level(lv, lead, idx);
        if (!sol) {
            res.level = lv;
            res.leading = lead;
            return res;
        }
        for (size_t i = 0; i < idx.size(); ++i) {
            if (!(*sol)[i]) continue;
            cur = tw_->mul(cur, pow_signed(pivots_[idx[i]].elt_inv, (*sol)[i]));
            acc = tw_->mul(acc, pow_signed(pivots_[idx[i]].wit, (*sol)[i]));
        }
    }
}

std::vector<StageElem> unit_generators(const Tower& tw, int stage, long cap) {
    const FqCtx& kap = tw.base().kappa();
    std::vector<StageElem> gens;
    gens.push_back(tw.lift_digit(stage, kap.generator()));
    for (long k = 1; k < cap; ++k) {
        for (uint32_t b = 0; b < kap.deg(); ++b) {
            FqCtx::Elt beta = kap.zero();
            beta[b] = 1;
            gens.push_back(
                tw.add(tw.one(stage), tw.mul(tw.lift_digit(stage, beta), tw.pi_pow(stage, k))));
        }
    }
    return gens;
}

UnitSubgroup image_subgroup(const Tower& tw, int source_stage, long source_cap, int target_stage,
                            long target_cap, const std::function<StageElem(const StageElem&)>& hom) {
    UnitSubgroup sg(tw, target_stage, target_cap);
    for (const auto& u : unit_generators(tw, source_stage, source_cap)) sg.insert(hom(u), u);
    return sg;
}

uint32_t minimal_residue_degree_for_root(uint64_t q, uint32_t m, uint64_t order_c, uint64_t n) {
    for (uint32_t mult = 1; mult <= 64; ++mult) {
        uint32_t mp = m * mult;
        // q^mp - 1 without overflow: bail out once past 2^62
        uint64_t qm = 1;
        bool overflow = false;
        for (uint32_t i = 0; i < mp; ++i) {
            if (qm > (uint64_t(1) << 62) / q) { overflow = true; break; }
            qm *= q;
        }
        if (overflow) break;
        uint64_t group = qm - 1;
        // x^n = c solvable in a cyclic group of order `group` iff
        // ord(c) divides group / gcd(n, group)
        uint64_t g = std::gcd(n, group);
        if ((group / g) % order_c == 0) return mp;
    }
    return 0;
}

StageElem solve_norm_preimage(const Tower& tw, int source_stage, int target_stage,
                              const StageElem& u, long cap) {
    if (source_stage <= target_stage) throw StageMismatch("norm preimage goes upward only");
    if (tw.val(u) != 0) throw std::invalid_argument("solve_norm_preimage expects a unit");
    long e_rel = tw.e_total(source_stage) / tw.e_total(target_stage);
    long source_cap = std::min(tw.abs_cap(source_stage), cap * e_rel);
    UnitSubgroup img = image_subgroup(tw, source_stage, source_cap, target_stage, cap,
                                      [&](const StageElem& x) { return tw.norm_to(x, target_stage); });
    auto res = img.express(tw.embed(u, target_stage));
    if (res.ok) return res.witness;
    const FqCtx& kap = tw.base().kappa();
    if (res.residue_obstruction) {
        uint64_t ord = kap.order(tw.residue(u));
        uint32_t mp = minimal_residue_degree_for_root(tw.base().q(), tw.base().m(), ord,
                                                      static_cast<uint64_t>(e_rel));
        throw ResidueExtensionRequired("norm has no preimage at this residue degree",
                                       mp ? mp : tw.base().m() * kap.p());
    }
    throw ResidueExtensionRequired("norm preimage blocked at unit level " + std::to_string(res.level),
                                   tw.base().m() * kap.p());
}

}  // namespace lcft
