#include "lcft/lubin_tate.hpp"

#include <algorithm>
#include <map>

namespace lcft {

namespace {

// transports an element between fields with the same (p, f, m); caps at the
// target precision without claiming digits the source did not carry
BaseElem transport(const BaseField& to, const BaseElem& x) {
    if (x.zero_to_prec()) return to.zero(std::min<long>(x.val, x.val + to.N()));
    std::vector<FqCtx::Elt> d = x.d;
    if (d.size() > static_cast<size_t>(to.N())) d.resize(static_cast<size_t>(to.N()));
    long claim = x.val + static_cast<long>(d.size());
    return to.cap_abs(to.from_digits(x.val, std::move(d)), claim);
}

Series1 s1_zero(const BaseField& F, int cap) {
    Series1 s;
    s.c.assign(static_cast<size_t>(cap) + 1, F.zero(F.N()));
    return s;
}

Series1 s1_mul(const BaseField& F, const Series1& a, const Series1& b, int cap) {
    Series1 r = s1_zero(F, cap);
    for (size_t i = 0; i < a.c.size() && i <= static_cast<size_t>(cap); ++i) {
        if (a.c[i].zero_to_prec() && a.c[i].val >= F.N()) continue;
        for (size_t j = 0; j < b.c.size() && i + j <= static_cast<size_t>(cap); ++j)
            r.c[i + j] = F.add(r.c[i + j], F.mul(a.c[i], b.c[j]));
    }
    return r;
}

// g(h(x)) for h with h(0) = 0, via a power table over g's nonzero terms
Series1 s1_compose(const BaseField& F, const Series1& g, const Series1& h, int cap) {
    size_t top = 0;
    for (size_t k = 0; k < g.c.size(); ++k)
        if (!(g.c[k].zero_to_prec() && g.c[k].val >= F.N())) top = k;
    std::vector<Series1> hpow;
    hpow.push_back(s1_zero(F, cap));
    hpow[0].c[0] = F.one();
    for (size_t k = 1; k <= top; ++k) hpow.push_back(s1_mul(F, hpow.back(), h, cap));
    Series1 acc = s1_zero(F, cap);
    for (size_t k = 0; k <= top && k < g.c.size(); ++k) {
        if (g.c[k].zero_to_prec() && g.c[k].val >= F.N()) continue;
        for (int d = 0; d <= cap; ++d)
            acc.c[d] = F.add(acc.c[d], F.mul(g.c[k], hpow[k].c[d]));
    }
    return acc;
}

Series2 s2_zero(const BaseField& F, int cap) {
    Series2 s;
    s.h.resize(static_cast<size_t>(cap) + 1);
    for (int d = 0; d <= cap; ++d) s.h[d].assign(static_cast<size_t>(d) + 1, F.zero(F.N()));
    return s;
}

Series2 s2_mul(const BaseField& F, const Series2& a, const Series2& b, int cap) {
    Series2 r = s2_zero(F, cap);
    for (size_t d1 = 0; d1 < a.h.size() && d1 <= static_cast<size_t>(cap); ++d1)
        for (size_t j1 = 0; j1 <= d1; ++j1) {
            const BaseElem& ca = a.h[d1][j1];
            if (ca.zero_to_prec() && ca.val >= F.N()) continue;
            for (size_t d2 = 0; d1 + d2 <= static_cast<size_t>(cap) && d2 < b.h.size(); ++d2)
                for (size_t j2 = 0; j2 <= d2; ++j2)
                    r.h[d1 + d2][j1 + j2] = F.add(r.h[d1 + d2][j1 + j2], F.mul(ca, b.h[d2][j2]));
        }
    return r;
}

// T(f(X), f(Y)) via cached powers of f in each variable
Series2 s2_compose_ff(const BaseField& F, const Series2& T, const Series1& f, int cap) {
    std::vector<Series1> fpow;  // fpow[k] = f^k
    fpow.push_back(s1_zero(F, cap));
    fpow[0].c[0] = F.one();
    for (int k = 1; k <= cap; ++k) fpow.push_back(s1_mul(F, fpow.back(), f, cap));
    Series2 r = s2_zero(F, cap);
    for (size_t d = 0; d < T.h.size() && d <= static_cast<size_t>(cap); ++d)
        for (size_t j = 0; j <= d; ++j) {
            const BaseElem& c = T.h[d][j];
            if (c.zero_to_prec() && c.val >= F.N()) continue;
            const Series1& fx = fpow[d - j];
            const Series1& fy = fpow[j];
            for (size_t i1 = d - j; i1 <= static_cast<size_t>(cap); ++i1) {
                if (fx.c[i1].zero_to_prec() && fx.c[i1].val >= F.N()) continue;
                BaseElem cf = F.mul(c, fx.c[i1]);
                for (size_t i2 = j; i1 + i2 <= static_cast<size_t>(cap); ++i2)
                    r.h[i1 + i2][i2] = F.add(r.h[i1 + i2][i2], F.mul(cf, fy.c[i2]));
            }
        }
    return r;
}

// f(T(X,Y)) via a power table over f's nonzero terms
Series2 s2_apply_f(const BaseField& F, const Series1& f, const Series2& T, int cap) {
    size_t top = 0;
    for (size_t k = 0; k < f.c.size(); ++k)
        if (!(f.c[k].zero_to_prec() && f.c[k].val >= F.N())) top = k;
    std::vector<Series2> tpow;
    tpow.push_back(s2_zero(F, cap));
    tpow[0].h[0][0] = F.one();
    for (size_t k = 1; k <= top; ++k) tpow.push_back(s2_mul(F, tpow.back(), T, cap));
    Series2 acc = s2_zero(F, cap);
    for (size_t k = 0; k <= top && k < f.c.size(); ++k) {
        if (f.c[k].zero_to_prec() && f.c[k].val >= F.N()) continue;
        for (int d = 0; d <= cap; ++d)
            for (int j = 0; j <= d; ++j)
                acc.h[d][j] = F.add(acc.h[d][j], F.mul(f.c[k], tpow[k].h[d][j]));
    }
    return acc;
}

}  // namespace

FormalGroup::FormalGroup(const BaseField& field, std::vector<BaseElem> f_coeffs, int degree_cap)
    : field_(field),
      work_(field.mixed(), field.p(), field.f(), field.m(),
            field.N() + degree_cap + 4),
      cap_(degree_cap) {
    if (f_coeffs.size() < 2) throw NotFrobeniusSeries("series too short");
    // f = pi x mod deg 2
    if (!f_coeffs[0].zero_to_prec() && field_.val(f_coeffs[0]) < field_.N())
        throw NotFrobeniusSeries("constant term must vanish");
    if (f_coeffs[1].zero_to_prec() || f_coeffs[1].val != 1)
        throw NotFrobeniusSeries("linear coefficient must have valuation 1");
    // f = x^q mod pi
    uint64_t q = field_.q();
    for (size_t k = 2; k < f_coeffs.size(); ++k) {
        if (f_coeffs[k].zero_to_prec()) continue;
        long v = f_coeffs[k].val;
        if (k == q) {
            if (v != 0 || !field_.kappa().eq(field_.residue_unit(f_coeffs[k]), field_.kappa().one()))
                throw NotFrobeniusSeries("coefficient of x^q must be 1 mod pi");
        } else if (v < 1) {
            throw NotFrobeniusSeries("coefficient " + std::to_string(k) + " must vanish mod pi");
        }
    }
    if (f_coeffs.size() <= q) throw NotFrobeniusSeries("series must reach degree q");
    if (static_cast<uint64_t>(degree_cap) < q)
        throw NotFrobeniusSeries("degree cap below q cannot hold the series");
    for (const auto& c : f_coeffs)
        if (!field_.phi_fixed(c) || !field_.digits_in_base_subfield(c))
            throw NotFrobeniusSeries("coefficients must lie in the base field O_K");

    f_.c = f_coeffs;
    if (f_.c.size() > static_cast<size_t>(cap_) + 1) f_.c.resize(static_cast<size_t>(cap_) + 1);
    for (auto& c : f_.c) c.fld = &field_;  // re-home onto the owned copy of the field
    fw_ = s1_zero(work_, cap_);
    for (size_t k = 0; k < f_.c.size(); ++k) fw_.c[k] = transport(work_, f_.c[k]);
    pi_ = f_.c[1];
}

const Series2& FormalGroup::group_law() {
    if (law_built_) return law_;
    Series2 T = s2_zero(work_, cap_);
    T.h[1][0] = work_.one();
    T.h[1][1] = work_.one();
    BaseElem piw = transport(work_, pi_);
    for (int r = 1; r < cap_; ++r) {
        Series2 E = s2_apply_f(work_, fw_, T, cap_);
        Series2 Tff = s2_compose_ff(work_, T, fw_, cap_);
        // E := f(T) - T(f,f), then kill its degree r+1 layer
        BaseElem denom = work_.sub(work_.pow(piw, r + 1), piw);
        for (size_t j = 0; j <= static_cast<size_t>(r) + 1; ++j) {
            BaseElem diff = work_.sub(E.h[r + 1][j], Tff.h[r + 1][j]);
            T.h[r + 1][j] = work_.add(T.h[r + 1][j], work_.div(diff, denom));
        }
    }
    law_ = s2_zero(field_, cap_);
    for (int d = 0; d <= cap_; ++d)
        for (int j = 0; j <= d; ++j) law_.h[d][j] = transport(field_, T.h[d][j]);
    law_built_ = true;
    return law_;
}

Series1 FormalGroup::solve_commuting(const BaseElem& linear) {
    Series1 T = s1_zero(work_, cap_);
    T.c[1] = transport(work_, linear);
    BaseElem piw = transport(work_, pi_);
    for (int r = 1; r < cap_; ++r) {
        Series1 fT = s1_compose(work_, fw_, T, cap_);
        Series1 Tf = s1_compose(work_, T, fw_, cap_);
        BaseElem denom = work_.sub(work_.pow(piw, r + 1), piw);
        BaseElem diff = work_.sub(fT.c[r + 1], Tf.c[r + 1]);
        T.c[r + 1] = work_.add(T.c[r + 1], work_.div(diff, denom));
    }
    Series1 out = s1_zero(field_, cap_);
    for (int k = 0; k <= cap_; ++k) out.c[k] = transport(field_, T.c[k]);
    return out;
}

const Series1& FormalGroup::endomorphism(long long a) {
    auto it = endos_.find(a);
    if (it != endos_.end()) return it->second;
    Series1 s = solve_commuting(field_.from_int(a));
    return endos_.emplace(a, std::move(s)).first->second;
}

StageElem FormalGroup::eval(const Series1& s, const Tower& tw, const StageElem& x) const {
    StageElem acc = tw.zero(x.stage, tw.abs_cap(x.stage));
    for (size_t k = s.c.size(); k-- > 0;) {
        acc = tw.mul(acc, x);
        if (!(s.c[k].zero_to_prec() && s.c[k].val >= field_.N()))
            acc = tw.add(acc, tw.from_base(transport(tw.base(), s.c[k]), x.stage));
    }
    return acc;
}

void LubinTateTower::repoint_() {
    for (auto& pr : primes) tower.adopt(pr);
    for (auto& s : group) tower.adopt(s);
    pi_base.fld = &tower.base();
}

LubinTateTower::LubinTateTower(const LubinTateTower& o)
    : tower(o.tower), primes(o.primes), group(o.group), group_reps(o.group_reps),
      pi_base(o.pi_base) {
    repoint_();
}

LubinTateTower::LubinTateTower(LubinTateTower&& o) noexcept
    : tower(std::move(o.tower)), primes(std::move(o.primes)), group(std::move(o.group)),
      group_reps(std::move(o.group_reps)), pi_base(std::move(o.pi_base)) {
    repoint_();
}

LubinTateTower& LubinTateTower::operator=(const LubinTateTower& o) {
    if (this != &o) {
        tower = o.tower;
        primes = o.primes;
        group = o.group;
        group_reps = o.group_reps;
        pi_base = o.pi_base;
        repoint_();
    }
    return *this;
}

LubinTateTower& LubinTateTower::operator=(LubinTateTower&& o) noexcept {
    if (this != &o) {
        tower = std::move(o.tower);
        primes = std::move(o.primes);
        group = std::move(o.group);
        group_reps = std::move(o.group_reps);
        pi_base = std::move(o.pi_base);
        repoint_();
    }
    return *this;
}

const GaloisElement& LubinTateTower::sigma(long long a) const {
    long long p = tower.base().p();
    long long mod = 1;
    for (int i = 0; i < tower.depth(); ++i) mod *= p;
    long long target = ((a % mod) + mod) % mod;
    for (size_t i = 0; i < group_reps.size(); ++i)
        if (group_reps[i] % mod == target) return group[i];
    throw std::invalid_argument("no group element for this unit representative");
}

LubinTateTower build_lubin_tate_tower(uint32_t p, uint32_t m, int N,
                                      const std::vector<long long>& f_int, int depth) {
    const uint64_t q = p;  // residue degree f = 1 here
    if (f_int.size() != q + 1 || f_int[0] != 0 || f_int[q] != 1)
        throw NotFrobeniusSeries("tower builder needs monic integer f of degree q with f(0) = 0");
    if (f_int[1] % static_cast<long long>(p) != 0 ||
        (f_int[1] / static_cast<long long>(p)) % static_cast<long long>(p) == 0)
        throw NotFrobeniusSeries("linear coefficient must have valuation exactly 1");
    for (size_t k = 2; k < q; ++k)
        if (f_int[k] % static_cast<long long>(p) != 0)
            throw NotFrobeniusSeries("middle coefficients must vanish mod p");
    if (depth < 0) throw std::invalid_argument("depth must be >= 0");

    LubinTateTower lt(Tower(BaseField(true, p, 1, m, N)));
    Tower& tw = lt.tower;
    lt.pi_base = tw.base().from_int(f_int[1]);
    lt.primes.push_back(tw.from_base(lt.pi_base));
    if (depth == 0) return lt;

    // stages: level 1 from f(x)/x, level i >= 2 from f(x) - pi_{i-1}
    {
        std::vector<StageElem> g1;
        for (size_t k = 1; k <= q; ++k) g1.push_back(tw.from_int(f_int[k]));
        tw.add_stage(g1);
    }
    for (int i = 2; i <= depth; ++i) {
        std::vector<StageElem> gi;
        gi.push_back(tw.neg(tw.pi(i - 1)));
        for (size_t k = 1; k <= q; ++k) gi.push_back(tw.from_int(f_int[k], i - 1));
        tw.add_stage(gi);
    }

    // Koch-de Shalit primes: correct the stage generators by torsion units so
    // that stage norms are coherent (q even needs sign/zeta twists)
    for (int i = 1; i <= depth; ++i) {
        StageElem cand = tw.pi(i);
        StageElem nrm = tw.stage_norm(cand);
        StageElem delta = tw.div(nrm, tw.embed(lt.primes.back(), i - 1));
        StageElem corrected = cand;
        long shared_d = std::min(tw.absprec(delta), tw.abs_cap(i - 1));
        if (tw.agree_prec(delta, tw.one(i - 1)) < shared_d) {
            // search torsion units u with N(u) = delta^{-1}
            std::vector<StageElem> cands;
            cands.push_back(tw.neg(tw.one(i)));
            for (int j = 1; j <= i; ++j) {
                StageElem zeta_like = tw.add(tw.one(i), tw.embed(tw.pi(j), i));
                cands.push_back(zeta_like);
                cands.push_back(tw.neg(zeta_like));
                cands.push_back(tw.inv(zeta_like));
            }
            size_t base_count = cands.size();
            for (size_t a = 0; a < base_count; ++a)
                for (size_t b = a; b < base_count; ++b) cands.push_back(tw.mul(cands[a], cands[b]));
            bool found = false;
            StageElem dinv = tw.inv(delta);
            for (const auto& u : cands) {
                StageElem nu = tw.stage_norm(u);
                StageElem target = tw.embed(dinv, i - 1);
                long shared = std::min(tw.absprec(nu), tw.absprec(target));
                if (tw.agree_prec(nu, target) >= shared) {
                    corrected = tw.mul(cand, u);
                    found = true;
                    break;
                }
            }
            if (!found)
                throw NormIncoherent("no torsion correction makes the prime tower coherent");
        }
        // verify coherence to precision
        StageElem check = tw.stage_norm(corrected);
        StageElem prev = tw.embed(lt.primes.back(), i - 1);
        long shared = std::min(tw.absprec(check), tw.absprec(prev));
        if (tw.agree_prec(check, prev) < shared)
            throw NormIncoherent("prime tower fails norm compatibility at stage " + std::to_string(i));
        lt.primes.push_back(corrected);
    }

    // Galois group: series-seeded Newton images for one or two generators of
    // the abelian unit group, everything else by exact composition
    long max_dv = 0;
    for (int i = 1; i <= depth; ++i) {
        // v(f'(pi_i)) at stage i
        std::vector<StageElem> df;
        for (size_t k = 1; k < f_int.size(); ++k)
            df.push_back(tw.from_int(static_cast<long long>(k) * f_int[k], 0));
        StageElem dfp = tw.eval_poly(df, tw.pi(i));
        max_dv = std::max(max_dv, tw.val(dfp));
    }
    int seed_deg = static_cast<int>(2 * max_dv + 4);
    BaseField seed_field(true, p, 1, m, seed_deg + 8);
    std::vector<BaseElem> f_seed;
    for (long long c : f_int) f_seed.push_back(seed_field.from_int(c));
    FormalGroup fg_seed(seed_field, f_seed, seed_deg);

    long long mod = 1;
    for (int i = 0; i < depth; ++i) mod *= p;
    auto build_sigma = [&](long long a) {
        const Series1& enda = fg_seed.endomorphism(a);
        GaloisElement s;
        s.tw = &tw;
        s.top = depth;
        for (int i = 1; i <= depth; ++i) {
            std::vector<StageElem> h;  // f(x) - sigma(pi_{i-1})
            if (i == 1)
                h.push_back(tw.zero(0, tw.abs_cap(0)));
            else {
                GaloisElement partial;
                partial.tw = &tw;
                partial.top = i - 1;
                partial.img = s.img;
                h.push_back(tw.neg(tw.apply(partial, tw.pi(i - 1))));
            }
            for (size_t k = 1; k <= q; ++k) h.push_back(tw.from_int(f_int[k], 0));
            StageElem seed = fg_seed.eval(enda, tw, tw.pi(i));
            s.img.push_back(tw.hensel_refine_root(i, h, seed));
        }
        return s;
    };
    std::vector<long long> unit_gens;
    if (p >= 3) {
        long long order = (static_cast<long long>(p) - 1) * (mod / p);  // phi(p^depth)
        for (long long g = 2; g < mod; ++g) {
            if (g % p == 0) continue;
            long long x = 1;
            bool primitive = true;
            for (long long k = 1; k < order; ++k) {
                x = x * g % mod;
                if (x == 1) { primitive = false; break; }
            }
            if (primitive) { unit_gens.push_back(g); break; }
        }
    } else {
        if (mod >= 4) unit_gens.push_back(mod - 1);  // -1
        if (mod >= 8) unit_gens.push_back(5);
    }
    std::map<long long, GaloisElement> by_rep;
    by_rep.emplace(1, tw.galois_identity(depth));
    std::vector<std::pair<long long, GaloisElement>> frontier;
    for (long long g : unit_gens) {
        GaloisElement sg = build_sigma(g);
        frontier.emplace_back(g, sg);
        by_rep.emplace(g, std::move(sg));
    }
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::pair<long long, GaloisElement>> found;
        for (const auto& [a, sa] : by_rep)
            for (const auto& [g, sg] : frontier) {
                long long prod = a * g % mod;
                if (by_rep.count(prod) || prod == 0) continue;
                found.emplace_back(prod, tw.compose(sg, sa));
            }
        for (auto& [r, s] : found)
            if (by_rep.emplace(r, std::move(s)).second) grew = true;
    }
    for (auto& [rep, s] : by_rep) {
        lt.group_reps.push_back(rep);
        lt.group.push_back(s);
    }
    tw.set_full_group(lt.group);

    // relative stage generators: a = primitive root mod p at stage 1,
    // a = 1 + p^{i-1} at stage i
    {
        long long prim = 0;
        for (long long a = 2; a < p; ++a) {
            long long x = 1;
            bool primitive = true;
            for (uint32_t k = 1; k < p - 1; ++k) {
                x = x * a % p;
                if (x == 1) { primitive = false; break; }
            }
            if (primitive) { prim = a; break; }
        }
        if (p == 2) prim = 1;
        if (prim > 1) {
            const GaloisElement& s1 = lt.sigma(prim);
            tw.set_stage_generators(1, {s1.img[0]}, p - 1);
        }
        long long pk = 1;
        for (int i = 2; i <= depth; ++i) {
            pk *= p;
            const GaloisElement& si = lt.sigma(1 + pk);
            tw.set_stage_generators(i, {si.img[static_cast<size_t>(i - 1)]}, p);
        }
    }
    return lt;
}

}  // namespace lcft
