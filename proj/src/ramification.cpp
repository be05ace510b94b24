#include "lcft/ramification.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace lcft {

Rat Polyline::operator()(const Rat& u) const {
    if (pts.empty()) throw std::logic_error("empty polyline");
    if (u <= pts.front().first) return pts.front().second;  // domain starts at -1
    size_t j = 0;
    while (j + 1 < pts.size() && pts[j + 1].first <= u) ++j;
    if (j + 1 < pts.size()) {
        const auto& [x0, y0] = pts[j];
        const auto& [x1, y1] = pts[j + 1];
        Rat slope = (y1 - y0) / (x1 - x0);
        return y0 + slope * (u - x0);
    }
    return pts.back().second + final_slope * (u - pts.back().first);
}

Polyline polyline_canonical(Polyline f) {
    if (f.pts.size() < 2) return f;
    std::vector<std::pair<Rat, Rat>> out;
    out.push_back(f.pts.front());
    for (size_t j = 1; j < f.pts.size(); ++j) {
        // slope before and after pts[j]
        Rat s_in = (f.pts[j].second - out.back().second) / (f.pts[j].first - out.back().first);
        Rat s_out = (j + 1 < f.pts.size())
                        ? (f.pts[j + 1].second - f.pts[j].second) / (f.pts[j + 1].first - f.pts[j].first)
                        : f.final_slope;
        if (s_in != s_out)
            out.push_back(f.pts[j]);
        // collinear interior points are dropped
    }
    f.pts = std::move(out);
    return f;
}

Polyline polyline_inverse(const Polyline& f) {
    Polyline g;
    for (const auto& [x, y] : f.pts) g.pts.emplace_back(y, x);
    g.final_slope = Rat(1) / f.final_slope;
    return polyline_canonical(std::move(g));
}

Polyline polyline_compose(const Polyline& outer, const Polyline& inner) {
    // candidate breakpoints: inner's own, plus inner-preimages of outer's
    std::set<Rat> xs;
    for (const auto& [x, y] : inner.pts) xs.insert(x);
    Polyline inner_inv = polyline_inverse(inner);
    for (const auto& [x, y] : outer.pts) {
        Rat pre = inner_inv(x);
        if (pre >= Rat(-1)) xs.insert(pre);
    }
    Polyline r;
    for (const Rat& x : xs) r.pts.emplace_back(x, outer(inner(x)));
    r.final_slope = outer.final_slope * inner.final_slope;
    return polyline_canonical(std::move(r));
}

bool polyline_eq(const Polyline& a, const Polyline& b) {
    Polyline ca = polyline_canonical(a), cb = polyline_canonical(b);
    return ca.pts == cb.pts && ca.final_slope == cb.final_slope;
}

IValue i_value(const Tower& tw, int stage, const GaloisElement& sigma, size_t index) {
    StageElem diff = tw.sub(tw.apply(sigma, tw.pi(stage)), tw.pi(stage));
    IValue iv;
    iv.sigma_index = index;
    if (tw.zero_to_prec(diff)) {
        iv.infinite = true;
        iv.i = tw.absprec(diff);
        return iv;
    }
    iv.infinite = false;
    iv.i = tw.val(diff);
    if (iv.i < 1)
        throw PrecisionExhausted("i-value below 1 on a totally ramified stage");
    return iv;
}

long gamma_count(const RamificationProfile& pr, const Rat& t) {
    long n = 0;
    for (const auto& iv : pr.ivalues)
        if (iv.infinite || Rat(iv.i) >= t + Rat(1)) ++n;
    return n;
}

RamificationProfile ramification_profile(const Tower& tw, int stage,
                                         const std::vector<GaloisElement>& group) {
    RamificationProfile pr;
    pr.stage = stage;
    pr.group_order = static_cast<long>(group.size());
    for (size_t k = 0; k < group.size(); ++k) pr.ivalues.push_back(i_value(tw, stage, group[k], k));

    // distinct finite i-values drive the step function gamma_t, which is
    // constant C(k+2) on each unit interval (k, k+1); slope changes exactly at
    // the lower breaks d - 1
    std::set<long> ds;
    for (const auto& iv : pr.ivalues)
        if (!iv.infinite) ds.insert(iv.i);
    auto count_ge = [&](long T) {
        long n = 0;
        for (const auto& iv : pr.ivalues)
            if (iv.infinite || iv.i >= T) ++n;
        return n;
    };
    pr.phi.pts.emplace_back(Rat(-1), Rat(-1));
    pr.phi.pts.emplace_back(Rat(0), Rat(0));
    Rat y(0);
    Rat gamma0(pr.group_order);
    long prev = 0;
    for (long d : ds) {
        long brk = d - 1;
        pr.lower_breaks.push_back(brk);
        if (brk > prev) {
            y = y + Rat(count_ge(prev + 2)) / gamma0 * Rat(brk - prev);
            pr.phi.pts.emplace_back(Rat(brk), y);
            prev = brk;
        }
        // brk == 0: the breakpoint (0,0) is already present
    }
    pr.phi.final_slope = Rat(count_ge(prev + 2)) / gamma0;
    pr.phi = polyline_canonical(std::move(pr.phi));
    pr.psi = polyline_inverse(pr.phi);
    for (long b : pr.lower_breaks) {
        Rat ub = pr.phi(Rat(b));
        pr.upper_breaks.push_back(ub);
        if (!ub.is_integer()) pr.hasse_arf_integral = false;
    }
    return pr;
}

std::vector<FiltrationStep> filtration(const RamificationProfile& pr, bool upper) {
    std::vector<FiltrationStep> out;
    const std::vector<long>& lb = pr.lower_breaks;
    for (size_t j = 0; j < lb.size(); ++j) {
        FiltrationStep st;
        st.brk = upper ? pr.upper_breaks[j] : Rat(lb[j]);
        for (const auto& iv : pr.ivalues)
            if (iv.infinite || iv.i >= lb[j] + 1) st.members.push_back(iv.sigma_index);
        out.push_back(std::move(st));
    }
    return out;
}

std::vector<GaloisElement> subgroup_fixing(const Tower& tw,
                                           const std::vector<GaloisElement>& group,
                                           int fixed_stage) {
    std::vector<GaloisElement> out;
    for (const auto& s : group) {
        bool fixes = true;
        for (int j = 1; j <= fixed_stage; ++j) {
            if (!tw.eq_weak(s.img[static_cast<size_t>(j - 1)], tw.pi(j), tw.abs_cap(j) / 2)) {
                fixes = false;
                break;
            }
        }
        if (fixes) out.push_back(s);
    }
    return out;
}

std::vector<GaloisElement> distinct_restrictions(const Tower& tw,
                                                 const std::vector<GaloisElement>& group,
                                                 int stage) {
    std::vector<GaloisElement> out;
    for (const auto& s : group) {
        GaloisElement r = tw.restrict(s, stage);
        bool seen = false;
        for (const auto& t : out)
            if (tw.galois_eq(r, t)) {
                seen = true;
                break;
            }
        if (!seen) out.push_back(std::move(r));
    }
    return out;
}

bool herbrand_transitive(const Tower& tw, int stage, int f_stage) {
    const auto& G = tw.full_group();
    std::vector<GaloisElement> top_group;
    for (const auto& s : G) top_group.push_back(tw.restrict(s, stage));
    std::vector<GaloisElement> distinct_top = distinct_restrictions(tw, top_group, stage);
    RamificationProfile full = ramification_profile(tw, stage, distinct_top);
    std::vector<GaloisElement> H = subgroup_fixing(tw, distinct_top, f_stage);
    RamificationProfile rel = ramification_profile(tw, stage, H);
    std::vector<GaloisElement> Q = distinct_restrictions(tw, distinct_top, f_stage);
    RamificationProfile quot = ramification_profile(tw, f_stage, Q);
    return polyline_eq(full.phi, polyline_compose(quot.phi, rel.phi));
}

std::vector<std::pair<Rat, int>> tower_upper_breaks(const Tower& tw, int depth) {
    const auto& G = tw.full_group();
    std::map<Rat, int> first_depth;
    for (int i = 1; i <= depth; ++i) {
        std::vector<GaloisElement> Q = distinct_restrictions(tw, G, i);
        RamificationProfile pr = ramification_profile(tw, i, Q);
        for (const Rat& b : pr.upper_breaks)
            if (!first_depth.count(b)) first_depth[b] = i;
    }
    std::vector<std::pair<Rat, int>> out(first_depth.begin(), first_depth.end());
    return out;
}

}  // namespace lcft
