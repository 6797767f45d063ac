#pragma once

// Generalized rank invariant over a finite interval domain, its Möbius
// inversion (the generalized persistence diagram), and erosion distances
// between barcodes evaluated on sparse interval domains. Rank functions along
// a thickening ray are left-continuous step functions, fully described by the
// multiset of maximal thickening radii; the distance evaluators work on those
// breakpoints with exact comparisons.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "erosion.hpp"
#include "geometry.hpp"

namespace sgpd {

// One interval summand of a decomposable module.
struct Bar {
    PQInterval region;
    long long multiplicity = 1;
};

struct Barcode {
    std::vector<Bar> bars;

    [[nodiscard]] std::size_t size() const { return bars.size(); }
};

[[nodiscard]] inline Barcode make_barcode(std::vector<Bar> bars) {
    for (const Bar& b : bars)
        if (b.multiplicity < 1) throw invalid_input("bar multiplicity must be at least 1");
    return Barcode{std::move(bars)};
}

// Diagonal shift of every generator; useful for stability experiments.
[[nodiscard]] inline Barcode shift_barcode(const Barcode& bc, double s) {
    if (!std::isfinite(s)) throw invalid_input("shift must be finite");
    Barcode out = bc;
    for (Bar& b : out.bars) {
        for (Point2& m : b.region.mins) { m.x += s; m.y += s; }
        for (Point2& M : b.region.maxs) { M.x += s; M.y += s; }
    }
    return out;
}

// Rank of the module restricted to I: total multiplicity of bars containing I.
[[nodiscard]] inline long long rank_over(const Barcode& bc, const PQInterval& I) {
    long long r = 0;
    for (const Bar& b : bc.bars)
        if (contains(b.region, I)) r += b.multiplicity;
    return r;
}

// Generalized rank invariant restricted to a finite domain. Monotone:
// containment of intervals reverses the order of values.
struct GRITable {
    Domain domain;
    std::vector<long long> values;
};

[[nodiscard]] inline GRITable gri(const Barcode& bc, const Domain& dom) {
    if (dom.size() == 0) throw invalid_input("rank invariant needs a nonempty domain");
    GRITable table;
    table.domain = dom;
    table.values.reserve(dom.size());
    for (const PQInterval& iv : dom.intervals) table.values.push_back(rank_over(bc, iv));
    return table;
}

// Generalized persistence diagram: signed multiplicities on the domain.
struct GPD {
    Domain domain;
    std::vector<long long> values;
    bool merged_duplicates = false;
};

// Möbius inversion of a rank table over the containment order. Duplicate
// intervals are merged first (their ranks must agree). Supersets are resolved
// before subsets; sorting by strict-superset count is a valid linear extension
// because a strict superset always has strictly fewer strict supersets.
[[nodiscard]] inline GPD mobius_inversion(const GRITable& table) {
    const std::size_t n = table.domain.size();
    if (n == 0) throw invalid_input("Mobius inversion needs a nonempty domain");
    if (table.values.size() != n) throw invalid_input("rank table size mismatch");

    std::vector<std::size_t> keep;          // first occurrence of each distinct region
    std::vector<std::size_t> rep(n, 0);     // index into keep
    for (std::size_t i = 0; i < n; ++i) {
        bool found = false;
        for (std::size_t k = 0; k < keep.size(); ++k) {
            if (table.domain.intervals[keep[k]] == table.domain.intervals[i]) {
                if (table.values[keep[k]] != table.values[i])
                    throw invalid_input("duplicate intervals carry conflicting ranks");
                rep[i] = k;
                found = true;
                break;
            }
        }
        if (!found) {
            rep[i] = keep.size();
            keep.push_back(i);
        }
    }

    GPD out;
    out.merged_duplicates = keep.size() != n;
    out.domain.name = table.domain.name;
    for (std::size_t k : keep) {
        out.domain.intervals.push_back(table.domain.intervals[k]);
        if (table.domain.has_vecs()) out.domain.vecs.push_back(table.domain.vecs[k]);
    }
    const std::size_t m = keep.size();

    std::vector<char> strict_sup(m * m, 0);  // strict_sup[i*m+j]: interval i ⊋ interval j
    std::vector<std::size_t> sup_count(m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (i != j && contains(out.domain.intervals[i], out.domain.intervals[j])) {
                strict_sup[i * m + j] = 1;
                ++sup_count[j];
            }

    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t u, std::size_t v) { return sup_count[u] < sup_count[v]; });

    out.values.assign(m, 0);
    for (std::size_t j : order) {
        long long acc = table.values[keep[j]];
        for (std::size_t i = 0; i < m; ++i)
            if (strict_sup[i * m + j]) acc -= out.values[i];
        out.values[j] = acc;
    }
    return out;
}

// Nonzero diagram points in embedded form, signs preserved.
struct GPDPoint {
    IntervalVec6 v;
    long long multiplicity = 0;
};

[[nodiscard]] inline std::vector<GPDPoint> gpd_points(const GPD& dgm) {
    std::vector<GPDPoint> pts;
    for (std::size_t i = 0; i < dgm.domain.size(); ++i) {
        if (dgm.values[i] == 0) continue;
        const IntervalVec6 v =
            dgm.domain.has_vecs() ? dgm.domain.vecs[i] : encode_vec6(dgm.domain.intervals[i]);
        pts.push_back(GPDPoint{v, dgm.values[i]});
    }
    return pts;
}

// Largest radius t with thicken(I, t) still inside B; -inf when I is not
// contained in B at all.
[[nodiscard]] inline double max_thickening(const PQInterval& I, const PQInterval& B) {
    double t = std::numeric_limits<double>::infinity();
    for (const Point2& m : I.mins) {
        double best = -std::numeric_limits<double>::infinity();
        for (const Point2& b : B.mins) best = std::max(best, std::min(m.x - b.x, m.y - b.y));
        t = std::min(t, best);
    }
    for (const Point2& M : I.maxs) {
        double best = -std::numeric_limits<double>::infinity();
        for (const Point2& q : B.maxs) best = std::max(best, std::min(q.x - M.x, q.y - M.y));
        t = std::min(t, best);
    }
    return t < 0.0 ? -std::numeric_limits<double>::infinity() : t;
}

// Multiset of maximal thickening radii of one interval into a barcode. The
// rank of the thickened interval is the suffix count: rank(I^t) = number of
// bars (with multiplicity) whose breakpoint is >= t.
struct ThickeningProfile {
    std::vector<double> steps;        // ascending, distinct
    std::vector<long long> suffix;    // suffix[i] = total multiplicity of steps[i..]

    [[nodiscard]] long long count_geq(double t) const {
        const auto it = std::lower_bound(steps.begin(), steps.end(), t);
        return it == steps.end() ? 0 : suffix[static_cast<std::size_t>(it - steps.begin())];
    }
    [[nodiscard]] long long count_gt(double t) const {
        const auto it = std::upper_bound(steps.begin(), steps.end(), t);
        return it == steps.end() ? 0 : suffix[static_cast<std::size_t>(it - steps.begin())];
    }
};

[[nodiscard]] inline ThickeningProfile thickening_profile(const PQInterval& I, const Barcode& bc) {
    std::vector<std::pair<double, long long>> raw;
    for (const Bar& b : bc.bars) {
        const double t = max_thickening(I, b.region);
        if (t >= 0.0) raw.emplace_back(t, b.multiplicity);
    }
    std::sort(raw.begin(), raw.end());
    ThickeningProfile prof;
    for (const auto& [t, mult] : raw) {
        if (!prof.steps.empty() && prof.steps.back() == t) {
            prof.suffix.back() += mult;  // temporarily holds per-step mass
        } else {
            prof.steps.push_back(t);
            prof.suffix.push_back(mult);
        }
    }
    for (std::size_t i = prof.steps.size(); i-- > 1;) prof.suffix[i - 1] += prof.suffix[i];
    return prof;
}

namespace detail {

// Right-limit rank domination: for every u >= 0 and every e slightly above c,
// (rank of `upper`'s interval shifted by e + u in `lower`'s module) stays
// below (rank at u in `upper`'s module). Written with suffix counts:
// lower.count_gt(c + u) <= upper.count_geq(u). Both sides are step functions
// of u, so checking u = 0 and u just after each step of `upper` is exact.
[[nodiscard]] inline bool tail_dominates(const ThickeningProfile& upper, const ThickeningProfile& lower, double c) {
    if (lower.count_gt(c) > upper.count_geq(0.0)) return false;
    for (const double t : upper.steps)
        if (lower.count_gt(c + t) > upper.count_gt(t)) return false;
    return true;
}

// The feasible radius set is up-closed but can be open at its left endpoint,
// so the infimum is found as the smallest candidate whose right-limit is
// feasible. All breakpoint differences that can change feasibility are
// included among the candidates, hence the infimum itself is one of them.
template <class FeasibleAbove>
[[nodiscard]] double smallest_feasible(std::vector<double>& candidates, FeasibleAbove&& feasible_above) {
    candidates.push_back(0.0);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    if (!feasible_above(candidates.back())) {
        // Feasibility is monotone in the radius, so nothing smaller works.
        return std::numeric_limits<double>::infinity();
    }
    std::size_t lo = 0, hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (feasible_above(candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return candidates[lo];
}

inline void push_shifted_differences(std::vector<double>& out, const ThickeningProfile& from,
                                     const ThickeningProfile& minus) {
    for (const double t : from.steps) {
        if (t >= 0.0) out.push_back(t);
        for (const double u : minus.steps)
            if (t - u >= 0.0) out.push_back(t - u);
    }
}

} // namespace detail

// Erosion distance between two barcodes observed through sparse interval
// domains: the smallest radius admitting a correspondence of domain intervals
// that is geometrically tight (eps_pq within the radius) and rank-compatible
// along both thickening rays. Using all feasible pairs is optimal, so the
// correspondence check reduces to covering every row and column.
[[nodiscard]] inline double sparse_erosion_distance(const Barcode& M, const Domain& domM, const Barcode& N,
                                                    const Domain& domN) {
    const std::size_t n = domM.size(), m = domN.size();
    if (n == 0 || m == 0) throw invalid_input("sparse erosion distance needs nonempty domains");

    std::vector<ThickeningProfile> pm, pn;
    pm.reserve(n);
    pn.reserve(m);
    for (const PQInterval& I : domM.intervals) pm.push_back(thickening_profile(I, M));
    for (const PQInterval& J : domN.intervals) pn.push_back(thickening_profile(J, N));
    const EpsilonMatrix em = epsilon_matrix(domM, domN);

    std::vector<double> candidates(em.eps.begin(), em.eps.end());
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < m; ++s) {
            detail::push_shifted_differences(candidates, pn[s], pm[r]);
            detail::push_shifted_differences(candidates, pm[r], pn[s]);
        }

    const auto pair_ok = [&](std::size_t r, std::size_t s, double c) {
        return em.at(r, s) <= c && detail::tail_dominates(pm[r], pn[s], c) &&
               detail::tail_dominates(pn[s], pm[r], c);
    };
    const auto feasible_above = [&](double c) {
        std::vector<char> col_hit(m, 0);
        for (std::size_t r = 0; r < n; ++r) {
            bool row_hit = false;
            for (std::size_t s = 0; s < m; ++s)
                if (pair_ok(r, s, c)) {
                    row_hit = true;
                    col_hit[s] = 1;
                }
            if (!row_hit) return false;
        }
        return std::all_of(col_hit.begin(), col_hit.end(), [](char h) { return h != 0; });
    };
    return detail::smallest_feasible(candidates, feasible_above);
}

// Erosion distance between two barcodes observed on the thickening closure of
// a seed domain: along each seed's ray the two rank step functions must
// dominate each other after shifting by the radius.
[[nodiscard]] inline double erosion_distance_closure(const Domain& seed, const Barcode& M, const Barcode& N) {
    if (seed.size() == 0) throw invalid_input("erosion distance needs a nonempty seed domain");
    std::vector<ThickeningProfile> pm, pn;
    pm.reserve(seed.size());
    pn.reserve(seed.size());
    for (const PQInterval& I : seed.intervals) {
        pm.push_back(thickening_profile(I, M));
        pn.push_back(thickening_profile(I, N));
    }
    std::vector<double> candidates;
    for (std::size_t i = 0; i < seed.size(); ++i) {
        detail::push_shifted_differences(candidates, pn[i], pm[i]);
        detail::push_shifted_differences(candidates, pm[i], pn[i]);
    }
    const auto feasible_above = [&](double c) {
        for (std::size_t i = 0; i < seed.size(); ++i)
            if (!detail::tail_dominates(pm[i], pn[i], c) || !detail::tail_dominates(pn[i], pm[i], c))
                return false;
        return true;
    };
    return detail::smallest_feasible(candidates, feasible_above);
}

} // namespace sgpd
