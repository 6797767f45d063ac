#pragma once

// Staircase intervals of the plane: regions generated by an antichain of
// minimal points and an antichain of maximal points. A point z belongs to the
// region iff some minimal point lies below z and some maximal point lies above
// z. Intervals additionally have to be connected; both conditions are checked
// on construction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"

namespace sgpd {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

[[nodiscard]] inline bool operator==(Point2 p, Point2 q) { return p.x == q.x && p.y == q.y; }
[[nodiscard]] inline bool operator!=(Point2 p, Point2 q) { return !(p == q); }

// Componentwise order on the plane.
[[nodiscard]] inline bool leq(Point2 p, Point2 q) { return p.x <= q.x && p.y <= q.y; }

[[nodiscard]] inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// A (p,q)-interval. `mins` is the antichain of minimal points sorted by
// strictly increasing x (hence strictly decreasing y); `maxs` likewise for the
// maximal points. Build one through make_interval so the invariants hold.
struct PQInterval {
    std::vector<Point2> mins;
    std::vector<Point2> maxs;

    [[nodiscard]] std::size_t p() const { return mins.size(); }
    [[nodiscard]] std::size_t q() const { return maxs.size(); }
};

[[nodiscard]] inline bool operator==(const PQInterval& a, const PQInterval& b) {
    return a.mins == b.mins && a.maxs == b.maxs;
}
[[nodiscard]] inline bool operator!=(const PQInterval& a, const PQInterval& b) { return !(a == b); }

// Membership test straight from the definition of the region.
[[nodiscard]] inline bool region_contains_point(const PQInterval& iv, Point2 z) {
    bool above_min = false;
    for (const Point2& m : iv.mins) {
        if (leq(m, z)) { above_min = true; break; }
    }
    if (!above_min) return false;
    for (const Point2& M : iv.maxs) {
        if (leq(z, M)) return true;
    }
    return false;
}

namespace detail {

// Keeps the <=-minimal elements of a point set, dropping duplicates. Sorting
// lexicographically guarantees every dominator of a point precedes it.
inline std::vector<Point2> minimal_points(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](Point2 u, Point2 v) {
        return u.x < v.x || (u.x == v.x && u.y < v.y);
    });
    std::vector<Point2> kept;
    for (const Point2& p : pts) {
        bool dominated = false;
        for (const Point2& k : kept) {
            if (leq(k, p)) { dominated = true; break; }
        }
        if (!dominated) kept.push_back(p);
    }
    return kept;
}

inline std::vector<Point2> maximal_points(std::vector<Point2> pts) {
    for (Point2& p : pts) { p.x = -p.x; p.y = -p.y; }
    std::vector<Point2> kept = minimal_points(std::move(pts));
    for (Point2& p : kept) { p.x = -p.x; p.y = -p.y; }
    std::sort(kept.begin(), kept.end(), [](Point2 u, Point2 v) { return u.x < v.x; });
    return kept;
}

} // namespace detail

// Normalizes (dominated generators removed, canonical sort order) and
// validates. Throws invalid_input when the points do not describe a nonempty
// connected staircase region.
[[nodiscard]] inline PQInterval make_interval(std::vector<Point2> mins, std::vector<Point2> maxs) {
    if (mins.empty() || maxs.empty()) throw invalid_input("interval needs at least one min and one max point");
    for (const Point2& p : mins)
        if (!is_finite(p)) throw invalid_input("interval min point is not finite");
    for (const Point2& p : maxs)
        if (!is_finite(p)) throw invalid_input("interval max point is not finite");

    PQInterval iv;
    iv.mins = detail::minimal_points(std::move(mins));
    iv.maxs = detail::maximal_points(std::move(maxs));

    for (const Point2& m : iv.mins) {
        bool below_some_max = false;
        for (const Point2& M : iv.maxs)
            if (leq(m, M)) { below_some_max = true; break; }
        if (!below_some_max) throw invalid_input("interval min point lies outside the region");
    }
    for (const Point2& M : iv.maxs) {
        bool above_some_min = false;
        for (const Point2& m : iv.mins)
            if (leq(m, M)) { above_some_min = true; break; }
        if (!above_some_min) throw invalid_input("interval max point lies outside the region");
    }

    // Connectivity: each concave corner of the lower staircase must still be
    // inside the region, and dually for the upper staircase.
    for (std::size_t i = 0; i + 1 < iv.mins.size(); ++i) {
        const Point2 corner{iv.mins[i + 1].x, iv.mins[i].y};
        if (!region_contains_point(iv, corner)) throw invalid_input("interval region is disconnected");
    }
    for (std::size_t j = 0; j + 1 < iv.maxs.size(); ++j) {
        const Point2 corner{iv.maxs[j].x, iv.maxs[j + 1].y};
        if (!region_contains_point(iv, corner)) throw invalid_input("interval region is disconnected");
    }
    return iv;
}

// contains(outer, inner) decides inner ⊆ outer. For staircase intervals this
// reduces to: every min of inner dominates a min of outer, every max of inner
// is dominated by a max of outer.
[[nodiscard]] inline bool contains(const PQInterval& outer, const PQInterval& inner) {
    for (const Point2& m : inner.mins) {
        bool ok = false;
        for (const Point2& o : outer.mins)
            if (leq(o, m)) { ok = true; break; }
        if (!ok) return false;
    }
    for (const Point2& M : inner.maxs) {
        bool ok = false;
        for (const Point2& o : outer.maxs)
            if (leq(M, o)) { ok = true; break; }
        if (!ok) return false;
    }
    return true;
}

// Thickening by an L∞ ball of radius eps: min generators move down-left, max
// generators move up-right. Antichain order and connectivity are preserved, so
// no renormalization is needed.
[[nodiscard]] inline PQInterval thicken(const PQInterval& iv, double eps) {
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw invalid_input("thickening radius must be finite and nonnegative");
    PQInterval out = iv;
    for (Point2& m : out.mins) { m.x -= eps; m.y -= eps; }
    for (Point2& M : out.maxs) { M.x += eps; M.y += eps; }
    return out;
}

struct Box2 {
    Point2 lo;
    Point2 hi;
};

[[nodiscard]] inline Box2 bounding_box(const PQInterval& iv) {
    return Box2{{iv.mins.front().x, iv.mins.back().y}, {iv.maxs.back().x, iv.maxs.front().y}};
}

[[nodiscard]] inline Box2 join(Box2 a, Box2 b) {
    return Box2{{std::min(a.lo.x, b.lo.x), std::min(a.lo.y, b.lo.y)},
                {std::max(a.hi.x, b.hi.x), std::max(a.hi.y, b.hi.y)}};
}

// Six-coordinate embedding of intervals with one maximal point and at most two
// minimal points. Decodes to mins {(x-b, y), (x, y-c)} and max (x+d, y+a);
// b = c = 0 gives the one-min case.
struct IntervalVec6 {
    double x = 0.0;
    double y = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
};

[[nodiscard]] inline bool operator==(const IntervalVec6& u, const IntervalVec6& v) {
    return u.x == v.x && u.y == v.y && u.a == v.a && u.b == v.b && u.c == v.c && u.d == v.d;
}
[[nodiscard]] inline bool operator!=(const IntervalVec6& u, const IntervalVec6& v) { return !(u == v); }

// Decodable: finite with nonnegative side lengths. Canonical additionally
// requires b and c to vanish together; mixed vectors (say b > 0, c = 0) still
// decode, with the dominated min generator dropped.
[[nodiscard]] inline bool is_decodable_vec6(const IntervalVec6& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.a) && std::isfinite(v.b) &&
           std::isfinite(v.c) && std::isfinite(v.d) && v.a >= 0.0 && v.b >= 0.0 && v.c >= 0.0 && v.d >= 0.0;
}

[[nodiscard]] inline bool is_canonical_vec6(const IntervalVec6& v) {
    return is_decodable_vec6(v) && ((v.b == 0.0) == (v.c == 0.0));
}

[[nodiscard]] inline PQInterval decode_vec6(const IntervalVec6& v) {
    if (!is_decodable_vec6(v)) throw invalid_input("interval vector must be finite with nonnegative sides");
    return make_interval({{v.x - v.b, v.y}, {v.x, v.y - v.c}}, {{v.x + v.d, v.y + v.a}});
}

[[nodiscard]] inline bool is_vec6_encodable(const PQInterval& iv) {
    return iv.q() == 1 && iv.p() <= 2;
}

[[nodiscard]] inline IntervalVec6 encode_vec6(const PQInterval& iv) {
    if (!is_vec6_encodable(iv)) throw invalid_input("unsupported shape for embedding: need one max and at most two mins");
    const Point2 M = iv.maxs.front();
    if (iv.p() == 1) {
        const Point2 m = iv.mins.front();
        return IntervalVec6{m.x, m.y, M.y - m.y, 0.0, 0.0, M.x - m.x};
    }
    const Point2 m1 = iv.mins.front();  // smaller x, larger y
    const Point2 m2 = iv.mins.back();
    return IntervalVec6{m2.x, m1.y, M.y - m1.y, m2.x - m1.x, m1.y - m2.y, M.x - m2.x};
}

[[nodiscard]] inline IntervalVec6 thicken(const IntervalVec6& v, double eps) {
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw invalid_input("thickening radius must be finite and nonnegative");
    return IntervalVec6{v.x - eps, v.y - eps, v.a + 2.0 * eps, v.b, v.c, v.d + 2.0 * eps};
}

// An ordered collection of intervals. `vecs` carries the six-coordinate form
// when the domain was built from one (grids, optimizer output, vec6 files);
// it is kept verbatim so serialization round-trips bitwise.
struct Domain {
    std::string name;
    std::vector<PQInterval> intervals;
    std::vector<IntervalVec6> vecs;

    [[nodiscard]] std::size_t size() const { return intervals.size(); }
    [[nodiscard]] bool has_vecs() const { return !intervals.empty() && vecs.size() == intervals.size(); }
};

[[nodiscard]] inline Domain make_domain_from_vecs(std::string name, std::vector<IntervalVec6> vecs) {
    if (vecs.empty()) throw invalid_input("domain must contain at least one interval");
    Domain dom;
    dom.name = std::move(name);
    dom.vecs = std::move(vecs);
    dom.intervals.reserve(dom.vecs.size());
    for (const IntervalVec6& v : dom.vecs) dom.intervals.push_back(decode_vec6(v));
    return dom;
}

[[nodiscard]] inline Domain make_domain(std::string name, std::vector<PQInterval> intervals) {
    if (intervals.empty()) throw invalid_input("domain must contain at least one interval");
    Domain dom;
    dom.name = std::move(name);
    dom.intervals = std::move(intervals);
    return dom;
}

// Evenly spaced samples including both endpoints; k = 1 degenerates to {lo}.
[[nodiscard]] inline std::vector<double> linspace(double lo, double hi, int k) {
    if (k < 1) throw invalid_input("linspace needs at least one sample");
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw invalid_input("linspace bounds must be finite");
    if (k == 1) return {lo};
    if (!(hi > lo)) throw invalid_input("degenerate range: upper bound must exceed lower bound");
    std::vector<double> vals(static_cast<std::size_t>(k));
    const double step = (hi - lo) / static_cast<double>(k - 1);
    for (int i = 0; i < k; ++i) vals[static_cast<std::size_t>(i)] = lo + static_cast<double>(i) * step;
    vals.back() = hi;
    return vals;
}

// Cartesian product grid over the embedding coordinates, enumerated in
// lexicographic (x, y, a, b, c, d) order: n_xy² · n_sides⁴ intervals.
[[nodiscard]] inline Domain grid_domain(std::string name, int n_xy, int n_sides, double x_lo, double x_hi,
                                        double y_lo, double y_hi, double side_lo, double side_hi) {
    if (side_lo < 0.0) throw invalid_input("grid side lengths must be nonnegative");
    const std::vector<double> xs = linspace(x_lo, x_hi, n_xy);
    const std::vector<double> ys = linspace(y_lo, y_hi, n_xy);
    const std::vector<double> ss = linspace(side_lo, side_hi, n_sides);
    const double total = std::pow(static_cast<double>(n_xy), 2) * std::pow(static_cast<double>(n_sides), 4);
    if (total > 5e7) throw invalid_input("grid too large");
    std::vector<IntervalVec6> vecs;
    vecs.reserve(static_cast<std::size_t>(total));
    for (double x : xs)
        for (double y : ys)
            for (double a : ss)
                for (double b : ss)
                    for (double c : ss)
                        for (double d : ss) vecs.push_back(IntervalVec6{x, y, a, b, c, d});
    return make_domain_from_vecs(std::move(name), std::move(vecs));
}

// Flat coordinate view of a vec6 domain: six slots (x, y, a, b, c, d) per
// interval, concatenated in domain order.
struct DomainVector {
    std::vector<double> coords;

    [[nodiscard]] std::size_t interval_count() const { return coords.size() / 6; }
    [[nodiscard]] IntervalVec6 at(std::size_t i) const {
        const double* s = coords.data() + 6 * i;
        return IntervalVec6{s[0], s[1], s[2], s[3], s[4], s[5]};
    }
};

inline void validate_domain_vector(const DomainVector& dv) {
    if (dv.coords.empty() || dv.coords.size() % 6 != 0)
        throw invalid_input("domain vector length must be a positive multiple of 6");
    for (std::size_t i = 0; i < dv.interval_count(); ++i)
        if (!is_decodable_vec6(dv.at(i))) throw invalid_input("domain vector slot is not decodable");
}

[[nodiscard]] inline DomainVector to_domain_vector(const Domain& dom) {
    DomainVector dv;
    dv.coords.reserve(6 * dom.size());
    if (dom.has_vecs()) {
        for (const IntervalVec6& v : dom.vecs) {
            dv.coords.insert(dv.coords.end(), {v.x, v.y, v.a, v.b, v.c, v.d});
        }
        return dv;
    }
    for (const PQInterval& iv : dom.intervals) {
        const IntervalVec6 v = encode_vec6(iv);
        dv.coords.insert(dv.coords.end(), {v.x, v.y, v.a, v.b, v.c, v.d});
    }
    return dv;
}

[[nodiscard]] inline Domain domain_from_vector(std::string name, const DomainVector& dv) {
    validate_domain_vector(dv);
    std::vector<IntervalVec6> vecs;
    vecs.reserve(dv.interval_count());
    for (std::size_t i = 0; i < dv.interval_count(); ++i) vecs.push_back(dv.at(i));
    return make_domain_from_vecs(std::move(name), std::move(vecs));
}

[[nodiscard]] inline double linf_distance(const DomainVector& u, const DomainVector& v) {
    if (u.coords.size() != v.coords.size()) throw invalid_input("domain vectors have different lengths");
    double r = 0.0;
    for (std::size_t i = 0; i < u.coords.size(); ++i) r = std::max(r, std::fabs(u.coords[i] - v.coords[i]));
    return r;
}

} // namespace sgpd
