#pragma once

// Deterministic input samplers for self-checks and oracle comparisons. All
// distributions are derived from raw mt19937_64 output (never from
// std::uniform_*_distribution, whose streams differ between standard
// libraries), so a seed produces the same inputs on every platform.

#include <cstdint>
#include <random>
#include <vector>

#include "geometry.hpp"
#include "gpd.hpp"

namespace sgpd {

using Rng = std::mt19937_64;

// Unbiased integer in [0, n) by rejection.
[[nodiscard]] inline std::uint64_t sample_below(Rng& rng, std::uint64_t n) {
    if (n == 0) throw invalid_input("sample_below needs a positive bound");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

// Uniform double in [lo, hi) with 53 random bits.
[[nodiscard]] inline double sample_uniform(Rng& rng, double lo, double hi) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + unit * (hi - lo);
}

// Uniform over the dyadic lattice (multiples of 2^-6) intersected with
// [lo, hi], where lo and hi are themselves integers. Sums and differences of
// a few such values are exact in double precision.
[[nodiscard]] inline double sample_dyadic(Rng& rng, int lo, int hi) {
    const std::uint64_t cells = static_cast<std::uint64_t>(hi - lo) * 64 + 1;
    return static_cast<double>(lo) + static_cast<double>(sample_below(rng, cells)) * 0x1.0p-6;
}

// First `count` entries of a partial Fisher-Yates shuffle of [0, n).
[[nodiscard]] inline std::vector<std::size_t> sample_distinct(Rng& rng, std::size_t count, std::size_t n) {
    if (count > n) throw invalid_input("cannot sample more distinct values than the range holds");
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < count; ++i)
        std::swap(idx[i], idx[i + sample_below(rng, n - i)]);
    idx.resize(count);
    return idx;
}

// Canonical embedding vector: 40% one-min intervals, occasional degenerate
// heights/widths, coordinates of order one.
[[nodiscard]] inline IntervalVec6 sample_vec6(Rng& rng) {
    IntervalVec6 v;
    v.x = sample_uniform(rng, -2.0, 2.0);
    v.y = sample_uniform(rng, -2.0, 2.0);
    if (sample_below(rng, 10) < 4) {
        v.b = v.c = 0.0;
    } else {
        v.b = sample_uniform(rng, 0.05, 1.0);
        v.c = sample_uniform(rng, 0.05, 1.0);
    }
    v.a = sample_below(rng, 10) == 0 ? 0.0 : sample_uniform(rng, 0.0, 1.0);
    v.d = sample_below(rng, 10) == 0 ? 0.0 : sample_uniform(rng, 0.0, 1.0);
    return v;
}

// Embedding vector on the dyadic lattice; add/sub chains on these coordinates
// are exact, which the field-arithmetic identity tests rely on.
[[nodiscard]] inline IntervalVec6 sample_vec6_dyadic(Rng& rng) {
    IntervalVec6 v;
    v.x = sample_dyadic(rng, -2, 2);
    v.y = sample_dyadic(rng, -2, 2);
    if (sample_below(rng, 10) < 4) {
        v.b = v.c = 0.0;
    } else {
        v.b = static_cast<double>(1 + sample_below(rng, 64)) * 0x1.0p-6;
        v.c = static_cast<double>(1 + sample_below(rng, 64)) * 0x1.0p-6;
    }
    v.a = sample_dyadic(rng, 0, 1);
    v.d = sample_dyadic(rng, 0, 1);
    return v;
}

namespace detail {

// Staircase point chain on the 0.05-lattice: x strictly ascending, y strictly
// descending, scaled and offset into place.
inline std::vector<Point2> sample_chain(Rng& rng, std::size_t len, double offset_x, double offset_y) {
    std::vector<std::size_t> xi = sample_distinct(rng, len, 21);
    std::vector<std::size_t> yi = sample_distinct(rng, len, 21);
    std::sort(xi.begin(), xi.end());
    std::sort(yi.begin(), yi.end(), std::greater<>());
    std::vector<Point2> pts(len);
    for (std::size_t i = 0; i < len; ++i)
        pts[i] = Point2{offset_x + 0.05 * static_cast<double>(xi[i]), offset_y + 0.05 * static_cast<double>(yi[i])};
    return pts;
}

} // namespace detail

// Random valid staircase interval with up to max_pts generators per side.
// Half the draws place every max above every min (always valid); the rest try
// interleaved staircases and fall back when the region comes out disconnected.
[[nodiscard]] inline PQInterval sample_staircase(Rng& rng, std::size_t max_pts = 3) {
    const std::size_t p = 1 + sample_below(rng, max_pts);
    const std::size_t q = 1 + sample_below(rng, max_pts);
    const std::vector<Point2> mins = detail::sample_chain(rng, p, 0.0, 0.0);
    if (sample_below(rng, 2) == 0) {
        for (int attempt = 0; attempt < 20; ++attempt) {
            try {
                return make_interval(mins, detail::sample_chain(rng, q, 0.55, 0.55));
            } catch (const invalid_input&) {
            }
        }
    }
    double anchor_x = 0.0, anchor_y = 0.0;
    for (const Point2& m : mins) {
        anchor_x = std::max(anchor_x, m.x);
        anchor_y = std::max(anchor_y, m.y);
    }
    return make_interval(mins, detail::sample_chain(rng, q, anchor_x, anchor_y));
}

[[nodiscard]] inline PQInterval sample_rect(Rng& rng) {
    const Point2 lo{sample_uniform(rng, -1.0, 1.0), sample_uniform(rng, -1.0, 1.0)};
    const Point2 hi{lo.x + sample_uniform(rng, 0.1, 1.5), lo.y + sample_uniform(rng, 0.1, 1.5)};
    return make_interval({lo}, {hi});
}

// Interval whose every feature is at least a few raster cells wide at the
// default 1/256 resolution: a fat rectangle, or a staircase with all maxs
// pushed well above all mins. Suitable for raster-oracle comparisons.
[[nodiscard]] inline PQInterval sample_fat_interval(Rng& rng, std::size_t max_pts = 3) {
    if (sample_below(rng, 3) == 0) {
        const Point2 lo{sample_uniform(rng, 0.0, 1.0), sample_uniform(rng, 0.0, 1.0)};
        const Point2 hi{lo.x + sample_uniform(rng, 0.2, 1.0), lo.y + sample_uniform(rng, 0.2, 1.0)};
        return make_interval({lo}, {hi});
    }
    const std::size_t p = 1 + sample_below(rng, max_pts);
    const std::size_t q = 1 + sample_below(rng, max_pts);
    const std::vector<Point2> mins = detail::sample_chain(rng, p, 0.0, 0.0);
    double anchor_x = 0.0, anchor_y = 0.0;
    for (const Point2& m : mins) {
        anchor_x = std::max(anchor_x, m.x);
        anchor_y = std::max(anchor_y, m.y);
    }
    return make_interval(mins, detail::sample_chain(rng, q, anchor_x + 0.3, anchor_y + 0.3));
}

[[nodiscard]] inline Domain sample_fat_domain(Rng& rng, std::string name, std::size_t k) {
    std::vector<PQInterval> ivs;
    ivs.reserve(k);
    for (std::size_t i = 0; i < k; ++i) ivs.push_back(sample_fat_interval(rng));
    return make_domain(std::move(name), std::move(ivs));
}

[[nodiscard]] inline Barcode sample_barcode(Rng& rng, std::size_t min_bars, std::size_t max_bars,
                                            bool rects_only = false) {
    const std::size_t count = min_bars + sample_below(rng, max_bars - min_bars + 1);
    std::vector<Bar> bars;
    bars.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Bar b;
        b.region = (rects_only || sample_below(rng, 2) == 0) ? sample_rect(rng) : sample_staircase(rng);
        b.multiplicity = 1 + static_cast<long long>(sample_below(rng, 3));
        bars.push_back(std::move(b));
    }
    return make_barcode(std::move(bars));
}

[[nodiscard]] inline Domain sample_vec6_domain(Rng& rng, std::string name, std::size_t k) {
    std::vector<IntervalVec6> vecs;
    vecs.reserve(k);
    for (std::size_t i = 0; i < k; ++i) vecs.push_back(sample_vec6(rng));
    return make_domain_from_vecs(std::move(name), std::move(vecs));
}

[[nodiscard]] inline Domain sample_pq_domain(Rng& rng, std::string name, std::size_t k) {
    std::vector<PQInterval> ivs;
    ivs.reserve(k);
    for (std::size_t i = 0; i < k; ++i) ivs.push_back(sample_staircase(rng));
    return make_domain(std::move(name), std::move(ivs));
}

} // namespace sgpd
