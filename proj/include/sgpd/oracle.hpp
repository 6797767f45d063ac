#pragma once

// Independent reference implementations used to cross-check the closed forms:
// erosion radii from rasterized regions via chessboard distance transforms,
// Möbius inversion through an explicit zeta-matrix solve with Kahn ordering,
// and a permutation brute force for the Lipschitz bound. These routines share
// only the type definitions and the membership definition of a region with
// the code they validate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "erosion.hpp"
#include "geometry.hpp"
#include "gpd.hpp"

namespace sgpd {

struct Raster {
    Point2 origin;  // lower-left corner of cell (0, 0)
    double cell = 0.0;
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<std::uint8_t> inside;  // row-major, iy * nx + ix
    std::size_t filled = 0;

    [[nodiscard]] bool at(std::size_t ix, std::size_t iy) const { return inside[iy * nx + ix] != 0; }
};

// Samples region membership at cell centers.
[[nodiscard]] inline Raster rasterize(const PQInterval& iv, Point2 origin, double cell, std::size_t nx,
                                      std::size_t ny) {
    if (!(cell > 0.0) || !std::isfinite(cell)) throw invalid_input("raster cell size must be positive");
    if (nx == 0 || ny == 0 || nx * ny > std::size_t{1} << 26)
        throw invalid_input("raster grid size out of range");
    Raster r;
    r.origin = origin;
    r.cell = cell;
    r.nx = nx;
    r.ny = ny;
    r.inside.assign(nx * ny, 0);
    for (std::size_t iy = 0; iy < ny; ++iy) {
        const double cy = origin.y + (static_cast<double>(iy) + 0.5) * cell;
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double cx = origin.x + (static_cast<double>(ix) + 0.5) * cell;
            if (region_contains_point(iv, Point2{cx, cy})) {
                r.inside[iy * nx + ix] = 1;
                ++r.filled;
            }
        }
    }
    return r;
}

namespace detail {

// Exact chessboard (L∞) distance in cells to the nearest filled cell, by the
// classic two-pass 8-neighbor sweep; unit weights are exact for this metric.
[[nodiscard]] inline std::vector<std::int32_t> chessboard_dt(const Raster& r) {
    const std::int32_t inf = static_cast<std::int32_t>(r.nx + r.ny + 2);
    std::vector<std::int32_t> dist(r.nx * r.ny, inf);
    const auto idx = [&](std::size_t ix, std::size_t iy) { return iy * r.nx + ix; };
    for (std::size_t iy = 0; iy < r.ny; ++iy)
        for (std::size_t ix = 0; ix < r.nx; ++ix) {
            if (r.inside[idx(ix, iy)]) {
                dist[idx(ix, iy)] = 0;
                continue;
            }
            std::int32_t best = inf;
            if (ix > 0) best = std::min(best, dist[idx(ix - 1, iy)]);
            if (iy > 0) {
                best = std::min(best, dist[idx(ix, iy - 1)]);
                if (ix > 0) best = std::min(best, dist[idx(ix - 1, iy - 1)]);
                if (ix + 1 < r.nx) best = std::min(best, dist[idx(ix + 1, iy - 1)]);
            }
            dist[idx(ix, iy)] = best == inf ? inf : best + 1;
        }
    for (std::size_t iy = r.ny; iy-- > 0;)
        for (std::size_t ix = r.nx; ix-- > 0;) {
            std::int32_t best = dist[idx(ix, iy)];
            if (ix + 1 < r.nx) best = std::min(best, dist[idx(ix + 1, iy)] + 1);
            if (iy + 1 < r.ny) {
                best = std::min(best, dist[idx(ix, iy + 1)] + 1);
                if (ix > 0) best = std::min(best, dist[idx(ix - 1, iy + 1)] + 1);
                if (ix + 1 < r.nx) best = std::min(best, dist[idx(ix + 1, iy + 1)] + 1);
            }
            dist[idx(ix, iy)] = best;
        }
    return dist;
}

[[nodiscard]] inline std::int32_t max_dt_over(const Raster& from, const std::vector<std::int32_t>& dist_to) {
    std::int32_t worst = 0;
    for (std::size_t i = 0; i < from.inside.size(); ++i)
        if (from.inside[i]) worst = std::max(worst, dist_to[i]);
    return worst;
}

} // namespace detail

// Smallest radius on the grid {0, cell, 2·cell, ...} at which the Chebyshev
// dilation of each raster covers the other. cell = 0 picks 1/256 of the joint
// bounding-box diameter. Within 2·cell of eps_pq for regions whose features
// are a few cells wide.
[[nodiscard]] inline double raster_eps_pair(const PQInterval& I, const PQInterval& J, double cell = 0.0) {
    const Box2 bb = join(bounding_box(I), bounding_box(J));
    const double diag = std::max(bb.hi.x - bb.lo.x, bb.hi.y - bb.lo.y);
    if (cell == 0.0) {
        if (diag == 0.0) return 0.0;  // both regions are one identical point
        cell = diag / 256.0;
    }
    if (!(cell > 0.0)) throw invalid_input("raster cell size must be positive");
    const Point2 origin{bb.lo.x - cell, bb.lo.y - cell};
    const std::size_t nx = static_cast<std::size_t>(std::ceil((bb.hi.x - bb.lo.x) / cell)) + 3;
    const std::size_t ny = static_cast<std::size_t>(std::ceil((bb.hi.y - bb.lo.y) / cell)) + 3;
    const Raster ra = rasterize(I, origin, cell, nx, ny);
    const Raster rb = rasterize(J, origin, cell, nx, ny);
    if (ra.filled == 0 || rb.filled == 0) throw invalid_input("raster resolution too coarse for the region");
    const std::int32_t need_ab = detail::max_dt_over(rb, detail::chessboard_dt(ra));
    const std::int32_t need_ba = detail::max_dt_over(ra, detail::chessboard_dt(rb));
    return cell * static_cast<double>(std::max(need_ab, need_ba));
}

// Raster-based set inclusion inner ⊆ outer on a shared grid.
[[nodiscard]] inline bool raster_contains(const PQInterval& outer, const PQInterval& inner, double cell = 0.0) {
    const Box2 bb = join(bounding_box(outer), bounding_box(inner));
    const double diag = std::max(bb.hi.x - bb.lo.x, bb.hi.y - bb.lo.y);
    if (cell == 0.0) cell = diag == 0.0 ? 1.0 : diag / 256.0;
    const Point2 origin{bb.lo.x - cell, bb.lo.y - cell};
    const std::size_t nx = static_cast<std::size_t>(std::ceil((bb.hi.x - bb.lo.x) / cell)) + 3;
    const std::size_t ny = static_cast<std::size_t>(std::ceil((bb.hi.y - bb.lo.y) / cell)) + 3;
    const Raster ro = rasterize(outer, origin, cell, nx, ny);
    const Raster ri = rasterize(inner, origin, cell, nx, ny);
    for (std::size_t i = 0; i < ri.inside.size(); ++i)
        if (ri.inside[i] && !ro.inside[i]) return false;
    return true;
}

// dhat recomputed from raster radii. All pairs share one cell size derived
// from the joint bounding box of both domains, so values are comparable.
[[nodiscard]] inline double brute_dhat(const Domain& A, const Domain& B, double cell = 0.0) {
    if (A.size() == 0 || B.size() == 0) throw invalid_input("brute dhat needs nonempty domains");
    if (cell == 0.0) {
        Box2 bb = bounding_box(A.intervals.front());
        for (const PQInterval& iv : A.intervals) bb = join(bb, bounding_box(iv));
        for (const PQInterval& iv : B.intervals) bb = join(bb, bounding_box(iv));
        const double diag = std::max(bb.hi.x - bb.lo.x, bb.hi.y - bb.lo.y);
        if (diag == 0.0) return 0.0;
        cell = diag / 256.0;
    }
    EpsilonMatrix em;
    em.rows = A.size();
    em.cols = B.size();
    em.eps.assign(em.rows * em.cols, 0.0);
    for (std::size_t r = 0; r < em.rows; ++r)
        for (std::size_t s = 0; s < em.cols; ++s)
            em.at(r, s) = raster_eps_pair(A.intervals[r], B.intervals[s], cell);
    return dhat(em);
}

namespace detail {

// Containment through the membership route: every generator point of inner
// must lie in the outer region.
[[nodiscard]] inline bool contains_by_membership(const PQInterval& outer, const PQInterval& inner) {
    for (const Point2& m : inner.mins)
        if (!region_contains_point(outer, m)) return false;
    for (const Point2& M : inner.maxs)
        if (!region_contains_point(outer, M)) return false;
    return true;
}

} // namespace detail

// Möbius inversion by explicit zeta-matrix elimination: duplicates merged,
// Kahn's algorithm orders supersets first, and the solution is verified
// against zeta · dgm = rank before returning.
[[nodiscard]] inline GPD brute_mobius(const GRITable& table) {
    const std::size_t n = table.domain.size();
    if (n == 0 || table.values.size() != n) throw invalid_input("rank table is empty or inconsistent");

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i) {
        bool dup = false;
        for (const std::size_t k : keep)
            if (detail::contains_by_membership(table.domain.intervals[k], table.domain.intervals[i]) &&
                detail::contains_by_membership(table.domain.intervals[i], table.domain.intervals[k])) {
                if (table.values[k] != table.values[i])
                    throw invalid_input("duplicate intervals carry conflicting ranks");
                dup = true;
                break;
            }
        if (!dup) keep.push_back(i);
    }
    const std::size_t m = keep.size();

    GPD out;
    out.merged_duplicates = m != n;
    out.domain.name = table.domain.name;
    for (const std::size_t k : keep) {
        out.domain.intervals.push_back(table.domain.intervals[k]);
        if (table.domain.has_vecs()) out.domain.vecs.push_back(table.domain.vecs[k]);
    }

    std::vector<char> zeta(m * m, 0);  // zeta[i*m+j]: interval j ⊇ interval i
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (detail::contains_by_membership(out.domain.intervals[j], out.domain.intervals[i])) zeta[i * m + j] = 1;

    std::vector<std::size_t> indegree(m, 0);  // number of unresolved strict supersets
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (i != j && zeta[i * m + j]) ++indegree[i];

    out.values.assign(m, 0);
    std::vector<char> done(m, 0);
    for (std::size_t processed = 0; processed < m; ++processed) {
        std::size_t next = m;
        for (std::size_t j = 0; j < m; ++j)
            if (!done[j] && indegree[j] == 0) {
                next = j;
                break;
            }
        if (next == m) throw internal_error("containment order has a cycle");
        long long acc = table.values[keep[next]];
        for (std::size_t i = 0; i < m; ++i)
            if (i != next && zeta[next * m + i]) acc -= out.values[i];
        out.values[next] = acc;
        done[next] = 1;
        for (std::size_t j = 0; j < m; ++j)
            if (!done[j] && j != next && zeta[j * m + next]) --indegree[j];
    }

    for (std::size_t i = 0; i < m; ++i) {
        long long total = 0;
        for (std::size_t j = 0; j < m; ++j)
            if (zeta[i * m + j]) total += out.values[j];
        if (total != table.values[keep[i]]) throw internal_error("zeta check failed after inversion");
    }
    return out;
}

struct LipschitzCheck {
    double distance_gap = 0.0;   // |dhat(K, J1) - dhat(K, J2)|
    double min_perm_linf = 0.0;  // min over permutations of ||v(perm(J1)) - v(J2)||∞
};

// Exhaustive permutation minimum for the matching-based Lipschitz bound:
// distance_gap <= 2 * min_perm_linf must hold.
[[nodiscard]] inline LipschitzCheck brute_lipschitz(const Domain& K, const Domain& J1, const Domain& J2) {
    if (J1.size() != J2.size()) throw invalid_input("Lipschitz check needs equally sized domains");
    if (J1.size() > 7) throw invalid_input("permutation brute force is capped at 7 intervals");
    const DomainVector v1 = to_domain_vector(J1);
    const DomainVector v2 = to_domain_vector(J2);
    const std::size_t n = J1.size();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    double best = std::numeric_limits<double>::infinity();
    do {
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < 6; ++k)
                norm = std::max(norm, std::fabs(v1.coords[6 * perm[i] + k] - v2.coords[6 * i + k]));
        best = std::min(best, norm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return LipschitzCheck{std::fabs(dhat(K, J1) - dhat(K, J2)), best};
}

} // namespace sgpd
