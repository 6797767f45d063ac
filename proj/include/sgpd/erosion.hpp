#pragma once

// Pairwise erosion radii between staircase intervals and the symmetrized
// domain distance dhat built from them. eps_pq works on explicit point
// antichains; eps_21 is the closed form on six-coordinate embeddings. Both
// compose the same subtractions, ReLU clamps and min/max reductions, so they
// agree bitwise on corresponding inputs.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include "geometry.hpp"
#include "parallel.hpp"

namespace sgpd {

// Order indicator: 1 when x <= y. The gated terms below appear pre-rewritten
// as ReLU expressions, e.g. (1 - delta(x, y)) * |y - x| = max(x - y, 0).
[[nodiscard]] inline int delta(double x, double y) { return x <= y ? 1 : 0; }

[[nodiscard]] inline double relu(double t) { return t > 0.0 ? t : 0.0; }

// Largest one-sided overhang of the pair (w2 over w1, w4 over w3).
[[nodiscard]] inline double F(double w1, double w2, double w3, double w4) {
    return std::max(relu(w2 - w1), relu(w4 - w3));
}

// Capped overhang. Exposed for completeness; eps_21 itself never caps.
[[nodiscard]] inline double G(double m1, double m2, double m3, double m4, double m5) {
    return std::min(F(m1, m2, m3, m4), m5);
}

// Max of pairwise mins, the reduction shape of the two-min terms.
[[nodiscard]] inline double H(double o1, double o2, double o3, double o4) {
    return std::max(std::min(o1, o2), std::min(o3, o4));
}

// Smallest radius r with inner ⊆ thicken(outer, r): every min generator of
// inner must end up above some shifted min of outer, every max generator below
// some shifted max.
[[nodiscard]] inline double cover_radius(const PQInterval& outer, const PQInterval& inner) {
    double worst = 0.0;
    for (const Point2& m : inner.mins) {
        double need = std::numeric_limits<double>::infinity();
        for (const Point2& o : outer.mins) need = std::min(need, std::max(relu(o.x - m.x), relu(o.y - m.y)));
        worst = std::max(worst, need);
    }
    for (const Point2& M : inner.maxs) {
        double need = std::numeric_limits<double>::infinity();
        for (const Point2& o : outer.maxs) need = std::min(need, std::max(relu(M.x - o.x), relu(M.y - o.y)));
        worst = std::max(worst, need);
    }
    return worst;
}

// Smallest radius at which each interval is contained in the other's
// thickening.
[[nodiscard]] inline double eps_pq(const PQInterval& I, const PQInterval& J) {
    return std::max(cover_radius(I, J), cover_radius(J, I));
}

// Closed form of eps_pq on embedded intervals, arranged so every branch is a
// ReLU composition. Mixed vectors (b > 0, c = 0) evaluate to the same radius
// as eps_pq on the normalized decode: the dominated corner never wins the
// inner min / outer max under monotone rounding.
[[nodiscard]] inline double eps_21(const IntervalVec6& vi, const IntervalVec6& vj) {
    const double i_lo_x = vi.x - vi.b, i_lo_y = vi.y - vi.c;
    const double i_hi_x = vi.x + vi.d, i_hi_y = vi.y + vi.a;
    const double j_lo_x = vj.x - vj.b, j_lo_y = vj.y - vj.c;
    const double j_hi_x = vj.x + vj.d, j_hi_y = vj.y + vj.a;

    // Mins of J rising above thickened mins of I, then the mirrored direction.
    const double min_into_i = H(F(j_lo_x, i_lo_x, vj.y, vi.y), F(j_lo_x, vi.x, vj.y, i_lo_y),
                                F(vj.x, i_lo_x, j_lo_y, vi.y), F(vj.x, vi.x, j_lo_y, i_lo_y));
    const double max_into_i = F(i_hi_x, j_hi_x, i_hi_y, j_hi_y);
    const double min_into_j = H(F(i_lo_x, j_lo_x, vi.y, vj.y), F(i_lo_x, vj.x, vi.y, j_lo_y),
                                F(vi.x, j_lo_x, i_lo_y, vj.y), F(vi.x, vj.x, i_lo_y, j_lo_y));
    const double max_into_j = F(j_hi_x, i_hi_x, j_hi_y, i_hi_y);

    return std::max(std::max(min_into_i, max_into_i), std::max(min_into_j, max_into_j));
}

// Dense rectangular table of pairwise radii, row-major.
struct EpsilonMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> eps;

    [[nodiscard]] double at(std::size_t r, std::size_t s) const { return eps[r * cols + s]; }
    double& at(std::size_t r, std::size_t s) { return eps[r * cols + s]; }
};

// Entries are independent, so the parallel fill is deterministic. Uses the
// closed form when both domains carry embeddings, the antichain form otherwise
// (the two agree bitwise).
[[nodiscard]] inline EpsilonMatrix epsilon_matrix(const Domain& A, const Domain& B, int threads = 1) {
    if (A.size() == 0 || B.size() == 0) throw invalid_input("epsilon matrix needs nonempty domains");
    EpsilonMatrix em;
    em.rows = A.size();
    em.cols = B.size();
    em.eps.assign(em.rows * em.cols, 0.0);
    const bool embedded = A.has_vecs() && B.has_vecs();
    parallel_for(em.rows, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t r = lo; r < hi; ++r)
            for (std::size_t s = 0; s < em.cols; ++s)
                em.at(r, s) = embedded ? eps_21(A.vecs[r], B.vecs[s]) : eps_pq(A.intervals[r], B.intervals[s]);
    });
    return em;
}

[[nodiscard]] inline double dhat(const EpsilonMatrix& em) {
    if (em.rows == 0 || em.cols == 0) throw invalid_input("dhat needs a nonempty epsilon matrix");
    double row_side = 0.0;
    for (std::size_t r = 0; r < em.rows; ++r) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < em.cols; ++s) best = std::min(best, em.at(r, s));
        row_side = std::max(row_side, best);
    }
    double col_side = 0.0;
    for (std::size_t s = 0; s < em.cols; ++s) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < em.rows; ++r) best = std::min(best, em.at(r, s));
        col_side = std::max(col_side, best);
    }
    return std::max(row_side, col_side);
}

// Symmetrized interval-domain distance: every interval of each domain must be
// eps-matched by one of the other.
[[nodiscard]] inline double dhat(const Domain& A, const Domain& B, int threads = 1) {
    return dhat(epsilon_matrix(A, B, threads));
}

} // namespace sgpd
