#include "sgpd/erosion.hpp"
#include "sgpd/sampling.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace sgpd;

TEST_CASE("delta is the indicator of the ordered pair") {
    CHECK(delta(1.0, 2.0) == 1.0);
    CHECK(delta(2.0, 1.0) == 0.0);
    CHECK(delta(1.5, 1.5) == 1.0);
}

TEST_CASE("F takes the larger of two gated overhangs") {
    CHECK(F(0, 1, 0, 2) == 2.0);
    CHECK(F(1, 0, 2, 0) == 0.0);
    CHECK(F(0, 1, 2, 0) == 1.0);
    CHECK(F(0, 0, 0, 0) == 0.0);
}

TEST_CASE("G caps F by its fifth argument") {
    CHECK(G(0, 1, 0, 2, 1.5) == 1.5);
    CHECK(G(0, 1, 0, 2, 3.0) == 2.0);
    CHECK(G(1, 0, 2, 0, 5.0) == 0.0);
}

TEST_CASE("H is the max of two pairwise minima") {
    CHECK(H(3, 1, 2, 5) == 2.0);
    CHECK(H(1, 1, 1, 1) == 1.0);
    CHECK(H(0, 7, 3, 2) == 2.0);
}

TEST_CASE("pairwise radius vanishes exactly on identical intervals") {
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        const PQInterval iv = sample_staircase(rng);
        CHECK(eps_pq(iv, iv) == 0.0);
    }
}

TEST_CASE("pairwise radius on shifted unit squares") {
    const PQInterval I = make_interval({{0, 0}}, {{1, 1}});
    const PQInterval J = make_interval({{0.5, 0}}, {{1.5, 1}});
    CHECK(eps_pq(I, J) == 0.5);
    CHECK(eps_pq(J, I) == 0.5);
}

TEST_CASE("pairwise radius sees the deficit of a missing min generator") {
    const PQInterval I = make_interval({{0, 1}, {1, 0}}, {{2, 2}});
    const PQInterval J = make_interval({{0, 0}}, {{2, 2}});
    CHECK(eps_pq(I, J) == 1.0);
}

TEST_CASE("pairwise radius is symmetric and satisfies the triangle inequality") {
    Rng rng(5);
    for (int t = 0; t < 1000; ++t) {
        const PQInterval a = sample_staircase(rng);
        const PQInterval b = sample_staircase(rng);
        const PQInterval c = sample_staircase(rng);
        const double ab = eps_pq(a, b), ba = eps_pq(b, a);
        CHECK(ab == ba);
        CHECK(ab >= 0.0);
        CHECK(eps_pq(a, c) <= ab + eps_pq(b, c) + 1e-12);
    }
}

TEST_CASE("the pairwise radius is the smallest mutual thickening radius") {
    // A hair above the radius both containments hold; a hair below, at least
    // one fails. Thickening by exactly e reconstructs boundary coordinates
    // through one extra rounding step, so the upper probe needs an ulp of air.
    Rng rng(7);
    int tight = 0;
    for (int t = 0; t < 500; ++t) {
        const PQInterval I = sample_staircase(rng);
        const PQInterval J = sample_staircase(rng);
        const double e = eps_pq(I, J);
        const double grown = e + 1e-9 * std::max(1.0, e);
        CHECK(contains(thicken(I, grown), J));
        CHECK(contains(thicken(J, grown), I));
        if (e > 0.0) {
            ++tight;
            const double shrunk = e * (1.0 - 1e-6);
            CHECK(!(contains(thicken(I, shrunk), J) && contains(thicken(J, shrunk), I)));
        }
    }
    CHECK(tight > 400);
}

TEST_CASE("the closed form on six-vectors equals the generator formula bitwise") {
    CHECK(eps_21(IntervalVec6{0, 0, 1, 0, 0, 1}, IntervalVec6{0.5, 0, 1, 0, 0, 1}) == 0.5);
    Rng rng(11);
    for (int t = 0; t < 10000; ++t) {
        const IntervalVec6 u = sample_vec6(rng);
        const IntervalVec6 v = sample_vec6(rng);
        CHECK(eps_21(u, v) == eps_pq(decode_vec6(u), decode_vec6(v)));
    }
    const IntervalVec6 u{1, 1, 1, 1, 1, 1}, v{1, 1, 1, 0, 0, 1};
    CHECK(eps_21(u, v) == eps_pq(decode_vec6(u), decode_vec6(v)));
    CHECK(eps_21(u, u) == 0.0);
}

TEST_CASE("the closed form handles one-sided degenerate widths") {
    // b > 0, c = 0 decodes to a single min; the closed form must agree.
    Rng rng(13);
    for (int t = 0; t < 4000; ++t) {
        IntervalVec6 u = sample_vec6(rng);
        IntervalVec6 v = sample_vec6(rng);
        if (t % 2 == 0) u.c = 0.0;
        if (t % 3 == 0) v.b = 0.0;
        CHECK(eps_21(u, v) == eps_pq(decode_vec6(u), decode_vec6(v)));
    }
}

TEST_CASE("the radius matrix is laid out row-major with symmetric transpose") {
    Rng rng(17);
    const Domain A = sample_vec6_domain(rng, "a", 5);
    const Domain B = sample_vec6_domain(rng, "b", 7);
    const EpsilonMatrix em = epsilon_matrix(A, B);
    REQUIRE(em.rows == 5);
    REQUIRE(em.cols == 7);
    const EpsilonMatrix emt = epsilon_matrix(B, A);
    for (std::size_t r = 0; r < em.rows; ++r)
        for (std::size_t s = 0; s < em.cols; ++s) CHECK(em.at(r, s) == emt.at(s, r));

    const EpsilonMatrix self = epsilon_matrix(A, A);
    for (std::size_t r = 0; r < self.rows; ++r) CHECK(self.at(r, r) == 0.0);
}

TEST_CASE("the radius matrix is identical under any worker count") {
    Rng rng(19);
    const Domain A = sample_vec6_domain(rng, "a", 6);
    const Domain B = sample_vec6_domain(rng, "b", 9);
    const EpsilonMatrix one = epsilon_matrix(A, B, 1);
    const EpsilonMatrix four = epsilon_matrix(A, B, 4);
    CHECK(one.eps == four.eps);
}

TEST_CASE("the matrix falls back to the generator formula for general shapes") {
    Rng rng(23);
    const Domain A = sample_pq_domain(rng, "a", 3);
    const Domain B = sample_pq_domain(rng, "b", 4);
    const EpsilonMatrix em = epsilon_matrix(A, B);
    for (std::size_t r = 0; r < em.rows; ++r)
        for (std::size_t s = 0; s < em.cols; ++s)
            CHECK(em.at(r, s) == eps_pq(A.intervals[r], B.intervals[s]));
}

TEST_CASE("domain distance on singletons reduces to the pairwise radius") {
    const Domain A = make_domain("a", {make_interval({{0, 0}}, {{0.5, 0.5}})});
    const Domain B = make_domain("b", {make_interval({{0, 0}}, {{1, 1}})});
    CHECK(dhat(A, B) == 0.5);
    CHECK(dhat(A, A) == 0.0);
}

TEST_CASE("domain distance is a pseudometric on samples") {
    Rng rng(29);
    for (int t = 0; t < 1000; ++t) {
        const Domain A = sample_vec6_domain(rng, "a", 1 + t % 4);
        const Domain B = sample_vec6_domain(rng, "b", 1 + (t + 1) % 4);
        const Domain C = sample_vec6_domain(rng, "c", 1 + (t + 2) % 4);
        const double ab = dhat(A, B);
        CHECK(ab == dhat(B, A));
        CHECK(dhat(A, A) == 0.0);
        CHECK(dhat(A, C) <= ab + dhat(B, C) + 1e-9);
    }
}

TEST_CASE("domain distance ignores duplicated intervals") {
    Rng rng(31);
    const Domain A = sample_vec6_domain(rng, "a", 4);
    std::vector<IntervalVec6> doubled = A.vecs;
    doubled.insert(doubled.end(), A.vecs.begin(), A.vecs.end());
    const Domain AA = make_domain_from_vecs("aa", doubled);
    const Domain B = sample_vec6_domain(rng, "b", 3);
    CHECK(dhat(A, B) == dhat(AA, B));
    CHECK(dhat(A, AA) == 0.0);
}

TEST_CASE("closed-form radius obeys the two-lipschitz bound in the embedding") {
    Rng rng(37);
    for (int t = 0; t < 10000; ++t) {
        const IntervalVec6 u = sample_vec6(rng);
        const IntervalVec6 v = sample_vec6(rng);
        const double gap = std::max({std::fabs(u.x - v.x), std::fabs(u.y - v.y), std::fabs(u.a - v.a),
                                     std::fabs(u.b - v.b), std::fabs(u.c - v.c), std::fabs(u.d - v.d)});
        CHECK(eps_21(u, v) <= 2.0 * gap + 1e-12);
    }
}
