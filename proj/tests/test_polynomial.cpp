#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "tippetop/polynomial.hpp"

using namespace tippetop;

namespace {

// q(z) = 2ab z^3 + 3(a^2+b^2) z^2 + 6ab z + a^2 + b^2
RealPolynomial convexity_q(double a, double b) {
    return RealPolynomial{{a * a + b * b, 6.0 * a * b, 3.0 * (a * a + b * b), 2.0 * a * b}};
}

} // namespace

TEST_CASE("Sturm chain of the convexity cubic matches the hand computation") {
    for (auto [a, b] : {std::pair{1.0, 2.0}, std::pair{2.0, 0.5}, std::pair{1.0, -2.0}}) {
        const auto seq = sturm_sequence(convexity_q(a, b));
        REQUIRE(seq.size() == 4);
        const double ab = a * b;
        const double d2 = (a - b) * (a - b);
        const double s2 = (a * a - b * b) * (a * a - b * b);
        CHECK(seq[0](-1.0) == Catch::Approx(4.0 * d2).epsilon(1e-10));
        CHECK(seq[1](-1.0) == Catch::Approx(-6.0 * d2).epsilon(1e-10));
        CHECK(seq[2](-1.0) == Catch::Approx(-s2 / ab).epsilon(1e-10));
        CHECK(seq[3](-1.0) == Catch::Approx(-6.0 * ab).epsilon(1e-10));
        CHECK(count_roots(convexity_q(a, b), -1.0, 1.0) == 0);
    }
}

TEST_CASE("Sturm chain of z^2 - 1/4") {
    const auto seq = sturm_sequence(RealPolynomial{{-0.25, 0.0, 1.0}});
    REQUIRE(seq.size() == 3);
    CHECK(seq[1].c == std::vector<double>{0.0, 2.0});
    REQUIRE(seq[2].degree() == 0);
    CHECK(seq[2].c[0] == Catch::Approx(0.25).epsilon(1e-14));
    CHECK(count_roots(RealPolynomial{{-0.25, 0.0, 1.0}}, -1.0, 1.0) == 2);
}

TEST_CASE("Sturm chain of 3z^2 + 1 ends in a negative constant") {
    const auto seq = sturm_sequence(RealPolynomial{{1.0, 0.0, 3.0}});
    REQUIRE(seq.size() == 3);
    REQUIRE(seq[2].degree() == 0);
    CHECK(seq[2].c[0] < 0.0);
    CHECK(count_roots(RealPolynomial{{1.0, 0.0, 3.0}}, -10.0, 10.0) == 0);
}

TEST_CASE("half-open boundary semantics of count_roots") {
    const RealPolynomial line{{-0.5, 1.0}};  // z - 0.5
    CHECK(count_roots(line, 0.5, 1.0) == 0);
    CHECK(count_roots(line, 0.4, 0.5) == 1);
}

TEST_CASE("repeated roots are rejected") {
    // (z - 1)^2
    CHECK_THROWS_AS(sturm_sequence(RealPolynomial{{1.0, -2.0, 1.0}}), NotSquareFree);
    CHECK_THROWS_AS(count_roots(RealPolynomial{{1.0, -2.0, 1.0}}, 0.0, 2.0), NotSquareFree);
}

TEST_CASE("count_roots agrees with constructed roots") {
    std::mt19937_64 gen(7);
    const auto uni = [&](double a, double b) {
        return a + (b - a) * ((gen() >> 11) * 0x1.0p-53);
    };
    for (int trial = 0; trial < 200; ++trial) {
        const int degree = 1 + static_cast<int>(gen() % 6);
        const int pairs = static_cast<int>(gen() % (degree / 2 + 1));
        const int nreal = degree - 2 * pairs;
        std::vector<double> roots;
        RealPolynomial q{{uni(0.5, 2.0) * (gen() % 2 ? 1.0 : -1.0)}};
        while (static_cast<int>(roots.size()) < nreal) {
            const double r = uni(-2.0, 2.0);
            bool ok = true;
            for (double other : roots)
                if (std::abs(r - other) < 0.05) ok = false;
            if (ok) roots.push_back(r);
        }
        for (double r : roots) {
            RealPolynomial next{std::vector<double>(q.c.size() + 1, 0.0)};
            for (std::size_t k = 0; k < q.c.size(); ++k) {
                next.c[k] -= r * q.c[k];
                next.c[k + 1] += q.c[k];
            }
            q = next;
        }
        for (int pr = 0; pr < pairs; ++pr) {
            const double re = uni(-2.0, 2.0), im = uni(0.2, 2.0);
            const std::vector<double> factor{re * re + im * im, -2.0 * re, 1.0};
            RealPolynomial next{std::vector<double>(q.c.size() + 2, 0.0)};
            for (std::size_t k = 0; k < q.c.size(); ++k)
                for (std::size_t j = 0; j < 3; ++j) next.c[k + j] += q.c[k] * factor[j];
            q = next;
        }
        double c, d;
        for (;;) {
            c = uni(-2.5, 2.0);
            d = c + uni(0.1, 2.0);
            bool clear = true;
            for (double r : roots)
                if (std::abs(r - c) < 1e-3 || std::abs(r - d) < 1e-3) clear = false;
            if (clear) break;
        }
        int expected = 0;
        for (double r : roots)
            if (r > c && r <= d) ++expected;
        CHECK(count_roots(q, c, d) == expected);
    }
}
