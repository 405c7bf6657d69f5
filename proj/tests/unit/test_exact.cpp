#include <doctest.h>

#include <cmath>
#include <random>

#include "seglab/exact.hpp"
#include "seglab/energy.hpp"
#include "seglab/geometry.hpp"

using namespace seglab;

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
}

TEST_SUITE("exact") {

TEST_CASE("psi pointwise values") {
    auto p0 = psi(0.0);
    CHECK(p0[0] == 0.0);
    CHECK(std::abs(p0[1]) <= 1e-15);
    CHECK(p0[2] == doctest::Approx(1.0).epsilon(1e-14));

    auto p1 = psi(kPi / 3.0);  // overlap of components 1 and 3
    CHECK(p1[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(p1[1] == 0.0);
    CHECK(p1[2] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));

    auto p2 = psi(2.0 * kPi / 3.0);
    CHECK(p2[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(p2[1]) <= 1e-15);
    CHECK(std::abs(p2[2]) <= 1e-15);

    auto p3 = psi(kPi);
    CHECK(p3[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(p3[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(p3[2] == 0.0);
}

TEST_CASE("psi is nonnegative with vanishing triple product") {
    for (int k = 0; k < 20000; ++k) {
        double th = 2.0 * kPi * k / 20000.0;
        auto p = psi(th);
        CHECK(p[0] >= 0.0);
        CHECK(p[1] >= 0.0);
        CHECK(p[2] >= 0.0);
        CHECK(p[0] * p[1] * p[2] <= 1e-15);
    }
}

TEST_CASE("closed-form energies") {
    CHECK(exact_total_energy() == doctest::Approx(1.5 * kPi).epsilon(1e-15));
    for (double r : {0.25, 0.5, 1.0}) {
        ExactFrequency v = exact_frequency_values(r);
        double s = std::pow(r, 1.5);
        CHECK(v.E == doctest::Approx(1.5 * kPi * s).epsilon(1e-14));
        CHECK(v.H == doctest::Approx(2.0 * kPi * s).epsilon(1e-14));
        CHECK(v.N == doctest::Approx(0.75).epsilon(1e-14));
    }
    // frozen spot values
    CHECK(exact_frequency_values(0.5).E == doctest::Approx(1.666081101809387).epsilon(1e-14));
    CHECK(exact_frequency_values(0.5).H == doctest::Approx(2.221441469079183).epsilon(1e-14));
}

TEST_CASE("sampled minimizer matches the oracle sums") {
    // frozen against tests/oracles/grid_oracle.py (summation-order slack)
    Grid g64 = build_grid(DomainKind::Disc, 64);
    CHECK(dirichlet_energy(g64, exact_minimizer(g64)) ==
          doctest::Approx(4.6793321449559375).epsilon(1e-10));
    Grid g256 = build_grid(DomainKind::Disc, 256);
    CHECK(dirichlet_energy(g256, exact_minimizer(g256)) ==
          doctest::Approx(4.7046772617798895).epsilon(1e-10));
}

TEST_CASE("sampled minimizer is homogeneous of degree 3/4") {
    Grid g = build_grid(DomainKind::Disc, 96);
    Field3 f = exact_minimizer(g);
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> pick(0, g.n - 1);
    int checked = 0;
    while (checked < 500) {
        int i = pick(rng), j = pick(rng);
        if (g.at(i, j) == CellClass::Exterior) continue;
        double x = g.cx(i), y = g.cy(j);
        double r = std::hypot(x, y);
        auto p = psi(std::atan2(y, x));
        for (int c = 0; c < 3; ++c)
            CHECK(f.at(c, i, j, g) ==
                  doctest::Approx(std::pow(r, 0.75) * p[c]).epsilon(1e-13));
        ++checked;
    }
}

TEST_CASE("angular supports and admissible homogeneity") {
    AngularSupport s = psi_support();
    for (int c = 0; c < 3; ++c) {
        REQUIRE(!s.arcs[c].empty());
        double len = 0.0;
        for (const auto& arc : s.arcs[c]) {
            double l = arc.b - arc.a;
            if (l < 0) l += 2.0 * kPi;
            len += l;
        }
        CHECK(len == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-14));
    }
    auto conn = connected_positivity(s);
    CHECK(conn[0]);
    CHECK(conn[1]);
    CHECK(conn[2]);
    CHECK(min_homogeneity(s) == 0.75);  // exact, not approximate
}

TEST_CASE("disconnected supports force degree 1") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> len(0.1, 0.6);
    for (int trial = 0; trial < 50; ++trial) {
        // four disjoint arcs around the circle, component 0 split in two
        double gap = 0.05;
        double a = 0.0;
        AngularSupport s;
        int owner[4] = {0, 1, 0, 2};
        for (int k = 0; k < 4; ++k) {
            double l = len(rng);
            s.arcs[owner[k]].push_back({a, a + l});
            a += l + gap;
        }
        REQUIRE(a < 2.0 * kPi);
        CHECK(min_homogeneity(s) == 1.0);
    }
}

TEST_CASE("degenerate supports are rejected") {
    AngularSupport whole;
    whole.arcs[0].push_back({0.0, 2.0 * kPi});
    whole.arcs[1].push_back({0.0, 1.0});
    whole.arcs[2].push_back({2.0, 3.0});
    CHECK_THROWS(min_homogeneity(whole));

    AngularSupport empty;
    empty.arcs[0].push_back({0.0, 1.0});
    empty.arcs[1].push_back({2.0, 3.0});
    CHECK_THROWS(min_homogeneity(empty));

    AngularSupport overlap;  // all three positive near theta = 0.5
    overlap.arcs[0].push_back({0.0, 1.0});
    overlap.arcs[1].push_back({0.2, 1.2});
    overlap.arcs[2].push_back({0.4, 1.4});
    CHECK_THROWS(min_homogeneity(overlap));
}

}  // TEST_SUITE
