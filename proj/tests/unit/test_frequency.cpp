#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "seglab/exact.hpp"
#include "seglab/frequency.hpp"
#include "seglab/geometry.hpp"

using namespace seglab;

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;

// r^gamma * (1 + 0.3 cos theta) in the first component
Field3 radial_power(const Grid& g, double gamma) {
    Field3 f = Field3::zeros(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            double x = g.cx(i), y = g.cy(j);
            double r = std::hypot(x, y);
            double ang = 1.0 + 0.3 * std::cos(std::atan2(y, x));
            f.at(0, i, j, g) = std::pow(r, gamma) * ang;
        }
    return f;
}
}  // namespace

TEST_SUITE("frequency") {

TEST_CASE("profile of the homogeneous triple stays at 3/4") {
    Grid g = build_grid(DomainKind::Disc, 128);
    Field3 f = exact_minimizer(g);
    // r_min = 0.2 keeps ~12 cells across the innermost circle at n = 128
    FrequencyProfile p = frequency_profile(g, f, {0.0, 0.0}, 0.2, 0.8, 12);
    REQUIRE(p.radii.size() == 13);
    for (double nk : p.N) CHECK(std::abs(nk - 0.75) <= 0.03);
    CHECK(check_monotone(p, 0.02).ok);

    DoublingReport db = check_doubling(p, 0.73, 0.77);
    CHECK(db.lowerOk);
    CHECK(db.upperOk);

    // H(r) ~ 2 pi r^{3/2}: the compensated ratio is flat to well under 1%
    double lo = 1e300, hi = 0.0;
    for (std::size_t k = 0; k < p.radii.size(); ++k) {
        double c = p.H[k] / std::pow(p.radii[k], 1.5);
        lo = std::min(lo, c);
        hi = std::max(hi, c);
        CHECK(c == doctest::Approx(2.0 * kPi).epsilon(0.01));
    }
    CHECK((hi - lo) / lo <= 0.01);

    ExponentFit fit = estimate_exponent(p);
    CHECK(std::abs(fit.gamma - 0.75) <= 0.01);
    CHECK(fit.r2 >= 0.9999);
}

TEST_CASE("frequency is scale invariant") {
    Grid g = build_grid(DomainKind::Disc, 64);
    Field3 f = exact_minimizer(g);
    FrequencyProfile p = frequency_profile(g, f, {0.0, 0.0}, 0.15, 0.6, 8);
    Field3 s = f;
    for (int c = 0; c < 3; ++c)
        for (auto& v : s.u[c]) v *= 7.3;
    FrequencyProfile q = frequency_profile(g, s, {0.0, 0.0}, 0.15, 0.6, 8);
    for (std::size_t k = 0; k < p.N.size(); ++k)
        CHECK(q.N[k] == doctest::Approx(p.N[k]).epsilon(1e-12));
}

TEST_CASE("exponent recovery on synthetic radial powers") {
    Grid g = build_grid(DomainKind::Reference, 129);
    for (double gamma : {0.5, 0.75, 1.0, 1.5}) {
        Field3 f = radial_power(g, gamma);
        FrequencyProfile p = frequency_profile(g, f, {0.0, 0.0}, 0.2, 1.5, 10);
        ExponentFit fit = estimate_exponent(p);
        CAPTURE(gamma);
        CHECK(std::abs(fit.gamma - gamma) <= 0.02);
        CHECK(fit.r2 >= 0.999);
    }
}

TEST_CASE("sphere identity defect shrinks under refinement") {
    // frozen regression values, r = 0.5, 2880 samples
    const struct {
        int n;
        double res;
    } rows[] = {
        {64, 0.0074689403382915895},
        {128, 0.0034254394189845465},
        {256, 0.0010656790024076738},
    };
    double prev = 1e300;
    for (const auto& row : rows) {
        Grid g = build_grid(DomainKind::Disc, row.n);
        Field3 f = exact_minimizer(g);
        double res = pohozaev_residual(g, f, {0.0, 0.0}, 0.5, 2880);
        CAPTURE(row.n);
        CHECK(res == doctest::Approx(row.res).epsilon(1e-9));
        CHECK(res <= 0.02);
        CHECK(res < prev);
        prev = res;
    }
}

TEST_CASE("circle quadrature reproduces the closed-form boundary mass") {
    Grid g = build_grid(DomainKind::Disc, 256);
    Field3 f = exact_minimizer(g);
    for (double r : {0.3, 0.5, 0.7}) {
        CircleQuadrature q = circle_quadrature(g, f, {0.0, 0.0}, r);
        CHECK(q.sumSquares ==
              doctest::Approx(2.0 * kPi * std::pow(r, 1.5)).epsilon(2e-3));
    }
    CHECK_THROWS(circle_quadrature(g, f, {0.0, 0.0}, 1.5));    // leaves the disc
    CHECK_THROWS(circle_quadrature(g, f, {0.0, 0.0}, g.h / 2));  // under-resolved
}

TEST_CASE("blow-up is normalized and keeps the profile") {
    Grid g = build_grid(DomainKind::Disc, 128);
    Field3 f = exact_minimizer(g);
    auto [rg, rf] = blow_up(g, f, {0.0, 0.0}, 0.3);
    CHECK(rg.kind == DomainKind::Reference);
    CircleQuadrature q = circle_quadrature(rg, rf, {0.0, 0.0}, 1.0);
    CHECK(q.sumSquares == doctest::Approx(1.0).epsilon(1e-10));
    // shape: (2 pi)^{-1/2} times the homogeneous triple on the unit ball
    double scale = 1.0 / std::sqrt(2.0 * kPi);
    double worst = 0.0;
    for (int j = 0; j < rg.n; ++j)
        for (int i = 0; i < rg.n; ++i) {
            double x = rg.cx(i), y = rg.cy(j);
            double r = std::hypot(x, y);
            if (r > 1.2) continue;
            auto p = psi(std::atan2(y, x));
            for (int c = 0; c < 3; ++c)
                worst = std::max(worst, std::abs(rf.at(c, i, j, rg) -
                                                 scale * std::pow(r, 0.75) * p[c]));
        }
    CHECK(worst <= 0.02);
    CHECK_THROWS(blow_up(g, f, {0.0, 0.0}, -0.1));
    CHECK_THROWS(blow_up(g, f, {0.9, 0.0}, 0.5));  // B_{2 rho} leaves the disc
}

TEST_CASE("monotonicity flags a decreasing profile") {
    FrequencyProfile p;
    p.radii = {0.1, 0.2, 0.4};
    p.E = {1.0, 1.0, 1.0};
    p.H = {1.0, 2.0, 8.0};
    p.N = {0.9, 0.8, 0.75};  // drops by 0.1 then 0.05
    MonotoneReport m = check_monotone(p, 0.02);
    CHECK(!m.ok);
    CHECK(m.worstDrop == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(m.worstIndex == 0);
    CHECK(check_monotone(p, 0.2).ok);
}

TEST_CASE("doubling rejects inconsistent exponent windows") {
    Grid g = build_grid(DomainKind::Disc, 64);
    Field3 f = exact_minimizer(g);
    FrequencyProfile p = frequency_profile(g, f, {0.0, 0.0}, 0.15, 0.6, 8);
    CHECK_THROWS(check_doubling(p, 0.9, 0.95));  // alphaLow above N(r_0)
}

TEST_CASE("exponent fit needs at least two radii") {
    FrequencyProfile p;
    p.radii = {0.5};
    p.E = {1.0};
    p.H = {1.0};
    p.N = {1.0};
    CHECK_THROWS(estimate_exponent(p));
}

TEST_CASE("profile rejects out-of-domain ladders") {
    Grid g = build_grid(DomainKind::Disc, 64);
    Field3 f = exact_minimizer(g);
    CHECK_THROWS(frequency_profile(g, f, {0.0, 0.0}, 0.1, 1.2, 8));
    CHECK_THROWS(frequency_profile(g, f, {0.0, 0.0}, 0.3, 0.1, 8));   // reversed
    CHECK_THROWS(frequency_profile(g, f, {0.0, 0.0}, 0.1, 0.8, 2));   // K too small
    CHECK_THROWS(frequency_profile(g, Field3::zeros(g), {0.0, 0.0}, 0.1, 0.8, 8));
}

}  // TEST_SUITE
