#include <doctest.h>

#include <cmath>
#include <random>

#include "seglab/energy.hpp"
#include "seglab/geometry.hpp"

using namespace seglab;

namespace {

// fills every non-EXTERIOR cell from fn(x, y)
Field3 fill(const Grid& g, int comp, double (*fn)(double, double)) {
    Field3 f = Field3::zeros(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            if (g.at(i, j) != CellClass::Exterior) f.at(comp, i, j, g) = fn(g.cx(i), g.cy(j));
    return f;
}

double affine(double x, double y) { return 1.0 + 2.0 * x + 3.0 * y; }
double saddle(double x, double y) { return 0.5 + x * y; }

// hand-built 8x8 disc mirroring tests/oracles/grid_oracle.py (build_grid
// itself starts at n=16); rows j = 0..7, 0 interior / 1 boundary / 2 exterior
Grid tiny_disc8() {
    const char* rows[8] = {
        "22222222", "22222222", "22211222", "22100122",
        "22100122", "22211222", "22222222", "22222222",
    };
    Grid g;
    g.kind = DomainKind::Disc;
    g.n = 8;
    g.h = 0.5;
    g.x0 = -1.0 - 1.5 * g.h;
    g.y0 = g.x0;
    g.cls.resize(64);
    for (int j = 0; j < 8; ++j)
        for (int i = 0; i < 8; ++i)
            g.cls[g.idx(i, j)] = static_cast<CellClass>(rows[j][i] - '0');
    return g;
}

Field3 random_field(const Grid& g, std::uint64_t seed) {
    Field3 f = Field3::zeros(g);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> val(0.1, 1.1);
    for (int c = 0; c < 3; ++c)
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i)
                if (g.at(i, j) != CellClass::Exterior) f.at(c, i, j, g) = val(rng);
    return f;
}

}  // namespace

TEST_SUITE("energy") {

TEST_CASE("frozen n=8 oracle values") {
    // frozen against tests/oracles/grid_oracle.py
    Grid g = tiny_disc8();
    Field3 f1 = fill(g, 0, affine);
    CHECK(dirichlet_energy(g, f1) == doctest::Approx(26.0).epsilon(1e-13));

    Field3 f3 = Field3::zeros(g);
    for (int c = 0; c < 3; ++c) {
        Field3 tmp = fill(g, 0, saddle);
        f3.u[c] = tmp.u[0];
    }
    CHECK(dirichlet_energy(g, f3) == doctest::Approx(2.25).epsilon(1e-13));
    CHECK(penalty_energy(g, f3, 2.0) == doctest::Approx(0.0386887788772583).epsilon(1e-12));
    Field3 grad = gradient(g, f3, 2.0);
    CHECK(grad.at(0, 4, 3, g) == doctest::Approx(0.016028404235839844).epsilon(1e-12));
}

TEST_CASE("breakdown adds up") {
    Grid g = build_grid(DomainKind::Disc, 32);
    Field3 f = random_field(g, 5);
    EnergyBreakdown e = j_beta(g, f, 12.5);
    CHECK(e.beta == 12.5);
    CHECK(e.dirichlet == dirichlet_energy(g, f));
    CHECK(e.penalty == penalty_energy(g, f, 12.5));
    CHECK(e.total == e.dirichlet + e.penalty);
    CHECK(penalty_energy(g, f, 0.0) == 0.0);
}

TEST_CASE("scaling laws") {
    Grid g = build_grid(DomainKind::Disc, 24);
    Field3 f = random_field(g, 17);
    double d0 = dirichlet_energy(g, f);
    double p0 = penalty_energy(g, f, 3.0);
    double lam = 1.7;
    Field3 s = f;
    for (int c = 0; c < 3; ++c)
        for (auto& v : s.u[c]) v *= lam;
    CHECK(dirichlet_energy(g, s) == doctest::Approx(lam * lam * d0).epsilon(1e-12));
    CHECK(penalty_energy(g, s, 3.0) == doctest::Approx(std::pow(lam, 6) * p0).epsilon(1e-12));
    CHECK(dirichlet_energy(g, Field3::zeros(g)) == 0.0);
}

TEST_CASE("gradient matches finite differences") {
    Grid g = build_grid(DomainKind::Disc, 16);
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> dir(0.0, 1.0);
    for (double beta : {0.0, 10.0, 1e4}) {
        Field3 f = random_field(g, 99);
        Field3 grad = gradient(g, f, beta);
        for (int rep = 0; rep < 10; ++rep) {
            // random interior direction, normalized
            Field3 d = Field3::zeros(g);
            double norm2 = 0.0;
            for (int c = 0; c < 3; ++c)
                for (int j = 0; j < g.n; ++j)
                    for (int i = 0; i < g.n; ++i)
                        if (g.interior(i, j)) {
                            double v = dir(rng);
                            d.at(c, i, j, g) = v;
                            norm2 += v * v;
                        }
            double scale = 1.0 / std::sqrt(norm2);
            double dot = 0.0;
            Field3 fp = f, fm = f;
            const double eps = 1e-6;
            for (int c = 0; c < 3; ++c)
                for (std::size_t k = 0; k < d.u[c].size(); ++k) {
                    double step = d.u[c][k] * scale;
                    dot += grad.u[c][k] * step;
                    fp.u[c][k] += eps * step;
                    fm.u[c][k] -= eps * step;
                }
            double fd = (j_beta(g, fp, beta).total - j_beta(g, fm, beta).total) / (2.0 * eps);
            CAPTURE(beta);
            CHECK(std::abs(fd - dot) <= 1e-4 * std::max({std::abs(fd), std::abs(dot), 1e-12}));
        }
    }
}

TEST_CASE("gradient vanishes off the interior") {
    Grid g = build_grid(DomainKind::Disc, 20);
    Field3 f = random_field(g, 31);
    Field3 grad = gradient(g, f, 50.0);
    for (int c = 0; c < 3; ++c)
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i)
                if (!g.interior(i, j)) CHECK(grad.at(c, i, j, g) == 0.0);
}

}  // TEST_SUITE
