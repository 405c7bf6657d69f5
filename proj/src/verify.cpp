#include "seglab/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "seglab/energy.hpp"
#include "seglab/exact.hpp"
#include "seglab/frequency.hpp"
#include "seglab/geometry.hpp"
#include "seglab/nodal.hpp"
#include "seglab/solver.hpp"

namespace seglab {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

double now_seconds() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0,
                double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
    return buf;
}

double angle_gap(double a, double b) {
    double d = std::fabs(a - b);
    while (d > kPi) d = std::fabs(d - 2.0 * kPi);
    return d;
}

struct SharedSolve {
    Grid grid;
    std::vector<SolveReport> ladder;
    Field3 segregated;  // hard-constraint polish of the final ladder iterate
    std::array<double, 2> triple{0.0, 0.0};
    bool tripleFound = false;
};

SharedSolve run_shared_solve(int n) {
    SharedSolve s;
    s.grid = build_grid(DomainKind::Disc, n);
    BoundaryData bd = sample_boundary(s.grid, Trace::tr_mer());
    SolverConfig cfg;  // defaults: ladder to 1e6, tol 1e-9, max 20000 sweeps
    s.ladder = sweep_beta(s.grid, bd, cfg);
    // The final ladder iterate is only epsilon-feasible: the penalty smooths
    // the junction over a core of radius ~beta^(-1/5) where all three
    // components stay of size ~beta^(-3/20) (about 0.10 at beta=1e6), so no
    // small-threshold classification can see the junction on it. Nodal and
    // partition structure is therefore read off the segregated representative:
    // the exactly feasible field obtained by continuing the same minimization
    // in hard-constraint mode from that iterate.
    s.segregated =
        solve_hard_constraint(s.grid, bd, cfg, s.ladder.back().field).field;
    // Cells nearest a junction sit at distance h/sqrt(2), where a degree-3/4
    // profile reaches ~0.77 h^(3/4), a hair under holder_tau = 0.8 h^(3/4).
    // Analytic samples squeak under that knife edge; a solved field's one-cell
    // wobble does not, so detection on solves gets twice the headroom.
    auto triples =
        detect_triple_points(s.grid, s.segregated, 2.0 * holder_tau(s.grid));
    for (const auto& tp : triples)
        if (std::hypot(tp.x, tp.y) <= 0.05) {
            s.triple = {tp.x, tp.y};
            s.tripleFound = true;
            break;
        }
    return s;
}

}  // namespace

std::vector<CriterionResult> run_verification(const std::string& level) {
    if (level != "full" && level != "quick")
        throw std::invalid_argument("run_verification: level must be 'full' or 'quick'");
    const bool full = level == "full";
    const int nBig = full ? 256 : 128;         // exact-field criteria
    const int nSolve = full ? 128 : 64;        // shared minimization run
    const std::vector<int> refineLadder = full ? std::vector<int>{64, 128, 256}
                                               : std::vector<int>{32, 64, 128};
    std::vector<CriterionResult> rs;
    const double c8 = exact_total_energy();  // 3 pi / 2

    // 1: energy of the sampled homogeneous triple
    {
        double t0 = now_seconds();
        CriterionResult r;
        r.id = 1;
        r.name = "exact-energy";
        Grid g = build_grid(DomainKind::Disc, nBig);
        Field3 f = exact_minimizer(g);
        double e = dirichlet_energy(g, f);
        double rel = std::fabs(e - c8) / c8;
        r.pass = rel <= 0.01;
        r.details = fmt("dirichlet=%.9f target=%.9f rel=%.3e (tol 1e-2)", e, c8, rel);
        r.seconds = now_seconds() - t0;
        rs.push_back(std::move(r));
    }

    // 2: frequency of the sampled triple stays at 3/4
    {
        double t0 = now_seconds();
        CriterionResult r;
        r.id = 2;
        r.name = "constant-frequency";
        Grid g = build_grid(DomainKind::Disc, nBig);
        Field3 f = exact_minimizer(g);
        auto p = frequency_profile(g, f, {0.0, 0.0}, 0.1, 0.8, 14);
        double worst = 0.0;
        for (double nval : p.N) worst = std::max(worst, std::fabs(nval - 0.75));
        r.pass = worst <= 0.02;
        r.details = fmt("max |N-0.75| = %.4f over r in [0.1,0.8] (tol 0.02)", worst);
        r.seconds = now_seconds() - t0;
        rs.push_back(std::move(r));
    }

    // 3: sphere identity residual shrinks under refinement
    {
        double t0 = now_seconds();
        CriterionResult r;
        r.id = 3;
        r.name = "sphere-identity";
        std::vector<double> res;
        for (int n : refineLadder) {
            Grid g = build_grid(DomainKind::Disc, n);
            Field3 f = exact_minimizer(g);
            res.push_back(pohozaev_residual(g, f, {0.0, 0.0}, 0.5, 2880));
        }
        bool dec = true;
        for (std::size_t k = 0; k + 1 < res.size(); ++k)
            if (!(res[k + 1] < res[k])) dec = false;
        r.pass = res.back() <= 0.02 && dec;
        r.details = fmt("residuals %.3e / %.3e / %.3e (last <= 2e-2, strictly decreasing)",
                        res[0], res[1], res[2]);
        r.seconds = now_seconds() - t0;
        rs.push_back(std::move(r));
    }

    // shared penalized minimization for criteria 4..7 and 10
    double tSolve0 = now_seconds();
    SharedSolve shared = run_shared_solve(nSolve);
    double tSolve = now_seconds() - tSolve0;
    const Grid& gs = shared.grid;
    const Field3& fs = shared.segregated;

    // 4: the penalty ladder reproduces the segregated energy
    {
        CriterionResult r;
        r.id = 4;
        r.name = "penalized-minimization";
        double e = shared.ladder.back().energyHistory.back().total;
        double rel = std::fabs(e - c8) / c8;
        double first = shared.ladder.front().penaltyResidual;
        double last = shared.ladder.back().penaltyResidual;
        double drop = last > 0 ? first / last : std::numeric_limits<double>::infinity();
        r.pass = rel <= 0.03 && drop >= 100.0;
        r.details = fmt("energy=%.6f rel=%.3e (tol 3e-2), penalty drop %.1fx (need 100x)",
                        e, rel, drop);
        r.seconds = tSolve;
        rs.push_back(std::move(r));
    }

    // 5: one triple point near the origin, three interfaces at 120 degrees,
    //    no loops
    {
        double t0 = now_seconds();
        CriterionResult r;
        r.id = 5;
        r.name = "triple-point-geometry";
        auto triples = detect_triple_points(gs, fs, 2.0 * holder_tau(gs));
        int nearOrigin = 0;
        for (const auto& tp : triples)
            if (std::hypot(tp.x, tp.y) <= 0.05) ++nearOrigin;
        auto interfaces = extract_interfaces(gs, fs, kDefaultTau);
        // one dominant polyline per component pair
        std::array<const Polyline*, 3> main{nullptr, nullptr, nullptr};
        for (const auto& pl : interfaces) {
            int pair = pl.ci == 0 ? (pl.cj == 1 ? 0 : 1) : 2;
            if (!main[pair] || pl.pts.size() > main[pair]->pts.size()) main[pair] = &pl;
        }
        bool anglesOk = main[0] && main[1] && main[2];
        double worstGap = 0.0;
        if (anglesOk) {
            std::array<double, 3> dir;
            for (int p = 0; p < 3; ++p) {
                dir[p] = interface_direction(*main[p], shared.triple, 0.1, 0.4);
                if (std::isnan(dir[p])) anglesOk = false;
            }
            if (anglesOk)
                for (int p = 0; p < 3 && anglesOk; ++p) {
                    double gap = angle_gap(dir[p], dir[(p + 1) % 3]);
                    worstGap = std::max(worstGap, std::fabs(gap - 2.0 * kPi / 3.0));
                }
            anglesOk = anglesOk && worstGap <= 5.0 * kPi / 180.0;
        }
        int loops = count_loops(gs, interfaces);
        r.pass = shared.tripleFound && nearOrigin == 1 && anglesOk && loops == 0;
        r.details = fmt("clusters near 0: %.0f, angle dev %.2f deg (tol 5), loops %.0f",
                        static_cast<double>(nearOrigin), worstGap * 180.0 / kPi,
                        static_cast<double>(loops));
        r.seconds = now_seconds() - t0;
        rs.push_back(std::move(r));
    }

    // 6: growth exponent at the triple point
    {
        double t0 = now_seconds();
        CriterionResult r;
        r.id = 6;
        r.name = "homogeneity-exponent";
        if (shared.tripleFound) {
            // Fit window: circles of radius under ~12h carry too few cells for
            // the frequency quadrature (the sampled analytic field keeps gamma
            // at 0.7500 on [0.3,0.7] while dipping below 0.73 at smaller
            // radii), so the fit stays on the resolved side of the junction.
            auto p = frequency_profile(gs, fs, shared.triple, 0.3, 0.7, 16);
            auto fit = estimate_exponent(p);
            r.pass = fit.gamma >= 0.73 && fit.gamma <= 0.80;
            r.details = fmt("gamma=%.4f (window [0.73,0.80]), R^2=%.5f", fit.gamma, fit.r2);
        } else {
            r.details = "no triple point to probe";
        }
        r.seconds = now_seconds() - t0;
        rs.push_back(std::move(r));
    }

    // 7: frequency monotone at five probes; tiny at double points
    {
        double t0 = now_seconds();
        CriterionResult r;
        r.id = 7;
        r.name = "frequency-monotonicity";
        double rmin = std::max(3.0 * gs.h, 0.05);
        struct Probe {
            std::array<double, 2> x;
            bool isDouble;
            bool isTriple;
        };
        std::vector<Probe> probes = {
            {shared.triple, false, true},
            {{0.5, 0.0}, true, false},
            {{0.5 * std::cos(2.0 * kPi / 3.0), 0.5 * std::sin(2.0 * kPi / 3.0)}, true, false},
            {{0.5 * std::cos(kPi / 3.0), 0.5 * std::sin(kPi / 3.0)}, false, false},
            {{-0.5, 0.0}, false, false},
        };
        bool allMono = true, doublesSmall = true;
        double worstDrop = 0.0, worstSmall = 0.0;
        for (const auto& pb : probes) {
            // The junction probe uses the same resolved window as the exponent
            // fit; elsewhere the field is smooth at the cell scale and the
            // profile can start right outside the quadrature floor, which is
            // what the vanishing-frequency check at double points needs.
            auto p = pb.isTriple
                         ? frequency_profile(gs, fs, pb.x, 0.3, 0.7, 12)
                         : frequency_profile(gs, fs, pb.x, rmin, 0.4, 12);
            auto mono = check_monotone(p, 0.02);
            if (!mono.ok) allMono = false;
            worstDrop = std::min(worstDrop, mono.worstDrop);
            if (pb.isDouble) {
                worstSmall = std::max(worstSmall, p.N.front());
                if (p.N.front() >= 0.1) doublesSmall = false;
            }
        }
        r.pass = shared.tripleFound && allMono && doublesSmall;
        r.details = fmt("worst drop %.4f (slack 0.02), N(rmin) at doubles <= %.4f (need < 0.1)",
                        worstDrop, worstSmall);
        r.seconds = now_seconds() - t0;
        rs.push_back(std::move(r));
    }

    // 8: analytic gradient against central differences
    {
        double t0 = now_seconds();
        CriterionResult r;
        r.id = 8;
        r.name = "gradient-check";
        Grid g = build_grid(DomainKind::Disc, 32);
        std::mt19937_64 rng(12345);
        std::uniform_real_distribution<double> val(0.1, 1.1);
        std::normal_distribution<double> dirn(0.0, 1.0);
        double worst = 0.0;
        const double eps = 1e-6;
        for (double beta : {0.0, 10.0, 1e4}) {
            for (int fields = 0; fields < 3; ++fields) {
                Field3 f = Field3::zeros(g);
                for (int c = 0; c < 3; ++c)
                    for (std::size_t k = 0; k < g.cls.size(); ++k)
                        if (g.cls[k] != CellClass::Exterior) f.u[c][k] = val(rng);
                Field3 gr = gradient(g, f, beta);
                for (int trial = 0; trial < 20; ++trial) {
                    Field3 d = Field3::zeros(g);
                    double norm = 0.0;
                    for (int c = 0; c < 3; ++c)
                        for (std::size_t k = 0; k < g.cls.size(); ++k)
                            if (g.cls[k] == CellClass::Interior) {
                                d.u[c][k] = dirn(rng);
                                norm += d.u[c][k] * d.u[c][k];
                            }
                    norm = std::sqrt(norm);
                    double analytic = 0.0;
                    Field3 fp = f, fm = f;
                    for (int c = 0; c < 3; ++c)
                        for (std::size_t k = 0; k < g.cls.size(); ++k) {
                            double dd = d.u[c][k] / norm;
                            analytic += gr.u[c][k] * dd;
                            fp.u[c][k] += eps * dd;
                            fm.u[c][k] -= eps * dd;
                        }
                    double fd = (j_beta(g, fp, beta).total - j_beta(g, fm, beta).total) /
                                (2.0 * eps);
                    double rel = std::fabs(fd - analytic) /
                                 std::max({std::fabs(fd), std::fabs(analytic), 1e-12});
                    worst = std::max(worst, rel);
                }
            }
        }
        r.pass = worst <= 1e-4;
        r.details = fmt("max relative error %.3e over 180 probes (tol 1e-4)", worst);
        r.seconds = now_seconds() - t0;
        rs.push_back(std::move(r));
    }

    // 9: angular counting gives exactly 3/4 or 1
    {
        double t0 = now_seconds();
        CriterionResult r;
        r.id = 9;
        r.name = "angular-counting";
        double nu0 = min_homogeneity(psi_support());
        bool ok = nu0 == 0.75;
        std::mt19937_64 rng(777);
        std::uniform_real_distribution<double> len(0.1, 0.6);
        int checked = 0;
        for (int trial = 0; trial < 50 && ok; ++trial) {
            // one component split in two, laid out on disjoint arcs
            AngularSupport s;
            double cursor = 0.0;
            auto place = [&](int comp) {
                double l = len(rng);
                s.arcs[comp].push_back({cursor, cursor + l});
                cursor += l + 0.05;
            };
            place(0);
            place(1);
            place(0);
            place(2);
            double nu = min_homogeneity(s);
            ok = nu == 1.0;
            ++checked;
        }
        r.pass = ok;
        r.details = fmt("connected nu=%.2f (want 0.75), %.0f disconnected cases all nu=1",
                        nu0, static_cast<double>(checked));
        r.seconds = now_seconds() - t0;
        rs.push_back(std::move(r));
    }

    // 10: partition structure of both fields
    {
        double t0 = now_seconds();
        CriterionResult r;
        r.id = 10;
        r.name = "partition-checks";
        Grid g = build_grid(DomainKind::Disc, nSolve);
        Field3 fe = exact_minimizer(g);
        auto pe = check_partition(g, fe, kDefaultTau);
        auto ps = check_partition(gs, fs, kDefaultTau);
        r.pass = pe.partitionOk && pe.zeroSetClosureOk && ps.partitionOk &&
                 ps.zeroSetClosureOk;
        r.details = fmt("exact: partition %.0f closure %.0f; solve: partition %.0f closure %.0f",
                        static_cast<double>(pe.partitionOk),
                        static_cast<double>(pe.zeroSetClosureOk),
                        static_cast<double>(ps.partitionOk),
                        static_cast<double>(ps.zeroSetClosureOk));
        r.seconds = now_seconds() - t0;
        rs.push_back(std::move(r));
    }

    return rs;
}

std::string verification_json(const std::vector<CriterionResult>& rs) {
    nlohmann::json out;
    out["criteria"] = nlohmann::json::array();
    bool all = true;
    for (const auto& r : rs) {
        out["criteria"].push_back({{"id", r.id},
                                   {"name", r.name},
                                   {"pass", r.pass},
                                   {"details", r.details},
                                   {"seconds", r.seconds}});
        all = all && r.pass;
    }
    out["pass"] = all;
    return out.dump(2) + "\n";
}

}  // namespace seglab
