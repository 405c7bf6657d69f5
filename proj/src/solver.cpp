#include "seglab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "seglab/util.hpp"

namespace seglab {

namespace {

constexpr double kAcceptSlack = 1e-12;  // energy may not grow past this per sweep
constexpr double kOmegaFloor = 1e-8;

void validate(const Grid& g, const BoundaryData& bd, const SolverConfig& cfg) {
    if (cfg.maxSweeps < 1) throw std::invalid_argument("solver: maxSweeps must be >= 1");
    if (!(cfg.tol > 0)) throw std::invalid_argument("solver: tol must be positive");
    if (!(cfg.damping > 0) || cfg.damping > 1.0)
        throw std::invalid_argument("solver: damping must lie in (0, 1]");
    for (const auto& comp : bd.values) {
        if (comp.size() != g.cls.size())
            throw std::invalid_argument("solver: boundary data size mismatch");
        for (std::size_t k = 0; k < comp.size(); ++k)
            if (g.cls[k] == CellClass::Boundary && !std::isfinite(comp[k]))
                throw std::invalid_argument("solver: non-finite boundary value");
    }
}

Field3 starting_field(const Grid& g, const BoundaryData& bd,
                      const std::optional<Field3>& init) {
    if (init) {
        if (!init->finite()) throw std::invalid_argument("solver: non-finite warm start");
        Field3 f = *init;
        for (int c = 0; c < 3; ++c)
            for (std::size_t k = 0; k < g.cls.size(); ++k) {
                if (g.cls[k] == CellClass::Boundary)
                    f.u[c][k] = bd.values[c][k];
                else if (g.cls[k] == CellClass::Exterior)
                    f.u[c][k] = 0.0;
                else
                    f.u[c][k] = std::max(0.0, f.u[c][k]);
            }
        return f;
    }
    return harmonic_extension(g, bd, 1e-8, 100000);
}

// one damped red-black sweep of the cell equations
// (4 + beta h^2 prod_{j!=i} u_j^2) u_i = sum of neighbours; with project set,
// beta is ignored and cells with three positive components drop the smallest
double sweep_once(const Grid& g, Field3& f, double beta, double omega, bool project) {
    const int n = g.n;
    const double bh2 = beta * g.h * g.h;
    std::array<double*, 3> u = {f.u[0].data(), f.u[1].data(), f.u[2].data()};
    double maxChange = 0.0;
    for (int color = 0; color < 2; ++color) {
        std::array<double, 64> bandMax{};  // per-band change maxima, merged in band order
        int bands = 0;
        auto body = [&](int j0, int j1, int band) {
            double localMax = 0.0;
            for (int j = j0 + 1; j < j1 + 1; ++j) {
                int i = 1 + ((j + color) & 1);
                for (; i < n - 1; i += 2) {
                    int k = j * n + i;
                    if (g.cls[k] != CellClass::Interior) continue;
                    for (int c = 0; c < 3; ++c) {
                        double* uc = u[c];
                        double nb = uc[k - 1] + uc[k + 1] + uc[k - n] + uc[k + n];
                        double vv = u[(c + 1) % 3][k], ww = u[(c + 2) % 3][k];
                        double denom = 4.0 + (project ? 0.0 : bh2 * vv * vv * ww * ww);
                        double target = nb / denom;
                        double next = std::max(0.0, (1.0 - omega) * uc[k] + omega * target);
                        localMax = std::max(localMax, std::abs(next - uc[k]));
                        uc[k] = next;
                    }
                    if (project && u[0][k] > 0 && u[1][k] > 0 && u[2][k] > 0) {
                        int smallest = 0;
                        if (u[1][k] < u[smallest][k]) smallest = 1;
                        if (u[2][k] < u[smallest][k]) smallest = 2;
                        localMax = std::max(localMax, u[smallest][k]);
                        u[smallest][k] = 0.0;
                    }
                }
            }
            bandMax[band] = localMax;
        };
        // fixed banding so the change maximum merges in a deterministic order
        int nrows = n - 2;
        int workers = std::min({worker_count(), std::max(nrows / 16, 1), 64});
        int chunk = (nrows + workers - 1) / workers;
        std::vector<std::pair<int, int>> ranges;
        for (int w = 0; w < workers; ++w) {
            int j0 = w * chunk, j1 = std::min(nrows, j0 + chunk);
            if (j0 < j1) ranges.emplace_back(j0, j1);
        }
        bands = static_cast<int>(ranges.size());
        if (bands == 1) {
            body(ranges[0].first, ranges[0].second, 0);
        } else {
            std::vector<std::thread> pool;
            for (int b = 0; b < bands; ++b)
                pool.emplace_back(body, ranges[b].first, ranges[b].second, b);
            for (auto& t : pool) t.join();
        }
        for (int b = 0; b < bands; ++b) maxChange = std::max(maxChange, bandMax[b]);
    }
    return maxChange;
}

void project_feasible(const Grid& g, Field3& f) {
    for (std::size_t k = 0; k < g.cls.size(); ++k) {
        if (g.cls[k] == CellClass::Exterior) continue;
        double a = f.u[0][k], b = f.u[1][k], c = f.u[2][k];
        if (a > 0 && b > 0 && c > 0) {
            int smallest = 0;
            if (b < f.u[smallest][k]) smallest = 1;
            if (c < f.u[smallest][k]) smallest = 2;
            f.u[smallest][k] = 0.0;
        }
    }
}

SolveReport run_sweeps(const Grid& g, double beta, const SolverConfig& cfg, Field3 f,
                       bool project) {
    SolveReport rep;
    EnergyBreakdown e = j_beta(g, f, project ? 0.0 : beta);
    rep.energyHistory.push_back(e);
    double omega = cfg.damping;
    Field3 saved = f;
    for (int s = 0; s < cfg.maxSweeps; ++s) {
        rep.sweeps = s + 1;
        saved = f;
        double change = sweep_once(g, f, beta, omega, project);
        EnergyBreakdown et = j_beta(g, f, project ? 0.0 : beta);
        if (et.total <= e.total + kAcceptSlack) {
            e = et;
            rep.energyHistory.push_back(e);
            omega = cfg.damping;
            if (project) {
                if (change <= cfg.tol) {
                    rep.converged = true;
                    break;
                }
            } else if (gradient_max_norm(g, f, beta) <= cfg.tol) {
                rep.converged = true;
                break;
            }
        } else {
            f = saved;
            omega *= 0.5;
            if (omega < kOmegaFloor) break;  // stalled, report honestly
        }
    }
    rep.field = std::move(f);
    rep.penaltyResidual = penalty_energy(g, rep.field, 1.0);
    return rep;
}

}  // namespace

SolveReport solve_penalized(const Grid& g, const BoundaryData& bd, double beta,
                            const SolverConfig& cfg, const std::optional<Field3>& init) {
    if (!(beta >= 0) || !std::isfinite(beta))
        throw std::invalid_argument("solve_penalized: beta must be finite and nonnegative");
    validate(g, bd, cfg);
    Field3 f = starting_field(g, bd, init);
    return run_sweeps(g, beta, cfg, std::move(f), false);
}

std::vector<SolveReport> sweep_beta(const Grid& g, const BoundaryData& bd,
                                    const SolverConfig& cfg) {
    if (cfg.betaLadder.empty())
        throw std::invalid_argument("sweep_beta: empty beta ladder");
    for (std::size_t k = 0; k < cfg.betaLadder.size(); ++k) {
        double b = cfg.betaLadder[k];
        if (!(b > 0) || !std::isfinite(b))
            throw std::invalid_argument("sweep_beta: ladder entries must be positive");
        if (k > 0 && !(b > cfg.betaLadder[k - 1]))
            throw std::invalid_argument("sweep_beta: ladder must be strictly increasing");
    }
    validate(g, bd, cfg);
    std::vector<SolveReport> out;
    std::optional<Field3> warm;
    for (double beta : cfg.betaLadder) {
        out.push_back(solve_penalized(g, bd, beta, cfg, warm));
        warm = out.back().field;
    }
    return out;
}

SolveReport solve_hard_constraint(const Grid& g, const BoundaryData& bd,
                                  const SolverConfig& cfg,
                                  const std::optional<Field3>& init) {
    validate(g, bd, cfg);
    Field3 f = starting_field(g, bd, init);
    project_feasible(g, f);
    SolveReport rep = run_sweeps(g, 0.0, cfg, std::move(f), true);
    project_feasible(g, rep.field);  // boundary cells too, belt and braces
    rep.penaltyResidual = 0.0;
    return rep;
}

std::string SolverConfig::to_json() const {
    nlohmann::json j;
    j["mode"] = mode == SolveMode::Penalized ? "PENALIZED" : "HARD_CONSTRAINT";
    j["betaLadder"] = betaLadder;
    j["maxSweeps"] = maxSweeps;
    j["tol"] = tol;
    j["damping"] = damping;
    j["seed"] = seed;
    return j.dump(2);
}

SolverConfig SolverConfig::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);  // throws on bad syntax
    if (!j.is_object()) throw std::runtime_error("config: top level must be an object");
    static const char* known[] = {"mode", "betaLadder", "maxSweeps", "tol", "damping", "seed"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw std::runtime_error("config: unknown key '" + it.key() + "'");
    }
    SolverConfig cfg;
    if (j.contains("mode")) {
        std::string m = j.at("mode").get<std::string>();
        if (m == "PENALIZED")
            cfg.mode = SolveMode::Penalized;
        else if (m == "HARD_CONSTRAINT")
            cfg.mode = SolveMode::HardConstraint;
        else
            throw std::runtime_error("config: mode must be PENALIZED or HARD_CONSTRAINT");
    }
    if (j.contains("betaLadder")) cfg.betaLadder = j.at("betaLadder").get<std::vector<double>>();
    if (j.contains("maxSweeps")) cfg.maxSweeps = j.at("maxSweeps").get<int>();
    if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
    if (j.contains("damping")) cfg.damping = j.at("damping").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (cfg.maxSweeps < 1) throw std::runtime_error("config: maxSweeps must be >= 1");
    if (!(cfg.tol > 0)) throw std::runtime_error("config: tol must be positive");
    if (!(cfg.damping > 0) || cfg.damping > 1.0)
        throw std::runtime_error("config: damping must lie in (0, 1]");
    for (double b : cfg.betaLadder)
        if (!(b > 0) || !std::isfinite(b))
            throw std::runtime_error("config: betaLadder entries must be positive");
    return cfg;
}

SolverConfig SolverConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

}  // namespace seglab
