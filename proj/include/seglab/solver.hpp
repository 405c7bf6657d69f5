#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seglab/energy.hpp"
#include "seglab/geometry.hpp"

namespace seglab {

enum class SolveMode { Penalized, HardConstraint };

struct SolverConfig {
    SolveMode mode = SolveMode::Penalized;
    std::vector<double> betaLadder = {10.0, 100.0, 1000.0, 10000.0, 100000.0, 1000000.0};
    int maxSweeps = 20000;
    // Penalized: max-norm of the discrete gradient; HardConstraint: max cell
    // update over one sweep (the gradient does not vanish across kinks).
    double tol = 1e-9;
    double damping = 1.0;
    std::uint64_t seed = 0;

    std::string to_json() const;
    static SolverConfig from_json_text(const std::string& text);  // throws on malformed input
    static SolverConfig from_json_file(const std::string& path);
};

struct SolveReport {
    Field3 field;
    std::vector<EnergyBreakdown> energyHistory;  // initial state + accepted sweeps
    int sweeps = 0;
    bool converged = false;
    // Final constraint violation h^2 * sum of (u1 u2 u3)^2, without the beta
    // weight: the weighted quantity beta * integral equals beta * g'(beta)
    // for the concave value function g and is not monotone along a ladder,
    // while the violation itself decays like beta^(-5/4) and is the honest
    // measure of how far the field is from the constraint set.
    double penaltyResidual = 0.0;
};

// Damped red-black Gauss-Seidel on the cell equations
//   (4 + beta h^2 prod_{j!=i} u_j^2) u_i = sum of neighbours,
// values clamped at 0, boundary cells pinned to the trace. A sweep is kept
// only if the energy does not increase; otherwise the damping is halved for
// the next attempt and restored to cfg.damping after the next success.
SolveReport solve_penalized(const Grid& g, const BoundaryData& bd, double beta,
                            const SolverConfig& cfg,
                            const std::optional<Field3>& init = std::nullopt);

// Runs solve_penalized along cfg.betaLadder with warm starts.
std::vector<SolveReport> sweep_beta(const Grid& g, const BoundaryData& bd,
                                    const SolverConfig& cfg);

// Alternates a damped relaxation sweep on the Dirichlet energy with a
// pointwise projection onto {at most two components positive}: wherever all
// three are positive the smallest is set to zero (ties: lowest index). The
// returned field satisfies u1 u2 u3 = 0 exactly on every cell.
SolveReport solve_hard_constraint(const Grid& g, const BoundaryData& bd,
                                  const SolverConfig& cfg,
                                  const std::optional<Field3>& init = std::nullopt);

}  // namespace seglab
