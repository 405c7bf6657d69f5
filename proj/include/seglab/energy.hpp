#pragma once

#include "seglab/geometry.hpp"

namespace seglab {

struct EnergyBreakdown {
    double dirichlet = 0.0;
    double penalty = 0.0;
    double total = 0.0;
    double beta = 0.0;
};

// Sum over components of squared forward differences on every edge with no
// EXTERIOR endpoint (the h^2 from the cell measure cancels the 1/h^2 of the
// difference quotient in two dimensions).
double dirichlet_energy(const Grid& g, const Field3& f);

// beta * h^2 * sum over INTERIOR cells of u1^2 u2^2 u3^2.
double penalty_energy(const Grid& g, const Field3& f, double beta);

EnergyBreakdown j_beta(const Grid& g, const Field3& f, double beta);

// Exact derivative of the discrete functional with respect to the interior
// unknowns: grad_i = 2(4 u_i - sum of neighbours) + 2 beta h^2 u_i prod_{j!=i} u_j^2,
// zero on BOUNDARY and EXTERIOR cells.
Field3 gradient(const Grid& g, const Field3& f, double beta);

double gradient_max_norm(const Grid& g, const Field3& f, double beta);

}  // namespace seglab
