#include "seglab/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace seglab {

namespace {
inline bool nonext(const Grid& g, int k) { return g.cls[k] != CellClass::Exterior; }
}

double dirichlet_energy(const Grid& g, const Field3& f) {
    const int n = g.n;
    double tot = 0.0;
    for (int c = 0; c < 3; ++c) {
        const double* u = f.u[c].data();
        for (int j = 0; j < n; ++j) {
            double rowsum = 0.0;
            for (int i = 0; i < n; ++i) {
                int k = g.idx(i, j);
                if (!nonext(g, k)) continue;
                if (i + 1 < n && nonext(g, k + 1)) {
                    double d = u[k + 1] - u[k];
                    rowsum += d * d;
                }
                if (j + 1 < n && nonext(g, k + n)) {
                    double d = u[k + n] - u[k];
                    rowsum += d * d;
                }
            }
            tot += rowsum;
        }
    }
    return tot;
}

double penalty_energy(const Grid& g, const Field3& f, double beta) {
    if (beta < 0) throw std::invalid_argument("penalty_energy: beta must be nonnegative");
    double s = 0.0;
    const double* a = f.u[0].data();
    const double* b = f.u[1].data();
    const double* c = f.u[2].data();
    for (int j = 0; j < g.n; ++j) {
        double rowsum = 0.0;
        for (int i = 0; i < g.n; ++i) {
            int k = g.idx(i, j);
            if (g.cls[k] != CellClass::Interior) continue;
            double p = a[k] * b[k] * c[k];
            rowsum += p * p;
        }
        s += rowsum;
    }
    return beta * g.h * g.h * s;
}

EnergyBreakdown j_beta(const Grid& g, const Field3& f, double beta) {
    EnergyBreakdown e;
    e.beta = beta;
    e.dirichlet = dirichlet_energy(g, f);
    e.penalty = penalty_energy(g, f, beta);
    e.total = e.dirichlet + e.penalty;
    return e;
}

Field3 gradient(const Grid& g, const Field3& f, double beta) {
    if (!f.finite()) throw std::invalid_argument("gradient: non-finite field");
    Field3 out = Field3::zeros(g);
    const int n = g.n;
    const double bh2 = beta * g.h * g.h;
    for (int c = 0; c < 3; ++c) {
        const double* u = f.u[c].data();
        const double* v = f.u[(c + 1) % 3].data();
        const double* w = f.u[(c + 2) % 3].data();
        double* gr = out.u[c].data();
        for (int j = 1; j < n - 1; ++j)
            for (int i = 1; i < n - 1; ++i) {
                int k = g.idx(i, j);
                if (g.cls[k] != CellClass::Interior) continue;
                double nb = u[k - 1] + u[k + 1] + u[k - n] + u[k + n];
                gr[k] = 2.0 * (4.0 * u[k] - nb) + 2.0 * bh2 * u[k] * v[k] * v[k] * w[k] * w[k];
            }
    }
    return out;
}

double gradient_max_norm(const Grid& g, const Field3& f, double beta) {
    Field3 gr = gradient(g, f, beta);
    return gr.max_abs();
}

}  // namespace seglab
