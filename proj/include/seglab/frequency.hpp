#pragma once

#include <array>
#include <utility>
#include <vector>

#include "seglab/geometry.hpp"

namespace seglab {

// Almgren quantities about a center x0 (two dimensions):
//   E(r) = int_{B_r} sum |grad v_j|^2 dx  (+ beta int_{B_r} prod v_j^2 when
//          includedPenalty is set),
//   H(r) = (1/r) int_{S_r} sum v_j^2 dsigma,
//   N(r) = E(r) / H(r).
struct FrequencyProfile {
    std::array<double, 2> center{0.0, 0.0};
    std::vector<double> radii, E, H, N;
    bool includedPenalty = false;
    double beta = 0.0;
};

struct CircleQuadrature {
    double sumSquares;         // (1/r) int_{S_r} sum v_j^2 dsigma
    double normalFluxSquares;  // int_{S_r} sum (d_nu v_j)^2 dsigma
};

// Trapezoid rule over M equi-angular samples; values by bilinear
// interpolation, normal derivative by centered differences at r -|+ h
// (one-sided within h of the domain boundary).
CircleQuadrature circle_quadrature(const Grid& g, const Field3& f,
                                   std::array<double, 2> x0, double r, int M = 720);

// Geometric radius ladder r_0 < ... < r_K from rmin to rmax (K >= 8, so K+1
// entries). E sums cells whose center lies in B_r, each cell carrying half of
// its incident squared edge differences (the cell split of dirichlet_energy);
// H comes from circle_quadrature. Throws if any H falls below 1e-14 or the
// outer annulus leaves the domain.
FrequencyProfile frequency_profile(const Grid& g, const Field3& f,
                                   std::array<double, 2> x0, double rmin,
                                   double rmax, int K,
                                   bool includePenalty = false, double beta = 0.0,
                                   int M = 720);

struct MonotoneReport {
    bool ok = false;
    double worstDrop = 0.0;  // most negative N[k+1]-N[k], 0 if none
    int worstIndex = -1;
};
// N[k+1] >= N[k] - slack along the ladder.
MonotoneReport check_monotone(const FrequencyProfile& p, double slack);

struct DoublingReport {
    bool lowerOk = false;  // H(r2)/r2^{2a} >= H(r1)/r1^{2a} / slackFactor, a = alphaLow
    bool upperOk = false;  // H(r2)/r2^{2g} <= H(r1)/r1^{2g} * slackFactor, g = alphaHigh
    double worstLower = 1.0, worstUpper = 1.0;  // extreme ratios found
};
// Two-sided doubling bounds on all radius pairs of the ladder, assuming
// alphaLow <= N(r_0) and N(r_K) <= alphaHigh.
DoublingReport check_doubling(const FrequencyProfile& p, double alphaLow,
                              double alphaHigh, double slackFactor = 1.05);

// Relative defect of the sphere identity int_{S_r} sum |grad v_j|^2 dsigma
// = 2 int_{S_r} sum (d_nu v_j)^2 dsigma (tangential part by angular
// differences along the circle samples).
double pohozaev_residual(const Grid& g, const Field3& f,
                         std::array<double, 2> x0, double r, int M = 720);

// v(x0 + rho x) / H(v,x0,rho)^{1/2} resampled on a fixed 129x129 reference
// grid over [-2,2]^2 and renormalized so that H(.,0,1) = 1 on that grid.
// Sample points outside the source extent contribute 0. Throws if
// B_{2 rho}(x0) leaves the domain or H is below 1e-14.
std::pair<Grid, Field3> blow_up(const Grid& g, const Field3& f,
                                std::array<double, 2> x0, double rho);

struct ExponentFit {
    double gamma = 0.0;  // half the log H vs log r slope
    double r2 = 0.0;     // coefficient of determination of the linear fit
};
ExponentFit estimate_exponent(const FrequencyProfile& p);

}  // namespace seglab
