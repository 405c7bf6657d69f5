#pragma once

#include <array>
#include <vector>

#include "seglab/geometry.hpp"

namespace seglab {

// Angular trace of the homogeneous triple: psi1(t) = sin(3t/4) on [0, 4pi/3]
// and 0 on the rest of the circle; psi2, psi3 are the same profile shifted by
// 2pi/3 and 4pi/3. At every angle at most two components are positive.
std::array<double, 3> psi(double theta);

// v_i(r,theta) = r^{3/4} psi_i(theta), sampled at every non-EXTERIOR cell.
Field3 exact_minimizer(const Grid& g);

struct ExactFrequency {
    double E;  // (3pi/2) r^{3/2}
    double H;  // 2pi r^{3/2}
    double N;  // 3/4
};
ExactFrequency exact_frequency_values(double r);

// Energy of the homogeneous triple on the unit disc, 3pi/2.
double exact_total_energy();

// Union of half-open angular arcs [a, b) per component, angles in [0, 2pi);
// arcs may wrap when b < a.
struct AngularSupport {
    struct Arc {
        double a, b;
    };
    std::array<std::vector<Arc>, 3> arcs;
};

AngularSupport psi_support();

// Per-component connectivity of the positivity set as a subset of the circle
// (arcs touching modulo 2pi count as one piece).
std::array<bool, 3> connected_positivity(const AngularSupport& s);

// Smallest admissible homogeneity degree for a segregated triple with the
// given angular supports: a component whose positivity set is disconnected
// forces an arc of opening <= pi/nu twice, hence nu >= 1; three connected
// arcs fit only if 3(2pi - pi/nu) >= 2pi, hence nu >= 3/4. Returns exactly
// 0.75 or 1.0. Throws if a support covers the whole circle, if a component
// has no arc, or if all three overlap somewhere.
double min_homogeneity(const AngularSupport& s, const std::array<bool, 3>& connected);
double min_homogeneity(const AngularSupport& s);

}  // namespace seglab
