#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "seglab/geometry.hpp"

namespace seglab {

// Relative zero threshold: a component counts as vanishing on a cell when
// u_i < tau * max(field). The default follows the C^{0,3/4} modulus so that
// the numerical zero of the homogeneous triple spreads over O(tau^{4/3})
// radius; 0.8 h^{3/4} makes that region at least one cell at any n.
inline constexpr double kDefaultTau = 1e-2;
double holder_tau(const Grid& g);

// Number of vanishing components per INTERIOR cell (0..3); 255 elsewhere.
std::vector<std::uint8_t> multiplicity_map(const Grid& g, const Field3& f, double tau);

struct TriplePoint {
    double x = 0.0, y = 0.0;  // centroid of a 4-connected multiplicity-3 cluster
    int cells = 0;
};
std::vector<TriplePoint> detect_triple_points(const Grid& g, const Field3& f, double tau);

// Zero contour of u_i - u_j by marching squares on cell-center plaquettes,
// restricted to plaquettes whose four corners all have u_k >= tau * max
// (this keeps genuine interfaces and drops the spurious equal-height set
// where u_i = u_j > 0 and u_k = 0). Chained into ordered polylines; closed
// loops repeat their first point at the end.
struct Polyline {
    int ci = 0, cj = 1;  // component pair, ci < cj
    std::vector<std::array<double, 2>> pts;
    bool closed = false;
};
std::vector<Polyline> extract_interfaces(const Grid& g, const Field3& f, double tau);

// Independent cycles of the interface graph: endpoints snapped within 4h
// become vertices, each polyline an edge; loops = E - V + C.
int count_loops(const Grid& g, const std::vector<Polyline>& interfaces);

struct PartitionReport {
    bool partitionOk = false;
    bool zeroSetClosureOk = false;
    int degenerateComponent = -1;  // set when some zero set covers all of INTERIOR
};
// partitionOk: the discrete interiors of the three below-threshold sets are
// pairwise disjoint and every INTERIOR cell lies in a below-threshold set or
// within one cell of an interface plaquette. zeroSetClosureOk: every
// below-threshold cell sits within 2 cells of a 4-connected cluster of >= 4
// interior below-threshold cells of the same component.
PartitionReport check_partition(const Grid& g, const Field3& f, double tau);

struct NodalClassification {
    std::vector<std::uint8_t> multiplicity;
    std::vector<TriplePoint> triplePoints;
    std::vector<Polyline> interfaces;
    int loopCount = 0;
    PartitionReport partition;
    double tau = kDefaultTau;
};
NodalClassification classify_nodal(const Grid& g, const Field3& f, double tau);

// Mean polar angle (about x0) of the polyline vertices in the annulus
// rmin <= |p - x0| <= rmax; used to measure interface directions at a triple
// point. Returns NaN if no vertex falls in the annulus.
double interface_direction(const Polyline& pl, std::array<double, 2> x0,
                           double rmin, double rmax);

}  // namespace seglab
