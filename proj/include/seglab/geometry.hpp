#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace seglab {

enum class CellClass : std::uint8_t { Interior = 0, Boundary = 1, Exterior = 2 };

enum class DomainKind {
    Disc,       // unit disc {|x| < 1}, embedded in [-1-2h, 1+2h]^2
    Rectangle,  // unit square [0,1]^2, embedded in [-2h, 1+2h]^2
    Reference,  // blow-up target: [-2,2]^2, no exterior cells
    Custom,     // classes loaded from a file, no analytic shape attached
};

// Uniform n-by-n cell grid. Cell (i,j) has center (cx(i), cy(j)); fields are
// stored row-major with i fastest. The disc uses h = 2/(n-4): n-4 cells span
// the diameter and two padding cells per side give the extent [-1-2h, 1+2h],
// so h equals side/n exactly. INTERIOR cells have centers deeper than h/2
// inside the shape, BOUNDARY cells are the non-interior cells 4-adjacent to
// an interior one, everything else is EXTERIOR.
struct Grid {
    DomainKind kind = DomainKind::Disc;
    int n = 0;
    double h = 0.0;
    double x0 = 0.0, y0 = 0.0;  // center of cell (0,0)
    std::vector<CellClass> cls;

    double cx(int i) const { return x0 + i * h; }
    double cy(int j) const { return y0 + j * h; }
    int idx(int i, int j) const { return j * n + i; }
    CellClass at(int i, int j) const { return cls[idx(i, j)]; }
    bool interior(int i, int j) const { return at(i, j) == CellClass::Interior; }
    std::size_t count(CellClass c) const;
    // distance from p to the complement of the analytic shape; Custom grids
    // fall back to the distance to the extent box
    double inradius(double px, double py) const;
    // physical extent covered by cell faces: [xmin, xmax] in both axes
    double xmin() const { return x0 - 0.5 * h; }
    double xmax() const { return x0 + (n - 0.5) * h; }
};

// Three nonnegative scalar fields on a common grid, zero on EXTERIOR cells.
struct Field3 {
    std::array<std::vector<double>, 3> u;

    static Field3 zeros(const Grid& g);
    double& at(int c, int i, int j, const Grid& g) { return u[c][g.idx(i, j)]; }
    double at(int c, int i, int j, const Grid& g) const { return u[c][g.idx(i, j)]; }
    double max_abs() const;
    bool finite() const;
};

// Dirichlet values attached to the BOUNDARY cells (full-size arrays, only
// boundary entries are meaningful).
struct BoundaryData {
    std::array<std::vector<double>, 3> values;
};

// Boundary trace, evaluated at the polar angle of each boundary cell center
// (angle measured about the disc center, resp. the rectangle center).
struct Trace {
    enum class Kind { TrMer, Constant, Table };
    Kind kind = Kind::TrMer;
    std::array<double, 3> c{0.0, 0.0, 0.0};
    std::vector<double> theta;                    // Table: sorted in [0, 2pi)
    std::array<std::vector<double>, 3> vals;

    static Trace tr_mer() { return Trace{}; }
    static Trace constant(double a, double b, double cc);
    static Trace from_csv(const std::string& path);  // rows: theta,v1,v2,v3
    std::array<double, 3> eval(double th) const;
};

Grid build_grid(DomainKind kind, int n);

BoundaryData sample_boundary(const Grid& g, const Trace& trace);

// Componentwise discrete harmonic extension (5-point Laplacian, Jacobi-style
// red-black sweeps) of the boundary values into the INTERIOR cells. Throws if
// maxIter sweeps do not reach max-norm residual <= tol.
Field3 harmonic_extension(const Grid& g, const BoundaryData& bd,
                          double tol = 1e-10, int maxIter = 200000);

// Bilinear interpolation from the four surrounding cell centers; EXTERIOR
// cells contribute value 0. Throws if p lies outside the grid extent.
double interp_bilinear(const Grid& g, const std::vector<double>& f,
                       double px, double py);
std::array<double, 3> interp_bilinear3(const Grid& g, const Field3& f,
                                       double px, double py);

// Field dump: CSV "x,y,u1,u2,u3,cell_class", one row per cell, row-major,
// 17 significant digits; round-trips bit-exactly through load_csv.
void dump_csv(const Grid& g, const Field3& f, const std::string& path);
std::pair<Grid, Field3> load_csv(const std::string& path);

}  // namespace seglab
