#include "seglab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "seglab/exact.hpp"
#include "seglab/util.hpp"

namespace seglab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double shape_inradius(DomainKind kind, double px, double py) {
    switch (kind) {
        case DomainKind::Disc:
            return 1.0 - std::hypot(px, py);
        case DomainKind::Rectangle:
            return std::min(std::min(px, 1.0 - px), std::min(py, 1.0 - py));
        case DomainKind::Reference:
            return 2.0 - std::max(std::abs(px), std::abs(py));
        case DomainKind::Custom:
            return 0.0;  // handled by the caller via the extent
    }
    return 0.0;
}

void classify(Grid& g) {
    const int n = g.n;
    std::vector<bool> in(static_cast<std::size_t>(n) * n, false);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            in[g.idx(i, j)] = shape_inradius(g.kind, g.cx(i), g.cy(j)) > 0.5 * g.h;
    g.cls.assign(static_cast<std::size_t>(n) * n, CellClass::Exterior);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (in[g.idx(i, j)]) {
                g.cls[g.idx(i, j)] = CellClass::Interior;
                continue;
            }
            bool nb = (i > 0 && in[g.idx(i - 1, j)]) || (i + 1 < n && in[g.idx(i + 1, j)]) ||
                      (j > 0 && in[g.idx(i, j - 1)]) || (j + 1 < n && in[g.idx(i, j + 1)]);
            if (nb) g.cls[g.idx(i, j)] = CellClass::Boundary;
        }
}

}  // namespace

std::size_t Grid::count(CellClass c) const {
    return static_cast<std::size_t>(std::count(cls.begin(), cls.end(), c));
}

double Grid::inradius(double px, double py) const {
    if (kind == DomainKind::Custom) {
        double d = std::min(std::min(px - xmin(), xmax() - px),
                            std::min(py - xmin(), xmax() - py));
        return d;
    }
    return shape_inradius(kind, px, py);
}

Field3 Field3::zeros(const Grid& g) {
    Field3 f;
    for (auto& c : f.u) c.assign(g.cls.size(), 0.0);
    return f;
}

double Field3::max_abs() const {
    double m = 0.0;
    for (const auto& c : u)
        for (double v : c) m = std::max(m, std::abs(v));
    return m;
}

bool Field3::finite() const {
    for (const auto& c : u)
        for (double v : c)
            if (!std::isfinite(v)) return false;
    return true;
}

Grid build_grid(DomainKind kind, int n) {
    if (kind == DomainKind::Custom)
        throw std::invalid_argument("build_grid: custom grids come from load_csv");
    if (kind != DomainKind::Reference && n < 16)
        throw std::invalid_argument("build_grid: n must be at least 16");
    Grid g;
    g.kind = kind;
    g.n = n;
    switch (kind) {
        case DomainKind::Disc:
            g.h = 2.0 / (n - 4);
            g.x0 = g.y0 = -1.0 - 1.5 * g.h;
            break;
        case DomainKind::Rectangle:
            g.h = 1.0 / (n - 4);
            g.x0 = g.y0 = -1.5 * g.h;
            break;
        case DomainKind::Reference:
            if (n < 2) throw std::invalid_argument("build_grid: reference grid too small");
            g.h = 4.0 / (n - 1);
            g.x0 = g.y0 = -2.0;
            break;
        case DomainKind::Custom:
            break;
    }
    if (kind == DomainKind::Reference) {
        g.cls.assign(static_cast<std::size_t>(n) * n, CellClass::Interior);
        for (int k = 0; k < n; ++k) {
            g.cls[g.idx(k, 0)] = g.cls[g.idx(k, n - 1)] = CellClass::Boundary;
            g.cls[g.idx(0, k)] = g.cls[g.idx(n - 1, k)] = CellClass::Boundary;
        }
    } else {
        classify(g);
    }
    return g;
}

Trace Trace::constant(double a, double b, double cc) {
    Trace t;
    t.kind = Kind::Constant;
    t.c = {a, b, cc};
    return t;
}

Trace Trace::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("trace csv: cannot open " + path);
    Trace t;
    t.kind = Kind::Table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (std::isalpha(static_cast<unsigned char>(line[line.find_first_not_of(" \t\r")])))
            continue;  // header
        std::istringstream ls(line);
        double th, v1, v2, v3;
        char comma;
        if (!(ls >> th >> comma >> v1 >> comma >> v2 >> comma >> v3))
            throw std::runtime_error("trace csv: malformed row: " + line);
        t.theta.push_back(th);
        t.vals[0].push_back(v1);
        t.vals[1].push_back(v2);
        t.vals[2].push_back(v3);
    }
    if (t.theta.size() < 2) throw std::runtime_error("trace csv: need at least two rows");
    if (!std::is_sorted(t.theta.begin(), t.theta.end()))
        throw std::runtime_error("trace csv: theta column must be sorted");
    return t;
}

std::array<double, 3> Trace::eval(double th) const {
    switch (kind) {
        case Kind::TrMer:
            return psi(th);
        case Kind::Constant:
            return c;
        case Kind::Table:
            break;
    }
    double t = std::fmod(th, kTwoPi);
    if (t < 0) t += kTwoPi;
    // periodic linear interpolation in the tabulated angles
    std::size_t m = theta.size();
    auto hi = std::upper_bound(theta.begin(), theta.end(), t);
    std::size_t k1 = static_cast<std::size_t>(hi - theta.begin()) % m;
    std::size_t k0 = (k1 + m - 1) % m;
    double t0 = theta[k0], t1 = theta[k1];
    double span = t1 - t0;
    if (span <= 0) span += kTwoPi;
    double dt = t - t0;
    if (dt < 0) dt += kTwoPi;
    double w = span > 0 ? dt / span : 0.0;
    std::array<double, 3> out{};
    for (int cidx = 0; cidx < 3; ++cidx)
        out[cidx] = (1.0 - w) * vals[cidx][k0] + w * vals[cidx][k1];
    return out;
}

BoundaryData sample_boundary(const Grid& g, const Trace& trace) {
    BoundaryData bd;
    for (auto& v : bd.values) v.assign(g.cls.size(), 0.0);
    double ccx = g.kind == DomainKind::Rectangle ? 0.5 : 0.0;
    double ccy = ccx;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            if (g.at(i, j) != CellClass::Boundary) continue;
            double th = std::atan2(g.cy(j) - ccy, g.cx(i) - ccx);
            if (th < 0) th += kTwoPi;
            auto v = trace.eval(th);
            for (int c = 0; c < 3; ++c) {
                if (!std::isfinite(v[c]))
                    throw std::invalid_argument("sample_boundary: non-finite trace value");
                bd.values[c][g.idx(i, j)] = v[c];
            }
        }
    return bd;
}

Field3 harmonic_extension(const Grid& g, const BoundaryData& bd, double tol, int maxIter) {
    Field3 f = Field3::zeros(g);
    const int n = g.n;
    for (int c = 0; c < 3; ++c)
        for (std::size_t k = 0; k < g.cls.size(); ++k)
            if (g.cls[k] == CellClass::Boundary) f.u[c][k] = bd.values[c][k];
    // red-black Gauss-Seidel on the 5-point Laplacian, one color at a time
    auto sweep_color = [&](int c, int color) {
        double* u = f.u[c].data();
        parallel_rows(n - 2, [&](int j0, int j1) {
            for (int j = j0 + 1; j < j1 + 1; ++j) {
                int i = 1 + ((j + color) & 1);
                for (; i < n - 1; i += 2) {
                    int k = g.idx(i, j);
                    if (g.cls[k] != CellClass::Interior) continue;
                    u[k] = 0.25 * (u[k - 1] + u[k + 1] + u[k - n] + u[k + n]);
                }
            }
        });
    };
    double res = 0.0;
    for (int it = 0; it < maxIter; ++it) {
        for (int c = 0; c < 3; ++c) {
            sweep_color(c, 0);
            sweep_color(c, 1);
        }
        if ((it & 15) != 15 && it + 1 != maxIter) continue;
        res = 0.0;
        for (int c = 0; c < 3; ++c) {
            const double* u = f.u[c].data();
            for (int j = 1; j < n - 1; ++j)
                for (int i = 1; i < n - 1; ++i) {
                    int k = g.idx(i, j);
                    if (g.cls[k] != CellClass::Interior) continue;
                    double r = u[k] - 0.25 * (u[k - 1] + u[k + 1] + u[k - n] + u[k + n]);
                    res = std::max(res, std::abs(r));
                }
        }
        if (res <= tol) return f;
    }
    char msg[128];
    std::snprintf(msg, sizeof msg,
                  "harmonic_extension: no convergence in %d sweeps, residual %.3e", maxIter, res);
    throw std::runtime_error(msg);
}

double interp_bilinear(const Grid& g, const std::vector<double>& f, double px, double py) {
    // cell-center lattice coordinates
    double gx = (px - g.x0) / g.h, gy = (py - g.y0) / g.h;
    if (gx < -0.5 || gx > g.n - 0.5 || gy < -0.5 || gy > g.n - 0.5)
        throw std::out_of_range("interp_bilinear: point outside grid extent");
    int i0 = static_cast<int>(std::floor(gx)), j0 = static_cast<int>(std::floor(gy));
    i0 = std::clamp(i0, 0, g.n - 2);
    j0 = std::clamp(j0, 0, g.n - 2);
    double wx = std::clamp(gx - i0, 0.0, 1.0), wy = std::clamp(gy - j0, 0.0, 1.0);
    auto val = [&](int i, int j) {
        int k = g.idx(i, j);
        return g.cls[k] == CellClass::Exterior ? 0.0 : f[k];
    };
    double a = (1 - wx) * val(i0, j0) + wx * val(i0 + 1, j0);
    double b = (1 - wx) * val(i0, j0 + 1) + wx * val(i0 + 1, j0 + 1);
    return (1 - wy) * a + wy * b;
}

std::array<double, 3> interp_bilinear3(const Grid& g, const Field3& f, double px, double py) {
    return {interp_bilinear(g, f.u[0], px, py), interp_bilinear(g, f.u[1], px, py),
            interp_bilinear(g, f.u[2], px, py)};
}

void dump_csv(const Grid& g, const Field3& f, const std::string& path) {
    std::FILE* out = std::fopen(path.c_str(), "wb");
    if (!out) throw std::runtime_error("dump_csv: cannot open " + path);
    std::string buf;
    buf.reserve(1 << 20);
    char row[256];
    buf += "x,y,u1,u2,u3,cell_class\n";
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            int k = g.idx(i, j);
            std::snprintf(row, sizeof row, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", g.cx(i),
                          g.cy(j), f.u[0][k], f.u[1][k], f.u[2][k],
                          static_cast<int>(g.cls[k]));
            buf += row;
            if (buf.size() > (1 << 20)) {
                std::fwrite(buf.data(), 1, buf.size(), out);
                buf.clear();
            }
        }
    std::fwrite(buf.data(), 1, buf.size(), out);
    std::fclose(out);
}

std::pair<Grid, Field3> load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,y,", 0) != 0)
        throw std::runtime_error("load_csv: missing header");
    std::vector<double> xs, ys, u1, u2, u3;
    std::vector<CellClass> cls;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double vx, vy, a, b, c;
        int cl;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg,%lg,%d", &vx, &vy, &a, &b, &c, &cl) != 6)
            throw std::runtime_error("load_csv: malformed row: " + line);
        if (cl < 0 || cl > 2) throw std::runtime_error("load_csv: bad cell_class");
        xs.push_back(vx);
        ys.push_back(vy);
        u1.push_back(a);
        u2.push_back(b);
        u3.push_back(c);
        cls.push_back(static_cast<CellClass>(cl));
    }
    std::size_t m = xs.size();
    int n = static_cast<int>(std::llround(std::sqrt(static_cast<double>(m))));
    if (static_cast<std::size_t>(n) * n != m || n < 2)
        throw std::runtime_error("load_csv: row count is not a square");
    Grid g;
    g.kind = DomainKind::Custom;
    g.n = n;
    g.x0 = xs[0];
    g.y0 = ys[0];
    g.h = (xs[n - 1] - xs[0]) / (n - 1);
    if (!(g.h > 0)) throw std::runtime_error("load_csv: bad spacing");
    // snap to the analytic constructions when the numbers match, so that our
    // own dumps reproduce the original doubles exactly
    struct Candidate {
        DomainKind kind;
        double h, origin;
    };
    const Candidate cands[] = {
        {DomainKind::Disc, 2.0 / (n - 4), -1.0 - 1.5 * (2.0 / (n - 4))},
        {DomainKind::Rectangle, 1.0 / (n - 4), -1.5 * (1.0 / (n - 4))},
        {DomainKind::Reference, 4.0 / (n - 1), -2.0},
    };
    for (const auto& cand : cands) {
        if (n >= 16 || cand.kind == DomainKind::Reference) {
            if (std::abs(g.h - cand.h) < 1e-9 * cand.h &&
                std::abs(g.x0 - cand.origin) < 1e-9 * std::max(1.0, std::abs(cand.origin))) {
                g.kind = cand.kind;
                g.h = cand.h;
                g.x0 = g.y0 = cand.origin;
                break;
            }
        }
    }
    g.cls = std::move(cls);
    Field3 f;
    f.u[0] = std::move(u1);
    f.u[1] = std::move(u2);
    f.u[2] = std::move(u3);
    if (!f.finite()) throw std::runtime_error("load_csv: non-finite field value");
    return {std::move(g), std::move(f)};
}

}  // namespace seglab
