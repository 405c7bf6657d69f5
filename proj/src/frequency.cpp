#include "seglab/frequency.hpp"

#include <cmath>
#include <stdexcept>

namespace seglab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kHFloor = 1e-14;
}  // namespace

CircleQuadrature circle_quadrature(const Grid& g, const Field3& f,
                                   std::array<double, 2> x0, double r, int M) {
    if (!(r > 0)) throw std::invalid_argument("circle_quadrature: r must be positive");
    if (M < 16) throw std::invalid_argument("circle_quadrature: need at least 16 samples");
    const double inr = g.inradius(x0[0], x0[1]);
    if (inr <= r) throw std::invalid_argument("circle_quadrature: circle leaves the domain");
    const bool centered = inr > r + g.h;  // else fall back to an inward difference
    const double dtheta = kTwoPi / M;
    double sums = 0.0, flux = 0.0;
    for (int m = 0; m < M; ++m) {
        double th = m * dtheta;
        double cx = std::cos(th), sy = std::sin(th);
        double px = x0[0] + r * cx, py = x0[1] + r * sy;
        auto v = interp_bilinear3(g, f, px, py);
        double vout[3], vin[3];
        double ro = centered ? r + g.h : r;
        double ri = r - g.h;
        if (ri <= 0) throw std::invalid_argument("circle_quadrature: r must exceed h");
        for (int c = 0; c < 3; ++c) {
            vout[c] = interp_bilinear(g, f.u[c], x0[0] + ro * cx, x0[1] + ro * sy);
            vin[c] = interp_bilinear(g, f.u[c], x0[0] + ri * cx, x0[1] + ri * sy);
        }
        double span = centered ? 2.0 * g.h : g.h;
        double s = 0.0, fl = 0.0;
        for (int c = 0; c < 3; ++c) {
            s += v[c] * v[c];
            double dn = (vout[c] - vin[c]) / span;
            fl += dn * dn;
        }
        sums += s;
        flux += fl;
    }
    // H integrand: the 1/r^{N-1} normalization cancels the circumference r
    CircleQuadrature q;
    q.sumSquares = sums * dtheta;
    q.normalFluxSquares = flux * dtheta * r;
    return q;
}

FrequencyProfile frequency_profile(const Grid& g, const Field3& f,
                                   std::array<double, 2> x0, double rmin, double rmax,
                                   int K, bool includePenalty, double beta, int M) {
    if (!(0 < rmin && rmin < rmax))
        throw std::invalid_argument("frequency_profile: need 0 < rmin < rmax");
    if (K < 8) throw std::invalid_argument("frequency_profile: ladder size K must be >= 8");
    if (g.inradius(x0[0], x0[1]) <= rmax + g.h)
        throw std::invalid_argument("frequency_profile: outer annulus leaves the domain");
    if (!f.finite()) throw std::invalid_argument("frequency_profile: non-finite field");

    FrequencyProfile p;
    p.center = x0;
    p.includedPenalty = includePenalty;
    p.beta = includePenalty ? beta : 0.0;
    const double ratio = rmax / rmin;
    for (int k = 0; k <= K; ++k)
        p.radii.push_back(rmin * std::pow(ratio, static_cast<double>(k) / K));

    // per-cell energy: half of every incident squared edge difference, the
    // split of dirichlet_energy's edge sum (the h^2 cell measure cancels the
    // 1/h^2 of the quotient); penalty density when requested
    const int n = g.n;
    std::vector<double> dens(g.cls.size(), 0.0);
    const double bh2 = beta * g.h * g.h;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            int k = g.idx(i, j);
            if (g.cls[k] == CellClass::Exterior) continue;
            double cell = 0.0;
            for (int c = 0; c < 3; ++c) {
                const double* u = f.u[c].data();
                if (i > 0 && g.cls[k - 1] != CellClass::Exterior)
                    cell += 0.5 * (u[k] - u[k - 1]) * (u[k] - u[k - 1]);
                if (i + 1 < n && g.cls[k + 1] != CellClass::Exterior)
                    cell += 0.5 * (u[k + 1] - u[k]) * (u[k + 1] - u[k]);
                if (j > 0 && g.cls[k - n] != CellClass::Exterior)
                    cell += 0.5 * (u[k] - u[k - n]) * (u[k] - u[k - n]);
                if (j + 1 < n && g.cls[k + n] != CellClass::Exterior)
                    cell += 0.5 * (u[k + n] - u[k]) * (u[k + n] - u[k]);
            }
            if (includePenalty && g.cls[k] == CellClass::Interior) {
                double pr = f.u[0][k] * f.u[1][k] * f.u[2][k];
                cell += bh2 * pr * pr;
            }
            dens[k] = cell;
        }
    for (double r : p.radii) {
        double E = 0.0;
        int i0 = std::max(0, static_cast<int>(std::floor((x0[0] - r - g.x0) / g.h)));
        int i1 = std::min(n - 1, static_cast<int>(std::ceil((x0[0] + r - g.x0) / g.h)));
        int j0 = std::max(0, static_cast<int>(std::floor((x0[1] - r - g.y0) / g.h)));
        int j1 = std::min(n - 1, static_cast<int>(std::ceil((x0[1] + r - g.y0) / g.h)));
        for (int j = j0; j <= j1; ++j) {
            double rowsum = 0.0;
            double dy = g.cy(j) - x0[1];
            for (int i = i0; i <= i1; ++i) {
                double dx = g.cx(i) - x0[0];
                if (dx * dx + dy * dy < r * r) rowsum += dens[g.idx(i, j)];
            }
            E += rowsum;
        }
        auto q = circle_quadrature(g, f, x0, r, M);
        if (q.sumSquares < kHFloor)
            throw std::runtime_error("frequency_profile: H below 1e-14, frequency undefined");
        p.E.push_back(E);
        p.H.push_back(q.sumSquares);
        p.N.push_back(E / q.sumSquares);
    }
    return p;
}

MonotoneReport check_monotone(const FrequencyProfile& p, double slack) {
    MonotoneReport rep;
    rep.ok = true;
    for (std::size_t k = 0; k + 1 < p.N.size(); ++k) {
        double inc = p.N[k + 1] - p.N[k];
        if (inc < rep.worstDrop) {
            rep.worstDrop = inc;
            rep.worstIndex = static_cast<int>(k);
        }
        if (inc < -slack) rep.ok = false;
    }
    return rep;
}

DoublingReport check_doubling(const FrequencyProfile& p, double alphaLow,
                              double alphaHigh, double slackFactor) {
    if (p.N.empty()) throw std::invalid_argument("check_doubling: empty profile");
    if (alphaLow > p.N.front() + 1e-9)
        throw std::invalid_argument("check_doubling: alphaLow exceeds N at the inner radius");
    if (alphaHigh < p.N.back() - 1e-9)
        throw std::invalid_argument("check_doubling: alphaHigh is below N at the outer radius");
    DoublingReport rep;
    rep.lowerOk = rep.upperOk = true;
    for (std::size_t a = 0; a < p.radii.size(); ++a)
        for (std::size_t b = a + 1; b < p.radii.size(); ++b) {
            double qa = p.H[a] / std::pow(p.radii[a], 2.0 * alphaLow);
            double qb = p.H[b] / std::pow(p.radii[b], 2.0 * alphaLow);
            rep.worstLower = std::min(rep.worstLower, qb / qa);
            if (qb * slackFactor < qa) rep.lowerOk = false;
            qa = p.H[a] / std::pow(p.radii[a], 2.0 * alphaHigh);
            qb = p.H[b] / std::pow(p.radii[b], 2.0 * alphaHigh);
            rep.worstUpper = std::max(rep.worstUpper, qb / qa);
            if (qb > qa * slackFactor) rep.upperOk = false;
        }
    return rep;
}

double pohozaev_residual(const Grid& g, const Field3& f, std::array<double, 2> x0,
                         double r, int M) {
    if (M < 16) throw std::invalid_argument("pohozaev_residual: need at least 16 samples");
    const double inr = g.inradius(x0[0], x0[1]);
    if (inr <= r) throw std::invalid_argument("pohozaev_residual: circle leaves the domain");
    const bool centered = inr > r + g.h;
    const double dtheta = kTwoPi / M;
    // sample all components along the circle once, for angular differences
    std::vector<std::array<double, 3>> ring(M);
    for (int m = 0; m < M; ++m) {
        double th = m * dtheta;
        ring[m] = interp_bilinear3(g, f, x0[0] + r * std::cos(th), x0[1] + r * std::sin(th));
    }
    double lhs = 0.0, rhs = 0.0;
    for (int m = 0; m < M; ++m) {
        double th = m * dtheta;
        double cx = std::cos(th), sy = std::sin(th);
        double ro = centered ? r + g.h : r, ri = r - g.h;
        if (ri <= 0) throw std::invalid_argument("pohozaev_residual: r must exceed h");
        double span = centered ? 2.0 * g.h : g.h;
        const auto& vp = ring[(m + 1) % M];
        const auto& vm = ring[(m + M - 1) % M];
        for (int c = 0; c < 3; ++c) {
            double vout = interp_bilinear(g, f.u[c], x0[0] + ro * cx, x0[1] + ro * sy);
            double vin = interp_bilinear(g, f.u[c], x0[0] + ri * cx, x0[1] + ri * sy);
            double dn = (vout - vin) / span;
            double dt = (vp[c] - vm[c]) / (2.0 * dtheta * r);
            lhs += dn * dn + dt * dt;
            rhs += dn * dn;
        }
    }
    lhs *= dtheta * r;
    rhs *= 2.0 * dtheta * r;
    return std::abs(lhs - rhs) / std::max({lhs, rhs, 1e-300});
}

std::pair<Grid, Field3> blow_up(const Grid& g, const Field3& f, std::array<double, 2> x0,
                                double rho) {
    if (!(rho > 0)) throw std::invalid_argument("blow_up: rho must be positive");
    if (g.inradius(x0[0], x0[1]) < 2.0 * rho)
        throw std::invalid_argument("blow_up: B_{2rho} leaves the domain");
    double hsrc = circle_quadrature(g, f, x0, rho, 720).sumSquares;
    if (hsrc < kHFloor) throw std::runtime_error("blow_up: H below 1e-14, cannot normalize");

    Grid ref = build_grid(DomainKind::Reference, 129);
    Field3 out = Field3::zeros(ref);
    for (int j = 0; j < ref.n; ++j)
        for (int i = 0; i < ref.n; ++i) {
            double px = x0[0] + rho * ref.cx(i), py = x0[1] + rho * ref.cy(j);
            bool insideExtent = px > g.xmin() && px < g.xmax() && py > g.xmin() && py < g.xmax();
            int k = ref.idx(i, j);
            if (!insideExtent) continue;  // corners of the square window: 0
            auto v = interp_bilinear3(g, f, px, py);
            for (int c = 0; c < 3; ++c) out.u[c][k] = v[c];
        }
    double q = circle_quadrature(ref, out, {0.0, 0.0}, 1.0, 720).sumSquares;
    if (q < kHFloor) throw std::runtime_error("blow_up: H below 1e-14, cannot normalize");
    double scale = 1.0 / std::sqrt(q);
    for (auto& comp : out.u)
        for (double& v : comp) v *= scale;
    return {std::move(ref), std::move(out)};
}

ExponentFit estimate_exponent(const FrequencyProfile& p) {
    if (p.radii.size() < 2) throw std::invalid_argument("estimate_exponent: need >= 2 radii");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, m = static_cast<double>(p.radii.size());
    for (std::size_t k = 0; k < p.radii.size(); ++k) {
        if (p.H[k] <= 0) throw std::runtime_error("estimate_exponent: nonpositive H");
        double x = std::log(p.radii[k]), y = std::log(p.H[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = m * sxx - sx * sx;
    double slope = (m * sxy - sx * sy) / denom;
    double icept = (sy - slope * sx) / m;
    double ssRes = 0, ssTot = 0, ybar = sy / m;
    for (std::size_t k = 0; k < p.radii.size(); ++k) {
        double x = std::log(p.radii[k]), y = std::log(p.H[k]);
        double e = y - (slope * x + icept);
        ssRes += e * e;
        ssTot += (y - ybar) * (y - ybar);
    }
    ExponentFit fit;
    fit.gamma = 0.5 * slope;
    fit.r2 = ssTot > 0 ? 1.0 - ssRes / ssTot : 1.0;
    return fit;
}

}  // namespace seglab
