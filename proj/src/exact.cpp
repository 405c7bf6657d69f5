#include "seglab/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seglab {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kSupport = 4.0 * kPi / 3.0;  // opening of each trace arc

double wrap(double t) {
    double s = std::fmod(t, kTwoPi);
    return s < 0 ? s + kTwoPi : s;
}

double psi1(double t) {
    double s = wrap(t);
    if (s > kSupport) return 0.0;
    // sin is nonnegative on [0, pi]; clamp the roundoff at the arc ends
    return std::max(0.0, std::sin(0.75 * s));
}
}  // namespace

std::array<double, 3> psi(double theta) {
    return {psi1(theta), psi1(theta - 2.0 * kPi / 3.0), psi1(theta - kSupport)};
}

Field3 exact_minimizer(const Grid& g) {
    Field3 f = Field3::zeros(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            int k = g.idx(i, j);
            if (g.cls[k] == CellClass::Exterior) continue;
            double x = g.cx(i), y = g.cy(j);
            double r = std::hypot(x, y);
            double amp = std::pow(r, 0.75);
            auto p = psi(std::atan2(y, x));
            for (int c = 0; c < 3; ++c) f.u[c][k] = amp * p[c];
        }
    return f;
}

ExactFrequency exact_frequency_values(double r) {
    if (!(r > 0)) throw std::invalid_argument("exact_frequency_values: r must be positive");
    double r32 = std::pow(r, 1.5);
    return {1.5 * kPi * r32, kTwoPi * r32, 0.75};
}

double exact_total_energy() { return 1.5 * kPi; }

AngularSupport psi_support() {
    AngularSupport s;
    s.arcs[0] = {{0.0, kSupport}};
    s.arcs[1] = {{2.0 * kPi / 3.0, kTwoPi}};
    s.arcs[2] = {{kSupport, kTwoPi}, {0.0, 2.0 * kPi / 3.0}};
    return s;
}

namespace {

// normalized arcs as [a, b) with b possibly past 2pi for wrapping ones
std::vector<AngularSupport::Arc> normalized(const std::vector<AngularSupport::Arc>& arcs) {
    std::vector<AngularSupport::Arc> out;
    for (auto arc : arcs) {
        double a = wrap(arc.a);
        double len = arc.b - arc.a;
        if (len <= 0) len += kTwoPi;
        if (len <= 0 || len > kTwoPi)
            throw std::invalid_argument("angular support: arc with non-positive or full length");
        out.push_back({a, a + len});
    }
    std::sort(out.begin(), out.end(),
              [](const auto& l, const auto& r) { return l.a < r.a; });
    return out;
}

// merge arcs that touch modulo 2pi and report piece count and total length
std::pair<int, double> merged_pieces(const std::vector<AngularSupport::Arc>& arcs) {
    auto norm = normalized(arcs);
    double total = 0;
    for (const auto& a : norm) total += a.b - a.a;
    if (total >= kTwoPi - 1e-12) return {0, total};  // full circle, caller rejects
    std::vector<AngularSupport::Arc> merged;
    for (const auto& a : norm) {
        if (!merged.empty() && a.a <= merged.back().b + 1e-12)
            merged.back().b = std::max(merged.back().b, a.b);
        else
            merged.push_back(a);
    }
    // wrap join: last arc reaching 2pi continues into the first
    if (merged.size() > 1 && merged.back().b >= kTwoPi + merged.front().a - 1e-12) {
        merged.front().a = merged.back().a - kTwoPi;
        merged.pop_back();
    }
    return {static_cast<int>(merged.size()), total};
}

bool covers(const std::vector<AngularSupport::Arc>& norm, double t) {
    for (const auto& a : norm)
        if ((t >= a.a && t < a.b) || (t + kTwoPi >= a.a && t + kTwoPi < a.b)) return true;
    return false;
}

}  // namespace

std::array<bool, 3> connected_positivity(const AngularSupport& s) {
    std::array<bool, 3> out{};
    for (int c = 0; c < 3; ++c) out[c] = merged_pieces(s.arcs[c]).first <= 1;
    return out;
}

double min_homogeneity(const AngularSupport& s, const std::array<bool, 3>& connected) {
    for (int c = 0; c < 3; ++c) {
        if (s.arcs[c].empty())
            throw std::invalid_argument("min_homogeneity: component without support arc");
        auto [pieces, total] = merged_pieces(s.arcs[c]);
        if (pieces == 0 || total >= kTwoPi - 1e-12)
            throw std::invalid_argument(
                "min_homogeneity: a component is positive on the whole circle");
    }
    // pointwise segregation: no angle may lie in all three supports; check at
    // every arc endpoint (the overlap pattern can only change there)
    std::array<std::vector<AngularSupport::Arc>, 3> norm;
    for (int c = 0; c < 3; ++c) norm[c] = normalized(s.arcs[c]);
    std::vector<double> probes;
    for (int c = 0; c < 3; ++c)
        for (const auto& a : norm[c]) {
            probes.push_back(wrap(a.a + 1e-9));
            probes.push_back(wrap(a.b - 1e-9));
            probes.push_back(wrap(0.5 * (a.a + a.b)));
        }
    for (double t : probes)
        if (covers(norm[0], t) && covers(norm[1], t) && covers(norm[2], t))
            throw std::invalid_argument("min_homogeneity: supports violate segregation");
    bool allConnected = connected[0] && connected[1] && connected[2];
    return allConnected ? 0.75 : 1.0;
}

double min_homogeneity(const AngularSupport& s) {
    return min_homogeneity(s, connected_positivity(s));
}

}  // namespace seglab
