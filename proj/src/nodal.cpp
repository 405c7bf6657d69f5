#include "seglab/nodal.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace seglab {

double holder_tau(const Grid& g) { return 0.8 * std::pow(g.h, 0.75); }

namespace {

double zero_level(const Field3& f, double tau) {
    if (!(tau > 0) || !std::isfinite(tau))
        throw std::invalid_argument("nodal: tau must be positive and finite");
    return std::max(tau * f.max_abs(), DBL_MIN);
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int m) : parent(m) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<std::uint8_t> multiplicity_map(const Grid& g, const Field3& f, double tau) {
    const double t = zero_level(f, tau);
    std::vector<std::uint8_t> m(g.cls.size(), 255);
    for (std::size_t k = 0; k < g.cls.size(); ++k) {
        if (g.cls[k] != CellClass::Interior) continue;
        std::uint8_t c = 0;
        for (int comp = 0; comp < 3; ++comp)
            if (f.u[comp][k] < t) ++c;
        m[k] = c;
    }
    return m;
}

std::vector<TriplePoint> detect_triple_points(const Grid& g, const Field3& f, double tau) {
    auto mult = multiplicity_map(g, f, tau);
    std::vector<char> seen(g.cls.size(), 0);
    std::vector<TriplePoint> out;
    const int n = g.n;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            int k = g.idx(i, j);
            if (mult[k] != 3 || seen[k]) continue;
            double sx = 0.0, sy = 0.0;
            int cells = 0;
            std::queue<int> q;
            q.push(k);
            seen[k] = 1;
            while (!q.empty()) {
                int c = q.front();
                q.pop();
                int ci = c % n, cj = c / n;
                sx += g.cx(ci);
                sy += g.cy(cj);
                ++cells;
                const int nb[4] = {c - 1, c + 1, c - n, c + n};
                const bool ok[4] = {ci > 0, ci + 1 < n, cj > 0, cj + 1 < n};
                for (int d = 0; d < 4; ++d)
                    if (ok[d] && !seen[nb[d]] && mult[nb[d]] == 3) {
                        seen[nb[d]] = 1;
                        q.push(nb[d]);
                    }
            }
            out.push_back({sx / cells, sy / cells, cells});
        }
    std::sort(out.begin(), out.end(), [](const TriplePoint& a, const TriplePoint& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    });
    return out;
}

namespace {

// Marching squares for one component pair over the plaquette lattice.
// Crossing points are keyed by the grid edge they sit on, so adjacent
// plaquettes produce bit-identical endpoints and chaining is exact.
struct Segment {
    long long e0, e1;
};

long long hedge(int n, int i, int j) { return 2LL * (static_cast<long long>(j) * n + i); }
long long vedge(int n, int i, int j) { return 2LL * (static_cast<long long>(j) * n + i) + 1; }

std::vector<Polyline> march_pair(const Grid& g, const Field3& f, int ci, int cj,
                                 double t) {
    const int n = g.n;
    const int ck = 3 - ci - cj;
    const std::vector<double>& a = f.u[ci];
    const std::vector<double>& b = f.u[cj];
    const std::vector<double>& other = f.u[ck];

    std::map<long long, std::array<double, 2>> pts;
    std::vector<Segment> segs;

    auto cross = [&](long long eid, int k0, int k1, double x0, double y0, double x1,
                     double y1) {
        auto it = pts.find(eid);
        if (it != pts.end()) return;
        double d0 = a[k0] - b[k0], d1 = a[k1] - b[k1];
        double s = d0 / (d0 - d1);
        pts.emplace(eid, std::array<double, 2>{x0 + s * (x1 - x0), y0 + s * (y1 - y0)});
    };

    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i + 1 < n; ++i) {
            const int k00 = g.idx(i, j), k10 = k00 + 1, k01 = k00 + n, k11 = k01 + 1;
            if (other[k00] < t || other[k10] < t || other[k01] < t || other[k11] < t)
                continue;
            const double d00 = a[k00] - b[k00], d10 = a[k10] - b[k10];
            const double d01 = a[k01] - b[k01], d11 = a[k11] - b[k11];
            int code = (d00 >= 0 ? 1 : 0) | (d10 >= 0 ? 2 : 0) | (d11 >= 0 ? 4 : 0) |
                       (d01 >= 0 ? 8 : 0);
            if (code == 0 || code == 15) continue;
            const double xl = g.cx(i), xr = g.cx(i + 1), yb = g.cy(j), yt = g.cy(j + 1);
            const long long B = hedge(n, i, j), T = hedge(n, i, j + 1);
            const long long L = vedge(n, i, j), R = vedge(n, i + 1, j);
            auto emit = [&](long long e0, long long e1) {
                if (e0 == B || e1 == B) cross(B, k00, k10, xl, yb, xr, yb);
                if (e0 == T || e1 == T) cross(T, k01, k11, xl, yt, xr, yt);
                if (e0 == L || e1 == L) cross(L, k00, k01, xl, yb, xl, yt);
                if (e0 == R || e1 == R) cross(R, k10, k11, xr, yb, xr, yt);
                segs.push_back({e0, e1});
            };
            switch (code) {
                case 1: case 14: emit(B, L); break;
                case 2: case 13: emit(B, R); break;
                case 4: case 11: emit(R, T); break;
                case 8: case 7:  emit(T, L); break;
                case 3: case 12: emit(L, R); break;
                case 6: case 9:  emit(B, T); break;
                case 5: case 10: {
                    // saddle: the plaquette average decides which corners connect
                    double mid = 0.25 * (d00 + d10 + d01 + d11);
                    bool centerPos = mid >= 0;
                    bool cornerPos = code == 5;  // d00 and d11 nonnegative
                    if (centerPos == cornerPos) {
                        emit(B, R);
                        emit(T, L);
                    } else {
                        emit(B, L);
                        emit(R, T);
                    }
                    break;
                }
            }
        }

    // chain segments into polylines; edge ids of degree one seed open paths
    std::map<long long, std::vector<int>> adj;
    for (std::size_t s = 0; s < segs.size(); ++s) {
        adj[segs[s].e0].push_back(static_cast<int>(s));
        adj[segs[s].e1].push_back(static_cast<int>(s));
    }
    std::vector<char> used(segs.size(), 0);
    std::vector<Polyline> out;
    auto walk = [&](long long start, bool closed) {
        Polyline pl;
        pl.ci = ci;
        pl.cj = cj;
        pl.closed = closed;
        long long cur = start;
        pl.pts.push_back(pts.at(cur));
        for (;;) {
            int next = -1;
            for (int s : adj[cur])
                if (!used[s]) {
                    next = s;
                    break;
                }
            if (next < 0) break;
            used[next] = 1;
            cur = segs[next].e0 == cur ? segs[next].e1 : segs[next].e0;
            pl.pts.push_back(pts.at(cur));
        }
        out.push_back(std::move(pl));
    };
    for (const auto& [eid, incident] : adj)
        if (incident.size() == 1 && !used[incident[0]]) walk(eid, false);
    for (const auto& [eid, incident] : adj)
        for (int s : incident)
            if (!used[s]) walk(eid, true);
    return out;
}

}  // namespace

std::vector<Polyline> extract_interfaces(const Grid& g, const Field3& f, double tau) {
    const double t = zero_level(f, tau);
    std::vector<Polyline> out;
    for (auto [ci, cj] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
        auto part = march_pair(g, f, ci, cj, t);
        out.insert(out.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
    }
    return out;
}

int count_loops(const Grid& g, const std::vector<Polyline>& interfaces) {
    const double snap = 4.0 * g.h;
    std::vector<std::array<double, 2>> ends;
    for (const auto& pl : interfaces) {
        if (pl.pts.empty()) throw std::invalid_argument("count_loops: empty polyline");
        ends.push_back(pl.pts.front());
        ends.push_back(pl.pts.back());
    }
    const int m = static_cast<int>(ends.size());
    UnionFind vert(m);
    for (int p = 0; p < m; ++p)
        for (int q = p + 1; q < m; ++q) {
            double dx = ends[p][0] - ends[q][0], dy = ends[p][1] - ends[q][1];
            if (std::hypot(dx, dy) <= snap) vert.unite(p, q);
        }
    std::vector<int> roots;
    for (int p = 0; p < m; ++p) roots.push_back(vert.find(p));
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    const int V = static_cast<int>(roots.size());
    UnionFind graph(m);
    for (int e = 0; e < m / 2; ++e) graph.unite(vert.find(2 * e), vert.find(2 * e + 1));
    std::vector<int> comps;
    for (int r : roots) comps.push_back(graph.find(r));
    std::sort(comps.begin(), comps.end());
    comps.erase(std::unique(comps.begin(), comps.end()), comps.end());
    const int C = static_cast<int>(comps.size());
    const int E = m / 2;
    return E - V + C;
}

PartitionReport check_partition(const Grid& g, const Field3& f, double tau) {
    const double t = zero_level(f, tau);
    const int n = g.n;
    PartitionReport rep;

    std::array<std::vector<char>, 3> below;
    std::size_t interiorCount = g.count(CellClass::Interior);
    for (int c = 0; c < 3; ++c) {
        below[c].assign(g.cls.size(), 0);
        std::size_t cnt = 0;
        for (std::size_t k = 0; k < g.cls.size(); ++k)
            if (g.cls[k] == CellClass::Interior && f.u[c][k] < t) {
                below[c][k] = 1;
                ++cnt;
            }
        if (cnt == interiorCount && rep.degenerateComponent < 0)
            rep.degenerateComponent = c;
    }

    // 1-erosions must be pairwise disjoint
    std::array<std::vector<char>, 3> eroded;
    for (int c = 0; c < 3; ++c) {
        eroded[c].assign(g.cls.size(), 0);
        for (int j = 1; j + 1 < n; ++j)
            for (int i = 1; i + 1 < n; ++i) {
                int k = g.idx(i, j);
                if (below[c][k] && below[c][k - 1] && below[c][k + 1] && below[c][k - n] &&
                    below[c][k + n])
                    eroded[c][k] = 1;
            }
    }
    bool disjoint = true;
    for (std::size_t k = 0; k < g.cls.size() && disjoint; ++k)
        if (eroded[0][k] + eroded[1][k] + eroded[2][k] > 1) disjoint = false;

    // cover: below-threshold for some component, or within one cell of an
    // interface plaquette corner
    auto interfaces = extract_interfaces(g, f, tau);
    std::vector<char> nearIface(g.cls.size(), 0);
    auto markDisk = [&](double px, double py) {
        int i0 = static_cast<int>(std::floor((px - g.x0) / g.h));
        int j0 = static_cast<int>(std::floor((py - g.y0) / g.h));
        for (int dj = -1; dj <= 2; ++dj)
            for (int di = -1; di <= 2; ++di) {
                int i = i0 + di, j = j0 + dj;
                if (i >= 0 && i < n && j >= 0 && j < n) nearIface[g.idx(i, j)] = 1;
            }
    };
    for (const auto& pl : interfaces)
        for (const auto& p : pl.pts) markDisk(p[0], p[1]);
    bool covered = true;
    for (int j = 0; j < n && covered; ++j)
        for (int i = 0; i < n; ++i) {
            int k = g.idx(i, j);
            if (g.cls[k] != CellClass::Interior) continue;
            if (below[0][k] || below[1][k] || below[2][k] || nearIface[k]) continue;
            covered = false;
            break;
        }
    rep.partitionOk = disjoint && covered;

    // every below-threshold cell must sit near a solid same-component cluster
    bool closure = true;
    for (int c = 0; c < 3 && closure; ++c) {
        std::vector<int> clusterSize(g.cls.size(), 0);
        std::vector<int> label(g.cls.size(), -1);
        int nlab = 0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                int k = g.idx(i, j);
                if (!below[c][k] || label[k] >= 0) continue;
                int lab = nlab++;
                int sz = 0;
                std::queue<int> q;
                q.push(k);
                label[k] = lab;
                std::vector<int> members;
                while (!q.empty()) {
                    int cur = q.front();
                    q.pop();
                    ++sz;
                    members.push_back(cur);
                    int ci2 = cur % n, cj2 = cur / n;
                    const int nb[4] = {cur - 1, cur + 1, cur - n, cur + n};
                    const bool ok[4] = {ci2 > 0, ci2 + 1 < n, cj2 > 0, cj2 + 1 < n};
                    for (int d = 0; d < 4; ++d)
                        if (ok[d] && below[c][nb[d]] && label[nb[d]] < 0) {
                            label[nb[d]] = lab;
                            q.push(nb[d]);
                        }
                }
                for (int mcell : members) clusterSize[mcell] = sz;
            }
        std::vector<char> solid(g.cls.size(), 0);
        for (std::size_t k = 0; k < g.cls.size(); ++k)
            if (below[c][k] && clusterSize[k] >= 4) solid[k] = 1;
        for (int j = 0; j < n && closure; ++j)
            for (int i = 0; i < n; ++i) {
                int k = g.idx(i, j);
                if (!below[c][k]) continue;
                bool near = false;
                for (int dj = -2; dj <= 2 && !near; ++dj)
                    for (int di = -2; di <= 2; ++di) {
                        int i2 = i + di, j2 = j + dj;
                        if (i2 >= 0 && i2 < n && j2 >= 0 && j2 < n &&
                            solid[g.idx(i2, j2)]) {
                            near = true;
                            break;
                        }
                    }
                if (!near) {
                    closure = false;
                    break;
                }
            }
    }
    rep.zeroSetClosureOk = closure;
    return rep;
}

NodalClassification classify_nodal(const Grid& g, const Field3& f, double tau) {
    NodalClassification nc;
    nc.tau = tau;
    nc.multiplicity = multiplicity_map(g, f, tau);
    nc.triplePoints = detect_triple_points(g, f, tau);
    nc.interfaces = extract_interfaces(g, f, tau);
    nc.loopCount = count_loops(g, nc.interfaces);
    nc.partition = check_partition(g, f, tau);
    return nc;
}

double interface_direction(const Polyline& pl, std::array<double, 2> x0, double rmin,
                           double rmax) {
    double sc = 0.0, ss = 0.0;
    std::size_t m = pl.pts.size();
    if (pl.closed && m > 1) --m;  // first point repeats at the end
    int hits = 0;
    for (std::size_t p = 0; p < m; ++p) {
        double dx = pl.pts[p][0] - x0[0], dy = pl.pts[p][1] - x0[1];
        double r = std::hypot(dx, dy);
        if (r < rmin || r > rmax || r == 0.0) continue;
        sc += dx / r;
        ss += dy / r;
        ++hits;
    }
    if (hits == 0) return std::numeric_limits<double>::quiet_NaN();
    double th = std::atan2(ss, sc);
    if (th < 0) th += 6.283185307179586476925286766559;
    return th;
}

}  // namespace seglab
