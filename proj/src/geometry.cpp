#include "tropinit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

namespace tropinit {

namespace {

constexpr double kBig = 1e20;

/// Felzenszwalb-Huttenlocher 1-d squared distance transform on samples with
/// uniform spacing s. f holds input squared distances, d the output.
void dt1d(const double* f, double* d, int n, double s, int* v, double* z) {
    int k = 0;
    v[0] = 0;
    z[0] = -kBig;
    z[1] = kBig;
    for (int q = 1; q < n; ++q) {
        const double xq = q * s;
        while (true) {
            const double xv = v[k] * s;
            const double inter = (f[q] + xq * xq - f[v[k]] - xv * xv) / (2 * xq - 2 * xv);
            if (inter <= z[k] && k > 0) {
                --k;
            } else {
                ++k;
                v[k] = q;
                z[k] = inter;
                z[k + 1] = kBig;
                break;
            }
        }
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        const double x = q * s;
        while (z[k + 1] < x) ++k;
        const double dx = x - v[k] * s;
        d[q] = dx * dx + f[v[k]];
    }
}

/// Squared Euclidean distance to the mask's true cells over an n x n grid
/// with spacings (dx, dy); row-major with index iy*n + ix.
std::vector<double> edt2(const std::vector<uint8_t>& mask, int n, double dx, double dy) {
    std::vector<double> g(size_t(n) * n);
    for (size_t i = 0; i < g.size(); ++i) g[i] = mask[i] ? 0.0 : kBig;
    std::vector<double> f(n), d(n), z(size_t(n) + 1);
    std::vector<int> v(n);
    for (int iy = 0; iy < n; ++iy) {
        dt1d(&g[size_t(iy) * n], d.data(), n, dx, v.data(), z.data());
        std::copy(d.begin(), d.end(), g.begin() + size_t(iy) * n);
    }
    for (int ix = 0; ix < n; ++ix) {
        for (int iy = 0; iy < n; ++iy) f[iy] = g[size_t(iy) * n + ix];
        dt1d(f.data(), d.data(), n, dy, v.data(), z.data());
        for (int iy = 0; iy < n; ++iy) g[size_t(iy) * n + ix] = d[iy];
    }
    return g;
}

}  // namespace

ConvexComponent polygon_facets(const std::vector<Vec2>& vertices) {
    const size_t n = vertices.size();
    if (n < 3) throw std::invalid_argument("polygon_facets: need at least 3 vertices");
    for (size_t i = 0; i < n; ++i) {
        const Vec2 a = vertices[i];
        const Vec2 b = vertices[(i + 1) % n];
        const Vec2 c = vertices[(i + 2) % n];
        const double turn = cross(b - a, c - b);
        if (!(turn > 0.0))
            throw std::invalid_argument("polygon_facets: vertex " + std::to_string((i + 1) % n) +
                                        " breaks strict CCW convexity");
    }
    ConvexComponent out;
    out.dim = 2;
    for (size_t i = 0; i < n; ++i) {
        const Vec2 a = vertices[i];
        const Vec2 e = vertices[(i + 1) % n] - a;
        const double len = norm(e);
        if (len <= 1e-14)
            throw std::invalid_argument("polygon_facets: vertex " + std::to_string(i) +
                                        " repeats its successor");
        const Vec2 u{e.y / len, -e.x / len};  // right normal of a CCW edge points outward
        out.facets.push_back({{u.x, u.y}, u.x * a.x + u.y * a.y});
    }
    return out;
}

ConvexComponent ball_polytope(const std::vector<double>& c, double r, int m, int d, uint64_t seed) {
    if (d < 2) throw std::invalid_argument("ball_polytope: dimension must be at least 2");
    if (static_cast<int>(c.size()) != d)
        throw std::invalid_argument("ball_polytope: center dimension mismatch");
    if (!(r > 0.0)) throw std::invalid_argument("ball_polytope: radius must be positive");
    if (m < d + 1)
        throw std::invalid_argument("ball_polytope: need at least " + std::to_string(d + 1) +
                                    " facets to bound");
    ConvexComponent out;
    out.dim = d;
    std::vector<std::vector<double>> dirs;
    if (d == 2) {
        for (int l = 0; l < m; ++l) {
            const double a = 2.0 * M_PI * l / m;
            dirs.push_back({std::cos(a), std::sin(a)});
        }
    } else if (d == 3) {
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (int l = 0; l < m; ++l) {
            const double z = 1.0 - 2.0 * (l + 0.5) / m;
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * l;
            dirs.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
        }
    } else {
        Rng rng(seed);
        while (static_cast<int>(dirs.size()) < m) {
            std::vector<double> u(d);
            double s = 0.0;
            for (double& ui : u) {
                ui = rng.normal();
                s += ui * ui;
            }
            if (s < 1e-24) continue;
            const double inv = 1.0 / std::sqrt(s);
            for (double& ui : u) ui *= inv;
            dirs.push_back(std::move(u));
        }
    }
    for (auto& u : dirs) {
        double h = r;
        for (int i = 0; i < d; ++i) h += u[i] * c[i];
        out.facets.push_back({std::move(u), h});
    }
    return out;
}

double circumscribed_error(int m, double r) {
    if (m < 3) throw std::invalid_argument("circumscribed_error: m must be at least 3");
    if (!(r > 0.0)) throw std::invalid_argument("circumscribed_error: radius must be positive");
    return r * (1.0 / std::cos(M_PI / m) - 1.0);
}

int facet_count_for_tolerance(double r, double eps_poly, int d) {
    if (!(r > 0.0) || !(eps_poly > 0.0))
        throw std::invalid_argument("facet_count_for_tolerance: r and eps must be positive");
    if (d < 2) throw std::invalid_argument("facet_count_for_tolerance: dimension must be at least 2");
    if (d == 2) {
        for (int m = 3;; ++m)
            if (circumscribed_error(m, r) <= eps_poly) return m;
    }
    const double count = std::pow(M_PI * r / eps_poly, 0.5 * (d - 1));
    return std::max(d + 1, static_cast<int>(std::ceil(count)));
}

std::optional<double> grid_hausdorff(const std::function<bool(Vec2)>& ind_a,
                                     const std::function<bool(Vec2)>& ind_b, const Box& window,
                                     int n) {
    if (n < 32) throw std::invalid_argument("grid_hausdorff: grid must be at least 32 per axis");
    const double dx = window.width() / (n - 1);
    const double dy = window.height() / (n - 1);
    std::vector<uint8_t> ma(size_t(n) * n), mb(size_t(n) * n);
    size_t ca = 0, cb = 0;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const Vec2 p{window.x0 + ix * dx, window.y0 + iy * dy};
            const size_t idx = size_t(iy) * n + ix;
            ca += (ma[idx] = ind_a(p) ? 1 : 0);
            cb += (mb[idx] = ind_b(p) ? 1 : 0);
        }
    if (ca == 0 || cb == 0) return std::nullopt;
    const auto da = edt2(ma, n, dx, dy);
    const auto db = edt2(mb, n, dx, dy);
    double worst = 0.0;
    for (size_t i = 0; i < ma.size(); ++i) {
        if (ma[i]) worst = std::max(worst, db[i]);
        if (mb[i]) worst = std::max(worst, da[i]);
    }
    return std::sqrt(worst);
}

std::vector<Vec2> voxel_downsample(const std::vector<Vec2>& points, double v) {
    if (!(v > 0.0)) throw std::invalid_argument("voxel_downsample: voxel size must be positive");
    std::set<std::pair<int64_t, int64_t>> seen;
    std::vector<Vec2> out;
    for (const Vec2& p : points) {
        const auto cell = std::pair(int64_t(std::floor(p.x / v)), int64_t(std::floor(p.y / v)));
        if (seen.insert(cell).second) out.push_back(p);
    }
    return out;
}

std::vector<int> farthest_point_sampling(const std::vector<Vec2>& points, int k, int start) {
    const int n = static_cast<int>(points.size());
    if (k < 1 || k > n)
        throw std::invalid_argument("farthest_point_sampling: k must be between 1 and the point count");
    if (start >= n) throw std::invalid_argument("farthest_point_sampling: start index out of range");
    int first = start;
    if (first < 0) {
        Vec2 centroid{0.0, 0.0};
        for (const Vec2& p : points) centroid = centroid + p;
        centroid = (1.0 / n) * centroid;
        first = 0;
        double best = norm2(points[0] - centroid);
        for (int i = 1; i < n; ++i) {
            const double d = norm2(points[i] - centroid);
            if (d > best) {
                best = d;
                first = i;
            }
        }
    }
    std::vector<int> chosen{first};
    std::vector<double> mind(n);
    for (int i = 0; i < n; ++i) mind[i] = norm2(points[i] - points[first]);
    while (static_cast<int>(chosen.size()) < k) {
        int next = 0;
        for (int i = 1; i < n; ++i)
            if (mind[i] > mind[next]) next = i;
        chosen.push_back(next);
        for (int i = 0; i < n; ++i) mind[i] = std::min(mind[i], norm2(points[i] - points[next]));
    }
    return chosen;
}

std::optional<BallCover> ball_cover_from_positives(const std::vector<Vec2>& points, double eps,
                                                   double voxel_ratio, int budget) {
    if (!(eps > 0.0)) throw std::invalid_argument("ball_cover_from_positives: eps must be positive");
    if (!(voxel_ratio > 0.0) || voxel_ratio > 1.0)
        throw std::invalid_argument("ball_cover_from_positives: voxel_ratio must be in (0, 1]");
    if (budget < 1) throw std::invalid_argument("ball_cover_from_positives: budget must be positive");
    if (points.empty()) return std::nullopt;
    const auto survivors = voxel_downsample(points, eps * voxel_ratio);
    const int k = std::min<int>(budget, static_cast<int>(survivors.size()));
    BallCover cover;
    cover.dim = 2;
    for (int idx : farthest_point_sampling(survivors, k)) {
        const Vec2 p = survivors[idx];
        cover.balls.push_back({{p.x, p.y}, eps});
    }
    return cover;
}

}  // namespace tropinit
