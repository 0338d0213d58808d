#pragma once

// Independent reference implementations used by the unit and acceptance
// suites. Everything here is deliberately brute-force: the point is to cross
// a second, slower route to the same numbers, not to share code with the
// library under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "tropinit/common.hpp"
#include "tropinit/geometry.hpp"
#include "tropinit/harness.hpp"
#include "tropinit/network.hpp"
#include "tropinit/tropical.hpp"

namespace oracles {

using tropinit::Box;
using tropinit::Vec2;

/// O(n^4) symmetric Hausdorff distance between indicator sets on the same
/// inclusive lattice the library samples (spacing width/(n-1)).
inline std::optional<double> brute_hausdorff(const std::function<bool(Vec2)>& ind_a,
                                             const std::function<bool(Vec2)>& ind_b,
                                             const Box& window, int n) {
    std::vector<Vec2> a, b;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Vec2 p{window.x0 + i * window.width() / (n - 1),
                         window.y0 + j * window.height() / (n - 1)};
            if (ind_a(p)) a.push_back(p);
            if (ind_b(p)) b.push_back(p);
        }
    if (a.empty() || b.empty()) return std::nullopt;
    auto directed = [](const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
        double worst = 0.0;
        for (const auto& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : to) best = std::min(best, tropinit::norm(p - q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

/// Dense parameter scan of the spiral, no refinement. Sampled minima
/// overshoot the true distance by at most half an arc step.
inline double dense_spiral_distance(Vec2 p, const tropinit::SpiralParams& sp, int samples) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double th = sp.theta0 + (sp.theta1 - sp.theta0) * i / (samples - 1);
        const double r = sp.a + sp.b * th;
        const Vec2 q{r * std::cos(th), r * std::sin(th)};
        best = std::min(best, tropinit::norm(p - q));
    }
    return best;
}

/// Central-difference gradients of the full-batch BCE through the forward
/// pass only; layout matches Gradients (per layer, W row-major then b).
struct FdGrads {
    std::vector<tropinit::Mat> dW;
    std::vector<std::vector<double>> db;
};

inline FdGrads fd_gradients(const tropinit::NetworkSpec& spec, const tropinit::Dataset& data,
                            double h) {
    auto loss_at = [&](const tropinit::NetworkSpec& s) {
        return tropinit::bce_loss(tropinit::forward_probs(s, data.X), data.y);
    };
    FdGrads out;
    tropinit::NetworkSpec work = spec;
    for (size_t l = 0; l < work.layers.size(); ++l) {
        auto& layer = work.layers[l];
        tropinit::Mat dW(layer.W.rows, layer.W.cols);
        for (size_t idx = 0; idx < layer.W.a.size(); ++idx) {
            const double keep = layer.W.a[idx];
            layer.W.a[idx] = keep + h;
            const double up = loss_at(work);
            layer.W.a[idx] = keep - h;
            const double dn = loss_at(work);
            layer.W.a[idx] = keep;
            dW.a[idx] = (up - dn) / (2.0 * h);
        }
        std::vector<double> db(layer.b.size());
        for (size_t idx = 0; idx < layer.b.size(); ++idx) {
            const double keep = layer.b[idx];
            layer.b[idx] = keep + h;
            const double up = loss_at(work);
            layer.b[idx] = keep - h;
            const double dn = loss_at(work);
            layer.b[idx] = keep;
            db[idx] = (up - dn) / (2.0 * h);
        }
        out.dW.push_back(std::move(dW));
        out.db.push_back(std::move(db));
    }
    return out;
}

/// Normwise L2 relative error between analytic and finite-difference
/// gradients over the concatenation of all parameters.
inline double grad_rel_err(const tropinit::Gradients& an, const FdGrads& fd) {
    double diff2 = 0.0, ref2 = 0.0;
    for (size_t l = 0; l < an.dW.size(); ++l) {
        for (size_t i = 0; i < an.dW[l].a.size(); ++i) {
            const double d = an.dW[l].a[i] - fd.dW[l].a[i];
            diff2 += d * d;
            ref2 += fd.dW[l].a[i] * fd.dW[l].a[i];
        }
        for (size_t i = 0; i < an.db[l].size(); ++i) {
            const double d = an.db[l][i] - fd.db[l][i];
            diff2 += d * d;
            ref2 += fd.db[l][i] * fd.db[l][i];
        }
    }
    return std::sqrt(diff2) / std::max(std::sqrt(ref2), 1e-30);
}

/// Half-space membership with slack, straight from the facet data.
inline bool in_component(const tropinit::ConvexComponent& comp, const std::vector<double>& p,
                         double slack = 0.0) {
    for (const auto& f : comp.facets) {
        double s = 0.0;
        for (size_t i = 0; i < f.u.size(); ++i) s += f.u[i] * p[i];
        if (s > f.h + slack) return false;
    }
    return true;
}

/// Max-plus product: exponents add, coefficients add, collisions keep the max.
inline tropinit::TropicalPolynomial trop_product(const tropinit::TropicalPolynomial& f,
                                                 const tropinit::TropicalPolynomial& g) {
    std::map<std::vector<int>, double> acc;
    for (const auto& mf : f.monomials())
        for (const auto& mg : g.monomials()) {
            std::vector<int> u(mf.u.size());
            for (size_t i = 0; i < u.size(); ++i) u[i] = mf.u[i] + mg.u[i];
            const double c = mf.c + mg.c;
            auto it = acc.find(u);
            if (it == acc.end())
                acc.emplace(std::move(u), c);
            else
                it->second = std::max(it->second, c);
        }
    std::vector<tropinit::Monomial> ms;
    for (auto& [u, c] : acc) ms.push_back({u, c});
    return tropinit::TropicalPolynomial(f.dim(), std::move(ms));
}

/// Max-plus line with apex at (px, py): max{x - px, y - py, 0}.
inline tropinit::TropicalPolynomial trop_line(double px, double py) {
    return tropinit::TropicalPolynomial(
        2, {{{1, 0}, -px}, {{0, 1}, -py}, {{0, 0}, 0.0}});
}

/// Doubled area of a lattice polygon (shoelace over int coordinates, exact).
inline long long doubled_area(const std::vector<tropinit::LatticePoint>& poly) {
    long long s = 0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % poly.size()];
        s += static_cast<long long>(p.x) * q.y - static_cast<long long>(q.x) * p.y;
    }
    return s < 0 ? -s : s;
}

/// Strictly convex CCW polygon: m distinct angles on one circle (no three
/// points of a circle are collinear), angles kept 0.15 rad apart.
inline std::vector<Vec2> random_convex_polygon(tropinit::Rng& rng, int m, Vec2 center,
                                               double radius) {
    std::vector<double> ang;
    while (true) {
        ang.clear();
        for (int i = 0; i < m; ++i) ang.push_back(rng.uniform(0.0, 2.0 * M_PI));
        std::sort(ang.begin(), ang.end());
        bool ok = true;
        for (int i = 0; i < m; ++i) {
            const double gap = (i + 1 < m) ? ang[i + 1] - ang[i] : ang[0] + 2.0 * M_PI - ang[m - 1];
            if (gap < 0.15) ok = false;
        }
        if (ok) break;
    }
    std::vector<Vec2> v;
    for (double t : ang) v.push_back({center.x + radius * std::cos(t), center.y + radius * std::sin(t)});
    return v;
}

}  // namespace oracles
