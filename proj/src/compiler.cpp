#include "tropinit/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tropinit {

namespace {

void check_components(const std::vector<ConvexComponent>& comps) {
    if (comps.empty()) throw std::invalid_argument("compile: component list is empty");
    const int d = comps.front().dim;
    for (const auto& c : comps) {
        if (c.facets.empty()) throw std::invalid_argument("compile: component has no facets");
        if (c.dim != d) throw std::invalid_argument("compile: mixed component dimensions");
        if (!c.bounded) throw std::invalid_argument("compile: unbounded component");
        for (const auto& f : c.facets) {
            if (static_cast<int>(f.u.size()) != d)
                throw std::invalid_argument("compile: facet dimension mismatch");
            double n2 = 0.0;
            for (double ui : f.u) n2 += ui * ui;
            if (std::abs(n2 - 1.0) > 1e-10)
                throw std::invalid_argument("compile: facet normal is not unit length");
        }
    }
}

/// Gate rows -kappa*u | bias kappa*h for every facet of every component.
Layer gate_layer(const std::vector<ConvexComponent>& comps, double kappa) {
    const int d = comps.front().dim;
    int total = 0;
    for (const auto& c : comps) total += static_cast<int>(c.facets.size());
    Layer layer;
    layer.W = Mat(total, d);
    layer.b.assign(total, 0.0);
    layer.act = Act::logistic;
    layer.k = 1.0;
    int row = 0;
    for (const auto& c : comps)
        for (const auto& f : c.facets) {
            for (int j = 0; j < d; ++j) layer.W(row, j) = -kappa * f.u[j];
            layer.b[row] = kappa * f.h;
            ++row;
        }
    return layer;
}

/// Cholesky factorization of A (in place, lower triangle). Returns false on
/// a non-positive pivot.
bool cholesky(Mat& A) {
    const size_t n = A.rows;
    for (size_t j = 0; j < n; ++j) {
        double d = A(j, j);
        for (size_t k = 0; k < j; ++k) d -= A(j, k) * A(j, k);
        if (!(d > 0.0)) return false;
        const double s = std::sqrt(d);
        A(j, j) = s;
        for (size_t i = j + 1; i < n; ++i) {
            double v = A(i, j);
            for (size_t k = 0; k < j; ++k) v -= A(i, k) * A(j, k);
            A(i, j) = v / s;
        }
    }
    return true;
}

std::vector<double> cholesky_solve(const Mat& L, const std::vector<double>& rhs) {
    const size_t n = L.rows;
    std::vector<double> x(rhs);
    for (size_t i = 0; i < n; ++i) {
        for (size_t k = 0; k < i; ++k) x[i] -= L(i, k) * x[k];
        x[i] /= L(i, i);
    }
    for (size_t i = n; i-- > 0;) {
        for (size_t k = i + 1; k < n; ++k) x[i] -= L(k, i) * x[k];
        x[i] /= L(i, i);
    }
    return x;
}

}  // namespace

double band_halfwidth(double kappa, double eta) {
    if (!(kappa > 0.0)) throw std::invalid_argument("band_halfwidth: kappa must be positive");
    if (!(eta > 0.0) || eta > 0.5)
        throw std::invalid_argument("band_halfwidth: eta must lie in (0, 1/2]");
    return std::log((1.0 - eta) / eta) / kappa;
}

double sharpness_for(double t, double eps_conf) {
    if (!(t > 0.0)) throw std::invalid_argument("sharpness_for: distance must be positive");
    if (!(eps_conf > 0.0) || eps_conf > 0.5)
        throw std::invalid_argument("sharpness_for: confidence tolerance must lie in (0, 1/2]");
    return std::log((1.0 - eps_conf) / eps_conf) / t;
}

GateParams margin_params(int M, int R) {
    if (M < 1 || R < 1) throw std::invalid_argument("margin_params: M and R must be positive");
    GateParams p;
    p.eta = 1.0 / (8.0 * M);
    p.delta = 1.0 / (8.0 * R);
    p.lambda = 4.0 * std::log((1.0 - p.delta) / p.delta);
    p.kappa = 0.0;
    return p;
}

NetworkSpec compile_convex(const ConvexComponent& comp, double kappa) {
    check_components({comp});
    if (!(kappa > 0.0)) throw std::invalid_argument("compile_convex: kappa must be positive");
    const int m = static_cast<int>(comp.facets.size());
    NetworkSpec spec;
    spec.layers.push_back(gate_layer({comp}, kappa));
    spec.head.tau = m - 0.5;
    spec.head.alpha = 1.0;
    spec.provenance.kind = "convex";
    spec.provenance.components = {comp};
    spec.provenance.kappa = kappa;
    return spec;
}

NetworkSpec compile_union(const std::vector<ConvexComponent>& comps, const GateParams& params) {
    check_components(comps);
    if (!(params.kappa > 0.0)) throw std::invalid_argument("compile_union: kappa must be positive");
    if (!(params.eta > 0.0) || params.eta > 0.5)
        throw std::invalid_argument("compile_union: eta must lie in (0, 1/2]");
    if (!(params.delta > 0.0) || params.delta >= 0.5)
        throw std::invalid_argument("compile_union: delta must lie in (0, 1/2)");
    const int R = static_cast<int>(comps.size());
    int M = 0, total = 0;
    for (const auto& c : comps) {
        M = std::max(M, static_cast<int>(c.facets.size()));
        total += static_cast<int>(c.facets.size());
    }

    NetworkSpec spec;
    const double a_delta = std::log((1.0 - params.delta) / params.delta);
    const double lambda = std::max(params.lambda, 4.0 * a_delta);
    if (params.eta >= 1.0 / (4.0 * M))
        spec.warnings.push_back("eta exceeds the 1/(4M) guarantee bound; confidence margins are heuristic");
    if (params.delta > 1.0 / (4.0 * R))
        spec.warnings.push_back("delta exceeds the 1/(4R) guarantee bound; union separation is heuristic");
    if (M * params.eta >= 0.5)
        spec.warnings.push_back("M*eta >= 1/2: counting threshold clearance is not guaranteed");

    spec.layers.push_back(gate_layer(comps, params.kappa));
    Layer outer;
    outer.W = Mat(R, total);
    outer.b.assign(R, 0.0);
    outer.act = Act::logistic;
    outer.k = lambda;
    int col = 0;
    for (int r = 0; r < R; ++r) {
        const int mr = static_cast<int>(comps[r].facets.size());
        for (int j = 0; j < mr; ++j) outer.W(r, col + j) = 1.0;
        outer.b[r] = -(mr - 0.5);
        col += mr;
    }
    spec.layers.push_back(std::move(outer));
    spec.head.tau = 0.5;
    spec.head.alpha = 1.0;
    spec.provenance.kind = "union";
    spec.provenance.components = comps;
    spec.provenance.kappa = params.kappa;
    spec.provenance.lambda = lambda;
    spec.provenance.eta = params.eta;
    spec.provenance.delta = params.delta;
    return spec;
}

NetworkSpec compile_ball_cover(const BallCover& cover, double eps_poly, const GateParams& params) {
    if (cover.balls.empty()) throw std::invalid_argument("compile_ball_cover: empty cover");
    if (!(eps_poly > 0.0))
        throw std::invalid_argument("compile_ball_cover: eps_poly must be positive");
    std::vector<ConvexComponent> comps;
    std::vector<int> sides;
    for (size_t j = 0; j < cover.balls.size(); ++j) {
        const auto& ball = cover.balls[j];
        const int m = facet_count_for_tolerance(ball.r, eps_poly, cover.dim);
        comps.push_back(ball_polytope(ball.c, ball.r, m, cover.dim, static_cast<uint64_t>(j)));
        sides.push_back(m);
    }
    NetworkSpec spec = compile_union(comps, params);
    spec.provenance.kind = "cover";
    spec.provenance.balls = cover.balls;
    spec.provenance.sides = std::move(sides);
    return spec;
}

Ls1dResult ls_initializer_1d(const std::vector<double>& xs, const std::vector<double>& ys,
                             const std::vector<double>& centers, double k, Basis1d basis) {
    if (centers.empty()) throw std::invalid_argument("ls_initializer_1d: no basis centers");
    if (xs.size() != ys.size()) throw std::invalid_argument("ls_initializer_1d: xs/ys length mismatch");
    if (xs.size() < centers.size() + 1)
        throw std::invalid_argument("ls_initializer_1d: need more samples than basis functions");
    if (!(k > 0.0)) throw std::invalid_argument("ls_initializer_1d: k must be positive");

    const size_t n = xs.size(), m = centers.size(), p = m + 1;
    Mat phi(n, p);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < m; ++j)
            phi(i, j) = basis == Basis1d::sigmoid ? logistic(k * (xs[i] - centers[j]))
                                                  : std::max(0.0, xs[i] - centers[j]);
        phi(i, m) = 1.0;
    }
    Mat ata = mul_atb(phi, phi);
    std::vector<double> rhs(p, 0.0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < p; ++j) rhs[j] += phi(i, j) * ys[i];

    double trace = 0.0;
    for (size_t j = 0; j < p; ++j) trace += ata(j, j);
    const double scale = std::max(trace / p, 1.0);

    Ls1dResult res;
    const double ridges[] = {0.0, 1e-12, 1e-9, 1e-6};
    Mat L(0, 0);
    bool solved = false;
    for (double ridge : ridges) {
        L = ata;
        for (size_t j = 0; j < p; ++j) L(j, j) += ridge * scale;
        if (cholesky(L)) {
            res.ridge = ridge * scale;
            solved = true;
            break;
        }
    }
    if (!solved) {
        res.ok = false;
        res.cond_estimate = std::numeric_limits<double>::infinity();
        return res;
    }
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < p; ++j) {
        dmax = std::max(dmax, L(j, j));
        dmin = std::min(dmin, L(j, j));
    }
    res.cond_estimate = (dmax / dmin) * (dmax / dmin);
    res.alpha = cholesky_solve(L, rhs);

    Layer basis_layer;
    basis_layer.W = Mat(m, 1);
    basis_layer.b.assign(m, 0.0);
    basis_layer.act = basis == Basis1d::sigmoid ? Act::logistic : Act::relu;
    basis_layer.k = basis == Basis1d::sigmoid ? k : 1.0;
    for (size_t j = 0; j < m; ++j) {
        basis_layer.W(j, 0) = 1.0;
        basis_layer.b[j] = -centers[j];
    }
    Layer out;
    out.W = Mat(1, m);
    out.b.assign(1, res.alpha[m]);
    out.act = Act::identity;
    out.k = 1.0;
    for (size_t j = 0; j < m; ++j) out.W(0, j) = res.alpha[j];

    res.spec.layers = {std::move(basis_layer), std::move(out)};
    res.spec.head.tau = 0.5;
    res.spec.head.alpha = 1.0;
    res.spec.provenance.kind = "ls1d";
    res.spec.provenance.centers = centers;
    res.spec.provenance.basis_k = basis == Basis1d::sigmoid ? k : 0.0;
    return res;
}

}  // namespace tropinit
