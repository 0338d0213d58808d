#pragma once

#include <string>
#include <vector>

#include "tropinit/common.hpp"
#include "tropinit/geometry.hpp"

namespace tropinit {

/// Gate sharpness and tolerance bundle for union compilation. kappa = 0
/// means the caller still has to choose one (margin_params leaves it open).
struct GateParams {
    double kappa = 0.0;   ///< inner gate sharpness
    double lambda = 0.0;  ///< outer squash sharpness; 0 takes the 4*a_delta floor
    double eta = 0.1;     ///< inner confidence tolerance, in (0, 1/2]
    double delta = 0.1;   ///< outer tolerance, in (0, 1/2)
};

/// Half-width of the uncertainty band of a gate: kappa^-1 ln((1-eta)/eta).
double band_halfwidth(double kappa, double eta);

/// Sharpness reaching confidence 1-eps_conf at distance t: (1/t) ln((1-eps)/eps).
double sharpness_for(double t, double eps_conf);

/// Tolerance defaults at half the guarantee bounds: eta = 1/(8M),
/// delta = 1/(8R), lambda = 4 ln((1-delta)/delta). kappa is left to the
/// caller (pair with sharpness_for).
GateParams margin_params(int M, int R);

enum class Act { logistic, identity, relu };

/// One dense layer; output = act(k * (W x + b)) elementwise for logistic,
/// W x + b for identity, max(0, W x + b) for relu (k applies to logistic only).
struct Layer {
    Mat W;
    std::vector<double> b;
    Act act = Act::logistic;
    double k = 1.0;
};

/// Decision head over the sum of the last layer's outputs:
/// logit = alpha * (sum - tau), decision 1{logit >= 0}.
struct Head {
    double tau = 0.0;
    double alpha = 1.0;
};

/// Geometric origin of a compiled spec, carried for serialization.
struct Provenance {
    std::string kind;  // convex | union | cover | ls1d | baseline
    std::vector<ConvexComponent> components;
    std::vector<Ball> balls;
    std::vector<int> sides;        // facets per ball for covers
    std::vector<double> centers;   // 1-d basis centers
    double kappa = 0.0, lambda = 0.0, eta = 0.0, delta = 0.0;
    double basis_k = 0.0;
};

struct NetworkSpec {
    std::vector<Layer> layers;
    Head head;
    Provenance provenance;
    std::vector<std::string> warnings;

    int input_dim() const { return layers.empty() ? 0 : static_cast<int>(layers.front().W.cols); }
};

/// One hidden layer of facet gates (weights -kappa u, biases kappa h) summed
/// against the counting threshold tau_m = m - 1/2.
NetworkSpec compile_convex(const ConvexComponent& comp, double kappa);

/// Two-layer union: all gates, then one soft-AND unit per component
/// (unit-sum incidence, bias -(m_r - 1/2), logistic at lambda), summed
/// against tau = 1/2. Guarantee-bound violations in params are reported as
/// warnings, not errors.
NetworkSpec compile_union(const std::vector<ConvexComponent>& comps, const GateParams& params);

/// Balls to circumscribed polytopes (facet count from eps_poly) to union.
NetworkSpec compile_ball_cover(const BallCover& cover, double eps_poly, const GateParams& params);

enum class Basis1d { sigmoid, relu };

struct Ls1dResult {
    bool ok = true;             ///< false: rank-deficient beyond ridge rescue
    double cond_estimate = 0.0; ///< Cholesky-based condition estimate of the normal matrix
    double ridge = 0.0;         ///< ridge that produced the accepted solve
    std::vector<double> alpha;  ///< basis weights, bias coefficient last
    NetworkSpec spec;
};

/// Least-squares fit of y over the basis {sigma(k(x - p_j))} (or relu(x - p_j))
/// plus a constant column, solved via Cholesky on the normal equations with
/// ridge escalation. The returned spec evaluates the fitted predictor with a
/// decision head at 1/2.
Ls1dResult ls_initializer_1d(const std::vector<double>& xs, const std::vector<double>& ys,
                             const std::vector<double>& centers, double k,
                             Basis1d basis = Basis1d::sigmoid);

}  // namespace tropinit
