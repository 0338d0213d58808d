#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tropinit/metrics.hpp"
#include "tropinit/network.hpp"

namespace tropinit {

/// Archimedean spiral r = a + b*theta over [theta0, theta1] with
/// half-thickness w (the labeled strip).
struct SpiralParams {
    double a = 0.0;
    double b = 0.25;
    double theta0 = 1.5 * M_PI;
    double theta1 = 4.5 * M_PI;
    double w = 0.3;
};

/// Uniform samples on [-2,2]^2 labeled by disk membership. "single" uses the
/// left disk only; "double" labels the union. Radius 0.8, centers (-0.6, 0)
/// and (0.6, 0).
Dataset gen_disks(const std::string& which, int n, uint64_t seed);

/// Uniform samples on the window labeled by distance-to-spiral <= w.
Dataset gen_swiss(int n, uint64_t seed, const SpiralParams& sp = {}, const Box& window = {});

/// Euclidean distance from p to the spiral centerline (dense scan plus local
/// ternary refinement; deterministic).
double spiral_distance(Vec2 p, const SpiralParams& sp);

/// Probability raster, row 0 at the window's top edge, pixel-center samples.
struct DecisionMap {
    Mat values;
    Box window;
    double tau = 0.5;
};

DecisionMap render_decision_map(const NetworkSpec& spec, const Box& window, int grid_n);

struct ExperimentConfig {
    std::string experiment_case = "single";  // single | double | swiss
    Box window{};
    int train_n = 12000;
    int test_n = 3000;
    std::vector<int> hidden = {16, 32};
    std::vector<std::string> inits = {"random", "xavier", "kaiming", "he", "ours"};
    int grid_n = 200;
    uint64_t seed = 0;
    double tau = 0.5;
    double kappa_hidden = 30.0;
    double disk_r = 0.8;
    Vec2 c1{-0.6, 0.0}, c2{0.6, 0.0};
    TrainConfig train_cfg{};
    // swiss-roll block (spiral drawn at generator scale so the documented
    // cover constants fill the center budget)
    SpiralParams spiral{};
    double swiss_eps = 1.5;
    double swiss_voxel_ratio = 0.6;
    int swiss_budget = 120;
    int swiss_sides = 24;
    double swiss_kappa = 8.0;
    double swiss_lambda = 6.0;
    double swiss_alpha = 6.0;
    double swiss_tau = 0.5;
    double swiss_eta = 0.1;
    double swiss_delta = 0.2;
};

/// Per-case defaults; "swiss" switches to the wide window, the
/// generator-scale spiral, and early stopping.
ExperimentConfig default_config(const std::string& experiment_case);

struct RowResult {
    std::string row;
    std::string experiment_case;
    int H = 0;
    std::string init;
    MetricsReport init_metrics;
    MetricsReport final_metrics;
    LossCurve curve;
};

/// Full Table-style protocol for single/double: one row per (H, init scheme),
/// writing summary.csv, metrics.csv, curves/, maps/, contours/, specs/ under
/// outdir. Bit-reproducible for a fixed seed.
std::vector<RowResult> run_experiment(const ExperimentConfig& cfg, const std::string& outdir);

/// Cover pipeline for the swiss case: positives -> voxel+FPS cover ->
/// compiled two-layer spec with the OR head -> train with early stopping.
RowResult run_swiss(const ExperimentConfig& cfg, const std::string& outdir);

}  // namespace tropinit
