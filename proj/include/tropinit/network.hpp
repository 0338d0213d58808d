#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tropinit/compiler.hpp"

namespace tropinit {

/// Labeled samples: X is n x d, y holds 0/1 labels.
struct Dataset {
    Mat X;
    std::vector<double> y;
};

struct Forward {
    double logit = 0.0;
    double prob = 0.5;
};

/// Single-point evaluation: propagate layers, sum the last layer's outputs,
/// apply the head (logit = alpha * (sum - tau)), report prob = sigma(logit).
Forward forward(const NetworkSpec& spec, const std::vector<double>& x);

/// Batched probabilities for every row of X.
std::vector<double> forward_probs(const NetworkSpec& spec, const Mat& X);

/// Baseline initializers over a widths chain (input, hidden..., output):
/// random U(-0.5, 0.5), xavier U(+-sqrt(6/(fin+fout))), kaiming
/// U(+-sqrt(6/fin)), he N(0, 2/fin). Hidden layers logistic, last identity,
/// biases zero. Deterministic in seed (weights drawn layer by layer,
/// row-major).
NetworkSpec init_baseline(const std::string& scheme, const std::vector<int>& widths,
                          uint64_t seed);

/// Mean binary cross-entropy with probs clamped to [1e-7, 1 - 1e-7].
double bce_loss(const std::vector<double>& probs, const std::vector<double>& labels);

struct EarlyStop {
    int patience = 10;
    double min_delta = 1e-4;
};

struct TrainConfig {
    int epochs = 80;
    int batch_size = 512;
    double learning_rate = 3e-3;
    uint64_t seed = 0;
    double beta1 = 0.9, beta2 = 0.999, eps_adam = 1e-8;
    std::optional<EarlyStop> early_stop;
};

struct LossCurve {
    struct Point {
        int epoch = 0;
        double train_bce = 0.0;
        std::optional<double> val_bce;
    };
    std::vector<Point> points;
    int stopped_epoch = -1;  ///< epoch where early stopping triggered, -1 if none
};

struct TrainResult {
    NetworkSpec spec;
    LossCurve curve;
};

/// Rewrite a spec so the head is trivial (tau 0, alpha 1) by appending an
/// equivalent affine layer when needed; logits are bit-identical, and the
/// head parameters become trainable. Idempotent.
NetworkSpec trainable_form(const NetworkSpec& spec);

/// Mini-batch Adam on BCE. Shuffling, and the 10% validation split used when
/// early stopping is requested, derive from cfg.seed. The returned spec is
/// the trainable form of the input; under early stopping it is the snapshot
/// from the best validation epoch. Non-finite loss raises train_abort.
TrainResult train(const NetworkSpec& spec, const Dataset& data, const TrainConfig& cfg);

/// Full-batch loss and analytic gradients in layer order, for oracle checks.
struct Gradients {
    double loss = 0.0;
    std::vector<Mat> dW;
    std::vector<std::vector<double>> db;
};
Gradients loss_gradients(const NetworkSpec& spec, const Dataset& data);

}  // namespace tropinit
