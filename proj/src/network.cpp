#include "tropinit/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tropinit {

namespace {

void check_spec(const NetworkSpec& spec) {
    if (spec.layers.empty()) throw std::invalid_argument("network: spec has no layers");
    int width = spec.layers.front().W.cols;
    for (const auto& layer : spec.layers) {
        if (layer.W.cols != width) throw std::invalid_argument("network: layer shapes do not chain");
        if (static_cast<int>(layer.b.size()) != layer.W.rows)
            throw std::invalid_argument("network: bias length mismatch");
        width = layer.W.rows;
    }
}

void apply_act(const Layer& layer, Mat& z) {
    switch (layer.act) {
        case Act::logistic:
            for (double& v : z.a) v = logistic(layer.k * v);
            break;
        case Act::relu:
            for (double& v : z.a) v = v > 0.0 ? v : 0.0;
            break;
        case Act::identity:
            break;
    }
}

/// Forward pass keeping post-activation values per layer; acts[0] is the input.
std::vector<Mat> forward_cached(const NetworkSpec& spec, const Mat& X) {
    std::vector<Mat> acts;
    acts.reserve(spec.layers.size() + 1);
    acts.push_back(X);
    for (const auto& layer : spec.layers) {
        Mat z = mul_abt(acts.back(), layer.W);
        for (int i = 0; i < z.rows; ++i) {
            double* zi = z.row(i);
            for (int j = 0; j < z.cols; ++j) zi[j] += layer.b[j];
        }
        apply_act(layer, z);
        acts.push_back(std::move(z));
    }
    return acts;
}

std::vector<double> head_logits(const NetworkSpec& spec, const Mat& last) {
    std::vector<double> logits(last.rows);
    for (int i = 0; i < last.rows; ++i) {
        const double* row = last.row(i);
        double s = 0.0;
        for (int j = 0; j < last.cols; ++j) s += row[j];
        logits[i] = spec.head.alpha * (s - spec.head.tau);
    }
    return logits;
}

/// Backward pass from dL/dlogit, accumulating parameter gradients.
void backward(const NetworkSpec& spec, const std::vector<Mat>& acts,
              const std::vector<double>& dlogit, std::vector<Mat>& dW,
              std::vector<std::vector<double>>& db) {
    const size_t L = spec.layers.size();
    const Mat& last = acts[L];
    // d(logit)/d(last output) = alpha for every unit (heads sum all outputs)
    Mat g(last.rows, last.cols);
    for (int i = 0; i < g.rows; ++i) {
        double* gi = g.row(i);
        for (int j = 0; j < g.cols; ++j) gi[j] = spec.head.alpha * dlogit[i];
    }
    for (size_t l = L; l-- > 0;) {
        const Layer& layer = spec.layers[l];
        const Mat& h = acts[l + 1];
        switch (layer.act) {
            case Act::logistic:
                for (size_t i = 0; i < g.a.size(); ++i)
                    g.a[i] *= layer.k * h.a[i] * (1.0 - h.a[i]);
                break;
            case Act::relu:
                for (size_t i = 0; i < g.a.size(); ++i)
                    if (h.a[i] <= 0.0) g.a[i] = 0.0;
                break;
            case Act::identity:
                break;
        }
        Mat grad = mul_atb(g, acts[l]);
        for (size_t i = 0; i < grad.a.size(); ++i) dW[l].a[i] += grad.a[i];
        for (int i = 0; i < g.rows; ++i) {
            const double* gi = g.row(i);
            for (int j = 0; j < g.cols; ++j) db[l][j] += gi[j];
        }
        if (l > 0) g = mul_ab(g, layer.W);
    }
}

Mat gather_rows(const Mat& X, const std::vector<size_t>& idx, size_t begin, size_t end) {
    Mat out(static_cast<int>(end - begin), X.cols);
    for (size_t i = begin; i < end; ++i)
        std::copy(X.row(static_cast<int>(idx[i])), X.row(static_cast<int>(idx[i])) + X.cols,
                  out.row(static_cast<int>(i - begin)));
    return out;
}

}  // namespace

Forward forward(const NetworkSpec& spec, const std::vector<double>& x) {
    check_spec(spec);
    if (static_cast<int>(x.size()) != spec.layers.front().W.cols)
        throw std::invalid_argument("forward: input dimension mismatch");
    Mat X(1, static_cast<int>(x.size()));
    std::copy(x.begin(), x.end(), X.row(0));
    const auto acts = forward_cached(spec, X);
    const double logit = head_logits(spec, acts.back())[0];
    return {logit, logistic(logit)};
}

std::vector<double> forward_probs(const NetworkSpec& spec, const Mat& X) {
    check_spec(spec);
    if (X.cols != spec.layers.front().W.cols)
        throw std::invalid_argument("forward_probs: input dimension mismatch");
    const auto acts = forward_cached(spec, X);
    auto logits = head_logits(spec, acts.back());
    for (double& v : logits) v = logistic(v);
    return logits;
}

NetworkSpec init_baseline(const std::string& scheme, const std::vector<int>& widths,
                          uint64_t seed) {
    if (widths.size() < 2) throw std::invalid_argument("init_baseline: need input and output widths");
    for (int w : widths)
        if (w < 1) throw std::invalid_argument("init_baseline: widths must be positive");
    const bool random = scheme == "random", xavier = scheme == "xavier",
               kaiming = scheme == "kaiming", he = scheme == "he";
    if (!random && !xavier && !kaiming && !he)
        throw std::invalid_argument("init_baseline: unknown scheme '" + scheme + "'");

    Rng rng(seed);
    NetworkSpec spec;
    for (size_t l = 0; l + 1 < widths.size(); ++l) {
        const int fin = widths[l], fout = widths[l + 1];
        Layer layer;
        layer.W = Mat(fout, fin);
        layer.b.assign(fout, 0.0);
        layer.act = l + 2 == widths.size() ? Act::identity : Act::logistic;
        layer.k = 1.0;
        double bound = 0.5;
        if (xavier) bound = std::sqrt(6.0 / (fin + fout));
        if (kaiming) bound = std::sqrt(6.0 / fin);
        const double sigma = std::sqrt(2.0 / fin);
        for (double& w : layer.W.a) w = he ? sigma * rng.normal() : rng.uniform(-bound, bound);
        spec.layers.push_back(std::move(layer));
    }
    spec.head.tau = 0.0;
    spec.head.alpha = 1.0;
    spec.provenance.kind = "baseline";
    return spec;
}

double bce_loss(const std::vector<double>& probs, const std::vector<double>& labels) {
    if (probs.empty() || probs.size() != labels.size())
        throw std::invalid_argument("bce_loss: need equal nonempty prob/label lists");
    double s = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
        const double p = std::clamp(probs[i], 1e-7, 1.0 - 1e-7);
        s += labels[i] > 0.5 ? -std::log(p) : -std::log(1.0 - p);
    }
    return s / static_cast<double>(probs.size());
}

NetworkSpec trainable_form(const NetworkSpec& spec) {
    check_spec(spec);
    NetworkSpec out = spec;
    const bool trivial_head = out.head.tau == 0.0 && out.head.alpha == 1.0;
    if (trivial_head && out.layers.back().W.rows == 1) return out;
    const int w = out.layers.back().W.rows;
    Layer affine;
    affine.W = Mat(1, w);
    for (int j = 0; j < w; ++j) affine.W(0, j) = out.head.alpha;
    affine.b.assign(1, -out.head.alpha * out.head.tau);
    affine.act = Act::identity;
    affine.k = 1.0;
    out.layers.push_back(std::move(affine));
    out.head.tau = 0.0;
    out.head.alpha = 1.0;
    return out;
}

TrainResult train(const NetworkSpec& spec, const Dataset& data, const TrainConfig& cfg) {
    if (cfg.epochs < 1 || cfg.batch_size < 1)
        throw std::invalid_argument("train: epochs and batch size must be positive");
    if (!(cfg.learning_rate >= 0.0)) throw std::invalid_argument("train: bad learning rate");
    if (data.X.rows == 0 || data.X.rows != static_cast<int>(data.y.size()))
        throw std::invalid_argument("train: empty or inconsistent dataset");

    NetworkSpec net = trainable_form(spec);
    if (net.layers.front().W.cols != data.X.cols)
        throw std::invalid_argument("train: data dimension does not match the spec");

    // Optional 10% held-out validation split (seeded, disjoint from batches).
    std::vector<size_t> train_idx, val_idx;
    {
        const size_t n = static_cast<size_t>(data.X.rows);
        if (cfg.early_stop && n >= 10) {
            auto perm = Rng(derive_seed(cfg.seed, "val-split")).permutation(n);
            const size_t n_val = std::max<size_t>(1, n / 10);
            train_idx.assign(perm.begin(), perm.end() - n_val);
            val_idx.assign(perm.end() - n_val, perm.end());
        } else {
            train_idx.resize(n);
            for (size_t i = 0; i < n; ++i) train_idx[i] = i;
        }
    }
    Mat val_x;
    std::vector<double> val_y;
    if (!val_idx.empty()) {
        val_x = gather_rows(data.X, val_idx, 0, val_idx.size());
        for (size_t i : val_idx) val_y.push_back(data.y[i]);
    }

    const size_t L = net.layers.size();
    std::vector<Mat> dW(L), mW(L), vW(L);
    std::vector<std::vector<double>> db(L), mb(L), vb(L);
    for (size_t l = 0; l < L; ++l) {
        dW[l] = mW[l] = vW[l] = Mat(net.layers[l].W.rows, net.layers[l].W.cols);
        db[l].assign(net.layers[l].b.size(), 0.0);
        mb[l] = vb[l] = db[l];
    }

    Rng shuffler(derive_seed(cfg.seed, "shuffle"));
    LossCurve curve;
    double best_val = std::numeric_limits<double>::infinity();
    int stall = 0;
    NetworkSpec best_net;  // snapshot at the lowest validation loss so far
    int64_t step = 0;

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        auto order = shuffler.permutation(train_idx.size());
        std::vector<size_t> idx(train_idx.size());
        for (size_t i = 0; i < order.size(); ++i) idx[i] = train_idx[order[i]];

        double loss_sum = 0.0;
        int batch_no = 0;
        for (size_t begin = 0; begin < idx.size(); begin += cfg.batch_size, ++batch_no) {
            const size_t end = std::min(idx.size(), begin + cfg.batch_size);
            const Mat xb = gather_rows(data.X, idx, begin, end);
            const auto acts = forward_cached(net, xb);
            const auto logits = head_logits(net, acts.back());

            std::vector<double> probs(logits.size()), dlogit(logits.size());
            double loss = 0.0;
            for (size_t i = 0; i < logits.size(); ++i) {
                probs[i] = logistic(logits[i]);
                const double y = data.y[idx[begin + i]];
                const double p = std::clamp(probs[i], 1e-7, 1.0 - 1e-7);
                loss += y > 0.5 ? -std::log(p) : -std::log(1.0 - p);
                dlogit[i] = (probs[i] - y) / static_cast<double>(logits.size());
            }
            loss /= static_cast<double>(logits.size());
            if (!std::isfinite(loss))
                throw train_abort(epoch, batch_no, "train: non-finite loss at epoch " +
                                                       std::to_string(epoch) + ", batch " +
                                                       std::to_string(batch_no));
            loss_sum += loss * static_cast<double>(end - begin);

            for (size_t l = 0; l < L; ++l) {
                std::fill(dW[l].a.begin(), dW[l].a.end(), 0.0);
                std::fill(db[l].begin(), db[l].end(), 0.0);
            }
            backward(net, acts, dlogit, dW, db);

            ++step;
            const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
            for (size_t l = 0; l < L; ++l) {
                auto& layer = net.layers[l];
                for (size_t i = 0; i < layer.W.a.size(); ++i) {
                    const double g = dW[l].a[i];
                    mW[l].a[i] = cfg.beta1 * mW[l].a[i] + (1.0 - cfg.beta1) * g;
                    vW[l].a[i] = cfg.beta2 * vW[l].a[i] + (1.0 - cfg.beta2) * g * g;
                    layer.W.a[i] -= cfg.learning_rate * (mW[l].a[i] / bc1) /
                                    (std::sqrt(vW[l].a[i] / bc2) + cfg.eps_adam);
                }
                for (size_t i = 0; i < layer.b.size(); ++i) {
                    const double g = db[l][i];
                    mb[l][i] = cfg.beta1 * mb[l][i] + (1.0 - cfg.beta1) * g;
                    vb[l][i] = cfg.beta2 * vb[l][i] + (1.0 - cfg.beta2) * g * g;
                    layer.b[i] -= cfg.learning_rate * (mb[l][i] / bc1) /
                                  (std::sqrt(vb[l][i] / bc2) + cfg.eps_adam);
                }
            }
        }

        LossCurve::Point pt;
        pt.epoch = epoch;
        pt.train_bce = loss_sum / static_cast<double>(idx.size());
        if (!val_idx.empty()) {
            pt.val_bce = bce_loss(forward_probs(net, val_x), val_y);
            if (*pt.val_bce < best_val - cfg.early_stop->min_delta) {
                best_val = *pt.val_bce;
                best_net = net;
                stall = 0;
            } else if (++stall >= cfg.early_stop->patience) {
                curve.points.push_back(pt);
                curve.stopped_epoch = epoch;
                break;
            }
        }
        curve.points.push_back(pt);
    }
    // Early stopping hands back the best-validation snapshot, not wherever
    // the optimizer drifted during the patience window.
    if (!val_idx.empty() && !best_net.layers.empty()) net = std::move(best_net);
    return {std::move(net), std::move(curve)};
}

Gradients loss_gradients(const NetworkSpec& spec, const Dataset& data) {
    check_spec(spec);
    if (data.X.rows == 0 || data.X.rows != static_cast<int>(data.y.size()))
        throw std::invalid_argument("loss_gradients: empty or inconsistent dataset");
    Gradients out;
    const size_t L = spec.layers.size();
    out.dW.resize(L);
    out.db.resize(L);
    for (size_t l = 0; l < L; ++l) {
        out.dW[l] = Mat(spec.layers[l].W.rows, spec.layers[l].W.cols);
        out.db[l].assign(spec.layers[l].b.size(), 0.0);
    }
    const auto acts = forward_cached(spec, data.X);
    const auto logits = head_logits(spec, acts.back());
    std::vector<double> dlogit(logits.size());
    double loss = 0.0;
    for (size_t i = 0; i < logits.size(); ++i) {
        const double p = logistic(logits[i]);
        const double pc = std::clamp(p, 1e-7, 1.0 - 1e-7);
        loss += data.y[i] > 0.5 ? -std::log(pc) : -std::log(1.0 - pc);
        dlogit[i] = (p - data.y[i]) / static_cast<double>(logits.size());
    }
    out.loss = loss / static_cast<double>(logits.size());
    backward(spec, acts, dlogit, out.dW, out.db);
    return out;
}

}  // namespace tropinit
