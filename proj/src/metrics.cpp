#include "tropinit/metrics.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <stdexcept>

namespace tropinit {

namespace {

void check_inputs(const std::vector<double>& probs, const std::vector<double>& labels,
                  bool require_unit_range) {
    if (probs.empty() || probs.size() != labels.size())
        throw std::invalid_argument("metrics: need equal nonempty score/label lists");
    for (double y : labels)
        if (y != 0.0 && y != 1.0) throw std::invalid_argument("metrics: labels must be 0 or 1");
    if (require_unit_range)
        for (double p : probs)
            if (!(p >= 0.0 && p <= 1.0))
                throw std::invalid_argument("metrics: probabilities must lie in [0, 1]");
}

}  // namespace

double brier(const std::vector<double>& probs, const std::vector<double>& labels) {
    check_inputs(probs, labels, true);
    double s = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
        const double d = probs[i] - labels[i];
        s += d * d;
    }
    return s / static_cast<double>(probs.size());
}

std::optional<double> auc(const std::vector<double>& scores, const std::vector<double>& labels) {
    check_inputs(scores, labels, false);
    std::vector<size_t> order(scores.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return scores[a] < scores[b]; });

    // Ascending sweep over exact-tie groups: each positive in a group beats
    // every negative below it and half-ties the group's own negatives.
    int64_t pos_total = 0, neg_total = 0, neg_below = 0, wins2 = 0;
    size_t i = 0;
    while (i < order.size()) {
        size_t j = i;
        int64_t pos_g = 0, neg_g = 0;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            (labels[order[j]] > 0.5 ? pos_g : neg_g) += 1;
            ++j;
        }
        wins2 += pos_g * (2 * neg_below + neg_g);
        neg_below += neg_g;
        pos_total += pos_g;
        neg_total += neg_g;
        i = j;
    }
    if (pos_total == 0 || neg_total == 0) return std::nullopt;
    return static_cast<double>(wins2) / (2.0 * static_cast<double>(pos_total) *
                                         static_cast<double>(neg_total));
}

std::optional<double> iou(const std::vector<double>& probs, const std::vector<double>& labels,
                          double tau) {
    check_inputs(probs, labels, true);
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("iou: tau must lie in (0, 1)");
    int64_t inter = 0, uni = 0;
    for (size_t i = 0; i < probs.size(); ++i) {
        const bool pred = probs[i] >= tau, truth = labels[i] == 1.0;
        inter += pred && truth;
        uni += pred || truth;
    }
    if (uni == 0) return std::nullopt;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

MetricsReport metrics_report(const std::vector<double>& probs, const std::vector<double>& labels,
                             double tau) {
    MetricsReport rep;
    rep.brier = brier(probs, labels);
    rep.auc = auc(probs, labels);
    rep.iou = iou(probs, labels, tau);
    rep.tau = tau;
    for (double y : labels) (y == 1.0 ? rep.n_pos : rep.n_neg) += 1;
    return rep;
}

std::string metrics_csv_row(const std::string& experiment_case, int H, const std::string& init,
                            const std::string& phase, const MetricsReport& report) {
    auto fmt = [](const std::optional<double>& v) -> std::string {
        if (!v) return "undefined";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", *v);
        return buf;
    };
    return experiment_case + "," + std::to_string(H) + "," + init + "," + phase + "," +
           fmt(report.brier) + "," + fmt(report.auc) + "," + fmt(report.iou);
}

}  // namespace tropinit
