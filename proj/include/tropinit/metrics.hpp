#pragma once

#include <optional>
#include <string>
#include <vector>

namespace tropinit {

/// Score triple at a fixed threshold. AUC is absent for single-class data,
/// IoU when both the predicted and the true positive sets are empty.
struct MetricsReport {
    double brier = 0.0;
    std::optional<double> auc;
    std::optional<double> iou;
    double tau = 0.5;
    int n_pos = 0;
    int n_neg = 0;
};

/// Mean squared error between probabilities and 0/1 labels.
double brier(const std::vector<double>& probs, const std::vector<double>& labels);

/// Exact pairwise Wilcoxon-Mann-Whitney statistic; ties (exact double
/// equality) count half. nullopt when a class is missing.
std::optional<double> auc(const std::vector<double>& scores, const std::vector<double>& labels);

/// Intersection over union of {p >= tau} and {y = 1}; nullopt on 0/0.
std::optional<double> iou(const std::vector<double>& probs, const std::vector<double>& labels,
                          double tau);

MetricsReport metrics_report(const std::vector<double>& probs, const std::vector<double>& labels,
                             double tau);

/// One long-format CSV row: case,H,init,phase,brier,auc,iou. Undefined
/// metrics render as the literal "undefined".
std::string metrics_csv_row(const std::string& experiment_case, int H, const std::string& init,
                            const std::string& phase, const MetricsReport& report);

}  // namespace tropinit
