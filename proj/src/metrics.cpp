// SPDX-License-Identifier: Apache-2.0
#include "lgt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lgt {

using nlohmann::json;

json MetricSet::to_json() const {
    if (task == TaskType::classification) {
        json j{{"accuracy", accuracy}, {"macro_f1", macro_f1}};
        if (auc)
            j["auc"] = *auc;
        else
            j["auc"] = nullptr;
        return j;
    }
    return json{{"mae", mae}, {"mse", mse}, {"r2", r2}};
}

MetricSet MetricSet::from_json(const json& j) {
    MetricSet m;
    if (j.contains("accuracy")) {
        m.task = TaskType::classification;
        m.accuracy = j.at("accuracy").get<double>();
        m.macro_f1 = j.at("macro_f1").get<double>();
        if (j.contains("auc") && !j.at("auc").is_null()) m.auc = j.at("auc").get<double>();
    } else {
        m.task = TaskType::regression;
        m.mae = j.at("mae").get<double>();
        m.mse = j.at("mse").get<double>();
        m.r2 = j.at("r2").get<double>();
    }
    return m;
}

json EpochMetrics::to_json() const {
    return json{{"epoch", epoch},
                {"train_loss", train_loss},
                {"val_loss", val_loss},
                {"metrics", metric_set.to_json()},
                {"train_metrics", train_metric_set.to_json()}};
}

EpochMetrics EpochMetrics::from_json(const json& j) {
    EpochMetrics m;
    m.epoch = j.at("epoch").get<int>();
    m.train_loss = j.at("train_loss").get<double>();
    m.val_loss = j.at("val_loss").get<double>();
    m.metric_set = MetricSet::from_json(j.at("metrics"));
    m.train_metric_set = MetricSet::from_json(j.at("train_metrics"));
    return m;
}

// One-vs-rest AUC for class c via the midrank statistic. Returns nullopt when
// the class has no positives or no negatives.
static std::optional<double> auc_one_vs_rest(const Matrix& probs,
                                             const std::vector<double>& targets, int cls) {
    const int n = probs.rows;
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return probs(a, cls) < probs(b, cls); });

    std::vector<double> rank(static_cast<std::size_t>(n), 0.0);
    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && probs(order[static_cast<std::size_t>(j + 1)], cls) ==
                                probs(order[static_cast<std::size_t>(i)], cls))
            ++j;
        const double midrank = 0.5 * static_cast<double>((i + 1) + (j + 1));
        for (int t = i; t <= j; ++t) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])] = midrank;
        i = j + 1;
    }

    double pos_rank_sum = 0.0;
    std::int64_t n_pos = 0;
    for (int s = 0; s < n; ++s) {
        if (static_cast<int>(targets[static_cast<std::size_t>(s)]) == cls) {
            pos_rank_sum += rank[static_cast<std::size_t>(s)];
            ++n_pos;
        }
    }
    const std::int64_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) return std::nullopt;
    return (pos_rank_sum - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1)) /
           (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

MetricSet compute_metrics(TaskType task, const Matrix& predictions,
                          const std::vector<double>& targets) {
    if (predictions.rows == 0 || predictions.rows != static_cast<int>(targets.size()))
        throw std::invalid_argument("compute_metrics: empty or shape-inconsistent inputs");

    MetricSet m;
    m.task = task;
    const int n = predictions.rows;

    if (task == TaskType::regression) {
        double abs_sum = 0.0, sq_sum = 0.0, mean = 0.0;
        for (int i = 0; i < n; ++i) mean += targets[static_cast<std::size_t>(i)];
        mean /= n;
        double ss_tot = 0.0;
        for (int i = 0; i < n; ++i) {
            const double e = predictions(i, 0) - targets[static_cast<std::size_t>(i)];
            abs_sum += std::abs(e);
            sq_sum += e * e;
            const double d = targets[static_cast<std::size_t>(i)] - mean;
            ss_tot += d * d;
        }
        m.mae = abs_sum / n;
        m.mse = sq_sum / n;
        const double ss_res = sq_sum;
        if (ss_tot > 0.0)
            m.r2 = 1.0 - ss_res / ss_tot;
        else
            m.r2 = ss_res == 0.0 ? 1.0 : 0.0;  // constant targets
        return m;
    }

    const int k = predictions.cols;
    std::vector<std::int64_t> tp(static_cast<std::size_t>(k), 0), fp(static_cast<std::size_t>(k), 0),
        fn(static_cast<std::size_t>(k), 0);
    std::int64_t correct = 0;
    for (int i = 0; i < n; ++i) {
        int arg = 0;
        for (int j = 1; j < k; ++j)
            if (predictions(i, j) > predictions(i, arg)) arg = j;
        const int y = static_cast<int>(targets[static_cast<std::size_t>(i)]);
        if (arg == y)
            ++correct;
        if (arg == y) {
            ++tp[static_cast<std::size_t>(y)];
        } else {
            ++fp[static_cast<std::size_t>(arg)];
            ++fn[static_cast<std::size_t>(y)];
        }
    }
    m.accuracy = static_cast<double>(correct) / n;

    double f1_sum = 0.0;
    for (int c = 0; c < k; ++c) {
        const double denom = 2.0 * static_cast<double>(tp[static_cast<std::size_t>(c)]) +
                             static_cast<double>(fp[static_cast<std::size_t>(c)]) +
                             static_cast<double>(fn[static_cast<std::size_t>(c)]);
        f1_sum += denom > 0.0 ? 2.0 * static_cast<double>(tp[static_cast<std::size_t>(c)]) / denom : 0.0;
    }
    m.macro_f1 = f1_sum / k;

    double auc_sum = 0.0;
    int auc_defined = 0;
    for (int c = 0; c < k; ++c) {
        if (auto a = auc_one_vs_rest(predictions, targets, c)) {
            auc_sum += *a;
            ++auc_defined;
        }
    }
    if (auc_defined > 0)
        m.auc = auc_sum / auc_defined;
    else
        m.auc = std::nullopt;
    return m;
}

}  // namespace lgt
