#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <vector>

#include <json.hpp>

#include <mvclust/common.hpp>

namespace mvc {

/// Partition-agreement scores. acc/nmi/purity/f1 live in [0,1], ari in
/// [-1,1]; purity >= acc for every input pair.
struct MetricsReport {
    double acc = 0.0;
    double nmi = 0.0;
    double purity = 0.0;
    double f1 = 0.0;
    double ari = 0.0;
    int n = 0;
};

inline void to_json(nlohmann::json& j, const MetricsReport& m) {
    j = {{"acc", m.acc}, {"nmi", m.nmi}, {"purity", m.purity},
         {"f1", m.f1},   {"ari", m.ari}, {"n", m.n}};
}

namespace detail {

// counts[i][j] = number of samples with truth class i and predicted
// cluster j, after compacting the label alphabets
struct Contingency {
    std::vector<std::vector<long>> counts;
    std::vector<long> truth_sizes;
    std::vector<long> pred_sizes;
    long n = 0;
};

inline std::vector<int> compact_labels(const std::vector<int>& raw, int& k) {
    std::map<int, int> remap;
    std::vector<int> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto [it, inserted] = remap.emplace(raw[i], static_cast<int>(remap.size()));
        out[i] = it->second;
    }
    k = static_cast<int>(remap.size());
    return out;
}

inline Contingency contingency(const std::vector<int>& truth, const std::vector<int>& pred) {
    require(truth.size() == pred.size(), "metrics: label length mismatch");
    require(!truth.empty(), "metrics: empty input");
    int kt = 0, kp = 0;
    const auto t = compact_labels(truth, kt);
    const auto p = compact_labels(pred, kp);
    Contingency c;
    c.counts.assign(kt, std::vector<long>(kp, 0));
    c.truth_sizes.assign(kt, 0);
    c.pred_sizes.assign(kp, 0);
    c.n = static_cast<long>(truth.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        ++c.counts[t[i]][p[i]];
        ++c.truth_sizes[t[i]];
        ++c.pred_sizes[p[i]];
    }
    return c;
}

// O(k^3) assignment on a square cost matrix; row i is matched to
// column match[i]. Exact on integer-valued costs.
inline double hungarian_min_cost(const std::vector<std::vector<double>>& cost) {
    const int k = static_cast<int>(cost.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0);
    std::vector<int> match(k + 1, 0), way(k + 1, 0);
    for (int i = 1; i <= k; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(k + 1, inf);
        std::vector<bool> used(k + 1, false);
        do {
            used[j0] = true;
            const int i0 = match[j0];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= k; ++j) {
                if (used[j])
                    continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= k; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }
    double total = 0.0;
    for (int j = 1; j <= k; ++j)
        if (match[j])
            total += cost[match[j] - 1][j - 1];
    return total;
}

inline double comb2(long x) { return x < 2 ? 0.0 : 0.5 * static_cast<double>(x) * (x - 1); }

}  // namespace detail

/// Best one-to-one cluster-to-class matching: optimal assignment on the
/// contingency table padded square with zeros.
inline double accuracy(const std::vector<int>& truth, const std::vector<int>& pred) {
    const auto c = detail::contingency(truth, pred);
    const int k = static_cast<int>(std::max(c.counts.size(), c.counts.front().size()));
    std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < c.counts.size(); ++i)
        for (std::size_t j = 0; j < c.counts[i].size(); ++j)
            cost[i][j] = -static_cast<double>(c.counts[i][j]);
    return -detail::hungarian_min_cost(cost) / static_cast<double>(c.n);
}

/// Mutual information normalized by the geometric mean of the entropies
/// (natural logs). Two degenerate single-cluster partitions score 1;
/// when exactly one side is degenerate the score is 0.
inline double nmi(const std::vector<int>& truth, const std::vector<int>& pred) {
    const auto c = detail::contingency(truth, pred);
    const double n = static_cast<double>(c.n);
    double ht = 0.0, hp = 0.0, mi = 0.0;
    for (long a : c.truth_sizes)
        ht -= a / n * std::log(a / n);
    for (long b : c.pred_sizes)
        hp -= b / n * std::log(b / n);
    for (std::size_t i = 0; i < c.counts.size(); ++i)
        for (std::size_t j = 0; j < c.counts[i].size(); ++j)
            if (c.counts[i][j] > 0) {
                const double nij = static_cast<double>(c.counts[i][j]);
                mi += nij / n *
                      std::log(n * nij /
                               (static_cast<double>(c.truth_sizes[i]) * c.pred_sizes[j]));
            }
    if (ht <= 0.0 && hp <= 0.0)
        return 1.0;  // both single-cluster, hence identical
    if (ht <= 0.0 || hp <= 0.0)
        return 0.0;
    return std::clamp(mi / std::sqrt(ht * hp), 0.0, 1.0);
}

/// Fraction covered by the majority true class of each predicted cluster.
inline double purity(const std::vector<int>& truth, const std::vector<int>& pred) {
    const auto c = detail::contingency(truth, pred);
    long hits = 0;
    for (std::size_t j = 0; j < c.pred_sizes.size(); ++j) {
        long best = 0;
        for (std::size_t i = 0; i < c.counts.size(); ++i)
            best = std::max(best, c.counts[i][j]);
        hits += best;
    }
    return static_cast<double>(hits) / static_cast<double>(c.n);
}

/// Pair-counting F1 over all n(n-1)/2 sample pairs. The degenerate case
/// with no positive pair on either side scores 1.
inline double pairwise_f1(const std::vector<int>& truth, const std::vector<int>& pred) {
    const auto c = detail::contingency(truth, pred);
    double tp = 0.0;
    for (const auto& row : c.counts)
        for (long nij : row)
            tp += detail::comb2(nij);
    double same_truth = 0.0, same_pred = 0.0;
    for (long a : c.truth_sizes)
        same_truth += detail::comb2(a);
    for (long b : c.pred_sizes)
        same_pred += detail::comb2(b);
    const double fp = same_pred - tp;
    const double fn = same_truth - tp;
    const double denom = 2.0 * tp + fp + fn;
    return denom <= 0.0 ? 1.0 : 2.0 * tp / denom;
}

/// Adjusted Rand index (chance-corrected; can be negative). Identical
/// partitions score 1, including the degenerate all-singleton and
/// single-cluster cases where the adjustment denominator vanishes.
inline double ari(const std::vector<int>& truth, const std::vector<int>& pred) {
    const auto c = detail::contingency(truth, pred);
    double index = 0.0;
    for (const auto& row : c.counts)
        for (long nij : row)
            index += detail::comb2(nij);
    double sum_a = 0.0, sum_b = 0.0;
    for (long a : c.truth_sizes)
        sum_a += detail::comb2(a);
    for (long b : c.pred_sizes)
        sum_b += detail::comb2(b);
    const double pairs = detail::comb2(c.n);
    if (pairs <= 0.0)
        return 1.0;  // single sample
    const double expected = sum_a * sum_b / pairs;
    const double maximum = 0.5 * (sum_a + sum_b);
    if (maximum - expected == 0.0)
        return 1.0;
    return (index - expected) / (maximum - expected);
}

inline MetricsReport evaluate(const std::vector<int>& truth, const std::vector<int>& pred) {
    MetricsReport report;
    report.acc = accuracy(truth, pred);
    report.nmi = nmi(truth, pred);
    report.purity = purity(truth, pred);
    report.f1 = pairwise_f1(truth, pred);
    report.ari = ari(truth, pred);
    report.n = static_cast<int>(truth.size());
    return report;
}

}  // namespace mvc
