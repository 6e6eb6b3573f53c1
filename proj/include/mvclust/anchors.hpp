#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include <mvclust/common.hpp>
#include <mvclust/filter.hpp>
#include <mvclust/graph.hpp>
#include <mvclust/kmeans.hpp>

namespace mvc {

enum class AnchorMode { kmeans, importance };

/// Per-view anchor matrices B^i (d_i x m, anchors as columns). In
/// importance mode one index list is shared across views and column j of
/// B^i is row ind[j] of the filtered view.
struct AnchorSet {
    AnchorMode mode = AnchorMode::kmeans;
    int m = 0;
    std::vector<Matrix> anchors;  // v matrices, d_i x m
    std::vector<int> indices;     // importance mode only; m distinct indices
};

/// Feature-mode anchors: per view independently, the m K-means centroids
/// of the smoothed view (same seed for every view).
inline AnchorSet anchors_by_kmeans(const FilteredViews& views, int m, std::uint64_t seed,
                                   int restarts = 10, int max_iter = 300, double tol = 1e-6) {
    require(!views.empty(), "anchors_by_kmeans: no views");
    require(m >= 1 && m <= views.front().rows(), "anchors_by_kmeans: need 1 <= m <= n");
    AnchorSet set;
    set.mode = AnchorMode::kmeans;
    set.m = m;
    for (const auto& x : views) {
        const KMeansResult result = kmeans(x, m, seed, restarts, max_iter, tol);
        set.anchors.push_back(result.centroids.transpose());
    }
    return set;
}

/// p_i proportional to q(i)^gamma where q(i) is node i's total degree
/// across all views. All-zero degrees degrade to uniform with a warning.
inline Vector importance_probabilities(const std::vector<SparseGraph>& graphs, double gamma) {
    require(!graphs.empty(), "importance_probabilities: no graphs");
    require(gamma > 0.0, "importance_probabilities: gamma must be positive");
    const int n = graphs.front().size();
    Vector q = Vector::Zero(n);
    for (const auto& a : graphs) {
        require(a.size() == n, "importance_probabilities: graph size mismatch");
        q += a.degrees();
    }
    if (q.sum() <= 0.0) {
        warn("importance sampling: all node degrees are zero, using uniform probabilities");
        return Vector::Constant(n, 1.0 / n);
    }
    Vector p = q.array().pow(gamma);
    return p / p.sum();
}

/// m distinct indices drawn sequentially: each draw picks from the
/// remaining indices with probability proportional to p, then the mass
/// is renormalized. Deterministic given the seed.
inline std::vector<int> sample_without_replacement(const Vector& p, int m, std::uint64_t seed) {
    const int n = static_cast<int>(p.size());
    require(m >= 1 && m <= n, "sample_without_replacement: need 1 <= m <= n");
    int positive = 0;
    for (int i = 0; i < n; ++i) {
        require(p[i] >= 0.0 && std::isfinite(p[i]), "sample_without_replacement: bad probability");
        if (p[i] > 0.0)
            ++positive;
    }
    require(m <= positive,
            "sample_without_replacement: insufficient positive-probability mass");

    Rng rng(seed);
    std::vector<bool> taken(n, false);
    std::vector<int> picked;
    picked.reserve(m);
    double mass = p.sum();
    for (int draw = 0; draw < m; ++draw) {
        const double u = rng.uniform() * mass;
        double cum = 0.0;
        int pick = -1;
        for (int i = 0; i < n; ++i) {
            if (taken[i] || p[i] <= 0.0)
                continue;
            cum += p[i];
            if (u < cum) {
                pick = i;
                break;
            }
        }
        if (pick < 0) {  // numerical tail: last remaining positive index
            for (int i = n - 1; i >= 0; --i)
                if (!taken[i] && p[i] > 0.0) {
                    pick = i;
                    break;
                }
        }
        taken[pick] = true;
        picked.push_back(pick);
        mass -= p[pick];
    }
    return picked;
}

/// Graph-mode anchors: column j of B^i is row ind[j] of the smoothed
/// view, with one shared index list across views.
inline AnchorSet build_anchor_matrices(const FilteredViews& views, const std::vector<int>& ind) {
    require(!views.empty(), "build_anchor_matrices: no views");
    require(!ind.empty(), "build_anchor_matrices: empty index list");
    const int n = static_cast<int>(views.front().rows());
    std::vector<int> sorted = ind;
    std::sort(sorted.begin(), sorted.end());
    require(sorted.front() >= 0 && sorted.back() < n, "build_anchor_matrices: index out of range");
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
            "build_anchor_matrices: duplicate index");

    AnchorSet set;
    set.mode = AnchorMode::importance;
    set.m = static_cast<int>(ind.size());
    set.indices = ind;
    for (const auto& x : views) {
        Matrix b(x.cols(), set.m);
        for (int j = 0; j < set.m; ++j)
            b.col(j) = x.row(ind[j]).transpose();
        set.anchors.push_back(std::move(b));
    }
    return set;
}

}  // namespace mvc
