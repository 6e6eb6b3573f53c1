#pragma once

#include <vector>

#include <mvclust/common.hpp>
#include <mvclust/graph.hpp>

namespace mvc {

/// Per-view smoothed representations, same shapes as the input views.
using FilteredViews = std::vector<Matrix>;

/// Low-pass filter parameters: balance mu > 0 and order k >= 0.
///
/// mu > 0.5 is legal but can flip the sign of the response on the
/// highest graph frequencies (mu * lambda_max may exceed 1 with
/// lambda_max up to 2); callers should warn, not reject.
struct FilterConfig {
    double mu = 0.1;
    int k = 1;

    void validate() const {
        require(mu > 0.0, "filter: mu must be positive");
        require(k >= 0, "filter: k must be non-negative");
    }

    bool mu_above_stability_threshold() const { return mu > 0.5; }
};

/// (I - mu L)^k X as k successive sparse passes Y <- Y - mu (Y - S Y).
/// The filter matrix is never formed; cost is O(nnz * d * k).
inline Matrix apply_filter(const Matrix& x, const NormalizedOperator& op, const FilterConfig& cfg) {
    cfg.validate();
    require(x.rows() == op.size(), "apply_filter: shape mismatch");
    require_finite(x, "apply_filter");
    Matrix y = x;
    for (int pass = 0; pass < cfg.k; ++pass) {
        Matrix sy = op.similarity() * y;
        y = y - cfg.mu * (y - sy);
    }
    return y;
}

/// Exact smoother (I + mu L)^{-1} X by a dense SPD solve. Small-scale
/// oracle only; refuses n above the cap.
inline Matrix exact_filter(const Matrix& x, const NormalizedOperator& op, double mu,
                           int max_n = 2000) {
    require(mu > 0.0, "exact_filter: mu must be positive");
    require(x.rows() == op.size(), "exact_filter: shape mismatch");
    require(op.size() <= max_n, "exact_filter: dense solve cap exceeded");
    // I + mu L = (1 + mu) I - mu S
    Matrix a = -mu * Matrix(op.similarity());
    a.diagonal().array() += 1.0 + mu;
    return a.llt().solve(x);
}

/// Apply the same filter per view with that view's own operator.
inline FilteredViews filter_all_views(const std::vector<Matrix>& views,
                                      const std::vector<NormalizedOperator>& ops,
                                      const FilterConfig& cfg) {
    require(views.size() == ops.size(), "filter_all_views: view/operator count mismatch");
    FilteredViews out;
    out.reserve(views.size());
    for (std::size_t i = 0; i < views.size(); ++i)
        out.push_back(apply_filter(views[i], ops[i], cfg));
    return out;
}

}  // namespace mvc
