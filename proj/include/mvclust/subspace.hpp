#pragma once

#include <vector>

#include <mvclust/anchors.hpp>
#include <mvclust/common.hpp>

namespace mvc {

/// Horizontal concatenation [Z^1, ..., Z^v], n x (m*v); column block i
/// is view i's similarity matrix.
using ConcatenatedSimilarity = Matrix;

/// Closed-form ridge solve of the anchor self-expression model:
///   Z = Xbar B (B^T B + alpha I)^{-1},
/// computed through the SPD m x m system (B^T B + alpha I) Z^T = B^T Xbar^T.
/// alpha > 0 makes the system positive definite, so there is no singular
/// case.
inline Matrix solve_view(const Matrix& xbar, const Matrix& b, double alpha) {
    require(alpha > 0.0, "solve_view: alpha must be positive");
    require(xbar.cols() == b.rows(), "solve_view: shape mismatch");
    require_finite(xbar, "solve_view xbar");
    require_finite(b, "solve_view anchors");

    Matrix gram = b.transpose() * b;
    gram.diagonal().array() += alpha;
    const Matrix rhs = b.transpose() * xbar.transpose();  // m x n
    return gram.llt().solve(rhs).transpose();
}

/// Solve every view against its own anchors with a shared alpha.
inline std::vector<Matrix> solve_all_views(const FilteredViews& views, const AnchorSet& anchors,
                                           double alpha) {
    require(views.size() == anchors.anchors.size(), "solve_all_views: view/anchor count mismatch");
    std::vector<Matrix> zs;
    zs.reserve(views.size());
    for (std::size_t i = 0; i < views.size(); ++i)
        zs.push_back(solve_view(views[i], anchors.anchors[i], alpha));
    return zs;
}

inline ConcatenatedSimilarity concat_views(const std::vector<Matrix>& zs) {
    require(!zs.empty(), "concat_views: no views");
    const Eigen::Index n = zs.front().rows();
    const Eigen::Index m = zs.front().cols();
    for (const auto& z : zs)
        require(z.rows() == n && z.cols() == m, "concat_views: shape mismatch");
    Matrix zbar(n, m * static_cast<Eigen::Index>(zs.size()));
    for (std::size_t i = 0; i < zs.size(); ++i)
        zbar.middleCols(static_cast<Eigen::Index>(i) * m, m) = zs[i];
    return zbar;
}

}  // namespace mvc
