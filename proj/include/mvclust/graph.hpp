#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include <mvclust/common.hpp>

namespace mvc {

/// Symmetric weighted adjacency over n nodes.
///
/// Storage convention: each undirected pair is stored once with
/// row <= col (diagonal entries allowed). weight(i,j) == weight(j,i)
/// holds exactly because both directions read the same stored entry.
class SparseGraph {
public:
    struct Entry {
        int row;
        int col;
        double weight;
    };

    SparseGraph() = default;
    explicit SparseGraph(int n) : n_(n) { require(n >= 0, "SparseGraph: negative node count"); }

    int size() const { return n_; }

    /// Stored entry count N (one per undirected pair).
    int nnz() const { return static_cast<int>(entries_.size()); }

    const std::vector<Entry>& entries() const { return entries_; }

    /// Add the undirected edge {i, j} with weight w. Each pair may be
    /// added once; duplicates are rejected by validate().
    void add_edge(int i, int j, double w) {
        require(i >= 0 && i < n_ && j >= 0 && j < n_, "SparseGraph: index out of range");
        require(std::isfinite(w) && w >= 0.0, "SparseGraph: weight must be finite and non-negative");
        if (i > j)
            std::swap(i, j);
        entries_.push_back({i, j, w});
    }

    /// Checks the type invariants; throws on duplicate pairs.
    void validate() const {
        std::vector<std::pair<int, int>> seen;
        seen.reserve(entries_.size());
        for (const auto& e : entries_) {
            require(e.row >= 0 && e.col >= e.row && e.col < n_, "SparseGraph: index out of range");
            require(std::isfinite(e.weight) && e.weight >= 0.0,
                    "SparseGraph: weight must be finite and non-negative");
            seen.emplace_back(e.row, e.col);
        }
        std::sort(seen.begin(), seen.end());
        require(std::adjacent_find(seen.begin(), seen.end()) == seen.end(),
                "SparseGraph: duplicate entry");
    }

    /// Row sums d_i = sum_j a_ij.
    Vector degrees() const {
        Vector d = Vector::Zero(n_);
        for (const auto& e : entries_) {
            d[e.row] += e.weight;
            if (e.col != e.row)
                d[e.col] += e.weight;
        }
        return d;
    }

    /// Full symmetric expansion as a sparse matrix.
    SpMatrix to_matrix() const {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(2 * entries_.size());
        for (const auto& e : entries_) {
            trips.emplace_back(e.row, e.col, e.weight);
            if (e.col != e.row)
                trips.emplace_back(e.col, e.row, e.weight);
        }
        SpMatrix a(n_, n_);
        a.setFromTriplets(trips.begin(), trips.end());
        return a;
    }

    /// Collapse an exactly symmetric sparse matrix into graph storage.
    static SparseGraph from_matrix(const SpMatrix& a) {
        require(a.rows() == a.cols(), "SparseGraph: matrix not square");
        SparseGraph g(static_cast<int>(a.rows()));
        for (int k = 0; k < a.outerSize(); ++k)
            for (SpMatrix::InnerIterator it(a, k); it; ++it)
                if (it.row() <= it.col() && it.value() != 0.0)
                    g.add_edge(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        return g;
    }

private:
    int n_ = 0;
    std::vector<Entry> entries_;
};

/// Convenience free function mirroring the degree-vector operation.
inline Vector degrees(const SparseGraph& a) { return a.degrees(); }

/// S = D^{-1/2} A D^{-1/2} together with the degree vector. The
/// normalized Laplacian L = I - S is never materialized; consumers apply
/// it lazily through apply_laplacian().
///
/// Isolated nodes (d_i = 0) get an all-zero row/column in S, so L acts
/// as the identity on them.
class NormalizedOperator {
public:
    explicit NormalizedOperator(const SparseGraph& a) : n_(a.size()), degrees_(a.degrees()) {
        Vector inv_sqrt(n_);
        for (int i = 0; i < n_; ++i)
            inv_sqrt[i] = degrees_[i] > 0.0 ? 1.0 / std::sqrt(degrees_[i]) : 0.0;
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(2 * a.entries().size());
        for (const auto& e : a.entries()) {
            const double s = e.weight * inv_sqrt[e.row] * inv_sqrt[e.col];
            if (s == 0.0)
                continue;
            trips.emplace_back(e.row, e.col, s);
            if (e.col != e.row)
                trips.emplace_back(e.col, e.row, s);
        }
        s_.resize(n_, n_);
        s_.setFromTriplets(trips.begin(), trips.end());
    }

    int size() const { return n_; }
    const SpMatrix& similarity() const { return s_; }
    const Vector& degrees() const { return degrees_; }

    /// L X = X - S X, cost proportional to nnz(S) * cols(X).
    Matrix apply_laplacian(const Matrix& x) const {
        require(x.rows() == n_, "apply_laplacian: shape mismatch");
        Matrix sx = s_ * x;
        return x - sx;
    }

private:
    int n_ = 0;
    SpMatrix s_;
    Vector degrees_;
};

inline NormalizedOperator normalize(const SparseGraph& a) { return NormalizedOperator(a); }

/// Per-row neighbor weights for the closed-form probabilistic neighbor
/// assignment: row i puts
///   s_ij = (e_{i,k+1} - e_ij) / (k e_{i,k+1} - sum_{h<=k} e_{i,h})
/// on its k nearest neighbors (squared Euclidean) and zero elsewhere.
/// Every row sums to 1. Rows with all k+1 nearest distances equal fall
/// back to uniform 1/k weights. Ties at the k-th distance break toward
/// the lower index.
///
/// The result is NOT symmetric; build_probabilistic_neighbor_graph()
/// symmetrizes it.
///
/// TODO: replace the blockwise full distance scan with a spatial index
/// once feature-mode inputs grow past a few tens of thousands of rows.
inline SpMatrix probabilistic_neighbor_rows(const Matrix& x, int k_nn) {
    const int n = static_cast<int>(x.rows());
    require(k_nn >= 1 && k_nn < n, "probabilistic_neighbor_rows: need 1 <= k_nn < n");
    require_finite(x, "probabilistic_neighbor_rows");

    const Vector sq = x.rowwise().squaredNorm();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(n) * k_nn);

    const int block = 256;
    std::vector<int> order(n);
    for (int r0 = 0; r0 < n; r0 += block) {
        const int rows = std::min(block, n - r0);
        Matrix dist = -2.0 * (x.middleRows(r0, rows) * x.transpose());
        dist.colwise() += sq.segment(r0, rows);
        dist.rowwise() += sq.transpose();

        for (int r = 0; r < rows; ++r) {
            const int i = r0 + r;
            order.resize(n);
            std::iota(order.begin(), order.end(), 0);
            order.erase(order.begin() + i);
            const auto closer = [&](int a, int b) {
                const double da = dist(r, a), db = dist(r, b);
                return da < db || (da == db && a < b);
            };
            std::partial_sort(order.begin(), order.begin() + k_nn + 1, order.end(), closer);

            const double e_last = std::max(dist(r, order[k_nn]), 0.0);
            double e_sum = 0.0;
            for (int h = 0; h < k_nn; ++h)
                e_sum += std::max(dist(r, order[h]), 0.0);
            const double denom = k_nn * e_last - e_sum;

            if (denom <= 1e-12 * std::max(1.0, e_last)) {
                // all k+1 nearest distances coincide
                for (int h = 0; h < k_nn; ++h)
                    trips.emplace_back(i, order[h], 1.0 / k_nn);
            } else {
                for (int h = 0; h < k_nn; ++h) {
                    const double w = (e_last - std::max(dist(r, order[h]), 0.0)) / denom;
                    if (w > 0.0)
                        trips.emplace_back(i, order[h], w);
                }
            }
        }
    }

    SpMatrix w(n, n);
    w.setFromTriplets(trips.begin(), trips.end());
    return w;
}

/// Neighbor graph for feature-only data: closed-form per-row weights,
/// symmetrized as (W + W^T)/2.
inline SparseGraph build_probabilistic_neighbor_graph(const Matrix& x, int k_nn) {
    SpMatrix w = probabilistic_neighbor_rows(x, k_nn);
    SpMatrix wt = w.transpose();
    SpMatrix sym = 0.5 * (w + wt);
    return SparseGraph::from_matrix(sym);
}

}  // namespace mvc
