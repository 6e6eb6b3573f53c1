#pragma once

#include <vector>

#include <mvclust/common.hpp>
#include <mvclust/kmeans.hpp>
#include <mvclust/subspace.hpp>

namespace mvc {

/// Top-g left singular pairs of the concatenated similarity: Q (n x g,
/// orthonormal columns) and the leading singular values, non-increasing.
struct SpectralEmbedding {
    Matrix q;
    Vector sigma;
};

struct Partition {
    std::vector<int> labels;
    int g = 0;
};

/// Spectral embedding through the (mv) x (mv) Gram matrix: eigendecompose
/// Zbar^T Zbar and map right singular vectors back, u_j = Zbar v_j / sigma_j.
/// Columns whose singular value falls below 1e-12 * sigma_1 are completed
/// by orthonormal extension (with a warning). Each column's sign is fixed
/// so its largest-magnitude entry (lowest index on ties) is positive,
/// which makes repeated calls byte-identical.
inline SpectralEmbedding spectral_embed(const ConcatenatedSimilarity& zbar, int g) {
    const Eigen::Index n = zbar.rows();
    const Eigen::Index mv = zbar.cols();
    require(g >= 1 && g <= std::min(n, mv), "spectral_embed: need 1 <= g <= min(n, m*v)");
    require_finite(zbar, "spectral_embed");

    const Matrix gram = zbar.transpose() * zbar;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    require(eig.info() == Eigen::Success, "spectral_embed: eigendecomposition failed");

    SpectralEmbedding emb;
    emb.q.resize(n, g);
    emb.sigma.resize(g);
    // Eigen returns eigenvalues in increasing order; take the top g
    for (int j = 0; j < g; ++j) {
        const Eigen::Index src = mv - 1 - j;
        emb.sigma[j] = std::sqrt(std::max(eig.eigenvalues()[src], 0.0));
    }

    const double sigma_floor = 1e-12 * emb.sigma[0];
    int completed = 0;
    for (int j = 0; j < g; ++j) {
        const Eigen::Index src = mv - 1 - j;
        if (emb.sigma[j] > sigma_floor && emb.sigma[j] > 0.0) {
            emb.q.col(j) = zbar * eig.eigenvectors().col(src) / emb.sigma[j];
        } else {
            // rank-deficient: extend the basis with the first canonical
            // direction that has a usable residual
            for (Eigen::Index t = 0; t < n; ++t) {
                Vector r = Vector::Zero(n);
                r[t] = 1.0;
                for (int prev = 0; prev < j; ++prev)
                    r -= emb.q.col(prev).dot(r) * emb.q.col(prev);
                const double norm = r.norm();
                if (norm > 1e-6) {
                    emb.q.col(j) = r / norm;
                    break;
                }
            }
            ++completed;
        }
    }
    if (completed > 0)
        warn("spectral embedding: rank below g, completed " + std::to_string(completed) +
             " column(s) by orthonormal extension");
    if (g < mv) {
        const double next = std::sqrt(std::max(eig.eigenvalues()[mv - 1 - g], 0.0));
        if (emb.sigma[g - 1] - next <= 1e-12 * std::max(1.0, emb.sigma[0]))
            warn("spectral embedding: degenerate singular values around the g-th index");
    }

    for (int j = 0; j < g; ++j) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double a = std::abs(emb.q(i, j));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        if (emb.q(arg, j) < 0.0)
            emb.q.col(j) = -emb.q.col(j);
    }
    return emb;
}

/// Final partition: K-means on the rows of Q.
inline Partition cluster_embedding(const SpectralEmbedding& emb, int g, std::uint64_t seed,
                                   int restarts = 10) {
    const KMeansResult result = kmeans(emb.q, g, seed, restarts);
    return Partition{result.assignments, g};
}

}  // namespace mvc
