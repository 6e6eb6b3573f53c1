#pragma once

#include <limits>
#include <vector>

#include <mvclust/common.hpp>

namespace mvc {

struct KMeansResult {
    std::vector<int> assignments;  // length n, values in [0, g)
    Matrix centroids;              // g x d
    double inertia = 0.0;          // sum of squared distances to assigned centroid
    int iterations_run = 0;
};

/// Restart r of a run with base seed s draws from the stream seeded with
/// splitmix64(s + r * 0x9E3779B97F4A7C15). Running restart r alone is
/// therefore kmeans(x, g, s + r * 0x9E3779B97F4A7C15, 1).
inline std::uint64_t kmeans_restart_seed(std::uint64_t seed, int restart) {
    return seed + static_cast<std::uint64_t>(restart) * 0x9E3779B97F4A7C15ULL;
}

namespace detail {

// squared distances from every row of x to every row of centers, via
// |x|^2 + |c|^2 - 2 x c^T; clamped at zero
inline Matrix pairwise_sq_dist(const Matrix& x, const Matrix& centers) {
    Matrix d = -2.0 * (x * centers.transpose());
    d.colwise() += x.rowwise().squaredNorm();
    d.rowwise() += centers.rowwise().squaredNorm().transpose();
    return d.cwiseMax(0.0);
}

inline Matrix kmeanspp_init(const Matrix& x, int g, Rng& rng) {
    const int n = static_cast<int>(x.rows());
    Matrix centers(g, x.cols());
    centers.row(0) = x.row(rng.uniform_int(n));

    Vector min_dist =
        (x.rowwise() - centers.row(0)).rowwise().squaredNorm().cwiseMax(0.0);
    std::vector<bool> is_center(n, false);

    for (int c = 1; c < g; ++c) {
        const double total = min_dist.sum();
        int pick = -1;
        if (total > 0.0) {
            const double u = rng.uniform() * total;
            double cum = 0.0;
            for (int i = 0; i < n; ++i) {
                cum += min_dist[i];
                if (u < cum) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) {  // numerical tail
                for (int i = n - 1; i >= 0; --i)
                    if (min_dist[i] > 0.0) {
                        pick = i;
                        break;
                    }
            }
        }
        if (pick < 0) {
            // mass exhausted: remaining points duplicate chosen centers;
            // take the lowest-index row not yet used
            for (int i = 0; i < n; ++i)
                if (!is_center[i]) {
                    pick = i;
                    break;
                }
        }
        is_center[pick] = true;
        centers.row(c) = x.row(pick);
        min_dist = min_dist.cwiseMin(
            (x.rowwise() - centers.row(c)).rowwise().squaredNorm().cwiseMax(0.0));
    }
    return centers;
}

// assignment with ties toward the lower centroid index (Eigen's minCoeff
// returns the first minimum, which is exactly that)
inline void assign_points(const Matrix& dist, std::vector<int>& assign) {
    const int n = static_cast<int>(dist.rows());
    assign.resize(n);
    for (int i = 0; i < n; ++i) {
        Eigen::Index best;
        dist.row(i).minCoeff(&best);
        assign[i] = static_cast<int>(best);
    }
}

// reseed each empty cluster on the point farthest from its current
// centroid (lowest index on ties), skipping clusters that would become
// empty themselves
inline void repair_empty_clusters(const Matrix& x, Matrix& centers, Matrix& dist,
                                  std::vector<int>& assign, std::vector<int>& counts) {
    const int n = static_cast<int>(x.rows());
    const int g = static_cast<int>(centers.rows());
    for (int c = 0; c < g; ++c) {
        if (counts[c] > 0)
            continue;
        int farthest = -1;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
            if (counts[assign[i]] < 2)
                continue;
            const double di = dist(i, assign[i]);
            if (di > far_d) {
                far_d = di;
                farthest = i;
            }
        }
        if (farthest < 0)
            break;  // fewer distinct points than clusters
        --counts[assign[farthest]];
        assign[farthest] = c;
        ++counts[c];
        centers.row(c) = x.row(farthest);
        dist.col(c) = (x.rowwise() - centers.row(c)).rowwise().squaredNorm().cwiseMax(0.0);
    }
}

}  // namespace detail

/// Best-of-restarts Lloyd's algorithm with k-means++ seeding.
/// Deterministic given the seed; ties on inertia keep the lowest restart
/// index. Empty clusters are repaired by reseeding on the point farthest
/// from its current centroid (lowest index on ties), drawn only from
/// clusters that can spare a point.
inline KMeansResult kmeans(const Matrix& x, int g, std::uint64_t seed, int restarts = 10,
                           int max_iter = 300, double tol = 1e-6) {
    const int n = static_cast<int>(x.rows());
    require(g >= 1, "kmeans: g must be positive");
    require(g <= n, "kmeans: g > n");
    require(restarts >= 1, "kmeans: restarts must be positive");
    require_finite(x, "kmeans");

    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();

    for (int r = 0; r < restarts; ++r) {
        Rng rng(kmeans_restart_seed(seed, r));
        Matrix centers = detail::kmeanspp_init(x, g, rng);
        std::vector<int> assign(n, 0);
        int iterations = 0;

        for (int iter = 0; iter < max_iter; ++iter) {
            ++iterations;
            Matrix dist = detail::pairwise_sq_dist(x, centers);
            detail::assign_points(dist, assign);

            std::vector<int> counts(g, 0);
            for (int a : assign)
                ++counts[a];
            detail::repair_empty_clusters(x, centers, dist, assign, counts);

            Matrix new_centers = Matrix::Zero(g, x.cols());
            for (int i = 0; i < n; ++i)
                new_centers.row(assign[i]) += x.row(i);
            for (int c = 0; c < g; ++c)
                if (counts[c] > 0)
                    new_centers.row(c) /= counts[c];
                else
                    new_centers.row(c) = centers.row(c);

            const double shift = (new_centers - centers).rowwise().norm().maxCoeff();
            centers = new_centers;
            if (shift < tol)
                break;
        }

        // final assignment consistent with the returned centroids
        Matrix dist = detail::pairwise_sq_dist(x, centers);
        detail::assign_points(dist, assign);
        {
            std::vector<int> counts(g, 0);
            for (int a : assign)
                ++counts[a];
            detail::repair_empty_clusters(x, centers, dist, assign, counts);
        }
        double inertia = 0.0;
        for (int i = 0; i < n; ++i)
            inertia += dist(i, assign[i]);

        if (inertia < best.inertia) {
            best.assignments = assign;
            best.centroids = centers;
            best.inertia = inertia;
            best.iterations_run = iterations;
        }
    }
    return best;
}

}  // namespace mvc
