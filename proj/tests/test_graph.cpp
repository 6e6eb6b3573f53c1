#include <catch_amalgamated.hpp>

#include "test_support.hpp"

using mvc::Matrix;
using mvc::SparseGraph;
using mvc::Vector;

TEST_CASE("degrees are row sums", "[graph]") {
    SparseGraph pair(2);
    pair.add_edge(0, 1, 1.0);
    Vector d = pair.degrees();
    CHECK(d[0] == 1.0);
    CHECK(d[1] == 1.0);

    SparseGraph triangle(3);
    triangle.add_edge(0, 1, 1.0);
    triangle.add_edge(1, 2, 1.0);
    triangle.add_edge(0, 2, 1.0);
    d = triangle.degrees();
    for (int i = 0; i < 3; ++i)
        CHECK(d[i] == 2.0);

    SparseGraph isolated(3);
    isolated.add_edge(0, 1, 1.0);
    d = isolated.degrees();
    CHECK(d[0] == 1.0);
    CHECK(d[1] == 1.0);
    CHECK(d[2] == 0.0);
}

TEST_CASE("graph validation rejects duplicates and bad weights", "[graph]") {
    SparseGraph g(3);
    g.add_edge(0, 1, 1.0);
    g.add_edge(1, 0, 2.0);  // same undirected pair
    CHECK_THROWS_WITH(g.validate(), Catch::Matchers::ContainsSubstring("duplicate"));

    SparseGraph h(2);
    CHECK_THROWS(h.add_edge(0, 1, -1.0));
    CHECK_THROWS(h.add_edge(0, 2, 1.0));
}

TEST_CASE("normalization on hand-checked graphs", "[graph]") {
    SparseGraph pair(2);
    pair.add_edge(0, 1, 1.0);
    mvc::NormalizedOperator op(pair);
    Matrix s = Matrix(op.similarity());
    CHECK(s(0, 0) == 0.0);
    CHECK(s(0, 1) == 1.0);
    CHECK(s(1, 0) == 1.0);

    SparseGraph triangle(3);
    triangle.add_edge(0, 1, 1.0);
    triangle.add_edge(1, 2, 1.0);
    triangle.add_edge(0, 2, 1.0);
    mvc::NormalizedOperator top(triangle);
    Matrix st = Matrix(top.similarity());
    Matrix expected = 0.5 * (Matrix(triangle.to_matrix()));
    CHECK(support::max_abs(st - expected) < 1e-15);

    SparseGraph empty(3);
    mvc::NormalizedOperator oe(empty);
    CHECK(Matrix(oe.similarity()).isZero(0.0));
    // L acts as the identity on isolated nodes
    Matrix x = support::random_matrix(3, 2, 5);
    CHECK(support::max_abs(oe.apply_laplacian(x) - x) == 0.0);
}

TEST_CASE("laplacian application matches hand results", "[graph]") {
    SparseGraph triangle(3);
    triangle.add_edge(0, 1, 1.0);
    triangle.add_edge(1, 2, 1.0);
    triangle.add_edge(0, 2, 1.0);
    mvc::NormalizedOperator op(triangle);
    Matrix ones = Matrix::Ones(3, 1);
    CHECK(support::max_abs(op.apply_laplacian(ones)) < 1e-15);

    SparseGraph pair(2);
    pair.add_edge(0, 1, 1.0);
    mvc::NormalizedOperator op2(pair);
    Matrix x(2, 1);
    x << 1.0, 0.0;
    Matrix lx = op2.apply_laplacian(x);
    CHECK(lx(0, 0) == Catch::Approx(1.0));
    CHECK(lx(1, 0) == Catch::Approx(-1.0));

    CHECK_THROWS(op2.apply_laplacian(Matrix::Zero(3, 1)));
}

TEST_CASE("normalized operator spectral invariants", "[graph][property]") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const int n = 20 + static_cast<int>(seed) * 20;
        SparseGraph g = support::random_graph(n, 0.15, seed);
        mvc::NormalizedOperator op(g);
        Matrix s = Matrix(op.similarity());

        CHECK(support::max_abs(s - s.transpose()) == 0.0);

        Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
        CHECK(eig.eigenvalues().minCoeff() >= -1.0 - 1e-10);
        CHECK(eig.eigenvalues().maxCoeff() <= 1.0 + 1e-10);

        // L = I - S is PSD
        Matrix l = Matrix::Identity(n, n) - s;
        Eigen::SelfAdjointEigenSolver<Matrix> leig(l);
        CHECK(leig.eigenvalues().minCoeff() >= -1e-10);

        // nullvector D^{1/2} 1 when no node is isolated
        Vector d = op.degrees();
        if (d.minCoeff() > 0.0) {
            Vector v = d.array().sqrt();
            CHECK((l * v).norm() <= 1e-10 * v.norm());
        }

        // sparse application agrees with the dense operator
        Matrix x = support::random_matrix(n, 4, seed + 100);
        CHECK((op.apply_laplacian(x) - l * x).norm() <= 1e-12 * x.norm());
    }
}

TEST_CASE("probabilistic neighbor weights on collinear points", "[graph]") {
    Matrix x(3, 1);
    x << 0.0, 1.0, 10.0;
    mvc::SpMatrix rows = mvc::probabilistic_neighbor_rows(x, 1);
    Matrix w = Matrix(rows);
    // closed form gives weight 1 to the single nearest neighbor
    CHECK(w(0, 1) == Catch::Approx(1.0));
    CHECK(w(0, 2) == 0.0);
    CHECK(w(1, 0) == Catch::Approx(1.0));
    CHECK(w(2, 1) == Catch::Approx(1.0));

    SparseGraph g = mvc::build_probabilistic_neighbor_graph(x, 1);
    Matrix a = Matrix(g.to_matrix());
    CHECK(a(0, 1) >= 0.5);
    CHECK(support::max_abs(a - a.transpose()) == 0.0);
}

TEST_CASE("neighbor rows with distinct distances put weight 1 on the nearest", "[graph]") {
    Matrix x = support::random_matrix(12, 3, 42);
    Matrix w = Matrix(mvc::probabilistic_neighbor_rows(x, 1));
    for (int i = 0; i < 12; ++i) {
        int nonzeros = 0;
        for (int j = 0; j < 12; ++j)
            if (w(i, j) != 0.0) {
                ++nonzeros;
                CHECK(w(i, j) == Catch::Approx(1.0));
            }
        CHECK(nonzeros == 1);
    }
}

TEST_CASE("duplicated points fall back to uniform weights", "[graph]") {
    Matrix x(4, 2);
    x << 1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0;
    Matrix w = Matrix(mvc::probabilistic_neighbor_rows(x, 2));
    CHECK(w.allFinite());
    for (int i = 0; i < 4; ++i) {
        CHECK(w.row(i).sum() == Catch::Approx(1.0));
        // ties break toward the lowest indices
        for (int j = 0; j < 4; ++j)
            if (w(i, j) != 0.0)
                CHECK(w(i, j) == Catch::Approx(0.5));
    }
}

TEST_CASE("neighbor rows are row-stochastic with at most k nonzeros", "[graph][property]") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const int n = 30;
        const int k = 1 + static_cast<int>(seed);
        Matrix x = support::random_matrix(n, 4, seed);
        Matrix w = Matrix(mvc::probabilistic_neighbor_rows(x, k));
        for (int i = 0; i < n; ++i) {
            int nonzeros = 0;
            for (int j = 0; j < n; ++j) {
                CHECK(w(i, j) >= 0.0);
                if (w(i, j) != 0.0)
                    ++nonzeros;
            }
            CHECK(nonzeros <= k);
            CHECK(std::abs(w.row(i).sum() - 1.0) <= 1e-12);
        }
    }
}
