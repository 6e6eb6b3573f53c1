#include <fstream>

#include <catch_amalgamated.hpp>

#include "test_support.hpp"

using mvc::Matrix;
using mvc::MultiViewDataset;
using mvc::SyntheticSpec;

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

}  // namespace

TEST_CASE("load a hand-written dataset directory", "[dataset]") {
    support::TempDir dir("load");
    write_file(dir.path() / "manifest.json",
               R"({"views": ["view_0.csv", "view_1.csv"], "labels": "labels.csv", "clusters": 2})");
    write_file(dir.path() / "view_0.csv", "f0,f1\n0,0\n0,1\n5,5\n5,6\n");
    write_file(dir.path() / "view_1.csv", "f0\n1\n2\n3\n4\n");
    write_file(dir.path() / "labels.csv", "0\n0\n1\n1\n");

    MultiViewDataset data = mvc::load_dataset(dir.str());
    CHECK(data.n == 4);
    CHECK(data.v == 2);
    CHECK(data.g == 2);
    CHECK(data.views[0](2, 1) == 5.0);
    CHECK(data.labels == std::vector<int>{0, 0, 1, 1});
    CHECK_FALSE(data.has_graphs());
}

TEST_CASE("missing manifest and missing view file are reported", "[dataset]") {
    support::TempDir dir("missing");
    CHECK_THROWS_WITH(mvc::load_dataset(dir.str()),
                      Catch::Matchers::ContainsSubstring("missing manifest"));

    write_file(dir.path() / "manifest.json", R"({"views": ["view_0.csv", "view_2.csv"]})");
    write_file(dir.path() / "view_0.csv", "f0\n1\n");
    CHECK_THROWS_WITH(mvc::load_dataset(dir.str()),
                      Catch::Matchers::ContainsSubstring("missing view file"));
}

TEST_CASE("loader rejects malformed data", "[dataset]") {
    support::TempDir dir("reject");

    SECTION("row-count mismatch") {
        write_file(dir.path() / "manifest.json", R"({"views": ["a.csv", "b.csv"]})");
        write_file(dir.path() / "a.csv", "f0\n1\n2\n");
        write_file(dir.path() / "b.csv", "f0\n1\n");
        CHECK_THROWS_WITH(mvc::load_dataset(dir.str()),
                          Catch::Matchers::ContainsSubstring("row-count mismatch"));
    }

    SECTION("non-finite features") {
        write_file(dir.path() / "manifest.json", R"({"views": ["a.csv"]})");
        write_file(dir.path() / "a.csv", "f0\nnan\n");
        CHECK_THROWS_WITH(mvc::load_dataset(dir.str()),
                          Catch::Matchers::ContainsSubstring("non-finite"));
    }

    SECTION("label out of range") {
        write_file(dir.path() / "manifest.json",
                   R"({"views": ["a.csv"], "labels": "l.csv", "clusters": 2})");
        write_file(dir.path() / "a.csv", "f0\n1\n2\n");
        write_file(dir.path() / "l.csv", "0\n2\n");
        CHECK_THROWS_WITH(mvc::load_dataset(dir.str()),
                          Catch::Matchers::ContainsSubstring("label out of range"));
    }

    SECTION("empty class") {
        write_file(dir.path() / "manifest.json",
                   R"({"views": ["a.csv"], "labels": "l.csv", "clusters": 3})");
        write_file(dir.path() / "a.csv", "f0\n1\n2\n");
        write_file(dir.path() / "l.csv", "0\n2\n");
        CHECK_THROWS_WITH(mvc::load_dataset(dir.str()),
                          Catch::Matchers::ContainsSubstring("empty class"));
    }
}

TEST_CASE("asymmetric graph files need the symmetrize flag", "[dataset]") {
    support::TempDir dir("asym");
    write_file(dir.path() / "manifest.json", R"({"views": ["a.csv"], "graphs": ["g.mtx"]})");
    write_file(dir.path() / "a.csv", "f0\n1\n2\n3\n");
    write_file(dir.path() / "g.mtx",
               "%%MatrixMarket matrix coordinate real general\n3 3 2\n1 2 1.0\n2 3 1.0\n");

    CHECK_THROWS_WITH(mvc::load_dataset(dir.str()),
                      Catch::Matchers::ContainsSubstring("asymmetric"));

    MultiViewDataset data = mvc::load_dataset(dir.str(), /*symmetrize_graphs=*/true);
    const Matrix a = Matrix(data.graphs[0].to_matrix());
    CHECK(a(0, 1) == 0.5);
    CHECK(a(1, 0) == 0.5);
}

TEST_CASE("graph reader accepts symmetric files and rejects duplicates", "[dataset]") {
    support::TempDir dir("mm");
    write_file(dir.path() / "g.mtx",
               "%%MatrixMarket matrix coordinate real symmetric\n% comment\n3 3 2\n2 1 0.5\n3 3 2.0\n");
    mvc::SparseGraph g = mvc::read_graph_mtx((dir.path() / "g.mtx").string());
    CHECK(g.size() == 3);
    CHECK(g.nnz() == 2);
    CHECK(g.degrees()[2] == 2.0);

    write_file(dir.path() / "dup.mtx",
               "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n2 1 0.5\n2 1 0.5\n");
    CHECK_THROWS_WITH(mvc::read_graph_mtx((dir.path() / "dup.mtx").string()),
                      Catch::Matchers::ContainsSubstring("duplicate"));
}

TEST_CASE("synthetic generator with extreme parameters plants disjoint cliques", "[dataset]") {
    SyntheticSpec spec;
    spec.n = 6;
    spec.v = 2;
    spec.g = 2;
    spec.d = 2;
    spec.separation = 100.0;
    spec.p_in = 1.0;
    spec.p_out = 0.0;
    spec.seed = 7;

    MultiViewDataset data = mvc::generate_synthetic(spec);
    CHECK(data.n == 6);
    CHECK(data.v == 2);

    int per_class[2] = {0, 0};
    for (int l : data.labels)
        ++per_class[l];
    CHECK(per_class[0] == 3);
    CHECK(per_class[1] == 3);

    for (const auto& graph : data.graphs) {
        const Matrix a = Matrix(graph.to_matrix());
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                if (i == j)
                    CHECK(a(i, j) == 0.0);
                else if (data.labels[i] == data.labels[j])
                    CHECK(a(i, j) == 1.0);
                else
                    CHECK(a(i, j) == 0.0);
            }
    }
}

TEST_CASE("synthetic generation is a pure function of the spec", "[dataset]") {
    SyntheticSpec spec;
    spec.n = 40;
    spec.v = 2;
    spec.g = 3;
    spec.d = 3;
    spec.separation = 5.0;
    spec.p_in = 0.4;
    spec.p_out = 0.05;
    spec.seed = 11;

    MultiViewDataset a = mvc::generate_synthetic(spec);
    MultiViewDataset b = mvc::generate_synthetic(spec);
    CHECK(a.labels == b.labels);
    for (int view = 0; view < a.v; ++view) {
        CHECK(support::max_abs(a.views[view] - b.views[view]) == 0.0);
        CHECK(a.graphs[view].nnz() == b.graphs[view].nnz());
    }

    spec.seed = 12;
    MultiViewDataset c = mvc::generate_synthetic(spec);
    CHECK(support::max_abs(a.views[0] - c.views[0]) > 0.0);
}

TEST_CASE("save and reload round-trips a generated dataset", "[dataset]") {
    SyntheticSpec spec;
    spec.n = 25;
    spec.v = 2;
    spec.g = 2;
    spec.d = 4;
    spec.separation = 4.0;
    spec.p_in = 0.5;
    spec.p_out = 0.1;
    spec.seed = 3;

    MultiViewDataset original = mvc::generate_synthetic(spec);
    support::TempDir dir("roundtrip");
    mvc::save_dataset(original, dir.str());
    MultiViewDataset loaded = mvc::load_dataset(dir.str());

    CHECK(loaded.n == original.n);
    CHECK(loaded.v == original.v);
    CHECK(loaded.g == original.g);
    CHECK(loaded.labels == original.labels);
    for (int view = 0; view < original.v; ++view) {
        CHECK(support::max_abs(loaded.views[view] - original.views[view]) == 0.0);
        const Matrix a = Matrix(original.graphs[view].to_matrix());
        const Matrix b = Matrix(loaded.graphs[view].to_matrix());
        CHECK(support::max_abs(a - b) == 0.0);
    }
}

TEST_CASE("planted partition matches its edge probabilities", "[dataset][property]") {
    SyntheticSpec spec;
    spec.n = 600;
    spec.v = 1;
    spec.g = 3;
    spec.d = 2;
    spec.separation = 6.0;
    spec.p_in = 0.1;
    spec.p_out = 0.005;
    spec.seed = 1;

    MultiViewDataset data = mvc::generate_synthetic(spec);
    const Matrix a = Matrix(data.graphs[0].to_matrix());

    long within_possible = 0;
    double within_edges = 0.0;
    for (int i = 0; i < spec.n; ++i)
        for (int j = i + 1; j < spec.n; ++j)
            if (data.labels[i] == data.labels[j]) {
                ++within_possible;
                if (a(i, j) != 0.0)
                    within_edges += 1.0;
            }
    const double density = within_edges / static_cast<double>(within_possible);
    const double se = std::sqrt(spec.p_in * (1 - spec.p_in) / within_possible);
    CHECK(std::abs(density - spec.p_in) <= 3.0 * se);

    // generator guarantees no isolated nodes
    CHECK(data.graphs[0].degrees().minCoeff() > 0.0);
}
