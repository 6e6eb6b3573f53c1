#include <catch_amalgamated.hpp>

#include "test_support.hpp"

using labels = std::vector<int>;

TEST_CASE("accuracy under optimal matching", "[metrics]") {
    CHECK(mvc::accuracy({0, 0, 1, 1}, {1, 1, 0, 0}) == 1.0);
    CHECK(mvc::accuracy({0, 0, 1, 1}, {0, 1, 1, 1}) == 0.75);
    CHECK(mvc::accuracy({0, 1, 2, 1}, {0, 1, 2, 1}) == 1.0);
    // more predicted clusters than classes
    CHECK(mvc::accuracy({0, 0, 0, 0}, {0, 1, 2, 3}) == 0.25);
}

TEST_CASE("nmi conventions and hand values", "[metrics]") {
    CHECK(mvc::nmi({0, 1, 0, 1}, {1, 0, 1, 0}) == 1.0);
    CHECK(mvc::nmi({0, 0, 1, 1}, {0, 1, 0, 1}) == Catch::Approx(0.0).margin(1e-12));
    CHECK(mvc::nmi({0, 0, 1, 1}, {0, 1, 1, 1}) ==
          Catch::Approx(support::oracle_nmi({0, 0, 1, 1}, {0, 1, 1, 1})).margin(1e-12));
    // degenerate single-cluster cases
    CHECK(mvc::nmi({0, 0, 0}, {0, 0, 0}) == 1.0);
    CHECK(mvc::nmi({0, 0, 0}, {0, 1, 2}) == 0.0);
    CHECK(mvc::nmi({0, 1, 2}, {0, 0, 0}) == 0.0);
}

TEST_CASE("purity majority counts", "[metrics]") {
    CHECK(mvc::purity({0, 1, 2, 1}, {0, 1, 2, 1}) == 1.0);
    CHECK(mvc::purity({0, 0, 1, 1}, {0, 0, 0, 0}) == 0.5);
    CHECK(mvc::purity({0, 0, 1, 1}, {0, 1, 1, 1}) == 0.75);
}

TEST_CASE("pairwise f1 from pair counts", "[metrics]") {
    CHECK(mvc::pairwise_f1({0, 1, 0, 1}, {0, 1, 0, 1}) == 1.0);
    CHECK(mvc::pairwise_f1({0, 0, 1, 1}, {0, 1, 0, 1}) == Catch::Approx(0.0).margin(1e-15));
    CHECK(mvc::pairwise_f1({0, 0, 1, 1}, {0, 0, 0, 1}) == Catch::Approx(0.4));
    // all singletons on both sides: no positive pair anywhere
    CHECK(mvc::pairwise_f1({0, 1, 2}, {2, 0, 1}) == 1.0);
}

TEST_CASE("adjusted rand index", "[metrics]") {
    CHECK(mvc::ari({0, 1, 0, 1}, {1, 0, 1, 0}) == 1.0);
    CHECK(mvc::ari({0, 0, 1, 1}, {0, 1, 0, 1}) ==
          Catch::Approx(support::oracle_ari({0, 0, 1, 1}, {0, 1, 0, 1})).margin(1e-12));
    CHECK(mvc::ari({0, 0, 1, 1}, {0, 0, 0, 0}) == Catch::Approx(0.0).margin(1e-12));
    // anti-correlated partitions go negative
    CHECK(mvc::ari({0, 0, 0, 1, 1, 1}, {0, 1, 2, 0, 1, 2}) < 0.0);
}

TEST_CASE("metrics reject malformed input", "[metrics]") {
    CHECK_THROWS(mvc::accuracy({0, 1}, {0}));
    CHECK_THROWS(mvc::accuracy({}, {}));
}

TEST_CASE("relabeling either side leaves every metric unchanged", "[metrics][property]") {
    mvc::Rng rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 5 + rng.uniform_int(25);
        labels t = support::random_labels(n, 1 + rng.uniform_int(4), rng);
        labels p = support::random_labels(n, 1 + rng.uniform_int(4), rng);

        // random permutations of the label alphabets
        std::vector<int> perm_t(5), perm_p(5);
        std::iota(perm_t.begin(), perm_t.end(), 10);
        std::iota(perm_p.begin(), perm_p.end(), 20);
        for (int i = 4; i > 0; --i) {
            std::swap(perm_t[i], perm_t[rng.uniform_int(i + 1)]);
            std::swap(perm_p[i], perm_p[rng.uniform_int(i + 1)]);
        }
        labels t2(n), p2(n);
        for (int i = 0; i < n; ++i) {
            t2[i] = perm_t[t[i]];
            p2[i] = perm_p[p[i]];
        }

        CHECK(mvc::accuracy(t, p) == mvc::accuracy(t2, p2));
        CHECK(mvc::nmi(t, p) == Catch::Approx(mvc::nmi(t2, p2)).margin(1e-14));
        CHECK(mvc::purity(t, p) == mvc::purity(t2, p2));
        CHECK(mvc::pairwise_f1(t, p) == Catch::Approx(mvc::pairwise_f1(t2, p2)).margin(1e-14));
        CHECK(mvc::ari(t, p) == Catch::Approx(mvc::ari(t2, p2)).margin(1e-14));
    }
}

TEST_CASE("ranges, symmetry, and purity dominance", "[metrics][property]") {
    mvc::Rng rng(15);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + rng.uniform_int(20);
        labels t = support::random_labels(n, 1 + rng.uniform_int(4), rng);
        labels p = support::random_labels(n, 1 + rng.uniform_int(4), rng);

        const double acc = mvc::accuracy(t, p);
        const double pur = mvc::purity(t, p);
        CHECK(acc >= 0.0);
        CHECK(acc <= 1.0);
        CHECK(pur >= acc);
        CHECK(mvc::nmi(t, p) >= 0.0);
        CHECK(mvc::nmi(t, p) <= 1.0);
        CHECK(mvc::pairwise_f1(t, p) >= 0.0);
        CHECK(mvc::pairwise_f1(t, p) <= 1.0);
        CHECK(mvc::ari(t, p) >= -1.0);
        CHECK(mvc::ari(t, p) <= 1.0);

        // symmetric measures
        CHECK(mvc::nmi(t, p) == Catch::Approx(mvc::nmi(p, t)).margin(1e-14));
        CHECK(mvc::ari(t, p) == Catch::Approx(mvc::ari(p, t)).margin(1e-14));
        CHECK(mvc::pairwise_f1(t, p) == Catch::Approx(mvc::pairwise_f1(p, t)).margin(1e-14));

        // accuracy is symmetric when both sides use equally many clusters
        int kt = 0, kp = 0;
        support::compact(t, kt);
        support::compact(p, kp);
        if (kt == kp)
            CHECK(mvc::accuracy(t, p) == mvc::accuracy(p, t));
    }
}

TEST_CASE("small exhaustive agreement with the oracles", "[metrics][property]") {
    const auto parts = support::partitions_up_to(5, 3);
    for (const auto& t : parts) {
        for (const auto& p : parts) {
            CHECK(mvc::accuracy(t, p) == support::oracle_accuracy(t, p));
            CHECK(mvc::nmi(t, p) == Catch::Approx(support::oracle_nmi(t, p)).margin(1e-12));
            CHECK(mvc::ari(t, p) == Catch::Approx(support::oracle_ari(t, p)).margin(1e-12));
            CHECK(mvc::pairwise_f1(t, p) ==
                  Catch::Approx(support::oracle_f1(t, p)).margin(1e-12));
            CHECK(mvc::purity(t, p) == support::oracle_purity(t, p));
        }
    }
}

TEST_CASE("report serialization", "[metrics]") {
    mvc::MetricsReport m = mvc::evaluate({0, 0, 1, 1}, {0, 1, 1, 1});
    nlohmann::json j = m;
    CHECK(j["acc"] == 0.75);
    CHECK(j["purity"] == 0.75);
    CHECK(j["n"] == 4);
}
