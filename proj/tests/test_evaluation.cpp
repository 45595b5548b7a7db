#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "modeseek/dataset.hpp"
#include "modeseek/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace modeseek;

namespace {

// Exhaustive pair counting; the independent route to the same ARI.
struct PairCounts {
    std::int64_t both = 0;      // same pred cluster and same truth class
    std::int64_t pred_same = 0; // same pred cluster
    std::int64_t truth_same = 0;
};

PairCounts count_pairs(std::span<const int> pred, std::span<const int> truth) {
    PairCounts counts;
    for (std::size_t i = 0; i < pred.size(); ++i)
        for (std::size_t j = i + 1; j < pred.size(); ++j) {
            const bool same_pred = pred[i] == pred[j];
            const bool same_truth = truth[i] == truth[j];
            counts.pred_same += same_pred;
            counts.truth_same += same_truth;
            counts.both += same_pred && same_truth;
        }
    return counts;
}

double brute_force_ari(std::span<const int> pred, std::span<const int> truth) {
    const PairCounts counts = count_pairs(pred, truth);
    const auto n = static_cast<std::int64_t>(pred.size());
    const double pairs = static_cast<double>(n * (n - 1) / 2);
    const double expected =
        static_cast<double>(counts.pred_same) * static_cast<double>(counts.truth_same) / pairs;
    const double denom =
        0.5 * static_cast<double>(counts.pred_same + counts.truth_same) - expected;
    if (denom == 0.0) return 1.0;
    return (static_cast<double>(counts.both) - expected) / denom;
}

// Majority mapping by explicit tallying over raw label values.
double brute_force_accuracy(std::span<const int> pred, std::span<const int> truth) {
    std::vector<int> clusters(pred.begin(), pred.end());
    std::sort(clusters.begin(), clusters.end());
    clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());
    std::int64_t correct = 0;
    for (int c : clusters) {
        std::vector<int> classes(truth.begin(), truth.end());
        std::sort(classes.begin(), classes.end());
        classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
        int best_class = classes.front();
        std::int64_t best_count = -1;
        for (int t : classes) {
            std::int64_t count = 0;
            for (std::size_t i = 0; i < pred.size(); ++i)
                count += pred[i] == c && truth[i] == t;
            if (count > best_count) { // strict: ties keep the smaller class
                best_count = count;
                best_class = t;
            }
        }
        for (std::size_t i = 0; i < pred.size(); ++i)
            correct += pred[i] == c && truth[i] == best_class;
    }
    return static_cast<double>(correct) / static_cast<double>(pred.size());
}

ClusterSizeDist random_dist(SplitMix64& rng, std::size_t max_atoms) {
    const std::size_t k = 1 + rng.next() % max_atoms;
    std::vector<double> masses(k);
    double total = 0.0;
    for (double& m : masses) {
        m = 0.05 + rng.uniform_half();
        total += m;
    }
    for (double& m : masses) m /= total;
    // repair rounding so validate() is happy
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) sum += masses[i];
    masses.back() = 1.0 - sum;
    ClusterSizeDist dist;
    dist.masses = std::move(masses);
    return dist;
}

double riemann_cvm(const ClusterSizeDist& p, const ClusterSizeDist& q, std::size_t points) {
    auto cdf = [](const ClusterSizeDist& dist, double u) {
        double f = 0.0;
        for (double m : dist.masses)
            if (m <= u) f += 1.0 / static_cast<double>(dist.masses.size());
        return f;
    };
    double sum = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(points);
        const double gap = cdf(p, u) - cdf(q, u);
        sum += gap * gap;
    }
    return sum / static_cast<double>(points);
}

} // namespace

TEST_CASE("many-to-one accuracy") {
    const std::vector<int> truth = {0, 0, 1, 1, 2, 2};
    const std::vector<int> one_cluster = {7, 7, 7, 7, 7, 7};
    CHECK(many_to_one_accuracy(one_cluster, truth) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(many_to_one_accuracy(truth, truth) == 1.0);

    // Splitting one true class across two clusters keeps accuracy 1.
    const std::vector<int> split = {0, 9, 1, 1, 2, 2};
    CHECK(many_to_one_accuracy(split, truth) == brute_force_accuracy(split, truth));
    CHECK(many_to_one_accuracy(split, truth) == 1.0);

    const std::vector<int> shorter = {0, 0};
    CHECK_THROWS(many_to_one_accuracy(shorter, truth));
}

TEST_CASE("adjusted rand index reference cases") {
    const std::vector<int> truth = {0, 0, 1, 1, 2, 2};
    const std::vector<int> one_cluster = {0, 0, 0, 0, 0, 0};
    CHECK(adjusted_rand_index(one_cluster, truth) == 0.0);
    CHECK(adjusted_rand_index(truth, truth) == 1.0);

    const std::vector<int> pred = {0, 0, 1, 1};
    const std::vector<int> cross = {0, 1, 0, 1};
    CHECK(adjusted_rand_index(pred, cross) == brute_force_ari(pred, cross));
    CHECK(adjusted_rand_index(pred, cross) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("ari and accuracy agree with brute force on random labelings") {
    SplitMix64 rng(151);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.next() % 11;
        std::vector<int> pred(n), truth(n);
        for (auto& v : pred) v = static_cast<int>(rng.next() % 4);
        for (auto& v : truth) v = static_cast<int>(rng.next() % 3);
        CHECK(adjusted_rand_index(pred, truth) == brute_force_ari(pred, truth));
        CHECK(many_to_one_accuracy(pred, truth) == brute_force_accuracy(pred, truth));
    }
}

TEST_CASE("label permutation invariance") {
    SplitMix64 rng(161);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 4 + rng.next() % 9;
        std::vector<int> pred(n), truth(n);
        for (auto& v : pred) v = static_cast<int>(rng.next() % 3);
        for (auto& v : truth) v = static_cast<int>(rng.next() % 3);
        std::vector<int> relabeled(n);
        const int permutation[3] = {2, 0, 1};
        for (std::size_t i = 0; i < n; ++i) relabeled[i] = permutation[pred[i]];
        CHECK(std::abs(adjusted_rand_index(relabeled, truth) -
                       adjusted_rand_index(pred, truth)) <= 1e-12);
        CHECK(many_to_one_accuracy(relabeled, truth) == many_to_one_accuracy(pred, truth));
    }
}

TEST_CASE("cvm closed-form cases") {
    const ClusterSizeDist whole{{1.0}};
    const ClusterSizeDist halves{{0.5, 0.5}};
    const ClusterSizeDist thirds{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};

    CHECK(cvm_distance(whole, halves) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cvm_distance(whole, whole) == 0.0);
    CHECK(cvm_distance(halves, halves) == 0.0);
    // Step-CDF convention: F_q reaches 1 at 1/3, gap of 1 over [1/3, 1).
    CHECK(cvm_distance(whole, thirds) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

    CHECK_THROWS(cvm_distance(whole, ClusterSizeDist{{}}));
    CHECK_THROWS(cvm_distance(whole, ClusterSizeDist{{0.5, 0.4}}));
}

TEST_CASE("cvm symmetry, bounds, and identity of indiscernibles") {
    SplitMix64 rng(171);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = random_dist(rng, 4);
        const auto q = random_dist(rng, 4);
        const double pq = cvm_distance(p, q);
        CHECK(std::abs(pq - cvm_distance(q, p)) <= 1e-15);
        CHECK(pq >= 0.0);
        CHECK(pq <= 1.0);
        CHECK(cvm_distance(p, p) == 0.0);

        auto sorted_p = p.masses;
        auto sorted_q = q.masses;
        std::sort(sorted_p.begin(), sorted_p.end());
        std::sort(sorted_q.begin(), sorted_q.end());
        if (pq == 0.0)
            CHECK(sorted_p == sorted_q);
    }
}

TEST_CASE("cvm agrees with a riemann-sum oracle") {
    SplitMix64 rng(181);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = random_dist(rng, 4);
        const auto q = random_dist(rng, 4);
        CHECK(std::abs(cvm_distance(p, q) - riemann_cvm(p, q, 1000000)) <= 1e-5);
    }
}

TEST_CASE("evaluate_clustering assembles the full report") {
    const std::vector<int> truth = {0, 0, 0, 1, 1, 1};
    const std::vector<int> pred = {5, 5, 5, 5, 5, 5};
    const auto report = evaluate_clustering(pred, truth);
    CHECK(report.ari == 0.0);
    CHECK(report.accuracy == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(report.cvm == doctest::Approx(0.5).epsilon(1e-15)); // (1) vs (1/2, 1/2)
    REQUIRE(report.contingency.size() == 1);
    CHECK(report.contingency[0] == std::vector<std::int64_t>{3, 3});
}
