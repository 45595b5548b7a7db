#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "modeseek/meanshift.hpp"

#include <cmath>

using namespace modeseek;

namespace {

Dataset make_dataset(std::vector<double> xs, std::size_t d) {
    Dataset data;
    data.d = d;
    data.n = xs.size() / d;
    data.xs = std::move(xs);
    return data;
}

Dataset random_dataset(SplitMix64& rng, std::size_t n, std::size_t d) {
    Dataset data;
    data.n = n;
    data.d = d;
    data.xs.resize(n * d);
    for (double& v : data.xs) v = 2.0 * rng.uniform_half() - 1.0;
    return data;
}

} // namespace

TEST_CASE("ms_step closed-form cases") {
    const auto gaussian = KernelProfile::gaussian();
    MeanShiftConfig config;
    config.h = 1.0;

    const Dataset single = make_dataset({0.4, -0.3}, 2);
    const Vec fixed = ms_step(single, gaussian, config, 0, single.point(0));
    CHECK(fixed[0] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(fixed[1] == doctest::Approx(-0.3).epsilon(1e-15));

    // Large bandwidth pulls the first step to the sample mean.
    const Dataset pair = make_dataset({0.0, 1.0}, 1);
    config.h = 1e6;
    const Vec to_mean = ms_step(pair, gaussian, config, 0, pair.point(0));
    CHECK(std::abs(to_mean[0] - 0.5) <= 1e-9);

    // Exclude-self with two points leaves a single term.
    const auto laplace = KernelProfile::laplace(1.0);
    config.h = 3.0;
    config.exclude_self = true;
    const Vec other = ms_step(pair, laplace, config, 0, pair.point(0));
    CHECK(other[0] == 1.0);
}

TEST_CASE("degenerate steps are reported") {
    const auto gaussian = KernelProfile::gaussian();
    const Dataset single = make_dataset({1.0}, 1);
    MeanShiftConfig config;
    config.h = 1.0;
    config.exclude_self = true;
    CHECK_THROWS_AS(ms_step(single, gaussian, config, 0, single.point(0)),
                    degenerate_step_error);

    // run_from_seed flags the seed instead of propagating.
    const auto run = run_from_seed(single, gaussian, config, 0);
    CHECK(!run.converged);
    CHECK(run.iterations == 0);
    CHECK(run.endpoint[0] == 1.0);

    // Underflowed weights count as degenerate too.
    const Dataset far = make_dataset({0.0, 1e9}, 1);
    MeanShiftConfig tiny;
    tiny.h = 1.0;
    tiny.exclude_self = true;
    CHECK_THROWS_AS(ms_step(far, gaussian, tiny, 0, far.point(0)), degenerate_step_error);
}

TEST_CASE("single-point dataset converges immediately") {
    const Dataset single = make_dataset({2.0, 3.0}, 2);
    MeanShiftConfig config;
    config.h = 1.0;
    const auto run = run_from_seed(single, KernelProfile::gaussian(), config, 0);
    CHECK(run.converged);
    CHECK(run.iterations <= 1);
    CHECK(run.endpoint[0] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("fixed-point consistency at converged endpoints") {
    SplitMix64 rng(81);
    for (const auto& profile : {KernelProfile::gaussian(), KernelProfile::laplace(1.0),
                                KernelProfile::cauchy_from_p(1.2)}) {
        const Dataset data = random_dataset(rng, 12, 2);
        MeanShiftConfig config;
        config.h = 0.8 * data.max_norm();
        config.exclude_self = profile.singular_at_zero();
        const auto result = run_all(data, profile, config);
        for (std::size_t i = 0; i < data.n; ++i) {
            if (!result.converged_flags[i]) continue;
            const Vec next = ms_step(data, profile, config, i, result.endpoints[i]);
            CHECK(std::sqrt(squared_distance(next, result.endpoints[i])) <=
                  2.0 * config.conv_tol);
        }
    }
}

TEST_CASE("affine equivariance under translation") {
    SplitMix64 rng(91);
    const Dataset data = random_dataset(rng, 10, 3);
    Dataset shifted = data;
    const Vec t = {5.0, -3.0, 11.0};
    for (std::size_t i = 0; i < shifted.n; ++i)
        for (std::size_t j = 0; j < 3; ++j) shifted.xs[i * 3 + j] += t[j];

    MeanShiftConfig config;
    config.h = 1.5;
    const auto base = run_all(data, KernelProfile::gaussian(), config);
    const auto moved = run_all(shifted, KernelProfile::gaussian(), config);
    for (std::size_t i = 0; i < data.n; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(std::abs(moved.endpoints[i][j] - (base.endpoints[i][j] + t[j])) <= 1e-9);
}

TEST_CASE("iterates stay within the data max norm") {
    SplitMix64 rng(101);
    for (const auto& profile : {KernelProfile::gaussian(), KernelProfile::laplace(1.0)}) {
        const Dataset data = random_dataset(rng, 15, 2);
        const double xmax = data.max_norm();
        MeanShiftConfig config;
        config.h = 0.5 * xmax;
        config.exclude_self = profile.singular_at_zero();
        config.record_trajectories = true;
        const auto result = run_all(data, profile, config);
        for (const auto& trajectory : result.trajectories)
            for (const auto& y : trajectory)
                CHECK(norm(y) <= xmax * (1.0 + 1e-12) + 1e-12);
    }
}

TEST_CASE("merging: tolerance zero separates distinct endpoints") {
    const Dataset data = make_dataset({0.0, 10.0, 20.0}, 1);
    MeanShiftConfig config;
    config.h = 0.5;
    config.merge_tol = 0.0;
    const auto result = run_all(data, KernelProfile::gaussian(), config);
    CHECK(result.merged_modes.size() == 3);
    CHECK(result.cluster_sizes == std::vector<int>{1, 1, 1});

    int total = 0;
    for (int s : result.cluster_sizes) total += s;
    CHECK(total == static_cast<int>(data.n));
}

TEST_CASE("merge assignment stays within merge_tol of the representative") {
    SplitMix64 rng(111);
    const Dataset data = random_dataset(rng, 30, 2);
    MeanShiftConfig config;
    config.h = 0.6 * data.max_norm();
    config.merge_tol = 0.05;
    const auto result = run_all(data, KernelProfile::gaussian(), config);
    int total = 0;
    for (int s : result.cluster_sizes) total += s;
    CHECK(total == static_cast<int>(data.n));
    for (std::size_t i = 0; i < data.n; ++i) {
        const int m = result.assignment[i];
        CHECK(std::sqrt(squared_distance(result.endpoints[i], result.merged_modes[m])) <=
              config.merge_tol + 1e-12);
    }

    // Endpoints lie inside the data bounding box (weighted mean property).
    for (std::size_t j = 0; j < data.d; ++j) {
        double lo = data.xs[j], hi = data.xs[j];
        for (std::size_t i = 0; i < data.n; ++i) {
            lo = std::min(lo, data.xs[i * data.d + j]);
            hi = std::max(hi, data.xs[i * data.d + j]);
        }
        for (const auto& endpoint : result.endpoints) {
            CHECK(endpoint[j] >= lo - 1e-12);
            CHECK(endpoint[j] <= hi + 1e-12);
        }
    }
}

TEST_CASE("runs are bit-identical regardless of worker count") {
    SplitMix64 rng(121);
    const Dataset data = random_dataset(rng, 24, 2);
    MeanShiftConfig config;
    config.h = 0.7 * data.max_norm();
    config.exclude_self = true;

    config.threads = 1;
    const auto serial = run_all(data, KernelProfile::laplace(1.0), config);
    for (unsigned workers : {2u, 3u, 8u}) {
        config.threads = workers;
        const auto parallel = run_all(data, KernelProfile::laplace(1.0), config);
        CHECK(parallel.assignment == serial.assignment);
        CHECK(parallel.iterations == serial.iterations);
        for (std::size_t i = 0; i < data.n; ++i)
            for (std::size_t j = 0; j < data.d; ++j)
                CHECK(parallel.endpoints[i][j] == serial.endpoints[i][j]);
    }
}

TEST_CASE("knn restriction uses the nearest neighbors of the iterate") {
    // Far seed with knn=2: the two nearest points dominate the update.
    const Dataset data = make_dataset({0.0, 0.1, 10.0}, 1);
    MeanShiftConfig config;
    config.h = 100.0;
    config.knn = 2;
    const Vec from_far = ms_step(data, KernelProfile::gaussian(), config, 2, data.point(2));
    // neighbors of 10.0 are {10.0, 0.1}; at h=100 weights are near-equal
    CHECK(from_far[0] == doctest::Approx(5.05).epsilon(5e-3));

    config.knn = 3;
    const Vec all_points = ms_step(data, KernelProfile::gaussian(), config, 2, data.point(2));
    CHECK(all_points[0] == doctest::Approx(10.1 / 3.0).epsilon(5e-3));

    MeanShiftConfig bad;
    bad.h = 1.0;
    bad.knn = 5;
    CHECK_THROWS_AS(run_all(data, KernelProfile::gaussian(), bad), std::invalid_argument);
}

TEST_CASE("thread count resolution") {
    CHECK(resolve_thread_count(5) == 5);
    setenv("MODESEEK_THREADS", "3", 1);
    CHECK(resolve_thread_count(0) == 3);
    CHECK(resolve_thread_count(7) == 7); // explicit value wins over the env
    unsetenv("MODESEEK_THREADS");
    CHECK(resolve_thread_count(0) >= 1);
}

TEST_CASE("config validation") {
    const Dataset data = make_dataset({0.0, 1.0}, 1);
    MeanShiftConfig config;
    config.h = 0.0;
    CHECK_THROWS_AS(run_all(data, KernelProfile::gaussian(), config), std::invalid_argument);
    config.h = 1.0;
    config.conv_tol = -1.0;
    CHECK_THROWS_AS(run_all(data, KernelProfile::gaussian(), config), std::invalid_argument);
    config.conv_tol = 1e-8;
    config.merge_tol = -0.5;
    CHECK_THROWS_AS(run_all(data, KernelProfile::gaussian(), config), std::invalid_argument);
}
