#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "mecsim/workload.hpp"

using namespace mecsim;

namespace {

// Independent normalizer oracle: Kahan-compensated direct summation in
// long double, no shared code with zipf_pmf.
long double zipf_normalizer_oracle(int n, double alpha) {
    long double sum = 0.0L, c = 0.0L;
    for (int i = 1; i <= n; ++i) {
        const long double term = powl(static_cast<long double>(i), -static_cast<long double>(alpha));
        const long double y = term - c;
        const long double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

}  // namespace

TEST_CASE("zipf_pmf basics") {
    CHECK(zipf_pmf(1, 0.8) == std::vector<double>{1.0});

    const auto uniform = zipf_pmf(4, 0.0);
    for (double p : uniform) CHECK(p == Catch::Approx(0.25).epsilon(1e-15));

    CHECK_THROWS_AS(zipf_pmf(0, 0.8), std::invalid_argument);
    CHECK_THROWS_AS(zipf_pmf(10, -0.1), std::invalid_argument);
}

TEST_CASE("zipf_pmf matches the direct-summation oracle") {
    const auto p = zipf_pmf(1000, 0.8);
    const double expected_p0 = static_cast<double>(1.0L / zipf_normalizer_oracle(1000, 0.8));
    CHECK(p[0] == Catch::Approx(expected_p0).epsilon(1e-12));
    CHECK(p[0] == Catch::Approx(0.06464203343751782).epsilon(1e-12));

    double mass = 0.0;
    for (double x : p) mass += x;
    CHECK(std::abs(mass - 1.0) < 1e-12);

    CHECK(std::is_sorted(p.rbegin(), p.rend()));
}

TEST_CASE("shuffle_popularity is deterministic per seed") {
    const auto a = shuffle_popularity(10, 3, 77);
    const auto b = shuffle_popularity(10, 3, 77);
    CHECK(a.rank_of_video == b.rank_of_video);
    CHECK(shuffle_popularity(10, 3, 78).rank_of_video != a.rank_of_video);
}

TEST_CASE("shuffle_popularity produces per-BS bijections") {
    const auto profile = shuffle_popularity(10, 1, 5);
    REQUIRE(profile.n_bs() == 1);
    auto ranks = profile.rank_of_video[0];
    std::sort(ranks.begin(), ranks.end());
    std::vector<int> expected(10);
    std::iota(expected.begin(), expected.end(), 0);
    CHECK(ranks == expected);
}

TEST_CASE("shuffle_popularity gives distinct permutations across BSs") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto profile = shuffle_popularity(1000, 5, seed);
        for (int a = 0; a < 5; ++a) {
            for (int b = a + 1; b < 5; ++b) {
                REQUIRE(profile.rank_of_video[static_cast<std::size_t>(a)] !=
                        profile.rank_of_video[static_cast<std::size_t>(b)]);
            }
        }
    }
}

TEST_CASE("generate_trace: no arrivals at zero rate, errors on bad input") {
    const auto catalog = default_catalog();
    const auto profile = shuffle_popularity(catalog.n_videos, 2, 1);
    const std::vector<double> vd{0.25, 0.25, 0.25, 0.25};
    CHECK(generate_trace(profile, catalog, 0.0, 3600.0, vd, 1).requests.empty());
    CHECK_THROWS_AS(generate_trace(profile, catalog, -1.0, 3600.0, vd, 1), std::invalid_argument);
    const std::vector<double> bad{0.5, 0.5, 0.5, 0.5};
    CHECK_THROWS_AS(generate_trace(profile, catalog, 1.0, 3600.0, bad, 1), std::invalid_argument);
}

TEST_CASE("generate_trace: Poisson count within 4 sigma") {
    const auto catalog = default_catalog();
    const auto profile = shuffle_popularity(catalog.n_videos, 5, 42);
    const std::vector<double> vd{0.25, 0.25, 0.25, 0.25};
    const auto trace = generate_trace(profile, catalog, 2.0, 3600.0, vd, 42);
    // 5 BS * 2 req/min * 60 min = 600 expected, sigma = sqrt(600)
    const double sigma = std::sqrt(600.0);
    CHECK(std::abs(static_cast<double>(trace.requests.size()) - 600.0) < 4.0 * sigma);
}

TEST_CASE("generate_trace: deterministic, time ordered, per-BS order kept") {
    const auto catalog = default_catalog();
    const auto profile = shuffle_popularity(catalog.n_videos, 3, 9);
    const std::vector<double> vd{0.25, 0.25, 0.25, 0.25};
    const auto t1 = generate_trace(profile, catalog, 4.0, 7200.0, vd, 9);
    const auto t2 = generate_trace(profile, catalog, 4.0, 7200.0, vd, 9);
    REQUIRE(t1.requests.size() == t2.requests.size());
    for (std::size_t i = 0; i < t1.requests.size(); ++i) {
        CHECK(t1.requests[i].arrival_time_s == t2.requests[i].arrival_time_s);
        CHECK(t1.requests[i].bs_id == t2.requests[i].bs_id);
        CHECK(t1.requests[i].video_id == t2.requests[i].video_id);
        CHECK(t1.requests[i].variant_idx == t2.requests[i].variant_idx);
    }

    double prev = 0.0;
    for (const auto& r : t1.requests) {
        CHECK(r.arrival_time_s >= prev);
        CHECK(r.arrival_time_s <= t1.horizon_s);
        prev = r.arrival_time_s;
    }

    // Adding a BS must not perturb the streams of existing BSs.
    const auto profile4 = shuffle_popularity(catalog.n_videos, 4, 9);
    const auto t4 = generate_trace(profile4, catalog, 4.0, 7200.0, vd, 9);
    std::vector<Request> bs0_before, bs0_after;
    for (const auto& r : t1.requests)
        if (r.bs_id == 0) bs0_before.push_back(r);
    for (const auto& r : t4.requests)
        if (r.bs_id == 0) bs0_after.push_back(r);
    REQUIRE(bs0_before.size() == bs0_after.size());
    for (std::size_t i = 0; i < bs0_before.size(); ++i) {
        CHECK(bs0_before[i].arrival_time_s == bs0_after[i].arrival_time_s);
        CHECK(bs0_before[i].video_id == bs0_after[i].video_id);
    }
}

TEST_CASE("generate_trace: sampled ranks pass a chi-square test at the 1% level") {
    const int n_videos = 1000;
    const auto catalog = default_catalog();
    const auto profile = shuffle_popularity(n_videos, 1, 20240601);
    const std::vector<double> vd{0.25, 0.25, 0.25, 0.25};
    // 1 BS at 60 req/min over 1e5 minutes -> ~1e5 samples
    const auto trace = generate_trace(profile, catalog, 60.0, 1e5 * 60.0, vd, 20240601);
    REQUIRE(trace.requests.size() > 90000);

    const auto& ranks = profile.rank_of_video[0];
    std::vector<double> observed(n_videos, 0.0);
    for (const auto& r : trace.requests)
        observed[static_cast<std::size_t>(ranks[static_cast<std::size_t>(r.video_id)])] += 1.0;

    const auto pmf = zipf_pmf(n_videos, 0.8);
    const double n = static_cast<double>(trace.requests.size());
    double chi2 = 0.0;
    for (int i = 0; i < n_videos; ++i) {
        const double expected = n * pmf[static_cast<std::size_t>(i)];
        REQUIRE(expected >= 5.0);  // no binning needed at this sample size
        const double d = observed[static_cast<std::size_t>(i)] - expected;
        chi2 += d * d / expected;
    }
    // Wilson-Hilferty 99th percentile of chi-square with k dof
    const double k = n_videos - 1;
    const double z99 = 2.3263478740408408;
    const double critical = k * std::pow(1.0 - 2.0 / (9.0 * k) + z99 * std::sqrt(2.0 / (9.0 * k)), 3.0);
    CHECK(chi2 < critical);
}

TEST_CASE("generate_trace: empirical rank CDF within 0.01 of zipf at 1e6 samples") {
    const int n_videos = 1000;
    const auto catalog = default_catalog();
    const auto profile = shuffle_popularity(n_videos, 1, 7);
    const std::vector<double> vd{0.25, 0.25, 0.25, 0.25};
    const auto trace = generate_trace(profile, catalog, 60.0, 1e6 * 60.0, vd, 7);
    REQUIRE(trace.requests.size() > 900000);

    const auto& ranks = profile.rank_of_video[0];
    std::vector<double> counts(n_videos, 0.0);
    for (const auto& r : trace.requests)
        counts[static_cast<std::size_t>(ranks[static_cast<std::size_t>(r.video_id)])] += 1.0;

    const auto pmf = zipf_pmf(n_videos, 0.8);
    const double n = static_cast<double>(trace.requests.size());
    double ks = 0.0, emp = 0.0, truth = 0.0;
    for (int i = 0; i < n_videos; ++i) {
        emp += counts[static_cast<std::size_t>(i)] / n;
        truth += pmf[static_cast<std::size_t>(i)];
        ks = std::max(ks, std::abs(emp - truth));
    }
    CHECK(ks < 0.01);
}
