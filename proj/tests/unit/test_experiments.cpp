#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "femtoloss/error.hpp"
#include "femtoloss/experiments.hpp"

using namespace femtoloss;

TEST_CASE("error summary") {
    const auto s = summarize({1.0, 2.0, 3.0, 4.0});
    CHECK(s.mean_db == doctest::Approx(2.5));
    CHECK(s.stderr_db == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(s.trials == 4);
    CHECK(summarize({7.0}).stderr_db == 0.0);
}

TEST_CASE("per-trial seeds are distinct") {
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t p = 0; p < 20; ++p) {
        for (std::uint64_t t = 0; t < 50; ++t) {
            seeds.push_back(trial_seed(99, p, t));
        }
    }
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
    CHECK(trial_seed(99, 3, 4) == trial_seed(99, 3, 4));
    CHECK(trial_seed(99, 3, 4) != trial_seed(100, 3, 4));
}

TEST_CASE("parallel_for visits each index once and propagates errors") {
    for (int threads : {1, 3, 8}) {
        std::vector<std::atomic<int>> hits(100);
        parallel_for(hits.size(), threads, [&](std::size_t i) { ++hits[i]; });
        for (const auto& h : hits) {
            CHECK(h.load() == 1);
        }
    }
    CHECK_THROWS_AS(parallel_for(10, 2,
                                 [](std::size_t i) {
                                     if (i == 7) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("fig3 output is independent of thread count") {
    const auto config = ScenarioConfig::defaults();
    Fig3Spec spec;
    spec.distances_m = {50, 300};
    spec.trials = 6;
    std::ostringstream a, b;
    write_fig3_csv(a, run_fig3(spec, config));
    spec.threads = 3;
    write_fig3_csv(b, run_fig3(spec, config));
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("distance_m,mean_abs_err_db,stderr_db,trials\n50,", 0) == 0);

    spec.distances_m = {20};
    CHECK_THROWS_AS(run_fig3(spec, config), InputError);
    spec.distances_m = {100};
    spec.trials = 0;
    CHECK_THROWS_AS(run_fig3(spec, config), InputError);
}

TEST_CASE("fig5 grid skips the coincident point") {
    const auto config = ScenarioConfig::defaults();
    Fig5Spec spec;
    spec.su_radii_m = {100};
    spec.pu_radii_m = {100, 250};
    spec.theta_points = 4;
    spec.trials = 2;
    const auto rows = run_fig5(spec, config);
    REQUIRE(rows.size() == 8);
    int skipped = 0;
    for (const auto& row : rows) {
        if (row.skipped) {
            ++skipped;
            CHECK(row.pu_radius_m == 100.0);
            CHECK(row.theta_rad == doctest::Approx(std::acos(-1.0)));
            CHECK(std::isnan(row.error.mean_db));
            CHECK(row.error.trials == 0);
        } else {
            CHECK(row.error.trials == 2);
            CHECK(std::isfinite(row.error.mean_db));
        }
    }
    CHECK(skipped == 1);

    std::ostringstream a, b;
    write_fig5_csv(a, rows);
    spec.threads = 4;
    write_fig5_csv(b, run_fig5(spec, config));
    CHECK(a.str() == b.str());
    CHECK(a.str().find(",nan,nan,0\n") != std::string::npos);
}

TEST_CASE("single-run report") {
    const auto config = ScenarioConfig::defaults();
    const auto outcome = run_single({}, config);
    std::ostringstream out;
    write_single_report(out, outcome);
    const auto text = out.str();
    for (const char* field : {"L_bp", "L_bp_hat", "L_ps", "L_ps_hat", "L_sp_hat"}) {
        CHECK_MESSAGE(text.find(field) != std::string::npos, field);
    }
    const auto again = run_single({}, config);
    CHECK(again.estimate.loss_ps == outcome.estimate.loss_ps);
}
