#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "femtoloss/error.hpp"
#include "femtoloss/mmse_estimator.hpp"
#include "femtoloss/random.hpp"
#include "femtoloss/uplink_power.hpp"

using namespace femtoloss;

namespace {

PowerStats<double> constant_stats(Eigen::Index n, double mean, double mean_square) {
    return {Eigen::VectorXd::Constant(n, mean), Eigen::VectorXd::Constant(n, mean_square)};
}

PowerStats<double> random_stats(RandomStream& rng, Eigen::Index n) {
    PowerStats<double> s{Eigen::VectorXd(n), Eigen::VectorXd(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        s.mean[i] = std::pow(10.0, -3.0 + 3.0 * rng.uniform());
        s.mean_square[i] = s.mean[i] * s.mean[i] * (1.0 + 4.0 * rng.uniform());
    }
    return s;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("noise-free correlations") {
    const GeometryPrior<double> prior{0, 0, 0.3, 0.2};
    const auto sys = build_correlations(constant_stats(4, 2.0, 4.0), prior, 0.0);
    for (Eigen::Index i = 0; i < 4; ++i) {
        CHECK(sys.cross[i] == doctest::Approx(2.0 * 0.2));
        for (Eigen::Index j = 0; j < 4; ++j) {
            CHECK(sys.autocorr(i, j) == doctest::Approx(i == j ? 2.0 * 4.0 * 0.2 : 4.0 * 0.2));
        }
    }
}

TEST_CASE("index-resolved correlations with noise") {
    PowerStats<double> stats{Eigen::Vector2d(1.0, 3.0), Eigen::Vector2d(2.0, 11.0)};
    const GeometryPrior<double> prior{0, 0, 0.5, 0.4};
    const double s2 = 0.7;
    const auto sys = build_correlations(stats, prior, s2);
    CHECK(sys.cross[0] == doctest::Approx(1.0 * 0.4 + s2 * 0.5));
    CHECK(sys.cross[1] == doctest::Approx(3.0 * 0.4 + s2 * 0.5));
    CHECK(sys.autocorr(0, 0) == doctest::Approx(2 * 2.0 * 0.4 + 2 * 1.0 * 0.5 * s2 + 3 * s2 * s2));
    CHECK(sys.autocorr(1, 1) == doctest::Approx(2 * 11.0 * 0.4 + 2 * 3.0 * 0.5 * s2 + 3 * s2 * s2));
    const double off = 1.0 * 3.0 * 0.4 + 1.0 * 0.5 * s2 + 3.0 * 0.5 * s2 + s2 * s2;
    CHECK(sys.autocorr(0, 1) == doctest::Approx(off));
    CHECK(sys.autocorr(1, 0) == doctest::Approx(off));
}

TEST_CASE("auto-correlation is symmetric positive semidefinite") {
    RandomStream rng(41);
    for (int t = 0; t < 50; ++t) {
        const Eigen::Index n = t < 25 ? 3 : 40;
        const auto stats = random_stats(rng, n);
        const double x1 = std::pow(10.0, -12.0 + 2.0 * rng.uniform());
        const GeometryPrior<double> prior{0, 0, x1, x1 * x1 * (1.0 + 10.0 * rng.uniform())};
        const auto sys = build_correlations(stats, prior, std::pow(10.0, -14.0 + 2.0 * rng.uniform()));
        CHECK((sys.autocorr - sys.autocorr.transpose()).norm() == 0.0);
        CHECK(min_eigenvalue(sys.autocorr) >= -1e-12 * sys.autocorr.trace());
    }
}

TEST_CASE("single-sample estimate") {
    const GeometryPrior<double> prior{0, 0, 0.5, 0.5};
    const auto sys = build_correlations(constant_stats(1, 1.0, 1.0), prior, 0.0);
    const auto est = estimate_x<double>(sys, Eigen::VectorXd::Constant(1, 0.5));
    CHECK(est.weights[0] == doctest::Approx(0.5));
    CHECK(est.x_hat == doctest::Approx(0.25));
    CHECK_FALSE(est.regularized);

    const auto zero = estimate_x<double>(sys, Eigen::VectorXd::Zero(1));
    CHECK(zero.x_hat == 0.0);

    CHECK_THROWS_AS(estimate_x<double>(sys, Eigen::VectorXd::Constant(2, 1.0)), InputError);
    CHECK_THROWS_AS(estimate_x<double>(sys, Eigen::VectorXd::Constant(1, -1.0)), InputError);
}

TEST_CASE("normal equations hold on random I=200 systems") {
    RandomStream rng(43);
    for (int t = 0; t < 20; ++t) {
        const auto stats = random_stats(rng, 200);
        const double x1 = std::pow(10.0, -12.0 + 2.0 * rng.uniform());
        const GeometryPrior<double> prior{0, 0, x1, x1 * x1 * (1.0 + 10.0 * rng.uniform())};
        const auto sys = build_correlations(stats, prior, 1e-13);
        Eigen::VectorXd received(200);
        for (Eigen::Index i = 0; i < 200; ++i) {
            received[i] = 1e-14 * rng.fading_gain();
        }
        const auto est = estimate_x<double>(sys, received);
        const double residual = (sys.autocorr * est.weights - sys.cross).norm() / sys.cross.norm();
        CHECK(residual <= 1e-8);
        CHECK(est.condition_estimate > 1.0);
        CHECK(est.x_hat == doctest::Approx(est.weights.dot(received)));
    }
}

TEST_CASE("noise-free estimate is scale invariant") {
    const GeometryPrior<double> prior{0, 0, 2e-11, 9e-22};
    RandomStream rng(44);
    const auto stats = random_stats(rng, 30);
    Eigen::VectorXd received(30);
    for (Eigen::Index i = 0; i < 30; ++i) {
        received[i] = stats.mean[i] * 1e-11 * rng.fading_gain();
    }
    const auto base = estimate_x<double>(build_correlations(stats, prior, 0.0), received);
    for (double c : {1e-3, 7.0, 1e4}) {
        PowerStats<double> scaled{stats.mean * c, stats.mean_square * c * c};
        const Eigen::VectorXd rc = received * c;
        const auto est = estimate_x<double>(build_correlations(scaled, prior, 0.0), rc);
        CHECK(est.x_hat == doctest::Approx(base.x_hat).epsilon(1e-9));
    }
}

TEST_CASE("ill-conditioned systems are regularized") {
    CorrelationSystem<double> sys;
    const Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(5, 1.0, 2.0);
    sys.autocorr = v * v.transpose();
    sys.cross = v;
    const auto est = estimate_x<double>(sys, v);
    CHECK(est.regularized);
    CHECK(est.ridge == doctest::Approx(1e-10 * sys.autocorr.diagonal().mean()));
    CHECK(std::isfinite(est.x_hat));
    CHECK(est.x_hat == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("path loss from the inverse estimate") {
    const auto model = PropagationModel<double>::from_db(15.3, 3.76);
    CHECK(pathloss_from_x(0.25, model, 500.0).loss == doctest::Approx(4.0));
    CHECK_FALSE(pathloss_from_x(0.25, model, 500.0).clamped);
    CHECK(pathloss_from_x(1.0, model, 500.0).loss == doctest::Approx(1.0));
    const auto clamped = pathloss_from_x(-1e-9, model, 500.0);
    CHECK(clamped.clamped);
    CHECK(clamped.loss == doctest::Approx(model.unit_loss() * std::pow(1000.0, 3.76)).epsilon(1e-12));
    CHECK(pathloss_from_x(0.0, model, 500.0).clamped);
}

namespace {

// Draws x from the circle prior and P_r per the received-power model.
struct PriorSampler {
    ScenarioConfig config;
    double r0, r1, uplink_loss;
    std::vector<int> modes;

    double draw_x(RandomStream& rng) const {
        const double theta = 2.0 * std::numbers::pi * rng.uniform();
        return 1.0 / config.propagation.loss(pu_su_distance(r0, r1, theta));
    }

    void draw_received(RandomStream& rng, double x, Eigen::VectorXd& out) const {
        for (std::size_t i = 0; i < modes.size(); ++i) {
            const double tx = simulate_tx_power(modes[i], uplink_loss, rng.fading_gain(), config);
            out[static_cast<Eigen::Index>(i)] = tx * rng.fading_gain() * x + rng.noise_power(config.noise_power_w);
        }
    }
};

// High-SINR modes and a tight PU-SU distance range keep the Monte Carlo
// error of the second moments well under 1% at 1e6 samples.
PriorSampler make_sampler() {
    auto config = ScenarioConfig::defaults();
    config.uplink_policy = UplinkPolicy::AmcDriven;
    return {config, 400.0, 30.0, config.propagation.loss(400.0), {5, 6, 7}};
}

}  // namespace

TEST_CASE("correlations match a Monte Carlo of the received-power model") {
    const auto sampler = make_sampler();
    const auto stats = compute_power_stats(sampler.modes, sampler.uplink_loss, sampler.config);
    const auto prior = x_moments(sampler.r0, sampler.r1, sampler.config.propagation);
    const auto sys = build_correlations(stats, prior, sampler.config.noise_power_w);

    RandomStream rng(derive_stream_seed(45, 0));
    const int n = 1'000'000;
    Eigen::VectorXd pr(3);
    Eigen::Matrix3d auto_sum = Eigen::Matrix3d::Zero();
    Eigen::Vector3d cross_sum = Eigen::Vector3d::Zero();
    for (int s = 0; s < n; ++s) {
        const double x = sampler.draw_x(rng);
        sampler.draw_received(rng, x, pr);
        auto_sum += pr * pr.transpose();
        cross_sum += x * pr;
    }
    for (int i = 0; i < 3; ++i) {
        CHECK(cross_sum[i] / n == doctest::Approx(sys.cross[i]).epsilon(0.01));
        for (int j = 0; j < 3; ++j) {
            CHECK_MESSAGE(auto_sum(i, j) / n == doctest::Approx(sys.autocorr(i, j)).epsilon(0.01),
                          "entry " << i << "," << j);
        }
    }
}

TEST_CASE("estimation error is orthogonal to the observations") {
    const auto sampler = make_sampler();
    const auto stats = compute_power_stats(sampler.modes, sampler.uplink_loss, sampler.config);
    const auto prior = x_moments(sampler.r0, sampler.r1, sampler.config.propagation);
    const auto sys = build_correlations(stats, prior, sampler.config.noise_power_w);
    const auto weights = estimate_x<double>(sys, Eigen::VectorXd::Zero(3)).weights;

    RandomStream rng(derive_stream_seed(46, 0));
    const int n = 100'000;
    Eigen::VectorXd pr(3);
    Eigen::Vector3d sum = Eigen::Vector3d::Zero(), sum_sq = Eigen::Vector3d::Zero();
    for (int s = 0; s < n; ++s) {
        const double x = sampler.draw_x(rng);
        sampler.draw_received(rng, x, pr);
        const Eigen::Vector3d term = (x - weights.dot(pr)) * pr;
        sum += term;
        sum_sq += term.cwiseAbs2();
    }
    for (int i = 0; i < 3; ++i) {
        const double mean = sum[i] / n;
        const double se = std::sqrt((sum_sq[i] / n - mean * mean) / n);
        CHECK_MESSAGE(std::abs(mean) <= 3.0 * se, "instant " << i);
    }
}
