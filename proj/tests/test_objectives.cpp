#include "etgossip/objectives.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>

using namespace etg;

namespace {

Vector vec1(double v) {
    Vector x(1);
    x << v;
    return x;
}

QuadraticSuite scalar_suite(double alpha = 0.0) {
    Matrix a(1, 1);
    a << 1.0;
    return QuadraticSuite(a, {vec1(0.5), vec1(-0.5)}, alpha);
}

Vector random_vector(RandomStream& s, std::size_t d, double scale) {
    Vector x(static_cast<Eigen::Index>(d));
    for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = scale * s.normal();
    return x;
}

// Central-difference directional derivative check, relative to the scale
// of the gradient.
void check_finite_differences(const ObjectiveSuite& suite, std::uint64_t seed) {
    auto s = RandomStream::derive(seed, Purpose::init, {});
    constexpr double h = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
        const Vector x = random_vector(s, suite.dim(), 1.0);
        Vector dir = random_vector(s, suite.dim(), 1.0);
        dir.normalize();
        const std::size_t i = static_cast<std::size_t>(trial) % suite.nodes();
        const double fd = (suite.local_value(i, x + h * dir) - suite.local_value(i, x - h * dir)) / (2 * h);
        const Vector grad = suite.local_gradient(i, x);
        const double exact = grad.dot(dir);
        CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, grad.norm()));
        const double gfd = (suite.global_value(x + h * dir) - suite.global_value(x - h * dir)) / (2 * h);
        CHECK(std::abs(gfd - suite.global_gradient(x).dot(dir)) <= 1e-6 * std::max(1.0, grad.norm()));
    }
}

void check_lipschitz(const ObjectiveSuite& suite, std::uint64_t seed) {
    auto s = RandomStream::derive(seed, Purpose::init, {1});
    for (int trial = 0; trial < 1000; ++trial) {
        const Vector x = random_vector(s, suite.dim(), 3.0);
        const Vector y = x + random_vector(s, suite.dim(), trial % 2 ? 1e-2 : 2.0);
        const std::size_t i = static_cast<std::size_t>(trial) % suite.nodes();
        const double lhs = (suite.local_gradient(i, x) - suite.local_gradient(i, y)).norm();
        CHECK(lhs <= suite.lipschitz() * (x - y).norm() * (1.0 + 1e-10));
    }
}

}  // namespace

TEST_CASE("spread 0 makes every node identical") {
    const auto suite = make_quadratic_suite(5, 3, 0.0, 0.1, 4);
    CHECK(suite.beta_sq() == doctest::Approx(0.0).epsilon(1e-24));
    const Vector x = Vector::LinSpaced(3, -1.0, 2.0);
    for (std::size_t i = 1; i < 5; ++i) {
        CHECK((suite.local_gradient(i, x) - suite.local_gradient(0, x)).norm() <= 1e-12);
    }
    CHECK((suite.global_gradient(x) - suite.local_gradient(2, x)).norm() <= 1e-12);
}

TEST_CASE("scalar quadratic constants") {
    const auto suite = scalar_suite();
    // b_bar = 0, A = 1: beta^2 = 0.5^2, L = 1.
    CHECK(suite.beta_sq() == doctest::Approx(0.25));
    CHECK(suite.lipschitz() == doctest::Approx(1.0));
    CHECK(suite.local_gradient(0, vec1(2.0))(0) == doctest::Approx(1.5));
    CHECK(suite.local_gradient(0, vec1(0.5))(0) == doctest::Approx(0.0));
    const Vector probes[] = {vec1(-4.0), vec1(0.0), vec1(17.0)};
    CHECK(measure_heterogeneity(suite, probes) == doctest::Approx(0.25));
    CHECK_THROWS_AS(suite.local_gradient(2, vec1(0.0)), std::out_of_range);
    CHECK_THROWS_AS(suite.local_gradient(0, Vector::Zero(2)), DimensionError);
}

TEST_CASE("global gradient matches the closed form and vanishes at the minimizer") {
    const auto suite = make_quadratic_suite(6, 4, 1.5, 0.0, 8);
    const Vector x = Vector::LinSpaced(4, 0.3, -0.9);
    const Vector closed = suite.a().transpose() * (suite.a() * x - suite.mean_target());
    const Vector averaged = suite.ObjectiveSuite::global_gradient(x);
    CHECK((suite.global_gradient(x) - closed).norm() <= 1e-12);
    CHECK((averaged - closed).norm() <= 1e-12);
    CHECK(suite.global_gradient(suite.minimizer()).norm() <= 1e-10);
    // Normal equations give the same minimizer.
    const Vector normal = (suite.a().transpose() * suite.a()).ldlt().solve(suite.a().transpose() * suite.mean_target());
    CHECK((normal - suite.minimizer()).norm() <= 1e-9);
    CHECK(suite.global_value(x) >= suite.optimal_value());
}

TEST_CASE("quadratic heterogeneity is exact and x independent") {
    const auto suite = make_quadratic_suite(7, 5, 0.8, 0.0, 2);
    auto s = RandomStream::derive(2, Purpose::init, {});
    for (int k = 0; k < 10; ++k) {
        const Vector probe[] = {random_vector(s, 5, 10.0)};
        CHECK(measure_heterogeneity(suite, probe) == doctest::Approx(suite.beta_sq()).epsilon(1e-10));
    }
}

TEST_CASE("gradients agree with central finite differences") {
    check_finite_differences(make_quadratic_suite(4, 6, 1.0, 0.0, 3), 10);
    check_finite_differences(make_logistic_suite(4, 6, 30, 0.9, 0.05, 1, 3), 11);
}

TEST_CASE("certified Lipschitz constants hold") {
    check_lipschitz(make_quadratic_suite(4, 6, 1.0, 0.0, 3), 20);
    check_lipschitz(make_logistic_suite(4, 6, 30, 0.9, 0.05, 1, 3), 21);
}

TEST_CASE("noise-free stochastic gradient is exact") {
    const auto suite = make_quadratic_suite(3, 4, 1.0, 0.0, 1);
    auto s = gradient_stream(1, 0, 0, 0);
    const Vector x = Vector::Ones(4);
    CHECK((suite.stochastic_gradient(1, x, s) - suite.local_gradient(1, x)).norm() == 0.0);
}

TEST_CASE("gradient noise is unbiased with E||noise||^2 = alpha^2") {
    constexpr double alpha = 0.7;
    constexpr int kDraws = 100000;
    const auto suite = make_quadratic_suite(3, 4, 1.0, alpha, 1);
    const Vector x = Vector::LinSpaced(4, -1.0, 1.0);
    const Vector exact = suite.local_gradient(2, x);
    Vector mean = Vector::Zero(4);
    double sq = 0.0;
    for (int k = 0; k < kDraws; ++k) {
        auto s = gradient_stream(77, 0, static_cast<std::uint64_t>(k), 2);
        const Vector noise = suite.stochastic_gradient(2, x, s) - exact;
        mean += noise;
        sq += noise.squaredNorm();
    }
    mean /= kDraws;
    const double coord_sd = alpha / 2.0;  // alpha / sqrt(d)
    for (Eigen::Index c = 0; c < 4; ++c) CHECK(std::abs(mean(c)) <= 4.0 * coord_sd / std::sqrt(kDraws));
    CHECK(sq / kDraws == doctest::Approx(alpha * alpha).epsilon(0.05));
}

TEST_CASE("logistic minibatch gradient is unbiased") {
    const auto suite = make_logistic_suite(2, 3, 8, 0.9, 0.1, 2, 5);
    const Vector x = Vector::LinSpaced(3, 0.2, -0.4);
    const Vector exact = suite.local_gradient(1, x);
    Vector mean = Vector::Zero(3);
    constexpr int kDraws = 50000;
    for (int k = 0; k < kDraws; ++k) {
        auto s = gradient_stream(5, 0, static_cast<std::uint64_t>(k), 1);
        mean += suite.stochastic_gradient(1, x, s);
    }
    mean /= kDraws;
    CHECK((mean - exact).norm() <= 0.02);
}

TEST_CASE("logistic suite is label skewed and finite") {
    const auto suite = make_logistic_suite(4, 5, 200, 0.9, 0.0, 1, 12);
    for (std::size_t i = 0; i < 4; ++i) {
        const double home = i % 2 == 0 ? 1.0 : -1.0;
        int matches = 0;
        for (const auto& s : suite.samples(i)) matches += s.label == home;
        CHECK(matches > 150);
    }
    const Vector far = Vector::Constant(5, 1e3);
    CHECK(std::isfinite(suite.global_value(far)));
    CHECK(suite.global_gradient(far).allFinite());
}
