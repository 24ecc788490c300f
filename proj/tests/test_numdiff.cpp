#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "g2lab/models.hpp"
#include "g2lab/numdiff.hpp"
#include "oracles.hpp"

using namespace g2lab;
using oracle::max_abs;

namespace {

double log_barrier(const Eigen::VectorXd& x) { return -x.array().log().sum(); }

} // namespace

TEST_CASE("log barrier derivatives") {
    const Eigen::VectorXd x = Eigen::VectorXd::Ones(4);
    CHECK(max_abs(gradient(log_barrier, x, FDScheme::for_order(1)) + Eigen::VectorXd::Ones(4)) < 1e-9);
    CHECK(max_abs(hessian(log_barrier, x, FDScheme::for_order(2)) - Eigen::MatrixXd::Identity(4, 4)) < 1e-8);
    const auto t3 = partial_tensor<3>(log_barrier, x, FDScheme::for_order(3));
    CHECK(t3.value(1, 1, 1) == doctest::Approx(-2.0).epsilon(1e-5));
    CHECK(std::abs(t3.value(0, 1, 1)) < 1e-6);
    const auto t4 = partial_tensor<4>(log_barrier, x, FDScheme::for_order(4));
    CHECK(std::abs(t4.value(2, 2, 2, 2) - 6.0) < 1e-5);
    CHECK(std::abs(t4.value(0, 1, 2, 3)) < 1e-5);
    CHECK(t4.asymmetry == 0.0);
    CHECK(asymmetry(t4.value) == 0.0);
}

TEST_CASE("exactness on low-degree polynomials") {
    Rng rng(51);
    const Eigen::MatrixXd A = rng.normal_matrix(3, 3);
    const Eigen::VectorXd c = rng.normal_vector(3);
    const auto quad = [&](const Eigen::VectorXd& y) { return y.dot(A * y) + c.dot(y); };
    const auto cubic = [&](const Eigen::VectorXd& y) { return y[0] * y[1] * y[2] + y[0] * y[0] * y[0] + quad(y); };
    const Eigen::VectorXd x = rng.normal_vector(3);
    for (int levels = 0; levels <= 2; ++levels) {
        const FDScheme s(0.05, levels);
        CHECK(max_abs(partial_tensor<3>(quad, x, s).value) < 1e-9);
        CHECK(max_abs(hessian(quad, x, s) - (A + A.transpose())) < 1e-9);
        const auto t3 = partial_tensor<3>(cubic, x, s).value;
        CHECK(std::abs(t3(0, 1, 2) - 1.0) < 1e-9);
        CHECK(std::abs(t3(0, 0, 0) - 6.0) < 1e-9);
        CHECK(max_abs(partial_tensor<4>(cubic, x, FDScheme(0.1, levels)).value) < 1e-8);
    }
}

TEST_CASE("Richardson error estimate shrinks under step halving") {
    const FlatOrbifoldChart chart;
    const ScalarFunction F = [&](const Eigen::VectorXd& y) { return chart.potential(y); };
    Eigen::VectorXd x(7);
    x << 1.2, 0.8, 1.1, 0.9, 1.3, 1.0, 0.7;
    double previous = std::numeric_limits<double>::infinity();
    for (double h : {0.08, 0.04, 0.02, 0.01}) {
        const double e = partial_tensor<2>(F, x, FDScheme(h, 2)).error_estimate;
        CHECK(e < previous);
        previous = e;
    }
    CHECK(partial_tensor<2>(F, x, FDScheme(0.01, 0)).error_estimate == 0.0);
}

TEST_CASE("directional derivatives") {
    Rng rng(52);
    const FlatOrbifoldChart chart;
    const ScalarFunction F = [&](const Eigen::VectorXd& y) { return chart.potential(y); };
    const Eigen::VectorXd x = sample_near(chart, chart.base_point(), 0.3, 3);
    const Eigen::VectorXd g = gradient(F, x, FDScheme::for_order(1));
    for (int a = 0; a < 7; ++a)
        CHECK(directional(F, x, {Eigen::VectorXd::Unit(7, a)}, FDScheme::for_order(1)) == doctest::Approx(g[a]).epsilon(1e-9));

    const Eigen::VectorXd u = rng.normal_vector(7).normalized(), v = rng.normal_vector(7).normalized(),
                          w = rng.normal_vector(7).normalized();
    const FDScheme s2 = FDScheme::for_order(2);
    const double d_uw = directional(F, x, {u, w}, s2), d_vw = directional(F, x, {v, w}, s2);
    CHECK(directional(F, x, {Eigen::VectorXd(2 * u - 3 * v), w}, s2) == doctest::Approx(2 * d_uw - 3 * d_vw).epsilon(1e-7));

    const Eigen::MatrixXd H = hessian(F, x, s2);
    CHECK(d_uw == doctest::Approx(u.dot(H * w)).epsilon(1e-7));
    const auto t3 = partial_tensor<3>(F, x, FDScheme::for_order(3));
    CHECK(std::abs(directional(F, x, {u, v, w}, FDScheme(2e-2, 2)) - contract<3>(t3.value, {u, v, w})) < 1e-6);
}

TEST_CASE("scheme validation and stencil errors") {
    CHECK_THROWS_AS(FDScheme(0.0, 1), ConfigError);
    CHECK_THROWS_AS(FDScheme(-1e-3, 1), ConfigError);
    CHECK_THROWS_AS(FDScheme(1e-3, 4), ConfigError);

    const FlatOrbifoldChart chart;
    const ScalarFunction F = [&](const Eigen::VectorXd& y) { return chart.potential(y); };
    Eigen::VectorXd x = Eigen::VectorXd::Ones(7);
    x[3] = 0.05;
    try {
        (void)hessian(F, x, FDScheme(0.1, 0));
        FAIL("expected a DomainError");
    } catch (const DomainError& e) {
        const std::string what = e.what();
        CHECK(what.find("stencil left the domain at x = ") != std::string::npos);
        CHECK(what.find("outside chart domain") != std::string::npos);
    }
}
