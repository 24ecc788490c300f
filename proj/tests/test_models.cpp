#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "g2lab/models.hpp"
#include "oracles.hpp"

using namespace g2lab;
using oracle::max_abs;

TEST_CASE("flat chart volume: closed form against the frame recipe") {
    const FlatOrbifoldChart chart;
    CHECK(chart.volume(chart.base_point()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(chart.volume_recipe(chart.base_point()) == doctest::Approx(1.0).epsilon(1e-12));
    const double s = 2.3;
    CHECK(chart.volume(s * chart.base_point()) == doctest::Approx(std::pow(s, 7.0 / 3.0)).epsilon(1e-12));

    Rng rng(41);
    for (int k = 0; k < 100; ++k) {
        Eigen::VectorXd x(7);
        for (int a = 0; a < 7; ++a) x[a] = std::exp(rng.uniform(-1.5, 1.5));
        CHECK(chart.volume(x) == doctest::Approx(chart.volume_recipe(x)).epsilon(1e-10));
        CHECK(chart.volume(x) == doctest::Approx(std::cbrt(x.prod())).epsilon(1e-12));
    }
}

TEST_CASE("flat chart domain is positivity, not the positive orthant") {
    const FlatOrbifoldChart chart;
    Eigen::VectorXd x = Eigen::VectorXd::Ones(7);
    CHECK(chart.in_domain(x));
    x[0] = -1.0;
    CHECK_FALSE(chart.in_domain(x));
    CHECK_THROWS_AS(chart.volume(x), DomainError);
    // Flipping two signs gives a positive form (pullback by a reflection pair)
    // that lies outside the chart because the product is still positive.
    x[1] = -1.0;
    CHECK(x.prod() > 0);
    CHECK(is_positive(FlatOrbifoldChart::form_at(x)) == chart.in_domain(x));
    CHECK_THROWS_AS(chart.volume(Eigen::VectorXd::Ones(6)), ShapeError);
}

TEST_CASE("flat chart harmonic frame") {
    const FlatOrbifoldChart chart;
    const HarmonicFrame hf0 = chart.harmonic_frame(chart.base_point());
    Endo7d sum = Endo7d::Zero();
    for (const auto& h : hf0.hs) sum += h;
    CHECK(max_abs(sum - Endo7d::Identity() / 3.0) < 1e-12);

    Rng rng(42);
    for (int k = 0; k < 10; ++k) {
        Eigen::VectorXd x(7);
        for (int a = 0; a < 7; ++a) x[a] = std::exp(rng.uniform(-1, 1));
        const HarmonicFrame hf = chart.harmonic_frame(x);
        REQUIRE(hf.etas.size() == 7);
        Eigen::MatrixXd span(35, 7);
        for (int a = 0; a < 7; ++a) span.col(a) = hf.etas[a].coeffs();
        const Eigen::MatrixXd proj = span * span.completeOrthogonalDecomposition().pseudoInverse();
        for (int a = 0; a < 7; ++a) {
            const Endo7d gh = hf.frame.metric().gram() * hf.hs[a];
            CHECK(max_abs(gh - gh.transpose()) < 1e-9);
            CHECK(max_abs(hf.frame.project(hf.etas[a], Component::L3_7).coeffs()) < 1e-10);
            for (int b = 0; b < 7; ++b) {
                const Eigen::VectorXd v = delta_action(hf.hs[a], hf.etas[b]).coeffs();
                CHECK(max_abs(v - proj * v) < 1e-9);
            }
        }
    }
}

TEST_CASE("full torus chart") {
    const FullTorusChart chart;
    CHECK(chart.volume(chart.base_point()) == doctest::Approx(1.0).epsilon(1e-12));
    Rng rng(43);
    for (int k = 0; k < 5; ++k) {
        const Endo7d A = (0.3 * Endo7d(rng.normal_matrix(7, 7))).exp();
        const Eigen::VectorXd x = oracle::pullback_by_evaluation(A, standard_phi()).coeffs();
        CHECK(chart.volume(x) == doctest::Approx(A.determinant()).epsilon(1e-10));
    }
    const FlatOrbifoldChart flat;
    Eigen::VectorXd y(7);
    for (int a = 0; a < 7; ++a) y[a] = std::exp(rng.uniform(-1, 1));
    CHECK(chart.volume(FlatOrbifoldChart::form_at(y).coeffs()) == doctest::Approx(flat.volume(y)).epsilon(1e-12));
    CHECK_THROWS_AS(chart.volume(Eigen::VectorXd::Zero(35)), DomainError);
}

TEST_CASE("t3k3 volume with d = 2 and the radius reconstruction") {
    T3K3Chart::Spec spec;
    spec.dims = {2, 2, 2};
    const T3K3Chart chart(spec);
    Eigen::VectorXd x(7);
    x << 2, 1, 0, 1, 0, 1, 0;
    const double vol = chart.volume(x);
    CHECK(vol == doctest::Approx(std::cbrt(2.0) / 2.0).epsilon(1e-12));

    // Solve x0 = t1 t2 t3, q_i = 2 v t_i^2, Vol = t1 t2 t3 v independently.
    Rng rng(44);
    for (int k = 0; k < 5; ++k) {
        Eigen::VectorXd p(7);
        p << std::exp(rng.uniform(-1, 1)), 1.5, rng.uniform(-1, 1), 1.5, rng.uniform(-1, 1), 1.5, rng.uniform(-1, 1);
        const auto q = chart.quadrics(p);
        CHECK(q[0] == doctest::Approx(p[1] * p[1] - p[2] * p[2]));
        // t_i = sqrt(q_i / 2v) and x0 = prod t_i give v^{3/2} = sqrt(q1 q2 q3 / 8) / x0.
        const double v = std::pow(std::sqrt(q[0] * q[1] * q[2] / 8.0) / p[0], 2.0 / 3.0);
        std::array<double, 3> t;
        for (int i = 0; i < 3; ++i) t[i] = std::sqrt(q[i] / (2.0 * v));
        CHECK(t[0] * t[1] * t[2] == doctest::Approx(p[0]).epsilon(1e-12));
        for (int i = 0; i < 3; ++i) CHECK(2.0 * v * t[i] * t[i] == doctest::Approx(q[i]).epsilon(1e-12));
        CHECK(chart.volume(p) == doctest::Approx(t[0] * t[1] * t[2] * v).epsilon(1e-12));
    }
}

TEST_CASE("t3k3 homogeneity, separability and domain") {
    const T3K3Chart chart;
    CHECK(chart.dimension() == 10);
    const Eigen::VectorXd x = sample_near(chart, chart.base_point(), 0.3, 7);
    const double s = 1.9;
    CHECK(chart.volume(s * x) == doctest::Approx(std::pow(s, 7.0 / 3.0) * chart.volume(x)).epsilon(1e-12));
    const auto q = chart.quadrics(x);
    CHECK(chart.potential(x) ==
          doctest::Approx(-std::log(x[0]) - std::log(q[0]) - std::log(q[1]) - std::log(q[2]) + 3 * std::log(2.0)).epsilon(1e-12));

    Eigen::VectorXd bad = chart.base_point();
    bad[0] = -1;
    CHECK_FALSE(chart.in_domain(bad));
    bad = chart.base_point();
    bad.segment(1, 3) << -1, 0, 0;  // the other light-cone component
    CHECK_FALSE(chart.in_domain(bad));

    T3K3Chart::Spec spec;
    spec.Q[0] = Eigen::MatrixXd::Identity(3, 3);
    CHECK_THROWS_AS(T3K3Chart{spec}, ConfigError);
    spec = {};
    spec.dims = {1, 3, 3};
    CHECK_THROWS_AS(T3K3Chart{spec}, ConfigError);
}

namespace {

/// Thin slab |x - 1| < 1e-3 so that wide sampling balls almost never hit it.
class SlabFamily final : public ModelFamily {
public:
    std::string name() const override { return "slab"; }
    int dimension() const override { return 2; }
    bool in_domain(const Eigen::VectorXd& x) const override { return std::abs(x[0] - 1.0) < 1e-3; }
    double volume(const Eigen::VectorXd& x) const override {
        require_domain(x);
        return x[0];
    }
    Eigen::VectorXd base_point() const override { return Eigen::VectorXd::Ones(2); }
};

} // namespace

TEST_CASE("sampler") {
    const FlatOrbifoldChart chart;
    const Eigen::VectorXd base = chart.base_point();
    CHECK(sample_near(chart, base, 0.0, 5) == base);
    const Eigen::VectorXd a = sample_near(chart, base, 0.4, 99), b = sample_near(chart, base, 0.4, 99);
    CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * 7) == 0);
    CHECK(sample_near(chart, base, 0.4, 100) != a);
    CHECK((a - base).norm() <= 0.4);
    CHECK(chart.in_domain(a));
    CHECK_THROWS_AS(sample_near(SlabFamily{}, Eigen::VectorXd::Ones(2), 1e3, 1), DomainError);
    CHECK_THROWS_AS(sample_near(chart, -base, 0.1, 1), DomainError);
}

TEST_CASE("model factory") {
    CHECK(make_model("flat7")->dimension() == 7);
    CHECK(make_model("full35")->dimension() == 35);
    CHECK(make_model("t3k3")->dimension() == 10);
    CHECK_THROWS_AS(make_model("k3"), ConfigError);
    CHECK_THROWS_AS(make_model("t3k3")->harmonic_frame(Eigen::VectorXd::Ones(10)), DomainError);
}
