#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "g2lab/period.hpp"
#include "oracles.hpp"

using namespace g2lab;
using oracle::max_abs;

namespace {

const SymplecticSpace kSpace(6);

Eigen::VectorXd slice_point(Rng& rng) {
    const Eigen::VectorXd z = 0.4 * rng.normal_vector(7);
    return FlatOrbifoldChart::slice_point(z.array() - z.mean());
}

Eigen::MatrixXd random_spd(Rng& rng, int n) {
    const Eigen::MatrixXd A = rng.normal_matrix(n, n);
    return A * A.transpose() + n * Eigen::MatrixXd::Identity(n, n);
}

HodgePoint random_point(Rng& rng) {
    LineAndForm lq{rng.normal_vector(7).normalized(), random_spd(rng, 7)};
    return pair_iso_inverse(kSpace, lq);
}

/// Distance from v to the column span of B.
double span_residual(const Eigen::MatrixXd& B, const Eigen::VectorXd& v) {
    const Eigen::VectorXd coef = B.colPivHouseholderQr().solve(v);
    return (B * coef - v).norm() / v.norm();
}

TangentRep symmetric_tangent(Rng& rng, bool zero_corner) {
    Eigen::MatrixXd a = rng.normal_matrix(7, 7);
    a = (a + a.transpose()).eval();
    if (zero_corner) a(0, 0) = 0.0;
    return TangentRep{a};
}

} // namespace

TEST_CASE("symplectic space") {
    CHECK(kSpace.dim() == 14);
    CHECK(max_abs(kSpace.Q() + kSpace.Q().transpose()) == 0.0);
    CHECK(max_abs(kSpace.iota() * kSpace.iota() - Eigen::MatrixXd::Identity(14, 14)) == 0.0);
    CHECK(max_abs(kSpace.iota_Q() - kSpace.iota_Q().transpose()) == 0.0);
    const Eigen::VectorXd c = Eigen::VectorXd::Unit(7, 2), d = Eigen::VectorXd::Unit(7, 2);
    CHECK(kSpace.pairing(kSpace.embed_h3(c), kSpace.embed_h4(d)) == 1.0);
    CHECK_THROWS_AS(SymplecticSpace(0), ShapeError);
}

TEST_CASE("the point of a positive form") {
    Rng rng(71);
    const FlatOrbifoldChart chart;
    for (int s = 0; s < 5; ++s) {
        const Eigen::VectorXd x = slice_point(rng);
        const HodgePoint P = phi_map(chart, x);
        CHECK(validate_point(kSpace, P).pass());
        CHECK(validate_point(kSpace, iota_swap(kSpace, P)).pass());

        const G2Frame f(FlatOrbifoldChart::form_at(x));
        const Eigen::VectorXd w = h_vector(f.phi(), f.theta());
        CHECK(kSpace.iota_pairing(w, w) == doctest::Approx(14.0).epsilon(1e-10));
        CHECK(span_residual(P.H(3), w) < 1e-10);

        const LineAndForm lq = pair_iso(kSpace, P);
        const Eigen::VectorXd phi_class = h3_class(f.phi()).normalized();
        CHECK(std::abs(std::abs(lq.line.dot(phi_class)) - 1.0) < 1e-10);

        // L2 Gram of the monomial basis, with unit covering-torus volume.
        const HarmonicFrame hf = chart.harmonic_frame(x);
        Eigen::MatrixXd gram(7, 7);
        for (int a = 0; a < 7; ++a)
            for (int b = 0; b < 7; ++b) gram(a, b) = hf.frame.inner(hf.etas[a], hf.etas[b]) * hf.frame.volume_density();
        CHECK(max_abs(lq.q - gram) < 1e-9);
    }
    CHECK_THROWS_AS(phi_map(chart, -chart.base_point()), DomainError);
}

TEST_CASE("cohomology classes") {
    for (int a = 0; a < 7; ++a) {
        const Form eta = FlatOrbifoldChart::eta(a);
        CHECK(top_coefficient(wedge(eta, dual_four_form(a))) == 1.0);
        CHECK(h3_class(eta) == Eigen::VectorXd::Unit(7, a));
        CHECK(h4_class(dual_four_form(a)) == Eigen::VectorXd::Unit(7, a));
    }
    // Q(u_a, v_b) = delta_ab through the wedge pairing.
    Rng rng(70);
    const Eigen::VectorXd c = rng.normal_vector(7), d = rng.normal_vector(7);
    Form eta(3), nu(4);
    for (int a = 0; a < 7; ++a) {
        eta += c[a] * FlatOrbifoldChart::eta(a);
        nu += d[a] * dual_four_form(a);
    }
    CHECK(top_coefficient(wedge(eta, nu)) == doctest::Approx(c.dot(d)).epsilon(1e-12));
    CHECK(kSpace.pairing(h_vector(eta, Form(4)), h_vector(Form(3), nu)) == doctest::Approx(c.dot(d)).epsilon(1e-12));
    CHECK_THROWS_AS(h3_class(Form(2)), ShapeError);
}

TEST_CASE("validation detects violations") {
    Rng rng(72);
    const HodgePoint P = random_point(rng);
    CHECK(validate_point(kSpace, P).pass());

    HodgePoint bad = P;
    bad.blocks[2].col(0) = P.H(1).col(0);  // H^(2) loses definiteness and orthogonality
    CHECK(validate_point(kSpace, bad).max() > 1e-3);

    HodgePoint wrong = P;
    wrong.blocks[3] = Eigen::MatrixXd::Zero(14, 2);
    CHECK_THROWS_AS(validate_point(kSpace, wrong), ShapeError);
}

TEST_CASE("pair_iso round trip and equivariance") {
    Rng rng(73);
    for (int s = 0; s < 10; ++s) {
        const HodgePoint P = random_point(rng);
        const LineAndForm lq = pair_iso(kSpace, P);
        CHECK(point_distance(kSpace, pair_iso_inverse(kSpace, lq), P) < 1e-9);

        const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(7, 7) + 0.3 * rng.normal_matrix(7, 7);
        const LineAndForm moved = pair_iso(kSpace, act(kSpace, A, P));
        const Eigen::VectorXd line = (A * lq.line).normalized();
        CHECK(std::abs(std::abs(moved.line.dot(line)) - 1.0) < 1e-9);
        const Eigen::MatrixXd Ainv = A.inverse();
        CHECK(max_abs(moved.q - Ainv.transpose() * lq.q * Ainv) < 1e-9 * max_abs(lq.q));
    }
    CHECK_THROWS_AS(pair_iso_inverse(kSpace, {Eigen::VectorXd::Unit(7, 0), -Eigen::MatrixXd::Identity(7, 7)}),
                    SingularError);
    CHECK_THROWS_AS(act(kSpace, Eigen::MatrixXd::Zero(7, 7), random_point(rng)), SingularError);
}

TEST_CASE("standard basis") {
    Rng rng(74);
    const HodgePoint P = random_point(rng);
    const LineAndForm lq = pair_iso(kSpace, P);
    const StandardBasis B = standard_basis(kSpace, P);
    CHECK(max_abs(B.U.transpose() * lq.q * B.U - Eigen::MatrixXd::Identity(7, 7)) < 1e-10);
    CHECK(std::abs(std::abs(B.U.col(0).normalized().dot(lq.line)) - 1.0) < 1e-12);
    CHECK(max_abs(B.V.transpose() * B.U - Eigen::MatrixXd::Identity(7, 7)) < 1e-10);
    const Eigen::MatrixXd H = B.as_h_basis();
    const Eigen::MatrixXd QH = H.transpose() * kSpace.Q() * H;
    Eigen::MatrixXd Q0 = Eigen::MatrixXd::Zero(14, 14);
    Q0.topRightCorner(7, 7).setIdentity();
    Q0.bottomLeftCorner(7, 7) = -Eigen::MatrixXd::Identity(7, 7);
    CHECK(max_abs(QH - Q0) < 1e-10);
}

TEST_CASE("tangent classification and the metric") {
    Rng rng(75);
    const HodgePoint P = random_point(rng);
    const StandardBasis B = standard_basis(kSpace, P);

    const TangentRep id{Eigen::MatrixXd::Identity(7, 7)};
    const TangentSplit s = classify_tangent(kSpace, P, B, id);
    CHECK(s.horizontal);
    CHECK_FALSE(s.is_transverse);
    CHECK(metric_gD(id, id) == doctest::Approx(7.0));

    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(7, 7);
    v.row(0).tail(6) = rng.normal_vector(6);
    v.col(0).tail(6) = -v.row(0).tail(6).transpose();
    const TangentSplit sv = classify_tangent(kSpace, P, B, TangentRep{v});
    CHECK_FALSE(sv.horizontal);
    CHECK(max_abs(sv.vertical - v) < 1e-12);
    CHECK(max_abs(sv.line) < 1e-12);
    CHECK(max_abs(sv.transverse) < 1e-12);

    for (int k = 0; k < 10; ++k) {
        const TangentRep t = symmetric_tangent(rng, true);
        const TangentSplit st = classify_tangent(kSpace, P, B, t);
        CHECK(st.is_transverse);
        CHECK(st.block_transverse_residual < 1e-9);
        CHECK(std::abs(metric_gD(TangentRep{v}, t)) < 1e-12);
        CHECK(std::abs(metric_gD(id, t) - t.a.trace()) < 1e-12);
    }
}

TEST_CASE("h_D and Xi_D") {
    Rng rng(76);
    const HodgePoint P = random_point(rng);
    const StandardBasis B = standard_basis(kSpace, P);
    const TangentRep zero{Eigen::MatrixXd::Zero(7, 7)};
    const TangentRep t1 = symmetric_tangent(rng, true), t2 = symmetric_tangent(rng, true),
                     t3 = symmetric_tangent(rng, true);
    CHECK(h_D(kSpace, P, B, zero, zero) == 0.0);
    CHECK(h_D(kSpace, P, B, t1, t1) >= 0.0);
    CHECK(h_D(kSpace, P, B, t1, t2) == doctest::Approx(h_D(kSpace, P, B, t2, t1)).epsilon(1e-12));
    CHECK(xi_D(kSpace, P, B, zero, t2, t3) == 0.0);
    CHECK(xi_D(kSpace, P, B, t1, t2, zero) == 0.0);
    CHECK_THROWS_AS(h_D(kSpace, P, B, TangentRep{Eigen::MatrixXd::Identity(7, 7)}, t1), DomainError);

    // h_D does not depend on which vector of H^(3) is used: rescaling the point's H^(3) block.
    HodgePoint scaled = P;
    scaled.blocks[3] *= -3.5;
    scaled.blocks[0] *= 2.0;
    CHECK(h_D(kSpace, scaled, B, t1, t2) == doctest::Approx(h_D(kSpace, P, B, t1, t2)).epsilon(1e-12));
}

TEST_CASE("differential of the chart map") {
    Rng rng(77);
    const FlatOrbifoldChart chart;
    const Eigen::VectorXd x = slice_point(rng);
    const HodgePoint P = phi_map(chart, x);
    const StandardBasis B = standard_basis(kSpace, P);
    const FDScheme fd(1e-3, 2);

    const Eigen::VectorXd generic = rng.normal_vector(7);
    const TangentSplit sg = classify_tangent(kSpace, P, B, dphi(chart, x, generic, fd), 1e-6);
    CHECK(sg.horizontal);

    Eigen::VectorXd z = rng.normal_vector(7);
    z.array() -= z.mean();
    const Eigen::VectorXd slice_dir = x.cwiseProduct(z);
    const TangentSplit ss = classify_tangent(kSpace, P, B, dphi(chart, x, slice_dir, fd), 1e-6);
    CHECK(ss.is_transverse);

    // Image of H^(3) is [eta] - [*eta] for eta the direction's 3-form, up to the H^(3) normalisation.
    const G2Frame f(FlatOrbifoldChart::form_at(x));
    const Form eta = FlatOrbifoldChart::form_at(slice_dir);
    const Eigen::VectorXd w = h_vector(f.phi(), f.theta());
    const Eigen::MatrixXd img = dphi_block(chart, x, slice_dir, 3, fd);
    const Eigen::VectorXd expect = h_vector(eta, -1.0 * f.star(eta));
    const double scale = P.H(3).col(0).dot(kSpace.iota_Q() * w) / kSpace.iota_pairing(w, w);
    CHECK(max_abs(img.col(0) - scale * expect) < 1e-6 * max_abs(expect));
}

TEST_CASE("symmetric space of inner products") {
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(7, 7);
    CHECK(max_abs(s2plus_covariant(I, I, I) + I) < 1e-14);
    Rng rng(78);
    const Eigen::MatrixXd q = random_spd(rng, 7);
    Eigen::MatrixXd a = rng.normal_matrix(7, 7), b = rng.normal_matrix(7, 7);
    a = (a + a.transpose()).eval();
    b = (b + b.transpose()).eval();
    CHECK(max_abs(s2plus_covariant(q, a, b) - s2plus_covariant(q, b, a)) < 1e-12);
    CHECK(s2plus_inner(q, a, b) == doctest::Approx(s2plus_inner(q, b, a)).epsilon(1e-12));
    CHECK(s2plus_inner(I, I, I) == doctest::Approx(7.0 / 4.0));
    CHECK_THROWS_AS(s2plus_covariant(-I, a, b), SingularError);
}

TEST_CASE("contact form") {
    Rng rng(79);
    Eigen::VectorXd w = rng.normal_vector(14);
    w[0] = 1.0;
    w[7] = 1.0;
    CHECK(contact_alpha(kSpace, w, Eigen::VectorXd::Zero(14)) == 0.0);
    // Scaling the representative moves along the fibre, which alpha ignores.
    CHECK(std::abs(contact_alpha(kSpace, w, w)) < 1e-12);
    const Eigen::VectorXd u = rng.normal_vector(14), v = rng.normal_vector(14);
    CHECK(contact_dalpha(kSpace, w, u, v) == doctest::Approx(-contact_dalpha(kSpace, w, v, u)).epsilon(1e-12));

    Eigen::VectorXd off = w;
    off[0] = 1.0;
    off[7] = -1.0;
    CHECK_THROWS_AS(contact_alpha(kSpace, off, u), DomainError);
    CHECK_THROWS_AS(contact_alpha(kSpace, Eigen::VectorXd::Ones(3), u), ShapeError);
}
