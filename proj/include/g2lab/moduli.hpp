#pragma once

// Hessian geometry of the potential F = -3 log Vol on a model chart.

#include <Eigen/Dense>

#include <array>
#include <optional>

#include "g2lab/models.hpp"
#include "g2lab/numdiff.hpp"
#include "g2lab/tensor.hpp"

namespace g2lab {

enum class Provenance { ClosedForm, FiniteDifference };

/// Finite-difference schemes for derivative orders 1..4.
struct JetSchemes {
    FDScheme order1 = FDScheme::for_order(1);
    FDScheme order2 = FDScheme::for_order(2);
    FDScheme order3 = FDScheme::for_order(3);
    FDScheme order4 = FDScheme::for_order(4);

    /// Same step and levels for every order.
    static JetSchemes uniform(const FDScheme& s) { return {s, s, s, s}; }
};

struct PotentialJet {
    Eigen::VectorXd x;
    double F = 0.0;
    Eigen::VectorXd F1;
    Eigen::MatrixXd F2;
    Tensor3 F3;
    Tensor4 F4;
    /// Orders above max_order are left empty.
    int max_order = 4;
    std::array<Provenance, 4> provenance{Provenance::FiniteDifference, Provenance::FiniteDifference,
                                         Provenance::FiniteDifference, Provenance::FiniteDifference};
    /// Closed-form counterparts of orders 1-3 when the family carries pointwise forms.
    std::optional<Eigen::VectorXd> F1_closed;
    std::optional<Eigen::MatrixXd> F2_closed;
    std::optional<Tensor3> F3_closed;
};

PotentialJet jet(const ModelFamily& family, const Eigen::VectorXd& x, const JetSchemes& schemes = {}, int max_order = 4);

/// F_a = -(eta_a ^ Theta) / mu, the per-volume integrand being constant.
Eigen::VectorXd gradient_closed(const ModelFamily& family, const Eigen::VectorXd& x);
/// F_ab = <eta_a, (P1 + P27 - P7) eta_b>.
Eigen::MatrixXd hessian_closed(const ModelFamily& family, const Eigen::VectorXd& x);
/// F_abc = -2 <h_c . eta_a, eta_b>; only on charts with b1 = 0.
Tensor3 third_closed(const ModelFamily& family, const Eigen::VectorXd& x);

/// 1/2 G^{kl} (F_abk F_cdl + F_ack F_bdl + F_adk F_bcl).
Tensor4 fourth_rhs(const PotentialJet& jet);

struct EResidual {
    /// F4 - fourth_rhs.
    Tensor4 residual;
    /// Covariant derivative of the Yukawa coupling, residual / 2.
    Tensor4 nabla_xi;
};

EResidual e_residual(const PotentialJet& jet);

struct HessianGeometry {
    Eigen::MatrixXd G;
    Eigen::MatrixXd Ginv;
    /// christoffel(k, a, b) = Gamma^k_ab.
    Tensor3 christoffel;
    Tensor3 yukawa;
    Tensor4 nabla_xi;
    Tensor4 riemann;
    /// nabla_riemann(e, a, b, c, d) = nabla_e R_abcd; filled by geometry_with_nabla_r.
    std::optional<Tensor5> nabla_riemann;
};

/// Requires a jet of order 4 (order 3 suffices if nabla_xi is not needed).
HessianGeometry geometry(const PotentialJet& jet);

/// R_abcd = 1/4 G^{kl} (F_adk F_bcl - F_ack F_bdl).
Tensor4 shima_curvature(const Eigen::MatrixXd& G, const Tensor3& F3);

/// Adds nabla R: central differences of R (from order-3 jets at displaced
/// points) with the four Christoffel corrections.
HessianGeometry geometry_with_nabla_r(const ModelFamily& family, const Eigen::VectorXd& x, const JetSchemes& schemes,
                                      const FDScheme& outer);

/// R(X, Y, X, Y) / (|X|^2 |Y|^2 - <X, Y>^2).
double sectional_curvature(const HessianGeometry& geo, const Eigen::VectorXd& X, const Eigen::VectorXd& Y);

struct CurvatureSymmetry {
    double antisymmetry_ab;
    double antisymmetry_cd;
    double pair_exchange;
    double bianchi;
    double max() const;
};

CurvatureSymmetry curvature_symmetries(const Tensor4& R);

struct EulerReport {
    /// max |x^k F_ak + F_a|
    double gradient;
    /// max |x^k F_abk + 2 G_ab|
    double hessian;
    /// max |x^k nabla_a Xi_bck|, only with a fourth-order jet
    double nabla_xi_trace;
};

EulerReport euler_identities(const PotentialJet& jet);

} // namespace g2lab
