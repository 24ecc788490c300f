#pragma once

// The period domain D of decompositions H = H^(3) + H^(2) + H^(1) + H^(0) of
// H = H^3 + H^4, and the map from the flat orbifold chart into it.
//
// Vectors of H are stored in coordinates (c, d): c on a fixed basis u_a of H^3,
// d on the dual basis v_a of H^4, so Q((c, d), (c', d')) = c.d' - d.c' and
// iota(c, d) = (c, -d).

#include <Eigen/Dense>

#include <array>
#include <vector>

#include "g2lab/models.hpp"
#include "g2lab/moduli.hpp"
#include "g2lab/numdiff.hpp"

namespace g2lab {

class SymplecticSpace {
public:
    explicit SymplecticSpace(int n);

    int n() const { return n_; }
    /// n + 1 = dim H^3.
    int half() const { return n_ + 1; }
    int dim() const { return 2 * (n_ + 1); }

    const Eigen::MatrixXd& Q() const { return Q_; }
    const Eigen::MatrixXd& iota() const { return iota_; }

    double pairing(const Eigen::VectorXd& w, const Eigen::VectorXd& w2) const { return w.dot(Q_ * w2); }
    /// Q(iota w, w'), a symmetric form.
    double iota_pairing(const Eigen::VectorXd& w, const Eigen::VectorXd& w2) const { return w.dot(iotaQ_ * w2); }
    const Eigen::MatrixXd& iota_Q() const { return iotaQ_; }

    Eigen::VectorXd embed_h3(const Eigen::VectorXd& c) const;
    Eigen::VectorXd embed_h4(const Eigen::VectorXd& d) const;

private:
    int n_;
    Eigen::MatrixXd Q_, iota_, iotaQ_;
};

/// Block bases; blocks[p] spans H^(p) with dims 1, n, n, 1 for p = 0, 1, 2, 3.
struct HodgePoint {
    std::array<Eigen::MatrixXd, 4> blocks;

    const Eigen::MatrixXd& H(int p) const { return blocks.at(p); }
    /// Columns ordered H^(3), H^(2), H^(1), H^(0).
    Eigen::MatrixXd stacked() const;
};

struct PointValidation {
    double iota_closure = 0;
    double q_orthogonality = 0;
    /// Nonpositive sign-adjusted eigenvalues give a value of at least 1.
    double definiteness = 0;
    double rank = 0;

    double max() const;
    bool pass(double tol = 1e-9) const { return max() <= tol; }
};

PointValidation validate_point(const SymplecticSpace& space, const HodgePoint& point);

/// Reverses the blocks after applying iota, which preserves every block as a subspace.
HodgePoint iota_swap(const SymplecticSpace& space, const HodgePoint& point);

/// Action of A in GL(H^3): c -> A c, d -> A^{-T} d.
HodgePoint act(const SymplecticSpace& space, const Eigen::MatrixXd& A, const HodgePoint& point);

struct LineAndForm {
    /// Unit representative of the line in H^3 coordinates.
    Eigen::VectorXd line;
    Eigen::MatrixXd q;
};

LineAndForm pair_iso(const SymplecticSpace& space, const HodgePoint& point);
HodgePoint pair_iso_inverse(const SymplecticSpace& space, const LineAndForm& lq);

/// Largest distance between corresponding block spans (projector difference).
double point_distance(const SymplecticSpace& space, const HodgePoint& a, const HodgePoint& b);

/// u_i (columns of U, H^3 coordinates) orthonormal for q with u_0 on the line,
/// and v_i (columns of V = U^{-T}, H^4 coordinates).
struct StandardBasis {
    Eigen::MatrixXd U;
    Eigen::MatrixXd V;

    /// (u_0..u_n, v_0..v_n) as columns of H vectors.
    Eigen::MatrixXd as_h_basis() const;
};

/// Deterministic: Gram-Schmidt of the line then the coordinate vectors, in order.
StandardBasis standard_basis(const SymplecticSpace& space, const HodgePoint& point);

/// Tangent vector as a matrix in a standard basis; the lower n x n block is
/// kept symmetric (its antisymmetric part lies in the stabiliser).
struct TangentRep {
    Eigen::MatrixXd a;
};

/// Projects an arbitrary gl(n+1) matrix onto the tangent normalisation.
TangentRep normalized_tangent(const Eigen::MatrixXd& a);

/// Matrix of the induced action of a on H in (c, d) coordinates.
Eigen::MatrixXd tangent_action(const StandardBasis& basis, const TangentRep& xi);

/// phi^(p)_xi : H^(p) -> H^(p-1) + ... + H^(0) applied to the columns of X (which must lie in H^(p)).
Eigen::MatrixXd block_map(const SymplecticSpace& space, const HodgePoint& point, const StandardBasis& basis,
                          const TangentRep& xi, int p, const Eigen::MatrixXd& X);

struct TangentSplit {
    Eigen::MatrixXd vertical;
    Eigen::MatrixXd line;
    Eigen::MatrixXd transverse;
    /// max |a_0i - a_i0|
    double horizontal_residual;
    /// max(|a_00|, horizontal_residual)
    double transverse_residual;
    bool horizontal;
    bool is_transverse;
    /// Component of phi^(3)(H^(3)) in H^(1), resp. in H^(1) + H^(0), relative to |w|.
    double block_horizontal_residual;
    double block_transverse_residual;
};

TangentSplit classify_tangent(const SymplecticSpace& space, const HodgePoint& point, const StandardBasis& basis,
                              const TangentRep& xi, double tol = 1e-9);

/// Frobenius pairing in the standard basis.
double metric_gD(const TangentRep& xi, const TangentRep& xi2);

/// Polarised -Q(iota phi3(w), phi3'(w)) / Q(iota w, w). Throws if an argument is not transverse.
double h_D(const SymplecticSpace& space, const HodgePoint& point, const StandardBasis& basis, const TangentRep& xi,
           const TangentRep& xi2, double tol = 1e-6);

/// phi1_xi o phi2_xi' o phi3_xi''(w) = -Xi_D(xi, xi', xi'') iota(w).
double xi_D(const SymplecticSpace& space, const HodgePoint& point, const StandardBasis& basis, const TangentRep& xi,
            const TangentRep& xi2, const TangentRep& xi3, double tol = 1e-6);

// Flat orbifold chart (n = 6).

/// H^3 coordinates of a constant 3-form on the monomial basis.
Eigen::VectorXd h3_class(const Form& eta);
/// H^4 coordinates of a constant 4-form on the dual basis.
Eigen::VectorXd h4_class(const Form& nu);
/// The dual 4-form v_a with eta_a ^ v_a = e^{1..7}.
Form dual_four_form(int a);

Eigen::VectorXd h_vector(const Form& eta, const Form& nu);

/// Orthonormal basis of the 27-part of the harmonic span at x.
std::vector<Form> harmonic_27_basis(const HarmonicFrame& hf);

HodgePoint phi_map(const FlatOrbifoldChart& chart, const Eigen::VectorXd& x);

/// FD differential of phi_map expressed in the standard basis at phi_map(x).
TangentRep dphi(const FlatOrbifoldChart& chart, const Eigen::VectorXd& x, const Eigen::VectorXd& direction,
                const FDScheme& scheme);

/// phi^(p) of the tangent of t -> phi_map(x + t v) by differencing the
/// filtration F^(p)(t) as a graph over the lower blocks at t = 0. Returns the
/// images of the columns of H^(p), as H vectors.
Eigen::MatrixXd dphi_block(const FlatOrbifoldChart& chart, const Eigen::VectorXd& x, const Eigen::VectorXd& direction,
                           int p, const FDScheme& scheme);

// Symmetric space of inner products on H^3.

/// -1/2 (qdot q^{-1} qdot' + qdot' q^{-1} qdot).
Eigen::MatrixXd s2plus_covariant(const Eigen::MatrixXd& q, const Eigen::MatrixXd& qdot, const Eigen::MatrixXd& qdot2);

/// 1/4 tr(q^{-1} A q^{-1} B).
double s2plus_inner(const Eigen::MatrixXd& q, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

struct SffResidual {
    /// max entry of nablabar_a d_b q - Gamma^k_ab d_k q - 2 e^{-F/3} nabla_a Xi_b..
    double identity;
    /// g_{S2+} norm of the component of nablabar_a d_b q normal to the tangent span.
    double normal;
};

/// The chart map x -> e^{-F/3} G(x) into inner products on the tangent space.
SffResidual sff_residual(const ModelFamily& family, const Eigen::VectorXd& x, int a, int b, const JetSchemes& schemes,
                         const FDScheme& outer);

// Contact geometry of P(H).

/// alpha at the class of w evaluated on wdot, in the affine chart w^0 = 1 of
/// the Darboux frame (u_j +- v_j)/sqrt 2.
double contact_alpha(const SymplecticSpace& space, const Eigen::VectorXd& w, const Eigen::VectorXd& wdot);

/// d alpha = -2 sum_{j>=1} dw_j ^ dw^j on two velocities of the class of w.
double contact_dalpha(const SymplecticSpace& space, const Eigen::VectorXd& w, const Eigen::VectorXd& wdot,
                      const Eigen::VectorXd& wdot2);

} // namespace g2lab
