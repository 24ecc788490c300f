#pragma once

// Pointwise G2 linear algebra: positivity of 3-forms, the induced metric,
// volume and dual 4-form, type projections, and the inverse of h -> h.phi.

#include <Eigen/Dense>

#include <vector>

#include "g2lab/exterior.hpp"

namespace g2lab {

/// e123 + e145 + e167 + e246 - e257 - e347 - e356.
Form standard_phi();

/// The symmetric matrix B with (e_i ⌟ phi) ^ (e_j ⌟ phi) ^ phi = B_ij e^{1..7}.
Endo7d positivity_matrix(const Form& phi);

/// True iff B is positive definite with min eigenvalue above 1e-10 |B|.
bool is_positive(const Form& phi);

/// Two-form as the antisymmetric matrix w(e_i, e_j).
Endo7d two_form_matrix(const Form& w);
Form two_form_from_matrix(const Endo7d& m);

enum class Component { L3_1, L3_7, L3_27, L2_7, L2_14 };

/// A positive 3-form together with everything it determines pointwise.
class G2Frame {
public:
    explicit G2Frame(Form phi);

    const Form& phi() const { return phi_; }
    const Endo7d& positivity_matrix() const { return B_; }
    const Metric7d& metric() const { return metric_; }
    double volume_density() const { return volume_density_; }
    const Form& theta() const { return theta_; }

    /// Gram matrices of the induced inner product on 2- and 3-forms.
    const Eigen::MatrixXd& gram2() const { return gram2_; }
    const Eigen::MatrixXd& gram3() const { return gram3_; }

    /// Projectors acting on coefficient vectors.
    const Eigen::MatrixXd& P1() const { return P1_; }
    const Eigen::MatrixXd& P7() const { return P7_; }
    const Eigen::MatrixXd& P27() const { return P27_; }
    const Eigen::MatrixXd& Q7() const { return Q7_; }
    const Eigen::MatrixXd& Q14() const { return Q14_; }

    double inner(const Form& a, const Form& b) const;
    Form star(const Form& a) const { return hodge_star(metric_, a); }

    Form project(const Form& a, Component c) const;

    /// Unique h in the complement of the 14-dimensional kernel with h.phi = eta.
    Endo7d solve_h(const Form& eta) const;

    /// Derivative of Theta along phi + t eta.
    Form theta_first_variation(const Form& eta) const;

    /// Endomorphisms g^{-1} w for w spanning the 14-dimensional 2-form type.
    std::vector<Endo7d> kernel_basis() const;

    /// The 35 endomorphisms spanning the solve_h domain: 28 self-adjoint then 7 from v ⌟ phi.
    const std::vector<Endo7d>& solve_basis() const { return basis_; }

private:
    Form phi_;
    Endo7d B_;
    double volume_density_;
    Metric7d metric_;
    Form theta_;
    Eigen::MatrixXd gram2_, gram3_;
    Eigen::MatrixXd P1_, P7_, P27_, Q7_, Q14_;
    std::vector<Endo7d> basis_;
    Eigen::FullPivLU<Eigen::MatrixXd> solve_lu_;
};

inline G2Frame frame_of(const Form& phi) { return G2Frame(phi); }

} // namespace g2lab
