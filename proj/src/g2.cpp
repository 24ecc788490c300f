#include "g2lab/g2.hpp"

#include <cmath>

namespace g2lab {

namespace {

Endo7d positive_B(const Form& phi) {
    if (phi.degree() != 3) throw ShapeError("positivity is defined for 3-forms");
    Endo7d B = positivity_matrix(phi);
    Eigen::SelfAdjointEigenSolver<Endo7d> es(B, Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues().minCoeff() > 1e-10 * B.norm())) throw DomainError("3-form is not positive");
    return B;
}

double volume_from_B(const Endo7d& B) { return std::pow(B.determinant() / std::pow(6.0, 7), 1.0 / 9.0); }

Eigen::MatrixXd orthogonal_projector(const Eigen::MatrixXd& V, const Eigen::MatrixXd& gram) {
    const Eigen::MatrixXd GV = gram * V;
    return V * (V.transpose() * GV).ldlt().solve(GV.transpose());
}

} // namespace

Form standard_phi() {
    return Form::from_terms(3, {{"123", 1}, {"145", 1}, {"167", 1}, {"246", 1}, {"257", -1}, {"347", -1}, {"356", -1}});
}

Endo7d positivity_matrix(const Form& phi) {
    if (phi.degree() != 3) throw ShapeError("positivity is defined for 3-forms");
    std::array<Form, kDim> contractions;
    for (int i = 0; i < kDim; ++i) contractions[i] = interior(Vector7d(Vector7d::Unit(i)), phi);
    std::array<Form, kDim> with_phi;
    for (int i = 0; i < kDim; ++i) with_phi[i] = wedge(contractions[i], phi);
    Endo7d B;
    for (int i = 0; i < kDim; ++i)
        for (int j = i; j < kDim; ++j) B(i, j) = B(j, i) = top_coefficient(wedge(contractions[j], with_phi[i]));
    return B;
}

bool is_positive(const Form& phi) {
    if (phi.degree() != 3) throw ShapeError("positivity is defined for 3-forms");
    try {
        positive_B(phi);
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

Endo7d two_form_matrix(const Form& w) {
    if (w.degree() != 2) throw ShapeError("expected a 2-form");
    Endo7d m = Endo7d::Zero();
    for (int p = 0; p < w.size(); ++p) {
        const auto ij = monomial_at(2, p).indices();
        m(ij[0], ij[1]) = w.coeffs()[p];
        m(ij[1], ij[0]) = -w.coeffs()[p];
    }
    return m;
}

Form two_form_from_matrix(const Endo7d& m) {
    Form w(2);
    for (int p = 0; p < w.size(); ++p) {
        const auto ij = monomial_at(2, p).indices();
        w.coeffs()[p] = 0.5 * (m(ij[0], ij[1]) - m(ij[1], ij[0]));
    }
    return w;
}

G2Frame::G2Frame(Form phi)
    : phi_(std::move(phi)),
      B_(positive_B(phi_)),
      volume_density_(volume_from_B(B_)),
      metric_(B_ / (6.0 * volume_density_)),
      theta_(hodge_star(metric_, phi_)),
      gram2_(lambda_gram(metric_, 2)),
      gram3_(lambda_gram(metric_, 3)) {
    const Eigen::VectorXd& f = phi_.coeffs();
    P1_ = f * (gram3_ * f).transpose() / 7.0;

    Eigen::MatrixXd V(35, kDim), W(21, kDim);
    for (int i = 0; i < kDim; ++i) {
        const Vector7d e = Vector7d::Unit(i);
        V.col(i) = interior(e, theta_).coeffs();
        W.col(i) = interior(e, phi_).coeffs();
    }
    P7_ = orthogonal_projector(V, gram3_);
    P27_ = Eigen::MatrixXd::Identity(35, 35) - P1_ - P7_;
    Q7_ = orthogonal_projector(W, gram2_);
    Q14_ = Eigen::MatrixXd::Identity(21, 21) - Q7_;

    const Endo7d& ginv = metric_.inverse();
    for (int i = 0; i < kDim; ++i) {
        for (int j = i; j < kDim; ++j) {
            Endo7d S = Endo7d::Zero();
            S(i, j) = S(j, i) = 1.0;
            basis_.push_back(ginv * S);
        }
    }
    for (int i = 0; i < kDim; ++i) basis_.push_back(ginv * two_form_matrix(Form(2, W.col(i))));

    Eigen::MatrixXd M(35, 35);
    for (int k = 0; k < 35; ++k) M.col(k) = delta_action(basis_[k], phi_).coeffs();
    solve_lu_.compute(M);
    if (solve_lu_.rank() < 35) throw SingularError("h -> h.phi is singular on the complement");
}

double G2Frame::inner(const Form& a, const Form& b) const {
    if (a.degree() != b.degree()) throw ShapeError("inner product requires equal degrees");
    if (a.degree() == 3) return a.coeffs().dot(gram3_ * b.coeffs());
    if (a.degree() == 2) return a.coeffs().dot(gram2_ * b.coeffs());
    return lambda_inner(metric_, a, b);
}

Form G2Frame::project(const Form& a, Component c) const {
    const bool three = c == Component::L3_1 || c == Component::L3_7 || c == Component::L3_27;
    if (a.degree() != (three ? 3 : 2)) throw ShapeError("form degree does not match the component");
    switch (c) {
    case Component::L3_1: return Form(3, P1_ * a.coeffs());
    case Component::L3_7: return Form(3, P7_ * a.coeffs());
    case Component::L3_27: return Form(3, P27_ * a.coeffs());
    case Component::L2_7: return Form(2, Q7_ * a.coeffs());
    case Component::L2_14: return Form(2, Q14_ * a.coeffs());
    }
    return a;
}

Endo7d G2Frame::solve_h(const Form& eta) const {
    if (eta.degree() != 3) throw ShapeError("solve_h expects a 3-form");
    const Eigen::VectorXd c = solve_lu_.solve(eta.coeffs());
    Endo7d h = Endo7d::Zero();
    for (int k = 0; k < 35; ++k) h += c[k] * basis_[k];
    return h;
}

Form G2Frame::theta_first_variation(const Form& eta) const {
    if (eta.degree() != 3) throw ShapeError("expected a 3-form");
    const Eigen::VectorXd weighted = (4.0 / 3.0) * (P1_ * eta.coeffs()) + P7_ * eta.coeffs() - P27_ * eta.coeffs();
    return star(Form(3, weighted));
}

std::vector<Endo7d> G2Frame::kernel_basis() const {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Q14_, Eigen::ComputeThinU);
    std::vector<Endo7d> out;
    for (int k = 0; k < 14; ++k) out.push_back(metric_.inverse() * two_form_matrix(Form(2, svd.matrixU().col(k))));
    return out;
}

} // namespace g2lab
