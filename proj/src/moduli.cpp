#include "g2lab/moduli.hpp"

#include <algorithm>
#include <cmath>

namespace g2lab {

namespace {

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& G) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
    if (!lu.isInvertible()) throw SingularError("metric G is singular");
    return lu.inverse();
}

// christoffel(k, a, b) = 1/2 G^{kl} F_abl
Tensor3 christoffel_of(const Eigen::MatrixXd& Ginv, const Tensor3& F3) {
    const Eigen::Index m = Ginv.rows();
    Tensor3 out(m, m, m);
    out.setZero();
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b)
            for (Eigen::Index l = 0; l < m; ++l) {
                const double f = 0.5 * F3(a, b, l);
                if (f == 0.0) continue;
                for (Eigen::Index k = 0; k < m; ++k) out(k, a, b) += Ginv(k, l) * f;
            }
    return out;
}

} // namespace

PotentialJet jet(const ModelFamily& family, const Eigen::VectorXd& x, const JetSchemes& schemes, int max_order) {
    if (max_order < 1 || max_order > 4) throw ShapeError("jet order must be 1..4");
    if (!family.in_domain(x)) throw DomainError(family.name() + ": point outside chart domain");
    const ScalarFunction F = [&family](const Eigen::VectorXd& p) { return family.potential(p); };
    PotentialJet j;
    j.x = x;
    j.max_order = max_order;
    j.F = F(x);
    j.F1 = gradient(F, x, schemes.order1);
    if (max_order >= 2) j.F2 = hessian(F, x, schemes.order2);
    if (max_order >= 3) j.F3 = partial_tensor<3>(F, x, schemes.order3).value;
    if (max_order >= 4) j.F4 = partial_tensor<4>(F, x, schemes.order4).value;
    if (family.has_pointwise_forms()) {
        j.F1_closed = gradient_closed(family, x);
        if (max_order >= 2) j.F2_closed = hessian_closed(family, x);
        if (max_order >= 3 && family.b1_zero()) j.F3_closed = third_closed(family, x);
    }
    return j;
}

Eigen::VectorXd gradient_closed(const ModelFamily& family, const Eigen::VectorXd& x) {
    const HarmonicFrame hf = family.harmonic_frame(x);
    const auto n = static_cast<Eigen::Index>(hf.etas.size());
    Eigen::VectorXd out(n);
    for (Eigen::Index a = 0; a < n; ++a)
        out[a] = -top_coefficient(wedge(hf.etas[a], hf.frame.theta())) / hf.frame.volume_density();
    return out;
}

Eigen::MatrixXd hessian_closed(const ModelFamily& family, const Eigen::VectorXd& x) {
    const HarmonicFrame hf = family.harmonic_frame(x);
    const G2Frame& fr = hf.frame;
    const Eigen::MatrixXd sign_flip = fr.P1() + fr.P27() - fr.P7();
    const auto n = static_cast<Eigen::Index>(hf.etas.size());
    Eigen::MatrixXd E(35, n);
    for (Eigen::Index a = 0; a < n; ++a) E.col(a) = hf.etas[a].coeffs();
    Eigen::MatrixXd H = E.transpose() * fr.gram3() * sign_flip * E;
    return (H + H.transpose()) / 2.0;
}

Tensor3 third_closed(const ModelFamily& family, const Eigen::VectorXd& x) {
    if (!family.b1_zero()) throw DomainError(family.name() + ": third-derivative closed form needs b1 = 0");
    const HarmonicFrame hf = family.harmonic_frame(x);
    const auto n = static_cast<Eigen::Index>(hf.etas.size());
    Tensor3 out(n, n, n);
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index a = 0; a < n; ++a) {
            const Form moved = delta_action(hf.hs[c], hf.etas[a]);
            for (Eigen::Index b = 0; b < n; ++b) out(a, b, c) = -2.0 * hf.frame.inner(moved, hf.etas[b]);
        }
    return out;
}

Tensor4 fourth_rhs(const PotentialJet& j) {
    if (j.max_order < 3) throw ShapeError("fourth_rhs needs a jet of order 3");
    const Eigen::MatrixXd Ginv = checked_inverse(j.F2);
    const Eigen::Index m = j.F2.rows();
    // W(a, b, l) = G^{lk} F_abk
    Tensor3 W(m, m, m);
    W.setZero();
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b)
            for (Eigen::Index k = 0; k < m; ++k)
                for (Eigen::Index l = 0; l < m; ++l) W(a, b, l) += Ginv(l, k) * j.F3(a, b, k);
    Tensor4 out(m, m, m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b)
            for (Eigen::Index c = 0; c < m; ++c)
                for (Eigen::Index d = 0; d < m; ++d) {
                    double s = 0.0;
                    for (Eigen::Index l = 0; l < m; ++l)
                        s += W(a, b, l) * j.F3(c, d, l) + W(a, c, l) * j.F3(b, d, l) + W(a, d, l) * j.F3(b, c, l);
                    out(a, b, c, d) = 0.5 * s;
                }
    return out;
}

EResidual e_residual(const PotentialJet& j) {
    if (j.max_order < 4) throw ShapeError("e_residual needs a jet of order 4");
    EResidual r;
    r.residual = j.F4 - fourth_rhs(j);
    r.nabla_xi = r.residual * 0.5;
    return r;
}

Tensor4 shima_curvature(const Eigen::MatrixXd& G, const Tensor3& F3) {
    const Eigen::MatrixXd Ginv = checked_inverse(G);
    const Eigen::Index m = G.rows();
    const Tensor3 gamma = christoffel_of(Ginv, F3);
    // R_abcd = 1/2 (F_adk Gamma^k_bc - F_ack Gamma^k_bd)
    Tensor4 R(m, m, m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b)
            for (Eigen::Index c = 0; c < m; ++c)
                for (Eigen::Index d = 0; d < m; ++d) {
                    double s = 0.0;
                    for (Eigen::Index k = 0; k < m; ++k) s += F3(a, d, k) * gamma(k, b, c) - F3(a, c, k) * gamma(k, b, d);
                    R(a, b, c, d) = 0.5 * s;
                }
    return R;
}

HessianGeometry geometry(const PotentialJet& j) {
    if (j.max_order < 3) throw ShapeError("geometry needs a jet of order 3");
    HessianGeometry geo;
    geo.G = j.F2;
    geo.Ginv = checked_inverse(j.F2);
    geo.christoffel = christoffel_of(geo.Ginv, j.F3);
    geo.yukawa = j.F3 * 0.5;
    if (j.max_order >= 4) geo.nabla_xi = e_residual(j).nabla_xi;
    geo.riemann = shima_curvature(geo.G, j.F3);
    return geo;
}

HessianGeometry geometry_with_nabla_r(const ModelFamily& family, const Eigen::VectorXd& x, const JetSchemes& schemes,
                                      const FDScheme& outer) {
    HessianGeometry geo = geometry(jet(family, x, schemes, 4));
    const Eigen::Index m = x.size();
    const auto riemann_at = [&](const Eigen::VectorXd& p) {
        const PotentialJet pj = jet(family, p, schemes, 3);
        return shima_curvature(pj.F2, pj.F3);
    };
    Tensor5 dR(m, m, m, m, m);
    for (Eigen::Index e = 0; e < m; ++e) {
        std::vector<Tensor4> rows;
        for (int level = 0; level <= outer.richardson; ++level) {
            const double h = outer.step / std::pow(2.0, level) * std::max(std::abs(x[e]), 1.0);
            Eigen::VectorXd xp = x, xm = x;
            xp[e] += h;
            xm[e] -= h;
            rows.push_back((riemann_at(xp) - riemann_at(xm)) * (0.5 / h));
        }
        for (int i = 1; i <= outer.richardson; ++i) {
            const double w = std::pow(4.0, i);
            for (std::size_t r = 0; r + 1 < rows.size(); ++r) rows[r] = (rows[r + 1] * w - rows[r]) / (w - 1.0);
            rows.pop_back();
        }
        const Tensor4& d = rows[0];
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b)
                for (Eigen::Index c = 0; c < m; ++c)
                    for (Eigen::Index dd = 0; dd < m; ++dd) dR(e, a, b, c, dd) = d(a, b, c, dd);
    }
    const Tensor3& G3 = geo.christoffel;
    const Tensor4& R = geo.riemann;
    for (Eigen::Index e = 0; e < m; ++e)
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b)
                for (Eigen::Index c = 0; c < m; ++c)
                    for (Eigen::Index d = 0; d < m; ++d) {
                        double s = 0.0;
                        for (Eigen::Index k = 0; k < m; ++k)
                            s += G3(k, e, a) * R(k, b, c, d) + G3(k, e, b) * R(a, k, c, d) + G3(k, e, c) * R(a, b, k, d) +
                                 G3(k, e, d) * R(a, b, c, k);
                        dR(e, a, b, c, d) -= s;
                    }
    geo.nabla_riemann = std::move(dR);
    return geo;
}

double sectional_curvature(const HessianGeometry& geo, const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
    const double area = X.dot(geo.G * X) * Y.dot(geo.G * Y) - std::pow(X.dot(geo.G * Y), 2);
    if (!(area > 0.0)) throw DomainError("sectional curvature needs a nondegenerate plane");
    return contract<4>(geo.riemann, {X, Y, X, Y}) / area;
}

double CurvatureSymmetry::max() const { return std::max({antisymmetry_ab, antisymmetry_cd, pair_exchange, bianchi}); }

CurvatureSymmetry curvature_symmetries(const Tensor4& R) {
    CurvatureSymmetry s{0, 0, 0, 0};
    const Eigen::Index m = R.dimension(0);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b)
            for (Eigen::Index c = 0; c < m; ++c)
                for (Eigen::Index d = 0; d < m; ++d) {
                    const double r = R(a, b, c, d);
                    s.antisymmetry_ab = std::max(s.antisymmetry_ab, std::abs(r + R(b, a, c, d)));
                    s.antisymmetry_cd = std::max(s.antisymmetry_cd, std::abs(r + R(a, b, d, c)));
                    s.pair_exchange = std::max(s.pair_exchange, std::abs(r - R(c, d, a, b)));
                    s.bianchi = std::max(s.bianchi, std::abs(r + R(b, c, a, d) + R(c, a, b, d)));
                }
    return s;
}

EulerReport euler_identities(const PotentialJet& j) {
    EulerReport rep{0, 0, 0};
    const Eigen::VectorXd& x = j.x;
    if (j.max_order >= 2) rep.gradient = (j.F2 * x + j.F1).cwiseAbs().maxCoeff();
    if (j.max_order >= 3) rep.hessian = (contract_last(j.F3, x) + 2.0 * j.F2).cwiseAbs().maxCoeff();
    if (j.max_order >= 4) rep.nabla_xi_trace = max_abs<3>(contract_last(e_residual(j).nabla_xi, x));
    return rep;
}

} // namespace g2lab
