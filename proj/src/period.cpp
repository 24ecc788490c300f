#include "g2lab/period.hpp"

#include <cmath>

namespace g2lab {

namespace {

Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& B) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
    return qr.householderQ() * Eigen::MatrixXd::Identity(B.rows(), B.cols());
}

void check_dims(const SymplecticSpace& space, const HodgePoint& point) {
    const std::array<int, 4> dims{1, space.n(), space.n(), 1};
    for (int p = 0; p < 4; ++p)
        if (point.H(p).rows() != space.dim() || point.H(p).cols() != dims[p])
            throw ShapeError("block H^(" + std::to_string(p) + ") has wrong dimensions");
}

// Offsets of the blocks inside stacked(): H^(3) first.
int block_offset(const SymplecticSpace& space, int p) {
    switch (p) {
    case 3: return 0;
    case 2: return 1;
    case 1: return 1 + space.n();
    default: return 1 + 2 * space.n();
    }
}

int block_dim(const SymplecticSpace& space, int p) { return (p == 0 || p == 3) ? 1 : space.n(); }

Eigen::VectorXd canonical_sign(Eigen::VectorXd v) {
    Eigen::Index i;
    v.cwiseAbs().maxCoeff(&i);
    return v[i] < 0 ? Eigen::VectorXd(-v) : v;
}

Eigen::MatrixXd lower_projection(const SymplecticSpace& space, const HodgePoint& point, int p, const Eigen::MatrixXd& Y) {
    const Eigen::MatrixXd S = point.stacked();
    const Eigen::MatrixXd K = S.partialPivLu().solve(Y);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(Y.rows(), Y.cols());
    for (int q = 0; q < p; ++q) {
        const int off = block_offset(space, q), d = block_dim(space, q);
        out += S.middleCols(off, d) * K.middleRows(off, d);
    }
    return out;
}

double transverse_scale(const TangentRep& xi) { return std::max(1.0, xi.a.cwiseAbs().maxCoeff()); }

} // namespace

SymplecticSpace::SymplecticSpace(int n) : n_(n) {
    if (n < 1) throw ShapeError("period domain needs n >= 1");
    const int N = n + 1;
    Q_ = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    Q_.topRightCorner(N, N) = Eigen::MatrixXd::Identity(N, N);
    Q_.bottomLeftCorner(N, N) = -Eigen::MatrixXd::Identity(N, N);
    iota_ = Eigen::MatrixXd::Identity(2 * N, 2 * N);
    iota_.bottomRightCorner(N, N) *= -1.0;
    iotaQ_ = iota_.transpose() * Q_;
}

Eigen::VectorXd SymplecticSpace::embed_h3(const Eigen::VectorXd& c) const {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim());
    w.head(half()) = c;
    return w;
}

Eigen::VectorXd SymplecticSpace::embed_h4(const Eigen::VectorXd& d) const {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim());
    w.tail(half()) = d;
    return w;
}

Eigen::MatrixXd HodgePoint::stacked() const {
    const Eigen::Index rows = blocks[3].rows();
    Eigen::MatrixXd S(rows, blocks[0].cols() + blocks[1].cols() + blocks[2].cols() + blocks[3].cols());
    S << blocks[3], blocks[2], blocks[1], blocks[0];
    return S;
}

double PointValidation::max() const { return std::max({iota_closure, q_orthogonality, definiteness, rank}); }

PointValidation validate_point(const SymplecticSpace& space, const HodgePoint& point) {
    check_dims(space, point);
    PointValidation v;
    std::array<Eigen::MatrixXd, 4> B;
    for (int p = 0; p < 4; ++p) B[p] = orthonormal_columns(point.H(p));

    for (int p = 0; p < 4; ++p) {
        const Eigen::MatrixXd image = space.iota() * B[p];
        const Eigen::MatrixXd rest = image - B[3 - p] * (B[3 - p].transpose() * image);
        v.iota_closure = std::max(v.iota_closure, rest.cwiseAbs().maxCoeff());
    }

    HodgePoint ortho{B};
    const Eigen::MatrixXd S = ortho.stacked();
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(S).singularValues();
    v.rank = sv.minCoeff() > 1e-8 * sv.maxCoeff() ? 0.0 : 1.0;

    const Eigen::MatrixXd M = S.transpose() * space.iota_Q() * S;
    for (int p = 0; p < 4; ++p) {
        const int op = block_offset(space, p), dp = block_dim(space, p);
        for (int q = 0; q < 4; ++q) {
            if (q == p) continue;
            const int oq = block_offset(space, q), dq = block_dim(space, q);
            v.q_orthogonality = std::max(v.q_orthogonality, M.block(op, oq, dp, dq).cwiseAbs().maxCoeff());
        }
        const double sign = (p % 2 == 1) ? 1.0 : -1.0;  // (-1)^{p+1}
        const Eigen::MatrixXd block = sign * M.block(op, op, dp, dp);
        const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(block, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
        if (!(lo > 0.0)) v.definiteness = std::max(v.definiteness, 1.0 + std::abs(lo));
    }
    return v;
}

HodgePoint iota_swap(const SymplecticSpace& space, const HodgePoint& point) {
    check_dims(space, point);
    HodgePoint out;
    for (int p = 0; p < 4; ++p) out.blocks[p] = space.iota() * point.H(3 - p);
    return out;
}

HodgePoint act(const SymplecticSpace& space, const Eigen::MatrixXd& A, const HodgePoint& point) {
    check_dims(space, point);
    const int N = space.half();
    if (A.rows() != N || A.cols() != N) throw ShapeError("group element has wrong dimensions");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) throw SingularError("group element is singular");
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    T.topLeftCorner(N, N) = A;
    T.bottomRightCorner(N, N) = lu.inverse().transpose();
    HodgePoint out;
    for (int p = 0; p < 4; ++p) out.blocks[p] = T * point.H(p);
    return out;
}

LineAndForm pair_iso(const SymplecticSpace& space, const HodgePoint& point) {
    check_dims(space, point);
    const int N = space.half();
    LineAndForm lq;
    // w + iota(w) = 2 (c, 0)
    lq.line = canonical_sign(point.H(3).col(0).head(N).normalized());

    const Eigen::MatrixXd S = point.stacked();
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(space.dim(), N);
    E.topRows(N) = Eigen::MatrixXd::Identity(N, N);
    const Eigen::MatrixXd K = S.partialPivLu().solve(E);
    std::array<Eigen::MatrixXd, 4> P;
    for (int p = 0; p < 4; ++p) {
        const int off = block_offset(space, p), d = block_dim(space, p);
        P[p] = S.middleCols(off, d) * K.middleRows(off, d);
    }
    const Eigen::MatrixXd A03 = P[0].transpose() * space.Q() * P[3];
    const Eigen::MatrixXd A12 = P[1].transpose() * space.Q() * P[2];
    lq.q = A03 + A03.transpose() - A12 - A12.transpose();
    return lq;
}

namespace {

StandardBasis basis_from(const LineAndForm& lq) {
    const Eigen::Index N = lq.line.size();
    const Eigen::MatrixXd& q = lq.q;
    Eigen::LLT<Eigen::MatrixXd> llt(q);
    if (llt.info() != Eigen::Success) throw SingularError("quadratic form is not positive definite");
    Eigen::MatrixXd U(N, N);
    const double norm0 = std::sqrt(lq.line.dot(q * lq.line));
    U.col(0) = lq.line / norm0;
    Eigen::Index filled = 1;
    for (Eigen::Index e = 0; e < N && filled < N; ++e) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(N, e);
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index k = 0; k < filled; ++k) v -= U.col(k).dot(q * v) * U.col(k);
        const double nv = std::sqrt(v.dot(q * v));
        if (nv < 1e-8) continue;
        U.col(filled++) = v / nv;
    }
    if (filled < N) throw SingularError("standard basis construction failed");
    return {U, U.inverse().transpose()};
}

} // namespace

HodgePoint pair_iso_inverse(const SymplecticSpace& space, const LineAndForm& lq) {
    const int N = space.half();
    if (lq.line.size() != N || lq.q.rows() != N || lq.q.cols() != N) throw ShapeError("line or form has wrong dimensions");
    const StandardBasis sb = basis_from(lq);
    const int n = space.n();
    HodgePoint out;
    out.blocks[3] = space.embed_h3(sb.U.col(0)) + space.embed_h4(sb.V.col(0));
    out.blocks[0] = space.embed_h3(sb.U.col(0)) - space.embed_h4(sb.V.col(0));
    out.blocks[2].resize(space.dim(), n);
    out.blocks[1].resize(space.dim(), n);
    for (int j = 1; j <= n; ++j) {
        out.blocks[2].col(j - 1) = space.embed_h3(sb.U.col(j)) - space.embed_h4(sb.V.col(j));
        out.blocks[1].col(j - 1) = space.embed_h3(sb.U.col(j)) + space.embed_h4(sb.V.col(j));
    }
    return out;
}

double point_distance(const SymplecticSpace& space, const HodgePoint& a, const HodgePoint& b) {
    check_dims(space, a);
    check_dims(space, b);
    double worst = 0.0;
    for (int p = 0; p < 4; ++p) {
        const Eigen::MatrixXd A = orthonormal_columns(a.H(p)), B = orthonormal_columns(b.H(p));
        worst = std::max(worst, (A * A.transpose() - B * B.transpose()).cwiseAbs().maxCoeff());
    }
    return worst;
}

Eigen::MatrixXd StandardBasis::as_h_basis() const {
    const Eigen::Index N = U.rows();
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    S.topLeftCorner(N, N) = U;
    S.bottomRightCorner(N, N) = V;
    return S;
}

StandardBasis standard_basis(const SymplecticSpace& space, const HodgePoint& point) {
    return basis_from(pair_iso(space, point));
}

TangentRep normalized_tangent(const Eigen::MatrixXd& a) {
    TangentRep xi{a};
    const Eigen::Index n = a.rows() - 1;
    const Eigen::MatrixXd lower = a.bottomRightCorner(n, n);
    xi.a.bottomRightCorner(n, n) = (lower + lower.transpose()) / 2.0;
    return xi;
}

Eigen::MatrixXd tangent_action(const StandardBasis& basis, const TangentRep& xi) {
    const Eigen::Index N = basis.U.rows();
    if (xi.a.rows() != N || xi.a.cols() != N) throw ShapeError("tangent matrix does not match the standard basis");
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    D.topLeftCorner(N, N) = xi.a;
    D.bottomRightCorner(N, N) = -xi.a.transpose();
    const Eigen::MatrixXd S = basis.as_h_basis();
    return S * D * S.inverse();
}

Eigen::MatrixXd block_map(const SymplecticSpace& space, const HodgePoint& point, const StandardBasis& basis,
                          const TangentRep& xi, int p, const Eigen::MatrixXd& X) {
    if (p < 1 || p > 3) throw ShapeError("block maps exist for p = 1, 2, 3");
    return lower_projection(space, point, p, tangent_action(basis, xi) * X);
}

TangentSplit classify_tangent(const SymplecticSpace& space, const HodgePoint& point, const StandardBasis& basis,
                              const TangentRep& xi, double tol) {
    const Eigen::MatrixXd& a = xi.a;
    const Eigen::Index N = a.rows();
    TangentSplit s;
    s.vertical = Eigen::MatrixXd::Zero(N, N);
    s.line = Eigen::MatrixXd::Zero(N, N);
    s.transverse = a;
    s.line(0, 0) = a(0, 0);
    s.transverse(0, 0) = 0.0;
    s.horizontal_residual = 0.0;
    for (Eigen::Index i = 1; i < N; ++i) {
        const double anti = (a(0, i) - a(i, 0)) / 2.0, sym = (a(0, i) + a(i, 0)) / 2.0;
        s.vertical(0, i) = anti;
        s.vertical(i, 0) = -anti;
        s.transverse(0, i) = s.transverse(i, 0) = sym;
        s.horizontal_residual = std::max(s.horizontal_residual, std::abs(a(0, i) - a(i, 0)));
    }
    s.transverse_residual = std::max(s.horizontal_residual, std::abs(a(0, 0)));
    s.horizontal = s.horizontal_residual <= tol;
    s.is_transverse = s.transverse_residual <= tol;

    const Eigen::VectorXd w = point.H(3).col(0);
    const Eigen::VectorXd y = block_map(space, point, basis, xi, 3, w);
    const Eigen::MatrixXd S = point.stacked();
    const Eigen::VectorXd K = S.partialPivLu().solve(y);
    const int o1 = block_offset(space, 1), o0 = block_offset(space, 0);
    const double in1 = (S.middleCols(o1, space.n()) * K.segment(o1, space.n())).norm() / w.norm();
    const double in0 = (S.col(o0) * K[o0]).norm() / w.norm();
    s.block_horizontal_residual = in1;
    s.block_transverse_residual = std::max(in1, in0);
    return s;
}

double metric_gD(const TangentRep& xi, const TangentRep& xi2) {
    if (xi.a.rows() != xi2.a.rows()) throw ShapeError("tangent vectors live in different spaces");
    return (xi.a.array() * xi2.a.array()).sum();
}

namespace {

void require_transverse(const TangentRep& xi, double tol) {
    const Eigen::MatrixXd& a = xi.a;
    double r = std::abs(a(0, 0));
    for (Eigen::Index i = 1; i < a.rows(); ++i) r = std::max(r, std::abs(a(0, i) - a(i, 0)));
    if (r > tol * transverse_scale(xi)) throw DomainError("tangent vector is not transverse");
}

} // namespace

double h_D(const SymplecticSpace& space, const HodgePoint& point, const StandardBasis& basis, const TangentRep& xi,
           const TangentRep& xi2, double tol) {
    require_transverse(xi, tol);
    require_transverse(xi2, tol);
    const Eigen::VectorXd w = point.H(3).col(0);
    const Eigen::VectorXd y = block_map(space, point, basis, xi, 3, w);
    const Eigen::VectorXd y2 = block_map(space, point, basis, xi2, 3, w);
    return -space.iota_pairing(y, y2) / space.iota_pairing(w, w);
}

double xi_D(const SymplecticSpace& space, const HodgePoint& point, const StandardBasis& basis, const TangentRep& xi,
            const TangentRep& xi2, const TangentRep& xi3, double tol) {
    require_transverse(xi, tol);
    require_transverse(xi2, tol);
    require_transverse(xi3, tol);
    const Eigen::VectorXd w = point.H(3).col(0);
    const Eigen::VectorXd y3 = block_map(space, point, basis, xi3, 3, w);
    const Eigen::VectorXd y2 = block_map(space, point, basis, xi2, 2, y3);
    const Eigen::VectorXd y1 = block_map(space, point, basis, xi, 1, y2);
    const Eigen::VectorXd iw = space.iota() * w;
    return -y1.dot(iw) / iw.dot(iw);
}

// flat chart

Form dual_four_form(int a) {
    const MultiIndex I = FlatOrbifoldChart::monomials().at(a);
    return Form::monomial(I.complement(), FlatOrbifoldChart::signs()[a] * wedge_sign(I, I.complement()));
}

Eigen::VectorXd h3_class(const Form& eta) {
    if (eta.degree() != 3) throw ShapeError("H^3 classes come from 3-forms");
    Eigen::VectorXd c(7);
    for (int a = 0; a < 7; ++a) c[a] = top_coefficient(wedge(eta, dual_four_form(a)));
    return c;
}

Eigen::VectorXd h4_class(const Form& nu) {
    if (nu.degree() != 4) throw ShapeError("H^4 classes come from 4-forms");
    Eigen::VectorXd d(7);
    for (int b = 0; b < 7; ++b) d[b] = top_coefficient(wedge(FlatOrbifoldChart::eta(b), nu));
    return d;
}

Eigen::VectorXd h_vector(const Form& eta, const Form& nu) {
    Eigen::VectorXd w(14);
    w << h3_class(eta), h4_class(nu);
    return w;
}

std::vector<Form> harmonic_27_basis(const HarmonicFrame& hf) {
    const G2Frame& fr = hf.frame;
    const auto n = static_cast<Eigen::Index>(hf.etas.size());
    Eigen::MatrixXd E(35, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        const Form& eta = hf.etas[a];
        E.col(a) = (eta - (fr.inner(eta, fr.phi()) / 7.0) * fr.phi()).coeffs();
    }
    const Eigen::MatrixXd gram = E.transpose() * fr.gram3() * E;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const double top = es.eigenvalues().maxCoeff();
    std::vector<Form> out;
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        const double lambda = es.eigenvalues()[k];
        if (lambda <= 1e-10 * top) continue;
        out.emplace_back(3, E * es.eigenvectors().col(k) / std::sqrt(lambda));
    }
    return out;
}

HodgePoint phi_map(const FlatOrbifoldChart& chart, const Eigen::VectorXd& x) {
    const HarmonicFrame hf = chart.harmonic_frame(x);
    const G2Frame& fr = hf.frame;
    const std::vector<Form> basis = harmonic_27_basis(hf);
    const int n = static_cast<int>(basis.size());
    if (n != 6) throw Error("phi_map: harmonic 27-part has dimension " + std::to_string(n));
    HodgePoint point;
    point.blocks[3] = h_vector(fr.phi(), fr.theta());
    point.blocks[0] = h_vector(fr.phi(), -fr.theta());
    point.blocks[2].resize(14, n);
    point.blocks[1].resize(14, n);
    for (int k = 0; k < n; ++k) {
        const Form s = fr.star(basis[k]);
        point.blocks[2].col(k) = h_vector(basis[k], -s);
        point.blocks[1].col(k) = h_vector(basis[k], s);
    }
    const SymplecticSpace space(6);
    const PointValidation v = validate_point(space, point);
    if (!v.pass()) throw Error("phi_map: constructed point fails validation (residual " + std::to_string(v.max()) + ")");
    return point;
}

TangentRep dphi(const FlatOrbifoldChart& chart, const Eigen::VectorXd& x, const Eigen::VectorXd& direction,
                const FDScheme& scheme) {
    const SymplecticSpace space(6);
    const HodgePoint base = phi_map(chart, x);
    const StandardBasis sb = standard_basis(space, base);
    const Eigen::Index N = 7;
    const Eigen::MatrixXd Uinv = sb.U.inverse();
    // packs the line ratios c_i / c_0 (i >= 1) and the form in standard coordinates
    const auto curve = [&](double t) {
        const LineAndForm lq = pair_iso(space, phi_map(chart, x + t * direction));
        const Eigen::VectorXd c = Uinv * lq.line;
        const Eigen::MatrixXd qs = sb.U.transpose() * lq.q * sb.U;
        Eigen::VectorXd packed(N - 1 + N * N);
        packed.head(N - 1) = c.tail(N - 1) / c[0];
        packed.tail(N * N) = Eigen::Map<const Eigen::VectorXd>(qs.data(), N * N);
        return packed;
    };
    const Eigen::VectorXd dp = curve_derivative(curve, scheme);
    const Eigen::Map<const Eigen::MatrixXd> qdot(dp.data() + (N - 1), N, N);
    TangentRep xi{Eigen::MatrixXd::Zero(N, N)};
    xi.a(0, 0) = -qdot(0, 0) / 2.0;
    for (Eigen::Index i = 1; i < N; ++i) {
        xi.a(i, 0) = dp[i - 1];
        xi.a(0, i) = -(qdot(0, i) + qdot(i, 0)) / 2.0 - xi.a(i, 0);
        for (Eigen::Index j = 1; j < N; ++j) xi.a(i, j) = -(qdot(i, j) + qdot(j, i)) / 4.0;
    }
    return xi;
}

Eigen::MatrixXd dphi_block(const FlatOrbifoldChart& chart, const Eigen::VectorXd& x, const Eigen::VectorXd& direction,
                           int p, const FDScheme& scheme) {
    if (p < 1 || p > 3) throw ShapeError("block maps exist for p = 1, 2, 3");
    const SymplecticSpace space(6);
    const HodgePoint base = phi_map(chart, x);
    const Eigen::MatrixXd S0 = base.stacked();
    const auto lu = S0.partialPivLu();
    const int top = block_offset(space, p) + block_dim(space, p);
    const int rest = space.dim() - top;
    const auto curve = [&](double t) {
        const HodgePoint pt = phi_map(chart, x + t * direction);
        const Eigen::MatrixXd K = lu.solve(pt.stacked().leftCols(top));
        const Eigen::MatrixXd graph = K.bottomRows(rest) * K.topRows(top).inverse();
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(graph.data(), graph.size()));
    };
    const Eigen::VectorXd d = curve_derivative(curve, scheme);
    const Eigen::Map<const Eigen::MatrixXd> dgraph(d.data(), rest, top);
    const int off = block_offset(space, p), dim = block_dim(space, p);
    return S0.rightCols(rest) * dgraph.middleCols(off, dim);
}

// symmetric space

Eigen::MatrixXd s2plus_covariant(const Eigen::MatrixXd& q, const Eigen::MatrixXd& qdot, const Eigen::MatrixXd& qdot2) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(q);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) throw SingularError("q is not positive definite");
    const Eigen::MatrixXd A = qdot * ldlt.solve(qdot2);
    return -0.5 * (A + A.transpose());
}

double s2plus_inner(const Eigen::MatrixXd& q, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(q);
    if (ldlt.info() != Eigen::Success) throw SingularError("q is singular");
    return 0.25 * (ldlt.solve(A) * ldlt.solve(B)).trace();
}

SffResidual sff_residual(const ModelFamily& family, const Eigen::VectorXd& x, int a, int b, const JetSchemes& schemes,
                         const FDScheme& outer) {
    const Eigen::Index m = x.size();
    if (a < 0 || b < 0 || a >= m || b >= m) throw ShapeError("coordinate index out of range");
    const PotentialJet j = jet(family, x, schemes, 4);
    const HessianGeometry geo = geometry(j);
    const double scale = std::exp(-j.F / 3.0);
    const auto field = [](const PotentialJet& pj, Eigen::Index c) {
        return Eigen::MatrixXd(std::exp(-pj.F / 3.0) * (slice_last(pj.F3, c) - (pj.F1[c] / 3.0) * pj.F2));
    };
    const Eigen::MatrixXd q = scale * j.F2;
    std::vector<Eigen::MatrixXd> dq;
    for (Eigen::Index c = 0; c < m; ++c) dq.push_back(field(j, c));

    const auto along_a = [&](double t) {
        Eigen::VectorXd p = x;
        p[a] += t;
        const Eigen::MatrixXd f = field(jet(family, p, schemes, 3), b);
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(f.data(), f.size()));
    };
    const FDScheme scaled(outer.step * std::max(std::abs(x[a]), 1.0), outer.richardson);
    const Eigen::VectorXd dfield = curve_derivative(along_a, scaled);
    const Eigen::MatrixXd lhs = Eigen::Map<const Eigen::MatrixXd>(dfield.data(), m, m) + s2plus_covariant(q, dq[a], dq[b]);

    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index k = 0; k < m; ++k) rhs += geo.christoffel(k, a, b) * dq[k];
    for (Eigen::Index k = 0; k < m; ++k)
        for (Eigen::Index l = 0; l < m; ++l) rhs(k, l) += 2.0 * scale * geo.nabla_xi(a, b, k, l);

    Eigen::MatrixXd gram(m, m);
    Eigen::VectorXd proj(m);
    for (Eigen::Index c = 0; c < m; ++c) {
        proj[c] = s2plus_inner(q, dq[c], lhs);
        for (Eigen::Index d = 0; d < m; ++d) gram(c, d) = s2plus_inner(q, dq[c], dq[d]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (!lu.isInvertible()) throw SingularError("tangent fields of the chart map are dependent");
    const Eigen::VectorXd y = lu.solve(proj);
    Eigen::MatrixXd normal = lhs;
    for (Eigen::Index c = 0; c < m; ++c) normal -= y[c] * dq[c];

    return {(lhs - rhs).cwiseAbs().maxCoeff(), std::sqrt(std::max(0.0, s2plus_inner(q, normal, normal)))};
}

// contact geometry

namespace {

double chart_coordinate(const SymplecticSpace& space, const Eigen::VectorXd& w) {
    const double w0 = (w[0] + w[space.half()]) / std::sqrt(2.0);
    if (std::abs(w0) <= 1e-12 * w.norm()) throw DomainError("point lies outside the affine chart w^0 = 1");
    return w0;
}

} // namespace

double contact_alpha(const SymplecticSpace& space, const Eigen::VectorXd& w, const Eigen::VectorXd& wdot) {
    if (w.size() != space.dim() || wdot.size() != space.dim()) throw ShapeError("H vector has wrong dimension");
    const double w0 = chart_coordinate(space, w);
    return -space.pairing(w, wdot) / (w0 * w0);
}

double contact_dalpha(const SymplecticSpace& space, const Eigen::VectorXd& w, const Eigen::VectorXd& wdot,
                      const Eigen::VectorXd& wdot2) {
    if (w.size() != space.dim() || wdot.size() != space.dim() || wdot2.size() != space.dim())
        throw ShapeError("H vector has wrong dimension");
    const double w0 = chart_coordinate(space, w);
    const int N = space.half();
    const auto normalized_velocity = [&](const Eigen::VectorXd& v) {
        const double v0 = (v[0] + v[N]) / std::sqrt(2.0);
        return Eigen::VectorXd((v * w0 - w * v0) / (w0 * w0));
    };
    const Eigen::VectorXd y1 = normalized_velocity(wdot), y2 = normalized_velocity(wdot2);
    double s = 0.0;
    for (int j = 1; j < N; ++j) {
        const double lower1 = (y1[j] - y1[N + j]) / std::sqrt(2.0), upper1 = (y1[j] + y1[N + j]) / std::sqrt(2.0);
        const double lower2 = (y2[j] - y2[N + j]) / std::sqrt(2.0), upper2 = (y2[j] + y2[N + j]) / std::sqrt(2.0);
        s += lower1 * upper2 - upper1 * lower2;
    }
    return -2.0 * s;
}

} // namespace g2lab
