#include "g2lab/models.hpp"

#include <cmath>
#include <numeric>

#include "g2lab/rng.hpp"

namespace g2lab {

HarmonicFrame ModelFamily::harmonic_frame(const Eigen::VectorXd&) const {
    throw DomainError(name() + " has no pointwise harmonic forms");
}

double ModelFamily::potential(const Eigen::VectorXd& x) const { return -3.0 * std::log(volume(x)); }

void ModelFamily::require_domain(const Eigen::VectorXd& x) const {
    if (x.size() != dimension()) throw ShapeError(name() + ": point has wrong dimension");
    if (!in_domain(x)) throw DomainError(name() + ": point outside chart domain");
}

// flat7

const std::array<MultiIndex, 7>& FlatOrbifoldChart::monomials() {
    static const std::array<MultiIndex, 7> m{MultiIndex::parse("123"), MultiIndex::parse("145"), MultiIndex::parse("167"),
                                             MultiIndex::parse("246"), MultiIndex::parse("257"), MultiIndex::parse("347"),
                                             MultiIndex::parse("356")};
    return m;
}

const std::array<double, 7>& FlatOrbifoldChart::signs() {
    static const std::array<double, 7> s{1, 1, 1, 1, -1, -1, -1};
    return s;
}

Form FlatOrbifoldChart::eta(int a) { return Form::monomial(monomials().at(a), signs().at(a)); }

Form FlatOrbifoldChart::form_at(const Eigen::VectorXd& x) {
    if (x.size() != 7) throw ShapeError("flat7: point has wrong dimension");
    Form phi(3);
    for (int a = 0; a < 7; ++a) phi.coeff(monomials()[a]) = signs()[a] * x[a];
    return phi;
}

bool FlatOrbifoldChart::in_domain(const Eigen::VectorXd& x) const {
    if (x.size() != 7 || !(x.array() > 0.0).all()) return false;
    return is_positive(form_at(x));
}

double FlatOrbifoldChart::volume(const Eigen::VectorXd& x) const {
    require_domain(x);
    return std::cbrt(x.prod());
}

double FlatOrbifoldChart::volume_recipe(const Eigen::VectorXd& x) const {
    require_domain(x);
    return G2Frame(form_at(x)).volume_density();
}

HarmonicFrame FlatOrbifoldChart::harmonic_frame(const Eigen::VectorXd& x) const {
    require_domain(x);
    HarmonicFrame hf{G2Frame(form_at(x)), {}, {}};
    for (int a = 0; a < 7; ++a) {
        hf.etas.push_back(eta(a));
        hf.hs.push_back(hf.frame.solve_h(hf.etas.back()));
    }
    return hf;
}

Eigen::VectorXd FlatOrbifoldChart::slice_point(const Eigen::VectorXd& zeta) {
    if (zeta.size() != 7) throw ShapeError("flat7: slice parameter has wrong dimension");
    return (zeta.array() - zeta.mean()).exp().matrix();
}

// full35

bool FullTorusChart::in_domain(const Eigen::VectorXd& x) const {
    return x.size() == 35 && is_positive(Form(3, x));
}

double FullTorusChart::volume(const Eigen::VectorXd& x) const {
    if (x.size() != 35) throw ShapeError("full35: point has wrong dimension");
    // one eigen-decomposition instead of building the full frame
    const Endo7d B = positivity_matrix(Form(3, x));
    Eigen::SelfAdjointEigenSolver<Endo7d> es(B, Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues().minCoeff() > 1e-10 * B.norm())) throw DomainError("full35: point outside chart domain");
    return std::pow(es.eigenvalues().prod() / std::pow(6.0, 7), 1.0 / 9.0);
}

HarmonicFrame FullTorusChart::harmonic_frame(const Eigen::VectorXd& x) const {
    require_domain(x);
    HarmonicFrame hf{G2Frame(Form(3, x)), {}, {}};
    for (int a = 0; a < 35; ++a) {
        hf.etas.push_back(Form::monomial(monomial_at(3, a)));
        hf.hs.push_back(hf.frame.solve_h(hf.etas.back()));
    }
    return hf;
}

// t3k3

T3K3Chart::T3K3Chart(Spec spec) : dims_(spec.dims), Q_(std::move(spec.Q)) {
    int offset = 1;
    for (int i = 0; i < 3; ++i) {
        const int d = dims_[i];
        if (d < 2) throw ConfigError("t3k3: each dimension must be at least 2");
        if (Q_[i].size() == 0) {
            Q_[i] = -Eigen::MatrixXd::Identity(d, d);
            Q_[i](0, 0) = 1.0;
        }
        if (Q_[i].rows() != d || Q_[i].cols() != d) throw ConfigError("t3k3: form Q" + std::to_string(i + 1) + " has wrong shape");
        if ((Q_[i] - Q_[i].transpose()).cwiseAbs().maxCoeff() > 0.0)
            throw ConfigError("t3k3: form Q" + std::to_string(i + 1) + " is not symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q_[i], Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        const double tol = 1e-12 * ev.cwiseAbs().maxCoeff();
        const int pos = static_cast<int>((ev.array() > tol).count());
        const int neg = static_cast<int>((ev.array() < -tol).count());
        if (pos != 1 || neg != d - 1)
            throw ConfigError("t3k3: form Q" + std::to_string(i + 1) + " must have signature (1, " + std::to_string(d - 1) + ")");
        offsets_[i] = offset;
        offset += d;
    }
    dim_ = offset;

    if (spec.base.size() == 0) {
        base_ = Eigen::VectorXd::Zero(dim_);
        base_[0] = 1.0;
        for (int i = 0; i < 3; ++i) {
            // unit timelike vector along the positive eigendirection
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q_[i]);
            Eigen::VectorXd v = es.eigenvectors().col(dims_[i] - 1);
            v /= std::sqrt(v.dot(Q_[i] * v));
            if (v[0] < 0 || (v[0] == 0 && v.sum() < 0)) v = -v;
            base_.segment(offsets_[i], dims_[i]) = v;
        }
    } else {
        if (spec.base.size() != dim_) throw ConfigError("t3k3: base point has wrong dimension");
        base_ = spec.base;
        if (!(base_[0] > 0)) throw ConfigError("t3k3: base point outside chart domain");
        for (auto q : quadrics(base_))
            if (!(q > 0)) throw ConfigError("t3k3: base point outside chart domain");
    }
}

Eigen::VectorXd T3K3Chart::block(const Eigen::VectorXd& x, int i) const { return x.segment(offsets_.at(i), dims_.at(i)); }

std::array<double, 3> T3K3Chart::quadrics(const Eigen::VectorXd& x) const {
    std::array<double, 3> q{};
    for (int i = 0; i < 3; ++i) {
        const Eigen::VectorXd a = block(x, i);
        q[i] = a.dot(Q_[i] * a);
    }
    return q;
}

bool T3K3Chart::in_domain(const Eigen::VectorXd& x) const {
    if (x.size() != dim_ || !(x[0] > 0)) return false;
    for (int i = 0; i < 3; ++i) {
        const Eigen::VectorXd a = block(x, i);
        if (!(a.dot(Q_[i] * a) > 0)) return false;
        // same component of the cone as the base point
        if (!(a.dot(Q_[i] * block(base_, i)) > 0)) return false;
    }
    return true;
}

double T3K3Chart::volume(const Eigen::VectorXd& x) const {
    require_domain(x);
    const auto q = quadrics(x);
    return std::cbrt(x[0] * q[0] * q[1] * q[2]) / 2.0;
}

Eigen::VectorXd sample_near(const ModelFamily& family, const Eigen::VectorXd& base, double radius, std::uint64_t seed) {
    if (!family.in_domain(base)) throw DomainError(family.name() + ": base point outside chart domain");
    if (radius == 0.0) return base;
    Rng rng(seed);
    const Eigen::Index m = base.size();
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Eigen::VectorXd dir = rng.normal_vector(m);
        const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(m));
        const Eigen::VectorXd x = base + (r / dir.norm()) * dir;
        if (family.in_domain(x)) return x;
    }
    throw DomainError(family.name() + ": sampling radius too large, no in-domain point after 1000 draws");
}

std::unique_ptr<ModelFamily> make_model(const std::string& name) {
    if (name == "flat7") return std::make_unique<FlatOrbifoldChart>();
    if (name == "full35") return std::make_unique<FullTorusChart>();
    if (name == "t3k3") return std::make_unique<T3K3Chart>();
    throw ConfigError("unknown model \"" + name + "\"");
}

} // namespace g2lab
