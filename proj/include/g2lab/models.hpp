#pragma once

// Model moduli charts: affine coordinates x with an explicit volume function.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "g2lab/exterior.hpp"
#include "g2lab/g2.hpp"

namespace g2lab {

/// Frame at a chart point with the harmonic representatives of the coordinate
/// directions and their solve_h preimages.
struct HarmonicFrame {
    G2Frame frame;
    std::vector<Form> etas;
    std::vector<Endo7d> hs;
};

class ModelFamily {
public:
    virtual ~ModelFamily() = default;

    virtual std::string name() const = 0;
    virtual int dimension() const = 0;
    virtual bool in_domain(const Eigen::VectorXd& x) const = 0;
    /// Throws DomainError outside the chart.
    virtual double volume(const Eigen::VectorXd& x) const = 0;
    virtual Eigen::VectorXd base_point() const = 0;

    virtual bool has_pointwise_forms() const { return false; }
    /// Third-derivative closed form requires vanishing first Betti number.
    virtual bool b1_zero() const { return false; }
    virtual bool positive_definite_hessian() const { return false; }

    /// Only for families with pointwise forms.
    virtual HarmonicFrame harmonic_frame(const Eigen::VectorXd& x) const;

    double potential(const Eigen::VectorXd& x) const;

protected:
    void require_domain(const Eigen::VectorXd& x) const;
};

/// Span of the seven signed Fano monomials of the standard form.
class FlatOrbifoldChart final : public ModelFamily {
public:
    std::string name() const override { return "flat7"; }
    int dimension() const override { return 7; }
    bool in_domain(const Eigen::VectorXd& x) const override;
    /// Closed form (prod x)^{1/3}.
    double volume(const Eigen::VectorXd& x) const override;
    Eigen::VectorXd base_point() const override { return Eigen::VectorXd::Ones(7); }
    bool has_pointwise_forms() const override { return true; }
    bool b1_zero() const override { return true; }
    bool positive_definite_hessian() const override { return true; }
    HarmonicFrame harmonic_frame(const Eigen::VectorXd& x) const override;

    /// Volume through the positivity-matrix recipe, bypassing the closed form.
    double volume_recipe(const Eigen::VectorXd& x) const;

    static Form form_at(const Eigen::VectorXd& x);
    static const std::array<MultiIndex, 7>& monomials();
    static const std::array<double, 7>& signs();
    /// Signed monomial of coordinate a.
    static Form eta(int a);

    /// Unit-volume slice point exp(zeta) for zeta with zero sum.
    static Eigen::VectorXd slice_point(const Eigen::VectorXd& zeta);
};

/// All 35 coefficients of a 3-form on the flat 7-torus.
class FullTorusChart final : public ModelFamily {
public:
    std::string name() const override { return "full35"; }
    int dimension() const override { return 35; }
    bool in_domain(const Eigen::VectorXd& x) const override;
    double volume(const Eigen::VectorXd& x) const override;
    Eigen::VectorXd base_point() const override { return standard_phi().coeffs(); }
    bool has_pointwise_forms() const override { return true; }
    HarmonicFrame harmonic_frame(const Eigen::VectorXd& x) const override;
};

/// Cohomology-level product of a 3-torus with a K3 surface.
///
/// Coordinates are (x0, a1, a2, a3) with a_i in R^{d_i}; each Q_i is a
/// symmetric form of signature (1, d_i - 1) and a_i stays on the positive cone
/// component containing the base point.
class T3K3Chart final : public ModelFamily {
public:
    struct Spec {
        std::array<int, 3> dims{3, 3, 3};
        /// Empty entries default to diag(1, -1, ..., -1).
        std::array<Eigen::MatrixXd, 3> Q;
        /// Empty means x0 = 1 and a_i = first basis vector.
        Eigen::VectorXd base;
    };

    T3K3Chart() : T3K3Chart(Spec{}) {}
    explicit T3K3Chart(Spec spec);

    std::string name() const override { return "t3k3"; }
    int dimension() const override { return dim_; }
    bool in_domain(const Eigen::VectorXd& x) const override;
    double volume(const Eigen::VectorXd& x) const override;
    Eigen::VectorXd base_point() const override { return base_; }
    bool positive_definite_hessian() const override { return true; }

    const std::array<int, 3>& dims() const { return dims_; }
    const Eigen::MatrixXd& form(int i) const { return Q_.at(i); }
    Eigen::VectorXd block(const Eigen::VectorXd& x, int i) const;
    /// q_i = Q_i(a_i, a_i).
    std::array<double, 3> quadrics(const Eigen::VectorXd& x) const;

private:
    std::array<int, 3> dims_;
    std::array<Eigen::MatrixXd, 3> Q_;
    std::array<int, 3> offsets_;
    int dim_;
    Eigen::VectorXd base_;
};

/// Deterministic in-domain point uniformly drawn from the ball of the given
/// radius about base. Throws DomainError after 1000 rejected draws.
Eigen::VectorXd sample_near(const ModelFamily& family, const Eigen::VectorXd& base, double radius, std::uint64_t seed);

std::unique_ptr<ModelFamily> make_model(const std::string& name);

} // namespace g2lab
