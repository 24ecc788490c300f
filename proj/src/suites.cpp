#include "g2lab/suites.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>

#include "g2lab/period.hpp"
#include "g2lab/rng.hpp"

namespace g2lab {

JetSchemes SuiteOptions::jet_schemes() const {
    JetSchemes s;
    for (FDScheme* o : {&s.order1, &s.order2, &s.order3, &s.order4}) {
        if (fd_step) o->step = *fd_step;
        if (fd_richardson) o->richardson = *fd_richardson;
        *o = FDScheme(o->step, o->richardson);
    }
    return s;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"kernel", "g2", "flat7", "full35", "t3k3", "period"};
    return names;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

class Runner {
public:
    explicit Runner(const SuiteOptions& options) : options_(options) {}

    /// body receives an Rng seeded from (seed, id) and returns the max residual.
    void check(const std::string& id, const std::string& ref, double tol, int samples,
               const std::function<double(Rng&)>& body, bool scaled = true) {
        Rng rng(options_.seed ^ fnv1a(id));
        const auto start = std::chrono::steady_clock::now();
        double residual;
        std::string detail;
        try {
            residual = body(rng);
        } catch (const Error& e) {
            residual = std::nan("");
            detail = e.what();
        }
        CheckRecord r = make_record(id, ref, residual, scaled ? tol * options_.tol_scale : tol, samples);
        r.detail = detail;
        r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        records_.push_back(std::move(r));
    }

    const SuiteOptions& options() const { return options_; }
    std::vector<CheckRecord> take() { return std::move(records_); }

private:
    const SuiteOptions& options_;
    std::vector<CheckRecord> records_;
};

double scaled_error(double diff, double reference) { return diff / std::max(reference, 1.0); }

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double form_diff(const Form& a, const Form& b) { return max_abs(a.coeffs() - b.coeffs()); }

Form random_form(Rng& rng, int degree) { return Form(degree, rng.normal_vector(binomial(kDim, degree))); }

Endo7d random_endo(Rng& rng, double scale = 1.0) { return scale * Endo7d(rng.normal_matrix(7, 7)); }

Endo7d random_gl_plus(Rng& rng, double scale) {
    for (;;) {
        Endo7d A = Endo7d::Identity() + random_endo(rng, scale);
        if (A.determinant() > 0.1) return A;
    }
}

/// exp(S) for symmetric S keeps the condition number below e^{2 |S|}.
Metric7d random_metric(Rng& rng) {
    const Endo7d S = random_endo(rng, 0.15);
    return Metric7d(Endo7d((S + S.transpose()).exp()));
}

/// g-self-adjoint endomorphism g^{-1} S.
Endo7d random_symmetric(Rng& rng, const Metric7d& g) {
    const Endo7d S = random_endo(rng);
    return g.inverse() * (S + S.transpose()) / 2.0;
}

Endo7d random_antisymmetric(Rng& rng, const Metric7d& g) {
    const Endo7d S = random_endo(rng);
    return g.inverse() * (S - S.transpose()) / 2.0;
}

/// Pullback of phi_0 by exp(M); positive forms are exactly the GL+(7) orbit of phi_0.
Form random_positive_form(Rng& rng) { return pullback(Endo7d(random_endo(rng, 0.15).exp()), standard_phi()); }

Eigen::VectorXd form_curve_derivative(const std::function<Form(double)>& f, const FDScheme& scheme) {
    return curve_derivative([&](double t) { return Eigen::VectorXd(f(t).coeffs()); }, scheme);
}

Metric7d pulled_metric(const Metric7d& g, const Endo7d& A) { return Metric7d(Endo7d(A.transpose() * g.gram() * A)); }

/// Value of an alternating form on basis vectors e_{idx[0]}, ..., by sorting.
double evaluate_on_basis(const Form& a, const std::vector<int>& idx) {
    std::vector<int> s = idx;
    int sign = 1;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j + 1 < s.size() - i; ++j)
            if (s[j] > s[j + 1]) {
                std::swap(s[j], s[j + 1]);
                sign = -sign;
            } else if (s[j] == s[j + 1]) {
                return 0.0;
            }
    std::uint8_t mask = 0;
    for (int i : s) mask |= static_cast<std::uint8_t>(1u << i);
    return sign * a.coeff(MultiIndex::from_mask(mask));
}

/// (a ^ b)(e_I) by the alternation sum over all permutations of I.
double alternation_oracle(const Form& a, const Form& b, const std::vector<int>& I) {
    std::vector<int> perm(I.size());
    std::iota(perm.begin(), perm.end(), 0);
    const int p = a.degree();
    double sum = 0.0;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            for (std::size_t j = i + 1; j < perm.size(); ++j)
                if (perm[i] > perm[j]) ++inversions;
        std::vector<int> left, right;
        for (int k = 0; k < static_cast<int>(perm.size()); ++k) (k < p ? left : right).push_back(I[perm[k]]);
        sum += (inversions % 2 ? -1.0 : 1.0) * evaluate_on_basis(a, left) * evaluate_on_basis(b, right);
    } while (std::next_permutation(perm.begin(), perm.end()));
    double factorials = 1.0;
    for (int k = 2; k <= p; ++k) factorials *= k;
    for (int k = 2; k <= static_cast<int>(I.size()) - p; ++k) factorials *= k;
    return sum / factorials;
}

// kernel

void kernel_suite(Runner& run) {
    const FDScheme fd(1e-4, 1);
    const int draws = 100;

    run.check("kernel.wedge.alternation_oracle", "exterior product as the alternation of the tensor product", 1e-12, 20,
              [](Rng& rng) {
                  double worst = 0.0;
                  for (int s = 0; s < 20; ++s) {
                      const Form a = random_form(rng, 2), b = random_form(rng, 3);
                      const Form w = wedge(a, b);
                      for (std::uint8_t mask : monomial_masks(5)) {
                          const MultiIndex I = MultiIndex::from_mask(mask);
                          worst = std::max(worst, std::abs(w.coeff(I) - alternation_oracle(a, b, I.indices())));
                      }
                  }
                  return worst;
              });

    run.check("kernel.interior.leibniz", "interior product is an antiderivation", 1e-12, draws, [](Rng& rng) {
        double worst = 0.0;
        for (int s = 0; s < 100; ++s) {
            const int p = 1 + s % 3, q = 1 + (s / 3) % 3;
            const Form a = random_form(rng, p), b = random_form(rng, q);
            const Vector7d v = rng.normal_vector(7);
            const Form lhs = interior(v, wedge(a, b));
            const Form rhs = wedge(interior(v, a), b) + ((p % 2) ? -1.0 : 1.0) * wedge(a, interior(v, b));
            worst = std::max(worst, form_diff(lhs, rhs));
        }
        return worst;
    });

    run.check("kernel.delta.derivation", "delta_h is a derivation of degree 0", 1e-10, draws, [](Rng& rng) {
        double worst = 0.0;
        for (int s = 0; s < 100; ++s) {
            const int p = s % 4, q = (s / 4) % (8 - p);
            const Form a = random_form(rng, p), b = random_form(rng, std::min(q, 7 - p));
            const Endo7d h = random_endo(rng);
            const Form lhs = delta_action(h, wedge(a, b));
            const Form rhs = wedge(delta_action(h, a), b) + wedge(a, delta_action(h, b));
            worst = std::max(worst, scaled_error(form_diff(lhs, rhs), max_abs(lhs.coeffs())));
        }
        return worst;
    });

    run.check("kernel.delta.commutator", "commutator of delta maps is minus delta of the commutator", 1e-10, draws,
              [](Rng& rng) {
                  double worst = 0.0;
                  for (int s = 0; s < 100; ++s) {
                      const Form a = random_form(rng, s % 8);
                      const Endo7d h = random_endo(rng), h2 = random_endo(rng);
                      const Form lhs = delta_action(h, delta_action(h2, a)) - delta_action(h2, delta_action(h, a));
                      const Form rhs = -delta_action(Endo7d(h * h2 - h2 * h), a);
                      worst = std::max(worst, scaled_error(form_diff(lhs, rhs), max_abs(lhs.coeffs())));
                  }
                  return worst;
              });

    run.check("kernel.delta.adjointness", "delta_h inherits (anti-)self-adjointness of h", 1e-10, draws, [](Rng& rng) {
        double worst = 0.0;
        for (int s = 0; s < 100; ++s) {
            const Metric7d g = random_metric(rng);
            const int k = s % 8;
            const Form a = random_form(rng, k), b = random_form(rng, k);
            const Endo7d h = random_symmetric(rng, g), h2 = random_antisymmetric(rng, g);
            const double sym = lambda_inner(g, delta_action(h, a), b) - lambda_inner(g, a, delta_action(h, b));
            const double anti = lambda_inner(g, delta_action(h2, a), b) + lambda_inner(g, a, delta_action(h2, b));
            const double ref = std::abs(lambda_inner(g, delta_action(h, a), b));
            worst = std::max(worst, scaled_error(std::max(std::abs(sym), std::abs(anti)), ref));
        }
        return worst;
    });

    run.check("kernel.delta.pullback_fd", "delta_h as the derivative of pullback by exp(th)", 1e-6, draws,
              [&](Rng& rng) {
                  double worst = 0.0;
                  for (int s = 0; s < 100; ++s) {
                      const Form a = random_form(rng, s % 8);
                      const Endo7d h = random_endo(rng);
                      const Eigen::VectorXd d = form_curve_derivative(
                          [&](double t) { return pullback(Endo7d((t * h).exp()), a); }, fd);
                      const Eigen::VectorXd exact = delta_action(h, a).coeffs();
                      worst = std::max(worst, scaled_error(max_abs(d - exact), max_abs(exact)));
                  }
                  return worst;
              });

    run.check("kernel.first_variation.inner", "first variation of the induced inner product", 1e-6, draws,
              [&](Rng& rng) {
                  double worst = 0.0;
                  for (int s = 0; s < 100; ++s) {
                      const Metric7d g = random_metric(rng);
                      const Endo7d h = random_endo(rng, 0.5);
                      const int k = s % 8;
                      const Form a = random_form(rng, k), b = random_form(rng, k);
                      const Eigen::VectorXd d = curve_derivative(
                          [&](double t) {
                              return Eigen::VectorXd::Constant(1, lambda_inner(pulled_metric(g, Endo7d((t * h).exp())), a, b));
                          },
                          fd);
                      const double exact = -lambda_inner(g, delta_action(h, a), b) - lambda_inner(g, a, delta_action(h, b));
                      worst = std::max(worst, scaled_error(std::abs(d[0] - exact), std::abs(exact)));
                  }
                  return worst;
              });

    run.check("kernel.first_variation.star", "first variation of the Hodge star", 1e-6, draws, [&](Rng& rng) {
        double worst = 0.0;
        for (int s = 0; s < 100; ++s) {
            const Metric7d g = random_metric(rng);
            const Endo7d h = random_endo(rng, 0.5);
            const Form a = random_form(rng, s % 8);
            const Eigen::VectorXd d = form_curve_derivative(
                [&](double t) { return hodge_star(pulled_metric(g, Endo7d((t * h).exp())), a); }, fd);
            const Eigen::VectorXd exact = (delta_action(h, hodge_star(g, a)) - hodge_star(g, delta_action(h, a))).coeffs();
            worst = std::max(worst, scaled_error(max_abs(d - exact), max_abs(exact)));
        }
        return worst;
    });

    run.check("kernel.first_variation.volume", "first variation of the volume form", 1e-6, draws, [&](Rng& rng) {
        double worst = 0.0;
        for (int s = 0; s < 100; ++s) {
            const Metric7d g = random_metric(rng);
            const Endo7d h = random_endo(rng, 0.5);
            const Eigen::VectorXd d = curve_derivative(
                [&](double t) { return Eigen::VectorXd::Constant(1, pulled_metric(g, Endo7d((t * h).exp())).sqrt_det()); },
                fd);
            const double exact = h.trace() * g.sqrt_det();
            worst = std::max(worst, scaled_error(std::abs(d[0] - exact), std::abs(exact)));
        }
        return worst;
    });

    run.check("kernel.star.defining_identity", "w ^ *w' = <w, w'> vol", 1e-10, draws, [](Rng& rng) {
        double worst = 0.0;
        for (int s = 0; s < 100; ++s) {
            const Metric7d g = random_metric(rng);
            const int k = s % 8;
            const Form a = random_form(rng, k), b = random_form(rng, k);
            const double lhs = top_coefficient(wedge(a, hodge_star(g, b)));
            const double rhs = lambda_inner(g, a, b) * g.sqrt_det();
            worst = std::max(worst, scaled_error(std::abs(lhs - rhs), std::abs(rhs)));
        }
        return worst;
    });

    run.check("kernel.star.involution", "** = 1 in dimension 7", 1e-10, draws, [](Rng& rng) {
        double worst = 0.0;
        for (int s = 0; s < 100; ++s) {
            const Metric7d g = random_metric(rng);
            const Form a = random_form(rng, s % 8);
            worst = std::max(worst, scaled_error(form_diff(hodge_star(g, hodge_star(g, a)), a), max_abs(a.coeffs())));
        }
        return worst;
    });

    run.check("kernel.star.commutation", "trace-free self-adjoint h anticommutes with star, skew h commutes", 1e-10,
              draws, [](Rng& rng) {
                  double worst = 0.0;
                  for (int s = 0; s < 100; ++s) {
                      const Metric7d g = random_metric(rng);
                      Endo7d h = random_symmetric(rng, g);
                      h -= (h.trace() / 7.0) * Endo7d::Identity();
                      const Endo7d h2 = random_antisymmetric(rng, g);
                      const Form a = random_form(rng, s % 8);
                      const Form anti = delta_action(h, hodge_star(g, a)) + hodge_star(g, delta_action(h, a));
                      const Form comm = delta_action(h2, hodge_star(g, a)) - hodge_star(g, delta_action(h2, a));
                      const double ref = max_abs(delta_action(h, hodge_star(g, a)).coeffs());
                      worst = std::max(worst, scaled_error(std::max(max_abs(anti.coeffs()), max_abs(comm.coeffs())), ref));
                  }
                  return worst;
              });
}

// g2

void g2_suite(Runner& run) {
    const int draws = 50;

    run.check("g2.frame.standard_form", "metric and volume of the standard positive form", 1e-12, 1, [](Rng&) {
        const G2Frame fr(standard_phi());
        return std::max(max_abs(fr.metric().gram() - Endo7d::Identity()), std::abs(fr.volume_density() - 1.0));
    });

    run.check("g2.positivity.examples", "positivity of phi_0 and non-positivity of -phi_0 and e123", 0.0, 3, [](Rng&) {
        const bool ok = is_positive(standard_phi()) && !is_positive(-standard_phi()) &&
                        !is_positive(Form::monomial(MultiIndex::parse("123")));
        return ok ? 0.0 : 1.0;
    }, false);

    run.check("g2.frame.phi_norm", "|phi|^2 = 7 in the induced metric", 1e-10, draws, [](Rng& rng) {
        double worst = 0.0;
        for (int s = 0; s < 50; ++s) {
            const G2Frame fr(random_positive_form(rng));
            worst = std::max(worst, std::abs(fr.inner(fr.phi(), fr.phi()) - 7.0));
        }
        return worst;
    });

    run.check("g2.frame.phi_wedge_theta", "phi ^ Theta(phi) = 7 mu_phi", 1e-10, draws, [](Rng& rng) {
        double worst = 0.0;
        for (int s = 0; s < 50; ++s) {
            const G2Frame fr(random_positive_form(rng));
            worst = std::max(worst, std::abs(top_coefficient(wedge(fr.phi(), fr.theta())) - 7.0 * fr.volume_density()));
        }
        return worst;
    });

    run.check("g2.frame.equivariance", "metric and volume transform under pullback", 1e-9, draws, [](Rng& rng) {
        double worst = 0.0;
        for (int s = 0; s < 50; ++s) {
            const Form phi = random_positive_form(rng);
            const Endo7d A = random_gl_plus(rng, 0.3);
            const G2Frame fr(phi), pulled(pullback(A, phi));
            const Endo7d expect = A.transpose() * fr.metric().gram() * A;
            worst = std::max({worst, scaled_error(max_abs(pulled.metric().gram() - expect), max_abs(expect)),
                              std::abs(pulled.volume_density() - A.determinant() * fr.volume_density())});
        }
        return worst;
    });

    run.check("g2.projectors.algebra", "type projectors resolve the identity, are idempotent and self-adjoint", 1e-10,
              20, [](Rng& rng) {
                  double worst = 0.0;
                  for (int s = 0; s < 20; ++s) {
                      const G2Frame fr(random_positive_form(rng));
                      const Eigen::MatrixXd I35 = Eigen::MatrixXd::Identity(35, 35), I21 = Eigen::MatrixXd::Identity(21, 21);
                      worst = std::max(worst, max_abs(fr.P1() + fr.P7() + fr.P27() - I35));
                      worst = std::max(worst, max_abs(fr.Q7() + fr.Q14() - I21));
                      for (const Eigen::MatrixXd* P : {&fr.P1(), &fr.P7(), &fr.P27()}) {
                          worst = std::max(worst, max_abs(*P * *P - *P));
                          const Eigen::MatrixXd GP = fr.gram3() * *P;
                          worst = std::max(worst, max_abs(GP - GP.transpose()));
                      }
                      for (const Eigen::MatrixXd* P : {&fr.Q7(), &fr.Q14()}) {
                          worst = std::max(worst, max_abs(*P * *P - *P));
                          const Eigen::MatrixXd GP = fr.gram2() * *P;
                          worst = std::max(worst, max_abs(GP - GP.transpose()));
                      }
                      const std::array<std::pair<const Eigen::MatrixXd*, double>, 5> ranks{
                          {{&fr.P1(), 1}, {&fr.P7(), 7}, {&fr.P27(), 27}, {&fr.Q7(), 7}, {&fr.Q14(), 14}}};
                      for (const auto& [P, r] : ranks) worst = std::max(worst, std::abs(P->trace() - r));
                  }
                  return worst;
              });

    run.check("g2.projectors.fano_seven_part", "the Fano monomials have no 7-part at phi_0", 1e-12, 7, [](Rng&) {
        const G2Frame fr(standard_phi());
        double worst = 0.0;
        for (int a = 0; a < 7; ++a)
            worst = std::max(worst, max_abs(fr.project(FlatOrbifoldChart::eta(a), Component::L3_7).coeffs()));
        return worst;
    });

    run.check("g2.solve_h.scalar", "h = identity / 3 solves h . phi = phi", 1e-12, 1, [](Rng&) {
        const G2Frame fr(standard_phi());
        return max_abs(fr.solve_h(fr.phi()) - Endo7d::Identity() / 3.0);
    });

    run.check("g2.solve_h.round_trip", "unique h orthogonal to the 14-part with h . phi = eta", 1e-9, draws,
              [](Rng& rng) {
                  double worst = 0.0;
                  for (int s = 0; s < 50; ++s) {
                      const G2Frame fr(random_positive_form(rng));
                      Endo7d h0 = random_symmetric(rng, fr.metric());
                      if (s % 2) {
                          // add a 7-part: v _| phi read as a skew endomorphism through g
                          const Form w = interior(Vector7d(rng.normal_vector(7)), fr.phi());
                          h0 += fr.metric().inverse() * two_form_matrix(w);
                      }
                      worst = std::max(worst, max_abs(fr.solve_h(delta_action(h0, fr.phi())) - h0));
                  }
                  return worst;
              });

    run.check("g2.solve_h.self_adjoint", "no 7-part implies a self-adjoint solution", 1e-9, draws, [](Rng& rng) {
        double worst = 0.0;
        for (int s = 0; s < 50; ++s) {
            const G2Frame fr(random_positive_form(rng));
            const Form eta = random_form(rng, 3);
            const Form eta_s = eta - fr.project(eta, Component::L3_7);
            const Endo7d gh = fr.metric().gram() * fr.solve_h(eta_s);
            worst = std::max(worst, max_abs(gh - gh.transpose()));
        }
        return worst;
    });

    run.check("g2.kernel.fourteen", "the 14-dimensional kernel of h -> h . phi", 1e-12, 20, [](Rng& rng) {
        double worst = 0.0;
        for (int s = 0; s < 20; ++s) {
            const G2Frame fr(random_positive_form(rng));
            const std::vector<Endo7d> basis = fr.kernel_basis();
            Eigen::MatrixXd M(49, static_cast<Eigen::Index>(basis.size()));
            for (std::size_t i = 0; i < basis.size(); ++i) {
                worst = std::max(worst, max_abs(delta_action(basis[i], fr.phi()).coeffs()));
                M.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXd>(basis[i].data(), 49);
            }
            const Eigen::Index rank = Eigen::FullPivLU<Eigen::MatrixXd>(M).rank();
            worst = std::max(worst, std::abs(static_cast<double>(rank) - 14.0));
        }
        return worst;
    });

    run.check("g2.yukawa.full_symmetry", "<h3 h1 phi, h2 phi> is fully symmetric", 1e-10, 100, [](Rng& rng) {
        double worst = 0.0;
        for (int s = 0; s < 100; ++s) {
            const G2Frame fr(random_positive_form(rng));
            const std::array<Endo7d, 3> h{random_symmetric(rng, fr.metric()), random_symmetric(rng, fr.metric()),
                                          random_symmetric(rng, fr.metric())};
            std::array<int, 3> p{0, 1, 2};
            const auto value = [&](const std::array<int, 3>& q) {
                return fr.inner(delta_action(h[q[2]], delta_action(h[q[0]], fr.phi())), delta_action(h[q[1]], fr.phi()));
            };
            const double ref = value(p);
            // Cauchy-Schwarz bound of the pairing as the scale
            const Form a = delta_action(h[2], delta_action(h[0], fr.phi())), b = delta_action(h[1], fr.phi());
            const double scale = std::sqrt(fr.inner(a, a) * fr.inner(b, b));
            while (std::next_permutation(p.begin(), p.end()))
                worst = std::max(worst, std::abs(value(p) - ref) / scale);
        }
        return worst;
    });

    const FDScheme fd(1e-3, 2);
    run.check("g2.first_variation.theta", "first variation of Theta along phi + t eta", 1e-5, draws, [&](Rng& rng) {
        double worst = 0.0;
        for (int s = 0; s < 50; ++s) {
            const Form phi = random_positive_form(rng);
            const Form eta = random_form(rng, 3);
            const Eigen::VectorXd d = form_curve_derivative([&](double t) { return G2Frame(phi + t * eta).theta(); }, fd);
            const Eigen::VectorXd exact = G2Frame(phi).theta_first_variation(eta).coeffs();
            worst = std::max(worst, scaled_error(max_abs(d - exact), max_abs(exact)));
        }
        return worst;
    });

    run.check("g2.first_variation.metric_data", "first variations of inner product, star and volume along phi + t eta",
              1e-5, draws, [&](Rng& rng) {
                  double worst = 0.0;
                  for (int s = 0; s < 50; ++s) {
                      const Form phi = random_positive_form(rng);
                      const Form eta = random_form(rng, 3);
                      const G2Frame fr(phi);
                      const Endo7d h = fr.solve_h(eta);
                      const int k = s % 8;
                      const Form a = random_form(rng, k), b = random_form(rng, k);
                      const auto at = [&](double t) { return G2Frame(phi + t * eta); };
                      const Eigen::VectorXd d_inner = curve_derivative(
                          [&](double t) { return Eigen::VectorXd::Constant(1, at(t).inner(a, b)); }, fd);
                      const double inner_exact = -fr.inner(delta_action(h, a), b) - fr.inner(a, delta_action(h, b));
                      const Eigen::VectorXd d_star = form_curve_derivative([&](double t) { return at(t).star(a); }, fd);
                      const Eigen::VectorXd star_exact = (delta_action(h, fr.star(a)) - fr.star(delta_action(h, a))).coeffs();
                      const Eigen::VectorXd d_vol = curve_derivative(
                          [&](double t) { return Eigen::VectorXd::Constant(1, at(t).volume_density()); }, fd);
                      const double vol_exact = h.trace() * fr.volume_density();
                      worst = std::max({worst, scaled_error(std::abs(d_inner[0] - inner_exact), std::abs(inner_exact)),
                                        scaled_error(max_abs(d_star - star_exact), max_abs(star_exact)),
                                        scaled_error(std::abs(d_vol[0] - vol_exact), std::abs(vol_exact))});
                  }
                  return worst;
              });
}

// model suites

std::vector<Eigen::VectorXd> samples(const ModelFamily& family, Rng& rng, int count, double radius) {
    std::vector<Eigen::VectorXd> out;
    for (int i = 0; i < count; ++i) out.push_back(sample_near(family, family.base_point(), radius, rng.next()));
    return out;
}

/// Jet with the closed-form orders 1-3 substituted for the FD ones.
PotentialJet closed_jet(const ModelFamily& family, const Eigen::VectorXd& x) {
    PotentialJet j;
    j.x = x;
    j.F = family.potential(x);
    j.F1 = gradient_closed(family, x);
    j.F2 = hessian_closed(family, x);
    j.F3 = third_closed(family, x);
    j.max_order = 3;
    return j;
}

void hessian_model_checks(Runner& run, const ModelFamily& family, const std::string& tag) {
    const JetSchemes schemes = run.options().jet_schemes();

    run.check("fourth_derivative.residual." + tag, "fourth derivative of the potential in terms of the third", 1e-4, 20,
              [&](Rng& rng) {
                  double worst = 0.0;
                  for (const auto& x : samples(family, rng, 20, 0.3))
                      worst = std::max(worst, g2lab::max_abs<4>(e_residual(jet(family, x, schemes)).residual));
                  return worst;
              });

    run.check("euler.fd." + tag, "Euler identities x^k F_ak = -F_a and x^k F_abk = -2 G_ab", 1e-6, 20, [&](Rng& rng) {
        double worst = 0.0;
        for (const auto& x : samples(family, rng, 20, 0.3)) {
            const EulerReport e = euler_identities(jet(family, x, schemes, 3));
            worst = std::max({worst, e.gradient, e.hessian});
        }
        return worst;
    });

    run.check("nabla_xi.x_trace." + tag, "x-tracelessness of the covariant derivative of the Yukawa coupling", 1e-6, 20,
              [&](Rng& rng) {
                  double worst = 0.0;
                  for (const auto& x : samples(family, rng, 20, 0.3))
                      worst = std::max(worst, euler_identities(jet(family, x, schemes)).nabla_xi_trace);
                  return worst;
              });

    run.check("curvature.symmetries." + tag, "algebraic symmetries of the Shima curvature", 1e-8, 20, [&](Rng& rng) {
        double worst = 0.0;
        for (const auto& x : samples(family, rng, 20, 0.3)) {
            const PotentialJet j = jet(family, x, schemes, 3);
            worst = std::max(worst, curvature_symmetries(shima_curvature(j.F2, j.F3)).max());
        }
        return worst;
    });

    run.check("second_fundamental_form.identity." + tag, "covariant derivative identity for the chart map q = e^{-F/3} G",
              1e-4, 10, [&](Rng& rng) {
                  double worst = 0.0;
                  const FDScheme outer(1e-2, 2);
                  const auto pts = samples(family, rng, 10, 0.3);
                  for (std::size_t i = 0; i < pts.size(); ++i) {
                      const int m = family.dimension();
                      const int a = static_cast<int>(rng.next() % m), b = static_cast<int>(rng.next() % m);
                      worst = std::max(worst, sff_residual(family, pts[i], a, b, schemes, outer).identity);
                  }
                  return worst;
              });

    run.check("second_fundamental_form.normal." + tag, "totally geodesic image in the symmetric space", 1e-4, 10,
              [&](Rng& rng) {
                  double worst = 0.0;
                  const FDScheme outer(1e-2, 2);
                  const auto pts = samples(family, rng, 10, 0.3);
                  for (std::size_t i = 0; i < pts.size(); ++i) {
                      const int m = family.dimension();
                      const int a = static_cast<int>(rng.next() % m), b = static_cast<int>(rng.next() % m);
                      worst = std::max(worst, sff_residual(family, pts[i], a, b, schemes, outer).normal);
                  }
                  return worst;
              });
}

void flat7_suite(Runner& run) {
    const FlatOrbifoldChart chart;
    const JetSchemes schemes = run.options().jet_schemes();

    run.check("sampler.in_domain.flat7", "rejection sampler stays in the chart", 0.0, 1000, [&](Rng& rng) {
        int bad = 0;
        for (int i = 0; i < 1000; ++i)
            if (!chart.in_domain(sample_near(chart, chart.base_point(), 0.1, rng.next()))) ++bad;
        return static_cast<double>(bad);
    }, false);

    run.check("volume.closed_vs_recipe.flat7", "volume of the flat chart from the positivity recipe", 1e-10, 100,
              [&](Rng& rng) {
                  double worst = 0.0;
                  for (const auto& x : samples(chart, rng, 100, 0.5))
                      worst = std::max(worst, std::abs(chart.volume(x) - chart.volume_recipe(x)) / chart.volume(x));
                  return worst;
              });

    run.check("volume.scaling.flat7", "Vol(s x) = s^{7/3} Vol(x)", 1e-12, 20, [&](Rng& rng) {
        double worst = 0.0;
        for (const auto& x : samples(chart, rng, 20, 0.5)) {
            const double s = rng.uniform(0.5, 2.0);
            worst = std::max(worst, std::abs(chart.volume_recipe(s * x) / (std::pow(s, 7.0 / 3.0) * chart.volume_recipe(x)) - 1.0));
        }
        return worst;
    });

    run.check("potential.log_barrier.flat7", "F = -sum log x^a on the flat chart", 1e-12, 20, [&](Rng& rng) {
        double worst = 0.0;
        for (const auto& x : samples(chart, rng, 20, 0.5))
            worst = std::max(worst, std::abs(chart.potential(x) + x.array().log().sum()));
        return worst;
    });

    run.check("harmonic.no_seven_part.flat7", "chart monomials have no 7-part at any chart point", 1e-9, 20,
              [&](Rng& rng) {
                  double worst = 0.0;
                  for (const auto& x : samples(chart, rng, 20, 0.5)) {
                      const HarmonicFrame hf = chart.harmonic_frame(x);
                      for (const Form& eta : hf.etas)
                          worst = std::max(worst, max_abs(hf.frame.project(eta, Component::L3_7).coeffs()));
                  }
                  return worst;
              });

    run.check("harmonic.self_adjoint_h.flat7", "h_a are self-adjoint on the flat chart", 1e-9, 20, [&](Rng& rng) {
        double worst = 0.0;
        for (const auto& x : samples(chart, rng, 20, 0.5)) {
            const HarmonicFrame hf = chart.harmonic_frame(x);
            for (const Endo7d& h : hf.hs) {
                const Endo7d gh = hf.frame.metric().gram() * h;
                worst = std::max(worst, max_abs(gh - gh.transpose()));
            }
        }
        return worst;
    });

    run.check("harmonic.closure.flat7", "h_a . eta_b stays in the monomial span", 1e-9, 20, [&](Rng& rng) {
        double worst = 0.0;
        Eigen::MatrixXd span(35, 7);
        for (int a = 0; a < 7; ++a) span.col(a) = FlatOrbifoldChart::eta(a).coeffs();
        const Eigen::MatrixXd proj = span * (span.transpose() * span).inverse() * span.transpose();
        for (const auto& x : samples(chart, rng, 20, 0.5)) {
            const HarmonicFrame hf = chart.harmonic_frame(x);
            for (const Endo7d& h : hf.hs)
                for (const Form& eta : hf.etas) {
                    const Eigen::VectorXd v = delta_action(h, eta).coeffs();
                    worst = std::max(worst, max_abs(v - proj * v));
                }
        }
        return worst;
    });

    run.check("hessian.unit_point.flat7", "G = identity at x = (1, ..., 1)", 1e-6, 1, [&](Rng&) {
        const PotentialJet j = jet(chart, chart.base_point(), schemes, 2);
        return std::max(max_abs(j.F2 - Eigen::MatrixXd::Identity(7, 7)), max_abs(*j.F2_closed - Eigen::MatrixXd::Identity(7, 7)));
    });

    run.check("hessian.closed_vs_fd.flat7", "second derivative of the potential through the type decomposition", 1e-6, 20,
              [&](Rng& rng) {
                  double worst = 0.0;
                  for (const auto& x : samples(chart, rng, 20, 0.3)) {
                      const PotentialJet j = jet(chart, x, schemes, 2);
                      worst = std::max({worst, max_abs(j.F2 - *j.F2_closed), max_abs(j.F1 - *j.F1_closed)});
                  }
                  return worst;
              });

    run.check("third_derivative.closed_vs_fd.flat7", "third derivative of the potential as -2 <h_c eta_a, eta_b>", 1e-5,
              20, [&](Rng& rng) {
                  double worst = 0.0;
                  for (const auto& x : samples(chart, rng, 20, 0.3)) {
                      const PotentialJet j = jet(chart, x, schemes, 3);
                      worst = std::max(worst, max_abs_diff<3>(j.F3, *j.F3_closed));
                  }
                  return worst;
              });

    run.check("euler.closed.flat7", "Euler identities from the closed forms", 1e-8, 20, [&](Rng& rng) {
        double worst = 0.0;
        for (const auto& x : samples(chart, rng, 20, 0.5)) {
            const EulerReport e = euler_identities(closed_jet(chart, x));
            worst = std::max({worst, e.gradient, e.hessian});
        }
        return worst;
    });

    run.check("scaling_direction.norm.flat7", "G(x, x) = 7 at unit-volume points", 1e-10, 20, [&](Rng& rng) {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            Eigen::VectorXd zeta = 0.3 * rng.normal_vector(7);
            zeta.array() -= zeta.mean();
            const Eigen::VectorXd x = FlatOrbifoldChart::slice_point(zeta);
            worst = std::max(worst, std::abs(x.dot(hessian_closed(chart, x) * x) - 7.0));
        }
        return worst;
    });

    run.check("curvature.vanishes.flat7", "Shima curvature of the flat chart vanishes", 1e-6, 20, [&](Rng& rng) {
        double worst = 0.0;
        for (const auto& x : samples(chart, rng, 20, 0.3)) {
            const PotentialJet j = jet(chart, x, schemes, 3);
            worst = std::max(worst, g2lab::max_abs<4>(shima_curvature(j.F2, j.F3)));
        }
        return worst;
    });

    run.check("directional.dual_path.flat7", "nested and contracted mixed derivatives agree", 1e-6, 20, [&](Rng& rng) {
        double worst = 0.0;
        const ScalarFunction F = [&](const Eigen::VectorXd& y) { return chart.potential(y); };
        for (const auto& x : samples(chart, rng, 20, 0.3)) {
            const PotentialJet j = jet(chart, x, schemes, 3);
            const std::vector<Eigen::VectorXd> dirs{rng.normal_vector(7).normalized(), rng.normal_vector(7).normalized(),
                                                    rng.normal_vector(7).normalized()};
            const double nested = directional(F, x, dirs, FDScheme(2e-2, 2));
            worst = std::max(worst, std::abs(nested - contract<3>(j.F3, dirs)) / std::max(1.0, std::abs(nested)));
        }
        return worst;
    });

    hessian_model_checks(run, chart, "flat7");
}

void full35_suite(Runner& run) {
    const FullTorusChart chart;
    const JetSchemes schemes = run.options().jet_schemes();

    run.check("hessian.signature.full35", "signature (b3 - b1, b1) = (28, 7) of the volume Hessian", 0.0, 1, [&](Rng&) {
        const PotentialJet j = jet(chart, chart.base_point(), schemes, 2);
        double worst = 0.0;
        for (const Eigen::MatrixXd& H : {j.F2, *j.F2_closed}) {
            const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>((H + H.transpose()) / 2.0).eigenvalues();
            const double gap = 1e-6 * ev.cwiseAbs().maxCoeff();
            const auto pos = (ev.array() > gap).count(), neg = (ev.array() < -gap).count();
            worst = std::max(worst, static_cast<double>(std::abs(pos - 28) + std::abs(neg - 7)));
        }
        return worst;
    }, false);

    run.check("hessian.closed_vs_fd.full35", "second derivative with the sign flip on the 7-part", 1e-6, 20,
              [&](Rng& rng) {
                  double worst = 0.0;
                  for (const auto& x : samples(chart, rng, 20, 0.1)) {
                      const PotentialJet j = jet(chart, x, schemes, 2);
                      worst = std::max(worst, max_abs(j.F2 - *j.F2_closed));
                  }
                  return worst;
              });

    run.check("volume.pullback.full35", "Vol(A^* phi_0) = det A", 1e-10, 20, [&](Rng& rng) {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Endo7d A = random_gl_plus(rng, 0.2);
            worst = std::max(worst, std::abs(chart.volume(pullback(A, standard_phi()).coeffs()) / A.determinant() - 1.0));
        }
        return worst;
    });

    run.check("volume.restriction.full35", "the flat chart embeds in the full torus family", 1e-12, 20, [&](Rng& rng) {
        const FlatOrbifoldChart flat;
        double worst = 0.0;
        for (const auto& x : samples(flat, rng, 20, 0.5))
            worst = std::max(worst, std::abs(chart.volume(FlatOrbifoldChart::form_at(x).coeffs()) - flat.volume_recipe(x)));
        return worst;
    });
}

void t3k3_suite(Runner& run) {
    const T3K3Chart chart(run.options().t3k3);
    const JetSchemes schemes = run.options().jet_schemes();
    const int m = chart.dimension();

    run.check("potential.separability.t3k3", "F = -log x0 - sum log q_i + 3 log 2", 1e-10, 20, [&](Rng& rng) {
        double worst = 0.0;
        for (const auto& x : samples(chart, rng, 20, 0.3)) {
            const auto q = chart.quadrics(x);
            const double expect = -std::log(x[0]) - std::log(q[0]) - std::log(q[1]) - std::log(q[2]) + 3.0 * std::log(2.0);
            worst = std::max(worst, std::abs(chart.potential(x) - expect));
        }
        return worst;
    });

    run.check("volume.homogeneity.t3k3", "Vol(s x) = s^{7/3} Vol(x)", 1e-12, 20, [&](Rng& rng) {
        double worst = 0.0;
        for (const auto& x : samples(chart, rng, 20, 0.3)) {
            const double s = rng.uniform(0.5, 2.0);
            worst = std::max(worst, std::abs(chart.volume(s * x) / (std::pow(s, 7.0 / 3.0) * chart.volume(x)) - 1.0));
        }
        return worst;
    });

    run.check("hessian.positive_definite.t3k3", "the Hessian metric is positive definite", 0.0, 20, [&](Rng& rng) {
        double worst = 0.0;
        for (const auto& x : samples(chart, rng, 20, 0.3)) {
            const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(jet(chart, x, schemes, 2).F2).eigenvalues().minCoeff();
            if (!(lo > 0.0)) worst = std::max(worst, 1.0 + std::abs(lo));
        }
        return worst;
    }, false);

    run.check("curvature.nonzero.t3k3", "curvature bounded away from zero, reported as 1e-2 / max |R|", 1.0, 20,
              [&](Rng& rng) {
                  double smallest = std::numeric_limits<double>::infinity();
                  for (const auto& x : samples(chart, rng, 20, 0.3)) {
                      const PotentialJet j = jet(chart, x, schemes, 3);
                      smallest = std::min(smallest, g2lab::max_abs<4>(shima_curvature(j.F2, j.F3)));
                  }
                  return 1e-2 / smallest;
              }, false);

    run.check("curvature.sectional_nonpositive.t3k3", "nonpositive sectional curvature", 1e-6, 20, [&](Rng& rng) {
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& x : samples(chart, rng, 20, 0.3)) {
            const HessianGeometry geo = geometry(jet(chart, x, schemes, 3));
            for (int p = 0; p < 5; ++p)
                worst = std::max(worst, sectional_curvature(geo, rng.normal_vector(m), rng.normal_vector(m)));
        }
        return std::max(worst, 0.0);
    });

    run.check("curvature.parallel.t3k3", "local symmetry: covariant derivative of the curvature vanishes", 1e-3, 20,
              [&](Rng& rng) {
                  double worst = 0.0;
                  for (const auto& x : samples(chart, rng, 20, 0.3)) {
                      const HessianGeometry geo = geometry_with_nabla_r(chart, x, schemes, FDScheme(1e-2, 2));
                      worst = std::max(worst, g2lab::max_abs<5>(*geo.nabla_riemann));
                  }
                  return worst;
              });

    hessian_model_checks(run, chart, "t3k3");
}

// period

Eigen::MatrixXd slice_directions(const Eigen::VectorXd& x) {
    Eigen::MatrixXd dirs(7, 6);
    for (int k = 0; k < 6; ++k) {
        Eigen::VectorXd z = Eigen::VectorXd::Zero(7);
        z[k] = 1.0;
        z[6] = -1.0;
        dirs.col(k) = x.cwiseProduct(z);
    }
    return dirs;
}

Eigen::VectorXd random_slice_point(Rng& rng, double radius) {
    Eigen::VectorXd zeta = radius * rng.normal_vector(7);
    zeta.array() -= zeta.mean();
    return FlatOrbifoldChart::slice_point(zeta);
}

Eigen::MatrixXd random_invertible(Rng& rng, int n, double scale) {
    for (;;) {
        const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) + scale * rng.normal_matrix(n, n);
        if (std::abs(A.determinant()) > 0.1) return A;
    }
}

Form combination(const std::vector<Form>& forms, const Eigen::VectorXd& c) {
    Form out(forms.front().degree());
    for (std::size_t a = 0; a < forms.size(); ++a) out += c[static_cast<Eigen::Index>(a)] * forms[a];
    return out;
}

void period_suite(Runner& run) {
    const FlatOrbifoldChart chart;
    const SymplecticSpace space(6);
    const FDScheme fd(1e-3, 2);

    run.check("period.validate.phi_map", "phi-induced decompositions satisfy the defining properties", 1e-9, 30,
              [&](Rng& rng) {
                  double worst = 0.0;
                  for (const auto& x : samples(chart, rng, 30, 0.3))
                      worst = std::max(worst, validate_point(space, phi_map(chart, x)).max());
                  return worst;
              });

    run.check("period.validate.iota_swap", "iota exchanges H^(p) and H^(3-p)", 1e-9, 30, [&](Rng& rng) {
        double worst = 0.0;
        for (const auto& x : samples(chart, rng, 30, 0.3))
            worst = std::max(worst, validate_point(space, iota_swap(space, phi_map(chart, x))).max());
        return worst;
    });

    run.check("period.validate.detects_violation", "a point with H^(2) not negative fails validation", 0.0, 10,
              [&](Rng& rng) {
                  int missed = 0;
                  for (const auto& x : samples(chart, rng, 10, 0.3)) {
                      HodgePoint p = phi_map(chart, x);
                      std::swap(p.blocks[1], p.blocks[2]);
                      if (validate_point(space, p).definiteness < 1.0) ++missed;
                  }
                  return static_cast<double>(missed);
              }, false);

    run.check("period.validate.group_action", "GL(H^3) acts on the period domain", 1e-9, 30, [&](Rng& rng) {
        double worst = 0.0;
        for (const auto& x : samples(chart, rng, 30, 0.3))
            worst = std::max(worst, validate_point(space, act(space, random_invertible(rng, 7, 0.3), phi_map(chart, x))).max());
        return worst;
    });

    run.check("period.pair_iso.round_trip", "D as lines times inner products on H^3", 1e-9, 50, [&](Rng& rng) {
        double worst = 0.0;
        for (const auto& x : samples(chart, rng, 50, 0.3)) {
            const HodgePoint p = act(space, random_invertible(rng, 7, 0.3), phi_map(chart, x));
            const LineAndForm lq = pair_iso(space, p);
            worst = std::max(worst, point_distance(space, pair_iso_inverse(space, lq), p));
            const LineAndForm back = pair_iso(space, pair_iso_inverse(space, lq));
            worst = std::max({worst, max_abs(back.line - lq.line), scaled_error(max_abs(back.q - lq.q), max_abs(lq.q))});
        }
        return worst;
    });

    run.check("period.pair_iso.equivariance", "pair_iso(A . H) = (A l, A^{-T} q A^{-1})", 1e-9, 30, [&](Rng& rng) {
        double worst = 0.0;
        for (const auto& x : samples(chart, rng, 30, 0.3)) {
            const HodgePoint p = phi_map(chart, x);
            const Eigen::MatrixXd A = random_invertible(rng, 7, 0.3);
            const LineAndForm lq = pair_iso(space, p), moved = pair_iso(space, act(space, A, p));
            const Eigen::VectorXd l = (A * lq.line).normalized();
            const Eigen::MatrixXd Ainv = A.inverse();
            const Eigen::MatrixXd q = Ainv.transpose() * lq.q * Ainv;
            worst = std::max({worst, 1.0 - std::abs(l.dot(moved.line)), scaled_error(max_abs(moved.q - q), max_abs(q))});
        }
        return worst;
    });

    run.check("period.pair_iso.phi_line", "the line of a phi-induced point is spanned by [phi]", 1e-12, 30,
              [&](Rng& rng) {
                  double worst = 0.0;
                  for (const auto& x : samples(chart, rng, 30, 0.3))
                      worst = std::max(worst, 1.0 - std::abs(pair_iso(space, phi_map(chart, x)).line.dot(x.normalized())));
                  return worst;
              });

    run.check("period.pair_iso.l2_gram", "q equals the L2 Gram matrix of the harmonic basis and e^{-F/3} G", 1e-9, 30,
              [&](Rng& rng) {
                  double worst = 0.0;
                  for (const auto& x : samples(chart, rng, 30, 0.3)) {
                      const HarmonicFrame hf = chart.harmonic_frame(x);
                      Eigen::MatrixXd gram(7, 7);
                      for (int a = 0; a < 7; ++a)
                          for (int b = 0; b < 7; ++b) gram(a, b) = hf.frame.inner(hf.etas[a], hf.etas[b]) * chart.volume(x);
                      const Eigen::MatrixXd chart_q = std::exp(-chart.potential(x) / 3.0) * hessian_closed(chart, x);
                      const Eigen::MatrixXd q = pair_iso(space, phi_map(chart, x)).q;
                      worst = std::max({worst, scaled_error(max_abs(q - gram), max_abs(gram)),
                                        scaled_error(max_abs(q - chart_q), max_abs(gram))});
                  }
                  return worst;
              });

    run.check("period.iota_norm.fourteen", "Q(iota w, w) = 14 for w = [phi] + [Theta] at unit volume", 1e-9, 30,
              [&](Rng& rng) {
                  double worst = 0.0;
                  for (int i = 0; i < 30; ++i) {
                      const Eigen::VectorXd w = phi_map(chart, random_slice_point(rng, 0.3)).H(3).col(0);
                      worst = std::max(worst, std::abs(space.iota_pairing(w, w) - 14.0));
                  }
                  return worst;
              });

    run.check("period.standard_basis.properties", "standard basis: q-orthonormal, dual, adapted to H^(3)", 1e-10, 30,
              [&](Rng& rng) {
                  double worst = 0.0;
                  for (const auto& x : samples(chart, rng, 30, 0.3)) {
                      const HodgePoint p = phi_map(chart, x);
                      const LineAndForm lq = pair_iso(space, p);
                      const StandardBasis sb = standard_basis(space, p);
                      worst = std::max(worst, max_abs(sb.U.transpose() * lq.q * sb.U - Eigen::MatrixXd::Identity(7, 7)));
                      worst = std::max(worst, max_abs(sb.U.transpose() * sb.V - Eigen::MatrixXd::Identity(7, 7)));
                      worst = std::max(worst, 1.0 - std::abs(sb.U.col(0).normalized().dot(lq.line)));
                      HodgePoint h3{{p.H(0), p.H(1), p.H(2), space.embed_h3(sb.U.col(0)) + space.embed_h4(sb.V.col(0))}};
                      worst = std::max(worst, point_distance(space, h3, p));
                  }
                  return worst;
              });

    run.check("period.metric.basis_invariance", "g_D and the tangent action do not depend on the standard basis", 1e-10,
              20, [&](Rng& rng) {
                  double worst = 0.0;
                  for (const auto& x : samples(chart, rng, 20, 0.3)) {
                      const HodgePoint p = phi_map(chart, x);
                      const StandardBasis sb = standard_basis(space, p);
                      const Eigen::MatrixXd R6 = Eigen::HouseholderQR<Eigen::MatrixXd>(rng.normal_matrix(6, 6)).householderQ();
                      Eigen::MatrixXd R = Eigen::MatrixXd::Identity(7, 7);
                      R.bottomRightCorner(6, 6) = R6;
                      const StandardBasis sb2{sb.U * R, sb.V * R};
                      const TangentRep xi = normalized_tangent(rng.normal_matrix(7, 7)), xi2 = normalized_tangent(rng.normal_matrix(7, 7));
                      const TangentRep r1{R.transpose() * xi.a * R}, r2{R.transpose() * xi2.a * R};
                      worst = std::max(worst, std::abs(metric_gD(xi, xi2) - metric_gD(r1, r2)));
                      worst = std::max(worst, max_abs(tangent_action(sb, xi) - tangent_action(sb2, r1)));
                  }
                  return worst;
              });

    run.check("period.metric.fibration", "vertical and horizontal vectors are g_D-orthogonal", 1e-14, 100, [&](Rng& rng) {
        double worst = 0.0;
        const HodgePoint p = phi_map(chart, chart.base_point());
        const StandardBasis sb = standard_basis(space, p);
        for (int i = 0; i < 100; ++i) {
            const TangentRep xi = normalized_tangent(rng.normal_matrix(7, 7));
            const TangentSplit s = classify_tangent(space, p, sb, xi);
            const TangentRep v{s.vertical}, h{s.line + s.transverse};
            worst = std::max(worst, std::abs(metric_gD(v, h)));
        }
        return worst;
    });

    run.check("period.tangent.block_criterion", "horizontality and transversality via the block maps", 1e-10, 30,
              [&](Rng& rng) {
                  double worst = 0.0;
                  for (const auto& x : samples(chart, rng, 30, 0.3)) {
                      const HodgePoint p = phi_map(chart, x);
                      const StandardBasis sb = standard_basis(space, p);
                      Eigen::MatrixXd S = rng.normal_matrix(7, 7);
                      S = (S + S.transpose()).eval();
                      S(0, 0) = 0.0;
                      const TangentSplit t = classify_tangent(space, p, sb, TangentRep{S});
                      worst = std::max({worst, t.block_horizontal_residual, t.block_transverse_residual});
                      if (!t.horizontal || !t.is_transverse) worst = std::max(worst, 1.0);
                      S(0, 0) = 1.0;
                      const TangentSplit l = classify_tangent(space, p, sb, TangentRep{S});
                      worst = std::max(worst, l.block_horizontal_residual);
                      if (l.is_transverse || l.block_transverse_residual < 1e-3) worst = std::max(worst, 1.0);
                      Eigen::MatrixXd V = Eigen::MatrixXd::Zero(7, 7);
                      V.row(0).tail(6) = rng.normal_vector(6).transpose();
                      V.col(0).tail(6) = -V.row(0).tail(6).transpose();
                      const TangentSplit v = classify_tangent(space, p, sb, TangentRep{V});
                      if (v.horizontal || v.block_horizontal_residual < 1e-3) worst = std::max(worst, 1.0);
                  }
                  return worst;
              });

    run.check("period.dphi.horizontal", "the immersion into D is horizontal", 1e-6, 20, [&](Rng& rng) {
        double worst = 0.0;
        for (const auto& x : samples(chart, rng, 20, 0.3)) {
            const TangentRep xi = dphi(chart, x, rng.normal_vector(7), fd);
            worst = std::max(worst, classify_tangent(space, phi_map(chart, x), standard_basis(space, phi_map(chart, x)), xi)
                                        .horizontal_residual / std::max(1.0, max_abs(xi.a)));
        }
        return worst;
    });

    run.check("period.dphi.transverse", "the unit-volume slice maps transversally", 1e-6, 20, [&](Rng& rng) {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Eigen::VectorXd x = random_slice_point(rng, 0.3);
            const TangentRep xi = dphi(chart, x, slice_directions(x) * rng.normal_vector(6), fd);
            worst = std::max(worst, classify_tangent(space, phi_map(chart, x), standard_basis(space, phi_map(chart, x)), xi)
                                        .transverse_residual / std::max(1.0, max_abs(xi.a)));
        }
        return worst;
    });

    run.check("period.differential.closed_forms", "closed forms of the three block differentials", 1e-5, 20,
              [&](Rng& rng) {
                  double worst = 0.0;
                  for (int i = 0; i < 20; ++i) {
                      const Eigen::VectorXd x = random_slice_point(rng, 0.3);
                      const Eigen::VectorXd v = slice_directions(x) * rng.normal_vector(6);
                      const HarmonicFrame hf = chart.harmonic_frame(x);
                      const G2Frame& fr = hf.frame;
                      const Form eta = combination(hf.etas, v);
                      const Endo7d h = fr.solve_h(eta);
                      const std::vector<Form> basis = harmonic_27_basis(hf);
                      const Eigen::VectorXd phi3 = h_vector(eta, -fr.star(eta));
                      worst = std::max(worst, max_abs(dphi_block(chart, x, v, 3, fd).col(0) - phi3));
                      const Eigen::MatrixXd fd2 = dphi_block(chart, x, v, 2, fd), fd1 = dphi_block(chart, x, v, 1, fd);
                      for (std::size_t k = 0; k < basis.size(); ++k) {
                          const Form p27 = fr.project(delta_action(h, basis[k]), Component::L3_27);
                          const Eigen::VectorXd phi2 = h_vector(p27, fr.star(p27));
                          const Eigen::VectorXd phi1 = (fr.inner(basis[k], eta) / 7.0) * h_vector(fr.phi(), -fr.theta());
                          const auto col = static_cast<Eigen::Index>(k);
                          worst = std::max({worst, max_abs(fd2.col(col) - phi2), max_abs(fd1.col(col) - phi1)});
                      }
                  }
                  return worst;
              });

    // Pullback checks share one set of slice tangents per point.
    struct SliceData {
        HodgePoint point;
        StandardBasis basis;
        std::vector<TangentRep> tangents;
        Eigen::MatrixXd G;
        Tensor3 xi;
    };
    const auto slice_data = [&](Rng& rng, int count) {
        std::vector<SliceData> out;
        for (int i = 0; i < count; ++i) {
            const Eigen::VectorXd x = random_slice_point(rng, 0.3);
            const Eigen::MatrixXd dirs = slice_directions(x);
            SliceData d{phi_map(chart, x), {}, {}, {}, {}};
            d.basis = standard_basis(space, d.point);
            for (int k = 0; k < 6; ++k) d.tangents.push_back(dphi(chart, x, dirs.col(k), fd));
            d.G = dirs.transpose() * hessian_closed(chart, x) * dirs;
            const Tensor3 F3 = third_closed(chart, x);
            d.xi = Tensor3(6, 6, 6);
            for (int a = 0; a < 6; ++a)
                for (int b = 0; b < 6; ++b)
                    for (int c = 0; c < 6; ++c)
                        d.xi(a, b, c) = 0.5 * contract<3>(F3, {dirs.col(a), dirs.col(b), dirs.col(c)});
            out.push_back(std::move(d));
        }
        return out;
    };

    run.check("period.pullback.metric", "G_1 = 7 Phi^* h_D on the unit-volume slice", 1e-5, 30, [&](Rng& rng) {
        double worst = 0.0;
        for (const SliceData& d : slice_data(rng, 30))
            for (int a = 0; a < 6; ++a)
                for (int b = 0; b < 6; ++b)
                    worst = std::max(worst, std::abs(7.0 * h_D(space, d.point, d.basis, d.tangents[a], d.tangents[b]) - d.G(a, b)));
        return worst;
    });

    run.check("period.pullback.cubic", "Xi_1 = 7 Phi^* Xi_D on the unit-volume slice", 1e-4, 30, [&](Rng& rng) {
        double worst = 0.0;
        for (const SliceData& d : slice_data(rng, 30))
            for (int a = 0; a < 6; ++a)
                for (int b = 0; b < 6; ++b)
                    for (int c = 0; c < 6; ++c)
                        worst = std::max(worst, std::abs(7.0 * xi_D(space, d.point, d.basis, d.tangents[a], d.tangents[b],
                                                                     d.tangents[c]) - d.xi(a, b, c)));
        return worst;
    });

    run.check("period.cubic.image_symmetry", "Xi_D is symmetric on integral elements", 1e-6, 10, [&](Rng& rng) {
        double worst = 0.0;
        for (const SliceData& d : slice_data(rng, 10))
            for (int a = 0; a < 6; ++a)
                for (int b = 0; b < 6; ++b)
                    for (int c = 0; c < 6; ++c) {
                        std::array<int, 3> p{a, b, c};
                        const auto value = [&](const std::array<int, 3>& q) {
                            return xi_D(space, d.point, d.basis, d.tangents[q[0]], d.tangents[q[1]], d.tangents[q[2]]);
                        };
                        const double ref = value(p);
                        std::sort(p.begin(), p.end());
                        do worst = std::max(worst, std::abs(value(p) - ref));
                        while (std::next_permutation(p.begin(), p.end()));
                    }
        return worst;
    });

    run.check("period.dimension_audit", "dim D = dim GL(n+1) - dim O(n) = 34", 0.0, 10, [&](Rng& rng) {
        double worst = 0.0;
        for (const auto& x : samples(chart, rng, 10, 0.3)) {
            const HodgePoint p = phi_map(chart, x);
            const LineAndForm lq = pair_iso(space, p);
            const auto packed = [&](const Eigen::MatrixXd& A) {
                LineAndForm m = pair_iso(space, act(space, A, p));
                if (m.line.dot(lq.line) < 0) m.line = -m.line;
                Eigen::VectorXd v(7 + 28);
                v.head(7) = m.line;
                int k = 7;
                for (int i = 0; i < 7; ++i)
                    for (int j = i; j < 7; ++j) v[k++] = m.q(i, j);
                return v;
            };
            Eigen::MatrixXd J(35, 49);
            const double t = 1e-5;
            for (int e = 0; e < 49; ++e) {
                Eigen::MatrixXd E = Eigen::MatrixXd::Zero(7, 7);
                E(e % 7, e / 7) = t;
                J.col(e) = (packed(Eigen::MatrixXd(E.exp())) - packed(Eigen::MatrixXd((-E).exp()))) / (2 * t);
            }
            const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(J).singularValues();
            const auto rank = (sv.array() > 1e-6 * sv[0]).count();
            worst = std::max(worst, std::abs(static_cast<double>(rank) - 34.0));
        }
        return worst;
    }, false);

    const auto slice_curve = [&](const Eigen::VectorXd& zeta, const Eigen::VectorXd& dz) {
        return [&chart, zeta, dz](double t) {
            return Eigen::VectorXd(phi_map(chart, FlatOrbifoldChart::slice_point(zeta + t * dz)).H(3).col(0));
        };
    };
    const auto random_zero_sum = [](Rng& rng, double scale) {
        Eigen::VectorXd z = scale * rng.normal_vector(7);
        z.array() -= z.mean();
        return z;
    };

    run.check("period.contact.legendrian", "the line component is Legendrian for the contact system", 1e-6, 20,
              [&](Rng& rng) {
                  double worst = 0.0;
                  for (int i = 0; i < 20; ++i) {
                      const Eigen::VectorXd zeta = random_zero_sum(rng, 0.3), dz = random_zero_sum(rng, 1.0);
                      const auto curve = slice_curve(zeta, dz);
                      worst = std::max(worst, std::abs(contact_alpha(space, curve(0.0), curve_derivative(curve, fd))));
                  }
                  return worst;
              });

    run.check("period.contact.isotropy", "d alpha vanishes on pairs of Legendrian velocities", 1e-6, 20, [&](Rng& rng) {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Eigen::VectorXd zeta = random_zero_sum(rng, 0.3);
            const auto c1 = slice_curve(zeta, random_zero_sum(rng, 1.0)), c2 = slice_curve(zeta, random_zero_sum(rng, 1.0));
            worst = std::max(worst, std::abs(contact_dalpha(space, c1(0.0), curve_derivative(c1, fd), curve_derivative(c2, fd))));
        }
        return worst;
    });

    run.check("period.s2plus.geodesic", "one-parameter subgroups are geodesics of the symmetric metric", 1e-6, 20,
              [&](Rng& rng) {
                  double worst = 0.0;
                  for (int i = 0; i < 20; ++i) {
                      const Eigen::MatrixXd B = random_invertible(rng, 7, 0.3);
                      const Eigen::MatrixXd q0 = B.transpose() * B;
                      Eigen::MatrixXd S = 0.5 * rng.normal_matrix(7, 7);
                      S = (S + S.transpose()).eval();
                      const Eigen::MatrixXd r = q0.sqrt();
                      const auto qdot = [&](double t) {
                          const Eigen::MatrixXd v = r * S * Eigen::MatrixXd((t * S).exp()) * r;
                          return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), 49));
                      };
                      const Eigen::VectorXd qdd = curve_derivative(qdot, fd);
                      const Eigen::VectorXd v0 = qdot(0.0);
                      const Eigen::Map<const Eigen::MatrixXd> qd(v0.data(), 7, 7), acc(qdd.data(), 7, 7);
                      worst = std::max(worst, max_abs(acc + s2plus_covariant(q0, qd, qd)) / std::max(1.0, max_abs(acc)));
                  }
                  return worst;
              });
}

} // namespace

std::vector<CheckRecord> run_suite(const std::string& name, const SuiteOptions& options) {
    Runner run(options);
    if (name == "kernel") kernel_suite(run);
    else if (name == "g2") g2_suite(run);
    else if (name == "flat7") flat7_suite(run);
    else if (name == "full35") full35_suite(run);
    else if (name == "t3k3") t3k3_suite(run);
    else if (name == "period") period_suite(run);
    else throw ConfigError("unknown suite '" + name + "'");
    return run.take();
}

} // namespace g2lab
