#pragma once

// Test-side oracles built from first principles (determinants and
// permutation sums) rather than from the library's sign tables.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <numeric>
#include <vector>

#include "g2lab/exterior.hpp"
#include "g2lab/rng.hpp"

namespace oracle {

using g2lab::Form;

inline int permutation_sign(const std::vector<int>& p) {
    int inversions = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++inversions;
    return inversions % 2 ? -1 : 1;
}

inline double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

/// a(v_1, ..., v_k) = sum_I a_I det(V restricted to rows I).
inline double evaluate(const Form& a, const std::vector<Eigen::VectorXd>& vs) {
    const int k = a.degree();
    if (k == 0) return a.coeffs()[0];
    double sum = 0.0;
    const auto& masks = g2lab::monomial_masks(k);
    for (std::size_t i = 0; i < masks.size(); ++i) {
        const auto idx = g2lab::MultiIndex::from_mask(masks[i]).indices();
        Eigen::MatrixXd M(k, k);
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) M(r, c) = vs[c][idx[r]];
        sum += a.coeffs()[static_cast<Eigen::Index>(i)] * M.determinant();
    }
    return sum;
}

/// (a ^ b)(v_1..v_{p+q}) = 1/(p! q!) sum_sigma sgn(sigma) a(v_sigma..) b(v_sigma..).
inline double wedge_value(const Form& a, const Form& b, const std::vector<Eigen::VectorXd>& vs) {
    const int p = a.degree(), n = static_cast<int>(vs.size());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double sum = 0.0;
    do {
        std::vector<Eigen::VectorXd> left, right;
        for (int i = 0; i < n; ++i) (i < p ? left : right).push_back(vs[perm[i]]);
        sum += permutation_sign(perm) * evaluate(a, left) * evaluate(b, right);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum / (factorial(p) * factorial(n - p));
}

/// Euclidean star: *e^I = sgn(I, I^c) e^{I^c}, with the sign from the permutation (I, I^c).
inline Form euclidean_star(const Form& a) {
    const int k = a.degree();
    Form out(7 - k);
    const auto& masks = g2lab::monomial_masks(k);
    for (std::size_t i = 0; i < masks.size(); ++i) {
        const auto I = g2lab::MultiIndex::from_mask(masks[i]);
        std::vector<int> perm = I.indices();
        for (int j : I.complement().indices()) perm.push_back(j);
        out += (permutation_sign(perm) * a.coeffs()[static_cast<Eigen::Index>(i)]) * Form::monomial(I.complement());
    }
    return out;
}

/// Coefficients of A^* a on each sorted monomial, by evaluating on basis vectors.
inline Form pullback_by_evaluation(const Eigen::Matrix<double, 7, 7>& A, const Form& a) {
    const int k = a.degree();
    Form out(k);
    const auto& masks = g2lab::monomial_masks(k);
    for (std::size_t i = 0; i < masks.size(); ++i) {
        std::vector<Eigen::VectorXd> vs;
        for (int j : g2lab::MultiIndex::from_mask(masks[i]).indices()) vs.push_back(A.col(j));
        out.coeffs()[static_cast<Eigen::Index>(i)] = evaluate(a, vs);
    }
    return out;
}

inline Form random_form(g2lab::Rng& rng, int degree) {
    return Form(degree, rng.normal_vector(g2lab::binomial(7, degree)));
}

inline g2lab::Metric7d random_metric(g2lab::Rng& rng) {
    const g2lab::Endo7d S = 0.15 * g2lab::Endo7d(rng.normal_matrix(7, 7));
    return g2lab::Metric7d(g2lab::Endo7d((S + S.transpose()).exp()));
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline double form_diff(const Form& a, const Form& b) { return max_abs(a.coeffs() - b.coeffs()); }

} // namespace oracle
