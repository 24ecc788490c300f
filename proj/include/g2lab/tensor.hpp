#pragma once

// Dense tensors of rank 3-5 used for potential jets and curvature.

#include <Eigen/Dense>
#include <unsupported/Eigen/CXX11/Tensor>

#include <algorithm>
#include <array>
#include <cmath>

namespace g2lab {

using Tensor3 = Eigen::Tensor<double, 3>;
using Tensor4 = Eigen::Tensor<double, 4>;
using Tensor5 = Eigen::Tensor<double, 5>;

template <int Rank>
double max_abs(const Eigen::Tensor<double, Rank>& t) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < t.size(); ++i) m = std::max(m, std::abs(t.data()[i]));
    return m;
}

template <int Rank>
double max_abs_diff(const Eigen::Tensor<double, Rank>& a, const Eigen::Tensor<double, Rank>& b) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

/// Largest deviation of t from its value under any index permutation.
template <int Rank>
double asymmetry(const Eigen::Tensor<double, Rank>& t) {
    const Eigen::Index m = t.dimension(0);
    std::array<Eigen::Index, Rank> idx{};
    double worst = 0.0;
    for (Eigen::Index flat = 0; flat < t.size(); ++flat) {
        Eigen::Index rest = flat;
        for (int r = 0; r < Rank; ++r) {
            idx[r] = rest % m;
            rest /= m;
        }
        const double v = t(idx);
        auto perm = idx;
        std::sort(perm.begin(), perm.end());
        do {
            worst = std::max(worst, std::abs(t(perm) - v));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return worst;
}

/// Contracts the last index of t with v.
inline Eigen::MatrixXd contract_last(const Tensor3& t, const Eigen::VectorXd& v) {
    const Eigen::Index m = t.dimension(0);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b)
            for (Eigen::Index k = 0; k < m; ++k) out(a, b) += t(a, b, k) * v[k];
    return out;
}

inline Tensor3 contract_last(const Tensor4& t, const Eigen::VectorXd& v) {
    const Eigen::Index m = t.dimension(0);
    Tensor3 out(m, m, m);
    out.setZero();
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b)
            for (Eigen::Index c = 0; c < m; ++c)
                for (Eigen::Index k = 0; k < m; ++k) out(a, b, c) += t(a, b, c, k) * v[k];
    return out;
}

/// Slice t(., ., k) as a matrix.
inline Eigen::MatrixXd slice_last(const Tensor3& t, Eigen::Index k) {
    const Eigen::Index m = t.dimension(0);
    Eigen::MatrixXd out(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b) out(a, b) = t(a, b, k);
    return out;
}

} // namespace g2lab
