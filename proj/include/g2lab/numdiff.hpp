#pragma once

// Central finite differences with Richardson extrapolation for symmetric
// derivative tensors of scalar functions on affine charts.

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <vector>

#include "g2lab/tensor.hpp"

namespace g2lab {

using ScalarFunction = std::function<double(const Eigen::VectorXd&)>;

struct FDScheme {
    /// Base step; coordinate a uses step * max(|x_a|, 1).
    double step;
    int richardson;

    FDScheme(double step, int richardson);

    /// Library defaults per derivative order.
    static FDScheme for_order(int order);
};

template <int Order>
struct FDResult {
    Eigen::Tensor<double, Order> value;
    /// Largest change between the last two extrapolation columns (0 without extrapolation).
    double error_estimate = 0.0;
    /// Only sorted multi-indices are differenced, so this is identically zero.
    double asymmetry = 0.0;
    std::size_t evaluations = 0;
};

namespace detail {

struct RawPartials {
    std::vector<std::vector<int>> indices;
    std::vector<double> values;
    double error_estimate;
    std::size_t evaluations;
};

RawPartials sorted_partials(const ScalarFunction& f, const Eigen::VectorXd& x, int order, const FDScheme& scheme);

} // namespace detail

/// Fully symmetric tensor of partial derivatives of the given order (1-4).
/// Throws DomainError naming the stencil point if f throws one.
template <int Order>
FDResult<Order> partial_tensor(const ScalarFunction& f, const Eigen::VectorXd& x, const FDScheme& scheme) {
    static_assert(Order >= 1 && Order <= 4);
    const auto raw = detail::sorted_partials(f, x, Order, scheme);
    const Eigen::Index m = x.size();
    FDResult<Order> out;
    std::array<Eigen::Index, Order> dims;
    dims.fill(m);
    out.value = Eigen::Tensor<double, Order>(dims);
    for (std::size_t k = 0; k < raw.indices.size(); ++k) {
        std::array<Eigen::Index, Order> idx;
        for (int r = 0; r < Order; ++r) idx[r] = raw.indices[k][r];
        do {
            out.value(idx) = raw.values[k];
        } while (std::next_permutation(idx.begin(), idx.end()));
    }
    out.error_estimate = raw.error_estimate;
    out.evaluations = raw.evaluations;
    return out;
}

Eigen::VectorXd gradient(const ScalarFunction& f, const Eigen::VectorXd& x, const FDScheme& scheme);
Eigen::MatrixXd hessian(const ScalarFunction& f, const Eigen::VectorXd& x, const FDScheme& scheme);

/// Mixed derivative d^k/dt_1..dt_k f(x + sum t_i v_i) by nested differencing in t.
double directional(const ScalarFunction& f, const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& directions,
                   const FDScheme& scheme);

/// Central derivative at t = 0 of a vector-valued curve, steps scheme.step / 2^j.
Eigen::VectorXd curve_derivative(const std::function<Eigen::VectorXd(double)>& f, const FDScheme& scheme);

/// Full contraction of a symmetric tensor with one vector per slot.
template <int Order>
double contract(const Eigen::Tensor<double, Order>& t, const std::vector<Eigen::VectorXd>& directions) {
    const Eigen::Index m = t.dimension(0);
    double sum = 0.0;
    std::array<Eigen::Index, Order> idx{};
    for (Eigen::Index flat = 0; flat < t.size(); ++flat) {
        Eigen::Index rest = flat;
        double w = 1.0;
        for (int r = 0; r < Order; ++r) {
            idx[r] = rest % m;
            rest /= m;
            w *= directions[r][idx[r]];
        }
        sum += w * t(idx);
    }
    return sum;
}

} // namespace g2lab
