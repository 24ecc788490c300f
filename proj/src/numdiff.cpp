#include "g2lab/numdiff.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "g2lab/error.hpp"

namespace g2lab {

namespace {

using Stencil = std::vector<std::pair<int, double>>;

// Second-order central stencils, unscaled by the step power.
const Stencil& central_stencil(int order) {
    static const std::array<Stencil, 5> table{
        Stencil{{0, 1.0}},
        Stencil{{-1, -0.5}, {1, 0.5}},
        Stencil{{-1, 1.0}, {0, -2.0}, {1, 1.0}},
        Stencil{{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}},
        Stencil{{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}},
    };
    return table.at(order);
}

std::string format_point(const Eigen::VectorXd& p) {
    std::ostringstream os;
    os.precision(17);
    os << '[';
    for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ']';
    return os.str();
}

double evaluate(const ScalarFunction& f, const Eigen::VectorXd& p) {
    try {
        return f(p);
    } catch (const DomainError& e) {
        throw DomainError("stencil left the domain at x = " + format_point(p) + " (" + e.what() + ")");
    }
}

void sorted_multi_indices(int m, int order, std::vector<int>& current, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(current.size()) == order) {
        out.push_back(current);
        return;
    }
    const int start = current.empty() ? 0 : current.back();
    for (int i = start; i < m; ++i) {
        current.push_back(i);
        sorted_multi_indices(m, order, current, out);
        current.pop_back();
    }
}

// Richardson tableau over rows of estimates at steps h, h/2, h/4, ...
std::pair<Eigen::VectorXd, double> extrapolate(std::vector<Eigen::VectorXd> rows) {
    const int levels = static_cast<int>(rows.size()) - 1;
    double estimate = 0.0;
    for (int i = 1; i <= levels; ++i) {
        const double w = std::pow(4.0, i);
        std::vector<Eigen::VectorXd> next;
        for (std::size_t j = 0; j + 1 < rows.size(); ++j) next.push_back((w * rows[j + 1] - rows[j]) / (w - 1.0));
        if (i == levels) estimate = (next[0] - rows[1]).cwiseAbs().maxCoeff();
        rows = std::move(next);
    }
    return {rows[0], estimate};
}

} // namespace

FDScheme::FDScheme(double step_, int richardson_) : step(step_), richardson(richardson_) {
    if (!(step > 0.0)) throw ConfigError("finite-difference step must be positive");
    if (richardson < 0 || richardson > 3) throw ConfigError("Richardson levels must be in 0..3");
}

FDScheme FDScheme::for_order(int order) {
    if (order <= 2) return FDScheme(1e-2, 2);
    if (order == 3) return FDScheme(1e-1, 3);
    return FDScheme(8e-2, 3);
}

namespace detail {

RawPartials sorted_partials(const ScalarFunction& f, const Eigen::VectorXd& x, int order, const FDScheme& scheme) {
    if (order < 1 || order > 4) throw ShapeError("derivative order must be 1..4");
    const int m = static_cast<int>(x.size());
    RawPartials raw;
    std::vector<int> current;
    sorted_multi_indices(m, order, current, raw.indices);
    raw.evaluations = 0;

    std::vector<Eigen::VectorXd> rows;
    for (int level = 0; level <= scheme.richardson; ++level) {
        const double s = scheme.step / std::pow(2.0, level);
        Eigen::VectorXd h(m);
        for (int a = 0; a < m; ++a) h[a] = s * std::max(std::abs(x[a]), 1.0);

        std::map<std::vector<std::pair<int, int>>, double> cache;
        Eigen::VectorXd row(static_cast<Eigen::Index>(raw.indices.size()));
        for (std::size_t k = 0; k < raw.indices.size(); ++k) {
            // distinct coordinates with their derivative orders
            std::vector<std::pair<int, int>> counts;
            for (int i : raw.indices[k]) {
                if (!counts.empty() && counts.back().first == i)
                    ++counts.back().second;
                else
                    counts.emplace_back(i, 1);
            }
            double scale = 1.0;
            for (auto [c, n] : counts) scale *= std::pow(h[c], n);

            double acc = 0.0;
            std::vector<std::size_t> pos(counts.size(), 0);
            while (true) {
                double w = 1.0;
                std::vector<std::pair<int, int>> key;
                for (std::size_t d = 0; d < counts.size(); ++d) {
                    const auto& [off, coef] = central_stencil(counts[d].second)[pos[d]];
                    w *= coef;
                    if (off != 0) key.emplace_back(counts[d].first, off);
                }
                if (w != 0.0) {
                    auto it = cache.find(key);
                    if (it == cache.end()) {
                        Eigen::VectorXd p = x;
                        for (auto [c, off] : key) p[c] += off * h[c];
                        it = cache.emplace(key, evaluate(f, p)).first;
                        ++raw.evaluations;
                    }
                    acc += w * it->second;
                }
                std::size_t d = 0;
                while (d < counts.size() && ++pos[d] == central_stencil(counts[d].second).size()) pos[d++] = 0;
                if (d == counts.size()) break;
            }
            row[static_cast<Eigen::Index>(k)] = acc / scale;
        }
        rows.push_back(std::move(row));
    }
    auto [values, estimate] = extrapolate(std::move(rows));
    raw.values.assign(values.data(), values.data() + values.size());
    raw.error_estimate = estimate;
    return raw;
}

} // namespace detail

Eigen::VectorXd gradient(const ScalarFunction& f, const Eigen::VectorXd& x, const FDScheme& scheme) {
    const auto t = partial_tensor<1>(f, x, scheme).value;
    return Eigen::Map<const Eigen::VectorXd>(t.data(), t.size());
}

Eigen::MatrixXd hessian(const ScalarFunction& f, const Eigen::VectorXd& x, const FDScheme& scheme) {
    const auto t = partial_tensor<2>(f, x, scheme).value;
    return Eigen::Map<const Eigen::MatrixXd>(t.data(), x.size(), x.size());
}

Eigen::VectorXd curve_derivative(const std::function<Eigen::VectorXd(double)>& f, const FDScheme& scheme) {
    std::vector<Eigen::VectorXd> rows;
    for (int level = 0; level <= scheme.richardson; ++level) {
        const double s = scheme.step / std::pow(2.0, level);
        rows.push_back((f(s) - f(-s)) / (2.0 * s));
    }
    return extrapolate(std::move(rows)).first;
}

double directional(const ScalarFunction& f, const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& directions,
                   const FDScheme& scheme) {
    const int k = static_cast<int>(directions.size());
    if (k < 1 || k > 4) throw ShapeError("directional derivative takes 1..4 directions");
    for (const auto& v : directions)
        if (v.size() != x.size()) throw ShapeError("direction has wrong dimension");
    std::vector<Eigen::VectorXd> rows;
    for (int level = 0; level <= scheme.richardson; ++level) {
        const double s = scheme.step / std::pow(2.0, level);
        double acc = 0.0;
        for (int corner = 0; corner < (1 << k); ++corner) {
            Eigen::VectorXd p = x;
            double sign = 1.0;
            for (int i = 0; i < k; ++i) {
                const bool plus = (corner >> i) & 1;
                p += (plus ? s : -s) * directions[i];
                if (!plus) sign = -sign;
            }
            acc += sign * evaluate(f, p);
        }
        rows.push_back(Eigen::VectorXd::Constant(1, acc / std::pow(2.0 * s, k)));
    }
    return extrapolate(std::move(rows)).first[0];
}

} // namespace g2lab
