#pragma once

// Exact multilinear algebra on the exterior algebra of (R^7)*.
//
// A k-form is stored densely over the C(7,k) monomials e^{i1..ik}
// (i1 < ... < ik), ordered lexicographically. Indices are 0-based in code and
// printed 1-based ("123" is e^1 ^ e^2 ^ e^3). Every sign convention of the
// library is fixed here: the wedge sign of two monomials is the parity of the
// merge permutation, and the orientation is e^{1..7}.

#include <Eigen/Dense>

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "g2lab/error.hpp"

namespace g2lab {

inline constexpr int kDim = 7;

constexpr int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    int r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

template <typename Scalar>
using Vector7 = Eigen::Matrix<Scalar, kDim, 1>;

/// Endomorphism of R^7 in the standard basis: column j is h(e_j).
template <typename Scalar>
using Endo7 = Eigen::Matrix<Scalar, kDim, kDim>;

using Vector7d = Vector7<double>;
using Endo7d = Endo7<double>;

/// Strictly increasing index tuple in 0..6, stored as a bit mask.
class MultiIndex {
public:
    constexpr MultiIndex() = default;

    static constexpr MultiIndex from_mask(std::uint8_t mask) { return MultiIndex(mask & 0x7f); }

    static MultiIndex from_indices(std::initializer_list<int> indices) {
        std::uint8_t mask = 0;
        int last = -1;
        for (int i : indices) {
            if (i <= last || i >= kDim) throw ShapeError("multi-index must be strictly increasing in 0..6");
            mask |= static_cast<std::uint8_t>(1u << i);
            last = i;
        }
        return MultiIndex(mask);
    }

    /// Parses the 1-based digit notation, e.g. "145".
    static MultiIndex parse(std::string_view digits) {
        std::uint8_t mask = 0;
        int last = -1;
        for (char c : digits) {
            const int i = c - '1';
            if (i <= last || i < 0 || i >= kDim) throw ShapeError("bad multi-index \"" + std::string(digits) + "\"");
            mask |= static_cast<std::uint8_t>(1u << i);
            last = i;
        }
        return MultiIndex(mask);
    }

    constexpr std::uint8_t mask() const { return mask_; }
    constexpr int size() const { return std::popcount(static_cast<unsigned>(mask_)); }
    constexpr bool contains(int i) const { return (mask_ >> i) & 1u; }
    constexpr MultiIndex complement() const { return MultiIndex(static_cast<std::uint8_t>(~mask_ & 0x7f)); }

    std::vector<int> indices() const {
        std::vector<int> out;
        for (int i = 0; i < kDim; ++i)
            if (contains(i)) out.push_back(i);
        return out;
    }

    std::string to_string() const {
        std::string s;
        for (int i = 0; i < kDim; ++i)
            if (contains(i)) s.push_back(static_cast<char>('1' + i));
        return s;
    }

    friend constexpr bool operator==(MultiIndex a, MultiIndex b) { return a.mask_ == b.mask_; }

private:
    constexpr explicit MultiIndex(std::uint8_t mask) : mask_(mask) {}
    std::uint8_t mask_ = 0;
};

namespace detail {

struct BasisTables {
    std::array<std::vector<std::uint8_t>, kDim + 1> masks{};
    std::array<int, 128> position{};
    // Sign of e^A ^ e^B relative to e^{A u B}; zero when A and B overlap.
    std::array<std::array<std::int8_t, 128>, 128> wedge_sign{};

    BasisTables() {
        for (int k = 0; k <= kDim; ++k) {
            // lexicographic enumeration of k-subsets
            std::vector<int> idx(k);
            for (int i = 0; i < k; ++i) idx[i] = i;
            while (true) {
                std::uint8_t m = 0;
                for (int i : idx) m |= static_cast<std::uint8_t>(1u << i);
                position[m] = static_cast<int>(masks[k].size());
                masks[k].push_back(m);
                int j = k - 1;
                while (j >= 0 && idx[j] == kDim - k + j) --j;
                if (j < 0) break;
                ++idx[j];
                for (int i = j + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
            }
        }
        for (int a = 0; a < 128; ++a) {
            for (int b = 0; b < 128; ++b) {
                if (a & b) {
                    wedge_sign[a][b] = 0;
                    continue;
                }
                int inversions = 0;
                for (int i = 0; i < kDim; ++i) {
                    if (!((a >> i) & 1)) continue;
                    inversions += std::popcount(static_cast<unsigned>(b & ((1 << i) - 1)));
                }
                wedge_sign[a][b] = (inversions % 2) ? -1 : 1;
            }
        }
    }
};

inline const BasisTables& tables() {
    static const BasisTables t;
    return t;
}

} // namespace detail

/// Monomials of degree k in lexicographic order.
inline const std::vector<std::uint8_t>& monomial_masks(int degree) { return detail::tables().masks.at(degree); }

inline int monomial_position(MultiIndex idx) { return detail::tables().position[idx.mask()]; }

inline MultiIndex monomial_at(int degree, int position) {
    return MultiIndex::from_mask(monomial_masks(degree).at(position));
}

/// Sign of e^A ^ e^B relative to e^{A u B} (0 if A, B overlap).
inline int wedge_sign(MultiIndex a, MultiIndex b) { return detail::tables().wedge_sign[a.mask()][b.mask()]; }

/// Degree-k alternating form on R^7.
template <typename Scalar>
class AltForm {
public:
    using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    AltForm() : AltForm(0) {}

    explicit AltForm(int degree) : degree_(checked_degree(degree)), coeffs_(Coeffs::Zero(binomial(kDim, degree))) {}

    AltForm(int degree, Coeffs coeffs) : degree_(checked_degree(degree)), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != binomial(kDim, degree_))
            throw ShapeError("coefficient array length must be C(7, degree)");
    }

    static AltForm monomial(MultiIndex idx, Scalar c = Scalar(1)) {
        AltForm f(idx.size());
        f.coeff(idx) = c;
        return f;
    }

    /// Sum of terms given in 1-based digit notation, e.g. {{"123", 1}, {"257", -1}}.
    static AltForm from_terms(int degree, std::initializer_list<std::pair<std::string_view, Scalar>> terms) {
        AltForm f(degree);
        for (const auto& [digits, c] : terms) {
            const MultiIndex idx = MultiIndex::parse(digits);
            if (idx.size() != degree) throw ShapeError("term degree mismatch");
            f.coeff(idx) += c;
        }
        return f;
    }

    int degree() const { return degree_; }
    Eigen::Index size() const { return coeffs_.size(); }
    const Coeffs& coeffs() const { return coeffs_; }
    Coeffs& coeffs() { return coeffs_; }

    Scalar coeff(MultiIndex idx) const { return coeffs_[position_of(idx)]; }
    Scalar& coeff(MultiIndex idx) { return coeffs_[position_of(idx)]; }

    AltForm& operator+=(const AltForm& o) {
        require_same_degree(o);
        coeffs_ += o.coeffs_;
        return *this;
    }
    AltForm& operator-=(const AltForm& o) {
        require_same_degree(o);
        coeffs_ -= o.coeffs_;
        return *this;
    }
    AltForm& operator*=(Scalar s) {
        coeffs_ *= s;
        return *this;
    }

    friend AltForm operator+(AltForm a, const AltForm& b) { return a += b; }
    friend AltForm operator-(AltForm a, const AltForm& b) { return a -= b; }
    friend AltForm operator-(AltForm a) {
        a.coeffs_ = -a.coeffs_;
        return a;
    }
    friend AltForm operator*(Scalar s, AltForm a) { return a *= s; }
    friend AltForm operator*(AltForm a, Scalar s) { return a *= s; }

    template <typename Other>
    AltForm<Other> cast() const {
        return AltForm<Other>(degree_, coeffs_.template cast<Other>());
    }

private:
    static int checked_degree(int degree) {
        if (degree < 0 || degree > kDim) throw ShapeError("degree exceeds 7");
        return degree;
    }
    int position_of(MultiIndex idx) const {
        if (idx.size() != degree_) throw ShapeError("multi-index degree mismatch");
        return monomial_position(idx);
    }
    void require_same_degree(const AltForm& o) const {
        if (o.degree_ != degree_) throw ShapeError("addition requires equal degrees");
    }

    int degree_;
    Coeffs coeffs_;
};

using Form = AltForm<double>;

/// Inner product on R^7; symmetric and positive definite by construction.
template <typename Scalar>
class Metric7 {
public:
    explicit Metric7(const Endo7<Scalar>& gram) {
        using std::abs;
        const Scalar scale = gram.cwiseAbs().maxCoeff();
        const Scalar asym = (gram - gram.transpose()).cwiseAbs().maxCoeff();
        if (!(asym <= Scalar(64) * Eigen::NumTraits<Scalar>::epsilon() * scale))
            throw ShapeError("metric Gram matrix is not symmetric");
        gram_ = (gram + gram.transpose()) / Scalar(2);
        llt_.compute(gram_);
        if (llt_.info() != Eigen::Success) throw DomainError("metric is not positive definite");
        const auto L = llt_.matrixL().toDenseMatrix();
        if (!(L.diagonal().minCoeff() > Scalar(0))) throw DomainError("metric is not positive definite");
        factor_ = L;
        inverse_ = llt_.solve(Endo7<Scalar>::Identity());
        inverse_ = (inverse_ + inverse_.transpose()) / Scalar(2);
        sqrt_det_ = factor_.diagonal().prod();
    }

    static Metric7 identity() { return Metric7(Endo7<Scalar>::Identity()); }

    const Endo7<Scalar>& gram() const { return gram_; }
    const Endo7<Scalar>& inverse() const { return inverse_; }
    /// Lower Cholesky factor L with gram = L L^T.
    const Endo7<Scalar>& cholesky() const { return factor_; }
    Scalar sqrt_det() const { return sqrt_det_; }

    /// Adjoint of h with respect to this inner product.
    Endo7<Scalar> adjoint(const Endo7<Scalar>& h) const { return inverse_ * h.transpose() * gram_; }

private:
    Endo7<Scalar> gram_;
    Endo7<Scalar> inverse_;
    Endo7<Scalar> factor_;
    Scalar sqrt_det_{};
    Eigen::LLT<Endo7<Scalar>> llt_;
};

using Metric7d = Metric7<double>;

template <typename Scalar>
AltForm<Scalar> wedge(const AltForm<Scalar>& a, const AltForm<Scalar>& b) {
    const int p = a.degree(), q = b.degree();
    if (p + q > kDim) throw ShapeError("degree exceeds 7");
    AltForm<Scalar> out(p + q);
    const auto& ma = monomial_masks(p);
    const auto& mb = monomial_masks(q);
    const auto& t = detail::tables();
    for (std::size_t i = 0; i < ma.size(); ++i) {
        if (a.coeffs()[i] == Scalar(0)) continue;
        for (std::size_t j = 0; j < mb.size(); ++j) {
            const int s = t.wedge_sign[ma[i]][mb[j]];
            if (s == 0) continue;
            out.coeffs()[t.position[ma[i] | mb[j]]] += Scalar(s) * a.coeffs()[i] * b.coeffs()[j];
        }
    }
    return out;
}

/// Contraction v ⌟ a.
template <typename Scalar>
AltForm<Scalar> interior(const Vector7<Scalar>& v, const AltForm<Scalar>& a) {
    if (a.degree() == 0) throw ShapeError("cannot contract scalar");
    AltForm<Scalar> out(a.degree() - 1);
    const auto& masks = monomial_masks(a.degree());
    const auto& t = detail::tables();
    for (std::size_t i = 0; i < masks.size(); ++i) {
        const Scalar c = a.coeffs()[i];
        if (c == Scalar(0)) continue;
        int slot = 0;
        for (int idx = 0; idx < kDim; ++idx) {
            if (!((masks[i] >> idx) & 1)) continue;
            const std::uint8_t rest = masks[i] & static_cast<std::uint8_t>(~(1u << idx));
            out.coeffs()[t.position[rest]] += ((slot % 2) ? -c : c) * v[idx];
            ++slot;
        }
    }
    return out;
}

/// The derivation h·a = d/dt|0 (e^{th})^* a, i.e. a(h·, ·, ...) + ... + a(..., h·).
template <typename Scalar>
AltForm<Scalar> delta_action(const Endo7<Scalar>& h, const AltForm<Scalar>& a) {
    AltForm<Scalar> out(a.degree());
    const auto& masks = monomial_masks(a.degree());
    const auto& t = detail::tables();
    for (std::size_t i = 0; i < masks.size(); ++i) {
        const Scalar c = a.coeffs()[i];
        if (c == Scalar(0)) continue;
        const std::uint8_t m = masks[i];
        for (int src = 0; src < kDim; ++src) {
            if (!((m >> src) & 1)) continue;
            // e^{src} o h = sum_dst h(src, dst) e^{dst}
            out.coeffs()[i] += c * h(src, src);
            for (int dst = 0; dst < kDim; ++dst) {
                if ((m >> dst) & 1) continue;
                const int lo = std::min(src, dst), hi = std::max(src, dst);
                const unsigned between = m & (((1u << hi) - 1) & ~((1u << (lo + 1)) - 1));
                const int sign = (std::popcount(between) % 2) ? -1 : 1;
                const std::uint8_t target = (m & static_cast<std::uint8_t>(~(1u << src))) | static_cast<std::uint8_t>(1u << dst);
                out.coeffs()[t.position[target]] += Scalar(sign) * c * h(src, dst);
            }
        }
    }
    return out;
}

/// k-th compound matrix: entry (I, J) is the minor det M[I, J].
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> compound(const Endo7<Scalar>& M, int k) {
    const auto& masks = monomial_masks(k);
    const Eigen::Index n = static_cast<Eigen::Index>(masks.size());
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> C(n, n);
    if (k == 0) {
        C(0, 0) = Scalar(1);
        return C;
    }
    std::vector<std::vector<int>> idx(masks.size());
    for (std::size_t i = 0; i < masks.size(); ++i) idx[i] = MultiIndex::from_mask(masks[i]).indices();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> sub(k, k);
    for (Eigen::Index I = 0; I < n; ++I) {
        for (Eigen::Index J = 0; J < n; ++J) {
            for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c) sub(r, c) = M(idx[I][r], idx[J][c]);
            C(I, J) = sub.determinant();
        }
    }
    return C;
}

/// Pullback A^* a, with (A^* a)(X, ...) = a(AX, ...).
template <typename Scalar>
AltForm<Scalar> pullback(const Endo7<Scalar>& A, const AltForm<Scalar>& a) {
    return AltForm<Scalar>(a.degree(), compound(A, a.degree()).transpose() * a.coeffs());
}

/// Gram matrix of the inner product induced by g on degree-k forms.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> lambda_gram(const Metric7<Scalar>& g, int k) {
    return compound(g.inverse(), k);
}

template <typename Scalar>
Scalar lambda_inner(const Metric7<Scalar>& g, const AltForm<Scalar>& a, const AltForm<Scalar>& b) {
    if (a.degree() != b.degree()) throw ShapeError("inner product requires equal degrees");
    return a.coeffs().dot(lambda_gram(g, a.degree()) * b.coeffs());
}

template <typename Scalar>
AltForm<Scalar> volume_form(const Metric7<Scalar>& g) {
    AltForm<Scalar> vol(kDim);
    vol.coeffs()[0] = g.sqrt_det();
    return vol;
}

/// Coefficient of a 7-form on e^{1..7}.
template <typename Scalar>
Scalar top_coefficient(const AltForm<Scalar>& a) {
    if (a.degree() != kDim) throw ShapeError("top coefficient requires a 7-form");
    return a.coeffs()[0];
}

/// Hodge star of g, characterised by w ^ *w' = <w, w'>_g vol_g.
///
/// Computed in the orthonormal coframe theta = L^T e from the Cholesky factor
/// of g, where the star is a signed permutation of monomials.
template <typename Scalar>
AltForm<Scalar> hodge_star(const Metric7<Scalar>& g, const AltForm<Scalar>& a) {
    const int k = a.degree();
    const Endo7<Scalar> P = g.cholesky().transpose();
    const Endo7<Scalar> Pinv = P.inverse();
    const auto in_coframe = (compound(Pinv, k).transpose() * a.coeffs()).eval();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> starred = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(binomial(kDim, kDim - k));
    const auto& masks = monomial_masks(k);
    for (std::size_t i = 0; i < masks.size(); ++i) {
        const MultiIndex I = MultiIndex::from_mask(masks[i]);
        starred[monomial_position(I.complement())] = Scalar(wedge_sign(I, I.complement())) * in_coframe[i];
    }
    return AltForm<Scalar>(kDim - k, compound(P, kDim - k).transpose() * starred);
}

} // namespace g2lab
