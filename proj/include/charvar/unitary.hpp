/*
   Copyright 2026 The charvar Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "charvar/error.hpp"
#include "charvar/random.hpp"

namespace charvar {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

template <int N>
using SquareMatrix = Eigen::Matrix<Complex, N, N>;

/// e^{2 pi i k / n}. Quarter turns are returned exactly (1, i, -1, -i).
inline Complex root_of_unity(int n, long long k)
{
    const long long m = ((k % n) + n) % n;
    if ((4 * m) % n == 0) {
        switch ((4 * m) / n) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
        }
    }
    // Reduce to (-pi, pi] before evaluating for symmetric rounding.
    const long long centered = 2 * m > n ? m - n : m;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(centered) / n;
    return {std::cos(angle), std::sin(angle)};
}

/// The central element e^{2 pi i k/n} I of SU(n).
inline Matrix center_root(int n, long long k)
{
    return root_of_unity(n, k) * Matrix::Identity(n, n);
}

inline double frobenius_distance(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw PreconditionError("frobenius_distance: dimension mismatch");
    return (a - b).norm();
}

template <class Derived>
double distance_to_identity(const Eigen::MatrixBase<Derived>& a)
{
    using Mat = typename Derived::PlainObject;
    return (a - Mat::Identity(a.rows(), a.cols())).norm();
}

/// U U* = I and det U = 1, both to \p tol.
inline bool is_special_unitary(const Matrix& u, double tol = 1e-12)
{
    if (u.rows() != u.cols())
        return false;
    const double unitarity = distance_to_identity(u * u.adjoint());
    return unitarity <= tol && std::abs(u.determinant() - 1.0) <= tol;
}

namespace detail {

/// Gram-Schmidt with one reorthogonalization pass; equivalent to QR with a
/// positive real diagonal in R.
template <class Mat>
void orthonormalize_columns(Mat& q)
{
    const Eigen::Index n = q.cols();
    for (Eigen::Index j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index i = 0; i < j; ++i)
                q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
        q.col(j) /= q.col(j).norm();
    }
}

/// Divides by the principal n-th root of det, landing in SU(n).
template <class Mat>
void normalize_determinant(Mat& q)
{
    const double theta = std::arg(q.determinant());
    q *= std::polar(1.0, -theta / static_cast<double>(q.rows()));
}

} // namespace detail

/**
 * Haar-distributed element of SU(n) written into \p q (already sized n x n).
 *
 * Draws n^2 standard complex Gaussians (column-major, real part first),
 * orthonormalizes, corrects the determinant by its principal n-th root and
 * multiplies by a uniformly drawn central element, which removes the bias
 * of the principal-root choice.
 */
template <class Mat>
void haar_fill(Mat& q, RandomStream& rng)
{
    const Eigen::Index n = q.rows();
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            const double re = rng.gaussian();
            const double im = rng.gaussian();
            q(i, j) = Complex(re, im);
        }
    detail::orthonormalize_columns(q);
    detail::normalize_determinant(q);
    q *= root_of_unity(static_cast<int>(n), rng.below(static_cast<int>(n)));
}

inline Matrix haar_sample(int n, RandomStream& rng)
{
    if (n < 2)
        throw PreconditionError("haar_sample requires n >= 2");
    switch (n) {
    case 2: {
        SquareMatrix<2> q;
        haar_fill(q, rng);
        return q;
    }
    case 3: {
        SquareMatrix<3> q;
        haar_fill(q, rng);
        return q;
    }
    case 4: {
        SquareMatrix<4> q;
        haar_fill(q, rng);
        return q;
    }
    default: {
        Matrix q(n, n);
        haar_fill(q, rng);
        return q;
    }
    }
}

/// Nearest special unitary: polar factor, then determinant correction.
inline Matrix project_to_special_unitary(const Matrix& m)
{
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix u = svd.matrixU() * svd.matrixV().adjoint();
    detail::normalize_determinant(u);
    return u;
}

/// exp(X) for skew-Hermitian X, computed spectrally so the result is unitary.
inline Matrix expm_skew(const Matrix& x)
{
    const Matrix h = Complex(0.0, -1.0) * x;  // Hermitian
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
    const Eigen::VectorXd& lam = es.eigenvalues();
    Eigen::VectorXcd phases(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        phases(i) = std::polar(1.0, lam(i));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// B(X, Y) = -Re tr(XY), positive definite on su(n).
inline double bilinear_form(const Matrix& x, const Matrix& y)
{
    return -(x.cwiseProduct(y.transpose())).sum().real();
}

/// Ad(U) X = U X U^{-1}.
inline Matrix adjoint_action(const Matrix& u, const Matrix& x)
{
    if (u.rows() != x.rows())
        throw PreconditionError("adjoint_action: dimension mismatch");
    return u * x * u.adjoint();
}

inline bool is_lie_algebra_element(const Matrix& x, double tol = 1e-12)
{
    return (x + x.adjoint()).norm() <= tol && std::abs(x.trace()) <= tol;
}

/**
 * su(n) with a B-orthonormal generalized Gell-Mann basis:
 * i(E_jk + E_kj)/sqrt2, (E_jk - E_kj)/sqrt2 for j < k, then the n-1 diagonal
 * elements i diag(1,..,1,-l,0,..)/sqrt(l(l+1)).
 */
class LieAlgebra {
public:
    explicit LieAlgebra(int n) : n_(n)
    {
        if (n < 2)
            throw PreconditionError("su(n) requires n >= 2");
        const Complex i(0.0, 1.0);
        const double r2 = std::sqrt(0.5);
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Matrix s = Matrix::Zero(n, n);
                s(j, k) = s(k, j) = i * r2;
                basis_.push_back(s);
                Matrix a = Matrix::Zero(n, n);
                a(j, k) = r2;
                a(k, j) = -r2;
                basis_.push_back(a);
            }
        for (int l = 1; l < n; ++l) {
            Matrix d = Matrix::Zero(n, n);
            const double scale = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
            for (int m = 0; m < l; ++m)
                d(m, m) = i * scale;
            d(l, l) = -static_cast<double>(l) * i * scale;
            basis_.push_back(d);
        }
        const auto dim = static_cast<Eigen::Index>(basis_.size());
        pairing_.resize(dim, n * n);
        columns_.resize(n * n, dim);
        for (Eigen::Index k = 0; k < dim; ++k) {
            const Matrix& e = basis_[static_cast<std::size_t>(k)];
            const Matrix et = e.transpose();
            pairing_.row(k) = Eigen::Map<const Eigen::VectorXcd>(et.data(), n * n).transpose();
            columns_.col(k) = Eigen::Map<const Eigen::VectorXcd>(e.data(), n * n);
        }
    }

    int n() const { return n_; }
    int dimension() const { return static_cast<int>(basis_.size()); }
    const std::vector<Matrix>& basis() const { return basis_; }

    /// Coordinates B(X, e_k).
    RealVector coordinates(const Matrix& x) const
    {
        return -(pairing_ * Eigen::Map<const Eigen::VectorXcd>(x.data(), n_ * n_)).real();
    }

    Matrix element(const Eigen::Ref<const RealVector>& coords) const
    {
        const Eigen::VectorXcd v = columns_ * coords.cast<Complex>();
        return Eigen::Map<const Matrix>(v.data(), n_, n_);
    }

    /// Real d x d matrix of Ad(U) in the basis.
    RealMatrix ad_matrix(const Matrix& u) const
    {
        RealMatrix out(dimension(), dimension());
        const Matrix uh = u.adjoint();
        for (int l = 0; l < dimension(); ++l)
            out.col(l) = coordinates(u * basis_[static_cast<std::size_t>(l)] * uh);
        return out;
    }

private:
    int n_;
    std::vector<Matrix> basis_;
    Eigen::MatrixXcd pairing_;
    Eigen::MatrixXcd columns_;
};

inline std::vector<Matrix> su_basis(int n) { return LieAlgebra(n).basis(); }

} // namespace charvar
