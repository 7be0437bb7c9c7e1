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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "charvar/error.hpp"
#include "charvar/representation.hpp"
#include "charvar/unitary.hpp"
#include "charvar/words.hpp"

// Tangent spaces at a polished representation rho of a surface group.
//
// A 1-cochain is stored by its values on the generators, in real coordinates
// of su(n) (LieAlgebra basis), generator blocks in order: a vector of length
// 2g * d with d = n^2 - 1. It extends to words by
//   u(vw) = u(v) + Ad(rho(v)) u(w),   u(x^-1) = -Ad(rho(x)^-1) u(x).

namespace charvar {

struct CohomologyOptions {
    double rank_tolerance = 1e-8;  ///< singular-value threshold relative to max(largest, 1)
    double max_defect = 1e-12;
};

namespace detail {

inline void require_polished(const Representation& rho, const CohomologyOptions& opts)
{
    if (!rho.presentation().is_surface())
        throw PreconditionError("cohomology requires a surface presentation");
    const double defect = relator_defect(rho);
    if (defect > opts.max_defect)
        throw PreconditionError("cohomology requires a polished representation (defect " +
                                std::to_string(defect) + " > " + std::to_string(opts.max_defect) +
                                ")");
}

inline int numerical_rank(const Eigen::VectorXd& s, double tol)
{
    if (s.size() == 0)
        return 0;
    const double floor = tol * std::max(s(0), 1.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > floor)
            ++rank;
    return rank;
}

} // namespace detail

/// Orthonormal basis (columns) of the null space of \p m.
inline RealMatrix null_space(const RealMatrix& m, double tol)
{
    Eigen::JacobiSVD<RealMatrix> svd(m, Eigen::ComputeFullV);
    const int rank = detail::numerical_rank(svd.singularValues(), tol);
    return svd.matrixV().rightCols(m.cols() - rank);
}

/// Orthonormal basis (columns) of the column space of \p m.
inline RealMatrix column_space(const RealMatrix& m, double tol)
{
    Eigen::JacobiSVD<RealMatrix> svd(m, Eigen::ComputeThinU);
    const int rank = detail::numerical_rank(svd.singularValues(), tol);
    return svd.matrixU().leftCols(rank);
}

/// Lie-algebra value of the cochain \p coords on a single letter.
inline Matrix cochain_on_letter(const Representation& rho, const LieAlgebra& alg,
                                const RealVector& coords, const Letter& l)
{
    const int d = alg.dimension();
    const Matrix x = alg.element(coords.segment((l.generator - 1) * d, d));
    if (l.sign > 0)
        return x;
    const Matrix& m = rho.generator(l.generator);
    return -adjoint_action(m.adjoint(), x);
}

/// Extends a generator assignment to an arbitrary word.
inline Matrix extend_cochain(const Representation& rho, const LieAlgebra& alg,
                             const RealVector& coords, std::span<const Letter> word)
{
    const int n = rho.n();
    Matrix value = Matrix::Zero(n, n);
    Matrix prefix = Matrix::Identity(n, n);
    for (const Letter& l : word) {
        value += adjoint_action(prefix, cochain_on_letter(rho, alg, coords, l));
        prefix = prefix * (l.sign > 0 ? rho.generator(l.generator)
                                      : Matrix(rho.generator(l.generator).adjoint()));
    }
    return value;
}

/**
 * d x (2g d) matrix of X -> u_X(R), built by walking R letter by letter
 * (the Fox derivative of R composed with Ad rho).
 */
inline RealMatrix traversal_matrix(const Representation& rho, const LieAlgebra& alg)
{
    const int d = alg.dimension();
    const int r = rho.generator_count();
    const Word rel = surface_relator(rho.presentation().genus());
    RealMatrix out = RealMatrix::Zero(d, r * d);
    Matrix prefix = Matrix::Identity(rho.n(), rho.n());
    for (const Letter& l : rel.letters()) {
        const Matrix& m = rho.generator(l.generator);
        auto block = out.middleCols((l.generator - 1) * d, d);
        if (l.sign > 0) {
            block += alg.ad_matrix(prefix);
            prefix = prefix * m;
        } else {
            prefix = prefix * m.adjoint();
            block -= alg.ad_matrix(prefix);
        }
    }
    return out;
}

/// (2g d) x d matrix of X -> (X - Ad(rho(x_j)) X)_j.
inline RealMatrix coboundary_matrix(const Representation& rho, const LieAlgebra& alg)
{
    const int d = alg.dimension();
    const int r = rho.generator_count();
    RealMatrix out(r * d, d);
    for (int j = 0; j < r; ++j)
        out.middleRows(j * d, d) = RealMatrix::Identity(d, d) - alg.ad_matrix(rho.generator(j + 1));
    return out;
}

/// Orthonormal bases of Z^1, B^1 and the complement of B^1 in Z^1 (columns).
struct CohomologyBases {
    RealMatrix z1;
    RealMatrix b1;
    RealMatrix h1;
};

inline RealMatrix cocycle_space(const Representation& rho, const CohomologyOptions& opts = {})
{
    detail::require_polished(rho, opts);
    const LieAlgebra alg(rho.n());
    return null_space(traversal_matrix(rho, alg), opts.rank_tolerance);
}

inline RealMatrix coboundary_space(const Representation& rho, const CohomologyOptions& opts = {})
{
    detail::require_polished(rho, opts);
    const LieAlgebra alg(rho.n());
    return column_space(coboundary_matrix(rho, alg), opts.rank_tolerance);
}

inline CohomologyBases cohomology_bases(const Representation& rho, const CohomologyOptions& opts = {})
{
    detail::require_polished(rho, opts);
    const LieAlgebra alg(rho.n());
    CohomologyBases out;
    out.z1 = null_space(traversal_matrix(rho, alg), opts.rank_tolerance);
    out.b1 = column_space(coboundary_matrix(rho, alg), opts.rank_tolerance);
    const RealMatrix residual = out.z1 - out.b1 * (out.b1.transpose() * out.z1);
    out.h1 = column_space(residual, opts.rank_tolerance);
    return out;
}

inline RealMatrix h1_representatives(const Representation& rho, const CohomologyOptions& opts = {})
{
    return cohomology_bases(rho, opts).h1;
}

/// A tangent cocycle: generator values (coordinates) at a fixed base point.
class TangentCocycle {
public:
    TangentCocycle(Representation base, RealVector coords) : base_(std::move(base)), coords_(std::move(coords))
    {
        const int expected = base_.generator_count() * (base_.n() * base_.n() - 1);
        if (coords_.size() != expected)
            throw PreconditionError("cocycle coordinate vector has wrong length");
    }

    const Representation& base() const { return base_; }
    const RealVector& coords() const { return coords_; }

    /// The same generator values read at another base point.
    TangentCocycle rebased(Representation other) const { return TangentCocycle(std::move(other), coords_); }

    /// B-norm of u(R); zero for cocycles.
    double relator_residual() const
    {
        const LieAlgebra alg(base_.n());
        return (traversal_matrix(base_, alg) * coords_).norm();
    }

private:
    Representation base_;
    RealVector coords_;
};

/**
 * Cup product of two cochains evaluated on the fundamental 2-cycle
 *   sum_k [p_{k-1} | y_k]  -  sum_j [x_j | x_j^-1]
 * where R = y_1...y_{4g} and p_k = y_1...y_k; the degenerate [1|1] terms
 * vanish on cocycles. (c1 u c2)(v, w) = B(c1(v), Ad(rho(v)) c2(w)).
 */
inline double cup_symplectic(const Representation& rho, const RealVector& c1, const RealVector& c2)
{
    const LieAlgebra alg(rho.n());
    const int n = rho.n();
    const Word rel = surface_relator(rho.presentation().genus());
    double total = 0.0;
    Matrix prefix = Matrix::Identity(n, n);
    Matrix u1_prefix = Matrix::Zero(n, n);
    for (const Letter& l : rel.letters()) {
        const Matrix u2 = cochain_on_letter(rho, alg, c2, l);
        total += bilinear_form(u1_prefix, adjoint_action(prefix, u2));
        u1_prefix += adjoint_action(prefix, cochain_on_letter(rho, alg, c1, l));
        prefix = prefix * (l.sign > 0 ? rho.generator(l.generator)
                                      : Matrix(rho.generator(l.generator).adjoint()));
    }
    for (int j = 1; j <= rho.generator_count(); ++j) {
        const Matrix u1 = cochain_on_letter(rho, alg, c1, {j, +1});
        const Matrix u2inv = cochain_on_letter(rho, alg, c2, {j, -1});
        total -= bilinear_form(u1, adjoint_action(rho.generator(j), u2inv));
    }
    return total;
}

inline double cup_symplectic(const TangentCocycle& c1, const TangentCocycle& c2)
{
    if (!(c1.base() == c2.base()))
        throw PreconditionError("cup_symplectic: cocycles are based at different points");
    return cup_symplectic(c1.base(), c1.coords(), c2.coords());
}

struct SymplecticMatrix {
    Representation base;
    RealMatrix basis;    ///< H^1 representatives, one per column
    RealMatrix entries;  ///< pairing matrix
    int z1_dim = 0;
    int b1_dim = 0;
    double skew_residual = 0.0;  ///< ||M + M^T|| / ||M||
    Eigen::VectorXd singular_values;

    int h1_dim() const { return static_cast<int>(basis.cols()); }
    double min_sv() const { return singular_values.size() ? singular_values.minCoeff() : 0.0; }
    double max_sv() const { return singular_values.size() ? singular_values.maxCoeff() : 0.0; }
};

/**
 * The matrix Omega with cup_symplectic(rho, c1, c2) = c1^T Omega c2, built
 * from the same 2-cycle by tracking each term as a linear map of the
 * cochain coordinates.
 */
inline RealMatrix cup_form_matrix(const Representation& rho, const LieAlgebra& alg)
{
    const int d = alg.dimension();
    const int r = rho.generator_count();
    const int n = rho.n();
    const Word rel = surface_relator(rho.presentation().genus());
    // letter_map(l) sends coordinates c to the coordinates of c(l).
    auto letter_map = [&](const Letter& l) {
        RealMatrix m = RealMatrix::Zero(d, r * d);
        if (l.sign > 0)
            m.middleCols((l.generator - 1) * d, d).setIdentity();
        else
            m.middleCols((l.generator - 1) * d, d) = -alg.ad_matrix(rho.generator(l.generator).adjoint());
        return m;
    };
    RealMatrix omega = RealMatrix::Zero(r * d, r * d);
    RealMatrix prefix_cochain = RealMatrix::Zero(d, r * d);
    Matrix prefix = Matrix::Identity(n, n);
    for (const Letter& l : rel.letters()) {
        const RealMatrix transported = alg.ad_matrix(prefix) * letter_map(l);
        omega.noalias() += prefix_cochain.transpose() * transported;
        prefix_cochain += transported;
        prefix = prefix * (l.sign > 0 ? rho.generator(l.generator)
                                      : Matrix(rho.generator(l.generator).adjoint()));
    }
    for (int j = 1; j <= r; ++j) {
        const RealMatrix second = alg.ad_matrix(rho.generator(j)) * letter_map({j, -1});
        omega.middleRows((j - 1) * d, d) -= second;
    }
    return omega;
}

/// Pairings of the columns of \p left with the columns of \p right.
inline RealMatrix pairing_matrix(const Representation& rho, const RealMatrix& left, const RealMatrix& right)
{
    const LieAlgebra alg(rho.n());
    return left.transpose() * cup_form_matrix(rho, alg) * right;
}

/// The cup-product pairing on H^1 at an irreducible polished point.
inline SymplecticMatrix symplectic_matrix(const Representation& rho, const CohomologyOptions& opts = {},
                                          double irreducible_tol = 1e-8)
{
    detail::require_polished(rho, opts);
    if (commutant_dimension(rho, irreducible_tol) != 1)
        throw PreconditionError("symplectic_matrix: base point is reducible");
    const CohomologyBases bases = cohomology_bases(rho, opts);
    SymplecticMatrix out{rho, bases.h1, pairing_matrix(rho, bases.h1, bases.h1),
                         static_cast<int>(bases.z1.cols()), static_cast<int>(bases.b1.cols()), 0.0, {}};
    const double scale = out.entries.norm();
    out.skew_residual = scale > 0 ? (out.entries + out.entries.transpose()).norm() / scale : 0.0;
    out.singular_values = out.entries.jacobiSvd().singularValues();
    return out;
}

/**
 * First-order check of the traversal matrix: with rho_t(x_j) = exp(t X_j) rho(x_j),
 * returns || rho_t(R) rho(R)^-1 - I - t u_X(R) ||, which is O(t^2).
 */
inline double relator_derivative_error(const Representation& rho, const RealVector& coords, double t)
{
    const LieAlgebra alg(rho.n());
    const int d = alg.dimension();
    std::vector<Matrix> moved;
    for (int j = 0; j < rho.generator_count(); ++j)
        moved.push_back(expm_skew(t * alg.element(coords.segment(j * d, d))) * rho.generator(j + 1));
    const Representation rho_t(rho.presentation(), rho.n(), std::move(moved));
    const Word rel = surface_relator(rho.presentation().genus());
    const Matrix ratio = evaluate_word(rho_t, rel) * evaluate_word(rho, rel).adjoint();
    const Matrix linear = alg.element(traversal_matrix(rho, alg) * coords);
    return (ratio - Matrix::Identity(rho.n(), rho.n()) - t * linear).norm();
}

} // namespace charvar
