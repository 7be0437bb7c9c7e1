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

#include <Eigen/Dense>

#include "charvar/error.hpp"
#include "charvar/representation.hpp"
#include "charvar/unitary.hpp"

namespace charvar {

struct PolishOptions {
    double tolerance = 1e-12;
    int max_iterations = 60;
    double max_start_defect = 0.5;
};

struct PolishResult {
    Representation rep;
    double start_defect;
    double defect;
    double displacement;  ///< Frobenius distance moved by the last handle pair
    int iterations;
};

/**
 * Pulls a near-solution onto the relator level set by moving only the last
 * handle pair (a_g, b_g).
 *
 * With F = P a b a^-1 b^-1, right-perturbing a -> a e^X, b -> b e^Y changes
 * F to F (1 + J(X,Y)) to first order, where
 *   J(X,Y) = Ad(b a b^-1) X - Ad(b a) X + Ad(b a) Y - Ad(b) Y.
 * Each step solves J(X,Y) = -log F in the least-norm sense (log F taken as
 * the traceless skew part of F, exact to third order), backtracks until
 * the defect decreases, and re-projects both matrices onto SU(n).
 */
inline PolishResult polish(const Representation& rho, const PolishOptions& opts = {})
{
    if (!rho.presentation().is_surface())
        throw PreconditionError("polish requires a surface presentation");
    const double start = relator_defect(rho);
    if (start > opts.max_start_defect)
        throw PreconditionError("polish: starting defect " + std::to_string(start) +
                                " exceeds " + std::to_string(opts.max_start_defect));

    if (start <= opts.tolerance)
        return {rho, start, start, 0.0, 0};

    const int g = rho.presentation().genus();
    const int n = rho.n();
    const LieAlgebra alg(n);
    Matrix prefix = Matrix::Identity(n, n);
    for (int i = 1; i < g; ++i) {
        const Matrix& a = rho.generator(2 * i - 1);
        const Matrix& b = rho.generator(2 * i);
        prefix = prefix * a * b * a.adjoint() * b.adjoint();
    }
    const Matrix a0 = rho.generator(2 * g - 1);
    const Matrix b0 = rho.generator(2 * g);
    Matrix a = a0;
    Matrix b = b0;

    auto relator = [&](const Matrix& x, const Matrix& y) {
        return Matrix(prefix * x * y * x.adjoint() * y.adjoint());
    };

    // Aim below the tolerance so the generic evaluation order also meets it.
    const double goal = 0.25 * opts.tolerance;
    double defect = start;
    int iter = 0;
    while (defect > goal) {
        if (iter++ >= opts.max_iterations)
            throw PolishError("polish did not converge in " + std::to_string(opts.max_iterations) +
                              " iterations (defect " + std::to_string(defect) + ")");
        const Matrix f = relator(a, b);
        const RealVector target = alg.coordinates(-0.5 * (f - f.adjoint()));
        const int d = alg.dimension();
        RealMatrix jac(d, 2 * d);
        const Matrix ba = b * a;
        const RealMatrix ad_ba = alg.ad_matrix(ba);
        jac.leftCols(d) = alg.ad_matrix(ba * b.adjoint()) - ad_ba;
        jac.rightCols(d) = ad_ba - alg.ad_matrix(b);
        const RealVector step =
            jac.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(target);

        double scale = 1.0;
        bool improved = false;
        for (int halving = 0; halving < 40; ++halving, scale *= 0.5) {
            const Matrix a1 = project_to_special_unitary(a * expm_skew(alg.element(scale * step.head(d))));
            const Matrix b1 = project_to_special_unitary(b * expm_skew(alg.element(scale * step.tail(d))));
            const double trial = distance_to_identity(relator(a1, b1));
            if (trial < defect) {
                a = a1;
                b = b1;
                defect = trial;
                improved = true;
                break;
            }
        }
        if (!improved)
            throw PolishError("polish stalled at defect " + std::to_string(defect));
    }

    std::vector<Matrix> gens = rho.generators();
    gens[static_cast<std::size_t>(2 * g - 2)] = a;
    gens[static_cast<std::size_t>(2 * g - 1)] = b;
    Representation out(rho.presentation(), n, std::move(gens));
    const double moved = std::sqrt((a - a0).squaredNorm() + (b - b0).squaredNorm());
    const double final_defect = relator_defect(out);
    return {std::move(out), start, final_defect, moved, iter};
}

} // namespace charvar
