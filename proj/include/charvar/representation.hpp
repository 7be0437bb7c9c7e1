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

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "charvar/automorphism.hpp"
#include "charvar/homology.hpp"
#include "charvar/unitary.hpp"
#include "charvar/words.hpp"

namespace charvar {

/// A point of Hom(pi, SU(n)) (or of SU(n)^r in free mode): one matrix per generator.
class Representation {
public:
    Representation(Presentation p, int n, std::vector<Matrix> generators)
        : presentation_(p), n_(n), generators_(std::move(generators))
    {
        if (static_cast<int>(generators_.size()) != p.generator_count())
            throw PreconditionError("representation needs one matrix per generator");
        for (const Matrix& m : generators_)
            if (m.rows() != n || m.cols() != n)
                throw PreconditionError("generator matrix has wrong dimension");
    }

    static Representation trivial(const Presentation& p, int n)
    {
        return Representation(p, n, std::vector<Matrix>(static_cast<std::size_t>(p.generator_count()),
                                                        Matrix::Identity(n, n)));
    }

    const Presentation& presentation() const { return presentation_; }
    int n() const { return n_; }
    int generator_count() const { return static_cast<int>(generators_.size()); }
    const std::vector<Matrix>& generators() const { return generators_; }

    /// Generator matrix, 1-based like Letter::generator.
    const Matrix& generator(int index) const { return generators_[static_cast<std::size_t>(index - 1)]; }

    friend bool operator==(const Representation& a, const Representation& b)
    {
        if (a.presentation_ != b.presentation_ || a.n_ != b.n_)
            return false;
        for (std::size_t j = 0; j < a.generators_.size(); ++j)
            if (a.generators_[j] != b.generators_[j])
                return false;
        return true;
    }

private:
    Presentation presentation_;
    int n_;
    std::vector<Matrix> generators_;
};

/// Left-to-right product of generator matrices; inverse letters use the adjoint.
inline Matrix evaluate_letters(const Representation& rho, std::span<const Letter> letters)
{
    Matrix acc = Matrix::Identity(rho.n(), rho.n());
    for (const Letter& l : letters) {
        if (l.sign > 0)
            acc = acc * rho.generator(l.generator);
        else
            acc = acc * rho.generator(l.generator).adjoint();
    }
    return acc;
}

inline Matrix evaluate_word(const Representation& rho, const Word& w)
{
    return evaluate_letters(rho, w.letters());
}

/// Frobenius distance of rho(R) from the identity.
inline double relator_defect(const Representation& rho)
{
    if (!rho.presentation().is_surface())
        throw PreconditionError("relator_defect is undefined for free presentations");
    return distance_to_identity(evaluate_word(rho, surface_relator(rho.presentation().genus())));
}

/// u . rho: generator j is multiplied by e^{2 pi i u_j / n}.
inline Representation twist(const Representation& rho, const CenterCharacter& u)
{
    if (u.modulus() != rho.n())
        throw PreconditionError("twist: character modulus " + std::to_string(u.modulus()) +
                                " does not match n = " + std::to_string(rho.n()));
    if (u.rank() != rho.generator_count())
        throw PreconditionError("twist: character rank does not match generator count");
    std::vector<Matrix> out = rho.generators();
    for (std::size_t j = 0; j < out.size(); ++j)
        if (u[j] != 0)
            out[j] *= root_of_unity(rho.n(), u[j]);
    return Representation(rho.presentation(), rho.n(), std::move(out));
}

/**
 * The outer action rho -> rho o phi^{-1}: generator j becomes
 * rho(phi^{-1}(x_j)). Rejects automorphisms that fail verification.
 */
inline Representation mcg_act(const Representation& rho, const Automorphism& phi)
{
    if (!verify_automorphism(phi, rho.presentation()).ok())
        throw PreconditionError("mcg_act: automorphism '" + phi.label() +
                                "' failed verification for this presentation");
    const Automorphism inv = phi.inverse();
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(rho.generator_count()));
    for (const Word& w : inv.images())
        out.push_back(evaluate_word(rho, w));
    return Representation(rho.presentation(), rho.n(), std::move(out));
}

/**
 * Complex dimension of the commutant {X : X rho(x_j) = rho(x_j) X for all j},
 * the null-space dimension of the stacked commutation system. Singular values
 * at or below tol times the largest count as zero. 1 means irreducible.
 */
inline int commutant_dimension(const Representation& rho, double tol = 1e-8)
{
    const int n = rho.n();
    const int nn = n * n;
    const Matrix id = Matrix::Identity(n, n);
    Matrix system(nn * rho.generator_count(), nn);
    for (int j = 0; j < rho.generator_count(); ++j) {
        const Matrix& m = rho.generators()[static_cast<std::size_t>(j)];
        // vec(XM - MX) = (M^T kron I - I kron M) vec(X)
        Matrix block = Matrix::Zero(nn, nn);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                block.block(a * n, b * n, n, n) += m(b, a) * id;
                if (a == b)
                    block.block(a * n, b * n, n, n) -= m;
            }
        system.block(j * nn, 0, nn, nn) = block;
    }
    Eigen::JacobiSVD<Matrix> svd(system);
    const Eigen::VectorXd& s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol * smax)
            ++rank;
    return nn - rank;
}

} // namespace charvar
