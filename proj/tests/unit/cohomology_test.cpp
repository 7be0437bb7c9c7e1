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
#include <gtest/gtest.h>

#include "charvar/automorphism.hpp"
#include "charvar/cohomology.hpp"
#include "charvar/polish.hpp"
#include "charvar/sampler.hpp"
#include "test_support.hpp"

using namespace charvar;

namespace {

std::vector<Representation> polished(int g, int n, double eps, std::size_t count, std::uint64_t seed)
{
    BatchOptions o;
    o.samples = count;
    o.epsilon = eps;
    o.seed = seed;
    std::vector<Representation> out;
    for (const Representation& rho : sample_batch(Presentation::surface(g), n, o).samples)
        out.push_back(polish(rho).rep);
    return out;
}

/// Jacobian of X -> rho_t(R) rho(R)^-1 by central differences.
RealMatrix finite_difference_jacobian(const Representation& rho, double h)
{
    const LieAlgebra alg(rho.n());
    const int d = alg.dimension();
    const int cols = rho.generator_count() * d;
    const Word rel = surface_relator(rho.presentation().genus());
    const Matrix base_inv = evaluate_word(rho, rel).adjoint();
    RealMatrix out(d, cols);
    for (int c = 0; c < cols; ++c) {
        Matrix side[2];
        for (int s = 0; s < 2; ++s) {
            std::vector<Matrix> gens = rho.generators();
            const int j = c / d;
            gens[static_cast<std::size_t>(j)] =
                expm_skew((s ? -h : h) * alg.basis()[static_cast<std::size_t>(c % d)]) * gens[static_cast<std::size_t>(j)];
            side[s] = evaluate_word(Representation(rho.presentation(), rho.n(), gens), rel) * base_inv;
        }
        out.col(c) = alg.coordinates((side[0] - side[1]) / (2 * h));
    }
    return out;
}

/// Coordinates of the pulled-back cocycle c o phi at the base rho o phi.
RealVector pull_back(const Representation& rho, const Automorphism& phi, const RealVector& c)
{
    const LieAlgebra alg(rho.n());
    const int d = alg.dimension();
    RealVector out(c.size());
    for (int j = 0; j < rho.generator_count(); ++j)
        out.segment(j * d, d) = alg.coordinates(extend_cochain(rho, alg, c, phi.images()[static_cast<std::size_t>(j)].letters()));
    return out;
}

Representation compose_rep(const Representation& rho, const Automorphism& phi)
{
    std::vector<Matrix> gens;
    for (const Word& w : phi.images())
        gens.push_back(evaluate_word(rho, w));
    return Representation(rho.presentation(), rho.n(), gens);
}

} // namespace

TEST(Cohomology, DimensionsAtIrreduciblePoints)
{
    struct Case {
        int g, n;
        double eps;
        int z1, b1, h1;
    };
    for (const Case& c : {Case{2, 2, 0.2, 9, 3, 6}, Case{2, 3, 0.5, 24, 8, 16}, Case{3, 2, 0.5, 15, 3, 12}}) {
        for (const Representation& rho : polished(c.g, c.n, c.eps, 4, 10)) {
            ASSERT_EQ(commutant_dimension(rho), 1);
            const CohomologyBases b = cohomology_bases(rho);
            EXPECT_EQ(b.z1.cols(), c.z1);
            EXPECT_EQ(b.b1.cols(), c.b1);
            EXPECT_EQ(b.h1.cols(), c.h1);
            EXPECT_EQ(cocycle_space(rho).cols(), c.z1);
            EXPECT_EQ(coboundary_space(rho).cols(), c.b1);
            EXPECT_EQ(h1_representatives(rho).cols(), c.h1);
        }
    }
}

TEST(Cohomology, TraversalMatchesFiniteDifferenceOracle)
{
    for (const Representation& rho : polished(2, 2, 0.2, 3, 11)) {
        const LieAlgebra alg(2);
        const RealMatrix fd = finite_difference_jacobian(rho, 1e-5);
        EXPECT_LT((fd - traversal_matrix(rho, alg)).norm(), 1e-8);
        const RealMatrix z1 = cocycle_space(rho);
        EXPECT_LT((fd * z1).norm(), 1e-8);
        Eigen::JacobiSVD<RealMatrix> svd(fd);
        EXPECT_GT(svd.singularValues()(2), 1e-3);
    }
}

TEST(Cohomology, CocyclesAndCoboundaries)
{
    for (const Representation& rho : polished(2, 3, 0.5, 2, 12)) {
        const CohomologyBases b = cohomology_bases(rho);
        for (Eigen::Index i = 0; i < b.z1.cols(); ++i)
            EXPECT_LE(TangentCocycle(rho, b.z1.col(i)).relator_residual(), 1e-10);
        const RealMatrix projected = b.z1 * (b.z1.transpose() * b.b1);
        EXPECT_LE((b.b1 - projected).norm(), 1e-10);
        EXPECT_LE((b.h1.transpose() * b.b1).norm(), 1e-10);
        EXPECT_LE((b.h1.transpose() * b.h1 - RealMatrix::Identity(b.h1.cols(), b.h1.cols())).norm(), 1e-10);
    }
}

TEST(Cohomology, TrivialRepresentation)
{
    const Representation rho = Representation::trivial(Presentation::surface(2), 2);
    EXPECT_EQ(coboundary_space(rho).cols(), 0);
    EXPECT_EQ(cocycle_space(rho).cols(), 12);
    EXPECT_THROW(symplectic_matrix(rho), PreconditionError);
}

TEST(Cohomology, RequiresPolishedPoint)
{
    BatchOptions o;
    o.samples = 1;
    o.epsilon = 0.2;
    const Representation raw = sample_batch(Presentation::surface(2), 2, o).samples[0];
    EXPECT_THROW(cocycle_space(raw), PreconditionError);
    EXPECT_THROW(symplectic_matrix(raw), PreconditionError);
}

TEST(CupProduct, SkewBilinearAndDegenerateOnCoboundaries)
{
    std::mt19937_64 gen(13);
    std::normal_distribution<double> normal;
    for (int n : {2, 3}) {
        for (const Representation& rho : polished(2, n, n == 2 ? 0.2 : 0.5, 2, 14)) {
            const CohomologyBases b = cohomology_bases(rho);
            auto random_cocycle = [&] {
                RealVector w(b.z1.cols());
                for (Eigen::Index i = 0; i < w.size(); ++i)
                    w(i) = normal(gen);
                return RealVector(b.z1 * w);
            };
            for (int t = 0; t < 5; ++t) {
                const RealVector c1 = random_cocycle(), c2 = random_cocycle(), c3 = random_cocycle();
                EXPECT_NEAR(cup_symplectic(rho, c1, c1), 0.0, 1e-10);
                EXPECT_NEAR(cup_symplectic(rho, c1, c2), -cup_symplectic(rho, c2, c1), 1e-10);
                const double alpha = normal(gen), beta = normal(gen);
                EXPECT_NEAR(cup_symplectic(rho, alpha * c1 + beta * c2, c3),
                            alpha * cup_symplectic(rho, c1, c3) + beta * cup_symplectic(rho, c2, c3), 1e-10);
                for (Eigen::Index k = 0; k < b.b1.cols(); ++k) {
                    const RealVector delta = b.b1.col(k);
                    EXPECT_LE(std::abs(cup_symplectic(rho, delta, c1)), 1e-8 * delta.norm() * c1.norm());
                }
            }
        }
    }
}

TEST(CupProduct, InvariantUnderHandleTwists)
{
    // Orientation-preserving automorphisms fix the fundamental class, so
    // pulling both cocycles back along phi preserves the pairing.
    std::mt19937_64 gen(15);
    std::normal_distribution<double> normal;
    const auto twists = mcg_generators(2);
    const Automorphism composite = twists[0].compose(twists[3]).compose(twists[1].inverse());
    for (const Representation& rho : polished(2, 2, 0.2, 3, 16)) {
        const RealMatrix z1 = cocycle_space(rho);
        RealVector w1(z1.cols()), w2(z1.cols());
        for (Eigen::Index i = 0; i < w1.size(); ++i) {
            w1(i) = normal(gen);
            w2(i) = normal(gen);
        }
        const RealVector c1 = z1 * w1, c2 = z1 * w2;
        const double value = cup_symplectic(rho, c1, c2);
        ASSERT_GT(std::abs(value), 1e-6);
        std::vector<Automorphism> all = twists;
        all.push_back(composite);
        for (const auto& phi : all) {
            const Representation moved = compose_rep(rho, phi);
            EXPECT_NEAR(cup_symplectic(moved, pull_back(rho, phi, c1), pull_back(rho, phi, c2)), value,
                        1e-10 * (1 + std::abs(value)))
                << phi.label();
        }
    }
}

TEST(SymplecticMatrix, SkewAndNondegenerate)
{
    for (const auto& [g, n, eps] : {std::tuple{2, 2, 0.2}, std::tuple{2, 3, 0.5}, std::tuple{3, 2, 0.5}}) {
        for (const Representation& rho : polished(g, n, eps, 3, 17)) {
            const SymplecticMatrix m = symplectic_matrix(rho);
            EXPECT_EQ(m.entries.rows(), (2 * g - 2) * (n * n - 1));
            EXPECT_LE(m.skew_residual, 1e-10);
            EXPECT_GE(m.min_sv(), 1e-6 * m.max_sv());
            EXPECT_EQ(m.z1_dim - m.b1_dim, m.h1_dim());
        }
    }
}

TEST(SymplecticMatrix, TwistTransportInvariance)
{
    const auto reps = polished(2, 2, 0.2, 2, 18);
    for (const Representation& rho : reps) {
        const SymplecticMatrix m = symplectic_matrix(rho);
        for (const auto& u : CenterCharacter::enumerate(4, 2)) {
            const Representation moved = twist(rho, u);
            const RealMatrix p = pairing_matrix(moved, m.basis, m.basis);
            EXPECT_LE((p - m.entries).norm(), 1e-10 * (1 + m.entries.norm()));
        }
    }
}

TEST(RelatorDerivative, QuadraticDecay)
{
    for (const Representation& rho : polished(2, 2, 0.2, 3, 19)) {
        const RealMatrix z1 = cocycle_space(rho);
        RealVector x = RealVector::Zero(z1.rows());
        x(0) = 1.0;
        x(4) = -0.5;
        for (const RealVector& dir : {RealVector(z1.col(0)), x}) {
            const double e3 = relator_derivative_error(rho, dir, 1e-3);
            const double e4 = relator_derivative_error(rho, dir, 1e-4);
            EXPECT_GT(e3 / e4, 50.0);
            EXPECT_LT(e3 / e4, 200.0);
        }
    }
}

TEST(CupProduct, MatrixFormMatchesLetterEvaluation)
{
    std::mt19937_64 gen(20);
    std::normal_distribution<double> normal;
    for (const auto& [g, n] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 3}}) {
        RandomStream r(21, static_cast<std::uint64_t>(g * 10 + n));
        // The identity is purely algebraic, so an unconstrained tuple will do.
        const Representation rho = support::haar_tuple(Presentation::surface(g), n, r);
        const int dim = 2 * g * (n * n - 1);
        RealMatrix left(dim, 3), right(dim, 4);
        for (Eigen::Index i = 0; i < left.size(); ++i)
            left(i) = normal(gen);
        for (Eigen::Index i = 0; i < right.size(); ++i)
            right(i) = normal(gen);
        const RealMatrix p = pairing_matrix(rho, left, right);
        for (Eigen::Index i = 0; i < left.cols(); ++i)
            for (Eigen::Index j = 0; j < right.cols(); ++j)
                EXPECT_NEAR(p(i, j), cup_symplectic(rho, left.col(i), right.col(j)), 1e-11);
    }
}
