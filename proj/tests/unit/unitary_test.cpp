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

#include <numbers>

#include "charvar/random.hpp"
#include "charvar/stats.hpp"
#include "charvar/unitary.hpp"

using namespace charvar;

namespace {

Matrix random_skew(int n, RandomStream& r)
{
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < g.size(); ++i)
        g(i) = {r.gaussian(), r.gaussian()};
    Matrix x = g - g.adjoint();
    x -= (x.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);
    return x;
}

} // namespace

TEST(RootOfUnity, ExactQuarterTurns)
{
    EXPECT_EQ(root_of_unity(2, 1), Complex(-1, 0));
    EXPECT_EQ(root_of_unity(2, 0), Complex(1, 0));
    EXPECT_EQ(root_of_unity(4, 1), Complex(0, 1));
    EXPECT_EQ(root_of_unity(4, -1), Complex(0, -1));
    EXPECT_EQ(root_of_unity(4, 6), Complex(-1, 0));
    EXPECT_NEAR(std::abs(root_of_unity(3, 1) - std::polar(1.0, 2 * std::numbers::pi / 3)), 0.0, 1e-15);
}

TEST(CenterRoot, Homomorphism)
{
    for (int n : {2, 4})
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                EXPECT_EQ(center_root(n, j) * center_root(n, k), center_root(n, j + k));
    for (int n : {3, 5})
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                EXPECT_LT(frobenius_distance(center_root(n, j) * center_root(n, k), center_root(n, j + k)), 1e-14);
    for (int n : {2, 3, 4, 5}) {
        Matrix p = Matrix::Identity(n, n);
        for (int k = 0; k < n; ++k)
            p *= center_root(n, 1);
        EXPECT_LT(distance_to_identity(p), 1e-14);
        EXPECT_NEAR(std::abs(center_root(n, 1).determinant() - 1.0), 0.0, 1e-14);
    }
}

TEST(FrobeniusDistance, ShapeMismatch)
{
    EXPECT_THROW(frobenius_distance(Matrix::Identity(2, 2), Matrix::Identity(3, 3)), PreconditionError);
    EXPECT_DOUBLE_EQ(frobenius_distance(Matrix::Identity(2, 2), -Matrix::Identity(2, 2)), std::sqrt(8.0));
}

TEST(HaarSample, IsSpecialUnitary)
{
    RandomStream r(10, 0);
    for (int n : {2, 3, 4, 5, 6})
        for (int i = 0; i < 200; ++i) {
            const Matrix u = haar_sample(n, r);
            ASSERT_EQ(u.rows(), n);
            EXPECT_TRUE(is_special_unitary(u, 1e-12));
        }
    EXPECT_THROW(haar_sample(1, r), PreconditionError);
}

TEST(HaarSample, Su2EigenangleDistribution)
{
    // tr U = 2 cos(theta), theta has density (2/pi) sin^2 on [0, pi].
    RandomStream r(11, 0);
    RandomStream ref_rng(12, 0);
    const std::size_t m = 40000;
    std::vector<double> got(m), ref(m);
    for (std::size_t i = 0; i < m; ++i) {
        got[i] = std::acos(std::clamp(haar_sample(2, r).trace().real() / 2.0, -1.0, 1.0));
        const double p = ref_rng.uniform();
        double lo = 0, hi = std::numbers::pi;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            ((mid - std::sin(mid) * std::cos(mid)) / std::numbers::pi < p ? lo : hi) = mid;
        }
        ref[i] = 0.5 * (lo + hi);
    }
    EXPECT_LT(ks_statistic(got, ref), ks_critical_value(0.001, m, m));
}

TEST(HaarSample, TraceMomentsDistinguishSpecialUnitary)
{
    // E|tr U|^2 = 1 for n >= 2; E (tr U)^n = 1 on SU(n) but 0 on U(n).
    for (int n : {2, 3, 4}) {
        RandomStream r(20 + static_cast<std::uint64_t>(n), 0);
        const int m = 60000;
        std::vector<double> abs2(m), pw_re(m), pw_im(m), tr_re(m);
        for (int i = 0; i < m; ++i) {
            const Complex t = haar_sample(n, r).trace();
            abs2[static_cast<std::size_t>(i)] = std::norm(t);
            const Complex tn = std::pow(t, n);
            pw_re[static_cast<std::size_t>(i)] = tn.real();
            pw_im[static_cast<std::size_t>(i)] = tn.imag();
            tr_re[static_cast<std::size_t>(i)] = t.real();
        }
        auto se = [&](const std::vector<double>& v) { return std::sqrt(sample_variance(v) / m); };
        EXPECT_NEAR(pairwise_mean(abs2), 1.0, 5 * se(abs2)) << n;
        EXPECT_NEAR(pairwise_mean(pw_re), 1.0, 5 * se(pw_re)) << n;
        EXPECT_NEAR(pairwise_mean(pw_im), 0.0, 5 * se(pw_im)) << n;
        EXPECT_NEAR(pairwise_mean(tr_re), 0.0, 5 * se(tr_re)) << n;
    }
}

TEST(HaarSample, LeftInvariance)
{
    // U and V U have the same law; compare |tr|^2 via KS for a fixed V.
    RandomStream r(30, 0), s(31, 0), v_rng(32, 0);
    const Matrix v = haar_sample(3, v_rng);
    const std::size_t m = 20000;
    std::vector<double> a(m), b(m);
    for (std::size_t i = 0; i < m; ++i) {
        a[i] = std::norm(haar_sample(3, r).trace());
        b[i] = std::norm((v * haar_sample(3, s)).trace());
    }
    EXPECT_LT(ks_statistic(a, b), ks_critical_value(0.001, m, m));
}

TEST(Projection, RecoversNearbyGroupElement)
{
    RandomStream r(40, 0);
    for (int n : {2, 3, 4}) {
        const Matrix u = haar_sample(n, r);
        Matrix noise(n, n);
        for (Eigen::Index i = 0; i < noise.size(); ++i)
            noise(i) = {1e-6 * r.gaussian(), 1e-6 * r.gaussian()};
        const Matrix p = project_to_special_unitary(u + noise);
        EXPECT_TRUE(is_special_unitary(p, 1e-13));
        EXPECT_LT(frobenius_distance(p, u), 1e-5);
        EXPECT_LT(frobenius_distance(project_to_special_unitary(u), u), 1e-13);
    }
}

TEST(ExpmSkew, MatchesTaylorSeries)
{
    RandomStream r(50, 0);
    for (int n : {2, 3, 4}) {
        const Matrix x = 0.7 * random_skew(n, r);
        Matrix series = Matrix::Identity(n, n), term = Matrix::Identity(n, n);
        for (int k = 1; k < 60; ++k) {
            term = term * x / static_cast<double>(k);
            series += term;
        }
        EXPECT_LT(frobenius_distance(expm_skew(x), series), 1e-11);
        EXPECT_TRUE(is_special_unitary(expm_skew(x), 1e-12));
    }
}

TEST(LieAlgebra, BasisIsOrthonormalForBilinearForm)
{
    for (int n : {2, 3, 4}) {
        const LieAlgebra g(n);
        ASSERT_EQ(g.dimension(), n * n - 1);
        for (int i = 0; i < g.dimension(); ++i) {
            EXPECT_TRUE(is_lie_algebra_element(g.basis()[static_cast<std::size_t>(i)], 1e-14));
            for (int j = 0; j < g.dimension(); ++j)
                EXPECT_NEAR(bilinear_form(g.basis()[static_cast<std::size_t>(i)], g.basis()[static_cast<std::size_t>(j)]),
                            i == j ? 1.0 : 0.0, 1e-14);
        }
    }
}

TEST(LieAlgebra, CoordinatesRoundTrip)
{
    RandomStream r(60, 0);
    for (int n : {2, 3}) {
        const LieAlgebra g(n);
        const Matrix x = random_skew(n, r);
        EXPECT_LT(frobenius_distance(g.element(g.coordinates(x)), x), 1e-13);
    }
}

TEST(AdjointAction, LeftActionAndInvariantForm)
{
    RandomStream r(70, 0);
    for (int n : {2, 3, 4}) {
        const LieAlgebra g(n);
        for (int t = 0; t < 20; ++t) {
            const Matrix u = haar_sample(n, r), v = haar_sample(n, r);
            const Matrix x = random_skew(n, r), y = random_skew(n, r);
            EXPECT_LT(frobenius_distance(adjoint_action(u * v, x), adjoint_action(u, adjoint_action(v, x))), 1e-12);
            EXPECT_NEAR(bilinear_form(adjoint_action(u, x), adjoint_action(u, y)), bilinear_form(x, y), 1e-11);
            EXPECT_TRUE(is_lie_algebra_element(adjoint_action(u, x), 1e-12));
            const RealMatrix a = g.ad_matrix(u);
            EXPECT_LT((a.transpose() * a - RealMatrix::Identity(g.dimension(), g.dimension())).norm(), 1e-12);
            EXPECT_LT((g.ad_matrix(u * v) - a * g.ad_matrix(v)).norm(), 1e-12);
        }
    }
}

TEST(BilinearForm, PositiveOnSkew)
{
    RandomStream r(80, 0);
    const Matrix x = random_skew(3, r);
    EXPECT_GT(bilinear_form(x, x), 0.0);
    EXPECT_NEAR(bilinear_form(x, x), x.squaredNorm(), 1e-12);
}

TEST(CenterRoot, Examples)
{
    EXPECT_EQ(center_root(2, 1), Matrix(-Matrix::Identity(2, 2)));
    EXPECT_EQ(center_root(4, 2), Matrix(-Matrix::Identity(4, 4)));
    EXPECT_EQ(center_root(5, 0), Matrix(Matrix::Identity(5, 5)));
}

TEST(FrobeniusDistance, UnitaryInvariance)
{
    RandomStream r(90, 0);
    for (int n : {2, 3, 4}) {
        const Matrix a = haar_sample(n, r), b = haar_sample(n, r);
        const Matrix u = haar_sample(n, r), v = haar_sample(n, r);
        EXPECT_NEAR(frobenius_distance(u * a * v, u * b * v), frobenius_distance(a, b), 1e-12);
        EXPECT_NEAR(distance_to_identity(a.adjoint()), distance_to_identity(a), 1e-12);
        EXPECT_EQ(frobenius_distance(a, a), 0.0);
    }
}

TEST(AdjointAction, FixedByIdentityAndCenter)
{
    RandomStream r(91, 0);
    for (int n : {2, 3, 4}) {
        const Matrix x = random_skew(n, r);
        EXPECT_LT(frobenius_distance(adjoint_action(Matrix::Identity(n, n), x), x), 1e-15);
        for (int k = 0; k < n; ++k)
            EXPECT_LT(frobenius_distance(adjoint_action(center_root(n, k), x), x), 1e-14);
    }
    EXPECT_THROW(adjoint_action(Matrix::Identity(2, 2), Matrix::Zero(3, 3)), PreconditionError);
}
