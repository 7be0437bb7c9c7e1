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
#include "test_support.hpp"

using namespace charvar;

namespace {

const Presentation g2 = Presentation::surface(2);
const Presentation f2 = Presentation::free(2);

Automorphism find(const std::vector<Automorphism>& all, const std::string& label)
{
    for (const auto& a : all)
        if (a.label() == label)
            return a;
    throw std::runtime_error("missing " + label);
}

} // namespace

TEST(McgGenerators, CountAndLabels)
{
    const auto gens = mcg_generators(2);
    ASSERT_EQ(gens.size(), 4u);
    EXPECT_EQ(gens[0].label(), "twist-a1");
    EXPECT_EQ(mcg_generators(3).size(), 6u);
    EXPECT_THROW(mcg_generators(1), PreconditionError);
}

TEST(McgGenerators, TwistImages)
{
    const Automorphism ta1 = find(mcg_generators(2), "twist-a1");
    EXPECT_EQ(format_word(ta1.apply(parse_word("b1", g2)), g2), "b1 a1");
    EXPECT_EQ(format_word(ta1.apply(parse_word("B1", g2)), g2), "A1 B1");
    EXPECT_EQ(format_word(ta1.inverse().apply(parse_word("b1", g2)), g2), "b1 A1");
}

TEST(McgGenerators, RelatorFixedLetterForLetter)
{
    // [a1, b1 a1] expands and reduces back to [a1, b1].
    const Word r = surface_relator(2);
    for (const auto& phi : mcg_generators(2))
        EXPECT_EQ(phi.apply(r), r) << phi.label();
    for (const auto& phi : mcg_generators(3))
        EXPECT_EQ(phi.apply(surface_relator(3)), surface_relator(3)) << phi.label();
}

TEST(McgGenerators, AllPassVerification)
{
    for (int g : {2, 3, 4})
        for (const auto& phi : mcg_generators(g)) {
            const auto report = verify_automorphism(phi, Presentation::surface(g));
            EXPECT_TRUE(report.relator_ok) << phi.label();
            EXPECT_TRUE(report.invertible_ok) << phi.label();
        }
}

TEST(NielsenGenerators, CountAndImages)
{
    const auto gens = nielsen_generators(2);
    EXPECT_GE(gens.size(), 5u);
    EXPECT_EQ(format_word(find(gens, "nielsen-shear-1-2").apply(parse_word("x1", f2)), f2), "x1 x2");
    EXPECT_THROW(nielsen_generators(1), PreconditionError);
    for (const auto& phi : nielsen_generators(3))
        EXPECT_TRUE(verify_automorphism(phi, Presentation::free(3)).ok()) << phi.label();
}

TEST(NielsenGenerators, InversionIsInvolution)
{
    const Automorphism inv = find(nielsen_generators(2), "nielsen-inv-1");
    const Automorphism twice = inv.compose(inv);
    for (int j = 1; j <= 2; ++j)
        EXPECT_EQ(twice.apply(Word::generator(j)), Word::generator(j));
}

TEST(ApplyAutomorphism, IdentityFixesWords)
{
    std::mt19937_64 gen(1);
    const auto id = Automorphism::identity(g2);
    for (int i = 0; i < 50; ++i) {
        const Word x = support::random_word(gen, g2, 15);
        EXPECT_EQ(apply_automorphism(id, x), x);
    }
}

TEST(ApplyAutomorphism, CompositionAndInverses)
{
    std::mt19937_64 gen(2);
    const auto gens = mcg_generators(2);
    for (int i = 0; i < 200; ++i) {
        const auto& phi = gens[static_cast<std::size_t>(i) % gens.size()];
        const auto& psi = gens[static_cast<std::size_t>(i * 7 + 3) % gens.size()];
        const Word x = support::random_word(gen, g2, 15);
        EXPECT_EQ(phi.compose(psi).apply(x), phi.apply(psi.apply(x)));
        EXPECT_EQ(phi.apply(x.inverse()), phi.apply(x).inverse());
        EXPECT_EQ(phi.inverse().apply(phi.apply(x)), x);
    }
}

TEST(VerifyAutomorphism, SquaringMapNotInvertible)
{
    std::vector<Word> images;
    for (int j = 1; j <= 4; ++j)
        images.push_back(Word::generator(j));
    images[0] = parse_word("a1 a1", g2);
    const auto phi = Automorphism::from_images(g2, images, "square-a1");
    const auto report = verify_automorphism(phi, g2);
    EXPECT_FALSE(report.invertible_ok);
    EXPECT_FALSE(report.relator_ok);
}

TEST(VerifyAutomorphism, IdentityPasses)
{
    EXPECT_TRUE(verify_automorphism(Automorphism::identity(g2), g2).ok());
    EXPECT_TRUE(verify_automorphism(Automorphism::identity(f2), f2).ok());
}

TEST(VerifyAutomorphism, NielsenSearchRecoversInverseOfComposite)
{
    const auto gens = mcg_generators(2);
    const Automorphism composite = gens[0].compose(gens[1]).compose(gens[3]).compose(gens[1]);
    std::vector<Word> images(composite.images().begin(), composite.images().end());
    const auto rebuilt = Automorphism::from_images(g2, images, "composite");
    ASSERT_TRUE(rebuilt.has_inverse());
    EXPECT_TRUE(verify_automorphism(rebuilt, g2).ok());
}

TEST(VerifyAutomorphism, NonRelatorPreservingMapRejected)
{
    // Swapping a1 and a2 is a free automorphism but does not preserve R.
    std::vector<Word> images{Word::generator(3), Word::generator(2), Word::generator(1), Word::generator(4)};
    const auto phi = Automorphism::from_images(g2, images, "swap-a");
    const auto report = verify_automorphism(phi, g2);
    EXPECT_TRUE(report.invertible_ok);
    EXPECT_FALSE(report.relator_ok);
}

TEST(Abelianization, ActionMatchesWordClassesAndIsInvertible)
{
    std::mt19937_64 gen(9);
    for (int n : {2, 3, 4}) {
        for (const auto& phi : mcg_generators(2)) {
            EXPECT_TRUE(abelianization_invertible_mod(phi, n)) << phi.label();
            for (int i = 0; i < 30; ++i) {
                const Word x = support::random_word(gen, g2, 12);
                EXPECT_EQ(homology_class(phi.apply(x), n, g2), act_on_homology(phi, homology_class(x, n, g2)));
            }
        }
        for (const auto& phi : nielsen_generators(3))
            EXPECT_TRUE(abelianization_invertible_mod(phi, n)) << phi.label();
    }
}

TEST(Abelianization, IntegerDeterminant)
{
    EXPECT_EQ(integer_determinant({{2, 1}, {1, 1}}), 1);
    EXPECT_EQ(integer_determinant({{0, 1}, {1, 0}}), -1);
    EXPECT_EQ(integer_determinant({{1, 2, 3}, {4, 5, 6}, {7, 8, 10}}), -3);
    EXPECT_EQ(integer_determinant({{2, 0}, {0, 1}}), 2);
}
