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

#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "charvar/error.hpp"
#include "charvar/homology.hpp"
#include "charvar/words.hpp"

namespace charvar {

/**
 * Endomorphism of the free group on the presentation's generators, given by
 * the image of each generator, optionally paired with its inverse.
 *
 * The shipped constructors (mcg_generators, nielsen_generators) always
 * supply the inverse. from_images() searches for one by Nielsen reduction
 * and leaves it empty when the search fails.
 */
class Automorphism {
public:
    Automorphism(Presentation p, std::vector<Word> images, std::optional<std::vector<Word>> inverse,
                 std::string label)
        : presentation_(p), images_(std::move(images)), inverse_(std::move(inverse)),
          label_(std::move(label))
    {
        check_images(images_);
        if (inverse_)
            check_images(*inverse_);
    }

    static Automorphism identity(const Presentation& p)
    {
        std::vector<Word> gens;
        for (int j = 1; j <= p.generator_count(); ++j)
            gens.push_back(Word::generator(j));
        return Automorphism(p, gens, gens, "identity");
    }

    static Automorphism from_images(const Presentation& p, std::vector<Word> images,
                                    std::string label);

    const Presentation& presentation() const { return presentation_; }
    const std::string& label() const { return label_; }
    std::span<const Word> images() const { return images_; }
    bool has_inverse() const { return inverse_.has_value(); }

    Automorphism inverse() const
    {
        if (!inverse_)
            throw PreconditionError("automorphism '" + label_ + "' has no known inverse");
        return Automorphism(presentation_, *inverse_, images_, label_ + "^-1");
    }

    /// Substitutes images letter by letter (inverse letters get inverted images).
    Word apply(const Word& w) const
    {
        std::vector<Letter> out;
        for (const Letter& l : w.letters()) {
            const Word& img = images_[static_cast<std::size_t>(l.generator - 1)];
            if (l.sign > 0) {
                out.insert(out.end(), img.letters().begin(), img.letters().end());
            } else {
                const Word inv = img.inverse();
                out.insert(out.end(), inv.letters().begin(), inv.letters().end());
            }
        }
        return Word::reduce(out);
    }

    /// phi.compose(psi) is phi o psi: psi is applied first.
    Automorphism compose(const Automorphism& psi) const
    {
        if (psi.presentation_ != presentation_)
            throw PreconditionError("cannot compose automorphisms of different presentations");
        std::vector<Word> imgs;
        for (const Word& w : psi.images_)
            imgs.push_back(apply(w));
        std::optional<std::vector<Word>> inv;
        if (inverse_ && psi.inverse_) {
            const Automorphism psi_inv = psi.inverse();
            std::vector<Word> v;
            for (const Word& w : *inverse_)
                v.push_back(psi_inv.apply(w));
            inv = std::move(v);
        }
        return Automorphism(presentation_, std::move(imgs), std::move(inv),
                            label_ + "*" + psi.label_);
    }

private:
    void check_images(const std::vector<Word>& imgs) const
    {
        if (static_cast<int>(imgs.size()) != presentation_.generator_count())
            throw PreconditionError("automorphism needs one image per generator");
        for (const Word& w : imgs)
            check_letters(w.letters(), presentation_);
    }

    Presentation presentation_;
    std::vector<Word> images_;
    std::optional<std::vector<Word>> inverse_;
    std::string label_;
};

inline Word apply_automorphism(const Automorphism& phi, const Word& w) { return phi.apply(w); }

namespace detail {

/**
 * Greedy length-reducing Nielsen reduction of the image tuple. The tracked
 * words record the accumulated transformation, so whenever the images reduce
 * to a signed permutation of the generators the tracked words are the
 * preimages of the generators.
 */
inline std::optional<std::vector<Word>> nielsen_inverse(const std::vector<Word>& images)
{
    const std::size_t r = images.size();
    std::vector<Word> cur = images;
    std::vector<Word> track;
    for (std::size_t i = 0; i < r; ++i)
        track.push_back(Word::generator(static_cast<int>(i + 1)));

    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t i = 0; i < r; ++i) {
            if (cur[i].empty())
                return std::nullopt;
            for (std::size_t j = 0; j < r; ++j) {
                if (i == j)
                    continue;
                for (int side = 0; side < 2; ++side) {
                    for (int e : {+1, -1}) {
                        const Word uj = e > 0 ? cur[j] : cur[j].inverse();
                        const Word tj = e > 0 ? track[j] : track[j].inverse();
                        Word cand = side == 0 ? cur[i] * uj : uj * cur[i];
                        if (cand.size() < cur[i].size()) {
                            track[i] = side == 0 ? track[i] * tj : tj * track[i];
                            cur[i] = std::move(cand);
                            progress = true;
                        }
                    }
                }
            }
        }
    }

    std::vector<Word> inverse(r);
    std::vector<bool> seen(r, false);
    for (std::size_t i = 0; i < r; ++i) {
        if (cur[i].size() != 1)
            return std::nullopt;
        const Letter l = cur[i][0];
        const auto target = static_cast<std::size_t>(l.generator - 1);
        if (seen[target])
            return std::nullopt;
        seen[target] = true;
        inverse[target] = l.sign > 0 ? track[i] : track[i].inverse();
    }
    return inverse;
}

} // namespace detail

inline Automorphism Automorphism::from_images(const Presentation& p, std::vector<Word> images,
                                              std::string label)
{
    if (static_cast<int>(images.size()) != p.generator_count())
        throw PreconditionError("automorphism needs one image per generator");
    auto inverse = detail::nielsen_inverse(images);
    return Automorphism(p, std::move(images), std::move(inverse), std::move(label));
}

struct AutomorphismReport {
    bool relator_ok = false;
    bool invertible_ok = false;

    bool ok() const { return relator_ok && invertible_ok; }
};

/**
 * relator_ok: phi(R) is conjugate to R or R^-1 (compared after cyclic
 * reduction, exactly). Always true for free presentations.
 * invertible_ok: the stored inverse composes with phi to the identity on
 * every generator, in both orders.
 */
inline AutomorphismReport verify_automorphism(const Automorphism& phi, const Presentation& p)
{
    AutomorphismReport report;
    if (phi.presentation() != p)
        return report;

    if (p.is_surface()) {
        const Word rel = surface_relator(p.genus());
        const Word image = cyclically_reduce(phi.apply(rel));
        report.relator_ok =
            is_cyclic_rotation(image, rel) || is_cyclic_rotation(image, rel.inverse());
    } else {
        report.relator_ok = true;
    }

    if (phi.has_inverse()) {
        const Automorphism inv = phi.inverse();
        bool ok = true;
        for (int j = 1; j <= p.generator_count() && ok; ++j) {
            const Word x = Word::generator(j);
            ok = phi.apply(inv.apply(x)) == x && inv.apply(phi.apply(x)) == x;
        }
        report.invertible_ok = ok;
    }
    return report;
}

/// The generators x_1..x_r as words.
inline std::vector<Word> generator_words(const Presentation& p)
{
    std::vector<Word> gens;
    for (int j = 1; j <= p.generator_count(); ++j)
        gens.push_back(Word::generator(j));
    return gens;
}

/**
 * The 2g handle twists: twist-a<i> sends b_i to b_i a_i, twist-b<i> sends a_i
 * to a_i b_i; all other generators are fixed. Both fix the relator verbatim.
 */
inline std::vector<Automorphism> mcg_generators(int genus)
{
    const Presentation p = Presentation::surface(genus);
    std::vector<Automorphism> out;
    for (int i = 1; i <= genus; ++i) {
        const int a = 2 * i - 1;
        const int b = 2 * i;
        {
            std::vector<Word> f = generator_words(p);
            std::vector<Word> inv = f;
            f[static_cast<std::size_t>(b - 1)] = Word::generator(b) * Word::generator(a);
            inv[static_cast<std::size_t>(b - 1)] = Word::generator(b) * Word::generator(a, -1);
            out.emplace_back(p, std::move(f), std::move(inv), "twist-a" + std::to_string(i));
        }
        {
            std::vector<Word> f = generator_words(p);
            std::vector<Word> inv = f;
            f[static_cast<std::size_t>(a - 1)] = Word::generator(a) * Word::generator(b);
            inv[static_cast<std::size_t>(a - 1)] = Word::generator(a) * Word::generator(b, -1);
            out.emplace_back(p, std::move(f), std::move(inv), "twist-b" + std::to_string(i));
        }
    }
    return out;
}

/// Inversions x_i -> x_i^-1, shears x_i -> x_i x_j (i != j), transpositions.
inline std::vector<Automorphism> nielsen_generators(int rank)
{
    if (rank < 2)
        throw PreconditionError("Nielsen generators require rank >= 2, got " +
                                std::to_string(rank));
    const Presentation p = Presentation::free(rank);
    const std::vector<Word> base = generator_words(p);
    auto at = [](std::vector<Word>& v, int i) -> Word& { return v[static_cast<std::size_t>(i - 1)]; };

    std::vector<Automorphism> out;
    for (int i = 1; i <= rank; ++i) {
        std::vector<Word> f = base;
        at(f, i) = Word::generator(i, -1);
        out.emplace_back(p, f, f, "nielsen-inv-" + std::to_string(i));
    }
    for (int i = 1; i <= rank; ++i) {
        for (int j = 1; j <= rank; ++j) {
            if (i == j)
                continue;
            std::vector<Word> f = base;
            std::vector<Word> inv = base;
            at(f, i) = Word::generator(i) * Word::generator(j);
            at(inv, i) = Word::generator(i) * Word::generator(j, -1);
            out.emplace_back(p, std::move(f), std::move(inv),
                             "nielsen-shear-" + std::to_string(i) + "-" + std::to_string(j));
        }
    }
    for (int i = 1; i <= rank; ++i) {
        for (int j = i + 1; j <= rank; ++j) {
            std::vector<Word> f = base;
            std::swap(at(f, i), at(f, j));
            out.emplace_back(p, f, f,
                             "nielsen-swap-" + std::to_string(i) + "-" + std::to_string(j));
        }
    }
    return out;
}

/// Shipped generators for a presentation: handle twists or Nielsen moves.
inline std::vector<Automorphism> shipped_automorphisms(const Presentation& p)
{
    return p.is_surface() ? mcg_generators(p.genus()) : nielsen_generators(p.size_parameter());
}

/// Integer matrix M of the abelianized action: column j is the class of phi(x_j).
inline std::vector<std::vector<long long>> abelianization_matrix(const Automorphism& phi)
{
    const int r = phi.presentation().generator_count();
    std::vector<std::vector<long long>> m(static_cast<std::size_t>(r),
                                          std::vector<long long>(static_cast<std::size_t>(r), 0));
    for (int j = 0; j < r; ++j)
        for (const Letter& l : phi.images()[static_cast<std::size_t>(j)].letters())
            m[static_cast<std::size_t>(l.generator - 1)][static_cast<std::size_t>(j)] += l.sign;
    return m;
}

/// Exact integer determinant (fraction-free Bareiss elimination).
inline long long integer_determinant(std::vector<std::vector<long long>> m)
{
    const std::size_t r = m.size();
    long long sign = 1;
    long long prev = 1;
    for (std::size_t k = 0; k < r; ++k) {
        if (m[k][k] == 0) {
            std::size_t swap = k + 1;
            while (swap < r && m[swap][k] == 0)
                ++swap;
            if (swap == r)
                return 0;
            std::swap(m[k], m[swap]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < r; ++i) {
            for (std::size_t j = k + 1; j < r; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        }
        prev = m[k][k];
    }
    return r == 0 ? 1 : sign * m[r - 1][r - 1];
}

/// Applies the abelianized action of phi to a homology class.
inline HomologyClass act_on_homology(const Automorphism& phi, const HomologyClass& c)
{
    const auto m = abelianization_matrix(phi);
    std::vector<int> out(m.size(), 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        long long acc = 0;
        for (std::size_t j = 0; j < m.size(); ++j)
            acc += m[i][j] * c[j];
        out[i] = detail::mod(acc, c.modulus());
    }
    return HomologyClass(std::move(out), c.modulus());
}

inline bool abelianization_invertible_mod(const Automorphism& phi, int n)
{
    const long long det = integer_determinant(abelianization_matrix(phi));
    return std::gcd(detail::mod(det, n), n) == 1;
}

} // namespace charvar
