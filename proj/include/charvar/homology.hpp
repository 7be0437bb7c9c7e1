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

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "charvar/error.hpp"
#include "charvar/words.hpp"

namespace charvar {

namespace detail {

inline int mod(long long value, int n)
{
    long long r = value % n;
    return static_cast<int>(r < 0 ? r + n : r);
}

inline std::vector<int> reduce_coords(std::vector<int> coords, int n)
{
    for (int& c : coords)
        c = mod(c, n);
    return coords;
}

} // namespace detail

/// A vector over Z/n, entries kept in 0..n-1.
class ModularVector {
public:
    ModularVector(std::vector<int> coords, int modulus)
        : coords_(detail::reduce_coords(std::move(coords), check_modulus(modulus))),
          modulus_(modulus)
    {
    }

    static ModularVector zero(int rank, int modulus)
    {
        return ModularVector(std::vector<int>(static_cast<std::size_t>(rank), 0), modulus);
    }

    int modulus() const { return modulus_; }
    int rank() const { return static_cast<int>(coords_.size()); }
    std::span<const int> coords() const { return coords_; }
    int operator[](std::size_t i) const { return coords_[i]; }

    bool is_zero() const
    {
        return std::all_of(coords_.begin(), coords_.end(), [](int c) { return c == 0; });
    }

    friend bool operator==(const ModularVector&, const ModularVector&) = default;

protected:
    static int check_modulus(int n)
    {
        if (n < 1)
            throw PreconditionError("modulus must be positive");
        return n;
    }

    void check_compatible(const ModularVector& other) const
    {
        if (other.modulus_ != modulus_)
            throw PreconditionError("modulus mismatch: " + std::to_string(modulus_) + " vs " +
                                    std::to_string(other.modulus_));
        if (other.coords_.size() != coords_.size())
            throw PreconditionError("rank mismatch: " + std::to_string(coords_.size()) +
                                    " vs " + std::to_string(other.coords_.size()));
    }

    std::vector<int> coords_;
    int modulus_;
};

/// Mod-n first homology class, coordinates in the generator basis.
class HomologyClass : public ModularVector {
public:
    using ModularVector::ModularVector;

    HomologyClass(const ModularVector& v) : ModularVector(v) {}

    static HomologyClass zero(int rank, int modulus) { return ModularVector::zero(rank, modulus); }

    friend HomologyClass operator+(const HomologyClass& x, const HomologyClass& y)
    {
        x.check_compatible(y);
        std::vector<int> out(x.coords_);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += y.coords_[i];
        return HomologyClass(std::move(out), x.modulus_);
    }

    friend HomologyClass operator-(const HomologyClass& x, const HomologyClass& y)
    {
        x.check_compatible(y);
        std::vector<int> out(x.coords_);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] -= y.coords_[i];
        return HomologyClass(std::move(out), x.modulus_);
    }
};

/**
 * An element u of Hom(pi, Z/n), stored by its values on the generators.
 *
 * Any assignment is a homomorphism on the surface group since the relator
 * is a product of commutators and Z/n is abelian.
 */
class CenterCharacter : public ModularVector {
public:
    using ModularVector::ModularVector;

    CenterCharacter(const ModularVector& v) : ModularVector(v) {}

    static CenterCharacter zero(int rank, int modulus) { return ModularVector::zero(rank, modulus); }

    friend CenterCharacter operator+(const CenterCharacter& x, const CenterCharacter& y)
    {
        x.check_compatible(y);
        std::vector<int> out(x.coords_);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += y.coords_[i];
        return CenterCharacter(std::move(out), x.modulus_);
    }

    /// All n^rank characters in lexicographic order (first coordinate slowest).
    static std::vector<CenterCharacter> enumerate(int rank, int modulus)
    {
        std::vector<CenterCharacter> out;
        std::vector<int> digits(static_cast<std::size_t>(rank), 0);
        while (true) {
            out.emplace_back(digits, modulus);
            int pos = rank - 1;
            while (pos >= 0 && ++digits[static_cast<std::size_t>(pos)] == modulus) {
                digits[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0)
                break;
        }
        return out;
    }
};

/// Abelianized class of a single word.
inline HomologyClass homology_class(const Word& w, int n, const Presentation& p)
{
    if (n < 2)
        throw PreconditionError("center order n must be >= 2");
    check_letters(w.letters(), p);
    std::vector<int> coords(static_cast<std::size_t>(p.generator_count()), 0);
    for (const Letter& l : w.letters())
        coords[static_cast<std::size_t>(l.generator - 1)] += l.sign;
    return HomologyClass(std::move(coords), n);
}

/// Sum of the classes of every loop in the tuple, reduced mod n.
inline HomologyClass total_homology_class(std::span<const Word> loops, int n, const Presentation& p)
{
    HomologyClass total = HomologyClass::zero(p.generator_count(), n);
    for (const Word& w : loops)
        total = total + homology_class(w, n, p);
    return total;
}

/// Natural pairing Hom(pi, Z/n) x H_1(Sigma; Z/n) -> Z/n.
inline int pair_character(const CenterCharacter& u, const HomologyClass& c)
{
    if (u.modulus() != c.modulus())
        throw PreconditionError("modulus mismatch in pairing: " + std::to_string(u.modulus()) +
                                " vs " + std::to_string(c.modulus()));
    if (u.rank() != c.rank())
        throw PreconditionError("rank mismatch in pairing");
    long long acc = 0;
    for (std::size_t j = 0; j < static_cast<std::size_t>(u.rank()); ++j)
        acc += static_cast<long long>(u[j]) * c[j];
    return detail::mod(acc, u.modulus());
}

} // namespace charvar
