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
#include <cctype>
#include <charconv>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "charvar/error.hpp"

namespace charvar {

enum class PresentationKind { surface, free };

/**
 * A finitely presented group with at most one relator.
 *
 * Surface kind: generators a1,b1,...,ag,bg (indices 1..2g, a_i = 2i-1,
 * b_i = 2i) and the single relator [a1,b1]...[ag,bg]. Free kind: generators
 * x1..xr and no relator.
 */
class Presentation {
public:
    static Presentation surface(int genus)
    {
        if (genus < 2)
            throw PreconditionError("surface presentation requires genus >= 2, got " +
                                    std::to_string(genus));
        return Presentation(PresentationKind::surface, genus);
    }

    static Presentation free(int rank)
    {
        if (rank < 1)
            throw PreconditionError("free presentation requires rank >= 1, got " +
                                    std::to_string(rank));
        return Presentation(PresentationKind::free, rank);
    }

    PresentationKind kind() const { return kind_; }
    bool is_surface() const { return kind_ == PresentationKind::surface; }

    /// Genus for surface kind, rank for free kind.
    int size_parameter() const { return param_; }
    int genus() const { return is_surface() ? param_ : 0; }
    int generator_count() const { return is_surface() ? 2 * param_ : param_; }

    /// Token for generator \p index (1-based); uppercase denotes the inverse.
    std::string generator_name(int index, int sign = +1) const
    {
        char c = 'x';
        int label = index;
        if (is_surface()) {
            c = (index % 2 == 1) ? 'a' : 'b';
            label = (index + 1) / 2;
        }
        if (sign < 0)
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return std::string(1, c) + std::to_string(label);
    }

    friend bool operator==(const Presentation&, const Presentation&) = default;

private:
    Presentation(PresentationKind kind, int param) : kind_(kind), param_(param) {}

    PresentationKind kind_;
    int param_;
};

/// One generator or inverse generator. Generators are 1-based.
struct Letter {
    int generator = 1;
    int sign = +1;

    Letter inverse() const { return {generator, -sign}; }
    friend bool operator==(const Letter&, const Letter&) = default;
};

/// Freely reduced word in the free generators. The empty word is the identity.
class Word {
public:
    Word() = default;

    /// Reduces \p letters freely. No range check against a presentation.
    static Word reduce(std::span<const Letter> letters)
    {
        std::vector<Letter> out;
        out.reserve(letters.size());
        for (const Letter& l : letters) {
            if (!out.empty() && out.back() == l.inverse())
                out.pop_back();
            else
                out.push_back(l);
        }
        return Word(std::move(out));
    }

    static Word generator(int index, int sign = +1) { return Word({Letter{index, sign}}); }

    std::span<const Letter> letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    const Letter& operator[](std::size_t i) const { return letters_[i]; }

    Word inverse() const
    {
        std::vector<Letter> out;
        out.reserve(letters_.size());
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
            out.push_back(it->inverse());
        return Word(std::move(out));
    }

    friend Word operator*(const Word& lhs, const Word& rhs)
    {
        std::vector<Letter> joined(lhs.letters_);
        joined.insert(joined.end(), rhs.letters_.begin(), rhs.letters_.end());
        return reduce(joined);
    }

    friend bool operator==(const Word&, const Word&) = default;

private:
    explicit Word(std::vector<Letter> reduced) : letters_(std::move(reduced)) {}

    std::vector<Letter> letters_;
};

inline void check_letters(std::span<const Letter> letters, const Presentation& p)
{
    for (const Letter& l : letters) {
        if (l.generator < 1 || l.generator > p.generator_count())
            throw PreconditionError("generator index " + std::to_string(l.generator) +
                                    " out of range 1.." +
                                    std::to_string(p.generator_count()));
        if (l.sign != 1 && l.sign != -1)
            throw PreconditionError("letter exponent must be +1 or -1");
    }
}

/// Freely reduced form of \p letters; rejects generators outside \p p.
inline Word free_reduce(std::span<const Letter> letters, const Presentation& p)
{
    check_letters(letters, p);
    return Word::reduce(letters);
}

/// Parses whitespace-separated tokens ("a1 B2 x3") without reducing.
inline std::vector<Letter> parse_letters(std::string_view text, const Presentation& p)
{
    std::vector<Letter> out;
    std::istringstream in{std::string(text)};
    std::string token;
    while (in >> token) {
        if (token.size() < 2)
            throw PreconditionError("malformed word token '" + token + "'");
        const char c = token[0];
        const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        const int sign = (c == lower) ? +1 : -1;
        int label = 0;
        const char* first = token.data() + 1;
        const char* last = token.data() + token.size();
        auto [ptr, ec] = std::from_chars(first, last, label);
        if (ec != std::errc{} || ptr != last || label < 1)
            throw PreconditionError("malformed word token '" + token + "'");
        int index = 0;
        if (p.is_surface()) {
            if (lower == 'a')
                index = 2 * label - 1;
            else if (lower == 'b')
                index = 2 * label;
            else
                throw PreconditionError("token '" + token + "' is not a surface generator");
        } else {
            if (lower != 'x')
                throw PreconditionError("token '" + token + "' is not a free generator");
            index = label;
        }
        out.push_back({index, sign});
    }
    check_letters(out, p);
    return out;
}

inline Word parse_word(std::string_view text, const Presentation& p)
{
    return Word::reduce(parse_letters(text, p));
}

inline std::string format_word(const Word& w, const Presentation& p)
{
    std::string out;
    for (const Letter& l : w.letters()) {
        if (!out.empty())
            out += ' ';
        out += p.generator_name(l.generator, l.sign);
    }
    return out;
}

inline Word commutator(const Word& x, const Word& y) { return x * y * x.inverse() * y.inverse(); }

inline Word power(const Word& w, int k)
{
    Word base = k < 0 ? w.inverse() : w;
    Word out;
    for (int i = 0; i < std::abs(k); ++i)
        out = out * base;
    return out;
}

/// [a1,b1]...[ag,bg], length 4g.
inline Word surface_relator(int genus)
{
    if (genus < 2)
        throw PreconditionError("surface relator requires genus >= 2, got " +
                                std::to_string(genus));
    std::vector<Letter> letters;
    for (int i = 1; i <= genus; ++i) {
        const int a = 2 * i - 1;
        const int b = 2 * i;
        letters.insert(letters.end(), {{a, +1}, {b, +1}, {a, -1}, {b, -1}});
    }
    return Word::reduce(letters);
}

/// Strips matching inverse letters from both ends of a reduced word.
inline Word cyclically_reduce(const Word& w)
{
    auto letters = w.letters();
    std::size_t lo = 0;
    std::size_t hi = letters.size();
    while (hi - lo >= 2 && letters[lo] == letters[hi - 1].inverse()) {
        ++lo;
        --hi;
    }
    return Word::reduce(letters.subspan(lo, hi - lo));
}

/// True iff \p a is a cyclic rotation of \p b, letter for letter.
inline bool is_cyclic_rotation(const Word& a, const Word& b)
{
    if (a.size() != b.size())
        return false;
    if (a.empty())
        return true;
    const auto la = a.letters();
    const auto lb = b.letters();
    const std::size_t n = la.size();
    for (std::size_t shift = 0; shift < n; ++shift) {
        bool match = true;
        for (std::size_t i = 0; i < n && match; ++i)
            match = la[i] == lb[(i + shift) % n];
        if (match)
            return true;
    }
    return false;
}

} // namespace charvar
