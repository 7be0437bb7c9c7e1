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
#include <string>
#include <vector>

#include "charvar/homology.hpp"
#include "charvar/representation.hpp"
#include "charvar/sampler.hpp"
#include "charvar/stats.hpp"
#include "charvar/words.hpp"

namespace charvar {

/**
 * A tuple of loops (gamma_1, ..., gamma_s) with its total mod-n homology
 * class. The empty tuple is the constant observable 1.
 */
class LoopTuple {
public:
    LoopTuple(const Presentation& p, int n, std::vector<Word> loops)
        : presentation_(p), n_(n), loops_(std::move(loops)),
          class_(total_homology_class(loops_, n, p))
    {
    }

    static LoopTuple parse(const Presentation& p, int n, const std::vector<std::string>& words)
    {
        std::vector<Word> loops;
        for (const auto& w : words)
            loops.push_back(parse_word(w, p));
        return LoopTuple(p, n, std::move(loops));
    }

    static LoopTuple constant(const Presentation& p, int n) { return LoopTuple(p, n, {}); }

    const Presentation& presentation() const { return presentation_; }
    int n() const { return n_; }
    const std::vector<Word>& loops() const { return loops_; }
    const HomologyClass& homology_class() const { return class_; }

    LoopTuple appended(const Word& w) const
    {
        std::vector<Word> loops = loops_;
        loops.push_back(w);
        return LoopTuple(presentation_, n_, std::move(loops));
    }

    /// "(a1 b1 A1 B1, a2)"; the constant tuple prints as "()".
    std::string canonical() const
    {
        std::string out = "(";
        for (std::size_t i = 0; i < loops_.size(); ++i) {
            if (i)
                out += ", ";
            out += loops_[i].empty() ? std::string("1") : format_word(loops_[i], presentation_);
        }
        return out + ")";
    }

private:
    Presentation presentation_;
    int n_;
    std::vector<Word> loops_;
    HomologyClass class_;
};

/// t_gamma(rho) = prod_i tr rho(gamma_i).
inline Complex trace_function(const Representation& rho, const LoopTuple& gamma)
{
    Complex value(1.0, 0.0);
    for (const Word& w : gamma.loops())
        value *= evaluate_word(rho, w).trace();
    return value;
}

struct Estimate {
    Complex value;
    double std_error = 0.0;
    std::size_t count = 0;
};

/// Sample mean with componentwise standard errors combined in quadrature.
inline Estimate estimate_mean(std::span<const Complex> values)
{
    Estimate out;
    out.count = values.size();
    if (values.empty())
        return out;
    std::vector<double> re(values.size());
    std::vector<double> im(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        re[i] = values[i].real();
        im[i] = values[i].imag();
    }
    out.value = pairwise_mean(values);
    const double count = static_cast<double>(values.size());
    const double var = sample_variance(re) + sample_variance(im);
    out.std_error = std::sqrt(var / count);
    return out;
}

/**
 * n^{-r} sum_u zeta^{u.c}, the twist-orbit average of the character values:
 * the sum factorizes over coordinates and each factor is n or 0, so the
 * result is exactly 1 for the zero class and exactly 0 otherwise.
 */
inline double twist_orbit_factor(const HomologyClass& c)
{
    double factor = 1.0;
    for (int coord : c.coords())
        factor *= coord == 0 ? 1.0 : 0.0;
    return factor;
}

namespace detail {

inline void require_nonempty(const SampleBatch& batch)
{
    if (batch.empty())
        throw PreconditionError("observable estimate requested on an empty batch");
}

template <class Fn>
std::vector<Complex> map_batch(const SampleBatch& batch, Fn&& fn)
{
    std::vector<Complex> out;
    out.reserve(batch.size());
    for (const Representation& rho : batch.samples)
        out.push_back(fn(rho));
    return out;
}

} // namespace detail

inline Estimate mc_mean(const SampleBatch& batch, const LoopTuple& gamma)
{
    detail::require_nonempty(batch);
    const auto values = detail::map_batch(batch, [&](const Representation& rho) { return trace_function(rho, gamma); });
    return estimate_mean(values);
}

/// Each sample contributes the average of t_gamma over its center-twist orbit.
inline Estimate twist_averaged_mean(const SampleBatch& batch, const LoopTuple& gamma)
{
    detail::require_nonempty(batch);
    const double factor = twist_orbit_factor(gamma.homology_class());
    const auto values = detail::map_batch(
        batch, [&](const Representation& rho) { return factor * trace_function(rho, gamma); });
    return estimate_mean(values);
}

enum class Centering { plain, twist_averaged };
enum class Estimator { plain, twist_averaged };

inline const char* to_string(Estimator e) { return e == Estimator::plain ? "plain" : "twist_averaged"; }

/// t_gamma - m for a fixed constant m.
struct NormalizedTrace {
    LoopTuple gamma;
    Complex center;

    Complex operator()(const Representation& rho) const { return trace_function(rho, gamma) - center; }
};

/**
 * Centers t_gamma. twist_averaged centering subtracts the twist-averaged
 * mean, which is exactly zero when [gamma] != 0 (t_gamma is left as is);
 * plain centering subtracts the batch mean.
 */
inline NormalizedTrace normalized_trace(const SampleBatch& batch, const LoopTuple& gamma,
                                        Centering centering = Centering::twist_averaged)
{
    detail::require_nonempty(batch);
    const Estimate m =
        centering == Centering::plain ? mc_mean(batch, gamma) : twist_averaged_mean(batch, gamma);
    return {gamma, m.value};
}

/**
 * Estimates <f, t_alpha> = E[f conj(t_alpha)] with conj(t_alpha) = t_{alpha^-1},
 * for f = t_gamma - center. The twist-averaged estimator replaces each
 * sample's value by its orbit average:
 *   factor([gamma] - [alpha]) t_gamma t_{alpha^-1} - center factor(-[alpha]) t_{alpha^-1},
 * which for [alpha] != 0 is the eta-tuple form t_eta with eta = (gamma, alpha^-1).
 */
inline Estimate inner_product(const SampleBatch& batch, const NormalizedTrace& f, const Word& alpha,
                              Estimator estimator = Estimator::plain)
{
    detail::require_nonempty(batch);
    const Word alpha_inv = alpha.inverse();
    const LoopTuple single(f.gamma.presentation(), f.gamma.n(), {alpha_inv});
    const LoopTuple eta = f.gamma.appended(alpha_inv);
    double eta_factor = 1.0;
    double center_factor = 1.0;
    if (estimator == Estimator::twist_averaged) {
        eta_factor = twist_orbit_factor(eta.homology_class());
        center_factor = twist_orbit_factor(single.homology_class());
    }
    const auto values = detail::map_batch(batch, [&](const Representation& rho) {
        const Complex t_alpha_inv = trace_function(rho, single);
        const Complex t_gamma = trace_function(rho, f.gamma);
        return eta_factor * (t_gamma * t_alpha_inv) - center_factor * (f.center * t_alpha_inv);
    });
    return estimate_mean(values);
}

/// <t_gamma or t-hat_gamma, t_alpha>; normalization uses twist-averaged centering.
inline Estimate inner_product(const SampleBatch& batch, const LoopTuple& gamma, const Word& alpha,
                              bool use_normalized, Estimator estimator = Estimator::plain)
{
    const NormalizedTrace f = use_normalized ? normalized_trace(batch, gamma) : NormalizedTrace{gamma, {}};
    return inner_product(batch, f, alpha, estimator);
}

/**
 * Sample variance E|t - mean|^2 (unbiased) with the standard error
 * sqrt((m4 - var^2) / N) of the variance estimator.
 */
inline Estimate variance(const SampleBatch& batch, const LoopTuple& gamma)
{
    detail::require_nonempty(batch);
    const auto values = detail::map_batch(batch, [&](const Representation& rho) { return trace_function(rho, gamma); });
    const Complex mean = pairwise_mean(std::span<const Complex>(values));
    std::vector<double> sq(values.size());
    std::vector<double> quad(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        sq[i] = std::norm(values[i] - mean);
        quad[i] = sq[i] * sq[i];
    }
    Estimate out;
    out.count = values.size();
    if (values.size() < 2)
        return out;
    const double count = static_cast<double>(values.size());
    const double var = pairwise_sum(std::span<const double>(sq)) / (count - 1.0);
    const double m4 = pairwise_mean(std::span<const double>(quad));
    out.value = var;
    out.std_error = std::sqrt(std::max(0.0, m4 - var * var) / count);
    return out;
}

} // namespace charvar
