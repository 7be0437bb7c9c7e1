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
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "charvar/automorphism.hpp"
#include "charvar/cohomology.hpp"
#include "charvar/harness/config.hpp"
#include "charvar/harness/report.hpp"
#include "charvar/observables.hpp"
#include "charvar/polish.hpp"
#include "charvar/representation.hpp"
#include "charvar/sampler.hpp"
#include "charvar/stats.hpp"

namespace charvar::harness {

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"twist", "lemma", "orthogonality", "symplectic", "mcg", "free", "haar"};
    return names;
}

/// Whether the suite reads the main sample batch.
inline bool suite_needs_batch(std::string_view suite) { return suite != "haar" && suite != "symplectic"; }

namespace detail {

class PhaseTimer {
public:
    PhaseTimer(RunReport& report, std::string phase)
        : report_(report), phase_(std::move(phase)), start_(std::chrono::steady_clock::now())
    {
    }
    ~PhaseTimer()
    {
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
        report_.timing.emplace_back(phase_, dt.count());
    }
    PhaseTimer(const PhaseTimer&) = delete;
    PhaseTimer& operator=(const PhaseTimer&) = delete;

private:
    RunReport& report_;
    std::string phase_;
    std::chrono::steady_clock::time_point start_;
};

inline std::string qualified(const std::string& base, const std::string& qualifier)
{
    return base + "[" + qualifier + "]";
}

inline std::string eps_label(double eps)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "eps=%g", eps);
    return buf;
}

inline BatchSummary summarize(const std::string& label, const SampleBatch& b)
{
    return {label, b.epsilon, b.size(), b.proposals, b.acceptance_rate()};
}

/// |value| / std_error; zero over zero counts as 0 and anything else over zero as infinity.
inline double z_score(Complex value, double std_error)
{
    const double a = std::abs(value);
    if (std_error > 0.0)
        return a / std_error;
    return a == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

inline Word random_word(RandomStream& rng, const Presentation& p, int max_len)
{
    while (true) {
        const int len = 1 + rng.below(max_len);
        std::vector<Letter> letters(static_cast<std::size_t>(len));
        for (Letter& l : letters)
            l = {1 + rng.below(p.generator_count()), rng.below(2) ? 1 : -1};
        Word w = Word::reduce(letters);
        if (!w.empty())
            return w;
    }
}

/// Random tuples of one to three loops, from the test_words stream.
inline std::vector<LoopTuple> random_tuples(const ExperimentConfig& c)
{
    RandomStream rng(c.seed, stream_id(StreamPurpose::test_words, 0));
    std::vector<LoopTuple> out;
    for (int t = 0; t < c.suites.random_tuples; ++t) {
        const int size = 1 + rng.below(3);
        std::vector<Word> loops;
        for (int i = 0; i < size; ++i)
            loops.push_back(random_word(rng, c.presentation, c.suites.max_word_length));
        out.emplace_back(c.presentation, c.n, std::move(loops));
    }
    return out;
}

/// Appends \p t unless a tuple with the same canonical form is present.
inline void push_unique(std::vector<LoopTuple>& out, LoopTuple t)
{
    const std::string key = t.canonical();
    for (const auto& u : out)
        if (u.canonical() == key)
            return;
    out.push_back(std::move(t));
}

/// Configured loop tuples followed by the random ones.
inline std::vector<LoopTuple> test_tuples(const ExperimentConfig& c)
{
    std::vector<LoopTuple> out;
    for (auto& t : c.loop_tuples())
        push_unique(out, std::move(t));
    for (auto& t : random_tuples(c))
        push_unique(out, std::move(t));
    return out;
}

inline std::vector<LoopTuple> generator_tuples(const ExperimentConfig& c)
{
    std::vector<LoopTuple> out;
    for (int j = 1; j <= c.presentation.generator_count(); ++j)
        out.emplace_back(c.presentation, c.n, std::vector<Word>{Word::generator(j)});
    return out;
}

inline std::size_t exact_count(const ExperimentConfig& c, const SampleBatch& b)
{
    return std::min(c.suites.exact_samples, b.size());
}

inline std::size_t fresh_count(const ExperimentConfig& c)
{
    return c.suites.fresh_samples ? c.suites.fresh_samples : c.samples;
}

inline Estimate mean_of(const std::vector<Complex>& values) { return estimate_mean(values); }

inline Json histogram(const std::string& observable, const std::string& component, const std::vector<double>& xs,
                      double lo, double hi, int bins)
{
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    for (double x : xs) {
        int k = static_cast<int>(std::floor((x - lo) / (hi - lo) * bins));
        k = std::clamp(k, 0, bins - 1);
        ++counts[static_cast<std::size_t>(k)];
    }
    return {{"observable", observable}, {"component", component}, {"lo", lo}, {"hi", hi}, {"counts", counts}};
}

} // namespace detail

/// Exact center-twist identities: defect invariance, support, composition, transformation law.
inline void twist_checks(RunReport& report, const ExperimentConfig& c, const SampleBatch& batch)
{
    detail::PhaseTimer timer(report, "twist");
    const Tolerances& tol = c.tolerances;
    const Presentation& p = c.presentation;
    const int n = c.n;
    const auto chars = CenterCharacter::enumerate(p.generator_count(), n);
    const std::size_t count = detail::exact_count(c, batch);
    const std::size_t stride = chars.size() <= 16 ? 1 : chars.size() / 16;
    const auto tuples = detail::test_tuples(c);

    double defect_gap = 0.0;
    double support_mismatch = 0.0;
    double compose_gap = 0.0;
    double law_gap = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const Representation& rho = batch.samples[i];
        const double d = p.is_surface() ? relator_defect(rho) : 0.0;
        std::vector<Complex> base;
        for (const auto& t : tuples)
            base.push_back(trace_function(rho, t));
        for (const auto& u : chars) {
            const Representation ur = twist(rho, u);
            if (p.is_surface()) {
                const double du = relator_defect(ur);
                defect_gap = std::max(defect_gap, std::abs(du - d));
                support_mismatch += (du <= *batch.epsilon) != (d <= *batch.epsilon);
            }
            for (std::size_t k = 0; k < chars.size(); k += stride) {
                const Representation a = twist(ur, chars[k]);
                const Representation b = twist(rho, u + chars[k]);
                for (int j = 1; j <= p.generator_count(); ++j)
                    compose_gap = std::max(compose_gap, frobenius_distance(a.generator(j), b.generator(j)));
            }
            for (std::size_t t = 0; t < tuples.size(); ++t) {
                const Complex zeta = root_of_unity(n, pair_character(u, tuples[t].homology_class()));
                law_gap = std::max(law_gap, std::abs(trace_function(ur, tuples[t]) - zeta * base[t]));
            }
        }
    }
    if (p.is_surface()) {
        report.add(check("twist_defect_invariance", defect_gap, tol.twist_defect));
        report.add(check("twist_support_invariance", support_mismatch, 0.0));
    }
    const bool exact_roots = 4 % n == 0;
    report.add(check(exact_roots ? "twist_composition_exact" : "twist_composition_rounded", compose_gap,
                     exact_roots ? tol.twist_compose : tol.twist_compose_rounded));
    report.add(check("transformation_law", law_gap, tol.transformation_law));
}

/// Vanishing of integrals of trace functions with nonzero class.
inline void lemma_checks(RunReport& report, const ExperimentConfig& c, const SampleBatch& batch)
{
    detail::PhaseTimer timer(report, "lemma");
    const Tolerances& tol = c.tolerances;
    const Presentation& p = c.presentation;

    std::vector<LoopTuple> nonzero = detail::generator_tuples(c);
    for (const auto& t : detail::test_tuples(c))
        if (!t.homology_class().is_zero())
            detail::push_unique(nonzero, t);

    std::vector<std::pair<std::string, SampleBatch>> sweeps;
    if (p.is_surface())
        for (double e : c.suites.sweep_epsilons)
            sweeps.emplace_back(detail::eps_label(e),
                                sample_batch(p, c.n, c.batch_options(c.suites.sweep_samples, e, StreamPurpose::sweep)));

    auto exact_on = [&](const std::string& label, const SampleBatch& b) {
        for (const auto& g : nonzero) {
            const Estimate e = twist_averaged_mean(b, g);
            report.add(with_estimate(check(detail::qualified("lemma_exact", label), std::abs(e.value), tol.lemma_exact),
                                     g.canonical(), Estimator::twist_averaged, e));
        }
    };
    auto sampled_on = [&](const std::string& label, const SampleBatch& b) {
        for (const auto& g : detail::generator_tuples(c)) {
            const Estimate e = mc_mean(b, g);
            report.add(with_estimate(check(detail::qualified("lemma_sampled", label), detail::z_score(e.value, e.std_error),
                                           tol.sigma),
                                     g.canonical(), Estimator::plain, e));
        }
    };

    const std::string main_label = batch.epsilon ? detail::eps_label(*batch.epsilon) : "exact";
    exact_on("main," + main_label, batch);
    sampled_on("main," + main_label, batch);
    for (const auto& [label, b] : sweeps) {
        report.batches.push_back(detail::summarize("sweep," + label, b));
        exact_on("sweep," + label, b);
        sampled_on("sweep," + label, b);
    }

    // Sweep curves and histograms for plotting.
    const LoopTuple first(p, c.n, {Word::generator(1)});
    const LoopTuple sep(p, c.n, {commutator(Word::generator(1), Word::generator(2))});
    Json curves = Json::array();
    for (const LoopTuple* g : {&first, &sep}) {
        Json points = Json::array();
        for (const auto& [label, b] : sweeps) {
            const Estimate e = mc_mean(b, *g);
            points.push_back({{"epsilon", *b.epsilon},
                              {"re", e.value.real()},
                              {"im", e.value.imag()},
                              {"std_error", e.std_error}});
        }
        curves.push_back({{"observable", g->canonical()}, {"points", points}});
    }
    report.details["sweep"] = curves;
    std::vector<double> re, im;
    for (const auto& rho : batch.samples) {
        const Complex t = trace_function(rho, first);
        re.push_back(t.real());
        im.push_back(t.imag());
    }
    const double range = static_cast<double>(c.n);
    report.details["histograms"] = Json::array({detail::histogram(first.canonical(), "re", re, -range, range, 40),
                                                detail::histogram(first.canonical(), "im", im, -range, range, 40)});
}

/// Orthogonality of trivial-class normalized traces to nonseparating traces.
inline void orthogonality_checks(RunReport& report, const ExperimentConfig& c, const SampleBatch& batch)
{
    detail::PhaseTimer timer(report, "orthogonality");
    const Tolerances& tol = c.tolerances;
    const Presentation& p = c.presentation;
    const int n = c.n;

    std::vector<LoopTuple> gammas;
    gammas.emplace_back(p, n, std::vector<Word>{commutator(Word::generator(1), Word::generator(2))});
    gammas.emplace_back(p, n, std::vector<Word>(static_cast<std::size_t>(n), Word::generator(1)));
    for (const auto& t : c.loop_tuples())
        if (t.homology_class().is_zero() && !t.loops().empty())
            detail::push_unique(gammas, t);

    std::vector<Word> alphas;
    for (int j = 1; j <= p.generator_count(); ++j)
        alphas.push_back(Word::generator(j));
    for (const auto& phi : shipped_automorphisms(p)) {
        const Word w = phi.apply(Word::generator(1));
        if (std::find(alphas.begin(), alphas.end(), w) == alphas.end())
            alphas.push_back(w);
    }

    for (const auto& g : gammas) {
        const Estimate v = variance(batch, g);
        report.add(with_estimate(check("variance_positive", v.std_error > 0 ? v.value.real() / v.std_error : 0.0,
                                       tol.sigma, Comparison::at_least),
                                 g.canonical(), Estimator::plain, v));
        const NormalizedTrace plain = normalized_trace(batch, g, Centering::plain);
        const Estimate centered = inner_product(batch, plain, Word{}, Estimator::plain);
        report.add(with_estimate(check("centering", std::abs(centered.value), tol.centering), g.canonical(),
                                 Estimator::plain, centered));
        const NormalizedTrace f = normalized_trace(batch, g, Centering::twist_averaged);
        for (const Word& a : alphas) {
            const Estimate e = inner_product(batch, f, a, Estimator::twist_averaged);
            report.add(with_estimate(check(detail::qualified("orthogonality", format_word(a, p)), std::abs(e.value),
                                           tol.orthogonality),
                                     g.canonical(), Estimator::twist_averaged, e));
        }
    }
    for (int j = 1; j <= p.generator_count(); ++j) {
        const Word a = Word::generator(j);
        const LoopTuple t(p, n, {a});
        const Estimate e = inner_product(batch, t, a, false, Estimator::plain);
        report.add(with_estimate(check("norm_positive", detail::z_score(e.value, e.std_error), tol.sigma,
                                       Comparison::at_least),
                                 t.canonical(), Estimator::plain, e));
    }
    if (!p.is_surface()) {
        const LoopTuple x1(p, n, {Word::generator(1)});
        const Estimate e = inner_product(batch, x1, Word::generator(2), false, Estimator::plain);
        report.add(with_estimate(check("free_independence", detail::z_score(e.value, e.std_error), tol.sigma),
                                 x1.canonical() + " vs " + format_word(Word::generator(2), p), Estimator::plain, e));
    }
}

/// Out(pi) action: verification, exact functoriality, invariance of the sampled law.
inline void mcg_checks(RunReport& report, const ExperimentConfig& c, const SampleBatch& batch)
{
    detail::PhaseTimer timer(report, "mcg");
    const Tolerances& tol = c.tolerances;
    const Presentation& p = c.presentation;
    const int n = c.n;
    const auto tuples = detail::test_tuples(c);
    const std::size_t count = detail::exact_count(c, batch);

    const SampleBatch fresh = sample_batch(p, n, c.batch_options(detail::fresh_count(c), c.epsilon, StreamPurpose::fresh_batch));
    report.batches.push_back(detail::summarize("fresh", fresh));
    const std::size_t acted_count = std::min(batch.size(), fresh.size());

    const LoopTuple first(p, n, {Word::generator(1)});
    const LoopTuple sep(p, n, {commutator(Word::generator(1), Word::generator(2))});
    std::vector<double> fresh_re;
    for (const auto& rho : fresh.samples)
        fresh_re.push_back(trace_function(rho, first).real());
    std::vector<Complex> base_norm, base_sep;
    for (std::size_t i = 0; i < acted_count; ++i) {
        base_norm.push_back(std::norm(trace_function(batch.samples[i], first)));
        base_sep.push_back(trace_function(batch.samples[i], sep));
    }
    const Estimate base_norm_e = detail::mean_of(base_norm);
    const Estimate base_sep_e = detail::mean_of(base_sep);

    for (const auto& phi : c.all_automorphisms()) {
        const AutomorphismReport v = verify_automorphism(phi, p);
        report.add(check(detail::qualified("automorphism_verified", phi.label()), v.ok() ? 1.0 : 0.0, 1.0,
                         Comparison::at_least));
        if (!v.ok())
            continue;
        const Automorphism inv = phi.inverse();
        std::vector<LoopTuple> pulled;
        for (const auto& t : tuples) {
            std::vector<Word> loops;
            for (const Word& w : t.loops())
                loops.push_back(inv.apply(w));
            pulled.emplace_back(p, n, std::move(loops));
        }
        double trace_gap = 0.0;
        double defect_gap = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            const Representation& rho = batch.samples[i];
            const Representation acted = mcg_act(rho, phi);
            if (p.is_surface())
                defect_gap = std::max(defect_gap, std::abs(relator_defect(acted) - relator_defect(rho)));
            for (std::size_t t = 0; t < tuples.size(); ++t)
                trace_gap = std::max(trace_gap, std::abs(trace_function(acted, tuples[t]) - trace_function(rho, pulled[t])));
        }
        report.add(check(detail::qualified("mcg_trace_identity", phi.label()), trace_gap, tol.mcg_trace));
        if (p.is_surface())
            report.add(check(detail::qualified("mcg_defect_invariance", phi.label()), defect_gap, tol.mcg_defect));

        std::vector<double> acted_re;
        std::vector<Complex> acted_norm, acted_sep;
        for (std::size_t i = 0; i < acted_count; ++i) {
            const Representation acted = mcg_act(batch.samples[i], phi);
            const Complex t = trace_function(acted, first);
            acted_re.push_back(t.real());
            acted_norm.push_back(std::norm(t));
            acted_sep.push_back(trace_function(acted, sep));
        }
        report.add(check(detail::qualified("mcg_ks", phi.label()), ks_statistic(acted_re, fresh_re),
                         ks_critical_value(tol.ks_alpha, acted_re.size(), fresh_re.size())));
        const Estimate an = detail::mean_of(acted_norm);
        const Estimate as = detail::mean_of(acted_sep);
        const double norm_se = std::hypot(an.std_error, base_norm_e.std_error);
        const double sep_se = std::hypot(as.std_error, base_sep_e.std_error);
        report.add(with_estimate(check(detail::qualified("mcg_equivariance_norm", phi.label()),
                                       detail::z_score(an.value - base_norm_e.value, norm_se), tol.sigma),
                                 first.canonical(), Estimator::plain, an));
        report.add(with_estimate(check(detail::qualified("mcg_equivariance_separating", phi.label()),
                                       detail::z_score(as.value - base_sep_e.value, sep_se), tol.sigma),
                                 sep.canonical(), Estimator::plain, as));
    }
}

/// Cohomology dimensions and the cup-product form on polished samples.
inline void symplectic_checks(RunReport& report, const ExperimentConfig& c)
{
    detail::PhaseTimer timer(report, "symplectic");
    const Presentation& p = c.presentation;
    if (!p.is_surface())
        throw PreconditionError("the symplectic suite needs a surface presentation");
    const Tolerances& tol = c.tolerances;
    const int n = c.n;
    const int g = p.genus();
    const int d = n * n - 1;
    const std::size_t want = c.suites.cohomology_samples;
    const double eps = c.suites.cohomology_epsilon.value_or(*c.epsilon);

    const SampleBatch raw = sample_batch(p, n, c.batch_options(want + want / 5 + 5, eps, StreamPurpose::auxiliary));
    report.batches.push_back(detail::summarize("cohomology", raw));

    PolishOptions popts;
    popts.tolerance = tol.polish;
    popts.max_start_defect = tol.polish_start;
    std::vector<Representation> points;
    double failures = 0.0;
    double worst_move = 0.0;
    for (const auto& rho : raw.samples) {
        if (points.size() == want)
            break;
        try {
            const PolishResult res = polish(rho, popts);
            worst_move = std::max(worst_move, res.start_defect > 0 ? res.displacement / res.start_defect : 0.0);
            points.push_back(res.rep);
        } catch (const Error&) {
            ++failures;
        }
    }
    report.add(check("polished_samples", static_cast<double>(points.size()), static_cast<double>(want),
                     Comparison::at_least));
    report.add(check("polish_failures", failures, 0.0, Comparison::at_most, true));
    report.add(check("polish_displacement_ratio", worst_move, tol.polish_displacement, Comparison::at_most, true));

    CohomologyOptions copts;
    copts.rank_tolerance = tol.rank;
    copts.max_defect = tol.polish;
    const int expect_z1 = (2 * g - 1) * d, expect_b1 = d, expect_h1 = (2 * g - 2) * d;
    double reducible = 0, bad_z1 = 0, bad_b1 = 0, bad_h1 = 0;
    double cocycle_res = 0, containment = 0, skew = 0, cob_pair = 0, transport = 0;
    double sv_ratio = std::numeric_limits<double>::infinity();
    double fd_order = std::numeric_limits<double>::infinity();
    const auto chars = CenterCharacter::enumerate(p.generator_count(), n);
    const std::size_t stride = chars.size() <= 16 ? 1 : chars.size() / 8;
    const LieAlgebra alg(n);
    Json samples = Json::array();

    for (const auto& rho : points) {
        if (commutant_dimension(rho, tol.irreducible) != 1) {
            ++reducible;
            continue;
        }
        const CohomologyBases b = cohomology_bases(rho, copts);
        bad_z1 += b.z1.cols() != expect_z1;
        bad_b1 += b.b1.cols() != expect_b1;
        bad_h1 += b.h1.cols() != expect_h1;
        const RealMatrix jac = traversal_matrix(rho, alg);
        for (Eigen::Index k = 0; k < b.z1.cols(); ++k)
            cocycle_res = std::max(cocycle_res, (jac * b.z1.col(k)).norm());
        containment = std::max(containment, (b.b1 - b.z1 * (b.z1.transpose() * b.b1)).norm());

        const RealMatrix omega = cup_form_matrix(rho, alg);
        const RealMatrix m = b.h1.transpose() * omega * b.h1;
        const double scale = m.norm();
        skew = std::max(skew, scale > 0 ? (m + m.transpose()).norm() / scale : 0.0);
        const Eigen::VectorXd sv = m.jacobiSvd().singularValues();
        const double ratio = sv.size() ? sv.minCoeff() / sv.maxCoeff() : 0.0;
        sv_ratio = std::min(sv_ratio, ratio);
        // Columns are orthonormal, so entries are already scaled by |delta| |c|.
        cob_pair = std::max(cob_pair, (b.b1.transpose() * omega * b.z1).cwiseAbs().maxCoeff());
        for (std::size_t k = 0; k < chars.size(); k += stride) {
            const RealMatrix moved = b.h1.transpose() * cup_form_matrix(twist(rho, chars[k]), alg) * b.h1;
            transport = std::max(transport, (moved - m).norm() / (1.0 + scale));
        }
        RealVector generic = RealVector::Zero(jac.cols());
        for (Eigen::Index k = 0; k < generic.size(); ++k)
            generic(k) = std::cos(1.0 + static_cast<double>(k));
        for (const RealVector& dir : {RealVector(b.z1.col(0)), generic}) {
            const double e3 = relator_derivative_error(rho, dir, 1e-3);
            const double e4 = relator_derivative_error(rho, dir, 1e-4);
            fd_order = std::min(fd_order, std::log10(e3 / e4));
        }
        samples.push_back({{"genus", g},
                           {"n", n},
                           {"dims", {{"z1", b.z1.cols()}, {"b1", b.b1.cols()}, {"h1", b.h1.cols()}}},
                           {"skew_residual", scale > 0 ? (m + m.transpose()).norm() / scale : 0.0},
                           {"min_sv", sv.size() ? sv.minCoeff() : 0.0},
                           {"max_sv", sv.size() ? sv.maxCoeff() : 0.0},
                           {"singular_values", std::vector<double>(sv.data(), sv.data() + sv.size())}});
    }
    if (points.empty()) {
        sv_ratio = 0.0;
        fd_order = 0.0;
    }
    report.details["samples"] = samples;
    report.add(check("reducible_points", reducible, 0.0));
    report.add(check("dim_z1=" + std::to_string(expect_z1), bad_z1, 0.0));
    report.add(check("dim_b1=" + std::to_string(expect_b1), bad_b1, 0.0));
    report.add(check("dim_h1=" + std::to_string(expect_h1), bad_h1, 0.0));
    report.add(check("cocycle_residual", cocycle_res, tol.cocycle_residual));
    report.add(check("coboundary_containment", containment, tol.coboundary_containment));
    report.add(check("skew_residual", skew, tol.skew));
    report.add(check("coboundary_pairing", cob_pair, tol.coboundary_pairing));
    report.add(check("singular_value_ratio", sv_ratio, tol.singular_value_ratio, Comparison::at_least));
    report.add(check("twist_transport", transport, tol.twist_transport));
    report.add(check("fd_order", fd_order, tol.fd_order, Comparison::at_least));
}

/// Moments of the Haar sampler against character orthogonality.
inline void haar_checks(RunReport& report, const ExperimentConfig& c)
{
    detail::PhaseTimer timer(report, "haar");
    const Tolerances& tol = c.tolerances;
    for (int n : c.suites.haar_dimensions) {
        RandomStream rng(c.seed, stream_id(StreamPurpose::auxiliary, 1000 + static_cast<std::uint64_t>(n)));
        const std::size_t m = c.suites.haar_samples;
        std::vector<Complex> tr(m), tr_n(m);
        std::vector<Complex> abs2(m);
        for (std::size_t i = 0; i < m; ++i) {
            const Complex t = haar_sample(n, rng).trace();
            tr[i] = t;
            abs2[i] = std::norm(t);
            tr_n[i] = std::pow(t, n);
        }
        const std::string tag = "n=" + std::to_string(n);
        const Estimate e1 = estimate_mean(tr);
        report.add(with_estimate(check(detail::qualified("haar_mean_trace", tag), std::abs(e1.value), tol.haar_mean),
                                 "tr U", Estimator::plain, e1));
        const Estimate e2 = estimate_mean(abs2);
        report.add(with_estimate(check(detail::qualified("haar_second_moment", tag),
                                       detail::z_score(e2.value - 1.0, e2.std_error), tol.sigma),
                                 "|tr U|^2", Estimator::plain, e2));
        const Estimate e3 = estimate_mean(tr_n);
        report.add(with_estimate(check(detail::qualified("haar_determinant_moment", tag),
                                       detail::z_score(e3.value - 1.0, e3.std_error), tol.sigma),
                                 "(tr U)^n", Estimator::plain, e3));
    }
}

/// Draws the main batch of a config.
inline SampleBatch run_sample(const ExperimentConfig& c)
{
    c.validate();
    return sample_batch(c.presentation, c.n, c.batch_options(c.samples, c.epsilon));
}

/**
 * Runs one suite. \p batch is the main sample batch; it is drawn from the
 * config when absent and the suite needs it.
 */
inline RunReport run_verify(const ExperimentConfig& c, std::string_view suite,
                            const SampleBatch* batch = nullptr)
{
    c.validate();
    if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
        throw PreconditionError("unknown suite '" + std::string(suite) + "'");
    RunReport report;
    report.suite = std::string(suite);
    report.config = config_to_json(c);

    std::optional<SampleBatch> drawn;
    if (suite_needs_batch(suite) && batch == nullptr) {
        detail::PhaseTimer timer(report, "sample");
        drawn = run_sample(c);
        batch = &*drawn;
    }
    if (batch) {
        if (batch->presentation != c.presentation || batch->n != c.n)
            throw PreconditionError("batch does not match the config presentation or n");
        report.batches.push_back(detail::summarize("main", *batch));
    }

    if (suite == "twist") {
        twist_checks(report, c, *batch);
    } else if (suite == "lemma") {
        lemma_checks(report, c, *batch);
    } else if (suite == "orthogonality") {
        orthogonality_checks(report, c, *batch);
    } else if (suite == "mcg") {
        mcg_checks(report, c, *batch);
    } else if (suite == "symplectic") {
        symplectic_checks(report, c);
    } else if (suite == "haar") {
        haar_checks(report, c);
    } else if (suite == "free") {
        if (c.presentation.is_surface())
            throw PreconditionError("the free suite needs a free presentation");
        report.add(check("acceptance_rate", batch->acceptance_rate(), 1.0, Comparison::at_least));
        twist_checks(report, c, *batch);
        lemma_checks(report, c, *batch);
        orthogonality_checks(report, c, *batch);
        mcg_checks(report, c, *batch);
    }
    return report;
}

} // namespace charvar::harness
