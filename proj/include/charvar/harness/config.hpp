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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "charvar/automorphism.hpp"
#include "charvar/batch_io.hpp"
#include "charvar/error.hpp"
#include "charvar/observables.hpp"
#include "charvar/words.hpp"

namespace charvar::harness {

/// Thresholds used by the verification suites. Every field can be overridden
/// from the "tolerances" object of a config by its JSON name.
struct Tolerances {
    double twist_defect = 1e-15;
    double twist_compose = 0.0;          ///< applies when n divides 4 (exact roots)
    double twist_compose_rounded = 5e-15;  ///< applies otherwise; a few ulps
    double transformation_law = 1e-12;
    double lemma_exact = 1e-15;
    double sigma = 4.0;
    double orthogonality = 1e-14;
    double centering = 1e-12;
    double mcg_trace = 1e-12;
    double mcg_defect = 1e-14;
    double ks_alpha = 0.01;
    double polish = 1e-12;
    double polish_start = 0.5;
    double polish_displacement = 10.0;
    double rank = 1e-8;
    double irreducible = 1e-8;
    double cocycle_residual = 1e-10;
    double coboundary_containment = 1e-10;
    double skew = 1e-10;
    double coboundary_pairing = 1e-8;
    double singular_value_ratio = 1e-6;
    double twist_transport = 1e-10;
    double fd_order = 1.8;
    double haar_mean = 4e-3;
};

struct NamedLoop {
    std::string name;
    std::vector<std::string> words;
};

struct AutomorphismSpec {
    std::string label;
    std::map<std::string, std::string> images;
    std::optional<std::map<std::string, std::string>> inverse;
};

/// Sizes and settings of the individual suites.
struct SuiteSettings {
    std::size_t exact_samples = 1000;  ///< samples used by exact identity checks
    int random_tuples = 10;
    int max_word_length = 12;
    std::vector<double> sweep_epsilons{0.5, 0.2, 0.1};
    std::size_t sweep_samples = 1000;
    std::size_t cohomology_samples = 100;
    std::optional<double> cohomology_epsilon;  ///< defaults to epsilon
    std::size_t fresh_samples = 0;             ///< 0 means the main sample count
    std::size_t haar_samples = 1'000'000;
    std::vector<int> haar_dimensions{2, 3};
};

struct ExperimentConfig {
    Presentation presentation = Presentation::surface(2);
    int n = 2;
    std::optional<double> epsilon;
    std::size_t samples = 1000;
    std::uint64_t proposal_cap = 1'000'000'000;
    std::uint64_t seed = 1;
    int threads = 1;
    std::vector<NamedLoop> loops;
    std::vector<AutomorphismSpec> automorphisms;
    Tolerances tolerances;
    SuiteSettings suites;
    std::filesystem::path output = "out";

    /// Throws PreconditionError when an invariant of the config is violated.
    void validate() const;

    std::vector<LoopTuple> loop_tuples() const;

    /// Shipped generators followed by the configured automorphisms.
    std::vector<Automorphism> all_automorphisms() const;

    BatchOptions batch_options(std::size_t count, std::optional<double> eps,
                               StreamPurpose purpose = StreamPurpose::sampling) const;
};

/// Command-line overrides; unset fields leave the config unchanged.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<double> epsilon;
    std::optional<std::size_t> samples;
    std::optional<std::filesystem::path> output;
};

namespace detail {

template <class T>
void read_optional(const Json& j, const char* key, T& target)
{
    if (j.contains(key))
        target = j.at(key).get<T>();
}

inline std::vector<std::pair<std::string, double Tolerances::*>> tolerance_fields()
{
    return {
        {"twist_defect", &Tolerances::twist_defect},
        {"twist_compose", &Tolerances::twist_compose},
        {"twist_compose_rounded", &Tolerances::twist_compose_rounded},
        {"transformation_law", &Tolerances::transformation_law},
        {"lemma_exact", &Tolerances::lemma_exact},
        {"sigma", &Tolerances::sigma},
        {"orthogonality", &Tolerances::orthogonality},
        {"centering", &Tolerances::centering},
        {"mcg_trace", &Tolerances::mcg_trace},
        {"mcg_defect", &Tolerances::mcg_defect},
        {"ks_alpha", &Tolerances::ks_alpha},
        {"polish", &Tolerances::polish},
        {"polish_start", &Tolerances::polish_start},
        {"polish_displacement", &Tolerances::polish_displacement},
        {"rank", &Tolerances::rank},
        {"irreducible", &Tolerances::irreducible},
        {"cocycle_residual", &Tolerances::cocycle_residual},
        {"coboundary_containment", &Tolerances::coboundary_containment},
        {"skew", &Tolerances::skew},
        {"coboundary_pairing", &Tolerances::coboundary_pairing},
        {"singular_value_ratio", &Tolerances::singular_value_ratio},
        {"twist_transport", &Tolerances::twist_transport},
        {"fd_order", &Tolerances::fd_order},
        {"haar_mean", &Tolerances::haar_mean},
    };
}

inline std::map<std::string, std::string> read_word_map(const Json& j)
{
    std::map<std::string, std::string> out;
    for (const auto& [key, value] : j.items())
        out[key] = value.get<std::string>();
    return out;
}

inline Json word_map_json(const std::map<std::string, std::string>& m)
{
    Json out = Json::object();
    for (const auto& [k, v] : m)
        out[k] = v;
    return out;
}

/// Images of every generator, in generator order, from a name -> word map.
inline std::vector<Word> images_from_map(const Presentation& p, const std::map<std::string, std::string>& m,
                                         const std::string& label)
{
    std::vector<Word> out;
    for (int j = 1; j <= p.generator_count(); ++j) {
        const std::string name = p.generator_name(j);
        const auto it = m.find(name);
        out.push_back(it == m.end() ? Word::generator(j) : parse_word(it->second, p));
    }
    for (const auto& [name, word] : m) {
        bool known = false;
        for (int j = 1; j <= p.generator_count(); ++j)
            known = known || p.generator_name(j) == name;
        if (!known)
            throw PreconditionError("automorphism '" + label + "' names unknown generator '" + name + "'");
    }
    return out;
}

} // namespace detail

inline Automorphism build_automorphism(const Presentation& p, const AutomorphismSpec& spec)
{
    std::vector<Word> images = detail::images_from_map(p, spec.images, spec.label);
    if (spec.inverse)
        return Automorphism(p, std::move(images), detail::images_from_map(p, *spec.inverse, spec.label), spec.label);
    return Automorphism::from_images(p, std::move(images), spec.label);
}

inline ExperimentConfig config_from_json(const Json& j)
{
    try {
        ExperimentConfig c;
        if (j.contains("presentation"))
            c.presentation = presentation_from_json(j.at("presentation"));
        detail::read_optional(j, "n", c.n);
        if (j.contains("epsilon") && !j.at("epsilon").is_null())
            c.epsilon = j.at("epsilon").get<double>();
        detail::read_optional(j, "samples", c.samples);
        if (j.contains("proposal_cap"))
            c.proposal_cap = static_cast<std::uint64_t>(j.at("proposal_cap").get<double>());
        detail::read_optional(j, "seed", c.seed);
        detail::read_optional(j, "threads", c.threads);
        if (j.contains("output"))
            c.output = j.at("output").get<std::string>();
        if (j.contains("loops"))
            for (const auto& [name, words] : j.at("loops").items())
                c.loops.push_back({name, words.get<std::vector<std::string>>()});
        if (j.contains("automorphisms"))
            for (const Json& a : j.at("automorphisms")) {
                AutomorphismSpec spec{a.at("label").get<std::string>(), detail::read_word_map(a.at("images")), {}};
                if (a.contains("inverse"))
                    spec.inverse = detail::read_word_map(a.at("inverse"));
                c.automorphisms.push_back(std::move(spec));
            }
        if (j.contains("tolerances")) {
            const auto fields = detail::tolerance_fields();
            for (const auto& [key, value] : j.at("tolerances").items()) {
                bool found = false;
                for (const auto& [name, member] : fields)
                    if (name == key) {
                        c.tolerances.*member = value.get<double>();
                        found = true;
                    }
                if (!found)
                    throw PreconditionError("unknown tolerance '" + key + "'");
            }
        }
        if (j.contains("suites")) {
            const Json& s = j.at("suites");
            SuiteSettings& out = c.suites;
            detail::read_optional(s, "exact_samples", out.exact_samples);
            detail::read_optional(s, "random_tuples", out.random_tuples);
            detail::read_optional(s, "max_word_length", out.max_word_length);
            detail::read_optional(s, "sweep_epsilons", out.sweep_epsilons);
            detail::read_optional(s, "sweep_samples", out.sweep_samples);
            detail::read_optional(s, "cohomology_samples", out.cohomology_samples);
            if (s.contains("cohomology_epsilon") && !s.at("cohomology_epsilon").is_null())
                out.cohomology_epsilon = s.at("cohomology_epsilon").get<double>();
            detail::read_optional(s, "fresh_samples", out.fresh_samples);
            detail::read_optional(s, "haar_samples", out.haar_samples);
            detail::read_optional(s, "haar_dimensions", out.haar_dimensions);
        }
        return c;
    } catch (const Json::exception& e) {
        throw PreconditionError(std::string("malformed config: ") + e.what());
    }
}

inline Json config_to_json(const ExperimentConfig& c)
{
    Json j;
    j["presentation"] = presentation_to_json(c.presentation);
    j["n"] = c.n;
    j["epsilon"] = c.epsilon ? Json(*c.epsilon) : Json(nullptr);
    j["samples"] = c.samples;
    j["proposal_cap"] = c.proposal_cap;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["output"] = c.output.string();
    Json loops = Json::object();
    for (const auto& l : c.loops)
        loops[l.name] = l.words;
    j["loops"] = loops;
    Json autos = Json::array();
    for (const auto& a : c.automorphisms) {
        Json e;
        e["label"] = a.label;
        e["images"] = detail::word_map_json(a.images);
        if (a.inverse)
            e["inverse"] = detail::word_map_json(*a.inverse);
        autos.push_back(e);
    }
    j["automorphisms"] = autos;
    Json tol = Json::object();
    for (const auto& [name, member] : detail::tolerance_fields())
        tol[name] = c.tolerances.*member;
    j["tolerances"] = tol;
    const SuiteSettings& s = c.suites;
    j["suites"] = {
        {"exact_samples", s.exact_samples},
        {"random_tuples", s.random_tuples},
        {"max_word_length", s.max_word_length},
        {"sweep_epsilons", s.sweep_epsilons},
        {"sweep_samples", s.sweep_samples},
        {"cohomology_samples", s.cohomology_samples},
        {"cohomology_epsilon", s.cohomology_epsilon ? Json(*s.cohomology_epsilon) : Json(nullptr)},
        {"fresh_samples", s.fresh_samples},
        {"haar_samples", s.haar_samples},
        {"haar_dimensions", s.haar_dimensions},
    };
    return j;
}

inline void apply_overrides(ExperimentConfig& c, const Overrides& o)
{
    if (o.seed)
        c.seed = *o.seed;
    if (o.threads)
        c.threads = *o.threads;
    if (o.epsilon)
        c.epsilon = *o.epsilon;
    if (o.samples)
        c.samples = *o.samples;
    if (o.output)
        c.output = *o.output;
}

inline ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw PreconditionError("cannot open config " + path.string());
    try {
        return config_from_json(Json::parse(in));
    } catch (const Json::exception& e) {
        throw PreconditionError("cannot parse config " + path.string() + ": " + e.what());
    }
}

inline void ExperimentConfig::validate() const
{
    if (samples < 1)
        throw PreconditionError("config: samples must be at least 1");
    if (n < 2)
        throw PreconditionError("config: n must be at least 2");
    if (threads < 1)
        throw PreconditionError("config: threads must be at least 1");
    if (presentation.is_surface() && !(epsilon && *epsilon > 0.0))
        throw PreconditionError("config: surface presentations need epsilon > 0");
    for (const double e : suites.sweep_epsilons)
        if (!(e > 0.0))
            throw PreconditionError("config: sweep epsilons must be positive");
    loop_tuples();
    for (const auto& a : automorphisms)
        if (!verify_automorphism(build_automorphism(presentation, a), presentation).ok())
            throw PreconditionError("config: automorphism '" + a.label + "' failed verification");
}

inline std::vector<LoopTuple> ExperimentConfig::loop_tuples() const
{
    std::vector<LoopTuple> out;
    for (const auto& l : loops)
        out.push_back(LoopTuple::parse(presentation, n, l.words));
    return out;
}

inline std::vector<Automorphism> ExperimentConfig::all_automorphisms() const
{
    std::vector<Automorphism> out = shipped_automorphisms(presentation);
    for (const auto& a : automorphisms)
        out.push_back(build_automorphism(presentation, a));
    return out;
}

inline BatchOptions ExperimentConfig::batch_options(std::size_t count, std::optional<double> eps,
                                                    StreamPurpose purpose) const
{
    BatchOptions o;
    o.samples = count;
    o.epsilon = presentation.is_surface() ? eps : std::nullopt;
    o.seed = seed;
    o.threads = threads;
    o.proposal_cap = proposal_cap;
    o.purpose = purpose;
    return o;
}

} // namespace charvar::harness
