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
/// Acceptance run: criteria 1-10 on the shipped experiment matrix, one
/// PASS/FAIL line per criterion. Reports land under --out.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "charvar/batch_io.hpp"
#include "charvar/harness/config.hpp"
#include "charvar/harness/plots.hpp"
#include "charvar/harness/report.hpp"
#include "charvar/harness/suites.hpp"

namespace fs = std::filesystem;
using namespace charvar;
using namespace charvar::harness;

namespace {

using Clock = std::chrono::steady_clock;

struct Experiment {
    std::string name;
    ExperimentConfig config;
    std::optional<SampleBatch> batch;
    std::map<std::string, RunReport> reports;
};

struct Verdict {
    std::size_t checks = 0;
    std::vector<std::string> failures;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what)
    {
        ++checks;
        if (!ok)
            failures.push_back(what);
    }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::string describe(const TestRecord& t)
{
    return t.name + (t.observable.empty() ? "" : " " + t.observable) + ": measured " + format_double(t.measured) +
           " vs " + format_double(t.threshold);
}

/// Every record whose name starts with one of \p prefixes must not fail.
void require_records(Verdict& v, const RunReport& r, const std::vector<std::string>& prefixes,
                     std::size_t minimum = 1)
{
    std::size_t seen = 0;
    for (const TestRecord& t : r.tests) {
        bool match = false;
        for (const auto& p : prefixes)
            match = match || starts_with(t.name, p);
        if (!match)
            continue;
        ++seen;
        v.require(t.status != Status::fail, r.suite + "/" + describe(t));
    }
    std::ostringstream what;
    what << r.suite << ": expected at least " << minimum << " records matching";
    for (const auto& p : prefixes)
        what << ' ' << p;
    v.require(seen >= minimum, what.str());
}

ExperimentConfig load_shipped(const std::string& name, const fs::path& out)
{
    ExperimentConfig c = load_config(fs::path(CHARVAR_SOURCE_DIR) / "configs" / (name + ".json"));
    c.output = out / name;
    c.validate();
    return c;
}

const SampleBatch& main_batch(Experiment& e)
{
    if (!e.batch) {
        const auto t0 = Clock::now();
        e.batch = run_sample(e.config);
        std::printf("  sampled %s: %zu samples, %llu proposals, acceptance %.6g (%.1fs)\n", e.name.c_str(),
                    e.batch->size(), static_cast<unsigned long long>(e.batch->proposals), e.batch->acceptance_rate(),
                    seconds_since(t0));
        std::fflush(stdout);
    }
    return *e.batch;
}

const RunReport& suite(Experiment& e, const std::string& name)
{
    auto it = e.reports.find(name);
    if (it != e.reports.end())
        return it->second;
    const SampleBatch* b = suite_needs_batch(name) ? &main_batch(e) : nullptr;
    const auto t0 = Clock::now();
    RunReport r = run_verify(e.config, name, b);
    save_report(e.config.output, r);
    emit_plots(report_to_json(r), e.config.output / "plots");
    std::printf("  ran %s/%s: %zu pass, %zu fail, %zu flag (%.1fs)\n", e.name.c_str(), name.c_str(),
                r.count(Status::pass), r.count(Status::fail), r.count(Status::flag), seconds_since(t0));
    std::fflush(stdout);
    return e.reports.emplace(name, std::move(r)).first->second;
}

std::string batch_bytes(const SampleBatch& b)
{
    std::ostringstream out;
    write_batch(out, b);
    return out.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance criteria 1-10"};
    std::string out_dir = "acceptance_out";
    std::vector<int> only;
    app.add_option("--out", out_dir, "output directory for reports");
    app.add_option("--only", only, "run a subset of criteria");
    CLI11_PARSE(app, argc, argv);

    const fs::path out(out_dir);
    fs::create_directories(out);
    std::map<std::string, Experiment> ex;
    for (const char* name : {"g2n2", "g2n3", "g3n2", "free_r2n2"})
        ex.emplace(name, Experiment{name, load_shipped(name, out), std::nullopt, {}});
    Experiment& g2n2 = ex.at("g2n2");
    Experiment& g2n3 = ex.at("g2n3");
    Experiment& g3n2 = ex.at("g3n2");
    Experiment& free = ex.at("free_r2n2");

    using Criterion = std::pair<std::string, std::function<void(Verdict&)>>;
    const std::vector<Criterion> criteria = {
        {"exact twist action",
         [&](Verdict& v) {
             const RunReport& r = suite(g2n2, "twist");
             v.require(main_batch(g2n2).size() >= 1000, "g2n2 batch below 1000 samples");
             require_records(v, r, {"twist_defect_invariance", "twist_support_invariance"});
             require_records(v, r, {"twist_composition_exact"});
         }},
        {"transformation law",
         [&](Verdict& v) { require_records(v, suite(g2n2, "twist"), {"transformation_law"}); }},
        {"twist-averaged means vanish",
         [&](Verdict& v) {
             for (Experiment* e : {&g2n2, &g2n3}) {
                 const RunReport& r = suite(*e, "lemma");
                 require_records(v, r, {"lemma_exact"});
                 for (double eps : e->config.suites.sweep_epsilons)
                     require_records(v, r, {"lemma_exact[sweep," + harness::detail::eps_label(eps) + "]"});
             }
             require_records(v, suite(free, "free"), {"lemma_exact"});
         }},
        {"sampled means vanish",
         [&](Verdict& v) {
             for (auto [e, minimum] : {std::pair{&g2n2, std::size_t{5000}}, std::pair{&g2n3, std::size_t{2000}}}) {
                 const RunReport& r = suite(*e, "lemma");
                 const SampleBatch& b = main_batch(*e);
                 v.require(b.size() >= minimum, e->name + " batch below " + std::to_string(minimum));
                 std::size_t seen = 0;
                 for (const TestRecord& t : r.tests)
                     if (starts_with(t.name, "lemma_sampled[main") && t.observable == "(a1)") {
                         ++seen;
                         v.require(t.status == Status::pass, e->name + "/" + describe(t));
                         char line[200];
                         std::snprintf(line, sizeof line, "%s eps=%g: |mean t_a1| = %.3g SE over %zu samples, acceptance %.3g",
                                       e->name.c_str(), *b.epsilon, t.measured, b.size(), b.acceptance_rate());
                         v.notes.push_back(line);
                     }
                 v.require(seen == 1, e->name + ": missing sampled lemma record for (a1)");
             }
         }},
        {"trivial-class orthogonality",
         [&](Verdict& v) {
             const RunReport& r = suite(g2n2, "orthogonality");
             require_records(v, r, {"orthogonality", "variance_positive", "norm_positive", "centering"});
             const RunReport& f = suite(free, "free");
             v.require(free.batch && free.batch->size() >= 1'000'000, "free batch below 10^6 samples");
             require_records(v, f, {"orthogonality", "variance_positive", "norm_positive", "centering",
                                    "acceptance_rate"});
         }},
        {"Out(pi) action",
         [&](Verdict& v) {
             const RunReport& r = suite(g2n2, "mcg");
             require_records(v, r, {"automorphism_verified", "mcg_trace_identity", "mcg_defect_invariance"});
             require_records(v, r, {"mcg_ks"});
             require_records(v, suite(free, "free"), {"mcg_trace_identity", "mcg_ks"});
         }},
        {"cohomology dimensions",
         [&](Verdict& v) {
             for (Experiment* e : {&g2n2, &g2n3, &g3n2})
                 require_records(v, suite(*e, "symplectic"),
                                 {"polished_samples", "reducible_points", "dim_z1", "dim_b1", "dim_h1",
                                  "cocycle_residual", "coboundary_containment"},
                                 7);
         }},
        {"symplectic form",
         [&](Verdict& v) {
             for (Experiment* e : {&g2n2, &g2n3, &g3n2})
                 require_records(v, suite(*e, "symplectic"),
                                 {"skew_residual", "coboundary_pairing", "singular_value_ratio", "fd_order",
                                  "twist_transport"},
                                 5);
         }},
        {"Haar sampler moments",
         [&](Verdict& v) {
             const RunReport& r = suite(g2n2, "haar");
             require_records(v, r, {"haar_mean_trace[n=2]", "haar_second_moment[n=2]"});
             require_records(v, r, {"haar_mean_trace[n=3]", "haar_second_moment[n=3]"});
         }},
        {"reproducibility",
         [&](Verdict& v) {
             const std::vector<std::string> suites = {"twist", "lemma", "orthogonality", "mcg"};
             std::map<std::string, std::string> reference;
             for (const auto& s : suites)
                 reference[s] = report_to_csv(suite(g2n2, s));
             const std::string reference_batch = batch_bytes(main_batch(g2n2));
             for (int threads : {1, 4}) {
                 ExperimentConfig c = g2n2.config;
                 c.threads = threads;
                 const SampleBatch b = run_sample(c);
                 v.require(batch_bytes(b) == reference_batch,
                           "batch bytes differ at threads=" + std::to_string(threads));
                 for (const auto& s : suites)
                     v.require(report_to_csv(run_verify(c, s, &b)) == reference[s],
                               s + " CSV differs at threads=" + std::to_string(threads));
             }
         }},
    };

    bool all = true;
    Json summary = Json::array();
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k + 1);
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end())
            continue;
        Verdict v;
        const auto t0 = Clock::now();
        try {
            criteria[k].second(v);
        } catch (const std::exception& e) {
            v.failures.push_back(std::string("exception: ") + e.what());
        }
        const bool pass = v.failures.empty() && v.checks > 0;
        all = all && pass;
        for (const auto& n : v.notes)
            std::printf("  %s\n", n.c_str());
        for (const auto& f : v.failures)
            std::printf("  failed: %s\n", f.c_str());
        std::printf("%s criterion %d (%s): %zu checks, %.1fs\n", pass ? "PASS" : "FAIL", id,
                    criteria[k].first.c_str(), v.checks, seconds_since(t0));
        std::fflush(stdout);
        summary.push_back({{"criterion", id},
                           {"title", criteria[k].first},
                           {"status", pass ? "pass" : "fail"},
                           {"checks", v.checks},
                           {"failures", v.failures},
                           {"notes", v.notes}});
    }
    write_text(out / "acceptance_summary.json", summary.dump(2) + "\n");
    return all ? 0 : 1;
}
