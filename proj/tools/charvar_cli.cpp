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
/// Command-line front end: sample, verify, plot and report.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "charvar/batch_io.hpp"
#include "charvar/error.hpp"
#include "charvar/harness/config.hpp"
#include "charvar/harness/plots.hpp"
#include "charvar/harness/report.hpp"
#include "charvar/harness/suites.hpp"

namespace fs = std::filesystem;
using namespace charvar;
using namespace charvar::harness;

namespace {

struct CommonOptions {
    std::string config;
    Overrides overrides;
    std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonOptions& o)
{
    cmd->add_option("--config", o.config, "experiment config (JSON)")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.overrides.seed, "master seed");
    cmd->add_option("--threads", o.overrides.threads, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--epsilon", o.overrides.epsilon, "relator tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--samples", o.overrides.samples, "accepted samples")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "output directory");
}

ExperimentConfig resolve(CommonOptions& o)
{
    ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
    if (o.out)
        o.overrides.output = fs::path(*o.out);
    apply_overrides(c, o.overrides);
    c.validate();
    return c;
}

void print_report(const RunReport& r)
{
    for (const TestRecord& t : r.tests) {
        const char* status = t.status == Status::pass ? "PASS" : t.status == Status::fail ? "FAIL" : "FLAG";
        std::printf("%-5s %-14s %-48s measured=%s threshold=%s\n", status, r.suite.c_str(), t.name.c_str(),
                    format_double(t.measured).c_str(), format_double(t.threshold).c_str());
    }
    std::printf("%s: %zu passed, %zu failed, %zu flagged\n", r.suite.c_str(), r.count(Status::pass),
                r.count(Status::fail), r.count(Status::flag));
}

std::vector<fs::path> report_files(const fs::path& dir)
{
    std::vector<fs::path> out;
    if (!fs::is_directory(dir))
        return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() > 12 && name.ends_with("_report.json"))
            out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

Json read_json(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw Error("malformed report " + path.string() + ": " + e.what());
    }
}

int cmd_sample(CommonOptions& o, const std::optional<std::string>& batch_path)
{
    const ExperimentConfig c = resolve(o);
    const SampleBatch batch = run_sample(c);
    const fs::path path = batch_path ? fs::path(*batch_path) : c.output / "batch.jsonl";
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    save_batch(path, batch);
    std::printf("wrote %zu samples (%llu proposals, acceptance %.6g) to %s\n", batch.samples.size(),
                static_cast<unsigned long long>(batch.proposals), batch.acceptance_rate(), path.string().c_str());
    return 0;
}

int cmd_verify(CommonOptions& o, const std::string& suite, const std::optional<std::string>& batch_path)
{
    const ExperimentConfig c = resolve(o);
    std::vector<std::string> suites;
    if (suite == "all") {
        for (const auto& s : suite_names())
            if (s != "free" || !c.presentation.is_surface())
                suites.push_back(s);
    } else {
        suites.push_back(suite);
    }

    std::optional<SampleBatch> batch;
    if (batch_path)
        batch = load_batch(*batch_path);
    bool failed = false;
    for (const auto& s : suites) {
        if (!batch && suite_needs_batch(s) && s != "free")
            batch = run_sample(c);
        const RunReport r = run_verify(c, s, batch && s != "free" ? &*batch : nullptr);
        save_report(c.output, r);
        print_report(r);
        failed = failed || !r.passed();
    }
    return failed ? 1 : 0;
}

int cmd_plot(const std::string& dir, const std::optional<std::string>& plot_dir)
{
    const fs::path target = plot_dir ? fs::path(*plot_dir) : fs::path(dir) / "plots";
    const auto reports = report_files(dir);
    if (reports.empty()) {
        std::fprintf(stderr, "warning: no reports in %s; nothing to plot\n", dir.c_str());
        return 0;
    }
    fs::create_directories(target);
    for (const auto& path : reports) {
        const PlotOutput out = emit_plots(read_json(path), target);
        for (const auto& f : out.files)
            std::printf("wrote %s\n", f.string().c_str());
        for (const auto& n : out.notes)
            std::fprintf(stderr, "%s: %s\n", path.filename().string().c_str(), n.c_str());
    }
    return 0;
}

int cmd_report(const std::string& dir)
{
    const auto reports = report_files(dir);
    if (reports.empty())
        throw Error("no reports in " + dir);
    Json summary = Json::object();
    std::string md = "| suite | test | measured | threshold | status |\n|---|---|---|---|---|\n";
    bool failed = false;
    for (const auto& path : reports) {
        const Json r = read_json(path);
        const std::string suite = r.at("suite").get<std::string>();
        summary[suite] = r.at("summary");
        for (const Json& t : r.at("tests")) {
            const std::string status = t.at("status").get<std::string>();
            failed = failed || status == "fail";
            md += "| " + suite + " | " + t.at("name").get<std::string>() + " | " +
                  format_double(t.at("measured").get<double>()) + " | " +
                  format_double(t.at("threshold").get<double>()) + " | " + status + " |\n";
        }
    }
    write_text(fs::path(dir) / "summary.json", summary.dump(2) + "\n");
    write_text(fs::path(dir) / "summary.md", md);
    std::fputs(md.c_str(), stdout);
    return failed ? 1 : 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"charvar: Monte Carlo checks on surface group character varieties"};
    app.require_subcommand(1);

    CommonOptions sample_opts, verify_opts;
    std::optional<std::string> batch_out, batch_in, plot_out;
    std::string suite, plot_dir = "out", report_dir = "out";

    auto* sample = app.add_subcommand("sample", "draw a sample batch and write it as JSON lines");
    add_common(sample, sample_opts);
    sample->add_option("--batch", batch_out, "batch file to write (default <out>/batch.jsonl)");

    auto* verify = app.add_subcommand("verify", "run a test suite and write its report");
    add_common(verify, verify_opts);
    std::vector<std::string> choices = suite_names();
    choices.push_back("all");
    verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(choices));
    verify->add_option("--batch", batch_in, "reuse a batch file instead of sampling")->check(CLI::ExistingFile);

    auto* plot = app.add_subcommand("plot", "render plots from the reports in a directory");
    plot->add_option("--dir", plot_dir, "directory holding *_report.json");
    plot->add_option("--out", plot_out, "plot directory (default <dir>/plots)");

    auto* report = app.add_subcommand("report", "summarize the reports in a directory");
    report->add_option("--dir", report_dir, "directory holding *_report.json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sample)
            return cmd_sample(sample_opts, batch_out);
        if (*verify)
            return cmd_verify(verify_opts, suite, batch_in);
        if (*plot)
            return cmd_plot(plot_dir, plot_out);
        if (*report)
            return cmd_report(report_dir);
    } catch (const SamplingError& e) {
        std::fprintf(stderr, "sampling error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
