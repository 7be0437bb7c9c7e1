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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "charvar/batch_io.hpp"
#include "charvar/observables.hpp"

namespace charvar::harness {

inline constexpr int kReportSchemaVersion = 1;

enum class Status { pass, fail, flag };

inline const char* to_string(Status s)
{
    switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::flag: return "flag";
    }
    return "fail";
}

/// How the measured value is compared with the threshold.
enum class Comparison { at_most, at_least };

inline const char* to_string(Comparison c) { return c == Comparison::at_most ? "at_most" : "at_least"; }

struct TestRecord {
    std::string name;
    Status status = Status::fail;
    double measured = 0.0;
    double threshold = 0.0;
    Comparison comparison = Comparison::at_most;
    std::string observable;
    std::optional<Estimator> estimator;
    std::optional<Estimate> estimate;
};

/**
 * Builds a record; a failed comparison becomes a flag instead of a failure
 * when \p advisory is set.
 */
inline TestRecord check(std::string name, double measured, double threshold,
                        Comparison comparison = Comparison::at_most, bool advisory = false)
{
    const bool ok = comparison == Comparison::at_most ? measured <= threshold : measured >= threshold;
    TestRecord r;
    r.name = std::move(name);
    r.measured = measured;
    r.threshold = threshold;
    r.comparison = comparison;
    r.status = ok ? Status::pass : (advisory ? Status::flag : Status::fail);
    return r;
}

/// Attaches an estimate to a record.
inline TestRecord with_estimate(TestRecord r, const std::string& observable, Estimator estimator, const Estimate& e)
{
    r.observable = observable;
    r.estimator = estimator;
    r.estimate = e;
    return r;
}

struct BatchSummary {
    std::string label;
    std::optional<double> epsilon;
    std::size_t samples = 0;
    std::uint64_t proposals = 0;
    double acceptance_rate = 0.0;
};

struct RunReport {
    std::string suite;
    Json config;
    std::vector<BatchSummary> batches;
    std::vector<TestRecord> tests;
    Json details = Json::object();  ///< suite-specific data for plots
    std::vector<std::pair<std::string, double>> timing;  ///< seconds per phase

    bool passed() const
    {
        for (const auto& t : tests)
            if (t.status == Status::fail)
                return false;
        return true;
    }

    std::size_t count(Status s) const
    {
        std::size_t k = 0;
        for (const auto& t : tests)
            k += t.status == s;
        return k;
    }

    void add(TestRecord r) { tests.push_back(std::move(r)); }
};

/// Fixed 17-significant-digit rendering used for CSV output.
inline std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline Json record_to_json(const TestRecord& t)
{
    Json j;
    j["name"] = t.name;
    j["status"] = to_string(t.status);
    j["measured"] = t.measured;
    j["threshold"] = t.threshold;
    j["comparison"] = to_string(t.comparison);
    if (t.estimate) {
        Json e;
        e["observable"] = t.observable;
        e["value"] = {t.estimate->value.real(), t.estimate->value.imag()};
        e["std_error"] = t.estimate->std_error;
        e["count"] = t.estimate->count;
        e["estimator"] = to_string(t.estimator.value_or(Estimator::plain));
        j["estimate"] = e;
    }
    return j;
}

/// The report as JSON; timing is left out when \p include_timing is false.
inline Json report_to_json(const RunReport& r, bool include_timing = true)
{
    Json j;
    j["schema_version"] = kReportSchemaVersion;
    j["suite"] = r.suite;
    j["config"] = r.config;
    Json batches = Json::array();
    for (const auto& b : r.batches)
        batches.push_back({{"label", b.label},
                           {"epsilon", b.epsilon ? Json(*b.epsilon) : Json(nullptr)},
                           {"samples", b.samples},
                           {"proposals", b.proposals},
                           {"acceptance_rate", b.acceptance_rate}});
    j["batches"] = batches;
    Json tests = Json::array();
    for (const auto& t : r.tests)
        tests.push_back(record_to_json(t));
    j["tests"] = tests;
    j["details"] = r.details;
    j["summary"] = {{"pass", r.count(Status::pass)},
                    {"fail", r.count(Status::fail)},
                    {"flag", r.count(Status::flag)},
                    {"passed", r.passed()}};
    if (include_timing) {
        Json timing = Json::object();
        for (const auto& [phase, seconds] : r.timing)
            timing[phase] = seconds;
        j["timing"] = timing;
    }
    return j;
}

inline const char* kCsvHeader = "suite,test,observable,estimator,re,im,std_error,count,threshold,status";

namespace detail {

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + "\"";
}

} // namespace detail

/**
 * One row per test. Rows with an estimate carry its value, standard error
 * and count; the others report the measured value in re.
 */
inline std::string report_to_csv(const RunReport& r)
{
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const auto& t : r.tests) {
        const bool est = t.estimate.has_value();
        out << detail::csv_field(r.suite) << ',' << detail::csv_field(t.name) << ','
            << detail::csv_field(t.observable) << ','
            << (t.estimator ? to_string(*t.estimator) : "") << ','
            << format_double(est ? t.estimate->value.real() : t.measured) << ','
            << format_double(est ? t.estimate->value.imag() : 0.0) << ','
            << format_double(est ? t.estimate->std_error : 0.0) << ','
            << (est ? t.estimate->count : 0) << ',' << format_double(t.threshold) << ','
            << to_string(t.status) << '\n';
    }
    return out.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    out << text;
    if (!out)
        throw Error("failed writing " + path.string());
}

/// Writes <dir>/<suite>_report.json and <dir>/<suite>_estimates.csv.
inline void save_report(const std::filesystem::path& dir, const RunReport& r)
{
    write_text(dir / (r.suite + "_report.json"), report_to_json(r).dump(2) + "\n");
    write_text(dir / (r.suite + "_estimates.csv"), report_to_csv(r));
}

} // namespace charvar::harness
