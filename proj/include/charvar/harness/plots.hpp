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
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "charvar/batch_io.hpp"
#include "charvar/harness/report.hpp"

namespace charvar::harness {

struct PlotOutput {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> notes;  ///< skipped plots and warnings
};

namespace detail {

/// Minimal fixed-size SVG canvas with a linear or log-scaled data frame.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string xlabel, std::string ylabel)
        : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel))
    {
    }

    void set_range(double x0, double x1, double y0, double y1)
    {
        if (x1 <= x0)
            x1 = x0 + 1.0;
        if (y1 <= y0)
            y1 = y0 + 1.0;
        x0_ = x0, x1_ = x1, y0_ = y0, y1_ = y1;
    }

    double px(double x) const { return kLeft + (x - x0_) / (x1_ - x0_) * kWidth; }
    double py(double y) const { return kTop + kHeight - (y - y0_) / (y1_ - y0_) * kHeight; }

    void rect(double x, double y, double w, double h, const char* fill)
    {
        body_ << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << h
              << "\" fill=\"" << fill << "\"/>\n";
    }

    void line(double xa, double ya, double xb, double yb, const char* stroke)
    {
        body_ << "<line x1=\"" << xa << "\" y1=\"" << ya << "\" x2=\"" << xb << "\" y2=\"" << yb
              << "\" stroke=\"" << stroke << "\"/>\n";
    }

    void circle(double x, double y, const char* fill)
    {
        body_ << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"" << fill << "\"/>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const char* stroke)
    {
        body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" points=\"";
        for (const auto& [x, y] : pts)
            body_ << x << ',' << y << ' ';
        body_ << "\"/>\n";
    }

    void text(double x, double y, const std::string& s, const char* anchor = "middle")
    {
        body_ << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"12\" text-anchor=\"" << anchor << "\">"
              << escape(s) << "</text>\n";
    }

    std::string str() const
    {
        std::ostringstream out;
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kLeft + kWidth + 20 << "\" height=\""
            << kTop + kHeight + 50 << "\">\n";
        out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        out << "<text x=\"" << kLeft + kWidth / 2 << "\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">"
            << escape(title_) << "</text>\n";
        out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth << "\" height=\"" << kHeight
            << "\" fill=\"none\" stroke=\"black\"/>\n";
        out << "<text x=\"" << kLeft + kWidth / 2 << "\" y=\"" << kTop + kHeight + 40
            << "\" font-size=\"12\" text-anchor=\"middle\">" << escape(xlabel_) << "</text>\n";
        out << "<text x=\"15\" y=\"" << kTop + kHeight / 2 << "\" font-size=\"12\" text-anchor=\"middle\" "
            << "transform=\"rotate(-90 15 " << kTop + kHeight / 2 << ")\">" << escape(ylabel_) << "</text>\n";
        out << tick(kLeft, kTop + kHeight + 16, x0_) << tick(kLeft + kWidth, kTop + kHeight + 16, x1_)
            << tick(kLeft - 6, kTop + kHeight, y0_, "end") << tick(kLeft - 6, kTop + 10, y1_, "end");
        out << body_.str() << "</svg>\n";
        return out.str();
    }

    static constexpr double kLeft = 70, kTop = 35, kWidth = 520, kHeight = 320;

private:
    static std::string escape(const std::string& s)
    {
        std::string out;
        for (char ch : s) {
            switch (ch) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += ch;
            }
        }
        return out;
    }

    static std::string tick(double x, double y, double v, const char* anchor = "middle")
    {
        char buf[200];
        std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"%s\">%.3g</text>\n", x,
                      y, anchor, v);
        return buf;
    }

    std::string title_, xlabel_, ylabel_;
    double x0_ = 0, x1_ = 1, y0_ = 0, y1_ = 1;
    std::ostringstream body_;
};

inline std::string slug(const std::string& s)
{
    std::string out;
    for (char ch : s)
        out += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
    return out;
}

inline void emit(PlotOutput& out, const std::filesystem::path& path, const std::string& text)
{
    write_text(path, text);
    out.files.push_back(path);
}

inline void histogram_plots(const Json& report, const std::filesystem::path& dir, PlotOutput& out)
{
    const std::string suite = report.value("suite", std::string("report"));
    for (const Json& h : report["details"]["histograms"]) {
        const auto counts = h.at("counts").get<std::vector<std::size_t>>();
        const double lo = h.at("lo").get<double>(), hi = h.at("hi").get<double>();
        const std::string name = h.at("observable").get<std::string>() + " " + h.at("component").get<std::string>();
        std::size_t peak = 1;
        for (auto k : counts)
            peak = std::max(peak, k);
        SvgPlot plot("histogram of " + name, h.at("component").get<std::string>() == "re" ? "Re t" : "Im t", "count");
        plot.set_range(lo, hi, 0, static_cast<double>(peak));
        const double w = (hi - lo) / static_cast<double>(counts.size());
        std::ostringstream csv;
        csv << "bin_lo,bin_hi,count\n";
        for (std::size_t i = 0; i < counts.size(); ++i) {
            const double a = lo + w * static_cast<double>(i);
            const double top = plot.py(static_cast<double>(counts[i]));
            plot.rect(plot.px(a), top, plot.px(a + w) - plot.px(a) - 1, plot.py(0) - top, "steelblue");
            csv << format_double(a) << ',' << format_double(a + w) << ',' << counts[i] << '\n';
        }
        plot.line(plot.px(0), plot.py(0), plot.px(0), plot.py(static_cast<double>(peak)), "red");
        const std::string base = suite + "_hist_" + slug(name);
        emit(out, dir / (base + ".svg"), plot.str());
        emit(out, dir / (base + ".csv"), csv.str());
    }
}

inline void sweep_plots(const Json& report, const std::filesystem::path& dir, PlotOutput& out)
{
    const std::string suite = report.value("suite", std::string("report"));
    for (const Json& curve : report["details"]["sweep"]) {
        const Json& points = curve.at("points");
        const std::string name = curve.at("observable").get<std::string>();
        if (points.empty()) {
            out.notes.push_back("sweep for " + name + " has no points; skipped");
            continue;
        }
        double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
        for (const Json& pt : points) {
            const double x = pt.at("epsilon").get<double>(), y = pt.at("re").get<double>();
            const double s = pt.at("std_error").get<double>();
            x0 = std::min(x0, x), x1 = std::max(x1, x);
            y0 = std::min(y0, y - 2 * s), y1 = std::max(y1, y + 2 * s);
        }
        const double padx = 0.1 * std::max(x1 - x0, 0.1), pady = 0.1 * std::max(y1 - y0, 1e-3);
        SvgPlot plot("Re mean of " + name + " vs epsilon", "epsilon", "estimate (2 SE bars)");
        plot.set_range(x0 - padx, x1 + padx, y0 - pady, y1 + pady);
        std::vector<std::pair<double, double>> poly;
        std::ostringstream csv;
        csv << "epsilon,re,im,std_error\n";
        for (const Json& pt : points) {
            const double x = pt.at("epsilon").get<double>(), y = pt.at("re").get<double>();
            const double s = pt.at("std_error").get<double>();
            poly.emplace_back(plot.px(x), plot.py(y));
            plot.line(plot.px(x), plot.py(y - 2 * s), plot.px(x), plot.py(y + 2 * s), "gray");
            plot.circle(plot.px(x), plot.py(y), "darkred");
            csv << format_double(x) << ',' << format_double(y) << ',' << format_double(pt.at("im").get<double>())
                << ',' << format_double(s) << '\n';
        }
        std::sort(poly.begin(), poly.end());
        plot.polyline(poly, "darkred");
        const std::string base = suite + "_sweep_" + slug(name);
        emit(out, dir / (base + ".svg"), plot.str());
        emit(out, dir / (base + ".csv"), csv.str());
    }
}

inline void spectrum_plots(const Json& report, const std::filesystem::path& dir, PlotOutput& out)
{
    const Json& samples = report["details"]["samples"];
    if (samples.empty())
        return;
    const std::string suite = report.value("suite", std::string("report"));
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    std::size_t width = 1;
    for (const Json& s : samples) {
        const auto sv = s.at("singular_values").get<std::vector<double>>();
        width = std::max(width, sv.size());
        for (double v : sv)
            if (v > 0)
                lo = std::min(lo, std::log10(v)), hi = std::max(hi, std::log10(v));
    }
    if (!(lo <= hi)) {
        out.notes.push_back("symplectic spectra are all zero; skipped");
        return;
    }
    SvgPlot plot("singular values of the H1 pairing matrix", "index (descending)", "log10 singular value");
    plot.set_range(0, static_cast<double>(width - 1), std::floor(lo) - 0.5, std::ceil(hi) + 0.5);
    std::ostringstream csv;
    csv << "sample,index,singular_value\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto sv = samples[i].at("singular_values").get<std::vector<double>>();
        std::vector<std::pair<double, double>> poly;
        for (std::size_t k = 0; k < sv.size(); ++k) {
            csv << i << ',' << k << ',' << format_double(sv[k]) << '\n';
            if (sv[k] > 0)
                poly.emplace_back(plot.px(static_cast<double>(k)), plot.py(std::log10(sv[k])));
        }
        plot.polyline(poly, "steelblue");
    }
    emit(out, dir / (suite + "_spectra.svg"), plot.str());
    emit(out, dir / (suite + "_spectra.csv"), csv.str());
}

} // namespace detail

/**
 * Renders the plots a report carries data for: trace histograms, epsilon
 * sweep curves and symplectic singular-value spectra, each as SVG plus the
 * underlying CSV. A report whose main batch is empty produces only a note.
 */
inline PlotOutput emit_plots(const Json& report, const std::filesystem::path& dir)
{
    PlotOutput out;
    bool empty_batch = false;
    if (report.contains("batches"))
        for (const Json& b : report["batches"])
            if (b.value("label", std::string()) == "main" && b.value("samples", std::size_t{0}) == 0)
                empty_batch = true;
    if (empty_batch) {
        out.notes.push_back("warning: main batch is empty; no plots written");
        return out;
    }
    const Json details = report.value("details", Json::object());
    Json view = report;
    view["details"] = details;
    for (const char* key : {"histograms", "sweep", "samples"})
        if (!details.contains(key))
            view["details"][key] = Json::array();
    detail::histogram_plots(view, dir, out);
    detail::sweep_plots(view, dir, out);
    detail::spectrum_plots(view, dir, out);
    if (out.files.empty())
        out.notes.push_back("report carries no plottable data");
    return out;
}

} // namespace charvar::harness
