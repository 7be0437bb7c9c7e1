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

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "json.hpp"

#include "charvar/error.hpp"
#include "charvar/sampler.hpp"

// JSON-lines sample batches. The first line is a header
//   {"presentation": {...}, "n": 2, "epsilon": 0.2, "seed": 1, "proposals": 123}
// followed by one line per sample
//   {"index": 0, "defect": 0.13, "matrices": [[[re, im], ...], ...]}
// with each matrix a row-major list of (re, im) pairs.

namespace charvar {

using Json = nlohmann::json;

inline Json presentation_to_json(const Presentation& p)
{
    if (p.is_surface())
        return Json{{"kind", "surface"}, {"genus", p.genus()}};
    return Json{{"kind", "free"}, {"rank", p.size_parameter()}};
}

inline Presentation presentation_from_json(const Json& j)
{
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "surface")
        return Presentation::surface(j.at("genus").get<int>());
    if (kind == "free")
        return Presentation::free(j.at("rank").get<int>());
    throw PreconditionError("unknown presentation kind '" + kind + "'");
}

inline Json matrix_to_json(const Matrix& m)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    return out;
}

inline Matrix matrix_from_json(const Json& j, int n)
{
    if (!j.is_array() || j.size() != static_cast<std::size_t>(n * n))
        throw PreconditionError("matrix entry list has wrong length");
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const Json& e = j[static_cast<std::size_t>(i * n + k)];
            m(i, k) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
        }
    return m;
}

inline Json batch_header(const SampleBatch& batch)
{
    Json h;
    h["presentation"] = presentation_to_json(batch.presentation);
    h["n"] = batch.n;
    h["epsilon"] = batch.epsilon ? Json(*batch.epsilon) : Json(nullptr);
    h["seed"] = batch.seed;
    h["proposals"] = batch.proposals;
    return h;
}

inline void write_batch(std::ostream& out, const SampleBatch& batch)
{
    out << batch_header(batch).dump() << '\n';
    for (std::size_t i = 0; i < batch.samples.size(); ++i) {
        Json line;
        line["index"] = i;
        line["defect"] = batch.defects[i];
        Json mats = Json::array();
        for (const Matrix& m : batch.samples[i].generators())
            mats.push_back(matrix_to_json(m));
        line["matrices"] = std::move(mats);
        out << line.dump() << '\n';
    }
}

inline SampleBatch read_batch(std::istream& in)
try {
    std::string line;
    if (!std::getline(in, line))
        throw PreconditionError("batch file is empty");
    const Json h = Json::parse(line);
    const Presentation p = presentation_from_json(h.at("presentation"));
    const int n = h.at("n").get<int>();
    std::optional<double> eps;
    if (!h.at("epsilon").is_null())
        eps = h.at("epsilon").get<double>();
    SampleBatch batch{p, n, eps, h.at("seed").get<std::uint64_t>(), {}, {},
                      h.at("proposals").get<std::uint64_t>()};
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const Json j = Json::parse(line);
        std::vector<Matrix> gens;
        for (const Json& m : j.at("matrices"))
            gens.push_back(matrix_from_json(m, n));
        batch.samples.emplace_back(p, n, std::move(gens));
        batch.defects.push_back(j.at("defect").get<double>());
    }
    return batch;
} catch (const Json::exception& e) {
    throw Error(std::string("malformed batch file: ") + e.what());
}

inline void save_batch(const std::filesystem::path& path, const SampleBatch& batch)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write batch file " + path.string());
    write_batch(out, batch);
    if (!out)
        throw Error("failed writing batch file " + path.string());
}

inline SampleBatch load_batch(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open batch file " + path.string());
    return read_batch(in);
}

} // namespace charvar
