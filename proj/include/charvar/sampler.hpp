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
#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "charvar/error.hpp"
#include "charvar/random.hpp"
#include "charvar/representation.hpp"
#include "charvar/unitary.hpp"

namespace charvar {

namespace detail {

/**
 * One Haar proposal for the rejection sampler, evaluated with fixed-size
 * matrices when N is known at compile time. Accepts when the relator defect
 * is at most epsilon both in the fixed-size evaluation and in the generic
 * relator_defect(), so every accepted point satisfies the batch invariant
 * under the public evaluation path.
 */
template <int N>
class ProposalKernel {
public:
    using Mat = std::conditional_t<N == Eigen::Dynamic, Matrix, SquareMatrix<N>>;

    ProposalKernel(const Presentation& p, int n, std::optional<double> epsilon)
        : presentation_(p), n_(n), epsilon_(epsilon),
          gens_(static_cast<std::size_t>(p.generator_count()), Mat(n, n))
    {
    }

    /// Draws one proposal from \p rng; true when accepted.
    bool propose(RandomStream& rng)
    {
        for (Mat& m : gens_)
            haar_fill(m, rng);
        if (!epsilon_)
            return true;
        Mat acc = Mat::Identity(n_, n_);
        for (std::size_t i = 0; i + 1 < gens_.size(); i += 2) {
            const Mat& a = gens_[i];
            const Mat& b = gens_[i + 1];
            acc = acc * a;
            acc = acc * b;
            acc = acc * a.adjoint();
            acc = acc * b.adjoint();
        }
        if (distance_to_identity(acc) > *epsilon_)
            return false;
        defect_ = relator_defect(current());
        return defect_ <= *epsilon_;
    }

    Representation current() const
    {
        std::vector<Matrix> out;
        out.reserve(gens_.size());
        for (const Mat& m : gens_)
            out.emplace_back(m);
        return Representation(presentation_, n_, std::move(out));
    }

    double defect() const { return defect_; }

private:
    Presentation presentation_;
    int n_;
    std::optional<double> epsilon_;
    std::vector<Mat> gens_;
    double defect_ = 0.0;
};

template <class Fn>
decltype(auto) dispatch_dimension(int n, Fn&& fn)
{
    switch (n) {
    case 2: return fn(std::integral_constant<int, 2>{});
    case 3: return fn(std::integral_constant<int, 3>{});
    case 4: return fn(std::integral_constant<int, 4>{});
    default: return fn(std::integral_constant<int, Eigen::Dynamic>{});
    }
}

} // namespace detail

struct SampledPoint {
    Representation rep;
    double defect;
    std::uint64_t proposals;
};

/**
 * Rejection sampler for the epsilon-level set: draws 2g independent Haar
 * matrices per proposal and returns the first tuple with relator defect at
 * most epsilon. Throws SamplingError after \p proposal_cap proposals.
 */
inline SampledPoint sample_representation(const Presentation& p, int n, double epsilon,
                                          RandomStream& rng, std::uint64_t proposal_cap)
{
    if (!p.is_surface())
        throw PreconditionError("sample_representation requires a surface presentation");
    if (!(epsilon > 0.0))
        throw PreconditionError("sample_representation requires epsilon > 0");
    if (n < 2)
        throw PreconditionError("sample_representation requires n >= 2");
    return detail::dispatch_dimension(n, [&](auto dim) -> SampledPoint {
        detail::ProposalKernel<decltype(dim)::value> kernel(p, n, epsilon);
        for (std::uint64_t k = 1; k <= proposal_cap; ++k)
            if (kernel.propose(rng))
                return {kernel.current(), kernel.defect(), k};
        throw SamplingError("proposal budget of " + std::to_string(proposal_cap) +
                                " exhausted without an accepted sample",
                            0.0);
    });
}

/// Exact Haar product sample for a free presentation.
inline Representation sample_free(const Presentation& p, int n, RandomStream& rng)
{
    if (p.is_surface())
        throw PreconditionError("sample_free requires a free presentation");
    std::vector<Matrix> gens;
    for (int j = 0; j < p.generator_count(); ++j)
        gens.push_back(haar_sample(n, rng));
    return Representation(p, n, std::move(gens));
}

/// Accepted samples together with the metadata of the run that produced them.
struct SampleBatch {
    Presentation presentation;
    int n;
    std::optional<double> epsilon;  ///< empty for free presentations
    std::uint64_t seed;
    std::vector<Representation> samples;
    std::vector<double> defects;  ///< relator defects; zeros in free mode
    std::uint64_t proposals = 0;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }

    double acceptance_rate() const
    {
        return proposals == 0 ? 0.0 : static_cast<double>(samples.size()) / static_cast<double>(proposals);
    }
};

struct BatchOptions {
    std::size_t samples = 1000;
    std::optional<double> epsilon;  ///< required for surface presentations
    std::uint64_t seed = 1;
    int threads = 1;
    std::uint64_t proposal_cap = 1'000'000'000;
    StreamPurpose purpose = StreamPurpose::sampling;
};

/// Proposals per logical stream. Fixed so that results do not depend on threading.
inline constexpr std::uint64_t kBlockProposals = 1u << 14;

/**
 * Draws a batch by splitting the proposal sequence into fixed-size blocks.
 * Block b uses the Philox stream (seed, stream_id(purpose, b)). Accepted
 * samples are ordered by (block, position) and the batch is the first
 * \p samples of that sequence, so the output is identical for every thread
 * count. proposals counts up to and including the last kept acceptance.
 */
inline SampleBatch sample_batch(const Presentation& p, int n, const BatchOptions& opts)
{
    if (n < 2)
        throw PreconditionError("sample_batch requires n >= 2");
    if (opts.samples < 1)
        throw PreconditionError("sample_batch requires at least one sample");
    if (p.is_surface() && !(opts.epsilon && *opts.epsilon > 0.0))
        throw PreconditionError("surface sampling requires epsilon > 0");
    const std::optional<double> eps = p.is_surface() ? opts.epsilon : std::nullopt;

    struct Hit {
        std::uint64_t position;
        Representation rep;
        double defect;
    };
    std::mutex mutex;
    std::map<std::uint64_t, std::vector<Hit>> finished;
    std::uint64_t prefix_blocks = 0;
    std::size_t prefix_hits = 0;
    std::atomic<std::uint64_t> next_block{0};
    std::atomic<bool> stop{false};
    const std::uint64_t cap = opts.proposal_cap;

    auto run_block = [&](std::uint64_t block) {
        const std::uint64_t start = block * kBlockProposals;
        const std::uint64_t count = std::min(kBlockProposals, cap - start);
        RandomStream rng(opts.seed, stream_id(opts.purpose, block));
        std::vector<Hit> hits;
        detail::dispatch_dimension(n, [&](auto dim) {
            detail::ProposalKernel<decltype(dim)::value> kernel(p, n, eps);
            for (std::uint64_t k = 0; k < count && !stop.load(std::memory_order_relaxed); ++k)
                if (kernel.propose(rng))
                    hits.push_back({k, kernel.current(), eps ? kernel.defect() : 0.0});
        });
        return hits;
    };

    auto worker = [&] {
        while (!stop.load()) {
            const std::uint64_t block = next_block.fetch_add(1);
            if (block * kBlockProposals >= cap)
                break;
            auto hits = run_block(block);
            std::lock_guard<std::mutex> lock(mutex);
            finished.emplace(block, std::move(hits));
            for (auto it = finished.find(prefix_blocks); it != finished.end();
                 it = finished.find(prefix_blocks)) {
                prefix_hits += it->second.size();
                ++prefix_blocks;
            }
            if (prefix_hits >= opts.samples)
                stop.store(true);
        }
    };

    const int threads = std::max(1, opts.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    SampleBatch batch{p, n, eps, opts.seed, {}, {}, 0};
    // A block interrupted by stop may be incomplete; only the complete prefix is used.
    std::uint64_t used_blocks = 0;
    for (auto& [block, hits] : finished) {
        if (block != used_blocks || batch.samples.size() >= opts.samples)
            break;
        ++used_blocks;
        for (Hit& h : hits) {
            batch.samples.push_back(std::move(h.rep));
            batch.defects.push_back(h.defect);
            batch.proposals = block * kBlockProposals + h.position + 1;
            if (batch.samples.size() == opts.samples)
                break;
        }
    }
    if (batch.samples.size() < opts.samples) {
        const std::uint64_t tried = std::min(cap, used_blocks * kBlockProposals);
        const double rate = tried ? static_cast<double>(batch.samples.size()) / static_cast<double>(tried) : 0.0;
        std::ostringstream msg;
        msg << "proposal cap " << cap << " exhausted with " << batch.samples.size() << " of "
            << opts.samples << " samples accepted (acceptance rate estimate " << rate << ")";
        throw SamplingError(msg.str(), rate);
    }
    return batch;
}

} // namespace charvar
