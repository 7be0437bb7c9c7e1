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
/// Estimates a few trace-function means on the genus-2 SU(2) character
/// variety and inspects the tangent space at one polished sample.

#include <cstdio>

#include "charvar/cohomology.hpp"
#include "charvar/observables.hpp"
#include "charvar/polish.hpp"
#include "charvar/sampler.hpp"

using namespace charvar;

int main()
{
    const Presentation p = Presentation::surface(2);
    BatchOptions opts;
    opts.samples = 2000;
    opts.epsilon = 0.2;
    opts.seed = 7;
    const SampleBatch batch = sample_batch(p, 2, opts);
    std::printf("accepted %zu of %llu proposals\n", batch.size(), static_cast<unsigned long long>(batch.proposals));

    for (const char* word : {"a1", "a1 b1", "a1 b1 A1 B1", "a1 a1"}) {
        const LoopTuple gamma = LoopTuple::parse(p, 2, {word});
        const Estimate plain = mc_mean(batch, gamma);
        const Estimate averaged = twist_averaged_mean(batch, gamma);
        std::printf("%-12s plain % .4f%+.4fi (se %.4f)   twist-averaged % .4f%+.4fi\n", word, plain.value.real(),
                    plain.value.imag(), plain.std_error, averaged.value.real(), averaged.value.imag());
    }

    const PolishResult polished = polish(batch.samples.front());
    const SymplecticMatrix omega = symplectic_matrix(polished.rep);
    std::printf("polished defect %.2e after %d steps; dim Z1=%d B1=%d H1=%ld\n", polished.defect,
                polished.iterations, omega.z1_dim, omega.b1_dim, static_cast<long>(omega.entries.rows()));
    std::printf("pairing singular values:");
    for (Eigen::Index i = 0; i < omega.singular_values.size(); ++i)
        std::printf(" %.3g", omega.singular_values[i]);
    std::printf("\n");
}
