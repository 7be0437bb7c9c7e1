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
#include <complex>
#include <span>
#include <vector>

namespace charvar {

/// Pairwise (cascade) summation; the result depends only on the input order.
template <class T>
T pairwise_sum(std::span<const T> xs)
{
    if (xs.size() <= 8) {
        T acc{};
        for (const T& x : xs)
            acc += x;
        return acc;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

template <class T>
T pairwise_mean(std::span<const T> xs)
{
    return xs.empty() ? T{} : pairwise_sum(xs) / static_cast<double>(xs.size());
}

template <class T>
T pairwise_sum(const std::vector<T>& xs)
{
    return pairwise_sum(std::span<const T>(xs));
}

template <class T>
T pairwise_mean(const std::vector<T>& xs)
{
    return pairwise_mean(std::span<const T>(xs));
}

/// Unbiased sample variance of real values (0 for fewer than two values).
inline double sample_variance(std::span<const double> xs)
{
    if (xs.size() < 2)
        return 0.0;
    const double mean = pairwise_mean(xs);
    std::vector<double> sq(xs.size());
    std::transform(xs.begin(), xs.end(), sq.begin(), [mean](double x) { return (x - mean) * (x - mean); });
    return pairwise_sum(std::span<const double>(sq)) / static_cast<double>(xs.size() - 1);
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
inline double ks_statistic(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x)
            ++i;
        while (j < b.size() && b[j] <= x)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

/// Asymptotic critical value of the two-sample KS statistic at level alpha.
inline double ks_critical_value(double alpha, std::size_t na, std::size_t nb)
{
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    const double a = static_cast<double>(na);
    const double b = static_cast<double>(nb);
    return c * std::sqrt((a + b) / (a * b));
}

} // namespace charvar
