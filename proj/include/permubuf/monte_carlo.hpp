#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "permubuf/checked_math.hpp"
#include "permubuf/errors.hpp"
#include "permubuf/schedule.hpp"
#include "permubuf/simulate.hpp"

namespace permubuf {

struct MCEstimate {
    exact_int trials = 0;
    std::uint64_t seed = 0;
    std::vector<exact_int> accept_counts;  // per non-initializing packet
    std::vector<double> standard_errors;   // binomial SE of count/trials

    double estimate(std::size_t i) const {
        return static_cast<double>(accept_counts[i]) / static_cast<double>(trials);
    }
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// splitmix64; one independent stream per (seed, trial index), so results do
// not depend on how trials are split across threads.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t trial)
        : state_(mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) + trial)) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Uniform integer in [0, bound) by multiply-shift with rejection of the
    // biased low region. Exactly uniform; no modulo shortcut.
    std::uint64_t bounded(std::uint64_t bound) {
        unsigned __int128 product = static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(product);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                product = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(product);
            }
        }
        return static_cast<std::uint64_t>(product >> 64);
    }

private:
    std::uint64_t state_;
};

inline void sample_trial_range(const PreparedSchedule& prep, std::uint64_t seed,
                               exact_int first, exact_int count,
                               std::vector<exact_int>& counts) {
    std::vector<int> perm(static_cast<std::size_t>(prep.m));
    std::vector<int> position(static_cast<std::size_t>(prep.m));
    for (exact_int trial = first; trial < first + count; ++trial) {
        TrialRng rng(seed, static_cast<std::uint64_t>(trial));
        for (int i = 0; i < prep.m; ++i) perm[static_cast<std::size_t>(i)] = i;
        for (int i = prep.m - 1; i >= 1; --i) { // Fisher-Yates, unbiased draws
            const auto j = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(i) + 1));
            std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        }
        for (int i = 0; i < prep.m; ++i)
            position[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i;
        prep.accumulate_accepts(position.data(), counts.data());
    }
}

} // namespace detail

// Estimates the acceptance profile from `trials` uniformly sampled
// permutations. Identical (schedule, trials, seed) give bit-identical
// results at any thread count.
inline MCEstimate estimate_profile(const ArrivalSchedule& schedule, exact_int trials,
                                   std::uint64_t seed, int threads = 1) {
    if (trials < 1)
        throw invalid_parameter_error("trial count must be >= 1");
    if (threads < 1)
        throw invalid_parameter_error("thread count must be >= 1");

    const PreparedSchedule prep(schedule);
    const int workers = static_cast<int>(std::min<exact_int>(threads, trials));
    std::vector<std::vector<exact_int>> partial(
        static_cast<std::size_t>(workers),
        std::vector<exact_int>(static_cast<std::size_t>(prep.noninit_count), 0));

    if (workers == 1) {
        detail::sample_trial_range(prep, seed, 0, trials, partial[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int k = 0; k < workers; ++k) {
            const exact_int first = trials * k / workers;
            const exact_int count = trials * (k + 1) / workers - first;
            pool.emplace_back([&prep, seed, first, count,
                               &bucket = partial[static_cast<std::size_t>(k)]] {
                detail::sample_trial_range(prep, seed, first, count, bucket);
            });
        }
        for (std::thread& w : pool) w.join();
    }

    MCEstimate est;
    est.trials = trials;
    est.seed = seed;
    est.accept_counts.assign(static_cast<std::size_t>(prep.noninit_count), 0);
    for (const auto& bucket : partial)
        for (std::size_t i = 0; i < bucket.size(); ++i)
            est.accept_counts[i] = checked_add(est.accept_counts[i], bucket[i]);
    est.standard_errors.reserve(est.accept_counts.size());
    for (std::size_t i = 0; i < est.accept_counts.size(); ++i) {
        const double p = est.estimate(i);
        est.standard_errors.push_back(std::sqrt(p * (1.0 - p) / static_cast<double>(trials)));
    }
    return est;
}

} // namespace permubuf
