#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "permubuf/errors.hpp"
#include "permubuf/schedule.hpp"
#include "permubuf/simulate.hpp"

namespace permubuf {

struct OptResult {
    int accepted_count = 0;
    bool accepts_all_noninit = false;
    std::vector<Transmission> witness; // one entry per step 1..horizon
};

// Exact offline optimum by dynamic programming over (step, occupancy bitmask).
// Each step branches over transmitting any populated buffer or idling, then
// applies that step's arrivals (accept iff the buffer is empty). Witness
// ties break toward the lowest buffer index, then transmitting over idling.
inline OptResult opt_throughput(const ArrivalSchedule& schedule) {
    if (schedule.m > 16)
        throw state_space_infeasible_error("opt solver handles m <= 16 (state space 2^m), got m=" +
                                           std::to_string(schedule.m));
    const int m = schedule.m;
    const std::uint32_t nstates = 1u << m;
    const int horizon = schedule.last_time();

    // apply_arrivals(t, mask) -> (new mask, acceptances in step t)
    std::vector<std::size_t> step_begin(static_cast<std::size_t>(horizon + 2), 0);
    {
        std::size_t pos = 0;
        for (int t = 0; t <= horizon; ++t) {
            step_begin[static_cast<std::size_t>(t)] = pos;
            while (pos < schedule.events.size() && schedule.events[pos].time == t) ++pos;
        }
        step_begin[static_cast<std::size_t>(horizon + 1)] = schedule.events.size();
    }
    auto apply_arrivals = [&](int t, std::uint32_t mask, int& gained) {
        gained = 0;
        for (std::size_t a = step_begin[static_cast<std::size_t>(t)];
             a < step_begin[static_cast<std::size_t>(t) + 1]; ++a) {
            const std::uint32_t bit = 1u << schedule.events[a].buffer;
            if (!(mask & bit)) {
                mask |= bit;
                ++gained;
            }
        }
        return mask;
    };

    constexpr int kUnreached = -1;
    std::vector<int> dp(nstates, kUnreached);
    // choice[t][mask] = transmitted buffer (m for idle) on the best path into
    // mask after step t; prev[t][mask] = the mask the step started from.
    std::vector<std::vector<std::int8_t>> choice;
    std::vector<std::vector<std::uint32_t>> prev;

    if (horizon < 0)
        return OptResult{0, count_noninitializing(schedule) == 0, {}};

    {
        int gained = 0;
        const std::uint32_t start = apply_arrivals(0, 0, gained);
        dp[start] = gained;
    }

    for (int t = 1; t <= horizon; ++t) {
        std::vector<int> next(nstates, kUnreached);
        choice.emplace_back(nstates, std::int8_t{-1});
        prev.emplace_back(nstates, 0u);
        auto& step_choice = choice.back();
        auto& step_prev = prev.back();
        for (std::uint32_t mask = 0; mask < nstates; ++mask) {
            if (dp[mask] == kUnreached) continue;
            for (int c = 0; c <= m; ++c) { // c < m transmits buffer c; c == m idles
                if (c < m && !((mask >> c) & 1u)) continue;
                const std::uint32_t after_tx = c < m ? mask & ~(1u << c) : mask;
                int gained = 0;
                const std::uint32_t after = apply_arrivals(t, after_tx, gained);
                const int value = dp[mask] + gained;
                if (value > next[after]) {
                    next[after] = value;
                    step_choice[after] = static_cast<std::int8_t>(c);
                    step_prev[after] = mask;
                }
            }
        }
        dp = std::move(next);
    }

    std::uint32_t best_mask = 0;
    int best = kUnreached;
    for (std::uint32_t mask = 0; mask < nstates; ++mask) {
        if (dp[mask] > best) {
            best = dp[mask];
            best_mask = mask;
        }
    }

    OptResult result;
    result.accepted_count = best;
    result.accepts_all_noninit = best == static_cast<int>(schedule.events.size());
    result.witness.assign(static_cast<std::size_t>(horizon), Transmission{});
    std::uint32_t mask = best_mask;
    for (int t = horizon; t >= 1; --t) {
        const auto& step_choice = choice[static_cast<std::size_t>(t - 1)];
        const auto& step_prev = prev[static_cast<std::size_t>(t - 1)];
        const int c = step_choice[mask];
        result.witness[static_cast<std::size_t>(t - 1)] = {t, c == m ? kIdle : c};
        mask = step_prev[mask];
    }
    return result;
}

inline bool opt_accommodates_all(const ArrivalSchedule& schedule) {
    return opt_throughput(schedule).accepted_count == static_cast<int>(schedule.events.size());
}

} // namespace permubuf
