#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "permubuf/errors.hpp"
#include "permubuf/schedule.hpp"

namespace permubuf {

constexpr int kIdle = -1;

struct Transmission {
    int step   = 0;
    int buffer = kIdle; // kIdle when every buffer was empty

    friend bool operator==(const Transmission&, const Transmission&) = default;
};

struct RunTrace {
    std::vector<int> permutation;            // buffer ordering, front first
    std::vector<bool> accepted;              // by packet position in classify_packets order
    std::vector<Transmission> transmissions; // one per step 1..horizon
    std::uint32_t final_occupancy = 0;       // bitmask of populated buffers

    int accepted_count() const {
        int n = 0;
        for (bool a : accepted) n += a ? 1 : 0;
        return n;
    }
};

namespace detail {

inline void require_bijection(const std::vector<int>& permutation, int m) {
    if (static_cast<int>(permutation.size()) != m)
        throw invalid_permutation_error("permutation has " + std::to_string(permutation.size()) +
                                        " entries, expected " + std::to_string(m));
    std::uint32_t seen = 0;
    for (int b : permutation) {
        if (b < 0 || b >= m || (seen >> b) & 1u)
            throw invalid_permutation_error("permutation is not a bijection on [0, " +
                                            std::to_string(m) + ")");
        seen |= 1u << b;
    }
}

} // namespace detail

// Runs the step semantics with an arbitrary transmission policy.
// policy(step, occupancy_mask) must return a populated buffer index or kIdle;
// returning an empty or out-of-range buffer is a contract violation.
// horizon >= last event time; steps beyond it cannot change acceptances.
template <typename Policy>
RunTrace simulate_with_policy(const ArrivalSchedule& schedule, Policy&& policy, int horizon) {
    const auto records = classify_packets(schedule);
    RunTrace trace;
    trace.accepted.assign(records.size(), false);

    std::uint32_t occupied = 0;
    std::size_t next = 0;
    for (int t = 0; t <= horizon; ++t) {
        if (t >= 1) {
            int b = policy(t, occupied);
            if (b != kIdle) {
                if (b < 0 || b >= schedule.m || !((occupied >> b) & 1u))
                    throw invalid_parameter_error(
                        "policy transmitted from empty or invalid buffer " + std::to_string(b));
                occupied &= ~(1u << b);
            }
            trace.transmissions.push_back({t, b});
        }
        while (next < records.size() && records[next].time == t) {
            const std::uint32_t bit = 1u << records[next].buffer;
            if (!(occupied & bit)) {
                occupied |= bit;
                trace.accepted[next] = true;
            }
            ++next;
        }
    }
    trace.final_occupancy = occupied;
    return trace;
}

// One deterministic run of Random Permutation under a fixed buffer ordering:
// each step transmits from the populated buffer most to the front of the
// permutation (idling if all are empty).
inline RunTrace run_deterministic(const ArrivalSchedule& schedule,
                                  const std::vector<int>& permutation,
                                  int horizon = -1) {
    detail::require_bijection(permutation, schedule.m);
    if (horizon < schedule.last_time()) horizon = schedule.last_time();
    auto policy = [&permutation](int, std::uint32_t occupied) {
        for (int b : permutation)
            if ((occupied >> b) & 1u) return b;
        return kIdle;
    };
    RunTrace trace = simulate_with_policy(schedule, policy, horizon);
    trace.permutation = permutation;
    return trace;
}

// Replays an explicit transmission list (entries for steps 1..N in order).
inline RunTrace replay_transmissions(const ArrivalSchedule& schedule,
                                     const std::vector<Transmission>& transmissions) {
    int horizon = schedule.last_time();
    for (const Transmission& tx : transmissions)
        if (tx.step > horizon) horizon = tx.step;
    auto policy = [&transmissions](int step, std::uint32_t) {
        const std::size_t i = static_cast<std::size_t>(step) - 1;
        return i < transmissions.size() ? transmissions[i].buffer : kIdle;
    };
    return simulate_with_policy(schedule, policy, horizon);
}

// Flattened arrival table for the enumeration hot path: one pass of
// classification up front, then each permutation run touches plain arrays.
struct PreparedSchedule {
    int m = 0;
    int horizon = -1;
    int noninit_count = 0;
    std::vector<int> arrival_buffer;      // arrivals in (time, buffer) order
    std::vector<int> arrival_index;       // 0 = initializing, else 1-based
    std::vector<int> step_begin;          // arrival range [step_begin[t], step_begin[t+1])

    explicit PreparedSchedule(const ArrivalSchedule& schedule) : m(schedule.m) {
        const auto records = classify_packets(schedule);
        horizon = schedule.last_time();
        arrival_buffer.reserve(records.size());
        arrival_index.reserve(records.size());
        step_begin.assign(static_cast<std::size_t>(horizon + 2), 0);
        for (const PacketRecord& r : records) {
            arrival_buffer.push_back(r.buffer);
            arrival_index.push_back(r.noninit_index);
            if (r.noninit_index > noninit_count) noninit_count = r.noninit_index;
        }
        std::size_t pos = 0;
        for (int t = 0; t <= horizon; ++t) {
            step_begin[static_cast<std::size_t>(t)] = static_cast<int>(pos);
            while (pos < records.size() && records[pos].time == t) ++pos;
        }
        step_begin[static_cast<std::size_t>(horizon + 1)] = static_cast<int>(pos);
    }

    // position[b] = rank of buffer b in the permutation (0 = front).
    // Adds 1 to counts[i] for every accepted non-initializing packet i.
    template <typename Count>
    void accumulate_accepts(const int* position, Count* counts) const {
        std::uint32_t occupied = 0;
        for (int t = 0; t <= horizon; ++t) {
            if (t >= 1 && occupied != 0) {
                std::uint32_t mask = occupied;
                int best = -1, best_pos = m;
                do {
                    const int b = __builtin_ctz(mask);
                    if (position[b] < best_pos) { best_pos = position[b]; best = b; }
                    mask &= mask - 1;
                } while (mask != 0);
                occupied &= ~(1u << best);
            }
            const int begin = step_begin[static_cast<std::size_t>(t)];
            const int end   = step_begin[static_cast<std::size_t>(t) + 1];
            for (int a = begin; a < end; ++a) {
                const std::uint32_t bit = 1u << arrival_buffer[static_cast<std::size_t>(a)];
                if (!(occupied & bit)) {
                    occupied |= bit;
                    const int idx = arrival_index[static_cast<std::size_t>(a)];
                    if (idx > 0) ++counts[idx - 1];
                }
            }
        }
    }
};

} // namespace permubuf
