#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "permubuf/errors.hpp"

namespace permubuf {

// The m-buffer model with per-buffer capacity B = 1. Time is discrete.
// Each step t >= 1 begins with one transmission opportunity, followed by
// the arrivals scheduled at time t; step 0 has arrivals only. An arrival
// is accepted iff its buffer is empty at that instant; nothing preempts.

struct Event {
    int time   = 0; // non-negative step index
    int buffer = 0; // 0-based buffer index, < m

    friend auto operator<=>(const Event&, const Event&) = default;
};

struct ArrivalSchedule {
    int m = 0;                 // number of buffers
    std::vector<Event> events; // sorted by (time, buffer); duplicates kept in input order

    int last_time() const { return events.empty() ? -1 : events.back().time; }
};

// Sorts events and validates ranges. Duplicate (time, buffer) pairs are
// tolerated (the second copy of a pair is necessarily rejected at run time).
inline ArrivalSchedule make_schedule(int m, std::vector<Event> events) {
    if (m < 1)
        throw invalid_parameter_error("schedule requires m >= 1, got m=" + std::to_string(m));
    for (const Event& e : events) {
        if (e.time < 0)
            throw invalid_parameter_error("negative event time " + std::to_string(e.time));
        if (e.buffer < 0 || e.buffer >= m)
            throw invalid_parameter_error("buffer index " + std::to_string(e.buffer) +
                                          " out of range [0, " + std::to_string(m) + ")");
    }
    std::stable_sort(events.begin(), events.end());
    return ArrivalSchedule{m, std::move(events)};
}

// Sorted with exact (time, buffer) duplicates removed.
inline ArrivalSchedule canonicalize(const ArrivalSchedule& s) {
    std::vector<Event> ev = s.events;
    std::sort(ev.begin(), ev.end());
    ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
    return ArrivalSchedule{s.m, std::move(ev)};
}

// The first packet ever injected to a buffer is initializing; all later
// packets to that buffer are non-initializing and carry a 1-based index
// assigned in global (time, buffer) arrival order.
struct PacketRecord {
    int time         = 0;
    int buffer       = 0;
    int noninit_index = 0; // 0 for initializing packets

    bool initializing() const { return noninit_index == 0; }

    friend bool operator==(const PacketRecord&, const PacketRecord&) = default;
};

inline std::vector<PacketRecord> classify_packets(const ArrivalSchedule& schedule) {
    std::vector<PacketRecord> records;
    records.reserve(schedule.events.size());
    std::vector<bool> seen(static_cast<std::size_t>(schedule.m), false);
    int next_index = 0;
    for (const Event& e : schedule.events) {
        PacketRecord rec{e.time, e.buffer, 0};
        if (seen[static_cast<std::size_t>(e.buffer)]) {
            rec.noninit_index = ++next_index;
        } else {
            seen[static_cast<std::size_t>(e.buffer)] = true;
        }
        records.push_back(rec);
    }
    return records;
}

inline int count_noninitializing(const ArrivalSchedule& schedule) {
    int distinct = 0;
    std::vector<bool> seen(static_cast<std::size_t>(schedule.m), false);
    for (const Event& e : schedule.events) {
        if (!seen[static_cast<std::size_t>(e.buffer)]) {
            seen[static_cast<std::size_t>(e.buffer)] = true;
            ++distinct;
        }
    }
    return static_cast<int>(schedule.events.size()) - distinct;
}

// All m initializing packets at time 0, then the i-th non-initializing
// packet at time i to buffer i-1 (0-based), for i = 1..m.
inline ArrivalSchedule systematic_schedule(int m) {
    if (m < 1)
        throw invalid_parameter_error("systematic schedule requires m >= 1");
    std::vector<Event> ev;
    ev.reserve(static_cast<std::size_t>(2 * m));
    for (int b = 0; b < m; ++b) ev.push_back({0, b});
    for (int i = 1; i <= m; ++i) ev.push_back({i, i - 1});
    return make_schedule(m, std::move(ev));
}

// The m=10 instance refuting the claimed per-packet lower bound: systematic
// through time 7, nothing at time 8, two buffers filled at time 9, and a
// final packet at time 10 to one of them.
inline ArrivalSchedule counterexample_schedule() {
    std::vector<Event> ev;
    for (int b = 0; b < 10; ++b) ev.push_back({0, b});
    for (int i = 1; i <= 7; ++i) ev.push_back({i, i - 1});
    ev.push_back({9, 7});
    ev.push_back({9, 8});
    ev.push_back({10, 7});
    return make_schedule(10, std::move(ev));
}

} // namespace permubuf
