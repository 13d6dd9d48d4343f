#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "permubuf/checked_math.hpp"
#include "permubuf/errors.hpp"
#include "permubuf/exact.hpp"
#include "permubuf/opt.hpp"
#include "permubuf/schedule.hpp"

namespace permubuf {

enum class Family {
    SystematicWithDelays, // packet i targets buffer i-1; only times vary
    General,              // any set of n distinct (time, buffer) injections
};

// The attack pattern behind the counterexample: all m initializing packets
// at time 0, then n non-initializing injections at times in [1, max_time].
struct SearchSpace {
    int m = 0;
    int n = -1;                  // defaults to m
    int max_time = -1;           // defaults to m + 4
    Family family = Family::General;
    bool canonical_labels = false;      // evaluate one representative per relabeling class
    exact_int budget = 10'000'000'000;  // elementary-step refusal threshold
};

inline SearchSpace resolve(SearchSpace space) {
    if (space.m < 1)
        throw invalid_parameter_error("search space requires m >= 1");
    if (space.m > 12)
        throw enumeration_infeasible_error("search requires m <= 12 (profile enumeration limit), got m=" +
                                           std::to_string(space.m));
    if (space.n < 0) space.n = space.m;
    if (space.max_time < 0) space.max_time = space.m + 4;
    if (space.n > 0 && space.max_time < 1)
        throw invalid_parameter_error("search space requires max_time >= 1");
    if (space.family == Family::SystematicWithDelays && space.n > space.m)
        throw invalid_parameter_error("systematic family requires n <= m");
    return space;
}

inline exact_int family_size(const SearchSpace& raw) {
    const SearchSpace space = resolve(raw);
    if (space.family == Family::General)
        return binomial(space.max_time * space.m, space.n);
    return binomial(space.max_time + space.n - 1, space.n);
}

// Duplicate-free lexicographic stream over the family.
class FamilyEnumerator {
public:
    explicit FamilyEnumerator(const SearchSpace& raw) : space_(resolve(raw)) {
        if (space_.n == 0) return;
        cells_.resize(static_cast<std::size_t>(space_.n));
        if (space_.family == Family::General) {
            if (space_.max_time * space_.m < space_.n) { exhausted_ = true; return; }
            for (int i = 0; i < space_.n; ++i) cells_[static_cast<std::size_t>(i)] = i;
        } else {
            std::fill(cells_.begin(), cells_.end(), 0);
        }
    }

    std::optional<ArrivalSchedule> next() {
        if (exhausted_) return std::nullopt;
        ArrivalSchedule out = materialize();
        if (space_.n == 0) {
            exhausted_ = true;
        } else if (space_.family == Family::General) {
            advance_combination();
        } else {
            advance_multicombination();
        }
        return out;
    }

private:
    ArrivalSchedule materialize() const {
        std::vector<Event> ev;
        ev.reserve(static_cast<std::size_t>(space_.m + space_.n));
        for (int b = 0; b < space_.m; ++b) ev.push_back({0, b});
        for (int i = 0; i < space_.n; ++i) {
            const int c = cells_[static_cast<std::size_t>(i)];
            if (space_.family == Family::General)
                ev.push_back({1 + c / space_.m, c % space_.m});
            else
                ev.push_back({1 + c, i}); // systematic targets, reindexed by arrival order
        }
        return make_schedule(space_.m, std::move(ev));
    }

    void advance_combination() { // strictly increasing cells over [0, max_time*m)
        const int g = space_.max_time * space_.m;
        int i = space_.n - 1;
        while (i >= 0 && cells_[static_cast<std::size_t>(i)] == g - (space_.n - i)) --i;
        if (i < 0) { exhausted_ = true; return; }
        int v = ++cells_[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < space_.n; ++k) cells_[static_cast<std::size_t>(k)] = ++v;
    }

    void advance_multicombination() { // non-decreasing delays over [0, max_time)
        int i = space_.n - 1;
        while (i >= 0 && cells_[static_cast<std::size_t>(i)] == space_.max_time - 1) --i;
        if (i < 0) { exhausted_ = true; return; }
        const int v = ++cells_[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < space_.n; ++k) cells_[static_cast<std::size_t>(k)] = v;
    }

    SearchSpace space_;
    std::vector<int> cells_;
    bool exhausted_ = false;
};

inline FamilyEnumerator enumerate_family(const SearchSpace& space) {
    return FamilyEnumerator(space);
}

inline std::vector<ArrivalSchedule> enumerate_family_vector(const SearchSpace& space) {
    FamilyEnumerator stream(space);
    std::vector<ArrivalSchedule> out;
    while (auto s = stream.next()) out.push_back(std::move(*s));
    return out;
}

// True iff buffer labels already follow the canonical order: per-buffer
// injection-time lists lexicographically non-decreasing by label. Random
// Permutation is buffer-symmetric, so each relabeling class needs only its
// canonical representative.
inline bool is_canonically_labeled(const ArrivalSchedule& schedule) {
    std::vector<std::vector<int>> times(static_cast<std::size_t>(schedule.m));
    for (const Event& e : schedule.events)
        times[static_cast<std::size_t>(e.buffer)].push_back(e.time);
    for (int b = 0; b + 1 < schedule.m; ++b)
        if (times[static_cast<std::size_t>(b)] > times[static_cast<std::size_t>(b) + 1])
            return false;
    return true;
}

struct Violation {
    ArrivalSchedule schedule;
    exact_int sum_p = 0;
    exact_int sum_q = 0;
};

struct SearchReport {
    exact_int examined = 0;           // schedules drawn from the stream
    std::vector<Violation> violations;
    exact_int proviso_failures = 0;   // OPT cannot accommodate all packets
    exact_int wrong_count_skipped = 0; // non-initializing count differs from m
    exact_int symmetric_skipped = 0;  // non-canonical labelings (switch only)
};

namespace detail {

template <typename Stream>
SearchReport evaluate_schedules(int m, Stream&& next_schedule, bool canonical_labels,
                                int threads) {
    const QTable qt = q_table(m);
    EnumerationOptions opts;
    opts.partitions = threads;
    SearchReport report;
    while (auto raw = next_schedule()) {
        ++report.examined;
        if (raw->m != m)
            throw invalid_parameter_error("schedule has m=" + std::to_string(raw->m) +
                                          ", search space has m=" + std::to_string(m));
        const ArrivalSchedule schedule = canonicalize(*raw);
        if (canonical_labels && !is_canonically_labeled(schedule)) {
            ++report.symmetric_skipped;
            continue;
        }
        if (count_noninitializing(schedule) != m) {
            ++report.wrong_count_skipped;
            continue;
        }
        if (!opt_accommodates_all(schedule)) {
            ++report.proviso_failures;
            continue;
        }
        const SumComparison cmp = compare_sums(acceptance_profile(schedule, opts), qt);
        if (cmp.sum_p < cmp.sum_q)
            report.violations.push_back({schedule, cmp.sum_p, cmp.sum_q});
    }
    std::sort(report.violations.begin(), report.violations.end(),
              [](const Violation& a, const Violation& b) {
                  return std::tie(a.schedule.m, a.schedule.events) <
                         std::tie(b.schedule.m, b.schedule.events);
              });
    return report;
}

inline void enforce_budget(exact_int schedules, int m, int steps, exact_int budget) {
    exact_int estimate = 0;
    try {
        estimate = checked_mul(checked_mul(schedules, factorial(m)), steps);
    } catch (const arithmetic_overflow_error&) {
        throw cost_refusal_error("search cost estimate exceeds 64-bit range; budget is " +
                                 std::to_string(budget));
    }
    if (estimate > budget)
        throw cost_refusal_error("search cost estimate " + std::to_string(estimate) +
                                 " elementary steps exceeds budget " + std::to_string(budget));
}

} // namespace detail

// Exhaustively evaluates the family, keeping schedules that satisfy the OPT
// proviso yet violate the sum relation. Refuses up front when the estimated
// cost (schedules x m! x steps) exceeds the budget.
inline SearchReport find_violations(const SearchSpace& raw, int threads = 1) {
    const SearchSpace space = resolve(raw);
    detail::enforce_budget(family_size(space), space.m, space.max_time + 1, space.budget);
    FamilyEnumerator stream(space);
    return detail::evaluate_schedules(
        space.m, [&stream] { return stream.next(); }, space.canonical_labels, threads);
}

// Same evaluation over an explicit schedule list.
inline SearchReport find_violations(int m, const std::vector<ArrivalSchedule>& schedules,
                                    exact_int budget = 10'000'000'000, int threads = 1) {
    int horizon = 0;
    for (const ArrivalSchedule& s : schedules) horizon = std::max(horizon, s.last_time());
    detail::enforce_budget(static_cast<exact_int>(schedules.size()), m, horizon + 1, budget);
    std::size_t pos = 0;
    auto next = [&]() -> std::optional<ArrivalSchedule> {
        if (pos == schedules.size()) return std::nullopt;
        return schedules[pos++];
    };
    return detail::evaluate_schedules(m, next, false, threads);
}

} // namespace permubuf
