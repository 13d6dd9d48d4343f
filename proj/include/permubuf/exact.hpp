#pragma once

#include <algorithm>
#include <compare>
#include <string>
#include <thread>
#include <vector>

#include "permubuf/checked_math.hpp"
#include "permubuf/errors.hpp"
#include "permubuf/permutation.hpp"
#include "permubuf/schedule.hpp"
#include "permubuf/simulate.hpp"

namespace permubuf {

// An exact probability count/m!; the denominator is carried as m itself.
// Never a floating-point value: to_double exists for display only.
struct ExactProb {
    exact_int count = 0;
    int m           = 0;

    double to_double() const {
        long double d = 1.0L;
        for (int i = 2; i <= m; ++i) d *= i;
        return static_cast<double>(static_cast<long double>(count) / d);
    }

    friend bool operator==(const ExactProb&, const ExactProb&) = default;
};

// p_1..p_n: probs[i-1].count is the number of the m! buffer orderings under
// which the i-th non-initializing packet is accepted.
struct AcceptanceProfile {
    int m = 0;
    std::vector<ExactProb> probs;

    std::vector<exact_int> numerators() const {
        std::vector<exact_int> out;
        out.reserve(probs.size());
        for (const ExactProb& p : probs) out.push_back(p.count);
        return out;
    }
};

// q_i * m! = sum_{j=1..i} C(i,j) * (m-j)! * (-1)^(j-1), for i = 1..m.
struct QTable {
    int m = 0;
    std::vector<exact_int> numerators;
};

struct SumComparison {
    exact_int sum_p = 0; // sum of p_i * m!
    exact_int sum_q = 0; // sum of q_i * m!

    std::strong_ordering order() const { return sum_p <=> sum_q; }
    bool relation_holds() const { return sum_p >= sum_q; } // the sum relation sum(p) >= sum(q)
};

struct EnumerationOptions {
    int limit           = 11;   // refuse m above this unless overridden
    bool limit_override = false; // permits m = 12; nothing larger
    int partitions      = 1;    // contiguous lexicographic rank ranges, run concurrently
};

namespace detail {

inline void enumerate_rank_range(const PreparedSchedule& prep, exact_int first, exact_int count,
                                 std::vector<exact_int>& counts) {
    if (count <= 0) return;
    std::vector<int> perm = unrank_permutation(prep.m, first);
    std::vector<int> position(static_cast<std::size_t>(prep.m));
    for (exact_int k = 0; k < count; ++k) {
        for (int i = 0; i < prep.m; ++i)
            position[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i;
        prep.accumulate_accepts(position.data(), counts.data());
        std::next_permutation(perm.begin(), perm.end());
    }
}

} // namespace detail

// Exact acceptance profile by full enumeration of all m! permutations.
// Partitioning is by contiguous lexicographic rank ranges; the merged result
// is bit-identical for every partition count.
inline AcceptanceProfile acceptance_profile(const ArrivalSchedule& schedule,
                                            const EnumerationOptions& options = {}) {
    const int hard_cap = 12;
    const int effective = options.limit_override ? std::max(options.limit, hard_cap)
                                                 : options.limit;
    if (schedule.m > std::min(effective, hard_cap) || schedule.m > hard_cap)
        throw enumeration_infeasible_error(
            "m=" + std::to_string(schedule.m) + " exceeds the enumeration limit " +
            std::to_string(std::min(effective, hard_cap)) +
            (options.limit_override ? " (hard cap 12)" : "; rerun with the limit override for m up to 12"));
    if (options.partitions < 1)
        throw invalid_parameter_error("partition count must be >= 1");

    const PreparedSchedule prep(schedule);
    const exact_int total = factorial(schedule.m);
    const int parts = static_cast<int>(std::min<exact_int>(options.partitions, total));

    std::vector<std::vector<exact_int>> partial(
        static_cast<std::size_t>(parts),
        std::vector<exact_int>(static_cast<std::size_t>(prep.noninit_count), 0));

    auto range_begin = [&](int k) { return total * k / parts; };
    if (parts == 1) {
        detail::enumerate_rank_range(prep, 0, total, partial[0]);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(parts));
        for (int k = 0; k < parts; ++k) {
            const exact_int first = range_begin(k);
            const exact_int count = range_begin(k + 1) - first;
            workers.emplace_back([&prep, first, count, &bucket = partial[static_cast<std::size_t>(k)]] {
                detail::enumerate_rank_range(prep, first, count, bucket);
            });
        }
        for (std::thread& w : workers) w.join();
    }

    AcceptanceProfile profile{schedule.m, {}};
    profile.probs.assign(static_cast<std::size_t>(prep.noninit_count), ExactProb{0, schedule.m});
    for (const auto& bucket : partial)
        for (std::size_t i = 0; i < bucket.size(); ++i)
            profile.probs[i].count = checked_add(profile.probs[i].count, bucket[i]);
    return profile;
}

// Closed-form q_i numerators in exact integer arithmetic.
inline QTable q_table(int m, int limit = 20) {
    if (m < 1)
        throw invalid_parameter_error("q_table requires m >= 1");
    if (m > limit || m > 20)
        throw arithmetic_overflow_error("q_table m=" + std::to_string(m) +
                                        " exceeds the exact-arithmetic limit " +
                                        std::to_string(std::min(limit, 20)));
    QTable table{m, {}};
    table.numerators.reserve(static_cast<std::size_t>(m));
    for (int i = 1; i <= m; ++i) {
        exact_int numerator = 0;
        for (int j = 1; j <= i; ++j) {
            const exact_int term = checked_mul(binomial(i, j), factorial(m - j));
            numerator = (j % 2 == 1) ? checked_add(numerator, term)
                                     : checked_sub(numerator, term);
        }
        table.numerators.push_back(numerator);
    }
    return table;
}

// Exact comparison of sum(p_k) against sum(q_k) over k = 1..m.
inline SumComparison compare_sums(const AcceptanceProfile& profile, const QTable& qtable) {
    if (profile.m != qtable.m)
        throw invalid_comparison_error("profile is for m=" + std::to_string(profile.m) +
                                       ", q table for m=" + std::to_string(qtable.m));
    if (profile.probs.size() != qtable.numerators.size())
        throw invalid_comparison_error(
            "profile has " + std::to_string(profile.probs.size()) +
            " packets, expected exactly m=" + std::to_string(qtable.m));
    SumComparison cmp;
    for (const ExactProb& p : profile.probs) cmp.sum_p = checked_add(cmp.sum_p, p.count);
    for (exact_int q : qtable.numerators) cmp.sum_q = checked_add(cmp.sum_q, q);
    return cmp;
}

struct Check {
    std::string name;
    bool pass = false;
    std::string expected;
    std::string actual;
};

struct VerificationReport {
    int m = 0;
    std::vector<exact_int> p_numerators;
    std::vector<exact_int> q_numerators;
    exact_int sum_p = 0;
    exact_int sum_q = 0;
    bool relation_holds = false;
    std::vector<Check> checks;

    bool all_pass() const {
        for (const Check& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// The published exact values for the m = 10 counterexample.
namespace published {
inline constexpr exact_int p8  = 2374894;
inline constexpr exact_int p9  = 2374894;
inline constexpr exact_int p10 = 1716050;
inline constexpr exact_int q8  = 2012014;
inline constexpr exact_int q9  = 2160343;
inline constexpr exact_int q10 = 2293839;
} // namespace published

// Recomputes the counterexample profile and the q table and checks every
// published value, the i <= 7 equalities, the 1/2 bound on p_10, and the
// sum relation. Failures are reported, not thrown.
inline VerificationReport verify_published_values(const ArrivalSchedule& schedule,
                                              const EnumerationOptions& options = {}) {
    const AcceptanceProfile profile = acceptance_profile(schedule, options);
    const QTable qt = q_table(10);

    VerificationReport report;
    report.m = schedule.m;
    report.p_numerators = profile.numerators();
    report.q_numerators = qt.numerators;

    auto num = [](exact_int v) { return std::to_string(v); };
    auto p_at = [&](int i) -> exact_int {
        return i <= static_cast<int>(report.p_numerators.size())
                   ? report.p_numerators[static_cast<std::size_t>(i - 1)]
                   : -1; // sentinel: packet missing from the schedule
    };
    auto check_eq = [&](const std::string& name, exact_int expected, exact_int actual) {
        report.checks.push_back({name, expected == actual, num(expected), num(actual)});
    };

    check_eq("p_8 * 10!", published::p8, p_at(8));
    check_eq("p_9 * 10!", published::p9, p_at(9));
    check_eq("p_10 * 10!", published::p10, p_at(10));
    check_eq("q_8 * 10!", published::q8, qt.numerators[7]);
    check_eq("q_9 * 10!", published::q9, qt.numerators[8]);
    check_eq("q_10 * 10!", published::q10, qt.numerators[9]);

    bool prefix_equal = report.p_numerators.size() >= 7;
    std::string prefix_actual;
    for (int i = 1; i <= 7; ++i) {
        if (i <= static_cast<int>(report.p_numerators.size())) {
            prefix_equal = prefix_equal &&
                           p_at(i) == qt.numerators[static_cast<std::size_t>(i - 1)];
            prefix_actual += (i > 1 ? " " : "") + num(p_at(i));
        }
    }
    std::string prefix_expected;
    for (int i = 1; i <= 7; ++i)
        prefix_expected += (i > 1 ? " " : "") + num(qt.numerators[static_cast<std::size_t>(i - 1)]);
    report.checks.push_back({"p_i = q_i for i <= 7", prefix_equal, prefix_expected, prefix_actual});

    const exact_int half = factorial(10) / 2;
    report.checks.push_back({"p_10 * 10! < 10!/2", p_at(10) >= 0 && p_at(10) < half,
                             "< " + num(half), num(p_at(10))});

    exact_int sum_p = 0;
    for (exact_int v : report.p_numerators) sum_p = checked_add(sum_p, v);
    exact_int sum_q = 0;
    for (exact_int v : qt.numerators) sum_q = checked_add(sum_q, v);
    report.sum_p = sum_p;
    report.sum_q = sum_q;
    report.relation_holds = sum_p >= sum_q;
    report.checks.push_back({"sum(p) * 10! < sum(q) * 10!",
                             report.p_numerators.size() == 10 && sum_p < sum_q,
                             "< " + num(sum_q), num(sum_p)});
    return report;
}

inline VerificationReport verify_published_values() {
    return verify_published_values(counterexample_schedule());
}

} // namespace permubuf
