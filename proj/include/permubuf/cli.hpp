#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "permubuf/exact.hpp"
#include "permubuf/monte_carlo.hpp"
#include "permubuf/opt.hpp"
#include "permubuf/schedule.hpp"
#include "permubuf/schedule_io.hpp"
#include "permubuf/search.hpp"
#include "permubuf/simulate.hpp"

namespace permubuf::cli {

// Exit codes: 0 success / all checks pass, 1 check failure,
// 2 usage or input error, 3 infeasibility refusal.
enum ExitCode : int {
    kOk = 0,
    kCheckFailure = 1,
    kInputError = 2,
    kInfeasible = 3,
};

namespace detail {

inline std::string prob_string(exact_int numerator, int m) {
    std::ostringstream out;
    out << numerator << "/" << m << "! (" << std::fixed << std::setprecision(6)
        << ExactProb{numerator, m}.to_double() << ")";
    return out.str();
}

inline nlohmann::ordered_json report_to_json(const VerificationReport& report) {
    nlohmann::ordered_json j;
    j["m"] = report.m;
    j["p_numerators"] = report.p_numerators;
    j["q_numerators"] = report.q_numerators;
    j["sum_p"] = report.sum_p;
    j["sum_q"] = report.sum_q;
    j["relation_holds"] = report.relation_holds;
    auto& checks = j["checks"] = nlohmann::ordered_json::array();
    for (const Check& c : report.checks)
        checks.push_back({{"name", c.name},
                          {"pass", c.pass},
                          {"expected", c.expected},
                          {"actual", c.actual}});
    return j;
}

inline void print_check_table(std::ostream& out, const std::vector<Check>& checks) {
    std::size_t name_w = 5, exp_w = 8;
    for (const Check& c : checks) {
        name_w = std::max(name_w, c.name.size());
        exp_w = std::max(exp_w, c.expected.size());
    }
    out << std::left << std::setw(static_cast<int>(name_w) + 2) << "check"
        << std::setw(8) << "result"
        << std::setw(static_cast<int>(exp_w) + 2) << "expected"
        << "actual" << "\n";
    for (const Check& c : checks)
        out << std::left << std::setw(static_cast<int>(name_w) + 2) << c.name
            << std::setw(8) << (c.pass ? "PASS" : "FAIL")
            << std::setw(static_cast<int>(exp_w) + 2) << c.expected
            << c.actual << "\n";
}

inline void print_profile_table(std::ostream& out, const std::vector<exact_int>& p,
                                const std::vector<exact_int>* q, int m) {
    out << std::left << std::setw(6) << "i" << std::setw(28) << "p_i";
    if (q) out << std::setw(28) << "q_i";
    out << "\n";
    const std::size_t rows = std::max(p.size(), q ? q->size() : 0);
    for (std::size_t i = 0; i < rows; ++i) {
        out << std::left << std::setw(6) << i + 1
            << std::setw(28) << (i < p.size() ? prob_string(p[i], m) : "-");
        if (q) out << std::setw(28) << (i < q->size() ? prob_string((*q)[i], m) : "-");
        out << "\n";
    }
}

inline int default_threads() {
    const char* env = std::getenv("PERMUBUF_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    try {
        std::size_t used = 0;
        const int n = std::stoi(env, &used);
        if (used != std::string(env).size() || n < 1) throw std::invalid_argument(env);
        return n;
    } catch (const std::exception&) {
        throw invalid_parameter_error(std::string("PERMUBUF_THREADS must be a positive integer, got '") +
                                      env + "'");
    }
}

inline std::string verdict_string(const SumComparison& cmp) {
    if (cmp.sum_p < cmp.sum_q) return "VIOLATED";
    return cmp.sum_p == cmp.sum_q ? "EQUAL" : "HOLDS";
}

inline void write_violation_files(const SearchReport& report, const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < report.violations.size(); ++i) {
        std::ostringstream name;
        name << "violation_" << std::setw(4) << std::setfill('0') << i << ".sched";
        save_schedule(report.violations[i].schedule,
                      (std::filesystem::path(dir) / name.str()).string());
    }
}

struct VerifyResult {
    VerificationReport report;
    nlohmann::ordered_json json;
};

inline VerifyResult run_verify_on(const ArrivalSchedule& schedule, int threads) {
    EnumerationOptions opts;
    opts.partitions = threads;
    VerificationReport report = verify_published_values(schedule, opts);

    const OptResult opt = opt_throughput(schedule);
    const int total = static_cast<int>(schedule.events.size());
    report.checks.push_back({"OPT accepts all packets (counterexample)",
                             opt.accepted_count == total && opt.accepts_all_noninit,
                             std::to_string(total) + " of " + std::to_string(total),
                             std::to_string(opt.accepted_count) + " of " + std::to_string(total)});
    const int replayed = replay_transmissions(schedule, opt.witness).accepted_count();
    report.checks.push_back({"OPT witness replay self-certifies",
                             replayed == opt.accepted_count,
                             std::to_string(opt.accepted_count), std::to_string(replayed)});

    return {report, report_to_json(report)};
}

inline VerifyResult run_verify(int threads) {
    return run_verify_on(counterexample_schedule(), threads);
}

} // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact analysis of the Random Permutation packet-buffering algorithm (m buffers, B = 1)"};
    app.require_subcommand(1);

    bool json = false;
    int threads = 0; // 0 = take the PERMUBUF_THREADS default lazily
    app.add_flag("--json", json, "emit machine-readable JSON instead of tables");
    app.add_option("--threads", threads, "worker count (default $PERMUBUF_THREADS or 1); results are independent of it");
    app.fallthrough();

    auto* verify = app.add_subcommand("verify", "recompute and check the published counterexample values");

    std::string analyze_path;
    bool limit_override = false;
    auto* analyze = app.add_subcommand("analyze", "exact acceptance profile and sum relation for a schedule file");
    analyze->add_option("schedule", analyze_path, "schedule file (text or JSON)")->required();
    analyze->add_flag("--limit-override", limit_override, "allow enumeration at m = 12 (slow)");

    int qtable_m = 0;
    auto* qtable_cmd = app.add_subcommand("qtable", "closed-form q_i table");
    qtable_cmd->add_option("--m", qtable_m, "number of buffers (1..20)")->required();

    std::string opt_path;
    auto* opt_cmd = app.add_subcommand("opt", "exact offline optimum throughput and witness");
    opt_cmd->add_option("schedule", opt_path, "schedule file (text or JSON)")->required();

    SearchSpace space;
    std::string family_name = "general";
    std::string search_out;
    auto* search = app.add_subcommand("search", "enumerate an attack family and report sum-relation violations");
    search->add_option("--m", space.m, "number of buffers")->required();
    search->add_option("--max-time", space.max_time, "latest injection time (default m+4)");
    search->add_option("--family", family_name, "systematic|general (default general)");
    search->add_flag("--canonical-labels", space.canonical_labels,
                     "evaluate one representative per buffer-relabeling class");
    search->add_option("--budget", space.budget, "elementary-step refusal threshold");
    search->add_option("--out", search_out, "directory for violating schedule files");

    std::string sim_path;
    exact_int trials = 0;
    std::uint64_t seed = 0;
    auto* simulate = app.add_subcommand("simulate", "seeded Monte Carlo estimate of the acceptance profile");
    simulate->add_option("schedule", sim_path, "schedule file (text or JSON)")->required();
    simulate->add_option("--trials", trials, "number of sampled permutations")->required();
    simulate->add_option("--seed", seed, "RNG seed (default 0)");

    std::string gen_kind;
    int gen_m = 10;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "emit a systematic or counterexample schedule");
    gen->add_option("kind", gen_kind, "systematic|counterexample")->required();
    gen->add_option("--m", gen_m, "buffers for the systematic schedule (default 10)");
    gen->add_option("--out", gen_out, "output file (default stdout)");

    try {
        std::reverse(args.begin(), args.end()); // CLI11 consumes a reversed vector
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err) == 0 ? kOk : kInputError;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kInputError;
    }

    try {
        if (threads == 0) threads = detail::default_threads();
        if (threads < 1) throw invalid_parameter_error("--threads must be >= 1");

        if (*verify) {
            auto result = detail::run_verify(threads);
            if (json) {
                out << result.json.dump(2) << "\n";
            } else {
                out << "counterexample m = " << result.report.m << "\n";
                detail::print_check_table(out, result.report.checks);
                out << (result.report.all_pass() ? "all checks pass" : "CHECKS FAILED") << "\n";
            }
            return result.report.all_pass() ? kOk : kCheckFailure;
        }

        if (*analyze) {
            const ArrivalSchedule schedule = load_schedule(analyze_path);
            EnumerationOptions opts;
            opts.partitions = threads;
            opts.limit_override = limit_override;
            if (limit_override && schedule.m == 12)
                err << "warning: enumerating 12! = 479001600 permutations; this can take minutes\n";
            const AcceptanceProfile profile = acceptance_profile(schedule, opts);
            const int n = static_cast<int>(profile.probs.size());
            const bool comparable = n == schedule.m;

            nlohmann::ordered_json j;
            j["m"] = schedule.m;
            j["noninit_count"] = n;
            j["p_numerators"] = profile.numerators();
            if (comparable) {
                const QTable qt = q_table(schedule.m);
                const SumComparison cmp = compare_sums(profile, qt);
                j["q_numerators"] = qt.numerators;
                j["sum_p"] = cmp.sum_p;
                j["sum_q"] = cmp.sum_q;
                j["relation_holds"] = cmp.relation_holds();
                j["verdict"] = detail::verdict_string(cmp);
                if (!json) {
                    out << "m = " << schedule.m << ", non-initializing packets = " << n << "\n";
                    const auto p = profile.numerators();
                    detail::print_profile_table(out, p, &qt.numerators, schedule.m);
                    out << "sum(p) = " << detail::prob_string(cmp.sum_p, schedule.m) << "\n";
                    out << "sum(q) = " << detail::prob_string(cmp.sum_q, schedule.m) << "\n";
                    out << "relation sum(p) >= sum(q): " << detail::verdict_string(cmp) << "\n";
                }
            } else if (!json) {
                out << "m = " << schedule.m << ", non-initializing packets = " << n << "\n";
                const auto p = profile.numerators();
                detail::print_profile_table(out, p, nullptr, schedule.m);
                out << "q table comparison skipped: packet count " << n
                    << " differs from m = " << schedule.m << "\n";
            }
            if (json) out << j.dump(2) << "\n";
            return kOk;
        }

        if (*qtable_cmd) {
            const QTable qt = q_table(qtable_m);
            if (json) {
                nlohmann::ordered_json j;
                j["m"] = qt.m;
                j["q_numerators"] = qt.numerators;
                out << j.dump(2) << "\n";
            } else {
                out << "m = " << qt.m << "\n";
                out << std::left << std::setw(6) << "i" << "q_i" << "\n";
                for (std::size_t i = 0; i < qt.numerators.size(); ++i)
                    out << std::left << std::setw(6) << i + 1
                        << detail::prob_string(qt.numerators[i], qt.m) << "\n";
            }
            return kOk;
        }

        if (*opt_cmd) {
            const ArrivalSchedule schedule = load_schedule(opt_path);
            const OptResult result = opt_throughput(schedule);
            if (json) {
                nlohmann::ordered_json j;
                j["m"] = schedule.m;
                j["accepted_count"] = result.accepted_count;
                j["total_arrivals"] = schedule.events.size();
                j["accepts_all_noninit"] = result.accepts_all_noninit;
                auto& w = j["witness"] = nlohmann::ordered_json::array();
                for (const Transmission& tx : result.witness) {
                    nlohmann::ordered_json entry;
                    entry["step"] = tx.step;
                    if (tx.buffer == kIdle)
                        entry["buffer"] = nullptr;
                    else
                        entry["buffer"] = tx.buffer;
                    w.push_back(entry);
                }
                out << j.dump(2) << "\n";
            } else {
                out << "accepted_count = " << result.accepted_count << " of "
                    << schedule.events.size() << " arrivals\n";
                out << "accepts_all_noninit = " << (result.accepts_all_noninit ? "true" : "false")
                    << "\n";
                out << "witness:\n";
                for (const Transmission& tx : result.witness) {
                    out << "  " << tx.step << " -> ";
                    if (tx.buffer == kIdle)
                        out << "idle\n";
                    else
                        out << tx.buffer << "\n";
                }
            }
            return kOk;
        }

        if (*search) {
            if (family_name == "systematic")
                space.family = Family::SystematicWithDelays;
            else if (family_name == "general")
                space.family = Family::General;
            else
                throw invalid_parameter_error("--family must be 'systematic' or 'general', got '" +
                                              family_name + "'");
            const SearchSpace resolved = resolve(space);
            const SearchReport report = find_violations(resolved, threads);

            if (!search_out.empty()) detail::write_violation_files(report, search_out);

            nlohmann::ordered_json j;
            j["m"] = resolved.m;
            j["n"] = resolved.n;
            j["max_time"] = resolved.max_time;
            j["family"] = family_name;
            j["examined"] = report.examined;
            j["proviso_failures"] = report.proviso_failures;
            j["wrong_count_skipped"] = report.wrong_count_skipped;
            j["symmetric_skipped"] = report.symmetric_skipped;
            auto& viol = j["violations"] = nlohmann::ordered_json::array();
            for (const Violation& v : report.violations)
                viol.push_back({{"schedule", to_json(v.schedule)},
                                {"sum_p", v.sum_p},
                                {"sum_q", v.sum_q}});
            if (json) {
                out << j.dump(2) << "\n";
            } else {
                out << "family = " << family_name << ", m = " << resolved.m << ", n = "
                    << resolved.n << ", max_time = " << resolved.max_time << "\n";
                out << "examined = " << report.examined
                    << ", proviso_failures = " << report.proviso_failures
                    << ", wrong_count_skipped = " << report.wrong_count_skipped
                    << ", symmetric_skipped = " << report.symmetric_skipped << "\n";
                out << "violations = " << report.violations.size() << "\n";
                for (std::size_t i = 0; i < report.violations.size(); ++i) {
                    const Violation& v = report.violations[i];
                    out << "  #" << i << ": sum(p) = "
                        << detail::prob_string(v.sum_p, v.schedule.m) << ", sum(q) = "
                        << detail::prob_string(v.sum_q, v.schedule.m) << ", events:";
                    for (const Event& e : v.schedule.events)
                        if (e.time > 0) out << " (" << e.time << "," << e.buffer << ")";
                    out << "\n";
                }
                if (!search_out.empty())
                    out << "violating schedules written to " << search_out << "\n";
            }
            return kOk;
        }

        if (*simulate) {
            const ArrivalSchedule schedule = load_schedule(sim_path);
            const MCEstimate est = estimate_profile(schedule, trials, seed, threads);
            if (json) {
                nlohmann::ordered_json j;
                j["m"] = schedule.m;
                j["trials"] = est.trials;
                j["seed"] = est.seed;
                j["accept_counts"] = est.accept_counts;
                auto& e = j["estimates"] = nlohmann::ordered_json::array();
                for (std::size_t i = 0; i < est.accept_counts.size(); ++i) e.push_back(est.estimate(i));
                j["standard_errors"] = est.standard_errors;
                out << j.dump(2) << "\n";
            } else {
                out << "m = " << schedule.m << ", trials = " << est.trials
                    << ", seed = " << est.seed << "\n";
                out << std::left << std::setw(6) << "i" << std::setw(12) << "count"
                    << std::setw(12) << "estimate" << "std_error" << "\n";
                out << std::fixed << std::setprecision(6);
                for (std::size_t i = 0; i < est.accept_counts.size(); ++i)
                    out << std::left << std::setw(6) << i + 1
                        << std::setw(12) << est.accept_counts[i]
                        << std::setw(12) << est.estimate(i)
                        << est.standard_errors[i] << "\n";
            }
            return kOk;
        }

        if (*gen) {
            ArrivalSchedule schedule;
            if (gen_kind == "systematic")
                schedule = systematic_schedule(gen_m);
            else if (gen_kind == "counterexample")
                schedule = counterexample_schedule();
            else
                throw invalid_parameter_error("gen kind must be 'systematic' or 'counterexample', got '" +
                                              gen_kind + "'");
            if (!gen_out.empty()) {
                save_schedule(schedule, gen_out, json);
                out << "wrote " << gen_out << "\n";
            } else if (json) {
                out << to_json(schedule).dump(2) << "\n";
            } else {
                out << to_text(schedule);
            }
            return kOk;
        }
    } catch (const infeasible_error& e) {
        err << "error: " << e.what() << "\n";
        return kInfeasible;
    } catch (const input_error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError; // unreachable: a subcommand is required
}

inline int run_main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(std::move(args), std::cout, std::cerr);
}

} // namespace permubuf::cli
