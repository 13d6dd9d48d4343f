#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "permubuf/cli.hpp"
#include "permubuf/schedule_io.hpp"

using namespace permubuf;
using nlohmann::json;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "permubuf_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
    const auto path = temp_dir() / name;
    std::ofstream(path) << content;
    return path.string();
}

} // namespace

TEST_CASE("verify passes and is byte-stable across runs and thread counts") {
    const CliResult a = run_cli({"verify"});
    REQUIRE(a.code == 0);
    REQUIRE(a.out.find("FAIL") == std::string::npos);
    REQUIRE(a.out.find("all checks pass") != std::string::npos);

    const CliResult b = run_cli({"verify"});
    REQUIRE(b.out == a.out);

    const CliResult threaded = run_cli({"verify", "--threads", "4"});
    REQUIRE(threaded.out == a.out);
}

TEST_CASE("verify --json carries the published numerators") {
    const CliResult r = run_cli({"--json", "verify", "--threads", "8"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["m"] == 10);
    REQUIRE(j["p_numerators"][7] == 2374894);
    REQUIRE(j["p_numerators"][8] == 2374894);
    REQUIRE(j["p_numerators"][9] == 1716050);
    REQUIRE(j["q_numerators"][7] == 2012014);
    REQUIRE(j["q_numerators"][8] == 2160343);
    REQUIRE(j["q_numerators"][9] == 2293839);
    REQUIRE(j["sum_p"] == 14684212);
    REQUIRE(j["sum_q"] == 14684570);
    REQUIRE(j["relation_holds"] == false);
    for (const auto& check : j["checks"]) REQUIRE(check["pass"] == true);
}

TEST_CASE("analyze the shipped counterexample file") {
    const std::string path = std::string(PERMUBUF_DATA_DIR) + "/counterexample_m10.sched";
    const CliResult r = run_cli({"analyze", path});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("VIOLATED") != std::string::npos);

    const CliResult j = run_cli({"--json", "analyze", path});
    const json parsed = json::parse(j.out);
    REQUIRE(parsed["verdict"] == "VIOLATED");
    REQUIRE(parsed["sum_p"] == 14684212);
    REQUIRE(parsed["sum_q"] == 14684570);
}

TEST_CASE("analyze a systematic schedule reports equality") {
    const std::string path = write_file("sys5.sched", to_text(systematic_schedule(5)));
    const CliResult r = run_cli({"analyze", path});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("EQUAL") != std::string::npos);
}

TEST_CASE("analyze error paths") {
    SECTION("m=0 file is an input error") {
        const std::string path = write_file("m0.sched", "m=0\n");
        REQUIRE(run_cli({"analyze", path}).code == 2);
    }
    SECTION("missing file is an input error") {
        REQUIRE(run_cli({"analyze", "/nonexistent/x.sched"}).code == 2);
    }
    SECTION("m over the enumeration limit refuses with exit 3") {
        const std::string path = write_file("m13.sched", "m=13\n0 0\n");
        REQUIRE(run_cli({"analyze", path}).code == 3);
        REQUIRE(run_cli({"analyze", path, "--limit-override"}).code == 3);
    }
}

TEST_CASE("qtable subcommand") {
    const CliResult r = run_cli({"--json", "qtable", "--m", "10"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["m"] == 10);
    REQUIRE(j["q_numerators"].size() == 10);
    REQUIRE(j["q_numerators"][0] == 362880);
    REQUIRE(j["q_numerators"][9] == 2293839);

    REQUIRE(run_cli({"qtable", "--m", "0"}).code == 2);
    REQUIRE(run_cli({"qtable", "--m", "25"}).code == 3);
}

TEST_CASE("opt subcommand") {
    const std::string path = write_file("ce.sched", to_text(counterexample_schedule()));
    const CliResult r = run_cli({"opt", path});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("accepted_count = 20 of 20") != std::string::npos);
    REQUIRE(r.out.find("accepts_all_noninit = true") != std::string::npos);
    REQUIRE(r.out.find("->") != std::string::npos);

    const CliResult j = run_cli({"--json", "opt", path});
    const json parsed = json::parse(j.out);
    REQUIRE(parsed["accepted_count"] == 20);
    REQUIRE(parsed["accepts_all_noninit"] == true);
    REQUIRE(parsed["witness"].size() == 10);
}

TEST_CASE("gen subcommand round-trips through analyze inputs") {
    const CliResult text = run_cli({"gen", "counterexample"});
    REQUIRE(text.code == 0);
    REQUIRE(parse_schedule(text.out).events == counterexample_schedule().events);

    const CliResult js = run_cli({"--json", "gen", "systematic", "--m", "4"});
    REQUIRE(js.code == 0);
    REQUIRE(parse_schedule(js.out).events == systematic_schedule(4).events);

    const auto out_path = (temp_dir() / "gen_sys3.sched").string();
    const CliResult file = run_cli({"gen", "systematic", "--m", "3", "--out", out_path});
    REQUIRE(file.code == 0);
    REQUIRE(load_schedule(out_path).events == systematic_schedule(3).events);

    REQUIRE(run_cli({"gen", "bogus"}).code == 2);
}

TEST_CASE("simulate subcommand") {
    const std::string path = write_file("sys4.sched", to_text(systematic_schedule(4)));
    const CliResult r = run_cli({"--json", "simulate", path, "--trials", "2000", "--seed", "11"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["trials"] == 2000);
    REQUIRE(j["seed"] == 11);
    REQUIRE(j["accept_counts"].size() == 4);
    for (const auto& c : j["accept_counts"]) {
        REQUIRE(c.get<std::int64_t>() >= 0);
        REQUIRE(c.get<std::int64_t>() <= 2000);
    }
    REQUIRE(j["estimates"].size() == 4);
    REQUIRE(j["standard_errors"].size() == 4);

    // reproducibility across invocations and thread counts
    const CliResult again = run_cli({"--json", "simulate", path, "--trials", "2000", "--seed", "11",
                                     "--threads", "3"});
    REQUIRE(again.out == r.out);

    REQUIRE(run_cli({"simulate", path, "--trials", "0"}).code == 2);
}

TEST_CASE("search subcommand") {
    const auto viol_dir = (temp_dir() / "violations").string();
    const CliResult r = run_cli({"--json", "search", "--m", "2", "--max-time", "2",
                                 "--out", viol_dir});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["examined"] == 6);
    REQUIRE(j["family"] == "general");
    REQUIRE(j["violations"].is_array());

    SECTION("systematic family flag") {
        const CliResult sys = run_cli({"--json", "search", "--m", "2", "--max-time", "2",
                                       "--family", "systematic"});
        REQUIRE(sys.code == 0);
        REQUIRE(json::parse(sys.out)["examined"] == 3);
    }
    SECTION("bad family flag") {
        REQUIRE(run_cli({"search", "--m", "2", "--family", "diagonal"}).code == 2);
    }
    SECTION("default budget refuses the full m=10 space") {
        REQUIRE(run_cli({"search", "--m", "10", "--max-time", "10"}).code == 3);
    }
}

TEST_CASE("opt refuses state spaces beyond m=16") {
    const std::string path = write_file("m17.sched", "m=17\n0 0\n");
    REQUIRE(run_cli({"opt", path}).code == 3);
}

TEST_CASE("a perturbed counterexample fails the verification checks") {
    ArrivalSchedule mutated = counterexample_schedule();
    mutated.events.pop_back();
    const cli::detail::VerifyResult result = cli::detail::run_verify_on(mutated, 1);
    REQUIRE_FALSE(result.report.all_pass()); // verify maps this to exit code 1
}

TEST_CASE("usage errors and help") {
    REQUIRE(run_cli({}).code == 2);
    REQUIRE(run_cli({"frobnicate"}).code == 2);
    REQUIRE(run_cli({"--help"}).code == 0);
    REQUIRE(run_cli({"analyze"}).code == 2); // missing required argument
}

TEST_CASE("PERMUBUF_THREADS environment default") {
    setenv("PERMUBUF_THREADS", "4", 1);
    const CliResult r = run_cli({"verify"});
    REQUIRE(r.code == 0);
    setenv("PERMUBUF_THREADS", "banana", 1);
    REQUIRE(run_cli({"verify"}).code == 2);
    unsetenv("PERMUBUF_THREADS");
}

TEST_CASE("violating schedules are written as loadable files") {
    const auto dir = temp_dir() / "viol_out";
    std::filesystem::remove_all(dir);
    const SearchReport report = find_violations(10, {counterexample_schedule()});
    cli::detail::write_violation_files(report, dir.string());
    const auto path = dir / "violation_0000.sched";
    REQUIRE(std::filesystem::exists(path));
    REQUIRE(load_schedule(path.string()).events == counterexample_schedule().events);

    // the search subcommand creates the directory even when nothing violates
    const auto empty_dir = temp_dir() / "no_viol_out";
    std::filesystem::remove_all(empty_dir);
    const CliResult r = run_cli({"search", "--m", "3", "--max-time", "3",
                                 "--out", empty_dir.string()});
    REQUIRE(r.code == 0);
    REQUIRE(std::filesystem::exists(empty_dir));
    REQUIRE(std::filesystem::is_empty(empty_dir));
}
