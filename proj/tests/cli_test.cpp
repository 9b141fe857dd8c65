// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0
//
// Black-box tests of the installed binary: exit codes, machine-readable
// errors, artifact idempotence and split hermeticity.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "support/helpers.hpp"

using tc_test::TempDir;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const TempDir& dir, const std::string& args) {
    const std::string out_path = dir.file("stdout.txt");
    const std::string err_path = dir.file("stderr.txt");
    std::string command = std::string(TRENDCAST_CLI_PATH) + " " + args + " > " + out_path +
                          " 2> " + err_path;
    int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = tc_test::read_file(out_path);
    result.err = tc_test::read_file(err_path);
    return result;
}

const std::string kRanges =
    " --train 2008-01:2011-12 --val 2012-01:2012-12 --test 2013-01:2013-12";

void run_pipeline(const TempDir& dir, const std::string& out) {
    auto check = [&](const std::string& args) {
        RunResult r = run_cli(dir, args);
        CAPTURE(args);
        CAPTURE(r.err);
        REQUIRE(r.exit_code == 0);
    };
    check("synth --k 3 --months 72 --n-items 120 --m-attrs 18 --seed 7 --out " + out);
    check("discover --items " + out + "/items.jsonl --vocab " + out +
          "/vocabulary.txt --k 3 --seed 7 --out " + out);
    check("trajectories --items " + out + "/items.jsonl --vocab " + out +
          "/vocabulary.txt --transactions " + out + "/transactions.csv --out " + out + kRanges);
    check("forecast --seed 7 --out " + out + kRanges);
    check("evaluate --seed 7 --models mean,last,exp --out " + out + kRanges);
    check("dynamics --out " + out + kRanges);
    check("attributes --out " + out + kRanges);
    check("report --out " + out + kRanges);
}

std::map<std::string, std::string> artifact_bytes(const std::string& root) {
    std::map<std::string, std::string> bytes;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        bytes[fs::relative(entry.path(), root).string()] =
            tc_test::read_file(entry.path().string());
    }
    return bytes;
}

}  // namespace

TEST_CASE("discover without an items file exits 2 naming the path") {
    TempDir dir("tc-cli");
    RunResult r = run_cli(dir, "discover --items " + dir.file("absent.jsonl") + " --vocab " +
                                   dir.file("absent.txt") + " --k 2 --seed 1 --out " +
                                   dir.file("out"));
    CHECK(r.exit_code == 2);
    json record = json::parse(r.err);
    CHECK(record.at("error").at("kind") == "missing_input");
    CHECK(std::string(record.at("error").at("message")).find("absent") != std::string::npos);
}

TEST_CASE("a missing seed is a validation failure, exit 3") {
    TempDir dir("tc-cli");
    RunResult synth = run_cli(dir, "synth --k 2 --months 24 --out " + dir.file("out"));
    CHECK(synth.exit_code == 3);
    json record = json::parse(synth.err);
    CHECK(std::string(record.at("error").at("message")).find("seed") != std::string::npos);
}

TEST_CASE("usage errors exit 3 with a structured record") {
    TempDir dir("tc-cli");
    RunResult r = run_cli(dir, "frobnicate --out x");
    CHECK(r.exit_code == 3);
    CHECK(json::parse(r.err).contains("error"));
}

TEST_CASE("config file values are used and flags override them") {
    TempDir dir("tc-cli");
    json config{{"k", 2}, {"months", 24}, {"n_items", 40}, {"m_attrs", 10},
                {"out", dir.file("from_config")}, {"seed", 5}};
    tc_test::write_file(dir.file("config.json"), config.dump());

    RunResult from_config = run_cli(dir, "synth --config " + dir.file("config.json"));
    CHECK(from_config.exit_code == 0);
    CHECK(fs::exists(dir.file("from_config") + "/items.jsonl"));

    RunResult overridden = run_cli(dir, "synth --config " + dir.file("config.json") + " --out " +
                                            dir.file("flag_wins"));
    CHECK(overridden.exit_code == 0);
    CHECK(fs::exists(dir.file("flag_wins") + "/items.jsonl"));
}

TEST_CASE("the full pipeline is idempotent byte for byte") {
    TempDir dir("tc-cli");
    run_pipeline(dir, dir.file("a"));
    run_pipeline(dir, dir.file("b"));

    auto a = artifact_bytes(dir.file("a"));
    auto b = artifact_bytes(dir.file("b"));
    REQUIRE(a.size() == b.size());
    for (const auto& [name, bytes] : a) {
        CAPTURE(name);
        REQUIRE(b.count(name) == 1);
        CHECK(bytes == b.at(name));
    }
    CHECK(a.count("styles.json") == 1);
    CHECK(a.count("report.md") == 1);
    CHECK(a.count("plots/style_000.svg") == 1);
}

TEST_CASE("forecast predictions never read test-range truth") {
    TempDir dir("tc-cli");
    const std::string out = dir.file("a");
    run_pipeline(dir, out);
    json original = json::parse(tc_test::read_file(out + "/forecasts.json"));

    // corrupt the test-year rows of trajectories.csv (2013-*)
    std::istringstream in(tc_test::read_file(out + "/trajectories.csv"));
    std::ostringstream patched;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("2013-", 0) == 0) {
            auto comma = line.find(',');
            patched << line.substr(0, comma) << ",0.123,0.456,0.421\n";
        } else {
            patched << line << "\n";
        }
    }
    tc_test::write_file(out + "/trajectories.csv", patched.str());

    RunResult r = run_cli(dir, "forecast --seed 7 --out " + out + kRanges);
    REQUIRE(r.exit_code == 0);
    json perturbed = json::parse(tc_test::read_file(out + "/forecasts.json"));

    // identical predictions and hyperparameters; only the scores may move
    for (std::size_t s = 0; s < original.at("styles").size(); ++s) {
        CHECK(original.at("styles")[s].at("predictions") ==
              perturbed.at("styles")[s].at("predictions"));
        CHECK(original.at("styles")[s].at("hyperparams") ==
              perturbed.at("styles")[s].at("hyperparams"));
    }
    CHECK(original.at("styles")[0].at("mae") != perturbed.at("styles")[0].at("mae"));
}

TEST_CASE("sweep-k emits one row per requested K") {
    TempDir dir("tc-cli");
    const std::string out = dir.file("sweep");
    RunResult synth = run_cli(dir, "synth --k 3 --months 48 --n-items 80 --m-attrs 12 --seed 3 "
                                   "--out " + out);
    REQUIRE(synth.exit_code == 0);
    RunResult sweep = run_cli(
        dir, "sweep-k --items " + out + "/items.jsonl --vocab " + out +
                 "/vocabulary.txt --transactions " + out + "/transactions.csv --list 2,3,4 "
                 "--seed 3 --out " + out +
                 " --train 2008-01:2010-06 --val 2010-07:2011-06 --test 2011-07:2011-12");
    CAPTURE(sweep.err);
    REQUIRE(sweep.exit_code == 0);

    std::istringstream csv(tc_test::read_file(out + "/sweep_k.csv"));
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(csv, line))
        if (!line.empty()) rows.push_back(line);
    REQUIRE(rows.size() == 4);  // header + 3 K values
    CHECK(rows[0] == "k,mape");
    CHECK(rows[1].rfind("2,", 0) == 0);
    CHECK(rows[2].rfind("3,", 0) == 0);
    CHECK(rows[3].rfind("4,", 0) == 0);
}

TEST_CASE("evaluate output is independent of the thread cap") {
    TempDir dir("tc-cli");
    const std::string out = dir.file("a");
    run_pipeline(dir, out);
    std::string serial = tc_test::read_file(out + "/report.json");

    ::setenv("TRENDCAST_THREADS", "8", 1);
    RunResult wide = run_cli(dir, "evaluate --seed 7 --models mean,last,exp --out " + out +
                                      kRanges);
    REQUIRE(wide.exit_code == 0);
    CHECK(tc_test::read_file(out + "/report.json") == serial);

    ::setenv("TRENDCAST_THREADS", "1", 1);
    RunResult narrow = run_cli(dir, "evaluate --seed 7 --models mean,last,exp --out " + out +
                                        kRanges);
    ::unsetenv("TRENDCAST_THREADS");
    REQUIRE(narrow.exit_code == 0);
    CHECK(tc_test::read_file(out + "/report.json") == serial);
}

TEST_CASE("version and help exit zero") {
    TempDir dir("tc-cli");
    CHECK(run_cli(dir, "--version").exit_code == 0);
    CHECK(run_cli(dir, "--help").exit_code == 0);
}
