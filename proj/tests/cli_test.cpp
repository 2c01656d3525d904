// Copyright 2026 The dshadow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "dshadow/io.hpp"

namespace fs = std::filesystem;
using dshadow::json;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string &args) {
    std::string cmd = std::string(DSHADOW_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE *p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    size_t k;
    while ((k = fread(buf, 1, sizeof buf, p)) > 0) {
        out.append(buf, k);
    }
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("dshadow_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string &name) const { return (dir_ / name).string(); }
    std::string write(const std::string &name, const std::string &text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }
    static std::string data(const std::string &name) { return std::string(DSHADOW_DATA_DIR) + "/" + name; }

    fs::path dir_;
};

std::string read(const std::string &p) { return dshadow::read_text_file(p); }

std::string strip_manifest(const std::string &text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        if (line.rfind("# manifest", 0) != 0) {
            out += line + "\n";
        }
    }
    return out;
}

}  // namespace

TEST_F(CliTest, help_exits_zero_without_output_files) {
    for (const char *sub : {"", "derandomize", "simulate", "estimate", "benchmark"}) {
        EXPECT_EQ(run(std::string(sub) + " --help").code, 0) << sub;
    }
    EXPECT_TRUE(fs::is_empty(dir_));
}

TEST_F(CliTest, derandomize_validation) {
    std::string h2 = data("h2_4q.paulis");
    EXPECT_EQ(run("derandomize --paulis " + h2 + " --depth 1 --epsilon 0.5 --shots 0").code, 2);
    EXPECT_EQ(run("derandomize --paulis " + h2 + " --depth 1 --shots 10").code, 2);
    EXPECT_EQ(run("derandomize --paulis " + h2 + " --depth 1 --epsilon 0.5").code, 2);
    EXPECT_EQ(run("derandomize --paulis " + h2 + " --depth 1 --epsilon 0.5 --shots 5 --per-observable 2").code, 2);
    EXPECT_EQ(run("derandomize --paulis " + h2 + " --depth 1 --epsilon -1 --shots 5").code, 2);
    EXPECT_EQ(run("derandomize --paulis " + h2 + " --depth 1 --epsilon 0.5 --per-observable 2 --relaxed").code, 2);
    auto bad = write("bad.paulis", "0.5 XQZ\n");
    EXPECT_EQ(run("derandomize --paulis " + bad + " --depth 0 --epsilon 0.5 --shots 5").code, 3);
    EXPECT_EQ(run("derandomize --paulis " + path("missing") + " --depth 0 --epsilon 0.5 --shots 5").code, 3);
    auto order = write("order.txt", "single 1 0\n");
    EXPECT_EQ(run("derandomize --paulis " + h2 + " --depth 0 --epsilon 0.5 --shots 5 --order " + order).code, 2);
}

TEST_F(CliTest, derandomize_h2_two_structures) {
    auto r = run("derandomize --paulis " + data("h2_4q.paulis") +
                 " --shots 100 --depth 1 --epsilon 0.5 --weights abs-coeff --out " + path("c.json") + " --log " +
                 path("log.tsv"));
    ASSERT_EQ(r.code, 0);
    auto doc = json::parse(read(path("c.json")));
    EXPECT_EQ(doc["manifest"]["command"], "derandomize");
    EXPECT_EQ(doc["manifest"]["inputs"].size(), 1u);
    ASSERT_EQ(doc["circuits"].size(), 100u);
    std::set<std::string> kinds;
    for (const auto &c : doc["circuits"]) {
        EXPECT_TRUE(c.contains("gates"));
        kinds.insert(c["t"].dump() + c["s"].dump());
    }
    EXPECT_EQ(kinds.size(), 2u);
    auto log = read(path("log.tsv"));
    EXPECT_EQ(log.rfind("# manifest ", 0), 0u);
    EXPECT_NE(log.find("measurement\tkind\tlayer"), std::string::npos);
}

TEST_F(CliTest, derandomize_bell_shape) {
    auto r = run("derandomize --paulis " + data("bell.paulis") + " --shots 100 --depth 3 --epsilon 0.9");
    ASSERT_EQ(r.code, 0);
    auto doc = json::parse(r.out);
    EXPECT_EQ(doc["circuits"].size(), 100u);
    EXPECT_EQ(doc["d"], 3);
    EXPECT_EQ(doc["hits"].size(), 3u);
}

TEST_F(CliTest, coverage_mode) {
    auto p = write("z.paulis", "1 ZI\n1 IX\n");
    auto r = run("derandomize --paulis " + p + " --per-observable 4 --depth 0 --epsilon 0.5");
    ASSERT_EQ(r.code, 0);
    auto doc = json::parse(r.out);
    for (const auto &h : doc["hits"]) {
        EXPECT_GE(h["h"].get<double>(), 4.0);
    }
}

TEST_F(CliTest, simulate_and_estimate) {
    auto p = write("zz.paulis", "1 ZZ\n0.5 ZI\n2 XX\n");
    ASSERT_EQ(run("derandomize --paulis " + p + " --shots 6 --depth 0 --epsilon 0.5 --out " + path("c.json")).code, 0);
    auto zero = write("zero.state", "1 0\n0 0\n0 0\n0 0\n");
    ASSERT_EQ(run("simulate --circuits " + path("c.json") + " --state file:" + zero + " --seed 4 --out " +
                  path("o1.tsv"))
                  .code,
              0);
    ASSERT_EQ(run("simulate --circuits " + path("c.json") + " --state file:" + zero + " --seed 4 --out " +
                  path("o2.tsv"))
                  .code,
              0);
    auto o1 = read(path("o1.tsv"));
    EXPECT_EQ(strip_manifest(o1), strip_manifest(read(path("o2.tsv"))));

    // Identity-type circuits on |00>: every record reads 00.
    auto doc = json::parse(read(path("c.json")));
    std::istringstream in(o1);
    auto recs = dshadow::read_outcomes(in, "o1");
    ASSERT_EQ(recs.size(), 6u);
    for (size_t i = 0; i < recs.size(); i++) {
        if (doc["circuits"][i]["s"] == json::array({1, 1})) {
            EXPECT_EQ(recs[i].bits, "00");
        }
    }

    auto r = run("estimate --circuits " + path("c.json") + " --outcomes " + path("o1.tsv") + " --paulis " + p +
                 " --epsilon 0.5");
    ASSERT_EQ(r.code, 0);
    auto rep = json::parse(r.out)["report"];
    double sum = 0;
    for (const auto &row : rep["paulis"]) {
        sum += row["coefficient"].get<double>() * row["estimate"].get<double>();
        if (row["hits"] == 0) {
            EXPECT_EQ(row["estimate"], 0.0);
            EXPECT_TRUE(row["vacuous"].get<bool>());
            EXPECT_TRUE(row["flagged"].get<bool>());
        }
    }
    EXPECT_NEAR(rep["scalar"]["estimate"].get<double>(), sum, 1e-12);

    auto csv = run("estimate --circuits " + path("c.json") + " --outcomes " + path("o1.tsv") + " --paulis " + p +
                   " --epsilon 0.5 --format csv");
    ASSERT_EQ(csv.code, 0);
    EXPECT_NE(csv.out.find("pauli,coefficient,estimate,hits"), std::string::npos);
}

TEST_F(CliTest, estimate_full_coverage_has_no_flags) {
    auto p = write("z.paulis", "1 ZI\n1 IZ\n1 ZZ\n");
    ASSERT_EQ(run("derandomize --paulis " + p + " --shots 5 --depth 0 --epsilon 0.5 --out " + path("c.json")).code, 0);
    auto bell = write("bell.state", "0.7071067811865476 0\n0 0\n0 0\n0.7071067811865476 0\n");
    ASSERT_EQ(run("simulate --circuits " + path("c.json") + " --state file:" + bell + " --seed 1 --out " +
                  path("o.tsv"))
                  .code,
              0);
    auto truth = write("truth.txt", "ZI 0\nIZ 0\nZZ 1\n");
    auto r = run("estimate --circuits " + path("c.json") + " --outcomes " + path("o.tsv") + " --paulis " + p +
                 " --epsilon 0.5 --true-values " + truth);
    ASSERT_EQ(r.code, 0);
    auto rep = json::parse(r.out)["report"];
    EXPECT_EQ(rep["flagged"], 0);
    EXPECT_EQ(rep["paulis"][2]["estimate"], 1.0);
    EXPECT_TRUE(rep["scalar"].contains("abs_error"));
}

TEST_F(CliTest, simulate_errors) {
    auto p = write("z.paulis", "1 ZII\n");
    ASSERT_EQ(run("derandomize --paulis " + p + " --shots 2 --depth 0 --epsilon 0.5 --out " + path("c.json")).code, 0);
    auto two = write("two.state", "1 0\n0 0\n0 0\n0 0\n");
    EXPECT_EQ(run("simulate --circuits " + path("c.json") + " --state file:" + two + " --seed 1").code, 4);
    EXPECT_EQ(run("simulate --circuits " + path("c.json") + " --state bogus:" + two + " --seed 1").code, 2);
    auto odd = write("odd.state", "1 0\n0 0\n0 0\n");
    EXPECT_EQ(run("simulate --circuits " + path("c.json") + " --state file:" + odd + " --seed 1").code, 4);
    auto junk = write("junk.json", "{not json");
    EXPECT_EQ(run("simulate --circuits " + junk + " --state file:" + two + " --seed 1").code, 3);
    // Relaxed output may keep twirled slots, which cannot be simulated.
    auto rel = write("rel.json", R"({"circuits":[{"n":3,"d":0,"t":[],"s":[0,1,1]}]})");
    auto three = write("three.state", "1\n0\n0\n0\n0\n0\n0\n0\n");
    EXPECT_EQ(run("simulate --circuits " + rel + " --state file:" + three + " --seed 1").code, 4);
    auto outc = write("bad.tsv", "0\t0x1\n");
    EXPECT_EQ(run("estimate --circuits " + path("c.json") + " --outcomes " + outc + " --paulis " + p +
                  " --epsilon 0.5")
                  .code,
              3);
    auto range = write("range.tsv", "7\t000\n");
    EXPECT_EQ(run("estimate --circuits " + path("c.json") + " --outcomes " + range + " --paulis " + p +
                  " --epsilon 0.5")
                  .code,
              4);
}

TEST_F(CliTest, benchmark_targets) {
    EXPECT_EQ(run("benchmark nope --epsilon 0.5").code, 2);
    EXPECT_EQ(run("benchmark hubbard").code, 2);
    auto r = run("benchmark hubbard --qubits 4 --per-observable 25 --depth 0 --epsilon 1.5 --skip-shallow");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("naive_grouping,0,4,31,425,"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("direct,0,4,31,775,"), std::string::npos) << r.out;
    auto h2 = run("benchmark h2 --epsilon 0.5 --sims 3 --shots 50");
    ASSERT_EQ(h2.code, 0);
    EXPECT_NE(h2.out.find("strategy,depth,shots,sims,mean_abs_error"), std::string::npos);
    EXPECT_EQ(h2.out.rfind("# manifest ", 0), 0u);
}
