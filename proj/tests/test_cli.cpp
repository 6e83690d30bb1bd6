// SPDX-License-Identifier: Apache-2.0
//
// latred - lattice-reduction-aided MIMO detection toolkit
// Copyright (C) 2026 The latred authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "latred/cli.hpp"

using namespace latred;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "latred");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / ("latred_test_" + name);
    std::ofstream(p, std::ios::binary) << content;
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST_CASE("usage and exit codes") {
    CHECK(run({"--help"}).code == cli::kExitOk);
    CHECK(run({"sweep", "--help"}).code == cli::kExitOk);
    CHECK(run({}).code == cli::kExitUsage);
    CHECK(run({"frobnicate"}).code == cli::kExitUsage);
    CHECK(run({"sweep", "--trials", "0"}).code == cli::kExitUsage);
    CHECK(run({"sweep", "--trials", "x"}).code == cli::kExitUsage);
    CHECK(run({"sweep", "--detectors", "zf,mmse"}).code == cli::kExitUsage);
    CHECK(run({"sweep", "--arith", "double"}).code == cli::kExitUsage);
    CHECK(run({"sweep", "--delta", "0.5", "--trials", "1"}).code == cli::kExitUsage);
    CHECK(run({"sweep", "--snr", "10,5", "--trials", "1"}).code == cli::kExitUsage);
    CHECK(run({"sweep", "--nr", "2", "--mt", "3", "--trials", "1"}).code == cli::kExitUsage);
    CHECK(run({"sweep", "--ml-trials", "5", "--trials", "2"}).code == cli::kExitUsage);
    CHECK(run({"reduce"}).code == cli::kExitUsage);
    CHECK(run({"reduce", "--random", "--in", "x"}).code == cli::kExitUsage);
}

TEST_CASE("sweep output is deterministic csv") {
    const std::vector<std::string> args = {"sweep", "--snr", "20", "--trials", "1", "--detectors",
                                           "zf", "--seed", "7"};
    const Run a = run(args);
    const Run b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("snr_db,detector,arith,trials,bit_errors,bits_total,ber\n", 0) == 0);
    CHECK(count_lines(a.out) == 2);
    CHECK(a.out.find("20,zf,float,1,") != std::string::npos);

    const auto path = std::filesystem::temp_directory_path() / "latred_test_sweep.csv";
    std::vector<std::string> to_file = args;
    to_file.insert(to_file.end(), {"--out", path.string()});
    REQUIRE(run(to_file).code == 0);
    CHECK(slurp(path) == a.out);
    std::filesystem::remove(path);
}

TEST_CASE("default flags give every detector at every grid point") {
    const Run r = run({"sweep", "--trials", "2", "--ml-trials", "1"});
    REQUIRE(r.code == 0);
    CHECK(count_lines(r.out) == 1 + 4 * 7);
    for (const char* d : {",zf,", ",lr_zf_mlll,", ",lr_zf_clll,", ",ml,"}) {
        CHECK(r.out.find(std::string("30") + d) != std::string::npos);
    }
    CHECK(r.out.find(",ml,float,1,") != std::string::npos);
}

TEST_CASE("csv numbers use a period and twelve significant digits") {
    const Run r = run({"sweep", "--snr", "2.5,7", "--trials", "3", "--detectors", "zf", "--seed", "3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\n2.5,zf,float,3,") != std::string::npos);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        const std::string ber = line.substr(line.rfind(',') + 1);
        const auto digits = std::count_if(ber.begin(), ber.end(), ::isdigit);
        CHECK(digits <= 13);
        CHECK(ber.find(' ') == std::string::npos);
    }
    CHECK(cli::ber_csv(SweepResult{SimConfig{}, {BerPoint{15, Detector::zf, Arithmetic::floating, 3, 1, 48, 1.0 / 48}}})
              .find("15,zf,float,3,1,48,0.0208333333333\n") != std::string::npos);
}

TEST_CASE("seed from the environment wins") {
    const std::vector<std::string> args = {"sweep", "--snr", "5", "--trials", "30", "--detectors",
                                           "zf", "--seed", "1"};
    const std::string base = run(args).out;
    std::vector<std::string> other = args;
    other.back() = "2";
    const std::string seed2 = run(other).out;
    REQUIRE(base != seed2);
    ::setenv("LATRED_SEED", "2", 1);
    const std::string env = run(args).out;
    ::setenv("LATRED_SEED", "nope", 1);
    const int bad = run(args).code;
    ::unsetenv("LATRED_SEED");
    CHECK(env == seed2);
    CHECK(bad == cli::kExitUsage);
}

TEST_CASE("worker count does not change the csv") {
    const std::vector<std::string> args = {"sweep", "--snr", "10,25", "--trials", "60",
                                           "--ml-trials", "5", "--seed", "5"};
    std::vector<std::string> many = args;
    many.insert(many.end(), {"--workers", "4"});
    CHECK(run(args).out == run(many).out);
}

TEST_CASE("reduce prints the worked example") {
    const auto p = temp_file("example.txt", "# worked example\n2 2\n1,0 0.6,0.4\n0,0 0.3,0\n");
    const Run r = run({"reduce", "--in", p.string(), "--iterations", "1"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("T = [[-1,1],[1,0]]\n") != std::string::npos);
    CHECK(r.out.find("r_diag = 0.6403124237 ") != std::string::npos);
    CHECK(r.out.find("swaps: 1\n") != std::string::npos);
    CHECK(r.out.find("iterations_used: 1\n") != std::string::npos);
    CHECK(r.out.find("invariants: OK") != std::string::npos);
    const Run full = run({"reduce", "--in", p.string()});
    CHECK(full.out.find("T = [[-j,-1],[1+j,1]]\n") != std::string::npos);
    CHECK(full.out.find("converged: true") != std::string::npos);
    std::filesystem::remove(p);
}

TEST_CASE("reduce of the identity") {
    const auto p = temp_file("identity.txt", "3 3\n1,0 0,0 0,0\n0,0 1,0 0,0\n0,0 0,0 1,0\n");
    const Run r = run({"reduce", "--in", p.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("T = [[1,0,0],[0,1,0],[0,0,1]]") != std::string::npos);
    CHECK(r.out.find("defect_before: 1\n") != std::string::npos);
    CHECK(r.out.find("defect_after: 1\n") != std::string::npos);
    CHECK(r.out.find("swaps: 0") != std::string::npos);
    std::filesystem::remove(p);
}

TEST_CASE("reduce of random channels passes its self-check") {
    for (const char* seed : {"1", "2", "3", "4", "5"}) {
        for (const char* arith : {"float", "fixed"}) {
            const Run r = run({"reduce", "--random", "--seed", seed, "--arith", arith});
            CHECK(r.code == 0);
            CHECK(r.out.find("invariants: OK") != std::string::npos);
        }
        const Run c = run({"reduce", "--random", "--seed", seed, "--algorithm", "clll"});
        CHECK(c.out.find("converged: true") != std::string::npos);
    }
    const Run tall = run({"reduce", "--random", "--nr", "6", "--mt", "3"});
    CHECK(tall.code == 0);
    CHECK(tall.out.find("dimension: 6x3") != std::string::npos);
}

TEST_CASE("malformed matrix files") {
    const std::vector<std::string> bad = {
        "",
        "2\n1,0 0,0\n0,0 1,0\n",
        "2 2\n1,0 0,0\n",
        "2 2\n1,0 0,0\n0,0 1,0\n1,0 1,0\n",
        "2 2\n1,0 0,0\n0,0\n",
        "2 2\n1,0 0,0\n0,0 x,1\n",
        "2 2\n1;0 0,0\n0,0 1,0\n",
        "2 2\n1,0 0,0\n0,0 nan,0\n",
        "2 3\n1,0 0,0 0,0\n0,0 1,0 0,0\n",
    };
    for (std::size_t i = 0; i < bad.size(); ++i) {
        CAPTURE(i);
        const auto p = temp_file("bad.txt", bad[i]);
        const Run r = run({"reduce", "--in", p.string()});
        CHECK(r.code == cli::kExitUsage);
        CHECK_FALSE(r.err.empty());
    }
    CHECK(run({"reduce", "--in", "/nonexistent/latred.txt"}).code == cli::kExitUsage);
}

TEST_CASE("matrix text round trip") {
    ComplexMatrix m(2, 3);
    m(0, 0) = {1.5, -2};
    m(1, 2) = {1e-7, 3.25};
    m(0, 1) = {0.1, 0.2};
    std::ostringstream out;
    cli::write_matrix(out, m);
    std::istringstream in(out.str());
    CHECK(cli::read_matrix(in) == m);
}

TEST_CASE("opcount report") {
    const auto p = temp_file("id4.txt",
                             "4 4\n1,0 0,0 0,0 0,0\n0,0 1,0 0,0 0,0\n0,0 0,0 1,0 0,0\n0,0 0,0 0,0 1,0\n");
    const Run id = run({"opcount", "--in", p.string()});
    REQUIRE(id.code == 0);
    CHECK(id.out.find("SIZE REDUCTION           0  34") != std::string::npos);
    CHECK(id.out.find("CORDIC                   0  9") != std::string::npos);
    std::filesystem::remove(p);

    const Run a = run({"opcount", "--random", "--seed", "3"});
    const Run b = run({"opcount", "--random", "--seed", "3"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("arith fixed") != std::string::npos);
    for (const char* row : {"ARRANGE", "CORDIC", "CMUL", "STREAM", "SIEGEL", "SIZE REDUCTION"}) {
        CHECK(a.out.find(row) != std::string::npos);
    }
    CHECK(a.out.find("informational") != std::string::npos);
    CHECK(a.out.find("PASS") == std::string::npos);
}

TEST_CASE("cordic-check and golden output") {
    const auto p = std::filesystem::temp_directory_path() / "latred_test_golden.txt";
    const Run r = run({"cordic-check", "--samples", "3000", "--seed", "9", "--golden-out", p.string(),
                       "--golden-count", "10"});
    CHECK(r.code == 0);
    CHECK(r.out.find("result: PASS") != std::string::npos);
    CHECK(r.out.find("stage_grouping_mismatches: 0") != std::string::npos);
    CHECK(slurp(p) == cli::fxp_golden_vectors(9, 10));
    std::filesystem::remove(p);
}
