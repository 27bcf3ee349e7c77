/*
 * Copyright 2026 The roofline-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "catch2/catch_amalgamated.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = RLAB_FIXTURE_DIR;
const std::string kCli = RLAB_CLI;

fs::path scratch() {
    const auto d = fs::temp_directory_path() / "rlab_cli_test";
    fs::create_directories(d);
    return d;
}

int run(const std::string& args, const std::string& stdout_file = "") {
    const std::string out = stdout_file.empty() ? (scratch() / "last.out").string() : stdout_file;
    const std::string cmd = "cd '" + kFixtures.string() + "' && '" + kCli + "' " + args + " > '" + out + "' 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string last_output() { return slurp(scratch() / "last.out"); }

fs::path write_temp(const std::string& name, const std::string& text) {
    const auto p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_CASE("analyze succeeds on the shipped scenarios", "[cli]") {
    CHECK(run("analyze --scenario fig3.scenario") == 0);
    CHECK(last_output().find("limiter L1") != std::string::npos);
    CHECK(run("analyze --arch fig3.arch --workload gemm.wl --mapping os_map.map --overlap serialized") == 0);
    CHECK(run("analyze --scenario imc256.scenario --ai-ref-level 1") == 0);
    CHECK(last_output().find("reference level: L1") != std::string::npos);
}

TEST_CASE("validate exits 0 on good input and 1 on invariant violations", "[cli]") {
    CHECK(run("validate --arch fig3.arch --workload gemm.wl --mapping os_map.map") == 0);

    std::string arch = slurp(kFixtures / "fig3.arch");
    arch.replace(arch.find("\"bandwidth\": 128"), 16, "\"bandwidth\": -1");
    CHECK(run("validate --arch '" + write_temp("neg.arch", arch).string() + "'") == 1);
    CHECK(last_output().find("levels[0].bandwidth") != std::string::npos);

    std::string map = slurp(kFixtures / "os_map.map");
    map.replace(map.find("\"trip\": 64"), 10, "\"trip\": 32");
    const auto short_map = write_temp("short.map", map).string();
    CHECK(run("validate --arch fig3.arch --workload gemm.wl --mapping '" + short_map + "'") == 1);
    CHECK(last_output().find("factorization c") != std::string::npos);
    CHECK(run("analyze --arch fig3.arch --workload gemm.wl --mapping '" + short_map + "'") == 1);
}

TEST_CASE("parse and usage errors exit 2", "[cli]") {
    CHECK(run("validate --arch '" + write_temp("broken.arch", "{\n \"name\": \n").string() + "'") == 2);
    CHECK(run("analyze --scenario fig3.scenario --bogus-flag") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("analyze") == 2);
    CHECK(run("sweep --scenario fig3_gemm.scenario --param voltage --values 1") == 2);
    CHECK(run("sweep --scenario fig3_gemm.scenario --param B_L3 --values 1,x") == 2);
    CHECK(run("analyze --scenario does-not-exist.scenario") == 2);
    CHECK(run("oracle-check --scenario fig3.scenario") == 2);
}

TEST_CASE("csv and svg outputs are written and deterministic", "[cli]") {
    const auto a = scratch() / "a";
    const auto b = scratch() / "b";
    fs::remove_all(a);
    fs::remove_all(b);
    for (const auto& d : {a, b}) {
        CHECK(run("compare --scenario fc_dense.scenario --scenario fc_2to4.scenario --format svg --out-dir '" +
                  d.string() + "'") == 0);
        CHECK(run("analyze --scenario fig3_gemm.scenario --format csv --out-dir '" + d.string() + "'") == 0);
    }
    for (const char* f : {"throughput.svg", "energy.svg", "summary.csv", "traffic.csv"}) {
        REQUIRE(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
    CHECK(slurp(a / "throughput.svg").find("fc 2:4 weights") != std::string::npos);
}

TEST_CASE("sweep prints one row per value", "[cli]") {
    CHECK(run("sweep --scenario fig3_gemm.scenario --param precision --values 8,4,2") == 0);
    const auto out = last_output();
    CHECK(std::count(out.begin(), out.end(), '\n') == 4);
}

TEST_CASE("oracle-check agrees with the analytic counts and writes a trace", "[cli]") {
    const auto trace = scratch() / "trace.csv";
    CHECK(run("oracle-check --scenario fig3_gemm.scenario --trace '" + trace.string() + "'") == 0);
    CHECK(last_output().find("all counts match") != std::string::npos);
    CHECK(slurp(trace).rfind("cycle,level,operand,bytes\n", 0) == 0);
    CHECK(run("oracle-check --scenario fig3_gemm.scenario --cap 1000") == 1);
}
