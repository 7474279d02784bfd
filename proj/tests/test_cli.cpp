#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <string>

#include "boostersim/util.hpp"

#ifndef BOOSTERSIM_CLI_PATH
#error "BOOSTERSIM_CLI_PATH must point at the built executable"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    const std::string out_path = "cli_test_stdout.tmp";
    const std::string cmd =
        std::string("\"") + BOOSTERSIM_CLI_PATH + "\" " + args + " > " + out_path + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    RunResult r;
#ifdef _WIN32
    r.exit_code = status;
#else
    r.exit_code = WEXITSTATUS(status);
#endif
    try {
        r.stdout_text = boostersim::util::read_file(out_path);
    } catch (...) {
    }
    std::remove(out_path.c_str());
    return r;
}

}  // namespace

TEST_CASE("cli: hw show emits the capability table") {
    const RunResult r = run_cli("--quiet hw show");
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("precision,bytes_per_element") == 0);
    CHECK(r.stdout_text.find("fp64_tc") != std::string::npos);
}

TEST_CASE("cli: topo summary and exports") {
    const RunResult r = run_cli("--quiet topo --edges cli_test_edges.csv --dot cli_test_graph.dot");
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("cells,") == 0);
    const std::string edges = boostersim::util::read_file("cli_test_edges.csv");
    CHECK(edges.rfind("src_id,dst_id,kind,bandwidth_bits_per_s,latency_s\n", 0) == 0);
    const std::string dot = boostersim::util::read_file("cli_test_graph.dot");
    CHECK(dot.rfind("graph dragonfly_plus", 0) == 0);
    std::remove("cli_test_edges.csv");
    std::remove("cli_test_graph.dot");
}

TEST_CASE("cli: collective evaluates points") {
    const RunResult r =
        run_cli("--quiet collective --algorithm ring -p 2,4 -m 1MB,1GB --alpha 5e-6 --beta 5e-9");
    CHECK(r.exit_code == 0);
    // header + 4 rows
    std::size_t lines = 0;
    for (char c : r.stdout_text)
        if (c == '\n') ++lines;
    CHECK(lines == 5);
    CHECK(r.stdout_text.find("ring,4,1000000,") != std::string::npos);
}

TEST_CASE("cli: empty sweep device list is a validation failure") {
    const RunResult r = run_cli("--quiet sweep --workload convlstm_era5 --devices \"\"");
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli: unknown workload is a validation failure") {
    const RunResult r = run_cli("--quiet train --workload nope");
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli: model errors exit with 1") {
    const RunResult r = run_cli("--quiet train --workload convlstm_era5 --devices 100000");
    CHECK(r.exit_code == 1);
}

TEST_CASE("cli: repeated runs produce byte-identical output") {
    const std::string args = "--quiet sweep --workload bigearthnet_resnet152 --devices 4,16,64,256";
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.stdout_text == b.stdout_text);
    CHECK(!a.stdout_text.empty());

    const RunResult j1 = run_cli("--quiet --format json train --workload convlstm_era5");
    const RunResult j2 = run_cli("--quiet --format json train --workload convlstm_era5");
    CHECK(j1.exit_code == 0);
    CHECK(j1.stdout_text == j2.stdout_text);
}

TEST_CASE("cli: reproduce single case prints the derivation and PASS") {
    const RunResult r = run_cli("--quiet reproduce --case bisection");
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("400 Tbit/s") != std::string::npos);
    CHECK(r.stdout_text.find("PASS: bisection") != std::string::npos);
}

TEST_CASE("cli: calibrate from a measurements csv") {
    boostersim::util::write_file("cli_test_meas.csv", "p,time_s\n1,3000\n16,208.3333333333333\n");
    const RunResult r = run_cli(
        "--quiet calibrate --workload convlstm_era5 --measurements cli_test_meas.csv "
        "--free eta --rounds 20");
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("compute_efficiency") != std::string::npos);
    std::remove("cli_test_meas.csv");
}
