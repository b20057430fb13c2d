// End-to-end checks of the installed command-line tool (exit-code contract,
// file formats, report determinism).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

#ifndef FERMRED_CLI_PATH
#error "FERMRED_CLI_PATH must be defined by the build"
#endif

const char* cli_path() { return FERMRED_CLI_PATH; }

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    const std::string out_path = "cli_stdout.tmp";
    const std::string err_path = "cli_stderr.tmp";
    const std::string cmd =
        std::string(cli_path()) + " " + args + " >" + out_path + " 2>" + err_path;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    std::ifstream of(out_path), ef(err_path);
    std::stringstream so, se;
    so << of.rdbuf();
    se << ef.rdbuf();
    r.out = so.str();
    r.err = se.str();
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    f << content;
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) { std::remove(path.c_str()); }
    ~TempFile() { std::remove(path.c_str()); }
};

const char* kUniform2 = "modes 2\n00 0.5 0\n01 0.5 0\n10 0.5 0\n11 0.5 0\n";
const char* kBell = "modes 2\nnormalize true\n00 1 0\n11 1 0\n";

} // namespace

TEST_CASE("reduce reproduces the split-spectrum example") {
    TempFile st("cli_ex3.state");
    write_file(st.path, kUniform2);
    const RunResult r = run_cli("reduce --state " + st.path + " --modes 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("spectrum first: 0.99999999999999978 0") != std::string::npos);
    CHECK(r.out.find("spectrum second: 0.5 0.5") != std::string::npos);
    CHECK(r.out.find("equispectral: no") != std::string::npos);
    CHECK(r.out.find("|S1-S2|=0.99999999999999967") != std::string::npos);
}

TEST_CASE("reduce accepts a non-contiguous subset") {
    TempFile st("cli_sub.state");
    write_file(st.path, "modes 3\nnormalize true\n000 1 0\n101 1 0\n");
    const RunResult r = run_cli("reduce --state " + st.path + " --subset 1,3");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("4x4") != std::string::npos);
}

TEST_CASE("usage and file errors exit with 2") {
    CHECK(run_cli("reduce --state missing.state --modes 1").exit_code == 2);
    TempFile st("cli_bad.state");
    write_file(st.path, "modes 2\n001 1 0\n");
    const RunResult r = run_cli("reduce --state " + st.path + " --modes 1");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("line 2") != std::string::npos);
    TempFile ok("cli_ok.state");
    write_file(ok.path, kBell);
    CHECK(run_cli("reduce --state " + ok.path + " --modes 2").exit_code == 2);
    CHECK(run_cli("reduce --state " + ok.path).exit_code == 2);
    CHECK(run_cli("verify --suite bogus").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("verify suites pass and report failures distinctly") {
    const RunResult car = run_cli("verify --suite car --n-max 6");
    CHECK(car.exit_code == 0);
    CHECK(car.out.find("pass") != std::string::npos);
    const RunResult t1 = run_cli("verify --suite theorem1 --trials 50 --n-max 4 --seed 3");
    CHECK(t1.exit_code == 0);

    // an unattainable tolerance exposes the counterexample channel
    const RunResult tight =
        run_cli("verify --suite theorem1 --trials 50 --n-max 4 --seed 3 --tol 1e-18");
    CHECK(tight.exit_code == 1);
    CHECK(tight.out.find("FAIL") != std::string::npos);
    CHECK(tight.out.find("counterexample: seed=") != std::string::npos);
    CHECK(tight.out.find("gap=") != std::string::npos);
}

TEST_CASE("purify recovers an even pair and rejects the uniform state") {
    TempFile bell("cli_bell.state");
    write_file(bell.path, kBell);
    const RunResult ok = run_cli("purify --state " + bell.path + " --modes 1 --quiet");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("fidelity") != std::string::npos);

    TempFile uni("cli_uni.state");
    write_file(uni.path, kUniform2);
    const RunResult bad = run_cli("purify --state " + uni.path + " --modes 1");
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("not equispectral") != std::string::npos);
    CHECK(bad.out.find("spectrum first") != std::string::npos);
}

TEST_CASE("sample writes loadable state files deterministically") {
    TempFile a("cli_a.state"), b("cli_b.state");
    CHECK(run_cli("sample --modes 3 --ensemble ssr --parity even --seed 7 --out " + a.path)
              .exit_code == 0);
    CHECK(run_cli("sample --modes 3 --ensemble ssr --parity even --seed 7 --out " + b.path)
              .exit_code == 0);
    std::ifstream fa(a.path), fb(b.path);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().find("modes 3") != std::string::npos);
    CHECK(run_cli("reduce --state " + a.path + " --modes 1").exit_code == 0);
    CHECK(run_cli("sample --modes 2 --ensemble ssr").exit_code == 2); // missing parity
}

TEST_CASE("json reports have byte-identical payloads across runs") {
    TempFile st("cli_json.state");
    write_file(st.path, kBell);
    const RunResult r1 = run_cli("reduce --state " + st.path + " --modes 1 --json --seed 5");
    const RunResult r2 = run_cli("reduce --state " + st.path + " --modes 1 --json --seed 5");
    CHECK(r1.exit_code == 0);
    // strip the wall-clock line before comparing
    auto strip_wall = [](std::string s) {
        const auto pos = s.find("\"wall_ms\"");
        return pos == std::string::npos ? s : s.substr(0, pos);
    };
    CHECK(strip_wall(r1.out) == strip_wall(r2.out));
    CHECK(r1.out.find("\"payload\"") != std::string::npos);
}

TEST_CASE("fuzz campaigns append records and resume through the tool") {
    TempFile rec("cli_rec.txt");
    const RunResult first =
        run_cli("fuzz --n-max 3 --trials 30 --seed 12 --out " + rec.path);
    CHECK(first.exit_code == 0);
    const RunResult second =
        run_cli("fuzz --n-max 3 --trials 60 --seed 12 --out " + rec.path + " --resume");
    CHECK(second.exit_code == 0);
    CHECK(second.out.find("30/60") != std::string::npos);
    std::ifstream f(rec.path);
    std::string line;
    int lines = 0;
    while (std::getline(f, line)) ++lines;
    CHECK(lines == 60);

    const RunResult clash =
        run_cli("fuzz --n-max 3 --trials 60 --seed 13 --out " + rec.path + " --resume");
    CHECK(clash.exit_code == 2);
}
