#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "subexp/cli_app.hpp"
#include "subexp/errors.hpp"
#include "subexp/io.hpp"
#include "subexp/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

std::string cli_path() {
    const char* p = std::getenv("SUBEXP_CLI");
    REQUIRE_MESSAGE(p != nullptr, "SUBEXP_CLI must point at the subexp binary");
    return p;
}

fs::path scratch_dir() {
    fs::path dir = fs::temp_directory_path() / "subexp_cli_test";
    fs::create_directories(dir);
    return dir;
}

RunResult run_cli(const std::string& args) {
    fs::path out = scratch_dir() / "stdout.txt";
    std::string cmd = cli_path() + " " + args + " > " + out.string() + " 2> " +
                      (scratch_dir() / "stderr.txt").string();
    int rc = std::system(cmd.c_str());
    std::ifstream in(out, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return {WEXITSTATUS(rc), buf.str()};
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    f << content;
}

} // namespace

TEST_CASE("eval finds the upper mean of the max statistic") {
    auto r = run_cli("eval --f max --n 3 --interval 0.3,0.7");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("# config_hash=") == 0);
    CHECK(r.out.find("value") != std::string::npos);
    CHECK(r.out.find(",0.7,") != std::string::npos);
}

TEST_CASE("eval handles expressions and byte-identical reruns") {
    auto a = run_cli("eval --f \"x1-x2\" --n 2 --interval 0,1");
    auto b = run_cli("eval --f \"x1-x2\" --n 2 --interval 0,1");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find(",1,") != std::string::npos);
}

TEST_CASE("malformed expressions exit with the usage code") {
    auto r = run_cli("eval --f \"x1+*x2\" --n 2 --interval 0,1");
    CHECK(r.exit_code == 2);
    auto r2 = run_cli("eval --n 2 --interval 0,1");
    CHECK(r2.exit_code == 2);
    auto r3 = run_cli("eval --f mean --n 2 --interval 1,0");
    CHECK(r3.exit_code == 2);
}

TEST_CASE("check exit codes follow the verdict") {
    CHECK(run_cli("check --f max --n 3 --target upper").exit_code == 0);
    CHECK(run_cli("check --f min --n 3 --target lower").exit_code == 0);
    CHECK(run_cli("check --f \"2*mean\" --n 2 --target upper").exit_code == 1);
    CHECK(run_cli("check --f median --n 3 --target upper").exit_code == 0);
    // Interior peak + tiny budget: inconclusive, not biased.
    auto r = run_cli(
        "check --f \"exp(-25*(x1-0.5)*(x1-0.5)-25*(x2-0.5)*(x2-0.5))\" --n 2 "
        "--target upper --grid 0:1 --budget 16");
    CHECK(r.exit_code == 3);
    auto parsed = json::parse(r.out);
    CHECK(parsed["verdict"] == "inconclusive-at-budget");
}

TEST_CASE("check verdict JSON carries a witness") {
    auto r = run_cli("check --f \"mean+0.1\" --n 2 --target upper");
    CHECK(r.exit_code == 1);
    auto parsed = json::parse(r.out);
    CHECK(parsed["verdict"] == "biased");
    REQUIRE(!parsed["witness"].is_null());
    double achieved = parsed["witness"]["achieved"].get<double>();
    double mu_upper = parsed["witness"]["mu_upper"].get<double>();
    CHECK(std::abs(achieved - (mu_upper + 0.1)) < 1e-6);
}

TEST_CASE("estimate reads sample files") {
    fs::path data = scratch_dir() / "samples.txt";
    write_file(data, "# comment line\n1.0\n3.0 # trailing comment\n\n2.0\n");
    auto r = run_cli("estimate --data " + data.string() + " --group-size 1");
    CHECK(r.exit_code == 0);
    auto parsed = json::parse(r.out);
    CHECK(parsed["count"] == 3);
    CHECK(parsed["interval"][0] == 1.0);
    CHECK(parsed["interval"][1] == 3.0);

    fs::path consts = scratch_dir() / "consts.txt";
    write_file(consts, "0.4\n0.4\n0.4\n0.4\n");
    auto rc = run_cli("estimate --data " + consts.string());
    auto pc = json::parse(rc.out);
    CHECK(pc["interval"][0] == 0.4);
    CHECK(pc["interval"][1] == 0.4);
    CHECK(pc["envelopes"][0]["upper_envelope"] == 0.4);
    CHECK(pc["envelopes"][0]["lower_envelope"] == 0.4);
}

TEST_CASE("eval reaches the upper mean of the sample mean") {
    auto r = run_cli("eval --f mean --n 5 --interval 0.3,0.7");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("mean,5,0.3,0.7,0.7,") != std::string::npos);
}

TEST_CASE("estimate recovers the regime means of a switching stream") {
    // Synthetic regime-switching data: blocks of 500 draws alternating
    // between Bernoulli(0.3) and Bernoulli(0.7).
    subexp::Rng rng(subexp::substream_key(7, 0x72, 0));
    std::ostringstream os;
    for (int b = 0; b < 12; ++b) {
        double p = (b % 2 == 0) ? 0.3 : 0.7;
        for (int i = 0; i < 500; ++i) os << (rng.bernoulli(p) ? 1 : 0) << "\n";
    }
    fs::path data = scratch_dir() / "regimes.txt";
    write_file(data, os.str());
    auto r = run_cli("estimate --data " + data.string() + " --group-size 500");
    CHECK(r.exit_code == 0);
    auto parsed = json::parse(r.out);
    double upper = parsed["envelopes"][0]["upper_envelope"].get<double>();
    double lower = parsed["envelopes"][0]["lower_envelope"].get<double>();
    CHECK(std::abs(upper - 0.7) < 0.06);
    CHECK(std::abs(lower - 0.3) < 0.06);
}

TEST_CASE("estimate fails loudly on missing or short files") {
    CHECK(run_cli("estimate --data /nonexistent/file.txt").exit_code == 2);
    fs::path tiny = scratch_dir() / "tiny.txt";
    write_file(tiny, "1.0\n2.0\n");
    CHECK(run_cli("estimate --data " + tiny.string() + " --group-size 5").exit_code == 2);
    fs::path bad = scratch_dir() / "bad.txt";
    write_file(bad, "1.0\nnot-a-number\n");
    CHECK(run_cli("estimate --data " + bad.string()).exit_code == 2);
}

TEST_CASE("envelope command, triangle and block modes") {
    fs::path data = scratch_dir() / "stream.txt";
    std::ostringstream os;
    for (int i = 1; i <= 20; ++i) os << i * 0.1 << "\n";
    write_file(data, os.str());

    auto tri = run_cli("envelope --data " + data.string() + " --k 3 --n 2");
    CHECK(tri.exit_code == 0);
    auto tp = json::parse(tri.out);
    CHECK(tp["estimate"]["group_count"] == 3);

    auto blk = run_cli("envelope --data " + data.string() + " --n 5 --mode block");
    CHECK(blk.exit_code == 0);
    auto bp = json::parse(blk.out);
    CHECK(bp["estimate"]["group_count"] == 4);
    CHECK(bp["estimate"]["dropped"] == 0);

    CHECK(run_cli("envelope --data " + data.string() + " --n 2").exit_code == 2); // k missing
}

TEST_CASE("lln requires a seed and is reproducible with one") {
    fs::path out1 = scratch_dir() / "lln1.csv";
    fs::path out2 = scratch_dir() / "lln2.csv";
    std::string base = "lln --family \"dirac(0),dirac(1)\" --N 10,50 --replications 20 "
                       "--policies constants --seed 7 --out ";
    CHECK(run_cli(base + out1.string()).exit_code == 0);
    CHECK(run_cli(base + out2.string()).exit_code == 0);
    std::ifstream a(out1, std::ios::binary), b(out2, std::ios::binary);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().find("# config_hash=") == 0);
    CHECK(sa.str().find("N,estimate,reference,gap,std_error") != std::string::npos);

    auto noseed = run_cli("lln --family \"dirac(0),dirac(1)\" --N 10 --replications 5 "
                          "--policies constants");
    CHECK(noseed.exit_code == 2);

    // Dirac scenarios are deterministic: the top constant policy hits the
    // upper mean exactly, pinning the whole row.
    CHECK(sa.str().find("10,1,1,0,0") != std::string::npos);
    CHECK(sa.str().find("50,1,1,0,0") != std::string::npos);
}

TEST_CASE("lln writes an SVG plot when asked") {
    fs::path svg = scratch_dir() / "gap.svg";
    std::string cmd = "lln --family \"bernoulli(0.3),bernoulli(0.7)\" --N 10,100 "
                      "--replications 20 --policies constants --seed 3 --plot " +
                      svg.string();
    auto r = run_cli(cmd);
    CHECK(r.exit_code == 0);
    std::ifstream in(svg);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str().find("<svg") != std::string::npos);
    CHECK(buf.str().find("polyline") != std::string::npos);
}

TEST_CASE("config files feed defaults, flags override") {
    fs::path cfg = scratch_dir() / "cfg.json";
    write_file(cfg, R"({"f": "max", "n": 4, "interval": [0.3, 0.7]})");
    auto r = run_cli("eval --config " + cfg.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("max,4,0.3,0.7") != std::string::npos);

    auto r2 = run_cli("eval --config " + cfg.string() + " --n 2");
    CHECK(r2.exit_code == 0);
    CHECK(r2.out.find("max,2,0.3,0.7") != std::string::npos);

    CHECK(run_cli("eval --config /nonexistent.json").exit_code == 2);
    fs::path broken = scratch_dir() / "broken.json";
    write_file(broken, "{not json");
    CHECK(run_cli("eval --config " + broken.string()).exit_code == 2);
}

TEST_CASE("unknown commands and flags are usage errors") {
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("eval --no-such-flag 1").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);
}

TEST_CASE("config round-trips through serialization") {
    json cfg{{"command", "check"}, {"f", "mean"}, {"n", 3}, {"target", "upper"},
             {"tol", 1e-6},        {"budget", 100000}};
    json reparsed = json::parse(cfg.dump());
    CHECK(reparsed == cfg);
    CHECK(subexp::hex64(subexp::fnv1a64(cfg.dump())) ==
          subexp::hex64(subexp::fnv1a64(reparsed.dump())));
}

TEST_CASE("grid specs parse") {
    auto g = subexp::cli::parse_grid_spec("0:1;0.3:0.7");
    REQUIRE(g.size() == 2);
    CHECK(g[0] == std::pair<double, double>(0.0, 1.0));
    CHECK(g[1] == std::pair<double, double>(0.3, 0.7));
    CHECK_THROWS_AS(subexp::cli::parse_grid_spec("1:0"), subexp::InputError);
    CHECK_THROWS_AS(subexp::cli::parse_grid_spec("abc"), subexp::InputError);
    CHECK_THROWS_AS(subexp::cli::parse_grid_spec(""), subexp::InputError);
}
