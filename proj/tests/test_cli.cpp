#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "sfsfd/cli.hpp"
#include "sfsfd/discrepancy.hpp"
#include "sfsfd/pdf_file.hpp"
#include "temp_dir.hpp"

using sfsfd::testing::slurp;
using sfsfd::testing::spit;
using sfsfd::testing::TempDir;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run sfsfd_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = sfsfd::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(sfsfd_cli({}).code == 2);
    CHECK(sfsfd_cli({"frobnicate"}).code == 2);
    CHECK(sfsfd_cli({"sample", "--method", "lhs", "--n", "4"}).code == 2);
    CHECK(sfsfd_cli({"sample", "--method", "lhs", "--n", "0", "--d", "2"}).code == 2);
    CHECK(sfsfd_cli({"sample", "--method", "halton", "--n", "4", "--d", "2"}).code == 2);
    CHECK(sfsfd_cli({"sample", "--method", "sfsfd", "--n", "4", "--d", "2"}).code == 2);
    CHECK(sfsfd_cli({"--help"}).code == 0);
}

TEST_CASE("sample writes n rows of d columns, reproducibly") {
    for (std::string method : {"uniform", "lhs", "sobol"}) {
        CAPTURE(method);
        const auto a = sfsfd_cli({"sample", "--method", method, "--n", "7", "--d", "3", "--seed", "4"});
        REQUIRE(a.code == 0);
        CHECK(count_lines(a.out) == 7);
        std::istringstream in(a.out);
        const auto rows = sfsfd::cli::read_design_csv(in);
        CHECK(rows.size() == 7);
        CHECK(rows[0].size() == 3);
        CHECK(sfsfd_cli({"sample", "--method", method, "--n", "7", "--d", "3", "--seed", "4"}).out == a.out);
    }
    const auto plain = sfsfd_cli({"sample", "--method", "sobol", "--n", "2", "--d", "2", "--unscrambled"});
    CHECK(plain.out == "0,0\n0.5,0.5\n");
}

TEST_CASE("discrepancy subcommand reads CSV") {
    TempDir dir;
    spit(dir / "x.csv", "0.5\n");
    const auto r = sfsfd_cli({"discrepancy", (dir / "x.csv").string()});
    CHECK(r.code == 0);
    CHECK(r.out == "0.08333333333\n");

    spit(dir / "bad.csv", "0.1,0.2\n0.3\n");
    const auto bad = sfsfd_cli({"discrepancy", (dir / "bad.csv").string()});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("line 2") != std::string::npos);

    spit(dir / "range.csv", "0.1,0.2\n0.3,1.5\n");
    CHECK(sfsfd_cli({"discrepancy", (dir / "range.csv").string()}).err.find("outside [0,1]") != std::string::npos);
    CHECK(sfsfd_cli({"discrepancy", (dir / "missing.csv").string()}).code == 1);
}

TEST_CASE("sample | discrepancy agrees with the library") {
    TempDir dir;
    const auto s = sfsfd_cli({"sample", "--method", "lhs", "--n", "20", "--d", "4", "--out", (dir / "d.csv").string()});
    REQUIRE(s.code == 0);
    std::istringstream in(slurp(dir / "d.csv"));
    const auto rows = sfsfd::cli::read_design_csv(in);
    std::vector<double> flat;
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    const double expect = sfsfd::centered_l2_discrepancy(sfsfd::DesignMatrix(20, 4, flat));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g\n", expect);
    CHECK(sfsfd_cli({"discrepancy", (dir / "d.csv").string()}).out == buf);
}

TEST_CASE("optimize writes a pmf and a trace, sample consumes it") {
    TempDir dir;
    const auto pdf = (dir / "pdf.json").string();
    const auto r = sfsfd_cli({"optimize", "--n", "10", "--d", "3", "--m", "4", "--budget", "12", "--a-initial", "2",
                              "--out", pdf});
    REQUIRE(r.code == 0);
    const auto doc = sfsfd::read_pdf_file(pdf);
    CHECK(doc.pmf.cells() == 4);
    CHECK(doc.meta.n == 10);
    CHECK(std::stod(r.out) == doctest::Approx(doc.meta.objective_value).epsilon(1e-9));
    const std::string trace = slurp(dir / "pdf.trace.jsonl");
    CHECK(count_lines(trace) == 12);
    const auto first = nlohmann::json::parse(trace.substr(0, trace.find('\n')));
    CHECK(first.at("iter") == 0);
    CHECK(first.at("a") == 2);

    const auto smp = sfsfd_cli({"sample", "--method", "sfsfd", "--pdf", pdf, "--n", "5", "--d", "3"});
    CHECK(smp.code == 0);
    CHECK(count_lines(smp.out) == 5);

    spit(dir / "broken.json", "{\"masses\": [0.5, 0.6]}");
    const auto broken = sfsfd_cli({"sample", "--method", "sfsfd", "--pdf", (dir / "broken.json").string(), "--n",
                                   "5", "--d", "3"});
    CHECK(broken.code != 0);
}

TEST_CASE("config file: flags override config values") {
    TempDir dir;
    spit(dir / "cfg.json", "{\"method\": \"lhs\", \"n\": 6, \"d\": 2, \"seed\": 3}");
    const auto cfg = (dir / "cfg.json").string();
    const auto from_cfg = sfsfd_cli({"sample", "--config", cfg});
    REQUIRE(from_cfg.code == 0);
    CHECK(from_cfg.out == sfsfd_cli({"sample", "--method", "lhs", "--n", "6", "--d", "2", "--seed", "3"}).out);
    const auto overridden = sfsfd_cli({"sample", "--config", cfg, "--n", "9"});
    CHECK(count_lines(overridden.out) == 9);

    spit(dir / "unknown.json", "{\"colour\": \"red\"}");
    const auto unknown = sfsfd_cli({"sample", "--config", (dir / "unknown.json").string()});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("colour") != std::string::npos);
}

TEST_CASE("benchmark: small grid, rerun is byte identical, env provides workers") {
    TempDir dir;
    const auto out = (dir / "bench").string();
    const std::vector<std::string> args{"benchmark", "--dims", "2,3", "--sizes", "8", "--seeds", "2", "--budget",
                                        "5", "--a-initial", "2", "--m", "4", "--out", out};
    ::setenv("SFSFD_WORKERS", "2", 1);
    const auto first = sfsfd_cli(args);
    ::unsetenv("SFSFD_WORKERS");
    REQUIRE(first.code == 0);
    CHECK(first.out.find("computed 16 cells") != std::string::npos);
    const auto records = slurp(dir / "bench/records.jsonl");
    const auto summary = slurp(dir / "bench/summary.csv");
    CHECK(count_lines(records) == 16);
    CHECK(count_lines(summary) == 9);
    CHECK(std::filesystem::exists(dir / "bench/discrepancy_vs_d_log.svg"));

    const auto second = sfsfd_cli(args);
    CHECK(second.code == 0);
    CHECK(second.out.find("computed 0 cells, skipped 16") != std::string::npos);
    CHECK(slurp(dir / "bench/records.jsonl") == records);
    CHECK(slurp(dir / "bench/summary.csv") == summary);

    CHECK(sfsfd_cli({"benchmark", "--preset", "huge", "--out", out}).code == 2);
    CHECK(sfsfd_cli({"benchmark", "--workers", "0", "--out", out}).code == 2);
}

TEST_CASE("benchmark reports failed cells with exit code 1") {
    TempDir dir;
    const auto r = sfsfd_cli({"benchmark", "--methods", "sobol", "--dims", "1001", "--sizes", "4", "--seeds", "1",
                              "--out", (dir / "b").string()});
    CHECK(r.code == 1);
    CHECK(r.out.find("1 cell(s) failed") != std::string::npos);
}
