#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "doctest.h"
#include "hyperstore/cli.hpp"
#include "hyperstore/errors.hpp"
#include "json.hpp"

using namespace hyperstore;
using namespace hyperstore::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("hyperstore_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path operator/(const char* name) const { return path / name; }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("value sources") {
    TempDir dir;
    std::ofstream(dir / "v.txt") << "# header\n5\n  7 # seven\n\n5\n";
    CHECK(read_value_file(dir / "v.txt") == std::vector<std::uint64_t>{5, 7, 5});
    std::ofstream(dir / "bad.txt") << "1\n2\nx3\n";
    try {
        read_value_file(dir / "bad.txt");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.line() == 3);
    }
    CHECK(load_values("primes:100").size() == 25);
    const auto r = load_values("random:50:1000:4");
    CHECK(r.size() == 50);
    CHECK(load_values("random:50:1000:4") == r);
    CHECK_THROWS(load_values("random:5:1000"));
    CHECK_THROWS(load_values(std::string(dir / "missing.txt")));
}

TEST_CASE("build, query, stats") {
    TempDir dir;
    RunConfig cfg;
    std::ostringstream out, err;
    REQUIRE(cmd_build("primes:100", 2, dir / "p.repo", cfg, out, err) == exit_ok);
    CHECK(out.str().find("N_f=25") != std::string::npos);

    out.str("");
    CHECK(cmd_query(dir / "p.repo", 97, cfg, out, err) == exit_ok);
    CHECK(out.str().rfind("found 97", 0) == 0);
    out.str("");
    CHECK(cmd_query(dir / "p.repo", 91, cfg, out, err) == exit_absent);
    CHECK(out.str().rfind("absent 91", 0) == 0);

    out.str("");
    CHECK(cmd_stats(dir / "p.repo", cfg, out, err) == exit_ok);
    CHECK(out.str().find("VIOLATED") == std::string::npos);
    CHECK(out.str().find("INCONSISTENT") == std::string::npos);

    cfg.format = ReportFormat::json_lines;
    out.str("");
    CHECK(cmd_stats(dir / "p.repo", cfg, out, err) == exit_ok);
    const auto j = nlohmann::json::parse(out.str());
    CHECK(j["N_f"] == 25);
    CHECK(j["q_total"].get<int>() <= 20);
    CHECK(j["counters_consistent"] == true);
}

TEST_CASE("build reports duplicates and accepts empty input") {
    TempDir dir;
    RunConfig cfg;
    cfg.format = ReportFormat::json_lines;
    std::ostringstream out, err;
    std::ofstream(dir / "d.txt") << "11\n13\n11\n";
    REQUIRE(cmd_build(std::string(dir / "d.txt"), 2, dir / "d.repo", cfg, out, err) == exit_ok);
    const auto j = nlohmann::json::parse(out.str());
    CHECK(j["N_f"] == 2);
    CHECK(j["duplicates"] == nlohmann::json::array({11}));

    std::ofstream(dir / "e.txt") << "# nothing\n";
    out.str("");
    REQUIRE(cmd_build(std::string(dir / "e.txt"), 3, dir / "e.repo", cfg, out, err) == exit_ok);
    CHECK(Repository::load_file(dir / "e.repo").size() == 0);
    CHECK(cmd_query(dir / "e.repo", 5, cfg, out, err) == exit_absent);
}

TEST_CASE("error exits leave no output behind") {
    TempDir dir;
    RunConfig cfg;
    std::ostringstream out, err;
    CHECK(cmd_build("primes:1000", 2, dir / "x.repo", cfg, out, err) == exit_io);  // 3 digits
    CHECK_FALSE(fs::exists(dir / "x.repo"));
    CHECK_FALSE(fs::exists(dir / "x.repo.tmp"));

    std::ofstream(dir / "junk.repo") << "not a repository\n";
    CHECK(cmd_query(dir / "junk.repo", 3, cfg, out, err) == exit_io);
    CHECK(cmd_stats(dir / "nope.repo", cfg, out, err) == exit_io);
    cfg.epsilon = -1;
    CHECK(cmd_build("primes:100", 2, dir / "y.repo", cfg, out, err) == exit_io);
}

TEST_CASE("insert and grow") {
    TempDir dir;
    RunConfig cfg;
    std::ostringstream out, err;
    REQUIRE(cmd_build("primes:50", 2, dir / "g.repo", cfg, out, err) == exit_ok);
    std::ofstream(dir / "more.txt") << "53\n59\n97\n2\n";
    CHECK(cmd_insert(dir / "g.repo", std::string(dir / "more.txt"), cfg, out, err) == exit_ok);
    CHECK(Repository::load_file(dir / "g.repo").size() == 18);
    CHECK(cmd_grow(dir / "g.repo", 5, out, err) == exit_ok);
    std::ofstream(dir / "big.txt") << "80917\n";
    CHECK(cmd_insert(dir / "g.repo", std::string(dir / "big.txt"), cfg, out, err) == exit_ok);
    CHECK(cmd_query(dir / "g.repo", 80917, cfg, out, err) == exit_ok);
    out.str("");
    CHECK(cmd_stats(dir / "g.repo", cfg, out, err) == exit_ok);
    CHECK(out.str().find("grown from 2") != std::string::npos);
    CHECK(cmd_grow(dir / "g.repo", 3, out, err) == exit_io);
}

TEST_CASE("plot") {
    TempDir dir;
    RunConfig cfg;
    std::ostringstream out, err;
    REQUIRE(cmd_build("primes:100", 2, dir / "p.repo", cfg, out, err) == exit_ok);
    REQUIRE(cmd_plot(dir / "p.repo", dir / "p.svg", out, err) == exit_ok);
    const auto svg = slurp(dir / "p.svg");
    const auto repo = Repository::load_file(dir / "p.repo");
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(count(svg, "<circle class=\"point\"") == 25);
    CHECK(count(svg, "<line class=\"plane\"") <= repo.plane_count());
    CHECK(count(svg, "<line class=\"plane\"") >= 1);
    CHECK(count(svg, "<svg") == count(svg, "</svg>"));

    // Deterministic: same inputs give the same bytes.
    REQUIRE(cmd_build("primes:100", 2, dir / "q.repo", cfg, out, err) == exit_ok);
    REQUIRE(cmd_plot(dir / "q.repo", dir / "q.svg", out, err) == exit_ok);
    CHECK(slurp(dir / "q.repo") == slurp(dir / "p.repo"));
    CHECK(slurp(dir / "q.svg") == svg);

    std::ofstream(dir / "none.txt") << "";
    REQUIRE(cmd_build(std::string(dir / "none.txt"), 2, dir / "e.repo", cfg, out, err) == exit_ok);
    REQUIRE(cmd_plot(dir / "e.repo", dir / "e.svg", out, err) == exit_ok);
    CHECK(count(slurp(dir / "e.svg"), "<circle") == 0);
    CHECK(count(slurp(dir / "e.svg"), "class=\"tick\"") == 20);

    REQUIRE(cmd_build("primes:100", 3, dir / "t.repo", cfg, out, err) == exit_ok);
    CHECK(cmd_plot(dir / "t.repo", dir / "t.svg", out, err) == exit_plot_dimension);
    CHECK_FALSE(fs::exists(dir / "t.svg"));
}

TEST_CASE("bench scenarios") {
    RunConfig cfg;
    const auto cube = run_bench("cube:300:6:2", cfg, 2);
    REQUIRE(cube.size() == 2);
    CHECK(cube[0].scenario == "cube:300:6:2");
    CHECK(cube[1].scenario == "cube:300:6:3");
    for (const auto& r : cube) {
        CHECK(r.separated);
        CHECK(r.N_f == 300);
        CHECK(r.q_total == r.q_initial + r.q_emitted);
        CHECK(r.totals().multiplications >= r.ov_lower_bound());
        const auto j = nlohmann::json::parse(r.to_json());
        CHECK(j["q_total"] == r.q_total);
    }
    const auto primes = run_bench("primes:100:2", cfg);
    CHECK(primes[0].N_f == 25);
    CHECK_THROWS_AS(run_bench("cube:10:0:1", cfg), std::invalid_argument);
    CHECK_THROWS_AS(run_bench("sphere:1:2:3", cfg), std::invalid_argument);
    CHECK_THROWS_AS(run_bench("cube:x:2:3", cfg), std::invalid_argument);
}

}  // TEST_SUITE
