#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "hyperstore/cli.hpp"

using namespace hyperstore::cli;

int main(int argc, char** argv) {
    CLI::App app{"hyperstore: integer repository addressed by hyperplane sign vectors"};
    app.require_subcommand(1);

    RunConfig config;
    std::string format = "text";
    app.add_option("--seed", config.seed, "RNG seed")->capture_default_str();
    app.add_option("--epsilon", config.epsilon, "incidence tolerance")->capture_default_str();
    app.add_option("--delta0", config.delta0, "initial midpoint shift")->capture_default_str();
    app.add_option("--max-retries", config.max_retries, "shift-and-refit attempts")
        ->capture_default_str();
    app.add_option("--base", config.base, "digit radix")->capture_default_str();
    app.add_option("--format", format, "report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    std::string source, repo, spec, svg;
    std::size_t n = 0, repeat = 1;
    std::uint64_t value = 0;

    auto* build = app.add_subcommand("build", "build a repository from a list of integers");
    build->add_option("source", source, "file, primes:<limit> or random:<N>:<limit>:<seed>")
        ->required();
    build->add_option("-n,--dim", n, "dimension (digits per value)")->required();
    build->add_option("-o,--out", repo, "output repository file")->required();

    auto* insert = app.add_subcommand("insert", "add integers to a repository");
    insert->add_option("repo", repo)->required();
    insert->add_option("source", source)->required();

    auto* query = app.add_subcommand("query", "look up one integer");
    query->add_option("repo", repo)->required();
    query->add_option("value", value)->required();

    auto* stats = app.add_subcommand("stats", "show counts and bounds");
    stats->add_option("repo", repo)->required();

    auto* bench = app.add_subcommand("bench", "run a benchmark scenario");
    bench->add_option("spec", spec, "cube:<N>:<dims>:<seed> or primes:<limit>:<n>")->required();
    bench->add_option("--repeat", repeat)->capture_default_str();

    auto* plot = app.add_subcommand("plot", "draw a two-dimensional repository as SVG");
    plot->add_option("repo", repo)->required();
    plot->add_option("svg", svg)->required();

    auto* grow = app.add_subcommand("grow", "raise the dimension of a repository");
    grow->add_option("repo", repo)->required();
    grow->add_option("-n,--dim", n)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Error& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_io;
    }
    config.format = format == "json" ? ReportFormat::json_lines : ReportFormat::text;

    if (*build) return cmd_build(source, n, repo, config, std::cout, std::cerr);
    if (*insert) return cmd_insert(repo, source, config, std::cout, std::cerr);
    if (*query) return cmd_query(repo, value, config, std::cout, std::cerr);
    if (*stats) return cmd_stats(repo, config, std::cout, std::cerr);
    if (*bench) return cmd_bench(spec, repeat, config, std::cout, std::cerr);
    if (*plot) return cmd_plot(repo, svg, std::cout, std::cerr);
    if (*grow) return cmd_grow(repo, n, std::cout, std::cerr);
    return exit_io;
}
