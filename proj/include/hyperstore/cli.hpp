#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hyperstore/counters.hpp"
#include "hyperstore/repository.hpp"
#include "hyperstore/separator.hpp"

namespace hyperstore::cli {

enum class ReportFormat { text, json_lines };

enum ExitCode : int {
    exit_ok = 0,
    exit_absent = 1,
    exit_io = 2,
    exit_algorithm = 3,
    exit_plot_dimension = 4,
};

struct RunConfig {
    std::uint64_t seed = 1;
    double epsilon = default_epsilon;
    double delta0 = 1e-4;
    std::size_t max_retries = 8;
    unsigned base = 10;
    ReportFormat format = ReportFormat::text;

    void validate() const;
    SeparatorConfig separator_config() const;
};

struct BenchReport {
    std::string scenario;
    std::uint64_t seed = 0;
    std::size_t N_f = 0;
    std::size_t n = 0;
    std::size_t q_total = 0;
    std::size_t q_initial = 0;
    std::size_t q_emitted = 0;
    SeparatorCounters counters;
    double wall_time = 0;  // seconds
    bool separated = false;

    OpCounter totals() const { return counters.total(); }
    /// Total multiplications over n * 10^(n+1).
    double scale_ratio() const;
    /// N_f * n * q_total, the orientation-vector work of a single pass.
    std::uint64_t ov_lower_bound() const;

    std::string to_text() const;
    std::string to_json() const;
};

BenchReport make_report(std::string scenario, const SeparationState& state, double wall_time,
                        bool verify);

/// `cube:<N>:<dims>:<seed>` or `primes:<limit>:<n>`. Each repetition uses
/// config.seed + i. Throws std::invalid_argument on a malformed spec.
std::vector<BenchReport> run_bench(const std::string& spec, const RunConfig& config,
                                   std::size_t repeat = 1, bool verify = true);

/// One decimal integer per line; blank lines and `#` comments are skipped.
std::vector<std::uint64_t> read_value_file(const std::filesystem::path& path);

/// A file path, `primes:<limit>` or `random:<N>:<limit>:<seed>`.
std::vector<std::uint64_t> load_values(const std::string& source);

/// SVG 1.1 drawing of a two-dimensional repository.
/// Throws std::invalid_argument unless the dimension is 2.
std::string render_svg(const Repository& repo);

/// Writes text to a sibling temporary file, then renames it over path.
void write_atomically(const std::filesystem::path& path, const std::string& text);

int cmd_build(const std::string& source, std::size_t n, const std::filesystem::path& out_path,
              const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_insert(const std::filesystem::path& repo_path, const std::string& source,
               const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_query(const std::filesystem::path& repo_path, std::uint64_t v, const RunConfig& config,
              std::ostream& out, std::ostream& err);
int cmd_stats(const std::filesystem::path& repo_path, const RunConfig& config, std::ostream& out,
              std::ostream& err);
int cmd_bench(const std::string& spec, std::size_t repeat, const RunConfig& config,
              std::ostream& out, std::ostream& err);
int cmd_plot(const std::filesystem::path& repo_path, const std::filesystem::path& svg_path,
             std::ostream& out, std::ostream& err);
int cmd_grow(const std::filesystem::path& repo_path, std::size_t n, std::ostream& out,
             std::ostream& err);

}  // namespace hyperstore::cli
