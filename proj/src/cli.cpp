#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "hyperstore/cli.hpp"
#include "hyperstore/errors.hpp"
#include "hyperstore/oracle.hpp"
#include "hyperstore/random.hpp"
#include "json.hpp"

namespace hyperstore::cli {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::uint64_t parse_field(std::string_view s, const char* what) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument(std::string("bad ") + what + " '" + std::string(s) + "'");
    return v;
}

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

json ops_json(const OpCounter& c) {
    return {{"multiplications", c.multiplications},
            {"additions", c.additions},
            {"sign_evals", c.sign_evaluations},
            {"bit_comparisons", c.bit_comparisons}};
}

std::string ops_text(const OpCounter& c) {
    std::ostringstream o;
    o << "mults=" << c.multiplications << " adds=" << c.additions
      << " signs=" << c.sign_evaluations << " bits=" << c.bit_comparisons;
    return o.str();
}

// Runs a command body, mapping exceptions to exit codes.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const GeometryExhausted& e) {
        err << "error: separation failed: " << e.what() << '\n';
        return exit_algorithm;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_io;
    }
}

void print_report(const BenchReport& r, const RunConfig& config, std::ostream& out) {
    out << (config.format == ReportFormat::json_lines ? r.to_json() : r.to_text()) << '\n';
}

}  // namespace

std::vector<std::uint64_t> read_value_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<std::uint64_t> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = line;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        try {
            values.push_back(parse_field(s, "integer"));
        } catch (const std::invalid_argument& e) {
            throw FormatError(e.what(), lineno);
        }
    }
    if (in.bad()) throw std::runtime_error("failed reading " + path.string());
    return values;
}

std::vector<std::uint64_t> load_values(const std::string& source) {
    if (!std::filesystem::exists(source)) {
        if (starts_with(source, "primes:"))
            return oracle::primes_below(parse_field(std::string_view(source).substr(7), "limit"));
        if (starts_with(source, "random:")) {
            std::istringstream in(source.substr(7));
            std::string a, b, c, rest;
            if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c) ||
                std::getline(in, rest))
                throw std::invalid_argument("expected random:<N>:<limit>:<seed>");
            const auto count = parse_field(a, "count");
            const auto limit = parse_field(b, "limit");
            const auto seed = parse_field(c, "seed");
            if (count > limit) throw std::invalid_argument("random: N exceeds limit");
            // Distinct values, in draw order.
            Rng rng(seed);
            std::unordered_set<std::uint64_t> seen;
            std::vector<std::uint64_t> values;
            while (values.size() < count) {
                const auto v = rng.below(limit);
                if (seen.insert(v).second) values.push_back(v);
            }
            return values;
        }
    }
    return read_value_file(source);
}

void write_atomically(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << text;
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

int cmd_build(const std::string& source, std::size_t n, const std::filesystem::path& out_path,
              const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        config.validate();
        const auto raw = load_values(source);
        std::vector<std::uint64_t> values;
        std::vector<std::uint64_t> duplicates;
        std::unordered_set<std::uint64_t> seen;
        for (std::uint64_t v : raw) (seen.insert(v).second ? values : duplicates).push_back(v);

        const auto t0 = std::chrono::steady_clock::now();
        const Repository repo = Repository::build(values, n, config.separator_config(), config.base);
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        repo.save_file(out_path);

        const BenchReport r = make_report(source, repo.state(), dt.count(), true);
        if (config.format == ReportFormat::json_lines) {
            json j = json::parse(r.to_json());
            j["duplicates"] = duplicates;
            j["output"] = out_path.string();
            out << j.dump() << '\n';
        } else {
            out << r.to_text() << '\n';
            if (!duplicates.empty()) {
                out << "duplicates skipped: " << duplicates.size() << " (";
                for (std::size_t i = 0; i < duplicates.size() && i < 10; ++i)
                    out << (i ? " " : "") << duplicates[i];
                out << (duplicates.size() > 10 ? " ...)" : ")") << '\n';
            }
            out << "wrote " << out_path.string() << '\n';
        }
        return r.separated ? int{exit_ok} : int{exit_algorithm};
    });
}

int cmd_insert(const std::filesystem::path& repo_path, const std::string& source,
               const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Repository repo = Repository::load_file(repo_path);
        const auto values = load_values(source);
        const InsertReport rep = repo.insert(values);
        repo.save_file(repo_path);
        if (config.format == ReportFormat::json_lines) {
            out << json{{"inserted", rep.inserted},
                        {"duplicates", rep.duplicates},
                        {"planes_before", rep.planes_before},
                        {"planes_after", rep.planes_after},
                        {"N_f", repo.size()}}
                       .dump()
                << '\n';
        } else {
            out << "inserted " << rep.inserted << ", skipped " << rep.duplicates.size()
                << " already stored; planes " << rep.planes_before << " -> " << rep.planes_after
                << "; N_f=" << repo.size() << '\n';
        }
        return int{exit_ok};
    });
}

int cmd_query(const std::filesystem::path& repo_path, std::uint64_t v, const RunConfig& config,
              std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Repository repo = Repository::load_file(repo_path);
        const QueryResult r = repo.query(v);
        const char* reason = r.reason == AbsentReason::new_quadrant         ? "new_quadrant"
                             : r.reason == AbsentReason::coordinate_mismatch ? "coordinate_mismatch"
                                                                             : "none";
        if (config.format == ReportFormat::json_lines) {
            json j = {{"value", v},
                      {"found", r.found},
                      {"reason", reason},
                      {"ops", ops_json(r.ops)}};
            if (r.quadrant_owner) j["quadrant_owner"] = *r.quadrant_owner;
            out << j.dump() << '\n';
        } else if (r.found) {
            out << "found " << v << "\nops: " << ops_text(r.ops) << '\n';
        } else {
            out << "absent " << v << " (" << reason;
            if (r.quadrant_owner) out << ", quadrant held by " << *r.quadrant_owner;
            out << ")\nops: " << ops_text(r.ops) << '\n';
        }
        return r.found ? int{exit_ok} : int{exit_absent};
    });
}

int cmd_stats(const std::filesystem::path& repo_path, const RunConfig& config, std::ostream& out,
              std::ostream& err) {
    return guarded(err, [&] {
        const Repository repo = Repository::load_file(repo_path);
        const SeparationState& st = repo.state();
        const std::size_t n = repo.dimension();
        const std::size_t n0 = repo.initial_dimension();
        const std::size_t q = repo.plane_count();
        const std::size_t q0 = st.initial_planes();
        const unsigned base = repo.mapping().base;
        const OpCounter total = st.counters().total();

        const std::size_t hard_bound = (base - 1) * n + q0;
        const bool hard_ok = q <= hard_bound;
        const bool soft_ok = q <= 10 * n;
        // Every stored point was classified by at least q planes of width >= n0.
        const std::uint64_t ov_floor = static_cast<std::uint64_t>(repo.size()) * n0 * q;
        const bool counters_ok = total.multiplications >= ov_floor;
        const double density = std::pow(static_cast<double>(base), static_cast<double>(n)) / n;

        if (config.format == ReportFormat::json_lines) {
            out << json{{"N_f", repo.size()},
                        {"n", n},
                        {"initial_n", n0},
                        {"base", base},
                        {"q_total", q},
                        {"q_initial", q0},
                        {"q_emitted", st.emitted_planes()},
                        {"counters",
                         {{"offer", ops_json(st.counters().offer)},
                          {"update", ops_json(st.counters().update)},
                          {"solve", ops_json(st.counters().solve)},
                          {"remedy", ops_json(st.counters().remedy)},
                          {"total", ops_json(total)}}},
                        {"q_bound_10n", 10 * n},
                        {"q_bound_10n_ok", soft_ok},
                        {"q_hard_bound", hard_bound},
                        {"q_hard_bound_ok", hard_ok},
                        {"N_f_reference", density},
                        {"ov_work_floor", ov_floor},
                        {"counters_consistent", counters_ok}}
                       .dump()
                << '\n';
        } else {
            out << "N_f          " << repo.size() << '\n';
            out << "dimension    " << n;
            if (n != n0) out << " (grown from " << n0 << ")";
            out << "\nbase         " << base << '\n';
            out << "planes       " << q << " (initial " << q0 << ", emitted " << st.emitted_planes()
                << ")\n";
            out << "offer        " << ops_text(st.counters().offer) << '\n';
            out << "update       " << ops_text(st.counters().update) << '\n';
            out << "solve        " << ops_text(st.counters().solve) << '\n';
            out << "remedy       " << ops_text(st.counters().remedy) << '\n';
            out << "total        " << ops_text(total) << '\n';
            out << "q <= 10n     " << q << " <= " << 10 * n << (soft_ok ? "  ok" : "  exceeded")
                << '\n';
            out << "q hard bound " << q << " <= " << hard_bound << (hard_ok ? "  ok" : "  VIOLATED")
                << '\n';
            out << "N_f vs b^n/n " << repo.size() << " vs " << density << '\n';
            out << "mults floor  " << total.multiplications << " >= " << ov_floor
                << (counters_ok ? "  ok" : "  INCONSISTENT") << '\n';
        }
        return int{exit_ok};
    });
}

int cmd_bench(const std::string& spec, std::size_t repeat, const RunConfig& config,
              std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto reports = run_bench(spec, config, repeat);
        bool ok = true;
        for (const BenchReport& r : reports) {
            print_report(r, config, out);
            ok = ok && r.separated;
        }
        return ok ? int{exit_ok} : int{exit_algorithm};
    });
}

int cmd_plot(const std::filesystem::path& repo_path, const std::filesystem::path& svg_path,
             std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Repository repo = Repository::load_file(repo_path);
        if (repo.dimension() != 2) {
            err << "error: plot needs a two-dimensional repository (this one has n="
                << repo.dimension() << ")\n";
            return int{exit_plot_dimension};
        }
        write_atomically(svg_path, render_svg(repo));
        out << "wrote " << svg_path.string() << " (" << repo.size() << " points, "
            << repo.plane_count() << " lines)\n";
        return int{exit_ok};
    });
}

int cmd_grow(const std::filesystem::path& repo_path, std::size_t n, std::ostream& out,
             std::ostream& err) {
    return guarded(err, [&] {
        Repository repo = Repository::load_file(repo_path);
        const std::size_t old = repo.dimension();
        repo.grow_dimension(n);
        repo.save_file(repo_path);
        out << "dimension " << old << " -> " << n << '\n';
        return int{exit_ok};
    });
}

}  // namespace hyperstore::cli
