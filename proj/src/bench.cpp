#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hyperstore/cli.hpp"
#include "hyperstore/oracle.hpp"
#include "hyperstore/random.hpp"
#include "json.hpp"

namespace hyperstore::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

std::uint64_t parse_uint(const std::string& s, const char* what) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument(std::string("bad ") + what + ": '" + s + "'");
    try {
        return std::stoull(s);
    } catch (const std::out_of_range&) {
        throw std::invalid_argument(std::string(what) + " out of range: '" + s + "'");
    }
}

nlohmann::json counter_json(const OpCounter& c) {
    return {{"multiplications", c.multiplications},
            {"additions", c.additions},
            {"sign_evals", c.sign_evaluations},
            {"bit_comparisons", c.bit_comparisons}};
}

}  // namespace

void RunConfig::validate() const {
    separator_config().validate();
    if (base < 2) throw std::invalid_argument("base must be at least 2");
}

SeparatorConfig RunConfig::separator_config() const {
    SeparatorConfig c;
    c.seed = seed;
    c.epsilon = epsilon;
    c.delta0 = delta0;
    c.max_retries = max_retries;
    return c;
}

double BenchReport::scale_ratio() const {
    const double scale = static_cast<double>(n) * std::pow(10.0, static_cast<double>(n) + 1);
    return static_cast<double>(totals().multiplications) / scale;
}

std::uint64_t BenchReport::ov_lower_bound() const {
    return static_cast<std::uint64_t>(N_f) * n * q_total;
}

std::string BenchReport::to_text() const {
    const OpCounter t = totals();
    std::ostringstream o;
    o << scenario << " seed=" << seed << " N_f=" << N_f << " n=" << n << " q_total=" << q_total
      << " (initial " << q_initial << ", emitted " << q_emitted << ")"
      << " mults=" << t.multiplications << " adds=" << t.additions
      << " signs=" << t.sign_evaluations << " bits=" << t.bit_comparisons
      << " ratio=" << scale_ratio() << " time=" << wall_time << "s"
      << (separated ? " separated" : " NOT-SEPARATED");
    return o.str();
}

std::string BenchReport::to_json() const {
    const OpCounter t = totals();
    nlohmann::json j = {{"scenario", scenario},
                        {"seed", seed},
                        {"N_f", N_f},
                        {"n", n},
                        {"q_total", q_total},
                        {"q_initial", q_initial},
                        {"q_emitted", q_emitted},
                        {"multiplications", t.multiplications},
                        {"additions", t.additions},
                        {"sign_evals", t.sign_evaluations},
                        {"bit_comparisons", t.bit_comparisons},
                        {"wall_time", wall_time},
                        {"separated", separated},
                        {"scale_ratio", scale_ratio()},
                        {"breakdown",
                         {{"offer", counter_json(counters.offer)},
                          {"update", counter_json(counters.update)},
                          {"solve", counter_json(counters.solve)},
                          {"remedy", counter_json(counters.remedy)}}}};
    return j.dump();
}

BenchReport make_report(std::string scenario, const SeparationState& state, double wall_time,
                        bool verify) {
    BenchReport r;
    r.scenario = std::move(scenario);
    r.seed = state.config().seed;
    r.N_f = state.members().size();
    r.n = state.dimension();
    r.q_total = state.planes().size();
    r.q_initial = state.initial_planes();
    r.q_emitted = state.emitted_planes();
    r.counters = state.counters();
    r.wall_time = wall_time;
    if (verify) {
        std::vector<Point> pts;
        pts.reserve(r.N_f);
        for (const Member& m : state.members()) pts.push_back(m.point);
        r.separated = oracle::verify_separation(pts, state.planes(), state.config().epsilon).passed();
    }
    return r;
}

std::vector<BenchReport> run_bench(const std::string& spec, const RunConfig& config,
                                   std::size_t repeat, bool verify) {
    config.validate();
    const auto parts = split(spec, ':');
    std::vector<BenchReport> reports;
    if (parts.size() == 4 && parts[0] == "cube") {
        const auto count = parse_uint(parts[1], "point count");
        const auto dims = parse_uint(parts[2], "dimension");
        const auto seed = parse_uint(parts[3], "seed");
        if (dims == 0) throw std::invalid_argument("dimension must be positive");
        for (std::size_t i = 0; i < repeat; ++i) {
            Rng rng(seed + i);
            std::vector<Point> pts(count);
            for (Point& p : pts) {
                p.coords.resize(dims);
                for (double& x : p.coords) x = rng.uniform();
            }
            RunConfig c = config;
            c.seed = seed + i;
            const auto t0 = std::chrono::steady_clock::now();
            const SeparationState st = run(pts, dims, c.separator_config());
            const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
            reports.push_back(make_report("cube:" + parts[1] + ":" + parts[2] + ":" +
                                              std::to_string(seed + i),
                                          st, dt.count(), verify));
        }
    } else if (parts.size() == 3 && parts[0] == "primes") {
        const auto limit = parse_uint(parts[1], "limit");
        const auto n = parse_uint(parts[2], "dimension");
        const auto values = oracle::primes_below(limit);
        for (std::size_t i = 0; i < repeat; ++i) {
            RunConfig c = config;
            c.seed = config.seed + i;
            const auto t0 = std::chrono::steady_clock::now();
            const Repository repo = Repository::build(values, n, c.separator_config(), config.base);
            const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
            reports.push_back(make_report(spec, repo.state(), dt.count(), verify));
        }
    } else {
        throw std::invalid_argument("unknown bench scenario '" + spec +
                                    "' (expected cube:N:dims:seed or primes:limit:n)");
    }
    return reports;
}

}  // namespace hyperstore::cli
