// Line-oriented text format, version 1:
//
//   hyperstore-repository 1
//   dimension <n>
//   initial_dimension <n>
//   base <b>
//   seed <s>
//   epsilon <x>
//   delta0 <x>
//   max_retries <k>
//   planes <q>
//   initial_planes <q0>
//   entries <N>
//   counter <offer|update|solve|remedy> <mults> <adds> <signs> <bit comparisons>
//   plane <saturated 0|1> <alpha_1> ... <alpha_n>        (q lines)
//   entry <value> <orientation vector hex>              (N lines)
//   end
//
// Scalars are written in shortest round-trip form, so load(save(r)) restores
// every plane coefficient bit for bit.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "hyperstore/errors.hpp"
#include "hyperstore/repository.hpp"

namespace hyperstore {

namespace {

constexpr std::string_view magic = "hyperstore-repository";
constexpr const char* counter_names[] = {"offer", "update", "solve", "remedy"};

std::string format_double(double x) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

void write_counter(std::ostream& out, const char* name, const OpCounter& c) {
    out << "counter " << name << ' ' << c.multiplications << ' ' << c.additions << ' '
        << c.sign_evaluations << ' ' << c.bit_comparisons << '\n';
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    /// Next line split on single spaces; the first token must equal `key`.
    std::vector<std::string_view> expect(std::string_view key) {
        if (!std::getline(in_, line_)) throw FormatError("unexpected end of input, expected '" +
                                                             std::string(key) + "'", line_no_ + 1);
        ++line_no_;
        if (!line_.empty() && line_.back() == '\r') line_.pop_back();
        tokens_.clear();
        std::string_view rest(line_);
        while (!rest.empty()) {
            const auto sp = rest.find(' ');
            tokens_.push_back(rest.substr(0, sp));
            if (sp == std::string_view::npos) break;
            rest.remove_prefix(sp + 1);
        }
        if (tokens_.empty() || tokens_[0] != key) fail("expected '" + std::string(key) + "'");
        return tokens_;
    }

    template <class T>
    T number(std::string_view token) const {
        T value{};
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || ptr != token.data() + token.size())
            fail("malformed number '" + std::string(token) + "'");
        return value;
    }

    template <class T>
    T single(std::string_view key) {
        const auto tokens = expect(key);
        if (tokens.size() != 2) fail("expected exactly one value after '" + std::string(key) + "'");
        return number<T>(tokens[1]);
    }

    [[noreturn]] void fail(const std::string& what) const { throw FormatError(what, line_no_); }

    std::size_t line() const noexcept { return line_no_; }

    bool trailing_content() {
        std::string extra;
        while (std::getline(in_, extra))
            if (extra.find_first_not_of(" \t\r") != std::string::npos) return true;
        return false;
    }

private:
    std::istream& in_;
    std::string line_;
    std::vector<std::string_view> tokens_;
    std::size_t line_no_ = 0;
};

}  // namespace

Repository::Repository(IntegerMapping mapping, std::size_t initial_dimension, SeparationState state)
    : mapping_(mapping), initial_dimension_(initial_dimension), state_(std::move(state)) {}

void Repository::save(std::ostream& out) const {
    if (!state_.chains().empty())
        throw std::logic_error("cannot save a repository with pending points");
    const SeparatorConfig& cfg = state_.config();
    out << magic << ' ' << format_version << '\n'
        << "dimension " << mapping_.n << '\n'
        << "initial_dimension " << initial_dimension_ << '\n'
        << "base " << mapping_.base << '\n'
        << "seed " << cfg.seed << '\n'
        << "epsilon " << format_double(cfg.epsilon) << '\n'
        << "delta0 " << format_double(cfg.delta0) << '\n'
        << "max_retries " << cfg.max_retries << '\n'
        << "planes " << state_.planes().size() << '\n'
        << "initial_planes " << state_.initial_planes() << '\n'
        << "entries " << state_.members().size() << '\n';
    const SeparatorCounters& c = state_.counters();
    write_counter(out, counter_names[0], c.offer);
    write_counter(out, counter_names[1], c.update);
    write_counter(out, counter_names[2], c.solve);
    write_counter(out, counter_names[3], c.remedy);
    for (const Plane& p : state_.planes()) {
        out << "plane " << (p.saturated ? 1 : 0);
        for (double a : p.alpha) out << ' ' << format_double(a);
        out << '\n';
    }
    for (const Member& m : state_.members()) out << "entry " << m.key << ' ' << m.ov.to_hex() << '\n';
    out << "end\n";
}

Repository Repository::load(std::istream& in) {
    LineReader r(in);
    {
        const auto header = r.expect(magic);
        if (header.size() != 2) r.fail("malformed header");
        const int version = r.number<int>(header[1]);
        if (version != format_version)
            r.fail("unsupported format version " + std::to_string(version) + " (expected " +
                   std::to_string(format_version) + ")");
    }
    IntegerMapping mapping;
    mapping.n = r.single<std::size_t>("dimension");
    const auto initial_dimension = r.single<std::size_t>("initial_dimension");
    mapping.base = r.single<unsigned>("base");
    if (mapping.n == 0 || mapping.base < 2 || initial_dimension == 0 || initial_dimension > mapping.n)
        r.fail("invalid dimension or base");

    SeparatorConfig cfg;
    cfg.seed = r.single<std::uint64_t>("seed");
    cfg.epsilon = r.single<double>("epsilon");
    cfg.delta0 = r.single<double>("delta0");
    cfg.max_retries = r.single<std::size_t>("max_retries");
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        r.fail(e.what());
    }
    const auto q = r.single<std::size_t>("planes");
    const auto q0 = r.single<std::size_t>("initial_planes");
    const auto count = r.single<std::size_t>("entries");
    if (q0 > q) r.fail("initial_planes exceeds planes");

    SeparatorCounters counters;
    OpCounter* slots[] = {&counters.offer, &counters.update, &counters.solve, &counters.remedy};
    for (std::size_t i = 0; i < 4; ++i) {
        const auto t = r.expect("counter");
        if (t.size() != 6 || t[1] != counter_names[i])
            r.fail(std::string("expected counter line for '") + counter_names[i] + "'");
        slots[i]->multiplications = r.number<std::uint64_t>(t[2]);
        slots[i]->additions = r.number<std::uint64_t>(t[3]);
        slots[i]->sign_evaluations = r.number<std::uint64_t>(t[4]);
        slots[i]->bit_comparisons = r.number<std::uint64_t>(t[5]);
    }

    std::vector<Plane> planes;
    planes.reserve(q);
    for (std::size_t j = 0; j < q; ++j) {
        const auto t = r.expect("plane");
        if (t.size() != mapping.n + 2) r.fail("plane line needs a flag and " + std::to_string(mapping.n) + " coefficients");
        Plane p;
        if (t[1] != "0" && t[1] != "1") r.fail("plane saturation flag must be 0 or 1");
        p.saturated = t[1] == "1";
        p.alpha.reserve(mapping.n);
        for (std::size_t i = 0; i < mapping.n; ++i) {
            const double a = r.number<double>(t[i + 2]);
            if (!std::isfinite(a)) r.fail("plane coefficient is not finite");
            p.alpha.push_back(a);
        }
        planes.push_back(std::move(p));
    }

    std::vector<KeyedPoint> members;
    std::vector<OrientationVector> ovs;
    members.reserve(count);
    ovs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto t = r.expect("entry");
        if (t.size() != 3) r.fail("entry line needs a value and an orientation vector");
        const auto value = r.number<std::uint64_t>(t[1]);
        if (!mapping.representable(value)) r.fail("entry value does not fit the mapping");
        OrientationVector ov;
        try {
            ov = OrientationVector::from_hex(t[2], q);
        } catch (const std::invalid_argument& e) {
            r.fail(e.what());
        }
        Point p = map_to_point(value, mapping);
        OpCounter scratch;
        try {
            if (orientation_vector(planes, p, cfg.epsilon, scratch) != ov)
                r.fail("orientation vector of " + std::to_string(value) + " does not match the planes");
        } catch (const IncidentPoint&) {
            r.fail("entry " + std::to_string(value) + " lies on a plane");
        }
        members.push_back(KeyedPoint{value, std::move(p)});
        ovs.push_back(std::move(ov));
    }
    if (r.expect("end").size() != 1) r.fail("malformed end marker");
    if (r.trailing_content()) r.fail("content after end marker");

    try {
        return Repository(mapping, initial_dimension,
                          SeparationState::restore(mapping.n, cfg, std::move(planes), q0,
                                                   std::move(members), ovs, counters));
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what(), r.line());
    }
}

void Repository::save_file(const std::filesystem::path& path) const {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        save(out);
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

Repository Repository::load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return load(in);
}

}  // namespace hyperstore
