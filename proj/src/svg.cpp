#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "hyperstore/cli.hpp"

namespace hyperstore::cli {

namespace {

constexpr double kScale = 40.0;
constexpr double kMargin = 40.0;

struct Segment {
    double x0, y0, x1, y1;
};

// Clips 1 + a*x + b*y = 0 to [0, hi]^2 (Liang-Barsky on a long chord).
std::optional<Segment> clip(double a, double b, double hi) {
    const double norm2 = a * a + b * b;
    if (norm2 == 0) return std::nullopt;
    // Foot of the perpendicular from the origin and the line direction.
    const double px = -a / norm2, py = -b / norm2;
    const double dx = -b, dy = a;
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    auto bound = [&](double p, double d) {
        if (d == 0) return p >= 0 && p <= hi;
        double lo = (0 - p) / d, up = (hi - p) / d;
        if (lo > up) std::swap(lo, up);
        t0 = std::max(t0, lo);
        t1 = std::min(t1, up);
        return true;
    };
    if (!bound(px, dx) || !bound(py, dy) || t0 >= t1) return std::nullopt;
    return Segment{px + t0 * dx, py + t0 * dy, px + t1 * dx, py + t1 * dy};
}

std::string num(double v) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(2);
    s << v;
    return s.str();
}

}  // namespace

std::string render_svg(const Repository& repo) {
    if (repo.dimension() != 2) throw std::invalid_argument("plot needs a two-dimensional repository");
    const double hi = repo.mapping().base - 1.0;
    const double size = hi * kScale + 2 * kMargin;
    auto X = [&](double x) { return kMargin + x * kScale; };
    auto Y = [&](double y) { return size - kMargin - y * kScale; };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(size)
      << "\" height=\"" << num(size) << "\" viewBox=\"0 0 " << num(size) << ' ' << num(size)
      << "\">\n";
    o << "<g id=\"axes\" stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
      << "<line x1=\"" << num(X(0)) << "\" y1=\"" << num(Y(0)) << "\" x2=\"" << num(X(hi))
      << "\" y2=\"" << num(Y(0)) << "\"/>\n"
      << "<line x1=\"" << num(X(0)) << "\" y1=\"" << num(Y(0)) << "\" x2=\"" << num(X(0))
      << "\" y2=\"" << num(Y(hi)) << "\"/>\n";
    for (unsigned k = 0; k <= repo.mapping().base - 1; ++k) {
        o << "<line class=\"tick\" x1=\"" << num(X(k)) << "\" y1=\"" << num(Y(0)) << "\" x2=\""
          << num(X(k)) << "\" y2=\"" << num(Y(0) + 5) << "\"/>\n";
        o << "<line class=\"tick\" x1=\"" << num(X(0) - 5) << "\" y1=\"" << num(Y(k)) << "\" x2=\""
          << num(X(0)) << "\" y2=\"" << num(Y(k)) << "\"/>\n";
    }
    o << "</g>\n<g id=\"labels\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">\n";
    for (unsigned k = 0; k <= repo.mapping().base - 1; ++k) {
        o << "<text x=\"" << num(X(k)) << "\" y=\"" << num(Y(0) + 18) << "\">" << k << "</text>\n";
        o << "<text x=\"" << num(X(0) - 14) << "\" y=\"" << num(Y(k) + 3) << "\">" << k << "</text>\n";
    }
    o << "</g>\n<g id=\"planes\" stroke=\"steelblue\" stroke-width=\"1\">\n";
    for (const Plane& p : repo.state().planes()) {
        const auto seg = clip(p.alpha[0], p.alpha[1], hi);
        if (!seg) continue;
        o << "<line class=\"plane\" x1=\"" << num(X(seg->x0)) << "\" y1=\"" << num(Y(seg->y0))
          << "\" x2=\"" << num(X(seg->x1)) << "\" y2=\"" << num(Y(seg->y1)) << "\"/>\n";
    }
    o << "</g>\n<g id=\"points\" fill=\"crimson\">\n";
    auto values = repo.values();
    std::sort(values.begin(), values.end());
    for (std::uint64_t v : values) {
        const Point p = map_to_point(v, repo.mapping());
        o << "<circle class=\"point\" cx=\"" << num(X(p[0])) << "\" cy=\"" << num(Y(p[1]))
          << "\" r=\"3\"><title>" << v << "</title></circle>\n";
    }
    o << "</g>\n</svg>\n";
    return o.str();
}

}  // namespace hyperstore::cli
