#pragma once

// Report emission: locale-independent number formatting, CSV rows, JSON
// values rounded to twelve significant digits, and SVG drawings of the
// upper half-plane.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypcover/error.hpp"
#include "hypcover/paint.hpp"

namespace hypcover {

/// Twelve significant digits in scientific notation.
inline std::string fmt12(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

/// v rounded to twelve significant digits, so JSON dumps are reproducible.
inline double round12(double v) {
    if (!std::isfinite(v)) return v;
    return std::strtod(fmt12(v).c_str(), nullptr);
}

inline nlohmann::json json_point(const ClosurePoint& p) {
    if (p.is_infinity()) return "inf";
    return nlohmann::json::array({round12(p.x), round12(p.y)});
}

inline nlohmann::json json_boundary(const BoundaryPoint& p) {
    if (p.infinite) return "inf";
    return round12(p.x);
}

inline void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::InvalidInput, "cannot write " + path);
    out << body;
}

inline void write_json(const std::string& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

inline std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        const auto& c = cells[i];
        if (c.find_first_of(",\"\n") != std::string::npos) {
            out += '"';
            for (char ch : c) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            out += '"';
        } else {
            out += c;
        }
    }
    return out + "\n";
}

// ------------------------------------------------------------------- SVG

struct SvgView {
    double x0 = -2.5, x1 = 2.5, y0 = 0, y1 = 3;
    double scale = 200;  // pixels per unit

    double px(double x) const { return (x - x0) * scale; }
    double py(double y) const { return (y1 - y) * scale; }
    double width() const { return (x1 - x0) * scale; }
    double height() const { return (y1 - y0) * scale; }
};

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

class Svg {
public:
    explicit Svg(SvgView view = {}) : v_(view) {}

    const SvgView& view() const { return v_; }

    void raw(const std::string& s) { body_ << s << "\n"; }

    void rect(double x, double y, double w, double h, const std::string& fill) {
        body_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
              << "\" fill=\"" << fill << "\"/>\n";
    }

    void text(double x, double y, const std::string& s, int size = 12) {
        body_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << size
              << "\" font-family=\"sans-serif\">" << s << "</text>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, double width = 1.5) {
        body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width) << "\" points=\"";
        for (const auto& [x, y] : pts) body_ << num(x) << "," << num(y) << " ";
        body_ << "\"/>\n";
    }

    /// Geodesic segment from p to q as a circular arc or vertical line.
    std::string segment_path(const ClosurePoint& p, const ClosurePoint& q, bool move) const {
        auto cap = [&](const ClosurePoint& z) { return z.is_infinity() ? v_.y1 + 1 : z.y; };
        std::ostringstream s;
        double ax = p.is_infinity() ? q.x : p.x, bx = q.is_infinity() ? p.x : q.x;
        if (move) s << "M " << num(v_.px(ax)) << " " << num(v_.py(cap(p))) << " ";
        if (p.is_infinity() || q.is_infinity() || std::abs(ax - bx) < 1e-12) {
            s << "L " << num(v_.px(bx)) << " " << num(v_.py(cap(q))) << " ";
            return s.str();
        }
        // circle through both points centred on the real axis
        double c = ((bx * bx + q.y * q.y) - (ax * ax + p.y * p.y)) / (2 * (bx - ax));
        double r = std::hypot(ax - c, p.y) * v_.scale;
        int sweep = bx > ax ? 1 : 0;
        s << "A " << num(r) << " " << num(r) << " 0 0 " << sweep << " " << num(v_.px(bx)) << " " << num(v_.py(q.y)) << " ";
        return s.str();
    }

    void polygon(const HPolygon& poly, const std::string& fill, const std::string& stroke, double width = 1) {
        if (poly.size() < 2) return;
        std::string d;
        std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) d += segment_path(poly.vertices[i], poly.vertices[(i + 1) % n], i == 0);
        body_ << "<path d=\"" << d << "Z\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\""
              << num(width) << "\"/>\n";
    }

    void geodesic(const OrientedGeodesic& g, const std::string& stroke, double width = 1.5) {
        auto pt = [](const BoundaryPoint& b) { return b.infinite ? ClosurePoint::infinity() : ClosurePoint::boundary(b.x); };
        body_ << "<path d=\"" << segment_path(pt(g.x0), pt(g.x1), true) << "\" fill=\"none\" stroke=\"" << stroke
              << "\" stroke-width=\"" << num(width) << "\"/>\n";
    }

    void chord(const HPoint& a, const HPoint& b, const std::string& stroke, double width = 2) {
        body_ << "<path d=\""
              << segment_path(ClosurePoint::interior(a.x, a.y), ClosurePoint::interior(b.x, b.y), true)
              << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width) << "\"/>\n";
    }

    std::string str() const {
        std::ostringstream s;
        s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        s << "<!-- hypcover 1.0 -->\n";
        s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(v_.width()) << "\" height=\""
          << num(v_.height()) << "\" viewBox=\"0 0 " << num(v_.width()) << " " << num(v_.height()) << "\">\n";
        s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        s << body_.str();
        s << "<line x1=\"0\" y1=\"" << num(v_.py(0)) << "\" x2=\"" << num(v_.width()) << "\" y2=\"" << num(v_.py(0))
          << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        s << "</svg>\n";
        return s.str();
    }

private:
    SvgView v_;
    std::ostringstream body_;
};

/// Grey level for multiplicity m on the scale [lo, hi], light to dark.
inline std::string shade(int m, int lo, int hi) {
    double t = hi > lo ? static_cast<double>(m - lo) / (hi - lo) : 0.5;
    int g = static_cast<int>(std::lround(235 - 190 * t));
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", g, g, std::min(255, g + 20));
    return buf;
}

}  // namespace hypcover
