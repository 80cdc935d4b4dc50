#pragma once

// Command implementations behind the hypcover executable: configuration,
// and the trace, cover, sweep and topology reports.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypcover/bgraph.hpp"
#include "hypcover/equih.hpp"
#include "hypcover/io.hpp"
#include "hypcover/packets.hpp"
#include "hypcover/paint.hpp"

namespace hypcover {

struct PartitionSpec {
    int rows = 6;
    int cols = 4;
    double Y = 2;
    int bins = 8;
};

struct RunConfig {
    std::string group = "psl2z";
    std::vector<std::string> packets;
    PartitionSpec partition;
    std::string out = ".";
    long long seed = 0;
    double eps_side = 1e-10;
    int precision = 0;  // 0 picks the tier from the geodesic length
    int grid = 200;     // multiplicity samples per axis for cover
    double step = 0.01;
};

inline PartitionSpec parse_partition(const std::string& s) {
    auto parts = detail::split(s, ',');
    if (parts.size() != 3 && parts.size() != 4) fail(ErrorKind::InvalidInput, "partition is rows,cols,Y[,bins]");
    PartitionSpec p;
    try {
        p.rows = std::stoi(parts[0]);
        p.cols = std::stoi(parts[1]);
        p.Y = std::stod(parts[2]);
        if (parts.size() == 4) p.bins = std::stoi(parts[3]);
    } catch (const std::exception&) {
        fail(ErrorKind::InvalidInput, "partition is rows,cols,Y[,bins]");
    }
    return p;
}

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Flat key=value lines; '#' starts a comment. Repeated packet keys accumulate.
inline std::multimap<std::string, std::string> parse_config_text(const std::string& text) {
    std::multimap<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) fail(ErrorKind::InvalidInput, "config line " + std::to_string(lineno) + " has no '='");
        std::string key = trim(line.substr(0, eq));
        for (auto& ch : key)
            if (ch == '-') ch = '_';
        kv.emplace(key, trim(line.substr(eq + 1)));
    }
    return kv;
}

inline std::multimap<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::InvalidInput, "cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

/// Applies file settings; keys listed in `given` were set by flags and win.
inline void apply_config(RunConfig& cfg, const std::multimap<std::string, std::string>& kv,
                         const std::set<std::string>& given = {}) {
    auto number = [](const std::string& k, const std::string& v, auto parse) {
        try {
            return parse(v);
        } catch (const std::exception&) {
            fail(ErrorKind::InvalidInput, "config key " + k + " has a bad value '" + v + "'");
        }
    };
    std::vector<std::string> packets;
    for (const auto& [k, v] : kv) {
        if (given.count(k)) continue;
        if (k == "group") cfg.group = v;
        else if (k == "packet") packets.push_back(v);
        else if (k == "partition") cfg.partition = parse_partition(v);
        else if (k == "out") cfg.out = v;
        else if (k == "seed") cfg.seed = number(k, v, [](const std::string& s) { return std::stoll(s); });
        else if (k == "eps_side") cfg.eps_side = number(k, v, [](const std::string& s) { return std::stod(s); });
        else if (k == "precision") cfg.precision = number(k, v, [](const std::string& s) { return std::stoi(s); });
        else if (k == "grid") cfg.grid = number(k, v, [](const std::string& s) { return std::stoi(s); });
        else if (k == "step") cfg.step = number(k, v, [](const std::string& s) { return std::stod(s); });
        else fail(ErrorKind::InvalidInput, "unknown config key '" + k + "'");
    }
    if (!packets.empty()) cfg.packets = packets;
}

inline TraceOptions trace_options(const RunConfig& cfg) {
    TraceOptions o;
    o.precision_bits = cfg.precision;
    return o;
}

inline std::string out_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out);
    return (std::filesystem::path(cfg.out) / name).string();
}

inline nlohmann::json crossing_json(const Crossing& c) {
    return {{"translate", {round12(c.translate.a), round12(c.translate.b), round12(c.translate.c), round12(c.translate.d)}},
            {"local_axis", {json_boundary(c.local_axis.x0), json_boundary(c.local_axis.x1)}},
            {"entry", json_point(ClosurePoint::interior(c.entry.x, c.entry.y))},
            {"exit", json_point(ClosurePoint::interior(c.exit.x, c.exit.y))},
            {"seg_length", round12(c.seg_length)},
            {"on_boundary", c.on_boundary}};
}

/// Lift of one geodesic with the visited translates and shaded cells.
inline int cmd_trace(const RunConfig& cfg, std::ostream& err = std::cerr) {
    FundamentalPolygon F = group_by_name(cfg.group);
    if (cfg.packets.size() != 1) fail(ErrorKind::InvalidInput, "trace takes exactly one --packet");
    GeodesicPacket p = packet_from_spec(F, cfg.packets.front());
    if (p.size() != 1) fail(ErrorKind::InvalidInput, "trace needs a packet holding one geodesic");
    const ClosedGeodesic& g = p.geodesics.front();
    Svg svg;
    nlohmann::json j;
    j["group"] = F.group_label;
    j["geodesic"] = g.label;
    j["seed"] = cfg.seed;
    j["length"] = round12(g.length);
    j["axis"] = {json_boundary(g.axis.x0), json_boundary(g.axis.x1)};
    TraceResult tr;
    bool boundary = false;
    try {
        tr = trace(F, g, trace_options(cfg));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::BoundaryGeodesic) throw;
        boundary = true;
    }
    if (boundary) {
        err << "warning: geodesic runs along the boundary of F; nothing to paint\n";
        j["warning"] = "BoundaryGeodesic";
        j["crossings"] = nlohmann::json::array();
        svg.polygon(F.polygon, "none", "black", 1.5);
    } else {
        // visited translates of F with the painted cells, in half-plane coordinates
        for (std::size_t i = 0; i < tr.crossings.size(); ++i) {
            const auto& c = tr.crossings[i];
            HPolygon tile = c.translate * F.polygon;
            svg.polygon(tile, "none", "#888888", 0.8);
            if (!c.on_boundary) {
                HPolygon cell = clip_left(F.polygon, c.local_axis);
                if (cell.size() >= 3) svg.polygon(c.translate * cell, "#4a7ab5", "none", 0);
            }
        }
        for (std::size_t i = 0; i < tr.crossings.size(); ++i) {
            const auto& c = tr.crossings[i];
            svg.chord(c.translate(c.entry), c.translate(c.exit), "#c0392b", 2);
        }
        svg.geodesic(g.axis, "#e6a0a0", 0.8);
        svg.polygon(F.polygon, "none", "black", 1.5);
        j["total_length"] = round12(tr.total_length);
        j["precision_bits"] = tr.precision_bits;
        j["vertex_passages"] = tr.vertex_passages;
        auto& cs = j["crossings"] = nlohmann::json::array();
        for (const auto& c : tr.crossings) cs.push_back(crossing_json(c));
    }
    std::string stem = "trace";
    write_text(out_path(cfg, stem + ".svg"), svg.str());
    write_json(out_path(cfg, stem + ".json"), j);
    return 0;
}

/// Multiplicity heatmap, CSV grid and summary of a packet's partial covering.
inline int cmd_cover(const RunConfig& cfg, std::ostream& err = std::cerr) {
    FundamentalPolygon F = group_by_name(cfg.group);
    if (cfg.packets.empty()) fail(ErrorKind::InvalidInput, "cover needs a --packet");
    std::vector<PartialCovering> covs;
    double length = 0;
    std::string label;
    for (const auto& spec : cfg.packets) {
        GeodesicPacket p = packet_from_spec(F, spec);
        for (const auto& w : p.warnings) err << "warning: " << spec << ": " << w << "\n";
        for (const auto& g : p.geodesics) {
            covs.push_back(covering(F, g, trace_options(cfg)));
            if (covs.back().boundary_input) err << "warning: " << g.label << " runs along the boundary of F\n";
        }
        length += p.total_length;
        label += (label.empty() ? "" : "+") + spec;
    }
    PartialCovering cov = covering_sum(covs);
    cov.base = F.polygon;
    cov.base_label = F.group_label;
    MultiplicityGrid grid = multiplicity_grid(cov, cfg.grid, cfg.grid);
    Box b = grid.box;
    SvgView view;
    view.x0 = b.x0 - 0.05 * (b.x1 - b.x0);
    view.x1 = b.x1 + 0.05 * (b.x1 - b.x0) + 0.6 * (b.x1 - b.x0);
    double low = b.y1;
    for (const auto& p : F.polygon.vertices)
        if (!p.is_infinity()) low = std::min(low, p.y);
    view.y0 = std::max(0.0, low - 0.05 * (b.y1 - low));
    view.y1 = b.y1 + 0.05 * (b.y1 - low);
    view.scale = 600 / std::max(view.x1 - view.x0, view.y1 - view.y0);
    Svg svg(view);
    double cw = (b.x1 - b.x0) / grid.nx * view.scale, ch = (b.y1 - b.y0) / grid.ny * view.scale;
    std::string csv = csv_row({"i", "j", "x", "y", "multiplicity"});
    for (int jy = 0; jy < grid.ny; ++jy)
        for (int ix = 0; ix < grid.nx; ++ix) {
            int m = grid.at(ix, jy);
            if (m < 0) continue;
            double x = b.x0 + (b.x1 - b.x0) * (ix + 0.5) / grid.nx;
            double y = b.y0 + (b.y1 - b.y0) * (jy + 0.5) / grid.ny;
            csv += csv_row({std::to_string(ix), std::to_string(jy), fmt12(x), fmt12(y), std::to_string(m)});
            svg.rect(view.px(x) - cw / 2, view.py(y) - ch / 2, cw + 0.05, ch + 0.05, shade(m, grid.min_count, grid.max_count));
        }
    svg.polygon(F.polygon, "none", "black", 1.5);
    // legend with one swatch per integer level
    double lx = view.px(b.x1) + 0.15 * (b.x1 - b.x0) * view.scale, ly = 20;
    for (int m = grid.min_count; m <= grid.max_count; ++m) {
        svg.rect(lx, ly, 18, 18, shade(m, grid.min_count, grid.max_count));
        svg.text(lx + 24, ly + 14, std::to_string(m));
        ly += 22;
    }
    nlohmann::json j;
    j["group"] = F.group_label;
    j["packet"] = label;
    j["seed"] = cfg.seed;
    j["volume"] = round12(volume(cov));
    j["volume_over_area"] = round12(volume(cov) / F.volume());
    j["total_length"] = round12(length);
    j["min_mult"] = grid.min_count;
    j["max_mult"] = grid.max_count;
    j["n_cells"] = cov.cells.size();
    j["samples"] = grid.sampled;
    write_text(out_path(cfg, "cover.svg"), svg.str());
    write_text(out_path(cfg, "cover.csv"), csv);
    write_json(out_path(cfg, "cover.json"), j);
    return 0;
}

struct SweepRow {
    std::string label;
    std::string parameter;
    std::size_t size = 0;
    double total_length = 0, volume = 0, ratio = 0, cover_disc = 0, geo_disc = 0, cusp = 0;
};

inline std::string spec_parameter(const std::string& spec) {
    auto parts = detail::split(spec, ':');
    if (parts.size() >= 2 && (parts[0] == "disc" || parts[0] == "qorbit")) return parts[1];
    return "";
}

inline SweepRow sweep_row(const FundamentalPolygon& F, const std::string& spec, const CellPartition& part,
                          const TangentPartition& tp, const RunConfig& cfg) {
    GeodesicPacket p = packet_from_spec(F, spec);
    if (p.empty()) fail(ErrorKind::EmptyPacket, "packet '" + spec + "' is empty");
    SweepRow r;
    r.label = spec;
    r.parameter = spec_parameter(spec);
    r.size = p.size();
    r.total_length = p.total_length;
    PartialCovering cov = packet_covering(F, p, trace_options(cfg));
    r.volume = volume(cov);
    r.ratio = volume_ratio(cov, p.total_length);
    r.cover_disc = covering_discrepancy(cov, part);
    r.geo_disc = geodesic_discrepancy(F, p, tp, cfg.step, trace_options(cfg));
    if (F.has_cusps()) r.cusp = cusp_decay_profile(cov, F, {cfg.partition.Y}).front().second;
    return r;
}

inline std::string sweep_plot(const std::vector<SweepRow>& rows) {
    SvgView view;
    view.x0 = -0.1;
    view.x1 = std::max<double>(1, static_cast<double>(rows.size()) - 1) + 0.1;
    double top = 0;
    for (const auto& r : rows) top = std::max({top, r.cover_disc, r.geo_disc});
    view.y0 = 0;
    view.y1 = top > 0 ? top * 1.15 : 1;
    // pixel coordinates by hand so both axes use the full canvas
    const double W = 640, H = 400, m = 50;
    auto X = [&](double i) { return m + (W - 2 * m) * (i - view.x0) / (view.x1 - view.x0); };
    auto Yp = [&](double v) { return H - m - (H - 2 * m) * v / view.y1; };
    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!-- hypcover 1.0 -->\n";
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<line x1=\"" << m << "\" y1=\"" << H - m << "\" x2=\"" << W - m << "\" y2=\"" << H - m << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << H - m << "\" stroke=\"black\"/>\n";
    auto series = [&](auto get, const std::string& colour) {
        s << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < rows.size(); ++i) s << num(X(static_cast<double>(i))) << "," << num(Yp(get(rows[i]))) << " ";
        s << "\"/>\n";
    };
    series([](const SweepRow& r) { return r.cover_disc; }, "#c0392b");
    series([](const SweepRow& r) { return r.geo_disc; }, "#2c6fb7");
    for (std::size_t i = 0; i < rows.size(); ++i)
        s << "<text x=\"" << num(X(static_cast<double>(i))) << "\" y=\"" << H - m + 16
          << "\" font-size=\"10\" text-anchor=\"middle\" font-family=\"sans-serif\">"
          << (rows[i].parameter.empty() ? rows[i].label : rows[i].parameter) << "</text>\n";
    s << "<text x=\"" << m << "\" y=\"" << m - 10 << "\" font-size=\"12\" font-family=\"sans-serif\">"
      << "covering (red) and geodesic (blue) discrepancy, max " << fmt12(top) << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

/// Equidistribution report over several packets.
inline int cmd_sweep(const RunConfig& cfg, std::ostream& err = std::cerr) {
    if (cfg.packets.size() < 2) fail(ErrorKind::InvalidInput, "sweep needs at least two --packet specs");
    FundamentalPolygon F = group_by_name(cfg.group);
    CellPartition part = default_partition(F, cfg.partition.rows, cfg.partition.cols, cfg.partition.Y);
    TangentPartition tp = tangent_partition(part, cfg.partition.bins);
    std::string csv = csv_row({"packet_label", "D_or_q", "packet_size", "total_length", "volume", "volume_ratio",
                               "covering_discrepancy", "geodesic_discrepancy", "max_cusp_fraction"});
    std::vector<SweepRow> rows;
    bool failed = false;
    const std::string csv_path = out_path(cfg, "sweep.csv");
    for (const auto& spec : cfg.packets) {
        try {
            SweepRow r = sweep_row(F, spec, part, tp, cfg);
            rows.push_back(r);
            csv += csv_row({r.label, r.parameter, std::to_string(r.size), fmt12(r.total_length), fmt12(r.volume),
                            fmt12(r.ratio), fmt12(r.cover_disc), fmt12(r.geo_disc), fmt12(r.cusp)});
        } catch (const Error& e) {
            err << "error: packet " << spec << ": " << e.what() << "\n";
            failed = true;
        }
        write_text(csv_path, csv);
    }
    write_text(out_path(cfg, "sweep.svg"), sweep_plot(rows));
    return failed ? 2 : 0;
}

inline int cmd_topology(const RunConfig& cfg, std::ostream& = std::cerr) {
    FundamentalPolygon F = group_by_name(cfg.group);
    write_json(out_path(cfg, "topology.json"), topology_report(F));
    return 0;
}

}  // namespace hypcover
