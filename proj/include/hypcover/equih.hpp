#pragma once

// Equidistribution measurements: discrepancy of partial coverings against
// cell partitions of F, and of arc-length measure on the unit tangent
// bundle against the Liouville measure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "hypcover/error.hpp"
#include "hypcover/fundpoly.hpp"
#include "hypcover/packets.hpp"
#include "hypcover/paint.hpp"
#include "hypcover/quadrature.hpp"

namespace hypcover {

struct PartitionCell {
    Region region;
    double volume = 0;
    std::string label;
    bool cusp = false;
};

struct CellPartition {
    std::vector<PartitionCell> cells;       // pieces of the bulk
    std::vector<PartitionCell> cusp_cells;  // one per cusp zone
    double total_volume = 0;                // vol(F)
    double Y = 0;

    std::vector<const PartitionCell*> all() const {
        std::vector<const PartitionCell*> out;
        for (const auto& c : cells) out.push_back(&c);
        for (const auto& c : cusp_cells) out.push_back(&c);
        return out;
    }
    std::size_t size() const { return cells.size() + cusp_cells.size(); }

    /// Index into all() of the cell holding z, or -1.
    int locate(const HPoint& z, double eps = 1e-12) const {
        auto cs = all();
        for (std::size_t i = 0; i < cs.size(); ++i)
            if (cs[i]->region.contains(z, 0)) return static_cast<int>(i);
        for (std::size_t i = 0; i < cs.size(); ++i)
            if (cs[i]->region.contains(z, eps)) return static_cast<int>(i);
        return -1;
    }
};

/// Grid of rows by cols boxes intersected with bulk(F, Y), plus the cusp zones.
inline CellPartition default_partition(const FundamentalPolygon& F, int rows, int cols, double Y,
                                       const QuadratureOptions& q = {}) {
    if (rows < 1 || cols < 1) fail(ErrorKind::EmptyPartition, "partition needs rows, cols >= 1");
    CellPartition part;
    part.Y = Y;
    part.total_volume = F.volume();
    std::vector<CuspZone> zones;
    if (F.has_cusps()) zones = cusp_zones(F, Y);
    Region base = bulk(F, Y);
    Box box = bounding_box(F.polygon, 0);
    double top = box.y1;
    for (const auto& z : zones) {
        Constraint h = z.horoball();
        if (h.kind == Constraint::Kind::YAtLeast) top = std::max(top, h.cx);
    }
    for (int r = 0; r < rows; ++r) {
        double y0 = top * r / rows, y1 = top * (r + 1) / rows;
        for (int c = 0; c < cols; ++c) {
            double x0 = box.x0 + (box.x1 - box.x0) * c / cols;
            double x1 = box.x0 + (box.x1 - box.x0) * (c + 1) / cols;
            Region reg = base;
            if (c > 0) reg.add(Constraint::x_at_least(x0));
            if (c + 1 < cols) reg.add(Constraint::x_at_most(x1));
            if (r > 0) reg.add(Constraint::y_at_least(y0));
            if (r + 1 < rows) reg.add(Constraint::y_at_most(y1));
            double v = region_area(reg, q);
            if (v <= 1e-12) continue;
            part.cells.push_back({reg, v, "r" + std::to_string(r) + "c" + std::to_string(c), false});
        }
    }
    for (std::size_t k = 0; k < zones.size(); ++k) {
        Region reg = zone_region(F, zones[k]);
        part.cusp_cells.push_back({reg, zones[k].volume(), "cusp" + std::to_string(k), true});
    }
    return part;
}

struct TangentPartition {
    CellPartition base;
    int bins = 8;

    double liouville(std::size_t cell) const { return base.all()[cell]->volume / bins; }
};

inline TangentPartition tangent_partition(CellPartition base, int bins) {
    if (bins < 1) fail(ErrorKind::InvalidInput, "need at least one angle bin");
    return {std::move(base), bins};
}

/// max over cells of |mass of the covering in B / volume(cov) - vol(B) / vol(F)|.
inline double covering_discrepancy(const PartialCovering& cov, const CellPartition& part,
                                   const QuadratureOptions& q = {}) {
    double vc = volume(cov);
    if (!(vc > 0)) fail(ErrorKind::ZeroVolumeCovering, "covering has zero volume");
    double worst = 0;
    for (const auto* cell : part.all()) {
        double mass = 0;
        for (const auto& c : cov.cells)
            mass += region_area(Region(cell->region).add(Constraint::left_of(c.local_axis)), q);
        worst = std::max(worst, std::abs(mass / vc - cell->volume / part.total_volume));
    }
    return worst;
}

/// Per-cell masses of the covering, in all() order.
inline std::vector<double> cell_masses(const PartialCovering& cov, const CellPartition& part,
                                       const QuadratureOptions& q = {}) {
    std::vector<double> out;
    for (const auto* cell : part.all()) {
        double mass = 0;
        for (const auto& c : cov.cells)
            mass += region_area(Region(cell->region).add(Constraint::left_of(c.local_axis)), q);
        out.push_back(mass);
    }
    return out;
}

/// Unit direction of travel of g at parameter t, as an angle in [0, 2 pi).
inline double tangent_angle(const OrientedGeodesic& g, double t) {
    MoebiusMap s = to_standard(g).inverse();
    std::complex<double> w(0, std::exp(-t));
    std::complex<double> den = s.c * w + s.d;
    std::complex<double> dz = -w / (den * den);
    double phi = std::atan2(dz.imag(), dz.real());
    if (phi < 0) phi += 2 * std::numbers::pi;
    return phi;
}

struct GeodesicDiscrepancy {
    double value = 0;
    std::size_t samples = 0;
    std::size_t unlocated = 0;
};

inline GeodesicDiscrepancy geodesic_discrepancy_report(const FundamentalPolygon& F, const GeodesicPacket& packet,
                                                       const TangentPartition& tp, double step = 0.01,
                                                       const TraceOptions& opt = {}) {
    if (!(step > 0) || step > 0.05) fail(ErrorKind::InvalidInput, "sampling step must lie in (0, 0.05]");
    if (packet.empty()) fail(ErrorKind::EmptyPacket, "packet has no geodesics");
    std::size_t ncell = tp.base.size();
    std::vector<double> hist(ncell * tp.bins, 0);
    GeodesicDiscrepancy rep;
    for (const auto& g : packet.geodesics) {
        TraceResult tr = trace(F, g, opt);
        double travelled = 0, next = step / 2;
        for (const auto& c : tr.crossings) {
            double end = travelled + c.seg_length;
            for (; next < end; next += step) {
                double t = c.t_in + (next - travelled);
                HPoint z = point_at(c.local_axis, t);
                int cell = tp.base.locate(z, 1e-9);
                if (cell < 0) {
                    ++rep.unlocated;
                    continue;
                }
                double phi = tangent_angle(c.local_axis, t);
                int bin = std::min(tp.bins - 1, static_cast<int>(phi / (2 * std::numbers::pi) * tp.bins));
                hist[static_cast<std::size_t>(cell) * tp.bins + bin] += 1;
                ++rep.samples;
            }
            travelled = end;
        }
    }
    if (rep.samples == 0) fail(ErrorKind::ZeroVolumeCovering, "no samples landed in the partition");
    for (std::size_t k = 0; k < ncell; ++k)
        for (int b = 0; b < tp.bins; ++b) {
            double occ = hist[k * tp.bins + b] / static_cast<double>(rep.samples);
            double lv = tp.liouville(k) / tp.base.total_volume;
            rep.value = std::max(rep.value, std::abs(occ - lv));
        }
    return rep;
}

inline double geodesic_discrepancy(const FundamentalPolygon& F, const GeodesicPacket& packet,
                                   const TangentPartition& tp, double step = 0.01, const TraceOptions& opt = {}) {
    return geodesic_discrepancy_report(F, packet, tp, step, opt).value;
}

inline PartialCovering packet_covering(const FundamentalPolygon& F, const GeodesicPacket& packet,
                                       const TraceOptions& opt = {}) {
    if (packet.empty()) fail(ErrorKind::EmptyPacket, "packet has no geodesics");
    std::vector<PartialCovering> covs;
    for (const auto& g : packet.geodesics) covs.push_back(covering(F, g, opt));
    PartialCovering sum = covering_sum(covs);
    sum.base_label = F.group_label;
    sum.base = F.polygon;
    return sum;
}

/// volume(covering_sum over packet) / total_length(packet).
inline double volume_ratio(const GeodesicPacket& packet, const FundamentalPolygon& F) {
    if (packet.empty()) fail(ErrorKind::EmptyPacket, "packet has no geodesics");
    if (!(packet.total_length > 0)) fail(ErrorKind::ZeroVolumeCovering, "packet has zero length");
    return volume(packet_covering(F, packet)) / packet.total_length;
}

inline double volume_ratio(const PartialCovering& cov, double total_length) {
    if (!(total_length > 0)) fail(ErrorKind::EmptyPacket, "packet has zero length");
    return volume(cov) / total_length;
}

/// Fraction of the covering's mass inside the cusp zones at each height.
inline std::vector<std::pair<double, double>> cusp_decay_profile(const PartialCovering& cov,
                                                                 const FundamentalPolygon& F,
                                                                 const std::vector<double>& heights,
                                                                 const QuadratureOptions& q = {}) {
    if (!F.has_cusps()) fail(ErrorKind::NoCusps, "polygon is co-compact");
    double vc = volume(cov);
    if (!(vc > 0)) fail(ErrorKind::ZeroVolumeCovering, "covering has zero volume");
    std::vector<std::pair<double, double>> out;
    for (double Y : heights) {
        double m = 0;
        for (const auto& z : cusp_zones(F, Y)) m += cusp_mass(cov, z, q);
        out.push_back({Y, std::clamp(m / vc, 0.0, 1.0)});
    }
    return out;
}

inline std::vector<std::pair<double, double>> cusp_decay_profile(const GeodesicPacket& packet,
                                                                 const FundamentalPolygon& F,
                                                                 const std::vector<double>& heights) {
    if (!F.has_cusps()) fail(ErrorKind::NoCusps, "polygon is co-compact");
    return cusp_decay_profile(packet_covering(F, packet), F, heights);
}

}  // namespace hypcover
