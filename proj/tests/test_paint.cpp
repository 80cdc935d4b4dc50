#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hypcover/packets.hpp"
#include "hypcover/paint.hpp"

using namespace hypcover;

namespace {

constexpr double pi = std::numbers::pi;

double summed(const TraceResult& tr) {
    double s = 0;
    for (const auto& c : tr.crossings) s += c.seg_length;
    return s;
}

// Endpoints of each local axis, rounded and sorted, as a comparable multiset.
std::vector<std::pair<double, double>> axis_multiset(const TraceResult& tr) {
    auto key = [](const BoundaryPoint& p) { return p.infinite ? 1e300 : std::round(p.x * 1e7) / 1e7; };
    std::vector<std::pair<double, double>> out;
    for (const auto& c : tr.crossings) out.push_back({key(c.local_axis.x0), key(c.local_axis.x1)});
    std::sort(out.begin(), out.end());
    return out;
}

HPoint random_interior(const FundamentalPolygon& F, std::mt19937& rng) {
    auto box = bounding_box(F.polygon, 1.0);
    std::uniform_real_distribution<double> ux(box.x0, box.x1), uy(std::max(box.y0, 1e-3), box.y1);
    for (;;) {
        HPoint z{ux(rng), uy(rng)};
        if (locate(F.polygon, z, 1e-6) == Side::Left) return z;
    }
}

}  // namespace

TEST(ClosedGeodesic, FromIntegerMatrix) {
    auto g = ClosedGeodesic::from_int({2, 1, 5, 3}, "m");
    EXPECT_NEAR(g.length, 2 * std::acosh(2.5), 1e-14);
    EXPECT_NEAR(g.axis.x0.x, (-1 - std::sqrt(21.0)) / 10, 1e-14);
    EXPECT_THROW(ClosedGeodesic::from_int({2, 1, 1, 3}, "bad"), Error);
}

TEST(ClosedGeodesic, Opposite) {
    auto g = ClosedGeodesic::from_int({2, 1, 5, 3}, "m");
    auto o = opposite(g);
    EXPECT_NEAR(o.length, g.length, 1e-14);
    EXPECT_TRUE(same_geodesic(o.axis, g.axis.reversed(), 1e-12));
    auto oo = opposite(o);
    EXPECT_TRUE(oo.rep.approx_equal(g.rep));
    EXPECT_TRUE(same_geodesic(oo.axis, g.axis, 1e-12));
    EXPECT_TRUE(std::get<IntMatrix>(oo.exact) == std::get<IntMatrix>(g.exact));
}

TEST(Trace, TriangleGamma1Length) {
    auto F = builtin_triangle246();
    auto g1 = named_geodesic(F, "gamma1");
    auto tr = trace(F, g1);
    double want = 2 * std::log((1 + std::sqrt(3.0)) / std::sqrt(2.0));
    EXPECT_NEAR(summed(tr), want, 1e-8);
    EXPECT_NEAR(tr.total_length, want, 1e-8);
    EXPECT_FALSE(tr.crossings.empty());
    EXPECT_TRUE(tr.primitive());
}

TEST(Trace, ModularMatrixLength) {
    auto F = builtin_modular();
    auto tr = trace(F, ClosedGeodesic::from_int({2, 1, 5, 3}, "m"));
    EXPECT_NEAR(summed(tr), 2 * std::acosh(2.5), 1e-8);
    // every piece runs through the interior of F and starts where the previous one ended
    for (std::size_t i = 0; i < tr.crossings.size(); ++i) {
        const auto& c = tr.crossings[i];
        EXPECT_GT(c.seg_length, 0);
        HPoint mid = point_at(c.local_axis, (c.t_in + c.t_out) / 2);
        EXPECT_TRUE(in_closure(F, mid, 1e-9));
        const auto& n = tr.crossings[(i + 1) % tr.crossings.size()];
        HPoint exit_global = c.translate(c.exit), entry_global = n.translate(n.entry);
        auto ax = axis(MoebiusMap::make(2, 1, 5, 3));
        // consecutive pieces agree on the lift up to the deck translation
        EXPECT_NEAR(signed_sinh_distance(ax, exit_global), 0, 1e-8);
        if (i + 1 < tr.crossings.size()) EXPECT_NEAR(distance(exit_global, entry_global), 0, 1e-8);
    }
}

TEST(Trace, ConjugacyInvariance) {
    auto F = builtin_modular();
    IntMatrix m{2, 1, 5, 3};
    auto base = axis_multiset(trace(F, ClosedGeodesic::from_int(m, "m")));
    std::vector<IntMatrix> hs{{0, -1, 1, 0}, {1, 1, 0, 1}, {1, 0, 1, 1}, {2, 1, 1, 1}};
    for (const auto& h : hs) {
        auto c = h * m * h.inverse();
        auto other = axis_multiset(trace(F, ClosedGeodesic::from_int(c, "c")));
        ASSERT_EQ(other.size(), base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            EXPECT_NEAR(other[i].first, base[i].first, 1e-6);
            EXPECT_NEAR(other[i].second, base[i].second, 1e-6);
        }
    }
}

TEST(Trace, RejectsNonHyperbolic) {
    auto F = builtin_modular();
    auto g = ClosedGeodesic::from_matrix(MoebiusMap::make(2, 1, 5, 3), "m");
    g.rep = MoebiusMap::make(1, 1, 0, 1);
    g.exact = IntMatrix{1, 1, 0, 1};
    EXPECT_THROW(trace(F, g), Error);
}

TEST(Trace, PrecisionTiersAgree) {
    auto F = builtin_triangle246();
    auto g3 = named_geodesic(F, "gamma3");
    for (int bits : {53, 113, 256}) {
        TraceOptions opt;
        opt.precision_bits = bits;
        auto tr = trace(F, g3, opt);
        EXPECT_NEAR(summed(tr), g3.length, 1e-8) << bits;
        EXPECT_EQ(tr.crossings.size(), 8u) << bits;
    }
}

TEST(Covering, Gamma3Range) {
    auto F = builtin_triangle246();
    auto cov = covering(F, named_geodesic(F, "gamma3"));
    auto grid = multiplicity_grid(cov, 200, 200);
    EXPECT_EQ(grid.min_count, 3);
    EXPECT_EQ(grid.max_count, 8);
    EXPECT_GT(grid.sampled, 1000u);
}

TEST(Covering, ReciprocalGeodesicsAreConstant) {
    auto F = builtin_triangle246();
    for (const char* name : {"gamma1", "gamma2"}) {
        auto cov = covering(F, named_geodesic(F, name));
        auto grid = multiplicity_grid(cov, 150, 150);
        EXPECT_EQ(grid.min_count, grid.max_count) << name;
        double n = volume(cov) / (pi / 6);
        EXPECT_NEAR(n, std::round(n), 1e-6) << name;
        EXPECT_NEAR(n, grid.min_count, 1e-6) << name;
    }
}

TEST(Covering, BoundaryGeodesicGivesEmptyCovering) {
    auto F = builtin_triangle246();
    auto g = ClosedGeodesic::from_word(F, parse_word(F, "S*sigma*S*sigma^2"), "edge");
    EXPECT_THROW(trace(F, g), Error);
    auto cov = covering(F, g);
    EXPECT_TRUE(cov.empty());
    EXPECT_TRUE(cov.boundary_input);
    EXPECT_EQ(volume(cov), 0);
}

TEST(Covering, EmptyCovering) {
    auto F = builtin_modular();
    auto cov = empty_covering(F);
    EXPECT_EQ(multiplicity(cov, HPoint{0.2, 1.5}), 0);
    EXPECT_EQ(volume(cov), 0);
    EXPECT_TRUE(covering_sum({}).empty());
}

TEST(Covering, InversionLawPointwise) {
    auto F = builtin_triangle246();
    std::mt19937 rng(17);
    for (const char* name : {"gamma1", "gamma3"}) {
        auto g = named_geodesic(F, name);
        auto a = covering(F, g), b = covering(F, opposite(g));
        double n = (volume(a) + volume(b)) / F.volume();
        EXPECT_NEAR(n, std::round(n), 1e-6);
        int first = -1;
        for (int k = 0; k < 100; ++k) {
            HPoint z = random_interior(F, rng);
            int s = multiplicity(a, z, 1e-10) + multiplicity(b, z, 1e-10);
            if (first < 0) first = s;
            EXPECT_EQ(s, first) << name;
        }
        EXPECT_EQ(first, static_cast<int>(std::round(n)));
    }
}

TEST(Covering, SumIsAdditive) {
    auto F = builtin_triangle246();
    auto a = covering(F, named_geodesic(F, "gamma1")), b = covering(F, named_geodesic(F, "gamma3"));
    auto s = covering_sum({a, b});
    EXPECT_NEAR(volume(s), volume(a) + volume(b), 1e-12);
    std::mt19937 rng(4);
    for (int k = 0; k < 50; ++k) {
        HPoint z = random_interior(F, rng);
        EXPECT_EQ(multiplicity(s, z, 1e-10), multiplicity(a, z, 1e-10) + multiplicity(b, z, 1e-10));
    }
    auto c = covering(builtin_modular(), ClosedGeodesic::from_int({2, 1, 5, 3}, "m"));
    EXPECT_THROW(covering_sum({a, c}), Error);
}

TEST(Covering, IntegrateAgreesWithVolume) {
    auto F = builtin_modular();
    auto cov = covering(F, ClosedGeodesic::from_int({2, 1, 5, 3}, "m"));
    EXPECT_NEAR(integrate_cov(cov, [](const HPoint&) { return 1.0; }), volume(cov), 1e-7);
    auto zone = cusp_zone(F, BoundaryPoint::inf(), 2);
    double m = cusp_mass(cov, zone);
    EXPECT_GE(m, 0);
    EXPECT_LE(m, volume(cov) + 1e-12);
    // cusp mass equals the integral of the horoball indicator
    double ind = integrate_cov(cov, [](const HPoint& z) { return z.y > 2 ? 1.0 : 0.0; });
    EXPECT_NEAR(m, ind, 1e-5);
}

TEST(Covering, MultiplicityOnBoundaryThrows) {
    auto F = builtin_triangle246();
    auto cov = covering(F, named_geodesic(F, "gamma1"));
    const auto& c = cov.cells.front();
    HPoint on = point_at(c.local_axis, 0.0);
    if (in_closure(F, on, 1e-9)) {
        try {
            multiplicity(cov, on);
            FAIL() << "expected OnCellBoundary";
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::OnCellBoundary);
        }
    }
}
