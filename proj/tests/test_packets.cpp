#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "hypcover/packets.hpp"
#include "oracles.hpp"

using namespace hypcover;

TEST(Pell, SmallExamples) {
    EXPECT_EQ(pell(5), std::make_pair(BigInt(3), BigInt(1)));
    EXPECT_EQ(pell(13), std::make_pair(BigInt(11), BigInt(3)));
    EXPECT_EQ(pell(12), std::make_pair(BigInt(4), BigInt(1)));
    EXPECT_THROW(pell(9), Error);
    EXPECT_THROW(pell(7), Error);
}

TEST(Pell, MatchesBruteForce) {
    for (long long D = 2; D < 200; ++D) {
        if (!oracle::valid(D)) continue;
        auto [t, u] = pell(D);
        auto [ot, ou] = oracle::pell(D);
        EXPECT_EQ(t, ot) << D;
        EXPECT_EQ(u, ou) << D;
        EXPECT_EQ(t * t - D * u * u, 4) << D;
    }
}

TEST(Pell, LargeFundamentalUnit) {
    // D = 5460 needs the continued fraction; the oracle scan finds it directly
    auto [t, u] = pell(5460);
    auto [ot, ou] = oracle::pell(5460);
    EXPECT_EQ(t, ot);
    EXPECT_EQ(u, ou);
}

TEST(Discriminant, Classification) {
    for (long long D = 1; D < 300; ++D) {
        EXPECT_EQ(valid_discriminant(D), oracle::valid(D)) << D;
        EXPECT_EQ(is_fundamental(D), oracle::fundamental(D)) << D;
    }
}

TEST(Forms, ReducedFormsMatchExhaustiveSearch) {
    for (long long D : {5LL, 8LL, 12LL, 13LL, 40LL, 60LL, 136LL, 229LL}) {
        auto got = reduced_forms(D);
        auto want = oracle::reduced(D);
        std::set<oracle::Form> a, b(want.begin(), want.end());
        for (const auto& f : got) {
            a.insert({f.a, f.b, f.c});
            EXPECT_TRUE(f.reduced());
            EXPECT_EQ(f.disc(), D);
        }
        EXPECT_EQ(a, b) << D;
    }
}

TEST(Forms, CycleStepStaysReduced) {
    for (const auto& f : reduced_forms(229)) {
        auto g = cycle_step(f);
        EXPECT_TRUE(g.reduced());
        EXPECT_EQ(g.disc(), 229);
        auto [a, b, c] = oracle::neighbour({f.a, f.b, f.c}, 229);
        EXPECT_EQ(g.a, a);
        EXPECT_EQ(g.b, b);
        EXPECT_EQ(g.c, c);
    }
}

TEST(Forms, AutomorphFixesForm) {
    for (long long D : {5LL, 13LL, 40LL, 60LL, 205LL}) {
        auto [t, u] = pell(D);
        for (const auto& f : reduced_forms(D)) {
            IntMatrix M = automorph(f, t, u);
            EXPECT_EQ(M.det(), 1);
            EXPECT_EQ(M.trace(), t);
            auto [a, b, c] = act(f, M);
            EXPECT_EQ(a, f.a);
            EXPECT_EQ(b, f.b);
            EXPECT_EQ(c, f.c);
        }
    }
}

TEST(ClassPacket, DiscriminantFive) {
    auto p = class_packet(5);
    ASSERT_EQ(p.size(), 1u);
    ASSERT_EQ(p.forms.size(), 1u);
    auto m = std::get<IntMatrix>(p.geodesics[0].exact);
    // the class of (1, 1, -1) with automorph [[1, 1], [1, 2]]
    IntMatrix want{1, 1, 1, 2};
    auto f = QuadForm{1, 1, -1};
    bool conj = m == want || act(f, want) == std::make_tuple(BigInt(1), BigInt(1), BigInt(-1));
    EXPECT_TRUE(conj);
    EXPECT_EQ(m.trace(), 3);
    EXPECT_NEAR(p.geodesics[0].length, 2 * std::acosh(1.5), 1e-12);
    EXPECT_NEAR(p.geodesics[0].length, 1.924847, 1e-6);
}

TEST(ClassPacket, SizesMatchCycleOracle) {
    for (long long D : {5LL, 8LL, 12LL, 13LL, 40LL, 60LL, 136LL, 145LL, 229LL, 316LL}) {
        if (!oracle::fundamental(D)) continue;
        auto p = class_packet(D);
        EXPECT_EQ(static_cast<int>(p.size()), oracle::cycle_count(D)) << D;
        auto [t, u] = oracle::pell(D);
        EXPECT_NEAR(oracle::analytic_class_number(D, t, u), p.size(), 1e-6) << D;
        for (const auto& g : p.geodesics) EXPECT_NEAR(g.length, 2 * std::acosh(t.convert_to<double>() / 2), 1e-9);
    }
}

TEST(ClassPacket, Errors) {
    try {
        class_packet(12 * 4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotFundamental);
    }
    try {
        class_packet(-3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NegativeDiscriminant);
    }
    EXPECT_EQ(order_packet(48).size(), static_cast<std::size_t>(oracle::cycle_count(48)));
}

TEST(Genus, SinglePrimeHasOneGenus) {
    auto p = class_packet(5);
    auto g = genus_select(p, 5, {1});
    EXPECT_EQ(g.size(), p.size());
}

TEST(Genus, FortyHasTwoEqualGenera) {
    auto p = class_packet(40);
    auto ps = prime_discriminants(40);
    EXPECT_EQ(ps, (std::vector<long long>{8, 5}));
    auto a = genus_select(p, 40, {1, 1}), b = genus_select(p, 40, {-1, -1});
    EXPECT_EQ(a.size() + b.size(), p.size());
    EXPECT_EQ(a.size(), b.size());
    EXPECT_GT(a.size(), 0u);
    EXPECT_TRUE(genus_select(p, 40, {1, -1}).empty());
    EXPECT_TRUE(genus_select(p, 40, {-1, 1}).empty());
    EXPECT_THROW(genus_select(p, 40, {1}), Error);
}

TEST(Genus, CharactersMatchKroneckerOracle) {
    for (long long D : {40LL, 60LL, 105LL, 120LL, 136LL, 1020LL}) {
        auto p = class_packet(D);
        auto ps = prime_discriminants(D);
        long long prod = 1;
        for (long long x : ps) prod *= x;
        EXPECT_EQ(prod, D);
        for (const auto& f : p.forms) {
            auto want = oracle::genus({f.a, f.b, f.c}, ps, D);
            EXPECT_EQ(genus_of(f, D), want) << D << " " << f.str();
            int product = 1;
            for (int x : want) product *= x;
            EXPECT_EQ(product, 1);
        }
    }
}

TEST(Genus, PrincipalGenusContainsPrincipalForm) {
    for (long long D : {40LL, 60LL, 136LL, 1020LL}) {
        auto pg = principal_genus_packet(D);
        ASSERT_FALSE(pg.empty());
        auto all = class_packet(D);
        std::vector<int> plus(prime_discriminants(D).size(), 1);
        EXPECT_EQ(pg.size(), genus_select(all, D, plus).size()) << D;
        for (const auto& f : pg.forms) EXPECT_EQ(genus_of(f, D), plus);
    }
    // 5460 is not fundamental: the packet comes from the order, one class of eight
    EXPECT_FALSE(is_fundamental(5460));
    EXPECT_EQ(order_packet(5460).size(), static_cast<std::size_t>(oracle::cycle_count(5460)));
    EXPECT_EQ(principal_genus_packet(5460).size(), 1u);
}

TEST(QOrbit, Matrices) {
    auto e2 = qorbit_matrix(5, 2);
    EXPECT_EQ(std::make_tuple(e2.a, e2.b, e2.c, e2.d), std::make_tuple(2LL, 1LL, 5LL, 3LL));
    auto e3 = qorbit_matrix(5, 3);
    EXPECT_EQ(std::make_tuple(e3.a, e3.b, e3.c, e3.d), std::make_tuple(3LL, 1LL, 5LL, 2LL));
    auto e1 = qorbit_matrix(5, 1);
    EXPECT_TRUE(e1.boundary_d);
    EXPECT_EQ(e1.a * e1.d - e1.b * e1.c, 1);
    EXPECT_THROW(qorbit_matrix(6, 2), Error);
    for (long long q : {5LL, 7LL, 12LL, 29LL})
        for (long long a = 1; a < q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            auto e = qorbit_matrix(q, a);
            EXPECT_EQ(e.a * e.d - e.b * e.c, 1);
            EXPECT_EQ(e.c, q);
            EXPECT_EQ((e.a * e.d) % q, 1 % q);
        }
}

TEST(QOrbit, FullPacket) {
    auto p = qorbit_packet(5);
    EXPECT_EQ(p.label, "q5-full");
    EXPECT_EQ(p.size(), 4u);
    for (const auto& g : p.geodesics) EXPECT_GT(g.length, 0);
    auto s = qorbit_packet(5, {2, 3});
    EXPECT_EQ(s.size(), 2u);
}

TEST(TraceBall, ModularSmallTraces) {
    auto F = builtin_modular();
    auto p3 = trace_ball_packet(F, 3);
    EXPECT_EQ(static_cast<int>(p3.size()), oracle::cycle_count(5));
    for (const auto& g : p3.geodesics) EXPECT_NEAR(std::abs(g.rep.trace()), 3, 1e-12);
    auto p4 = trace_ball_packet(F, 4);
    EXPECT_EQ(static_cast<int>(p4.size()), oracle::cycle_count(5) + oracle::cycle_count(12));
}

TEST(TraceBall, TriangleContainsGamma1) {
    auto F = builtin_triangle246();
    auto p = trace_ball_packet(F, std::sqrt(6.0) + 1e-6);
    ASSERT_FALSE(p.empty());
    auto target = axis_signature(F, named_geodesic(F, "gamma1"));
    bool found = false;
    for (const auto& g : p.geodesics) found = found || same_class(axis_signature(F, g), target);
    EXPECT_TRUE(found);
}

TEST(Conjugacy, SignatureIsClassInvariant) {
    auto F = builtin_modular();
    IntMatrix m{2, 1, 5, 3}, h{1, 1, 0, 1};
    auto a = axis_signature(F, ClosedGeodesic::from_int(m, "m"));
    auto b = axis_signature(F, ClosedGeodesic::from_int(h * m * h.inverse(), "c"));
    EXPECT_TRUE(same_class(a, b));
    auto c = axis_signature(F, ClosedGeodesic::from_int({1, 1, 1, 2}, "o"));
    EXPECT_FALSE(same_class(a, c));
}

TEST(Conjugacy, ReciprocalClassPacketsAreClosedUnderInversion) {
    auto F = builtin_modular();
    auto rep = inversion_report(F, class_packet(5));
    EXPECT_TRUE(rep.closed);
    auto q = inversion_report(F, qorbit_packet(5));
    ASSERT_EQ(q.has_opposite.size(), 4u);
}

TEST(Specs, Parsing) {
    auto F = builtin_modular();
    EXPECT_EQ(packet_from_spec(F, "disc:5").size(), 1u);
    EXPECT_EQ(packet_from_spec(F, "disc:40:genus=+,+").size(), genus_select(class_packet(40), 40, {1, 1}).size());
    EXPECT_EQ(packet_from_spec(F, "qorbit:5").size(), 4u);
    EXPECT_EQ(packet_from_spec(F, "qorbit:5:2,3").size(), 2u);
    EXPECT_EQ(packet_from_spec(F, "matrices:[[2,1],[5,3]]").size(), 1u);
    EXPECT_EQ(packet_from_spec(F, "matrices:[[[2,1],[5,3]],[[1,1],[1,2]]]").size(), 2u);
    EXPECT_EQ(packet_from_spec(F, "traceball:3").size(), 1u);
    EXPECT_THROW(packet_from_spec(F, "bogus:1"), Error);
    EXPECT_THROW(packet_from_spec(F, "matrices:[[2,1],[5,4]]"), Error);
    auto T = builtin_triangle246();
    EXPECT_EQ(packet_from_spec(T, "named:gamma3").size(), 1u);
    EXPECT_EQ(packet_from_spec(T, "word:S*sigma^2").size(), 1u);
    EXPECT_THROW(packet_from_spec(T, "disc:5"), Error);
}
