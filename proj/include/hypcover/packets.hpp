#pragma once

// Packets of oriented closed geodesics: narrow class groups of indefinite
// binary quadratic forms and their genera, q-orbit matrices, and balls of
// bounded trace.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypcover/error.hpp"
#include "hypcover/fundpoly.hpp"
#include "hypcover/paint.hpp"
#include "hypcover/precision.hpp"

namespace hypcover {

/// Integral form a x^2 + b xy + c y^2.
struct QuadForm {
    long long a = 0, b = 0, c = 0;

    long long disc() const { return b * b - 4 * a * c; }
    bool primitive() const { return std::gcd(std::gcd(std::llabs(a), std::llabs(b)), std::llabs(c)) == 1; }
    long long operator()(long long x, long long y) const { return a * x * x + b * x * y + c * y * y; }

    bool reduced() const {
        long long D = disc();
        double s = std::sqrt(static_cast<double>(D));
        double aa = 2.0 * std::llabs(a);
        return b > 0 && b < s && s - b < aa && aa < s + b;
    }

    auto key() const { return std::tie(a, b, c); }
    bool operator<(const QuadForm& o) const { return key() < o.key(); }
    bool operator==(const QuadForm& o) const { return key() == o.key(); }

    std::string str() const {
        return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
    }
};

struct GeodesicPacket {
    std::vector<ClosedGeodesic> geodesics;
    std::vector<QuadForm> forms;  // parallel to geodesics for form packets
    std::string label;
    double total_length = 0;
    std::vector<std::string> warnings;

    std::size_t size() const { return geodesics.size(); }
    bool empty() const { return geodesics.empty(); }

    void add(ClosedGeodesic g) {
        total_length += g.length;
        geodesics.push_back(std::move(g));
    }
};

// --------------------------------------------------------- arithmetic

inline long long isqrt_ll(long long n) {
    long long r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline bool is_square(long long n) {
    if (n < 0) return false;
    long long r = isqrt_ll(n);
    return r * r == n;
}

inline bool valid_discriminant(long long D) {
    return D > 0 && !is_square(D) && (D % 4 == 0 || D % 4 == 1);
}

/// Fundamental discriminants: D = 1 mod 4 squarefree, or D = 4m with m = 2, 3 mod 4 squarefree.
inline bool is_fundamental(long long D) {
    if (!valid_discriminant(D)) return false;
    auto squarefree = [](long long m) {
        for (long long p = 2; p * p <= m; ++p)
            if (m % (p * p) == 0) return false;
        return true;
    };
    if (D % 4 == 1) return squarefree(D);
    long long m = D / 4;
    return (m % 4 == 2 || m % 4 == 3) && squarefree(m);
}

/// Least positive solution of t^2 - D u^2 = 4 via the continued fraction of (s + sqrt D)/2.
inline std::pair<BigInt, BigInt> pell(long long D) {
    if (!valid_discriminant(D)) fail(ErrorKind::InvalidDiscriminant, "pell needs a non-square D = 0, 1 mod 4");
    const long long r = isqrt_ll(D);
    long long s = (r - D) % 2 == 0 ? r : r - 1;
    BigInt P = s, Q = 2, Db = D, rb = r;
    BigInt p0 = 0, p1 = 1, q0 = 1, q1 = 0;
    while (true) {
        BigInt a = (P + rb) / Q;
        BigInt p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1;
        p1 = p2;
        q0 = q1;
        q1 = q2;
        BigInt t = 2 * p1 - s * q1, u = q1;
        BigInt n = t * t - Db * u * u;
        if (n == 4) return {t, u};
        if (n == -4) return {(t * t + Db * u * u) / 2, t * u};
        P = a * Q - P;
        Q = (Db - P * P) / Q;
    }
}

/// All primitive reduced forms of discriminant D, sorted.
inline std::vector<QuadForm> reduced_forms(long long D) {
    if (D <= 0) fail(ErrorKind::NegativeDiscriminant, "indefinite forms need D > 0");
    if (!valid_discriminant(D)) fail(ErrorKind::InvalidDiscriminant, "discriminant must be a non-square = 0, 1 mod 4");
    std::vector<QuadForm> out;
    double s = std::sqrt(static_cast<double>(D));
    for (long long b = 1; b < s; ++b) {
        if ((b - D) % 2 != 0) continue;
        long long ac = (b * b - D) / 4;  // negative
        long long n = -ac;
        for (long long a = 1; a <= n; ++a) {
            if (n % a) continue;
            for (long long sa : {a, -a}) {
                QuadForm f{sa, b, ac / sa};
                if (f.reduced() && f.primitive()) out.push_back(f);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Right neighbour of a reduced form in its cycle.
inline QuadForm cycle_step(const QuadForm& f) {
    long long D = f.disc();
    double s = std::sqrt(static_cast<double>(D));
    long long m = 2 * std::llabs(f.c);
    // b' = -b mod 2|c| with sqrt D - 2|c| < b' < sqrt D
    long long b = ((-f.b) % m + m) % m;
    long long top = static_cast<long long>(std::floor(s));
    b += ((top - b) / m) * m;
    while (b > s) b -= m;
    while (b + m < s) b += m;
    QuadForm g{f.c, b, (b * b - D) / (4 * f.c)};
    return g;
}

/// Reduced-form cycles; each is a narrow (proper) class.
inline std::vector<std::vector<QuadForm>> form_cycles(long long D) {
    auto forms = reduced_forms(D);
    std::set<QuadForm> left(forms.begin(), forms.end());
    std::vector<std::vector<QuadForm>> cycles;
    for (const auto& f : forms) {
        if (!left.count(f)) continue;
        std::vector<QuadForm> cyc;
        QuadForm g = f;
        do {
            cyc.push_back(g);
            left.erase(g);
            g = cycle_step(g);
        } while (!(g == f) && cyc.size() <= forms.size());
        cycles.push_back(cyc);
    }
    return cycles;
}

/// Matrix fixing the form, with trace t: [[(t - bu)/2, -cu], [au, (t + bu)/2]].
inline IntMatrix automorph(const QuadForm& f, const BigInt& t, const BigInt& u) {
    BigInt a = f.a, b = f.b, c = f.c;
    return {(t - b * u) / 2, -c * u, a * u, (t + b * u) / 2};
}

/// f transformed by M: f'(x, y) = f(Mx); equals f for automorphs.
inline std::tuple<BigInt, BigInt, BigInt> act(const QuadForm& f, const IntMatrix& M) {
    BigInt a = f.a, b = f.b, c = f.c;
    BigInt A = a * M.a * M.a + b * M.a * M.c + c * M.c * M.c;
    BigInt B = 2 * a * M.a * M.b + b * (M.a * M.d + M.b * M.c) + 2 * c * M.c * M.d;
    BigInt C = a * M.b * M.b + b * M.b * M.d + c * M.d * M.d;
    return {A, B, C};
}

// ---------------------------------------------------------- packets

namespace detail {

inline void sort_packet(GeodesicPacket& p) {
    std::vector<std::size_t> idx(p.geodesics.size());
    std::iota(idx.begin(), idx.end(), 0);
    bool forms = p.forms.size() == p.geodesics.size();
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        double ti = std::abs(p.geodesics[i].rep.trace()), tj = std::abs(p.geodesics[j].rep.trace());
        if (std::abs(ti - tj) > 1e-9 * (1 + ti)) return ti < tj;
        if (forms) return p.forms[i] < p.forms[j];
        return p.geodesics[i].label < p.geodesics[j].label;
    });
    GeodesicPacket q;
    q.label = p.label;
    q.warnings = p.warnings;
    for (auto i : idx) {
        q.add(p.geodesics[i]);
        if (forms) q.forms.push_back(p.forms[i]);
    }
    p = std::move(q);
}

inline void check_size(GeodesicPacket& p, const BigInt& t) {
    static const BigInt limit = BigInt(1) << 50;
    if (t > limit) p.warnings.push_back("trace exceeds 2^50; double matrix entries lose precision");
}

}  // namespace detail

/// One geodesic per narrow class of primitive forms of discriminant D (any order).
inline GeodesicPacket order_packet(long long D) {
    if (D <= 0) fail(ErrorKind::NegativeDiscriminant, "indefinite forms need D > 0");
    auto [t, u] = pell(D);
    GeodesicPacket p;
    p.label = "disc:" + std::to_string(D);
    detail::check_size(p, t);
    for (const auto& cyc : form_cycles(D)) {
        const QuadForm& f = cyc.front();
        p.add(ClosedGeodesic::from_int(automorph(f, t, u), "D" + std::to_string(D) + f.str()));
        p.forms.push_back(f);
    }
    detail::sort_packet(p);
    return p;
}

inline GeodesicPacket class_packet(long long D) {
    if (D <= 0) fail(ErrorKind::NegativeDiscriminant, "indefinite forms need D > 0");
    if (!is_fundamental(D)) fail(ErrorKind::NotFundamental, std::to_string(D) + " is not a fundamental discriminant");
    return order_packet(D);
}

// ------------------------------------------------------------- genera

/// Prime discriminants p* whose product is the fundamental discriminant D, by increasing prime.
inline std::vector<long long> prime_discriminants(long long D) {
    if (!is_fundamental(D)) fail(ErrorKind::NotFundamental, std::to_string(D) + " is not a fundamental discriminant");
    std::vector<long long> out;
    long long m = D;
    long long odd_part = D % 4 == 0 ? D / 4 : D;
    if (D % 4 == 0) {
        while (odd_part % 2 == 0) odd_part /= 2;
    }
    long long odd_product = 1;
    for (long long p = 3; p * p <= m || p <= m; p += 2) {
        if (m % p) continue;
        m /= p;
        long long ps = (p % 4 == 1) ? p : -p;
        out.push_back(ps);
        odd_product *= ps;
    }
    if (D % 4 == 0) out.insert(out.begin(), D / odd_product);
    return out;
}

/// Value at m (coprime to the prime) of the genus character of p*.
inline int genus_character(long long pstar, long long m) {
    auto mod = [](long long x, long long n) { return ((x % n) + n) % n; };
    if (pstar == -4) return mod(m, 4) == 1 ? 1 : -1;
    if (pstar == 8) return (mod(m, 8) == 1 || mod(m, 8) == 7) ? 1 : -1;
    if (pstar == -8) return (mod(m, 8) == 1 || mod(m, 8) == 3) ? 1 : -1;
    long long p = std::llabs(pstar);
    // Euler's criterion
    long long e = (p - 1) / 2, base = mod(m, p), r = 1;
    while (e) {
        if (e & 1) r = r * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

/// An integer represented by f and coprime to 2D.
inline long long coprime_value(const QuadForm& f, long long D) {
    auto good = [&](long long v) { return v != 0 && std::gcd(std::llabs(v), 2 * D) == 1; };
    for (long long v : {f.a, f.c, f.a + f.b + f.c, f.a - f.b + f.c})
        if (good(v)) return v;
    for (long long r = 1; r <= 10; ++r)
        for (long long x = -r; x <= r; ++x)
            for (long long y = -r; y <= r; ++y) {
                if (std::max(std::llabs(x), std::llabs(y)) != r) continue;
                long long v = f(x, y);
                if (good(v)) return v;
            }
    fail(ErrorKind::NoCoprimeValue, "no value of " + f.str() + " coprime to 2D found");
}

inline std::vector<int> genus_of(const QuadForm& f, long long D) {
    long long m = coprime_value(f, D);
    std::vector<int> out;
    for (long long ps : prime_discriminants(D)) out.push_back(genus_character(ps, m));
    return out;
}

/// Sub-packet of the classes whose genus characters equal chars.
inline GeodesicPacket genus_select(const GeodesicPacket& packet, long long D, const std::vector<int>& chars) {
    auto ps = prime_discriminants(D);
    if (chars.size() != ps.size())
        fail(ErrorKind::InvalidInput, "need " + std::to_string(ps.size()) + " genus character values");
    if (packet.forms.size() != packet.geodesics.size()) fail(ErrorKind::InvalidInput, "packet carries no forms");
    GeodesicPacket out;
    out.label = packet.label + ":genus=";
    for (std::size_t i = 0; i < chars.size(); ++i) out.label += (i ? "," : "") + std::string(chars[i] > 0 ? "+" : "-");
    for (std::size_t i = 0; i < packet.size(); ++i)
        if (genus_of(packet.forms[i], D) == chars) {
            out.add(packet.geodesics[i]);
            out.forms.push_back(packet.forms[i]);
        }
    return out;
}

namespace detail {

/// Residues mod |D| of values of f coprime to D, over a box of arguments.
inline std::set<long long> value_residues(const QuadForm& f, long long D, long long box = 12) {
    std::set<long long> out;
    for (long long x = -box; x <= box; ++x)
        for (long long y = -box; y <= box; ++y) {
            if (std::gcd(std::llabs(x), std::llabs(y)) != 1) continue;
            long long v = f(x, y);
            if (v == 0 || std::gcd(std::llabs(v), D) != 1) continue;
            out.insert(((v % D) + D) % D);
        }
    return out;
}

inline std::set<long long> generated_subgroup(const std::set<long long>& gens, long long D) {
    std::set<long long> H{1 % D};
    std::vector<long long> frontier{1 % D};
    while (!frontier.empty()) {
        long long h = frontier.back();
        frontier.pop_back();
        for (long long g : gens) {
            long long p = static_cast<long long>((static_cast<__int128>(h) * g) % D);
            if (H.insert(p).second) frontier.push_back(p);
        }
    }
    return H;
}

}  // namespace detail

/// True when f lies in the principal genus: its values coprime to D fall in the
/// subgroup of (Z/D)^x generated by values of the principal form.
inline bool principal_genus_by_values(const QuadForm& f, long long D, const std::set<long long>& H) {
    auto vals = detail::value_residues(f, D);
    if (vals.empty()) fail(ErrorKind::NoCoprimeValue, "no value of " + f.str() + " coprime to D found");
    return H.count(*vals.begin()) > 0;
}

inline std::set<long long> principal_value_group(long long D) {
    long long s = D % 2;
    QuadForm one{1, s, (s - D) / 4};
    return detail::generated_subgroup(detail::value_residues(one, D), D);
}

/// Principal genus of discriminant D; works for non-fundamental D through values.
inline GeodesicPacket principal_genus_packet(long long D) {
    GeodesicPacket all = order_packet(D);
    GeodesicPacket out;
    out.label = all.label + ":principal";
    out.warnings = all.warnings;
    auto H = principal_value_group(D);
    for (std::size_t i = 0; i < all.size(); ++i)
        if (principal_genus_by_values(all.forms[i], D, H)) {
            out.add(all.geodesics[i]);
            out.forms.push_back(all.forms[i]);
        }
    return out;
}

// ------------------------------------------------------------ q-orbits

struct QOrbitEntry {
    long long a, b, c, d;
    bool boundary_d = false;  // d = q + 1, outside the open range
};

inline QOrbitEntry qorbit_matrix(long long q, long long a) {
    if (q < 2) fail(ErrorKind::InvalidInput, "q must be at least 2");
    long long ar = ((a % q) + q) % q;
    if (std::gcd(ar, q) != 1) fail(ErrorKind::NonCoprimeResidue, std::to_string(a) + " is not a unit mod " + std::to_string(q));
    long long d = 0;
    for (long long k = 2; k <= q + 1; ++k)
        if ((ar * k) % q == 1 % q) {
            d = k;
            break;
        }
    long long aa = ar == 0 ? q : ar;
    if (aa == 1 || d == 0) d = q + 1;
    return {aa, (aa * d - 1) / q, q, d, d == q + 1};
}

/// Matrices [[a, (ad-1)/q], [q, d]] for the given residues (all units if empty).
inline GeodesicPacket qorbit_packet(long long q, std::vector<long long> residues = {}) {
    bool full = residues.empty();
    if (full)
        for (long long a = 1; a < q; ++a)
            if (std::gcd(a, q) == 1) residues.push_back(a);
    GeodesicPacket p;
    if (full) {
        p.label = "q" + std::to_string(q) + "-full";
    } else {
        p.label = "q" + std::to_string(q) + ":";
        for (std::size_t i = 0; i < residues.size(); ++i) p.label += (i ? "," : "") + std::to_string(residues[i]);
    }
    for (long long a : residues) {
        auto e = qorbit_matrix(q, a);
        if (e.boundary_d) p.warnings.push_back("a=" + std::to_string(e.a) + " uses d=q+1");
        p.add(ClosedGeodesic::from_int({e.a, e.b, e.c, e.d}, "q" + std::to_string(q) + "a" + std::to_string(e.a)));
    }
    detail::sort_packet(p);
    return p;
}

// -------------------------------------------------------- conjugacy

/// Local axes visited by one period; a conjugacy invariant as a set.
struct AxisSignature {
    double length = 0;
    std::vector<OrientedGeodesic> axes;
    bool primitive = true;
};

inline AxisSignature axis_signature(const FundamentalPolygon& F, const ClosedGeodesic& g) {
    AxisSignature s;
    auto tr = trace(F, g);
    s.length = tr.total_length;
    s.primitive = tr.primitive();
    for (const auto& c : tr.crossings) s.axes.push_back(c.local_axis);
    return s;
}

inline bool same_class(const AxisSignature& s, const AxisSignature& t, double eps = 1e-7) {
    if (std::abs(s.length - t.length) > 1e-7 * (1 + s.length)) return false;
    if (t.axes.empty() || s.axes.empty()) return false;
    for (const auto& a : s.axes)
        if (same_geodesic(a, t.axes.front(), eps)) return true;
    return false;
}

struct InversionReport {
    std::vector<bool> has_opposite;  // per member
    bool closed = true;
};

/// For each member, whether its opposite is conjugate to some member.
inline InversionReport inversion_report(const FundamentalPolygon& F, const GeodesicPacket& p) {
    InversionReport rep;
    std::vector<AxisSignature> sig;
    for (const auto& g : p.geodesics) sig.push_back(axis_signature(F, g));
    for (const auto& g : p.geodesics) {
        auto o = axis_signature(F, opposite(g));
        bool found = false;
        for (const auto& s : sig)
            if (same_class(s, o)) found = true;
        rep.has_opposite.push_back(found);
        rep.closed = rep.closed && found;
    }
    return rep;
}

// ---------------------------------------------------------- trace balls

struct TraceBallOptions {
    std::size_t max_words = 10'000'000;
    int max_word_length = 14;
};

namespace detail {

inline GeodesicPacket trace_ball_forms(double T) {
    GeodesicPacket p;
    p.label = "traceball:" + std::to_string(static_cast<long long>(std::floor(T)));
    for (long long t = 3; t <= static_cast<long long>(std::floor(T + 1e-12)); ++t) {
        long long n = t * t - 4;
        for (long long u = 1; u * u <= n; ++u) {
            if (n % (u * u)) continue;
            long long d = n / (u * u);
            if (!valid_discriminant(d)) continue;
            auto [pt, pu] = pell(d);
            if (pt != t || pu != u) continue;
            for (const auto& cyc : form_cycles(d)) {
                const auto& f = cyc.front();
                p.add(ClosedGeodesic::from_int(automorph(f, pt, pu), "t" + std::to_string(t) + "D" + std::to_string(d) + f.str()));
                p.forms.push_back(f);
            }
        }
    }
    sort_packet(p);
    return p;
}

inline GeodesicPacket trace_ball_words(const FundamentalPolygon& F, double T, const TraceBallOptions& opt) {
    GeodesicPacket p;
    p.label = "traceball:" + std::to_string(T);
    std::vector<std::pair<int, int>> gens;  // (letter, exponent) realizing each pairing element
    std::vector<MoebiusMap> gvals;
    for (const auto& sp : F.pairings) {
        const MoebiusMap& g = sp.element;
        bool dup = false;
        for (const auto& h : gvals) dup = dup || h.approx_equal(g);
        if (dup) continue;
        int letter = -1, power = 1;
        for (std::size_t i = 0; i < F.letters.size() && letter < 0; ++i) {
            if (F.letters[i].value.approx_equal(g)) letter = static_cast<int>(i), power = 1;
            else if (F.letters[i].value.inverse().approx_equal(g)) letter = static_cast<int>(i), power = -1;
        }
        if (letter < 0) continue;
        gens.push_back({letter, power});
        gvals.push_back(g);
    }
    auto key = [](const MoebiusMap& m) {
        auto r = [](double v) { return static_cast<long long>(std::llround(v * 1e6)); };
        return std::array<long long, 4>{r(m.a), r(m.b), r(m.c), r(m.d)};
    };
    struct Node {
        Word w;
        MoebiusMap m;
    };
    const double norm_cap = 16 * (T * T + 4);
    std::set<std::array<long long, 4>> seen{key(MoebiusMap())};
    std::vector<Node> level{{Word{}, MoebiusMap()}};
    std::vector<AxisSignature> found;
    std::size_t words = 0;
    for (int len = 1; len <= opt.max_word_length && !level.empty(); ++len) {
        std::vector<Node> next;
        for (const auto& nd : level) {
            for (std::size_t gi = 0; gi < gens.size(); ++gi) {
                if (++words > opt.max_words) fail(ErrorKind::BudgetExceeded, "word enumeration budget exhausted");
                MoebiusMap m = nd.m * gvals[gi];
                if (m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d > norm_cap) continue;
                if (!seen.insert(key(m)).second) continue;
                Word w = nd.w;
                if (!w.factors.empty() && w.factors.back().first == gens[gi].first)
                    w.factors.back().second += gens[gi].second;
                else
                    w.factors.push_back(gens[gi]);
                if (w.factors.back().second == 0) w.factors.pop_back();
                next.push_back({w, m});
                double tr = std::abs(m.trace());
                if (tr <= 2 + 1e-7 || tr > T + 1e-9) continue;
                ClosedGeodesic g;
                AxisSignature s;
                try {
                    g = ClosedGeodesic::from_word(F, w, to_string(F, w));
                    s = axis_signature(F, g);
                } catch (const Error&) {
                    continue;
                }
                if (!s.primitive) continue;
                bool dup = false;
                for (const auto& t : found) dup = dup || same_class(t, s);
                if (dup) continue;
                found.push_back(s);
                p.add(g);
            }
        }
        level = std::move(next);
    }
    sort_packet(p);
    return p;
}

}  // namespace detail

/// One representative per primitive hyperbolic class with |trace| <= T.
inline GeodesicPacket trace_ball_packet(const FundamentalPolygon& F, double T, const TraceBallOptions& opt = {}) {
    if (T < 3 && F.group_label == "psl2z") fail(ErrorKind::InvalidInput, "trace bound must be at least 3");
    if (F.group_label == "psl2z") return detail::trace_ball_forms(T);
    return detail::trace_ball_words(F, T, opt);
}

// ------------------------------------------------------- packet specs

/// The three geodesics of the (2,4,6) triangle group drawn in the figures.
inline ClosedGeodesic named_geodesic(const FundamentalPolygon& F, const std::string& name) {
    static const std::map<std::string, std::string> words{
        {"gamma1", "S*sigma^2"}, {"gamma2", "sigma*S*sigma^3*S"}, {"gamma3", "S*sigma^2*S*sigma^2*S*sigma"}};
    auto it = words.find(name);
    if (it == words.end()) fail(ErrorKind::InvalidInput, "unknown named geodesic '" + name + "'");
    if (F.letter_index("sigma") < 0) fail(ErrorKind::InvalidInput, name + " needs the triangle246 group");
    return ClosedGeodesic::from_word(F, parse_word(F, it->second), name);
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

inline long long parse_int(const std::string& s) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(ErrorKind::InvalidInput, "expected an integer, got '" + s + "'");
    }
}

inline IntMatrix int_matrix(const nlohmann::json& m) {
    std::vector<long long> e;
    if (m.size() == 2 && m[0].is_array())
        e = {m[0][0].get<long long>(), m[0][1].get<long long>(), m[1][0].get<long long>(), m[1][1].get<long long>()};
    else
        e = m.get<std::vector<long long>>();
    if (e.size() != 4) fail(ErrorKind::InvalidInput, "matrices are [[a,b],[c,d]] or [a,b,c,d]");
    return {e[0], e[1], e[2], e[3]};
}

inline void require_modular(const FundamentalPolygon& F, const std::string& spec) {
    if (F.group_label != "psl2z") fail(ErrorKind::InvalidInput, "packet '" + spec + "' lives in PSL2(Z)");
}

}  // namespace detail

/// Parses disc:D[:genus=+,-,...], qorbit:q[:a1,...], traceball:T, matrices:<path or inline JSON>,
/// word:<word> and named:<gamma1|gamma2|gamma3>.
inline GeodesicPacket packet_from_spec(const FundamentalPolygon& F, const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) fail(ErrorKind::InvalidInput, "packet spec '" + spec + "' has no kind");
    std::string kind = spec.substr(0, colon), rest = spec.substr(colon + 1);
    GeodesicPacket p;
    if (kind == "disc") {
        detail::require_modular(F, spec);
        auto parts = detail::split(rest, ':');
        long long D = detail::parse_int(parts[0]);
        if (parts.size() == 1) {
            p = is_fundamental(D) ? class_packet(D) : order_packet(D);
        } else {
            std::string g = parts[1];
            if (g.rfind("genus=", 0) != 0) fail(ErrorKind::InvalidInput, "expected genus=... in '" + spec + "'");
            g = g.substr(6);
            if (g == "principal") {
                p = principal_genus_packet(D);
            } else {
                std::vector<int> chars;
                for (const auto& c : detail::split(g, ',')) {
                    if (c != "+" && c != "-") fail(ErrorKind::InvalidInput, "genus characters are + or -");
                    chars.push_back(c == "+" ? 1 : -1);
                }
                p = genus_select(class_packet(D), D, chars);
            }
        }
        p.label = spec;
    } else if (kind == "qorbit") {
        detail::require_modular(F, spec);
        auto parts = detail::split(rest, ':');
        long long q = detail::parse_int(parts[0]);
        std::vector<long long> res;
        if (parts.size() > 1)
            for (const auto& a : detail::split(parts[1], ',')) res.push_back(detail::parse_int(a));
        p = qorbit_packet(q, res);
    } else if (kind == "traceball") {
        double T = 0;
        try {
            T = std::stod(rest);
        } catch (const std::exception&) {
            fail(ErrorKind::InvalidInput, "trace bound must be a number");
        }
        p = trace_ball_packet(F, T);
        p.label = spec;
    } else if (kind == "matrices") {
        nlohmann::json j;
        try {
            if (!rest.empty() && rest.front() == '[') {
                j = nlohmann::json::parse(rest);
            } else {
                std::ifstream in(rest);
                if (!in) fail(ErrorKind::InvalidInput, "cannot open matrix list " + rest);
                in >> j;
            }
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::InvalidInput, std::string("matrix list: ") + e.what());
        }
        bool single = j.is_array() && j.size() == 2 && j[0].is_array() && j[0].size() == 2 && j[0][0].is_number();
        bool flat = j.is_array() && j.size() == 4 && j[0].is_number();
        std::vector<nlohmann::json> ms;
        if (single || flat)
            ms.push_back(j);
        else
            for (const auto& m : j) ms.push_back(m);
        p.label = spec;
        for (std::size_t i = 0; i < ms.size(); ++i) {
            IntMatrix m;
            try {
                m = detail::int_matrix(ms[i]);
            } catch (const nlohmann::json::exception& e) {
                fail(ErrorKind::InvalidInput, std::string("matrix list: ") + e.what());
            }
            auto g = ClosedGeodesic::from_int(m, "m" + std::to_string(i));
            if (classify(g.rep) != MapClass::Hyperbolic) fail(ErrorKind::NotHyperbolic, "matrix " + std::to_string(i) + " is not hyperbolic");
            p.add(g);
        }
    } else if (kind == "word") {
        auto g = ClosedGeodesic::from_word(F, parse_word(F, rest), rest);
        if (classify(g.rep) != MapClass::Hyperbolic) fail(ErrorKind::NotHyperbolic, "word " + rest + " is not hyperbolic");
        p.label = spec;
        p.add(g);
    } else if (kind == "named") {
        p.label = spec;
        p.add(named_geodesic(F, rest));
    } else {
        fail(ErrorKind::InvalidInput, "unknown packet kind '" + kind + "'");
    }
    return p;
}

}  // namespace hypcover
