#pragma once

// Brute-force number theory used to check the packet constructions.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <tuple>
#include <vector>

namespace oracle {

using Int = boost::multiprecision::cpp_int;
using Form = std::tuple<long long, long long, long long>;

inline long long isqrt(long long n) {
    long long r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline bool square(long long n) { return n >= 0 && isqrt(n) * isqrt(n) == n; }

inline bool squarefree(long long n) {
    for (long long p = 2; p * p <= n; ++p)
        if (n % (p * p) == 0) return false;
    return true;
}

inline bool fundamental(long long D) {
    if (D <= 1 || square(D)) return false;
    if (D % 4 == 1) return squarefree(D);
    if (D % 4 != 0) return false;
    long long m = D / 4;
    return (m % 4 == 2 || m % 4 == 3) && squarefree(m);
}

inline bool valid(long long D) { return D > 0 && !square(D) && (D % 4 == 0 || D % 4 == 1); }

// Reduced primitive forms: 0 < b < sqrt D and sqrt D - b < 2|a| < sqrt D + b, found by exhaustive search.
inline std::vector<Form> reduced(long long D) {
    std::vector<Form> out;
    double s = std::sqrt(static_cast<double>(D));
    for (long long b = 1; b < s; ++b) {
        if ((b * b - D) % 4 != 0) continue;
        long long ac = (b * b - D) / 4;
        for (long long a = -2 * static_cast<long long>(s) - 2; a <= 2 * static_cast<long long>(s) + 2; ++a) {
            if (a == 0 || ac % a != 0) continue;
            long long c = ac / a;
            double aa = 2.0 * std::llabs(a);
            if (!(s - b < aa && aa < s + b)) continue;
            if (std::gcd(std::gcd(std::llabs(a), b), std::llabs(c)) != 1) continue;
            out.push_back({a, b, c});
        }
    }
    return out;
}

// Neighbour of a reduced form: (a, b, c) -> (c, b', (b'^2 - D)/4c) with b' = -b mod 2|c| in (sqrt D - 2|c|, sqrt D).
inline Form neighbour(const Form& f, long long D) {
    auto [a, b, c] = f;
    long long m = 2 * std::llabs(c);
    long long r = isqrt(D);
    long long bp = r - (((r + b) % m) + m) % m;  // largest value = -b mod m, below sqrt D
    return {c, bp, (bp * bp - D) / (4 * c)};
}

// Number of cycles of reduced forms, i.e. the narrow class number of discriminant D.
inline int cycle_count(long long D) {
    auto forms = reduced(D);
    std::set<Form> seen;
    int cycles = 0;
    for (const auto& f : forms) {
        if (seen.count(f)) continue;
        ++cycles;
        Form g = f;
        for (std::size_t guard = 0; guard <= forms.size() + 1 && !seen.count(g); ++guard) {
            seen.insert(g);
            g = neighbour(g, D);
        }
    }
    return cycles;
}

// Kronecker symbol (D / n) for n > 0.
inline int kronecker(long long D, long long n) {
    int result = 1;
    while (n % 2 == 0) {
        n /= 2;
        long long r = ((D % 8) + 8) % 8;
        if (r % 2 == 0) return 0;
        if (r == 3 || r == 5) result = -result;
    }
    long long a = ((D % n) + n) % n;
    // Jacobi symbol (a / n) for odd n
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            if (n % 8 == 3 || n % 8 == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

// Minimal t, u > 0 with t^2 - D u^2 = 4: direct scan over small u, then the convergents of sqrt D.
inline std::pair<Int, Int> pell(long long D, long long scan = 200000) {
    for (long long u = 1; u <= scan; ++u) {
        long long t2 = D * u * u + 4;
        if (square(t2)) return {Int(isqrt(t2)), Int(u)};
    }
    // Any solution with u > scan has |t/u - sqrt D| < 1/(2u^2), so t/u or (t/2)/(u/2) is a convergent.
    long long r = isqrt(D);
    Int m = 0, d = 1, a = r;
    Int p0 = 1, p1 = a, q0 = 0, q1 = 1;
    std::pair<Int, Int> best{0, 0};
    for (int k = 0; k < 100000; ++k) {
        Int v = p1 * p1 - Int(D) * q1 * q1;
        if (v == 4 && (best.second == 0 || q1 < best.second)) best = {p1, q1};
        if (v == 1 && (best.second == 0 || 2 * q1 < best.second)) best = {2 * p1, 2 * q1};
        if (best.second != 0 && q1 > best.second) break;
        m = d * a - m;
        d = (Int(D) - m * m) / d;
        a = (Int(r) + m) / d;
        Int p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1;
        p1 = p2;
        q0 = q1;
        q1 = q2;
    }
    return best;
}

// Narrow class number from h+ log eps+ = -sum_{a<D} chi(a) log sin(pi a / D), for fundamental D.
inline double analytic_class_number(long long D, const Int& t, const Int& u) {
    double s = 0;
    for (long long a = 1; a < D; ++a) {
        int x = kronecker(D, a);
        if (x) s -= x * std::log(std::sin(std::numbers::pi * a / D));
    }
    double eps = std::log((t.convert_to<double>() + u.convert_to<double>() * std::sqrt(static_cast<double>(D))) / 2);
    return s / eps;
}

// Character vector of f from a value coprime to 2D, using Kronecker symbols of the prime discriminants.
inline std::vector<int> genus(const Form& f, const std::vector<long long>& pstars, long long D) {
    auto [a, b, c] = f;
    for (long long r = 1; r <= 12; ++r)
        for (long long x = -r; x <= r; ++x)
            for (long long y = -r; y <= r; ++y) {
                long long v = a * x * x + b * x * y + c * y * y;
                if (v == 0 || std::gcd(std::llabs(v), 2 * D) != 1) continue;
                std::vector<int> out;
                for (long long p : pstars) {
                    // (p* / |v|) times the sign correction for negative v
                    int k = kronecker(p, std::llabs(v));
                    if (v < 0 && p < 0) k = -k;
                    out.push_back(k);
                }
                return out;
            }
    return {};
}

}  // namespace oracle
