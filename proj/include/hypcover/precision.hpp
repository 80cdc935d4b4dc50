#pragma once

// Working-precision tiers for computations whose error grows with the
// hyperbolic length travelled (roughly one bit lost per unit of length).

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/float128.hpp>

#include <cmath>
#include <string>

namespace hypcover {

namespace mp = boost::multiprecision;

using Float128 = mp::float128;
using Float256 = mp::number<mp::cpp_bin_float<256, mp::digit_base_2, void, std::int32_t>, mp::et_off>;
using Float512 = mp::number<mp::cpp_bin_float<512, mp::digit_base_2, void, std::int32_t>, mp::et_off>;
using Float1024 = mp::number<mp::cpp_bin_float<1024, mp::digit_base_2, void, std::int32_t>, mp::et_off>;
using BigInt = mp::cpp_int;

/// Mantissa bits needed to follow a geodesic of length L with margin.
inline int bits_for_length(double length) {
    return 64 + static_cast<int>(std::ceil(2.2 * length));
}

/// Calls f with a value-initialized scalar of the smallest tier holding `bits`.
template <class F>
decltype(auto) with_precision(int bits, F&& f) {
    if (bits <= 53) return f(double{});
    if (bits <= 113) return f(Float128{});
    if (bits <= 256) return f(Float256{});
    if (bits <= 512) return f(Float512{});
    return f(Float1024{});
}

template <class R>
R from_bigint(const BigInt& v) {
    if constexpr (std::is_same_v<R, double>)
        return static_cast<double>(v);
    else
        return R(v.str());
}

}  // namespace hypcover
