#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace sperner {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Raised when an argument violates a documented precondition.
class PreconditionViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline void require(bool condition, const std::string& message)
{
    if (!condition) {
        throw PreconditionViolation(message);
    }
}

/// Mathematical modulus: result lies in [0, |m|).
inline BigInt floor_mod(const BigInt& a, const BigInt& m)
{
    BigInt r = a % m;
    if (r < 0) {
        r += (m < 0 ? BigInt(-m) : m);
    }
    return r;
}

inline std::int64_t floor_mod(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline BigInt ipow(BigInt base, std::uint64_t exponent)
{
    BigInt result = 1;
    while (exponent != 0) {
        if (exponent & 1U) {
            result *= base;
        }
        exponent >>= 1U;
        if (exponent != 0) {
            base *= base;
        }
    }
    return result;
}

/// C(n, k) with the convention C(n, k) = 0 outside 0 <= k <= n.
inline BigInt binomial(std::int64_t n, std::int64_t k)
{
    if (n < 0 || k < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    BigInt result = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

inline std::int64_t to_i64(const BigInt& value, const char* what = "value")
{
    if (value > std::numeric_limits<std::int64_t>::max()
        || value < std::numeric_limits<std::int64_t>::min()) {
        throw PreconditionViolation(std::string(what) + " does not fit in 64 bits");
    }
    return value.convert_to<std::int64_t>();
}

inline std::string to_string(const BigInt& value) { return value.str(); }

}  // namespace sperner
