#pragma once

// Exact p-adic arithmetic on arbitrary-precision integers: valuations,
// fixed-width base-p digit vectors, Legendre's formula, Kummer's carry count
// and the Lucas digit-domination test.

#include "sperner/integer.hpp"

#include <boost/multiprecision/integer.hpp>

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sperner {

/// p-adic valuation; v_p(0) is the explicit INFINITY state.
class Valuation {
public:
    constexpr Valuation() = default;

    static constexpr Valuation finite(std::uint64_t value) { return Valuation(value, false); }
    static constexpr Valuation infinity() { return Valuation(0, true); }

    constexpr bool is_infinite() const { return infinite_; }
    constexpr bool is_finite() const { return !infinite_; }

    std::uint64_t value() const
    {
        if (infinite_) {
            throw PreconditionViolation("value() called on an infinite valuation");
        }
        return value_;
    }

    friend constexpr bool operator==(const Valuation& a, const Valuation& b)
    {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }

    friend constexpr std::strong_ordering operator<=>(const Valuation& a, const Valuation& b)
    {
        if (a.infinite_ || b.infinite_) {
            return a.infinite_ <=> b.infinite_;
        }
        return a.value_ <=> b.value_;
    }

    friend constexpr Valuation operator+(const Valuation& a, const Valuation& b)
    {
        if (a.infinite_ || b.infinite_) {
            return infinity();
        }
        return finite(a.value_ + b.value_);
    }

    Valuation& operator+=(const Valuation& other) { return *this = *this + other; }

    std::string to_string() const { return infinite_ ? "inf" : std::to_string(value_); }

private:
    constexpr Valuation(std::uint64_t value, bool infinite) : value_(value), infinite_(infinite) {}

    std::uint64_t value_ = 0;
    bool infinite_ = false;
};

namespace detail {

inline bool miller_rabin_round(const BigInt& n, const BigInt& d, unsigned r, const BigInt& a)
{
    BigInt x = boost::multiprecision::powm(a, d, n);
    if (x == 1 || x == n - 1) {
        return true;
    }
    for (unsigned i = 1; i < r; ++i) {
        x = (x * x) % n;
        if (x == n - 1) {
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// Deterministic for n < 3.3e24 (first twelve prime bases); a strong
/// probable-prime test beyond that.
inline bool is_prime(const BigInt& n)
{
    static constexpr std::array<unsigned, 12> kBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (n < 2) {
        return false;
    }
    for (unsigned b : kBases) {
        if (n == b) {
            return true;
        }
        if (n % b == 0) {
            return false;
        }
    }
    if (n < 41 * 41) {
        return true;
    }
    BigInt d = n - 1;
    unsigned r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    return std::all_of(kBases.begin(), kBases.end(),
                       [&](unsigned a) { return detail::miller_rabin_round(n, d, r, BigInt(a)); });
}

/// q = p^k with p prime and k >= 1.
class PrimePower {
public:
    PrimePower(BigInt p, unsigned k) : p_(std::move(p)), k_(k)
    {
        require(k_ >= 1, "prime power exponent must be positive");
        require(is_prime(p_), "prime power base " + p_.str() + " is not prime");
        q_ = ipow(p_, k_);
    }

    static std::optional<PrimePower> try_from_modulus(const BigInt& q)
    {
        if (q < 2) {
            return std::nullopt;
        }
        // Smallest prime factor by trial division, then strip it completely.
        BigInt p = 0;
        for (BigInt f = 2; f * f <= q; ++f) {
            if (q % f == 0) {
                p = f;
                break;
            }
        }
        if (p == 0) {
            return PrimePower(q, 1);
        }
        BigInt rest = q;
        unsigned k = 0;
        while (rest % p == 0) {
            rest /= p;
            ++k;
        }
        if (rest != 1) {
            return std::nullopt;
        }
        return PrimePower(p, k);
    }

    static PrimePower from_modulus(const BigInt& q)
    {
        auto pp = try_from_modulus(q);
        if (!pp) {
            throw PreconditionViolation(q.str() + " is not a prime power");
        }
        return *pp;
    }

    const BigInt& p() const { return p_; }
    unsigned k() const { return k_; }
    const BigInt& q() const { return q_; }

    std::int64_t p_small() const { return to_i64(p_, "p"); }
    std::int64_t q_small() const { return to_i64(q_, "q"); }

    friend bool operator==(const PrimePower& a, const PrimePower& b)
    {
        return a.p_ == b.p_ && a.k_ == b.k_;
    }

private:
    BigInt p_;
    unsigned k_;
    BigInt q_;
};

/// Base-p digits of s, most significant first, fixed width k.
struct DigitVector {
    std::vector<BigInt> digits;

    std::size_t width() const { return digits.size(); }

    BigInt value(const BigInt& p) const
    {
        BigInt v = 0;
        for (const auto& d : digits) {
            v = v * p + d;
        }
        return v;
    }

    /// Digit i in the 1-based most-significant-first indexing (s_1, ..., s_k).
    const BigInt& operator[](std::size_t one_based) const { return digits.at(one_based - 1); }

    std::vector<BigInt> least_significant_first() const
    {
        return {digits.rbegin(), digits.rend()};
    }
};

namespace detail {

inline Valuation valuation_unchecked(const BigInt& p, BigInt n)
{
    if (n == 0) {
        return Valuation::infinity();
    }
    if (n < 0) {
        n = -n;
    }
    std::uint64_t e = 0;
    // Power-of-two primes: count trailing zero bits directly.
    if (p == 2) {
        return Valuation::finite(boost::multiprecision::lsb(n));
    }
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    return Valuation::finite(e);
}

inline void require_prime(const BigInt& p)
{
    require(is_prime(p), p.str() + " is not prime");
}

}  // namespace detail

/// Largest e with p^e | n; infinite for n = 0.
inline Valuation vp(const BigInt& p, const BigInt& n)
{
    detail::require_prime(p);
    return detail::valuation_unchecked(p, n);
}

inline Valuation vp(const PrimePower& pp, const BigInt& n)
{
    return detail::valuation_unchecked(pp.p(), n);
}

/// Legendre's formula: v_p(s!) = sum_j floor(s / p^j).
inline Valuation vp_factorial(const BigInt& p, const BigInt& s)
{
    detail::require_prime(p);
    require(s >= 0, "vp_factorial needs s >= 0");
    std::uint64_t total = 0;
    BigInt power = p;
    while (power <= s) {
        total += (s / power).convert_to<std::uint64_t>();
        power *= p;
    }
    return Valuation::finite(total);
}

/// Kummer: v_p(C(a+b, a)) is the number of carries when adding a and b in base p.
inline Valuation vp_binomial(const BigInt& p, BigInt a, BigInt b)
{
    detail::require_prime(p);
    require(a >= 0 && b >= 0, "vp_binomial needs a, b >= 0");
    std::uint64_t carries = 0;
    BigInt carry = 0;
    while (a != 0 || b != 0 || carry != 0) {
        BigInt column = a % p + b % p + carry;
        carry = column >= p ? 1 : 0;
        carries += carry.convert_to<std::uint64_t>();
        a /= p;
        b /= p;
    }
    return Valuation::finite(carries);
}

/// True iff every base-p digit of y is at most the matching digit of x,
/// i.e. p does not divide C(x, y).
inline bool lucas_nondivisible(const BigInt& p, BigInt x, BigInt y)
{
    detail::require_prime(p);
    require(x >= 0 && y >= 0, "lucas_nondivisible needs x, y >= 0");
    while (y != 0) {
        if (y % p > x % p) {
            return false;
        }
        x /= p;
        y /= p;
    }
    return true;
}

inline DigitVector to_digits(const PrimePower& pp, BigInt s)
{
    require(s >= 0 && s < pp.q(), "to_digits needs 0 <= s < q");
    DigitVector out;
    out.digits.assign(pp.k(), BigInt(0));
    for (std::size_t i = pp.k(); i-- > 0;) {
        out.digits[i] = s % pp.p();
        s /= pp.p();
    }
    return out;
}

}  // namespace sperner
