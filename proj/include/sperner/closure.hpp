#pragma once

// q-closed intervals, the closure length bound mu_q(s), shortest q-closures
// and the census of closed (b, s) pairs.

#include "sperner/padic.hpp"

#include <cstdint>
#include <string>

namespace sperner {

/// L = {lo, ..., hi} inside [q-1].
struct IntervalL {
    std::int64_t lo = 1;
    std::int64_t hi = 1;

    std::int64_t size() const { return hi - lo + 1; }
    bool contains(const IntervalL& other) const { return lo <= other.lo && other.hi <= hi; }

    friend bool operator==(const IntervalL&, const IntervalL&) = default;

    std::string to_string() const
    {
        return "{" + std::to_string(lo) + ".." + std::to_string(hi) + "}";
    }
};

inline void require_in_range(const PrimePower& pp, const IntervalL& L)
{
    require(1 <= L.lo && L.lo <= L.hi && L.hi <= pp.q_small() - 1,
            "interval " + L.to_string() + " is not inside [1, q-1]");
}

/// p does not divide C(b, s) where b = hi and s = |L|.
inline bool is_q_closed(const PrimePower& pp, const IntervalL& L)
{
    require_in_range(pp, L);
    return lucas_nondivisible(pp.p(), L.hi, L.size());
}

/// Upper bound on the length of a q-closure of any interval of size s.
///
/// Uses s + max(0, q/p^j - p^{v_p(s)}): when s = q - p^{v_p(s)} the digit
/// sum in the closure argument is empty and the printed expression drops
/// below s.
inline std::int64_t mu(const PrimePower& pp, std::int64_t s)
{
    const std::int64_t q = pp.q_small();
    require(1 <= s && s <= q - 1, "mu needs 1 <= s <= q-1");
    if (s == q - 1) {
        return s;
    }
    const std::int64_t p = pp.p_small();
    const DigitVector digits = to_digits(pp, s);
    std::size_t j = 1;
    while (digits[j] == p - 1) {
        ++j;
    }
    std::int64_t q_over_pj = q;
    for (std::size_t i = 0; i < j; ++i) {
        q_over_pj /= p;
    }
    std::int64_t p_vs = 1;
    const std::uint64_t vs = vp(pp, s).value();
    for (std::uint64_t i = 0; i < vs; ++i) {
        p_vs *= p;
    }
    return s + std::max<std::int64_t>(0, q_over_pj - p_vs);
}

struct ClosureResult {
    IntervalL interval;
    std::int64_t length = 0;
};

/// Shortest q-closed superinterval of L inside [q-1]; ties go to the smallest lo.
inline ClosureResult q_closure(const PrimePower& pp, const IntervalL& L)
{
    require_in_range(pp, L);
    const std::int64_t q = pp.q_small();
    for (std::int64_t len = L.size(); len <= q - 1; ++len) {
        const std::int64_t first = std::max<std::int64_t>(1, L.hi - len + 1);
        const std::int64_t last = std::min(L.lo, q - len);
        for (std::int64_t lo = first; lo <= last; ++lo) {
            IntervalL candidate{lo, lo + len - 1};
            if (lucas_nondivisible(pp.p(), candidate.hi, len)) {
                return {candidate, len};
            }
        }
    }
    // [q-1] is always closed since C(q-1, q-1) = 1.
    throw PreconditionViolation("no q-closed superinterval of " + L.to_string());
}

struct ClosedPairCensus {
    BigInt enumerated;
    BigInt closed_form;   // (p(p+1)/2)^k - q
    BigInt printed_form;  // p^k (p-1)^k / 2^k - q, kept as metadata only
    bool agrees = false;
};

/// Number of (b, s) with 1 <= s <= b < q and p not dividing C(b, s).
inline ClosedPairCensus count_closed_pairs(const PrimePower& pp)
{
    const std::int64_t q = pp.q_small();
    ClosedPairCensus census;
    census.enumerated = 0;
    for (std::int64_t b = 1; b < q; ++b) {
        for (std::int64_t s = 1; s <= b; ++s) {
            if (lucas_nondivisible(pp.p(), b, s)) {
                ++census.enumerated;
            }
        }
    }
    const BigInt& p = pp.p();
    census.closed_form = ipow(p * (p + 1) / 2, pp.k()) - pp.q();
    census.printed_form = ipow(p * (p - 1) / 2, pp.k()) - pp.q();
    census.agrees = census.enumerated == census.closed_form;
    return census;
}

}  // namespace sperner
