#pragma once

// p-adically separating polynomials of the form lead * prod (y - r).

#include "sperner/padic.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sperner {

struct FactoredIntPoly {
    BigInt lead = 1;
    std::vector<BigInt> roots;

    std::size_t degree() const { return roots.size(); }

    BigInt evaluate(const BigInt& y) const
    {
        BigInt value = lead;
        for (const auto& r : roots) {
            value *= y - r;
        }
        return value;
    }

    std::string to_string() const
    {
        std::string out = lead == 1 ? "" : (lead == -1 ? "-" : lead.str() + "*");
        if (roots.empty()) {
            return lead.str();
        }
        for (std::size_t i = 0; i < roots.size(); ++i) {
            if (i != 0) {
                out += "*";
            }
            const BigInt& r = roots[i];
            out += r < 0 ? "(y+" + BigInt(-r).str() + ")" : (r == 0 ? "y" : "(y-" + r.str() + ")");
        }
        return out;
    }
};

namespace detail {

using JointKey = std::vector<BigInt>;

inline std::uint64_t joint_valuation_rec(const BigInt& p, JointKey D, std::map<JointKey, std::uint64_t>& memo)
{
    if (D.size() <= 1) {
        return 0;
    }
    std::sort(D.begin(), D.end());
    if (D.front() == D.back()) {
        return 0;
    }
    const BigInt shift = D.front();
    for (auto& d : D) {
        d -= shift;
    }
    if (auto it = memo.find(D); it != memo.end()) {
        return it->second;
    }
    // With t chosen in class c mod p, only the members of D_c keep a factor p.
    // Any empty class gives 0, so the recursion only descends when all p
    // classes are occupied, which strictly shrinks each branch.
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    if (p > static_cast<unsigned>(D.size())) {
        best = 0;
    }
    else {
        const std::int64_t ps = p.convert_to<std::int64_t>();
        std::vector<JointKey> classes(static_cast<std::size_t>(ps));
        for (const auto& d : D) {
            classes[static_cast<std::size_t>((d % p).convert_to<std::int64_t>())].push_back(d);
        }
        for (std::int64_t c = 0; c < ps && best != 0; ++c) {
            auto& Dc = classes[static_cast<std::size_t>(c)];
            if (Dc.empty()) {
                best = 0;
                break;
            }
            for (auto& d : Dc) {
                d = (d - c) / p;
            }
            const std::uint64_t size = Dc.size();
            best = std::min(best, size + joint_valuation_rec(p, std::move(Dc), memo));
        }
    }
    memo.emplace(std::move(D), best);
    return best;
}

}  // namespace detail

/// min over t in Z of sum_{d in D} v_p(t - d).
inline std::uint64_t min_joint_valuation(const BigInt& p, std::vector<BigInt> D)
{
    std::map<detail::JointKey, std::uint64_t> memo;
    return detail::joint_valuation_rec(p, std::move(D), memo);
}

/// min over u = residue (mod q) of v_p(g(u)). Always finite for nonzero g.
inline Valuation min_valuation_over_class(const PrimePower& pp, const FactoredIntPoly& g, const BigInt& residue)
{
    require(g.lead != 0, "polynomial must be nonzero");
    const BigInt& q = pp.q();
    const BigInt res = floor_mod(residue, q);
    Valuation total = vp(pp, g.lead);
    std::vector<BigInt> in_class;
    for (const auto& r : g.roots) {
        const BigInt diff = res - r;
        if (floor_mod(diff, q) == 0) {
            in_class.push_back((r - res) / q);
        }
        else {
            total += vp(pp, diff);
        }
    }
    total += Valuation::finite(in_class.size() * pp.k());
    total += Valuation::finite(min_joint_valuation(pp.p(), std::move(in_class)));
    return total;
}

struct SeparationReport {
    bool separates = false;
    Valuation v0;
    std::map<std::int64_t, Valuation> class_minima;
    bool shifted_minus_ok = false;
    bool shifted_plus_ok = false;

    bool any_shift_ok() const { return shifted_minus_ok || shifted_plus_ok; }
};

inline std::vector<std::int64_t> residues_mod(const PrimePower& pp, const std::vector<std::int64_t>& L)
{
    const std::int64_t q = pp.q_small();
    std::vector<std::int64_t> out;
    out.reserve(L.size());
    for (auto l : L) {
        out.push_back(floor_mod(l, q));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline SeparationReport check_separation(const PrimePower& pp, const FactoredIntPoly& g, std::int64_t alpha,
                                         const std::vector<std::int64_t>& L)
{
    const auto classes = residues_mod(pp, L);
    const std::int64_t q = pp.q_small();
    require(!std::binary_search(classes.begin(), classes.end(), floor_mod(alpha, q)),
            "alpha " + std::to_string(alpha) + " lies in L mod q");
    SeparationReport report;
    report.v0 = vp(pp, g.evaluate(alpha));
    report.separates = true;
    report.shifted_minus_ok = true;
    report.shifted_plus_ok = true;
    for (auto l : classes) {
        const Valuation m = min_valuation_over_class(pp, g, l);
        report.class_minima.emplace(l, m);
        report.separates = report.separates && report.v0 < m;
        report.shifted_minus_ok = report.shifted_minus_ok && report.v0 <= min_valuation_over_class(pp, g, l - 1);
        report.shifted_plus_ok = report.shifted_plus_ok && report.v0 <= min_valuation_over_class(pp, g, l + 1);
    }
    return report;
}

/// Early-exit form of check_separation(...).separates.
inline bool separates(const PrimePower& pp, const FactoredIntPoly& g, std::int64_t alpha,
                      const std::vector<std::int64_t>& classes)
{
    const Valuation v0 = vp(pp, g.evaluate(alpha));
    if (v0.is_infinite()) {
        return false;
    }
    return std::all_of(classes.begin(), classes.end(),
                       [&](std::int64_t l) { return v0 < min_valuation_over_class(pp, g, l); });
}

inline FactoredIntPoly canonical_interval_poly(const std::vector<std::int64_t>& L)
{
    require(!L.empty(), "canonical polynomial needs a nonempty L");
    FactoredIntPoly g;
    for (auto l : L) {
        g.roots.emplace_back(l);
    }
    return g;
}

struct RootWindow {
    std::int64_t lo = 0;
    std::int64_t hi = 0;  // exclusive
};

struct SeparatingSearchHit {
    FactoredIntPoly poly;
    std::size_t degree = 0;
    std::uint64_t candidates_tested = 0;
};

/// Lowest-degree monic polynomial with roots in the window separating alpha
/// from L + qZ. Candidates are visited as sorted root multisets in
/// lexicographic order, so the result is reproducible.
inline std::optional<SeparatingSearchHit> search_min_degree(const PrimePower& pp, std::int64_t alpha,
                                                            const std::vector<std::int64_t>& L,
                                                            std::size_t max_degree,
                                                            std::optional<RootWindow> window = std::nullopt)
{
    require(max_degree >= 1, "max_degree must be at least 1");
    const std::int64_t q = pp.q_small();
    const auto classes = residues_mod(pp, L);
    require(!std::binary_search(classes.begin(), classes.end(), floor_mod(alpha, q)),
            "alpha " + std::to_string(alpha) + " lies in L mod q");
    const RootWindow w = window.value_or(RootWindow{0, q * q});
    require(w.lo < w.hi, "empty root window");

    std::uint64_t tested = 0;
    for (std::size_t d = 1; d <= max_degree; ++d) {
        std::vector<std::int64_t> roots(d, w.lo);
        FactoredIntPoly g;
        g.roots.resize(d);
        while (true) {
            for (std::size_t i = 0; i < d; ++i) {
                g.roots[i] = roots[i];
            }
            ++tested;
            if (separates(pp, g, alpha, classes)) {
                return SeparatingSearchHit{g, d, tested};
            }
            // Next nondecreasing sequence.
            std::size_t i = d;
            while (i > 0 && roots[i - 1] == w.hi - 1) {
                --i;
            }
            if (i == 0) {
                break;
            }
            const std::int64_t next = roots[i - 1] + 1;
            for (std::size_t j = i - 1; j < d; ++j) {
                roots[j] = next;
            }
        }
    }
    return std::nullopt;
}

/// floor(min{2^{s-1}, (1 + (s-1)/k)^k}).
inline BigInt dsk_bound(std::int64_t s, std::int64_t k)
{
    require(s >= 1 && k >= 1, "dsk_bound needs s, k >= 1");
    const BigInt power_two = ipow(BigInt(2), static_cast<std::uint64_t>(s - 1));
    const BigInt ratio = ipow(BigInt(k + s - 1), static_cast<std::uint64_t>(k)) / ipow(BigInt(k), static_cast<std::uint64_t>(k));
    return std::min(power_two, ratio);
}

}  // namespace sperner
