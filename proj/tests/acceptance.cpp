// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
//   acceptance [--seed N] [--only K]
//
// The default seed is 20240611. Every randomized criterion derives its own
// generator from the seed and the criterion number, so --only does not change
// the draws of the criterion it selects.

#include "sperner/bounds.hpp"
#include "sperner/polylab.hpp"
#include "sperner/push.hpp"
#include "sperner/search.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace sperner;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240611;

struct Outcome {
    bool pass = true;
    std::string detail;
    int failures = 0;
    std::string first_failure;

    void fail(const std::string& what)
    {
        pass = false;
        if (failures++ == 0) {
            first_failure = what;
        }
    }
};

using Rng = std::mt19937_64;

Rng rng_for(std::uint64_t seed, int criterion)
{
    std::seed_seq seq{seed, static_cast<std::uint64_t>(criterion)};
    return Rng(seq);
}

std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi)
{
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

std::string L_str(const std::vector<std::int64_t>& L)
{
    std::string out = "{";
    for (std::size_t i = 0; i < L.size(); ++i) {
        out += (i ? "," : "") + std::to_string(L[i]);
    }
    return out + "}";
}

ConstraintSpec make_spec(FamilyKind kind, std::vector<std::int64_t> L, int n, std::optional<std::int64_t> q)
{
    ConstraintSpec spec;
    spec.kind = kind;
    spec.L = std::move(L);
    spec.n = n;
    if (q) {
        spec.modulus = PrimePower::from_modulus(*q);
    }
    return spec;
}

std::string spec_str(const ConstraintSpec& spec)
{
    return kind_name(spec.kind) + (spec.modular() ? " q=" + std::to_string(spec.q()) : "") + " L=" + L_str(spec.L) +
           " n=" + std::to_string(spec.n);
}

BigInt sum_binom(std::int64_t n, std::int64_t lo, std::int64_t hi)
{
    BigInt total = 0;
    for (std::int64_t i = std::max<std::int64_t>(lo, 0); i <= std::min(hi, n); ++i) {
        total += binomial(n, i);
    }
    return total;
}

/// Intervals of [lo_min, hi_max] plus all subsets of size <= 2, without repeats.
std::vector<std::vector<std::int64_t>> candidate_sets(std::int64_t lo_min, std::int64_t hi_max, std::size_t skip_size)
{
    std::set<std::vector<std::int64_t>> out;
    for (std::int64_t lo = lo_min; lo <= hi_max; ++lo) {
        for (std::int64_t hi = lo; hi <= hi_max; ++hi) {
            std::vector<std::int64_t> L;
            for (std::int64_t x = lo; x <= hi; ++x) {
                L.push_back(x);
            }
            out.insert(L);
        }
        for (std::int64_t b = lo + 1; b <= hi_max; ++b) {
            out.insert({lo, b});
        }
    }
    std::vector<std::vector<std::int64_t>> result;
    for (const auto& L : out) {
        if (L.size() != skip_size) {
            result.push_back(L);
        }
    }
    return result;
}

const BoundCertificate* find_rule(const BoundReport& r, const std::string& id)
{
    for (const auto& c : r.certificates) {
        if (c.theorem_id == id) {
            return &c;
        }
    }
    return nullptr;
}

std::optional<BigInt> rule_value(const BoundReport& r, const std::string& id)
{
    if (const auto* c = find_rule(r, id)) {
        return c->bound.value;
    }
    for (const auto& rj : r.rejected) {
        if (rj.theorem_id == id && rj.formula) {
            return rj.formula->value;
        }
    }
    return std::nullopt;
}

SearchResult brute(const ConstraintSpec& spec)
{
    SearchOptions opt;
    opt.canonical_witness = false;
    return max_family(spec, opt);
}

bool closed_pair(std::int64_t p, std::int64_t b, std::int64_t s) { return binomial(b, s) % p != 0; }

// ---------------------------------------------------------------------------

Outcome soundness_sweep(std::uint64_t)
{
    Outcome out;
    std::size_t checked = 0;
    BoundEngine engine;
    auto sweep = [&](FamilyKind kind, std::int64_t q, int n, const std::vector<std::int64_t>& L) {
        const ConstraintSpec spec = make_spec(kind, L, n, q);
        const BoundReport rep = engine.best_bound(spec);
        const SearchResult res = brute(spec);
        ++checked;
        if (!res.exact) {
            out.fail(spec_str(spec) + ": search not exact");
        } else if (BigInt(res.max_size) > rep.best.bound.value) {
            out.fail(spec_str(spec) + ": brute " + std::to_string(res.max_size) + " > " + rep.best.theorem_id + " " +
                     rep.best.bound.value.str());
        }
    };
    for (std::int64_t q : {2, 3, 4, 5, 7, 8, 9}) {
        for (const auto& L : candidate_sets(1, q - 1, 0)) {
            for (int n = 4; n <= 8; ++n) {
                sweep(FamilyKind::DiffSperner, q, n, L);
            }
        }
    }
    for (std::int64_t q : {2, 3, 4}) {
        // Intersection sizes live in Z/q, so L may contain 0 but not every residue.
        for (const auto& L : candidate_sets(0, q - 1, static_cast<std::size_t>(q))) {
            for (int n = 1; n <= 7; ++n) {
                sweep(FamilyKind::Intersecting, q, n, L);
            }
        }
        for (const auto& L : candidate_sets(1, q - 1, 0)) {
            for (int n = 1; n <= 7; ++n) {
                sweep(FamilyKind::Hamming, q, n, L);
            }
        }
    }
    out.detail = std::to_string(checked) + " (kind, q, L, n) cases, " + std::to_string(out.failures) + " violations";
    return out;
}

Outcome sharpness_q2(std::uint64_t)
{
    Outcome out;
    for (int n = 3; n <= 10; ++n) {
        const ConstraintSpec spec = make_spec(FamilyKind::DiffSperner, {1}, n, 2);
        const SearchResult res = brute(spec);
        const BoundReport rep = best_bound(spec);
        if (!res.exact || res.max_size != static_cast<std::size_t>(n)) {
            out.fail("n=" + std::to_string(n) + ": brute " + std::to_string(res.max_size));
        }
        if (rep.best.bound.value != n) {
            out.fail("n=" + std::to_string(n) + ": bound " + rep.best.bound.value.str());
        }
    }
    out.detail = "n=3..10, brute = bound = n";
    return out;
}

Outcome kummer_lucas(std::uint64_t)
{
    Outcome out;
    const std::vector<std::int64_t> primes = {2, 3, 5, 7};
    std::size_t checked = 0;
    // Row N of Pascal's triangle, advanced in place.
    std::vector<BigInt> row{1};
    for (std::int64_t N = 0; N <= 600; ++N) {
        if (N > 0) {
            row.push_back(0);
            for (std::int64_t k = N; k > 0; --k) {
                row[static_cast<std::size_t>(k)] += row[static_cast<std::size_t>(k - 1)];
            }
        }
        for (std::int64_t a = std::max<std::int64_t>(0, N - 300); a <= std::min<std::int64_t>(N, 300); ++a) {
            const std::int64_t b = N - a;
            for (std::int64_t p : primes) {
                BigInt c = row[static_cast<std::size_t>(a)];
                std::uint64_t v = 0;
                while (c % p == 0) {
                    c /= p;
                    ++v;
                }
                const Valuation got = vp_binomial(p, a, b);
                const bool nondiv = lucas_nondivisible(p, N, a);
                ++checked;
                if (got != Valuation::finite(v) || nondiv != (v == 0)) {
                    out.fail("p=" + std::to_string(p) + " a=" + std::to_string(a) + " b=" + std::to_string(b));
                }
            }
        }
    }
    out.detail = std::to_string(checked) + " (p, a, b) triples against factored C(a+b, a)";
    return out;
}

Outcome closure_calculus(std::uint64_t)
{
    Outcome out;
    std::size_t intervals = 0;
    for (std::int64_t q : {4, 8, 9, 16, 25, 27}) {
        const PrimePower pp = PrimePower::from_modulus(q);
        for (std::int64_t lo = 1; lo < q; ++lo) {
            for (std::int64_t hi = lo; hi < q; ++hi) {
                const IntervalL L{lo, hi};
                const ClosureResult c = q_closure(pp, L);
                const std::int64_t bound = mu(pp, L.size());
                ++intervals;
                const bool contains = c.interval.lo <= lo && hi <= c.interval.hi;
                if (c.length > bound || !contains || !is_q_closed(pp, c.interval)) {
                    out.fail("q=" + std::to_string(q) + " L=" + L.to_string() + ": closure " + c.interval.to_string() +
                             " vs mu " + std::to_string(bound));
                }
            }
        }
    }
    for (std::int64_t p : {2, 3, 5}) {
        const PrimePower pp = PrimePower::from_modulus(p * p);
        const ClosureResult c = q_closure(pp, {p, p});
        if (c.length != p || mu(pp, 1) != p) {
            out.fail("q=" + std::to_string(p * p) + " L={" + std::to_string(p) + "}: length " +
                     std::to_string(c.length) + ", mu " + std::to_string(mu(pp, 1)));
        }
    }
    out.detail = std::to_string(intervals) + " intervals within mu; equality at q=p^2, L={p} for p=2,3,5";
    return out;
}

/// min over t in [-p^6, p^6] of v_p(g(residue + q t)), in machine integers.
Valuation scan_min_valuation(std::int64_t p, std::int64_t q, std::int64_t lead, const std::vector<std::int64_t>& roots,
                             std::int64_t residue)
{
    auto v = [p](std::int64_t x) {
        std::uint64_t e = 0;
        while (x % p == 0) {
            x /= p;
            ++e;
        }
        return e;
    };
    std::int64_t p6 = 1;
    for (int i = 0; i < 6; ++i) {
        p6 *= p;
    }
    Valuation best = Valuation::infinity();
    const std::uint64_t vlead = v(lead);
    for (std::int64_t t = -p6; t <= p6; ++t) {
        const std::int64_t u = residue + q * t;
        std::uint64_t total = vlead;
        bool zero = false;
        for (auto r : roots) {
            if (u == r) {
                zero = true;
                break;
            }
            total += v(u - r);
        }
        if (!zero) {
            best = std::min(best, Valuation::finite(total));
        }
    }
    return best;
}

Outcome min_valuation_oracle(std::uint64_t seed)
{
    Outcome out;
    Rng rng = rng_for(seed, 5);
    std::size_t checked = 0;
    for (std::int64_t q : {4, 8, 9}) {
        const PrimePower pp = PrimePower::from_modulus(q);
        const std::int64_t p = pp.p_small();
        for (int trial = 0; trial < 200; ++trial) {
            FactoredIntPoly g;
            std::int64_t lead = 0;
            while (lead == 0) {
                lead = uniform(rng, -p * p, p * p);
            }
            g.lead = lead;
            std::vector<std::int64_t> roots;
            const auto degree = uniform(rng, 1, 4);
            for (std::int64_t i = 0; i < degree; ++i) {
                roots.push_back(uniform(rng, -q * q, q * q));
                g.roots.emplace_back(roots.back());
            }
            for (std::int64_t residue = 0; residue < q; ++residue) {
                const Valuation fast = min_valuation_over_class(pp, g, residue);
                const Valuation slow = scan_min_valuation(p, q, lead, roots, residue);
                ++checked;
                if (fast != slow) {
                    out.fail("q=" + std::to_string(q) + " g=" + g.to_string() + " class " + std::to_string(residue) +
                             ": " + fast.to_string() + " vs scan " + slow.to_string());
                }
            }
        }
    }
    out.detail = std::to_string(checked) + " (polynomial, class) minima, 200 polynomials per q";
    return out;
}

Outcome bchooses_bridge(std::uint64_t)
{
    Outcome out;
    std::size_t pairs = 0;
    for (std::int64_t q : {4, 8, 9, 16}) {
        const PrimePower pp = PrimePower::from_modulus(q);
        const std::int64_t p = pp.p_small();
        for (std::int64_t b = 1; b < q; ++b) {
            for (std::int64_t s = 1; s <= b; ++s) {
                if (!closed_pair(p, b, s)) {
                    continue;
                }
                std::vector<std::int64_t> L;
                for (std::int64_t l = b - s + 1; l <= b; ++l) {
                    L.push_back(l);
                }
                const SeparationReport r = check_separation(pp, canonical_interval_poly(L), 0, L);
                ++pairs;
                if (!r.separates || r.v0 != vp_factorial(p, s) || !(r.shifted_minus_ok || r.shifted_plus_ok)) {
                    out.fail("q=" + std::to_string(q) + " (b,s)=(" + std::to_string(b) + "," + std::to_string(s) + ")");
                }
            }
        }
    }
    out.detail = std::to_string(pairs) + " closed pairs: separation, v0 = v_p(s!), a shifted condition";
    return out;
}

Outcome census(std::uint64_t)
{
    Outcome out;
    std::string notes;
    for (std::int64_t q : {3, 4, 8, 9, 25}) {
        const PrimePower pp = PrimePower::from_modulus(q);
        const std::int64_t p = pp.p_small();
        BigInt expected = ipow(BigInt(p * (p + 1) / 2), pp.k()) - q;
        std::int64_t direct = 0;
        for (std::int64_t b = 1; b < q; ++b) {
            for (std::int64_t s = 1; s <= b; ++s) {
                direct += closed_pair(p, b, s) ? 1 : 0;
            }
        }
        const ClosedPairCensus c = count_closed_pairs(pp);
        if (c.enumerated != expected || c.enumerated != direct || c.closed_form != expected) {
            out.fail("q=" + std::to_string(q) + ": enumerated " + c.enumerated.str() + ", expected " + expected.str());
        }
        if (c.printed_form != c.enumerated) {
            notes += " q=" + std::to_string(q) + ":" + c.printed_form.str();
        }
        if (q == 4 && c.enumerated != 5) {
            out.fail("q=4 gives " + c.enumerated.str());
        }
    }
    out.detail = "q=3,4,8,9,25 match (p(p+1)/2)^k - q; printed form differs at" + notes;
    return out;
}

/// Greedy random family under spec: candidates in random order, stopping at target size.
SetFamily random_family(const ConstraintSpec& spec, Rng& rng, std::size_t target)
{
    const CompiledPredicate pred(spec);
    std::vector<SetMask> order(std::size_t{1} << spec.n);
    std::iota(order.begin(), order.end(), SetMask{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<SetMask> members;
    for (SetMask a : order) {
        if (members.size() >= target) {
            break;
        }
        if (!pred.member_ok(a)) {
            continue;
        }
        bool ok = true;
        for (SetMask b : members) {
            ok = ok && pred.pair_ok(a, b);
        }
        if (ok) {
            members.push_back(a);
        }
    }
    return SetFamily(spec.n, members);
}

Outcome independence(std::uint64_t seed)
{
    Outcome out;
    Rng rng = rng_for(seed, 8);
    const std::vector<std::int64_t> moduli = {2, 3, 4, 5, 7, 8, 9};
    struct Witness {
        SetFamily fam;
        FactoredIntPoly g;
        PrimePower pp;
        ShiftVariant shift;
    };
    std::vector<Witness> kept;
    std::size_t rows = 0;
    while (kept.size() < 100) {
        const std::int64_t q = moduli[static_cast<std::size_t>(uniform(rng, 0, 6))];
        const PrimePower pp = PrimePower::from_modulus(q);
        const std::int64_t b = uniform(rng, 1, q - 1);
        const std::int64_t s = uniform(rng, 1, b);
        if (!closed_pair(pp.p_small(), b, s)) {
            continue;
        }
        std::vector<std::int64_t> L;
        for (std::int64_t l = b - s + 1; l <= b; ++l) {
            L.push_back(l);
        }
        const int n = static_cast<int>(uniform(rng, 3, 9));
        const ConstraintSpec spec = make_spec(FamilyKind::DiffSperner, L, n, q);
        const SetFamily fam = random_family(spec, rng, static_cast<std::size_t>(uniform(rng, 1, 60)));
        const FactoredIntPoly g = canonical_interval_poly(L);
        const auto shift = preferred_shift(pp, g, L);
        const std::string tag = spec_str(spec) + " m=" + std::to_string(fam.size());
        if (!shift) {
            out.fail(tag + ": no shifted condition holds");
            continue;
        }
        const ProofSystem sys = build_diff_sperner_system(fam, g, pp, *shift);
        const RankReport rep = verify_independence(sys, pp.p());
        rows += rep.expected;
        if (rep.rank != sys.P.size() + sys.F.size() || !rep.full_rank) {
            out.fail(tag + ": rank " + std::to_string(rep.rank) + " of " + std::to_string(rep.expected));
        }
        if (!rep.pattern_ok) {
            out.fail(tag + ": pattern fails on a valid family");
        }
        kept.push_back({fam, g, pp, *shift});
    }
    std::size_t mutated = 0;
    for (const auto& w : kept) {
        if (mutated == 20) {
            break;
        }
        const auto& members = w.fam.members();
        const int n = w.fam.n();
        auto it = std::find_if(members.begin(), members.end(), [n](SetMask a) { return a != full_mask(n); });
        if (it == members.end()) {
            continue;
        }
        SetMask extra = *it;
        for (int x = 0; x < n; ++x) {
            if (!(extra >> x & 1U)) {
                extra |= SetMask{1} << x;
                break;
            }
        }
        std::vector<SetMask> bad = members;
        bad.push_back(extra);
        const ProofSystem sys = build_diff_sperner_system(SetFamily(n, bad), w.g, w.pp, w.shift);
        const RankReport rep = verify_independence(sys, w.pp.p());
        ++mutated;
        if (rep.pattern_ok) {
            out.fail("mutated family n=" + std::to_string(n) + " q=" + std::to_string(w.pp.q_small()) +
                     ": pattern still holds");
        }
    }
    if (mutated < 20) {
        out.fail("only " + std::to_string(mutated) + " mutated families");
    }
    out.detail = "100 witnesses at rank m+t (" + std::to_string(rows) + " rows), " + std::to_string(mutated) +
                 " mutated families break the pattern";
    return out;
}

Outcome push_middle(std::uint64_t seed)
{
    Outcome out;
    Rng rng = rng_for(seed, 9);
    std::size_t moved = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = static_cast<int>(uniform(rng, 2, 10));
        const int s = static_cast<int>(uniform(rng, 1, n / 2));
        std::vector<std::int64_t> L;
        for (std::int64_t l = 1; l <= s; ++l) {
            L.push_back(l);
        }
        const FamilyKind kind = trial % 2 == 0 ? FamilyKind::DiffSperner : FamilyKind::CloseSperner;
        const ConstraintSpec spec = make_spec(kind, L, n, std::nullopt);
        // Members drawn level by level so the extreme levels are well represented.
        const CompiledPredicate pred(spec);
        std::vector<SetMask> members;
        for (int tries = 0; tries < 30; ++tries) {
            const int size = static_cast<int>(uniform(rng, 0, n));
            std::vector<int> elems(static_cast<std::size_t>(n));
            std::iota(elems.begin(), elems.end(), 0);
            std::shuffle(elems.begin(), elems.end(), rng);
            SetMask a = 0;
            for (int i = 0; i < size; ++i) {
                a |= SetMask{1} << elems[static_cast<std::size_t>(i)];
            }
            bool ok = std::find(members.begin(), members.end(), a) == members.end();
            for (SetMask b : members) {
                ok = ok && pred.pair_ok(a, b) && (a & ~b) != 0 && (b & ~a) != 0;
            }
            if (ok) {
                members.push_back(a);
            }
        }
        const SetFamily fam(n, members);
        const std::string tag = spec_str(spec) + " s=" + std::to_string(s);
        if (!satisfies(spec, fam) || !fam.is_antichain()) {
            out.fail(tag + ": generator produced an invalid input");
            continue;
        }
        const SetFamily res = push_to_middle(fam, s);
        if (res.size() != fam.size()) {
            out.fail(tag + ": size changed");
        }
        for (SetMask a : res.members()) {
            if (set_size(a) < s || set_size(a) > n - s) {
                out.fail(tag + ": member " + format_set(a) + " outside the band");
            }
        }
        const Verdict v = satisfies(spec, res);
        if (!v.ok || !res.is_antichain()) {
            out.fail(tag + ": property lost: " + v.violation);
        }
        moved += res.members() != fam.members() ? 1 : 0;
    }
    out.detail = "200 antichains ([s]-differencing and [s]-close alternately), " + std::to_string(moved) +
                 " changed by the push";
    return out;
}

Outcome midband(std::uint64_t)
{
    Outcome out;
    const auto sym = brute(make_spec(FamilyKind::DiffSperner, {1, 2}, 4, std::nullopt));
    const BigInt sym_bound = sum_binom(3, 1, 2);
    if (sym_bound != 6 || !sym.exact || BigInt(sym.max_size) > sym_bound) {
        out.fail("n=4 L=[2] diff: " + std::to_string(sym.max_size));
    }
    const auto anti = brute(make_spec(FamilyKind::Antichain, {}, 4, std::nullopt));
    if (!anti.exact || anti.max_size != 6) {
        out.fail("n=4 antichain: " + std::to_string(anti.max_size));
    }
    const auto close = brute(make_spec(FamilyKind::CloseSperner, {1, 2}, 5, std::nullopt));
    const BigInt close_bound = sum_binom(5, 1, 2);
    if (close_bound != 15 || !close.exact || BigInt(close.max_size) > close_bound) {
        out.fail("n=5 L=[2] close: " + std::to_string(close.max_size));
    }
    const auto r_sym = best_bound(make_spec(FamilyKind::DiffSperner, {1, 2}, 4, std::nullopt));
    const auto r_close = best_bound(make_spec(FamilyKind::CloseSperner, {1, 2}, 5, std::nullopt));
    out.detail = "diff n=4: " + std::to_string(sym.max_size) + " <= 6 (engine " + r_sym.best.bound.value.str() + " via " +
                 r_sym.best.theorem_id + "); antichain n=4: " + std::to_string(anti.max_size) + "; close n=5: " +
                 std::to_string(close.max_size) + " <= 15 (engine " + r_close.best.bound.value.str() + " via " +
                 r_close.best.theorem_id + ")";
    return out;
}

Outcome intersecting_improvement(std::uint64_t)
{
    Outcome out;
    const std::vector<std::int64_t> L = {0, 1};
    const auto r8 = best_bound(make_spec(FamilyKind::Intersecting, L, 8, 9));
    const auto r18_8 = rule_value(r8, "R18");
    const auto r17_8 = rule_value(r8, "R17");
    if (!r18_8 || !r17_8 || *r18_8 != sum_binom(8, 0, 4) || *r17_8 != sum_binom(8, 2, 8) || !(*r18_8 < *r17_8)) {
        out.fail("n=8 comparison");
    }
    const auto r9 = best_bound(make_spec(FamilyKind::Intersecting, L, 9, 9));
    if (!find_rule(r9, "R17") || !find_rule(r9, "R18") ||
        !(find_rule(r9, "R18")->bound.value < find_rule(r9, "R17")->bound.value)) {
        out.fail("n=9: R18 not below the applicable R17");
    }
    std::string brute_text;
    for (int n = 1; n <= 7; ++n) {
        const auto spec = make_spec(FamilyKind::Intersecting, L, n, 9);
        const auto res = brute(spec);
        const auto rep = best_bound(spec);
        const auto a = rule_value(rep, "R18");
        const auto b = rule_value(rep, "R17");
        if (!res.exact || !a || !b || BigInt(res.max_size) > *a || BigInt(res.max_size) > *b) {
            out.fail("n=" + std::to_string(n) + ": brute " + std::to_string(res.max_size));
        }
        brute_text += (n > 1 ? "," : "") + std::to_string(res.max_size);
    }
    out.detail = "n=8: R18 " + (r18_8 ? r18_8->str() : "-") + " < R17 " + (r17_8 ? r17_8->str() : "-") +
                 "; brute n=1..7: " + brute_text;
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance criteria"};
    std::uint64_t seed = kDefaultSeed;
    int only = 0;
    app.add_option("--seed", seed, "Seed for the randomized criteria (default 20240611)");
    app.add_option("--only", only, "Run a single criterion");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome(std::uint64_t)>>> criteria = {
        {"soundness sweep", soundness_sweep},
        {"sharpness at q=2", sharpness_q2},
        {"Kummer/Lucas oracle", kummer_lucas},
        {"closure calculus", closure_calculus},
        {"min valuation oracle", min_valuation_oracle},
        {"closed pairs separate", bchooses_bridge},
        {"closed pair census", census},
        {"independence verification", independence},
        {"push to the middle", push_middle},
        {"mid-band bounds", midband},
        {"intersecting interval improvement", intersecting_improvement},
    };
    std::cout << "seed " << seed << "\n";
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && static_cast<std::size_t>(only) != i + 1) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second(seed);
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.1fs", secs);
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": " << o.detail;
        if (!o.pass) {
            std::cout << " | " << o.failures << " failure(s), first: " << o.first_failure;
        }
        std::cout << " (" << timing << ")\n" << std::flush;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
