#pragma once

// Upper bounds on |F| from the rule table R1..R22. Every certificate names
// its rule, lists the hypotheses that were checked, and carries the binomial
// sum it asserts.

#include "sperner/closure.hpp"
#include "sperner/families.hpp"
#include "sperner/seppoly.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace sperner {

enum class SumColumn { N, NMinus1 };

inline std::string column_name(SumColumn c) { return c == SumColumn::N ? "n" : "n-1"; }

/// sum_{i=lower}^{upper} C(N, i) with N = n or n - 1. The stated indices are
/// kept; the value clamps them to [0, N].
struct BinomSum {
    std::int64_t lower = 0;
    std::int64_t upper = 0;
    SumColumn column = SumColumn::N;
    std::int64_t n = 0;
    BigInt value = 0;

    static BinomSum make(std::int64_t n, std::int64_t lower, std::int64_t upper, SumColumn column)
    {
        BinomSum sum{lower, upper, column, n, 0};
        const std::int64_t N = column == SumColumn::N ? n : n - 1;
        for (std::int64_t i = std::max<std::int64_t>(0, lower); i <= std::min(upper, N); ++i) {
            sum.value += binomial(N, i);
        }
        return sum;
    }

    std::string to_string() const
    {
        return "sum_{i=" + std::to_string(lower) + "}^{" + std::to_string(upper) + "} C(" + column_name(column)
               + ",i) = " + value.str();
    }
};

struct Hypothesis {
    std::string condition;
    bool holds = true;
};

struct CertificateAux {
    std::optional<FactoredIntPoly> poly;
    std::optional<IntervalL> closure;
    std::optional<std::int64_t> degree;
    std::optional<std::int64_t> lifted_prime;
    std::optional<IntervalL> relaxed_to;
    std::string note;
};

struct BoundCertificate {
    std::string theorem_id;
    std::string theorem;
    std::vector<Hypothesis> hypotheses;
    BinomSum bound;
    CertificateAux auxiliary;

    int rule_number() const { return theorem_id.size() > 1 ? std::stoi(theorem_id.substr(1)) : 0; }

    bool all_hold() const
    {
        return std::all_of(hypotheses.begin(), hypotheses.end(), [](const Hypothesis& h) { return h.holds; });
    }
};

/// Order used to pick the reported certificate: value, then fewest
/// hypotheses, then rule number.
inline bool certificate_before(const BoundCertificate& a, const BoundCertificate& b)
{
    return std::make_tuple(a.bound.value, a.hypotheses.size(), a.rule_number())
           < std::make_tuple(b.bound.value, b.hypotheses.size(), b.rule_number());
}

struct RejectedRule {
    std::string theorem_id;
    std::string reason;
    /// The rule's sum had its hypotheses held, when it has one.
    std::optional<BinomSum> formula;
};

struct BoundReport {
    BoundCertificate best;
    std::vector<BoundCertificate> ties;          // all certificates attaining best.bound.value
    std::vector<BoundCertificate> certificates;  // sorted by certificate_before
    std::vector<RejectedRule> rejected;
    std::optional<std::int64_t> lifted_prime;
};

namespace detail {

inline std::int64_t smallest_prime_above(std::int64_t m)
{
    std::int64_t c = std::max<std::int64_t>(2, m + 1);
    while (!is_prime(c)) {
        ++c;
    }
    return c;
}

inline std::string set_text(const std::vector<std::int64_t>& L)
{
    std::string out = "{";
    for (std::size_t i = 0; i < L.size(); ++i) {
        out += (i ? "," : "") + std::to_string(L[i]);
    }
    return out + "}";
}

/// L sorted and contiguous.
inline std::optional<IntervalL> as_interval(const std::vector<std::int64_t>& L)
{
    if (L.empty() || L.back() - L.front() + 1 != static_cast<std::int64_t>(L.size())) {
        return std::nullopt;
    }
    return IntervalL{L.front(), L.back()};
}

/// Start a with L = {a, a+1, ..., a+s-1} mod q, for residues 0 <= l < q, |L| < q.
inline std::optional<std::int64_t> cyclic_start(const std::vector<std::int64_t>& L, std::int64_t q)
{
    const auto s = static_cast<std::int64_t>(L.size());
    if (s == 0 || s >= q) {
        return std::nullopt;
    }
    for (auto a : L) {
        if (std::binary_search(L.begin(), L.end(), floor_mod(a - 1, q))) {
            continue;
        }
        for (std::int64_t i = 0; i < s; ++i) {
            if (!std::binary_search(L.begin(), L.end(), floor_mod(a + i, q))) {
                return std::nullopt;
            }
        }
        return a;
    }
    return std::nullopt;
}

inline bool is_initial_segment(const std::vector<std::int64_t>& L, std::int64_t first)
{
    for (std::size_t i = 0; i < L.size(); ++i) {
        if (L[i] != first + static_cast<std::int64_t>(i)) {
            return false;
        }
    }
    return !L.empty();
}

inline std::int64_t capped_pow2(std::int64_t e)
{
    return e >= 62 ? (std::int64_t{1} << 62) : (std::int64_t{1} << e);
}

inline std::int64_t sum_vp(const PrimePower& pp, const std::vector<std::int64_t>& L)
{
    std::int64_t total = 0;
    for (auto l : L) {
        total += static_cast<std::int64_t>(vp(pp, l).value());
    }
    return total;
}

/// g(y) = h(alpha - y) as lead * prod (y - root).
inline FactoredIntPoly reflect(const FactoredIntPoly& h, std::int64_t alpha)
{
    FactoredIntPoly g;
    g.lead = h.degree() % 2 == 0 ? h.lead : BigInt(-h.lead);
    for (const auto& r : h.roots) {
        g.roots.push_back(alpha - r);
    }
    return g;
}

inline FactoredIntPoly interval_poly(const IntervalL& I)
{
    FactoredIntPoly g;
    for (auto l = I.lo; l <= I.hi; ++l) {
        g.roots.emplace_back(l);
    }
    return g;
}

}  // namespace detail

/// Above these moduli the generic rule is not evaluated by enumeration.
inline constexpr std::int64_t kGenericMaxQ = 4096;
inline constexpr std::int64_t kGenericAlphaMaxQ = 256;

/// Knobs for the generic separating-polynomial rule and the relaxation pass.
struct BoundOptions {
    std::size_t search_max_degree = 3;
    /// Search and relaxation only run when q is at most this.
    std::int64_t search_max_q = 64;
    /// Evaluate pairwise kinds on every interval containing hull(L) too.
    bool relax_to_superintervals = true;
};

/// Outcome of the generic rule on one (kind, q, L).
struct SeparatingAnalysis {
    // Degree and polynomial of the best separating candidate found.
    std::optional<FactoredIntPoly> plain;
    // Same, restricted to candidates that also pass a shifted condition.
    std::optional<FactoredIntPoly> shifted;
    // Intersecting: per-alpha polynomials, degree = max.
    std::map<std::int64_t, FactoredIntPoly> per_alpha;
};

class BoundEngine {
public:
    explicit BoundEngine(BoundOptions options = {}) : options_(options) {}

    const BoundOptions& options() const { return options_; }

    BoundReport best_bound(const ConstraintSpec& spec);

    /// Best separating polynomial for 0 against L + qZ among the built-in
    /// candidates and a bounded search. Cached per (q, L).
    const SeparatingAnalysis& analyse_zero(const PrimePower& pp, const std::vector<std::int64_t>& L);

    /// For every alpha not in L mod q, a polynomial separating alpha from L + qZ.
    const SeparatingAnalysis& analyse_all_alpha(const PrimePower& pp, const std::vector<std::int64_t>& L);

private:
    struct Input {
        FamilyKind kind;
        std::int64_t n;
        PrimePower pp;
        std::vector<std::int64_t> L;  // residues mod q, or exact values when exact
        bool exact = false;           // non-modular spec lifted to pp
        std::optional<std::int64_t> lifted;
        std::optional<IntervalL> relaxed_to;
    };

    struct Sink {
        const Input& in;
        std::vector<BoundCertificate>& out;
        std::vector<RejectedRule>& rejected;

        void add(std::string id, std::string name, std::vector<Hypothesis> hyps, BinomSum sum, CertificateAux aux = {})
        {
            if (in.lifted) {
                hyps.insert(hyps.begin(), {"non-modular, lifted to p = " + std::to_string(*in.lifted)
                                               + " > max(L u {n})", true});
                aux.lifted_prime = in.lifted;
            }
            if (in.relaxed_to) {
                hyps.insert(hyps.begin(), {"L contained in the interval " + in.relaxed_to->to_string(), true});
                aux.relaxed_to = in.relaxed_to;
            }
            out.push_back({std::move(id), std::move(name), std::move(hyps), std::move(sum), std::move(aux)});
        }

        void reject(std::string id, std::string reason, std::optional<BinomSum> formula = std::nullopt)
        {
            if (!in.relaxed_to) {
                rejected.push_back({std::move(id), std::move(reason), std::move(formula)});
            }
        }
    };

    void diff_rules(const Input& in, Sink& sink);
    void close_rules(const Input& in, Sink& sink);
    void intersecting_rules(const Input& in, Sink& sink);
    void hamming_rules(const Input& in, Sink& sink);
    void generic_zero_rule(const Input& in, Sink& sink, bool allow_shift);
    void run_kind(const Input& in, Sink& sink);

    bool search_allowed(const PrimePower& pp) const { return pp.q_small() <= options_.search_max_q; }

    BoundOptions options_;
    std::map<std::pair<std::int64_t, std::vector<std::int64_t>>, SeparatingAnalysis> zero_cache_;
    std::map<std::pair<std::int64_t, std::vector<std::int64_t>>, SeparatingAnalysis> alpha_cache_;
};

// ---------------------------------------------------------------------------

inline const SeparatingAnalysis& BoundEngine::analyse_zero(const PrimePower& pp, const std::vector<std::int64_t>& L)
{
    const auto key = std::make_pair(pp.q_small(), L);
    if (auto it = zero_cache_.find(key); it != zero_cache_.end()) {
        return it->second;
    }
    const std::int64_t q = pp.q_small();
    SeparatingAnalysis result;
    auto consider = [&](const FactoredIntPoly& g) {
        if (!separates(pp, g, 0, L)) {
            return;
        }
        if (!result.plain || g.degree() < result.plain->degree()) {
            result.plain = g;
        }
        if (!result.shifted || g.degree() < result.shifted->degree()) {
            if (check_separation(pp, g, 0, L).any_shift_ok()) {
                result.shifted = g;
            }
        }
    };
    consider(canonical_interval_poly(L));
    consider(detail::interval_poly(q_closure(pp, {L.front(), L.back()}).interval));
    consider(detail::interval_poly({1, q - 1}));
    if (search_allowed(pp)) {
        const std::size_t cap = std::min(options_.search_max_degree, result.plain->degree() - 1);
        if (cap >= 1) {
            if (auto hit = search_min_degree(pp, 0, L, cap, RootWindow{0, q})) {
                consider(hit->poly);
            }
        }
    }
    return zero_cache_.emplace(key, std::move(result)).first->second;
}

inline const SeparatingAnalysis& BoundEngine::analyse_all_alpha(const PrimePower& pp,
                                                                const std::vector<std::int64_t>& L)
{
    const auto key = std::make_pair(pp.q_small(), L);
    if (auto it = alpha_cache_.find(key); it != alpha_cache_.end()) {
        return it->second;
    }
    const std::int64_t q = pp.q_small();
    SeparatingAnalysis result;
    for (std::int64_t alpha = 0; alpha < q; ++alpha) {
        if (std::binary_search(L.begin(), L.end(), alpha)) {
            continue;
        }
        std::optional<FactoredIntPoly> best;
        auto consider = [&](const FactoredIntPoly& g) {
            if ((!best || g.degree() < best->degree()) && separates(pp, g, alpha, L)) {
                best = g;
            }
        };
        // L_alpha = alpha - L mod q lies in [q-1]; shift polynomials for it back.
        std::vector<std::int64_t> La;
        for (auto l : L) {
            La.push_back(floor_mod(alpha - l, q));
        }
        std::sort(La.begin(), La.end());
        consider(detail::reflect(detail::interval_poly({1, q - 1}), alpha));
        consider(detail::reflect(detail::interval_poly(q_closure(pp, {La.front(), La.back()}).interval), alpha));
        consider(detail::reflect(canonical_interval_poly(La), alpha));
        consider(canonical_interval_poly(L));
        if (search_allowed(pp) && best->degree() > 1) {
            const std::size_t cap = std::min(options_.search_max_degree, best->degree() - 1);
            if (auto hit = search_min_degree(pp, alpha, L, cap, RootWindow{0, q})) {
                consider(hit->poly);
            }
        }
        result.per_alpha.emplace(alpha, *best);
        if (!result.plain || best->degree() > result.plain->degree()) {
            result.plain = *best;
        }
    }
    return alpha_cache_.emplace(key, std::move(result)).first->second;
}

// ---------------------------------------------------------------------------

inline void BoundEngine::generic_zero_rule(const Input& in, Sink& sink, bool allow_shift)
{
    const auto& L = in.L;
    const std::int64_t n = in.n;
    const auto& a = analyse_zero(in.pp, L);
    const std::string name = in.kind == FamilyKind::Hamming ? "Prop Hamming" : "Prop p-adic";
    std::optional<BoundCertificate> best;
    std::vector<BoundCertificate> local;
    std::vector<RejectedRule> ignored;
    Sink tmp{in, local, ignored};
    const auto& g = *a.plain;
    tmp.add("R22", name, {{"g = " + g.to_string() + " separates 0 from L + qZ", true}},
            BinomSum::make(n, 0, static_cast<std::int64_t>(g.degree()), SumColumn::N),
            {g, std::nullopt, static_cast<std::int64_t>(g.degree()), {}, {}, ""});
    if (a.shifted) {
        const auto& h = *a.shifted;
        if (allow_shift) {
            tmp.add("R22", name,
                    {{"g = " + h.to_string() + " separates 0 from L + qZ", true},
                     {"v_p(g(0)) <= v_p(g(u -/+ 1)) on L + qZ", true}},
                    BinomSum::make(n, 0, static_cast<std::int64_t>(h.degree()), SumColumn::NMinus1),
                    {h, std::nullopt, static_cast<std::int64_t>(h.degree()), {}, {}, "shifted condition holds"});
        }
        else if (!in.relaxed_to) {
            sink.reject("R22", "shifted condition holds for " + h.to_string()
                                   + " but the C(n-1, i) form is not valid for Hamming distances "
                                     "(counterexample: even-weight subsets of [4], q = 3, L = {1,2})");
        }
    }
    for (auto& c : local) {
        sink.out.push_back(std::move(c));
    }
}

inline void BoundEngine::diff_rules(const Input& in, Sink& sink)
{
    const auto& L = in.L;
    const std::int64_t n = in.n;
    const auto& pp = in.pp;
    const std::int64_t q = pp.q_small();
    const std::int64_t k = pp.k();
    const auto s = static_cast<std::int64_t>(L.size());
    const std::string Ltext = detail::set_text(L);

    if (k == 1) {
        sink.add("R1", "Thm F85", {{"q = " + std::to_string(q) + " is prime and L = " + Ltext + " in [p-1]", true}},
                 BinomSum::make(n, 0, s, SumColumn::N));
        sink.add("R2", "Thm LL", {{"q = " + std::to_string(q) + " is prime and L = " + Ltext + " in [p-1]", true}},
                 BinomSum::make(n, 0, s, SumColumn::NMinus1));
    }
    else {
        sink.reject("R1", "q is not prime");
        sink.reject("R2", "q is not prime");
    }

    if (detail::is_initial_segment(L, 1) && q > s) {
        sink.add("R3", "Thm XL", {{"L = [" + std::to_string(s) + "]", true}, {"q > s", true}},
                 BinomSum::make(n, 0, s, SumColumn::N));
    }
    else {
        sink.reject("R3", "L is not [s]");
    }

    const auto interval = detail::as_interval(L);
    if (interval && is_q_closed(pp, *interval)) {
        sink.add("R4", "Thm bchooses",
                 {{"L = " + interval->to_string() + " is an interval with b = " + std::to_string(interval->hi)
                       + ", s = " + std::to_string(s),
                   true},
                  {"p does not divide C(b, s)", true}},
                 BinomSum::make(n, 0, s, SumColumn::NMinus1), {canonical_interval_poly(L), *interval, s, {}, {}, ""});
    }
    else {
        sink.reject("R4", interval ? "p divides C(b, s)" : "L is not an interval");
    }

    sink.add("R5", "Cor qSperner", {{"L in [q-1]: |A\\B| not 0 mod q", true}},
             BinomSum::make(n, 0, q - 1, SumColumn::NMinus1));

    // Arithmetic progression; a single element is a progression with d = 1.
    {
        const std::int64_t d = s >= 2 ? L[1] - L[0] : 1;
        bool is_ap = true;
        for (std::size_t i = 1; i < L.size(); ++i) {
            is_ap = is_ap && L[i] - L[i - 1] == d;
        }
        if (is_ap) {
            const auto vd = static_cast<std::int64_t>(vp(pp, d).value());
            const auto vsf = static_cast<std::int64_t>(vp_factorial(pp.p(), s).value());
            const std::int64_t lhs = detail::sum_vp(pp, L);
            const std::int64_t rhs = std::max((s - 1) * vd + k, s * vd + vsf + 1);
            if (lhs < rhs) {
                sink.add("R6", "Thm AP",
                         {{"L = " + Ltext + " is an arithmetic progression with a = " + std::to_string(L[0])
                               + ", d = " + std::to_string(d),
                           true},
                          {"sum v_p(l) = " + std::to_string(lhs) + " < " + std::to_string(rhs), true}},
                         BinomSum::make(n, 0, s, SumColumn::N));
            }
            else {
                sink.reject("R6", "sum v_p(l) = " + std::to_string(lhs) + " >= " + std::to_string(rhs));
            }
        }
        else {
            sink.reject("R6", "L is not an arithmetic progression");
        }
    }

    {
        const std::int64_t total = detail::sum_vp(pp, L);
        if (total < k) {
            sink.add("R7", "Cor <k", {{"sum v_p(l) = " + std::to_string(total) + " < k = " + std::to_string(k), true}},
                     BinomSum::make(n, 0, s, SumColumn::N));
        }
        else {
            sink.reject("R7", "sum v_p(l) = " + std::to_string(total) + " >= k");
        }
    }

    if (interval) {
        const std::int64_t m = mu(pp, s);
        const Hypothesis shape{"L = " + interval->to_string() + " is an interval of size " + std::to_string(s), true};
        sink.add("R8", "Thm closure", {shape, {"mu_q(s) = " + std::to_string(m), true}},
                 BinomSum::make(n, 0, m, SumColumn::NMinus1), {std::nullopt, std::nullopt, m, {}, {}, "mu branch"});
        sink.add("R8", "Thm closure", {shape}, BinomSum::make(n, 0, detail::capped_pow2(s - 1), SumColumn::N),
                 {std::nullopt, std::nullopt, detail::capped_pow2(s - 1), {}, {}, "2^(s-1) branch"});
        if (k == 2) {
            sink.add("R8", "Thm closure", {shape, {"q = p^2", true}}, BinomSum::make(n, 0, 2 * s - 1, SumColumn::N),
                     {std::nullopt, std::nullopt, 2 * s - 1, {}, {}, "q = p^2 branch"});
        }
    }
    else {
        sink.reject("R8", "L is not an interval");
    }

    sink.add("R9", "Thm 2^s", {{"|L| = " + std::to_string(s), true}},
             BinomSum::make(n, 0, detail::capped_pow2(s - 1), SumColumn::N));

    if (in.exact) {
        if (detail::is_initial_segment(L, 1) && 3 * s >= n + 2 && 2 * s <= n) {
            sink.add("R10", "Thm [s] sym", {{"L = [" + std::to_string(s) + "]", true}, {"(n+2)/3 <= s <= n/2", true}},
                     BinomSum::make(n, 3 * s - n - 1, s, SumColumn::NMinus1));
        }
        else {
            sink.reject("R10", "needs L = [s] with (n+2)/3 <= s <= n/2");
        }
        close_rules(in, sink);
    }
    else {
        sink.reject("R10", "modular spec");
    }

    if (q <= kGenericMaxQ) {
        generic_zero_rule(in, sink, true);
    }
}

inline void BoundEngine::close_rules(const Input& in, Sink& sink)
{
    const auto& L = in.L;
    const std::int64_t n = in.n;
    const auto s = static_cast<std::int64_t>(L.size());
    const std::string via = in.kind == FamilyKind::DiffSperner ? " (L-differencing implies L-close)" : "";
    if (s == 1) {
        sink.add("R11", "Thm NPmainthm", {{"|L| = 1" + via, true}}, BinomSum::make(n, 1, 1, SumColumn::N),
                 {std::nullopt, std::nullopt, std::nullopt, {}, {}, "|F| <= n"});
    }
    sink.add("R11", "Thm NPmainthm", {{"L is a set of " + std::to_string(s) + " positive integers" + via, true}},
             BinomSum::make(n, 0, s, SumColumn::N));
    if (detail::is_initial_segment(L, 1) && 3 * s >= n + 1 && 2 * s <= n) {
        sink.add("R12", "Thm [s]-close",
                 {{"L = [" + std::to_string(s) + "]" + via, true}, {"(n+1)/3 <= s <= n/2", true}},
                 BinomSum::make(n, 3 * s - n, s, SumColumn::N));
    }
    else {
        sink.reject("R12", "needs L = [s] with (n+1)/3 <= s <= n/2");
    }
}

inline void BoundEngine::intersecting_rules(const Input& in, Sink& sink)
{
    const auto& L = in.L;
    const std::int64_t n = in.n;
    const auto& pp = in.pp;
    const std::int64_t q = pp.q_small();
    const std::int64_t k = pp.k();
    const auto s = static_cast<std::int64_t>(L.size());
    const std::string Ltext = detail::set_text(L);

    if (in.exact) {
        if (L.front() > 0) {
            sink.add("R13", "Snevily S03", {{"L = " + Ltext + " consists of positive integers", true}},
                     BinomSum::make(n, 0, s, SumColumn::NMinus1));
        }
        else {
            sink.reject("R13", "0 lies in L");
        }
    }

    const auto D = to_i64(dsk_bound(s, k));
    sink.add("R14", "Thm 2^sss",
             {{"|L| = " + std::to_string(s) + ", k = " + std::to_string(k), true},
              {"D(s,k) <= " + std::to_string(D), true}},
             BinomSum::make(n, 0, D, SumColumn::N), {std::nullopt, std::nullopt, D, {}, {}, ""});

    if (detail::is_initial_segment(L, 0) && s < q) {
        sink.add("R15", "Thm 2s", {{"L = {0..s-1} with s = " + std::to_string(s), true}, {"s < q", true}},
                 BinomSum::make(n, 0, 2 * s, SumColumn::N));
    }
    else {
        sink.reject("R15", "L is not {0..s-1} with s < q");
    }

    const auto start = detail::cyclic_start(L, q);
    if (start) {
        const std::string shape = "L = " + Ltext + " is an interval mod q starting at " + std::to_string(*start);
        if (s <= n - q + 2) {
            sink.add("R17", "Thm FHR", {{shape, true}, {"|L| <= n - q + 2", true}},
                     BinomSum::make(n, s, q - 1, SumColumn::N));
        }
        else {
            sink.reject("R17", "|L| > n - q + 2", BinomSum::make(n, s, q - 1, SumColumn::N));
        }
        const std::int64_t m = mu(pp, s);
        sink.add("R18", "Thm improve_FHR", {{shape, true}, {"mu_q(s) = " + std::to_string(m), true}},
                 BinomSum::make(n, 0, m, SumColumn::N), {std::nullopt, std::nullopt, m, {}, {}, ""});
        if (k == 2) {
            sink.add("R20", "Thm p^2", {{shape, true}, {"q = p^2", true}}, BinomSum::make(n, 0, 2 * s - 1, SumColumn::N));
        }
        else {
            sink.reject("R20", "q is not p^2");
        }
    }
    else {
        for (const char* id : {"R17", "R18", "R20"}) {
            sink.reject(id, s >= q ? "L covers every residue" : "L is not an interval mod q");
        }
    }

    sink.add("R19", "Thm improve_2^sss", {{"L in {0..q-1}", true}}, BinomSum::make(n, 0, q - 1, SumColumn::N));

    if (s < q && q <= kGenericAlphaMaxQ) {
        const auto& a = analyse_all_alpha(pp, L);
        const auto d = static_cast<std::int64_t>(a.plain->degree());
        sink.add("R22", "Lemma 01",
                 {{"every alpha not in L mod q has a separating polynomial of degree <= " + std::to_string(d), true}},
                 BinomSum::make(n, 0, d, SumColumn::N),
                 {std::nullopt, std::nullopt, d, {}, {}, "per-alpha polynomials g_alpha(y) = h(alpha - y) or searched"});
    }
}

inline void BoundEngine::hamming_rules(const Input& in, Sink& sink)
{
    const auto& L = in.L;
    const std::int64_t n = in.n;
    const auto& pp = in.pp;
    const auto s = static_cast<std::int64_t>(L.size());
    if (in.exact) {
        sink.add("R21", "Delsarte", {{"L is a set of " + std::to_string(s) + " positive integers", true}},
                 BinomSum::make(n, 0, s, SumColumn::N));
    }
    if (pp.k() == 1) {
        sink.add("R21", "Frankl p-modular", {{"q = " + std::to_string(pp.q_small()) + " is prime", true}},
                 BinomSum::make(n, 0, s, SumColumn::N));
    }
    if (detail::is_initial_segment(L, 1) && pp.q_small() > s) {
        sink.add("R21", "Xu/Liu", {{"L = [" + std::to_string(s) + "]", true}, {"q > s", true}},
                 BinomSum::make(n, 0, s, SumColumn::N));
    }
    sink.reject("R21", "the C(n-1, i) improvements are not applied: they fail for q = 3, L = {1,2}, n = 4");
    if (pp.q_small() <= kGenericMaxQ) {
        generic_zero_rule(in, sink, false);
    }
    else {
        // prod_{l=1}^{q-1} (y - l) always separates 0 from L + qZ: [q-1] is q-closed.
        sink.add("R22", "Prop Hamming", {{"g = prod_{l=1}^{q-1} (y - l) separates 0 from L + qZ", true}},
                 BinomSum::make(n, 0, pp.q_small() - 1, SumColumn::N));
    }
}

inline void BoundEngine::run_kind(const Input& in, Sink& sink)
{
    switch (in.kind) {
    case FamilyKind::DiffSperner: diff_rules(in, sink); break;
    case FamilyKind::CloseSperner: close_rules(in, sink); break;
    case FamilyKind::Hamming: hamming_rules(in, sink); break;
    default: intersecting_rules(in, sink); break;
    }
}

inline BoundReport BoundEngine::best_bound(const ConstraintSpec& spec)
{
    spec.validate();
    require(!spec.L.empty(), "L must be nonempty");
    require(spec.n >= 1, "n must be positive");
    require(spec.kind != FamilyKind::Antichain, "the rule table has no entry for plain antichains");

    BoundReport report;
    std::vector<BoundCertificate> certs;
    const std::int64_t n = spec.n;

    std::vector<std::int64_t> L = spec.normalized_L();
    FamilyKind kind = spec.kind;
    std::optional<PrimePower> pp = spec.modulus;
    std::optional<std::int64_t> lifted;

    if (kind == FamilyKind::IntersectingUniform) {
        const std::int64_t q = pp->q_small();
        const std::int64_t r = floor_mod(*spec.uniform_residue, q);
        if (2 * (q - 1) <= n) {
            certs.push_back({"R16", "Thm HR", {{"|A| = " + std::to_string(r) + " mod q and |A & B| != r mod q", true},
                                              {"2(q-1) <= n", true}},
                             BinomSum::make(n, q - 1, q - 1, SumColumn::N), {}});
        }
        else {
            report.rejected.push_back({"R16", "2(q-1) > n"});
        }
        L.clear();
        for (std::int64_t x = 0; x < q; ++x) {
            if (x != r) {
                L.push_back(x);
            }
        }
        kind = FamilyKind::Intersecting;
    }

    if (!pp) {
        // Values above n never occur, so they are dropped before lifting.
        const std::int64_t floor_value = kind == FamilyKind::Intersecting ? 0 : 1;
        L.erase(std::remove_if(L.begin(), L.end(), [&](std::int64_t l) { return l < floor_value || l > n; }),
                L.end());
        if (L.empty()) {
            BoundCertificate c{"R0", "no admissible pair", {{"no value of L lies in [0, n]", true}},
                               BinomSum::make(n, 0, 0, SumColumn::N), {}};
            c.auxiliary.note = "at most one member";
            report.best = c;
            report.ties = {c};
            report.certificates = {c};
            return report;
        }
        if (kind != FamilyKind::CloseSperner) {
            lifted = detail::smallest_prime_above(std::max(L.back(), n));
            pp = PrimePower(*lifted, 1);
        }
        else {
            pp = PrimePower(detail::smallest_prime_above(std::max(L.back(), n)), 1);
        }
    }
    report.lifted_prime = lifted;

    Input direct{kind, n, *pp, L, !spec.modular(), lifted, std::nullopt};
    Sink sink{direct, certs, report.rejected};
    run_kind(direct, sink);

    // A family satisfying the constraint for L also satisfies it for any
    // L' containing L when the constraint is pairwise membership in L.
    const bool relaxable = kind == FamilyKind::DiffSperner || kind == FamilyKind::Hamming
                           || kind == FamilyKind::CloseSperner;
    if (relaxable && options_.relax_to_superintervals) {
        const std::int64_t top = kind == FamilyKind::CloseSperner ? n : pp->q_small() - 1;
        const bool small = kind == FamilyKind::CloseSperner || search_allowed(*pp);
        if (small && L.back() <= top) {
            std::map<std::string, BoundCertificate> best_relaxed;
            for (std::int64_t lo = 1; lo <= L.front(); ++lo) {
                for (std::int64_t hi = L.back(); hi <= top; ++hi) {
                    if (hi - lo + 1 == static_cast<std::int64_t>(L.size())) {
                        continue;  // this is L itself
                    }
                    std::vector<std::int64_t> Lp;
                    for (auto x = lo; x <= hi; ++x) {
                        Lp.push_back(x);
                    }
                    std::vector<BoundCertificate> local;
                    std::vector<RejectedRule> ignored;
                    Input relaxed{kind, n, *pp, Lp, direct.exact, lifted, IntervalL{lo, hi}};
                    Sink rs{relaxed, local, ignored};
                    run_kind(relaxed, rs);
                    for (auto& c : local) {
                        auto it = best_relaxed.find(c.theorem_id);
                        if (it == best_relaxed.end() || certificate_before(c, it->second)) {
                            best_relaxed[c.theorem_id] = std::move(c);
                        }
                    }
                }
            }
            for (auto& [id, c] : best_relaxed) {
                certs.push_back(std::move(c));
            }
        }
    }

    std::stable_sort(certs.begin(), certs.end(), certificate_before);
    report.certificates = std::move(certs);
    report.best = report.certificates.front();
    for (const auto& c : report.certificates) {
        if (c.bound.value == report.best.bound.value) {
            report.ties.push_back(c);
        }
    }
    return report;
}

inline BoundReport best_bound(const ConstraintSpec& spec, const BoundOptions& options = {})
{
    BoundEngine engine(options);
    return engine.best_bound(spec);
}

// ---------------------------------------------------------------------------

struct SeparatingSearchRequest {
    std::size_t max_degree = 3;
    std::optional<RootWindow> window;
};

struct SeppolyBound {
    std::optional<BoundCertificate> certificate;
    std::string failure;
    std::optional<std::int64_t> failing_alpha;
    std::optional<std::int64_t> failing_class;
};

namespace detail {

struct SeppolySetup {
    PrimePower pp;
    std::vector<std::int64_t> L;
    std::optional<std::int64_t> lifted;
};

inline SeppolySetup seppoly_setup(const ConstraintSpec& spec)
{
    spec.validate();
    require(!spec.L.empty(), "L must be nonempty");
    require(spec.kind == FamilyKind::DiffSperner || spec.kind == FamilyKind::Hamming
                || spec.kind == FamilyKind::Intersecting,
            "separating-polynomial bounds apply to diff-sperner, hamming and intersecting");
    if (spec.modular()) {
        return {*spec.modulus, spec.normalized_L(), std::nullopt};
    }
    const auto L = spec.normalized_L();
    const std::int64_t p = smallest_prime_above(std::max(L.back(), static_cast<std::int64_t>(spec.n)));
    return {PrimePower(p, 1), L, p};
}

inline std::optional<std::int64_t> first_failing_class(const PrimePower& pp, const FactoredIntPoly& g,
                                                       std::int64_t alpha, const std::vector<std::int64_t>& L)
{
    const Valuation v0 = vp(pp, g.evaluate(alpha));
    for (auto l : L) {
        if (!(v0 < min_valuation_over_class(pp, g, l))) {
            return l;
        }
    }
    return std::nullopt;
}

inline SeppolyBound finish_zero(const ConstraintSpec& spec, const SeppolySetup& st, const FactoredIntPoly& g)
{
    SeppolyBound out;
    const auto report = check_separation(st.pp, g, 0, st.L);
    if (!report.separates) {
        out.failing_alpha = 0;
        out.failing_class = first_failing_class(st.pp, g, 0, st.L);
        out.failure = "g = " + g.to_string() + " does not separate 0 from L + qZ (class "
                      + std::to_string(*out.failing_class) + ": v_p(g(0)) = " + report.v0.to_string()
                      + ", class minimum " + report.class_minima.at(*out.failing_class).to_string() + ")";
        return out;
    }
    const auto d = static_cast<std::int64_t>(g.degree());
    const bool upgrade = spec.kind == FamilyKind::DiffSperner && report.any_shift_ok();
    BoundCertificate c;
    c.theorem_id = "R22";
    c.theorem = spec.kind == FamilyKind::Hamming ? "Prop Hamming" : "Prop p-adic";
    c.hypotheses.push_back({"g = " + g.to_string() + " separates 0 from L + qZ", true});
    if (upgrade) {
        c.hypotheses.push_back({"v_p(g(0)) <= v_p(g(u -/+ 1)) on L + qZ", true});
    }
    if (st.lifted) {
        c.hypotheses.insert(c.hypotheses.begin(), {"non-modular, lifted to p = " + std::to_string(*st.lifted), true});
    }
    c.bound = BinomSum::make(spec.n, 0, d, upgrade ? SumColumn::NMinus1 : SumColumn::N);
    c.auxiliary.poly = g;
    c.auxiliary.degree = d;
    c.auxiliary.lifted_prime = st.lifted;
    if (spec.kind == FamilyKind::Hamming && report.any_shift_ok()) {
        c.auxiliary.note = "shifted condition holds; the C(n-1, i) form is not applied to Hamming distances";
    }
    out.certificate = c;
    return out;
}

inline SeppolyBound finish_alpha(const ConstraintSpec& spec, const SeppolySetup& st,
                                 const std::map<std::int64_t, FactoredIntPoly>& per_alpha)
{
    SeppolyBound out;
    const std::int64_t q = st.pp.q_small();
    std::int64_t d = 0;
    for (std::int64_t alpha = 0; alpha < q; ++alpha) {
        if (std::binary_search(st.L.begin(), st.L.end(), alpha)) {
            continue;
        }
        auto it = per_alpha.find(alpha);
        if (it == per_alpha.end()) {
            out.failing_alpha = alpha;
            out.failure = "no separating polynomial for alpha = " + std::to_string(alpha);
            return out;
        }
        if (!separates(st.pp, it->second, alpha, st.L)) {
            out.failing_alpha = alpha;
            out.failing_class = first_failing_class(st.pp, it->second, alpha, st.L);
            out.failure = "g_" + std::to_string(alpha) + " = " + it->second.to_string() + " does not separate "
                          + std::to_string(alpha) + " from L + qZ"
                          + (out.failing_class ? " (class " + std::to_string(*out.failing_class) + ")" : "");
            return out;
        }
        d = std::max(d, static_cast<std::int64_t>(it->second.degree()));
    }
    BoundCertificate c;
    c.theorem_id = "R22";
    c.theorem = "Lemma 01";
    c.hypotheses.push_back(
        {"each alpha not in L mod q is separated from L + qZ by a polynomial of degree <= " + std::to_string(d), true});
    if (st.lifted) {
        c.hypotheses.insert(c.hypotheses.begin(), {"non-modular, lifted to p = " + std::to_string(*st.lifted), true});
    }
    c.bound = BinomSum::make(spec.n, 0, d, SumColumn::N);
    c.auxiliary.degree = d;
    c.auxiliary.lifted_prime = st.lifted;
    out.certificate = c;
    return out;
}

}  // namespace detail

/// Diff-sperner and hamming: g must separate 0 from L + qZ. Intersecting: g
/// is read as h and each alpha gets g_alpha(y) = h(alpha - y).
inline SeppolyBound bound_from_seppoly(const ConstraintSpec& spec, const FactoredIntPoly& g)
{
    require(g.lead != 0, "polynomial must be nonzero");
    const auto st = detail::seppoly_setup(spec);
    if (spec.kind != FamilyKind::Intersecting) {
        return detail::finish_zero(spec, st, g);
    }
    std::map<std::int64_t, FactoredIntPoly> per_alpha;
    for (std::int64_t alpha = 0; alpha < st.pp.q_small(); ++alpha) {
        per_alpha.emplace(alpha, detail::reflect(g, alpha));
    }
    return detail::finish_alpha(spec, st, per_alpha);
}

inline SeppolyBound bound_from_seppoly(const ConstraintSpec& spec,
                                       const std::map<std::int64_t, FactoredIntPoly>& per_alpha)
{
    const auto st = detail::seppoly_setup(spec);
    require(spec.kind == FamilyKind::Intersecting, "per-alpha polynomials apply to intersecting systems");
    return detail::finish_alpha(spec, st, per_alpha);
}

inline SeppolyBound bound_from_seppoly(const ConstraintSpec& spec, const SeparatingSearchRequest& request)
{
    const auto st = detail::seppoly_setup(spec);
    if (spec.kind != FamilyKind::Intersecting) {
        auto hit = search_min_degree(st.pp, 0, st.L, request.max_degree, request.window);
        if (!hit) {
            SeppolyBound out;
            out.failing_alpha = 0;
            out.failure = "no separating polynomial of degree <= " + std::to_string(request.max_degree) + " found";
            return out;
        }
        return detail::finish_zero(spec, st, hit->poly);
    }
    std::map<std::int64_t, FactoredIntPoly> per_alpha;
    for (std::int64_t alpha = 0; alpha < st.pp.q_small(); ++alpha) {
        if (std::binary_search(st.L.begin(), st.L.end(), alpha)) {
            continue;
        }
        auto hit = search_min_degree(st.pp, alpha, st.L, request.max_degree, request.window);
        if (!hit) {
            SeppolyBound out;
            out.failing_alpha = alpha;
            out.failure = "no polynomial of degree <= " + std::to_string(request.max_degree) + " separates alpha = "
                          + std::to_string(alpha);
            return out;
        }
        per_alpha.emplace(alpha, hit->poly);
    }
    return detail::finish_alpha(spec, st, per_alpha);
}

}  // namespace sperner
