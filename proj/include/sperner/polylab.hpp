#pragma once

// Proof polynomials of the linear-algebra bounds, evaluated on
// characteristic vectors, with an exact independence check.

#include "sperner/bareiss.hpp"
#include "sperner/multilinear.hpp"
#include "sperner/seppoly.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace sperner {

enum class ProofKind { DiffSperner, Hamming, MidbandSym, MidbandClose };

inline std::string proof_kind_name(ProofKind k)
{
    switch (k) {
    case ProofKind::DiffSperner: return "diff-sperner";
    case ProofKind::Hamming: return "hamming";
    case ProofKind::MidbandSym: return "midband-sym";
    case ProofKind::MidbandClose: return "midband-close";
    }
    return "?";
}

/// Which shifted hypothesis the F block relies on: v_p(g(0)) <= v_p(g(u-1))
/// gives f_j = (x_n - 1) I_j, v_p(g(0)) <= v_p(g(u+1)) gives f_j = x_n I_j.
enum class ShiftVariant { Minus, Plus };

enum class ProbeKind {
    V,  // member A_i
    U,  // A_k with x_n flipped
    W,  // F-block set B_j
    Z,  // H-block set C_k
};

struct Probe {
    ProbeKind kind;
    std::size_t index;  // 1-based within its kind
    SetMask point;

    std::string label() const
    {
        static const char* names[] = {"v", "u", "w", "z"};
        return names[static_cast<int>(kind)] + std::to_string(index);
    }
};

struct ProofSystem {
    ProofKind kind = ProofKind::DiffSperner;
    /// Members in the order the construction uses.
    SetFamily family;
    int n = 0;
    int degree_cap = 0;
    FactoredIntPoly g;
    std::optional<PrimePower> modulus;
    std::optional<ShiftVariant> shift;
    /// Number of leading members that do not contain n.
    std::size_t r = 0;
    std::vector<MultilinearPoly> P;
    std::vector<MultilinearPoly> F;
    std::vector<MultilinearPoly> H;
    std::vector<SetMask> F_sets;
    std::vector<SetMask> H_sets;
    std::vector<Probe> probes;
    /// Rows P, F, H in order; one column per probe.
    IntMatrix M;

    std::size_t total() const { return P.size() + F.size() + H.size(); }

    const MultilinearPoly& row(std::size_t i) const
    {
        if (i < P.size()) {
            return P[i];
        }
        i -= P.size();
        return i < F.size() ? F[i] : H.at(i - F.size());
    }

    std::string row_label(std::size_t i) const
    {
        if (i < P.size()) {
            return "p" + std::to_string(i + 1);
        }
        i -= P.size();
        return i < F.size() ? "f" + std::to_string(i + 1) : "h" + std::to_string(i - F.size() + 1);
    }

    std::optional<std::size_t> probe_column(ProbeKind kind, std::size_t index) const
    {
        for (std::size_t c = 0; c < probes.size(); ++c) {
            if (probes[c].kind == kind && probes[c].index == index) {
                return c;
            }
        }
        return std::nullopt;
    }
};

namespace detail {

/// Subsets of [m] with at most max_size elements, by size then mask.
inline std::vector<SetMask> small_subsets(int m, int max_size)
{
    std::vector<SetMask> out;
    for (int size = 0; size <= std::min(max_size, m); ++size) {
        for (SetMask a = 0; a <= full_mask(m); ++a) {
            if (set_size(a) == size) {
                out.push_back(a);
            }
        }
    }
    return out;
}

inline Expr monomial_expr(SetMask S)
{
    Expr e = Expr::constant(1);
    for (int j = 0; j < kMaxGround; ++j) {
        if ((S >> j) & 1U) {
            e = e * Expr::var(j + 1);
        }
    }
    return e;
}

/// c + sum_{j in S} a x_j.
inline Expr linear_expr(int n, const Rational& c, SetMask S, const Rational& a)
{
    std::vector<Rational> coeffs(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < n; ++j) {
        if ((S >> j) & 1U) {
            coeffs[static_cast<std::size_t>(j)] = a;
        }
    }
    return Expr::affine(c, coeffs);
}

/// g(y) with y replaced by an expression.
inline Expr compose(const FactoredIntPoly& g, const Expr& y)
{
    Expr e = Expr::constant(Rational(g.lead));
    for (const auto& r : g.roots) {
        e = e * (y + Expr::constant(Rational(-r)));
    }
    return e;
}

/// prod_{k=lo..hi} (sum_{j in S} x_j - k).
inline Expr level_product(int n, SetMask S, int lo, int hi)
{
    Expr e = Expr::constant(1);
    for (int k = lo; k <= hi; ++k) {
        e = e * linear_expr(n, -k, S, 1);
    }
    return e;
}

inline BigInt as_integer(const Rational& v)
{
    require(denominator(v) == 1, "proof polynomial value " + v.str() + " is not an integer");
    return numerator(v);
}

/// Value at every point of {0,1}^n, by the subset-sum transform.
inline std::vector<BigInt> value_table(const MultilinearPoly& f)
{
    const int n = f.n();
    std::vector<BigInt> table(std::size_t{1} << n, 0);
    for (const auto& [S, c] : f.coeffs()) {
        table[S] = as_integer(c);
    }
    for (int j = 0; j < n; ++j) {
        const SetMask bit = SetMask{1} << j;
        for (SetMask S = 0; S < table.size(); ++S) {
            if (S & bit) {
                table[S] += table[S & ~bit];
            }
        }
    }
    return table;
}

inline void fill_matrix(ProofSystem& sys)
{
    sys.M.assign(sys.total(), std::vector<BigInt>(sys.probes.size(), 0));
    for (std::size_t i = 0; i < sys.total(); ++i) {
        const MultilinearPoly& f = sys.row(i);
        require(f.degree() <= sys.degree_cap,
                sys.row_label(i) + " has degree " + std::to_string(f.degree()) + " above the cap " +
                    std::to_string(sys.degree_cap));
        const auto table = value_table(f);
        for (std::size_t c = 0; c < sys.probes.size(); ++c) {
            sys.M[i][c] = table[sys.probes[c].point];
        }
    }
}

/// Members without n first, keeping the input order within each part.
inline std::vector<SetMask> relabel_by_last_element(const SetFamily& fam, std::size_t& r)
{
    const SetMask last = SetMask{1} << (fam.n() - 1);
    std::vector<SetMask> members = fam.members();
    auto mid = std::stable_partition(members.begin(), members.end(), [last](SetMask a) { return (a & last) == 0; });
    r = static_cast<std::size_t>(mid - members.begin());
    return members;
}

inline void add_member_probes(ProofSystem& sys)
{
    for (std::size_t i = 0; i < sys.family.size(); ++i) {
        sys.probes.push_back({ProbeKind::V, i + 1, sys.family[i]});
    }
}

/// P block g(|A_i| - v.x) and the shifted F block over B_j in [n-1], |B_j| < d.
inline void add_sperner_blocks(ProofSystem& sys, ShiftVariant variant)
{
    const int n = sys.n;
    const int d = sys.degree_cap;
    const SetMask last = SetMask{1} << (n - 1);
    for (SetMask a : sys.family.members()) {
        const Expr y = linear_expr(n, set_size(a), a, -1);
        sys.P.push_back(multilinear_reduce(compose(sys.g, y), n));
    }
    sys.shift = variant;
    sys.F_sets = small_subsets(n - 1, d - 1);
    const Expr xn = Expr::var(n);
    const Expr factor = variant == ShiftVariant::Minus ? xn + Expr::constant(-1) : xn;
    for (SetMask b : sys.F_sets) {
        sys.F.push_back(multilinear_reduce(factor * monomial_expr(b), n));
    }
    add_member_probes(sys);
    for (std::size_t k = 0; k < sys.family.size(); ++k) {
        const bool has_n = (sys.family[k] & last) != 0;
        if (variant == ShiftVariant::Minus && !has_n) {
            sys.probes.push_back({ProbeKind::U, k + 1, sys.family[k] | last});
        }
        if (variant == ShiftVariant::Plus && has_n) {
            sys.probes.push_back({ProbeKind::U, k + 1, sys.family[k] & ~last});
        }
    }
    // x_n I_j only sees points with x_n = 1.
    const SetMask lift = variant == ShiftVariant::Plus ? last : 0;
    for (std::size_t j = 0; j < sys.F_sets.size(); ++j) {
        sys.probes.push_back({ProbeKind::W, j + 1, sys.F_sets[j] | lift});
    }
}

}  // namespace detail

/// The F-block variant whose hypothesis g satisfies at 0, Minus preferred.
inline std::optional<ShiftVariant> preferred_shift(const PrimePower& pp, const FactoredIntPoly& g,
                                                   const std::vector<std::int64_t>& L)
{
    const SeparationReport rep = check_separation(pp, g, 0, L);
    if (rep.shifted_minus_ok) {
        return ShiftVariant::Minus;
    }
    if (rep.shifted_plus_ok) {
        return ShiftVariant::Plus;
    }
    return std::nullopt;
}

inline ProofSystem build_diff_sperner_system(const SetFamily& fam, const FactoredIntPoly& g, const PrimePower& q,
                                             ShiftVariant variant = ShiftVariant::Minus)
{
    require(fam.n() >= 1, "the construction needs n >= 1");
    ProofSystem sys;
    sys.kind = ProofKind::DiffSperner;
    sys.n = fam.n();
    sys.degree_cap = static_cast<int>(g.degree());
    sys.g = g;
    sys.modulus = q;
    sys.family = SetFamily(fam.n(), detail::relabel_by_last_element(fam, sys.r));
    detail::add_sperner_blocks(sys, variant);
    detail::fill_matrix(sys);
    return sys;
}

/// P block only, from g(|A_i| + 1.x - 2 v.x), so p_i(v_j) = g(|A_i xor A_j|).
inline ProofSystem build_hamming_system(const SetFamily& fam, const FactoredIntPoly& g, const PrimePower& q)
{
    ProofSystem sys;
    sys.kind = ProofKind::Hamming;
    sys.n = fam.n();
    sys.degree_cap = static_cast<int>(g.degree());
    sys.g = g;
    sys.modulus = q;
    sys.family = fam;
    const SetMask all = full_mask(sys.n);
    for (SetMask a : fam.members()) {
        // |A| + sum_{j not in A} x_j - sum_{j in A} x_j
        Expr y = detail::linear_expr(sys.n, set_size(a), all & ~a, 1) + detail::linear_expr(sys.n, 0, a, -1);
        sys.P.push_back(multilinear_reduce(detail::compose(g, y), sys.n));
    }
    detail::add_member_probes(sys);
    detail::fill_matrix(sys);
    return sys;
}

enum class MidbandVariant { Sym, Close };

/// SYM: P and minus-F blocks for g = prod_{l=1..s} (y - l), plus
/// h_k = Q * x^{C_k} with Q = prod_{k=s-1}^{n-s} (x_1 + ... + x_{n-1} - k).
/// CLOSE: members by size descending, P block prod_{l=1..s} (|A_i| - v.x - l)
/// and the H block Q * x^{B_i} with Q = prod_{k=s}^{n-s} (x_1 + ... + x_n - k).
inline ProofSystem build_midband_system(const SetFamily& fam, int s, MidbandVariant variant)
{
    const int n = fam.n();
    const bool sym = variant == MidbandVariant::Sym;
    if (sym) {
        require(3 * s >= n + 2 && 2 * s <= n, "SYM systems need (n+2)/3 <= s <= n/2");
    } else {
        require(3 * s >= n + 1 && 2 * s <= n, "CLOSE systems need (n+1)/3 <= s <= n/2");
    }
    for (SetMask a : fam.members()) {
        require(s <= set_size(a) && set_size(a) <= n - s,
                "member " + format_set(a) + " lies outside the band " + std::to_string(s) + " <= |A| <= " +
                    std::to_string(n - s) + "; run push_to_middle first");
    }
    ProofSystem sys;
    sys.kind = sym ? ProofKind::MidbandSym : ProofKind::MidbandClose;
    sys.n = n;
    sys.degree_cap = s;
    for (int l = 1; l <= s; ++l) {
        sys.g.roots.emplace_back(l);
    }

    if (sym) {
        sys.family = SetFamily(n, detail::relabel_by_last_element(fam, sys.r));
        detail::add_sperner_blocks(sys, ShiftVariant::Minus);
        const SetMask lower = full_mask(n - 1);
        const Expr Q = detail::level_product(n, lower, s - 1, n - s);
        sys.H_sets = detail::small_subsets(n - 1, 3 * s - n - 2);
        for (SetMask c : sys.H_sets) {
            sys.H.push_back(multilinear_reduce(Q * detail::monomial_expr(c), n));
        }
        for (std::size_t k = 0; k < sys.H_sets.size(); ++k) {
            sys.probes.push_back({ProbeKind::Z, k + 1, sys.H_sets[k]});
        }
    } else {
        std::vector<SetMask> members = fam.members();
        std::stable_sort(members.begin(), members.end(),
                         [](SetMask a, SetMask b) { return set_size(a) > set_size(b); });
        sys.family = SetFamily(n, std::move(members));
        for (SetMask a : sys.family.members()) {
            const Expr y = detail::linear_expr(n, set_size(a), a, -1);
            sys.P.push_back(multilinear_reduce(detail::compose(sys.g, y), n));
        }
        const Expr Q = detail::level_product(n, full_mask(n), s, n - s);
        sys.H_sets = detail::small_subsets(n, 3 * s - n - 1);
        for (SetMask b : sys.H_sets) {
            sys.H.push_back(multilinear_reduce(Q * detail::monomial_expr(b), n));
        }
        detail::add_member_probes(sys);
        for (std::size_t k = 0; k < sys.H_sets.size(); ++k) {
            sys.probes.push_back({ProbeKind::W, k + 1, sys.H_sets[k]});
        }
    }
    detail::fill_matrix(sys);
    return sys;
}

struct PatternViolation {
    std::size_t row = 0;
    std::size_t column = 0;
    BigInt value;
    Valuation valuation;
    std::string reason;
};

struct RankReport {
    std::size_t rank = 0;
    std::size_t expected = 0;   // m + t + T
    std::size_t dimension = 0;  // multilinear monomials of degree <= d
    bool full_rank = false;
    /// "mod-prime" when a full rank modulo a large prime settles it.
    std::string method;
    /// Integer weights on the rows (P, F, H order) summing to zero.
    std::optional<std::vector<BigInt>> kernel;

    BigInt prime;
    bool pattern_applicable = false;
    bool pattern_ok = true;
    Valuation v0;
    std::optional<PatternViolation> offending;

    std::vector<std::string> law_failures;

    bool laws_ok() const { return law_failures.empty(); }
};

namespace detail {

inline constexpr std::uint64_t kRankPrime = 2147483647;  // 2^31 - 1

inline IntMatrix coefficient_matrix(const ProofSystem& sys, std::size_t& dimension)
{
    const auto basis = small_subsets(sys.n, sys.degree_cap);
    dimension = basis.size();
    std::vector<std::size_t> column(std::size_t{1} << sys.n, 0);
    for (std::size_t c = 0; c < basis.size(); ++c) {
        column[basis[c]] = c;
    }
    IntMatrix A(sys.total(), std::vector<BigInt>(basis.size(), 0));
    for (std::size_t i = 0; i < sys.total(); ++i) {
        const MultilinearPoly& f = sys.row(i);
        BigInt scale = 1;
        for (const auto& [S, c] : f.coeffs()) {
            scale = boost::multiprecision::lcm(scale, BigInt(denominator(c)));
        }
        for (const auto& [S, c] : f.coeffs()) {
            A[i][column[S]] = numerator(c) * (scale / denominator(c));
        }
    }
    return A;
}

class LawChecker {
public:
    LawChecker(const ProofSystem& sys, RankReport& report) : sys_(sys), report_(report) {}

    const BigInt& at(std::size_t row, ProbeKind kind, std::size_t index) const
    {
        return sys_.M[row][*sys_.probe_column(kind, index)];
    }

    void expect(bool ok, const std::string& what)
    {
        if (!ok) {
            report_.law_failures.push_back(what);
        }
    }

    /// Rows base..base+count-1 against probes of `kind`: nonzero diagonal,
    /// zero above it (row j, probe i, j > i).
    void triangular(std::size_t base, std::size_t count, ProbeKind kind, const std::string& name)
    {
        for (std::size_t i = 0; i < count; ++i) {
            expect(at(base + i, kind, i + 1) != 0, name + ": " + sys_.row_label(base + i) + " vanishes on its own set");
            for (std::size_t j = i + 1; j < count; ++j) {
                expect(at(base + j, kind, i + 1) == 0,
                       name + ": " + sys_.row_label(base + j) + " is nonzero at probe " + std::to_string(i + 1));
            }
        }
    }

    /// Rows base..base+count-1 vanish on every probe of the given kinds.
    void vanish(std::size_t base, std::size_t count, std::initializer_list<ProbeKind> kinds, const std::string& name)
    {
        for (std::size_t c = 0; c < sys_.probes.size(); ++c) {
            if (std::find(kinds.begin(), kinds.end(), sys_.probes[c].kind) == kinds.end()) {
                continue;
            }
            for (std::size_t i = base; i < base + count; ++i) {
                expect(sys_.M[i][c] == 0, name + ": " + sys_.row_label(i) + " is nonzero at " + sys_.probes[c].label());
            }
        }
    }

private:
    const ProofSystem& sys_;
    RankReport& report_;
};

inline void check_pattern(const ProofSystem& sys, const BigInt& p, RankReport& report)
{
    report.pattern_applicable = sys.kind != ProofKind::MidbandClose;
    if (!report.pattern_applicable) {
        return;
    }
    report.v0 = vp(p, sys.g.evaluate(0));
    const std::size_t m = sys.P.size();
    for (std::size_t i = 0; i < m && report.pattern_ok; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t col = *sys.probe_column(ProbeKind::V, j + 1);
            const BigInt& value = sys.M[i][col];
            const Valuation v = vp(p, value);
            const bool ok = i == j ? v == report.v0 : report.v0 < v;
            if (!ok) {
                report.pattern_ok = false;
                report.offending = PatternViolation{
                    i, col, value, v,
                    i == j ? "diagonal valuation differs from v_p(g(0))"
                           : "off-diagonal valuation " + v.to_string() + " is not above v_p(g(0)) = " +
                                 report.v0.to_string()};
                break;
            }
        }
    }
}

inline void check_laws(const ProofSystem& sys, RankReport& report)
{
    LawChecker law(sys, report);
    const std::size_t m = sys.P.size();
    for (std::size_t i = 0; i < m && sys.kind != ProofKind::MidbandClose; ++i) {
        law.expect(law.at(i, ProbeKind::V, i + 1) == sys.g.evaluate(0), "diagonal: " + sys.row_label(i) + " differs from g(0)");
    }
    if (sys.kind == ProofKind::DiffSperner || sys.kind == ProofKind::MidbandSym) {
        law.triangular(m, sys.F.size(), ProbeKind::W, "F triangular");
        // (x_n - 1) vanishes where x_n = 1; x_n vanishes where x_n = 0.
        const SetMask last = SetMask{1} << (sys.n - 1);
        const bool minus = sys.shift == ShiftVariant::Minus;
        for (std::size_t c = 0; c < sys.probes.size(); ++c) {
            const Probe& pr = sys.probes[c];
            if (pr.kind != ProbeKind::V && pr.kind != ProbeKind::U) {
                continue;
            }
            if (((pr.point & last) != 0) == minus) {
                for (std::size_t j = 0; j < sys.F.size(); ++j) {
                    law.expect(sys.M[m + j][c] == 0, "F vanishing: " + sys.row_label(m + j) + " is nonzero at " + pr.label());
                }
            }
        }
        // p_k takes the value g(0) at its shifted vector too.
        for (std::size_t c = 0; c < sys.probes.size(); ++c) {
            const Probe& pr = sys.probes[c];
            if (pr.kind == ProbeKind::U) {
                law.expect(sys.M[pr.index - 1][c] == sys.g.evaluate(0),
                           "shift: " + sys.row_label(pr.index - 1) + " differs from g(0) at " + pr.label());
            }
        }
    }
    if (sys.kind == ProofKind::MidbandSym) {
        const std::size_t base = m + sys.F.size();
        law.triangular(base, sys.H.size(), ProbeKind::Z, "H triangular");
        law.vanish(base, sys.H.size(), {ProbeKind::V, ProbeKind::U}, "H vanishing");
    }
    if (sys.kind == ProofKind::MidbandClose) {
        law.triangular(0, m, ProbeKind::V, "CLOSE diagonal");
        law.triangular(m, sys.H.size(), ProbeKind::W, "H triangular");
        law.vanish(m, sys.H.size(), {ProbeKind::V}, "H vanishing");
    }
}

}  // namespace detail

/// Exact rank of the coefficient matrix over Q, the p-adic diagonal pattern of
/// the member evaluations, and the vanishing/triangular laws of each block.
inline RankReport verify_independence(const ProofSystem& sys, const BigInt& p)
{
    detail::require_prime(p);
    RankReport report;
    report.prime = p;
    report.expected = sys.total();
    const IntMatrix A = detail::coefficient_matrix(sys, report.dimension);

    // Rank over Q is at least the rank modulo any prime.
    if (!A.empty() && rank_mod_prime(A, detail::kRankPrime) == A.size()) {
        report.rank = A.size();
        report.method = "mod-prime";
    } else {
        const EliminationResult elim = bareiss_rank(A, true);
        report.rank = elim.rank;
        report.kernel = elim.left_kernel;
        report.method = "bareiss";
    }
    report.full_rank = report.rank == report.expected;

    detail::check_pattern(sys, p, report);
    detail::check_laws(sys, report);
    return report;
}

}  // namespace sperner
