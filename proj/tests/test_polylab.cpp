#include "sperner/polylab.hpp"
#include "sperner/push.hpp"
#include "sperner/search.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sperner;

namespace {

ConstraintSpec diff_spec(int q, std::vector<std::int64_t> L, int n)
{
    ConstraintSpec spec;
    spec.kind = FamilyKind::DiffSperner;
    spec.L = std::move(L);
    spec.modulus = PrimePower::from_modulus(q);
    spec.n = n;
    return spec;
}

std::size_t sum_binom(int N, int lo, int hi)
{
    std::size_t total = 0;
    for (int i = lo; i <= hi; ++i) {
        total += binomial(N, i).convert_to<std::size_t>();
    }
    return total;
}

Expr random_expr(std::mt19937& rng, int n, int depth)
{
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 4);
    std::uniform_int_distribution<int> var(1, n);
    std::uniform_int_distribution<int> small(-3, 3);
    switch (pick(rng)) {
    case 0: return Expr::constant(small(rng));
    case 1: return Expr::var(var(rng));
    case 2: return random_expr(rng, n, depth - 1) + random_expr(rng, n, depth - 1);
    case 3: return random_expr(rng, n, depth - 1) * random_expr(rng, n, depth - 1);
    default: {
        std::vector<Rational> a(static_cast<std::size_t>(n));
        for (auto& c : a) {
            c = small(rng);
        }
        return pow(Expr::affine(small(rng), a), static_cast<unsigned>(std::uniform_int_distribution<int>(0, 3)(rng)));
    }
    }
}

}  // namespace

TEST(MultilinearReduce, Examples)
{
    const Expr x1 = Expr::var(1);
    const Expr x2 = Expr::var(2);
    EXPECT_EQ(multilinear_reduce(pow(x1, 2) * x2), MultilinearPoly::monomial(2, 0b11));

    const MultilinearPoly sq = multilinear_reduce(pow(x1 + x2, 2));
    EXPECT_EQ(sq.coefficient(0b01), 1);
    EXPECT_EQ(sq.coefficient(0b10), 1);
    EXPECT_EQ(sq.coefficient(0b11), 2);
    EXPECT_EQ(sq.coeffs().size(), 3U);
    for (SetMask pt = 0; pt < 4; ++pt) {
        EXPECT_EQ(sq.evaluate(pt), evaluate(pow(x1 + x2, 2), pt));
    }

    const MultilinearPoly five = multilinear_reduce(Expr::constant(5));
    EXPECT_EQ(five.degree(), 0);
    EXPECT_EQ(five.coefficient(0), 5);
    EXPECT_EQ(MultilinearPoly(3).degree(), -1);
}

TEST(MultilinearReduce, AgreesOnBooleanCubeRandomized)
{
    std::mt19937 rng(20240611);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 10;
        const Expr e = random_expr(rng, n, 4);
        const MultilinearPoly f = multilinear_reduce(e, n);
        for (const auto& [S, c] : f.coeffs()) {
            ASSERT_EQ(S & ~full_mask(n), 0U);
        }
        for (SetMask pt = 0; pt <= full_mask(n); ++pt) {
            ASSERT_EQ(f.evaluate(pt), evaluate(e, pt)) << "trial " << trial << " point " << pt;
        }
    }
}

TEST(MultilinearReduce, RejectsVariablesBeyondN)
{
    EXPECT_THROW(multilinear_reduce(Expr::var(4), 3), PreconditionViolation);
    EXPECT_THROW(MultilinearPoly(17), PreconditionViolation);
    EXPECT_EQ(MultilinearPoly::variable(3, 2).to_string(), "x2");
    EXPECT_EQ((MultilinearPoly::variable(3, 1) - MultilinearPoly::constant(3, 2)).to_string(), "-2 + x1");
}

TEST(Bareiss, RankAndKernel)
{
    const IntMatrix A = {{1, 2, 3}, {2, 4, 6}, {0, 1, 1}, {1, 3, 4}};
    const auto r = bareiss_rank(A, true);
    EXPECT_EQ(r.rank, 2U);
    EXPECT_EQ(r.pivot_rows, (std::vector<std::size_t>{0, 2}));
    ASSERT_TRUE(r.left_kernel.has_value());
    const auto& w = *r.left_kernel;
    for (std::size_t c = 0; c < 3; ++c) {
        BigInt s = 0;
        for (std::size_t i = 0; i < A.size(); ++i) {
            s += w[i] * A[i][c];
        }
        EXPECT_EQ(s, 0);
    }
    EXPECT_TRUE(std::any_of(w.begin(), w.end(), [](const BigInt& x) { return x != 0; }));
    EXPECT_EQ(rank_mod_prime(A, 2147483647), 2U);
    // Full rank over Q, deficient modulo 3.
    EXPECT_EQ(bareiss_rank({{1, 1}, {1, 4}}).rank, 2U);
    EXPECT_EQ(rank_mod_prime({{1, 1}, {1, 4}}, 3), 1U);
    EXPECT_EQ(bareiss_rank({}).rank, 0U);
}

TEST(Bareiss, MatchesModularRankOnRandomMatrices)
{
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> entry(-2, 2);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = 1 + trial % 7;
        const std::size_t cols = 1 + (trial / 7) % 6;
        IntMatrix A(rows, std::vector<BigInt>(cols));
        for (auto& row : A) {
            for (auto& x : row) {
                x = entry(rng) * entry(rng);
            }
        }
        if (rows > 2) {
            A[rows - 1] = A[0];
            for (std::size_t c = 0; c < cols; ++c) {
                A[rows - 1][c] += 3 * A[1][c];
            }
        }
        const auto r = bareiss_rank(A, true);
        EXPECT_EQ(r.rank, rank_mod_prime(A, 1000000007));
        EXPECT_EQ(r.left_kernel.has_value(), r.rank < rows);
    }
}

TEST(DiffSystem, SmallExampleMatrix)
{
    const PrimePower q = PrimePower::from_modulus(3);
    const FactoredIntPoly g = canonical_interval_poly({1, 2});
    const ProofSystem sys = build_diff_sperner_system(SetFamily(2, {0b01, 0b10}), g, q);
    ASSERT_EQ(sys.P.size(), 2U);
    EXPECT_EQ(sys.r, 1U);
    const auto v1 = *sys.probe_column(ProbeKind::V, 1);
    const auto v2 = *sys.probe_column(ProbeKind::V, 2);
    EXPECT_EQ(sys.M[0][v1], 2);
    EXPECT_EQ(sys.M[0][v2], 0);
    EXPECT_EQ(sys.M[1][v1], 0);
    EXPECT_EQ(sys.M[1][v2], 2);
    // F members for B = {} and {1}, one shifted probe for {1} + {2}.
    EXPECT_EQ(sys.F.size(), 2U);
    EXPECT_EQ(sys.probes.size(), 2U + 1U + 2U);
    const auto rep = verify_independence(sys, 3);
    EXPECT_TRUE(rep.full_rank);
    EXPECT_TRUE(rep.pattern_ok);
    EXPECT_TRUE(rep.laws_ok());
}

TEST(DiffSystem, RelabelsMembersWithoutNFirst)
{
    const PrimePower q = PrimePower::from_modulus(4);
    const SetFamily fam(4, {0b1001, 0b0110, 0b1010, 0b0011});
    const ProofSystem sys = build_diff_sperner_system(fam, canonical_interval_poly({1, 2, 3}), q);
    EXPECT_EQ(sys.r, 2U);
    EXPECT_EQ(sys.family.members(), (std::vector<SetMask>{0b0110, 0b0011, 0b1001, 0b1010}));
}

TEST(DiffSystem, FBlockCountAndDiagonal)
{
    const PrimePower q = PrimePower::from_modulus(5);
    for (int n = 1; n <= 7; ++n) {
        for (int d = 1; d <= 4; ++d) {
            std::vector<std::int64_t> L;
            for (int l = 1; l <= d; ++l) {
                L.push_back(l);
            }
            const SetFamily fam = uniform_family(n, n / 2);
            const ProofSystem sys = build_diff_sperner_system(fam, canonical_interval_poly(L), q);
            EXPECT_EQ(sys.F.size(), sum_binom(n - 1, 0, d - 1));
            const BigInt g0 = sys.g.evaluate(0);
            for (std::size_t i = 0; i < fam.size(); ++i) {
                EXPECT_EQ(sys.M[i][*sys.probe_column(ProbeKind::V, i + 1)], g0);
            }
        }
    }
}

TEST(DiffSystem, EvaluationMatchesSetDifferences)
{
    const PrimePower q = PrimePower::from_modulus(7);
    const FactoredIntPoly g = canonical_interval_poly({1, 3, 4});
    const SetFamily fam(5, {0b00111, 0b11000, 0b10101, 0b01110, 0b00001});
    const ProofSystem sys = build_diff_sperner_system(fam, g, q);
    for (std::size_t i = 0; i < fam.size(); ++i) {
        for (std::size_t j = 0; j < fam.size(); ++j) {
            const SetMask ai = sys.family[i];
            const SetMask aj = sys.family[j];
            EXPECT_EQ(sys.M[i][*sys.probe_column(ProbeKind::V, j + 1)], g.evaluate(set_size(ai & ~aj)));
        }
    }
}

TEST(DiffSystem, WitnessesHaveFullRank)
{
    struct Case {
        int q;
        std::vector<std::int64_t> L;
        int n;
    };
    const std::vector<Case> cases = {
        {4, {1, 2, 3}, 5}, {4, {3}, 6}, {3, {1, 2}, 6}, {5, {1, 2}, 5}, {8, {1, 2, 3}, 6}, {9, {4, 5}, 6}, {2, {1}, 7},
    };
    for (const auto& c : cases) {
        const ConstraintSpec spec = diff_spec(c.q, c.L, c.n);
        const SetFamily fam = max_family(spec).witness;
        const FactoredIntPoly g = canonical_interval_poly(c.L);
        const auto variant = preferred_shift(*spec.modulus, g, c.L);
        ASSERT_TRUE(variant.has_value()) << "q=" << c.q;
        const ProofSystem sys = build_diff_sperner_system(fam, g, *spec.modulus, *variant);
        const auto rep = verify_independence(sys, spec.modulus->p());
        EXPECT_TRUE(rep.full_rank) << "q=" << c.q << " n=" << c.n;
        EXPECT_EQ(rep.rank, fam.size() + sys.F.size());
        EXPECT_TRUE(rep.pattern_ok);
        EXPECT_TRUE(rep.laws_ok()) << rep.law_failures.front();
        // The dimension count behind the bound.
        EXPECT_LE(fam.size(), sum_binom(c.n - 1, 0, static_cast<int>(c.L.size())));
    }
}

TEST(DiffSystem, PlusVariantIsDependentOnAWitness)
{
    // Both shifted conditions hold here. The x_n I_j block still meets the
    // span of the p_i: on A_k - {n} the member polynomial p_k takes g(1).
    const ConstraintSpec spec = diff_spec(4, {1, 2, 3}, 5);
    const SetFamily fam = max_family(spec).witness;
    const FactoredIntPoly g = canonical_interval_poly(spec.L);
    const auto sep = check_separation(*spec.modulus, g, 0, spec.L);
    ASSERT_TRUE(sep.shifted_minus_ok && sep.shifted_plus_ok);

    const ProofSystem plus = build_diff_sperner_system(fam, g, *spec.modulus, ShiftVariant::Plus);
    const auto rep = verify_independence(plus, 2);
    EXPECT_EQ(rep.expected, 21U);
    EXPECT_EQ(rep.rank, 17U);
    ASSERT_TRUE(rep.kernel.has_value());
    MultilinearPoly combo(5);
    for (std::size_t i = 0; i < plus.total(); ++i) {
        MultilinearPoly term = plus.row(i);
        term *= Rational((*rep.kernel)[i]);
        combo += term;
    }
    EXPECT_TRUE(combo.is_zero());
    EXPECT_TRUE(std::any_of(rep.law_failures.begin(), rep.law_failures.end(),
                            [](const std::string& s) { return s.rfind("shift:", 0) == 0; }));
    // The F block itself is still triangular on B_j + {n}.
    EXPECT_TRUE(std::none_of(rep.law_failures.begin(), rep.law_failures.end(),
                             [](const std::string& s) { return s.rfind("F triangular", 0) == 0; }));
    std::size_t shifted = 0;
    for (const auto& pr : plus.probes) {
        shifted += pr.kind == ProbeKind::U ? 1 : 0;
    }
    EXPECT_EQ(shifted, fam.size() - plus.r);

    EXPECT_TRUE(verify_independence(build_diff_sperner_system(fam, g, *spec.modulus, ShiftVariant::Minus), 2).full_rank);
}

TEST(DiffSystem, EmptyFamilyHasRankT)
{
    const ProofSystem sys = build_diff_sperner_system(SetFamily(5), canonical_interval_poly({1, 2, 3}), PrimePower::from_modulus(4));
    const auto rep = verify_independence(sys, 2);
    EXPECT_EQ(rep.rank, sum_binom(4, 0, 2));
    EXPECT_TRUE(rep.full_rank);
    EXPECT_TRUE(rep.pattern_ok);
}

TEST(DiffSystem, ViolatedConstraintBreaksPattern)
{
    const ConstraintSpec spec = diff_spec(4, {1, 2, 3}, 5);
    SetFamily fam = max_family(spec).witness;
    // A and A + {x} differ by the empty set one way round.
    const SetMask a = fam[0];
    SetMask extra = 0;
    for (int x = 0; x < 5 && extra == 0; ++x) {
        const SetMask b = a | (SetMask{1} << x);
        if (b != a && !fam.contains(b)) {
            extra = b;
        }
    }
    ASSERT_NE(extra, 0U);
    std::vector<SetMask> members = fam.members();
    members.push_back(extra);
    const ProofSystem sys = build_diff_sperner_system(SetFamily(5, members), canonical_interval_poly(spec.L),
                                                      *spec.modulus);
    const auto rep = verify_independence(sys, 2);
    EXPECT_FALSE(rep.pattern_ok);
    ASSERT_TRUE(rep.offending.has_value());
    const SetMask row_set = sys.family[rep.offending->row];
    const SetMask col_set = sys.probes[rep.offending->column].point;
    EXPECT_EQ(set_size(row_set & ~col_set) % 4, 0);
}

TEST(DiffSystem, RankDoesNotDependOnPrime)
{
    const ConstraintSpec spec = diff_spec(3, {1, 2}, 5);
    const SetFamily fam = max_family(spec).witness;
    const ProofSystem sys = build_diff_sperner_system(fam, canonical_interval_poly(spec.L), *spec.modulus);
    const auto base = verify_independence(sys, 3);
    for (int p : {2, 5, 7, 101}) {
        EXPECT_EQ(verify_independence(sys, p).rank, base.rank);
    }
    EXPECT_THROW(verify_independence(sys, 4), PreconditionViolation);
}

TEST(DiffSystem, DependentRowsYieldKernel)
{
    // Too many members for the space: some integer relation must exist.
    const SetFamily fam = uniform_family(4, 2);
    const ProofSystem sys = build_diff_sperner_system(fam, canonical_interval_poly({1}), PrimePower::from_modulus(2));
    const auto rep = verify_independence(sys, 2);
    EXPECT_FALSE(rep.full_rank);
    EXPECT_EQ(rep.method, "bareiss");
    ASSERT_TRUE(rep.kernel.has_value());
    // The weights annihilate every evaluation column too.
    for (std::size_t c = 0; c < sys.probes.size(); ++c) {
        BigInt s = 0;
        for (std::size_t i = 0; i < sys.total(); ++i) {
            s += (*rep.kernel)[i] * sys.M[i][c];
        }
        EXPECT_EQ(s, 0);
    }
}

TEST(HammingSystem, SymmetricDifferenceValues)
{
    const PrimePower q = PrimePower::from_modulus(3);
    const FactoredIntPoly g = canonical_interval_poly({1, 2});
    ConstraintSpec spec = diff_spec(3, {1, 2}, 5);
    spec.kind = FamilyKind::Hamming;
    const SetFamily fam = max_family(spec).witness;
    const ProofSystem sys = build_hamming_system(fam, g, q);
    EXPECT_TRUE(sys.F.empty());
    for (std::size_t i = 0; i < fam.size(); ++i) {
        for (std::size_t j = 0; j < fam.size(); ++j) {
            EXPECT_EQ(sys.M[i][j], g.evaluate(set_size(fam[i] ^ fam[j])));
        }
    }
    const auto rep = verify_independence(sys, 3);
    EXPECT_TRUE(rep.full_rank);
    EXPECT_TRUE(rep.pattern_ok);
    EXPECT_LE(fam.size(), sum_binom(5, 0, 2));
}

TEST(MidbandSystem, SymCountAtN4)
{
    ConstraintSpec spec;
    spec.kind = FamilyKind::DiffSperner;
    spec.L = {1, 2};
    spec.n = 4;
    const SetFamily fam = push_to_middle(max_family(spec).witness, 2);
    ASSERT_TRUE(satisfies(spec, fam));
    const ProofSystem sys = build_midband_system(fam, 2, MidbandVariant::Sym);
    EXPECT_EQ(sys.F.size(), sum_binom(3, 0, 1));
    EXPECT_EQ(sys.H.size(), sum_binom(3, 0, 0));
    EXPECT_LE(sys.total(), sum_binom(4, 0, 2));
    const auto rep = verify_independence(sys, 5);
    EXPECT_TRUE(rep.full_rank);
    EXPECT_TRUE(rep.laws_ok()) << rep.law_failures.front();
    for (std::size_t i = 0; i < sys.total(); ++i) {
        EXPECT_LE(sys.row(i).degree(), 2);
    }
}

TEST(MidbandSystem, SymLargerBand)
{
    ConstraintSpec spec;
    spec.kind = FamilyKind::DiffSperner;
    spec.L = {1, 2, 3};
    spec.n = 7;
    const SetFamily fam = push_to_middle(max_family(spec).witness, 3);
    const ProofSystem sys = build_midband_system(fam, 3, MidbandVariant::Sym);
    EXPECT_EQ(sys.H.size(), sum_binom(6, 0, 0));
    const auto rep = verify_independence(sys, 11);
    EXPECT_TRUE(rep.full_rank);
    EXPECT_TRUE(rep.laws_ok()) << rep.law_failures.front();
    EXPECT_LE(fam.size(), sum_binom(6, 3 * 3 - 7 - 1, 3));
}

TEST(MidbandSystem, CloseTriangularLaws)
{
    ConstraintSpec spec;
    spec.kind = FamilyKind::CloseSperner;
    spec.L = {1, 2};
    spec.n = 5;
    const SetFamily fam = push_to_middle(max_family(spec).witness, 2);
    ASSERT_TRUE(satisfies(spec, fam));
    const ProofSystem sys = build_midband_system(fam, 2, MidbandVariant::Close);
    for (std::size_t i = 1; i < sys.family.size(); ++i) {
        EXPECT_GE(set_size(sys.family[i - 1]), set_size(sys.family[i]));
    }
    EXPECT_EQ(sys.H.size(), sum_binom(5, 0, 3 * 2 - 5 - 1));
    const auto rep = verify_independence(sys, 7);
    EXPECT_FALSE(rep.pattern_applicable);
    EXPECT_TRUE(rep.full_rank);
    EXPECT_TRUE(rep.laws_ok()) << rep.law_failures.front();
}

TEST(MidbandSystem, BandAndRangeErrors)
{
    const SetFamily low(4, {0b0001, 0b0110});
    try {
        build_midband_system(low, 2, MidbandVariant::Sym);
        FAIL() << "expected a band violation";
    } catch (const PreconditionViolation& e) {
        EXPECT_NE(std::string(e.what()).find("push_to_middle"), std::string::npos);
    }
    EXPECT_THROW(build_midband_system(SetFamily(6), 2, MidbandVariant::Sym), PreconditionViolation);
    EXPECT_THROW(build_midband_system(SetFamily(4), 3, MidbandVariant::Close), PreconditionViolation);
    EXPECT_NO_THROW(build_midband_system(SetFamily(5), 2, MidbandVariant::Close));
}
