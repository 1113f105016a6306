#pragma once

// Exact rank of integer matrices by fraction-free (Bareiss) elimination.

#include "sperner/integer.hpp"

#include <optional>
#include <vector>

namespace sperner {

using IntMatrix = std::vector<std::vector<BigInt>>;

struct EliminationResult {
    std::size_t rank = 0;
    /// Original indices of the rows that received a pivot, in order.
    std::vector<std::size_t> pivot_rows;
    /// Nonzero integer weights w with sum_i w_i * row_i = 0, when rank < rows
    /// and a kernel vector was requested.
    std::optional<std::vector<BigInt>> left_kernel;
};

/// Rows are processed in order; each pivot is the row's first nonzero entry.
/// A row that becomes zero is dependent on the rows above it.
inline EliminationResult bareiss_rank(IntMatrix A, bool want_kernel = false)
{
    EliminationResult out;
    const std::size_t rows = A.size();
    if (rows == 0) {
        return out;
    }
    const std::size_t cols = A.front().size();
    for (const auto& row : A) {
        require(row.size() == cols, "ragged matrix");
    }
    if (want_kernel) {
        for (std::size_t i = 0; i < rows; ++i) {
            A[i].resize(cols + rows, 0);
            A[i][cols + i] = 1;
        }
    }
    const std::size_t width = A.front().size();
    BigInt prev = 1;
    for (std::size_t i = 0; i < rows; ++i) {
        std::size_t pc = cols;
        for (std::size_t j = 0; j < cols; ++j) {
            if (A[i][j] != 0) {
                pc = j;
                break;
            }
        }
        if (pc == cols) {
            if (want_kernel && !out.left_kernel) {
                out.left_kernel = std::vector<BigInt>(A[i].begin() + static_cast<std::ptrdiff_t>(cols), A[i].end());
            }
            continue;
        }
        out.pivot_rows.push_back(i);
        ++out.rank;
        const BigInt piv = A[i][pc];
        for (std::size_t k = i + 1; k < rows; ++k) {
            const BigInt factor = A[k][pc];
            for (std::size_t j = 0; j < width; ++j) {
                if (j == pc) {
                    continue;
                }
                BigInt v = piv * A[k][j] - factor * A[i][j];
                if (prev != 1) {
                    v /= prev;
                }
                A[k][j] = std::move(v);
            }
            A[k][pc] = 0;
        }
        prev = piv;
    }
    return out;
}

/// Rank over Z/p for a prime p below 2^31. A lower bound for the rank over Q.
inline std::size_t rank_mod_prime(const IntMatrix& A, std::uint64_t p)
{
    const std::size_t rows = A.size();
    if (rows == 0) {
        return 0;
    }
    const std::size_t cols = A.front().size();
    std::vector<std::vector<std::uint64_t>> M(rows, std::vector<std::uint64_t>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            M[i][j] = floor_mod(A[i][j], BigInt(p)).convert_to<std::uint64_t>();
        }
    }
    auto inverse = [p](std::uint64_t a) {
        std::uint64_t result = 1;
        std::uint64_t e = p - 2;
        while (e != 0) {
            if (e & 1U) {
                result = result * a % p;
            }
            a = a * a % p;
            e >>= 1U;
        }
        return result;
    };
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pr = rank;
        while (pr < rows && M[pr][c] == 0) {
            ++pr;
        }
        if (pr == rows) {
            continue;
        }
        std::swap(M[pr], M[rank]);
        const std::uint64_t inv = inverse(M[rank][c]);
        for (std::size_t k = rank + 1; k < rows; ++k) {
            if (M[k][c] == 0) {
                continue;
            }
            const std::uint64_t f = M[k][c] * inv % p;
            for (std::size_t j = c; j < cols; ++j) {
                M[k][j] = (M[k][j] + (p - f) * M[rank][j]) % p;
            }
        }
        ++rank;
    }
    return rank;
}

}  // namespace sperner
