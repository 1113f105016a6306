#pragma once

// Exact maximum families: admissible subsets of [n] form the vertices of a
// compatibility graph and a maximum family is a maximum clique.

#include "sperner/clique.hpp"
#include "sperner/families.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace sperner {

struct SearchOptions {
    std::uint64_t node_budget = 0;  // 0 = unlimited
    int n_limit = 12;
    /// When false the witness is any maximum family instead of the
    /// lexicographically first one, which skips the second pass.
    bool canonical_witness = true;
};

struct SearchResult {
    std::size_t max_size = 0;
    SetFamily witness;
    std::uint64_t nodes_explored = 0;
    bool exact = true;
};

/// Admissible subsets ordered by size, then by mask value.
inline std::vector<SetMask> search_vertices(const CompiledPredicate& pred)
{
    std::vector<SetMask> verts;
    const int n = pred.n();
    for (int size = 0; size <= n; ++size) {
        for (SetMask a = 0;; ++a) {
            if (set_size(a) == size && pred.member_ok(a)) {
                verts.push_back(a);
            }
            if (a == full_mask(n)) {
                break;
            }
        }
    }
    return verts;
}

inline SearchResult max_family(const ConstraintSpec& spec, const SearchOptions& options = {})
{
    require(spec.n <= options.n_limit,
            "n = " + std::to_string(spec.n) + " exceeds the search limit " + std::to_string(options.n_limit));
    const CompiledPredicate pred(spec);
    const std::vector<SetMask> verts = search_vertices(pred);

    SearchResult result;
    result.witness = SetFamily(spec.n);
    if (verts.empty()) {
        return result;
    }

    Graph g(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) {
        for (std::size_t j = i + 1; j < verts.size(); ++j) {
            if (pred.pair_ok(verts[i], verts[j])) {
                g.add_edge(i, j);
            }
        }
    }

    // Every constraint depends only on cardinalities, so relabelling the
    // ground set maps a smallest member of any clique onto {1..r}. The first
    // pass therefore roots only at those sets, with candidates of size >= r.
    std::vector<std::size_t> first_of_size(static_cast<std::size_t>(spec.n) + 2, verts.size());
    for (std::size_t i = verts.size(); i-- > 0;) {
        first_of_size[static_cast<std::size_t>(set_size(verts[i]))] = i;
    }
    for (std::size_t s = first_of_size.size() - 1; s-- > 0;) {
        first_of_size[s] = std::min(first_of_size[s], first_of_size[s + 1]);
    }
    CliqueOptions copt;
    copt.node_budget = options.node_budget;
    copt.canonical_witness = options.canonical_witness;
    for (int r = 0; r <= spec.n; ++r) {
        const SetMask prefix = full_mask(r);
        const auto it = std::find(verts.begin(), verts.end(), prefix);
        if (it != verts.end()) {
            copt.roots.push_back(static_cast<std::size_t>(it - verts.begin()));
        }
    }
    copt.root_candidates = [&](std::size_t root) {
        Bitset P(verts.size());
        for (std::size_t i = first_of_size[static_cast<std::size_t>(set_size(verts[root]))]; i < verts.size(); ++i) {
            P.set(i);
        }
        return P;
    };
    if (copt.roots.empty()) {
        // No admissible prefix set means no admissible set of any size.
        return result;
    }

    const CliqueResult cr = max_clique(g, copt);
    std::vector<SetMask> members;
    for (std::size_t v : cr.clique) {
        members.push_back(verts[v]);
    }
    result.max_size = members.size();
    result.witness = SetFamily(spec.n, std::move(members));
    result.nodes_explored = cr.nodes;
    result.exact = cr.exact;
    return result;
}

}  // namespace sperner
