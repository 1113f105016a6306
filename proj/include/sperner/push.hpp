#pragma once

// Push-to-the-middle: move every member of an antichain into the size band
// [s, n-s] by repeated saturating matchings between a level and the next.

#include "sperner/families.hpp"

#include <algorithm>
#include <unordered_map>
#include <vector>

namespace sperner {

namespace detail {

/// Kuhn's augmenting-path matching. adj[u] lists right-side vertices.
class BipartiteMatcher {
public:
    BipartiteMatcher(const std::vector<std::vector<std::size_t>>& adj, std::size_t right_size)
        : adj_(adj), match_right_(right_size, kNone), match_left_(adj.size(), kNone)
    {
    }

    std::size_t run()
    {
        std::size_t matched = 0;
        for (std::size_t u = 0; u < adj_.size(); ++u) {
            seen_.assign(match_right_.size(), 0);
            if (augment(u)) {
                ++matched;
            }
        }
        return matched;
    }

    std::size_t partner_of_left(std::size_t u) const { return match_left_[u]; }

    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

private:
    bool augment(std::size_t u)
    {
        for (std::size_t v : adj_[u]) {
            if (seen_[v]) {
                continue;
            }
            seen_[v] = 1;
            if (match_right_[v] == kNone || augment(match_right_[v])) {
                match_right_[v] = u;
                match_left_[u] = v;
                return true;
            }
        }
        return false;
    }

    const std::vector<std::vector<std::size_t>>& adj_;
    std::vector<std::size_t> match_right_;
    std::vector<std::size_t> match_left_;
    std::vector<char> seen_;
};

/// Replaces every member of the lowest level k by a distinct (k+1)-superset
/// outside the family.
inline std::vector<SetMask> push_lowest_level_up(const std::vector<SetMask>& members, int n)
{
    int k = n + 1;
    for (SetMask a : members) {
        k = std::min(k, set_size(a));
    }
    std::vector<std::size_t> low;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (set_size(members[i]) == k) {
            low.push_back(i);
        }
    }
    std::vector<SetMask> right;
    std::unordered_map<SetMask, std::size_t> right_index;
    std::vector<std::vector<std::size_t>> adj(low.size());
    for (std::size_t u = 0; u < low.size(); ++u) {
        const SetMask a = members[low[u]];
        for (int x = 0; x < n; ++x) {
            const SetMask b = a | (SetMask{1} << x);
            if (b == a || std::find(members.begin(), members.end(), b) != members.end()) {
                continue;
            }
            auto [it, inserted] = right_index.emplace(b, right.size());
            if (inserted) {
                right.push_back(b);
            }
            adj[u].push_back(it->second);
        }
    }
    BipartiteMatcher matcher(adj, right.size());
    require(matcher.run() == low.size(),
            "no saturating matching from level " + std::to_string(k) + "; the family must be an antichain with 2k <= n");
    std::vector<SetMask> out = members;
    for (std::size_t u = 0; u < low.size(); ++u) {
        out[low[u]] = right[matcher.partner_of_left(u)];
    }
    return out;
}

inline int min_level(const std::vector<SetMask>& members, int n)
{
    int k = n + 1;
    for (SetMask a : members) {
        k = std::min(k, set_size(a));
    }
    return k;
}

}  // namespace detail

/// Same cardinality, every member size in [s, n-s], still an antichain.
/// Member i of the result is the image of member i of the input.
inline SetFamily push_to_middle(const SetFamily& fam, int s)
{
    const int n = fam.n();
    require(s >= 0 && 2 * s <= n, "push_to_middle needs 0 <= s and 2s <= n");
    require(fam.is_antichain(), "push_to_middle needs an antichain");
    std::vector<SetMask> members = fam.members();
    if (members.empty()) {
        return fam;
    }
    while (detail::min_level(members, n) < s) {
        members = detail::push_lowest_level_up(members, n);
    }
    // The top levels are the bottom levels of the complement family.
    const SetMask all = full_mask(n);
    for (auto& a : members) {
        a = all & ~a;
    }
    while (detail::min_level(members, n) < s) {
        members = detail::push_lowest_level_up(members, n);
    }
    for (auto& a : members) {
        a = all & ~a;
    }
    return SetFamily(n, std::move(members));
}

}  // namespace sperner
