#pragma once

// Exact maximum clique on graphs of a few thousand vertices: bit-set rows,
// greedy colouring bounds, and a second pass that returns the
// lexicographically first maximum clique.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace sperner {

class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

    std::size_t bits() const { return bits_; }

    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }

    bool none() const
    {
        return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
    }

    std::size_t count() const
    {
        std::size_t c = 0;
        for (auto w : words_) {
            c += static_cast<std::size_t>(std::popcount(w));
        }
        return c;
    }

    /// Index of the lowest set bit at or after `from`, or bits() if none.
    std::size_t next(std::size_t from) const
    {
        std::size_t w = from >> 6;
        if (w >= words_.size()) {
            return bits_;
        }
        std::uint64_t word = words_[w] & (~std::uint64_t{0} << (from & 63));
        while (true) {
            if (word != 0) {
                return (w << 6) + static_cast<std::size_t>(std::countr_zero(word));
            }
            if (++w == words_.size()) {
                return bits_;
            }
            word = words_[w];
        }
    }

    Bitset& operator&=(const Bitset& o)
    {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            words_[i] &= o.words_[i];
        }
        return *this;
    }

    void and_not(const Bitset& o)
    {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            words_[i] &= ~o.words_[i];
        }
    }

    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }

    template <class F>
    void for_each(F&& f) const
    {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t word = words_[w];
            while (word != 0) {
                f((w << 6) + static_cast<std::size_t>(std::countr_zero(word)));
                word &= word - 1;
            }
        }
    }

private:
    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

class Graph {
public:
    explicit Graph(std::size_t vertices) : rows_(vertices, Bitset(vertices)) {}

    std::size_t size() const { return rows_.size(); }

    void add_edge(std::size_t u, std::size_t v)
    {
        rows_[u].set(v);
        rows_[v].set(u);
    }

    bool adjacent(std::size_t u, std::size_t v) const { return rows_[u].test(v); }
    const Bitset& row(std::size_t u) const { return rows_[u]; }

private:
    std::vector<Bitset> rows_;
};

struct CliqueOptions {
    /// 0 means unlimited.
    std::uint64_t node_budget = 0;
    /// Roots tried by the first pass. Empty means every vertex; a caller that
    /// knows a symmetry may restrict the roots together with the candidate
    /// set allowed below each root.
    std::vector<std::size_t> roots;
    std::function<Bitset(std::size_t)> root_candidates;
    /// Run the second pass that returns the lexicographically first maximum clique.
    bool canonical_witness = true;
};

struct CliqueResult {
    std::vector<std::size_t> clique;  // ascending vertex indices
    std::uint64_t nodes = 0;
    bool exact = true;
};

namespace detail {

class CliqueSearch {
public:
    CliqueSearch(const Graph& g, std::uint64_t budget) : g_(g), budget_(budget) {}

    std::uint64_t nodes() const { return nodes_; }
    bool exhausted() const { return exhausted_; }
    const std::vector<std::size_t>& best() const { return best_; }

    void seed(std::vector<std::size_t> clique) { best_ = std::move(clique); }

    /// Branch and bound from the given partial clique over candidate set P.
    void expand(std::vector<std::size_t>& current, Bitset P)
    {
        if (!tick()) {
            return;
        }
        std::vector<std::size_t> order;
        std::vector<std::size_t> colour;
        colour_sort(P, order, colour);
        for (std::size_t idx = order.size(); idx-- > 0;) {
            if (current.size() + colour[idx] <= best_.size() || exhausted_) {
                return;
            }
            const std::size_t v = order[idx];
            current.push_back(v);
            Bitset next = P & g_.row(v);
            if (next.none()) {
                if (current.size() > best_.size()) {
                    best_ = current;
                }
            }
            else {
                expand(current, std::move(next));
            }
            current.pop_back();
            P.reset(v);
        }
    }

    /// Depth-first search in ascending vertex order for a clique of the
    /// target size; the first hit is the lexicographically smallest.
    bool first_clique(std::vector<std::size_t>& current, const Bitset& P, std::size_t target)
    {
        if (current.size() == target) {
            return true;
        }
        if (!tick()) {
            return false;
        }
        std::vector<std::size_t> verts;
        P.for_each([&](std::size_t v) { verts.push_back(v); });
        // Greedy colouring from the highest index down gives, for every
        // suffix, a proper colouring with at most suffix_max colours.
        std::vector<std::size_t> suffix_max(verts.size() + 1, 0);
        std::vector<Bitset> classes;
        for (std::size_t i = verts.size(); i-- > 0;) {
            const std::size_t v = verts[i];
            std::size_t c = 0;
            while (c < classes.size() && !(classes[c] & g_.row(v)).none()) {
                ++c;
            }
            if (c == classes.size()) {
                classes.emplace_back(g_.size());
            }
            classes[c].set(v);
            suffix_max[i] = std::max(suffix_max[i + 1], c + 1);
        }
        Bitset later = P;
        for (std::size_t i = 0; i < verts.size(); ++i) {
            if (current.size() + suffix_max[i] < target || exhausted_) {
                return false;
            }
            const std::size_t v = verts[i];
            later.reset(v);
            Bitset next = later & g_.row(v);
            current.push_back(v);
            if (first_clique(current, next, target)) {
                return true;
            }
            current.pop_back();
        }
        return false;
    }

private:
    bool tick()
    {
        ++nodes_;
        if (budget_ != 0 && nodes_ > budget_) {
            exhausted_ = true;
        }
        return !exhausted_;
    }

    /// Sequential greedy colouring in vertex order, listed by colour class.
    void colour_sort(const Bitset& P, std::vector<std::size_t>& order, std::vector<std::size_t>& colour) const
    {
        Bitset uncoloured = P;
        std::size_t k = 1;
        while (!uncoloured.none()) {
            Bitset Q = uncoloured;
            std::size_t v = Q.next(0);
            while (v < Q.bits()) {
                uncoloured.reset(v);
                Q.reset(v);
                Q.and_not(g_.row(v));
                order.push_back(v);
                colour.push_back(k);
                v = Q.next(v + 1);
            }
            ++k;
        }
    }

    const Graph& g_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    bool exhausted_ = false;
    std::vector<std::size_t> best_;
};

}  // namespace detail

inline CliqueResult max_clique(const Graph& g, const CliqueOptions& options = {})
{
    CliqueResult result;
    if (g.size() == 0) {
        return result;
    }
    detail::CliqueSearch search(g, options.node_budget);
    search.seed({0});

    std::vector<std::size_t> current;
    if (options.roots.empty()) {
        Bitset all(g.size());
        for (std::size_t v = 0; v < g.size(); ++v) {
            all.set(v);
        }
        search.expand(current, all);
    }
    else {
        for (std::size_t root : options.roots) {
            current.assign(1, root);
            Bitset P = options.root_candidates ? options.root_candidates(root) : g.row(root);
            P &= g.row(root);
            if (P.none()) {
                continue;
            }
            search.expand(current, std::move(P));
            if (search.exhausted()) {
                break;
            }
        }
    }

    result.clique = search.best();
    std::sort(result.clique.begin(), result.clique.end());
    result.exact = !search.exhausted();

    if (options.canonical_witness && result.exact) {
        detail::CliqueSearch second(g, options.node_budget);
        Bitset all(g.size());
        for (std::size_t v = 0; v < g.size(); ++v) {
            all.set(v);
        }
        std::vector<std::size_t> path;
        if (second.first_clique(path, all, result.clique.size())) {
            result.clique = path;
        }
        else {
            result.exact = !second.exhausted() && result.exact;
        }
        result.nodes = search.nodes() + second.nodes();
    }
    else {
        result.nodes = search.nodes();
    }
    return result;
}

}  // namespace sperner
