#pragma once

// Set families over [n] as bit masks, the constraint kinds they are checked
// against, and the plain-text family format.

#include "sperner/padic.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sperner {

using SetMask = std::uint32_t;

inline constexpr int kMaxGround = 16;

inline int set_size(SetMask a) { return std::popcount(a); }

inline SetMask full_mask(int n) { return n >= 32 ? ~SetMask{0} : (SetMask{1} << n) - 1; }

/// "{1,3,5}" with 1-indexed elements; "{}" is the empty set.
inline std::string format_set(SetMask a)
{
    std::string out = "{";
    bool first = true;
    for (int i = 0; i < 32 && (a >> i) != 0; ++i) {
        if ((a >> i) & 1U) {
            if (!first) {
                out += ",";
            }
            out += std::to_string(i + 1);
            first = false;
        }
    }
    return out + "}";
}

class SetFamily {
public:
    SetFamily() = default;

    explicit SetFamily(int n, std::vector<SetMask> members = {}) : n_(n), members_(std::move(members))
    {
        require(0 <= n_ && n_ <= kMaxGround, "ground set size must lie in [0, " + std::to_string(kMaxGround) + "]");
        std::vector<SetMask> sorted = members_;
        std::sort(sorted.begin(), sorted.end());
        require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "family has duplicate members");
        for (SetMask a : members_) {
            require((a & ~full_mask(n_)) == 0, "member " + format_set(a) + " is not a subset of [" + std::to_string(n_) + "]");
        }
    }

    int n() const { return n_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    const std::vector<SetMask>& members() const { return members_; }
    SetMask operator[](std::size_t i) const { return members_[i]; }

    bool contains(SetMask a) const { return std::find(members_.begin(), members_.end(), a) != members_.end(); }

    /// Sorted by numeric mask value.
    SetFamily canonical() const
    {
        std::vector<SetMask> sorted = members_;
        std::sort(sorted.begin(), sorted.end());
        return SetFamily(n_, std::move(sorted));
    }

    bool is_antichain() const
    {
        for (std::size_t i = 0; i < members_.size(); ++i) {
            for (std::size_t j = 0; j < members_.size(); ++j) {
                if (i != j && (members_[i] & ~members_[j]) == 0) {
                    return false;
                }
            }
        }
        return true;
    }

    friend bool operator==(const SetFamily&, const SetFamily&) = default;

private:
    int n_ = 0;
    std::vector<SetMask> members_;
};

/// Every s-subset of [n], in increasing mask order.
inline SetFamily uniform_family(int n, int s)
{
    std::vector<SetMask> members;
    for (SetMask a = 0; a <= full_mask(n); ++a) {
        if (set_size(a) == s) {
            members.push_back(a);
        }
        if (a == full_mask(n)) {
            break;
        }
    }
    return SetFamily(n, std::move(members));
}

enum class FamilyKind { DiffSperner, CloseSperner, Intersecting, IntersectingUniform, Hamming, Antichain };

inline std::string kind_name(FamilyKind kind)
{
    switch (kind) {
    case FamilyKind::DiffSperner: return "diff-sperner";
    case FamilyKind::CloseSperner: return "close-sperner";
    case FamilyKind::Intersecting: return "intersecting";
    case FamilyKind::IntersectingUniform: return "intersecting-uniform";
    case FamilyKind::Hamming: return "hamming";
    case FamilyKind::Antichain: return "antichain";
    }
    return "unknown";
}

inline std::optional<FamilyKind> parse_kind(const std::string& name)
{
    for (auto kind : {FamilyKind::DiffSperner, FamilyKind::CloseSperner, FamilyKind::Intersecting,
                      FamilyKind::IntersectingUniform, FamilyKind::Hamming, FamilyKind::Antichain}) {
        if (kind_name(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

struct ConstraintSpec {
    FamilyKind kind = FamilyKind::DiffSperner;
    std::vector<std::int64_t> L;
    std::optional<PrimePower> modulus;
    int n = 0;
    std::optional<std::int64_t> uniform_residue;

    bool modular() const { return modulus.has_value(); }
    std::int64_t q() const { return modulus ? modulus->q_small() : 0; }

    /// L reduced mod q (when modular), sorted, deduplicated.
    std::vector<std::int64_t> normalized_L() const
    {
        std::vector<std::int64_t> out;
        for (auto l : L) {
            out.push_back(modulus ? floor_mod(l, q()) : l);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// Throws PreconditionViolation when the spec is not well formed.
    void validate() const
    {
        require(n >= 0, "n must be non-negative");
        const auto Ln = normalized_L();
        switch (kind) {
        case FamilyKind::DiffSperner:
        case FamilyKind::Hamming:
            for (auto l : Ln) {
                require(modular() ? l != 0 : l > 0, "L must avoid 0" + std::string(modular() ? " mod q" : ""));
            }
            break;
        case FamilyKind::CloseSperner:
            require(!modular(), "close-sperner systems are not modular");
            for (auto l : Ln) {
                require(l > 0, "L must consist of positive integers");
            }
            break;
        case FamilyKind::Intersecting:
            for (auto l : Ln) {
                require(l >= 0, "L must consist of non-negative integers");
            }
            break;
        case FamilyKind::IntersectingUniform:
            require(modular(), "intersecting-uniform needs a modulus");
            require(uniform_residue.has_value(), "intersecting-uniform needs a uniform residue");
            break;
        case FamilyKind::Antichain:
            break;
        }
        if (kind != FamilyKind::IntersectingUniform) {
            require(!uniform_residue.has_value(), "uniform residue only applies to intersecting-uniform");
        }
    }
};

/// Pairwise and per-member tests reduced to table lookups on
/// (|A \ B|, |B \ A|, |A & B|) and |A|.
class CompiledPredicate {
public:
    explicit CompiledPredicate(const ConstraintSpec& spec) : n_(spec.n)
    {
        spec.validate();
        require(n_ <= kMaxGround, "n must lie in [0, " + std::to_string(kMaxGround) + "] for set enumeration");
        const int dim = n_ + 1;
        const auto Ln = spec.normalized_L();
        std::vector<char> in_L(static_cast<std::size_t>(dim), 0);
        for (int x = 0; x <= n_; ++x) {
            const std::int64_t key = spec.modular() ? floor_mod(x, spec.q()) : x;
            in_L[static_cast<std::size_t>(x)] = std::binary_search(Ln.begin(), Ln.end(), key) ? 1 : 0;
        }
        const std::int64_t r = spec.uniform_residue ? floor_mod(*spec.uniform_residue, spec.q()) : 0;
        auto congruent_r = [&](int x) { return spec.modular() && floor_mod(x, spec.q()) == r; };

        member_ok_.assign(static_cast<std::size_t>(dim), 1);
        for (int size = 0; size <= n_; ++size) {
            if (spec.kind == FamilyKind::Intersecting) {
                member_ok_[static_cast<std::size_t>(size)] = in_L[static_cast<std::size_t>(size)] ? 0 : 1;
            }
            else if (spec.kind == FamilyKind::IntersectingUniform) {
                member_ok_[static_cast<std::size_t>(size)] = congruent_r(size) ? 1 : 0;
            }
        }

        pair_ok_.assign(static_cast<std::size_t>(dim * dim * dim), 0);
        for (int a = 0; a <= n_; ++a) {
            for (int b = 0; a + b <= n_; ++b) {
                for (int c = 0; a + b + c <= n_; ++c) {
                    bool ok = false;
                    switch (spec.kind) {
                    case FamilyKind::DiffSperner: ok = in_L[a] && in_L[b]; break;
                    case FamilyKind::CloseSperner: ok = in_L[std::min(a, b)]; break;
                    case FamilyKind::Intersecting: ok = in_L[c]; break;
                    case FamilyKind::IntersectingUniform: ok = !congruent_r(c); break;
                    case FamilyKind::Hamming: ok = in_L[a + b]; break;
                    case FamilyKind::Antichain: ok = a > 0 && b > 0; break;
                    }
                    pair_ok_[index(a, b, c)] = ok ? 1 : 0;
                }
            }
        }
    }

    int n() const { return n_; }

    bool member_ok(SetMask a) const { return member_ok_[static_cast<std::size_t>(set_size(a))] != 0; }

    bool pair_ok(SetMask a, SetMask b) const
    {
        return pair_ok_[index(set_size(a & ~b), set_size(b & ~a), set_size(a & b))] != 0;
    }

private:
    std::size_t index(int a, int b, int c) const
    {
        const auto dim = static_cast<std::size_t>(n_ + 1);
        return (static_cast<std::size_t>(a) * dim + static_cast<std::size_t>(b)) * dim + static_cast<std::size_t>(c);
    }

    int n_;
    std::vector<char> member_ok_;
    std::vector<char> pair_ok_;
};

struct Verdict {
    bool ok = true;
    std::string violation;

    explicit operator bool() const { return ok; }
};

inline Verdict satisfies(const ConstraintSpec& spec, const SetFamily& fam)
{
    require(spec.n == fam.n(), "family and spec disagree on n");
    const CompiledPredicate pred(spec);
    const auto& m = fam.members();
    for (SetMask a : m) {
        if (!pred.member_ok(a)) {
            return {false, "member " + format_set(a) + " has inadmissible size " + std::to_string(set_size(a))};
        }
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            if (!pred.pair_ok(m[i], m[j])) {
                return {false, "pair " + format_set(m[i]) + ", " + format_set(m[j]) + " has |A\\B|="
                                   + std::to_string(set_size(m[i] & ~m[j])) + " |B\\A|="
                                   + std::to_string(set_size(m[j] & ~m[i])) + " |A&B|="
                                   + std::to_string(set_size(m[i] & m[j]))};
            }
        }
    }
    return {};
}

/// One set per line as "{1,3,5}"; '#' comment lines and blank lines are skipped.
inline SetFamily parse_family(std::istream& in, int n)
{
    std::vector<SetMask> members;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        const auto last = line.find_last_not_of(" \t\r");
        const std::string body = line.substr(first, last - first + 1);
        const std::string where = "line " + std::to_string(line_no) + ": ";
        require(body.size() >= 2 && body.front() == '{' && body.back() == '}', where + "expected {a,b,...}");
        SetMask mask = 0;
        std::stringstream items(body.substr(1, body.size() - 2));
        std::string item;
        while (std::getline(items, item, ',')) {
            const auto b = item.find_first_not_of(" \t");
            require(b != std::string::npos, where + "empty element");
            const auto e = item.find_last_not_of(" \t");
            const std::string token = item.substr(b, e - b + 1);
            require(token.find_first_not_of("0123456789") == std::string::npos, where + "bad element '" + token + "'");
            const long value = std::stol(token);
            require(1 <= value && value <= n, where + "element " + token + " outside [1, " + std::to_string(n) + "]");
            const SetMask bit = SetMask{1} << (value - 1);
            require((mask & bit) == 0, where + "repeated element " + token);
            mask |= bit;
        }
        members.push_back(mask);
    }
    return SetFamily(n, std::move(members));
}

inline SetFamily parse_family(const std::string& text, int n)
{
    std::istringstream in(text);
    return parse_family(in, n);
}

/// Smallest n covering every element that appears in the text.
inline int infer_ground_size(const std::string& text)
{
    int n = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::string digits;
        for (char ch : line + ",") {
            if (ch >= '0' && ch <= '9') {
                digits += ch;
            }
            else if (!digits.empty()) {
                n = std::max(n, std::stoi(digits));
                digits.clear();
            }
        }
    }
    return n;
}

inline std::string format_family(const SetFamily& fam)
{
    std::string out;
    for (SetMask a : fam.members()) {
        out += format_set(a) + "\n";
    }
    return out;
}

}  // namespace sperner
