#pragma once

// Multilinear polynomials over Q in x_1..x_n, keyed by the monomial's
// variable set, and the reduction x_i^e -> x_i of small expression trees.

#include "sperner/families.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace sperner {

class MultilinearPoly {
public:
    explicit MultilinearPoly(int n = 0) : n_(n)
    {
        require(0 <= n && n <= kMaxGround, "multilinear polynomials support at most " + std::to_string(kMaxGround) + " variables");
    }

    static MultilinearPoly constant(int n, const Rational& c)
    {
        MultilinearPoly out(n);
        out.add_term(0, c);
        return out;
    }

    /// x_i for 1 <= i <= n.
    static MultilinearPoly variable(int n, int i)
    {
        require(1 <= i && i <= n, "variable index out of range");
        MultilinearPoly out(n);
        out.add_term(SetMask{1} << (i - 1), 1);
        return out;
    }

    /// prod_{j in S} x_j.
    static MultilinearPoly monomial(int n, SetMask S, const Rational& c = 1)
    {
        require((S & ~full_mask(n)) == 0, "monomial outside [n]");
        MultilinearPoly out(n);
        out.add_term(S, c);
        return out;
    }

    /// c + sum_j a_j x_j.
    static MultilinearPoly affine(int n, const Rational& c, const std::vector<Rational>& a)
    {
        require(static_cast<int>(a.size()) <= n, "too many linear coefficients");
        MultilinearPoly out = constant(n, c);
        for (std::size_t j = 0; j < a.size(); ++j) {
            out.add_term(SetMask{1} << j, a[j]);
        }
        return out;
    }

    int n() const { return n_; }
    const std::map<SetMask, Rational>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    Rational coefficient(SetMask S) const
    {
        auto it = coeffs_.find(S);
        return it == coeffs_.end() ? Rational(0) : it->second;
    }

    /// -1 for the zero polynomial.
    int degree() const
    {
        int d = -1;
        for (const auto& [S, c] : coeffs_) {
            d = std::max(d, set_size(S));
        }
        return d;
    }

    void add_term(SetMask S, const Rational& c)
    {
        if (c == 0) {
            return;
        }
        auto [it, inserted] = coeffs_.emplace(S, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                coeffs_.erase(it);
            }
        }
    }

    /// Value at the 0/1 vector with support `point`.
    Rational evaluate(SetMask point) const
    {
        Rational total = 0;
        for (const auto& [S, c] : coeffs_) {
            if ((S & ~point) == 0) {
                total += c;
            }
        }
        return total;
    }

    MultilinearPoly& operator+=(const MultilinearPoly& o)
    {
        require(n_ == o.n_, "variable counts differ");
        for (const auto& [S, c] : o.coeffs_) {
            add_term(S, c);
        }
        return *this;
    }

    MultilinearPoly& operator*=(const Rational& c)
    {
        if (c == 0) {
            coeffs_.clear();
        }
        for (auto& [S, v] : coeffs_) {
            v *= c;
        }
        return *this;
    }

    friend MultilinearPoly operator+(MultilinearPoly a, const MultilinearPoly& b) { return a += b; }

    friend MultilinearPoly operator-(MultilinearPoly a, MultilinearPoly b)
    {
        b *= -1;
        return a += b;
    }

    /// Product followed by reduction: x_S * x_T = x_{S | T}.
    friend MultilinearPoly operator*(const MultilinearPoly& a, const MultilinearPoly& b)
    {
        require(a.n_ == b.n_, "variable counts differ");
        MultilinearPoly out(a.n_);
        for (const auto& [S, c] : a.coeffs_) {
            for (const auto& [T, d] : b.coeffs_) {
                out.add_term(S | T, c * d);
            }
        }
        return out;
    }

    friend bool operator==(const MultilinearPoly&, const MultilinearPoly&) = default;

    std::string to_string() const
    {
        if (coeffs_.empty()) {
            return "0";
        }
        std::string out;
        for (const auto& [S, c] : coeffs_) {
            std::string mono;
            for (int i = 0; i < n_; ++i) {
                if ((S >> i) & 1U) {
                    mono += (mono.empty() ? "" : "*") + std::string("x") + std::to_string(i + 1);
                }
            }
            const bool neg = c < 0;
            const Rational mag = neg ? Rational(-c) : c;
            std::string coef = mono.empty() || mag != 1 ? mag.str() : "";
            if (!coef.empty() && !mono.empty()) {
                coef += "*";
            }
            out += (out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ")) + coef + mono;
        }
        return out;
    }

private:
    int n_;
    std::map<SetMask, Rational> coeffs_;
};

/// Expression tree of sums, products and powers over constants and variables.
class Expr {
public:
    enum class Kind { Constant, Variable, Sum, Product, Power };

    static Expr constant(const Rational& c) { return Expr(Kind::Constant, c, 0, 0, {}); }
    static Expr var(int i)
    {
        require(i >= 1, "variables are 1-indexed");
        return Expr(Kind::Variable, 0, i, 0, {});
    }
    /// c + sum_j a_j x_{j+1}.
    static Expr affine(const Rational& c, const std::vector<Rational>& a)
    {
        std::vector<Expr> terms{constant(c)};
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (a[j] != 0) {
                terms.push_back(constant(a[j]) * var(static_cast<int>(j) + 1));
            }
        }
        return Expr(Kind::Sum, 0, 0, 0, std::move(terms));
    }

    friend Expr operator+(Expr a, Expr b) { return Expr(Kind::Sum, 0, 0, 0, {std::move(a), std::move(b)}); }
    friend Expr operator*(Expr a, Expr b) { return Expr(Kind::Product, 0, 0, 0, {std::move(a), std::move(b)}); }
    friend Expr pow(Expr a, unsigned e) { return Expr(Kind::Power, 0, 0, e, {std::move(a)}); }

    Kind kind() const { return kind_; }
    const Rational& value() const { return value_; }
    int index() const { return index_; }
    unsigned exponent() const { return exponent_; }
    const std::vector<Expr>& children() const { return *children_; }

    /// Largest variable index used.
    int max_variable() const
    {
        int m = kind_ == Kind::Variable ? index_ : 0;
        for (const auto& c : *children_) {
            m = std::max(m, c.max_variable());
        }
        return m;
    }

private:
    Expr(Kind kind, Rational value, int index, unsigned exponent, std::vector<Expr> children)
        : kind_(kind), value_(std::move(value)), index_(index), exponent_(exponent),
          children_(std::make_shared<const std::vector<Expr>>(std::move(children)))
    {
    }

    Kind kind_;
    Rational value_;
    int index_;
    unsigned exponent_;
    std::shared_ptr<const std::vector<Expr>> children_;
};

/// Expands the expression and replaces x_i^e by x_i. Reducing after every
/// product gives the same result as reducing once at the end.
inline MultilinearPoly multilinear_reduce(const Expr& e, int n)
{
    require(e.max_variable() <= n, "expression uses a variable beyond x_" + std::to_string(n));
    switch (e.kind()) {
    case Expr::Kind::Constant: return MultilinearPoly::constant(n, e.value());
    case Expr::Kind::Variable: return MultilinearPoly::variable(n, e.index());
    case Expr::Kind::Sum: {
        MultilinearPoly out(n);
        for (const auto& c : e.children()) {
            out += multilinear_reduce(c, n);
        }
        return out;
    }
    case Expr::Kind::Product: {
        MultilinearPoly out = MultilinearPoly::constant(n, 1);
        for (const auto& c : e.children()) {
            out = out * multilinear_reduce(c, n);
        }
        return out;
    }
    case Expr::Kind::Power: {
        const MultilinearPoly base = multilinear_reduce(e.children().front(), n);
        MultilinearPoly out = MultilinearPoly::constant(n, 1);
        for (unsigned i = 0; i < e.exponent(); ++i) {
            out = out * base;
        }
        return out;
    }
    }
    return MultilinearPoly(n);
}

inline MultilinearPoly multilinear_reduce(const Expr& e) { return multilinear_reduce(e, e.max_variable()); }

/// Direct evaluation of the unreduced expression at a 0/1 point.
inline Rational evaluate(const Expr& e, SetMask point)
{
    switch (e.kind()) {
    case Expr::Kind::Constant: return e.value();
    case Expr::Kind::Variable: return ((point >> (e.index() - 1)) & 1U) ? 1 : 0;
    case Expr::Kind::Sum: {
        Rational total = 0;
        for (const auto& c : e.children()) {
            total += evaluate(c, point);
        }
        return total;
    }
    case Expr::Kind::Product: {
        Rational total = 1;
        for (const auto& c : e.children()) {
            total *= evaluate(c, point);
        }
        return total;
    }
    case Expr::Kind::Power: {
        const Rational base = evaluate(e.children().front(), point);
        Rational total = 1;
        for (unsigned i = 0; i < e.exponent(); ++i) {
            total *= base;
        }
        return total;
    }
    }
    return 0;
}

}  // namespace sperner
