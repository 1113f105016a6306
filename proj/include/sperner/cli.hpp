#pragma once

// Command-line front end: argument parsing, routing, JSON and text output.

#include "sperner/bounds.hpp"
#include "sperner/polylab.hpp"
#include "sperner/push.hpp"
#include "sperner/search.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace sperner::cli {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kBudgetEnv = "SPERNER_NODE_BUDGET";

enum class Status { Ok, Infeasible, BudgetExhausted, Error };

inline std::string status_name(Status s)
{
    switch (s) {
    case Status::Ok: return "ok";
    case Status::Infeasible: return "infeasible";
    case Status::BudgetExhausted: return "budget-exhausted";
    case Status::Error: return "error";
    }
    return "error";
}

struct CommandResult {
    std::string command;
    Status status = Status::Ok;
    json payload = json::object();
    std::vector<std::string> diagnostics;
    /// Human-readable rendering.
    std::string text;
    /// Error caused by the arguments rather than by the tool.
    bool usage_error = false;
    bool json_output = false;

    int exit_code() const
    {
        switch (status) {
        case Status::Ok:
        case Status::Infeasible: return 0;
        case Status::BudgetExhausted: return 3;
        case Status::Error: return usage_error ? 2 : 1;
        }
        return 1;
    }

    json document() const
    {
        return json{{"schema", kSchemaVersion},
                    {"command", command},
                    {"status", status_name(status)},
                    {"result", payload},
                    {"diagnostics", diagnostics}};
    }

    std::string render() const
    {
        if (json_output) {
            return document().dump(2) + "\n";
        }
        std::string out = text;
        for (const auto& d : diagnostics) {
            out += (status == Status::Error ? "error: " : "note: ") + d + "\n";
        }
        return out;
    }
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Value parsing and JSON helpers

inline json big(const BigInt& v)
{
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
        return v.convert_to<std::int64_t>();
    }
    return v.str();
}

inline json valuation_json(const Valuation& v)
{
    return v.is_infinite() ? json("inf") : json(v.value());
}

inline std::int64_t parse_int(const std::string& text, const std::string& what)
{
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw UsageError(what + ": '" + text + "' is not an integer");
    }
    if (used != text.size()) {
        throw UsageError(what + ": '" + text + "' is not an integer");
    }
    return v;
}

inline BigInt parse_big(const std::string& text, const std::string& what)
{
    const std::size_t start = !text.empty() && (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (start == text.size() || text.find_first_not_of("0123456789", start) != std::string::npos) {
        throw UsageError(what + ": '" + text + "' is not an integer");
    }
    return BigInt(text[0] == '+' ? text.substr(1) : text);
}

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) {
        return "";
    }
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

/// Comma list of integers, inclusive ranges "a..b", and modulo-q ranges
/// "a..b@wrap" that run a, a+1, ..., q-1, 0, ..., b.
inline std::vector<std::int64_t> parse_L(const std::string& text, std::optional<std::int64_t> q)
{
    std::vector<std::int64_t> out;
    std::stringstream items(text);
    std::string item;
    while (std::getline(items, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            throw UsageError("--L: empty item in '" + text + "'");
        }
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_int(item, "--L"));
            continue;
        }
        std::string hi_text = item.substr(dots + 2);
        bool wrap = false;
        if (const auto at = hi_text.find('@'); at != std::string::npos) {
            if (hi_text.substr(at) != "@wrap") {
                throw UsageError("--L: unknown range suffix in '" + item + "'");
            }
            wrap = true;
            hi_text = hi_text.substr(0, at);
        }
        const std::int64_t lo = parse_int(trim(item.substr(0, dots)), "--L");
        const std::int64_t hi = parse_int(trim(hi_text), "--L");
        if (wrap) {
            if (!q) {
                throw UsageError("--L: '" + item + "' wraps modulo q, so --q is required");
            }
            if (lo < 0 || hi < 0 || lo >= *q || hi >= *q) {
                throw UsageError("--L: wrap-around ends must lie in [0, q-1]");
            }
            for (std::int64_t x = lo;; x = (x + 1) % *q) {
                out.push_back(x);
                if (x == hi) {
                    break;
                }
            }
            continue;
        }
        if (lo > hi) {
            throw UsageError("--L: range '" + item + "' is empty; write " + std::to_string(lo) + ".." +
                             std::to_string(hi) + "@wrap for a modulo-q range");
        }
        for (std::int64_t x = lo; x <= hi; ++x) {
            out.push_back(x);
        }
    }
    return out;
}

inline PrimePower parse_modulus(std::int64_t q)
{
    if (q < 2) {
        throw UsageError("--q must be a prime power >= 2");
    }
    auto pp = PrimePower::try_from_modulus(q);
    if (!pp) {
        throw UsageError("--q " + std::to_string(q) + " is not a prime power");
    }
    return *pp;
}

inline FamilyKind parse_kind_arg(const std::string& text)
{
    auto k = parse_kind(text);
    if (!k) {
        throw UsageError("--kind '" + text +
                         "' is not one of diff-sperner, close-sperner, intersecting, intersecting-uniform, hamming, antichain");
    }
    return *k;
}

inline std::vector<json> family_json(const SetFamily& fam)
{
    std::vector<json> out;
    for (SetMask a : fam.members()) {
        out.emplace_back(format_set(a));
    }
    return out;
}

inline json spec_json(const ConstraintSpec& spec)
{
    json j{{"kind", kind_name(spec.kind)}, {"n", spec.n}, {"L", spec.L}};
    j["q"] = spec.modular() ? json(spec.q()) : json(nullptr);
    if (spec.uniform_residue) {
        j["residue"] = *spec.uniform_residue;
    }
    return j;
}

inline std::string L_text(const std::vector<std::int64_t>& L)
{
    std::string out = "{";
    for (std::size_t i = 0; i < L.size(); ++i) {
        out += (i ? "," : "") + std::to_string(L[i]);
    }
    return out + "}";
}

inline json binom_json(const BinomSum& s)
{
    return json{{"lower", s.lower}, {"upper", s.upper}, {"column", column_name(s.column)}, {"n", s.n},
                {"value", big(s.value)}, {"text", s.to_string()}};
}

inline json certificate_json(const BoundCertificate& c)
{
    json hyps = json::array();
    for (const auto& h : c.hypotheses) {
        hyps.push_back({{"condition", h.condition}, {"holds", h.holds}});
    }
    json aux = json::object();
    const auto& a = c.auxiliary;
    if (a.poly) {
        aux["poly"] = a.poly->to_string();
    }
    if (a.closure) {
        aux["closure"] = {{"lo", a.closure->lo}, {"hi", a.closure->hi}};
    }
    if (a.degree) {
        aux["degree"] = *a.degree;
    }
    if (a.lifted_prime) {
        aux["lifted_prime"] = *a.lifted_prime;
    }
    if (a.relaxed_to) {
        aux["relaxed_to"] = {{"lo", a.relaxed_to->lo}, {"hi", a.relaxed_to->hi}};
    }
    if (!a.note.empty()) {
        aux["note"] = a.note;
    }
    return json{{"theorem_id", c.theorem_id}, {"theorem", c.theorem}, {"hypotheses", hyps},
                {"bound", binom_json(c.bound)}, {"auxiliary", aux}};
}

inline json separation_json(const SeparationReport& r)
{
    json minima = json::object();
    for (const auto& [l, v] : r.class_minima) {
        minima[std::to_string(l)] = valuation_json(v);
    }
    return json{{"separates", r.separates},
                {"v0", valuation_json(r.v0)},
                {"class_minima", minima},
                {"shifted_minus_ok", r.shifted_minus_ok},
                {"shifted_plus_ok", r.shifted_plus_ok}};
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

// ---------------------------------------------------------------------------
// Arguments shared by the subcommands. Strings are parsed after CLI11 is done
// so that cross-flag checks (L against q) see every value.

struct Args {
    bool json_output = false;
    std::optional<std::int64_t> q;
    std::optional<std::string> p;
    std::optional<int> n;
    std::optional<std::string> L;
    std::string kind;
    std::optional<std::string> file;
    std::optional<std::uint64_t> budget;
    std::size_t max_degree = 3;
    std::optional<std::string> window;
    std::optional<std::string> roots;
    std::optional<std::string> lead;
    std::int64_t alpha = 0;
    std::optional<std::int64_t> residue;
    std::optional<std::string> number;
    std::optional<std::string> a;
    std::optional<std::string> b;
    std::optional<std::int64_t> s;
    std::optional<std::int64_t> lo;
    std::optional<std::int64_t> hi;
    std::optional<std::string> variant;
    std::optional<std::string> shift;
    bool push_first = false;
    int limit = 7;
};

inline std::uint64_t node_budget(const Args& args)
{
    if (args.budget) {
        return *args.budget;
    }
    if (const char* env = std::getenv(kBudgetEnv); env != nullptr && *env != '\0') {
        const auto v = parse_int(env, kBudgetEnv);
        if (v < 0) {
            throw UsageError(std::string(kBudgetEnv) + " must be non-negative");
        }
        return static_cast<std::uint64_t>(v);
    }
    return 0;
}

inline const PrimePower require_q(const Args& args)
{
    if (!args.q) {
        throw UsageError("--q is required");
    }
    return parse_modulus(*args.q);
}

inline int require_n(const Args& args)
{
    if (!args.n) {
        throw UsageError("--n is required");
    }
    if (*args.n < 0) {
        throw UsageError("--n must be non-negative");
    }
    return *args.n;
}

inline ConstraintSpec build_spec(const Args& args, bool need_L = true)
{
    ConstraintSpec spec;
    spec.kind = parse_kind_arg(args.kind);
    spec.n = require_n(args);
    if (args.q) {
        spec.modulus = parse_modulus(*args.q);
    }
    if (args.L) {
        spec.L = parse_L(*args.L, args.q);
    } else if (need_L && spec.kind != FamilyKind::Antichain && spec.kind != FamilyKind::IntersectingUniform) {
        throw UsageError("--L is required for --kind " + args.kind);
    }
    spec.uniform_residue = args.residue;
    spec.validate();
    return spec;
}

inline FactoredIntPoly parse_poly(const std::string& roots, const std::optional<std::string>& lead)
{
    FactoredIntPoly g;
    if (lead) {
        g.lead = parse_big(*lead, "--lead");
        if (g.lead == 0) {
            throw UsageError("--lead must be nonzero");
        }
    }
    if (!trim(roots).empty()) {
        for (auto r : parse_L(roots, std::nullopt)) {
            g.roots.emplace_back(r);
        }
    }
    return g;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open family file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline SetFamily load_family(const Args& args, std::optional<int> n_hint = std::nullopt)
{
    if (!args.file) {
        throw UsageError("--file is required");
    }
    const std::string text = read_file(*args.file);
    const int n = args.n ? *args.n : n_hint.value_or(infer_ground_size(text));
    return parse_family(text, n);
}

// ---------------------------------------------------------------------------
// Handlers

inline void run_vp(const Args& args, CommandResult& r)
{
    if (!args.p || !args.number) {
        throw UsageError("vp needs --p and --n");
    }
    const BigInt p = parse_big(*args.p, "--p");
    const BigInt x = parse_big(*args.number, "--n");
    const Valuation v = vp(p, x);
    r.payload = {{"p", big(p)}, {"n", big(x)}, {"valuation", valuation_json(v)}};
    r.text = v.to_string() + "\n";
}

inline void run_binom(const Args& args, CommandResult& r)
{
    if (!args.p || !args.a || !args.b) {
        throw UsageError("binom needs --p, --a and --b");
    }
    const BigInt p = parse_big(*args.p, "--p");
    const BigInt a = parse_big(*args.a, "--a");
    const BigInt b = parse_big(*args.b, "--b");
    const Valuation v = vp_binomial(p, a, b);
    const bool nondiv = lucas_nondivisible(p, a + b, a);
    r.payload = {{"p", big(p)}, {"a", big(a)}, {"b", big(b)}, {"carries", valuation_json(v)}, {"p_divides", !nondiv}};
    if (a + b <= 1000) {
        r.payload["binomial"] = big(binomial(to_i64(a + b), to_i64(a)));
    }
    r.text = "v_" + p.str() + "(C(" + BigInt(a + b).str() + ", " + a.str() + ")) = " + v.to_string() + " (carries in " +
             a.str() + " + " + b.str() + " base " + p.str() + ")\n";
}

inline void run_digits(const Args& args, CommandResult& r)
{
    const PrimePower pp = require_q(args);
    if (!args.s) {
        throw UsageError("digits needs --s");
    }
    const DigitVector d = to_digits(pp, *args.s);
    json digits = json::array();
    std::string text = "(";
    for (std::size_t i = 0; i < d.width(); ++i) {
        digits.push_back(big(d.digits[i]));
        text += (i ? "," : "") + d.digits[i].str();
    }
    r.payload = {{"q", *args.q}, {"p", big(pp.p())}, {"s", *args.s}, {"digits", digits}};
    r.text = text + ")_" + pp.p().str() + "\n";
}

inline void run_closure(const Args& args, CommandResult& r)
{
    const PrimePower pp = require_q(args);
    if (!args.lo || !args.hi) {
        throw UsageError("closure needs --lo and --hi");
    }
    const IntervalL L{*args.lo, *args.hi};
    const bool closed = is_q_closed(pp, L);
    const ClosureResult c = q_closure(pp, L);
    const std::int64_t m = mu(pp, L.size());
    r.payload = {{"q", *args.q},
                 {"interval", {{"lo", L.lo}, {"hi", L.hi}}},
                 {"closed", closed},
                 {"closure", {{"lo", c.interval.lo}, {"hi", c.interval.hi}}},
                 {"length", c.length},
                 {"mu", m}};
    r.text = L.to_string() + (closed ? " is" : " is not") + " q-closed; closure " + c.interval.to_string() + " of length " +
             std::to_string(c.length) + " (mu = " + std::to_string(m) + ")\n";
}

inline void run_mu(const Args& args, CommandResult& r)
{
    const PrimePower pp = require_q(args);
    if (!args.s) {
        throw UsageError("mu needs --s");
    }
    const std::int64_t m = mu(pp, *args.s);
    r.payload = {{"q", *args.q}, {"s", *args.s}, {"mu", m}};
    r.text = std::to_string(m) + "\n";
}

inline void run_census(const Args& args, CommandResult& r)
{
    const PrimePower pp = require_q(args);
    const ClosedPairCensus c = count_closed_pairs(pp);
    r.payload = {{"q", *args.q},
                 {"enumerated", big(c.enumerated)},
                 {"closed_form", big(c.closed_form)},
                 {"printed_form", big(c.printed_form)},
                 {"agrees", c.agrees}};
    r.text = c.enumerated.str() + " closed pairs (closed form " + c.closed_form.str() + ", " +
             (c.agrees ? "agrees" : "DISAGREES") + ")\n";
    if (c.printed_form != c.enumerated) {
        r.diagnostics.push_back("the form p^k (p-1)^k / 2^k - q gives " + c.printed_form.str());
    }
}

inline void run_seppoly_check(const Args& args, CommandResult& r)
{
    const PrimePower pp = require_q(args);
    if (!args.L || !args.roots) {
        throw UsageError("seppoly check needs --L and --roots");
    }
    const auto L = parse_L(*args.L, args.q);
    const FactoredIntPoly g = parse_poly(*args.roots, args.lead);
    const SeparationReport rep = check_separation(pp, g, args.alpha, L);
    r.payload = separation_json(rep);
    r.payload["g"] = g.to_string();
    r.payload["alpha"] = args.alpha;
    r.text = "g = " + g.to_string() + (rep.separates ? " separates " : " does not separate ") +
             std::to_string(args.alpha) + " from L + qZ; v_p(g(alpha)) = " + rep.v0.to_string() +
             "; shifted: minus " + yes_no(rep.shifted_minus_ok) + ", plus " + yes_no(rep.shifted_plus_ok) + "\n";
    for (const auto& [l, v] : rep.class_minima) {
        r.text += "  class " + std::to_string(l) + ": min valuation " + v.to_string() + "\n";
    }
}

inline std::optional<RootWindow> parse_window(const std::optional<std::string>& w)
{
    if (!w) {
        return std::nullopt;
    }
    const auto dots = w->find("..");
    if (dots == std::string::npos) {
        const auto hi = parse_int(*w, "--window");
        if (hi <= 0) {
            throw UsageError("--window must be positive");
        }
        return RootWindow{0, hi};
    }
    const auto lo = parse_int(trim(w->substr(0, dots)), "--window");
    const auto hi = parse_int(trim(w->substr(dots + 2)), "--window");
    if (lo > hi) {
        throw UsageError("--window range is empty");
    }
    return RootWindow{lo, hi + 1};
}

inline void run_seppoly_find(const Args& args, CommandResult& r)
{
    const PrimePower pp = require_q(args);
    if (!args.L) {
        throw UsageError("seppoly find needs --L");
    }
    if (args.max_degree < 1) {
        throw UsageError("--max-degree must be at least 1");
    }
    const auto L = parse_L(*args.L, args.q);
    const auto window = parse_window(args.window);
    const auto hit = search_min_degree(pp, args.alpha, L, args.max_degree, window);
    r.payload = {{"alpha", args.alpha}, {"max_degree", args.max_degree}};
    if (window) {
        r.payload["window"] = {{"lo", window->lo}, {"hi", window->hi - 1}};
    }
    if (!hit) {
        r.status = Status::Infeasible;
        r.payload["found"] = false;
        r.text = "no separating polynomial of degree <= " + std::to_string(args.max_degree) + " in the window\n";
        return;
    }
    const SeparationReport rep = check_separation(pp, hit->poly, args.alpha, L);
    r.payload["found"] = true;
    r.payload["g"] = hit->poly.to_string();
    json roots = json::array();
    for (const auto& x : hit->poly.roots) {
        roots.push_back(big(x));
    }
    r.payload["roots"] = roots;
    r.payload["degree"] = hit->degree;
    r.payload["candidates_tested"] = hit->candidates_tested;
    r.payload["report"] = separation_json(rep);
    r.text = "degree " + std::to_string(hit->degree) + ": g = " + hit->poly.to_string() + " (" +
             std::to_string(hit->candidates_tested) + " candidates)\n";
}

inline std::string certificate_line(const BoundCertificate& c)
{
    std::string out = c.theorem_id + " " + c.theorem + ": " + c.bound.to_string();
    if (c.auxiliary.poly) {
        out += "  [g = " + c.auxiliary.poly->to_string() + "]";
    }
    if (!c.auxiliary.note.empty()) {
        out += "  [" + c.auxiliary.note + "]";
    }
    return out;
}

inline void run_bound(const Args& args, CommandResult& r)
{
    const ConstraintSpec spec = build_spec(args);
    const BoundReport rep = best_bound(spec);
    json certs = json::array();
    for (const auto& c : rep.certificates) {
        certs.push_back(certificate_json(c));
    }
    json ties = json::array();
    for (const auto& c : rep.ties) {
        ties.push_back(c.theorem_id);
    }
    json rejected = json::array();
    for (const auto& rj : rep.rejected) {
        json j{{"theorem_id", rj.theorem_id}, {"reason", rj.reason}};
        if (rj.formula) {
            j["formula"] = binom_json(*rj.formula);
        }
        rejected.push_back(j);
    }
    r.payload = {{"spec", spec_json(spec)},
                 {"bound", big(rep.best.bound.value)},
                 {"theorem_id", rep.best.theorem_id},
                 {"best", certificate_json(rep.best)},
                 {"ties", ties},
                 {"certificates", certs},
                 {"rejected", rejected}};
    if (rep.lifted_prime) {
        r.payload["lifted_prime"] = *rep.lifted_prime;
    }
    std::string text = "bound " + rep.best.bound.value.str() + " via " + certificate_line(rep.best) + "\n";
    for (const auto& h : rep.best.hypotheses) {
        text += "  - " + h.condition + "\n";
    }
    if (rep.ties.size() > 1) {
        text += "ties:";
        for (const auto& c : rep.ties) {
            text += " " + c.theorem_id;
        }
        text += "\n";
    }
    text += "certificates:\n";
    for (const auto& c : rep.certificates) {
        text += "  " + certificate_line(c) + "\n";
    }
    if (!rep.rejected.empty()) {
        text += "not applicable:\n";
        for (const auto& rj : rep.rejected) {
            text += "  " + rj.theorem_id + ": " + rj.reason + "\n";
        }
    }
    r.text = text;
}

inline json search_json(const SearchResult& res)
{
    return json{{"max_size", res.max_size},
                {"witness", family_json(res.witness)},
                {"nodes_explored", res.nodes_explored},
                {"exact", res.exact}};
}

inline void run_search(const Args& args, CommandResult& r)
{
    const ConstraintSpec spec = build_spec(args);
    SearchOptions opt;
    opt.node_budget = node_budget(args);
    if (spec.n > opt.n_limit) {
        throw UsageError("--n " + std::to_string(spec.n) + " exceeds the search limit " + std::to_string(opt.n_limit));
    }
    const SearchResult res = max_family(spec, opt);
    r.payload = search_json(res);
    r.payload["spec"] = spec_json(spec);
    r.payload["budget"] = opt.node_budget;
    r.text = "max_size " + std::to_string(res.max_size) + (res.exact ? "" : " (lower bound, budget exhausted)") + "\n" +
             format_family(res.witness);
    if (!res.exact) {
        r.status = Status::BudgetExhausted;
        r.diagnostics.push_back("node budget " + std::to_string(opt.node_budget) + " exhausted after " +
                                std::to_string(res.nodes_explored) + " nodes");
    }
    // Open question: is C(n, s) an upper bound for L = {1..s} differencing systems?
    const auto Ln = spec.normalized_L();
    const auto s = static_cast<std::int64_t>(Ln.size());
    const bool is_prefix = s > 0 && Ln.front() == 1 && Ln.back() == s;
    if (spec.kind == FamilyKind::DiffSperner && !spec.modular() && is_prefix && 2 * s <= spec.n) {
        const BigInt middle = binomial(spec.n, s);
        r.payload["binom_n_s"] = big(middle);
        r.payload["gap_to_binom_n_s"] = big(BigInt(res.max_size) - middle);
        r.text += "C(n,s) = " + middle.str() + ", gap " + BigInt(BigInt(res.max_size) - middle).str() + "\n";
        if (BigInt(res.max_size) > middle) {
            r.diagnostics.push_back("family larger than C(n,s) = " + middle.str() + ": candidate counterexample");
        }
    }
}

inline void run_table(const Args& args, CommandResult& r)
{
    const PrimePower pp = require_q(args);
    const FamilyKind kind = parse_kind_arg(args.kind);
    const int n = require_n(args);
    const std::int64_t q = *args.q;
    SearchOptions opt;
    opt.node_budget = node_budget(args);
    opt.canonical_witness = false;
    BoundEngine engine;
    json rows = json::array();
    std::string text = "L            bound  rule  brute\n";
    bool any_exhausted = false;
    for (std::int64_t lo = 1; lo <= q - 1; ++lo) {
        for (std::int64_t hi = lo; hi <= q - 1; ++hi) {
            ConstraintSpec spec;
            spec.kind = kind;
            spec.modulus = pp;
            spec.n = n;
            for (std::int64_t x = lo; x <= hi; ++x) {
                spec.L.push_back(x);
            }
            spec.uniform_residue = args.residue;
            const BoundReport rep = engine.best_bound(spec);
            json row{{"L", {{"lo", lo}, {"hi", hi}}},
                     {"bound", big(rep.best.bound.value)},
                     {"theorem_id", rep.best.theorem_id}};
            std::string brute = "-";
            if (n <= args.limit) {
                const SearchResult res = max_family(spec, opt);
                row["brute"] = res.max_size;
                row["exact"] = res.exact;
                row["respects_bound"] = BigInt(res.max_size) <= rep.best.bound.value;
                brute = std::to_string(res.max_size) + (res.exact ? "" : "+");
                any_exhausted = any_exhausted || !res.exact;
                if (!(BigInt(res.max_size) <= rep.best.bound.value)) {
                    r.diagnostics.push_back("L = {" + std::to_string(lo) + ".." + std::to_string(hi) +
                                            "}: brute force exceeds the bound");
                }
            }
            rows.push_back(row);
            char line[128];
            std::snprintf(line, sizeof line, "%-12s %6s  %-4s  %s\n", IntervalL{lo, hi}.to_string().c_str(),
                          rep.best.bound.value.str().c_str(), rep.best.theorem_id.c_str(), brute.c_str());
            text += line;
        }
    }
    r.payload = {{"kind", kind_name(kind)}, {"q", q}, {"n", n}, {"brute_limit", args.limit}, {"rows", rows}};
    r.text = text;
    if (any_exhausted) {
        r.status = Status::BudgetExhausted;
        r.diagnostics.push_back("some brute-force rows hit the node budget; '+' marks lower bounds");
    }
}

inline void run_check(const Args& args, CommandResult& r)
{
    const SetFamily fam = load_family(args);
    Args with_n = args;
    with_n.n = fam.n();
    const ConstraintSpec spec = build_spec(with_n);
    const Verdict v = satisfies(spec, fam);
    r.payload = {{"spec", spec_json(spec)}, {"size", fam.size()}, {"satisfies", v.ok}};
    if (!v.ok) {
        r.payload["violation"] = v.violation;
    }
    r.text = std::string(v.ok ? "satisfies" : "violates") + " the constraint (" + std::to_string(fam.size()) +
             " members)" + (v.ok ? "" : ": " + v.violation) + "\n";
}

inline void run_push(const Args& args, CommandResult& r)
{
    if (!args.s) {
        throw UsageError("push needs --s");
    }
    const SetFamily fam = load_family(args);
    const SetFamily out = push_to_middle(fam, static_cast<int>(*args.s));
    r.payload = {{"n", fam.n()}, {"s", *args.s}, {"input", family_json(fam)}, {"output", family_json(out)}};
    r.text = format_family(out);
}

inline json rank_json(const ProofSystem& sys, const RankReport& rep)
{
    json j{{"construction", proof_kind_name(sys.kind)},
           {"n", sys.n},
           {"m", sys.P.size()},
           {"t", sys.F.size()},
           {"T", sys.H.size()},
           {"degree_cap", sys.degree_cap},
           {"g", sys.g.to_string()},
           {"rank", rep.rank},
           {"expected", rep.expected},
           {"dimension", rep.dimension},
           {"full_rank", rep.full_rank},
           {"method", rep.method},
           {"prime", big(rep.prime)},
           {"laws_ok", rep.laws_ok()},
           {"law_failures", rep.law_failures}};
    if (sys.shift) {
        j["shift"] = *sys.shift == ShiftVariant::Minus ? "minus" : "plus";
    }
    json pattern{{"applicable", rep.pattern_applicable}, {"ok", rep.pattern_ok}};
    if (rep.pattern_applicable) {
        pattern["v0"] = valuation_json(rep.v0);
    }
    if (rep.offending) {
        const auto& o = *rep.offending;
        pattern["offending"] = {{"row", sys.row_label(o.row)},
                                {"row_set", format_set(sys.family[o.row])},
                                {"probe", sys.probes[o.column].label()},
                                {"probe_set", format_set(sys.probes[o.column].point)},
                                {"value", big(o.value)},
                                {"valuation", valuation_json(o.valuation)},
                                {"reason", o.reason}};
    }
    j["pattern"] = pattern;
    if (rep.kernel) {
        json k = json::array();
        for (const auto& w : *rep.kernel) {
            k.push_back(big(w));
        }
        j["kernel"] = k;
    }
    j["family"] = family_json(sys.family);
    return j;
}

inline void run_verify(const Args& args, CommandResult& r)
{
    const FamilyKind kind = parse_kind_arg(args.kind);
    SetFamily fam = load_family(args);
    const int n = fam.n();
    if (n < 1) {
        throw UsageError("verify needs n >= 1");
    }
    std::optional<PrimePower> pp;
    if (args.q) {
        pp = parse_modulus(*args.q);
    }
    const auto L = args.L ? parse_L(*args.L, args.q) : std::vector<std::int64_t>{};

    ProofSystem sys;
    BigInt prime;
    if (args.variant) {
        if (*args.variant != "sym" && *args.variant != "close") {
            throw UsageError("--variant must be sym or close");
        }
        const bool sym = *args.variant == "sym";
        std::int64_t s = 0;
        if (args.s) {
            s = *args.s;
        } else if (!L.empty()) {
            s = *std::max_element(L.begin(), L.end());
        } else {
            throw UsageError("--variant needs --s or --L");
        }
        if (args.push_first) {
            fam = push_to_middle(fam, static_cast<int>(s));
        }
        sys = build_midband_system(fam, static_cast<int>(s), sym ? MidbandVariant::Sym : MidbandVariant::Close);
        prime = detail::smallest_prime_above(n);
    } else {
        if (!pp) {
            throw UsageError("verify needs --q unless --variant is given");
        }
        if (L.empty() && !args.roots) {
            throw UsageError("verify needs --L or --roots");
        }
        const FactoredIntPoly g = args.roots ? parse_poly(*args.roots, args.lead) : canonical_interval_poly(L);
        if (kind == FamilyKind::Hamming) {
            sys = build_hamming_system(fam, g, *pp);
        } else if (kind == FamilyKind::DiffSperner) {
            std::optional<ShiftVariant> variant;
            if (args.shift) {
                if (*args.shift != "minus" && *args.shift != "plus") {
                    throw UsageError("--shift must be minus or plus");
                }
                variant = *args.shift == "minus" ? ShiftVariant::Minus : ShiftVariant::Plus;
            } else if (!L.empty()) {
                variant = preferred_shift(*pp, g, L);
                if (!variant) {
                    r.diagnostics.push_back("neither shifted condition holds; only the member block is claimed independent");
                }
            }
            sys = build_diff_sperner_system(fam, g, *pp, variant.value_or(ShiftVariant::Minus));
        } else {
            throw UsageError("verify supports diff-sperner and hamming, or --variant sym|close");
        }
        prime = pp->p();
    }
    if (args.p) {
        prime = parse_big(*args.p, "--p");
    }
    const RankReport rep = verify_independence(sys, prime);
    r.payload = rank_json(sys, rep);
    std::string text = proof_kind_name(sys.kind) + ": rank " + std::to_string(rep.rank) + " of " +
                       std::to_string(rep.expected) + " (m=" + std::to_string(sys.P.size()) + ", t=" +
                       std::to_string(sys.F.size()) + ", T=" + std::to_string(sys.H.size()) + ", space " +
                       std::to_string(rep.dimension) + ") " + (rep.full_rank ? "independent" : "DEPENDENT") + " [" +
                       rep.method + "]\n";
    if (rep.pattern_applicable) {
        text += "p-adic pattern at p = " + prime.str() + ": " + (rep.pattern_ok ? "holds" : "fails");
        if (rep.offending) {
            text += " at (" + sys.row_label(rep.offending->row) + ", " + sys.probes[rep.offending->column].label() +
                    "): " + rep.offending->reason;
        }
        text += "\n";
    }
    for (const auto& f : rep.law_failures) {
        text += "  law: " + f + "\n";
    }
    r.text = text;
}

// ---------------------------------------------------------------------------

/// Parses argv (without the program name) and runs one subcommand.
inline CommandResult dispatch(const std::vector<std::string>& argv)
{
    CommandResult result;
    Args args;
    CLI::App app{"Bounds, exact searches and proof checks for restricted set families", "sperner"};
    app.require_subcommand(1);

    auto json_flag = [&](CLI::App* sub) { sub->add_flag("--json", args.json_output, "Emit one JSON document"); };
    auto spec_flags = [&](CLI::App* sub, bool need_n) {
        sub->add_option("--kind", args.kind, "Constraint kind")->required();
        auto* n = sub->add_option("--n", args.n, "Ground set size");
        if (need_n) {
            n->required();
        }
        sub->add_option("--q", args.q, "Prime power modulus");
        sub->add_option("--L", args.L, "L as 1,2,5 or a..b or a..b@wrap");
        sub->add_option("--residue", args.residue, "Uniform size residue (intersecting-uniform)");
    };

    auto* vp_cmd = app.add_subcommand("vp", "p-adic valuation of an integer");
    vp_cmd->add_option("--p", args.p, "Prime")->required();
    vp_cmd->add_option("--n", args.number, "Integer")->required();
    json_flag(vp_cmd);

    auto* binom_cmd = app.add_subcommand("binom", "v_p(C(a+b, a)) by carries");
    binom_cmd->add_option("--p", args.p, "Prime")->required();
    binom_cmd->add_option("--a", args.a, "a >= 0")->required();
    binom_cmd->add_option("--b", args.b, "b >= 0")->required();
    json_flag(binom_cmd);

    auto* digits_cmd = app.add_subcommand("digits", "Base-p digits of s < q");
    digits_cmd->add_option("--q", args.q)->required();
    digits_cmd->add_option("--s", args.s)->required();
    json_flag(digits_cmd);

    auto* closure_cmd = app.add_subcommand("closure", "q-closedness and shortest q-closure of {lo..hi}");
    closure_cmd->add_option("--q", args.q)->required();
    closure_cmd->add_option("--lo", args.lo)->required();
    closure_cmd->add_option("--hi", args.hi)->required();
    json_flag(closure_cmd);

    auto* mu_cmd = app.add_subcommand("mu", "Closure length bound mu_q(s)");
    mu_cmd->add_option("--q", args.q)->required();
    mu_cmd->add_option("--s", args.s)->required();
    json_flag(mu_cmd);

    auto* census_cmd = app.add_subcommand("census", "Count q-closed pairs (b, s)");
    census_cmd->add_option("--q", args.q)->required();
    json_flag(census_cmd);

    auto* sep_cmd = app.add_subcommand("seppoly", "Separating polynomials");
    sep_cmd->require_subcommand(1);
    auto* sep_check = sep_cmd->add_subcommand("check", "Check a factored polynomial");
    sep_check->add_option("--q", args.q)->required();
    sep_check->add_option("--alpha", args.alpha, "Point to separate (default 0)");
    sep_check->add_option("--L", args.L)->required();
    sep_check->add_option("--roots", args.roots, "Roots r1,r2,...")->required();
    sep_check->add_option("--lead", args.lead, "Leading coefficient (default 1)");
    json_flag(sep_check);
    auto* sep_find = sep_cmd->add_subcommand("find", "Search for a lowest-degree separating polynomial");
    sep_find->add_option("--q", args.q)->required();
    sep_find->add_option("--alpha", args.alpha, "Point to separate (default 0)");
    sep_find->add_option("--L", args.L)->required();
    sep_find->add_option("--max-degree", args.max_degree, "Largest degree tried (default 3)");
    sep_find->add_option("--window", args.window, "Root window W (= 0..W-1) or lo..hi; default [0, q^2)");
    json_flag(sep_find);

    auto* bound_cmd = app.add_subcommand("bound", "Best bound over the theorem portfolio");
    spec_flags(bound_cmd, true);
    json_flag(bound_cmd);

    auto* table_cmd = app.add_subcommand("table", "Bounds for every interval L in [q-1]");
    table_cmd->add_option("--kind", args.kind)->required();
    table_cmd->add_option("--q", args.q)->required();
    table_cmd->add_option("--n", args.n)->required();
    table_cmd->add_option("--residue", args.residue);
    table_cmd->add_option("--limit", args.limit, "Brute force only when n <= limit (default 7)");
    table_cmd->add_option("--budget", args.budget, "Node budget per brute-force search");
    json_flag(table_cmd);

    auto* search_cmd = app.add_subcommand("search", "Exact maximum family by clique search");
    spec_flags(search_cmd, true);
    search_cmd->add_option("--budget", args.budget, "Node budget (0 = unlimited)");
    json_flag(search_cmd);

    auto* check_cmd = app.add_subcommand("check", "Check a family file against a constraint");
    spec_flags(check_cmd, false);
    check_cmd->add_option("--file", args.file)->required();
    json_flag(check_cmd);

    auto* push_cmd = app.add_subcommand("push", "Push an antichain into the band s <= |A| <= n-s");
    push_cmd->add_option("--file", args.file)->required();
    push_cmd->add_option("--s", args.s)->required();
    push_cmd->add_option("--n", args.n, "Ground set size (default: largest element)");
    json_flag(push_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "Build the proof polynomials and check their independence");
    verify_cmd->add_option("--kind", args.kind)->required();
    verify_cmd->add_option("--file", args.file)->required();
    verify_cmd->add_option("--n", args.n, "Ground set size (default: largest element)");
    verify_cmd->add_option("--q", args.q);
    verify_cmd->add_option("--L", args.L);
    verify_cmd->add_option("--roots", args.roots, "Use this g instead of prod (y - l)");
    verify_cmd->add_option("--lead", args.lead);
    verify_cmd->add_option("--variant", args.variant, "sym or close for the mid-band systems");
    verify_cmd->add_option("--s", args.s, "Band parameter for --variant (default max L)");
    verify_cmd->add_flag("--push", args.push_first, "Run push_to_middle before building the mid-band system");
    verify_cmd->add_option("--shift", args.shift, "minus or plus (default: whichever hypothesis holds)");
    verify_cmd->add_option("--p", args.p, "Prime for the p-adic pattern");
    json_flag(verify_cmd);

    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        result.command = "help";
        result.text = app.help();
        for (auto* sub : app.get_subcommands()) {
            result.text = sub->help();
        }
        return result;
    } catch (const CLI::ParseError& e) {
        result.command = argv.empty() ? "" : argv.front();
        result.status = Status::Error;
        result.usage_error = true;
        result.json_output = std::find(argv.begin(), argv.end(), "--json") != argv.end();
        result.diagnostics.push_back(std::string(e.what()) + " (run with --help for usage)");
        return result;
    }
    result.json_output = args.json_output;

    struct Route {
        CLI::App* cmd;
        std::string name;
        void (*run)(const Args&, CommandResult&);
    };
    const std::vector<Route> routes = {
        {vp_cmd, "vp", run_vp},           {binom_cmd, "binom", run_binom},
        {digits_cmd, "digits", run_digits}, {closure_cmd, "closure", run_closure},
        {mu_cmd, "mu", run_mu},           {census_cmd, "census", run_census},
        {sep_check, "seppoly check", run_seppoly_check}, {sep_find, "seppoly find", run_seppoly_find},
        {bound_cmd, "bound", run_bound},  {table_cmd, "table", run_table},
        {search_cmd, "search", run_search}, {check_cmd, "check", run_check},
        {push_cmd, "push", run_push},     {verify_cmd, "verify", run_verify},
    };
    for (const auto& route : routes) {
        if (!route.cmd->parsed()) {
            continue;
        }
        result.command = route.name;
        try {
            route.run(args, result);
        } catch (const UsageError& e) {
            result.status = Status::Error;
            result.usage_error = true;
            result.diagnostics.push_back(e.what());
        } catch (const PreconditionViolation& e) {
            result.status = Status::Error;
            result.usage_error = true;
            result.diagnostics.push_back(e.what());
        } catch (const std::exception& e) {
            result.status = Status::Error;
            result.diagnostics.push_back(std::string("internal error: ") + e.what());
        }
        return result;
    }
    result.status = Status::Error;
    result.usage_error = true;
    result.diagnostics.push_back("no subcommand given");
    return result;
}

}  // namespace sperner::cli
