#pragma once

// Kernel embeddings of Boolean gates, netlist composition by wire
// identification, clamping, exhaustive minimization, CNF embedding and the
// support map of a state.
//
// Gadget variables are ordered inputs, then the output, then slacks.

#include "parentham/pauli.hpp"
#include "parentham/pbf.hpp"

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace parentham {

enum class Role { Input, Output, Slack };

inline const char* to_string(Role r) {
    switch (r) {
        case Role::Input: return "input";
        case Role::Output: return "output";
        default: return "slack";
    }
}

class Gadget {
public:
    using Semantic = std::function<bool(std::uint64_t)>;  // bit i = input i

    // Throws PreconditionError unless the penalty is non-negative and its
    // kernel is exactly the graph of `semantic`, each row with a unique slack
    // completion.
    Gadget(std::string name, PseudoBoolean penalty, std::vector<Role> roles, Semantic semantic)
        : name_(std::move(name)), penalty_(std::move(penalty)), roles_(std::move(roles)), semantic_(std::move(semantic)) {
        if (roles_.size() != penalty_.arity()) {
            throw DimensionError("gadget '" + name_ + "': one role per variable required");
        }
        for (std::size_t k = 0; k < roles_.size(); ++k) {
            const Role expect = k < num_inputs() ? Role::Input : (k == num_inputs() ? Role::Output : Role::Slack);
            if (roles_[k] != expect) {
                throw DomainError("gadget '" + name_ + "': variables must be ordered inputs, output, slacks");
            }
        }
        verify();
    }

    const std::string& name() const noexcept { return name_; }
    const PseudoBoolean& penalty() const noexcept { return penalty_; }
    const std::vector<Role>& roles() const noexcept { return roles_; }
    std::size_t arity() const noexcept { return roles_.size(); }

    std::size_t num_inputs() const noexcept {
        return static_cast<std::size_t>(std::count(roles_.begin(), roles_.end(), Role::Input));
    }
    std::size_t num_slacks() const noexcept {
        return static_cast<std::size_t>(std::count(roles_.begin(), roles_.end(), Role::Slack));
    }
    std::size_t output_index() const noexcept { return num_inputs(); }

    bool semantic(std::uint64_t inputs) const { return semantic_(inputs); }

    // Rows (inputs, output) of the truth table as assignments over inputs + output.
    std::vector<Assignment> truth_table() const {
        const std::size_t m = num_inputs();
        std::vector<Assignment> rows;
        for (std::uint64_t in = 0; in < (std::uint64_t{1} << m); ++in) {
            const std::uint64_t out = semantic_(in) ? std::uint64_t{1} << m : 0;
            rows.emplace_back(m + 1, in | out);
        }
        std::sort(rows.begin(), rows.end());
        return rows;
    }

private:
    void verify() const {
        const auto nn = is_nonnegative(penalty_);
        if (!nn.nonnegative) {
            throw PreconditionError("gadget '" + name_ + "' is negative at " + nn.witness->to_string());
        }
        const std::size_t visible = num_inputs() + 1;
        std::map<std::uint64_t, int> completions;
        for (const auto& x : kernel(penalty_)) {
            ++completions[x.variables() & low_mask(visible)];
        }
        std::set<std::uint64_t> expected;
        for (const auto& row : truth_table()) {
            expected.insert(row.variables());
        }
        if (completions.size() != expected.size()) {
            throw PreconditionError("gadget '" + name_ + "' kernel does not match its truth table");
        }
        for (const auto& [row, count] : completions) {
            if (!expected.contains(row) || count != 1) {
                throw PreconditionError("gadget '" + name_ + "' kernel does not match its truth table");
            }
        }
    }

    std::string name_;
    PseudoBoolean penalty_;
    std::vector<Role> roles_;
    Semantic semantic_;
};

namespace detail {

inline PseudoBoolean parse_terms(std::size_t arity, std::initializer_list<std::pair<std::uint64_t, long>> t) {
    PseudoBoolean f(arity);
    for (const auto& [m, c] : t) {
        f.add_term(m, c);
    }
    return f;
}

}  // namespace detail

// AND(x,y;p) = xy - 2xp - 2yp + 3p.
inline Gadget and_gadget() {
    return Gadget("and", detail::parse_terms(3, {{0b011, 1}, {0b101, -2}, {0b110, -2}, {0b100, 3}}),
                  {Role::Input, Role::Input, Role::Output}, [](std::uint64_t in) { return in == 0b11; });
}

// OR(x,y;p) = xy + x + y - 2xp - 2yp + p.
inline Gadget or_gadget() {
    return Gadget("or",
                  detail::parse_terms(3, {{0b011, 1}, {0b001, 1}, {0b010, 1}, {0b101, -2}, {0b110, -2}, {0b100, 1}}),
                  {Role::Input, Role::Input, Role::Output}, [](std::uint64_t in) { return in != 0; });
}

// NOT(x;p) = 2xp - x - p + 1 = (x + p - 1)^2.
inline Gadget not_gadget() {
    return Gadget("not", detail::parse_terms(2, {{0b11, 2}, {0b01, -1}, {0b10, -1}, {0b00, 1}}),
                  {Role::Input, Role::Output}, [](std::uint64_t in) { return in == 0; });
}

// XOR(x,y;p) with slack s on (x, y, p, s): AND(x,y;s) + (x + y - 2s - p)^2.
// The slack carries x AND y, and the square pins p = x + y - 2xy.
inline Gadget xor_gadget() {
    const PseudoBoolean and_part = embed_vars(and_gadget().penalty(), 4, std::vector<std::size_t>{0, 1, 3});
    PseudoBoolean lin(4);
    lin.add_term(0b0001, 1);
    lin.add_term(0b0010, 1);
    lin.add_term(0b1000, -2);
    lin.add_term(0b0100, -1);
    return Gadget("xor", and_part + multiply(lin, lin), {Role::Input, Role::Input, Role::Output, Role::Slack},
                  [](std::uint64_t in) { return in == 0b01 || in == 0b10; });
}

inline Gadget gadget_by_name(const std::string& type) {
    if (type == "and") return and_gadget();
    if (type == "or") return or_gadget();
    if (type == "not") return not_gadget();
    if (type == "xor") return xor_gadget();
    throw NetlistError("unknown gate type '" + type + "'");
}

inline std::vector<Gadget> gadget_library() { return {and_gadget(), or_gadget(), not_gadget(), xor_gadget()}; }

// ---------------------------------------------------------------------------
// Netlists. Wires are named; a gate input and a gate output sharing a name are
// the same variable. Names not driven by any gate are primary inputs.

struct GateInstance {
    std::string type;
    std::vector<std::string> inputs;
    std::string output;
};

struct Netlist {
    std::vector<GateInstance> gates;
    std::map<std::string, bool> clamps;
};

inline constexpr char kSlackPrefix = '~';

namespace detail {

inline void check_wire_name(const std::string& name) {
    if (name.empty()) {
        throw NetlistError("empty wire name");
    }
    if (name.front() == kSlackPrefix) {
        throw NetlistError("wire name '" + name + "' uses the reserved slack prefix");
    }
}

// Gate indices in a topological order; throws on any structural defect.
inline std::vector<std::size_t> validate_netlist(const Netlist& nl) {
    std::map<std::string, std::size_t> driver;
    for (std::size_t g = 0; g < nl.gates.size(); ++g) {
        const auto& gate = nl.gates[g];
        const Gadget gad = gadget_by_name(gate.type);
        if (gate.inputs.size() != gad.num_inputs()) {
            throw NetlistError("gate " + std::to_string(g + 1) + " (" + gate.type + ") expects " +
                               std::to_string(gad.num_inputs()) + " inputs, got " +
                               std::to_string(gate.inputs.size()));
        }
        check_wire_name(gate.output);
        for (const auto& in : gate.inputs) {
            check_wire_name(in);
            if (in == gate.output) {
                throw NetlistError("gate " + std::to_string(g + 1) + " feeds its own output '" + in + "'");
            }
        }
        if (!driver.emplace(gate.output, g).second) {
            throw NetlistError("wire '" + gate.output + "' has more than one driver");
        }
    }
    // Kahn's algorithm over gate dependencies.
    std::vector<std::size_t> indegree(nl.gates.size(), 0);
    std::vector<std::vector<std::size_t>> users(nl.gates.size());
    for (std::size_t g = 0; g < nl.gates.size(); ++g) {
        for (const auto& in : nl.gates[g].inputs) {
            if (auto it = driver.find(in); it != driver.end()) {
                users[it->second].push_back(g);
                ++indegree[g];
            }
        }
    }
    std::vector<std::size_t> order;
    std::vector<std::size_t> ready;
    for (std::size_t g = nl.gates.size(); g-- > 0;) {
        if (indegree[g] == 0) {
            ready.push_back(g);
        }
    }
    while (!ready.empty()) {
        const std::size_t g = ready.back();
        ready.pop_back();
        order.push_back(g);
        for (std::size_t u : users[g]) {
            if (--indegree[u] == 0) {
                ready.push_back(u);
            }
        }
    }
    if (order.size() != nl.gates.size()) {
        throw NetlistError("netlist contains a cycle");
    }
    return order;
}

}  // namespace detail

struct ComposedNetwork {
    PseudoBoolean penalty;
    std::vector<std::string> variables;  // variable k+1 is variables[k]; sorted
    std::vector<std::string> inputs;     // undriven wires, sorted
    std::vector<std::string> outputs;    // driven wires, sorted

    std::size_t index_of(const std::string& name) const {
        auto it = std::lower_bound(variables.begin(), variables.end(), name);
        if (it == variables.end() || *it != name) {
            throw NetlistError("unknown wire '" + name + "'");
        }
        return static_cast<std::size_t>(it - variables.begin());
    }
};

// Sum of gate penalties after identifying equally named wires. Clamps are not applied.
inline ComposedNetwork compose(const Netlist& nl) {
    detail::validate_netlist(nl);
    if (nl.gates.empty()) {
        throw NetlistError("netlist has no gates");
    }
    std::set<std::string> names;
    std::set<std::string> driven;
    std::vector<std::vector<std::string>> slack_names(nl.gates.size());
    for (std::size_t g = 0; g < nl.gates.size(); ++g) {
        const auto& gate = nl.gates[g];
        names.insert(gate.inputs.begin(), gate.inputs.end());
        names.insert(gate.output);
        driven.insert(gate.output);
        const std::size_t slacks = gadget_by_name(gate.type).num_slacks();
        for (std::size_t s = 0; s < slacks; ++s) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%cs%04zu_%zu", kSlackPrefix, g + 1, s + 1);
            slack_names[g].push_back(buf);
            names.insert(buf);
        }
    }
    ComposedNetwork net;
    net.variables.assign(names.begin(), names.end());
    for (const auto& n : net.variables) {
        if (n.front() == kSlackPrefix) {
            continue;
        }
        (driven.contains(n) ? net.outputs : net.inputs).push_back(n);
    }
    net.penalty = PseudoBoolean(net.variables.size());
    for (std::size_t g = 0; g < nl.gates.size(); ++g) {
        const auto& gate = nl.gates[g];
        const Gadget gad = gadget_by_name(gate.type);
        std::vector<std::size_t> target;
        for (const auto& in : gate.inputs) {
            target.push_back(net.index_of(in));
        }
        target.push_back(net.index_of(gate.output));
        for (const auto& s : slack_names[g]) {
            target.push_back(net.index_of(s));
        }
        net.penalty = net.penalty + embed_vars(gad.penalty(), net.variables.size(), target);
    }
    return net;
}

// Direct circuit evaluation: values of every non-slack wire.
inline std::map<std::string, bool> evaluate(const Netlist& nl, const std::map<std::string, bool>& inputs) {
    const auto order = detail::validate_netlist(nl);
    std::map<std::string, bool> value = inputs;
    for (std::size_t g : order) {
        const auto& gate = nl.gates[g];
        std::uint64_t in = 0;
        for (std::size_t k = 0; k < gate.inputs.size(); ++k) {
            auto it = value.find(gate.inputs[k]);
            if (it == value.end()) {
                throw NetlistError("no value for wire '" + gate.inputs[k] + "'");
            }
            if (it->second) {
                in |= std::uint64_t{1} << k;
            }
        }
        value[gate.output] = gadget_by_name(gate.type).semantic(in);
    }
    return value;
}

enum class ClampMode { Substitute, AddPenalty };

// Substitute: x := value and the variable is removed (later indices shift down).
// AddPenalty: adds (1 - x) or x and keeps the arity.
inline PseudoBoolean clamp(const PseudoBoolean& f, std::size_t var, bool value,
                           ClampMode mode = ClampMode::Substitute) {
    if (var >= f.arity()) {
        throw DomainError("clamp index " + std::to_string(var + 1) + " out of range for arity " +
                          std::to_string(f.arity()));
    }
    if (mode == ClampMode::Substitute) {
        return restrict_variable(f, var, value);
    }
    return f + PseudoBoolean::literal(f.arity(), var, !value);
}

inline ComposedNetwork clamp(const ComposedNetwork& net, const std::string& wire, bool value,
                             ClampMode mode = ClampMode::Substitute) {
    const std::size_t k = net.index_of(wire);
    ComposedNetwork out = net;
    out.penalty = clamp(net.penalty, k, value, mode);
    if (mode == ClampMode::Substitute) {
        out.variables.erase(out.variables.begin() + static_cast<std::ptrdiff_t>(k));
        std::erase(out.inputs, wire);
        std::erase(out.outputs, wire);
    }
    return out;
}

// compose() followed by every clamp listed in the netlist.
inline ComposedNetwork compose_clamped(const Netlist& nl, ClampMode mode = ClampMode::Substitute) {
    ComposedNetwork net = compose(nl);
    for (const auto& [wire, value] : nl.clamps) {
        net = clamp(net, wire, value, mode);
    }
    return net;
}

struct Minimum {
    Rational value;
    std::vector<Assignment> argmin;  // basis order
};

inline Minimum minimize_bruteforce(const PseudoBoolean& f, const EnumerationOptions& opts = {}) {
    check_enumerable(f.arity(), opts);
    const auto table = to_disjoint_form(f, opts);
    Minimum m{table.front(), {}};
    for (const auto& v : table) {
        if (v < m.value) {
            m.value = v;
        }
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i] == m.value) {
            m.argmin.push_back(Assignment::from_index(f.arity(), i));
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// CNF embedding.

struct Cnf {
    std::size_t num_vars = 0;
    std::vector<std::vector<int>> clauses;  // literals +-k for x_k, 1-based
};

struct SatEmbedding {
    PseudoBoolean penalty;     // variables 1..n are the problem variables, then slacks
    std::size_t num_vars = 0;  // problem variables
    std::size_t num_slacks = 0;
};

// Each clause becomes an OR chain with its final output clamped to 1;
// negated literals enter through x -> 1 - x.
inline SatEmbedding sat_embed(const Cnf& cnf) {
    if (cnf.clauses.empty()) {
        throw DegenerateInputError("empty formula");
    }
    std::vector<std::vector<int>> clauses;
    for (const auto& clause : cnf.clauses) {
        if (clause.empty()) {
            throw DegenerateInputError("empty clause");
        }
        std::vector<int> lits;
        bool tautology = false;
        for (int l : clause) {
            if (l == 0 || static_cast<std::size_t>(std::abs(l)) > cnf.num_vars) {
                throw DomainError("literal " + std::to_string(l) + " out of range");
            }
            if (std::find(lits.begin(), lits.end(), -l) != lits.end()) {
                tautology = true;
            }
            if (std::find(lits.begin(), lits.end(), l) == lits.end()) {
                lits.push_back(l);
            }
        }
        if (lits.size() > 3) {
            throw DomainError("clause width " + std::to_string(lits.size()) + " exceeds 3");
        }
        if (!tautology) {
            clauses.push_back(std::move(lits));
        }
    }
    SatEmbedding out;
    out.num_vars = cnf.num_vars;
    for (const auto& c : clauses) {
        out.num_slacks += c.size() == 3 ? 1 : 0;
    }
    const std::size_t arity = cnf.num_vars + out.num_slacks;
    if (arity > kMaxVariables) {
        throw DimensionError("embedding needs more than 64 variables");
    }
    out.penalty = PseudoBoolean(arity);
    std::size_t next_slack = cnf.num_vars;
    const PseudoBoolean or_clamped = restrict_variable(or_gadget().penalty(), 2, true);  // (1-x)(1-y)
    for (const auto& c : clauses) {
        auto var = [](int l) { return static_cast<std::size_t>(std::abs(l)) - 1; };
        PseudoBoolean term(arity);
        if (c.size() == 1) {
            term = PseudoBoolean::literal(arity, var(c[0]), c[0] < 0);
        } else if (c.size() == 2) {
            term = embed_vars(or_clamped, arity, std::vector<std::size_t>{var(c[0]), var(c[1])});
            for (int l : c) {
                if (l < 0) term = complement_variable(term, var(l));
            }
        } else {
            const std::size_t o = next_slack++;
            PseudoBoolean first = embed_vars(or_gadget().penalty(), arity, std::vector<std::size_t>{var(c[0]), var(c[1]), o});
            for (int l : {c[0], c[1]}) {
                if (l < 0) first = complement_variable(first, var(l));
            }
            PseudoBoolean second = embed_vars(or_clamped, arity, std::vector<std::size_t>{o, var(c[2])});
            if (c[2] < 0) second = complement_variable(second, var(c[2]));
            term = first + second;
        }
        out.penalty = out.penalty + term;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Support map.

struct SupportSet {
    std::size_t arity = 0;
    std::vector<Assignment> members;  // basis order

    bool contains(const Assignment& x) const { return std::binary_search(members.begin(), members.end(), x); }
    friend bool operator==(const SupportSet&, const SupportSet&) = default;
};

// Amplitudes are exact, so membership is an exact nonzero test.
inline SupportSet support(const StateVector& v) {
    SupportSet s{v.arity(), {}};
    for (std::size_t i = 0; i < v.dimension(); ++i) {
        if (!v[i].is_zero()) {
            s.members.push_back(Assignment::from_index(v.arity(), i));
        }
    }
    return s;
}

// Diagonal indicator of the complement: 0 on the support, 1 elsewhere.
inline DiagonalOperator support_parent(const SupportSet& s) {
    if (s.members.empty()) {
        throw PreconditionError("empty support");
    }
    if (s.arity > kMaxDenseQubits) {
        throw ResourceError("support parent is limited to 16 qubits");
    }
    std::vector<Rational> diag(std::size_t{1} << s.arity, Rational(1));
    for (const auto& x : s.members) {
        if (x.size() != s.arity) {
            throw DimensionError("support member has the wrong length");
        }
        diag[x.index()] = 0;
    }
    return DiagonalOperator(s.arity, std::move(diag));
}

}  // namespace parentham
