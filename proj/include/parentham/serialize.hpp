#pragma once

// JSON and line-oriented text formats. Rationals are written as "p" or "p/q"
// strings, variable indices are 1-based, and JSON objects use sorted keys so
// equal values always serialize to identical bytes.

#include "parentham/gadgets.hpp"
#include "parentham/isingker.hpp"
#include "parentham/pauli.hpp"
#include "parentham/pbf.hpp"
#include "parentham/sympbf.hpp"

#include "json.hpp"

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace parentham {

using Json = nlohmann::json;

namespace detail {

inline Rational rational_field(const Json& j, const char* what) {
    if (!j.is_string()) {
        throw FormatError(std::string(what) + " must be a rational string");
    }
    return parse_rational(j.get<std::string>());
}

inline const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw FormatError(std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

inline std::size_t index_field(const Json& j, std::size_t arity, const char* what) {
    if (!j.is_number_integer() || j.get<long long>() < 1 || static_cast<std::size_t>(j.get<long long>()) > arity) {
        throw FormatError(std::string(what) + " must be an index in 1.." + std::to_string(arity));
    }
    return static_cast<std::size_t>(j.get<long long>()) - 1;
}

inline Json complex_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

inline std::complex<double> complex_from(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw FormatError("complex number must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline std::size_t arity_field(const Json& j) {
    const Json& a = field(j, "arity");
    if (!a.is_number_integer() || a.get<long long>() < 0 || a.get<long long>() > 64) {
        throw FormatError("arity must be an integer in 0..64");
    }
    return static_cast<std::size_t>(a.get<long long>());
}

}  // namespace detail

// --- PseudoBoolean ---------------------------------------------------------

inline Json to_json(const PseudoBoolean& f) {
    Json terms = Json::array();
    for (const auto& [mask, c] : f.sorted_terms()) {
        Json vars = Json::array();
        for (std::size_t k = 0; k < f.arity(); ++k) {
            if ((mask >> k) & 1U) vars.push_back(k + 1);
        }
        terms.push_back({{"vars", vars}, {"coeff", to_string(c)}});
    }
    return {{"arity", f.arity()}, {"terms", terms}};
}

inline PseudoBoolean pseudo_boolean_from_json(const Json& j) {
    const std::size_t n = detail::arity_field(j);
    PseudoBoolean f(n);
    const Json& terms = detail::field(j, "terms");
    if (!terms.is_array()) throw FormatError("terms must be an array");
    for (const auto& t : terms) {
        const Json& vars = detail::field(t, "vars");
        if (!vars.is_array()) throw FormatError("vars must be an array");
        std::uint64_t mask = 0;
        for (const auto& v : vars) {
            mask |= std::uint64_t{1} << detail::index_field(v, n, "variable");
        }
        f.add_term(mask, detail::rational_field(detail::field(t, "coeff"), "coeff"));
    }
    return f;
}

// --- Symmetric factorization -----------------------------------------------

inline Json to_json(const RootFactorization& rf) {
    Json roots = Json::array();
    for (const auto& r : rf.roots) roots.push_back(detail::complex_json(r));
    Json exact = Json::array();
    for (const auto& r : rf.exact_roots) exact.push_back(to_string(r));
    Json j = {{"arity", rf.arity}, {"K", detail::complex_json(rf.scale)}, {"roots", roots}, {"exact_roots", exact}};
    j["exact_K"] = rf.exact_scale ? Json(to_string(*rf.exact_scale)) : Json(nullptr);
    return j;
}

inline RootFactorization factorization_from_json(const Json& j) {
    RootFactorization rf;
    rf.arity = detail::arity_field(j);
    rf.scale = detail::complex_from(detail::field(j, "K"));
    for (const auto& r : detail::field(j, "roots")) rf.roots.push_back(detail::complex_from(r));
    for (const auto& r : detail::field(j, "exact_roots")) rf.exact_roots.push_back(detail::rational_field(r, "root"));
    if (j.contains("exact_K") && !j.at("exact_K").is_null()) {
        rf.exact_scale = detail::rational_field(j.at("exact_K"), "exact_K");
    }
    return rf;
}

// --- Pauli sums ------------------------------------------------------------

inline Json to_json(const PauliSum& h) {
    Json terms = Json::array();
    for (const auto& [p, c] : h.terms()) {
        terms.push_back({{"pauli", p.letters()}, {"coeff", to_string(c)}});
    }
    return {{"arity", h.arity()}, {"terms", terms}};
}

inline PauliSum pauli_sum_from_json(const Json& j) {
    const std::size_t n = detail::arity_field(j);
    PauliSum h(n);
    for (const auto& t : detail::field(j, "terms")) {
        const Json& p = detail::field(t, "pauli");
        if (!p.is_string() || p.get<std::string>().size() != n) {
            throw FormatError("pauli must be a string of " + std::to_string(n) + " letters");
        }
        h.add_term(PauliString::parse(p.get<std::string>()), detail::rational_field(detail::field(t, "coeff"), "coeff"));
    }
    return h;
}

// --- Realizability ---------------------------------------------------------

inline Json to_json(const QuadraticRealization& r) {
    Json j = {{"arity", r.arity}, {"feasible", r.feasible}};
    if (r.feasible) {
        j["c0"] = to_string(r.c0);
        Json h = Json::array();
        for (const auto& v : r.h) h.push_back(to_string(v));
        j["h"] = h;
        Json J = Json::array();
        for (std::size_t l = 0; l < r.arity; ++l) {
            for (std::size_t k = l + 1; k < r.arity; ++k) {
                if (r.J[l][k] != 0) J.push_back({l + 1, k + 1, to_string(r.J[l][k])});
            }
        }
        j["J"] = J;
    } else {
        Json cert = Json::array();
        for (const auto& [x, m] : r.certificate) cert.push_back({x.to_string(), to_string(m)});
        j["certificate"] = cert;
    }
    return j;
}

inline QuadraticRealization realization_from_json(const Json& j) {
    QuadraticRealization r;
    r.arity = detail::arity_field(j);
    const Json& f = detail::field(j, "feasible");
    if (!f.is_boolean()) throw FormatError("feasible must be a boolean");
    r.feasible = f.get<bool>();
    if (r.feasible) {
        r.c0 = detail::rational_field(detail::field(j, "c0"), "c0");
        const Json& h = detail::field(j, "h");
        if (!h.is_array() || h.size() != r.arity) throw FormatError("h must list one field per variable");
        for (const auto& v : h) r.h.push_back(detail::rational_field(v, "h"));
        r.J.assign(r.arity, std::vector<Rational>(r.arity));
        for (const auto& e : detail::field(j, "J")) {
            if (!e.is_array() || e.size() != 3) throw FormatError("J entries are [l, k, \"p/q\"]");
            const std::size_t l = detail::index_field(e[0], r.arity, "l");
            const std::size_t k = detail::index_field(e[1], r.arity, "k");
            if (l >= k) throw FormatError("J entries need l < k");
            r.J[l][k] = detail::rational_field(e[2], "J");
        }
    } else {
        for (const auto& e : detail::field(j, "certificate")) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_string()) {
                throw FormatError("certificate entries are [\"bits\", \"p/q\"]");
            }
            const Assignment x = Assignment::parse(e[0].get<std::string>());
            if (x.size() != r.arity) throw FormatError("certificate row has the wrong length");
            r.certificate.emplace_back(x, detail::rational_field(e[1], "multiplier"));
        }
    }
    return r;
}

inline bool operator==(const QuadraticRealization& a, const QuadraticRealization& b) {
    return a.arity == b.arity && a.feasible == b.feasible && a.c0 == b.c0 && a.h == b.h && a.J == b.J &&
           a.certificate == b.certificate;
}

// --- Netlists --------------------------------------------------------------

inline Json to_json(const Netlist& nl) {
    Json gates = Json::array();
    for (const auto& g : nl.gates) gates.push_back({{"type", g.type}, {"inputs", g.inputs}, {"output", g.output}});
    Json clamps = Json::object();
    for (const auto& [w, v] : nl.clamps) clamps[w] = v ? 1 : 0;
    return {{"gates", gates}, {"clamps", clamps}};
}

inline Netlist netlist_from_json(const Json& j) {
    Netlist nl;
    const Json& gates = detail::field(j, "gates");
    if (!gates.is_array()) throw FormatError("gates must be an array");
    for (const auto& g : gates) {
        GateInstance gi;
        const Json& type = detail::field(g, "type");
        const Json& out = detail::field(g, "output");
        const Json& ins = detail::field(g, "inputs");
        if (!type.is_string() || !out.is_string() || !ins.is_array()) {
            throw FormatError("gate needs string type, string output and an inputs array");
        }
        gi.type = type.get<std::string>();
        gi.output = out.get<std::string>();
        for (const auto& in : ins) {
            if (!in.is_string()) throw FormatError("gate inputs must be strings");
            gi.inputs.push_back(in.get<std::string>());
        }
        nl.gates.push_back(std::move(gi));
    }
    if (j.contains("clamps")) {
        const Json& c = j.at("clamps");
        if (!c.is_object()) throw FormatError("clamps must be an object");
        for (const auto& [w, v] : c.items()) {
            if (!(v.is_boolean() || (v.is_number_integer() && (v.get<int>() == 0 || v.get<int>() == 1)))) {
                throw FormatError("clamp value for '" + w + "' must be 0 or 1");
            }
            nl.clamps[w] = v.is_boolean() ? v.get<bool>() : v.get<int>() == 1;
        }
    }
    return nl;
}

inline bool operator==(const GateInstance& a, const GateInstance& b) {
    return a.type == b.type && a.inputs == b.inputs && a.output == b.output;
}
inline bool operator==(const Netlist& a, const Netlist& b) { return a.gates == b.gates && a.clamps == b.clamps; }

// --- Text formats ----------------------------------------------------------

namespace detail {

// Non-empty lines with '#' comments removed, paired with 1-based line numbers.
inline std::vector<std::pair<std::size_t, std::string>> content_lines(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string>> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        if (line.find_first_not_of(" \t\r") != std::string::npos) out.emplace_back(no, line);
    }
    return out;
}

}  // namespace detail

// "bitstring re im" per line; missing amplitudes are zero.
inline StateVector parse_state(std::string_view text) {
    std::optional<std::size_t> n;
    std::vector<ComplexRational> amps;
    for (const auto& [no, line] : detail::content_lines(text)) {
        std::istringstream ls(line);
        std::string bits, re, im, extra;
        if (!(ls >> bits >> re >> im) || (ls >> extra)) {
            throw SyntaxError(no, 1, "expected 'bitstring re im'");
        }
        Assignment x;
        try {
            x = Assignment::parse(bits);
        } catch (const FormatError& e) {
            throw SyntaxError(no, 1, e.what());
        }
        if (!n) {
            n = x.size();
            if (*n == 0 || *n > kMaxDenseQubits) throw ResourceError("state files support 1..16 qubits");
            amps.assign(std::size_t{1} << *n, ComplexRational{});
        } else if (x.size() != *n) {
            throw SyntaxError(no, 1, "bitstring length differs from the first line");
        }
        try {
            amps[x.index()] = ComplexRational(parse_rational(re), parse_rational(im));
        } catch (const FormatError& e) {
            throw SyntaxError(no, bits.size() + 2, e.what());
        }
    }
    if (!n) throw FormatError("state file has no amplitudes");
    return StateVector(*n, std::move(amps));
}

inline std::string to_state_text(const StateVector& v) {
    if (v.sqrt2_exponent() % 2 != 0) {
        throw DomainError("state has an irrational global factor");
    }
    std::string out;
    for (std::size_t i = 0; i < v.dimension(); ++i) {
        const auto a = v.exact_amplitude(i);
        if (!a.is_zero()) {
            out += Assignment::from_index(v.arity(), i).to_string() + " " + to_string(a.re) + " " + to_string(a.im) + "\n";
        }
    }
    return out;
}

// One bitstring per line; duplicates are merged, result in basis order.
inline std::vector<Assignment> parse_strings(std::string_view text, std::optional<std::size_t> arity = std::nullopt) {
    std::set<Assignment> out;
    for (const auto& [no, line] : detail::content_lines(text)) {
        std::istringstream ls(line);
        std::string bits, extra;
        ls >> bits;
        if (ls >> extra) throw SyntaxError(no, 1, "one bitstring per line");
        Assignment x;
        try {
            x = Assignment::parse(bits);
        } catch (const FormatError& e) {
            throw SyntaxError(no, 1, e.what());
        }
        if (!arity) arity = x.size();
        if (x.size() != *arity) {
            throw SyntaxError(no, 1, "expected " + std::to_string(*arity) + " bits, got " + std::to_string(x.size()));
        }
        out.insert(x);
    }
    return {out.begin(), out.end()};
}

inline std::string to_strings_text(const std::vector<Assignment>& xs) {
    std::string out;
    for (const auto& x : xs) out += x.to_string() + "\n";
    return out;
}

}  // namespace parentham
