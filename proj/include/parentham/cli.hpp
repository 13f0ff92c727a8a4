#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// that tests can drive it with in-memory streams.
//
// Exit codes: 0 success, 1 a verification check failed, 2 usage or input error.

#include "parentham/expression.hpp"
#include "parentham/gadgets.hpp"
#include "parentham/isingker.hpp"
#include "parentham/serialize.hpp"
#include "parentham/stab.hpp"
#include "parentham/sympbf.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace parentham::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

class InputFileError : public Error {
public:
    using Error::Error;
};

struct Options {
    bool json = false;
    bool verify = false;
    bool timing = false;
    unsigned threads = 1;
    std::size_t cap = kDefaultEnumerationCap;

    EnumerationOptions enumeration() const { return {cap, threads}; }
};

// Result payload, human-readable lines and named verification checks.
class Report {
public:
    Json result = Json::object();
    std::vector<std::string> lines;

    void check(const std::string& name, bool passed) { checks_.emplace_back(name, passed); }
    bool passed() const {
        return std::all_of(checks_.begin(), checks_.end(), [](const auto& c) { return c.second; });
    }
    const std::vector<std::pair<std::string, bool>>& checks() const { return checks_; }

private:
    std::vector<std::pair<std::string, bool>> checks_;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputFileError("cannot read file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// "3/2 III, -1/2 ZZI, ..." in term order.
inline std::string inline_text(const PauliSum& h) {
    std::string out;
    for (const auto& [p, c] : h.terms()) {
        if (!out.empty()) out += ", ";
        out += to_string(c) + " " + p.letters();
    }
    return out.empty() ? "0" : out;
}

inline Json bitstrings(const std::vector<Assignment>& xs) {
    Json a = Json::array();
    for (const auto& x : xs) a.push_back(x.to_string());
    return a;
}

inline Json rationals(const std::vector<Rational>& v) {
    Json a = Json::array();
    for (const auto& q : v) a.push_back(to_string(q));
    return a;
}

inline std::string join_bits(const std::vector<Assignment>& xs) {
    std::string s;
    for (const auto& x : xs) s += (s.empty() ? "" : " ") + x.to_string();
    return s.empty() ? "(empty)" : s;
}

inline Json ising_json(const IsingForm& f) {
    Json J = Json::array();
    for (std::size_t l = 0; l < f.J.size(); ++l) {
        for (std::size_t k = l + 1; k < f.J.size(); ++k) {
            if (f.J[l][k] != 0) J.push_back({l + 1, k + 1, to_string(f.J[l][k])});
        }
    }
    return {{"constant", to_string(f.constant)}, {"h", rationals(f.h)}, {"J", J}};
}

// --- subcommand bodies -----------------------------------------------------

inline void pbf_command(const std::string& action, const std::string& file, const std::string& at, const Options& o,
                        Report& r) {
    const PseudoBoolean f = parse_expression(read_file(file));
    r.result["function"] = to_json(f);
    if (action == "kernel") {
        const auto ker = kernel(f, o.enumeration());
        r.result["kernel"] = bitstrings(ker);
        r.result["size"] = ker.size();
        r.lines.push_back("kernel (" + std::to_string(ker.size()) + "): " + join_bits(ker));
        if (o.verify) {
            const auto table = to_disjoint_form(f, o.enumeration());
            std::size_t zeros = 0;
            for (const auto& v : table) zeros += v == 0 ? 1 : 0;
            bool ok = zeros == ker.size();
            for (const auto& x : ker) ok = ok && eval(f, x) == 0;
            r.check("kernel_matches_evaluation", ok);
        }
    } else if (action == "eval") {
        if (at.empty()) {
            throw CLI::ValidationError("--at", "pbf eval needs --at");
        }
        Rational v;
        if (at.find(',') != std::string::npos) {
            std::vector<Rational> coords;
            std::stringstream ss(at);
            std::string item;
            while (std::getline(ss, item, ',')) coords.push_back(parse_rational(item));
            if (coords.size() != f.arity()) throw DimensionError("point has the wrong number of coordinates");
            v = eval_real(f, RealPoint(coords));
        } else {
            const Assignment x = Assignment::parse(at);
            if (x.size() != f.arity()) throw DimensionError("assignment has the wrong number of bits");
            v = eval(f, x);
        }
        r.result["at"] = at;
        r.result["value"] = to_string(v);
        r.lines.push_back("f(" + at + ") = " + to_string(v));
    } else if (action == "nonneg") {
        const auto nn = is_nonnegative(f, o.enumeration());
        const auto m = minimize_bruteforce(f, o.enumeration());
        r.result["nonnegative"] = nn.nonnegative;
        r.result["minimum"] = to_string(m.value);
        r.result["witness"] = nn.witness ? Json(nn.witness->to_string()) : Json(nullptr);
        r.lines.push_back(std::string("nonnegative: ") + (nn.nonnegative ? "yes" : "no") + ", minimum " +
                          to_string(m.value));
        if (nn.witness) r.lines.push_back("witness: " + nn.witness->to_string());
        if (o.verify) r.check("minimum_consistent", nn.nonnegative == (m.value >= 0));
    } else if (action == "pauli") {
        const PauliSum h = pbf_to_pauli(f);
        r.result["pauli"] = to_json(h);
        r.result["cardinality"] = pauli_cardinality(h);
        r.lines.push_back("pauli: " + inline_text(h));
        r.lines.push_back("cardinality: " + std::to_string(pauli_cardinality(h)));
        if (o.verify) r.check("round_trip", pauli_to_pbf(h) == f);
    } else {
        throw CLI::ValidationError("action", "unknown pbf action '" + action + "'");
    }
}

inline void sym_command(const std::string& action, const std::string& file, const Options& o, Report& r) {
    const PseudoBoolean f = parse_expression(read_file(file));
    const auto sc = detect_symmetric(f, o.enumeration());
    if (!sc) {
        throw DomainError("function is not symmetric: f(" + sc.witness->first.to_string() + ") != f(" +
                          sc.witness->second.to_string() + ")");
    }
    const SymmetricForm form = power_form(f);
    r.result["arity"] = f.arity();
    r.result["power"] = rationals(form.power_coeffs);
    r.result["canonical"] = rationals(symmetric_coefficients(f));
    if (action == "profile") {
        r.result["profile"] = rationals(sc.profile->values);
        std::string s;
        for (std::size_t w = 0; w < sc.profile->values.size(); ++w) {
            s += (w ? ", " : "") + std::to_string(w) + ":" + to_string(sc.profile->values[w]);
        }
        r.lines.push_back("profile by weight: " + s);
        if (o.verify) r.check("profile_round_trip", canonical_to_profile(symmetric_coefficients(f)) == *sc.profile);
    } else if (action == "factor") {
        const RootFactorization rf = factorize(form);
        r.result["factorization"] = to_json(rf);
        std::string roots;
        for (const auto& z : rf.roots) {
            std::ostringstream ss;
            ss << z.real();
            if (z.imag() != 0) ss << (z.imag() > 0 ? "+" : "") << z.imag() << "i";
            roots += (roots.empty() ? "" : ", ") + ss.str();
        }
        r.lines.push_back("roots: " + roots);
        if (rf.exact_scale) {
            r.lines.push_back("K = " + to_string(*rf.exact_scale) + " (f = K prod (lambda_l - s))");
        }
        if (!rf.exact_roots.empty()) {
            r.lines.push_back("exact roots: " + [&] {
                std::string s;
                for (const auto& q : rf.exact_roots) s += (s.empty() ? "" : ", ") + to_string(q);
                return s;
            }());
        }
        if (o.verify) {
            bool ok = true;
            const SymmetricForm back = reconstruct(rf);
            if (rf.all_exact()) {
                ok = back.power_coeffs == form.power_coeffs;
            } else {
                for (std::size_t s = 0; s <= form.arity; ++s) {
                    ok = ok && std::abs(back.at_weight(s).get_d() - form.at_weight(s).get_d()) <=
                                   1e-6 * (1 + std::abs(form.at_weight(s).get_d()));
                }
            }
            r.check("reconstruction", ok);
        }
    } else {
        throw CLI::ValidationError("action", "unknown sym action '" + action + "'");
    }
}

inline void parent_clifford(const std::string& file, const Options& o, Report& r) {
    const CliffordCircuit c = parse_circuit(read_file(file));
    const PauliSum h = projector_parent(c);
    r.result["qubits"] = c.arity();
    r.result["parent"] = to_json(h);
    r.result["cardinality"] = pauli_cardinality(h);
    r.lines.push_back("parent: " + inline_text(h));
    if (!o.verify) return;
    r.check("kernel_dimension_one", kernel_dimension(conjugated_generators(c)) == 1);
    if (c.arity() <= kMaxDenseQubits) {
        const StateVector psi = prepare_state(c);
        r.check("annihilates_state", apply(h, psi).is_zero());
        if (c.arity() <= 8) {
            bool ok = true;
            for (std::uint64_t i = 0; i < (std::uint64_t{1} << c.arity()) && ok; ++i) {
                const Assignment x = Assignment::from_index(c.arity(), i);
                const StateVector ux = dense_apply(c, StateVector::basis(x));
                StateVector scaled = ux;
                for (auto& a : scaled.amplitudes()) a = Rational(x.weight()) * a;
                ok = apply(h, ux) == scaled;
            }
            r.check("eigenvalue_relation", ok);
        }
        if (c.arity() >= 2 && psi == StateVector::ghz(c.arity())) {
            const std::size_t n = c.arity();
            PauliSum ref(n);
            ref.add_term(PauliString::identity(n), Rational(static_cast<long>(n), 2));
            for (std::size_t j = 0; j + 1 < n; ++j) {
                ref.add_term(PauliString(n, 0, (std::uint64_t{3}) << j), Rational(-1, 2));
            }
            ref.add_term(PauliString(n, low_mask(n), 0), Rational(-1, 2));
            r.check("ghz_parent_reference", ref == h);
        }
    }
}

inline void parent_support(const std::string& file, const Options& o, Report& r) {
    const StateVector v = parse_state(read_file(file));
    const SupportSet s = support(v);
    const DiagonalOperator d = support_parent(s);
    r.result["support"] = bitstrings(s.members);
    r.result["kernel_dimension"] = d.kernel_dimension();
    r.result["penalty"] = to_json(from_disjoint_form(d.diagonal()));
    r.lines.push_back("support (" + std::to_string(s.members.size()) + "): " + join_bits(s.members));
    r.lines.push_back("kernel dimension: " + std::to_string(d.kernel_dimension()));
    if (o.verify) {
        r.check("annihilates_state", apply(d, v).is_zero());
        r.check("kernel_dimension_matches_support", d.kernel_dimension() == s.members.size());
    }
}

inline void parent_ghz_quadratic(std::size_t n, const Options& o, Report& r) {
    const PenaltyResult p = ghz_quadratic(n);
    r.result["penalty"] = to_json(p.penalty);
    r.result["ising"] = ising_json(ising_form(p.penalty));
    r.lines.push_back("penalty: " + to_string(p.penalty));
    if (p.warning) {
        r.result["warning"] = *p.warning;
        r.lines.push_back("warning: " + *p.warning);
    }
    if (o.verify) {
        r.check("nonnegative", is_nonnegative(p.penalty, o.enumeration()).nonnegative);
        const auto ker = kernel(p.penalty, o.enumeration());
        r.check("kernel_is_ghz_support",
                ker == std::vector<Assignment>{Assignment(n, 0), Assignment(n, low_mask(n))});
    }
}

// Kernel rows expected from direct evaluation, projected to the non-slack variables.
inline std::set<std::uint64_t> expected_network_rows(const Netlist& nl, const ComposedNetwork& net) {
    std::set<std::uint64_t> rows;
    const std::size_t m = net.inputs.size();
    if (m >= 63) throw ResourceError("too many primary inputs to enumerate");
    for (std::uint64_t in = 0; in < (std::uint64_t{1} << m); ++in) {
        std::map<std::string, bool> assign;
        for (std::size_t k = 0; k < m; ++k) assign[net.inputs[k]] = (in >> k) & 1U;
        for (const auto& [w, v] : nl.clamps) {
            if (!std::binary_search(net.outputs.begin(), net.outputs.end(), w) &&
                !std::binary_search(net.inputs.begin(), net.inputs.end(), w)) {
                assign.emplace(w, v);  // clamped primary input, no longer a variable
            }
        }
        const auto values = evaluate(nl, assign);
        bool consistent = true;
        for (const auto& [w, v] : nl.clamps) consistent = consistent && values.at(w) == v;
        if (!consistent) continue;
        std::uint64_t row = 0;
        for (std::size_t k = 0; k < net.variables.size(); ++k) {
            if (net.variables[k].front() != kSlackPrefix && values.at(net.variables[k])) row |= std::uint64_t{1} << k;
        }
        rows.insert(row);
    }
    return rows;
}

inline void gadget_compose(const std::string& file, const std::vector<std::string>& clamps, bool minimize,
                           bool add_penalty, const Options& o, Report& r) {
    Json j;
    try {
        j = Json::parse(read_file(file));
    } catch (const Json::parse_error& e) {
        throw FormatError(std::string("netlist JSON: ") + e.what());
    }
    Netlist nl = netlist_from_json(j);
    for (const auto& c : clamps) {
        const auto eq = c.find('=');
        if (eq == std::string::npos || eq == 0 || (c.substr(eq + 1) != "0" && c.substr(eq + 1) != "1")) {
            throw CLI::ValidationError("--clamp", "expected wire=0 or wire=1, got '" + c + "'");
        }
        nl.clamps[c.substr(0, eq)] = c.substr(eq + 1) == "1";
    }
    const ClampMode mode = add_penalty ? ClampMode::AddPenalty : ClampMode::Substitute;
    const ComposedNetwork net = compose_clamped(nl, mode);
    r.result["variables"] = net.variables;
    r.result["inputs"] = net.inputs;
    r.result["outputs"] = net.outputs;
    r.result["penalty"] = to_json(net.penalty);
    r.result["clamps"] = to_json(nl)["clamps"];
    std::string vars;
    for (const auto& v : net.variables) vars += (vars.empty() ? "" : " ") + v;
    r.lines.push_back("variables: " + vars);
    r.lines.push_back("penalty: " + to_string(net.penalty));
    if (minimize) {
        const Minimum m = minimize_bruteforce(net.penalty, o.enumeration());
        r.result["minimum"] = to_string(m.value);
        r.result["argmin"] = bitstrings(m.argmin);
        r.lines.push_back("minimum " + to_string(m.value) + " at: " + join_bits(m.argmin));
    }
    if (o.verify) {
        r.check("nonnegative", is_nonnegative(net.penalty, o.enumeration()).nonnegative);
        std::set<std::uint64_t> got;
        std::map<std::uint64_t, int> completions;
        std::uint64_t visible = 0;
        for (std::size_t k = 0; k < net.variables.size(); ++k) {
            if (net.variables[k].front() != kSlackPrefix) visible |= std::uint64_t{1} << k;
        }
        for (const auto& x : kernel(net.penalty, o.enumeration())) ++completions[x.variables() & visible];
        bool unique = true;
        for (const auto& [row, cnt] : completions) {
            got.insert(row);
            unique = unique && cnt == 1;
        }
        r.check("kernel_matches_circuit", got == expected_network_rows(nl, net));
        r.check("unique_slack_completion", unique);
    }
}

inline void ising_realize(const std::string& file, std::size_t n, const Options& o, Report& r) {
    const auto S = parse_strings(read_file(file), n);
    const QuadraticRealization q = quadratic_realizability(S, n, o.threads);
    r.result = to_json(q);
    if (q.feasible) {
        r.lines.push_back("feasible: " + to_string(q.form()));
    } else {
        std::string cert;
        for (const auto& [x, m] : q.certificate) cert += (cert.empty() ? "" : ", ") + x.to_string() + ":" + to_string(m);
        r.lines.push_back("infeasible; certificate " + cert);
    }
    if (o.verify) {
        if (q.feasible) {
            const auto table = to_disjoint_form(q.form());
            std::set<Assignment> target(S.begin(), S.end());
            bool ok = true;
            for (std::size_t i = 0; i < table.size(); ++i) {
                ok = ok && (target.contains(Assignment::from_index(n, i)) ? table[i] == 0 : table[i] >= 1);
            }
            r.check("realization_exhaustive", ok);
        } else {
            r.check("certificate_valid", verify_realizability_certificate(S, n, q.certificate));
        }
    }
}

// --- driver ----------------------------------------------------------------

inline int exit_code(const Options& o, const Report& r) {
    return o.verify && !r.passed() ? kExitVerifyFailed : kExitOk;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Parent Hamiltonians and penalty functions over pseudo-Boolean polynomials", "parentham"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_flag("--json", o.json, "Machine-readable JSON report");
    app.add_flag("--verify", o.verify, "Run the verification checks");
    app.add_flag("--timing", o.timing, "Include wall-clock timing in the report");
    app.add_option("--threads", o.threads, "Worker threads for exhaustive scans")->check(CLI::Range(1u, 256u));
    app.add_option("--cap", o.cap, "Enumeration cap on the number of variables")->check(CLI::Range(1, 30));

    std::string action, file, at;
    std::size_t n = 0;
    std::vector<std::string> clamps;
    bool minimize = false;
    bool add_penalty = false;

    auto* pbf = app.add_subcommand("pbf", "Pseudo-Boolean function queries");
    pbf->add_option("action", action, "kernel | eval | nonneg | pauli")
        ->required()
        ->check(CLI::IsMember({"kernel", "eval", "nonneg", "pauli"}));
    pbf->add_option("file", file, "Expression file")->required();
    pbf->add_option("--at", at, "Bit string (0110) or comma-separated point in [0,1]^n");

    auto* sym = app.add_subcommand("sym", "Symmetric functions");
    sym->add_option("action", action, "factor | profile")->required()->check(CLI::IsMember({"factor", "profile"}));
    sym->add_option("file", file, "Expression file")->required();

    auto* parent = app.add_subcommand("parent", "Parent Hamiltonian constructions");
    parent->require_subcommand(1);
    auto* clifford = parent->add_subcommand("clifford", "Projector parent of a Clifford-prepared state");
    clifford->add_option("circuit", file, "Circuit file")->required();
    auto* supp = parent->add_subcommand("support", "Diagonal parent from the support of a state");
    supp->add_option("state", file, "State file")->required();
    auto* ghzq = parent->add_subcommand("ghz-quadratic", "Quadratic GHZ penalty");
    ghzq->add_option("-n", n, "Number of qubits")->required()->check(CLI::Range(1, 64));

    auto* gadget = app.add_subcommand("gadget", "Gate gadgets");
    gadget->require_subcommand(1);
    auto* comp = gadget->add_subcommand("compose", "Compose a netlist into one penalty");
    comp->add_option("netlist", file, "Netlist JSON")->required();
    comp->add_option("--clamp", clamps, "Clamp a wire, e.g. out=1 (repeatable)");
    comp->add_flag("--minimize", minimize, "Exhaustively minimize the composed penalty");
    comp->add_flag("--add-penalty", add_penalty, "Clamp by adding (1-x) or x instead of substituting");

    auto* ising = app.add_subcommand("ising", "Ising kernel problem");
    ising->require_subcommand(1);
    auto* realize = ising->add_subcommand("realize", "Decide quadratic realizability of a kernel");
    realize->add_option("strings", file, "File with one bit string per line")->required();
    realize->add_option("-n", n, "String length")->required()->check(CLI::Range(1, 12));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\nrun with --help for usage\n";
        return kExitUsage;
    }

    Report r;
    std::vector<std::string> echo = args;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (pbf->parsed()) {
            pbf_command(action, file, at, o, r);
        } else if (sym->parsed()) {
            sym_command(action, file, o, r);
        } else if (clifford->parsed()) {
            parent_clifford(file, o, r);
        } else if (supp->parsed()) {
            parent_support(file, o, r);
        } else if (ghzq->parsed()) {
            parent_ghz_quadratic(n, o, r);
        } else if (comp->parsed()) {
            gadget_compose(file, clamps, minimize, add_penalty, o, r);
        } else if (realize->parsed()) {
            ising_realize(file, n, o, r);
        }
    } catch (const CLI::ValidationError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InputFileError& e) {
        err << "file error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SyntaxError& e) {
        err << "syntax error: " << file << ":" << e.what() << "\n";
        return kExitUsage;
    } catch (const FormatError& e) {
        err << "format error: " << file << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NetlistError& e) {
        err << "netlist error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    if (o.json) {
        Json report = {{"command", echo}, {"result", r.result}};
        if (o.verify) {
            Json checks = Json::array();
            for (const auto& [name, ok] : r.checks()) checks.push_back({{"check", name}, {"passed", ok}});
            report["verification"] = {{"checks", checks}, {"passed", r.passed()}};
        }
        if (o.timing) report["timing_ms"] = ms;
        out << report.dump(2) << "\n";
    } else {
        for (const auto& l : r.lines) out << l << "\n";
        if (o.verify) {
            for (const auto& [name, ok] : r.checks()) out << "check " << name << ": " << (ok ? "pass" : "FAIL") << "\n";
            out << "verification: " << (r.passed() ? "pass" : "FAIL") << "\n";
        }
        if (o.timing) out << "time: " << ms << " ms\n";
    }
    return exit_code(o, r);
}

}  // namespace parentham::cli
