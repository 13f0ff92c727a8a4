#pragma once

// Clifford circuits acting on Pauli strings by conjugation, and the parent
// Hamiltonian of a stabilizer state U|0^n>:
//
//     H = sum_l U |1><1|_l U^dag = (n/2) I - 1/2 sum_l U Z_l U^dag
//
// U Z_l U^dag are computed in the binary symplectic picture with explicit
// sign tracking, so no dense object is needed to build H.

#include "parentham/pauli.hpp"

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace parentham {

struct CliffordGate {
    enum class Kind { H, S, X, Z, CNOT };

    Kind kind;
    std::size_t target;
    std::size_t control = 0;  // CNOT only

    static CliffordGate h(std::size_t q) { return {Kind::H, q}; }
    static CliffordGate s(std::size_t q) { return {Kind::S, q}; }
    static CliffordGate x(std::size_t q) { return {Kind::X, q}; }
    static CliffordGate z(std::size_t q) { return {Kind::Z, q}; }
    static CliffordGate cnot(std::size_t control, std::size_t target) { return {Kind::CNOT, target, control}; }

    friend bool operator==(const CliffordGate&, const CliffordGate&) = default;
};

// Gates run in list order; qubit indices are 0-based.
class CliffordCircuit {
public:
    CliffordCircuit() = default;
    explicit CliffordCircuit(std::size_t arity) : arity_(arity) {
        if (arity > kMaxVariables) {
            throw DimensionError("at most 64 qubits");
        }
    }

    CliffordCircuit& add(const CliffordGate& g) {
        if (g.target >= arity_ || (g.kind == CliffordGate::Kind::CNOT && g.control >= arity_)) {
            throw DomainError("gate qubit index out of range");
        }
        if (g.kind == CliffordGate::Kind::CNOT && g.control == g.target) {
            throw DomainError("CNOT control equals target");
        }
        gates_.push_back(g);
        return *this;
    }

    std::size_t arity() const noexcept { return arity_; }
    const std::vector<CliffordGate>& gates() const noexcept { return gates_; }

    friend bool operator==(const CliffordCircuit&, const CliffordCircuit&) = default;

private:
    std::size_t arity_ = 0;
    std::vector<CliffordGate> gates_;
};

// outer ∘ inner: the unitary U_outer U_inner, i.e. inner's gates run first.
inline CliffordCircuit compose(const CliffordCircuit& outer, const CliffordCircuit& inner) {
    check_same_arity(outer.arity(), inner.arity());
    CliffordCircuit out = inner;
    for (const auto& g : outer.gates()) {
        out.add(g);
    }
    return out;
}

inline CliffordCircuit ghz_circuit(std::size_t n) {
    if (n < 2) {
        throw DomainError("GHZ circuit needs n >= 2");
    }
    CliffordCircuit c(n);
    c.add(CliffordGate::h(0));
    for (std::size_t j = 0; j + 1 < n; ++j) {
        c.add(CliffordGate::cnot(j, j + 1));
    }
    return c;
}

struct SymplecticPauli {
    std::size_t arity = 0;
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    bool negative = false;

    static SymplecticPauli z_on(std::size_t n, std::size_t qubit) {
        return {n, 0, std::uint64_t{1} << qubit, false};
    }

    static SymplecticPauli from(const PauliString& p) {
        if (p.phase() % 2 != 0) {
            throw DomainError("symplectic form holds only +-1 signs");
        }
        return {p.arity(), p.x(), p.z(), p.phase() == 2};
    }

    PauliString to_pauli() const { return PauliString(arity, x, z, negative ? 2 : 0); }

    friend bool operator==(const SymplecticPauli&, const SymplecticPauli&) = default;
};

inline int symplectic_product(const SymplecticPauli& a, const SymplecticPauli& b) {
    return (popcount(a.x & b.z) + popcount(a.z & b.x)) % 2;
}

// U p U^dag for a single gate.
inline void conjugate_in_place(const CliffordGate& g, SymplecticPauli& p) {
    const std::uint64_t t = std::uint64_t{1} << g.target;
    const bool xt = p.x & t;
    const bool zt = p.z & t;
    switch (g.kind) {
        case CliffordGate::Kind::H:
            p.negative ^= xt && zt;
            p.x = (p.x & ~t) | (zt ? t : 0);
            p.z = (p.z & ~t) | (xt ? t : 0);
            break;
        case CliffordGate::Kind::S:
            p.negative ^= xt && zt;
            if (xt) {
                p.z ^= t;
            }
            break;
        case CliffordGate::Kind::X:
            p.negative ^= zt;
            break;
        case CliffordGate::Kind::Z:
            p.negative ^= xt;
            break;
        case CliffordGate::Kind::CNOT: {
            const std::uint64_t c = std::uint64_t{1} << g.control;
            const bool xc = p.x & c;
            const bool zc = p.z & c;
            p.negative ^= xc && zt && (xt == zc);
            if (xc) {
                p.x ^= t;
            }
            if (zt) {
                p.z ^= c;
            }
            break;
        }
    }
}

inline SymplecticPauli conjugate(const CliffordCircuit& c, SymplecticPauli p) {
    check_same_arity(c.arity(), p.arity);
    for (const auto& g : c.gates()) {
        conjugate_in_place(g, p);
    }
    return p;
}

inline PauliSum conjugate(const CliffordCircuit& c, const PauliSum& h) {
    check_same_arity(c.arity(), h.arity());
    PauliSum out(h.arity());
    for (const auto& [p, coeff] : h.terms()) {
        out.add_term(conjugate(c, SymplecticPauli::from(p)).to_pauli(), coeff);
    }
    return out;
}

struct StabilizerGroupBasis {
    std::size_t arity = 0;
    std::vector<SymplecticPauli> generators;
};

// U Z_l U^dag for l = 1..n.
inline StabilizerGroupBasis conjugated_generators(const CliffordCircuit& c) {
    StabilizerGroupBasis basis{c.arity(), {}};
    for (std::size_t l = 0; l < c.arity(); ++l) {
        basis.generators.push_back(conjugate(c, SymplecticPauli::z_on(c.arity(), l)));
    }
    return basis;
}

inline PauliSum projector_parent(const CliffordCircuit& c) {
    const std::size_t n = c.arity();
    PauliSum h(n);
    const Rational half(1, 2);
    for (const auto& g : conjugated_generators(c).generators) {
        h.add_term(PauliString::identity(n), half);
        h.add_term(g.to_pauli(), -half);
    }
    return h;
}

// Dimension of the joint +1 eigenspace, 2^(n - rank); zero when the signs
// make the group contain -I.
inline Integer kernel_dimension(const StabilizerGroupBasis& basis) {
    const auto& gens = basis.generators;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        check_same_arity(basis.arity, gens[i].arity);
        for (std::size_t j = i + 1; j < gens.size(); ++j) {
            if (symplectic_product(gens[i], gens[j]) != 0) {
                throw PreconditionError("stabilizer generators must pairwise commute");
            }
        }
    }
    std::vector<PauliString> rows;
    for (const auto& g : gens) {
        rows.push_back(g.to_pauli());
    }
    std::size_t rank = 0;
    const std::size_t n = basis.arity;
    for (std::size_t col = 0; col < 2 * n && rank < rows.size(); ++col) {
        auto has = [&](const PauliString& p) {
            return col < n ? ((p.x() >> col) & 1U) != 0 : ((p.z() >> (col - n)) & 1U) != 0;
        };
        std::size_t pivot = rank;
        while (pivot < rows.size() && !has(rows[pivot])) {
            ++pivot;
        }
        if (pivot == rows.size()) {
            continue;
        }
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != rank && has(rows[r])) {
                rows[r] = rows[r] * rows[rank];
            }
        }
        ++rank;
    }
    for (std::size_t r = rank; r < rows.size(); ++r) {
        if (rows[r].phase() == 2) {
            return 0;
        }
    }
    Integer dim = 1;
    mpz_mul_2exp(dim.get_mpz_t(), dim.get_mpz_t(), static_cast<mp_bitcnt_t>(n - rank));
    return dim;
}

// Exact dense application. Hadamards are applied unnormalised and recorded
// in the state's sqrt(2) exponent.
inline StateVector dense_apply(const CliffordCircuit& c, const StateVector& v) {
    check_same_arity(c.arity(), v.arity());
    const std::size_t n = c.arity();
    auto amps = v.amplitudes();
    int exponent = v.sqrt2_exponent();
    auto index_bit = [n](std::size_t q) { return std::uint64_t{1} << (n - 1 - q); };
    for (const auto& g : c.gates()) {
        const std::uint64_t t = index_bit(g.target);
        switch (g.kind) {
            case CliffordGate::Kind::H:
                for (std::uint64_t b = 0; b < amps.size(); ++b) {
                    if (!(b & t)) {
                        const ComplexRational a0 = amps[b];
                        const ComplexRational a1 = amps[b | t];
                        amps[b] = a0 + a1;
                        amps[b | t] = a0 - a1;
                    }
                }
                ++exponent;
                break;
            case CliffordGate::Kind::S:
                for (std::uint64_t b = 0; b < amps.size(); ++b) {
                    if (b & t) {
                        amps[b] = i_power(1) * amps[b];
                    }
                }
                break;
            case CliffordGate::Kind::X:
                for (std::uint64_t b = 0; b < amps.size(); ++b) {
                    if (!(b & t)) {
                        std::swap(amps[b], amps[b | t]);
                    }
                }
                break;
            case CliffordGate::Kind::Z:
                for (std::uint64_t b = 0; b < amps.size(); ++b) {
                    if (b & t) {
                        amps[b] = Rational(-1) * amps[b];
                    }
                }
                break;
            case CliffordGate::Kind::CNOT: {
                const std::uint64_t ctl = index_bit(g.control);
                for (std::uint64_t b = 0; b < amps.size(); ++b) {
                    if ((b & ctl) && !(b & t)) {
                        std::swap(amps[b], amps[b | t]);
                    }
                }
                break;
            }
        }
    }
    return StateVector(n, std::move(amps), exponent);
}

// U|0^n>.
inline StateVector prepare_state(const CliffordCircuit& c) {
    return dense_apply(c, StateVector::basis(Assignment(c.arity(), 0)));
}

// Gamma = 1 - |psi><psi|.
inline DenseOperator trivial_parent(const StateVector& v) {
    if (v.arity() > 10) {
        throw ResourceError("trivial parent construction is limited to 10 qubits");
    }
    if (!v.is_normalized()) {
        throw PreconditionError("trivial parent needs a normalised state");
    }
    auto gamma = DenseOperator::identity(v.arity());
    for (std::size_t r = 0; r < v.dimension(); ++r) {
        if (v[r].is_zero()) {
            continue;
        }
        for (std::size_t c = 0; c < v.dimension(); ++c) {
            if (v[c].is_zero()) {
                continue;
            }
            const ComplexRational outer = v[r] * v[c].conj();
            gamma(r, c) -= ComplexRational(StateVector::scale_by_pow2(outer.re, -v.sqrt2_exponent()),
                                           StateVector::scale_by_pow2(outer.im, -v.sqrt2_exponent()));
        }
    }
    return gamma;
}

// "qubits n" header, then one gate per line: "h 1", "s 2", "x 3", "z 1", "cnot 1 2" (1-based).
inline CliffordCircuit parse_circuit(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::optional<CliffordCircuit> circuit;
    std::size_t lineno = 0;
    auto index = [&](std::istringstream& fields) {
        long v = 0;
        if (!(fields >> v) || v < 1) {
            throw SyntaxError(lineno, 1, "expected a 1-based qubit index");
        }
        return static_cast<std::size_t>(v - 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string op;
        if (!(fields >> op)) {
            continue;
        }
        if (!circuit) {
            long n = 0;
            if (op != "qubits" || !(fields >> n) || n < 1 || n > 64) {
                throw SyntaxError(lineno, 1, "expected header 'qubits n' with 1 <= n <= 64");
            }
            circuit.emplace(static_cast<std::size_t>(n));
            continue;
        }
        try {
            if (op == "h") {
                circuit->add(CliffordGate::h(index(fields)));
            } else if (op == "s") {
                circuit->add(CliffordGate::s(index(fields)));
            } else if (op == "x") {
                circuit->add(CliffordGate::x(index(fields)));
            } else if (op == "z") {
                circuit->add(CliffordGate::z(index(fields)));
            } else if (op == "cnot") {
                const auto ctl = index(fields);
                circuit->add(CliffordGate::cnot(ctl, index(fields)));
            } else {
                throw SyntaxError(lineno, 1, "unknown gate '" + op + "'");
            }
        } catch (const DomainError& e) {
            throw SyntaxError(lineno, 1, e.what());
        }
        std::string extra;
        if (fields >> extra) {
            throw SyntaxError(lineno, 1, "trailing input '" + extra + "'");
        }
    }
    if (!circuit) {
        throw SyntaxError(lineno + 1, 1, "missing 'qubits n' header");
    }
    return *circuit;
}

inline std::string to_text(const CliffordCircuit& c) {
    std::string out = "qubits " + std::to_string(c.arity()) + "\n";
    for (const auto& g : c.gates()) {
        switch (g.kind) {
            case CliffordGate::Kind::H: out += "h "; break;
            case CliffordGate::Kind::S: out += "s "; break;
            case CliffordGate::Kind::X: out += "x "; break;
            case CliffordGate::Kind::Z: out += "z "; break;
            case CliffordGate::Kind::CNOT: out += "cnot " + std::to_string(g.control + 1) + " "; break;
        }
        out += std::to_string(g.target + 1) + "\n";
    }
    return out;
}

}  // namespace parentham
