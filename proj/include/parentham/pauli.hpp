#pragma once

// Pauli strings, real-weighted Pauli sums, exact state vectors and the two
// basis-dependent embeddings of a pseudo-Boolean function:
//   H_f   = sum_x f(x) |x><x|      (embed_diagonal)
//   psi_f = sum_x f(x) |x>         (embed_state)
//
// Qubit k (1-based) is letter k of a Pauli string and variable x_k of a
// pseudo-Boolean function; in amplitude indices qubit 1 is the most
// significant bit.

#include "parentham/pbf.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace parentham {

inline constexpr std::size_t kMaxDenseQubits = 16;

struct ComplexRational {
    Rational re;
    Rational im;

    ComplexRational() = default;
    ComplexRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    ComplexRational conj() const { return {re, -im}; }
    Rational norm2() const { return re * re + im * im; }

    ComplexRational& operator+=(const ComplexRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    ComplexRational& operator-=(const ComplexRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
    friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
    friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ComplexRational operator*(const Rational& s, const ComplexRational& a) { return {s * a.re, s * a.im}; }
    friend bool operator==(const ComplexRational&, const ComplexRational&) = default;
};

// i^k for k mod 4.
inline ComplexRational i_power(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

class PauliString {
public:
    PauliString() = default;

    // Masks use bit k for qubit k+1. Letter per qubit: (x,z) = (0,0) I, (1,0) X, (0,1) Z, (1,1) Y.
    PauliString(std::size_t arity, std::uint64_t x, std::uint64_t z, int phase = 0)
        : arity_(arity), x_(x & low_mask(arity)), z_(z & low_mask(arity)), phase_(((phase % 4) + 4) % 4) {
        if (arity > kMaxVariables) {
            throw DimensionError("at most 64 qubits");
        }
    }

    static PauliString parse(std::string_view letters) {
        std::uint64_t x = 0;
        std::uint64_t z = 0;
        for (std::size_t k = 0; k < letters.size(); ++k) {
            const std::uint64_t bit = std::uint64_t{1} << k;
            switch (letters[k]) {
                case 'I': break;
                case 'X': x |= bit; break;
                case 'Z': z |= bit; break;
                case 'Y': x |= bit; z |= bit; break;
                default: throw FormatError("Pauli letters must be I, X, Y or Z: '" + std::string(letters) + "'");
            }
        }
        return PauliString(letters.size(), x, z);
    }

    static PauliString identity(std::size_t n) { return PauliString(n, 0, 0); }
    static PauliString single(std::size_t n, std::size_t qubit, char letter) {
        const std::uint64_t bit = std::uint64_t{1} << qubit;
        switch (letter) {
            case 'X': return PauliString(n, bit, 0);
            case 'Z': return PauliString(n, 0, bit);
            case 'Y': return PauliString(n, bit, bit);
            default: return identity(n);
        }
    }

    std::size_t arity() const noexcept { return arity_; }
    std::uint64_t x() const noexcept { return x_; }
    std::uint64_t z() const noexcept { return z_; }
    int phase() const noexcept { return phase_; }  // overall factor i^phase
    std::uint64_t support() const noexcept { return x_ | z_; }
    bool is_identity() const noexcept { return support() == 0; }
    bool is_diagonal() const noexcept { return x_ == 0; }

    char letter(std::size_t k) const noexcept {
        const bool xb = (x_ >> k) & 1U;
        const bool zb = (z_ >> k) & 1U;
        return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
    }

    std::string letters() const {
        std::string s(arity_, 'I');
        for (std::size_t k = 0; k < arity_; ++k) {
            s[k] = letter(k);
        }
        return s;
    }

    PauliString without_phase() const { return PauliString(arity_, x_, z_, 0); }

    friend bool commutes(const PauliString& a, const PauliString& b) {
        return (popcount(a.x_ & b.z_) + popcount(a.z_ & b.x_)) % 2 == 0;
    }

    friend PauliString operator*(const PauliString& a, const PauliString& b) {
        check_same_arity(a.arity_, b.arity_);
        int e = a.phase_ + b.phase_;
        for (std::size_t k = 0; k < a.arity_; ++k) {
            const int x1 = (a.x_ >> k) & 1U, z1 = (a.z_ >> k) & 1U;
            const int x2 = (b.x_ >> k) & 1U, z2 = (b.z_ >> k) & 1U;
            if (x1 && z1) {
                e += z2 - x2;
            } else if (x1) {
                e += z2 * (2 * x2 - 1);
            } else if (z1) {
                e += x2 * (1 - 2 * z2);
            }
        }
        return PauliString(a.arity_, a.x_ ^ b.x_, a.z_ ^ b.z_, e);
    }

    friend bool operator==(const PauliString&, const PauliString&) = default;

private:
    std::size_t arity_ = 0;
    std::uint64_t x_ = 0;
    std::uint64_t z_ = 0;
    int phase_ = 0;
};

// Orders phase-free strings by support (graded lexicographic), then letters X < Y < Z.
struct PauliOrder {
    bool operator()(const PauliString& a, const PauliString& b) const {
        if (a.support() != b.support()) {
            return graded_less(a.support(), b.support());
        }
        for (std::size_t k = 0; k < std::max(a.arity(), b.arity()); ++k) {
            if (a.letter(k) != b.letter(k)) {
                return a.letter(k) < b.letter(k);
            }
        }
        return a.arity() < b.arity();
    }
};

class PauliSum {
public:
    using TermMap = std::map<PauliString, Rational, PauliOrder>;

    PauliSum() = default;
    explicit PauliSum(std::size_t arity) : arity_(arity) {}

    std::size_t arity() const noexcept { return arity_; }
    const TermMap& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    Rational coefficient(const PauliString& p) const {
        auto it = terms_.find(p.without_phase());
        return it == terms_.end() ? Rational(0) : it->second;
    }

    // Folds a +-1 phase into the coefficient; +-i would break Hermiticity.
    void add_term(const PauliString& p, const Rational& c) {
        check_same_arity(arity_, p.arity());
        if (p.phase() % 2 != 0) {
            throw DomainError("imaginary phase in a Hermitian Pauli sum");
        }
        if (c == 0) {
            return;
        }
        const Rational v = p.phase() == 2 ? Rational(-c) : c;
        auto [it, inserted] = terms_.try_emplace(p.without_phase(), v);
        if (inserted) {
            it->second.canonicalize();
        } else {
            it->second += v;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    bool is_diagonal() const {
        return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.is_diagonal(); });
    }

    friend PauliSum operator+(const PauliSum& a, const PauliSum& b) {
        check_same_arity(a.arity_, b.arity_);
        PauliSum out = a;
        for (const auto& [p, c] : b.terms_) {
            out.add_term(p, c);
        }
        return out;
    }

    friend bool operator==(const PauliSum& a, const PauliSum& b) {
        return a.arity_ == b.arity_ && a.terms_ == b.terms_;
    }

private:
    std::size_t arity_ = 0;
    TermMap terms_;
};

// Number of nonzero terms, identity included.
inline std::size_t pauli_cardinality(const PauliSum& h) {
    return h.size();
}

// x_k = (1 - Z_k)/2 per monomial.
inline PauliSum pbf_to_pauli(const PseudoBoolean& f) {
    const auto spin = boolean_to_spin(f);
    PauliSum h(f.arity());
    for (const auto& [mask, c] : spin.terms()) {
        h.add_term(PauliString(f.arity(), 0, mask), c);
    }
    return h;
}

inline PseudoBoolean pauli_to_pbf(const PauliSum& h) {
    SpinPolynomial spin(h.arity());
    for (const auto& [p, c] : h.terms()) {
        if (!p.is_diagonal()) {
            throw NotDiagonalError("term " + p.letters() + " contains X or Y");
        }
        spin.add_term(p.z(), c);
    }
    return spin_to_boolean(spin);
}

struct IsingForm {
    Rational constant;
    std::vector<Rational> h;               // field on Z_l
    std::vector<std::vector<Rational>> J;  // J[l][k] on Z_l Z_k, l < k; zero elsewhere
};

inline IsingForm ising_form(const PseudoBoolean& f) {
    if (f.degree() > 2) {
        throw DegreeError("Ising form needs degree <= 2, got " + std::to_string(f.degree()));
    }
    const std::size_t n = f.arity();
    IsingForm out{0, std::vector<Rational>(n), std::vector<std::vector<Rational>>(n, std::vector<Rational>(n))};
    const SpinPolynomial spin = boolean_to_spin(f);
    for (const auto& [mask, c] : spin.terms()) {
        switch (popcount(mask)) {
            case 0: out.constant = c; break;
            case 1: out.h[static_cast<std::size_t>(std::countr_zero(mask))] = c; break;
            default: {
                const auto l = static_cast<std::size_t>(std::countr_zero(mask));
                const auto k = static_cast<std::size_t>(63 - std::countl_zero(mask));
                out.J[l][k] = c;
            }
        }
    }
    return out;
}

// Dense state with exact amplitudes. The represented vector is
// amplitudes * 2^(-sqrt2_exponent/2), which keeps Hadamard outputs rational.
class StateVector {
public:
    StateVector() = default;
    StateVector(std::size_t arity, std::vector<ComplexRational> amps, int sqrt2_exponent = 0)
        : arity_(arity), amps_(std::move(amps)), sqrt2_exponent_(sqrt2_exponent) {
        if (arity > kMaxDenseQubits) {
            throw ResourceError("dense state vectors are limited to 16 qubits");
        }
        if (amps_.size() != (std::size_t{1} << arity)) {
            throw DimensionError("state vector length must be 2^n");
        }
    }

    static StateVector zero(std::size_t n) { return StateVector(n, std::vector<ComplexRational>(std::size_t{1} << n)); }

    static StateVector basis(const Assignment& x) {
        auto v = zero(x.size());
        v.amps_[x.index()] = Rational(1);
        return v;
    }

    // |+^n>: all amplitudes 1, scaled by 2^(-n/2).
    static StateVector plus(std::size_t n) {
        return StateVector(n, std::vector<ComplexRational>(std::size_t{1} << n, Rational(1)), static_cast<int>(n));
    }

    // (|0^n> + |1^n>)/sqrt 2.
    static StateVector ghz(std::size_t n) {
        auto v = zero(n);
        v.amps_.front() = Rational(1);
        v.amps_.back() = Rational(1);
        v.sqrt2_exponent_ = 1;
        return v;
    }

    std::size_t arity() const noexcept { return arity_; }
    std::size_t dimension() const noexcept { return amps_.size(); }
    int sqrt2_exponent() const noexcept { return sqrt2_exponent_; }
    const std::vector<ComplexRational>& amplitudes() const noexcept { return amps_; }
    std::vector<ComplexRational>& amplitudes() noexcept { return amps_; }
    const ComplexRational& operator[](std::size_t i) const { return amps_[i]; }

    // Multiplies the represented vector by 2^(k/2).
    StateVector scaled_by_sqrt2_power(int k) const {
        StateVector out = *this;
        out.sqrt2_exponent_ -= k;
        return out;
    }

    bool is_zero() const {
        return std::all_of(amps_.begin(), amps_.end(), [](const auto& a) { return a.is_zero(); });
    }

    Rational norm_squared() const {
        Rational s = 0;
        for (const auto& a : amps_) {
            s += a.norm2();
        }
        return scale_by_pow2(s, -sqrt2_exponent_);
    }

    bool is_normalized() const { return norm_squared() == 1; }

    // Represented amplitude i when the scale is a rational power of two.
    ComplexRational exact_amplitude(std::size_t i) const {
        if (sqrt2_exponent_ % 2 != 0) {
            throw DomainError("amplitude carries an irrational 1/sqrt(2) factor");
        }
        return {scale_by_pow2(amps_[i].re, -sqrt2_exponent_ / 2), scale_by_pow2(amps_[i].im, -sqrt2_exponent_ / 2)};
    }

    std::complex<double> amplitude(std::size_t i) const {
        const double s = std::pow(2.0, -0.5 * sqrt2_exponent_);
        return {amps_[i].re.get_d() * s, amps_[i].im.get_d() * s};
    }

    friend bool operator==(const StateVector& a, const StateVector& b) {
        if (a.arity_ != b.arity_) {
            return false;
        }
        const int diff = a.sqrt2_exponent_ - b.sqrt2_exponent_;
        if (diff % 2 != 0) {
            return a.is_zero() && b.is_zero();
        }
        // a * 2^(-ea/2) == b * 2^(-eb/2)  <=>  a == b * 2^(diff/2)
        for (std::size_t i = 0; i < a.amps_.size(); ++i) {
            if (a.amps_[i].re != scale_by_pow2(b.amps_[i].re, diff / 2) ||
                a.amps_[i].im != scale_by_pow2(b.amps_[i].im, diff / 2)) {
                return false;
            }
        }
        return true;
    }

    static Rational scale_by_pow2(const Rational& q, int k) {
        Rational r = q;
        if (k > 0) {
            mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(k));
        } else if (k < 0) {
            mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-k));
        }
        return r;
    }

private:
    std::size_t arity_ = 0;
    std::vector<ComplexRational> amps_;
    int sqrt2_exponent_ = 0;
};

class DiagonalOperator {
public:
    DiagonalOperator() = default;
    DiagonalOperator(std::size_t arity, std::vector<Rational> diag) : arity_(arity), diag_(std::move(diag)) {
        if (diag_.size() != (std::size_t{1} << arity)) {
            throw DimensionError("diagonal length must be 2^n");
        }
    }

    std::size_t arity() const noexcept { return arity_; }
    const std::vector<Rational>& diagonal() const noexcept { return diag_; }
    const Rational& operator[](std::size_t i) const { return diag_[i]; }

    std::size_t kernel_dimension() const {
        return static_cast<std::size_t>(std::count(diag_.begin(), diag_.end(), Rational(0)));
    }

    friend bool operator==(const DiagonalOperator&, const DiagonalOperator&) = default;

private:
    std::size_t arity_ = 0;
    std::vector<Rational> diag_;
};

inline DiagonalOperator embed_diagonal(const PseudoBoolean& f) {
    if (f.arity() > kMaxDenseQubits) {
        throw ResourceError("diagonal embedding is limited to 16 variables");
    }
    return DiagonalOperator(f.arity(), to_disjoint_form(f));
}

// Unnormalised: amplitude at x is f(x).
inline StateVector embed_state(const PseudoBoolean& f) {
    if (f.arity() > kMaxDenseQubits) {
        throw ResourceError("state embedding is limited to 16 variables");
    }
    const auto table = to_disjoint_form(f);
    std::vector<ComplexRational> amps(table.begin(), table.end());
    return StateVector(f.arity(), std::move(amps));
}

// String action on a basis state: P|b> = i^{#Y} (-1)^{|z & b|} |b xor x>.
inline StateVector apply(const PauliSum& h, const StateVector& v) {
    check_same_arity(h.arity(), v.arity());
    const std::size_t n = v.arity();
    StateVector out(n, std::vector<ComplexRational>(v.dimension()), v.sqrt2_exponent());
    auto& dst = out.amplitudes();
    for (const auto& [p, c] : h.terms()) {
        const std::uint64_t xi = reverse_bits(p.x(), n);
        const std::uint64_t zi = reverse_bits(p.z(), n);
        const ComplexRational base = c * i_power(popcount(p.x() & p.z()));
        const ComplexRational neg = Rational(-1) * base;
        for (std::uint64_t b = 0; b < v.dimension(); ++b) {
            if (v[b].is_zero()) {
                continue;
            }
            dst[b ^ xi] += (popcount(zi & b) % 2 == 0 ? base : neg) * v[b];
        }
    }
    return out;
}

inline StateVector apply(const DiagonalOperator& d, const StateVector& v) {
    check_same_arity(d.arity(), v.arity());
    StateVector out = v;
    for (std::size_t i = 0; i < v.dimension(); ++i) {
        out.amplitudes()[i] = d[i] * v[i];
    }
    return out;
}

// Exact dense complex matrix, row-major, for desk-scale cross checks.
class DenseOperator {
public:
    DenseOperator() = default;
    explicit DenseOperator(std::size_t arity)
        : arity_(arity), dim_(std::size_t{1} << arity), entries_(dim_ * dim_) {
        if (arity > 10) {
            throw ResourceError("dense operators are limited to 10 qubits");
        }
    }

    static DenseOperator identity(std::size_t n) {
        DenseOperator m(n);
        for (std::size_t i = 0; i < m.dim_; ++i) {
            m(i, i) = Rational(1);
        }
        return m;
    }

    std::size_t arity() const noexcept { return arity_; }
    std::size_t dimension() const noexcept { return dim_; }
    ComplexRational& operator()(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }
    const ComplexRational& operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }

    bool is_hermitian() const {
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = r; c < dim_; ++c) {
                if ((*this)(r, c) != (*this)(c, r).conj()) {
                    return false;
                }
            }
        }
        return true;
    }

    friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
        check_same_arity(a.arity_, b.arity_);
        DenseOperator out(a.arity_);
        for (std::size_t r = 0; r < a.dim_; ++r) {
            for (std::size_t k = 0; k < a.dim_; ++k) {
                const auto& ark = a(r, k);
                if (ark.is_zero()) {
                    continue;
                }
                for (std::size_t c = 0; c < a.dim_; ++c) {
                    if (!b(k, c).is_zero()) {
                        out(r, c) += ark * b(k, c);
                    }
                }
            }
        }
        return out;
    }

    friend bool operator==(const DenseOperator&, const DenseOperator&) = default;

private:
    std::size_t arity_ = 0;
    std::size_t dim_ = 0;
    std::vector<ComplexRational> entries_;
};

inline DenseOperator dense_matrix(const PauliSum& h) {
    DenseOperator m(h.arity());
    const std::size_t n = h.arity();
    for (const auto& [p, c] : h.terms()) {
        const std::uint64_t xi = reverse_bits(p.x(), n);
        const std::uint64_t zi = reverse_bits(p.z(), n);
        const ComplexRational base = c * i_power(popcount(p.x() & p.z()));
        for (std::uint64_t b = 0; b < m.dimension(); ++b) {
            m(b ^ xi, b) += popcount(zi & b) % 2 == 0 ? base : Rational(-1) * base;
        }
    }
    return m;
}

inline StateVector apply(const DenseOperator& m, const StateVector& v) {
    check_same_arity(m.arity(), v.arity());
    StateVector out(v.arity(), std::vector<ComplexRational>(v.dimension()), v.sqrt2_exponent());
    for (std::size_t r = 0; r < m.dimension(); ++r) {
        for (std::size_t c = 0; c < m.dimension(); ++c) {
            if (!m(r, c).is_zero() && !v[c].is_zero()) {
                out.amplitudes()[r] += m(r, c) * v[c];
            }
        }
    }
    return out;
}

// Coefficients Tr(P M)/2^n over all 4^n strings; M must be Hermitian.
inline PauliSum pauli_decompose(const DenseOperator& m) {
    const std::size_t n = m.arity();
    if (n > 6) {
        throw ResourceError("Pauli decomposition is limited to 6 qubits");
    }
    PauliSum out(n);
    const std::uint64_t span = std::uint64_t{1} << n;
    for (std::uint64_t x = 0; x < span; ++x) {
        for (std::uint64_t z = 0; z < span; ++z) {
            const PauliString p(n, x, z);
            const std::uint64_t xi = reverse_bits(x, n);
            const std::uint64_t zi = reverse_bits(z, n);
            // P has entries P[b^x, b] = i^{#Y} (-1)^{|z&b|}; Tr(P M) = sum_b P[b^x,b] M[b, b^x].
            ComplexRational tr;
            for (std::uint64_t b = 0; b < span; ++b) {
                const ComplexRational& e = m(b, b ^ xi);
                if (e.is_zero()) {
                    continue;
                }
                if (popcount(zi & b) % 2 == 0) {
                    tr += e;
                } else {
                    tr -= e;
                }
            }
            tr = i_power(popcount(x & z)) * tr;
            if (tr.im != 0) {
                throw DomainError("operator is not Hermitian");
            }
            out.add_term(p, StateVector::scale_by_pow2(tr.re, -static_cast<int>(n)));
        }
    }
    return out;
}

// One term per line: "<coeff> <letters>", e.g. "-1/2 XXX".
inline std::string to_text(const PauliSum& h) {
    std::string out;
    for (const auto& [p, c] : h.terms()) {
        out += to_string(c) + " " + p.letters() + "\n";
    }
    return out;
}

inline PauliSum parse_pauli_sum(std::string_view text, std::optional<std::size_t> arity = std::nullopt) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::optional<PauliSum> out;
    if (arity) {
        out.emplace(*arity);
    }
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string coeff;
        std::string letters;
        if (!(fields >> coeff)) {
            continue;
        }
        std::string extra;
        if (!(fields >> letters) || (fields >> extra)) {
            throw SyntaxError(lineno, 1, "expected '<coeff> <letters>'");
        }
        const auto p = PauliString::parse(letters);
        if (!out) {
            out.emplace(p.arity());
        }
        if (p.arity() != out->arity()) {
            throw SyntaxError(lineno, 1, "inconsistent number of qubits");
        }
        out->add_term(p, parse_rational(coeff));
    }
    if (!out) {
        return PauliSum(0);
    }
    return *out;
}

}  // namespace parentham
