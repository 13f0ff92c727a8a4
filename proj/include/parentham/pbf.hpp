#pragma once

// Pseudo-Boolean polynomials over exact rationals.
//
// A PseudoBoolean is stored in its unique multilinear form
//     f(x) = sum_S c_S prod_{k in S} x_k
// with monomials keyed by a 64-bit subset mask (bit k is variable x_{k+1}).
// Zero coefficients are never stored, so structural equality is semantic
// equality on the Boolean cube.
//
// Tables over the cube (disjoint form, diagonals, state amplitudes) are indexed
// in basis order: variable x_1 is the most significant bit of the index.

#include "parentham/core.hpp"
#include "parentham/parallel.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace parentham {

struct EnumerationOptions {
    std::size_t cap = kDefaultEnumerationCap;
    unsigned threads = 1;
};

inline void check_enumerable(std::size_t arity, const EnumerationOptions& opts) {
    if (arity > opts.cap || arity >= kMaxVariables) {
        throw ResourceError("arity " + std::to_string(arity) + " exceeds enumeration cap " +
                            std::to_string(opts.cap));
    }
}

// A point of the Boolean cube B^n.
class Assignment {
public:
    Assignment() = default;

    // `variables` uses the monomial convention: bit k holds x_{k+1}.
    Assignment(std::size_t arity, std::uint64_t variables) : arity_(arity), vars_(variables & low_mask(arity)) {
        if (arity > kMaxVariables) {
            throw DimensionError("assignment longer than 64 variables");
        }
    }

    static Assignment from_index(std::size_t arity, std::uint64_t index) {
        return Assignment(arity, reverse_bits(index, arity));
    }

    // "0110" means x_1=0, x_2=1, x_3=1, x_4=0.
    static Assignment parse(std::string_view bits) {
        std::uint64_t vars = 0;
        for (std::size_t k = 0; k < bits.size(); ++k) {
            if (bits[k] == '1') {
                vars |= std::uint64_t{1} << k;
            } else if (bits[k] != '0') {
                throw FormatError("bit string may only contain 0 and 1: '" + std::string(bits) + "'");
            }
        }
        return Assignment(bits.size(), vars);
    }

    std::size_t size() const noexcept { return arity_; }
    bool operator[](std::size_t k) const noexcept { return (vars_ >> k) & 1U; }
    std::uint64_t variables() const noexcept { return vars_; }
    std::uint64_t index() const noexcept { return reverse_bits(vars_, arity_); }
    int weight() const noexcept { return popcount(vars_); }

    Assignment complement() const { return Assignment(arity_, ~vars_); }
    Assignment flipped(std::uint64_t mask) const { return Assignment(arity_, vars_ ^ mask); }

    std::string to_string() const {
        std::string s(arity_, '0');
        for (std::size_t k = 0; k < arity_; ++k) {
            if ((*this)[k]) {
                s[k] = '1';
            }
        }
        return s;
    }

    friend bool operator==(const Assignment& a, const Assignment& b) noexcept {
        return a.arity_ == b.arity_ && a.vars_ == b.vars_;
    }
    friend std::strong_ordering operator<=>(const Assignment& a, const Assignment& b) noexcept {
        if (auto c = a.arity_ <=> b.arity_; c != 0) {
            return c;
        }
        return a.index() <=> b.index();
    }

private:
    std::size_t arity_ = 0;
    std::uint64_t vars_ = 0;
};

// A point of [0,1]^n for the multilinear extension.
class RealPoint {
public:
    explicit RealPoint(std::vector<Rational> coords) : coords_(std::move(coords)) {
        for (const auto& r : coords_) {
            if (r < 0 || r > 1) {
                throw DomainError("coordinate " + to_string(r) + " outside [0,1]");
            }
        }
    }

    static RealPoint vertex(const Assignment& x) {
        std::vector<Rational> c(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) {
            c[k] = x[k] ? 1 : 0;
        }
        return RealPoint(std::move(c));
    }

    std::size_t size() const noexcept { return coords_.size(); }
    const Rational& operator[](std::size_t k) const { return coords_[k]; }

private:
    std::vector<Rational> coords_;
};

// Graded lexicographic order on subset masks: by size, then by the sorted
// variable index lists. The constant comes first, then x1, x2, ..., x1x2, x1x3, ...
inline bool graded_less(std::uint64_t a, std::uint64_t b) noexcept {
    if (int pa = popcount(a), pb = popcount(b); pa != pb) {
        return pa < pb;
    }
    while (a != 0 && b != 0) {
        const int ia = std::countr_zero(a);
        const int ib = std::countr_zero(b);
        if (ia != ib) {
            return ia < ib;
        }
        a &= a - 1;
        b &= b - 1;
    }
    return false;
}

class PseudoBoolean {
public:
    using TermMap = std::map<std::uint64_t, Rational>;

    PseudoBoolean() = default;

    explicit PseudoBoolean(std::size_t arity) : arity_(arity) {
        if (arity > kMaxVariables) {
            throw DimensionError("at most 64 variables are supported");
        }
    }

    PseudoBoolean(std::size_t arity, std::initializer_list<std::pair<std::uint64_t, Rational>> terms)
        : PseudoBoolean(arity) {
        for (const auto& [mask, c] : terms) {
            add_term(mask, c);
        }
    }

    static PseudoBoolean constant(std::size_t arity, const Rational& c) {
        PseudoBoolean f(arity);
        f.add_term(0, c);
        return f;
    }

    // x_{k+1}, or its complement 1 - x_{k+1} when `positive` is false.
    static PseudoBoolean literal(std::size_t arity, std::size_t k, bool positive = true) {
        if (k >= arity) {
            throw DomainError("variable index out of range");
        }
        PseudoBoolean f(arity);
        if (positive) {
            f.add_term(std::uint64_t{1} << k, 1);
        } else {
            f.add_term(0, 1);
            f.add_term(std::uint64_t{1} << k, -1);
        }
        return f;
    }

    static PseudoBoolean monomial(std::size_t arity, std::uint64_t mask, const Rational& c = 1) {
        PseudoBoolean f(arity);
        f.add_term(mask, c);
        return f;
    }

    std::size_t arity() const noexcept { return arity_; }
    const TermMap& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    Rational coefficient(std::uint64_t mask) const {
        auto it = terms_.find(mask);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    int degree() const noexcept {
        int d = 0;
        for (const auto& [mask, c] : terms_) {
            d = std::max(d, popcount(mask));
        }
        return d;
    }

    // Accumulates c into the coefficient of `mask`, dropping it if it cancels.
    void add_term(std::uint64_t mask, const Rational& c) {
        if ((mask & ~low_mask(arity_)) != 0) {
            throw DimensionError("monomial references a variable beyond the arity");
        }
        if (c == 0) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(mask, c);
        if (inserted) {
            it->second.canonicalize();
        } else {
            it->second += c;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    // Terms in graded lexicographic order.
    std::vector<std::pair<std::uint64_t, Rational>> sorted_terms() const {
        std::vector<std::pair<std::uint64_t, Rational>> out(terms_.begin(), terms_.end());
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return graded_less(a.first, b.first); });
        return out;
    }

    friend bool operator==(const PseudoBoolean& a, const PseudoBoolean& b) {
        return a.arity_ == b.arity_ && a.terms_ == b.terms_;
    }

private:
    std::size_t arity_ = 0;
    TermMap terms_;
};

inline void check_same_arity(std::size_t a, std::size_t b) {
    if (a != b) {
        throw DimensionError("arity mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

inline Rational eval(const PseudoBoolean& f, const Assignment& x) {
    check_same_arity(f.arity(), x.size());
    Rational sum = 0;
    const std::uint64_t vars = x.variables();
    for (const auto& [mask, c] : f.terms()) {
        if ((mask & vars) == mask) {
            sum += c;
        }
    }
    return sum;
}

inline Rational eval_real(const PseudoBoolean& f, const RealPoint& r) {
    check_same_arity(f.arity(), r.size());
    Rational sum = 0;
    for (const auto& [mask, c] : f.terms()) {
        Rational term = c;
        for (std::uint64_t m = mask; m != 0; m &= m - 1) {
            term *= r[static_cast<std::size_t>(std::countr_zero(m))];
        }
        sum += term;
    }
    return sum;
}

inline PseudoBoolean operator+(const PseudoBoolean& f, const PseudoBoolean& g) {
    check_same_arity(f.arity(), g.arity());
    PseudoBoolean out = f;
    for (const auto& [mask, c] : g.terms()) {
        out.add_term(mask, c);
    }
    return out;
}

inline PseudoBoolean operator*(const Rational& s, const PseudoBoolean& f) {
    PseudoBoolean out(f.arity());
    if (s == 0) {
        return out;
    }
    for (const auto& [mask, c] : f.terms()) {
        out.add_term(mask, s * c);
    }
    return out;
}

inline PseudoBoolean operator-(const PseudoBoolean& f) {
    return Rational(-1) * f;
}

inline PseudoBoolean operator-(const PseudoBoolean& f, const PseudoBoolean& g) {
    return f + (-g);
}

inline PseudoBoolean add(const PseudoBoolean& f, const PseudoBoolean& g) {
    return f + g;
}

namespace detail {

// Subset-sum (zeta) transform in place over n bits.
inline void zeta_transform(std::vector<Rational>& t, std::size_t n, unsigned threads) {
    for (std::size_t b = 0; b < n; ++b) {
        const std::uint64_t bit = std::uint64_t{1} << b;
        parallel_for(0, t.size(), threads, [&](std::uint64_t lo, std::uint64_t hi) {
            for (std::uint64_t m = lo; m < hi; ++m) {
                if (m & bit) {
                    t[m] += t[m ^ bit];
                }
            }
        });
    }
}

inline void mobius_transform(std::vector<Rational>& t, std::size_t n, unsigned threads) {
    for (std::size_t b = 0; b < n; ++b) {
        const std::uint64_t bit = std::uint64_t{1} << b;
        parallel_for(0, t.size(), threads, [&](std::uint64_t lo, std::uint64_t hi) {
            for (std::uint64_t m = lo; m < hi; ++m) {
                if (m & bit) {
                    t[m] -= t[m ^ bit];
                }
            }
        });
    }
}

inline PseudoBoolean multiply_sparse(const PseudoBoolean& f, const PseudoBoolean& g) {
    PseudoBoolean out(f.arity());
    for (const auto& [mf, cf] : f.terms()) {
        for (const auto& [mg, cg] : g.terms()) {
            out.add_term(mf | mg, cf * cg);
        }
    }
    return out;
}

PseudoBoolean multiply_pointwise(const PseudoBoolean& f, const PseudoBoolean& g);

}  // namespace detail

// a[index] = f(x) for every x, in basis order.
inline std::vector<Rational> to_disjoint_form(const PseudoBoolean& f, const EnumerationOptions& opts = {}) {
    const std::size_t n = f.arity();
    check_enumerable(n, opts);
    std::vector<Rational> table(std::size_t{1} << n);
    for (const auto& [mask, c] : f.terms()) {
        table[reverse_bits(mask, n)] = c;
    }
    detail::zeta_transform(table, n, opts.threads);
    return table;
}

// Inverse of to_disjoint_form: the unique multilinear polynomial through the table.
inline PseudoBoolean from_disjoint_form(std::span<const Rational> table, const EnumerationOptions& opts = {}) {
    const std::size_t len = table.size();
    if (len == 0 || !std::has_single_bit(len)) {
        throw FormatError("disjoint-form table length must be a power of two, got " + std::to_string(len));
    }
    const std::size_t n = static_cast<std::size_t>(std::countr_zero(len));
    std::vector<Rational> t(table.begin(), table.end());
    detail::mobius_transform(t, n, opts.threads);
    PseudoBoolean f(n);
    for (std::uint64_t idx = 0; idx < len; ++idx) {
        if (t[idx] != 0) {
            f.add_term(reverse_bits(idx, n), t[idx]);
        }
    }
    return f;
}

inline PseudoBoolean detail::multiply_pointwise(const PseudoBoolean& f, const PseudoBoolean& g) {
    auto a = to_disjoint_form(f);
    const auto b = to_disjoint_form(g);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] *= b[i];
    }
    return from_disjoint_form(a);
}

// Product with idempotent reduction x_k * x_k = x_k.
inline PseudoBoolean multiply(const PseudoBoolean& f, const PseudoBoolean& g) {
    check_same_arity(f.arity(), g.arity());
    const std::size_t n = f.arity();
    const double direct = static_cast<double>(f.size()) * static_cast<double>(g.size());
    if (n <= 16 && direct > 4.0 * static_cast<double>(n + 1) * static_cast<double>(std::uint64_t{1} << n)) {
        return detail::multiply_pointwise(f, g);
    }
    return detail::multiply_sparse(f, g);
}

inline PseudoBoolean operator*(const PseudoBoolean& f, const PseudoBoolean& g) {
    return multiply(f, g);
}

// Re-homes f into `new_arity` variables: variable k of f becomes variable
// target[k]. Several variables may land on the same target; they are then
// identified (wired together).
inline PseudoBoolean embed_vars(const PseudoBoolean& f, std::size_t new_arity, std::span<const std::size_t> target) {
    if (target.size() != f.arity()) {
        throw DimensionError("embedding map must have one entry per variable");
    }
    for (auto t : target) {
        if (t >= new_arity) {
            throw DimensionError("embedding target out of range");
        }
    }
    PseudoBoolean out(new_arity);
    for (const auto& [mask, c] : f.terms()) {
        std::uint64_t m = 0;
        for (std::uint64_t r = mask; r != 0; r &= r - 1) {
            m |= std::uint64_t{1} << target[static_cast<std::size_t>(std::countr_zero(r))];
        }
        out.add_term(m, c);
    }
    return out;
}

// Pads with unused trailing variables.
inline PseudoBoolean with_arity(const PseudoBoolean& f, std::size_t new_arity) {
    if (new_arity < f.arity()) {
        throw DimensionError("cannot shrink arity");
    }
    PseudoBoolean out(new_arity);
    for (const auto& [mask, c] : f.terms()) {
        out.add_term(mask, c);
    }
    return out;
}

// Substitutes x_{var+1} := value and removes the variable; later indices shift down.
inline PseudoBoolean restrict_variable(const PseudoBoolean& f, std::size_t var, bool value) {
    if (var >= f.arity()) {
        throw DomainError("variable index " + std::to_string(var) + " out of range");
    }
    const std::uint64_t bit = std::uint64_t{1} << var;
    const std::uint64_t below = bit - 1;
    PseudoBoolean out(f.arity() - 1);
    for (const auto& [mask, c] : f.terms()) {
        if ((mask & bit) && !value) {
            continue;
        }
        const std::uint64_t rest = mask & ~bit;
        out.add_term((rest & below) | ((rest >> 1) & ~below), c);
    }
    return out;
}

// Replaces x_{var+1} by 1 - x_{var+1}.
inline PseudoBoolean complement_variable(const PseudoBoolean& f, std::size_t var) {
    if (var >= f.arity()) {
        throw DomainError("variable index " + std::to_string(var) + " out of range");
    }
    const std::uint64_t bit = std::uint64_t{1} << var;
    PseudoBoolean out(f.arity());
    for (const auto& [mask, c] : f.terms()) {
        if (mask & bit) {
            // x B -> (1 - x) B = B - x B
            out.add_term(mask & ~bit, c);
            out.add_term(mask, -c);
        } else {
            out.add_term(mask, c);
        }
    }
    return out;
}

// Polynomial in spin variables z_k = 1 - 2 x_k, with z_k^2 = 1.
class SpinPolynomial {
public:
    using TermMap = std::map<std::uint64_t, Rational>;

    SpinPolynomial() = default;
    explicit SpinPolynomial(std::size_t arity) : arity_(arity) {}

    std::size_t arity() const noexcept { return arity_; }
    const TermMap& terms() const noexcept { return terms_; }

    Rational coefficient(std::uint64_t mask) const {
        auto it = terms_.find(mask);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(std::uint64_t mask, const Rational& c) {
        if ((mask & ~low_mask(arity_)) != 0) {
            throw DimensionError("spin monomial references a variable beyond the arity");
        }
        if (c == 0) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(mask, c);
        if (inserted) {
            it->second.canonicalize();
        } else {
            it->second += c;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    friend bool operator==(const SpinPolynomial& a, const SpinPolynomial& b) {
        return a.arity_ == b.arity_ && a.terms_ == b.terms_;
    }

private:
    std::size_t arity_ = 0;
    TermMap terms_;
};

// Evaluates at the spin configuration z_k = (-1)^{x_k}.
inline Rational eval_spin(const SpinPolynomial& g, const Assignment& x) {
    check_same_arity(g.arity(), x.size());
    Rational sum = 0;
    for (const auto& [mask, c] : g.terms()) {
        if (popcount(mask & x.variables()) % 2 == 0) {
            sum += c;
        } else {
            sum -= c;
        }
    }
    return sum;
}

// x_k = (1 - z_k) / 2.
inline SpinPolynomial boolean_to_spin(const PseudoBoolean& f) {
    SpinPolynomial g(f.arity());
    for (const auto& [mask, c] : f.terms()) {
        Rational scale = c;
        mpq_div_2exp(scale.get_mpq_t(), scale.get_mpq_t(), static_cast<mp_bitcnt_t>(popcount(mask)));
        for (std::uint64_t t = mask;; t = (t - 1) & mask) {
            g.add_term(t, popcount(t) % 2 == 0 ? scale : Rational(-scale));
            if (t == 0) {
                break;
            }
        }
    }
    return g;
}

// z_k = 1 - 2 x_k.
inline PseudoBoolean spin_to_boolean(const SpinPolynomial& g) {
    PseudoBoolean f(g.arity());
    for (const auto& [mask, c] : g.terms()) {
        for (std::uint64_t u = mask;; u = (u - 1) & mask) {
            Rational term = c;
            mpq_mul_2exp(term.get_mpq_t(), term.get_mpq_t(), static_cast<mp_bitcnt_t>(popcount(u)));
            f.add_term(u, popcount(u) % 2 == 0 ? term : Rational(-term));
            if (u == 0) {
                break;
            }
        }
    }
    return f;
}

// Zero set of f on B^n, in basis order.
inline std::vector<Assignment> kernel(const PseudoBoolean& f, const EnumerationOptions& opts = {}) {
    const auto table = to_disjoint_form(f, opts);
    std::vector<Assignment> out;
    for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
        if (table[idx] == 0) {
            out.push_back(Assignment::from_index(f.arity(), idx));
        }
    }
    return out;
}

struct NonnegativityResult {
    bool nonnegative = true;
    std::optional<Assignment> witness;  // first violating point in basis order
    Rational witness_value;

    explicit operator bool() const noexcept { return nonnegative; }
};

inline NonnegativityResult is_nonnegative(const PseudoBoolean& f, const EnumerationOptions& opts = {}) {
    const auto table = to_disjoint_form(f, opts);
    for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
        if (table[idx] < 0) {
            return {false, Assignment::from_index(f.arity(), idx), table[idx]};
        }
    }
    return {};
}

// Human-readable form accepted back by the expression parser.
inline std::string to_string(const PseudoBoolean& f) {
    if (f.is_zero()) {
        return "0";
    }
    std::string out;
    bool first = true;
    for (const auto& [mask, c] : f.sorted_terms()) {
        Rational mag = abs(c);
        if (first) {
            if (c < 0) {
                out += "-";
            }
        } else {
            out += c < 0 ? " - " : " + ";
        }
        first = false;
        bool need_star = false;
        if (mask == 0 || mag != 1) {
            out += to_string(mag);
            need_star = true;
        }
        for (std::uint64_t m = mask; m != 0; m &= m - 1) {
            if (need_star) {
                out += "*";
            }
            out += "x" + std::to_string(std::countr_zero(m) + 1);
            need_star = true;
        }
    }
    return out;
}

}  // namespace parentham
