#pragma once

// Symmetric pseudo-Boolean functions: f(x) depends only on s = |x|_1.
//
// Three coordinate systems are used:
//   weight profile   w_j = f(x) for |x|_1 = j,                 j = 0..n
//   canonical form   f = sum_j a_j e_j(x), e_j elementary symmetric
//   power form       f = sum_l c_l s^l
// The canonical and power forms are related by a = B c with the upper
// triangular Stirling matrix B(i,j) = i! S(j,i) on indices 1..n and c_0 = a_0.
// Factorisations use the convention f = K prod_l (lambda_l - s).

#include "parentham/pbf.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

namespace parentham {

struct WeightProfile {
    std::size_t arity = 0;
    std::vector<Rational> values;  // length arity + 1

    friend bool operator==(const WeightProfile&, const WeightProfile&) = default;
};

struct SymmetryCheck {
    std::optional<WeightProfile> profile;
    // Two points of equal Hamming weight with different values.
    std::optional<std::pair<Assignment, Assignment>> witness;

    explicit operator bool() const noexcept { return profile.has_value(); }
};

struct SymmetricForm {
    std::size_t arity = 0;
    std::vector<Rational> power_coeffs;  // c_0..c_n

    SymmetricForm() = default;
    SymmetricForm(std::size_t n, std::vector<Rational> c) : arity(n), power_coeffs(std::move(c)) {
        if (power_coeffs.size() != n + 1) {
            throw DimensionError("power form of arity n needs n+1 coefficients");
        }
    }

    // Value at Hamming weight s.
    Rational at_weight(std::size_t s) const {
        Rational v = 0;
        for (auto it = power_coeffs.rbegin(); it != power_coeffs.rend(); ++it) {
            v = v * static_cast<unsigned long>(s) + *it;
        }
        return v;
    }

    int degree() const noexcept {
        for (std::size_t l = power_coeffs.size(); l-- > 0;) {
            if (power_coeffs[l] != 0) {
                return static_cast<int>(l);
            }
        }
        return -1;
    }

    friend bool operator==(const SymmetricForm&, const SymmetricForm&) = default;
};

class StirlingMatrix {
public:
    explicit StirlingMatrix(std::size_t n) : n_(n), entries_(n * n) {}

    std::size_t dimension() const noexcept { return n_; }

    // 1-based, matching the row/column labels i, j = 1..n.
    const Rational& operator()(std::size_t i, std::size_t j) const { return entries_[(i - 1) * n_ + (j - 1)]; }
    Rational& operator()(std::size_t i, std::size_t j) { return entries_[(i - 1) * n_ + (j - 1)]; }

private:
    std::size_t n_;
    std::vector<Rational> entries_;
};

inline StirlingMatrix stirling_matrix(std::size_t n) {
    if (n < 1 || n > 64) {
        throw DomainError("Stirling matrix dimension must lie in 1..64");
    }
    // S(j, i) for 0 <= i, j <= n by S(j,i) = i S(j-1,i) + S(j-1,i-1).
    std::vector<std::vector<Integer>> s(n + 1, std::vector<Integer>(n + 1, 0));
    s[0][0] = 1;
    for (std::size_t j = 1; j <= n; ++j) {
        for (std::size_t i = 1; i <= j; ++i) {
            s[j][i] = Integer(static_cast<unsigned long>(i)) * s[j - 1][i] + s[j - 1][i - 1];
        }
    }
    StirlingMatrix b(n);
    Integer fact = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        fact *= static_cast<unsigned long>(i);
        for (std::size_t j = i; j <= n; ++j) {
            b(i, j) = Rational(fact * s[j][i]);
        }
    }
    return b;
}

// Solves B c = a by back substitution; c_0 = a_0.
inline SymmetricForm canonical_to_power(const Rational& a0, std::span<const Rational> a) {
    const std::size_t n = a.size();
    std::vector<Rational> c(n + 1);
    c[0] = a0;
    if (n == 0) {
        return SymmetricForm(0, std::move(c));
    }
    const auto b = stirling_matrix(n);
    for (std::size_t i = n; i >= 1; --i) {
        Rational rhs = a[i - 1];
        for (std::size_t j = i + 1; j <= n; ++j) {
            rhs -= b(i, j) * c[j];
        }
        c[i] = rhs / b(i, i);
    }
    return SymmetricForm(n, std::move(c));
}

// Returns a_0..a_n with a = B c.
inline std::vector<Rational> power_to_canonical(const SymmetricForm& form) {
    const std::size_t n = form.arity;
    std::vector<Rational> a(n + 1);
    a[0] = form.power_coeffs[0];
    if (n == 0) {
        return a;
    }
    const auto b = stirling_matrix(n);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = i; j <= n; ++j) {
            a[i] += b(i, j) * form.power_coeffs[j];
        }
    }
    return a;
}

inline Integer binomial(std::size_t n, std::size_t k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline std::vector<Rational> profile_to_canonical(const WeightProfile& w) {
    const std::size_t n = w.arity;
    std::vector<Rational> a(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        for (std::size_t i = 0; i <= j; ++i) {
            Rational term = Rational(binomial(j, i)) * w.values[i];
            if ((j - i) % 2 == 0) {
                a[j] += term;
            } else {
                a[j] -= term;
            }
        }
    }
    return a;
}

inline WeightProfile canonical_to_profile(std::span<const Rational> a) {
    const std::size_t n = a.size() - 1;
    WeightProfile w{n, std::vector<Rational>(n + 1)};
    for (std::size_t s = 0; s <= n; ++s) {
        for (std::size_t j = 0; j <= s; ++j) {
            w.values[s] += Rational(binomial(s, j)) * a[j];
        }
    }
    return w;
}

inline WeightProfile weight_profile(const SymmetricForm& form) {
    WeightProfile w{form.arity, std::vector<Rational>(form.arity + 1)};
    for (std::size_t s = 0; s <= form.arity; ++s) {
        w.values[s] = form.at_weight(s);
    }
    return w;
}

// sum_j a_j e_j(x) as an explicit polynomial.
inline PseudoBoolean symmetric_polynomial(std::span<const Rational> a) {
    const std::size_t n = a.size() - 1;
    if (n >= kMaxVariables) {
        throw DimensionError("too many variables");
    }
    PseudoBoolean f(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        f.add_term(mask, a[static_cast<std::size_t>(popcount(mask))]);
    }
    return f;
}

inline PseudoBoolean to_pseudo_boolean(const SymmetricForm& form) {
    return symmetric_polynomial(power_to_canonical(form));
}

inline SymmetryCheck detect_symmetric(const PseudoBoolean& f, const EnumerationOptions& opts = {}) {
    const std::size_t n = f.arity();
    const auto table = to_disjoint_form(f, opts);
    std::vector<std::optional<std::uint64_t>> rep(n + 1);
    for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
        const auto w = static_cast<std::size_t>(popcount(idx));
        if (!rep[w]) {
            rep[w] = idx;
        } else if (table[*rep[w]] != table[idx]) {
            return {std::nullopt,
                    std::make_pair(Assignment::from_index(n, *rep[w]), Assignment::from_index(n, idx))};
        }
    }
    WeightProfile w{n, std::vector<Rational>(n + 1)};
    for (std::size_t j = 0; j <= n; ++j) {
        w.values[j] = table[*rep[j]];
    }
    return {std::move(w), std::nullopt};
}

// a_0..a_n read off the multilinear coefficients; rejects non-symmetric input.
inline std::vector<Rational> symmetric_coefficients(const PseudoBoolean& f) {
    const std::size_t n = f.arity();
    std::vector<std::optional<Rational>> a(n + 1);
    std::vector<std::size_t> count(n + 1, 0);
    for (const auto& [mask, c] : f.terms()) {
        const auto j = static_cast<std::size_t>(popcount(mask));
        if (a[j] && *a[j] != c) {
            throw DomainError("function is not symmetric");
        }
        a[j] = c;
        ++count[j];
    }
    std::vector<Rational> out(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        if (a[j]) {
            if (Integer(count[j]) != binomial(n, j)) {
                throw DomainError("function is not symmetric");
            }
            out[j] = *a[j];
        }
    }
    return out;
}

inline SymmetricForm power_form(const PseudoBoolean& f) {
    const auto a = symmetric_coefficients(f);
    return canonical_to_power(a[0], std::span<const Rational>(a).subspan(1));
}

struct RootFactorization {
    std::size_t arity = 0;
    std::complex<double> scale;                // K
    std::vector<std::complex<double>> roots;   // lambda_l, sorted by (re, im)
    std::vector<Rational> exact_roots;         // rational roots with multiplicity, ascending
    std::optional<Rational> exact_scale;

    bool all_exact() const noexcept { return exact_scale.has_value() && exact_roots.size() == roots.size(); }

    // Prefactor of the equivalent display K' prod (s - lambda_l), i.e. the leading power coefficient.
    std::complex<double> leading_scale() const {
        return roots.size() % 2 == 0 ? scale : -scale;
    }
};

inline constexpr double kRootImagTolerance = 1e-9;

namespace detail {

inline std::vector<Integer> divisors(Integer v) {
    v = abs(v);
    std::vector<Integer> small;
    std::vector<Integer> large;
    for (Integer d = 1; d * d <= v; ++d) {
        if (v % d == 0) {
            small.push_back(d);
            if (d * d != v) {
                large.push_back(v / d);
            }
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

// Horner evaluation of sum p_l X^l.
inline Rational horner(const std::vector<Rational>& p, const Rational& x) {
    Rational v = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        v = v * x + *it;
    }
    return v;
}

// Divides p by (X - r), assuming r is a root.
inline std::vector<Rational> deflate(const std::vector<Rational>& p, const Rational& r) {
    const std::size_t d = p.size() - 1;
    std::vector<Rational> q(d);
    Rational carry = 0;
    for (std::size_t l = d; l >= 1; --l) {
        carry = p[l] + carry * r;
        q[l - 1] = carry;
    }
    return q;
}

inline std::vector<std::complex<double>> companion_roots(const std::vector<Rational>& p) {
    const std::size_t d = p.size() - 1;
    if (d == 0) {
        return {};
    }
    const double lead = p[d].get_d();
    if (d == 1) {
        return {std::complex<double>(-p[0].get_d() / lead, 0.0)};
    }
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 1; i < d; ++i) {
        comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    }
    for (std::size_t i = 0; i < d; ++i) {
        const Rational ratio = p[i] / p[d];
        comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) = -ratio.get_d();
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, false);
    std::vector<std::complex<double>> out;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        out.push_back(solver.eigenvalues()[i]);
    }
    return out;
}

// Continued-fraction approximation with a bounded denominator.
inline Rational nearest_rational(double x, long max_den) {
    long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double v = x;
    for (int it = 0; it < 64; ++it) {
        const double a = std::floor(v);
        if (std::abs(a) > 1e15) {
            break;
        }
        const long ai = static_cast<long>(a);
        const long h2 = ai * h1 + h0;
        const long k2 = ai * k1 + k0;
        if (k2 > max_den) {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        const double frac = v - a;
        if (frac < 1e-14) {
            break;
        }
        v = 1.0 / frac;
    }
    return k1 == 0 ? Rational(0) : make_rational(h1, k1);
}

// One exact rational root of p (degree >= 1), if any.
inline std::optional<Rational> find_rational_root(const std::vector<Rational>& p) {
    if (p[0] == 0) {
        return Rational(0);
    }
    // Clear denominators to integer coefficients.
    Integer den = 1;
    for (const auto& c : p) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    }
    const Integer a0 = abs(Integer(p.front() * den));
    const Integer ad = abs(Integer(p.back() * den));
    const Integer limit("1000000000000");
    if (a0 <= limit && ad <= limit) {
        const auto ps = divisors(a0);
        const auto qs = divisors(ad);
        for (const auto& q : qs) {
            for (const auto& num : ps) {
                Integer g;
                mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), q.get_mpz_t());
                if (g != 1) {
                    continue;
                }
                for (int sign : {1, -1}) {
                    Rational cand(num * sign, q);
                    cand.canonicalize();
                    if (horner(p, cand) == 0) {
                        return cand;
                    }
                }
            }
        }
        return std::nullopt;
    }
    // Coefficients too large to enumerate divisors: test rationals near the numeric roots.
    for (const auto& z : companion_roots(p)) {
        if (std::abs(z.imag()) > 1e-6 * (1.0 + std::abs(z))) {
            continue;
        }
        const Rational cand = nearest_rational(z.real(), 1000000);
        if (horner(p, cand) == 0) {
            return cand;
        }
    }
    return std::nullopt;
}

}  // namespace detail

inline RootFactorization factorize(const SymmetricForm& form) {
    const int d = form.degree();
    if (d < 1) {
        throw DegenerateInputError("factorisation needs a power form of degree at least 1");
    }
    std::vector<Rational> p(form.power_coeffs.begin(), form.power_coeffs.begin() + d + 1);

    RootFactorization rf;
    rf.arity = form.arity;
    rf.exact_scale = d % 2 == 0 ? p.back() : Rational(-p.back());
    rf.scale = {rf.exact_scale->get_d(), 0.0};

    while (p.size() > 1) {
        auto r = detail::find_rational_root(p);
        if (!r) {
            break;
        }
        rf.exact_roots.push_back(*r);
        p = detail::deflate(p, *r);
    }
    std::sort(rf.exact_roots.begin(), rf.exact_roots.end());
    for (const auto& r : rf.exact_roots) {
        rf.roots.emplace_back(r.get_d(), 0.0);
    }

    auto numeric = detail::companion_roots(p);
    for (auto& z : numeric) {
        if (std::abs(z.imag()) <= kRootImagTolerance * (1.0 + std::abs(z))) {
            z = {z.real(), 0.0};
        }
    }
    // Real coefficients: pair each root in the upper half plane with its mirror.
    std::vector<std::complex<double>> upper;
    std::vector<std::complex<double>> lower;
    for (const auto& z : numeric) {
        if (z.imag() > 0) {
            upper.push_back(z);
        } else if (z.imag() < 0) {
            lower.push_back(z);
        } else {
            rf.roots.push_back(z);
        }
    }
    if (upper.size() != lower.size()) {
        throw NumericConsistencyError("complex roots of a real polynomial failed to pair up");
    }
    for (const auto& z : upper) {
        auto it = std::min_element(lower.begin(), lower.end(), [&](const auto& a, const auto& b) {
            return std::abs(a - std::conj(z)) < std::abs(b - std::conj(z));
        });
        const std::complex<double> mid((z.real() + it->real()) / 2, (z.imag() - it->imag()) / 2);
        rf.roots.push_back(mid);
        rf.roots.push_back(std::conj(mid));
        lower.erase(it);
    }
    std::sort(rf.roots.begin(), rf.roots.end(), [](const auto& a, const auto& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return rf;
}

// Expands K prod (lambda_l - s) back into a power form.
inline SymmetricForm reconstruct(const RootFactorization& rf) {
    const std::size_t d = rf.roots.size();
    if (d > rf.arity) {
        throw DimensionError("more roots than the arity allows");
    }
    std::vector<Rational> c(rf.arity + 1);
    if (rf.all_exact()) {
        std::vector<Rational> p{*rf.exact_scale};
        for (const auto& r : rf.exact_roots) {
            std::vector<Rational> next(p.size() + 1);
            for (std::size_t l = 0; l < p.size(); ++l) {
                next[l] += r * p[l];
                next[l + 1] -= p[l];
            }
            p = std::move(next);
        }
        std::copy(p.begin(), p.end(), c.begin());
        return SymmetricForm(rf.arity, std::move(c));
    }
    std::vector<std::complex<double>> p{rf.scale};
    for (const auto& r : rf.roots) {
        std::vector<std::complex<double>> next(p.size() + 1);
        for (std::size_t l = 0; l < p.size(); ++l) {
            next[l] += r * p[l];
            next[l + 1] -= p[l];
        }
        p = std::move(next);
    }
    for (std::size_t l = 0; l < p.size(); ++l) {
        if (std::abs(p[l].imag()) > kRootImagTolerance * (1.0 + std::abs(p[l].real()))) {
            throw NumericConsistencyError("expanded coefficient has a residual imaginary part");
        }
        c[l] = Rational(p[l].real());
    }
    return SymmetricForm(rf.arity, std::move(c));
}

// Literal expansion of ((-1)^{k-1}/(k-1)!) prod_{j=1}^{k-1} (s - j) on k variables.
// Its value at weight k is (-1)^{k-1}, so it agrees with the delta truth table
// only for odd k; see delta_form for the truth-table version.
inline SymmetricForm delta_product_form(std::size_t k) {
    if (k < 2 || k > 20) {
        throw DomainError("delta product form needs 2 <= k <= 20");
    }
    std::vector<Rational> p{1};
    for (std::size_t j = 1; j < k; ++j) {
        std::vector<Rational> next(p.size() + 1);
        for (std::size_t l = 0; l < p.size(); ++l) {
            next[l] -= Rational(static_cast<unsigned long>(j)) * p[l];
            next[l + 1] += p[l];
        }
        p = std::move(next);
    }
    Integer fact = 1;
    for (std::size_t j = 2; j < k; ++j) {
        fact *= static_cast<unsigned long>(j);
    }
    Rational pre(1, 1);
    pre /= Rational(fact);
    if ((k - 1) % 2 == 1) {
        pre = -pre;
    }
    std::vector<Rational> c(k + 1);
    for (std::size_t l = 0; l < p.size(); ++l) {
        c[l] = pre * p[l];
    }
    return SymmetricForm(k, std::move(c));
}

// The k-variable delta (1 on 0^k and 1^k, else 0) in power form.
inline SymmetricForm delta_form(std::size_t k) {
    if (k < 1 || k > 63) {
        throw DomainError("delta needs 1 <= k <= 63");
    }
    WeightProfile w{k, std::vector<Rational>(k + 1)};
    w.values.front() = 1;
    w.values.back() = 1;
    const auto a = profile_to_canonical(w);
    return canonical_to_power(a[0], std::span<const Rational>(a).subspan(1));
}

// n-variable parity in canonical coefficients: a_j = (-2)^{j-1}, a_0 = 0.
inline std::vector<Rational> xor_canonical(std::size_t n) {
    WeightProfile w{n, std::vector<Rational>(n + 1)};
    for (std::size_t j = 0; j <= n; ++j) {
        w.values[j] = static_cast<long>(j % 2);
    }
    return profile_to_canonical(w);
}

// J sum_{l<m} x_l x_m + h sum_l x_l scaled so that it factors as
// (J/4)(s + 4h/J - 1) s: the pair sum runs over unordered pairs with weight J/2.
inline PseudoBoolean symmetric_ising(const Rational& J, const Rational& h, std::size_t n) {
    if (J == 0) {
        throw DegenerateInputError("coupling J must be nonzero");
    }
    if (n < 1 || n > kMaxVariables) {
        throw DomainError("symmetric Ising model needs 1..64 variables");
    }
    PseudoBoolean f(n);
    const Rational half_j = J / 2;
    for (std::size_t l = 0; l < n; ++l) {
        f.add_term(std::uint64_t{1} << l, h);
        for (std::size_t m = l + 1; m < n; ++m) {
            f.add_term((std::uint64_t{1} << l) | (std::uint64_t{1} << m), half_j);
        }
    }
    return f;
}

// The closed-form factorisation K = J/4, roots {0, 1 - 4h/J}.
inline RootFactorization symmetric_ising_factorization(const Rational& J, const Rational& h, std::size_t n) {
    if (J == 0) {
        throw DegenerateInputError("coupling J must be nonzero");
    }
    RootFactorization rf;
    rf.arity = n;
    rf.exact_scale = J / 4;
    rf.scale = {rf.exact_scale->get_d(), 0.0};
    rf.exact_roots = {Rational(0), Rational(1 - 4 * h / J)};
    std::sort(rf.exact_roots.begin(), rf.exact_roots.end());
    for (const auto& r : rf.exact_roots) {
        rf.roots.emplace_back(r.get_d(), 0.0);
    }
    return rf;
}

}  // namespace parentham
