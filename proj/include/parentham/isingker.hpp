#pragma once

// One-body penalty forms, their gauge relabelings and squares, the
// product-of-linear-forms GHZ penalty, and an exact decision procedure for
// quadratic kernel realizability.

#include "parentham/parallel.hpp"
#include "parentham/pbf.hpp"
#include "parentham/simplex.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace parentham {

// g(x) = c0 + sum_k c_k l_k(x), where l_k = x_k if tau[k] else 1 - x_k.
struct OneBodyForm {
    std::vector<Rational> c;
    Assignment tau;
    Rational c0 = 0;

    std::size_t arity() const noexcept { return c.size(); }
};

inline void check_form(const OneBodyForm& form) {
    if (form.tau.size() != form.c.size()) {
        throw DimensionError("tau has length " + std::to_string(form.tau.size()) + ", expected " +
                             std::to_string(form.c.size()));
    }
    for (std::size_t k = 0; k < form.c.size(); ++k) {
        if (form.c[k] < 0) {
            throw PreconditionError("coefficient c" + std::to_string(k + 1) + " = " + to_string(form.c[k]) +
                                    " is negative");
        }
    }
}

inline PseudoBoolean one_body(const OneBodyForm& form) {
    check_form(form);
    const std::size_t n = form.arity();
    PseudoBoolean g = PseudoBoolean::constant(n, form.c0);
    for (std::size_t k = 0; k < n; ++k) {
        g = g + form.c[k] * PseudoBoolean::literal(n, k, form.tau[k]);
    }
    return g;
}

// Replaces x_k by 1 - x_k for every k in `flip` (bit k = x_{k+1}).
inline PseudoBoolean relabel(const PseudoBoolean& f, std::uint64_t flip) {
    PseudoBoolean g = f;
    for (std::size_t k = 0; k < f.arity(); ++k) {
        if ((flip >> k) & 1U) {
            g = complement_variable(g, k);
        }
    }
    return g;
}

// Relabels by the complement of tau, turning every literal into x_k.
inline PseudoBoolean gauge_fix(const OneBodyForm& form) {
    check_form(form);
    return relabel(one_body(form), ~form.tau.variables() & low_mask(form.arity()));
}

struct OneBodyKernel {
    std::size_t arity = 0;
    bool empty = false;
    std::uint64_t free_mask = 0;  // positions with c_k = 0
    Assignment pinned;            // value of each pinned position (complement of tau there)
    std::string pattern;          // e.g. "0*0": '*' marks a free position
    std::string note;
    bool enumerated = false;       // members is filled for arity <= 20
    std::vector<Assignment> members;  // basis order

    std::size_t free_count() const noexcept { return static_cast<std::size_t>(popcount(free_mask)); }
};

inline OneBodyKernel one_body_kernel(const OneBodyForm& form) {
    check_form(form);
    if (form.c0 < 0) {
        throw PreconditionError("negative offset c0");
    }
    const std::size_t n = form.arity();
    OneBodyKernel k;
    k.arity = n;
    if (form.c0 > 0) {
        k.empty = true;
        k.note = "positive offset c0 = " + to_string(form.c0) + " leaves the kernel empty";
        k.enumerated = n <= kDefaultEnumerationCap;
        return k;
    }
    std::uint64_t pinned = 0;
    k.pattern.assign(n, '*');
    for (std::size_t j = 0; j < n; ++j) {
        if (form.c[j] == 0) {
            k.free_mask |= std::uint64_t{1} << j;
        } else {
            const bool v = !form.tau[j];
            if (v) pinned |= std::uint64_t{1} << j;
            k.pattern[j] = v ? '1' : '0';
        }
    }
    k.pinned = Assignment(n, pinned);
    k.note = k.free_mask == 0 ? "unique ground state" : std::to_string(k.free_count()) + " free position(s)";
    if (n <= kDefaultEnumerationCap) {
        k.enumerated = true;
        // Every subset of the free mask, on top of the pinned bits.
        std::uint64_t sub = 0;
        do {
            k.members.emplace_back(n, pinned | sub);
            sub = (sub - k.free_mask) & k.free_mask;
        } while (sub != 0);
        std::sort(k.members.begin(), k.members.end());
    }
    return k;
}

struct PenaltyResult {
    PseudoBoolean penalty;
    std::optional<std::string> warning;
};

// (sum_k c_k x_k) * (sum_k a_k - sum_k a_k x_k): vanishes on 0^n and 1^n.
inline PenaltyResult ghz_quadratic(const std::vector<Rational>& c, const std::vector<Rational>& a) {
    if (c.size() != a.size()) {
        throw DimensionError("coefficient vectors differ in length");
    }
    if (c.empty()) {
        throw DomainError("at least one variable required");
    }
    const std::size_t n = c.size();
    PseudoBoolean left(n);
    PseudoBoolean right(n);
    bool zero = false;
    for (std::size_t k = 0; k < n; ++k) {
        if (c[k] < 0 || a[k] < 0) {
            throw PreconditionError("coefficients must be non-negative");
        }
        zero = zero || c[k] == 0 || a[k] == 0;
        left.add_term(std::uint64_t{1} << k, c[k]);
        right.add_term(0, a[k]);
        right.add_term(std::uint64_t{1} << k, -a[k]);
    }
    PenaltyResult out{multiply(left, right), std::nullopt};
    if (zero) {
        out.warning = "a zero coefficient: the kernel may strictly contain {0^n, 1^n}";
    }
    return out;
}

inline PenaltyResult ghz_quadratic(std::size_t n) {
    return ghz_quadratic(std::vector<Rational>(n, Rational(1)), std::vector<Rational>(n, Rational(1)));
}

// g^2 for the one-body form g: kernel {complement of tau} when every c_k > 0.
inline PenaltyResult square_form(const OneBodyForm& form) {
    const PseudoBoolean g = one_body(form);
    PenaltyResult out{multiply(g, g), std::nullopt};
    if (std::any_of(form.c.begin(), form.c.end(), [](const Rational& v) { return v == 0; })) {
        out.warning = "a zero coefficient: the kernel is degenerate";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Quadratic realizability: is there f = c0 + sum h_l x_l + sum_{l<k} J_lk x_l x_k
// with f = 0 on S and f >= 1 off S? Scaling makes the margin 1 general.

inline constexpr std::size_t kMaxRealizabilityArity = 12;

struct QuadraticRealization {
    std::size_t arity = 0;
    bool feasible = false;
    Rational c0;
    std::vector<Rational> h;
    std::vector<std::vector<Rational>> J;  // J[l][k] for l < k
    // Infeasible: nonzero multipliers per constraint row. Row x reads f(x) = 0
    // for x in S (free multiplier) and f(x) >= 1 otherwise (multiplier >= 0).
    std::vector<std::pair<Assignment, Rational>> certificate;
    std::size_t pivots = 0;

    PseudoBoolean form() const {
        PseudoBoolean f = PseudoBoolean::constant(arity, c0);
        for (std::size_t l = 0; l < arity; ++l) {
            f.add_term(std::uint64_t{1} << l, h[l]);
            for (std::size_t k = l + 1; k < arity; ++k) {
                f.add_term((std::uint64_t{1} << l) | (std::uint64_t{1} << k), J[l][k]);
            }
        }
        return f;
    }
};

namespace detail {

// Unknown order: c0, h_1..h_n, then J_lk for l < k lexicographically.
inline std::vector<std::uint64_t> quadratic_monomials(std::size_t n) {
    std::vector<std::uint64_t> m{0};
    for (std::size_t l = 0; l < n; ++l) m.push_back(std::uint64_t{1} << l);
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t k = l + 1; k < n; ++k) m.push_back((std::uint64_t{1} << l) | (std::uint64_t{1} << k));
    }
    return m;
}

}  // namespace detail

// Row i of the LP is the basis-order assignment with index i.
inline LPInstance realizability_lp(const std::vector<Assignment>& S, std::size_t n, unsigned threads = 1) {
    const auto monos = detail::quadratic_monomials(n);
    std::vector<bool> in_s(std::size_t{1} << n, false);
    for (const auto& s : S) in_s[s.index()] = true;
    LPInstance lp;
    lp.num_vars = monos.size();
    lp.rows.resize(std::size_t{1} << n);
    detail::parallel_for(0, lp.rows.size(), threads, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            const std::uint64_t x = Assignment::from_index(n, i).variables();
            LPRow& row = lp.rows[i];
            row.coeffs.resize(monos.size());
            for (std::size_t j = 0; j < monos.size(); ++j) {
                row.coeffs[j] = (monos[j] & ~x) == 0 ? 1 : 0;
            }
            row.sense = in_s[i] ? Sense::Equal : Sense::GreaterEqual;
            row.rhs = in_s[i] ? 0 : 1;
        }
    });
    return lp;
}

inline QuadraticRealization quadratic_realizability(const std::vector<Assignment>& S, std::size_t n,
                                                    unsigned threads = 1) {
    if (S.empty()) {
        throw DomainError("target set is empty");
    }
    if (n == 0) {
        throw DomainError("arity must be at least 1");
    }
    if (n > kMaxRealizabilityArity) {
        throw ResourceError("realizability is limited to 12 variables");
    }
    for (const auto& s : S) {
        if (s.size() != n) {
            throw DimensionError("string " + s.to_string() + " does not have length " + std::to_string(n));
        }
    }
    const LPInstance lp = realizability_lp(S, n, threads);
    const LPResult res = simplex_solve(lp);
    QuadraticRealization out;
    out.arity = n;
    out.pivots = res.pivots;
    if (res.status == LPStatus::Infeasible) {
        if (!verify_certificate(lp, res.certificate)) {
            throw NumericConsistencyError("infeasibility certificate failed verification");
        }
        for (std::size_t i = 0; i < res.certificate.size(); ++i) {
            if (res.certificate[i] != 0) {
                out.certificate.emplace_back(Assignment::from_index(n, i), res.certificate[i]);
            }
        }
        return out;
    }
    out.feasible = true;
    const auto monos = detail::quadratic_monomials(n);
    out.c0 = res.point[0];
    out.h.assign(res.point.begin() + 1, res.point.begin() + 1 + static_cast<std::ptrdiff_t>(n));
    out.J.assign(n, std::vector<Rational>(n));
    for (std::size_t j = 1 + n; j < monos.size(); ++j) {
        const auto l = static_cast<std::size_t>(std::countr_zero(monos[j]));
        const auto k = static_cast<std::size_t>(63 - std::countl_zero(monos[j]));
        out.J[l][k] = res.point[j];
    }
    // Exhaustive re-check of the returned coefficients.
    std::set<Assignment> target(S.begin(), S.end());
    const auto table = to_disjoint_form(out.form());
    for (std::size_t i = 0; i < table.size(); ++i) {
        const bool member = target.contains(Assignment::from_index(n, i));
        if (member ? table[i] != 0 : table[i] < 1) {
            throw NumericConsistencyError("realization fails at " + Assignment::from_index(n, i).to_string());
        }
    }
    return out;
}

// Checks a certificate against the set it claims to refute.
inline bool verify_realizability_certificate(const std::vector<Assignment>& S, std::size_t n,
                                             const std::vector<std::pair<Assignment, Rational>>& cert) {
    const LPInstance lp = realizability_lp(S, n);
    std::vector<Rational> y(lp.rows.size());
    for (const auto& [x, m] : cert) {
        if (x.size() != n) return false;
        y[x.index()] = m;
    }
    return verify_certificate(lp, y);
}

}  // namespace parentham
