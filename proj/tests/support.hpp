#pragma once

// Seeded generators and independent reference implementations used by the
// test suites. Nothing here calls into the code under test except to read
// its public data.

#include "parentham/gadgets.hpp"
#include "parentham/pauli.hpp"
#include "parentham/pbf.hpp"
#include "parentham/simplex.hpp"
#include "parentham/stab.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace testing_support {

using parentham::Assignment;
using parentham::PseudoBoolean;
using parentham::Rational;

// ---------------------------------------------------------------- generators

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
    std::uint64_t bits(std::size_t n) {
        return n == 0 ? 0 : std::uniform_int_distribution<std::uint64_t>(0, parentham::low_mask(n))(rng_);
    }
    Rational rational(long num_range = 5, long max_den = 4) {
        Rational q(integer(-num_range, num_range), integer(1, max_den));
        q.canonicalize();
        return q;
    }
    Rational nonneg_rational(long num_range = 5, long max_den = 4) {
        Rational q(integer(0, num_range), integer(1, max_den));
        q.canonicalize();
        return q;
    }
    std::mt19937_64& engine() { return rng_; }

    // Random sparse polynomial with `terms` monomials of degree <= max_degree.
    PseudoBoolean polynomial(std::size_t n, std::size_t terms, int max_degree = 3) {
        PseudoBoolean f(n);
        for (std::size_t t = 0; t < terms; ++t) {
            std::uint64_t mask = 0;
            const int deg = static_cast<int>(integer(0, max_degree));
            for (int d = 0; d < deg && n > 0; ++d) mask |= std::uint64_t{1} << integer(0, static_cast<long>(n) - 1);
            f.add_term(mask, rational());
        }
        return f;
    }

    // Non-negative function given by its table; each point is zero with probability p_zero.
    std::vector<Rational> nonneg_table(std::size_t n, double p_zero) {
        std::vector<Rational> t(std::size_t{1} << n);
        for (auto& v : t) v = coin(p_zero) ? Rational(0) : Rational(integer(1, 9), integer(1, 3));
        return t;
    }

    parentham::CliffordCircuit clifford(std::size_t n, std::size_t gates) {
        parentham::CliffordCircuit c(n);
        for (std::size_t g = 0; g < gates; ++g) {
            const auto q = static_cast<std::size_t>(integer(0, static_cast<long>(n) - 1));
            switch (integer(0, n > 1 ? 4 : 3)) {
                case 0: c.add(parentham::CliffordGate::h(q)); break;
                case 1: c.add(parentham::CliffordGate::s(q)); break;
                case 2: c.add(parentham::CliffordGate::x(q)); break;
                case 3: c.add(parentham::CliffordGate::z(q)); break;
                default: {
                    auto t = static_cast<std::size_t>(integer(0, static_cast<long>(n) - 2));
                    if (t >= q) ++t;
                    c.add(parentham::CliffordGate::cnot(q, t));
                }
            }
        }
        return c;
    }

private:
    std::mt19937_64 rng_;
};

// ------------------------------------------------------------ polynomial oracles

// Term-by-term evaluation: a monomial contributes iff every one of its variables is 1.
inline Rational naive_eval(const PseudoBoolean& f, const std::vector<int>& x) {
    Rational v = 0;
    for (const auto& [mask, c] : f.terms()) {
        bool on = true;
        for (std::size_t k = 0; k < f.arity(); ++k) {
            if (((mask >> k) & 1U) && x[k] == 0) on = false;
        }
        if (on) v += c;
    }
    return v;
}

// Bits of basis index i with x_1 as the most significant bit.
inline std::vector<int> index_bits(std::size_t n, std::uint64_t i) {
    std::vector<int> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = static_cast<int>((i >> (n - 1 - k)) & 1U);
    return x;
}

inline std::vector<Rational> naive_table(const PseudoBoolean& f) {
    std::vector<Rational> t(std::size_t{1} << f.arity());
    for (std::uint64_t i = 0; i < t.size(); ++i) t[i] = naive_eval(f, index_bits(f.arity(), i));
    return t;
}

inline std::set<std::uint64_t> naive_zero_set(const PseudoBoolean& f) {
    std::set<std::uint64_t> z;
    const auto t = naive_table(f);
    for (std::uint64_t i = 0; i < t.size(); ++i) {
        if (t[i] == 0) z.insert(i);
    }
    return z;
}

inline std::set<std::uint64_t> index_set(const std::vector<Assignment>& xs) {
    std::set<std::uint64_t> s;
    for (const auto& x : xs) s.insert(x.index());
    return s;
}

// Merge of two term maps keyed by sorted index lists.
inline std::map<std::vector<int>, Rational> naive_merge(const PseudoBoolean& f, const PseudoBoolean& g) {
    std::map<std::vector<int>, Rational> m;
    for (const auto* p : {&f, &g}) {
        for (const auto& [mask, c] : p->terms()) {
            std::vector<int> key;
            for (int k = 0; k < 64; ++k) {
                if ((mask >> k) & 1U) key.push_back(k + 1);
            }
            m[key] += c;
        }
    }
    std::erase_if(m, [](const auto& kv) { return kv.second == 0; });
    return m;
}

// Interpolation through Moebius inversion done by explicit subset sums.
inline PseudoBoolean naive_interpolate(std::size_t n, const std::vector<Rational>& table) {
    PseudoBoolean f(n);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
        Rational c = 0;
        for (std::uint64_t t = s;; t = (t - 1) & s) {
            const int sign = (parentham::popcount(s) - parentham::popcount(t)) % 2 == 0 ? 1 : -1;
            // table is in basis order: reverse the variable mask to the index
            c += sign * table[parentham::reverse_bits(t, n)];
            if (t == 0) break;
        }
        f.add_term(s, c);
    }
    return f;
}

// ------------------------------------------------------------ dense quantum oracles

using Cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
    return out;
}

inline Mat letter_matrix(char l) {
    Mat m(2, 2);
    switch (l) {
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, Cd(0, -1), Cd(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: m << 1, 0, 0, 1;
    }
    return m;
}

// Qubit 1 is the leftmost tensor factor.
inline Mat pauli_matrix(const std::string& letters) {
    Mat m = Mat::Identity(1, 1);
    for (char l : letters) m = kron(m, letter_matrix(l));
    return m;
}

inline Mat dense(const parentham::PauliSum& h) {
    const auto dim = Eigen::Index{1} << h.arity();
    Mat m = Mat::Zero(dim, dim);
    for (const auto& [p, c] : h.terms()) m += c.get_d() * pauli_matrix(p.letters());
    return m;
}

inline Vec dense(const parentham::StateVector& v) {
    Vec out(static_cast<Eigen::Index>(v.dimension()));
    for (std::size_t i = 0; i < v.dimension(); ++i) out(static_cast<Eigen::Index>(i)) = v.amplitude(i);
    return out;
}

inline Mat gate_matrix(const parentham::CliffordGate& g, std::size_t n) {
    using K = parentham::CliffordGate::Kind;
    auto single = [&](const Mat& u) {
        Mat m = Mat::Identity(1, 1);
        for (std::size_t q = 0; q < n; ++q) m = kron(m, q == g.target ? u : Mat(Mat::Identity(2, 2)));
        return m;
    };
    Mat u(2, 2);
    switch (g.kind) {
        case K::H: u << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), -1 / std::sqrt(2.0); return single(u);
        case K::S: u << 1, 0, 0, Cd(0, 1); return single(u);
        case K::X: return single(letter_matrix('X'));
        case K::Z: return single(letter_matrix('Z'));
        default: {
            const auto dim = Eigen::Index{1} << n;
            Mat m = Mat::Zero(dim, dim);
            for (Eigen::Index i = 0; i < dim; ++i) {
                const bool c = (i >> (n - 1 - g.control)) & 1;
                const Eigen::Index j = c ? i ^ (Eigen::Index{1} << (n - 1 - g.target)) : i;
                m(j, i) = 1;
            }
            return m;
        }
    }
}

inline Mat circuit_unitary(const parentham::CliffordCircuit& c) {
    const auto dim = Eigen::Index{1} << c.arity();
    Mat u = Mat::Identity(dim, dim);
    for (const auto& g : c.gates()) u = gate_matrix(g, c.arity()) * u;
    return u;
}

// ------------------------------------------------------------ SAT oracle

// All satisfying assignments (bit k = x_{k+1}) by branching with unit propagation.
inline std::set<std::uint64_t> sat_solutions(std::size_t n, const std::vector<std::vector<int>>& clauses) {
    std::set<std::uint64_t> out;
    std::vector<int> val(n, -1);
    std::function<void()> rec = [&]() {
        // unit propagation on a copy
        std::vector<int> saved = val;
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& c : clauses) {
                int unassigned = 0, last = 0;
                bool sat = false;
                for (int l : c) {
                    const int v = val[static_cast<std::size_t>(std::abs(l)) - 1];
                    if (v == -1) {
                        ++unassigned;
                        last = l;
                    } else if ((v == 1) == (l > 0)) {
                        sat = true;
                    }
                }
                if (sat) continue;
                if (unassigned == 0) {
                    val = saved;
                    return;  // conflict
                }
                if (unassigned == 1) {
                    val[static_cast<std::size_t>(std::abs(last)) - 1] = last > 0 ? 1 : 0;
                    changed = true;
                }
            }
        }
        std::size_t k = 0;
        while (k < n && val[k] != -1) ++k;
        if (k == n) {
            std::uint64_t m = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (val[j] == 1) m |= std::uint64_t{1} << j;
            }
            out.insert(m);
        } else {
            for (int b : {0, 1}) {
                std::vector<int> before = val;
                val[k] = b;
                rec();
                val = before;
            }
        }
        val = saved;
    };
    rec();
    return out;
}

// ------------------------------------------------------------ LP oracle

// Exact Gaussian elimination; nullopt when the square system is singular.
inline std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    const std::size_t d = b.size();
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        while (piv < d && a[piv][col] == 0) ++piv;
        if (piv == d) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < d; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const Rational f = a[r][col] / a[col][col];
            for (std::size_t k = col; k < d; ++k) a[r][k] -= f * a[col][k];
            b[r] -= f * b[col];
        }
    }
    std::vector<Rational> x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = b[i] / a[i][i];
    return x;
}

// Feasibility of a pointed polyhedron by visiting every basic solution.
// Only valid when the constraint matrix has full column rank.
inline bool feasible_by_vertices(const parentham::LPInstance& lp) {
    const auto rows = parentham::normalized_rows(lp);
    const std::size_t d = lp.num_vars;
    const std::size_t m = rows.size();
    if (m < d) return false;
    std::vector<std::size_t> pick(d);
    for (std::size_t i = 0; i < d; ++i) pick[i] = i;
    for (;;) {
        std::vector<std::vector<Rational>> a;
        std::vector<Rational> b;
        for (std::size_t i : pick) {
            a.push_back(rows[i].coeffs);
            b.push_back(rows[i].rhs);
        }
        if (auto x = solve_square(a, b); x && parentham::satisfies(lp, *x)) return true;
        // next combination
        std::size_t i = d;
        while (i > 0 && pick[i - 1] == m - d + i - 1) --i;
        if (i == 0) return false;
        ++pick[i - 1];
        for (std::size_t j = i; j < d; ++j) pick[j] = pick[j - 1] + 1;
    }
}

// ------------------------------------------------------------ circuits

inline bool gate_eval(const std::string& type, const std::vector<bool>& in) {
    if (type == "and") return in[0] && in[1];
    if (type == "or") return in[0] || in[1];
    if (type == "xor") return in[0] != in[1];
    return !in[0];  // not
}

}  // namespace testing_support
