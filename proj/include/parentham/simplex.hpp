#pragma once

// Exact-rational linear feasibility and optimization.
//
// The solver works on a dictionary (Tucker) tableau: every basic variable is
// an affine function of the nonbasic ones. Each constraint row i gets a slack
// s_i = a_i x - b_i for >= rows, b_i - a_i x for <= rows, a_i x - b_i (fixed
// at zero) for equality rows. Structural variables are free and are pivoted
// into the basis first, so the tableau has one column per structural variable
// rather than one per row. Phase 1 uses a single auxiliary variable added to
// the inequalities that remain basic; both phases pivot by Bland's rule.
//
// Infeasibility certificates are read from the phase-1 objective row. They
// are indexed by constraint row: the explicit rows first, then one row per
// finite lower bound and one per finite upper bound, in variable order.
// Multiplier y_i applies to row i written as "a_i x >= b_i" (<= rows negated)
// and is non-negative except on equality rows. A valid certificate has
// sum_i y_i a_i = 0 and sum_i y_i b_i = 1, i.e. it derives 0 >= 1.

#include "parentham/core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace parentham {

enum class Sense { LessEqual, GreaterEqual, Equal };

struct LPRow {
    std::vector<Rational> coeffs;
    Sense sense = Sense::GreaterEqual;
    Rational rhs;
};

struct LPInstance {
    std::size_t num_vars = 0;
    std::vector<LPRow> rows;
    std::vector<std::optional<Rational>> lower;  // empty or one per variable
    std::vector<std::optional<Rational>> upper;
    std::vector<Rational> objective;  // minimized; empty means pure feasibility
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LPStatus s) {
    switch (s) {
        case LPStatus::Optimal: return "optimal";
        case LPStatus::Infeasible: return "infeasible";
        default: return "unbounded";
    }
}

struct LPResult {
    LPStatus status = LPStatus::Infeasible;
    std::vector<Rational> point;        // feasible point (optimal / unbounded)
    Rational objective_value;           // at `point`
    std::vector<Rational> certificate;  // infeasible only
    std::size_t pivots = 0;
};

// All constraints as >=/= rows, bounds appended.
inline std::vector<LPRow> normalized_rows(const LPInstance& lp) {
    auto check_width = [&](std::size_t w, const std::string& what) {
        if (w != lp.num_vars) {
            throw FormatError(what + " has width " + std::to_string(w) + ", expected " + std::to_string(lp.num_vars));
        }
    };
    if (!lp.lower.empty()) check_width(lp.lower.size(), "lower bound vector");
    if (!lp.upper.empty()) check_width(lp.upper.size(), "upper bound vector");
    if (!lp.objective.empty()) check_width(lp.objective.size(), "objective");
    std::vector<LPRow> out;
    out.reserve(lp.rows.size());
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        const auto& r = lp.rows[i];
        check_width(r.coeffs.size(), "row " + std::to_string(i));
        if (r.sense == Sense::LessEqual) {
            LPRow n{r.coeffs, Sense::GreaterEqual, -r.rhs};
            for (auto& c : n.coeffs) c = -c;
            out.push_back(std::move(n));
        } else {
            out.push_back(r);
        }
    }
    auto unit = [&](std::size_t j, long sign) {
        std::vector<Rational> c(lp.num_vars);
        c[j] = sign;
        return c;
    };
    for (std::size_t j = 0; j < lp.lower.size(); ++j) {
        if (lp.lower[j]) out.push_back({unit(j, 1), Sense::GreaterEqual, *lp.lower[j]});
    }
    for (std::size_t j = 0; j < lp.upper.size(); ++j) {
        if (lp.upper[j]) out.push_back({unit(j, -1), Sense::GreaterEqual, -*lp.upper[j]});
    }
    return out;
}

inline bool satisfies(const LPInstance& lp, const std::vector<Rational>& x) {
    if (x.size() != lp.num_vars) {
        return false;
    }
    for (const auto& r : normalized_rows(lp)) {
        Rational v = 0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (r.coeffs[j] != 0) v += r.coeffs[j] * x[j];
        }
        if (r.sense == Sense::Equal ? v != r.rhs : v < r.rhs) {
            return false;
        }
    }
    return true;
}

inline bool verify_certificate(const LPInstance& lp, const std::vector<Rational>& y) {
    const auto rows = normalized_rows(lp);
    if (y.size() != rows.size()) {
        return false;
    }
    std::vector<Rational> combo(lp.num_vars);
    Rational rhs = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (y[i] == 0) continue;
        if (rows[i].sense != Sense::Equal && y[i] < 0) {
            return false;
        }
        for (std::size_t j = 0; j < lp.num_vars; ++j) {
            if (rows[i].coeffs[j] != 0) combo[j] += y[i] * rows[i].coeffs[j];
        }
        rhs += y[i] * rows[i].rhs;
    }
    return rhs > 0 && std::all_of(combo.begin(), combo.end(), [](const Rational& c) { return c == 0; });
}

namespace detail {

// Variable ids: structural 0..n-1, row slacks n..n+m-1, auxiliary n+m.
class Dictionary {
public:
    enum class Kind { Free, NonNegative, Fixed };

    Dictionary(const std::vector<LPRow>& rows, std::size_t n)
        : n_(n), m_(rows.size()), d_(rows.size()), t_(rows.size(), std::vector<Rational>(n + 1)), basic_(rows.size()),
          nonbasic_(n + 1) {
        for (std::size_t j = 0; j < n; ++j) nonbasic_[j] = j;
        nonbasic_[n] = aux();
        for (std::size_t i = 0; i < m_; ++i) {
            basic_[i] = n + i;
            d_[i] = -rows[i].rhs;
            for (std::size_t j = 0; j < n; ++j) t_[i][j] = rows[i].coeffs[j];
        }
        obj_.assign(n + 1, Rational(0));
        kind_.assign(n + m_ + 1, Kind::NonNegative);
        for (std::size_t j = 0; j < n; ++j) kind_[j] = Kind::Free;
        for (std::size_t i = 0; i < m_; ++i) {
            if (rows[i].sense == Sense::Equal) kind_[n + i] = Kind::Fixed;
        }
    }

    std::size_t aux() const { return n_ + m_; }
    std::size_t rows() const { return m_; }
    std::size_t cols() const { return nonbasic_.size(); }
    std::size_t pivots() const { return pivots_; }

    void pivot(std::size_t r, std::size_t e) {
        const Rational p = t_[r][e];
        const Rational inv = 1 / p;
        d_[r] = -d_[r] * inv;
        for (std::size_t k = 0; k < cols(); ++k) {
            t_[r][k] = k == e ? inv : Rational(-t_[r][k] * inv);
        }
        auto update = [&](Rational& d, std::vector<Rational>& row) {
            const Rational a = row[e];
            if (a == 0) return;
            d += a * d_[r];
            for (std::size_t k = 0; k < cols(); ++k) {
                if (k == e) {
                    row[k] = a * t_[r][e];
                } else if (t_[r][k] != 0) {
                    row[k] += a * t_[r][k];
                }
            }
        };
        for (std::size_t i = 0; i < m_; ++i) {
            if (i != r) update(d_[i], t_[i]);
        }
        update(obj_d_, obj_);
        std::swap(basic_[r], nonbasic_[e]);
        ++pivots_;
    }

    // Moves every structural variable into the basis and every equality
    // slack out of it, wherever a nonzero pivot exists. Returns a certificate if an equality row is contradictory.
    std::optional<std::vector<Rational>> eliminate() {
        for (std::size_t e = 0; e < cols(); ++e) {
            if (kind_[nonbasic_[e]] != Kind::Free) continue;
            std::optional<std::size_t> best;
            for (std::size_t i = 0; i < m_; ++i) {
                if (t_[i][e] == 0 || kind_[basic_[i]] == Kind::Free) continue;
                // Prefer equality rows so fixed slacks leave the basis early.
                if (!best || (kind_[basic_[i]] == Kind::Fixed && kind_[basic_[*best]] != Kind::Fixed)) best = i;
            }
            if (best) pivot(*best, e);
        }
        for (std::size_t i = 0; i < m_; ++i) {
            if (kind_[basic_[i]] != Kind::Fixed) continue;
            std::optional<std::size_t> col;
            for (std::size_t k = 0; k < cols(); ++k) {
                const Kind kk = kind_[nonbasic_[k]];
                if (t_[i][k] != 0 && kk == Kind::NonNegative && nonbasic_[k] != aux() &&
                    (!col || nonbasic_[k] < nonbasic_[*col])) {
                    col = k;
                }
            }
            if (col) {
                pivot(i, *col);
                continue;
            }
            // Row reads s_i = d_i + (fixed slacks).
            if (d_[i] != 0) {
                // s_i - sum t_ik s_k = d_i identically; scale so it reads 0 >= 1.
                std::vector<Rational> y(m_);
                y[basic_[i] - n_] = -1;
                for (std::size_t k = 0; k < cols(); ++k) {
                    if (nonbasic_[k] >= n_ && nonbasic_[k] < aux()) y[nonbasic_[k] - n_] = t_[i][k];
                }
                const Rational scale = 1 / d_[i];
                for (auto& v : y) v *= scale;
                return y;
            }
        }
        return std::nullopt;
    }

    // The auxiliary variable enters every inequality that is basic after
    // elimination. Nonbasic inequality slacks keep their original meaning,
    // which is all the certificate argument needs.
    void add_auxiliary() {
        const std::size_t a = aux_column();
        for (std::size_t i = 0; i < m_; ++i) {
            if (kind_[basic_[i]] == Kind::NonNegative) t_[i][a] = 1;
        }
    }

    bool constrained(std::size_t i) const { return kind_[basic_[i]] != Kind::Free; }

    bool primal_feasible() const {
        for (std::size_t i = 0; i < m_; ++i) {
            if (constrained(i) && d_[i] < 0) return false;
        }
        return true;
    }

    std::size_t aux_column() const {
        for (std::size_t k = 0; k < cols(); ++k) {
            if (nonbasic_[k] == aux()) return k;
        }
        return cols();
    }

    void set_objective(const std::vector<Rational>& c_structural, bool auxiliary) {
        obj_d_ = 0;
        obj_.assign(cols(), Rational(0));
        auto add_var = [&](std::size_t var, const Rational& c) {
            if (c == 0) return;
            for (std::size_t k = 0; k < cols(); ++k) {
                if (nonbasic_[k] == var) {
                    obj_[k] += c;
                    return;
                }
            }
            for (std::size_t i = 0; i < m_; ++i) {
                if (basic_[i] == var) {
                    obj_d_ += c * d_[i];
                    for (std::size_t k = 0; k < cols(); ++k) {
                        if (t_[i][k] != 0) obj_[k] += c * t_[i][k];
                    }
                    return;
                }
            }
        };
        if (auxiliary) {
            add_var(aux(), 1);
        } else {
            for (std::size_t j = 0; j < c_structural.size(); ++j) add_var(j, c_structural[j]);
        }
    }

    // Phase 1 entry: bring the auxiliary variable in on the most negative row.
    void enter_auxiliary() {
        std::optional<std::size_t> r;
        for (std::size_t i = 0; i < m_; ++i) {
            if (constrained(i) && d_[i] < 0 && (!r || d_[i] < d_[*r] || (d_[i] == d_[*r] && basic_[i] < basic_[*r]))) {
                r = i;
            }
        }
        pivot(*r, aux_column());
    }

    // Bland's rule. Returns false when the objective is unbounded below.
    bool optimize(bool prefer_aux_leaving) {
        for (;;) {
            std::optional<std::size_t> e;
            for (std::size_t k = 0; k < cols(); ++k) {
                const Kind kk = kind_[nonbasic_[k]];
                if (kk == Kind::Fixed || blocked(nonbasic_[k])) continue;
                // A free nonbasic variable touches no constrained row.
                if (kk == Kind::Free && obj_[k] != 0) return false;
                if (obj_[k] < 0 && (!e || nonbasic_[k] < nonbasic_[*e])) e = k;
            }
            if (!e) return true;
            std::optional<std::size_t> r;
            Rational best;
            for (std::size_t i = 0; i < m_; ++i) {
                if (!constrained(i) || t_[i][*e] >= 0) continue;
                const Rational ratio = d_[i] / -t_[i][*e];
                bool take = !r || ratio < best;
                if (r && ratio == best) {
                    if (prefer_aux_leaving && basic_[i] == aux()) {
                        take = true;
                    } else if (!(prefer_aux_leaving && basic_[*r] == aux())) {
                        take = basic_[i] < basic_[*r];
                    }
                }
                if (take) {
                    r = i;
                    best = ratio;
                }
            }
            if (!r) return false;
            pivot(*r, *e);
        }
    }

    const Rational& objective_value() const { return obj_d_; }

    // Farkas multipliers from the phase-1 objective row, scaled to rhs 1.
    std::vector<Rational> certificate() const {
        std::vector<Rational> y(m_);
        for (std::size_t k = 0; k < cols(); ++k) {
            const std::size_t v = nonbasic_[k];
            if (v >= n_ && v < aux()) y[v - n_] = obj_[k];
        }
        const Rational scale = 1 / obj_d_;
        for (auto& v : y) v *= scale;
        return y;
    }

    // After a successful phase 1: drive the auxiliary variable out and block it.
    void retire_auxiliary() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basic_[i] != aux()) continue;
            for (std::size_t k = 0; k < cols(); ++k) {
                if (t_[i][k] != 0 && kind_[nonbasic_[k]] == Kind::NonNegative) {
                    pivot(i, k);
                    break;
                }
            }
        }
        aux_blocked_ = true;
        const std::size_t a = aux_column();
        if (a < cols()) {
            for (std::size_t i = 0; i < m_; ++i) t_[i][a] = 0;
        }
    }

    std::vector<Rational> point() const {
        std::vector<Rational> x(n_);
        for (std::size_t i = 0; i < m_; ++i) {
            if (basic_[i] < n_) x[basic_[i]] = d_[i];
        }
        return x;
    }

private:
    bool blocked(std::size_t var) const { return aux_blocked_ && var == aux(); }

    std::size_t n_;
    std::size_t m_;
    std::vector<Rational> d_;
    std::vector<std::vector<Rational>> t_;
    std::vector<std::size_t> basic_;
    std::vector<std::size_t> nonbasic_;
    std::vector<Kind> kind_;
    Rational obj_d_;
    std::vector<Rational> obj_;
    std::size_t pivots_ = 0;
    bool aux_blocked_ = false;
};

}  // namespace detail

inline LPResult simplex_solve(const LPInstance& lp) {
    const auto rows = normalized_rows(lp);
    detail::Dictionary dict(rows, lp.num_vars);
    LPResult res;
    if (auto cert = dict.eliminate()) {
        res.status = LPStatus::Infeasible;
        res.certificate = std::move(*cert);
        res.pivots = dict.pivots();
        return res;
    }
    if (!dict.primal_feasible()) {
        dict.add_auxiliary();
        dict.set_objective({}, true);
        dict.enter_auxiliary();
        dict.optimize(true);
        if (dict.objective_value() > 0) {
            res.status = LPStatus::Infeasible;
            res.certificate = dict.certificate();
            res.pivots = dict.pivots();
            return res;
        }
    }
    dict.retire_auxiliary();
    res.status = LPStatus::Optimal;
    if (!lp.objective.empty()) {
        dict.set_objective(lp.objective, false);
        if (!dict.optimize(false)) res.status = LPStatus::Unbounded;
    }
    res.point = dict.point();
    for (std::size_t j = 0; j < lp.objective.size(); ++j) res.objective_value += lp.objective[j] * res.point[j];
    res.pivots = dict.pivots();
    return res;
}

}  // namespace parentham
