#include "parentham/gadgets.hpp"
#include "parentham/isingker.hpp"
#include "parentham/sympbf.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace parentham;
using testing_support::Gen;
namespace ts = testing_support;

namespace {

std::vector<Assignment> strings(std::initializer_list<const char*> xs) {
    std::vector<Assignment> out;
    for (const char* x : xs) out.push_back(Assignment::parse(x));
    return out;
}

std::vector<Rational> ones(std::size_t n) { return std::vector<Rational>(n, Rational(1)); }

OneBodyForm random_form(Gen& gen, std::size_t n) {
    OneBodyForm f;
    for (std::size_t k = 0; k < n; ++k) f.c.push_back(gen.coin(0.25) ? Rational(0) : gen.nonneg_rational() + 1);
    f.tau = Assignment(n, gen.bits(n));
    return f;
}

std::vector<Assignment> random_subset(Gen& gen, std::size_t n, double p) {
    std::vector<Assignment> S;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
        if (gen.coin(p)) S.push_back(Assignment::from_index(n, i));
    }
    if (S.empty()) S.push_back(Assignment::from_index(n, gen.bits(n)));
    return S;
}

// f = 0 exactly on S and f >= 1 elsewhere.
bool realizes(const PseudoBoolean& f, const std::vector<Assignment>& S) {
    const auto zero = ts::index_set(S);
    const auto table = ts::naive_table(f);
    for (std::uint64_t i = 0; i < table.size(); ++i) {
        const bool ok = zero.contains(Assignment::from_index(f.arity(), i).index()) ? table[i] == 0 : table[i] >= 1;
        if (!ok) return false;
    }
    return true;
}

}  // namespace

TEST(OneBody, LiteralsFollowTau) {
    const OneBodyForm form{{1, 0, 1}, Assignment::parse("111"), 0};
    PseudoBoolean expect(3);
    expect.add_term(0b001, 1);
    expect.add_term(0b100, 1);
    EXPECT_EQ(one_body(form), expect);

    const OneBodyForm neg{{1, 2, 3}, Assignment::parse("000"), Rational(1, 2)};
    const PseudoBoolean g = one_body(neg);
    EXPECT_EQ(g.coefficient(0), Rational(13, 2));
    EXPECT_EQ(eval(g, Assignment::parse("111")), Rational(1, 2));
    EXPECT_EQ(eval(g, Assignment::parse("000")), Rational(13, 2));
}

TEST(OneBody, Errors) {
    EXPECT_THROW(one_body({{1, 1}, Assignment::parse("1"), 0}), DimensionError);
    EXPECT_THROW(one_body({{1, -1}, Assignment::parse("11"), 0}), PreconditionError);
    EXPECT_THROW(one_body_kernel({{1, 1}, Assignment::parse("11"), -1}), PreconditionError);
}

TEST(OneBody, UnitCoefficientsCountMismatches) {
    for (std::size_t n = 1; n <= 6; ++n) {
        const Assignment tau(n, low_mask(n) & 0b101101);
        const auto table = ts::naive_table(one_body({ones(n), tau, 0}));
        std::vector<std::size_t> histogram(n + 1);
        for (std::uint64_t i = 0; i < table.size(); ++i) {
            const Assignment x = Assignment::from_index(n, i);
            // l_k(x) = 1 exactly when x_k == tau_k.
            EXPECT_EQ(table[i], Rational(static_cast<long>(n) - popcount(x.variables() ^ tau.variables())));
            ++histogram[static_cast<std::size_t>(table[i].get_num().get_si())];
        }
        for (std::size_t v = 0; v <= n; ++v) EXPECT_EQ(histogram[v], binomial(n, v).get_ui()) << n << " " << v;
    }
}

TEST(OneBodyKernel, Examples) {
    const auto k = one_body_kernel({{1, 0, 1}, Assignment::parse("111"), 0});
    EXPECT_FALSE(k.empty);
    EXPECT_EQ(k.pattern, "0*0");
    EXPECT_EQ(k.free_count(), 1u);
    EXPECT_EQ(k.members, strings({"000", "010"}));

    const auto unique = one_body_kernel({ones(4), Assignment::parse("0000"), 0});
    EXPECT_EQ(unique.members, strings({"1111"}));
    EXPECT_EQ(unique.pattern, "1111");
    EXPECT_EQ(unique.note, "unique ground state");

    const auto empty = one_body_kernel({ones(2), Assignment::parse("01"), Rational(1, 3)});
    EXPECT_TRUE(empty.empty);
    EXPECT_TRUE(empty.members.empty());
    EXPECT_NE(empty.note.find("1/3"), std::string::npos);

    const auto all = one_body_kernel({{0, 0}, Assignment::parse("10"), 0});
    EXPECT_EQ(all.members.size(), 4u);
    EXPECT_EQ(all.pattern, "**");
}

TEST(OneBodyKernel, MatchesExhaustiveZeroSet) {
    Gen gen(701);
    for (int t = 0; t < 60; ++t) {
        const auto n = static_cast<std::size_t>(gen.integer(1, 7));
        const OneBodyForm form = random_form(gen, n);
        const auto k = one_body_kernel(form);
        ASSERT_TRUE(k.enumerated);
        EXPECT_EQ(ts::index_set(k.members), ts::naive_zero_set(one_body(form)));
        EXPECT_EQ(k.members.size(), std::size_t{1} << k.free_count());
    }
}

TEST(OneBodyKernel, LargeArityIsNotEnumerated) {
    const auto k = one_body_kernel({ones(40), Assignment(40, 0), 0});
    EXPECT_FALSE(k.enumerated);
    EXPECT_TRUE(k.members.empty());
    EXPECT_EQ(k.pattern, std::string(40, '1'));
}

TEST(Gauge, FixedFormIsPositiveLiterals) {
    Gen gen(702);
    for (int t = 0; t < 40; ++t) {
        const auto n = static_cast<std::size_t>(gen.integer(1, 6));
        OneBodyForm form = random_form(gen, n);
        form.c0 = gen.nonneg_rational();
        PseudoBoolean expect = PseudoBoolean::constant(n, form.c0);
        for (std::size_t k = 0; k < n; ++k) expect.add_term(std::uint64_t{1} << k, form.c[k]);
        EXPECT_EQ(gauge_fix(form), expect);
    }
}

TEST(Gauge, RelabelIsXorOfInputs) {
    Gen gen(703);
    for (int t = 0; t < 40; ++t) {
        const auto n = static_cast<std::size_t>(gen.integer(1, 5));
        const PseudoBoolean f = gen.polynomial(n, 6);
        const std::uint64_t m = gen.bits(n);
        const PseudoBoolean g = relabel(f, m);
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
            EXPECT_EQ(eval(g, Assignment(n, v)), eval(f, Assignment(n, v ^ m)));
        }
        EXPECT_EQ(relabel(g, m), f);
    }
}

TEST(Gauge, KernelMovesWithTau) {
    Gen gen(704);
    for (int t = 0; t < 40; ++t) {
        const auto n = static_cast<std::size_t>(gen.integer(1, 6));
        const OneBodyForm form = random_form(gen, n);
        const std::uint64_t flip = ~form.tau.variables() & low_mask(n);
        std::set<std::uint64_t> moved;
        for (const auto& x : one_body_kernel(form).members) moved.insert(Assignment(n, x.variables() ^ flip).index());
        EXPECT_EQ(moved, ts::naive_zero_set(gauge_fix(form)));
    }
}

TEST(GhzQuadratic, UnitCoefficients) {
    const auto r = ghz_quadratic(3);
    EXPECT_FALSE(r.warning);
    PseudoBoolean expect(3);
    for (std::size_t k = 0; k < 3; ++k) expect.add_term(std::uint64_t{1} << k, 2);
    for (std::uint64_t m : {0b011U, 0b101U, 0b110U}) expect.add_term(m, -2);
    EXPECT_EQ(r.penalty, expect);
    EXPECT_EQ(kernel(r.penalty), strings({"000", "111"}));
    EXPECT_EQ(r.penalty.degree(), 2);
}

TEST(GhzQuadratic, ValueIsWeightTimesCoweight) {
    for (std::size_t n = 2; n <= 7; ++n) {
        const auto table = ts::naive_table(ghz_quadratic(n).penalty);
        for (std::uint64_t i = 0; i < table.size(); ++i) {
            const long w = popcount(i);
            EXPECT_EQ(table[i], Rational(w * (static_cast<long>(n) - w)));
        }
    }
}

TEST(GhzQuadratic, SameKernelAsSupportParentDifferentSpectrum) {
    const std::size_t n = 4;
    const DiagonalOperator indicator = support_parent(support(StateVector::ghz(n)));
    const auto table = ts::naive_table(ghz_quadratic(n).penalty);
    std::set<Rational> gq, sp;
    for (std::uint64_t i = 0; i < table.size(); ++i) {
        EXPECT_EQ(table[i] == 0, indicator[i] == 0);
        gq.insert(table[i]);
        sp.insert(indicator[i]);
    }
    EXPECT_EQ(sp, (std::set<Rational>{0, 1}));
    EXPECT_EQ(gq, (std::set<Rational>{0, 3, 4}));
}

TEST(GhzQuadratic, PositiveWeightsKeepTheKernel) {
    Gen gen(705);
    for (int t = 0; t < 30; ++t) {
        const auto n = static_cast<std::size_t>(gen.integer(2, 6));
        std::vector<Rational> c, a;
        for (std::size_t k = 0; k < n; ++k) {
            c.push_back(gen.nonneg_rational() + Rational(1, 2));
            a.push_back(gen.nonneg_rational() + Rational(1, 3));
        }
        const auto r = ghz_quadratic(c, a);
        EXPECT_FALSE(r.warning);
        EXPECT_EQ(ts::naive_zero_set(r.penalty), (std::set<std::uint64_t>{0, low_mask(n)}));
        EXPECT_LE(r.penalty.degree(), 2);
        for (const auto& v : ts::naive_table(r.penalty)) EXPECT_GE(v, 0);
    }
}

TEST(GhzQuadratic, WarningsAndErrors) {
    const auto r = ghz_quadratic({1, 0, 1}, ones(3));
    ASSERT_TRUE(r.warning);
    EXPECT_GT(kernel(r.penalty).size(), 2u);
    EXPECT_TRUE(ghz_quadratic(ones(3), {1, 1, 0}).warning);
    EXPECT_THROW(ghz_quadratic(ones(3), ones(2)), DimensionError);
    EXPECT_THROW(ghz_quadratic({}, {}), DomainError);
    EXPECT_THROW(ghz_quadratic({1, -1}, ones(2)), PreconditionError);
    EXPECT_THROW(ghz_quadratic(ones(2), {-1, 1}), PreconditionError);
}

TEST(SquareForm, Examples) {
    const auto r = square_form({ones(2), Assignment::parse("11"), 0});
    PseudoBoolean expect(2);
    expect.add_term(0b01, 1);
    expect.add_term(0b10, 1);
    expect.add_term(0b11, 2);
    EXPECT_EQ(r.penalty, expect);
    EXPECT_FALSE(r.warning);
    EXPECT_EQ(kernel(r.penalty), strings({"00"}));

    // Offset -1 moves the kernel onto the weight-one strings.
    const auto shifted = square_form({ones(3), Assignment::parse("111"), -1});
    EXPECT_EQ(kernel(shifted.penalty), strings({"001", "010", "100"}));

    const auto plus = square_form({ones(2), Assignment::parse("11"), 1});
    EXPECT_TRUE(kernel(plus.penalty).empty());

    EXPECT_TRUE(square_form({{1, 0}, Assignment::parse("11"), 0}).warning);
}

TEST(SquareForm, SpectrumIsSquared) {
    Gen gen(706);
    for (int t = 0; t < 30; ++t) {
        const auto n = static_cast<std::size_t>(gen.integer(1, 5));
        const OneBodyForm form = random_form(gen, n);
        const auto g = ts::naive_table(one_body(form));
        const auto sq = ts::naive_table(square_form(form).penalty);
        for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(sq[i], g[i] * g[i]);
        EXPECT_EQ(ts::naive_zero_set(square_form(form).penalty), ts::naive_zero_set(one_body(form)));
    }
}

TEST(Realizability, GhzIsQuadratic) {
    const auto r = quadratic_realizability(strings({"0000", "1111"}), 4);
    ASSERT_TRUE(r.feasible);
    EXPECT_TRUE(r.certificate.empty());
    EXPECT_TRUE(realizes(r.form(), strings({"0000", "1111"})));
    EXPECT_LE(r.form().degree(), 2);
}

TEST(Realizability, FullCubeForcesZero) {
    std::vector<Assignment> all;
    for (std::uint64_t i = 0; i < 8; ++i) all.push_back(Assignment::from_index(3, i));
    const auto r = quadratic_realizability(all, 3);
    ASSERT_TRUE(r.feasible);
    EXPECT_TRUE(r.form().is_zero());
}

TEST(Realizability, ParityIsNotQuadratic) {
    const auto S = strings({"000", "011", "101", "110"});
    const auto r = quadratic_realizability(S, 3);
    ASSERT_FALSE(r.feasible);
    ASSERT_FALSE(r.certificate.empty());
    EXPECT_TRUE(verify_realizability_certificate(S, 3, r.certificate));
    // The same multipliers do not refute the odd-weight set.
    EXPECT_FALSE(verify_realizability_certificate(strings({"001", "010", "100", "111"}), 3, r.certificate));
}

TEST(Realizability, ParityHasNoSolutionOnAHalfIntegerGrid) {
    // Coefficients in {-2, -3/2, ..., 2}; everything is scaled by 2.
    const std::set<std::uint64_t> even{0b000, 0b011, 0b101, 0b110};
    std::array<int, 7> w{};
    long checked = 0;
    bool found = false;
    const auto step = [&] {
        for (auto& v : w) {
            if (++v <= 4) return true;
            v = -4;
        }
        return false;
    };
    w.fill(-4);
    do {
        ++checked;
        bool ok = true;
        for (std::uint64_t x = 0; x < 8 && ok; ++x) {
            const int b1 = x & 1, b2 = (x >> 1) & 1, b3 = (x >> 2) & 1;
            const int f = w[0] + w[1] * b1 + w[2] * b2 + w[3] * b3 + w[4] * b1 * b2 + w[5] * b1 * b3 + w[6] * b2 * b3;
            ok = even.contains(x) ? f == 0 : f >= 2;
        }
        found = found || ok;
    } while (step());
    EXPECT_EQ(checked, 4782969);
    EXPECT_FALSE(found);
}

TEST(Realizability, Errors) {
    EXPECT_THROW(quadratic_realizability({}, 3), DomainError);
    EXPECT_THROW(quadratic_realizability(strings({"0"}), 0), DomainError);
    EXPECT_THROW(quadratic_realizability(strings({"0000000000000"}), 13), ResourceError);
    EXPECT_THROW(quadratic_realizability(strings({"00", "101"}), 3), DimensionError);
}

TEST(Realizability, SingletonsAreAlwaysRealizable) {
    for (std::uint64_t i = 0; i < 16; ++i) {
        const std::vector<Assignment> S{Assignment::from_index(4, i)};
        const auto r = quadratic_realizability(S, 4);
        ASSERT_TRUE(r.feasible);
        EXPECT_TRUE(realizes(r.form(), S));
    }
}

TEST(Properties, RandomTargetsAreSound) {
    Gen gen(707);
    int feasible = 0, infeasible = 0;
    for (int t = 0; t < 60; ++t) {
        const auto n = static_cast<std::size_t>(gen.integer(1, 4));
        const auto S = random_subset(gen, n, gen.coin() ? 0.3 : 0.6);
        const auto r = quadratic_realizability(S, n, t % 2 == 0 ? 1U : 3U);
        EXPECT_EQ(r.feasible, ts::feasible_by_vertices(realizability_lp(S, n)));
        if (r.feasible) {
            ++feasible;
            EXPECT_TRUE(realizes(r.form(), S));
        } else {
            ++infeasible;
            EXPECT_TRUE(verify_realizability_certificate(S, n, r.certificate));
        }
    }
    EXPECT_GT(feasible, 5);
    EXPECT_GT(infeasible, 5);
}

TEST(Properties, RealizableSetsAreClosedUnderIntersection) {
    Gen gen(708);
    int tested = 0;
    for (int t = 0; t < 200 && tested < 25; ++t) {
        const auto n = static_cast<std::size_t>(gen.integer(2, 4));
        const auto S1 = random_subset(gen, n, 0.5), S2 = random_subset(gen, n, 0.5);
        std::vector<Assignment> both;
        std::set_intersection(S1.begin(), S1.end(), S2.begin(), S2.end(), std::back_inserter(both));
        if (both.empty()) continue;
        const auto r1 = quadratic_realizability(S1, n), r2 = quadratic_realizability(S2, n);
        if (!r1.feasible || !r2.feasible) continue;
        ++tested;
        EXPECT_TRUE(realizes(r1.form() + r2.form(), both));
        EXPECT_TRUE(quadratic_realizability(both, n).feasible);
    }
    EXPECT_EQ(tested, 25);
}

TEST(Properties, InfeasibilityPersistsUnderGauge) {
    Gen gen(709);
    const auto S = strings({"000", "011", "101", "110"});
    for (std::uint64_t m = 0; m < 8; ++m) {
        std::vector<Assignment> moved;
        for (const auto& x : S) moved.emplace_back(3, x.variables() ^ m);
        std::sort(moved.begin(), moved.end());
        EXPECT_FALSE(quadratic_realizability(moved, 3).feasible) << m;
    }
    for (int t = 0; t < 20; ++t) {
        const auto n = static_cast<std::size_t>(gen.integer(2, 4));
        const auto T = random_subset(gen, n, 0.5);
        const std::uint64_t m = gen.bits(n);
        std::vector<Assignment> moved;
        for (const auto& x : T) moved.emplace_back(n, x.variables() ^ m);
        std::sort(moved.begin(), moved.end());
        EXPECT_EQ(quadratic_realizability(T, n).feasible, quadratic_realizability(moved, n).feasible);
    }
}
