#include "parentham/expression.hpp"
#include "parentham/gadgets.hpp"
#include "parentham/pbf.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace parentham;
using testing_support::Gen;
namespace ts = testing_support;

namespace {

PseudoBoolean delta3() { return parse_expression("1 - x1 - x2 - x3 + x2*x3 + x1*x3 + x1*x2"); }

std::vector<Rational> indicator(std::size_t n, std::initializer_list<const char*> strings) {
    std::vector<Rational> t(std::size_t{1} << n);
    for (const char* s : strings) t[Assignment::parse(s).index()] = 1;
    return t;
}

}  // namespace

TEST(Assignment, IndexPutsFirstVariableInMostSignificantBit) {
    const Assignment x = Assignment::parse("100");
    EXPECT_EQ(x.index(), 4u);
    EXPECT_TRUE(x[0]);
    EXPECT_EQ(Assignment::from_index(3, 4), x);
    EXPECT_EQ(x.complement().to_string(), "011");
    EXPECT_EQ(Assignment::parse("0110").weight(), 2);
    EXPECT_THROW(Assignment::parse("01a"), FormatError);
}

TEST(Assignment, OrderIsBasisOrder) {
    EXPECT_LT(Assignment::parse("011"), Assignment::parse("100"));
    EXPECT_LT(Assignment::parse("11"), Assignment::parse("000"));
}

TEST(Eval, DeltaAtOneOneZero) { EXPECT_EQ(eval(delta3(), Assignment::parse("110")), 0); }

TEST(Eval, ZeroPolynomial) {
    const PseudoBoolean z(4);
    for (std::uint64_t i = 0; i < 16; ++i) EXPECT_EQ(eval(z, Assignment::from_index(4, i)), 0);
}

TEST(Eval, RandomCubicMatchesNaiveSummation) {
    Gen gen(101);
    const PseudoBoolean f = gen.polynomial(5, 14, 3);
    for (std::uint64_t i = 0; i < 32; ++i) {
        EXPECT_EQ(eval(f, Assignment::from_index(5, i)), ts::naive_eval(f, ts::index_bits(5, i)));
    }
}

TEST(Eval, ArityMismatchIsRejected) {
    EXPECT_THROW(eval(delta3(), Assignment::parse("11")), DimensionError);
}

TEST(EvalReal, LinearInterpolation) {
    const PseudoBoolean f = PseudoBoolean::literal(1, 0);
    EXPECT_EQ(eval_real(f, RealPoint({Rational(1, 2)})), Rational(1, 2));
}

TEST(EvalReal, DeltaAtMidpoint) {
    const Rational h(1, 2);
    EXPECT_EQ(eval_real(delta3(), RealPoint({h, h, h})), Rational(1, 4));
}

TEST(EvalReal, AgreesWithEvalOnVertices) {
    Gen gen(102);
    const PseudoBoolean f = gen.polynomial(4, 9);
    for (std::uint64_t i = 0; i < 16; ++i) {
        const auto x = Assignment::from_index(4, i);
        EXPECT_EQ(eval_real(f, RealPoint::vertex(x)), eval(f, x));
    }
}

TEST(EvalReal, CoordinateOutsideUnitIntervalIsRejected) {
    EXPECT_THROW(RealPoint({Rational(3, 2)}), DomainError);
    EXPECT_THROW(RealPoint({Rational(-1, 5)}), DomainError);
}

TEST(Add, IdentityAndComplementPair) {
    const PseudoBoolean f = delta3();
    EXPECT_EQ(add(f, PseudoBoolean(3)), f);
    const PseudoBoolean one = PseudoBoolean::literal(1, 0) + PseudoBoolean::literal(1, 0, false);
    EXPECT_EQ(one, PseudoBoolean::constant(1, 1));
}

TEST(Add, GadgetSumMatchesNaiveMerge) {
    const PseudoBoolean f = or_gadget().penalty() + and_gadget().penalty();
    std::map<std::vector<int>, Rational> got;
    for (const auto& [mask, c] : f.terms()) {
        std::vector<int> key;
        for (int k = 0; k < 64; ++k) {
            if ((mask >> k) & 1U) key.push_back(k + 1);
        }
        got[key] = c;
    }
    EXPECT_EQ(got, ts::naive_merge(or_gadget().penalty(), and_gadget().penalty()));
}

TEST(Add, ArityMismatchIsRejected) {
    EXPECT_THROW(add(PseudoBoolean(2), PseudoBoolean(3)), DimensionError);
}

TEST(Multiply, Idempotence) {
    const PseudoBoolean x = PseudoBoolean::literal(1, 0);
    EXPECT_EQ(x * x, x);
}

TEST(Multiply, DisjointProductsAreOrthogonal) {
    // x^sigma is the indicator of the single point sigma.
    auto indicator_poly = [](const char* s) {
        const Assignment a = Assignment::parse(s);
        PseudoBoolean f = PseudoBoolean::constant(a.size(), 1);
        for (std::size_t k = 0; k < a.size(); ++k) f = f * PseudoBoolean::literal(a.size(), k, a[k]);
        return f;
    };
    const auto a = indicator_poly("010");
    const auto b = indicator_poly("011");
    EXPECT_TRUE((a * b).is_zero());
    EXPECT_EQ(a * a, a);
}

TEST(Multiply, OrThenAnd) {
    EXPECT_EQ(parse_expression("(x1 + x2 - x1*x2)*x3"), parse_expression("x1*x3 + x2*x3 - x1*x2*x3"));
}

TEST(Multiply, DenseAndSparsePathsAgree) {
    Gen gen(103);
    for (int t = 0; t < 20; ++t) {
        const auto n = static_cast<std::size_t>(gen.integer(1, 6));
        const PseudoBoolean f = gen.polynomial(n, 40, 6);
        const PseudoBoolean g = gen.polynomial(n, 40, 6);
        EXPECT_EQ(multiply(f, g), detail::multiply_sparse(f, g));
        const auto tf = ts::naive_table(f), tg = ts::naive_table(g), tp = ts::naive_table(f * g);
        for (std::size_t i = 0; i < tp.size(); ++i) EXPECT_EQ(tp[i], tf[i] * tg[i]);
    }
}

TEST(Multiply, ArityMismatchIsRejected) {
    EXPECT_THROW(multiply(PseudoBoolean(1), PseudoBoolean(2)), DimensionError);
}

TEST(DisjointForm, ConstantOne) {
    EXPECT_EQ(to_disjoint_form(PseudoBoolean::constant(2, 1)), std::vector<Rational>(4, Rational(1)));
}

TEST(DisjointForm, DeltaIsIndicatorOfAllEqual) {
    EXPECT_EQ(to_disjoint_form(delta3()), indicator(3, {"000", "111"}));
    EXPECT_EQ(from_disjoint_form(indicator(3, {"000", "111"})), delta3());
}

TEST(DisjointForm, SingleVariable) {
    EXPECT_EQ(from_disjoint_form(std::vector<Rational>{0, 1}), PseudoBoolean::literal(1, 0));
}

TEST(DisjointForm, TableMatchesBruteForce) {
    Gen gen(104);
    const PseudoBoolean f = gen.polynomial(4, 10, 4);
    EXPECT_EQ(to_disjoint_form(f), ts::naive_table(f));
}

TEST(DisjointForm, RoundTripIsIdentity) {
    Gen gen(105);
    for (int t = 0; t < 100; ++t) {
        const auto n = static_cast<std::size_t>(gen.integer(1, 8));
        const PseudoBoolean f = gen.polynomial(n, static_cast<std::size_t>(gen.integer(0, 20)), 5);
        EXPECT_EQ(from_disjoint_form(to_disjoint_form(f)), f);
    }
}

TEST(DisjointForm, InterpolationMatchesNaiveMoebius) {
    Gen gen(106);
    for (int t = 0; t < 20; ++t) {
        const auto n = static_cast<std::size_t>(gen.integer(1, 6));
        std::vector<Rational> table(std::size_t{1} << n);
        for (auto& v : table) v = gen.rational();
        EXPECT_EQ(from_disjoint_form(table), ts::naive_interpolate(n, table));
    }
}

TEST(DisjointForm, ErrorPaths) {
    EXPECT_THROW(from_disjoint_form(std::vector<Rational>(3)), FormatError);
    EXPECT_THROW(from_disjoint_form(std::vector<Rational>{}), FormatError);
    EXPECT_THROW(to_disjoint_form(PseudoBoolean(21)), ResourceError);
    EXPECT_THROW(to_disjoint_form(PseudoBoolean(6), EnumerationOptions{5, 1}), ResourceError);
}

TEST(DisjointForm, ThreadedTransformsAgree) {
    Gen gen(107);
    const PseudoBoolean f = gen.polynomial(12, 60, 6);
    EXPECT_EQ(to_disjoint_form(f, {20, 4}), to_disjoint_form(f));
    EXPECT_EQ(from_disjoint_form(to_disjoint_form(f), {20, 3}), f);
}

TEST(Spin, LinearTerm) {
    SpinPolynomial expect(1);
    expect.add_term(0, Rational(1, 2));
    expect.add_term(1, Rational(-1, 2));
    EXPECT_EQ(boolean_to_spin(PseudoBoolean::literal(1, 0)), expect);
}

TEST(Spin, QuadraticTerm) {
    SpinPolynomial expect(2);
    const Rational q(1, 4);
    expect.add_term(0, q);
    expect.add_term(1, -q);
    expect.add_term(2, -q);
    expect.add_term(3, q);
    EXPECT_EQ(boolean_to_spin(PseudoBoolean::monomial(2, 3)), expect);
}

TEST(Spin, LinearFieldMapsAffinely) {
    const std::vector<Rational> h{2, Rational(-1, 3), 5};
    SpinPolynomial g(3);
    PseudoBoolean expect = PseudoBoolean::constant(3, h[0] + h[1] + h[2]);
    for (std::size_t l = 0; l < 3; ++l) {
        g.add_term(std::uint64_t{1} << l, h[l]);
        expect.add_term(std::uint64_t{1} << l, -2 * h[l]);
    }
    EXPECT_EQ(spin_to_boolean(g), expect);
}

TEST(Spin, CouplingMapsWithFactorFour) {
    SpinPolynomial g(2);
    g.add_term(3, 7);
    EXPECT_EQ(spin_to_boolean(g), parse_expression("7 - 14*x1 - 14*x2 + 28*x1*x2"));
}

TEST(Spin, RoundTripAndPointwiseAgreement) {
    Gen gen(108);
    for (int t = 0; t < 50; ++t) {
        const auto n = static_cast<std::size_t>(gen.integer(1, 8));
        const PseudoBoolean f = gen.polynomial(n, 10, 4);
        const SpinPolynomial g = boolean_to_spin(f);
        EXPECT_EQ(spin_to_boolean(g), f);
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); i += 7) {
            const auto x = Assignment::from_index(n, i);
            EXPECT_EQ(eval_spin(g, x), eval(f, x));
        }
    }
}

TEST(Kernel, DeltaHasSixSolutions) {
    const auto k = kernel(delta3());
    ASSERT_EQ(k.size(), 6u);
    for (const auto& x : k) EXPECT_TRUE(x.weight() == 1 || x.weight() == 2);
}

TEST(Kernel, ConstantOneIsEmpty) { EXPECT_TRUE(kernel(PseudoBoolean::constant(3, 1)).empty()); }

TEST(Kernel, SquaredOneBodyIsSingleton) {
    // g = 2 x1 + (1 - x2) + 3 x3 with gauge 101; the only zero is 010.
    const PseudoBoolean g = parse_expression("2*x1 + ~x2 + 3*x3");
    EXPECT_EQ(kernel(g * g), std::vector<Assignment>{Assignment::parse("010")});
}

TEST(Kernel, MatchesNaiveZeroSet) {
    Gen gen(109);
    for (int t = 0; t < 30; ++t) {
        const auto n = static_cast<std::size_t>(gen.integer(1, 8));
        const PseudoBoolean f = from_disjoint_form(gen.nonneg_table(n, 0.3));
        EXPECT_EQ(ts::index_set(kernel(f)), ts::naive_zero_set(f));
    }
}

TEST(Kernel, ArityOverCapIsRejected) { EXPECT_THROW(kernel(PseudoBoolean(25)), ResourceError); }

TEST(Nonnegativity, Delta) { EXPECT_TRUE(is_nonnegative(delta3())); }

TEST(Nonnegativity, WitnessIsReported) {
    const auto r = is_nonnegative(parse_expression("x1 - 1"));
    EXPECT_FALSE(r);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_EQ(r.witness->to_string(), "0");
    EXPECT_EQ(r.witness_value, -1);
}

TEST(Nonnegativity, RandomGadgetSums) {
    Gen gen(110);
    const auto lib = gadget_library();
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 6;
        PseudoBoolean sum(n);
        for (int k = 0; k < 3; ++k) {
            const Gadget& g = lib[static_cast<std::size_t>(gen.integer(0, 3))];
            std::vector<std::size_t> target(g.arity());
            for (auto& v : target) v = static_cast<std::size_t>(gen.integer(0, n - 1));
            sum = sum + embed_vars(g.penalty(), n, target);
        }
        const auto table = ts::naive_table(sum);
        const bool expect = std::all_of(table.begin(), table.end(), [](const Rational& v) { return v >= 0; });
        EXPECT_TRUE(expect);
        EXPECT_EQ(static_cast<bool>(is_nonnegative(sum)), expect);
    }
}

TEST(Structure, NoZeroCoefficientsAndCanonicalRationals) {
    PseudoBoolean f(2);
    f.add_term(1, Rational(2, 4));
    f.add_term(1, Rational(-1, 2));
    EXPECT_TRUE(f.is_zero());
    f.add_term(2, Rational(6, 4));
    EXPECT_EQ(f.coefficient(2).get_den(), 2);
    EXPECT_THROW(f.add_term(4, 1), DimensionError);
    EXPECT_THROW(PseudoBoolean(65), DimensionError);
}

TEST(Structure, SortedTermsAreGraded) {
    const PseudoBoolean f = parse_expression("x1*x2 + x3 + 4 + x1*x3 + x2");
    std::vector<std::uint64_t> masks;
    for (const auto& [m, c] : f.sorted_terms()) masks.push_back(m);
    EXPECT_EQ(masks, (std::vector<std::uint64_t>{0, 2, 4, 3, 5}));
    EXPECT_EQ(to_string(f), "4 + x2 + x3 + x1*x2 + x1*x3");
}

TEST(Structure, ToStringRoundTrips) {
    Gen gen(111);
    for (int t = 0; t < 40; ++t) {
        const auto n = static_cast<std::size_t>(gen.integer(1, 7));
        const PseudoBoolean f = gen.polynomial(n, 8, 4);
        EXPECT_EQ(parse_expression(to_string(f), n), f);
    }
}

TEST(Substitution, RestrictAndComplement) {
    const PseudoBoolean f = parse_expression("x1*x2 + 3*x3 - x2");
    EXPECT_EQ(restrict_variable(f, 1, true), parse_expression("x1 + 3*x2 - 1", 2));
    EXPECT_EQ(restrict_variable(f, 1, false), parse_expression("3*x2", 2));
    EXPECT_EQ(complement_variable(f, 1), parse_expression("x1*~x2 + 3*x3 - ~x2"));
    EXPECT_EQ(complement_variable(complement_variable(f, 2), 2), f);
    EXPECT_THROW(restrict_variable(f, 3, true), DomainError);
}

TEST(Substitution, EmbedIdentifiesVariables) {
    const PseudoBoolean f = parse_expression("x1*x2 + x2");
    const std::vector<std::size_t> same{0, 0};
    EXPECT_EQ(embed_vars(f, 1, same), parse_expression("2*x1"));
    const std::vector<std::size_t> bad{0, 4};
    EXPECT_THROW(embed_vars(f, 3, bad), DimensionError);
    EXPECT_THROW(with_arity(f, 1), DimensionError);
}

TEST(Properties, KernelAlgebra) {
    Gen gen(112);
    for (int t = 0; t < 100; ++t) {
        const auto n = static_cast<std::size_t>(gen.integer(1, 10));
        const PseudoBoolean f = from_disjoint_form(gen.nonneg_table(n, 0.5));
        const PseudoBoolean g = from_disjoint_form(gen.nonneg_table(n, 0.5));
        const auto kf = ts::naive_zero_set(f), kg = ts::naive_zero_set(g);
        std::set<std::uint64_t> inter, uni;
        std::set_intersection(kf.begin(), kf.end(), kg.begin(), kg.end(), std::inserter(inter, inter.end()));
        std::set_union(kf.begin(), kf.end(), kg.begin(), kg.end(), std::inserter(uni, uni.end()));
        EXPECT_EQ(ts::index_set(kernel(add(f, g))), inter);
        EXPECT_EQ(ts::index_set(kernel(multiply(f, g))), uni);
    }
}

TEST(Properties, ExtremaAtBooleanInputs) {
    Gen gen(113);
    for (int t = 0; t < 300; ++t) {
        const auto n = static_cast<std::size_t>(gen.integer(1, 8));
        const PseudoBoolean f = gen.polynomial(n, 10, 5);
        std::vector<Rational> r(n);
        for (auto& v : r) v = Rational(gen.integer(0, 12), 12);
        const auto table = ts::naive_table(f);
        const Rational v = eval_real(f, RealPoint(r));
        EXPECT_LE(*std::min_element(table.begin(), table.end()), v);
        EXPECT_GE(*std::max_element(table.begin(), table.end()), v);
    }
}
