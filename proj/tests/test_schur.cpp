#include <gtest/gtest.h>

#include "kptau/families.hpp"
#include "kptau/sampling.hpp"
#include "kptau/schur.hpp"

using namespace kptau;

namespace {

using Q = Rational;
using Z = Complex;

std::vector<std::vector<int>> parts_of(const std::vector<Partition>& ps) {
    std::vector<std::vector<int>> out;
    for (const auto& p : ps) out.push_back(p.parts);
    return out;
}

TEST(Partitions, Box) {
    EXPECT_EQ(parts_of(partitions_in_box(1, 1)), (std::vector<std::vector<int>>{{}, {1}}));
    EXPECT_EQ(parts_of(partitions_in_box(2, 2)),
              (std::vector<std::vector<int>>{{}, {1}, {2}, {1, 1}, {2, 1}, {2, 2}}));
    EXPECT_EQ(partitions_in_box(3, 4).size(), 35u);  // C(7,3)
    EXPECT_EQ(partitions_up_to_weight(12).size(), 272u);
}

TEST(Partitions, Frobenius) {
    const auto f = frobenius(make_partition({2, 1}));
    EXPECT_EQ(f.arms, std::vector<int>{1});
    EXPECT_EQ(f.legs, std::vector<int>{1});
    const auto g = frobenius(make_partition({4, 3, 3, 1}));
    EXPECT_EQ(g.arms, (std::vector<int>{3, 1, 0}));
    EXPECT_EQ(g.legs, (std::vector<int>{3, 1, 0}));
    EXPECT_EQ(frobenius(Partition{}).rank(), 0);
    for (const auto& p : partitions_up_to_weight(10)) EXPECT_EQ(from_frobenius(frobenius(p)), p) << p.str();
    EXPECT_EQ(make_partition({3, 1}).conjugate(), make_partition({2, 1, 1}));
}

TEST(SchurEval, LowOrder) {
    const Q t1(3, 5), t2(-7, 2), t3(1, 3);
    const FlowVector<Q> t({t1, t2, t3});
    EXPECT_EQ(schur_eval(Partition{}, t), Q(1));
    EXPECT_EQ(schur_eval(make_partition({1}), t), t1);
    EXPECT_EQ(schur_eval(make_partition({1, 1}), t), t1 * t1 / 2 - t2);
    EXPECT_EQ(schur_eval(make_partition({2}), t), t1 * t1 / 2 + t2);
    EXPECT_EQ(schur_eval(make_partition({3}), t), t1 * t1 * t1 / 6 + t1 * t2 + t3);
    EXPECT_EQ(schur_eval(make_partition({1, 1, 1}), t), t1 * t1 * t1 / 6 - t1 * t2 + t3);
}

TEST(SchurEval, ExpansionOfExponentialIdentity) {
    // Cauchy identity with one variable: exp(sum t_i x^i) = sum_k h_k x^k; only one-row partitions survive
    const FlowVector<Q> t({Q(1, 2), Q(1, 3), Q(-1, 4)});
    const auto h = complete_homogeneous(t, 6);
    for (int k = 0; k <= 6; ++k) EXPECT_EQ(schur_eval(k ? make_partition({k}) : Partition{}, h), h[static_cast<std::size_t>(k)]);
}

TEST(Plucker, Rational) {
    const Matrix<Q> c{{Q(3), Q(5)}};
    EXPECT_EQ(plucker_rational(c, Partition{}, 1, 1), Q(3));
    EXPECT_EQ(plucker_rational(c, make_partition({1}), 1, 1), Q(5));

    Matrix<Q> id(2, 5);
    id(0, 0) = 1;
    id(1, 1) = 1;
    EXPECT_EQ(plucker_rational(id, Partition{}, 2, 3), Q(1));

    const Matrix<Q> r{{2, -1, 4, 7}, {3, 5, -2, 1}};
    // (2,1): columns 1 - 2 + 3 = 2 and 2 - 1 + 3 = 4 (1-based), i.e. 1 and 3 zero-based
    EXPECT_EQ(plucker_rational(r, make_partition({2, 1}), 2, 2), r(0, 1) * r(1, 3) - r(0, 3) * r(1, 1));
    EXPECT_THROW(plucker_rational(r, make_partition({3}), 2, 2), BoxError);
    EXPECT_THROW(plucker_rational(r, make_partition({1, 1, 1}), 2, 2), BoxError);
}

TEST(Affine, Coordinates) {
    const Z b(0.7), d(-0.4), m(1.3);
    const auto bs = JordanSpec<Z>({{b, 1}});
    const auto ds = JordanSpec<Z>({{d, 1}});
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            EXPECT_NEAR(std::abs(affine_coord<Z>({Z(1)}, {Z(1)}, bs, ds, Matrix<Z>{{m}}, i, j) -
                                 m * std::pow(b, j) * std::pow(d, i)),
                        0.0, 1e-15);
    const auto sys = rational_family(2, 2, Matrix<Q>{{1, 2, 0, 3}, {4, 1, 1, 1}});
    const Matrix<Q> mm = big_cell_point(sys);
    EXPECT_EQ(affine_coord(sys.f, sys.g, sys.Bspec, sys.Dspec, mm, 0, 4), Q(0));
    EXPECT_EQ(affine_coord(sys.f, sys.g, sys.Bspec, sys.Dspec, mm, 0, 0),
              (Matrix<Q>::row(sys.g) * mm * Matrix<Q>::column(sys.f))(0, 0));
}

TEST(Affine, PluckerFrobenius) {
    const Z b(0.7), d(-0.4), m(1.3);
    const auto bs = JordanSpec<Z>({{b, 1}});
    const auto ds = JordanSpec<Z>({{d, 1}});
    const Matrix<Z> mm{{m}};
    EXPECT_EQ(plucker_frobenius<Z>({Z(1)}, {Z(1)}, bs, ds, mm, FrobeniusIndex{}), Z(1));
    EXPECT_NEAR(std::abs(plucker_frobenius<Z>({Z(1)}, {Z(1)}, bs, ds, mm, FrobeniusIndex{{0}, {0}}) - m), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(plucker_frobenius<Z>({Z(1)}, {Z(1)}, bs, ds, mm, FrobeniusIndex{{1, 0}, {1, 0}})), 0.0, 1e-15);
}

TEST(Affine, GiambelliCoherence) {
    Sampler s(2);
    const auto bs = s.spec(4, 2, 0.9, 0.2);
    const auto ds = s.spec(3, 2, 0.9, 0.2, false, eigenvalues_of(bs));
    const Vector<Z> f = s.matrix<Z>(3, 1).column_vector(0);
    const Vector<Z> g = s.matrix<Z>(4, 1).column_vector(0);
    const Matrix<Z> m = s.matrix<Z>(4, 3);
    const AffineTable<Z> table(f, g, bs, ds, m, 6);
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) {
            const Z hook = table.coefficient(FrobeniusIndex{{a}, {b}}, SchurConvention::standard);
            const Z expect = (b % 2 ? Z(-1) : Z(1)) * affine_coord(f, g, bs, ds, m, b, a);
            EXPECT_LT(relative_difference(hook, expect), 1e-13);
        }
    for (const auto& p : partitions_up_to_weight(9)) {
        const auto fr = frobenius(p);
        const auto r = static_cast<std::size_t>(fr.rank());
        Matrix<Z> hooks(r, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                hooks(i, j) = table.coefficient(FrobeniusIndex{{fr.arms[j]}, {fr.legs[i]}}, SchurConvention::standard);
        EXPECT_LT(relative_difference(det(hooks), table.coefficient(fr, SchurConvention::standard)), 1e-12) << p.str();
    }
}

TEST(Expansion, TrivialCutoff) {
    const auto sys = rational_family(1, 1, Matrix<Q>{{3, 5}});
    const auto terms = schur_expansion(sys, 0);
    ASSERT_EQ(terms.size(), 1u);
    EXPECT_EQ(terms[0].coefficient, Q(1));
    EXPECT_EQ(terms[0].lambda.length(), 0);
}

TEST(Expansion, RationalN1K1) {
    const Q c1(3), c2(5);
    const auto sys = rational_family(1, 1, Matrix<Q>{{c1, c2}});
    const auto terms = schur_expansion(sys, 4);
    for (const auto& term : terms) {
        if (term.lambda.weight() == 0) EXPECT_EQ(term.unnormalized, c1);
        else if (term.lambda == make_partition({1})) {
            EXPECT_EQ(term.coefficient, c2 / c1);
            EXPECT_EQ(term.unnormalized, c2);
        } else EXPECT_EQ(term.coefficient, Q(0)) << term.lambda.str();
    }
    const FlowVector<Q> t({Q(2), Q(-1, 3)});
    EXPECT_EQ(expansion_value(terms, t, true), c1 + c2 * 2);
}

TEST(Expansion, RationalFamilyExact) {
    const int n = 2, k = 3;
    const Matrix<Q> c{{2, 1, -1, 3, 5}, {1, 4, 2, 0, -1}};
    const auto sys = rational_family(n, k, c);
    const auto terms = schur_expansion(sys, n * k);
    const Q pi0 = plucker_rational(c, Partition{}, n, k);
    for (const auto& term : terms) {
        const bool in_box = term.lambda.length() <= n && term.lambda.part(0) <= k;
        const Q expect = in_box ? plucker_rational(c, term.lambda, n, k) / pi0 : Q(0);
        EXPECT_EQ(term.coefficient, expect) << term.lambda.str();
    }
    for (const auto& t : {FlowVector<Q>({Q(1, 2), Q(-3), Q(2, 7)}), FlowVector<Q>({Q(5), Q(1), Q(-1), Q(1, 9), Q(2)})}) {
        Q direct(0);
        for (const auto& lam : partitions_in_box(n, k)) direct += plucker_rational(c, lam, n, k) * schur_eval(lam, t);
        EXPECT_EQ(direct, tau_general(sys, t));
        EXPECT_EQ(expansion_value(terms, t, true), tau_general(sys, t));
    }
}

TEST(Expansion, SolitonTruncation) {
    // symmetric C = [1, 1] kills the odd one-row coefficients; C = [1, 2] does not
    const auto sym = soliton_family<Z>({Z(0.5), Z(-0.5)}, Matrix<Z>{{Z(1), Z(1)}});
    std::size_t sym_nonzero = 0;
    for (const auto& term : schur_expansion(sym.sys, 12))
        if (std::abs(term.coefficient) > 1e-15) ++sym_nonzero;
    EXPECT_EQ(sym_nonzero, 7u);

    const auto sol = soliton_family<Z>({Z(0.5), Z(-0.5)}, Matrix<Z>{{Z(1), Z(2)}});
    const auto terms = schur_expansion(sol.sys, 12);
    std::size_t nonzero = 0;
    for (const auto& term : terms)
        if (term.coefficient != Z(0)) {
            ++nonzero;
            EXPECT_LE(term.lambda.length(), 1);
        }
    EXPECT_EQ(nonzero, 13u);
    Sampler s(5);
    const Z d0 = det(Matrix<Z>(sol.sys.A * sol.sys.C.transpose()));
    for (int i = 0; i < 5; ++i) {
        const auto t = s.flow<Z>(4, 0.1);
        EXPECT_LT(relative_difference(expansion_value(terms, t), Z(tau_general(sol.sys, t) / d0)), 1e-8);
    }
}

TEST(Expansion, AsPrintedConventionDisagrees) {
    Sampler s(6);
    const auto bs = s.spec(4, 2, 0.6, 0.2);
    const auto ds = s.spec(2, 2, 0.6, 0.2, false, eigenvalues_of(bs));
    const auto sys = generic_jordan_family(bs, ds, s.matrix<Z>(2, 4), Matrix<Z>::identity(2));
    const auto t = s.flow<Z>(3, 0.1);
    const Z target = tau_general(sys, t) / det(Matrix<Z>(sys.F * sys.A * sys.C.transpose()));
    const Z standard = expansion_value(schur_expansion(sys, 16, SchurConvention::standard), t);
    const Z printed = expansion_value(schur_expansion(sys, 16, SchurConvention::as_printed), t);
    EXPECT_LT(relative_difference(standard, target), 1e-8);
    EXPECT_GT(relative_difference(printed, target), 1e-6);
}

TEST(MinimalPolynomial, Annihilation) {
    const JordanSpec<Q> bs({{Q(1), 3}, {Q(-2), 2}});
    const JordanSpec<Q> ds({{Q(1, 2), 2}, {Q(3), 1}, {Q(1, 2) + 1, 1}});
    Sampler s(7);
    const Matrix<Q> m = s.matrix<Q>(5, 4);
    const Vector<Q> f = s.matrix<Q>(4, 1).column_vector(0);
    const Vector<Q> g = s.matrix<Q>(5, 1).column_vector(0);
    EXPECT_EQ(min_poly_annihilation(f, g, bs, ds, m, 10), 0.0);

    const auto zb = s.spec(4, 2, 1.0, 0.2);
    const auto zd = s.spec(4, 3, 1.0, 0.2, false, eigenvalues_of(zb));
    EXPECT_LT(min_poly_annihilation(s.matrix<Z>(4, 1).column_vector(0), s.matrix<Z>(4, 1).column_vector(0), zb, zd,
                                    s.matrix<Z>(4, 4), 8),
              1e-12);
}

}  // namespace
