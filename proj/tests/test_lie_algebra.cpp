#include <gtest/gtest.h>

#include <random>

#include "random_structures.hpp"
#include "srcurv/catalog.hpp"
#include "srcurv/errors.hpp"
#include "srcurv/lie_algebra.hpp"

using namespace srcurv;

namespace {

using Q = Rational;

Vector<Q> vec(std::initializer_list<int> xs) {
  Vector<Q> v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (int x : xs) v(i++) = Q(x);
  return v;
}

LieAlgebra<Q> heis3() { return builtin_exact("heis3").algebra(); }

}  // namespace

TEST(Scalar, ParsesAndFormatsRationals) {
  EXPECT_EQ(ScalarOps<Q>::parse("6/4"), Q(3) / Q(2));
  EXPECT_EQ(format_scalar(Q(3) / Q(2)), "3/2");
  EXPECT_EQ(format_scalar(Q(-4) / Q(2)), "-2");
  EXPECT_EQ(ScalarOps<Q>::parse(" -7 "), Q(-7));
  EXPECT_THROW(ScalarOps<Q>::parse("1/0"), InputError);
  EXPECT_THROW(ScalarOps<Q>::parse("0.5"), InputError);
  EXPECT_TRUE(is_rational_literal("12/5"));
  EXPECT_FALSE(is_rational_literal("1.5"));
  EXPECT_FALSE(is_rational_literal("1/-2"));
}

TEST(Scalar, FloatParseAcceptsFractions) {
  EXPECT_DOUBLE_EQ(ScalarOps<double>::parse("1/4"), 0.25);
  EXPECT_DOUBLE_EQ(ScalarOps<double>::parse("2.5e-1"), 0.25);
  EXPECT_THROW(ScalarOps<double>::parse("abc"), InputError);
  EXPECT_THROW(ScalarOps<double>::parse("inf"), InputError);
}

TEST(Scalar, ExactSquareRoots) {
  EXPECT_EQ(*ScalarOps<Q>::sqrt(Q(9) / Q(4)), Q(3) / Q(2));
  EXPECT_FALSE(ScalarOps<Q>::sqrt(Q(2)).has_value());
}

TEST(Linalg, RankAndNullSpace) {
  Matrix<Q> a(2, 3);
  a << 1, 2, 3, 2, 4, 6;
  EXPECT_EQ(srcurv::rank<Q>(a), 1);
  Matrix<Q> ns = null_space<Q>(a);
  EXPECT_EQ(ns.cols(), 2);
  EXPECT_TRUE(matrix_is_zero<Q>(Matrix<Q>(a * ns)));
}

TEST(Linalg, InverseAndSolve) {
  Matrix<Q> a(2, 2);
  a << 2, 1, 1, 1;
  Matrix<Q> inv = inverse<Q>(a);
  EXPECT_EQ(Matrix<Q>(a * inv), identity<Q>(2));
  auto x = solve<Q>(a, vec({3, 2}));
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(*x, vec({1, 1}));
}

TEST(Linalg, OrthogonalComplementUnderGram) {
  Matrix<Q> gram(3, 3);
  gram << 2, 1, 0, 1, 2, 0, 0, 0, 1;
  Matrix<Q> d = identity<Q>(3).leftCols(1);
  Matrix<Q> c = orthogonal_complement<Q>(d, gram);
  EXPECT_EQ(c.cols(), 2);
  EXPECT_TRUE(matrix_is_zero<Q>(Matrix<Q>(d.transpose() * gram * c)));
}

TEST(LieAlgebra, BracketIsBilinearAndSkew) {
  auto a = heis3();
  EXPECT_EQ(bracket(a, vec({1, 0, 0}), vec({0, 1, 0})), vec({0, 0, 1}));
  EXPECT_EQ(bracket(a, vec({0, 1, 0}), vec({1, 0, 0})), vec({0, 0, -1}));
  EXPECT_EQ(bracket(a, vec({2, 1, 5}), vec({1, 3, 0})), vec({0, 0, 5}));
}

TEST(LieAlgebra, RejectsNonAntisymmetricTensor) {
  Tensor3<Q> c({2, 2, 2});
  c(0, 1, 0) = Q(1);
  EXPECT_THROW(LieAlgebra<Q>("bad", c), InputError);
}

TEST(LieAlgebra, JacobiDefectDetectsViolation) {
  // [e1,e2]=e3, [e2,e3]=e1, [e1,e3]=e1 breaks Jacobi.
  auto a = LieAlgebra<Q>::from_terms("bad", 3, {{0, 1, 2, Q(1)}, {1, 2, 0, Q(1)}, {0, 2, 0, Q(1)}});
  EXPECT_NE(jacobi_defect(a), Q(0));
  for (const auto& id : builtin_ids()) EXPECT_EQ(jacobi_defect(builtin_exact(id).algebra()), Q(0)) << id;
}

TEST(LieAlgebra, DerivedFlagGrowthVectors) {
  auto heis = builtin_exact("heis3");
  auto f = derived_flag(heis.algebra(), heis.structure.distribution());
  EXPECT_EQ(f.growth_vector, (std::vector<int>{2, 3}));
  EXPECT_TRUE(f.bracket_generating);
  auto engel = builtin_exact("engel");
  auto g = derived_flag(engel.algebra(), engel.structure.distribution());
  EXPECT_EQ(g.growth_vector, (std::vector<int>{2, 3, 4}));
  EXPECT_EQ(g.nonholonomy_order, 2);
  auto ls = builtin_exact("liu_sussman_A");
  EXPECT_EQ(derived_flag(ls.algebra(), ls.structure.distribution()).growth_vector, (std::vector<int>{2, 3, 4}));
}

TEST(LieAlgebra, StagnatingFlagIsNotBracketGenerating) {
  auto a = heis3();
  Matrix<Q> d = identity<Q>(3).col(0);
  Matrix<Q> dd(3, 2);
  dd << 1, 0, 0, 0, 0, 1;  // span(e1, e3) is a subalgebra
  auto f = derived_flag(a, dd);
  EXPECT_FALSE(f.bracket_generating);
  (void)d;
}

TEST(LieAlgebra, LowerCentralSeries) {
  EXPECT_EQ(lower_central_series(heis3()), (std::vector<int>{3, 1, 0}));
  EXPECT_EQ(lower_central_series(builtin_exact("engel").algebra()), (std::vector<int>{4, 2, 1, 0}));
  auto so3 = lower_central_series(builtin_exact("so3").algebra());
  EXPECT_EQ(so3.back(), 3);
}

TEST(LieAlgebra, CarnotGradingOfEngel) {
  auto e = builtin_exact("engel");
  auto g = carnot_grading(e.algebra(), e.structure.distribution());
  ASSERT_TRUE(std::holds_alternative<Grading<Q>>(g));
  const auto& layers = std::get<Grading<Q>>(g).layers;
  ASSERT_EQ(layers.size(), 3u);
  EXPECT_EQ(layers[0].cols(), 2);
  EXPECT_EQ(layers[1].cols(), 1);
  EXPECT_EQ(layers[2].cols(), 1);
}

TEST(LieAlgebra, CarnotGradingRejectsNonNilpotent) {
  auto e = builtin_exact("so3");
  auto g = carnot_grading(e.algebra(), e.structure.distribution());
  ASSERT_TRUE(std::holds_alternative<GradingFailure>(g));
  EXPECT_EQ(std::get<GradingFailure>(g).kind, GradingFailureKind::not_nilpotent);
}

TEST(LieAlgebra, ChangeBasisPreservesBrackets) {
  std::mt19937 rng(0);
  for (const auto& id : {"so3", "engel", "liu_sussman_A"}) {
    auto a = builtin_exact(id).algebra();
    Matrix<Q> p = fixtures::cayley(rng, a.dim());
    auto b = change_basis(a, p, "rotated");
    for (int i = 0; i < a.dim(); ++i)
      for (int j = 0; j < a.dim(); ++j) {
        Vector<Q> lhs = p * bracket(b, b.basis_vector(i), b.basis_vector(j));
        Vector<Q> rhs = bracket(a, Vector<Q>(p.col(i)), Vector<Q>(p.col(j)));
        EXPECT_EQ(lhs, rhs) << id;
      }
    EXPECT_EQ(jacobi_defect(b), Q(0));
  }
}

TEST(LieAlgebra, StructureConstantsMetricRequiresOrthonormalFrame) {
  auto a = heis3();
  Matrix<Q> frame = identity<Q>(3);
  frame(0, 0) = Q(2);
  EXPECT_THROW(structure_constants_metric(a, frame, identity<Q>(3)), InputError);
  auto c = structure_constants_metric(a, identity<Q>(3), identity<Q>(3));
  EXPECT_EQ(c(0, 1, 2), Q(1));
  EXPECT_EQ(c(1, 0, 2), Q(-1));
}

TEST(LieAlgebra, ConvertToFloat) {
  auto a = convert_algebra<double>(builtin_exact("su2_scaled").algebra());
  EXPECT_DOUBLE_EQ(a.c(0, 1, 2), 2.0);
  EXPECT_NEAR(jacobi_defect(a), 0.0, 1e-15);
}
