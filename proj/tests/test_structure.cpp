#include <gtest/gtest.h>

#include <random>

#include "random_structures.hpp"
#include "srcurv/catalog.hpp"
#include "srcurv/errors.hpp"
#include "srcurv/structure.hpp"

using namespace srcurv;

namespace {

using Q = Rational;

Vector<Q> vec(std::initializer_list<int> xs) {
  Vector<Q> v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (int x : xs) v(i++) = Q(x);
  return v;
}

}  // namespace

TEST(Structure, DefaultRiggingIsOrthogonalComplement) {
  auto a = builtin_exact("heis3").algebra();
  Matrix<Q> metric(3, 3);
  metric << 2, 0, 1, 0, 1, 0, 1, 0, 2;
  SubRiemannianStructure<Q> s(a, identity<Q>(3).leftCols(2), std::nullopt, metric);
  EXPECT_EQ(s.rigging().cols(), 1);
  EXPECT_TRUE(matrix_is_zero<Q>(Matrix<Q>(s.distribution().transpose() * metric * s.rigging())));
}

TEST(Structure, RejectsBadInputs) {
  auto a = builtin_exact("heis3").algebra();
  Matrix<Q> dependent(3, 2);
  dependent << 1, 2, 0, 0, 0, 0;
  EXPECT_THROW(SubRiemannianStructure<Q>(a, dependent), InputError);
  Matrix<Q> not_spd = identity<Q>(3);
  not_spd(2, 2) = Q(-1);
  EXPECT_THROW(SubRiemannianStructure<Q>(a, identity<Q>(3).leftCols(2), std::nullopt, not_spd), InputError);
  // A rigging that meets D.
  Matrix<Q> rig = identity<Q>(3).col(0);
  EXPECT_THROW(SubRiemannianStructure<Q>(a, identity<Q>(3).leftCols(2), rig), InputError);
}

TEST(Structure, AdaptedFrameIsOrthonormal) {
  for (const auto& id : builtin_ids()) {
    auto e = builtin_exact(id);
    const auto& s = e.structure;
    try {
      auto f = adapted_frame(s);
      EXPECT_EQ(f.m, s.rank()) << id;
      EXPECT_EQ(Matrix<Q>(f.vectors.transpose() * s.metric() * f.vectors), identity<Q>(s.dim())) << id;
    } catch (const InexactError&) {
      auto fs = convert_structure<double>(s);
      auto f = adapted_frame(fs);
      Eigen::MatrixXd gram = f.vectors.transpose() * fs.metric() * f.vectors;
      EXPECT_TRUE(gram.isIdentity(1e-12)) << id;
    }
  }
}

TEST(Structure, AdaptedFrameFloatModeUsesSquareRoots) {
  auto a = convert_algebra<double>(builtin_exact("heis3").algebra());
  Eigen::MatrixXd d(3, 2);
  d << 1, 1, 0, 1, 0, 0;
  SubRiemannianStructure<double> s(a, d);
  auto f = adapted_frame(s);
  EXPECT_NEAR(f.vectors.col(1).norm(), 1.0, 1e-14);
  EXPECT_NEAR(f.vectors.col(0).dot(f.vectors.col(1)), 0.0, 1e-14);
}

TEST(Structure, ExactFrameFailsWhenNormIsIrrational) {
  auto a = builtin_exact("heis3").algebra();
  Matrix<Q> d(3, 2);
  d << 1, 0, 1, 1, 0, 0;  // first vector has norm sqrt(2)
  SubRiemannianStructure<Q> s(a, d);
  EXPECT_THROW(adapted_frame(s), InexactError);
}

TEST(Rigging, LiuSussmanSatisfiesNoCondition) {
  for (const auto& id : {"liu_sussman_A", "liu_sussman_B"}) {
    auto r = rigging_conditions(builtin_exact(id).structure);
    EXPECT_FALSE(r.cond1) << id;
    EXPECT_FALSE(r.cond2) << id;
    EXPECT_FALSE(r.cond3) << id;
    EXPECT_FALSE(r.witnesses.empty());
  }
}

TEST(Rigging, CarnotRiggingSatisfiesCondition3) {
  for (const auto& id : {"heis3", "engel"}) {
    auto r = rigging_conditions(builtin_exact(id).structure);
    EXPECT_TRUE(r.cond3) << id;
  }
  std::mt19937 rng(5);
  for (int i = 0; i < 20; ++i) {
    auto r = rigging_conditions(fixtures::random_two_step(rng));
    EXPECT_TRUE(r.cond1);
    EXPECT_TRUE(r.cond3);
    EXPECT_TRUE(r.dperp_is_ideal);
  }
}

TEST(Rigging, HopfFibreIsSubalgebraButNotIdeal) {
  auto r = rigging_conditions(builtin_exact("hopf_su2").structure);
  EXPECT_TRUE(r.cond1);
  EXPECT_TRUE(r.dperp_is_subalgebra);
  EXPECT_FALSE(r.dperp_is_ideal);
  EXPECT_FALSE(r.cond3);
}

TEST(Contact, Heisenberg) {
  auto rep = contact_check(builtin_exact("heis3").structure);
  EXPECT_TRUE(rep.is_contact);
  ASSERT_TRUE(rep.reeb.has_value());
  EXPECT_EQ(*rep.reeb, vec({0, 0, 1}));
}

TEST(Contact, EllipticAndHyperbolicReebFields) {
  auto ell = contact_check(builtin_exact("sl2_elliptic").structure);
  EXPECT_TRUE(ell.is_contact);
  ASSERT_TRUE(ell.reeb.has_value());
  EXPECT_EQ(*ell.reeb, vec({0, 0, 1}));
  auto hyp = contact_check(builtin_exact("sl2_hyperbolic").structure);
  EXPECT_TRUE(hyp.is_contact);
  ASSERT_TRUE(hyp.reeb.has_value());
  EXPECT_NE((*hyp.reeb)(0), Q(0));
  EXPECT_EQ((*hyp.reeb)(1), Q(0));
  EXPECT_EQ((*hyp.reeb)(2), Q(0));
}

TEST(Contact, NotAHyperplane) {
  auto e = builtin_exact("engel");
  EXPECT_THROW(contact_check(e.structure), PreconditionError);
}

TEST(Classify3d, ContactAdmittingAndNot) {
  for (const auto& id : {"heis3", "so3", "sl2_elliptic", "sl2_hyperbolic"}) {
    auto c = classify_3d(builtin_exact(id).algebra());
    EXPECT_EQ(c.kind, Class3d::contact_admitting) << id;
    ASSERT_TRUE(c.witness.has_value());
    SubRiemannianStructure<Q> s(builtin_exact(id).algebra(), *c.witness);
    EXPECT_TRUE(contact_check(s).is_contact) << id;
  }
  for (const auto& id : {"abelian_3", "hyperbolic_plane_algebra"}) {
    auto c = classify_3d(builtin_exact(id).algebra());
    EXPECT_EQ(c.kind, Class3d::no_nonholonomic_rank2) << id;
    EXPECT_FALSE(c.witness.has_value());
    EXPECT_FALSE(c.reason.empty());
  }
  EXPECT_THROW(classify_3d(builtin_exact("engel").algebra()), InputError);
}
