#include <gtest/gtest.h>

#include "srcurv/catalog.hpp"
#include "srcurv/errors.hpp"
#include "srcurv/solovev.hpp"
#include "srcurv/wagner.hpp"

using namespace srcurv;

namespace {

using Q = Rational;

Q q(int p, int d = 1) { return Q(p) / Q(d); }

WagnerResult<Q> run(const std::string& id, Q alternation = Q(1)) {
  WagnerOptions<Q> opts;
  opts.alternation = alternation;
  return wagner_iterate(builtin_exact(id).structure, opts);
}

std::vector<Q> fiber(const Tensor4<Q>& t, int x, int y, int z) {
  std::vector<Q> out;
  for (int k = 0; k < t.dim(3); ++k) out.push_back(t(x, y, z, k));
  return out;
}

bool totally_geodesic(const AdaptedStructure<Q>& s) {
  auto lc = levi_civita(s);
  auto sff = second_fundamental_form(lc, induced_connection(s, lc));
  for (int a = 0; a < s.m; ++a)
    for (int b = 0; b < s.m; ++b)
      for (int k = s.m; k < s.n; ++k)
        if (sff.h_plus(a, b, k) != 0) return false;
  return true;
}

}  // namespace

TEST(Flag, HeisenbergLayers) {
  auto f = canonical_vertical_metric(flag_decomposition(builtin_exact("heis3").structure));
  EXPECT_EQ(f.layers, (std::vector<int>{2, 3}));
  EXPECT_EQ(f.r(), 1);
  ASSERT_EQ(f.vertical_gram.size(), 1u);
  EXPECT_EQ(f.vertical_gram[0], identity<Q>(1));
}

TEST(Flag, PreconditionsOnTheDistribution) {
  // D = g
  EXPECT_THROW(flag_decomposition(SubRiemannianStructure<Q>(builtin_exact("so3").algebra(), identity<Q>(3))),
               PreconditionError);
  auto a = builtin_exact("heis3").algebra();
  Matrix<Q> d(3, 2);
  d << 1, 0, 0, 0, 0, 1;
  EXPECT_THROW(flag_decomposition(SubRiemannianStructure<Q>(a, d)), PreconditionError);
}

TEST(Flag, ScaledBracketRescalesVerticalMetric) {
  // [e1, e2] = 2 e3: Theta_0 is spanned by 2 e3, which gets unit length.
  auto a = LieAlgebra<Q>::from_terms("heis_scaled", 3, {{0, 1, 2, Q(2)}});
  auto f = canonical_vertical_metric(flag_decomposition(SubRiemannianStructure<Q>(a, identity<Q>(3).leftCols(2))));
  Matrix<Q> g = canonical_metric_algebra(f);
  EXPECT_EQ(g(2, 2), q(1, 4));
  EXPECT_EQ(g(0, 0), Q(1));
}

TEST(Flag, WedgeInnerProduct) {
  Matrix<Q> g(3, 3);
  g << 2, 0, 0, 0, 3, 0, 0, 0, 5;
  Matrix<Q> w = wedge_inner_product<Q>(g);
  ASSERT_EQ(w.rows(), 3);
  EXPECT_EQ(w(0, 0), Q(6));
  EXPECT_EQ(w(1, 1), Q(10));
  EXPECT_EQ(w(2, 2), Q(15));
}

TEST(Flag, VerticalGramIsSpdAtEveryStage) {
  for (const auto& id : {"heis3", "engel", "liu_sussman_A", "liu_sussman_B", "so3", "hopf_su2"}) {
    auto w = run(id);
    for (const auto& g : w.flag.vertical_gram) EXPECT_TRUE(is_spd<Q>(g)) << id;
  }
}

TEST(Wagner, StageShapesFollowGrowthVector) {
  for (const auto& id : {"heis3", "engel", "liu_sussman_A"}) {
    auto w = run(id);
    const auto& layers = w.flag.layers;
    ASSERT_EQ(w.stages.size(), layers.size()) << id;
    EXPECT_EQ(w.stages[0].tensor.dims(), (std::array<int, 4>{layers[0], layers[0], layers[0], layers[0]}));
    for (std::size_t k = 1; k < layers.size(); ++k) {
      EXPECT_EQ(w.stages[k].tensor.dims(), (std::array<int, 4>{layers[k], layers[k], layers[k - 1], layers[k - 1]}))
          << id;
      EXPECT_EQ(w.stages[k].connection.dims(), (std::array<int, 3>{layers[k], layers[k - 1], layers[k - 1]})) << id;
    }
  }
}

TEST(Wagner, HeisenbergIsParallelizable) {
  auto w = run("heis3");
  EXPECT_TRUE(absolute_parallelism(w));
}

TEST(Wagner, EngelFinalTensor) {
  auto w = run("engel");
  ASSERT_EQ(w.stages.size(), 3u);
  const auto& t = w.final_stage().tensor;
  EXPECT_EQ(fiber(t, 0, 1, 0), (std::vector<Q>{0, q(3, 4), 0}));
  EXPECT_EQ(fiber(t, 0, 1, 1), (std::vector<Q>{q(-3, 4), 0, 0}));
  EXPECT_EQ(fiber(t, 0, 2, 0), (std::vector<Q>{0, 0, q(-1, 4)}));
  EXPECT_EQ(fiber(t, 0, 2, 2), (std::vector<Q>{q(1, 4), 0, 0}));
  EXPECT_EQ(fiber(t, 1, 2, 1), (std::vector<Q>{0, 0, q(-1, 4)}));
  EXPECT_EQ(fiber(t, 1, 2, 2), (std::vector<Q>{0, q(1, 4), 0}));
  EXPECT_FALSE(absolute_parallelism(w));
  EXPECT_EQ(w.stages[2].domain_violations, 1);
}

TEST(Wagner, LiuSussmanStages) {
  auto w = run("liu_sussman_A");
  ASSERT_EQ(w.stages.size(), 3u);
  for (int k : {0, 1}) {
    EXPECT_EQ(fiber(w.stages[static_cast<std::size_t>(k)].tensor, 0, 1, 0), (std::vector<Q>{1, -1})) << k;
    EXPECT_EQ(fiber(w.stages[static_cast<std::size_t>(k)].tensor, 0, 1, 1), (std::vector<Q>{2, -1})) << k;
  }
  const auto& t = w.final_stage().tensor;
  EXPECT_EQ(fiber(t, 0, 1, 0), (std::vector<Q>{0, -2, 0}));
  EXPECT_EQ(fiber(t, 0, 1, 1), (std::vector<Q>{2, 0, 0}));
  EXPECT_EQ(fiber(t, 0, 2, 1), (std::vector<Q>{0, 0, 2}));
  EXPECT_EQ(fiber(t, 1, 2, 2), (std::vector<Q>{-2, -2, 0}));
}

TEST(Wagner, TensorIsSkewInTheWedgeSlot) {
  for (const auto& id : {"engel", "liu_sussman_A"}) {
    for (const auto& st : run(id).stages) {
      const auto& t = st.tensor;
      for (int a = 0; a < t.dim(0); ++a)
        for (int b = 0; b < t.dim(1); ++b)
          for (int z = 0; z < t.dim(2); ++z)
            for (int k = 0; k < t.dim(3); ++k) EXPECT_EQ(t(a, b, z, k), -t(b, a, z, k)) << id;
    }
  }
}

TEST(Wagner, AlternationFactorScalesTheCommutatorTerm) {
  auto full = run("engel", Q(1));
  auto half = run("engel", q(1, 2));
  ASSERT_EQ(half.stages.size(), full.stages.size());
  EXPECT_EQ(half.stages[0].tensor, full.stages[0].tensor);
  EXPECT_NE(half.final_stage().tensor, full.final_stage().tensor);
}

TEST(Schouten, EqualsSolovevWhenTotallyGeodesic) {
  int checked = 0;
  for (const auto& id : builtin_ids()) {
    auto e = builtin_exact(id);
    if (e.structure.rank() == e.structure.dim()) continue;
    auto s = adapt(e.structure);
    if (!totally_geodesic(s)) continue;
    ++checked;
    EXPECT_EQ(schouten_tensor(s).values, curvature_tensor(s).values) << id;
  }
  EXPECT_GE(checked, 3);
}

TEST(Schouten, DiffersOnLiuSussman) {
  auto s = adapt(builtin_exact("liu_sussman_A").structure);
  EXPECT_FALSE(totally_geodesic(s));
  EXPECT_NE(schouten_tensor(s).values, curvature_tensor(s).values);
}
