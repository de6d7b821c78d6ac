#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "parabolic/parabolic_connection.hpp"
#include "parabolic/roots.hpp"

using namespace parabolic;

namespace {

AntiHermitian diagonal_point(const std::vector<double>& y) { return TorusWeight{y}.realize(); }

/// Eigenvalues of ad_Y on gl(n) from the Kronecker form I (x) Y - Y^T (x) I.
std::vector<double> ad_eigen_imag(const AntiHermitian& y) {
  const Index n = y.dim();
  ComplexMatrix k = ComplexMatrix::Zero(n * n, n * n);
  for (Index a = 0; a < n * n; ++a) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(a % n, a / n) = 1.0;
    const ComplexMatrix img = y.matrix() * e - e * y.matrix();
    for (Index b = 0; b < n * n; ++b) k(b, a) = img(b % n, b / n);
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> es(k);
  std::vector<double> out;
  for (Index i = 0; i < n * n; ++i) out.push_back(es.eigenvalues()(i).imag());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(RootData, ZeroTorusPoint) {
  const RootDatum d = root_data(AntiHermitian::zero(3), build_basis(3));
  EXPECT_EQ(d.roots.size(), 6u);
  EXPECT_EQ(d.zero_root_multiplicity, 3);
  for (const auto& r : d.roots) EXPECT_EQ(r.value, Complex(0.0));
}

TEST(RootData, RankTwoHalfTurn) {
  const double h = std::numbers::pi / 2;
  const RootDatum d = root_data(diagonal_point({h, -h}), build_basis(2));
  ASSERT_EQ(d.roots.size(), 2u);
  for (const auto& r : d.roots) {
    const Complex expected = r.j == 0 ? Complex(0, std::numbers::pi) : Complex(0, -std::numbers::pi);
    EXPECT_LT(std::abs(r.value - expected), 1e-15);
    // hand computation of [Y, E_jk]
    const ComplexMatrix e = d.root_vector(r);
    const ComplexMatrix br = d.torus_point.matrix() * e - e * d.torus_point.matrix();
    EXPECT_LT((br - expected * e).norm(), 1e-14);
  }
}

TEST(RootData, RankThreeDistinctRootsMatchAdSpectrum) {
  const AntiHermitian y = diagonal_point({1.0, 2.0, 4.0});
  const RootDatum d = root_data(y, build_basis(3));
  std::vector<double> values;
  for (const auto& r : d.roots) {
    EXPECT_EQ(r.value.real(), 0.0);
    values.push_back(r.value.imag());
  }
  for (int z = 0; z < 3; ++z) values.push_back(0.0);
  std::sort(values.begin(), values.end());
  const std::vector<double> spectrum = ad_eigen_imag(y);
  ASSERT_EQ(values.size(), spectrum.size());
  for (std::size_t i = 0; i < values.size(); ++i) EXPECT_NEAR(values[i], spectrum[i], 1e-12);
  const std::vector<double> expected = {-3, -2, -1, 0, 0, 0, 1, 2, 3};
  for (std::size_t i = 0; i < values.size(); ++i) EXPECT_NEAR(values[i], expected[i], 1e-15);
}

TEST(RootData, RootsComeInOppositePairs) {
  Rng rng(1);
  const RootDatum d = root_data(random_torus_element(4, rng), build_basis(4));
  for (const auto& r : d.roots) {
    const auto it = std::find_if(d.roots.begin(), d.roots.end(),
                                 [&](const Root& s) { return s.j == r.k && s.k == r.j; });
    ASSERT_NE(it, d.roots.end());
    EXPECT_EQ(it->value, -r.value);
  }
}

TEST(RootData, EigenRelationOnRandomPoints) {
  Rng rng(2);
  for (Index n : {2, 3, 4}) {
    for (int t = 0; t < 20; ++t) {
      const RootDatum d = root_data(random_torus_element(n, rng, 3.0), build_basis(n));
      for (const auto& r : d.roots) {
        const ComplexMatrix e = d.root_vector(r);
        const ComplexMatrix br = d.torus_point.matrix() * e - e * d.torus_point.matrix();
        EXPECT_LT((br - r.value * e).norm(), 1e-10);
      }
    }
  }
}

TEST(RootData, RejectsNonDiagonalInput) {
  const LieBasis b = build_basis(2);
  EXPECT_THROW(root_data(b.u(1, 0), b), InvalidArgument);
  EXPECT_THROW(root_data(AntiHermitian::zero(3), b), DimensionMismatch);
}

TEST(Realification, ReassemblesRootVector) {
  const LieBasis b = build_basis(3);
  const RootDatum d = root_data(AntiHermitian::zero(3), b);
  for (const auto& r : d.roots) {
    const auto [p, q] = root_vector_realification(r, b);
    EXPECT_LT((p.matrix() + kI * q.matrix() - d.root_vector(r)).norm(), 1e-15);
    const auto [p2, q2] = realify(d.root_vector(r));
    EXPECT_LT(norm(p2 - p) + norm(q2 - q), 1e-15);
  }
}

TEST(AdMinusId, IdentityGivesZero) {
  Rng rng(3);
  const AntiHermitian x = random_algebra_element(3, rng);
  EXPECT_LT(norm(ad_minus_id_apply(UnitaryMatrix::identity(3), x)), 1e-15);
}

TEST(AdMinusId, HalfTurnNegatesRootVector) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = kI;
  a(1, 1) = -kI;
  const ComplexMatrix e12 = oracle::elementary(2, 0, 1);
  const ComplexMatrix f = ad_minus_id_apply_complexified(UnitaryMatrix(a), e12);
  EXPECT_LT((f + 2.0 * e12).norm(), 1e-15);
}

TEST(AdMinusId, ScalingLawOnRootDirections) {
  Rng rng(4);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index n : {2, 3, 4}) {
    const LieBasis b = build_basis(n);
    for (int t = 0; t < 100; ++t) {
      AntiHermitian y = random_torus_element(n, rng, 5.0);
      if (norm(y) > 5.0) y *= 5.0 / norm(y);
      const UnitaryMatrix a = matrix_exp(y);
      const RootDatum d = root_data(y, b);
      for (const auto& r : d.roots) {
        const Complex c(normal(rng), normal(rng));
        const ComplexMatrix x = c * d.root_vector(r);
        const ComplexMatrix moved = a.matrix() * x * a.matrix().adjoint();
        EXPECT_LE((moved - std::exp(r.value) * x).norm(), 1e-9 * x.norm());
        const ComplexMatrix f = ad_minus_id_apply_complexified(a, x);
        EXPECT_LE((f - (std::exp(r.value) - 1.0) * x).norm(), 1e-9 * x.norm());
      }
    }
  }
}

TEST(AdMinusId, TorusFixesTorus) {
  Rng rng(5);
  const LieBasis b = build_basis(4);
  for (int t = 0; t < 20; ++t) {
    const UnitaryMatrix a = matrix_exp(random_torus_element(4, rng, 10.0));
    const AntiHermitian x = random_torus_element(4, rng, 10.0);
    EXPECT_LT(norm(ad_minus_id_apply(a, x)), 1e-13);
  }
}

TEST(IndependenceRank, ZeroTuples) {
  const std::vector<AlgebraTuple> zeros(3, AlgebraTuple(2, AntiHermitian::zero(3)));
  EXPECT_EQ(independence_rank(zeros), 0);
}

TEST(IndependenceRank, EmptyListThrows) {
  EXPECT_THROW(independence_rank(std::vector<AlgebraTuple>{}), InvalidArgument);
}

TEST(IndependenceRank, InconsistentShapesThrow) {
  const std::vector<AlgebraTuple> v = {AlgebraTuple(2, AntiHermitian::zero(2)),
                                       AlgebraTuple(3, AntiHermitian::zero(2))};
  EXPECT_THROW(independence_rank(v), DimensionMismatch);
}

TEST(IndependenceRank, GenericRankTwoTupleHasRankOne) {
  // f_rho(iI) = 0 always, so the n raw vectors span at most n - 1 dimensions
  Rng rng(6);
  const LieBasis b = build_basis(2);
  const GroupTuple rho({haar_sample(2, rng), haar_sample(2, rng)});
  std::vector<AlgebraTuple> raw;
  for (Index i = 0; i < 2; ++i) raw.push_back(vertical_vector(rho, b.e(i)));
  EXPECT_EQ(independence_rank(raw), 1);

  // singular values by hand: raw_1 = -raw_0
  const Eigen::VectorXd f0 = flatten(raw[0]);
  const Eigen::VectorXd f1 = flatten(raw[1]);
  EXPECT_LT((f0 + f1).norm(), 1e-13);
  EXPECT_GT(f0.norm(), 1e-3);
}

TEST(IndependenceRank, GenericRankMatchesEffectiveTorus) {
  Rng rng(7);
  for (Index n : {2, 3, 4, 5}) {
    const LieBasis b = build_basis(n);
    const GroupTuple rho({haar_sample(n, rng), haar_sample(n, rng), haar_sample(n, rng), haar_sample(n, rng)});
    std::vector<AlgebraTuple> raw;
    for (Index i = 0; i < n; ++i) raw.push_back(vertical_vector(rho, b.e(i)));
    EXPECT_EQ(independence_rank(raw), n - 1);
  }
}

TEST(IndependenceRank, InvariantUnderDuplicationPermutationAndScaling) {
  Rng rng(8);
  std::vector<AlgebraTuple> v;
  for (int i = 0; i < 3; ++i) {
    AlgebraTuple t;
    for (int s = 0; s < 2; ++s) t.push_back(random_algebra_element(3, rng));
    v.push_back(t);
  }
  const Index base = independence_rank(v);
  EXPECT_EQ(base, 3);
  auto dup = v;
  dup.push_back(v[1]);
  EXPECT_EQ(independence_rank(dup), base);
  auto perm = v;
  std::reverse(perm.begin(), perm.end());
  EXPECT_EQ(independence_rank(perm), base);
  auto scaled = v;
  for (auto& m : scaled[0]) m *= -1e-3;
  for (auto& m : scaled[2]) m *= 250.0;
  EXPECT_EQ(independence_rank(scaled), base);
}
