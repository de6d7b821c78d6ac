#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "parabolic/parabolic_connection.hpp"

using namespace parabolic;

namespace {

GroupTuple haar_tuple(Index n, Index g, Rng& rng) {
  std::vector<UnitaryMatrix> e;
  for (Index s = 0; s < 2 * g; ++s) e.push_back(haar_sample(n, rng));
  return GroupTuple(std::move(e));
}

AlgebraTuple random_tangent(std::size_t slots, Index n, Rng& rng) {
  AlgebraTuple t;
  for (std::size_t s = 0; s < slots; ++s) t.push_back(random_algebra_element(n, rng));
  return t;
}

AntiHermitian random_t0(const LieBasis& b, Rng& rng) {
  return project_to_effective_torus(random_torus_element(b.rank(), rng, 2.0), b);
}

double tuple_distance(const AlgebraTuple& x, const AlgebraTuple& y) {
  double d = 0.0;
  for (std::size_t s = 0; s < x.size(); ++s) d += norm(x[s] - y[s]);
  return d;
}

RelationTarget target(Index n, const std::vector<double>& a) {
  return {UnitaryMatrix::identity(n), TorusWeight{a}};
}

bool is_t0(const AntiHermitian& x, double tol) {
  const ComplexMatrix& m = x.matrix();
  double off = 0.0;
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (r != c) off = std::max(off, std::abs(m(r, c)));
    }
  }
  return off <= tol && std::abs(m.trace()) <= tol;
}

}  // namespace

TEST(RelationDefect, IdentityTupleMeetsTrivialTarget) {
  const GroupTuple rho(std::vector<UnitaryMatrix>(4, UnitaryMatrix::identity(3)));
  EXPECT_EQ(relation_defect(rho, target(3, {0, 0, 0})), 0.0);
}

TEST(RelationDefect, SingleCommutatorAgainstDirectProduct) {
  const LieBasis b = build_basis(2);
  const ComplexMatrix a = oracle::expm(b.u(1, 0).matrix());
  const ComplexMatrix bm = oracle::expm(b.v(1, 0).matrix());
  const GroupTuple rho({matrix_exp(b.u(1, 0)), matrix_exp(b.v(1, 0))});
  const ComplexMatrix comm = a * bm * a.inverse() * bm.inverse();
  EXPECT_NEAR(relation_defect(rho, target(2, {0, 0})), (comm - ComplexMatrix::Identity(2, 2)).norm(), 1e-13);
  const RelationTarget t{UnitaryMatrix(-ComplexMatrix::Identity(2, 2)), TorusWeight{{0.4, -0.4}}};
  const ComplexMatrix c = -oracle::expm(TorusWeight{{0.4, -0.4}}.realize().matrix());
  EXPECT_NEAR(relation_defect(rho, t), (comm - c).norm(), 1e-13);
}

TEST(RelationDefect, GenusTwoWord) {
  Rng rng(40);
  const GroupTuple rho = haar_tuple(3, 2, rng);
  ComplexMatrix p = ComplexMatrix::Identity(3, 3);
  for (std::size_t i = 0; i < 4; i += 2) {
    const ComplexMatrix& a = rho[i].matrix();
    const ComplexMatrix& bm = rho[i + 1].matrix();
    p = p * a * bm * a.inverse() * bm.inverse();
  }
  EXPECT_LT((commutator_product(rho) - p).norm(), 1e-13);
}

TEST(RelationDefect, DimensionMismatch) {
  const GroupTuple rho(std::vector<UnitaryMatrix>(2, UnitaryMatrix::identity(2)));
  EXPECT_THROW(relation_defect(rho, target(3, {0, 0, 0})), DimensionMismatch);
  EXPECT_THROW(relation_defect(rho, RelationTarget{UnitaryMatrix::identity(2), TorusWeight{{0.0}}}),
               DimensionMismatch);
}

TEST(GroupTupleShape, RejectsOddOrEmpty) {
  EXPECT_THROW(GroupTuple(std::vector<UnitaryMatrix>{}), InvalidArgument);
  EXPECT_THROW(GroupTuple(std::vector<UnitaryMatrix>(3, UnitaryMatrix::identity(2))), InvalidArgument);
  EXPECT_THROW(GroupTuple({UnitaryMatrix::identity(2), UnitaryMatrix::identity(3)}), DimensionMismatch);
}

TEST(DefectGradient, MatchesDirectionalDerivative) {
  Rng rng(41);
  for (Index n : {2, 3}) {
    for (Index g : {1, 2}) {
      const GroupTuple rho = haar_tuple(n, g, rng);
      const RelationTarget t{haar_sample(n, rng), TorusWeight{std::vector<double>(static_cast<std::size_t>(n), 0.1)}};
      const ComplexMatrix goal = t.element();
      const AlgebraTuple grad = detail::defect_gradient(rho, goal);
      const AlgebraTuple xi = random_tangent(rho.size(), n, rng);
      const auto f = [&](double s) {
        const double d = (commutator_product(rho.moved(xi, s)) - goal).norm();
        return 0.5 * d * d;
      };
      const double h = 1e-4;
      const double fd = (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h);
      EXPECT_NEAR(tuple_inner(grad, xi), fd, 1e-8);
    }
  }
}

TEST(SolvePoint, TrivialTargetReturnsIdentity) {
  const SolveResult r = solve_point(target(3, {0, 0, 0}), 2, 1, 1e-9);
  EXPECT_EQ(r.defect, 0.0);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.point.genus(), 2);
}

TEST(SolvePoint, RankTwoGenusOne) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SolveResult r = solve_point(target(2, {0.3, -0.3}), 1, seed, 1e-9);
    EXPECT_LE(r.defect, 1e-6);
    EXPECT_NEAR(relation_defect(r.point, target(2, {0.3, -0.3})), r.defect, 1e-15);
  }
}

TEST(SolvePoint, HistoryIsMonotone) {
  const RelationTarget t{UnitaryMatrix(std::exp(Complex(0, 2 * std::numbers::pi / 3)) * ComplexMatrix::Identity(3, 3)),
                         TorusWeight{{0.2, 0.0, -0.2}}};
  const SolveResult r = solve_point(t, 2, 9, 1e-9);
  ASSERT_GE(r.history.size(), 2u);
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_LE(r.history[i], r.history[i - 1]);
  EXPECT_EQ(r.history.back(), r.defect);
}

TEST(SolvePoint, Deterministic) {
  const SolveResult a = solve_point(target(3, {0.2, 0.0, -0.2}), 1, 77, 1e-9);
  const SolveResult b = solve_point(target(3, {0.2, 0.0, -0.2}), 1, 77, 1e-9);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.point.distance(b.point), 0.0);
}

TEST(SolvePoint, InfeasibleDeterminantFails) {
  // commutators have determinant 1, the target does not
  SolverConfig cfg;
  cfg.max_iterations = 2000;
  EXPECT_THROW(solve_point(target(2, {0.3, 0.3}), 1, 3, 1e-9, cfg), NonConvergence);
  EXPECT_THROW(solve_point(target(2, {0.0, 0.0}), 0, 3, 1e-9), InvalidArgument);
}

TEST(VerticalFrame, DegenerateCases) {
  const LieBasis b1 = build_basis(1);
  EXPECT_THROW(vertical_frame(GroupTuple({UnitaryMatrix::identity(1), UnitaryMatrix::identity(1)}), b1),
               DegenerateFrame);
  const LieBasis b = build_basis(3);
  Rng rng(42);
  const GroupTuple diag({matrix_exp(random_torus_element(3, rng)), matrix_exp(random_torus_element(3, rng))});
  EXPECT_THROW(vertical_frame(diag, b), DegenerateFrame);
  EXPECT_THROW(vertical_frame(diag, build_basis(2)), DimensionMismatch);
}

TEST(VerticalFrame, SingleRotationHasRankOne) {
  const LieBasis b = build_basis(2);
  const GroupTuple rho({matrix_exp(b.u(1, 0)), UnitaryMatrix::identity(2)});
  const VerticalFrame f = vertical_frame(rho, b);
  ASSERT_EQ(f.orthonormal.size(), 1u);
  EXPECT_NEAR(tuple_inner(f.orthonormal[0], f.orthonormal[0]), 1.0, 1e-14);
  EXPECT_LT(norm(f.orthonormal[0][1]), 1e-15);
  EXPECT_GT(norm(f.orthonormal[0][0]), 0.99);
}

TEST(VerticalFrame, OrthonormalSpanningAndInvertible) {
  Rng rng(43);
  for (Index n : {2, 3, 4}) {
    const LieBasis b = build_basis(n);
    for (Index g : {1, 2}) {
      const GroupTuple rho = haar_tuple(n, g, rng);
      const VerticalFrame f = vertical_frame(rho, b);
      ASSERT_EQ(static_cast<Index>(f.orthonormal.size()), n - 1);
      for (std::size_t i = 0; i < f.orthonormal.size(); ++i) {
        for (std::size_t j = 0; j < f.orthonormal.size(); ++j) {
          EXPECT_NEAR(tuple_inner(f.orthonormal[i], f.orthonormal[j]), i == j ? 1.0 : 0.0, 1e-10);
        }
        // the preimage lies in t0 and maps onto the frame vector
        EXPECT_TRUE(is_t0(f.preimages[i], 1e-12));
        EXPECT_LT(tuple_distance(vertical_vector(rho, f.preimages[i]), f.orthonormal[i]), 1e-10);
      }
      for (const auto& r : f.raw) {
        AlgebraTuple rest = r;
        for (const auto& w : f.orthonormal) detail::axpy(rest, -tuple_inner(r, w), w);
        EXPECT_LT(std::sqrt(tuple_inner(rest, rest)), 1e-10);
      }
    }
  }
}

TEST(Connection, ReproducesEffectiveTorus) {
  Rng rng(44);
  for (Index n : {2, 3, 4}) {
    const LieBasis b = build_basis(n);
    const GroupTuple rho = haar_tuple(n, 2, rng);
    const VerticalFrame f = vertical_frame(rho, b);
    for (int t = 0; t < 10; ++t) {
      const AntiHermitian x = random_t0(b, rng);
      EXPECT_LT(norm(connection_eval(rho, vertical_vector(rho, x), f, b) - x), 1e-9);
    }
    const AntiHermitian y = b.e(0) + 2.0 * b.e(1);
    EXPECT_LT(norm(connection_eval(rho, vertical_vector(rho, y), f, b) - project_to_effective_torus(y, b)), 1e-9);
  }
}

TEST(Connection, CentreActsTrivially) {
  Rng rng(45);
  const LieBasis b = build_basis(3);
  const GroupTuple rho = haar_tuple(3, 1, rng);
  const AntiHermitian centre(kI * ComplexMatrix::Identity(3, 3));
  for (const auto& m : vertical_vector(rho, centre)) EXPECT_LT(norm(m), 1e-14);
}

TEST(Connection, HorizontalKernel) {
  Rng rng(46);
  const LieBasis b = build_basis(3);
  const GroupTuple rho = haar_tuple(3, 2, rng);
  const VerticalFrame f = vertical_frame(rho, b);
  for (int t = 0; t < 10; ++t) {
    AlgebraTuple xi = random_tangent(rho.size(), 3, rng);
    for (const auto& w : f.orthonormal) detail::axpy(xi, -tuple_inner(xi, w), w);
    EXPECT_LT(norm(connection_eval(rho, xi, f, b)), 1e-10);
  }
}

TEST(Connection, TorusEquivariance) {
  Rng rng(47);
  for (Index n : {2, 3}) {
    const LieBasis b = build_basis(n);
    const GroupTuple rho = haar_tuple(n, 2, rng);
    const UnitaryMatrix t = matrix_exp(random_torus_element(n, rng, 3.0));
    const GroupTuple moved = rho.conjugated(t);
    for (int k = 0; k < 5; ++k) {
      const AlgebraTuple xi = random_tangent(rho.size(), n, rng);
      AlgebraTuple xi_t;
      for (const auto& m : xi) xi_t.push_back(adjoint(t, m));
      const AntiHermitian w0 = connection_eval(rho, xi, vertical_frame(rho, b), b);
      const AntiHermitian w1 = connection_eval(moved, xi_t, vertical_frame(moved, b), b);
      EXPECT_LT(norm(w0 - w1), 1e-9);
    }
  }
}

TEST(Connection, IndependentOfGramSchmidtOrder) {
  Rng rng(48);
  const LieBasis b = build_basis(4);
  const GroupTuple rho = haar_tuple(4, 1, rng);
  const VerticalFrame f0 = vertical_frame(rho, b);
  const VerticalFrame f1 = vertical_frame(rho, b, {3, 1, 0, 2});
  for (int k = 0; k < 10; ++k) {
    const AlgebraTuple xi = random_tangent(rho.size(), 4, rng);
    EXPECT_LT(norm(connection_eval(rho, xi, f0, b) - connection_eval(rho, xi, f1, b)), 1e-9);
  }
  EXPECT_THROW(vertical_frame(rho, b, {0, 1}), InvalidArgument);
}

TEST(Connection, MismatchedInputs) {
  Rng rng(49);
  const LieBasis b = build_basis(2);
  const GroupTuple rho = haar_tuple(2, 1, rng);
  const GroupTuple other = haar_tuple(2, 1, rng);
  const VerticalFrame f = vertical_frame(rho, b);
  EXPECT_THROW(connection_eval(other, random_tangent(2, 2, rng), f, b), InvalidArgument);
  EXPECT_THROW(connection_eval(rho, random_tangent(3, 2, rng), f, b), DimensionMismatch);
}

TEST(Curvature, ValuedInEffectiveTorusAndAntisymmetric) {
  Rng rng(50);
  for (Index n : {2, 3}) {
    const LieBasis b = build_basis(n);
    const GroupTuple rho = haar_tuple(n, 1, rng);
    const TupleTangent xi{rho, random_tangent(rho.size(), n, rng)};
    const TupleTangent eta{rho, random_tangent(rho.size(), n, rng)};
    const AntiHermitian om = curvature_eval(xi, eta, b);
    EXPECT_TRUE(is_t0(om, 1e-6));
    EXPECT_LT(norm(om + curvature_eval(eta, xi, b)), 1e-9);
    double total = 0.0;
    for (Index i = 0; i < n; ++i) total += generator_form_eval(xi, eta, i, b);
    EXPECT_NEAR(total, 0.0, 1e-6);
  }
}

TEST(Curvature, KillsVerticalVectors) {
  Rng rng(51);
  for (Index n : {2, 3}) {
    const LieBasis b = build_basis(n);
    const GroupTuple rho = haar_tuple(n, 1, rng);
    const TupleTangent vert{rho, vertical_vector(rho, random_t0(b, rng))};
    const TupleTangent eta{rho, random_tangent(rho.size(), n, rng)};
    EXPECT_LT(norm(curvature_eval(vert, eta, b)), 1e-4);
  }
}

TEST(Curvature, DifferentBasesThrow) {
  Rng rng(52);
  const LieBasis b = build_basis(2);
  const GroupTuple r0 = haar_tuple(2, 1, rng);
  const GroupTuple r1 = haar_tuple(2, 1, rng);
  EXPECT_THROW(curvature_eval({r0, random_tangent(2, 2, rng)}, {r1, random_tangent(2, 2, rng)}, b),
               InvalidArgument);
}

TEST(EffectiveTorus, OrthonormalTraceFreeBasis) {
  for (Index n : {2, 3, 5}) {
    const LieBasis b = build_basis(n);
    const auto h = effective_torus_basis(b);
    ASSERT_EQ(static_cast<Index>(h.size()), n - 1);
    for (std::size_t i = 0; i < h.size(); ++i) {
      EXPECT_TRUE(is_t0(h[i], 1e-15));
      for (std::size_t j = 0; j < h.size(); ++j) {
        EXPECT_NEAR(oracle::trace_form(h[i].matrix(), h[j].matrix()), i == j ? 1.0 : 0.0, 1e-14);
      }
    }
  }
}
