#pragma once

// Verification suites. Each suite appends checks named "<check>[<params>]"
// to a report; tolerances can be overridden per check name (without the
// bracketed suffix). All randomness derives from one seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "parabolic/anchor.hpp"
#include "parabolic/exterior.hpp"
#include "parabolic/flag_forms.hpp"
#include "parabolic/lie_core.hpp"
#include "parabolic/pairing_engine.hpp"
#include "parabolic/parabolic_connection.hpp"
#include "parabolic/report.hpp"
#include "parabolic/roots.hpp"

namespace parabolic {

class Tolerances {
 public:
  Tolerances() = default;
  explicit Tolerances(std::map<std::string, double> overrides) : overrides_(std::move(overrides)) {}

  double operator()(const std::string& name, double fallback) const {
    auto it = overrides_.find(name);
    return it == overrides_.end() ? fallback : it->second;
  }

  const std::map<std::string, double>& overrides() const { return overrides_; }

 private:
  std::map<std::string, double> overrides_;
};

/// splitmix64 step; gives independent streams from (seed, stream).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct SuiteContext {
  Report& report;
  const Tolerances& tol;
  std::uint64_t seed = 0;

  void check(const std::string& name, const std::string& tag, double value, double fallback) {
    report.add(Check::at_most(name + "[" + tag + "]", value, tol(name, fallback)));
  }
};

inline std::string rank_tag(Index n) { return "n=" + std::to_string(n); }
inline std::string rank_genus_tag(Index n, Index g) {
  return "n=" + std::to_string(n) + ";g=" + std::to_string(g);
}

/// Regular weight with coefficients in [-bound, bound] and pairwise gaps >= min_gap.
inline TorusWeight random_regular_weight(Index n, Rng& rng, double bound = 2.0, double min_gap = 0.2) {
  std::uniform_real_distribution<double> uniform(-bound, bound);
  for (;;) {
    TorusWeight w;
    for (Index i = 0; i < n; ++i) w.a.push_back(uniform(rng));
    double gap = INFINITY;
    for (std::size_t i = 0; i < w.a.size(); ++i) {
      for (std::size_t j = i + 1; j < w.a.size(); ++j) gap = std::min(gap, std::abs(w.a[i] - w.a[j]));
    }
    if (gap >= min_gap) return w;
  }
}

inline double vandermonde_value(const TorusWeight& w) {
  double p = 1.0;
  for (std::size_t j = 1; j < w.a.size(); ++j) {
    for (std::size_t k = 0; k < j; ++k) p *= w.a[k] - w.a[j];
  }
  return p;
}

// ---------------------------------------------------------------- basis

inline void basis_suite(SuiteContext& ctx, Index n) {
  const std::string tag = rank_tag(n);
  const LieBasis basis = build_basis(n);
  const auto all = basis.all();
  Rng rng(derive_seed(ctx.seed, 100 + static_cast<std::uint64_t>(n)));

  double gram = 0.0;
  for (std::size_t a = 0; a < all.size(); ++a) {
    for (std::size_t b = 0; b < all.size(); ++b) {
      gram = std::max(gram, std::abs(inner_product(all[a], all[b]) - (a == b ? 1.0 : 0.0)));
    }
  }
  ctx.check("gram_identity", tag, gram, 1e-12);
  ctx.check("basis_count", tag, std::abs(static_cast<double>(all.size()) - static_cast<double>(n * n)), 0.0);

  double commute = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) commute = std::max(commute, norm(bracket(basis.e(i), basis.e(j))));
  }
  ctx.check("torus_commute", tag, commute, 1e-12);

  double jacobi = 0.0, ad_inv = 0.0, isometry = 0.0, unitarity = 0.0, one_param = 0.0, idem = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const AntiHermitian x = random_algebra_element(n, rng);
    const AntiHermitian y = random_algebra_element(n, rng);
    const AntiHermitian z = random_algebra_element(n, rng);
    jacobi = std::max(jacobi, norm(bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) +
                                   bracket(z, bracket(x, y))));
    ad_inv = std::max(ad_inv, std::abs(inner_product(bracket(z, x), y) + inner_product(x, bracket(z, y))));
    const UnitaryMatrix g = haar_sample(n, rng);
    isometry = std::max(isometry, std::abs(inner_product(adjoint(g, x), adjoint(g, y)) - inner_product(x, y)));
    unitarity = std::max(unitarity, UnitaryMatrix::unitarity_defect(matrix_exp(x).matrix()));
    const double s = 0.7, t = -0.3;
    one_param = std::max(one_param, (matrix_exp((s + t) * x).matrix() -
                                     (matrix_exp(s * x) * matrix_exp(t * x)).matrix()).norm());
    const AntiHermitian px = project_to_torus(x, basis);
    idem = std::max(idem, norm(project_to_torus(px, basis) - px));
  }
  ctx.check("jacobi", tag, jacobi, 1e-10);
  ctx.check("ad_invariance", tag, ad_inv, 1e-10);
  ctx.check("adjoint_isometry", tag, isometry, 1e-10);
  ctx.check("exp_unitarity", tag, unitarity, 1e-10);
  ctx.check("exp_one_parameter", tag, one_param, 1e-9);
  ctx.check("projection_idempotent", tag, idem, 1e-12);
}

// ---------------------------------------------------------------- roots

inline void roots_suite(SuiteContext& ctx, Index n, int draws = 20) {
  const std::string tag = rank_tag(n);
  const LieBasis basis = build_basis(n);
  Rng rng(derive_seed(ctx.seed, 200 + static_cast<std::uint64_t>(n)));
  std::normal_distribution<double> normal(0.0, 1.0);

  double eigen = 0.0, scaling = 0.0, count = 0.0;
  for (int trial = 0; trial < draws; ++trial) {
    const AntiHermitian y = random_torus_element(n, rng, 5.0 / std::sqrt(static_cast<double>(n)));
    const RootDatum data = root_data(y, basis);
    count = std::max(count, std::abs(static_cast<double>(data.roots.size()) - static_cast<double>(n * (n - 1))) +
                                std::abs(static_cast<double>(data.zero_root_multiplicity - n)));
    const ComplexMatrix ey = matrix_exp(y).matrix();
    for (const Root& r : data.roots) {
      const ComplexMatrix x = Complex(normal(rng), normal(rng)) * data.root_vector(r);
      const ComplexMatrix ad = y.matrix() * x - x * y.matrix();
      eigen = std::max(eigen, (ad - r.value * x).norm() / x.norm());
      const ComplexMatrix moved = ey * x * ey.adjoint();
      scaling = std::max(scaling, (moved - std::exp(r.value) * x).norm() / x.norm());
    }
  }
  ctx.check("root_eigen", tag, eigen, 1e-10);
  ctx.check("root_scaling", tag, scaling, 1e-9);
  ctx.check("root_count", tag, count, 0.0);

  double fixed = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const UnitaryMatrix t = matrix_exp(random_torus_element(n, rng, 3.0));
    for (Index i = 0; i < n; ++i) fixed = std::max(fixed, norm(ad_minus_id_apply(t, basis.e(i))));
  }
  ctx.check("torus_fixed", tag, fixed, 1e-12);

  if (n >= 2) {
    double rank_gap = 0.0, centre = 0.0;
    const AntiHermitian iI = AntiHermitian(kI * ComplexMatrix::Identity(n, n));
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<UnitaryMatrix> entries;
      for (int s = 0; s < 2; ++s) entries.push_back(haar_sample(n, rng));
      const GroupTuple rho(std::move(entries));
      std::vector<AlgebraTuple> raw;
      for (Index i = 0; i < n; ++i) raw.push_back(vertical_vector(rho, basis.e(i)));
      rank_gap = std::max(rank_gap, std::abs(static_cast<double>(independence_rank(raw) - (n - 1))));
      const AlgebraTuple fc = vertical_vector(rho, iI);
      centre = std::max(centre, std::sqrt(tuple_inner(fc, fc)));
    }
    ctx.check("effective_rank", tag, rank_gap, 0.0);
    ctx.check("centre_kernel", tag, centre, 1e-12);
  }
}

// ---------------------------------------------------------------- forms / KKS

inline void kks_suite(SuiteContext& ctx, Index n, int draws = 20) {
  const std::string tag = rank_tag(n);
  const LieBasis basis = build_basis(n);
  Rng rng(derive_seed(ctx.seed, 300 + static_cast<std::uint64_t>(n)));

  double residual = 0.0, cw = 0.0, adinv = 0.0, fd = 0.0;
  for (int trial = 0; trial < draws; ++trial) {
    const UnitaryMatrix g = haar_sample(n, rng);
    const AntiHermitian xi = random_algebra_element(n, rng);
    const AntiHermitian eta = random_algebra_element(n, rng);
    const TorusWeight x = random_regular_weight(n, rng, 1.0, 0.0);
    residual = std::max(residual, std::abs(pullback_residual(x, g, xi, eta, basis)));

    const std::vector<TangentAtGroup> pair = {TangentAtGroup::left_translate(g, xi),
                                              TangentAtGroup::left_translate(g, eta)};
    const CosetPoint p{g};
    for (Index j = 0; j < n; ++j) {
      const double lhs = chern_weil_eval<TangentAtGroup>(torus_coordinate(basis, j), torus_curvature(basis),
                                                         std::span<const TangentAtGroup>(pair));
      cw = std::max(cw, std::abs(lhs - dtheta_eval(j, p, xi, eta, basis)));
    }

    const UnitaryMatrix h = haar_sample(n, rng);
    const OrbitPoint pt = orbit_map(p, x.realize());
    const OrbitPoint moved{adjoint(h, pt.value)};
    adinv = std::max(adinv, std::abs(kks_eval(moved, adjoint(h, xi), adjoint(h, eta)) - kks_eval(pt, xi, eta)));

    const Index i = trial % n;
    auto theta_i = [&](const TangentAtGroup& v) {
      return theta_components(v, basis)[static_cast<std::size_t>(i)];
    };
    const double exact = dtheta_eval(i, p, xi, eta, basis);
    fd = std::max(fd, std::abs(exterior_derivative_fd(theta_i, g, xi, eta) - exact) /
                          std::max(1.0, std::abs(exact)));
  }
  ctx.check("pullback_residual", tag, residual, 1e-8);
  ctx.check("chern_weil_generator", tag, cw, 1e-9);
  ctx.check("kks_adjoint_invariance", tag, adinv, 1e-9);
  ctx.check("dtheta_fd_consistency", tag, fd, 1e-4);

  double law = 0.0;
  for (int trial = 0; trial < draws; ++trial) {
    const CosetPoint p{haar_sample(n, rng)};
    const TorusWeight x = random_regular_weight(n, rng);
    const TorusWeight xp = random_regular_weight(n, rng);
    const double measured = invariant_top_ratio(x, p, basis) / invariant_top_ratio(xp, p, basis);
    const double expected = vandermonde_value(x) / vandermonde_value(xp);
    law = std::max(law, std::abs(measured - expected) / std::abs(expected));
  }
  ctx.check("top_ratio_law", tag, law, 1e-7);

  const TorusWeight fixed = random_regular_weight(n, rng);
  double lo = INFINITY, hi = -INFINITY;
  for (int trial = 0; trial < 50; ++trial) {
    const double r = invariant_top_ratio(fixed, {haar_sample(n, rng)}, basis);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  ctx.check("top_ratio_constancy", tag, (hi - lo) / std::max(std::abs(hi), std::abs(lo)), 1e-8);

  double period = 0.0;
  for (Index i = 0; i < n; ++i) {
    period = std::max(period, std::abs(circle_integral(i, basis) - 2.0 * std::numbers::pi));
  }
  ctx.check("circle_period", tag, period, 1e-8);
}

// ---------------------------------------------------------------- connection

/// beta = exp(2 pi i / n) I and the traceless weight a_i = 0.2 ((n-1)/2 - i).
inline RelationTarget default_relation_target(Index n) {
  const ComplexMatrix beta =
      std::polar(1.0, 2.0 * std::numbers::pi / static_cast<double>(n)) * ComplexMatrix::Identity(n, n);
  TorusWeight w;
  for (Index i = 0; i < n; ++i) w.a.push_back(0.2 * (0.5 * static_cast<double>(n - 1) - static_cast<double>(i)));
  return {UnitaryMatrix(beta), w};
}

inline AlgebraTuple random_tuple_tangent(std::size_t slots, Index n, Rng& rng) {
  AlgebraTuple out;
  for (std::size_t s = 0; s < slots; ++s) out.push_back(random_algebra_element(n, rng));
  return out;
}

inline AntiHermitian random_effective_torus_element(const LieBasis& basis, Rng& rng) {
  return project_to_effective_torus(random_torus_element(basis.rank(), rng, 1.0), basis);
}

inline void connection_suite(SuiteContext& ctx, Index n, Index g, int points,
                             const SolverConfig& solver = {}, double solve_tol = 1e-9) {
  if (n < 2) throw InvalidArgument("connection_suite: needs n >= 2");
  const std::string tag = rank_genus_tag(n, g);
  const LieBasis basis = build_basis(n);
  const RelationTarget target = default_relation_target(n);
  const AntiHermitian iI = AntiHermitian(kI * ComplexMatrix::Identity(n, n));
  Rng rng(derive_seed(ctx.seed, 400 + static_cast<std::uint64_t>(10 * n + g)));

  double defect = 0.0, monotone = 0.0, ortho = 0.0, axiom = 0.0, horizontal = 0.0, equivariance = 0.0,
         reorder = 0.0, t_valued = 0.0, vertical = 0.0, antisym = 0.0, reconstruct = 0.0, centre = 0.0;
  for (int k = 0; k < points; ++k) {
    const SolveResult solved = solve_point(target, g, derive_seed(ctx.seed, 1000 + 97 * static_cast<std::uint64_t>(k) +
                                                                                static_cast<std::uint64_t>(10 * n + g)),
                                           solve_tol, solver);
    const GroupTuple& rho = solved.point;
    defect = std::max(defect, relation_defect(rho, target));
    for (std::size_t s = 1; s < solved.history.size(); ++s) {
      monotone = std::max(monotone, solved.history[s] - solved.history[s - 1]);
    }

    const VerticalFrame frame = vertical_frame(rho, basis);
    for (std::size_t a = 0; a < frame.orthonormal.size(); ++a) {
      for (std::size_t b = 0; b < frame.orthonormal.size(); ++b) {
        ortho = std::max(ortho, std::abs(tuple_inner(frame.orthonormal[a], frame.orthonormal[b]) -
                                         (a == b ? 1.0 : 0.0)));
      }
    }

    for (int trial = 0; trial < 3; ++trial) {
      const AntiHermitian x = random_effective_torus_element(basis, rng);
      axiom = std::max(axiom, norm(connection_eval(rho, vertical_vector(rho, x), frame, basis) - x));
    }

    AlgebraTuple xi = random_tuple_tangent(rho.size(), n, rng);
    AlgebraTuple xi_h = xi;
    for (const auto& w : frame.orthonormal) detail::axpy(xi_h, -tuple_inner(xi, w), w);
    horizontal = std::max(horizontal, norm(connection_eval(rho, xi_h, frame, basis)));

    const UnitaryMatrix t = matrix_exp(random_torus_element(n, rng, 3.0));
    const GroupTuple moved = rho.conjugated(t);
    AlgebraTuple xi_t;
    for (const auto& c : xi) xi_t.push_back(adjoint(t, c));
    const AntiHermitian w0 = connection_eval(rho, xi, frame, basis);
    equivariance = std::max(equivariance,
                            norm(connection_eval(moved, xi_t, vertical_frame(moved, basis), basis) - w0));

    std::vector<Index> reversed;
    for (Index i = n - 1; i >= 0; --i) reversed.push_back(i);
    reorder = std::max(reorder, norm(connection_eval(rho, xi, vertical_frame(rho, basis, reversed), basis) - w0));

    const AlgebraTuple eta = random_tuple_tangent(rho.size(), n, rng);
    const AntiHermitian omega = curvature_eval({rho, xi}, {rho, eta}, basis);
    t_valued = std::max(t_valued, norm(omega - project_to_torus(omega, basis)));
    antisym = std::max(antisym, norm(omega + curvature_eval({rho, eta}, {rho, xi}, basis)));
    AntiHermitian rebuilt = AntiHermitian::zero(n);
    for (Index i = 0; i < n; ++i) rebuilt += generator_form_eval({rho, xi}, {rho, eta}, i, basis) * basis.e(i);
    reconstruct = std::max(reconstruct, norm(rebuilt - omega));

    const AlgebraTuple v1 = vertical_vector(rho, random_effective_torus_element(basis, rng));
    const AlgebraTuple v2 = vertical_vector(rho, random_effective_torus_element(basis, rng));
    vertical = std::max(vertical, norm(curvature_eval({rho, v1}, {rho, v2}, basis)));
    vertical = std::max(vertical, norm(curvature_eval({rho, v1}, {rho, eta}, basis)));

    const AlgebraTuple fc = vertical_vector(rho, iI);
    centre = std::max(centre, std::sqrt(tuple_inner(fc, fc)));
  }
  ctx.check("relation_defect", tag, defect, 1e-6);
  ctx.check("solver_monotone", tag, monotone, 0.0);
  ctx.check("frame_orthonormal", tag, ortho, 1e-10);
  ctx.check("connection_axiom", tag, axiom, 1e-9);
  ctx.check("horizontal_kernel", tag, horizontal, 1e-10);
  ctx.check("t_equivariance", tag, equivariance, 1e-9);
  ctx.check("gram_schmidt_reorder", tag, reorder, 1e-9);
  ctx.check("curvature_t_valued", tag, t_valued, 1e-6);
  ctx.check("curvature_vertical", tag, vertical, 1e-4);
  ctx.check("curvature_antisymmetry", tag, antisym, 1e-9);
  ctx.check("generator_reconstruction", tag, reconstruct, 1e-12);
  ctx.check("centre_kernel", tag, centre, 1e-12);
}

// ---------------------------------------------------------------- pairing

inline nlohmann::ordered_json c1_json(const NormalizationConstant& c1) {
  nlohmann::ordered_json j;
  j["mode"] = c1.mode();
  j["value"] = c1.value;
  if (c1.provenance == NormalizationConstant::Provenance::OrbitVolume) {
    j["volume"] = c1.orbit_volume;
    j["reference"] = c1.reference.a;
  }
  return j;
}

inline PairingSection pairing_section(const IntersectionNumber& number) {
  PairingSection p;
  p.n = static_cast<long>(number.n);
  p.alpha = number.alpha.exponents();
  p.c1 = c1_json(number.c1);
  p.result = number.value();
  p.exact_numerator = numerator(number.exact).str();
  p.exact_denominator = denominator(number.exact).str();
  return p;
}

/// Cross-checks of one intersection number against the wedge expansions (n <= 4).
inline void pair_suite(SuiteContext& ctx, const IntersectionNumber& number) {
  const Index n = number.n;
  const std::string tag = rank_tag(n);
  if (n <= 4) {
    const Rational wedge = wedge_intersection_number(n, number.alpha);
    ctx.check("derivative_vs_wedge", tag, static_cast<double>(abs(wedge - number.exact)), 0.0);
    const Rational multi = multinomial_intersection_number(wedge_power_polynomial(n), number.alpha);
    ctx.check("derivative_vs_multinomial", tag, static_cast<double>(abs(multi - number.exact)), 0.0);
  }
  if (n >= 2) ctx.check("weyl_antisymmetry", tag, weyl_antisymmetry_check(n) ? 0.0 : 1.0, 0.0);
}

/// Number of multi-indices |alpha| = N where N! * intersection_number differs
/// from the multinomial coefficient of the wedge power.
inline void exactness_suite(SuiteContext& ctx, Index n) {
  const PairingPolynomial power = wedge_power_polynomial(n);
  const auto top = static_cast<unsigned>(flag_half_dimension(n));
  double mismatches = 0.0;
  for (const auto& alpha : multi_indices(static_cast<std::size_t>(n), top)) {
    const auto number = intersection_number(n, alpha, NormalizationConstant::user_supplied(1.0));
    if (number.exact != multinomial_intersection_number(power, alpha)) mismatches += 1.0;
  }
  ctx.check("derivative_exactness", rank_tag(n), mismatches, 0.0);
}

inline void weyl_suite(SuiteContext& ctx, Index max_n) {
  double failures = 0.0;
  for (Index n = 2; n <= max_n; ++n) failures += weyl_antisymmetry_check(n) ? 0.0 : 1.0;
  ctx.check("weyl_antisymmetry", "n<=" + std::to_string(max_n), failures, 0.0);
}

// ---------------------------------------------------------------- n = 2 anchor

/// Closed form 2 pi (a_1 - a_2) for the symplectic volume of the orbit.
inline double sphere_volume_closed_form(const TorusWeight& x0) {
  return 2.0 * std::numbers::pi * std::abs(x0.a.at(0) - x0.a.at(1));
}

inline void anchor_suite(SuiteContext& ctx, const TorusWeight& x0) {
  if (x0.size() != 2) throw InvalidArgument("anchor_suite: reference weight must have two entries");
  const std::string tag = "x0=" + format_double(x0.a[0]) + ";" + format_double(x0.a[1]);
  const double volume = kks_sphere_volume(x0);
  const double closed = sphere_volume_closed_form(x0);
  ctx.check("sphere_volume_closed_form", tag, std::abs(volume - closed) / closed, 1e-3);

  // the pairing orientation needs a decreasing reference weight
  TorusWeight ordered = x0;
  std::sort(ordered.a.begin(), ordered.a.end(), std::greater<>());
  const auto c1 = c1_from_orbit_volume(2, ordered, volume);
  const double predicted = intersection_number(2, MultiIndex({1, 0}), c1).value();
  const double integrated = integrate_dtheta_u2(0, ordered);
  ctx.check("anchor_agreement", tag, std::abs(predicted - integrated) / std::abs(integrated), 1e-2);
  const double other = integrate_dtheta_u2(1, ordered);
  ctx.check("anchor_total_zero", tag, std::abs(integrated + other) / std::abs(integrated), 1e-2);
}

}  // namespace parabolic
