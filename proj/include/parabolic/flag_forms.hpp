#pragma once

// Pointwise evaluators for differential forms on U(n) and the flag manifold
// U(n)/T. Every form is an evaluator (point, tangents) -> number; no global
// chart is ever built.
//
// Conventions: Maurer-Cartan form theta = g^{-1} dg (left invariant), cosets
// gT, orbit map h(gT) = g X g^{-1}. Coset tangents are given in the
// left-translated frame, i.e. the ambient tangent at g is g * xi.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "parabolic/lie_core.hpp"

namespace parabolic {

struct TangentAtGroup {
  UnitaryMatrix base;
  ComplexMatrix direction;

  /// The tangent base * xi.
  static TangentAtGroup left_translate(const UnitaryMatrix& g, const AntiHermitian& xi) {
    detail::require_same_dim(g.dim(), xi.dim(), "TangentAtGroup");
    return {g, g.matrix() * xi.matrix()};
  }
};

struct CosetPoint {
  UnitaryMatrix representative;
};

struct OrbitPoint {
  AntiHermitian value;
};

/// Symmetric multilinear form fbar on k arguments; f(X) = fbar(X, ..., X).
struct InvariantPolynomial {
  Index degree = 0;
  std::function<double(std::span<const AntiHermitian>)> multilinear;

  double operator()(std::span<const AntiHermitian> args) const {
    if (static_cast<Index>(args.size()) != degree) {
      throw InvalidArgument("InvariantPolynomial: expected " + std::to_string(degree) +
                            " arguments");
    }
    return multilinear(args);
  }
};

/// p_j = <e_j, .>, the degree-one generators of S(t^*).
inline InvariantPolynomial torus_coordinate(const LieBasis& basis, Index j) {
  AntiHermitian ej = basis.e(j);
  return {1, [ej](std::span<const AntiHermitian> x) { return inner_product(x[0], ej); }};
}

/// Symmetrized Re(i^k tr(X_1 ... X_k)) / k!. Ad-invariant on all of u(n).
inline InvariantPolynomial trace_polynomial(Index k) {
  return {k, [k](std::span<const AntiHermitian> x) {
            std::vector<std::size_t> order(x.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            Complex phase = 1.0;
            for (Index i = 0; i < k; ++i) phase *= kI;
            double total = 0.0;
            double count = 0.0;
            do {
              ComplexMatrix prod = x[order[0]].matrix();
              for (std::size_t i = 1; i < order.size(); ++i) prod = prod * x[order[i]].matrix();
              total += (phase * prod.trace()).real();
              count += 1.0;
            } while (std::next_permutation(order.begin(), order.end()));
            return total / count;
          }};
}

/// theta(v) = base^{-1} * direction.
inline AntiHermitian maurer_cartan(const TangentAtGroup& v) {
  detail::require_same_dim(v.base.dim(), v.direction.rows(), "maurer_cartan");
  ComplexMatrix x = v.base.matrix().adjoint() * v.direction;
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  if ((x + x.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvariantViolation("maurer_cartan: direction is not tangent to U(n) at base");
  }
  return AntiHermitian::skew_part(x);
}

/// (theta_1(v), ..., theta_n(v)) with theta_i = <theta, e_i>.
inline std::vector<double> theta_components(const TangentAtGroup& v, const LieBasis& basis) {
  const AntiHermitian x = maurer_cartan(v);
  detail::require_same_dim(x.dim(), basis.rank(), "theta_components");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(basis.rank()));
  for (const auto& e : basis.diagonal()) out.push_back(inner_product(x, e));
  return out;
}

/// d<e_i, theta> at p on the left-translated tangents (xi, eta).
///
/// Structure-constant formula on invariant extensions: the two derivative
/// terms vanish and d lambda(xi, eta) = -lambda([xi, eta]).
inline double dtheta_eval(Index i, const CosetPoint& p, const AntiHermitian& xi,
                          const AntiHermitian& eta, const LieBasis& basis) {
  if (i < 0 || i >= basis.rank()) {
    throw IndexOutOfRange("dtheta_eval: torus index " + std::to_string(i));
  }
  detail::require_same_dim(p.representative.dim(), basis.rank(), "dtheta_eval");
  detail::require_same_dim(xi.dim(), eta.dim(), "dtheta_eval");
  return -inner_product(basis.e(i), bracket(xi, eta));
}

/// d<X, theta> = sum_i a_i d theta_i.
inline double dtheta_weight_eval(const TorusWeight& x, const CosetPoint& p, const AntiHermitian& xi,
                                 const AntiHermitian& eta, const LieBasis& basis) {
  detail::require_same_dim(x.size(), basis.rank(), "dtheta_weight_eval");
  double s = 0.0;
  for (Index i = 0; i < basis.rank(); ++i) {
    s += x.a[static_cast<std::size_t>(i)] * dtheta_eval(i, p, xi, eta, basis);
  }
  return s;
}

/// d lambda(g xi, g eta) for a 1-form lambda on U(n), by nested central
/// differences on the chart c(s, t) = g exp(s xi) exp(t eta), whose coordinate
/// fields commute: d lambda(d_s, d_t) = d_s(lambda(d_t c)) - d_t(lambda(d_s c)).
inline double exterior_derivative_fd(const std::function<double(const TangentAtGroup&)>& lambda,
                                     const UnitaryMatrix& g, const AntiHermitian& xi,
                                     const AntiHermitian& eta, double step = 1e-5) {
  auto chart = [&](double s, double t) { return g * matrix_exp(s * xi) * matrix_exp(t * eta); };
  auto lambda_dt = [&](double s) {
    const ComplexMatrix vel = (chart(s, step).matrix() - chart(s, -step).matrix()) / (2.0 * step);
    return lambda({chart(s, 0.0), vel});
  };
  auto lambda_ds = [&](double t) {
    const ComplexMatrix vel = (chart(step, t).matrix() - chart(-step, t).matrix()) / (2.0 * step);
    return lambda({chart(0.0, t), vel});
  };
  return (lambda_dt(step) - lambda_dt(-step)) / (2.0 * step) -
         (lambda_ds(step) - lambda_ds(-step)) / (2.0 * step);
}

/// Curvature of theta_T = sum theta_i e_i as an evaluator on pairs of tangents at the same base.
inline auto torus_curvature(const LieBasis& basis) {
  return [basis](const TangentAtGroup& v1, const TangentAtGroup& v2) {
    const AntiHermitian x = maurer_cartan(v1);
    const AntiHermitian y = maurer_cartan(v2);
    const AntiHermitian tx = project_to_torus(x, basis);
    const AntiHermitian ty = project_to_torus(y, basis);
    // d theta_T(v1, v2) = -theta_T([v1~, v2~]), plus 1/2 [theta_T, theta_T](v1, v2)
    return -project_to_torus(bracket(x, y), basis) + bracket(tx, ty);
  };
}

namespace detail {

/// Perfect matchings of {0..m-1} as ordered pairs (a < b), each with the sign
/// of the permutation (a_1 b_1 a_2 b_2 ...).
inline void enumerate_matchings(std::vector<int>& free_slots,
                                std::vector<std::pair<int, int>>& current, int sign,
                                const std::function<void(const std::vector<std::pair<int, int>>&, int)>& visit) {
  if (free_slots.empty()) {
    visit(current, sign);
    return;
  }
  const int first = free_slots.front();
  for (std::size_t idx = 1; idx < free_slots.size(); ++idx) {
    const int partner = free_slots[idx];
    std::vector<int> rest;
    rest.reserve(free_slots.size() - 2);
    for (std::size_t t = 1; t < free_slots.size(); ++t) {
      if (t != idx) rest.push_back(free_slots[t]);
    }
    current.emplace_back(first, partner);
    // moving `partner` next to `first` crosses idx-1 remaining slots
    const int s = (idx - 1) % 2 == 0 ? sign : -sign;
    enumerate_matchings(rest, current, s, visit);
    current.pop_back();
  }
}

inline double factorial(Index k) {
  double f = 1.0;
  for (Index i = 2; i <= k; ++i) f *= static_cast<double>(i);
  return f;
}

}  // namespace detail

/// f(Omega)(v_1, ..., v_2k) = 2^{-k} sum_{sigma in S_2k} sgn(sigma)
///     fbar(Omega(v_s1, v_s2), ..., Omega(v_s(2k-1), v_s2k)).
/// Evaluated as k! times the signed sum over perfect matchings, which is equal
/// for symmetric fbar and antisymmetric Omega. For k = 1 this is Omega(v_1, v_2).
template <class Tangent, class Curvature>
double chern_weil_eval(const InvariantPolynomial& f, Curvature&& curvature,
                       std::span<const Tangent> vectors) {
  const Index k = f.degree;
  if (static_cast<Index>(vectors.size()) != 2 * k) {
    throw InvalidArgument("chern_weil_eval: degree " + std::to_string(k) + " needs " +
                          std::to_string(2 * k) + " vectors, got " +
                          std::to_string(vectors.size()));
  }
  const int m = static_cast<int>(vectors.size());
  std::vector<std::vector<AntiHermitian>> omega(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    omega[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(m));
    for (int b = a + 1; b < m; ++b) {
      omega[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          curvature(vectors[static_cast<std::size_t>(a)], vectors[static_cast<std::size_t>(b)]);
    }
  }
  std::vector<int> slots(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) slots[static_cast<std::size_t>(a)] = a;
  std::vector<std::pair<int, int>> current;
  std::vector<AntiHermitian> args(static_cast<std::size_t>(k));
  double total = 0.0;
  detail::enumerate_matchings(slots, current, 1,
                              [&](const std::vector<std::pair<int, int>>& pairs, int sign) {
                                for (std::size_t t = 0; t < pairs.size(); ++t) {
                                  args[t] = omega[static_cast<std::size_t>(pairs[t].first)]
                                                 [static_cast<std::size_t>(pairs[t].second)];
                                }
                                total += sign * f(args);
                              });
  return detail::factorial(k) * total;
}

/// omega_KKS at P on fundamental vectors Y1#, Y2#: <P, [Y1, Y2]>.
inline double kks_eval(const OrbitPoint& p, const AntiHermitian& y1, const AntiHermitian& y2) {
  detail::require_same_dim(p.value.dim(), y1.dim(), "kks_eval");
  detail::require_same_dim(y1.dim(), y2.dim(), "kks_eval");
  return inner_product(p.value, bracket(y1, y2));
}

/// h(gT) = g X g^{-1}.
inline OrbitPoint orbit_map(const CosetPoint& p, const AntiHermitian& x) {
  return {adjoint(p.representative, x)};
}

/// dh at gT applied to the tangent g * xi: five-point central difference of
/// s -> h(g exp(s xi)).
inline ComplexMatrix orbit_differential(const CosetPoint& p, const AntiHermitian& x,
                                        const AntiHermitian& xi, double step = 1e-3) {
  auto at = [&](double s) {
    return orbit_map({p.representative * matrix_exp(s * xi)}, x).value.matrix();
  };
  return (-at(2 * step) + 8.0 * at(step) - 8.0 * at(-step) + at(-2 * step)) / (12.0 * step);
}

/// Minimum-norm Y with [Y, P] = tangent (the fundamental vector Y# of the
/// adjoint action equals tangent at P).
inline AntiHermitian fundamental_preimage(const OrbitPoint& p, const ComplexMatrix& tangent,
                                          const LieBasis& basis) {
  const auto elements = basis.all();
  const Index dim = static_cast<Index>(elements.size());
  const AntiHermitian t = AntiHermitian::skew_part(tangent);
  Eigen::MatrixXd ad(dim, dim);
  for (Index c = 0; c < dim; ++c) {
    ad.col(c) = coordinates(bracket(elements[static_cast<std::size_t>(c)], p.value), basis);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(ad);
  cod.setThreshold(1e-10);
  return from_coordinates(cod.solve(coordinates(t, basis)), basis);
}

struct PullbackTerms {
  double kks = 0.0;     // h^*(omega_KKS)(xi, eta)
  double dtheta = 0.0;  // d<X, theta>(xi, eta)
  double residual() const { return kks + dtheta; }
  double scale() const { return std::max({1.0, std::abs(kks), std::abs(dtheta)}); }
};

/// Both sides of h^* omega_KKS = -d<X, theta> at gT, computed independently:
/// the KKS side through the numerical differential of h and the fundamental
/// vector preimages, the theta side through dtheta_eval.
inline PullbackTerms pullback_terms(const TorusWeight& x, const UnitaryMatrix& g,
                                    const AntiHermitian& xi, const AntiHermitian& eta,
                                    const LieBasis& basis) {
  const CosetPoint p{g};
  const AntiHermitian xm = x.realize();
  const OrbitPoint pt = orbit_map(p, xm);
  const AntiHermitian y1 = fundamental_preimage(pt, orbit_differential(p, xm, xi), basis);
  const AntiHermitian y2 = fundamental_preimage(pt, orbit_differential(p, xm, eta), basis);
  return {kks_eval(pt, y1, y2), dtheta_weight_eval(x, p, xi, eta, basis)};
}

inline double pullback_residual(const TorusWeight& x, const UnitaryMatrix& g,
                                const AntiHermitian& xi, const AntiHermitian& eta,
                                const LieBasis& basis) {
  return pullback_terms(x, g, xi, eta, basis).residual();
}

/// Integral of theta_j along a curve in U(n), composite Simpson on `panels`
/// (rounded up to even) with the velocity from a five-point difference.
inline double theta_line_integral(Index j, const std::function<UnitaryMatrix(double)>& curve,
                                  double t0, double t1, const LieBasis& basis,
                                  int panels = 10000) {
  if (j < 0 || j >= basis.rank()) throw IndexOutOfRange("theta_line_integral: index");
  if (panels % 2 != 0) ++panels;
  const double h = (t1 - t0) / panels;
  const double d = 1e-4;
  auto integrand = [&](double t) {
    const ComplexMatrix vel = (-curve(t + 2 * d).matrix() + 8.0 * curve(t + d).matrix() -
                               8.0 * curve(t - d).matrix() + curve(t - 2 * d).matrix()) /
                              (12.0 * d);
    return theta_components({curve(t), vel}, basis)[static_cast<std::size_t>(j)];
  };
  double s = integrand(t0) + integrand(t1);
  for (int m = 1; m < panels; ++m) s += (m % 2 == 1 ? 4.0 : 2.0) * integrand(t0 + m * h);
  return s * h / 3.0;
}

/// Period of theta_i over the loop t -> exp(t e_i), t in [0, 2 pi].
inline double circle_integral(Index i, const LieBasis& basis) {
  const AntiHermitian e = basis.e(i);
  return theta_line_integral(
      i, [&](double t) { return matrix_exp(t * e); }, 0.0, 2.0 * std::numbers::pi, basis);
}

/// Pfaffian of a real skew-symmetric matrix (LTL^T elimination with pivoting).
inline double pfaffian(Eigen::MatrixXd a) {
  const Index m = a.rows();
  if (m != a.cols()) throw DimensionMismatch("pfaffian: matrix must be square");
  if (m % 2 == 1) return 0.0;
  double pf = 1.0;
  for (Index k = 0; k + 1 < m; k += 2) {
    Index kp = k + 1;
    a.row(k).tail(m - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k, k + 1) == 0.0) return 0.0;
    pf *= a(k, k + 1);
    if (k + 2 < m) {
      const Index rest = m - k - 2;
      Eigen::VectorXd tau = a.row(k).tail(rest).transpose() / a(k, k + 1);
      Eigen::VectorXd col = a.col(k + 1).tail(rest);
      a.bottomRightCorner(rest, rest) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

/// (d<X, theta>)^N on the orthonormal coset frame at p divided by the frame
/// volume, N = n(n-1)/2. Computed as N! Pf(M) with M_ab = d<X,theta>(f_a, f_b).
inline double invariant_top_ratio(const TorusWeight& x, const CosetPoint& p, const LieBasis& basis) {
  const Index n = basis.rank();
  if (n < 2) throw InvalidArgument("invariant_top_ratio: needs n >= 2");
  detail::require_same_dim(x.size(), n, "invariant_top_ratio");
  const auto frame = basis.coset_frame();
  const Index m = static_cast<Index>(frame.size());
  std::vector<AntiHermitian> translated;
  translated.reserve(frame.size());
  for (const auto& f : frame) {
    translated.push_back(maurer_cartan(TangentAtGroup::left_translate(p.representative, f)));
  }
  Eigen::MatrixXd form = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd gram(m, m);
  for (Index a = 0; a < m; ++a) {
    for (Index b = 0; b < m; ++b) {
      const auto& fa = translated[static_cast<std::size_t>(a)];
      const auto& fb = translated[static_cast<std::size_t>(b)];
      gram(a, b) = inner_product(fa, fb);
      if (a < b) {
        form(a, b) = dtheta_weight_eval(x, p, fa, fb, basis);
        form(b, a) = -form(a, b);
      }
    }
  }
  const double volume = std::sqrt(gram.determinant());
  return detail::factorial(m / 2) * pfaffian(form) / volume;
}

}  // namespace parabolic
