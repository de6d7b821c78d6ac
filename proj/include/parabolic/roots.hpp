#pragma once

// Root-space data of u(n) relative to the diagonal torus, and the map
// X -> Ad_A X - X whose behaviour on root spaces controls the rank of the
// vertical frame on representation varieties.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "parabolic/lie_core.hpp"

namespace parabolic {

/// One root alpha_jk(Y) = i (y_j - y_k), j != k, with root vector E_jk.
struct Root {
  Index j;
  Index k;
  Complex value;
};

struct RootDatum {
  AntiHermitian torus_point;
  std::vector<Root> roots;
  Index zero_root_multiplicity = 0;

  /// The complex root vector E_jk.
  ComplexMatrix root_vector(const Root& r) const {
    const Index n = torus_point.dim();
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    m(r.j, r.k) = 1.0;
    return m;
  }
};

/// Split a complex matrix Z = P + iQ with P, Q in u(n).
inline std::pair<AntiHermitian, AntiHermitian> realify(const ComplexMatrix& z) {
  AntiHermitian p = AntiHermitian::skew_part(z);
  AntiHermitian q = AntiHermitian::skew_part(-kI * z);
  return {std::move(p), std::move(q)};
}

/// The realification (P, Q) of E_jk written in the stored basis:
/// E_jk = (v_jk - i u_jk)/sqrt2 for j > k and E_jk = -(v_kj + i u_kj)/sqrt2 for j < k.
inline std::pair<AntiHermitian, AntiHermitian> root_vector_realification(const Root& r,
                                                                         const LieBasis& basis) {
  const double s = 1.0 / std::sqrt(2.0);
  if (r.j > r.k) return {s * basis.v(r.j, r.k), -s * basis.u(r.j, r.k)};
  return {-s * basis.v(r.k, r.j), -s * basis.u(r.k, r.j)};
}

inline bool is_diagonal(const ComplexMatrix& m, double tol = 0.0) {
  for (Index c = 0; c < m.cols(); ++c) {
    for (Index r = 0; r < m.rows(); ++r) {
      if (r != c && std::abs(m(r, c)) > tol) return false;
    }
  }
  return true;
}

inline RootDatum root_data(const AntiHermitian& y, const LieBasis& basis) {
  detail::require_same_dim(y.dim(), basis.rank(), "root_data");
  if (!is_diagonal(y.matrix())) throw InvalidArgument("root_data: torus point must be diagonal");
  const Index n = y.dim();
  RootDatum d{y, {}, n};
  d.roots.reserve(static_cast<std::size_t>(n * (n - 1)));
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < n; ++k) {
      if (j == k) continue;
      // diagonal entries are i*y_j, so alpha_jk(Y) = i*y_j - i*y_k
      d.roots.push_back({j, k, y.matrix()(j, j) - y.matrix()(k, k)});
    }
  }
  return d;
}

/// f(X) = Ad_A X - X.
inline AntiHermitian ad_minus_id_apply(const UnitaryMatrix& a, const AntiHermitian& x) {
  return adjoint(a, x) - x;
}

/// Complex-linear extension of f, evaluated on the realification of Z.
inline ComplexMatrix ad_minus_id_apply_complexified(const UnitaryMatrix& a, const ComplexMatrix& z) {
  auto [p, q] = realify(z);
  return ad_minus_id_apply(a, p).matrix() + kI * ad_minus_id_apply(a, q).matrix();
}

using AlgebraTuple = std::vector<AntiHermitian>;

/// Product inner product on u(n)^m.
inline double tuple_inner(const AlgebraTuple& x, const AlgebraTuple& y) {
  if (x.size() != y.size()) throw DimensionMismatch("tuple_inner: tuple lengths differ");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += inner_product(x[i], y[i]);
  return s;
}

/// Real coordinates (Re, Im of every entry). Isometric for the product inner product.
inline Eigen::VectorXd flatten(const AlgebraTuple& x) {
  Index total = 0;
  for (const auto& m : x) total += 2 * m.dim() * m.dim();
  Eigen::VectorXd out(total);
  Index pos = 0;
  for (const auto& m : x) {
    for (Index c = 0; c < m.dim(); ++c) {
      for (Index r = 0; r < m.dim(); ++r) {
        out(pos++) = m.matrix()(r, c).real();
        out(pos++) = m.matrix()(r, c).imag();
      }
    }
  }
  return out;
}

inline Eigen::VectorXd singular_values(std::span<const AlgebraTuple> vectors) {
  if (vectors.empty()) throw InvalidArgument("singular_values: empty list");
  const Eigen::VectorXd first = flatten(vectors.front());
  Eigen::MatrixXd m(first.size(), static_cast<Index>(vectors.size()));
  for (std::size_t c = 0; c < vectors.size(); ++c) {
    if (vectors[c].size() != vectors.front().size()) {
      throw DimensionMismatch("independence_rank: inconsistent tuple lengths");
    }
    Eigen::VectorXd col = flatten(vectors[c]);
    if (col.size() != first.size()) {
      throw DimensionMismatch("independence_rank: inconsistent matrix dimensions");
    }
    m.col(static_cast<Index>(c)) = col;
  }
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
}

inline constexpr double kRankThreshold = 1e-8;

/// Numerical rank with a threshold relative to the largest singular value.
inline Index independence_rank(std::span<const AlgebraTuple> vectors) {
  const Eigen::VectorXd s = singular_values(vectors);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = kRankThreshold * s(0);
  return static_cast<Index>(std::count_if(s.begin(), s.end(), [cut](double x) { return x > cut; }));
}

}  // namespace parabolic
