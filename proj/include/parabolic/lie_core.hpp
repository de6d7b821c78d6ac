#pragma once

// Numerical kernels for the Lie algebra u(n) and the group U(n).
//
// Conventions used everywhere in the toolkit:
//   <X, Y> = -Re tr(XY), which is positive definite on anti-Hermitian matrices
//   and equals the Euclidean product on (Re, Im) of the entries.
//   e_i = i E_ii, u_jk = (i/sqrt2)(E_jk + E_kj), v_jk = (1/sqrt2)(E_jk - E_kj), j > k,
//   an orthonormal basis of u(n).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "parabolic/errors.hpp"

namespace parabolic {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;
using Rng = std::mt19937_64;

inline constexpr Complex kI{0.0, 1.0};

namespace tolerance {
inline constexpr double kAntiHermitian = 1e-12;
inline constexpr double kUnitary = 1e-10;
}  // namespace tolerance

namespace detail {

inline void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                            std::to_string(b));
  }
}

inline bool all_finite(const ComplexMatrix& m) {
  for (Index c = 0; c < m.cols(); ++c) {
    for (Index r = 0; r < m.rows(); ++r) {
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Element of u(n). Construction from a raw matrix validates X^† + X = 0.
class AntiHermitian {
 public:
  AntiHermitian() = default;

  explicit AntiHermitian(ComplexMatrix m) : value_(std::move(m)) {
    if (value_.rows() != value_.cols() || value_.rows() < 1) {
      throw InvariantViolation("AntiHermitian: matrix must be square with n >= 1");
    }
    if (!detail::all_finite(value_)) throw InvariantViolation("AntiHermitian: non-finite entry");
    const double scale = std::max(1.0, value_.cwiseAbs().maxCoeff());
    const double defect = (value_.adjoint() + value_).cwiseAbs().maxCoeff();
    if (defect > tolerance::kAntiHermitian * scale) {
      throw InvariantViolation("AntiHermitian: |X^† + X| = " + std::to_string(defect));
    }
  }

  /// (M - M^†)/2, exact projection onto u(n). Used to clean roundoff.
  static AntiHermitian skew_part(const ComplexMatrix& m) {
    AntiHermitian x;
    x.value_ = 0.5 * (m - m.adjoint());
    return x;
  }

  static AntiHermitian zero(Index n) {
    AntiHermitian x;
    x.value_ = ComplexMatrix::Zero(n, n);
    return x;
  }

  const ComplexMatrix& matrix() const { return value_; }
  Index dim() const { return value_.rows(); }

  AntiHermitian& operator+=(const AntiHermitian& o) {
    detail::require_same_dim(dim(), o.dim(), "AntiHermitian +");
    value_ += o.value_;
    return *this;
  }
  AntiHermitian& operator-=(const AntiHermitian& o) {
    detail::require_same_dim(dim(), o.dim(), "AntiHermitian -");
    value_ -= o.value_;
    return *this;
  }
  AntiHermitian& operator*=(double s) {
    value_ *= s;
    return *this;
  }

  friend AntiHermitian operator+(AntiHermitian a, const AntiHermitian& b) { return a += b; }
  friend AntiHermitian operator-(AntiHermitian a, const AntiHermitian& b) { return a -= b; }
  friend AntiHermitian operator*(double s, AntiHermitian a) { return a *= s; }
  friend AntiHermitian operator*(AntiHermitian a, double s) { return a *= s; }
  friend AntiHermitian operator-(AntiHermitian a) { return a *= -1.0; }

 private:
  ComplexMatrix value_;
};

/// Element of U(n). Construction validates ||U^† U - I||_F <= 1e-10.
class UnitaryMatrix {
 public:
  UnitaryMatrix() = default;

  explicit UnitaryMatrix(ComplexMatrix m) : value_(std::move(m)) {
    if (value_.rows() != value_.cols() || value_.rows() < 1) {
      throw InvariantViolation("UnitaryMatrix: matrix must be square with n >= 1");
    }
    if (!detail::all_finite(value_)) throw InvariantViolation("UnitaryMatrix: non-finite entry");
    const double defect = unitarity_defect(value_);
    if (defect > tolerance::kUnitary) {
      throw InvariantViolation("UnitaryMatrix: ||U^†U - I|| = " + std::to_string(defect));
    }
  }

  static UnitaryMatrix identity(Index n) {
    UnitaryMatrix u;
    u.value_ = ComplexMatrix::Identity(n, n);
    return u;
  }

  /// Nearest unitary (polar factor) of an invertible matrix.
  static UnitaryMatrix polar_factor(const ComplexMatrix& m) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    UnitaryMatrix u;
    u.value_ = svd.matrixU() * svd.matrixV().adjoint();
    return u;
  }

  static double unitarity_defect(const ComplexMatrix& m) {
    return (m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols())).norm();
  }

  const ComplexMatrix& matrix() const { return value_; }
  Index dim() const { return value_.rows(); }
  UnitaryMatrix inverse() const {
    UnitaryMatrix u;
    u.value_ = value_.adjoint();
    return u;
  }

  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) {
    detail::require_same_dim(a.dim(), b.dim(), "UnitaryMatrix *");
    UnitaryMatrix u;
    u.value_ = a.value_ * b.value_;
    return u;
  }

 private:
  ComplexMatrix value_;
};

/// Off-diagonal position (j, k) with j > k, zero-based.
struct OffDiagonalIndex {
  Index j;
  Index k;
  friend bool operator==(const OffDiagonalIndex&, const OffDiagonalIndex&) = default;
};

/// The orthonormal family {e_i, u_jk, v_jk}. Off-diagonal pairs are stored in
/// lexicographic (j, k) order: (1,0), (2,0), (2,1), (3,0), ...
class LieBasis {
 public:
  Index rank() const { return n_; }
  Index size() const { return n_ * n_; }
  Index pair_count() const { return static_cast<Index>(pairs_.size()); }

  const AntiHermitian& e(Index i) const {
    check_diag(i);
    return diagonal_[static_cast<std::size_t>(i)];
  }
  const AntiHermitian& u(Index j, Index k) const {
    return symmetric_[static_cast<std::size_t>(pair_position(j, k))];
  }
  const AntiHermitian& v(Index j, Index k) const {
    return antisymmetric_[static_cast<std::size_t>(pair_position(j, k))];
  }

  std::span<const AntiHermitian> diagonal() const { return diagonal_; }
  std::span<const AntiHermitian> symmetric() const { return symmetric_; }
  std::span<const AntiHermitian> antisymmetric() const { return antisymmetric_; }
  std::span<const OffDiagonalIndex> pairs() const { return pairs_; }

  Index pair_position(Index j, Index k) const {
    if (j <= k || j >= n_ || k < 0) {
      throw IndexOutOfRange("LieBasis: off-diagonal index (" + std::to_string(j) + "," +
                            std::to_string(k) + ") needs n > j > k >= 0");
    }
    return j * (j - 1) / 2 + k;
  }

  /// Every element: e_0..e_{n-1}, then u in pair order, then v in pair order.
  std::vector<AntiHermitian> all() const {
    std::vector<AntiHermitian> out(diagonal_);
    out.insert(out.end(), symmetric_.begin(), symmetric_.end());
    out.insert(out.end(), antisymmetric_.begin(), antisymmetric_.end());
    return out;
  }

  /// Orthonormal frame of the coset tangent space t^perp in the orientation
  /// (u_10, v_10, u_20, v_20, u_21, v_21, ...).
  std::vector<AntiHermitian> coset_frame() const {
    std::vector<AntiHermitian> out;
    out.reserve(2 * pairs_.size());
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
      out.push_back(symmetric_[p]);
      out.push_back(antisymmetric_[p]);
    }
    return out;
  }

 private:
  friend LieBasis build_basis(Index n);

  void check_diag(Index i) const {
    if (i < 0 || i >= n_) throw IndexOutOfRange("LieBasis: torus index " + std::to_string(i));
  }

  Index n_ = 0;
  std::vector<AntiHermitian> diagonal_;
  std::vector<AntiHermitian> symmetric_;
  std::vector<AntiHermitian> antisymmetric_;
  std::vector<OffDiagonalIndex> pairs_;
};

inline LieBasis build_basis(Index n) {
  if (n < 1) throw InvalidArgument("build_basis: rank must be >= 1");
  LieBasis b;
  b.n_ = n;
  const double r = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < n; ++i) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    m(i, i) = kI;
    b.diagonal_.push_back(AntiHermitian(std::move(m)));
  }
  for (Index j = 1; j < n; ++j) {
    for (Index k = 0; k < j; ++k) {
      ComplexMatrix s = ComplexMatrix::Zero(n, n);
      s(j, k) = kI * r;
      s(k, j) = kI * r;
      ComplexMatrix a = ComplexMatrix::Zero(n, n);
      a(j, k) = r;
      a(k, j) = -r;
      b.symmetric_.push_back(AntiHermitian(std::move(s)));
      b.antisymmetric_.push_back(AntiHermitian(std::move(a)));
      b.pairs_.push_back({j, k});
    }
  }
  return b;
}

inline double inner_product(const AntiHermitian& x, const AntiHermitian& y) {
  detail::require_same_dim(x.dim(), y.dim(), "inner_product");
  // -Re tr(XY) = -Re sum_ab X_ab Y_ba
  return -(x.matrix().cwiseProduct(y.matrix().transpose())).sum().real();
}

inline double norm(const AntiHermitian& x) { return x.matrix().norm(); }

inline AntiHermitian bracket(const AntiHermitian& x, const AntiHermitian& y) {
  detail::require_same_dim(x.dim(), y.dim(), "bracket");
  const ComplexMatrix& a = x.matrix();
  const ComplexMatrix& b = y.matrix();
  return AntiHermitian::skew_part(a * b - b * a);
}

/// exp(X) through the eigendecomposition of the Hermitian matrix -iX.
inline UnitaryMatrix matrix_exp(const AntiHermitian& x) {
  const ComplexMatrix h = -kI * x.matrix();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
  const Eigen::VectorXd& lambda = es.eigenvalues();
  Eigen::VectorXcd phases(lambda.size());
  for (Index i = 0; i < lambda.size(); ++i) phases(i) = std::exp(kI * lambda(i));
  const ComplexMatrix& v = es.eigenvectors();
  return UnitaryMatrix(v * phases.asDiagonal() * v.adjoint());
}

/// Ad_A X = A X A^{-1}.
inline AntiHermitian adjoint(const UnitaryMatrix& a, const AntiHermitian& x) {
  detail::require_same_dim(a.dim(), x.dim(), "adjoint");
  return AntiHermitian::skew_part(a.matrix() * x.matrix() * a.matrix().adjoint());
}

inline AntiHermitian project_to_torus(const AntiHermitian& x, const LieBasis& basis) {
  detail::require_same_dim(x.dim(), basis.rank(), "project_to_torus");
  AntiHermitian out = AntiHermitian::zero(x.dim());
  for (const auto& e : basis.diagonal()) out += inner_product(x, e) * e;
  return out;
}

/// Coordinates of X in the order of LieBasis::all().
inline Eigen::VectorXd coordinates(const AntiHermitian& x, const LieBasis& basis) {
  const auto elements = basis.all();
  Eigen::VectorXd c(static_cast<Index>(elements.size()));
  for (std::size_t a = 0; a < elements.size(); ++a) {
    c(static_cast<Index>(a)) = inner_product(x, elements[a]);
  }
  return c;
}

inline AntiHermitian from_coordinates(const Eigen::VectorXd& c, const LieBasis& basis) {
  const auto elements = basis.all();
  if (c.size() != static_cast<Index>(elements.size())) {
    throw DimensionMismatch("from_coordinates: expected " + std::to_string(elements.size()) +
                            " coordinates");
  }
  AntiHermitian out = AntiHermitian::zero(basis.rank());
  for (std::size_t a = 0; a < elements.size(); ++a) out += c(static_cast<Index>(a)) * elements[a];
  return out;
}

/// X = sum a_i e_i, a weight on the diagonal torus.
struct TorusWeight {
  std::vector<double> a;

  Index size() const { return static_cast<Index>(a.size()); }

  AntiHermitian realize() const {
    if (a.empty()) throw InvalidArgument("TorusWeight: empty coefficient list");
    ComplexMatrix m = ComplexMatrix::Zero(size(), size());
    for (Index i = 0; i < size(); ++i) m(i, i) = kI * a[static_cast<std::size_t>(i)];
    return AntiHermitian(std::move(m));
  }

  bool is_regular() const {
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = i + 1; j < a.size(); ++j) {
        if (a[i] == a[j]) return false;
      }
    }
    return true;
  }
};

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
/// diag(R) absorbed into Q.
inline UnitaryMatrix haar_sample(Index n, Rng& rng) {
  if (n < 1) throw InvalidArgument("haar_sample: rank must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix z(n, n);
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < n; ++r) z(r, c) = Complex(normal(rng), normal(rng)) / std::sqrt(2.0);
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Index i = 0; i < n; ++i) {
    const double mag = std::abs(r(i, i));
    const Complex phase = mag > 0.0 ? r(i, i) / mag : Complex(1.0, 0.0);
    q.col(i) *= phase;
  }
  return UnitaryMatrix::polar_factor(q);
}

inline UnitaryMatrix haar_sample(Index n, std::uint64_t seed) {
  Rng rng(seed);
  return haar_sample(n, rng);
}

/// Standard Gaussian element of u(n) (i.i.d. N(0, scale^2) coordinates).
inline AntiHermitian random_algebra_element(Index n, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  ComplexMatrix z(n, n);
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < n; ++r) z(r, c) = Complex(normal(rng), normal(rng));
  }
  return AntiHermitian::skew_part(z);
}

/// Random diagonal element i*diag(y) with y_i uniform in [-bound, bound].
inline AntiHermitian random_torus_element(Index n, Rng& rng, double bound = 1.0) {
  std::uniform_real_distribution<double> uniform(-bound, bound);
  TorusWeight w;
  w.a.resize(static_cast<std::size_t>(n));
  for (auto& x : w.a) x = uniform(rng);
  return w.realize();
}

}  // namespace parabolic
