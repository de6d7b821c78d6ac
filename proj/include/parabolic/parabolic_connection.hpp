#pragma once

// The torus connection on tuples (A_1, B_1, ..., A_g, B_g) in U(n)^{2g} whose
// commutator product equals beta * exp(X), and a projected-gradient solver
// that produces such tuples.
//
// The diagonal torus acts by simultaneous conjugation. Its centre i*R*I acts
// trivially (f_rho(iI) = 0 for every rho), so the action is effectively by the
// torus of SU(n) with Lie algebra t0 = {sum a_i e_i : sum a_i = 0}. Frames,
// connection and curvature are t0-valued.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "parabolic/flag_forms.hpp"
#include "parabolic/lie_core.hpp"
#include "parabolic/roots.hpp"

namespace parabolic {

class GroupTuple {
 public:
  GroupTuple() = default;

  /// entries = (A_1, B_1, ..., A_g, B_g).
  explicit GroupTuple(std::vector<UnitaryMatrix> entries) : entries_(std::move(entries)) {
    if (entries_.empty() || entries_.size() % 2 != 0) {
      throw InvalidArgument("GroupTuple: needs 2g >= 2 entries");
    }
    for (const auto& e : entries_) {
      detail::require_same_dim(e.dim(), entries_.front().dim(), "GroupTuple");
    }
  }

  Index genus() const { return static_cast<Index>(entries_.size() / 2); }
  Index dim() const { return entries_.front().dim(); }
  std::size_t size() const { return entries_.size(); }
  const UnitaryMatrix& operator[](std::size_t s) const { return entries_[s]; }
  const UnitaryMatrix& a(Index i) const { return entries_[static_cast<std::size_t>(2 * i)]; }
  const UnitaryMatrix& b(Index i) const { return entries_[static_cast<std::size_t>(2 * i + 1)]; }
  const std::vector<UnitaryMatrix>& entries() const { return entries_; }

  /// Componentwise rho * exp(s * xi).
  GroupTuple moved(const AlgebraTuple& xi, double s) const {
    if (xi.size() != entries_.size()) throw DimensionMismatch("GroupTuple::moved: tangent length");
    std::vector<UnitaryMatrix> out;
    out.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      out.push_back(entries_[i] * matrix_exp(s * xi[i]));
    }
    return GroupTuple(std::move(out));
  }

  /// t rho t^{-1} componentwise, the torus action.
  GroupTuple conjugated(const UnitaryMatrix& t) const {
    std::vector<UnitaryMatrix> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(t * e * t.inverse());
    return GroupTuple(std::move(out));
  }

  double distance(const GroupTuple& other) const {
    if (other.size() != size()) return INFINITY;
    double d = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      d = std::max(d, (entries_[i].matrix() - other[i].matrix()).cwiseAbs().maxCoeff());
    }
    return d;
  }

 private:
  std::vector<UnitaryMatrix> entries_;
};

/// Tangent at `base`; the ambient tangent in slot s is base[s] * components[s].
struct TupleTangent {
  GroupTuple base;
  AlgebraTuple components;
};

struct RelationTarget {
  UnitaryMatrix beta;
  TorusWeight weight;

  ComplexMatrix element() const { return beta.matrix() * matrix_exp(weight.realize()).matrix(); }
};

/// Orthonormal basis of t0 = t ∩ su(n): h_m = (e_0 + ... + e_m - (m+1) e_{m+1}) / sqrt((m+1)(m+2)).
inline std::vector<AntiHermitian> effective_torus_basis(const LieBasis& basis) {
  const Index n = basis.rank();
  std::vector<AntiHermitian> out;
  for (Index m = 0; m + 1 < n; ++m) {
    AntiHermitian h = AntiHermitian::zero(n);
    for (Index i = 0; i <= m; ++i) h += basis.e(i);
    h -= static_cast<double>(m + 1) * basis.e(m + 1);
    out.push_back((1.0 / std::sqrt(static_cast<double>((m + 1) * (m + 2)))) * h);
  }
  return out;
}

/// Orthogonal projection t -> t0 (removes the trace part).
inline AntiHermitian project_to_effective_torus(const AntiHermitian& x, const LieBasis& basis) {
  AntiHermitian t = project_to_torus(x, basis);
  const Complex mean = t.matrix().trace() / static_cast<double>(t.dim());
  return AntiHermitian::skew_part(t.matrix() -
                                  mean * ComplexMatrix::Identity(t.dim(), t.dim()));
}

/// f_rho(X) = (A_1^{-1} X A_1 - X, B_1^{-1} X B_1 - X, ...).
inline AlgebraTuple vertical_vector(const GroupTuple& rho, const AntiHermitian& x) {
  AlgebraTuple out;
  out.reserve(rho.size());
  for (const auto& e : rho.entries()) out.push_back(ad_minus_id_apply(e.inverse(), x));
  return out;
}

struct VerticalFrame {
  GroupTuple base;
  std::vector<AlgebraTuple> raw;          // f_rho(e_i), i = 0..n-1
  std::vector<AlgebraTuple> orthonormal;  // w_j, j = 0..n-2
  Eigen::MatrixXd change_of_basis;        // w_j = sum_i C(j, i) raw_i
  std::vector<AntiHermitian> preimages;   // fbar_rho^{-1}(w_j) in t0
  double condition_number = 0.0;
};

namespace detail {

inline void axpy(AlgebraTuple& y, double a, const AlgebraTuple& x) {
  for (std::size_t s = 0; s < y.size(); ++s) y[s] += a * x[s];
}

}  // namespace detail

/// Vertical frame at rho with a chosen processing order of the raw vectors.
inline VerticalFrame vertical_frame(const GroupTuple& rho, const LieBasis& basis,
                                    const std::vector<Index>& order) {
  const Index n = basis.rank();
  detail::require_same_dim(rho.dim(), n, "vertical_frame");
  if (n < 2) throw DegenerateFrame("vertical_frame: the rank-1 torus acts trivially");
  if (static_cast<Index>(order.size()) != n) throw InvalidArgument("vertical_frame: bad order");

  VerticalFrame f;
  f.base = rho;
  for (const auto& e : basis.diagonal()) f.raw.push_back(vertical_vector(rho, e));

  const Eigen::VectorXd sv = singular_values(f.raw);
  const Index rank = independence_rank(f.raw);
  if (rank < n - 1) {
    throw DegenerateFrame("vertical_frame: rank " + std::to_string(rank) +
                          " below effective torus dimension " + std::to_string(n - 1));
  }
  f.condition_number = sv(0) / sv(n - 2);
  const bool reorthogonalize = f.condition_number > 1e6;
  const double drop = kRankThreshold * sv(0);

  // modified Gram-Schmidt, tracking coefficients against raw
  for (const Index i : order) {
    AlgebraTuple w = f.raw[static_cast<std::size_t>(i)];
    Eigen::VectorXd coeff = Eigen::VectorXd::Zero(n);
    coeff(i) = 1.0;
    for (int pass = 0; pass < (reorthogonalize ? 2 : 1); ++pass) {
      for (std::size_t q = 0; q < f.orthonormal.size(); ++q) {
        const double c = tuple_inner(w, f.orthonormal[q]);
        detail::axpy(w, -c, f.orthonormal[q]);
        coeff -= c * f.change_of_basis.row(static_cast<Index>(q)).transpose();
      }
    }
    const double len = std::sqrt(tuple_inner(w, w));
    if (len <= drop || static_cast<Index>(f.orthonormal.size()) == n - 1) continue;
    for (auto& m : w) m *= 1.0 / len;
    coeff /= len;
    f.orthonormal.push_back(std::move(w));
    f.change_of_basis.conservativeResize(static_cast<Index>(f.orthonormal.size()), n);
    f.change_of_basis.row(static_cast<Index>(f.orthonormal.size()) - 1) = coeff.transpose();
  }
  if (static_cast<Index>(f.orthonormal.size()) != n - 1) {
    throw DegenerateFrame("vertical_frame: Gram-Schmidt produced " +
                          std::to_string(f.orthonormal.size()) + " vectors");
  }
  for (Index j = 0; j < n - 1; ++j) {
    AntiHermitian x = AntiHermitian::zero(n);
    for (Index i = 0; i < n; ++i) x += f.change_of_basis(j, i) * basis.e(i);
    f.preimages.push_back(project_to_effective_torus(x, basis));
  }
  return f;
}

inline VerticalFrame vertical_frame(const GroupTuple& rho, const LieBasis& basis) {
  std::vector<Index> order(static_cast<std::size_t>(basis.rank()));
  for (Index i = 0; i < basis.rank(); ++i) order[static_cast<std::size_t>(i)] = i;
  return vertical_frame(rho, basis, order);
}

/// omega(xi) = sum_j <xi, w_j> fbar_rho^{-1}(w_j), a t0-valued 1-form.
inline AntiHermitian connection_eval(const GroupTuple& rho, const AlgebraTuple& xi,
                                     const VerticalFrame& frame, const LieBasis& basis) {
  if (frame.base.distance(rho) > 1e-12) {
    throw InvalidArgument("connection_eval: frame was computed at a different tuple");
  }
  if (xi.size() != rho.size()) throw DimensionMismatch("connection_eval: tangent length");
  AntiHermitian out = AntiHermitian::zero(basis.rank());
  for (std::size_t j = 0; j < frame.orthonormal.size(); ++j) {
    out += tuple_inner(xi, frame.orthonormal[j]) * frame.preimages[j];
  }
  return out;
}

inline AntiHermitian connection_eval(const TupleTangent& xi, const VerticalFrame& frame,
                                     const LieBasis& basis) {
  return connection_eval(xi.base, xi.components, frame, basis);
}

/// Omega = d omega + 1/2 [omega, omega] on (xi, eta). d omega uses left-invariant
/// extensions: xi(omega(eta)) - eta(omega(xi)) - omega([xi, eta]), with the
/// derivatives by central differences of step `step`.
inline AntiHermitian curvature_eval(const TupleTangent& xi, const TupleTangent& eta,
                                    const LieBasis& basis, double step = 1e-5) {
  if (xi.base.distance(eta.base) > 1e-12) {
    throw InvalidArgument("curvature_eval: tangents at different base points");
  }
  const GroupTuple& rho = xi.base;
  auto omega_at = [&](const GroupTuple& point, const AlgebraTuple& v) {
    return connection_eval(point, v, vertical_frame(point, basis), basis);
  };
  auto directional = [&](const AlgebraTuple& along, const AlgebraTuple& v) {
    const AntiHermitian plus = omega_at(rho.moved(along, step), v);
    const AntiHermitian minus = omega_at(rho.moved(along, -step), v);
    return (1.0 / (2.0 * step)) * (plus - minus);
  };
  AlgebraTuple commutator;
  commutator.reserve(rho.size());
  for (std::size_t s = 0; s < rho.size(); ++s) {
    commutator.push_back(bracket(xi.components[s], eta.components[s]));
  }
  const VerticalFrame frame = vertical_frame(rho, basis);
  const AntiHermitian w_xi = connection_eval(rho, xi.components, frame, basis);
  const AntiHermitian w_eta = connection_eval(rho, eta.components, frame, basis);
  const AntiHermitian d_omega = directional(xi.components, eta.components) -
                                directional(eta.components, xi.components) -
                                connection_eval(rho, commutator, frame, basis);
  return d_omega + bracket(w_xi, w_eta);
}

/// Lambda_i(xi, eta) = <Omega(xi, eta), e_i>.
inline double generator_form_eval(const TupleTangent& xi, const TupleTangent& eta, Index i,
                                  const LieBasis& basis, double step = 1e-5) {
  return inner_product(curvature_eval(xi, eta, basis, step), basis.e(i));
}

/// prod_i [A_i, B_i] with [A, B] = A B A^{-1} B^{-1}.
inline ComplexMatrix commutator_product(const GroupTuple& rho) {
  ComplexMatrix r = ComplexMatrix::Identity(rho.dim(), rho.dim());
  for (Index i = 0; i < rho.genus(); ++i) {
    const ComplexMatrix& a = rho.a(i).matrix();
    const ComplexMatrix& b = rho.b(i).matrix();
    r = r * a * b * a.adjoint() * b.adjoint();
  }
  return r;
}

inline double relation_defect(const GroupTuple& rho, const RelationTarget& target) {
  detail::require_same_dim(rho.dim(), target.beta.dim(), "relation_defect");
  detail::require_same_dim(rho.dim(), target.weight.size(), "relation_defect");
  return (commutator_product(rho) - target.element()).norm();
}

struct SolverConfig {
  int max_iterations = 10000;
  double initial_step = 0.5;
  double armijo = 0.1;
  double growth = 1.5;  // step multiplier after an accepted step
  double max_step = 4.0;
  double min_step = 1e-14;
};

struct SolveResult {
  GroupTuple point;
  double defect = 0.0;
  int iterations = 0;
  std::vector<double> history;  // defect after each accepted step, starting point first
};

namespace detail {

/// Riemannian gradient of F = 1/2 ||R - C||^2 in left-translated coordinates.
inline AlgebraTuple defect_gradient(const GroupTuple& rho, const ComplexMatrix& target) {
  const Index n = rho.dim();
  // the word M_0 M_1 ... = A_1 B_1 A_1^-1 B_1^-1 ...
  struct Letter {
    std::size_t slot;
    bool inverse;
  };
  std::vector<Letter> word;
  std::vector<ComplexMatrix> mats;
  for (Index i = 0; i < rho.genus(); ++i) {
    const auto sa = static_cast<std::size_t>(2 * i);
    const auto sb = sa + 1;
    word.push_back({sa, false});
    word.push_back({sb, false});
    word.push_back({sa, true});
    word.push_back({sb, true});
  }
  for (const auto& l : word) {
    mats.push_back(l.inverse ? rho[l.slot].matrix().adjoint() : rho[l.slot].matrix());
  }
  const std::size_t len = word.size();
  std::vector<ComplexMatrix> prefix(len + 1, ComplexMatrix::Identity(n, n));
  std::vector<ComplexMatrix> suffix(len + 1, ComplexMatrix::Identity(n, n));
  for (std::size_t m = 0; m < len; ++m) prefix[m + 1] = prefix[m] * mats[m];
  for (std::size_t m = len; m-- > 0;) suffix[m] = mats[m] * suffix[m + 1];
  const ComplexMatrix err_adj = (prefix[len] - target).adjoint();

  AlgebraTuple grad(rho.size(), AntiHermitian::zero(n));
  for (std::size_t m = 0; m < len; ++m) {
    const ComplexMatrix& left = prefix[m];
    const ComplexMatrix& right = suffix[m + 1];
    const std::size_t s = word[m].slot;
    if (!word[m].inverse) {
      // dR = L U xi S  ->  Re tr(S E^† L U xi)
      const ComplexMatrix k = right * err_adj * left * rho[s].matrix();
      grad[s] += AntiHermitian::skew_part(k.adjoint());
    } else {
      // dR = -L xi U^† S  ->  -Re tr(U^† S E^† L xi)
      const ComplexMatrix k = rho[s].matrix().adjoint() * right * err_adj * left;
      grad[s] -= AntiHermitian::skew_part(k.adjoint());
    }
  }
  return grad;
}

inline GroupTuple retract(const GroupTuple& rho, const AlgebraTuple& grad, double step) {
  std::vector<UnitaryMatrix> out;
  out.reserve(rho.size());
  for (std::size_t s = 0; s < rho.size(); ++s) {
    const ComplexMatrix m = rho[s].matrix() *
                            (ComplexMatrix::Identity(rho.dim(), rho.dim()) - step * grad[s].matrix());
    out.push_back(UnitaryMatrix::polar_factor(m));
  }
  return GroupTuple(std::move(out));
}

}  // namespace detail

/// Projected-gradient descent for a tuple with relation_defect <= tol. The
/// identity tuple is tried first; otherwise the start is Haar-random from `seed`.
inline SolveResult solve_point(const RelationTarget& target, Index genus, std::uint64_t seed,
                               double tol, const SolverConfig& config = {}) {
  if (genus < 1) throw InvalidArgument("solve_point: genus must be >= 1");
  const Index n = target.beta.dim();
  const ComplexMatrix goal = target.element();

  SolveResult result;
  result.point = GroupTuple(std::vector<UnitaryMatrix>(static_cast<std::size_t>(2 * genus),
                                                       UnitaryMatrix::identity(n)));
  result.defect = relation_defect(result.point, target);
  result.history.push_back(result.defect);
  if (result.defect <= tol) return result;

  Rng rng(seed);
  std::vector<UnitaryMatrix> start;
  for (Index s = 0; s < 2 * genus; ++s) start.push_back(haar_sample(n, rng));
  result.point = GroupTuple(std::move(start));
  result.defect = relation_defect(result.point, target);
  result.history = {result.defect};

  double step = config.initial_step;
  for (int it = 0; it < config.max_iterations && result.defect > tol; ++it) {
    const AlgebraTuple grad = detail::defect_gradient(result.point, goal);
    const double grad_sq = tuple_inner(grad, grad);
    const double value = 0.5 * result.defect * result.defect;
    bool accepted = false;
    while (step >= config.min_step) {
      GroupTuple trial = detail::retract(result.point, grad, step);
      const double d = relation_defect(trial, target);
      if (0.5 * d * d <= value - config.armijo * step * grad_sq) {
        result.point = std::move(trial);
        result.defect = d;
        result.history.push_back(d);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    result.iterations = it + 1;
    if (!accepted) break;
    step = std::min(step * config.growth, config.max_step);
  }
  if (result.defect > tol) {
    throw NonConvergence("solve_point: defect " + std::to_string(result.defect) + " after " +
                         std::to_string(result.iterations) + " iterations");
  }
  return result;
}

}  // namespace parabolic
