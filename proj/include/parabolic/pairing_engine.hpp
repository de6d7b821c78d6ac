#pragma once

// Intersection numbers on U(n)/T from the derivative formula
//
//   int_{G/T} dtheta_1^{alpha_1} ... dtheta_n^{alpha_n}
//       = (C1 / N!) d^alpha prod_{j>k} (a_k - a_j),      N = n(n-1)/2,
//
// and their product with an externally supplied base integral. Everything up
// to the final multiplication by C1 is exact.
//
// Orientation: G/T carries the orientation in which (d<X0, theta>)^N is
// positive for a decreasing reference weight a'_1 > ... > a'_n.

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "parabolic/lie_core.hpp"
#include "parabolic/polynomial.hpp"

namespace parabolic {

struct NormalizationConstant {
  enum class Provenance { UserSupplied, OrbitVolume };

  double value = 1.0;
  Provenance provenance = Provenance::UserSupplied;
  TorusWeight reference;       // only for OrbitVolume
  double orbit_volume = 0.0;   // only for OrbitVolume

  static NormalizationConstant user_supplied(double c) {
    if (!std::isfinite(c)) throw InvalidArgument("NormalizationConstant: non-finite value");
    return {c, Provenance::UserSupplied, {}, 0.0};
  }

  std::string mode() const {
    return provenance == Provenance::UserSupplied ? "user_supplied" : "orbit_volume";
  }
};

/// Opaque integral over the base moduli space, computed elsewhere.
struct BaseIntegralValue {
  double value = 0.0;
  std::string description;
};

struct IntersectionNumber {
  Index n = 0;
  MultiIndex alpha;
  Rational exact;  // (1/N!) d^alpha prod(a_k - a_j), i.e. the value at C1 = 1
  NormalizationConstant c1;

  double value() const { return c1.value * static_cast<double>(exact); }
};

inline Index flag_half_dimension(Index n) { return n * (n - 1) / 2; }

/// prod_{1 <= k < j <= n} (a_k - a_j).
inline PairingPolynomial vandermonde_product(Index n) {
  if (n < 1) throw InvalidArgument("vandermonde_product: rank must be >= 1");
  const auto vars = static_cast<std::size_t>(n);
  PairingPolynomial p = PairingPolynomial::constant(vars, Rational(1));
  for (std::size_t j = 1; j < vars; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      p = p * (PairingPolynomial::variable(vars, k) - PairingPolynomial::variable(vars, j));
    }
  }
  return p;
}

inline PairingPolynomial derive_multi(const PairingPolynomial& p, const MultiIndex& alpha) {
  if (alpha.size() != p.variables()) {
    throw DimensionMismatch("derive_multi: multi-index length " + std::to_string(alpha.size()) +
                            " vs " + std::to_string(p.variables()) + " variables");
  }
  PairingPolynomial out = p;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] > 0) out = out.derivative(i, alpha[i]);
  }
  return out;
}

inline BigInt big_factorial(Index k) {
  BigInt f = 1;
  for (Index i = 2; i <= k; ++i) f *= i;
  return f;
}

inline IntersectionNumber intersection_number(Index n, const MultiIndex& alpha,
                                              const NormalizationConstant& c1) {
  if (static_cast<Index>(alpha.size()) != n) {
    throw DimensionMismatch("intersection_number: multi-index length " +
                            std::to_string(alpha.size()) + " for rank " + std::to_string(n));
  }
  const Index top = flag_half_dimension(n);
  if (static_cast<Index>(alpha.total()) != top) {
    throw DegreeMismatch("intersection_number: |alpha| = " + std::to_string(alpha.total()) +
                         " but the top degree of U(" + std::to_string(n) + ")/T is " +
                         std::to_string(top));
  }
  const PairingPolynomial d = derive_multi(vandermonde_product(n), alpha);
  // |alpha| = deg of the product, so d is constant
  return {n, alpha, d.constant_term() / Rational(big_factorial(top)), c1};
}

inline NormalizationConstant c1_from_orbit_volume(Index n, const TorusWeight& reference,
                                                  double volume) {
  if (reference.size() != n) {
    throw DimensionMismatch("c1_from_orbit_volume: weight length " +
                            std::to_string(reference.size()) + " for rank " + std::to_string(n));
  }
  if (!reference.is_regular()) {
    throw NonRegularWeight("c1_from_orbit_volume: reference weight has repeated coefficients");
  }
  if (!std::isfinite(volume)) throw InvalidArgument("c1_from_orbit_volume: non-finite volume");
  double denom = 1.0;
  for (std::size_t j = 1; j < reference.a.size(); ++j) {
    for (std::size_t k = 0; k < j; ++k) denom *= reference.a[k] - reference.a[j];
  }
  return {volume / denom, NormalizationConstant::Provenance::OrbitVolume, reference, volume};
}

/// Fibre number times base integral.
inline double total_pairing(const IntersectionNumber& fibre, const BaseIntegralValue& base) {
  return fibre.value() * base.value;
}

inline double total_pairing(Index n, const MultiIndex& alpha, const NormalizationConstant& c1,
                            const BaseIntegralValue& base) {
  return total_pairing(intersection_number(n, alpha, c1), base);
}

/// True iff the product picks up sgn(sigma) = -1 under every transposition of variables.
inline bool weyl_antisymmetry_check(Index n) {
  if (n < 2) throw InvalidArgument("weyl_antisymmetry_check: needs n >= 2");
  const PairingPolynomial p = vandermonde_product(n);
  const PairingPolynomial neg = -p;
  std::vector<std::size_t> perm(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) {
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      std::swap(perm[i], perm[j]);
      if (!(p.substituted(perm) == neg)) return false;
    }
  }
  return true;
}

}  // namespace parabolic
