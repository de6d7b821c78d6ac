#pragma once

// A small exterior algebra over the coset frame (dx_10, dy_10, dx_20, ...),
// used to expand wedge powers of the dtheta_i by brute force. It is the
// independent counterpart of the derivative formula in pairing_engine.

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "parabolic/flag_forms.hpp"
#include "parabolic/pairing_engine.hpp"
#include "parabolic/polynomial.hpp"

namespace parabolic {

/// Form with coefficients in a commutative ring T; keys are generator bitmasks.
template <class T>
class ExteriorForm {
 public:
  using Terms = std::map<std::uint64_t, T>;

  explicit ExteriorForm(T zero) : zero_(std::move(zero)) {}

  static ExteriorForm unit(T one, T zero) {
    ExteriorForm f(std::move(zero));
    f.terms_.emplace(0, std::move(one));
    return f;
  }

  const Terms& terms() const { return terms_; }

  void add(std::uint64_t mask, const T& c) {
    auto it = terms_.find(mask);
    if (it == terms_.end()) terms_.emplace(mask, c);
    else it->second = it->second + c;
  }

  T coefficient(std::uint64_t mask) const {
    auto it = terms_.find(mask);
    return it == terms_.end() ? zero_ : it->second;
  }

  /// Sign of moving the generators of b past those of a (both sorted ascending).
  static int merge_sign(std::uint64_t a, std::uint64_t b) {
    int swaps = 0;
    for (std::uint64_t rest = b; rest != 0; rest &= rest - 1) {
      const int bit = std::countr_zero(rest);
      // generators of a greater than this generator of b
      swaps += std::popcount(a >> (bit + 1));
    }
    return swaps % 2 == 0 ? 1 : -1;
  }

  friend ExteriorForm wedge(const ExteriorForm& f, const ExteriorForm& g) {
    ExteriorForm out(f.zero_);
    for (const auto& [ma, ca] : f.terms_) {
      for (const auto& [mb, cb] : g.terms_) {
        if ((ma & mb) != 0) continue;
        const T prod = ca * cb;
        out.add(ma | mb, merge_sign(ma, mb) > 0 ? prod : out.zero_ - prod);
      }
    }
    return out;
  }

 private:
  T zero_;
  Terms terms_;
};

/// dtheta_i as an exact 2-form on the coset frame at the identity coset. The
/// numerical values are integers (0, +-1); anything else is rejected.
inline ExteriorForm<Rational> dtheta_frame_form(Index i, const LieBasis& basis) {
  const auto frame = basis.coset_frame();
  const CosetPoint origin{UnitaryMatrix::identity(basis.rank())};
  ExteriorForm<Rational> f{Rational(0)};
  for (std::size_t a = 0; a < frame.size(); ++a) {
    for (std::size_t b = a + 1; b < frame.size(); ++b) {
      const double v = dtheta_eval(i, origin, frame[a], frame[b], basis);
      const double r = std::round(v);
      if (std::abs(v - r) > 1e-12) {
        throw InvariantViolation("dtheta_frame_form: non-integral frame coefficient");
      }
      if (r != 0.0) f.add((std::uint64_t{1} << a) | (std::uint64_t{1} << b), Rational(static_cast<long>(r)));
    }
  }
  return f;
}

inline std::uint64_t top_mask(Index n) {
  return (std::uint64_t{1} << (2 * flag_half_dimension(n))) - 1;
}

/// Integral of dtheta^alpha over G/T at C1 = 1, by direct wedge expansion in
/// the frame orientation followed by the (-1)^N change to the pairing
/// orientation and the factor 1/N! (the frame volume at C1 = 1).
inline Rational wedge_intersection_number(Index n, const MultiIndex& alpha) {
  const Index top = flag_half_dimension(n);
  if (static_cast<Index>(alpha.size()) != n || static_cast<Index>(alpha.total()) != top) {
    throw DegreeMismatch("wedge_intersection_number: |alpha| must be n(n-1)/2");
  }
  const LieBasis basis = build_basis(n);
  auto acc = ExteriorForm<Rational>::unit(Rational(1), Rational(0));
  for (Index i = 0; i < n; ++i) {
    const auto form = dtheta_frame_form(i, basis);
    for (unsigned e = 0; e < alpha[static_cast<std::size_t>(i)]; ++e) acc = wedge(acc, form);
  }
  const Rational sign = top % 2 == 0 ? Rational(1) : Rational(-1);
  return sign * acc.coefficient(top_mask(n)) / Rational(big_factorial(top));
}

/// Top coefficient of (sum_i a_i dtheta_i)^N as a polynomial in the a_i
/// (frame orientation), by brute-force expansion of the N-fold wedge.
inline PairingPolynomial wedge_power_polynomial(Index n) {
  const LieBasis basis = build_basis(n);
  const auto vars = static_cast<std::size_t>(n);
  const PairingPolynomial zero(vars);
  ExteriorForm<PairingPolynomial> sum{zero};
  for (Index i = 0; i < n; ++i) {
    const auto form = dtheta_frame_form(i, basis);
    const auto ai = PairingPolynomial::variable(vars, static_cast<std::size_t>(i));
    for (const auto& [mask, c] : form.terms()) sum.add(mask, c * ai);
  }
  auto acc = ExteriorForm<PairingPolynomial>::unit(PairingPolynomial::constant(vars, Rational(1)), zero);
  for (Index t = 0; t < flag_half_dimension(n); ++t) acc = wedge(acc, sum);
  return acc.coefficient(top_mask(n));
}

/// Integral of dtheta^alpha at C1 = 1 read off the multinomial expansion
/// (sum a_i dtheta_i)^N = sum_alpha (N!/alpha!) a^alpha dtheta^alpha.
inline Rational multinomial_intersection_number(const PairingPolynomial& wedge_power,
                                                const MultiIndex& alpha) {
  const auto top = static_cast<Index>(alpha.total());
  const Rational sign = top % 2 == 0 ? Rational(1) : Rational(-1);
  const BigInt nfact = big_factorial(top);
  return sign * wedge_power.coefficient(alpha) * Rational(alpha.factorial()) /
         (Rational(nfact) * Rational(nfact));
}

}  // namespace parabolic
