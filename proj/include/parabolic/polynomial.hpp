#pragma once

// Sparse multivariate polynomials with exact rational coefficients.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "parabolic/errors.hpp"

namespace parabolic {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Exponent vector (alpha_1, ..., alpha_n).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<unsigned> exponents) : exps_(std::move(exponents)) {}

  std::size_t size() const { return exps_.size(); }
  unsigned operator[](std::size_t i) const { return exps_[i]; }
  unsigned& operator[](std::size_t i) { return exps_[i]; }
  const std::vector<unsigned>& exponents() const { return exps_; }

  unsigned total() const {
    unsigned t = 0;
    for (auto e : exps_) t += e;
    return t;
  }

  /// alpha! = prod alpha_i!
  BigInt factorial() const {
    BigInt f = 1;
    for (auto e : exps_) {
      for (unsigned i = 2; i <= e; ++i) f *= i;
    }
    return f;
  }

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<unsigned> exps_;
};

/// Every multi-index of length n with total degree d, in lexicographic order.
inline std::vector<MultiIndex> multi_indices(std::size_t n, unsigned d) {
  std::vector<MultiIndex> out;
  std::vector<unsigned> cur(n, 0);
  auto rec = [&](auto&& self, std::size_t pos, unsigned left) -> void {
    if (pos + 1 == n) {
      cur[pos] = left;
      out.emplace_back(cur);
      return;
    }
    for (unsigned e = left + 1; e-- > 0;) {
      cur[pos] = e;
      self(self, pos + 1, left - e);
    }
  };
  if (n == 0) {
    if (d == 0) out.emplace_back();
    return out;
  }
  rec(rec, 0, d);
  return out;
}

class PairingPolynomial {
 public:
  explicit PairingPolynomial(std::size_t variables = 0) : n_(variables) {}

  static PairingPolynomial constant(std::size_t variables, const Rational& c) {
    PairingPolynomial p(variables);
    p.add_term(MultiIndex(std::vector<unsigned>(variables, 0)), c);
    return p;
  }

  /// The coordinate a_i (zero-based).
  static PairingPolynomial variable(std::size_t variables, std::size_t i) {
    if (i >= variables) throw IndexOutOfRange("PairingPolynomial::variable");
    std::vector<unsigned> e(variables, 0);
    e[i] = 1;
    PairingPolynomial p(variables);
    p.add_term(MultiIndex(std::move(e)), Rational(1));
    return p;
  }

  std::size_t variables() const { return n_; }
  const std::map<MultiIndex, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const MultiIndex& m, const Rational& c) {
    if (m.size() != n_) throw DimensionMismatch("PairingPolynomial: exponent length");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational coefficient(const MultiIndex& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.total());
    return d;
  }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.total() == 0);
  }

  Rational constant_term() const {
    return coefficient(MultiIndex(std::vector<unsigned>(n_, 0)));
  }

  PairingPolynomial& operator+=(const PairingPolynomial& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  PairingPolynomial& operator-=(const PairingPolynomial& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  PairingPolynomial& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend PairingPolynomial operator+(PairingPolynomial a, const PairingPolynomial& b) { return a += b; }
  friend PairingPolynomial operator-(PairingPolynomial a, const PairingPolynomial& b) { return a -= b; }
  friend PairingPolynomial operator-(PairingPolynomial a) { return a *= Rational(-1); }
  friend PairingPolynomial operator*(const Rational& s, PairingPolynomial a) { return a *= s; }

  friend PairingPolynomial operator*(const PairingPolynomial& a, const PairingPolynomial& b) {
    a.check(b);
    PairingPolynomial out(a.n_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        std::vector<unsigned> e(a.n_);
        for (std::size_t i = 0; i < a.n_; ++i) e[i] = ma[i] + mb[i];
        out.add_term(MultiIndex(std::move(e)), ca * cb);
      }
    }
    return out;
  }

  friend bool operator==(const PairingPolynomial& a, const PairingPolynomial& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  /// d^order / d a_i^order.
  PairingPolynomial derivative(std::size_t i, unsigned order = 1) const {
    if (i >= n_) throw IndexOutOfRange("PairingPolynomial::derivative: variable index");
    PairingPolynomial out(n_);
    for (const auto& [m, c] : terms_) {
      if (m[i] < order) continue;
      BigInt falling = 1;
      for (unsigned t = 0; t < order; ++t) falling *= (m[i] - t);
      MultiIndex reduced = m;
      reduced[i] -= order;
      out.add_term(reduced, c * Rational(falling));
    }
    return out;
  }

  /// p(a_{perm[0]}, ..., a_{perm[n-1]}): variable i is replaced by variable perm[i].
  PairingPolynomial substituted(std::span<const std::size_t> perm) const {
    if (perm.size() != n_) throw DimensionMismatch("PairingPolynomial::substituted");
    PairingPolynomial out(n_);
    for (const auto& [m, c] : terms_) {
      std::vector<unsigned> e(n_, 0);
      for (std::size_t i = 0; i < n_; ++i) e[perm[i]] += m[i];
      out.add_term(MultiIndex(std::move(e)), c);
    }
    return out;
  }

  Rational evaluate(std::span<const Rational> point) const {
    if (point.size() != n_) throw DimensionMismatch("PairingPolynomial::evaluate");
    Rational total = 0;
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (std::size_t i = 0; i < n_; ++i) {
        for (unsigned k = 0; k < m[i]; ++k) t *= point[i];
      }
      total += t;
    }
    return total;
  }

  double evaluate(std::span<const double> point) const {
    if (point.size() != n_) throw DimensionMismatch("PairingPolynomial::evaluate");
    double total = 0.0;
    for (const auto& [m, c] : terms_) {
      double t = static_cast<double>(c);
      for (std::size_t i = 0; i < n_; ++i) {
        for (unsigned k = 0; k < m[i]; ++k) t *= point[i];
      }
      total += t;
    }
    return total;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      if (!first) os << (c < 0 ? " - " : " + ");
      else if (c < 0) os << "-";
      first = false;
      const Rational mag = c < 0 ? Rational(-c) : c;
      const bool unit = mag == 1 && m.total() > 0;
      if (!unit) os << mag;
      bool any = !unit;
      for (std::size_t i = 0; i < n_; ++i) {
        if (m[i] == 0) continue;
        os << (any ? "*" : "") << "a" << (i + 1);
        if (m[i] > 1) os << "^" << m[i];
        any = true;
      }
    }
    return os.str();
  }

 private:
  void check(const PairingPolynomial& o) const {
    if (o.n_ != n_) throw DimensionMismatch("PairingPolynomial: variable counts differ");
  }

  std::size_t n_;
  std::map<MultiIndex, Rational> terms_;
};

}  // namespace parabolic
