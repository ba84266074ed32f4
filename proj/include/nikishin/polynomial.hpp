#ifndef NIKISHIN_POLYNOMIAL_HPP_
#define NIKISHIN_POLYNOMIAL_HPP_

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "nikishin/complex.hpp"
#include "nikishin/error.hpp"
#include "nikishin/real.hpp"

namespace nikishin {

// Dense real polynomial, coefficients in ascending degree. Exact trailing
// zeros are trimmed after every operation, so the zero polynomial is the
// empty coefficient list with degree -1.
template <class Real>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Real> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<Real> coeffs) : c_(coeffs) { trim(); }

  static Polynomial constant(const Real& a) { return Polynomial(std::vector<Real>{a}); }
  static Polynomial monomial(int degree, const Real& a = Real(1)) {
    std::vector<Real> c(static_cast<std::size_t>(degree) + 1, Real(0));
    c.back() = a;
    return Polynomial(std::move(c));
  }
  // prod (z - r_i)
  static Polynomial from_roots(const std::vector<Real>& roots) {
    Polynomial p = constant(Real(1));
    for (const auto& r : roots) p = p * Polynomial{-r, Real(1)};
    return p;
  }
  // Real polynomial from a root multiset closed under conjugation; imaginary
  // parts of the product are discarded.
  static Polynomial from_roots(const std::vector<Complex<Real>>& roots) {
    std::vector<Complex<Real>> c{Complex<Real>(Real(1))};
    for (const auto& r : roots) {
      std::vector<Complex<Real>> next(c.size() + 1, Complex<Real>(Real(0)));
      for (std::size_t i = 0; i < c.size(); ++i) {
        next[i + 1] += c[i];
        next[i] -= c[i] * r;
      }
      c = std::move(next);
    }
    std::vector<Real> re;
    re.reserve(c.size());
    for (auto& z : c) re.push_back(z.re);
    return Polynomial(std::move(re));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Real>& coeffs() const { return c_; }
  // Coefficient of z^i, zero beyond the stored range.
  Real coeff(int i) const {
    if (i < 0 || i > degree()) return Real(0);
    return c_[static_cast<std::size_t>(i)];
  }
  const Real& leading() const { return c_.back(); }

  template <class Arg>
  Arg eval(const Arg& z) const {
    Arg acc(Real(0));
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + Arg(*it);
    return acc;
  }
  Real operator()(const Real& x) const { return eval(x); }
  Complex<Real> operator()(const Complex<Real>& z) const { return eval(z); }

  // Sum |c_i| |z|^i, the natural scale for judging |p(z)| against zero.
  Real eval_abs_scale(const Real& absz) const {
    using std::abs;
    Real acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * absz + abs(*it);
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Real> d;
    d.reserve(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * Real(static_cast<long>(i)));
    return Polynomial(std::move(d));
  }

  Real max_abs_coeff() const {
    using std::abs;
    Real m(0);
    for (const auto& x : c_) {
      Real a = abs(x);
      if (a > m) m = a;
    }
    return m;
  }

  Polynomial monic() const {
    if (is_zero()) throw Error(ErrorKind::kDomain, "zero polynomial has no monic form");
    Polynomial r = *this;
    Real lead = leading();
    for (auto& x : r.c_) x /= lead;
    r.c_.back() = Real(1);
    return r;
  }

  // Drops leading coefficients whose magnitude is at most rel_tol times the
  // largest coefficient.
  Polynomial trimmed(const Real& rel_tol) const {
    using std::abs;
    Real cut = rel_tol * max_abs_coeff();
    std::vector<Real> c = c_;
    while (!c.empty() && abs(c.back()) <= cut) c.pop_back();
    return Polynomial(std::move(c));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Real(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Real(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(const Polynomial& a) {
    Polynomial r = a;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Real> c(a.c_.size() + b.c_.size() - 1, Real(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const Real& s, const Polynomial& a) {
    std::vector<Real> c = a.c_;
    for (auto& x : c) x *= s;
    return Polynomial(std::move(c));
  }

  // Euclidean division: *this = q * d + r with deg r < deg d.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
    if (d.is_zero()) throw Error(ErrorKind::kDomain, "polynomial division by zero");
    if (degree() < d.degree()) return {Polynomial{}, *this};
    std::vector<Real> r = c_;
    std::vector<Real> q(static_cast<std::size_t>(degree() - d.degree() + 1), Real(0));
    const Real& lead = d.leading();
    const std::size_t dn = d.c_.size();
    for (std::size_t k = q.size(); k-- > 0;) {
      Real f = r[k + dn - 1] / lead;
      q[k] = f;
      for (std::size_t i = 0; i < dn; ++i) r[k + i] -= f * d.c_[i];
      r[k + dn - 1] = Real(0);
    }
    r.resize(dn - 1);
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == Real(0)) c_.pop_back();
  }

  std::vector<Real> c_;
};

// Monic gcd by a Euclidean remainder sequence in which each divisor is made
// monic first. A remainder counts as zero once its largest coefficient drops
// below 2^(-P/2) times the largest coefficient of the current dividend.
template <class Real>
Polynomial<Real> poly_gcd(const Polynomial<Real>& p, const Polynomial<Real>& q) {
  if (p.is_zero() && q.is_zero()) throw Error(ErrorKind::kDomain, "gcd of two zero polynomials");
  if (p.is_zero()) return q.monic();
  if (q.is_zero()) return p.monic();
  const Real tol = half_precision_tol<Real>();
  Polynomial<Real> a = p.degree() >= q.degree() ? p.monic() : q.monic();
  Polynomial<Real> b = p.degree() >= q.degree() ? q.monic() : p.monic();
  while (true) {
    if (b.degree() == 0) return Polynomial<Real>::constant(Real(1));
    auto [quot, rem] = a.divmod(b);
    (void)quot;
    Real scale = std::max(a.max_abs_coeff(), b.max_abs_coeff());
    if (rem.is_zero() || rem.max_abs_coeff() <= tol * scale) return b;
    a = std::move(b);
    b = rem.trimmed(tol).monic();
  }
}

}  // namespace nikishin

#endif  // NIKISHIN_POLYNOMIAL_HPP_
