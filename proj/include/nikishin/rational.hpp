#ifndef NIKISHIN_RATIONAL_HPP_
#define NIKISHIN_RATIONAL_HPP_

#include <cstddef>
#include <utility>
#include <vector>

#include "nikishin/complex.hpp"
#include "nikishin/error.hpp"
#include "nikishin/polynomial.hpp"

namespace nikishin {

// Coefficients of a function at infinity: entry k multiplies z^(-k-1).
// For the Cauchy transform of a measure these are its moments.
template <class Real>
struct LaurentTail {
  std::vector<Real> coeffs;

  std::size_t size() const { return coeffs.size(); }
  const Real& operator[](std::size_t k) const { return coeffs[k]; }
  Real& operator[](std::size_t k) { return coeffs[k]; }

  friend LaurentTail operator+(const LaurentTail& a, const LaurentTail& b) {
    if (a.size() != b.size()) throw Error(ErrorKind::kDomain, "Laurent tails of different length");
    LaurentTail r = a;
    for (std::size_t k = 0; k < b.size(); ++k) r.coeffs[k] += b.coeffs[k];
    return r;
  }
};

// Expansion at infinity of a(z) * f(z) where f is given by its tail.
template <class Real>
struct ExpandedProduct {
  Polynomial<Real> polynomial_part;
  LaurentTail<Real> tail;  // first `order` coefficients of z^(-k-1)
};

// Needs f.size() >= deg(a) + order.
template <class Real>
ExpandedProduct<Real> multiply_expand(const Polynomial<Real>& a, const LaurentTail<Real>& f,
                                      std::size_t order) {
  const int deg = a.degree();
  if (deg >= 0 && f.size() < static_cast<std::size_t>(deg) + order) {
    throw Error(ErrorKind::kDomain, "Laurent tail too short for the requested product order");
  }
  ExpandedProduct<Real> out;
  std::vector<Real> poly(deg > 0 ? static_cast<std::size_t>(deg) : 0, Real(0));
  for (int p = 0; p < deg; ++p) {
    for (int l = p + 1; l <= deg; ++l) poly[p] += a.coeff(l) * f[static_cast<std::size_t>(l - p - 1)];
  }
  out.polynomial_part = Polynomial<Real>(std::move(poly));
  out.tail.coeffs.assign(order, Real(0));
  for (std::size_t t = 0; t < order; ++t) {
    for (int l = 0; l <= deg; ++l) out.tail[t] += a.coeff(l) * f[static_cast<std::size_t>(l) + t];
  }
  return out;
}

// v / t with deg v < deg t, gcd(v, t) = 1 and t monic. A zero numerator is
// canonicalized to 0 / 1 so it contributes no poles.
template <class Real>
class RationalFn {
 public:
  RationalFn() : num_(), den_(Polynomial<Real>::constant(Real(1))) {}

  RationalFn(Polynomial<Real> num, Polynomial<Real> den) {
    if (den.is_zero()) throw Error(ErrorKind::kDomain, "rational function with zero denominator");
    if (num.is_zero()) {
      den_ = Polynomial<Real>::constant(Real(1));
      return;
    }
    if (num.degree() >= den.degree()) {
      throw Error(ErrorKind::kDomain, "rational function must satisfy deg num < deg den");
    }
    if (poly_gcd(num, den).degree() > 0) {
      throw Error(ErrorKind::kDomain, "rational function is reducible (numerator and denominator share a root)");
    }
    Real lead = den.leading();
    num_ = (Real(1) / lead) * num;
    den_ = den.monic();
  }

  const Polynomial<Real>& num() const { return num_; }
  const Polynomial<Real>& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  Complex<Real> operator()(const Complex<Real>& z) const {
    Complex<Real> d = den_(z);
    Real scale = den_.eval_abs_scale(abs(z));
    if (abs(d) <= half_precision_tol<Real>() * scale) {
      throw Error(ErrorKind::kEvaluation, "rational function evaluated at a pole");
    }
    return num_(z) / d;
  }

 private:
  Polynomial<Real> num_;
  Polynomial<Real> den_;
};

// First K coefficients of r at infinity. With t monic of degree d the identity
// v = t * tail gives c_i = v_{d-1-i} - sum_{l=1..min(i,d)} t_{d-l} c_{i-l}.
template <class Real>
LaurentTail<Real> laurent_expand_rational(const RationalFn<Real>& r, std::size_t K) {
  LaurentTail<Real> tail;
  tail.coeffs.assign(K, Real(0));
  if (r.is_zero()) return tail;
  const auto& v = r.num();
  const auto& t = r.den();
  const int d = t.degree();
  for (std::size_t i = 0; i < K; ++i) {
    const int ii = static_cast<int>(i);
    Real c = v.coeff(d - 1 - ii);
    for (int l = 1; l <= std::min(ii, d); ++l) c -= t.coeff(d - l) * tail[i - static_cast<std::size_t>(l)];
    tail[i] = std::move(c);
  }
  return tail;
}

}  // namespace nikishin

#endif  // NIKISHIN_RATIONAL_HPP_
