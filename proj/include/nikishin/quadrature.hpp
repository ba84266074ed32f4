#ifndef NIKISHIN_QUADRATURE_HPP_
#define NIKISHIN_QUADRATURE_HPP_

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "nikishin/error.hpp"
#include "nikishin/real.hpp"

namespace nikishin {

template <class Real>
struct QuadratureRule {
  std::vector<Real> nodes;  // ascending
  std::vector<Real> weights;
};

namespace detail {

// P_n^{(alpha,beta)}(x) and its derivative by the three-term recurrence.
template <class Real>
std::pair<Real, Real> jacobi_eval(int n, const Real& alpha, const Real& beta, const Real& x) {
  Real p0(1), d0(0);
  if (n == 0) return {p0, d0};
  const Real ab = alpha + beta;
  Real p1 = ((ab + Real(2)) * x + (alpha - beta)) / Real(2);
  Real d1 = (ab + Real(2)) / Real(2);
  for (int k = 2; k <= n; ++k) {
    const Real kk(k);
    const Real s = Real(2) * kk + ab;
    Real a1 = Real(2) * kk * (kk + ab) * (s - Real(2));
    Real a2 = (s - Real(1)) * (alpha * alpha - beta * beta);
    Real a3 = (s - Real(2)) * (s - Real(1)) * s;
    Real a4 = Real(2) * (kk + alpha - Real(1)) * (kk + beta - Real(1)) * s;
    Real lin = a2 + a3 * x;
    Real p2 = (lin * p1 - a4 * p0) / a1;
    Real d2 = (lin * d1 + a3 * p1 - a4 * d0) / a1;
    p0 = std::move(p1);
    p1 = std::move(p2);
    d0 = std::move(d1);
    d1 = std::move(d2);
  }
  return {p1, d1};
}

}  // namespace detail

// n-point Gauss-Jacobi rule for the density (1-t)^alpha (1+t)^beta on [-1,1],
// transported affinely to [a,b] (weights scale by (b-a)/2). Nodes come from
// Aberth iteration on the recurrence-evaluated polynomial, started at
// Chebyshev points; weights from the closed-form Christoffel numbers.
template <class Real>
QuadratureRule<Real> gauss_jacobi(int n, const Real& alpha, const Real& beta, const Real& a, const Real& b) {
  using std::abs;
  using std::cos;
  using std::pow;
  using std::tgamma;
  if (n < 1) throw Error(ErrorKind::kDomain, "quadrature needs at least one node");
  if (!(alpha > Real(-1)) || !(beta > Real(-1))) {
    throw Error(ErrorKind::kDomain, "Jacobi parameters must exceed -1");
  }
  if (!(a < b)) throw Error(ErrorKind::kDomain, "quadrature interval must satisfy a < b");

  const std::size_t un = static_cast<std::size_t>(n);
  const Real pi = scalar_traits<Real>::pi();
  std::vector<Real> x(un);
  for (std::size_t k = 0; k < un; ++k) {
    x[k] = -cos(pi * (Real(static_cast<long>(k)) + Real(0.5)) / Real(n));
  }

  const Real tol = precision_fraction<Real>(1, 1) * Real(8);
  bool converged = false;
  for (int it = 0; it < 200 && !converged; ++it) {
    converged = true;
    for (std::size_t k = 0; k < un; ++k) {
      auto [p, dp] = detail::jacobi_eval(n, alpha, beta, x[k]);
      if (p == Real(0)) continue;
      Real ratio = p / dp;
      Real s(0);
      for (std::size_t j = 0; j < un; ++j)
        if (j != k) s += Real(1) / (x[k] - x[j]);
      Real w = ratio / (Real(1) - ratio * s);
      x[k] -= w;
      if (abs(w) > tol) converged = false;
    }
  }
  if (!converged) throw Error(ErrorKind::kNumerics, "Gauss-Jacobi node iteration did not converge");
  std::sort(x.begin(), x.end());

  const Real nn(n);
  Real c = tgamma(nn + alpha + Real(1)) * tgamma(nn + beta + Real(1)) /
           (tgamma(nn + alpha + beta + Real(1)) * tgamma(nn + Real(1))) * pow(Real(2), alpha + beta + Real(1));
  const Real half = (b - a) / Real(2);
  const Real mid = (a + b) / Real(2);

  QuadratureRule<Real> rule;
  rule.nodes.resize(un);
  rule.weights.resize(un);
  for (std::size_t k = 0; k < un; ++k) {
    auto [p, dp] = detail::jacobi_eval(n, alpha, beta, x[k]);
    (void)p;
    rule.weights[k] = c / ((Real(1) - x[k] * x[k]) * dp * dp) * half;
    rule.nodes[k] = half * x[k] + mid;
  }
  return rule;
}

template <class Real>
QuadratureRule<Real> gauss_legendre(int n, const Real& a, const Real& b) {
  return gauss_jacobi(n, Real(0), Real(0), a, b);
}

}  // namespace nikishin

#endif  // NIKISHIN_QUADRATURE_HPP_
