#ifndef NIKISHIN_ROOTS_HPP_
#define NIKISHIN_ROOTS_HPP_

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

#include "nikishin/complex.hpp"
#include "nikishin/error.hpp"
#include "nikishin/polynomial.hpp"

namespace nikishin {

namespace detail {

// Pairs roots with nonzero imaginary part with their nearest conjugate
// partner and replaces each pair by an exact conjugate pair; roots whose
// imaginary part is below the clustering tolerance become real.
template <class Real>
void symmetrize_conjugates(std::vector<Complex<Real>>& roots) {
  using std::abs;
  const Real tol = precision_fraction<Real>(1, 4);
  std::vector<std::size_t> upper, lower;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    auto& z = roots[i];
    Real mag = abs(z);
    if (abs(z.im) <= tol * (mag > Real(1) ? mag : Real(1))) {
      z.im = Real(0);
    } else if (z.im > Real(0)) {
      upper.push_back(i);
    } else {
      lower.push_back(i);
    }
  }
  std::vector<bool> used(roots.size(), false);
  for (std::size_t u : upper) {
    std::size_t best = roots.size();
    Real best_dist(0);
    for (std::size_t l : lower) {
      if (used[l]) continue;
      Real d = abs(roots[u] - conj(roots[l]));
      if (best == roots.size() || d < best_dist) {
        best = l;
        best_dist = d;
      }
    }
    if (best == roots.size()) {
      roots[u].im = Real(0);
      continue;
    }
    used[best] = true;
    Complex<Real> avg{(roots[u].re + roots[best].re) / Real(2), (roots[u].im - roots[best].im) / Real(2)};
    roots[u] = avg;
    roots[best] = conj(avg);
  }
  for (std::size_t l : lower)
    if (!used[l]) roots[l].im = Real(0);
}

}  // namespace detail

// All deg(p) complex roots with multiplicity, by Aberth-Ehrlich simultaneous
// iteration at the working precision. Roots of a real polynomial are
// returned closed under conjugation, sorted by real then imaginary part.
template <class Real>
std::vector<Complex<Real>> poly_roots(const Polynomial<Real>& p) {
  using std::abs;
  using C = Complex<Real>;
  if (p.degree() <= 0) throw Error(ErrorKind::kDomain, "no roots of a constant");
  const Polynomial<Real> q = p.monic();
  const Polynomial<Real> dq = q.derivative();
  const int n = q.degree();
  const std::size_t un = static_cast<std::size_t>(n);

  if (n == 1) return {C(-q.coeff(0))};

  // Fujiwara-style bound on the root moduli.
  Real bound(0);
  for (int i = 0; i < n; ++i) {
    using std::pow;
    Real a = abs(q.coeff(i));
    if (i == 0) a /= Real(2);
    if (a == Real(0)) continue;
    Real r = pow(a, Real(1) / Real(n - i));
    if (r > bound) bound = r;
  }
  bound *= Real(2);
  if (bound == Real(0)) bound = Real(1);

  const Real pi = scalar_traits<Real>::pi();
  const Real step_tol = precision_fraction<Real>(1, 1) * Real(16);
  const Real noise = precision_fraction<Real>(1, 1) * Real(64);

  std::vector<C> z(un);
  auto seed_circle = [&](const Real& radius, const Real& phase) {
    for (std::size_t k = 0; k < un; ++k) {
      Real theta = Real(2) * pi * Real(static_cast<long>(k)) / Real(n) + phase;
      z[k] = polar(radius * Real(0.5), theta);
    }
  };
  seed_circle(bound, Real(0.4));

  std::mt19937_64 rng(0x6e696b6973686e31ULL);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);

  const int max_iter = 100 + 20 * n;
  bool converged = false;
  for (int restart = 0; restart < 4 && !converged; ++restart) {
    std::vector<bool> done(un, false);
    for (int it = 0; it < max_iter; ++it) {
      bool all_done = true;
      for (std::size_t k = 0; k < un; ++k) {
        if (done[k]) continue;
        C pv = q(z[k]);
        Real mag = abs(z[k]);
        if (abs(pv) <= noise * q.eval_abs_scale(mag)) {
          done[k] = true;
          continue;
        }
        C ratio = pv / dq(z[k]);
        C s(Real(0));
        for (std::size_t j = 0; j < un; ++j)
          if (j != k) s += C(Real(1)) / (z[k] - z[j]);
        C w = ratio / (C(Real(1)) - ratio * s);
        z[k] -= w;
        if (abs(w) <= step_tol * (mag > Real(1) ? mag : Real(1))) done[k] = true;
        all_done = false;
      }
      if (all_done) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      // Stagnation: jitter the current iterates and run again.
      for (auto& x : z) {
        Real m = abs(x) + Real(1);
        x += C(Real(jitter(rng)) * m * Real(1e-3), Real(jitter(rng)) * m * Real(1e-3));
      }
    }
  }

  const Real res_tol = half_precision_tol<Real>();
  const Real norm = p.max_abs_coeff() / abs(p.leading());
  for (auto& x : z) {
    using std::pow;
    Real m = abs(x);
    Real lim = res_tol * norm * pow(m > Real(1) ? m : Real(1), static_cast<long>(n));
    if (abs(q(x)) > lim) throw Error(ErrorKind::kNumerics, "polynomial root finder did not converge");
  }

  detail::symmetrize_conjugates(z);
  std::sort(z.begin(), z.end(), [](const C& a, const C& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  });
  return z;
}

}  // namespace nikishin

#endif  // NIKISHIN_ROOTS_HPP_
