#ifndef NIKISHIN_NIKISHIN_SYSTEM_HPP_
#define NIKISHIN_NIKISHIN_SYSTEM_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nikishin/complex.hpp"
#include "nikishin/error.hpp"
#include "nikishin/measures.hpp"

namespace nikishin {

// <alpha, beta>: the nodes of alpha reweighted by beta^. beta^ keeps one sign
// on any interval free of beta's nodes, so the product again has constant
// sign.
template <class Real>
AtomicMeasure<Real> product_measure(const AtomicMeasure<Real>& alpha, const AtomicMeasure<Real>& beta) {
  using std::abs;
  const Real gap_tol = precision_fraction<Real>(1, 4);
  std::vector<Real> w;
  w.reserve(alpha.size());
  int common_sign = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const Real& x = alpha.nodes()[i];
    for (const auto& y : beta.nodes()) {
      if (abs(x - y) <= gap_tol) throw Error(ErrorKind::kDomain, "supports overlap");
    }
    Real v = cauchy_eval_real(beta, x);
    int s = v > Real(0) ? 1 : (v < Real(0) ? -1 : 0);
    if (s == 0 || (common_sign != 0 && s != common_sign)) {
      throw Error(ErrorKind::kDomain, "supports overlap");
    }
    common_sign = s;
    w.push_back(alpha.weights()[i] * abs(v));
  }
  return AtomicMeasure<Real>(alpha.nodes(), std::move(w), alpha.sign() * common_sign, alpha.support());
}

template <class Real>
struct IdentityResidual {
  Real residual{0};
  Real scale{0};  // largest magnitude among the terms combined
};

// Generators sigma_1..sigma_m together with every forward product
// s_{j,k} = <sigma_j, ..., sigma_k> and reversed product
// s_{k,j} = <sigma_k, ..., sigma_j>, j <= k. Indices are 1-based as in the
// usual notation.
template <class Real>
class NikishinSystem {
 public:
  explicit NikishinSystem(std::vector<AtomicMeasure<Real>> generators)
      : gen_(std::move(generators)), bits_(scalar_traits<Real>::bits()) {
    const std::size_t m = gen_.size();
    if (m == 0) throw Error(ErrorKind::kDomain, "a Nikishin system needs at least one generator");
    validate_adjacency();
    table_.assign(m * m, std::nullopt);
    for (std::size_t j = 0; j < m; ++j) at(j, j).emplace(gen_[j]);
    // Forward chains right to left: s_{j,k} = <sigma_j, s_{j+1,k}>.
    for (std::size_t len = 1; len < m; ++len) {
      for (std::size_t j = 0; j + len < m; ++j) {
        const std::size_t k = j + len;
        at(j, k).emplace(product_measure(gen_[j], *at(j + 1, k)));
        at(k, j).emplace(product_measure(gen_[k], *at(k - 1, j)));
      }
    }
  }

  std::size_t size() const { return gen_.size(); }
  const std::vector<AtomicMeasure<Real>>& generators() const { return gen_; }
  const AtomicMeasure<Real>& generator(std::size_t j) const { return gen_.at(j - 1); }
  const Interval<Real>& interval(std::size_t j) const { return gen_.at(j - 1).support(); }

  // Precision the products were formed at.
  long precision() const { return bits_; }
  const std::vector<MeasureSpec<Real>>& spec() const { return spec_; }
  void set_spec(std::vector<MeasureSpec<Real>> spec) { spec_ = std::move(spec); }

  // The same system recomputed at the calling thread's precision: from the
  // specs when known (quadrature nodes included), otherwise from the stored
  // atoms, which extend exactly.
  NikishinSystem refined() const {
    std::vector<AtomicMeasure<Real>> gens;
    if (!spec_.empty()) {
      for (const auto& s : spec_) gens.push_back(realize(s));
    } else {
      for (const auto& g : gen_) gens.push_back(AtomicMeasure<Real>(g.nodes(), g.weights(), g.sign(), g.support()));
    }
    NikishinSystem out(std::move(gens));
    out.spec_ = spec_;
    return out;
  }

  // s_{j,k}; the reversed chain when j > k.
  const AtomicMeasure<Real>& s(std::size_t j, std::size_t k) const {
    if (j < 1 || k < 1 || j > size() || k > size()) throw Error(ErrorKind::kDomain, "Nikishin index out of range");
    return *table_[(j - 1) * size() + (k - 1)];
  }

 private:
  std::optional<AtomicMeasure<Real>>& at(std::size_t j, std::size_t k) { return table_[j * gen_.size() + k]; }

  void validate_adjacency() const {
    const Real gap_tol = precision_fraction<Real>(1, 4);
    for (std::size_t j = 0; j + 1 < gen_.size(); ++j) {
      const auto& left = gen_[j].support();
      const auto& right = gen_[j + 1].support();
      const bool disjoint = left.b < right.a || right.b < left.a;
      const bool touching = left.b == right.a || right.b == left.a;
      if (!disjoint && !touching) {
        throw Error(ErrorKind::kDomain, "adjacency violation: intervals " + std::to_string(j + 1) + " and " +
                                            std::to_string(j + 2) + " overlap");
      }
      if (touching) {
        Real junction = left.b == right.a ? left.b : left.a;
        for (const auto* g : {&gen_[j], &gen_[j + 1]}) {
          for (const auto& x : g->nodes()) {
            using std::abs;
            if (abs(x - junction) <= gap_tol) {
              throw Error(ErrorKind::kDomain, "adjacency violation: junction point carries mass");
            }
          }
        }
      }
    }
  }

  std::vector<AtomicMeasure<Real>> gen_;
  std::vector<std::optional<AtomicMeasure<Real>>> table_;
  long bits_;
  std::vector<MeasureSpec<Real>> spec_;
};

template <class Real>
NikishinSystem<Real> build_system(const std::vector<MeasureSpec<Real>>& spec) {
  std::vector<AtomicMeasure<Real>> gens;
  gens.reserve(spec.size());
  for (const auto& s : spec) gens.push_back(realize(s));
  NikishinSystem<Real> sys(std::move(gens));
  sys.set_spec(spec);
  return sys;
}

template <class Real>
Complex<Real> s_hat_eval(const NikishinSystem<Real>& sys, std::size_t j, std::size_t k, const Complex<Real>& z) {
  return cauchy_eval(sys.s(j, k), z);
}

// Residual of
//   (-1)^{m-j} s^_{m,j+1} + sum_{k=j+1}^{m-1} (-1)^{m-k} s^_{m,k+1} s^_{j+1,k} + s^_{j+1,m}
// which vanishes identically off Delta_{j+1} and Delta_m; j in 0..m-1.
template <class Real>
IdentityResidual<Real> check_chile(const NikishinSystem<Real>& sys, std::size_t j, const Complex<Real>& z) {
  const std::size_t m = sys.size();
  if (j >= m) throw Error(ErrorKind::kDomain, "identity index j must lie in 0..m-1");
  auto sgn = [](std::size_t e) { return e % 2 == 0 ? 1 : -1; };
  IdentityResidual<Real> out;
  auto add = [&](const Complex<Real>& term) {
    Real a = abs(term);
    if (a > out.scale) out.scale = a;
    return term;
  };
  Complex<Real> total = add(Real(sgn(m - j)) * s_hat_eval(sys, m, j + 1, z));
  for (std::size_t k = j + 1; k <= m - 1; ++k) {
    total += add(Real(sgn(m - k)) * (s_hat_eval(sys, m, k + 1, z) * s_hat_eval(sys, j + 1, k, z)));
  }
  total += add(s_hat_eval(sys, j + 1, m, z));
  out.residual = abs(total);
  return out;
}

// Residual of s^_{1,k}/s^_{1,1} - |s_{1,k}|/|s_{1,1}| + <tau_{1,1}, <s_{2,k}, sigma_1>>^
// where tau_{1,1} is the inverse measure of sigma_1 and |.| the signed mass.
template <class Real>
IdentityResidual<Real> check_ratio_formula(const NikishinSystem<Real>& sys, std::size_t k, const Complex<Real>& z) {
  const std::size_t m = sys.size();
  if (m < 2 || k < 2 || k > m) throw Error(ErrorKind::kDomain, "ratio formula needs m >= 2 and 2 <= k <= m");
  const auto& sigma1 = sys.generator(1);
  Complex<Real> ratio = s_hat_eval(sys, 1, k, z) / s_hat_eval(sys, 1, 1, z);
  Real mass_ratio = sys.s(1, k).signed_mass() / sigma1.signed_mass();
  auto inv = inverse_measure(sigma1);
  Complex<Real> bracket(Real(0));
  if (inv.tau) {
    AtomicMeasure<Real> inner = product_measure(sys.s(2, k), sigma1);
    bracket = cauchy_eval(product_measure(*inv.tau, inner), z);
  }
  IdentityResidual<Real> out;
  out.residual = abs(ratio - Complex<Real>(mass_ratio) + bracket);
  using std::abs;
  out.scale = std::max({abs(ratio), abs(mass_ratio), abs(bracket)});
  return out;
}

}  // namespace nikishin

#endif  // NIKISHIN_NIKISHIN_SYSTEM_HPP_
