#pragma once

// Exact-rational evidence computations shared by the unit and acceptance
// tests. Nothing here touches log_gamma: every Gamma ratio is written as a
// rising factorial, Gamma(a + n) / Gamma(a) = a (a + 1) ... (a + n - 1).

#include <cstddef>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bnscore/model.hpp"

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;

inline Rational rising(const Rational& a, bnscore::Count n) {
  Rational r = 1;
  for (bnscore::Count i = 0; i < n; ++i) r *= a + i;
  return r;
}

/// Dirichlet-multinomial evidence with every cell sharing `alpha`.
inline Rational dirichlet_multinomial(std::span<const bnscore::Count> counts,
                                      const Rational& alpha) {
  Rational num = 1;
  bnscore::Count total = 0;
  for (bnscore::Count n : counts) {
    num *= rising(alpha, n);
    total += n;
  }
  return num / rising(alpha * counts.size(), total);
}

/// Cell hyperparameter for one family, given (q_i, r_i).
template <typename AlphaFn>
Rational family_product(const bnscore::DagStructure& s, const bnscore::Dataset& d, AlphaFn alpha) {
  const bnscore::SufficientStats stats = bnscore::count_sufficient_stats(s, d);
  Rational p = 1;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& fam = stats.families[i];
    const Rational a = alpha(fam.configs, fam.arity);
    for (std::size_t j = 0; j < fam.configs; ++j) p *= dirichlet_multinomial(fam.row(j), a);
  }
  return p;
}

inline Rational k2(const bnscore::DagStructure& s, const bnscore::Dataset& d) {
  return family_product(s, d, [](std::size_t, std::size_t) { return Rational(1); });
}

/// alpha0 = num / den.
inline Rational bdeu(const bnscore::DagStructure& s, const bnscore::Dataset& d, long num,
                     long den) {
  return family_product(s, d, [&](std::size_t q, std::size_t r) {
    return Rational(num) / (Rational(den) * q * r);
  });
}

/// Global uniform over each skeleton component's joint table: the uniform
/// Dirichlet (alpha = 1) evidence of the joint cell counts. Components are
/// computed here by a plain union of adjacent pairs.
inline Rational gu(const bnscore::DagStructure& s, const bnscore::Dataset& d) {
  const std::size_t n = s.size();
  std::vector<std::size_t> root(n);
  for (std::size_t i = 0; i < n; ++i) root[i] = i;
  auto find = [&](std::size_t i) {
    while (root[i] != i) i = root[i];
    return i;
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t p : s.parents(a)) root[find(a)] = find(p);
  Rational total = 1;
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (find(i) == r) members.push_back(i);
    if (members.empty()) continue;
    std::size_t cells = 1;
    for (std::size_t m : members) cells *= s.variable(m).arity();
    std::vector<bnscore::Count> counts(cells, 0);
    for (std::size_t c = 0; c < d.num_cases(); ++c) {
      std::size_t idx = 0;
      for (std::size_t m : members) idx = idx * s.variable(m).arity() + d.at(c, m);
      ++counts[idx];
    }
    total *= dirichlet_multinomial(counts, Rational(1));
  }
  return total;
}

inline double to_double(const Rational& r) { return static_cast<double>(r); }

}  // namespace oracle
