#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "bnscore/model.hpp"

namespace bnscore {

/// ln Gamma(x) for x > 0; throws DomainError otherwise.
double log_gamma(double x);

/// ln of the Dirichlet-multinomial evidence of one count vector:
///   Gamma(sum a) / Gamma(sum a + sum n) * prod Gamma(a_k + n_k) / Gamma(a_k).
/// Throws LengthMismatch (sizes differ or fewer than 2 cells) and DomainError
/// (non-positive alpha).
double log_dirichlet_multinomial(std::span<const Count> counts, std::span<const double> alphas);

/// Same with every alpha equal to `alpha`.
double log_dirichlet_multinomial(std::span<const Count> counts, double alpha);

enum class MetricKind { K2, BDeu, GU };

/// Which parameter prior to score with. The structure prior is uniform and
/// cancels from every ratio and posterior.
class MetricSpec {
 public:
  static MetricSpec k2() { return MetricSpec(MetricKind::K2, std::nullopt); }
  static MetricSpec gu() { return MetricSpec(MetricKind::GU, std::nullopt); }
  /// Throws DomainError unless alpha0 > 0 and finite.
  static MetricSpec bdeu(double alpha0);
  /// Parses "k2", "gu" or "bdeu<alpha0>" (e.g. "bdeu4", "bdeu0.01").
  static MetricSpec parse(std::string_view label);

  MetricKind kind() const noexcept { return kind_; }
  std::optional<double> alpha0() const noexcept { return alpha0_; }

  /// "k2", "gu" or "bdeu".
  std::string family() const;
  /// "k2", "gu" or "bdeu" followed by the shortest round-trip alpha0.
  std::string label() const;

  friend bool operator==(const MetricSpec&, const MetricSpec&) = default;

 private:
  MetricSpec(MetricKind kind, std::optional<double> alpha0) : kind_(kind), alpha0_(alpha0) {}

  MetricKind kind_;
  std::optional<double> alpha0_;
};

// Natural-log marginal likelihoods ln P(D|S). All are <= 0, and exactly 0 on
// an empty dataset.

double k2_log_score(const SufficientStats& stats);
double k2_log_score(const DagStructure& structure, const Dataset& data);

double bdeu_log_score(const SufficientStats& stats, double alpha0);
double bdeu_log_score(const DagStructure& structure, const Dataset& data, double alpha0);

/// Global-uniform score, defined only when every skeleton component is a
/// clique: the sum over components of the uniform-Dirichlet evidence of the
/// component's joint cell counts. Throws NotCliqueDecomposable naming a
/// non-adjacent pair.
double gu_log_score(const DagStructure& structure, const Dataset& data);

double log_score(const MetricSpec& metric, const DagStructure& structure, const Dataset& data);

struct Ratio {
  double log_value = 0.0;  // natural log

  double value() const { return std::exp(log_value); }
  double log10() const { return log_value / std::log(10.0); }
};

/// P(dep|D) / P(indep|D) under equal structure priors.
Ratio structure_ratio(const MetricSpec& metric, const DagStructure& dep,
                      const DagStructure& indep, const Dataset& data);

/// Posterior of the arc x -> y against the arcless pair, scored on the
/// dataset projected onto {x, y}.
double arc_posterior(const MetricSpec& metric, std::size_t x, std::size_t y, const Dataset& data);

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// Monte Carlo estimate of the global-uniform evidence of one saturated
/// component: the mean of prod theta_c^{N_c} with theta drawn uniformly from
/// the simplex (normalised unit exponentials). Needs samples >= 1000 and at
/// least 2 cells; throws DomainError otherwise.
McEstimate mc_marginal_saturated(std::span<const Count> counts, std::size_t samples,
                                 std::uint64_t seed);

/// Closed-form BDeu(alpha0) ratio of X -> Y over X, Y for two binary
/// variables observed constant in all n cases. Returned in natural log.
double log_bdeu_ratio_constant_pair(std::uint64_t n_cases, double alpha0);
double bdeu_ratio_constant_pair(std::uint64_t n_cases, double alpha0);

/// GU counterpart: 6(N+1) / ((N+2)(N+3)).
double gu_ratio_constant_pair(std::uint64_t n_cases);

}  // namespace bnscore
