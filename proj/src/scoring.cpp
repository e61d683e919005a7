#include "bnscore/scoring.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "bnscore/error.hpp"
#include "bnscore/random.hpp"

namespace bnscore {

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw Error(ErrorKind::DomainError, "log_gamma needs a finite positive argument");
  return boost::math::lgamma(x);
}

double log_dirichlet_multinomial(std::span<const Count> counts, std::span<const double> alphas) {
  if (counts.size() != alphas.size() || counts.size() < 2)
    throw Error(ErrorKind::LengthMismatch, "need equal-length count and alpha vectors of size >= 2");
  double alpha_sum = 0.0;
  double count_sum = 0.0;
  double terms = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double a = alphas[k];
    if (!(a > 0.0) || !std::isfinite(a))
      throw Error(ErrorKind::DomainError, "Dirichlet hyperparameters must be positive");
    alpha_sum += a;
    count_sum += static_cast<double>(counts[k]);
    // Empty cells contribute exactly zero.
    if (counts[k] != 0) terms += log_gamma(a + static_cast<double>(counts[k])) - log_gamma(a);
  }
  if (count_sum == 0.0) return 0.0;
  return log_gamma(alpha_sum) - log_gamma(alpha_sum + count_sum) + terms;
}

double log_dirichlet_multinomial(std::span<const Count> counts, double alpha) {
  const std::vector<double> alphas(counts.size(), alpha);
  return log_dirichlet_multinomial(counts, alphas);
}

MetricSpec MetricSpec::bdeu(double alpha0) {
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0))
    throw Error(ErrorKind::DomainError, "BDeu equivalent sample size must be positive");
  return MetricSpec(MetricKind::BDeu, alpha0);
}

MetricSpec MetricSpec::parse(std::string_view label) {
  if (label == "k2") return k2();
  if (label == "gu") return gu();
  if (label.starts_with("bdeu")) {
    std::string_view rest = label.substr(4);
    double alpha0 = 0.0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), alpha0);
    if (ec == std::errc() && ptr == rest.data() + rest.size() && !rest.empty())
      return bdeu(alpha0);
  }
  throw Error(ErrorKind::DomainError,
              "unknown metric '" + std::string(label) + "' (expected k2, gu or bdeu<alpha0>)");
}

std::string MetricSpec::family() const {
  switch (kind_) {
    case MetricKind::K2: return "k2";
    case MetricKind::GU: return "gu";
    case MetricKind::BDeu: return "bdeu";
  }
  return "?";
}

std::string MetricSpec::label() const {
  if (kind_ != MetricKind::BDeu) return family();
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, *alpha0_);
  return "bdeu" + std::string(buf, ptr);
}

double k2_log_score(const SufficientStats& stats) {
  double total = 0.0;
  for (const FamilyCounts& f : stats.families)
    for (std::size_t j = 0; j < f.configs; ++j) total += log_dirichlet_multinomial(f.row(j), 1.0);
  return total;
}

double k2_log_score(const DagStructure& structure, const Dataset& data) {
  return k2_log_score(count_sufficient_stats(structure, data));
}

double bdeu_log_score(const SufficientStats& stats, double alpha0) {
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0))
    throw Error(ErrorKind::DomainError, "BDeu equivalent sample size must be positive");
  double total = 0.0;
  for (const FamilyCounts& f : stats.families) {
    const double alpha = alpha0 / static_cast<double>(f.configs * f.arity);
    for (std::size_t j = 0; j < f.configs; ++j)
      total += log_dirichlet_multinomial(f.row(j), alpha);
  }
  return total;
}

double bdeu_log_score(const DagStructure& structure, const Dataset& data, double alpha0) {
  return bdeu_log_score(count_sufficient_stats(structure, data), alpha0);
}

double gu_log_score(const DagStructure& structure, const Dataset& data) {
  require_same_schema(structure.variables(), data.variables());
  const CliqueDecomposition decomposition = clique_decomposition(structure);
  if (!decomposition.is_clique_union) {
    const auto [a, b] = *decomposition.missing_adjacency;
    throw Error(ErrorKind::NotCliqueDecomposable,
                "'" + structure.variable(a).name + "' and '" + structure.variable(b).name +
                    "' share a component but are not adjacent");
  }
  double total = 0.0;
  for (const auto& component : decomposition.components)
    total += log_dirichlet_multinomial(joint_cell_counts(component, data), 1.0);
  return total;
}

double log_score(const MetricSpec& metric, const DagStructure& structure, const Dataset& data) {
  switch (metric.kind()) {
    case MetricKind::K2: return k2_log_score(structure, data);
    case MetricKind::BDeu: return bdeu_log_score(structure, data, *metric.alpha0());
    case MetricKind::GU: return gu_log_score(structure, data);
  }
  throw Error(ErrorKind::DomainError, "unknown metric kind");
}

Ratio structure_ratio(const MetricSpec& metric, const DagStructure& dep,
                      const DagStructure& indep, const Dataset& data) {
  return Ratio{log_score(metric, dep, data) - log_score(metric, indep, data)};
}

double arc_posterior(const MetricSpec& metric, std::size_t x, std::size_t y, const Dataset& data) {
  if (x >= data.num_variables() || y >= data.num_variables() || x == y)
    throw Error(ErrorKind::IndexOutOfRange, "arc endpoints must be distinct dataset columns");
  const std::size_t columns[] = {x, y};
  const Dataset pair = data.project(columns);
  const DagStructure dep(pair.variables(), {{}, {0}});
  const DagStructure indep(pair.variables());
  const double log_dep = log_score(metric, dep, pair);
  const double log_indep = log_score(metric, indep, pair);
  const double top = std::max(log_dep, log_indep);
  const double log_norm = top + std::log(std::exp(log_dep - top) + std::exp(log_indep - top));
  return std::exp(log_dep - log_norm);
}

McEstimate mc_marginal_saturated(std::span<const Count> counts, std::size_t samples,
                                 std::uint64_t seed) {
  if (samples < 1000) throw Error(ErrorKind::DomainError, "need at least 1000 samples");
  if (counts.size() < 2) throw Error(ErrorKind::DomainError, "need at least 2 cells");

  Rng rng(seed);
  std::vector<double> draws(counts.size());
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    double total = 0.0;
    for (double& e : draws) {
      e = rng.exponential();
      total += e;
    }
    const double log_total = std::log(total);
    double log_weight = 0.0;
    for (std::size_t c = 0; c < counts.size(); ++c)
      if (counts[c] != 0)
        log_weight += static_cast<double>(counts[c]) * (std::log(draws[c]) - log_total);
    const double weight = std::exp(log_weight);
    // Welford update.
    const double delta = weight - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (weight - mean);
  }
  const double n = static_cast<double>(samples);
  const double variance = m2 / (n - 1.0);
  return McEstimate{mean, std::sqrt(variance / n)};
}

double log_bdeu_ratio_constant_pair(std::uint64_t n_cases, double alpha0) {
  if (n_cases == 0) throw Error(ErrorKind::DomainError, "need at least one case");
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0))
    throw Error(ErrorKind::DomainError, "BDeu equivalent sample size must be positive");
  const double n = static_cast<double>(n_cases);
  const double half = alpha0 / 2.0;
  const double quarter = alpha0 / 4.0;
  return 2.0 * log_gamma(half) + log_gamma(quarter + n) + log_gamma(alpha0 + n) -
         log_gamma(quarter) - log_gamma(alpha0) - 2.0 * log_gamma(half + n);
}

double bdeu_ratio_constant_pair(std::uint64_t n_cases, double alpha0) {
  return std::exp(log_bdeu_ratio_constant_pair(n_cases, alpha0));
}

double gu_ratio_constant_pair(std::uint64_t n_cases) {
  if (n_cases == 0) throw Error(ErrorKind::DomainError, "need at least one case");
  const double n = static_cast<double>(n_cases);
  return 6.0 * (n + 1.0) / ((n + 2.0) * (n + 3.0));
}

}  // namespace bnscore
