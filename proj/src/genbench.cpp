#include "bnscore/genbench.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "bnscore/error.hpp"
#include "bnscore/random.hpp"

namespace bnscore {

namespace {

constexpr double kMarginalTolerance = 1e-12;

std::string variable_name(std::size_t i) {
  static const char* const kFirst[] = {"X", "Y", "Z"};
  return i < 3 ? kFirst[i] : "V" + std::to_string(i + 1);
}

std::string shortest(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

// X -> Y and the arcless pair over the first two variables of `data`.
std::pair<DagStructure, DagStructure> pair_structures(const Dataset& data) {
  return {DagStructure(data.variables(), {{}, {0}}), DagStructure(data.variables())};
}

}  // namespace

JointTable independent_joint(const std::vector<std::vector<double>>& marginals) {
  if (marginals.empty()) throw Error(ErrorKind::DomainError, "need at least one marginal");
  JointTable joint;
  joint.probs = {1.0};
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    const auto& m = marginals[i];
    if (m.size() < 2)
      throw Error(ErrorKind::DomainError, "marginal " + std::to_string(i) + " needs >= 2 states");
    double sum = 0.0;
    for (double p : m) {
      if (!(p >= 0.0 && p <= 1.0))
        throw Error(ErrorKind::DomainError, "marginal entries must lie in [0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kMarginalTolerance)
      throw Error(ErrorKind::DomainError,
                  "marginal " + std::to_string(i) + " sums to " + shortest(sum));

    Variable v{variable_name(i), {}};
    std::string prefix = v.name;
    std::transform(prefix.begin(), prefix.end(), prefix.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (std::size_t k = 0; k < m.size(); ++k) v.states.push_back(prefix + std::to_string(k + 1));
    joint.variables.push_back(std::move(v));

    std::vector<double> next;
    next.reserve(joint.probs.size() * m.size());
    for (double p : joint.probs)
      for (double q : m) next.push_back(p * q);
    joint.probs = std::move(next);
  }
  return joint;
}

JointTable independent_binary_joint(std::span<const double> first_state_probs) {
  std::vector<std::vector<double>> marginals;
  for (double p : first_state_probs) marginals.push_back({p, 1.0 - p});
  return independent_joint(marginals);
}

Dataset noise_free_dataset(const JointTable& joint, std::uint64_t n_cases) {
  if (n_cases == 0) throw Error(ErrorKind::DomainError, "need at least one case");
  Dataset data(joint.variables);
  const std::size_t width = joint.variables.size();
  std::vector<State> states(width);
  for (std::size_t cell = 0; cell < joint.probs.size(); ++cell) {
    // std::round rounds halves away from zero.
    const double expected = joint.probs[cell] * static_cast<double>(n_cases);
    const auto count = static_cast<Count>(std::round(expected));
    std::size_t rest = cell;
    for (std::size_t v = width; v-- > 0;) {
      const std::size_t arity = joint.variables[v].arity();
      states[v] = static_cast<State>(rest % arity);
      rest /= arity;
    }
    data.add_repeated(states, count);
  }
  return data;
}

Dataset forward_sample(const BayesNet& net, std::size_t n_cases, std::uint64_t seed) {
  const DagStructure& s = net.structure();
  const std::vector<std::size_t> order = s.topological_order();
  Rng rng(seed);
  Dataset data(s.variables());
  std::vector<State> row(s.size());
  for (std::size_t c = 0; c < n_cases; ++c) {
    for (std::size_t v : order) {
      std::size_t config = 0;
      for (std::size_t p : s.parents(v)) config = config * s.variable(p).arity() + row[p];
      const auto probs = net.cpt_row(v, config);
      const double u = rng.uniform();
      double cumulative = 0.0;
      std::size_t pick = probs.size();
      std::size_t last_positive = 0;
      for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] > 0.0) last_positive = k;
        cumulative += probs[k];
        if (u < cumulative && probs[k] > 0.0) {
          pick = k;
          break;
        }
      }
      // Row sums can fall short of 1 by rounding; the remainder goes to the
      // last state with positive probability.
      row[v] = static_cast<State>(pick < probs.size() ? pick : last_positive);
    }
    data.add_case(row);
  }
  return data;
}

ExampleSpec example_spec(int id) {
  const std::vector<double> standard_alphas{0.01, 1.0, 4.0};
  switch (id) {
    case 1: return {1, {1.0, 1.0}, {10, 1000, 100000}, standard_alphas, {}};
    case 2: return {2, {0.999, 0.999}, {1000}, standard_alphas, {}};
    case 3: return {3, {0.9, 0.999}, {1000}, standard_alphas, {}};
    case 4: return {4, {0.7, 0.999}, {1000}, standard_alphas, {}};
    case 5: return {5, {0.5, 0.999}, {1000}, standard_alphas, {}};
    case 6: return {6, {0.5, 0.5}, {1000}, standard_alphas, {}};
    case 7: return {7, {0.9, 0.5}, {1000}, standard_alphas, {}};
    case 8: return {8, {0.99, 0.5}, {1000}, standard_alphas, {}};
    case 9: return {9, {0.9995, 0.5}, {1000}, standard_alphas, {}};
    case 10: return {10, {0.999, 0.55}, {100, 500, 1000, 2000}, standard_alphas, {}};
    case 11:
      return {11, {0.999, 0.55}, {100, 500, 1000, 2000}, standard_alphas, default_alpha0_grid()};
    default: break;
  }
  throw Error(ErrorKind::DomainError,
              "unknown example " + std::to_string(id) + " (expected 1..11)");
}

std::vector<double> default_alpha0_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(std::pow(10.0, -2.0 + i / 10.0));
  return grid;
}

SweepResult alpha0_sweep(const JointTable& joint, std::uint64_t n_cases,
                         std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorKind::DomainError, "empty alpha0 grid");
  if (!std::is_sorted(grid.begin(), grid.end()) ||
      std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw Error(ErrorKind::DomainError, "alpha0 grid must be strictly ascending");
  const Dataset data = noise_free_dataset(joint, n_cases);
  const auto [dep, indep] = pair_structures(data);
  const SufficientStats dep_stats = count_sufficient_stats(dep, data);
  const SufficientStats indep_stats = count_sufficient_stats(indep, data);

  SweepResult result;
  for (double alpha0 : grid) {
    const Ratio r{bdeu_log_score(dep_stats, alpha0) - bdeu_log_score(indep_stats, alpha0)};
    result.points.push_back({alpha0, r});
    if (r.log_value > result.points[result.argmax].ratio.log_value)
      result.argmax = result.points.size() - 1;
  }
  return result;
}

std::vector<RatioRow> run_example(const ExampleSpec& spec) {
  const JointTable joint = independent_binary_joint(spec.first_state_probs);
  std::vector<RatioRow> rows;
  for (std::uint64_t n : spec.sizes) {
    const Dataset data = noise_free_dataset(joint, n);
    const auto [dep, indep] = pair_structures(data);
    for (double alpha0 : spec.alpha0_values)
      rows.push_back({spec.id, "bdeu", alpha0, n,
                      structure_ratio(MetricSpec::bdeu(alpha0), dep, indep, data)});
    rows.push_back({spec.id, "k2", std::nullopt, n,
                    structure_ratio(MetricSpec::k2(), dep, indep, data)});
    rows.push_back({spec.id, "gu", std::nullopt, n,
                    structure_ratio(MetricSpec::gu(), dep, indep, data)});
    if (!spec.sweep.empty()) {
      const SweepResult sweep = alpha0_sweep(joint, n, spec.sweep);
      for (const SweepPoint& p : sweep.points)
        rows.push_back({spec.id, "bdeu_sweep", p.alpha0, n, p.ratio});
      rows.push_back({spec.id, "bdeu_max", sweep.best().alpha0, n, sweep.best().ratio});
    }
  }
  return rows;
}

std::string ratio_table_csv(std::span<const RatioRow> rows) {
  std::string out = "example,metric,alpha0,n,ratio,log10_ratio\n";
  for (const RatioRow& r : rows) {
    out += std::to_string(r.example) + ',' + r.metric + ',';
    if (r.alpha0) out += shortest(*r.alpha0);
    out += ',' + std::to_string(r.n) + ',' + shortest(r.ratio.value()) + ',' +
           shortest(r.ratio.log10()) + '\n';
  }
  return out;
}

}  // namespace bnscore
