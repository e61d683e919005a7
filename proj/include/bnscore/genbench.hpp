#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bnscore/model.hpp"
#include "bnscore/scoring.hpp"

namespace bnscore {

/// Joint distribution over `variables`, mixed-radix indexed with the first
/// variable most significant.
struct JointTable {
  std::vector<Variable> variables;
  std::vector<double> probs;
};

/// Product of the given marginals. Variables are named X, Y, Z, V4, V5, ...
/// with labels x1, x2, ... (lower-cased name plus 1-based state number).
/// Throws DomainError if a marginal has fewer than 2 entries, a negative
/// entry, or does not sum to 1 within 1e-12.
JointTable independent_joint(const std::vector<std::vector<double>>& marginals);

/// Joint table of independent binary variables with the given P(V = state 1).
JointTable independent_binary_joint(std::span<const double> first_state_probs);

/// Noise-free dataset: each joint cell appears round(p * n) times (half away
/// from zero), cells in index order. The case total is not renormalised.
Dataset noise_free_dataset(const JointTable& joint, std::uint64_t n_cases);

/// Ancestral sampling in topological order with a seeded Rng.
Dataset forward_sample(const BayesNet& net, std::size_t n_cases, std::uint64_t seed);

/// One of the eleven two-variable benchmarks.
struct ExampleSpec {
  int id = 0;
  /// P(X = 1), P(Y = 1).
  std::vector<double> first_state_probs;
  std::vector<std::uint64_t> sizes;
  std::vector<double> alpha0_values;
  /// alpha0 grid swept for every size (Example 11 only).
  std::vector<double> sweep;
};

/// Registry lookup; throws DomainError for ids outside 1..11.
ExampleSpec example_spec(int id);

/// 61 log-spaced points from 1e-2 to 1e4.
std::vector<double> default_alpha0_grid();

struct RatioRow {
  int example = 0;
  /// "bdeu", "k2", "gu"; sweep examples add "bdeu_sweep" per grid point and
  /// "bdeu_max" for the per-size maximum.
  std::string metric;
  std::optional<double> alpha0;
  std::uint64_t n = 0;
  Ratio ratio;
};

struct SweepPoint {
  double alpha0 = 0.0;
  Ratio ratio;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::size_t argmax = 0;

  const SweepPoint& best() const { return points.at(argmax); }
};

/// BDeu ratio of X -> Y over X, Y on the noise-free dataset, per grid alpha0.
/// The grid must be non-empty and ascending.
SweepResult alpha0_sweep(const JointTable& joint, std::uint64_t n_cases,
                         std::span<const double> grid);

/// Ratios for every configured size: BDeu per alpha0, then K2 and GU; for a
/// sweep example also every grid point and the per-size maximum.
std::vector<RatioRow> run_example(const ExampleSpec& spec);

/// CSV with columns example,metric,alpha0,n,ratio,log10_ratio.
std::string ratio_table_csv(std::span<const RatioRow> rows);

}  // namespace bnscore
