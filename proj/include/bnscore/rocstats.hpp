#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bnscore/model.hpp"
#include "bnscore/scoring.hpp"

namespace bnscore {

struct ScoredPair {
  std::size_t x = 0;
  std::size_t y = 0;
  bool positive = false;
  double score = 0.0;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;

  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

/// Points from the strictest threshold to the loosest, (0,0) through (1,1).
struct RocCurve {
  std::vector<RocPoint> points;
};

/// Threshold sweep over the distinct scores, high to low. Tied scores move
/// both rates in one step. Throws DegenerateInput without at least one
/// positive and one negative.
RocCurve roc_points(std::span<const ScoredPair> pairs);

/// Trapezoidal area under the curve.
double auc(const RocCurve& curve);

/// P(score_pos > score_neg) + 0.5 P(tie) over all positive/negative pairs.
double mann_whitney_auc(std::span<const ScoredPair> pairs);

/// {0, 1/intervals, ..., 1}.
std::vector<double> fpr_grid(std::size_t intervals = 46);

/// Highest TPR the piecewise-linear curve reaches at FPR <= fpr.
double tpr_at(const RocCurve& curve, double fpr);

/// Vertical averaging: mean of tpr_at over the curves at each grid point.
RocCurve mean_roc(std::span<const RocCurve> curves, std::span<const double> grid);

double student_t_cdf(double t, double df);
/// Inverts student_t_cdf by bracketing and bisection (|error| well below 1e-6).
double student_t_quantile(double p, double df);

struct ConfidenceInterval {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};

/// mean +- t_{(1+level)/2, n-1} s / sqrt(n). Throws DegenerateInput for n < 2.
ConfidenceInterval t_confidence_interval(std::span<const double> values, double level = 0.95);

using NodePair = std::pair<std::size_t, std::size_t>;

struct PairSets {
  /// Every arc as (parent, child).
  std::vector<NodePair> arcs;
  /// Sampled marginally d-separated pairs (x < y), sorted.
  std::vector<NodePair> negatives;
  /// Number of marginally d-separated unordered pairs in the network.
  std::size_t candidate_count = 0;
};

/// All unordered pairs (x < y) that are d-separated given the empty set.
std::vector<NodePair> marginally_separated_pairs(const DagStructure& structure);

/// Throws InsufficientNegatives if fewer than `negatives` candidates exist.
PairSets enumerate_pair_sets(const BayesNet& net, std::size_t negatives, std::uint64_t seed);

std::vector<MetricSpec> default_metrics();

struct AlarmConfig {
  std::vector<std::size_t> sizes{5, 10, 20, 40, 80, 160};
  std::size_t reps = 100;
  std::vector<MetricSpec> metrics = default_metrics();
  std::uint64_t seed = 42;
  std::size_t negatives = 46;
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  std::size_t jobs = 0;
};

struct AucSummary {
  MetricSpec metric = MetricSpec::k2();
  std::size_t n = 0;
  double mean_auc = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t reps = 0;
};

struct MeanRocCurve {
  MetricSpec metric = MetricSpec::k2();
  std::size_t n = 0;
  RocCurve curve;
};

struct AlarmResult {
  PairSets pairs;
  /// Ordered by size, then metric (config order).
  std::vector<AucSummary> summaries;
  std::vector<MeanRocCurve> mean_curves;
  /// aucs[size][metric][replicate].
  std::vector<std::vector<std::vector<double>>> aucs;

  const AucSummary& summary(const MetricSpec& metric, std::size_t n) const;
};

/// Arc-detection experiment: for each size and replicate r, sample a dataset
/// with seed + r, score every arc and sampled negative pair with
/// arc_posterior under each metric, and summarise the per-replicate AUCs.
/// Positives are scored parent -> child; negatives with the name-wise first
/// node as parent.
AlarmResult run_alarm_experiment(const BayesNet& net, const AlarmConfig& config);

/// metric,alpha0,n,mean_auc,ci_low,ci_high,reps
std::string auc_summary_csv(std::span<const AucSummary> summaries);
/// metric,n,fpr,tpr (metric as label, e.g. bdeu4)
std::string mean_roc_csv(std::span<const MeanRocCurve> curves);

}  // namespace bnscore
