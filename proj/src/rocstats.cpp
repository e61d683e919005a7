#include "bnscore/rocstats.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <boost/math/special_functions/beta.hpp>

#include "bnscore/error.hpp"
#include "bnscore/genbench.hpp"
#include "bnscore/random.hpp"

namespace bnscore {

namespace {

std::string shortest(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::pair<std::size_t, std::size_t> class_sizes(std::span<const ScoredPair> pairs) {
  const auto pos = static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const ScoredPair& p) { return p.positive; }));
  return {pos, pairs.size() - pos};
}

}  // namespace

RocCurve roc_points(std::span<const ScoredPair> pairs) {
  const auto [positives, negatives] = class_sizes(pairs);
  if (positives == 0 || negatives == 0)
    throw Error(ErrorKind::DegenerateInput, "ROC needs at least one positive and one negative");

  std::vector<ScoredPair> sorted(pairs.begin(), pairs.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredPair& a, const ScoredPair& b) { return a.score > b.score; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    for (; j < sorted.size() && sorted[j].score == sorted[i].score; ++j)
      (sorted[j].positive ? tp : fp) += 1;
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                            static_cast<double>(tp) / static_cast<double>(positives)});
    i = j;
  }
  return curve;
}

double auc(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const RocPoint& a = curve.points[i - 1];
    const RocPoint& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return area;
}

double mann_whitney_auc(std::span<const ScoredPair> pairs) {
  const auto [positives, negatives] = class_sizes(pairs);
  if (positives == 0 || negatives == 0)
    throw Error(ErrorKind::DegenerateInput, "AUC needs at least one positive and one negative");
  double wins = 0.0;
  for (const ScoredPair& p : pairs) {
    if (!p.positive) continue;
    for (const ScoredPair& q : pairs) {
      if (q.positive) continue;
      if (p.score > q.score) {
        wins += 1.0;
      } else if (p.score == q.score) {
        wins += 0.5;
      }
    }
  }
  return wins / (static_cast<double>(positives) * static_cast<double>(negatives));
}

std::vector<double> fpr_grid(std::size_t intervals) {
  if (intervals == 0) throw Error(ErrorKind::DomainError, "grid needs at least one interval");
  std::vector<double> grid;
  for (std::size_t k = 0; k <= intervals; ++k)
    grid.push_back(static_cast<double>(k) / static_cast<double>(intervals));
  return grid;
}

double tpr_at(const RocCurve& curve, double fpr) {
  double best = 0.0;
  const auto& pts = curve.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].fpr <= fpr) {
      best = std::max(best, pts[i].tpr);
    } else if (i > 0 && pts[i - 1].fpr <= fpr) {
      const RocPoint& a = pts[i - 1];
      const RocPoint& b = pts[i];
      best = std::max(best, a.tpr + (b.tpr - a.tpr) * (fpr - a.fpr) / (b.fpr - a.fpr));
    }
  }
  return best;
}

RocCurve mean_roc(std::span<const RocCurve> curves, std::span<const double> grid) {
  if (curves.empty()) throw Error(ErrorKind::DegenerateInput, "no curves to average");
  RocCurve mean;
  for (double f : grid) {
    double total = 0.0;
    for (const RocCurve& c : curves) total += tpr_at(c, f);
    mean.points.push_back({f, total / static_cast<double>(curves.size())});
  }
  return mean;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw Error(ErrorKind::DomainError, "degrees of freedom must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  // P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2).
  const double x = df / (df + t * t);
  const double tail = 0.5 * boost::math::ibeta(df / 2.0, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::DomainError, "quantile level must be in (0,1)");
  if (!(df > 0.0)) throw Error(ErrorKind::DomainError, "degrees of freedom must be positive");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -student_t_quantile(1.0 - p, df);

  double lo = 0.0;
  double hi = 1.0;
  while (student_t_cdf(hi, df) < p) {
    lo = hi;
    hi *= 2.0;
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++iter) {
    const double mid = 0.5 * (lo + hi);
    (student_t_cdf(mid, df) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ConfidenceInterval t_confidence_interval(std::span<const double> values, double level) {
  if (values.size() < 2)
    throw Error(ErrorKind::DegenerateInput, "confidence interval needs at least 2 values");
  if (!(level > 0.0 && level < 1.0))
    throw Error(ErrorKind::DomainError, "confidence level must be in (0,1)");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const double half = student_t_quantile((1.0 + level) / 2.0, n - 1.0) * sd / std::sqrt(n);
  return {mean, mean - half, mean + half};
}

std::vector<NodePair> marginally_separated_pairs(const DagStructure& structure) {
  std::vector<NodePair> pairs;
  for (std::size_t x = 0; x < structure.size(); ++x)
    for (std::size_t y = x + 1; y < structure.size(); ++y)
      if (d_separated(structure, x, y)) pairs.emplace_back(x, y);
  return pairs;
}

PairSets enumerate_pair_sets(const BayesNet& net, std::size_t negatives, std::uint64_t seed) {
  const DagStructure& s = net.structure();
  PairSets sets;
  for (std::size_t child = 0; child < s.size(); ++child)
    for (std::size_t parent : s.parents(child)) sets.arcs.emplace_back(parent, child);

  std::vector<NodePair> candidates = marginally_separated_pairs(s);
  sets.candidate_count = candidates.size();
  if (candidates.size() < negatives)
    throw Error(ErrorKind::InsufficientNegatives,
                "only " + std::to_string(candidates.size()) +
                    " marginally d-separated pairs, need " + std::to_string(negatives));

  // Partial Fisher-Yates.
  Rng rng(seed);
  for (std::size_t i = 0; i < negatives; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
  }
  sets.negatives.assign(candidates.begin(),
                        candidates.begin() + static_cast<std::ptrdiff_t>(negatives));
  std::sort(sets.negatives.begin(), sets.negatives.end());
  return sets;
}

std::vector<MetricSpec> default_metrics() {
  return {MetricSpec::bdeu(0.01), MetricSpec::bdeu(1.0), MetricSpec::bdeu(4.0), MetricSpec::k2(),
          MetricSpec::gu()};
}

const AucSummary& AlarmResult::summary(const MetricSpec& metric, std::size_t n) const {
  for (const AucSummary& s : summaries)
    if (s.metric == metric && s.n == n) return s;
  throw Error(ErrorKind::DomainError, "no summary for " + metric.label() + " at n=" +
                                          std::to_string(n));
}

AlarmResult run_alarm_experiment(const BayesNet& net, const AlarmConfig& config) {
  if (config.reps == 0) throw Error(ErrorKind::DomainError, "need at least one replicate");
  if (config.metrics.empty()) throw Error(ErrorKind::DomainError, "no metrics selected");
  const DagStructure& s = net.structure();

  AlarmResult result;
  result.pairs = enumerate_pair_sets(net, config.negatives, config.seed);

  // Scoring order: (parent, child) for arcs; name order for negatives.
  std::vector<ScoredPair> templates;
  for (const auto& [parent, child] : result.pairs.arcs) templates.push_back({parent, child, true, 0});
  for (auto [a, b] : result.pairs.negatives) {
    if (s.variable(b).name < s.variable(a).name) std::swap(a, b);
    templates.push_back({a, b, false, 0});
  }

  const std::size_t n_sizes = config.sizes.size();
  const std::size_t n_metrics = config.metrics.size();
  result.aucs.assign(n_sizes, std::vector<std::vector<double>>(
                                  n_metrics, std::vector<double>(config.reps, 0.0)));
  std::vector<std::vector<std::vector<RocCurve>>> curves(
      n_sizes, std::vector<std::vector<RocCurve>>(n_metrics, std::vector<RocCurve>(config.reps)));

  const std::size_t tasks = n_sizes * config.reps;
  auto run_task = [&](std::size_t task) {
    const std::size_t size_index = task / config.reps;
    const std::size_t rep = task % config.reps;
    const Dataset data = forward_sample(net, config.sizes[size_index], config.seed + rep);
    for (std::size_t m = 0; m < n_metrics; ++m) {
      std::vector<ScoredPair> scored = templates;
      for (ScoredPair& p : scored) p.score = arc_posterior(config.metrics[m], p.x, p.y, data);
      RocCurve curve = roc_points(scored);
      const double area = auc(curve);
      if (std::abs(area - mann_whitney_auc(scored)) > 1e-12)
        throw std::logic_error("trapezoidal AUC disagrees with Mann-Whitney statistic");
      result.aucs[size_index][m][rep] = area;
      curves[size_index][m][rep] = std::move(curve);
    }
  };

  std::size_t jobs = config.jobs ? config.jobs : std::thread::hardware_concurrency();
  jobs = std::clamp<std::size_t>(jobs, 1, tasks);
  if (jobs == 1) {
    for (std::size_t t = 0; t < tasks; ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < jobs; ++w)
      workers.emplace_back([&] {
        for (std::size_t t; (t = next.fetch_add(1)) < tasks;) {
          try {
            run_task(t);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = tasks;
          }
        }
      });
    for (auto& w : workers) w.join();
    if (failure) std::rethrow_exception(failure);
  }

  const std::vector<double> grid = fpr_grid(config.negatives);
  for (std::size_t si = 0; si < n_sizes; ++si) {
    for (std::size_t m = 0; m < n_metrics; ++m) {
      const auto& values = result.aucs[si][m];
      AucSummary summary{config.metrics[m], config.sizes[si], 0.0, 0.0, 0.0, config.reps};
      if (values.size() >= 2) {
        const ConfidenceInterval ci = t_confidence_interval(values);
        summary.mean_auc = ci.mean;
        summary.ci_low = std::clamp(ci.low, 0.0, 1.0);
        summary.ci_high = std::clamp(ci.high, 0.0, 1.0);
      } else {
        summary.mean_auc = summary.ci_low = summary.ci_high = values.front();
      }
      result.summaries.push_back(summary);
      result.mean_curves.push_back(
          {config.metrics[m], config.sizes[si], mean_roc(curves[si][m], grid)});
    }
  }
  return result;
}

std::string auc_summary_csv(std::span<const AucSummary> summaries) {
  std::string out = "metric,alpha0,n,mean_auc,ci_low,ci_high,reps\n";
  for (const AucSummary& s : summaries) {
    out += s.metric.family() + ',';
    if (auto a = s.metric.alpha0()) out += shortest(*a);
    out += ',' + std::to_string(s.n) + ',' + shortest(s.mean_auc) + ',' + shortest(s.ci_low) +
           ',' + shortest(s.ci_high) + ',' + std::to_string(s.reps) + '\n';
  }
  return out;
}

std::string mean_roc_csv(std::span<const MeanRocCurve> curves) {
  std::string out = "metric,n,fpr,tpr\n";
  for (const MeanRocCurve& c : curves)
    for (const RocPoint& p : c.curve.points)
      out += c.metric.label() + ',' + std::to_string(c.n) + ',' + shortest(p.fpr) + ',' +
             shortest(p.tpr) + '\n';
  return out;
}

}  // namespace bnscore
