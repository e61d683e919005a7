#include "bnscore/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "bnscore/error.hpp"
#include "bnscore/genbench.hpp"
#include "bnscore/netio.hpp"
#include "bnscore/rocstats.hpp"
#include "bnscore/scoring.hpp"

namespace bnscore::cli {

namespace {

// Thrown while reading inputs; mapped to exit code 2.
struct InputFailure {
  std::string message;
};

std::string format_significant(double value, int digits) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, digits);
  return std::string(buf, ptr);
}

std::string shortest(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

template <typename Fn>
auto load(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw InputFailure{e.what()};
  }
}

BayesNet load_network(const std::string& path) {
  return load([&] { return parse_network(read_text_file(path)).net; });
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

struct ScoreOptions {
  std::string data;
  std::string net;
  std::string structure;
  std::string metric;
  std::optional<double> alpha0;
};

int cmd_score(const ScoreOptions& o, std::ostream& out, std::ostream& err) {
  if (o.net.empty() == o.structure.empty()) {
    err << "score: give exactly one of --net or --structure\n";
    return kExitUsageError;
  }
  if ((o.metric == "bdeu") != o.alpha0.has_value()) {
    err << "score: --alpha0 is required with --metric bdeu and not allowed otherwise\n"
        << "usage: bnscore score --data PATH (--net PATH | --structure PATH) "
           "--metric {k2|bdeu|gu} [--alpha0 R]\n";
    return kExitUsageError;
  }
  const MetricSpec metric = o.metric == "k2"   ? MetricSpec::k2()
                            : o.metric == "gu" ? MetricSpec::gu()
                                               : MetricSpec::bdeu(*o.alpha0);
  const DagStructure structure =
      o.net.empty() ? load([&] { return parse_structure(read_text_file(o.structure)); })
                    : load_network(o.net).structure();
  const Dataset data =
      load([&] { return parse_dataset(read_text_file(o.data), structure.variables()); });
  const double ln = log_score(metric, structure, data);
  out << "log10_score=" << format_significant(ln / std::log(10.0), 12) << '\n';
  return kExitOk;
}

int cmd_bench(int example, const std::string& out_path, std::ostream& out) {
  const ExampleSpec spec = example_spec(example);
  const std::vector<RatioRow> rows = run_example(spec);
  const std::string csv = ratio_table_csv(rows);
  if (out_path.empty()) {
    out << csv;
    return kExitOk;
  }
  write_text_file(out_path, csv);
  for (const RatioRow& r : rows) {
    if (r.metric == "bdeu_sweep") continue;
    out << "example=" << r.example << " metric=" << r.metric;
    if (r.alpha0) out << " alpha0=" << shortest(*r.alpha0);
    out << " n=" << r.n << " ratio=" << format_significant(r.ratio.value(), 6)
        << " log10_ratio=" << format_significant(r.ratio.log10(), 6) << '\n';
  }
  return kExitOk;
}

int cmd_sample(const std::string& net_path, std::size_t n, std::uint64_t seed,
               const std::string& out_path, std::ostream& out) {
  const BayesNet net = load_network(net_path);
  emit(out_path, write_dataset(forward_sample(net, n, seed)), out);
  return kExitOk;
}

struct RocOptions {
  std::string net;
  std::vector<std::size_t> sizes{5, 10, 20, 40, 80, 160};
  std::size_t reps = 100;
  std::uint64_t seed = 42;
  std::vector<std::string> metrics{"bdeu0.01", "bdeu1", "bdeu4", "k2", "gu"};
  std::string out_dir;
  std::size_t jobs = 0;
};

int cmd_roc(const RocOptions& o, std::ostream& out) {
  AlarmConfig config;
  config.sizes = o.sizes;
  config.reps = o.reps;
  config.seed = o.seed;
  config.jobs = o.jobs;
  config.metrics.clear();
  for (const std::string& m : o.metrics) config.metrics.push_back(MetricSpec::parse(m));
  const BayesNet net = load_network(o.net);

  const AlarmResult result = run_alarm_experiment(net, config);
  if (!o.out_dir.empty()) {
    std::filesystem::create_directories(o.out_dir);
    const std::filesystem::path dir(o.out_dir);
    write_text_file(dir / "auc_summary.csv", auc_summary_csv(result.summaries));
    write_text_file(dir / "mean_roc.csv", mean_roc_csv(result.mean_curves));
  }
  out << "arcs=" << result.pairs.arcs.size()
      << " separated_pairs=" << result.pairs.candidate_count
      << " sampled_negatives=" << result.pairs.negatives.size() << '\n';
  for (const AucSummary& s : result.summaries)
    out << s.metric.label() << " n=" << s.n << " mean_auc=" << format_significant(s.mean_auc, 4)
        << " ci95=[" << format_significant(s.ci_low, 4) << ", "
        << format_significant(s.ci_high, 4) << "] reps=" << s.reps << '\n';
  return kExitOk;
}

struct DsepOptions {
  std::string net;
  std::string x;
  std::string y;
  std::vector<std::string> given;
  bool count_marginal = false;
};

int cmd_dsep(const DsepOptions& o, std::ostream& out, std::ostream& err) {
  const BayesNet net = load_network(o.net);
  const DagStructure& s = net.structure();
  if (o.count_marginal) {
    out << "marginal_dsep_pairs=" << marginally_separated_pairs(s).size() << '\n';
    return kExitOk;
  }
  if (o.x.empty() || o.y.empty()) {
    err << "dsep: --x and --y are required unless --count-marginal is given\n";
    return kExitUsageError;
  }
  auto resolve = [&](const std::string& name) {
    if (auto i = s.find(name)) return *i;
    throw Error(ErrorKind::UnknownVariable, "'" + name + "' is not a network variable");
  };
  std::vector<std::size_t> given;
  for (const std::string& g : o.given) given.push_back(resolve(g));
  const bool separated = d_separated(s, resolve(o.x), resolve(o.y), given);
  out << "d-separated=" << (separated ? "true" : "false") << '\n';
  return kExitOk;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian network structure scores under K2, BDeu and global-uniform priors",
               "bnscore"};
  app.require_subcommand(1);

  ScoreOptions score;
  auto* score_cmd = app.add_subcommand("score", "Print the log10 marginal likelihood of a structure");
  score_cmd->add_option("--data", score.data, "Dataset CSV")->required();
  score_cmd->add_option("--net", score.net, "Network file (.bn) supplying the structure");
  score_cmd->add_option("--structure", score.structure, "Structure file (.bn, CPTs optional)");
  score_cmd->add_option("--metric", score.metric, "k2, bdeu or gu")
      ->required()
      ->check(CLI::IsMember({"k2", "bdeu", "gu"}));
  score_cmd->add_option("--alpha0", score.alpha0, "BDeu equivalent sample size");

  int example = 0;
  std::string bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "Ratio table for one of the 11 benchmark examples");
  bench_cmd->add_option("--example", example, "Example id")->required();
  bench_cmd->add_option("--out", bench_out, "CSV output path (stdout when omitted)");

  std::string sample_net;
  std::string sample_out;
  std::size_t sample_n = 0;
  std::uint64_t sample_seed = 42;
  auto* sample_cmd = app.add_subcommand("sample", "Forward-sample a dataset from a network");
  sample_cmd->add_option("--net", sample_net, "Network file (.bn)")->required();
  sample_cmd->add_option("--n", sample_n, "Number of cases")->required();
  sample_cmd->add_option("--seed", sample_seed, "Random seed")->capture_default_str();
  sample_cmd->add_option("--out", sample_out, "CSV output path (stdout when omitted)");

  RocOptions roc;
  auto* roc_cmd = app.add_subcommand("roc", "Arc-detection ROC/AUC experiment");
  roc_cmd->add_option("--net", roc.net, "Network file (.bn)")->required();
  roc_cmd->add_option("--sizes", roc.sizes, "Dataset sizes")->delimiter(',')->capture_default_str();
  roc_cmd->add_option("--reps", roc.reps, "Replicates per size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  roc_cmd->add_option("--seed", roc.seed, "Random seed")->capture_default_str();
  roc_cmd->add_option("--metrics", roc.metrics, "Metrics: k2, gu, bdeu<alpha0>")
      ->delimiter(',')
      ->capture_default_str();
  roc_cmd->add_option("--out", roc.out_dir, "Directory for auc_summary.csv and mean_roc.csv");
  roc_cmd->add_option("--jobs", roc.jobs, "Worker threads (default: available cores)");

  DsepOptions dsep;
  auto* dsep_cmd = app.add_subcommand("dsep", "d-separation queries");
  dsep_cmd->add_option("--net", dsep.net, "Network file (.bn)")->required();
  dsep_cmd->add_option("--x", dsep.x, "First variable");
  dsep_cmd->add_option("--y", dsep.y, "Second variable");
  dsep_cmd->add_option("--given", dsep.given, "Conditioning variables")->delimiter(',');
  dsep_cmd->add_flag("--count-marginal", dsep.count_marginal,
                     "Count unordered pairs d-separated given the empty set");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsageError;
  }

  try {
    if (score_cmd->parsed()) return cmd_score(score, out, err);
    if (bench_cmd->parsed()) return cmd_bench(example, bench_out, out);
    if (sample_cmd->parsed()) return cmd_sample(sample_net, sample_n, sample_seed, sample_out, out);
    if (roc_cmd->parsed()) return cmd_roc(roc, out);
    if (dsep_cmd->parsed()) return cmd_dsep(dsep, out, err);
  } catch (const InputFailure& f) {
    err << "error: " << f.message << '\n';
    return kExitParseError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::IoError ? kExitParseError : kExitUsageError;
  }
  return kExitUsageError;
}

}  // namespace bnscore::cli
