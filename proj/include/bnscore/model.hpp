#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bnscore {

/// 0-based index of a variable's state. Labels only exist at the I/O boundary.
using State = std::uint32_t;
using Count = std::uint64_t;

struct Variable {
  std::string name;
  std::vector<std::string> states;

  std::size_t arity() const noexcept { return states.size(); }
  std::optional<State> state_index(std::string_view label) const;

  friend bool operator==(const Variable&, const Variable&) = default;
};

/// Builds a variable and checks it: non-empty token name, arity >= 2,
/// pairwise-distinct labels. Tokens may not contain whitespace or any of
/// `,=|:#` so they survive both file formats unquoted.
Variable make_variable(std::string name, std::vector<std::string> states);

/// Checks every variable plus name uniqueness across the list.
void validate_variables(std::span<const Variable> variables);

/// Throws Error{SelfLoop | DuplicateParent | IndexOutOfRange | CycleDetected}.
/// A CycleDetected message lists the node names along one cycle.
void validate_dag(std::span<const Variable> variables,
                  std::span<const std::vector<std::size_t>> parents);

/// Variables plus acyclic parent lists. Immutable once constructed; the
/// constructor runs validate_variables and validate_dag.
class DagStructure {
 public:
  DagStructure() = default;
  /// Arcless structure over `variables`.
  explicit DagStructure(std::vector<Variable> variables);
  DagStructure(std::vector<Variable> variables, std::vector<std::vector<std::size_t>> parents);

  std::size_t size() const noexcept { return variables_.size(); }
  const std::vector<Variable>& variables() const noexcept { return variables_; }
  const Variable& variable(std::size_t i) const { return variables_.at(i); }
  std::span<const std::size_t> parents(std::size_t i) const { return parents_.at(i); }
  std::span<const std::size_t> children(std::size_t i) const { return children_.at(i); }
  const std::vector<std::vector<std::size_t>>& parent_lists() const noexcept { return parents_; }

  /// q_i: product of parent arities, 1 for a root.
  std::size_t parent_configs(std::size_t i) const { return configs_.at(i); }
  std::size_t arc_count() const noexcept;
  bool has_arc(std::size_t from, std::size_t to) const;
  bool adjacent(std::size_t a, std::size_t b) const { return has_arc(a, b) || has_arc(b, a); }
  std::optional<std::size_t> find(std::string_view name) const;
  std::vector<std::size_t> topological_order() const;

  friend bool operator==(const DagStructure& a, const DagStructure& b) {
    return a.variables_ == b.variables_ && a.parents_ == b.parents_;
  }

 private:
  std::vector<Variable> variables_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> configs_;
};

/// Mixed-radix index of a parent configuration, first listed parent most
/// significant. Throws StateOutOfRange / LengthMismatch.
std::size_t parent_config_index(const DagStructure& structure, std::size_t var,
                                std::span<const State> parent_states);

/// Inverse of parent_config_index.
std::vector<State> parent_config_states(const DagStructure& structure, std::size_t var,
                                        std::size_t config);

/// Complete discrete cases over a fixed schema, stored row-major.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Variable> variables);
  Dataset(std::vector<Variable> variables, const std::vector<std::vector<State>>& cases);

  void add_case(std::span<const State> states);
  void add_case(std::initializer_list<State> states) {
    add_case(std::span<const State>(states.begin(), states.size()));
  }
  /// Appends the same case `times` times.
  void add_repeated(std::span<const State> states, Count times);

  std::size_t num_variables() const noexcept { return variables_.size(); }
  std::size_t num_cases() const noexcept {
    return variables_.empty() ? 0 : cells_.size() / variables_.size();
  }
  const std::vector<Variable>& variables() const noexcept { return variables_; }
  State at(std::size_t row, std::size_t column) const {
    return cells_[row * variables_.size() + column];
  }
  std::span<const State> row(std::size_t r) const {
    return {cells_.data() + r * variables_.size(), variables_.size()};
  }

  /// Dataset restricted to `columns`, in the given order.
  Dataset project(std::span<const std::size_t> columns) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Variable> variables_;
  std::vector<State> cells_;
};

/// Throws SchemaMismatch unless both variable lists are identical.
void require_same_schema(std::span<const Variable> expected, std::span<const Variable> actual);

/// N_ijk for one variable: `configs` rows of `arity` counts.
struct FamilyCounts {
  std::size_t arity = 0;
  std::size_t configs = 0;
  std::vector<Count> counts;

  std::span<const Count> row(std::size_t config) const {
    return {counts.data() + config * arity, arity};
  }
  Count at(std::size_t config, std::size_t state) const { return counts[config * arity + state]; }
  Count row_total(std::size_t config) const;
};

struct SufficientStats {
  std::vector<FamilyCounts> families;
  Count cases = 0;
};

SufficientStats count_sufficient_stats(const DagStructure& structure, const Dataset& data);

/// Reachability ("Bayes ball") d-separation test of x and y given `given`.
bool d_separated(const DagStructure& structure, std::size_t x, std::size_t y,
                 std::span<const std::size_t> given = {});

struct CliqueDecomposition {
  /// Connected components of the undirected skeleton, each sorted, ordered
  /// by smallest member.
  std::vector<std::vector<std::size_t>> components;
  bool is_clique_union = true;
  /// First non-adjacent pair found inside a component, if any.
  std::optional<std::pair<std::size_t, std::size_t>> missing_adjacency;
};

CliqueDecomposition clique_decomposition(const DagStructure& structure);

/// Counts over the joint state space of `component` (mixed radix, first
/// listed variable most significant).
std::vector<Count> joint_cell_counts(std::span<const std::size_t> component, const Dataset& data);

/// DagStructure plus one CPT per variable: row j (parent configuration) holds
/// the child's r_i probabilities.
class BayesNet {
 public:
  static constexpr double kRowTolerance = 1e-9;

  BayesNet() = default;
  /// cpts[i] has parent_configs(i) * arity(i) entries. Throws RowSumNotOne,
  /// DomainError (entry outside [0,1]) or LengthMismatch.
  BayesNet(DagStructure structure, std::vector<std::vector<double>> cpts);

  const DagStructure& structure() const noexcept { return structure_; }
  std::span<const double> cpt_row(std::size_t var, std::size_t config) const;
  const std::vector<double>& cpt(std::size_t var) const { return cpts_.at(var); }

  friend bool operator==(const BayesNet&, const BayesNet&) = default;

 private:
  DagStructure structure_;
  std::vector<std::vector<double>> cpts_;
};

}  // namespace bnscore
