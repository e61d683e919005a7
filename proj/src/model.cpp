#include "bnscore/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

#include "bnscore/error.hpp"

namespace bnscore {

namespace {

bool valid_token(std::string_view token) {
  if (token.empty()) return false;
  return std::none_of(token.begin(), token.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '=' || c == '|' ||
           c == ':' || c == '#';
  });
}

std::string quote(std::string_view s) { return "'" + std::string(s) + "'"; }

}  // namespace

std::optional<State> Variable::state_index(std::string_view label) const {
  auto it = std::find(states.begin(), states.end(), label);
  if (it == states.end()) return std::nullopt;
  return static_cast<State>(it - states.begin());
}

Variable make_variable(std::string name, std::vector<std::string> states) {
  Variable v{std::move(name), std::move(states)};
  validate_variables(std::span<const Variable>(&v, 1));
  return v;
}

void validate_variables(std::span<const Variable> variables) {
  std::set<std::string_view> names;
  for (const Variable& v : variables) {
    if (!valid_token(v.name))
      throw Error(ErrorKind::InvalidVariable, "invalid variable name " + quote(v.name));
    if (!names.insert(v.name).second)
      throw Error(ErrorKind::InvalidVariable, "duplicate variable name " + quote(v.name));
    if (v.arity() < 2)
      throw Error(ErrorKind::InvalidVariable,
                  "variable " + quote(v.name) + " needs at least 2 states");
    std::set<std::string_view> labels;
    for (const std::string& s : v.states) {
      if (!valid_token(s))
        throw Error(ErrorKind::InvalidVariable,
                    "invalid state label " + quote(s) + " for " + quote(v.name));
      if (!labels.insert(s).second)
        throw Error(ErrorKind::InvalidVariable,
                    "duplicate state label " + quote(s) + " for " + quote(v.name));
    }
  }
}

void validate_dag(std::span<const Variable> variables,
                  std::span<const std::vector<std::size_t>> parents) {
  const std::size_t n = variables.size();
  if (parents.size() != n)
    throw Error(ErrorKind::LengthMismatch, "expected one parent list per variable");

  for (std::size_t i = 0; i < n; ++i) {
    std::set<std::size_t> seen;
    for (std::size_t p : parents[i]) {
      if (p >= n)
        throw Error(ErrorKind::IndexOutOfRange,
                    "parent index " + std::to_string(p) + " of " + quote(variables[i].name));
      if (p == i) throw Error(ErrorKind::SelfLoop, quote(variables[i].name) + " lists itself");
      if (!seen.insert(p).second)
        throw Error(ErrorKind::DuplicateParent,
                    quote(variables[p].name) + " listed twice as parent of " +
                        quote(variables[i].name));
    }
  }

  // Iterative DFS over parent edges; a grey node reached again closes a cycle.
  enum class Mark { White, Grey, Black };
  std::vector<Mark> mark(n, Mark::White);
  std::vector<std::size_t> via(n, n);
  for (std::size_t root = 0; root < n; ++root) {
    if (mark[root] != Mark::White) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    mark[root] = Mark::Grey;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < parents[node].size()) {
        std::size_t p = parents[node][next++];
        if (mark[p] == Mark::Grey) {
          // p ... node -> p: walk the DFS chain back from node to p.
          std::vector<std::size_t> cycle{p};
          for (std::size_t v = node; v != p; v = via[v]) cycle.push_back(v);
          // DFS walks child -> parent, so p, node, ..., is already arc order.
          std::string msg;
          for (std::size_t v : cycle) msg += variables[v].name + " -> ";
          msg += variables[cycle.front()].name;
          throw Error(ErrorKind::CycleDetected, msg);
        }
        if (mark[p] == Mark::White) {
          mark[p] = Mark::Grey;
          via[p] = node;
          stack.emplace_back(p, 0);
        }
      } else {
        mark[node] = Mark::Black;
        stack.pop_back();
      }
    }
  }
}

DagStructure::DagStructure(std::vector<Variable> variables)
    : DagStructure(std::move(variables), {}) {}

DagStructure::DagStructure(std::vector<Variable> variables,
                           std::vector<std::vector<std::size_t>> parents)
    : variables_(std::move(variables)), parents_(std::move(parents)) {
  if (parents_.empty()) parents_.resize(variables_.size());
  validate_variables(variables_);
  validate_dag(variables_, parents_);
  children_.resize(variables_.size());
  configs_.resize(variables_.size());
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    std::size_t q = 1;
    for (std::size_t p : parents_[i]) {
      children_[p].push_back(i);
      q *= variables_[p].arity();
    }
    configs_[i] = q;
  }
}

std::size_t DagStructure::arc_count() const noexcept {
  std::size_t total = 0;
  for (const auto& ps : parents_) total += ps.size();
  return total;
}

bool DagStructure::has_arc(std::size_t from, std::size_t to) const {
  const auto& ps = parents_.at(to);
  return std::find(ps.begin(), ps.end(), from) != ps.end();
}

std::optional<std::size_t> DagStructure::find(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i].name == name) return i;
  return std::nullopt;
}

std::vector<std::size_t> DagStructure::topological_order() const {
  // Kahn's algorithm, always taking the lowest ready index.
  std::vector<std::size_t> pending(size());
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < size(); ++i) {
    pending[i] = parents_[i].size();
    if (pending[i] == 0) ready.insert(i);
  }
  std::vector<std::size_t> order;
  order.reserve(size());
  while (!ready.empty()) {
    std::size_t v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (std::size_t c : children_[v])
      if (--pending[c] == 0) ready.insert(c);
  }
  return order;
}

std::size_t parent_config_index(const DagStructure& structure, std::size_t var,
                                std::span<const State> parent_states) {
  auto parents = structure.parents(var);
  if (parent_states.size() != parents.size())
    throw Error(ErrorKind::LengthMismatch, "expected " + std::to_string(parents.size()) +
                                               " parent states for " +
                                               quote(structure.variable(var).name));
  std::size_t index = 0;
  for (std::size_t k = 0; k < parents.size(); ++k) {
    const std::size_t arity = structure.variable(parents[k]).arity();
    if (parent_states[k] >= arity)
      throw Error(ErrorKind::StateOutOfRange,
                  "state " + std::to_string(parent_states[k]) + " of " +
                      quote(structure.variable(parents[k]).name));
    index = index * arity + parent_states[k];
  }
  return index;
}

std::vector<State> parent_config_states(const DagStructure& structure, std::size_t var,
                                        std::size_t config) {
  auto parents = structure.parents(var);
  if (config >= structure.parent_configs(var))
    throw Error(ErrorKind::IndexOutOfRange, "parent configuration " + std::to_string(config));
  std::vector<State> states(parents.size());
  for (std::size_t k = parents.size(); k-- > 0;) {
    const std::size_t arity = structure.variable(parents[k]).arity();
    states[k] = static_cast<State>(config % arity);
    config /= arity;
  }
  return states;
}

Dataset::Dataset(std::vector<Variable> variables) : variables_(std::move(variables)) {
  validate_variables(variables_);
}

Dataset::Dataset(std::vector<Variable> variables, const std::vector<std::vector<State>>& cases)
    : Dataset(std::move(variables)) {
  cells_.reserve(cases.size() * variables_.size());
  for (const auto& c : cases) add_case(c);
}

void Dataset::add_case(std::span<const State> states) { add_repeated(states, 1); }

void Dataset::add_repeated(std::span<const State> states, Count times) {
  if (states.size() != variables_.size())
    throw Error(ErrorKind::LengthMismatch, "case has " + std::to_string(states.size()) +
                                               " values, schema has " +
                                               std::to_string(variables_.size()));
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] >= variables_[i].arity())
      throw Error(ErrorKind::StateOutOfRange,
                  "state " + std::to_string(states[i]) + " of " + quote(variables_[i].name));
  for (Count t = 0; t < times; ++t) cells_.insert(cells_.end(), states.begin(), states.end());
}

Dataset Dataset::project(std::span<const std::size_t> columns) const {
  std::vector<Variable> vars;
  for (std::size_t c : columns) {
    if (c >= variables_.size())
      throw Error(ErrorKind::IndexOutOfRange, "column " + std::to_string(c));
    vars.push_back(variables_[c]);
  }
  Dataset out(std::move(vars));
  out.cells_.reserve(num_cases() * columns.size());
  for (std::size_t r = 0; r < num_cases(); ++r)
    for (std::size_t c : columns) out.cells_.push_back(at(r, c));
  return out;
}

void require_same_schema(std::span<const Variable> expected, std::span<const Variable> actual) {
  if (expected.size() != actual.size())
    throw Error(ErrorKind::SchemaMismatch, "expected " + std::to_string(expected.size()) +
                                               " variables, got " +
                                               std::to_string(actual.size()));
  for (std::size_t i = 0; i < expected.size(); ++i)
    if (!(expected[i] == actual[i]))
      throw Error(ErrorKind::SchemaMismatch,
                  "variable " + std::to_string(i) + ": expected " + quote(expected[i].name) +
                      " with " + std::to_string(expected[i].arity()) + " states, got " +
                      quote(actual[i].name) + " with " + std::to_string(actual[i].arity()));
}

Count FamilyCounts::row_total(std::size_t config) const {
  auto r = row(config);
  return std::accumulate(r.begin(), r.end(), Count{0});
}

SufficientStats count_sufficient_stats(const DagStructure& structure, const Dataset& data) {
  require_same_schema(structure.variables(), data.variables());
  SufficientStats stats;
  stats.cases = data.num_cases();
  stats.families.resize(structure.size());
  for (std::size_t i = 0; i < structure.size(); ++i) {
    FamilyCounts& f = stats.families[i];
    f.arity = structure.variable(i).arity();
    f.configs = structure.parent_configs(i);
    f.counts.assign(f.arity * f.configs, 0);
    auto parents = structure.parents(i);
    for (std::size_t r = 0; r < data.num_cases(); ++r) {
      std::size_t j = 0;
      for (std::size_t p : parents) j = j * structure.variable(p).arity() + data.at(r, p);
      ++f.counts[j * f.arity + data.at(r, i)];
    }
  }
  return stats;
}

bool d_separated(const DagStructure& structure, std::size_t x, std::size_t y,
                 std::span<const std::size_t> given) {
  const std::size_t n = structure.size();
  if (x >= n || y >= n) throw Error(ErrorKind::IndexOutOfRange, "query node out of range");
  std::vector<char> observed(n, 0);
  for (std::size_t z : given) {
    if (z >= n) throw Error(ErrorKind::IndexOutOfRange, "conditioning node out of range");
    observed[z] = 1;
  }
  if (x == y || observed[x] || observed[y])
    throw Error(ErrorKind::DomainError, "query nodes must be distinct and unobserved");

  // Observed nodes and their ancestors: colliders there are open.
  std::vector<char> activates(n, 0);
  std::deque<std::size_t> frontier(given.begin(), given.end());
  while (!frontier.empty()) {
    std::size_t v = frontier.front();
    frontier.pop_front();
    if (activates[v]) continue;
    activates[v] = 1;
    for (std::size_t p : structure.parents(v)) frontier.push_back(p);
  }

  // Traverse (node, direction) states. `up` means we arrived from a child.
  enum : int { kUp = 0, kDown = 1 };
  std::vector<std::array<char, 2>> visited(n, {0, 0});
  std::deque<std::pair<std::size_t, int>> queue{{x, kUp}};
  while (!queue.empty()) {
    auto [v, dir] = queue.front();
    queue.pop_front();
    if (visited[v][dir]) continue;
    visited[v][dir] = 1;
    if (v == y) return false;
    if (dir == kUp && !observed[v]) {
      for (std::size_t p : structure.parents(v)) queue.emplace_back(p, kUp);
      for (std::size_t c : structure.children(v)) queue.emplace_back(c, kDown);
    } else if (dir == kDown) {
      if (!observed[v])
        for (std::size_t c : structure.children(v)) queue.emplace_back(c, kDown);
      if (activates[v])
        for (std::size_t p : structure.parents(v)) queue.emplace_back(p, kUp);
    }
  }
  return true;
}

CliqueDecomposition clique_decomposition(const DagStructure& structure) {
  const std::size_t n = structure.size();
  CliqueDecomposition out;
  std::vector<char> assigned(n, 0);
  for (std::size_t start = 0; start < n; ++start) {
    if (assigned[start]) continue;
    std::vector<std::size_t> component;
    std::vector<std::size_t> stack{start};
    assigned[start] = 1;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      component.push_back(v);
      auto visit = [&](std::size_t w) {
        if (!assigned[w]) {
          assigned[w] = 1;
          stack.push_back(w);
        }
      };
      for (std::size_t p : structure.parents(v)) visit(p);
      for (std::size_t c : structure.children(v)) visit(c);
    }
    std::sort(component.begin(), component.end());
    for (std::size_t a = 0; a < component.size() && out.is_clique_union; ++a)
      for (std::size_t b = a + 1; b < component.size(); ++b)
        if (!structure.adjacent(component[a], component[b])) {
          out.is_clique_union = false;
          out.missing_adjacency = std::make_pair(component[a], component[b]);
          break;
        }
    out.components.push_back(std::move(component));
  }
  return out;
}

std::vector<Count> joint_cell_counts(std::span<const std::size_t> component, const Dataset& data) {
  if (component.empty()) throw Error(ErrorKind::DomainError, "empty component");
  std::size_t cells = 1;
  for (std::size_t v : component) {
    if (v >= data.num_variables())
      throw Error(ErrorKind::SchemaMismatch,
                  "component variable " + std::to_string(v) + " not in dataset");
    cells *= data.variables()[v].arity();
  }
  std::vector<Count> counts(cells, 0);
  for (std::size_t r = 0; r < data.num_cases(); ++r) {
    std::size_t cell = 0;
    for (std::size_t v : component) cell = cell * data.variables()[v].arity() + data.at(r, v);
    ++counts[cell];
  }
  return counts;
}

BayesNet::BayesNet(DagStructure structure, std::vector<std::vector<double>> cpts)
    : structure_(std::move(structure)), cpts_(std::move(cpts)) {
  if (cpts_.size() != structure_.size())
    throw Error(ErrorKind::LengthMismatch, "expected one CPT per variable");
  for (std::size_t i = 0; i < structure_.size(); ++i) {
    const std::size_t arity = structure_.variable(i).arity();
    const std::size_t configs = structure_.parent_configs(i);
    const std::string& name = structure_.variable(i).name;
    if (cpts_[i].size() != arity * configs)
      throw Error(ErrorKind::LengthMismatch, "CPT of " + quote(name) + " has " +
                                                 std::to_string(cpts_[i].size()) +
                                                 " entries, expected " +
                                                 std::to_string(arity * configs));
    for (std::size_t j = 0; j < configs; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < arity; ++k) {
        const double p = cpts_[i][j * arity + k];
        if (!(p >= 0.0 && p <= 1.0))
          throw Error(ErrorKind::DomainError, "CPT entry of " + quote(name) + " outside [0,1]");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowTolerance)
        throw Error(ErrorKind::RowSumNotOne, quote(name) + " configuration " +
                                                 std::to_string(j) + " sums to " +
                                                 std::to_string(sum));
    }
  }
}

std::span<const double> BayesNet::cpt_row(std::size_t var, std::size_t config) const {
  const std::size_t arity = structure_.variable(var).arity();
  if (config >= structure_.parent_configs(var))
    throw Error(ErrorKind::IndexOutOfRange, "parent configuration " + std::to_string(config));
  return {cpts_[var].data() + config * arity, arity};
}

}  // namespace bnscore
