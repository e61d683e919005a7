#include "bnscore/netio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "bnscore/error.hpp"

namespace bnscore {

namespace {

// Rows further than this from 1 (but within the BayesNet tolerance) are
// rescaled. Tighter deviations are left alone so that a serialised net parses
// back bit-identical.
constexpr double kRenormalizeAbove = 1e-12;

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  // A trailing newline does not start another line.
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t'; };
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

[[noreturn]] void syntax_error(std::size_t line, const std::string& message) {
  throw Error(ErrorKind::SyntaxError, "line " + std::to_string(line) + ": " + message);
}

std::optional<double> parse_double(std::string_view token) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

std::optional<std::size_t> parse_index(std::string_view token) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) return std::nullopt;
  return value;
}

bool is_unsigned_integer(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

struct PendingCpt {
  std::size_t line;
  std::size_t child;
  std::vector<std::pair<std::size_t, State>> assignments;
  std::vector<double> probs;
};

struct ParsedDocument {
  std::vector<Variable> variables;
  std::vector<std::size_t> var_lines;
  std::vector<std::vector<std::size_t>> parents;
  std::vector<PendingCpt> cpts;
};

ParsedDocument parse_lines(std::string_view text) {
  ParsedDocument doc;
  std::map<std::string, std::size_t, std::less<>> index;

  auto lookup = [&](std::size_t line, std::string_view name) {
    auto it = index.find(name);
    if (it == index.end())
      throw Error(ErrorKind::UnknownVariable, "line " + std::to_string(line) + ": '" +
                                                  std::string(name) + "' is not declared");
    return it->second;
  };

  const auto lines = split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    std::string_view line = lines[n];
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split_whitespace(line);
    if (tokens.empty()) continue;
    const std::string_view keyword = tokens[0];

    if (keyword == "var") {
      if (tokens.size() < 3) syntax_error(line_no, "expected 'var NAME ARITY LABEL...'");
      auto arity = parse_index(tokens[2]);
      if (!arity) syntax_error(line_no, "arity must be a non-negative integer");
      if (*arity != tokens.size() - 3)
        syntax_error(line_no, "arity " + std::to_string(*arity) + " but " +
                                  std::to_string(tokens.size() - 3) + " labels");
      Variable v{std::string(tokens[1]), {}};
      for (std::size_t k = 3; k < tokens.size(); ++k) v.states.emplace_back(tokens[k]);
      try {
        validate_variables(std::span<const Variable>(&v, 1));
      } catch (const Error& e) {
        syntax_error(line_no, e.what());
      }
      if (index.count(v.name)) syntax_error(line_no, "variable '" + v.name + "' declared twice");
      index.emplace(v.name, doc.variables.size());
      doc.variables.push_back(std::move(v));
      doc.var_lines.push_back(line_no);
      doc.parents.emplace_back();
    } else if (keyword == "arc") {
      if (tokens.size() != 3) syntax_error(line_no, "expected 'arc PARENT CHILD'");
      const std::size_t parent = lookup(line_no, tokens[1]);
      const std::size_t child = lookup(line_no, tokens[2]);
      doc.parents[child].push_back(parent);
    } else if (keyword == "cpt") {
      if (tokens.size() < 3 || tokens[2] != "|")
        syntax_error(line_no, "expected 'cpt CHILD | ASSIGNMENTS : PROBS'");
      PendingCpt cpt{line_no, lookup(line_no, tokens[1]), {}, {}};
      std::size_t k = 3;
      for (; k < tokens.size() && tokens[k] != ":"; ++k) {
        const std::string_view assignment = tokens[k];
        const auto eq = assignment.find('=');
        if (eq == std::string_view::npos)
          syntax_error(line_no, "expected PARENT=label, got '" + std::string(assignment) + "'");
        const std::size_t parent = lookup(line_no, assignment.substr(0, eq));
        const auto state = doc.variables[parent].state_index(assignment.substr(eq + 1));
        if (!state)
          syntax_error(line_no, "'" + std::string(assignment.substr(eq + 1)) +
                                    "' is not a state of '" + doc.variables[parent].name + "'");
        cpt.assignments.emplace_back(parent, *state);
      }
      if (k == tokens.size()) syntax_error(line_no, "missing ':' before probabilities");
      for (++k; k < tokens.size(); ++k) {
        auto p = parse_double(tokens[k]);
        if (!p) syntax_error(line_no, "bad probability '" + std::string(tokens[k]) + "'");
        if (*p < 0.0 || *p > 1.0)
          syntax_error(line_no, "probability " + std::string(tokens[k]) + " outside [0,1]");
        cpt.probs.push_back(*p);
      }
      const std::size_t arity = doc.variables[cpt.child].arity();
      if (cpt.probs.size() != arity)
        syntax_error(line_no, "expected " + std::to_string(arity) + " probabilities, got " +
                                  std::to_string(cpt.probs.size()));
      doc.cpts.push_back(std::move(cpt));
    } else {
      syntax_error(line_no, "unknown keyword '" + std::string(keyword) + "'");
    }
  }
  return doc;
}

// Config index of a cpt line, or a syntax error if it does not assign exactly
// the child's parents.
std::size_t config_of(const DagStructure& structure, const PendingCpt& cpt) {
  auto parents = structure.parents(cpt.child);
  std::vector<std::optional<State>> states(parents.size());
  for (const auto& [var, state] : cpt.assignments) {
    auto it = std::find(parents.begin(), parents.end(), var);
    if (it == parents.end())
      syntax_error(cpt.line, "'" + structure.variable(var).name + "' is not a parent of '" +
                                 structure.variable(cpt.child).name + "'");
    auto& slot = states[static_cast<std::size_t>(it - parents.begin())];
    if (slot) syntax_error(cpt.line, "'" + structure.variable(var).name + "' assigned twice");
    slot = state;
  }
  std::vector<State> ordered;
  for (std::size_t k = 0; k < parents.size(); ++k) {
    if (!states[k])
      syntax_error(cpt.line, "missing assignment for parent '" +
                                 structure.variable(parents[k]).name + "'");
    ordered.push_back(*states[k]);
  }
  return parent_config_index(structure, cpt.child, ordered);
}

std::string describe_config(const DagStructure& structure, std::size_t var, std::size_t config) {
  const auto states = parent_config_states(structure, var, config);
  auto parents = structure.parents(var);
  std::string out;
  for (std::size_t k = 0; k < parents.size(); ++k) {
    if (k) out += ' ';
    const Variable& p = structure.variable(parents[k]);
    out += p.name + "=" + p.states[states[k]];
  }
  return out.empty() ? "(root)" : out;
}

}  // namespace

NetworkDocument parse_network(std::string_view text) {
  ParsedDocument doc = parse_lines(text);
  DagStructure structure(doc.variables, doc.parents);

  std::vector<std::vector<double>> cpts(structure.size());
  std::vector<std::vector<char>> seen(structure.size());
  for (std::size_t i = 0; i < structure.size(); ++i) {
    cpts[i].assign(structure.parent_configs(i) * structure.variable(i).arity(), 0.0);
    seen[i].assign(structure.parent_configs(i), 0);
  }

  for (const PendingCpt& cpt : doc.cpts) {
    const std::size_t config = config_of(structure, cpt);
    if (seen[cpt.child][config])
      syntax_error(cpt.line, "duplicate row for '" + structure.variable(cpt.child).name + "' " +
                                 describe_config(structure, cpt.child, config));
    seen[cpt.child][config] = 1;

    double sum = 0.0;
    for (double p : cpt.probs) sum += p;
    const double deviation = std::abs(sum - 1.0);
    if (deviation > BayesNet::kRowTolerance)
      throw Error(ErrorKind::RowSumNotOne,
                  "line " + std::to_string(cpt.line) + ": '" +
                      structure.variable(cpt.child).name + "' " +
                      describe_config(structure, cpt.child, config) + " sums to " +
                      format_double(sum));
    const std::size_t arity = cpt.probs.size();
    for (std::size_t k = 0; k < arity; ++k)
      cpts[cpt.child][config * arity + k] =
          deviation > kRenormalizeAbove ? cpt.probs[k] / sum : cpt.probs[k];
  }

  for (std::size_t i = 0; i < structure.size(); ++i)
    for (std::size_t j = 0; j < structure.parent_configs(i); ++j)
      if (!seen[i][j])
        throw Error(ErrorKind::MissingCptRow, "'" + structure.variable(i).name + "' " +
                                                  describe_config(structure, i, j));

  return NetworkDocument{BayesNet(std::move(structure), std::move(cpts)),
                         std::move(doc.var_lines)};
}

DagStructure parse_structure(std::string_view text) {
  ParsedDocument doc = parse_lines(text);
  DagStructure structure(doc.variables, doc.parents);
  for (const PendingCpt& cpt : doc.cpts) config_of(structure, cpt);
  return structure;
}

std::string serialize_network(const BayesNet& net) {
  const DagStructure& s = net.structure();
  std::ostringstream out;
  for (const Variable& v : s.variables()) {
    out << "var " << v.name << ' ' << v.arity();
    for (const std::string& label : v.states) out << ' ' << label;
    out << '\n';
  }
  if (s.arc_count() > 0) out << '\n';
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t p : s.parents(i))
      out << "arc " << s.variable(p).name << ' ' << s.variable(i).name << '\n';
  out << '\n';
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.parent_configs(i); ++j) {
      out << "cpt " << s.variable(i).name << " |";
      if (s.parents(i).empty()) {
        out << " :";
      } else {
        out << ' ' << describe_config(s, i, j) << " :";
      }
      for (double p : net.cpt_row(i, j)) out << ' ' << format_double(p);
      out << '\n';
    }
  }
  return out.str();
}

Dataset parse_dataset(std::string_view text, const std::vector<Variable>& schema) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorKind::HeaderMismatch, "missing header row");

  auto split_commas = [](std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string_view::npos) {
        cells.push_back(line.substr(start));
        return cells;
      }
      cells.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
  };

  // column_of[c] = schema index of CSV column c.
  const auto header = split_commas(lines[0]);
  if (header.size() != schema.size())
    throw Error(ErrorKind::HeaderMismatch, "header has " + std::to_string(header.size()) +
                                               " columns, schema has " +
                                               std::to_string(schema.size()));
  std::vector<std::size_t> column_of(header.size());
  std::vector<char> used(schema.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) {
    auto it = std::find_if(schema.begin(), schema.end(),
                           [&](const Variable& v) { return v.name == header[c]; });
    if (it == schema.end())
      throw Error(ErrorKind::HeaderMismatch, "unknown column '" + std::string(header[c]) + "'");
    const auto s = static_cast<std::size_t>(it - schema.begin());
    if (used[s]) throw Error(ErrorKind::HeaderMismatch, "duplicate column '" + it->name + "'");
    used[s] = 1;
    column_of[c] = s;
  }

  std::vector<char> numeric_indices(schema.size());
  for (std::size_t s = 0; s < schema.size(); ++s)
    numeric_indices[s] =
        std::none_of(schema[s].states.begin(), schema[s].states.end(), is_unsigned_integer);

  Dataset data(schema);
  std::vector<State> row(schema.size());
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const auto cells = split_commas(lines[n]);
    const std::string where = "row " + std::to_string(n) + " (line " + std::to_string(n + 1) + ")";
    if (cells.size() < header.size())
      throw Error(ErrorKind::MissingValue, where + " has " + std::to_string(cells.size()) +
                                               " cells, expected " +
                                               std::to_string(header.size()));
    if (cells.size() > header.size())
      throw Error(ErrorKind::HeaderMismatch, where + " has more cells than the header");
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::size_t s = column_of[c];
      const Variable& var = schema[s];
      if (cells[c].empty())
        throw Error(ErrorKind::MissingValue, where + ", column '" + var.name + "' is empty");
      if (auto state = var.state_index(cells[c])) {
        row[s] = *state;
        continue;
      }
      if (numeric_indices[s] && is_unsigned_integer(cells[c])) {
        auto idx = parse_index(cells[c]);
        if (idx && *idx < var.arity()) {
          row[s] = static_cast<State>(*idx);
          continue;
        }
      }
      throw Error(ErrorKind::UnknownStateLabel, where + ", column '" + var.name + "': '" +
                                                    std::string(cells[c]) + "'");
    }
    data.add_case(row);
  }
  return data;
}

std::string write_dataset(const Dataset& data) {
  std::string out;
  const auto& vars = data.variables();
  for (std::size_t c = 0; c < vars.size(); ++c) {
    if (c) out += ',';
    out += vars[c].name;
  }
  out += '\n';
  for (std::size_t r = 0; r < data.num_cases(); ++r) {
    for (std::size_t c = 0; c < vars.size(); ++c) {
      if (c) out += ',';
      out += vars[c].states[data.at(r, c)];
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::IoError, "write failed for '" + path.string() + "'");
}

}  // namespace bnscore
