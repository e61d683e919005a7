#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bnscore/model.hpp"

namespace bnscore {

// Network files (.bn) are line-oriented UTF-8:
//
//   # comment
//   var NAME ARITY LABEL...
//   arc PARENT CHILD
//   cpt CHILD | P1=label P2=label ... : p1 p2 ... pK
//   cpt ROOT | : p1 ... pK
//
// Variables must be declared before an arc or cpt line names them. A child's
// parent order is the order of its arc lines (first arc = most significant
// digit of the configuration index). Every parent configuration needs exactly
// one cpt line.

struct NetworkDocument {
  BayesNet net;
  /// 1-based line of each variable's `var` declaration.
  std::vector<std::size_t> var_lines;
};

/// Throws SyntaxError (message starts with "line N:"), UnknownVariable,
/// RowSumNotOne, MissingCptRow, CycleDetected and the other DAG errors.
/// Rows within 1e-9 of summing to one are renormalised.
NetworkDocument parse_network(std::string_view text);

/// Structure-only variant: cpt lines are optional and, when present, are
/// checked for syntax only.
DagStructure parse_structure(std::string_view text);

/// Probabilities are printed with 17 significant digits, so
/// parse_network(serialize_network(net)).net == net.
std::string serialize_network(const BayesNet& net);

/// CSV with a header row of variable names. Columns may come in any order and
/// are rearranged to `schema`. Cells hold state labels; a purely numeric cell
/// is read as a 0-based index when none of that variable's labels is numeric.
/// Throws HeaderMismatch, UnknownStateLabel, MissingValue.
Dataset parse_dataset(std::string_view text, const std::vector<Variable>& schema);

/// Header plus one line of labels per case, LF line endings.
std::string write_dataset(const Dataset& data);

/// Whole-file read; throws IoError when the file cannot be opened.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace bnscore
