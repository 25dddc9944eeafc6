#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cgtree/simplex.hpp"
#include "cgtree/tree.hpp"

namespace cgtree {

// How row constraints ("every row follows exactly one selected path") enter the master.
enum class BetaMode { kNone, kLb, kUb, kEq, kAll, kExtra };

BetaMode parse_beta_mode(const std::string& text);  // throws ConfigError
std::string to_string(BetaMode m);
// Sense of the cuts a mode adds; nullopt for kNone.
std::optional<lp::RowSense> cut_sense(BetaMode m);

// An unlabeled point described by one half-open interval (lower, upper] per feature.
// Every interval lies between consecutive thresholds of the split universe, so each
// split's branch is determined.
struct BranchPattern {
  std::vector<std::pair<double, double>> intervals;  // indexed by feature

  Direction direction(const SplitCheck& a) const;  // throws SolverError if ambiguous
  bool follows(const Path& p, const TreeTopology& topo, const SplitUniverse& S) const;
  // Interval midpoint per feature; unbounded sides are placed 1 beyond the finite end.
  std::vector<double> representative() const;

  bool operator==(const BranchPattern&) const = default;
};

struct BetaCut {
  enum class Kind { kLabeledRow, kPseudoRow };
  enum class Origin { kInitial, kInspection, kSeparation };

  Kind kind = Kind::kLabeledRow;
  std::size_t row = 0;    // position in the master's dataset (labeled rows)
  BranchPattern pattern;  // pseudo-rows
  lp::RowSense sense = lp::RowSense::kEqual;
  Origin origin = Origin::kInspection;
};

}  // namespace cgtree
