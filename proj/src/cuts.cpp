#include "cgtree/cuts.hpp"

#include <cmath>

#include "cgtree/errors.hpp"

namespace cgtree {

BetaMode parse_beta_mode(const std::string& text) {
  if (text == "none") return BetaMode::kNone;
  if (text == "lb") return BetaMode::kLb;
  if (text == "ub") return BetaMode::kUb;
  if (text == "eq") return BetaMode::kEq;
  if (text == "all") return BetaMode::kAll;
  if (text == "extra") return BetaMode::kExtra;
  throw ConfigError("unknown beta mode '" + text + "' (expected none|lb|ub|eq|all|extra)");
}

std::string to_string(BetaMode m) {
  switch (m) {
    case BetaMode::kNone: return "none";
    case BetaMode::kLb: return "lb";
    case BetaMode::kUb: return "ub";
    case BetaMode::kEq: return "eq";
    case BetaMode::kAll: return "all";
    case BetaMode::kExtra: return "extra";
  }
  return "?";
}

std::optional<lp::RowSense> cut_sense(BetaMode m) {
  switch (m) {
    case BetaMode::kNone: return std::nullopt;
    case BetaMode::kLb: return lp::RowSense::kGreaterEqual;
    case BetaMode::kUb: return lp::RowSense::kLessEqual;
    case BetaMode::kEq:
    case BetaMode::kAll:
    case BetaMode::kExtra: return lp::RowSense::kEqual;
  }
  return std::nullopt;
}

Direction BranchPattern::direction(const SplitCheck& a) const {
  const auto& [lo, hi] = intervals.at(a.feature);
  if (hi <= a.threshold) return Direction::kLeft;
  if (lo >= a.threshold) return Direction::kRight;
  throw SolverError("branch pattern interval straddles a split threshold");
}

bool BranchPattern::follows(const Path& p, const TreeTopology& topo,
                            const SplitUniverse& S) const {
  const auto dirs = topo.path_directions(p.leaf);
  for (std::size_t h = 0; h < dirs.size(); ++h) {
    if (direction(S[p.splits[h]]) != dirs[h]) return false;
  }
  return true;
}

std::vector<double> BranchPattern::representative() const {
  std::vector<double> v;
  v.reserve(intervals.size());
  for (const auto& [lo, hi] : intervals) {
    const bool lo_inf = !std::isfinite(lo), hi_inf = !std::isfinite(hi);
    if (lo_inf && hi_inf) {
      v.push_back(0.0);
    } else if (lo_inf) {
      v.push_back(hi - 1.0);
    } else if (hi_inf) {
      v.push_back(lo + 1.0);
    } else {
      v.push_back(0.5 * (lo + hi));
    }
  }
  return v;
}

}  // namespace cgtree
