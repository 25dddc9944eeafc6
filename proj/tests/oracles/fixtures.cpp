#include "fixtures.hpp"

#include <algorithm>
#include <limits>

#include "cgtree/separation.hpp"

namespace fixture {

using namespace cgtree;

double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
}

Dataset random_dataset(Rng& rng, std::size_t rows, std::size_t features, int levels, int classes) {
  std::vector<Row> out;
  for (std::size_t i = 0; i < rows; ++i) {
    Row r;
    r.id = i;
    for (std::size_t f = 0; f < features; ++f) r.features.push_back(double(rng.uniform_index(levels)));
    r.target = int(rng.uniform_index(classes));
    out.push_back(std::move(r));
  }
  return Dataset(std::move(out), features, classes);
}

CandidateSplits random_candidates(Rng& rng, int depth, std::size_t features, int levels,
                                  std::size_t max_per_node) {
  const TreeTopology topo(depth);
  CandidateSplits c;
  c.per_node.resize(topo.num_internal());
  for (auto& node : c.per_node) {
    const std::size_t want = 1 + rng.uniform_index(max_per_node);
    for (std::size_t tries = 0; node.size() < want && tries < 50; ++tries) {
      const int f = int(rng.uniform_index(features));
      const double mu = double(rng.uniform_index(levels - 1)) + 0.5;
      const SplitId id = c.universe.intern(f, mu);
      if (std::find(node.begin(), node.end(), id) == node.end()) node.push_back(id);
    }
    std::sort(node.begin(), node.end());
  }
  return c;
}

Path random_path(Rng& rng, const CandidateSplits& cand, const TreeTopology& topo, int classes) {
  Path p;
  p.leaf = topo.leaf_at(int(rng.uniform_index(topo.num_leaves())));
  for (NodeId j : topo.path_nodes(p.leaf)) {
    const auto& s = cand.per_node[j];
    p.splits.push_back(s[rng.uniform_index(s.size())]);
  }
  p.target = int(rng.uniform_index(classes));
  return p;
}

BranchPattern random_pattern(Rng& rng, const SplitUniverse& S, std::size_t features, int levels) {
  std::vector<double> point(features);
  for (auto& v : point) v = double(rng.uniform_index(levels));
  std::vector<Direction> psi;
  for (const SplitCheck& a : S.all()) psi.push_back(branch(point, a));
  return pattern_to_row(psi, S, features);
}

DualSolution random_duals(Rng& rng, const RestrictedMaster& m, double lo, double hi) {
  const TreeTopology& topo = m.topology();
  DualSolution s;
  s.depth = topo.depth();
  s.universe_size = m.candidates().universe.size();
  for (int l = 0; l < topo.num_leaves(); ++l) s.alpha.push_back(uniform(rng, lo, hi));
  for (std::size_t c = 0; c < m.cuts().size(); ++c) s.beta.push_back(uniform(rng, lo, hi));
  s.gamma_table.resize(std::size_t(topo.num_leaves()) * s.depth * s.universe_size);
  for (double& g : s.gamma_table) g = uniform(rng, lo, hi);
  s.x.assign(m.columns().size(), 0.0);
  return s;
}

oracle::Duals oracle_duals(const RestrictedMaster& m, const DualSolution& sol, NodeId leaf) {
  oracle::Duals d;
  const int li = m.topology().leaf_index(leaf);
  d.alpha = sol.alpha[li];
  d.gamma = [&sol, li](int level, SplitId a) { return sol.gamma(li, level, a); };
  for (std::size_t c = 0; c < m.cuts().size(); ++c) {
    const BetaCut& cut = m.cuts()[c];
    oracle::CutRow row;
    if (cut.kind == BetaCut::Kind::kLabeledRow) {
      row.row = cut.row;
    } else {
      row.box = cut.pattern.intervals;
    }
    row.beta = sol.beta[c];
    d.cuts.push_back(std::move(row));
  }
  return d;
}

DualSolution converge_cuts(RestrictedMaster& m, double tol) {
  const auto sense = cut_sense(m.mode());
  while (true) {
    DualSolution sol = m.solve_lp();
    long added = 0;
    for (BetaCut& c : violated_row_cuts(m, sol, tol)) {
      m.add_cut(std::move(c));
      ++added;
    }
    if (m.mode() == BetaMode::kExtra) {
      std::vector<ValuedPath> dp;
      for (std::size_t c = 0; c < m.columns().size(); ++c) {
        if (sol.x[c] > tol) dp.push_back({m.columns()[c], sol.x[c]});
      }
      const auto sep =
          generate_unlabeled_cuts(dp, m.candidates().universe, m.dataset().num_features(), tol);
      for (const auto& [pattern, value] : sep.cuts) {
        const bool known = std::any_of(m.cuts().begin(), m.cuts().end(), [&](const BetaCut& c) {
          return c.kind == BetaCut::Kind::kPseudoRow && c.pattern == pattern;
        });
        if (known) continue;
        BetaCut c;
        c.kind = BetaCut::Kind::kPseudoRow;
        c.pattern = pattern;
        c.sense = *sense;
        c.origin = BetaCut::Origin::kSeparation;
        m.add_cut(std::move(c));
        ++added;
      }
    }
    if (added == 0) return sol;
  }
}

}  // namespace fixture
