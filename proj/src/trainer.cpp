#include "cgtree/trainer.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

#include "cgtree/errors.hpp"
#include "cgtree/greedy.hpp"
#include "cgtree/master.hpp"
#include "cgtree/preprocess.hpp"
#include "cgtree/separation.hpp"

namespace cgtree {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

// Streams for derived seeds; sampling derives its own per-run streams from the seed.
constexpr std::uint64_t kHeuristicStream = 0x9e11'0001;

}  // namespace

void TrainConfig::validate() const {
  if (depth < 1 || depth > 20) throw ConfigError("depth must be between 1 and 20");
  if (time_limit < 0.0 || !std::isfinite(time_limit)) {
    throw ConfigError("time limit must be a non-negative number of seconds");
  }
  if (!(rc_tol > 0.0) || !(lp_tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (cut_period < 1) throw ConfigError("cut period must be at least 1");
  if (heuristic_attempts < 0) throw ConfigError("heuristic attempts must be non-negative");
  if (threads < 1) throw ConfigError("thread count must be at least 1");
}

TrainedModel train(const TrainConfig& cfg, const Dataset& d) {
  cfg.validate();
  d.require_trainable();
  const auto start = Clock::now();
  std::optional<Clock::time_point> cg_deadline, deadline;
  if (cfg.time_limit > 0.0) {
    const auto limit = std::chrono::duration_cast<Clock::duration>(
        std::chrono::duration<double>(cfg.time_limit));
    deadline = start + limit;
    cg_deadline = start + limit * 9 / 10;
  }
  auto expired = [&] { return cg_deadline && Clock::now() >= *cg_deadline; };

  TrainedModel model;
  TrainStats& st = model.stats;

  SamplingOptions sopt;
  sopt.extra_init = cfg.extra_init;
  SamplingResult sampled = threshold_sampling(d, cfg.depth, cfg.seed, sopt);
  st.seconds_sampling = seconds_since(start);
  st.candidates = sampled.candidates.universe.size();
  model.greedy_tree = sampled.greedy_tree;
  model.greedy_accuracy = accuracy(model.greedy_tree, d);

  const TreeTopology topo(cfg.depth);
  std::optional<Dataset> merged;
  if (cfg.preprocess) {
    const auto t = Clock::now();
    merged = merge_duplicate_rows(d, sampled.candidates, topo);
    st.seconds_preprocess = seconds_since(t);
  }
  const Dataset& rows = merged ? *merged : d;
  st.rows = rows.size();

  RestrictedMaster master(rows, sampled.candidates, cfg.depth, cfg.beta_mode);
  if (cfg.beta_mode == BetaMode::kAll) master.install_all_row_cuts();
  for (const Path& p : sampled.initial_paths) {
    if (master.add_column(p)) ++st.columns_initial;
  }

  const auto cut_sense_mode = cut_sense(cfg.beta_mode);
  auto solve = [&]() -> std::optional<DualSolution> {
    const auto t = Clock::now();
    lp::SolveLimits limits;
    limits.deadline = cg_deadline;
    DualSolution sol = master.solve_lp(limits);
    st.seconds_lp += seconds_since(t);
    ++st.lp_solves;
    if (sol.status != lp::Status::kOptimal) return std::nullopt;
    const lp::Certificate& c = sol.certificate;
    st.lp_primal_residual = std::max(st.lp_primal_residual, c.primal_infeasibility);
    st.lp_dual_residual = std::max(st.lp_dual_residual, c.dual_infeasibility);
    st.lp_duality_gap = std::max(st.lp_duality_gap, c.duality_gap());
    return sol;
  };

  // Adds violated row cuts, plus pattern cuts in mode extra. Returns the count.
  auto cut_round = [&](const DualSolution& sol) -> long {
    if (!cut_sense_mode || cfg.beta_mode == BetaMode::kAll) return 0;
    const auto t = Clock::now();
    long added = 0;
    for (BetaCut& c : violated_row_cuts(master, sol, cfg.lp_tol)) {
      c.origin = BetaCut::Origin::kInspection;
      master.add_cut(std::move(c));
      ++added;
      ++st.cuts_labeled;
    }
    if (cfg.beta_mode == BetaMode::kExtra) {
      std::vector<ValuedPath> dp;
      for (std::size_t c = 0; c < master.columns().size(); ++c) {
        if (sol.x[c] > cfg.lp_tol) dp.push_back({master.columns()[c], sol.x[c]});
      }
      const SeparationResult sep = generate_unlabeled_cuts(
          dp, sampled.candidates.universe, rows.num_features(), cfg.lp_tol, 50, cg_deadline);
      for (const auto& [pattern, value] : sep.cuts) {
        const bool known = std::any_of(master.cuts().begin(), master.cuts().end(),
                                       [&](const BetaCut& c) {
                                         return c.kind == BetaCut::Kind::kPseudoRow &&
                                                c.pattern == pattern;
                                       });
        if (known) continue;
        BetaCut c;
        c.kind = BetaCut::Kind::kPseudoRow;
        c.pattern = pattern;
        c.sense = *cut_sense_mode;
        c.origin = BetaCut::Origin::kSeparation;
        master.add_cut(std::move(c));
        ++added;
        ++st.cuts_pseudo;
      }
    }
    st.seconds_cuts += seconds_since(t);
    return added;
  };

  Rng rng(Rng::derive(cfg.seed, kHeuristicStream));
  std::optional<DualSolution> sol = solve();
  std::optional<DualSolution> last = sol;

  while (sol && !expired()) {
    ++st.iterations;
    long cuts = 0;
    bool cuts_checked = false;
    if (st.iterations % cfg.cut_period == 0) {
      cuts = cut_round(*sol);
      cuts_checked = true;
      if (cuts > 0) {
        sol = solve();
        if (!sol) break;
        last = sol;
      }
    }

    const auto tp = Clock::now();
    const PricingContext ctx(master, *sol);
    std::vector<PricedPath> found;
    bool from_heuristic = false;
    if (cfg.heuristic_attempts > 0) {
      found = heuristic_pricing(ctx, rng, cfg.heuristic_attempts, cfg.rc_tol);
      from_heuristic = !found.empty();
    }
    if (found.empty() && !expired()) found = exact_pricing(ctx, cfg.sp_mode, cfg.rc_tol, cfg.threads);
    st.seconds_pricing += seconds_since(tp);
    if (expired()) break;

    long added = 0;
    for (PricedPath& p : found) {
      if (master.add_column(std::move(p.path))) ++added;
    }
    (from_heuristic ? st.columns_heuristic : st.columns_exact) += added;

    if (added == 0) {
      // Pricing is exhausted; stop only when the current point also violates no cut.
      const long more = cuts_checked && cuts == 0 ? 0 : cut_round(*sol);
      cuts += more;
      model.converged = more == 0;
    }
    if (cfg.log) {
      *cfg.log << "iteration=" << st.iterations << " lp=" << sol->objective
               << " columns=" << added << " cuts=" << cuts << " pool=" << master.columns().size()
               << " pivots=" << master.lp().stats().iterations
               << " elapsed=" << seconds_since(start) << '\n';
    }
    if (model.converged) break;
    sol = solve();
    if (!sol) break;
    last = sol;
  }

  if (last) model.lp_bound = last->objective;
  st.lp_pivots = master.lp().stats().iterations;
  st.lp_degenerate_pivots = master.lp().stats().degenerate_pivots;

  const auto ti = Clock::now();
  IntegerSolution best = master.solve_integer(deadline, &sampled.greedy_tree);
  st.seconds_integer = seconds_since(ti);
  st.integer_nodes = best.nodes;

  model.tree = std::move(best.tree);
  model.tree.class_names = d.class_names();
  model.integer_value = best.objective;
  model.integer_complete = best.complete;
  model.train_accuracy = accuracy(model.tree, d);
  model.optimal = model.converged &&
                  model.lp_bound - static_cast<double>(model.integer_value) <= cfg.lp_tol;
  st.seconds_total = seconds_since(start);
  if (cfg.log) {
    *cfg.log << "final lp_bound=" << model.lp_bound << " integer=" << model.integer_value
             << " accuracy=" << model.train_accuracy << " optimal=" << model.optimal
             << " elapsed=" << st.seconds_total << '\n';
  }
  return model;
}

}  // namespace cgtree
