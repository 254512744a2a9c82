#include "jigsaw/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace jigsaw::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

json to_json(const ERParams& p) { return {{"n", p.n}, {"p1", number(p.p1)}, {"p2", number(p.p2)}}; }

json to_json(const SeedSpec& s) { return {{"master", s.master}, {"stream", s.stream}}; }

json to_json(const RegimeReport& r) {
  return {{"implied_c", number(r.implied_c)},
          {"connectivity_ratio", number(r.connectivity_ratio)},
          {"conn_constant", number(r.conn_constant)},
          {"conds", r.conds},
          {"conds2_p1", r.conds2_p1},
          {"conds2_p2", r.conds2_p2},
          {"conn", r.conn}};
}

json to_json(const SolveResult& r) {
  json blocks = json::array();
  for (const auto& b : r.final.blocks()) blocks.push_back(b);
  json trace = json::array();
  for (const auto& m : r.merge_trace) {
    trace.push_back(
        {{"round", m.round}, {"parts", m.parts}, {"tree_parent", m.tree_parent}, {"size", m.size}});
  }
  return {{"percolates", r.percolates()},
          {"rounds", r.rounds},
          {"cluster_counts", r.cluster_counts},
          {"final_blocks", std::move(blocks)},
          {"merge_trace", std::move(trace)}};
}

json to_json(const ProbabilityEstimate& e) {
  return {{"successes", e.successes},
          {"trials", e.trials},
          {"estimate", number(e.estimate)},
          {"ci_lo", number(e.ci.lo)},
          {"ci_hi", number(e.ci.hi)}};
}

json to_json(const ThresholdEstimate& e) {
  json probes = json::array();
  for (const auto& p : e.probes) {
    json j = to_json(p.estimate);
    j["x"] = number(p.x);
    probes.push_back(std::move(j));
  }
  json out = {{"n", e.n},
              {"variable", e.variable},
              {"policy", e.policy},
              {"target", number(e.target)},
              {"x_lo", number(e.x_lo)},
              {"x_hi", number(e.x_hi)},
              {"p_lo", number(e.p_lo)},
              {"p_hi", number(e.p_hi)},
              {"x_hat", number(e.x_hat)},
              {"x_hat_ln_n", number(e.x_hat * std::log(static_cast<double>(e.n)))},
              {"trials_per_probe", e.trials_per_probe},
              {"rel_tol", number(e.rel_tol)},
              {"half_width_at_target", number(e.half_width_at_target)},
              {"warnings", e.warnings},
              {"probes", std::move(probes)}};
  return out;
}

json to_json(const ScalingStudy& s) {
  json rows = json::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"n", r.n}, {"q_hat", number(r.q_hat)}, {"normalized", number(r.normalized)}});
  }
  json est = json::array();
  for (const auto& e : s.estimates) est.push_back(to_json(e));
  return {{"rows", std::move(rows)}, {"spread", number(s.spread)}, {"estimates", std::move(est)}};
}

namespace {

json quantiles(const Quantiles& q) {
  return {{"min", number(q.min)},
          {"q25", number(q.q25)},
          {"median", number(q.median)},
          {"q75", number(q.q75)},
          {"max", number(q.max)}};
}

template <class Map>
json histogram(const Map& m) {
  json out = json::array();
  for (const auto& [value, count] : m) out.push_back({{"value", value}, {"count", count}});
  return out;
}

json ledger(const RevealLedger& l) {
  return {{"queries", l.queries()},
          {"red", l.queries(Color::red)},
          {"blue", l.queries(Color::blue)},
          {"repeats", l.repeats()}};
}

json optional_bool(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

}  // namespace

json to_json(const ClusterStats& s) {
  return {{"params", to_json(s.params)},
          {"trials", s.trials},
          {"seed", to_json(s.seed)},
          {"percolation_fraction", number(s.percolation_fraction)},
          {"largest", quantiles(s.largest)},
          {"rounds", quantiles(s.rounds)},
          {"largest_hist", histogram(s.largest_hist)},
          {"rounds_hist", histogram(s.rounds_hist)}};
}

json to_json(const bounds::BoundValue& b) {
  return {{"log_value", number(b.log_value)},
          {"value", number(b.value)},
          {"hypotheses_hold", b.hypotheses_hold},
          {"divergent", b.divergent},
          {"degenerate", b.degenerate},
          {"artifact_constant", b.artifact_constant}};
}

json to_json(const bounds::PartIBound& b) {
  json chain = json::array();
  for (const auto& c : b.chain) chain.push_back(to_json(c));
  return {{"k_lo", b.k_lo},
          {"k_hi", b.k_hi},
          {"ratio", number(b.ratio)},
          {"exact_sum", to_json(b.exact_sum)},
          {"chain", std::move(chain)}};
}

json to_json(const PercolationCertificate& c, TraceLevel level) {
  const bool steps = level != TraceLevel::summary;
  const bool full = level == TraceLevel::full;

  json s1 = {{"success", c.stage1.witness.has_value()},
             {"rounds", c.stage1.rounds.size()},
             {"witness", c.stage1.witness ? json(c.stage1.witness->vertices) : json(nullptr)},
             {"ledger", ledger(c.stage1.ledger)}};
  if (steps) {
    json rounds = json::array();
    for (const auto& r : c.stage1.rounds) {
      std::vector<Vertex> red, blue;
      for (const auto& s : r.steps) {
        red.push_back(s.red_hits);
        blue.push_back(s.blue_hits);
      }
      json jr = {{"k", r.k},
                 {"final_t", r.final_t},
                 {"active_at_start", r.active_at_start},
                 {"red_hits", red},
                 {"blue_hits", blue}};
      if (full) {
        jr["trial"] = r.trial;
        std::vector<bool> s_event;
        for (const auto& s : r.steps) s_event.push_back(s.s_event);
        jr["s_event"] = s_event;
      }
      rounds.push_back(std::move(jr));
    }
    s1["round_trace"] = std::move(rounds);
  }

  json s2 = nullptr;
  if (c.stage2) {
    const auto& d = *c.stage2;
    s2 = {{"success", d.spanned.has_value()},
          {"size", d.spanned ? json(d.spanned->size()) : json(nullptr)},
          {"steps", d.steps.size()},
          {"ledger", ledger(d.ledger)}};
    if (full) s2["spanned"] = d.spanned ? json(*d.spanned) : json(nullptr);
    if (steps) {
      json table = json::array();
      for (const auto& s : d.steps) {
        json js = {{"t", s.t},
                   {"trial_size", s.trial_size},
                   {"layer_size", s.layer_size},
                   {"active", s.active},
                   {"candidates", s.candidates}};
        if (full) js["chosen"] = s.chosen;
        table.push_back(std::move(js));
      }
      s2["step_trace"] = std::move(table);
    }
  }

  json seeds = json::array();
  for (const auto& s : c.sprinkle_seeds) seeds.push_back(to_json(s));
  return {{"params", to_json(c.params)},
          {"seed", to_json(c.seed)},
          {"regime", to_json(c.regime)},
          {"exploration", {{"t0", c.exploration.t0}, {"t1", c.exploration.t1}, {"k_cap", c.exploration.k_cap}}},
          {"sprinkle_seeds", std::move(seeds)},
          {"stage1", std::move(s1)},
          {"stage2", std::move(s2)},
          {"stage3", optional_bool(c.stage3)},
          {"checks",
           {{"stage1_spanned", optional_bool(c.stage1_spanned)},
            {"stage2_spanned", optional_bool(c.stage2_spanned)},
            {"union_percolates", optional_bool(c.union_percolates)}}},
          {"success", c.success()}};
}

void write_estimate_csv(std::ostream& os, const ERParams& p, const ProbabilityEstimate& e) {
  os << "n,p1,p2,trials,successes,estimate,ci_lo,ci_hi\n";
  os << p.n << ',' << format_double(p.p1) << ',' << format_double(p.p2) << ',' << e.trials << ','
     << e.successes << ',' << format_double(e.estimate) << ',' << format_double(e.ci.lo) << ','
     << format_double(e.ci.hi) << '\n';
}

void write_probes_csv(std::ostream& os, const ThresholdEstimate& e) {
  os << "probe,n,variable,x,trials,successes,estimate,ci_lo,ci_hi\n";
  for (std::size_t i = 0; i < e.probes.size(); ++i) {
    const auto& p = e.probes[i];
    os << i << ',' << e.n << ',' << e.variable << ',' << format_double(p.x) << ','
       << p.estimate.trials << ',' << p.estimate.successes << ',' << format_double(p.estimate.estimate)
       << ',' << format_double(p.estimate.ci.lo) << ',' << format_double(p.estimate.ci.hi) << '\n';
  }
}

void write_scaling_csv(std::ostream& os, const ScalingStudy& s) {
  os << "n,q_hat,normalized,q_lo,q_hi,probes\n";
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    const auto& r = s.rows[i];
    const auto& e = s.estimates[i];
    os << r.n << ',' << format_double(r.q_hat) << ',' << format_double(r.normalized) << ','
       << format_double(e.x_lo) << ',' << format_double(e.x_hi) << ',' << e.probes.size() << '\n';
  }
}

void write_cluster_stats_csv(std::ostream& os, const ClusterStats& s) {
  os << "kind,value,count\n";
  for (const auto& [v, c] : s.largest_hist) os << "largest," << v << ',' << c << '\n';
  for (const auto& [v, c] : s.rounds_hist) os << "rounds," << v << ',' << c << '\n';
}

void write_certificate_csv(std::ostream& os, const PercolationCertificate& c) {
  auto cell = [](const std::optional<bool>& b) -> const char* {
    return b ? (*b ? "1" : "0") : "";
  };
  os << "n,p1,p2,implied_c,stage1,stage1_rounds,stage1_queries,stage2,stage2_size,stage2_queries,"
        "stage3,union_percolates,success\n";
  os << c.params.n << ',' << format_double(c.params.p1) << ',' << format_double(c.params.p2) << ','
     << format_double(c.regime.implied_c) << ',' << (c.stage1.witness ? 1 : 0) << ','
     << c.stage1.rounds.size() << ',' << c.stage1.ledger.queries() << ',';
  if (c.stage2) {
    os << (c.stage2->spanned ? 1 : 0) << ',' << (c.stage2->spanned ? c.stage2->spanned->size() : 0)
       << ',' << c.stage2->ledger.queries() << ',';
  } else {
    os << ",,,";
  }
  os << cell(c.stage3) << ',' << cell(c.union_percolates) << ',' << (c.success() ? 1 : 0) << '\n';
}

}  // namespace jigsaw::io
