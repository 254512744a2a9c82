#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "jigsaw/bounds.hpp"
#include "jigsaw/experiments.hpp"
#include "jigsaw/exploration.hpp"
#include "jigsaw/solver.hpp"

namespace jigsaw::io {

using json = nlohmann::ordered_json;

/// printf "%.17g"; non-finite values print as inf, -inf, nan.
std::string format_double(double x);

/// Finite doubles as numbers, non-finite ones as the strings above.
json number(double x);

json to_json(const ERParams& p);
json to_json(const SeedSpec& s);
json to_json(const RegimeReport& r);
json to_json(const SolveResult& r);
json to_json(const ProbabilityEstimate& e);
json to_json(const ThresholdEstimate& e);
json to_json(const ScalingStudy& s);
json to_json(const ClusterStats& s);
json to_json(const bounds::BoundValue& b);
json to_json(const bounds::PartIBound& b);

enum class TraceLevel { summary, rounds, full };

/// summary: stage outcomes, sizes and ledger counts. rounds: adds |R| and |B|
/// per step of every stage-1 round and the doubling step table. full: adds
/// every trial list and chosen set.
json to_json(const PercolationCertificate& c, TraceLevel level = TraceLevel::rounds);

/// Fixed-header CSV tables. Each writes a header line then rows, "\n"-terminated.
void write_estimate_csv(std::ostream& os, const ERParams& p, const ProbabilityEstimate& e);
void write_probes_csv(std::ostream& os, const ThresholdEstimate& e);
void write_scaling_csv(std::ostream& os, const ScalingStudy& s);
void write_cluster_stats_csv(std::ostream& os, const ClusterStats& s);
void write_certificate_csv(std::ostream& os, const PercolationCertificate& c);

}  // namespace jigsaw::io
