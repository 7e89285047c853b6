#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dou/cohorts.hpp"
#include "dou/hypotheses.hpp"

namespace dou {

enum class RenderFormat { plain_table, csv, structured };

struct RenderOptions {
  RenderFormat format = RenderFormat::plain_table;
  int precision = 2;
};

// Absent / not-computable cell marker.
inline constexpr const char* kDash = "—";

// Reproducibility header embedded in structured output: the model that
// produced the report plus whatever run context applies.
struct Provenance {
  ModelConfig config;
  std::map<std::string, double> cut_points;  // resolved Low/High cuts
  std::optional<std::uint64_t> seed;         // synth-produced inputs
  std::vector<std::string> inputs;           // input paths as given
};

// Report payloads. Each wraps the computed report with what rendering needs.
struct ScoresReport {
  Population population;
  bool explain = false;
};

struct SnapshotsReport {
  std::map<std::string, HypothesisTable> tables;  // keyed by term
};

struct CohortsReport {
  std::vector<CohortReport> cohorts;
};

struct MotifsReport {
  std::vector<Motif> motifs;
  std::size_t population_size = 0;
};

using RenderPayload =
    std::variant<ScoresReport, HypothesisTable, SnapshotsReport, CohortsReport,
                 BreakdownReport, ArchetypeReport, DeltaReport, MotifsReport>;

struct RenderRequest {
  RenderPayload payload;
  RenderOptions options;
  Provenance provenance;
};

// Deterministic, byte-stable text for a payload: identical request ->
// identical bytes. Significance renders as "", "*", "**"; absent cells as
// an em dash.
std::string render(const RenderRequest& request);

// Formatting helpers shared with tests.
std::string format_number(double v, int precision);
std::string format_statistic(const TestResult& result, int precision);

}  // namespace dou
