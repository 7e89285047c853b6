#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dou/aggregate.hpp"
#include "dou/ingest.hpp"
#include "dou/model.hpp"
#include "dou/stats.hpp"

namespace dou {

enum class AttributeKind { binary_flag, numeric };

struct HypothesisSpec {
  std::string id;       // "H1".."H10" (or user-supplied)
  std::string label;    // display name, e.g. "Undergraduate"
  MetaField attribute = MetaField::undergraduate;
  AttributeKind kind = AttributeKind::binary_flag;
  std::string direction_note;
};

// Fully scored course: metadata, per-resource levels and the overall score.
struct ScoredCourse {
  CourseMeta meta;
  ResourceLevels levels;
  CourseDou dou;
};

using Population = std::vector<ScoredCourse>;

// Classifies and aggregates every course. meta/activity are parallel by
// index (as produced by parse_course_table).
Population score_population(const std::vector<CourseActivityRecord>& activity,
                            const std::vector<CourseMeta>& meta,
                            const ModelConfig& config);

// H1..H10: modality flags and app use are binary; enrollment, viewership,
// GPA, DFW and #TA are numeric; skills training is binary.
std::vector<HypothesisSpec> default_registry();

// Applies config overrides (empty -> default registry).
std::vector<HypothesisSpec> build_registry(const ModelConfig& config);

struct HypothesisRow {
  HypothesisSpec spec;
  // nullopt = not computable (or structurally absent: numeric rows carry no
  // t). Rendered as a dash.
  std::optional<TestResult> t;
  std::optional<TestResult> f;
  std::optional<TestResult> h;
};

struct HypothesisTable {
  std::optional<Resource> target;  // nullopt = overall DOU
  std::vector<HypothesisRow> rows;
};

// Binary hypotheses: DOU values split by flag, t sign positive when the
// flag-true group mean is higher; F and H over the same two groups.
// Numeric hypotheses: attribute values grouped by DOU tier (or resource
// level for resource targets, 0..max per the taxonomy); F and H across
// groups. Any empty group marks the affected cells not-computable.
HypothesisTable run_hypotheses(const Population& population,
                               const std::vector<HypothesisSpec>& registry,
                               std::optional<Resource> target = std::nullopt,
                               const ResourceTaxonomy& tax = default_taxonomy());

// One table per term snapshot, same registry. Keyed and ordered by term id.
std::map<std::string, HypothesisTable> run_snapshots(
    const std::map<std::string, Population>& snapshots,
    const std::vector<HypothesisSpec>& registry,
    std::optional<Resource> target = std::nullopt,
    const ResourceTaxonomy& tax = default_taxonomy());

// Splits a population into per-term snapshots by CourseMeta::term.
std::map<std::string, Population> split_by_term(const Population& population);

}  // namespace dou
