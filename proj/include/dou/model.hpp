#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dou {

// The nine LMS resources tracked by the measurement model. Classifier rules
// are keyed to these ids; plans and taxonomies may rearrange them but cannot
// invent new ones.
enum class Resource : int {
  Announcements,         // An
  Syllabus,              // S
  Discussions,           // D
  AssignmentDelivery,    // A_d
  QuizDelivery,          // Q_d
  AssignmentSubmission,  // A_s
  QuizSubmission,        // Q_s
  Gradebook,             // G
  Files,                 // F
};

inline constexpr int kResourceCount = 9;

inline constexpr std::array<Resource, kResourceCount> kAllResources = {
    Resource::Announcements,        Resource::Syllabus,
    Resource::Discussions,          Resource::AssignmentDelivery,
    Resource::QuizDelivery,         Resource::AssignmentSubmission,
    Resource::QuizSubmission,       Resource::Gradebook,
    Resource::Files,
};

// Short id used in config files, CSV headers and reports ("An", "A_d", ...).
const std::string& resource_id(Resource r);
std::optional<Resource> resource_from_id(const std::string& id);

struct ResourceSpec {
  Resource id = Resource::Announcements;
  int max_level = 2;  // 1 or 2
  std::vector<std::string> level_descriptions;  // one per level 0..max_level
};

struct ResourceTaxonomy {
  std::vector<ResourceSpec> resources;

  const ResourceSpec* find(Resource r) const;
  bool contains(Resource r) const { return find(r) != nullptr; }
};

// One grouped contribution to the course score: two resources blended by
// MAX (beta=0) or floored average (beta=1).
struct PairTerm {
  Resource a = Resource::Announcements;
  Resource b = Resource::Announcements;
  int beta = 0;
};

struct AggregationPlan {
  std::vector<PairTerm> pair_terms;
  std::vector<Resource> single_terms;
  // Rescale every level onto 0..2 before aggregation so binary resources can
  // reach the top tier. Raw levels kept available for sensitivity analysis.
  bool normalize_levels = true;
};

// Built-in defaults: the nine-resource taxonomy and the shipped plan, which
// pairs (A_d,A_s) and (Q_d,Q_s) with beta=1, (S,F) and (D,G) with beta=0,
// and keeps An as a single term.
ResourceTaxonomy default_taxonomy();
AggregationPlan default_plan();

// Validation returns the list of violations; empty means valid.
std::vector<std::string> validate_taxonomy(const ResourceTaxonomy& tax);
std::vector<std::string> validate_plan(const AggregationPlan& plan,
                                       const ResourceTaxonomy& tax);

// Low/High cut for a numeric course attribute.
enum class CutKind { median, quantile, threshold };

struct CutScheme {
  CutKind kind = CutKind::median;
  double param = 0.5;  // quantile q, or the threshold value
};

// Registry override entry; attribute/kind are resolved by the hypothesis
// harness against the CourseMeta field names.
struct HypothesisOverride {
  std::string id;
  std::string attribute;
  std::string kind;  // "binary_flag" or "numeric"
};

// Everything configurable about a run. Absent config file -> defaults.
struct ModelConfig {
  ResourceTaxonomy taxonomy;
  AggregationPlan plan;
  double grading_threshold = 1.0;    // graded_fraction >= threshold -> G = 1
  double file_share_threshold = 0.6; // junk-drive page-request gate
  std::string term_start;            // ISO date anchoring week boundaries
  std::map<std::string, CutScheme> cuts;  // keyed by attribute name
  std::vector<HypothesisOverride> hypotheses;  // empty -> built-in H1..H10
};

ModelConfig default_config();

// Parses and validates a declarative JSON config; throws Error listing every
// violation found. Schema in docs/config.md.
ModelConfig parse_config_json(const std::string& text);
ModelConfig load_config(const std::string& path);

}  // namespace dou
