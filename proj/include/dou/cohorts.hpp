#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "dou/hypotheses.hpp"

namespace dou {

enum class CutLabel { low, high };

// Cut point for a scheme over concrete values: median (default), a
// quantile, or a fixed threshold. Values strictly above the cut are High.
double cut_point(const std::vector<double>& values, const CutScheme& scheme);
std::vector<CutLabel> discretize(const std::vector<double>& values,
                                 const CutScheme& scheme);

// One conjunct of a cohort spec.
struct CohortAtom {
  MetaField field = MetaField::undergraduate;
  enum class Op { is_true, is_false, low, high } op = Op::is_true;
};

struct CohortSpec {
  std::vector<CohortAtom> atoms;  // conjunction, non-empty
  std::string text;               // original expression, for reports
};

// Expression grammar (docs/cohorts.md): atoms joined by '&'; flags are
// undergrad|grad|stem|online|app|skills, '!' negates; numeric atoms are
// enroll|view|ta|gpa|dfw ':' low|high.
CohortSpec parse_cohort_expr(const std::string& expr);

// Resolved Low/High cut points for the numeric attributes of a population.
struct Cuts {
  std::map<MetaField, double> points;

  CutLabel label(MetaField field, double value) const;
};

Cuts resolve_cuts(const Population& population,
                  const std::map<std::string, CutScheme>& overrides);

struct CohortReport {
  std::string spec_text;
  std::size_t member_count = 0;
  std::optional<double> low_dou_percent;  // nullopt when the cohort is empty
  // Flag composition of the cohort (% true per flag attribute).
  std::vector<std::pair<std::string, double>> composition;
};

CohortReport cohort_frequency(const Population& population,
                              const CohortSpec& spec, const Cuts& cuts);

// Population row: courses with the attribute, and their tier split.
struct AttributeBreakdownRow {
  std::string attribute;
  std::size_t count = 0;
  double pct_low = 0.0, pct_medium = 0.0, pct_high = 0.0;
};

struct NumericSummaryRow {
  std::string attribute;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
};

// Flag composition of one score tier.
struct TierCompositionRow {
  Tier tier = Tier::Low;
  std::size_t count = 0;
  std::vector<std::pair<std::string, double>> flag_pct;
};

struct BreakdownReport {
  std::vector<AttributeBreakdownRow> by_attribute;  // Overall row first
  std::vector<NumericSummaryRow> numeric;
  std::vector<TierCompositionRow> by_tier;
};

BreakdownReport breakdown(const Population& population);

enum class Archetype { junk_drive, gradebook_only, access_portal };
const char* archetype_name(Archetype a);

struct ArchetypeThresholds {
  double file_share = 0.6;  // junk-drive page-request gate
};

// File-drive controllers counted toward the junk-drive share.
bool is_file_category(const std::string& controller);

// Labels one course. profile may be null only if the junk-drive gate cannot
// trigger for it (Low tier + High viewership courses need one).
std::set<Archetype> detect_archetypes(const ScoredCourse& course,
                                      CutLabel viewership_label,
                                      const CompositionProfile* profile,
                                      const ArchetypeThresholds& thresholds,
                                      const ResourceTaxonomy& tax);

// Cohort composition summary for one archetype.
struct ArchetypeRow {
  Archetype archetype = Archetype::junk_drive;
  std::size_t count = 0;
  double pct_of_population = 0.0;
  std::vector<std::pair<std::string, double>> flag_pct;  // % true per flag
  // (attribute, % Low, % High) against the resolved cuts.
  std::vector<std::tuple<std::string, double, double>> lo_hi;
};

struct ArchetypeReport {
  std::size_t population_size = 0;
  std::vector<ArchetypeRow> rows;  // one per archetype, fixed order
  // course_id -> labels; only courses with at least one label.
  std::map<std::string, std::vector<Archetype>> members;
};

// Labels every course (profiles keyed by course_id; courses without events
// get an empty profile) and tabulates per-archetype composition.
ArchetypeReport archetype_report(
    const Population& population,
    const std::map<std::string, CompositionProfile>& profiles,
    const Cuts& cuts, const ArchetypeThresholds& thresholds,
    const ResourceTaxonomy& tax);

struct TierDelta {
  long long before = 0;
  long long after = 0;
  std::optional<double> percent_change;  // nullopt when before == 0
};

struct DeltaReport {
  std::array<TierDelta, 3> overall;  // indexed by Tier
  // Per resource, indexed by rescaled level tier; structurally absent tiers
  // (Medium for binary resources) are nullopt.
  std::map<Resource, std::array<std::optional<TierDelta>, 3>> per_resource;
};

DeltaReport delta_report(const Population& before, const Population& after,
                         const ResourceTaxonomy& tax);

}  // namespace dou
