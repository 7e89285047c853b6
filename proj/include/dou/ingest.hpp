#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dou/activity.hpp"

namespace dou {

// Hypothesis attributes per course, one metadata row each.
struct CourseMeta {
  std::string course_id;
  std::string term;
  bool undergraduate = false;
  bool stem = false;
  bool online = false;
  bool app_use = false;
  bool skills_training = false;
  long long enrollment = 0;
  long long viewership = 0;  // total pageviews
  int ta_count = 0;
  double gpa = 0.0;       // 0..4
  double dfw_rate = 0.0;  // 0..1
  std::string cohort_tag;  // optional roster tag, not modeled further
};

std::vector<std::string> validate_meta(const CourseMeta& meta);

// CourseMeta fields addressable by hypotheses and cohort atoms.
enum class MetaField {
  undergraduate,
  stem,
  online,
  app_use,
  skills_training,
  enrollment,
  viewership,
  ta_count,
  gpa,
  dfw_rate,
};

bool meta_field_is_flag(MetaField f);
bool meta_flag(const CourseMeta& m, MetaField f);      // flag fields only
double meta_value(const CourseMeta& m, MetaField f);   // numeric view
const char* meta_field_name(MetaField f);
std::optional<MetaField> meta_field_from_name(const std::string& name);

enum class ActorRole { student, staff, unknown };

struct RequestEvent {
  std::int64_t timestamp = 0;  // epoch seconds, UTC
  std::string course_id;
  std::string controller;
  std::string action;
  ActorRole actor_role = ActorRole::unknown;

  std::string category() const { return controller + "::" + action; }
};

// Share of page requests per controller::action category.
struct CompositionProfile {
  std::map<std::string, double> shares;
  long long total_events = 0;
};

enum class ParseMode { strict, lenient };

struct ParseReport {
  std::size_t rows_ok = 0;
  std::vector<std::string> problems;  // "<file>:<line>: <message>"
};

// Joint result of parsing courses.csv: one CourseMeta and one activity
// record per row, parallel by index.
struct CourseTable {
  std::vector<CourseMeta> meta;
  std::vector<CourseActivityRecord> activity;
  ParseReport report;
};

// courses.csv: one row per course, metadata and activity columns together.
// Column dictionary in docs/schemas.md. Strict mode throws ParseError at the
// first malformed row; lenient skips it and records the problem.
CourseTable parse_course_table(std::istream& in,
                               ParseMode mode = ParseMode::strict,
                               const std::string& filename = "courses.csv");

// instruments.csv: per-instrument rows keyed by course_id, appended onto the
// matching activity records. Rows for unknown courses are reported.
void attach_instruments(std::istream& in,
                        std::vector<CourseActivityRecord>& records,
                        ParseMode mode, ParseReport& report,
                        const std::string& filename = "instruments.csv");

std::vector<RequestEvent> parse_request_log(
    std::istream& in, ParseMode mode = ParseMode::strict,
    ParseReport* report = nullptr,
    const std::string& filename = "requests.csv");

// ISO-8601 UTC ("2023-02-01", "2023-02-01T10:00Z", "2023-02-01T10:00:30Z")
// to epoch seconds. Throws Error on anything else.
std::int64_t parse_timestamp(const std::string& text);
std::string format_timestamp(std::int64_t epoch_seconds);

// Per-week event counts divided by enrollment. Weeks are 7-day bins from
// term_start; events outside the term clamp to the first/last week so the
// series always accounts for every event.
std::vector<double> weekly_viewership(const std::vector<RequestEvent>& events,
                                      long long enrollment, int term_weeks,
                                      std::int64_t term_start);

CompositionProfile composition(const std::vector<RequestEvent>& events);

// A course's motif: its top-3 categories by share (ties broken by name),
// as a sorted set.
std::vector<std::string> motif_of(const CompositionProfile& profile);

struct Motif {
  std::vector<std::string> categories;  // sorted
  int course_count = 0;
  double coverage_pct = 0.0;  // % of profiles exhibiting the motif
};

// Motifs ranked by course coverage (then lexicographically); top k.
std::vector<Motif> top_motifs(const std::vector<CompositionProfile>& profiles,
                              int k);

// Writers for the same schemas (used by the synth subcommand and tests).
void write_course_table(std::ostream& out, const std::vector<CourseMeta>& meta,
                        const std::vector<CourseActivityRecord>& activity);
void write_instruments(std::ostream& out,
                       const std::vector<CourseActivityRecord>& activity);
void write_requests(std::ostream& out,
                    const std::vector<RequestEvent>& events);

}  // namespace dou
