#include "dou/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "dou/csv.hpp"
#include "dou/error.hpp"

namespace dou {

std::vector<std::string> validate_meta(const CourseMeta& meta) {
  std::vector<std::string> violations;
  auto bad = [&](const std::string& msg) {
    violations.push_back(meta.course_id + ": " + msg);
  };
  if (meta.course_id.empty()) violations.push_back("empty course_id");
  if (meta.enrollment < 0) bad("negative enrollment");
  if (meta.viewership < 0) bad("negative viewership");
  if (meta.ta_count < 0) bad("negative ta_count");
  if (meta.gpa < 0.0 || meta.gpa > 4.0) bad("gpa outside [0, 4]");
  if (meta.dfw_rate < 0.0 || meta.dfw_rate > 1.0) {
    bad("dfw_rate outside [0, 1]");
  }
  return violations;
}

bool meta_field_is_flag(MetaField f) {
  switch (f) {
    case MetaField::undergraduate:
    case MetaField::stem:
    case MetaField::online:
    case MetaField::app_use:
    case MetaField::skills_training:
      return true;
    default:
      return false;
  }
}

bool meta_flag(const CourseMeta& m, MetaField f) {
  switch (f) {
    case MetaField::undergraduate:
      return m.undergraduate;
    case MetaField::stem:
      return m.stem;
    case MetaField::online:
      return m.online;
    case MetaField::app_use:
      return m.app_use;
    case MetaField::skills_training:
      return m.skills_training;
    default:
      throw Error(std::string("meta_flag: \"") + meta_field_name(f) +
                  "\" is not a flag");
  }
}

double meta_value(const CourseMeta& m, MetaField f) {
  switch (f) {
    case MetaField::enrollment:
      return static_cast<double>(m.enrollment);
    case MetaField::viewership:
      return static_cast<double>(m.viewership);
    case MetaField::ta_count:
      return static_cast<double>(m.ta_count);
    case MetaField::gpa:
      return m.gpa;
    case MetaField::dfw_rate:
      return m.dfw_rate;
    default:
      return meta_flag(m, f) ? 1.0 : 0.0;
  }
}

namespace {

const std::pair<const char*, MetaField> kMetaFields[] = {
    {"undergraduate", MetaField::undergraduate},
    {"stem", MetaField::stem},
    {"online", MetaField::online},
    {"app_use", MetaField::app_use},
    {"skills_training", MetaField::skills_training},
    {"enrollment", MetaField::enrollment},
    {"viewership", MetaField::viewership},
    {"ta_count", MetaField::ta_count},
    {"gpa", MetaField::gpa},
    {"dfw_rate", MetaField::dfw_rate},
};

}  // namespace

const char* meta_field_name(MetaField f) {
  for (const auto& [name, field] : kMetaFields) {
    if (field == f) return name;
  }
  return "?";
}

std::optional<MetaField> meta_field_from_name(const std::string& name) {
  for (const auto& [n, field] : kMetaFields) {
    if (name == n) return field;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// CSV scanning helpers

namespace {

class RowError : public std::exception {
 public:
  explicit RowError(std::string msg) : msg_(std::move(msg)) {}
  const char* what() const noexcept override { return msg_.c_str(); }

 private:
  std::string msg_;
};

long long to_int(const std::string& s, const char* col) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw RowError(std::string("non-numeric ") + col + " \"" + s + "\"");
  }
  return v;
}

double to_real(const std::string& s, const char* col) {
  if (s.empty()) throw RowError(std::string("empty ") + col);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw RowError(std::string("non-numeric ") + col + " \"" + s + "\"");
  }
  return v;
}

bool to_flag(const std::string& s, const char* col) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw RowError(std::string("bad flag ") + col + " \"" + s +
                 "\" (want 0/1/true/false)");
}

// Header lookup: column name -> index. Missing required columns are fatal in
// either mode.
class Header {
 public:
  Header(const std::vector<std::string>& names, const std::string& filename) {
    for (std::size_t i = 0; i < names.size(); ++i) index_[names[i]] = i;
    filename_ = filename;
  }

  std::size_t require(const char* name) const {
    auto it = index_.find(name);
    if (it == index_.end()) {
      throw ParseError(filename_, 1,
                       std::string("missing required column \"") + name +
                           "\"");
    }
    return it->second;
  }

  std::optional<std::size_t> optional(const char* name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::string filename_;
};

const std::string& cell(const std::vector<std::string>& row, std::size_t i) {
  static const std::string empty;
  if (i >= row.size()) return empty;
  return row[i];
}

SyllabusPlacement to_syllabus(const std::string& s) {
  if (s == "none" || s.empty()) return SyllabusPlacement::none;
  if (s == "file_in_files") return SyllabusPlacement::file_in_files;
  if (s == "embedded_in_syllabus_tool") {
    return SyllabusPlacement::embedded_in_syllabus_tool;
  }
  throw RowError("bad syllabus_placement \"" + s + "\"");
}

Delivery to_delivery(const std::string& s) {
  if (s == "none_or_placeholder") return Delivery::none_or_placeholder;
  if (s == "external_link_or_archive") {
    return Delivery::external_link_or_archive;
  }
  if (s == "fully_hosted") return Delivery::fully_hosted;
  throw RowError("bad delivery \"" + s + "\"");
}

}  // namespace

CourseTable parse_course_table(std::istream& in, ParseMode mode,
                               const std::string& filename) {
  CsvReader reader(in);
  std::vector<std::string> row;
  if (!reader.next(row)) {
    throw ParseError(filename, 1, "empty file (header expected)");
  }
  Header hdr(row, filename);
  const std::size_t c_id = hdr.require("course_id");
  const std::size_t c_term = hdr.require("term");
  const std::size_t c_ugrad = hdr.require("undergraduate");
  const std::size_t c_stem = hdr.require("stem");
  const std::size_t c_online = hdr.require("online");
  const std::size_t c_app = hdr.require("app_use");
  const std::size_t c_skills = hdr.require("skills_training");
  const std::size_t c_enroll = hdr.require("enrollment");
  const std::size_t c_view = hdr.require("viewership");
  const std::size_t c_ta = hdr.require("ta_count");
  const std::size_t c_gpa = hdr.require("gpa");
  const std::size_t c_dfw = hdr.require("dfw_rate");
  const std::size_t c_weeks = hdr.require("term_weeks");
  const std::size_t c_ann = hdr.require("announcement_count");
  const std::size_t c_staff = hdr.require("announcements_staff_authored");
  const std::size_t c_syll = hdr.require("syllabus_placement");
  const std::size_t c_denabled = hdr.require("discussions_enabled");
  const std::size_t c_dposts = hdr.require("discussion_post_count");
  const std::size_t c_graded = hdr.require("graded_fraction");
  const std::size_t c_files = hdr.require("file_count");
  const auto c_tag = hdr.optional("cohort_tag");

  CourseTable table;
  std::unordered_map<std::string, std::size_t> seen_ids;
  while (reader.next(row)) {
    try {
      CourseMeta meta;
      CourseActivityRecord rec;
      meta.course_id = cell(row, c_id);
      if (!meta.course_id.empty()) {
        auto [it, inserted] =
            seen_ids.emplace(meta.course_id, reader.line());
        if (!inserted) {
          throw RowError("duplicate course_id \"" + meta.course_id +
                         "\" (first seen at line " +
                         std::to_string(it->second) + ")");
        }
      }
      meta.term = cell(row, c_term);
      meta.undergraduate = to_flag(cell(row, c_ugrad), "undergraduate");
      meta.stem = to_flag(cell(row, c_stem), "stem");
      meta.online = to_flag(cell(row, c_online), "online");
      meta.app_use = to_flag(cell(row, c_app), "app_use");
      meta.skills_training = to_flag(cell(row, c_skills), "skills_training");
      meta.enrollment = to_int(cell(row, c_enroll), "enrollment");
      meta.viewership = to_int(cell(row, c_view), "viewership");
      meta.ta_count = static_cast<int>(to_int(cell(row, c_ta), "ta_count"));
      meta.gpa = to_real(cell(row, c_gpa), "gpa");
      meta.dfw_rate = to_real(cell(row, c_dfw), "dfw_rate");
      if (c_tag) meta.cohort_tag = cell(row, *c_tag);

      rec.course_id = meta.course_id;
      rec.term_weeks =
          static_cast<int>(to_int(cell(row, c_weeks), "term_weeks"));
      rec.announcement_count = static_cast<int>(
          to_int(cell(row, c_ann), "announcement_count"));
      rec.announcements_staff_authored =
          to_flag(cell(row, c_staff), "announcements_staff_authored");
      rec.syllabus_placement = to_syllabus(cell(row, c_syll));
      rec.discussions_enabled =
          to_flag(cell(row, c_denabled), "discussions_enabled");
      rec.discussion_post_count = static_cast<int>(
          to_int(cell(row, c_dposts), "discussion_post_count"));
      rec.graded_fraction = to_real(cell(row, c_graded), "graded_fraction");
      rec.file_count =
          static_cast<int>(to_int(cell(row, c_files), "file_count"));

      auto violations = validate_meta(meta);
      auto rec_violations = validate_record(rec);
      violations.insert(violations.end(), rec_violations.begin(),
                        rec_violations.end());
      if (!violations.empty()) throw RowError(violations.front());

      table.meta.push_back(std::move(meta));
      table.activity.push_back(std::move(rec));
      ++table.report.rows_ok;
    } catch (const RowError& e) {
      if (mode == ParseMode::strict) {
        throw ParseError(filename, reader.line(), e.what());
      }
      table.report.problems.push_back(filename + ":" +
                                      std::to_string(reader.line()) + ": " +
                                      e.what());
    }
  }
  return table;
}

void attach_instruments(std::istream& in,
                        std::vector<CourseActivityRecord>& records,
                        ParseMode mode, ParseReport& report,
                        const std::string& filename) {
  std::unordered_map<std::string, CourseActivityRecord*> by_id;
  for (auto& rec : records) by_id[rec.course_id] = &rec;

  CsvReader reader(in);
  std::vector<std::string> row;
  if (!reader.next(row)) {
    throw ParseError(filename, 1, "empty file (header expected)");
  }
  Header hdr(row, filename);
  const std::size_t c_id = hdr.require("course_id");
  const std::size_t c_kind = hdr.require("kind");
  const std::size_t c_delivery = hdr.require("delivery");
  const std::size_t c_submission = hdr.require("submission");

  while (reader.next(row)) {
    try {
      auto it = by_id.find(cell(row, c_id));
      if (it == by_id.end()) {
        throw RowError("instrument for unknown course \"" + cell(row, c_id) +
                       "\"");
      }
      const std::string& kind = cell(row, c_kind);
      const std::string& sub = cell(row, c_submission);
      if (kind == "assignment") {
        AssignmentActivity a;
        a.delivery = to_delivery(cell(row, c_delivery));
        if (sub == "offline_or_external") {
          a.submission = AssignmentSubmissionMode::offline_or_external;
        } else if (sub == "file_upload") {
          a.submission = AssignmentSubmissionMode::file_upload;
        } else if (sub == "text_entry") {
          a.submission = AssignmentSubmissionMode::text_entry;
        } else {
          throw RowError("bad assignment submission \"" + sub + "\"");
        }
        it->second->assignments.push_back(a);
      } else if (kind == "quiz") {
        QuizActivity q;
        q.delivery = to_delivery(cell(row, c_delivery));
        if (sub == "offline_or_external") {
          q.submission = QuizSubmissionMode::offline_or_external;
        } else if (sub == "within_lms") {
          q.submission = QuizSubmissionMode::within_lms;
        } else {
          throw RowError("bad quiz submission \"" + sub + "\"");
        }
        it->second->quizzes.push_back(q);
      } else {
        throw RowError("bad instrument kind \"" + kind + "\"");
      }
      ++report.rows_ok;
    } catch (const RowError& e) {
      if (mode == ParseMode::strict) {
        throw ParseError(filename, reader.line(), e.what());
      }
      report.problems.push_back(filename + ":" +
                                std::to_string(reader.line()) + ": " +
                                e.what());
    }
  }
}

std::vector<RequestEvent> parse_request_log(std::istream& in, ParseMode mode,
                                            ParseReport* report,
                                            const std::string& filename) {
  CsvReader reader(in);
  std::vector<std::string> row;
  std::vector<RequestEvent> events;
  if (!reader.next(row)) return events;  // empty stream -> empty collection

  Header hdr(row, filename);
  const std::size_t c_ts = hdr.require("timestamp");
  const std::size_t c_id = hdr.require("course_id");
  const std::size_t c_ctrl = hdr.require("controller");
  const std::size_t c_action = hdr.require("action");
  const auto c_role = hdr.optional("actor_role");

  while (reader.next(row)) {
    try {
      RequestEvent ev;
      try {
        ev.timestamp = parse_timestamp(cell(row, c_ts));
      } catch (const Error& e) {
        throw RowError(e.what());
      }
      ev.course_id = cell(row, c_id);
      ev.controller = cell(row, c_ctrl);
      ev.action = cell(row, c_action);
      if (ev.controller.empty() || ev.action.empty()) {
        throw RowError("empty controller or action");
      }
      if (c_role) {
        const std::string& role = cell(row, *c_role);
        if (role == "student") ev.actor_role = ActorRole::student;
        else if (role == "staff") ev.actor_role = ActorRole::staff;
        else ev.actor_role = ActorRole::unknown;
      }
      events.push_back(std::move(ev));
    } catch (const RowError& e) {
      if (mode == ParseMode::strict) {
        throw ParseError(filename, reader.line(), e.what());
      }
      if (report) {
        report->problems.push_back(filename + ":" +
                                   std::to_string(reader.line()) + ": " +
                                   e.what());
      }
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const RequestEvent& a, const RequestEvent& b) {
                     return a.timestamp < b.timestamp;
                   });
  if (report) report->rows_ok += events.size();
  return events;
}

// ---------------------------------------------------------------------------
// Timestamps (proleptic Gregorian, UTC only)

namespace {

// Days since 1970-01-01 from a civil date (Howard Hinnant's algorithm).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return static_cast<std::int64_t>(era) * 146097 +
         static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int* y, int* m, int* d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  *d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  *m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  *y = static_cast<int>(yy + (*m <= 2));
}

int parse_fixed(const std::string& s, std::size_t pos, std::size_t len,
                const char* what) {
  if (pos + len > s.size()) {
    throw Error("unparseable timestamp \"" + s + "\": truncated " + what);
  }
  int v = 0;
  for (std::size_t i = 0; i < len; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') {
      throw Error("unparseable timestamp \"" + s + "\": bad " + what);
    }
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace

std::int64_t parse_timestamp(const std::string& text) {
  // YYYY-MM-DD[Thh:mm[:ss]][Z]
  std::string s = text;
  if (!s.empty() && s.back() == 'Z') s.pop_back();
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') {
    throw Error("unparseable timestamp \"" + text + "\"");
  }
  int year = parse_fixed(s, 0, 4, "year");
  int month = parse_fixed(s, 5, 2, "month");
  int day = parse_fixed(s, 8, 2, "day");
  if (month < 1 || month > 12 || day < 1 || day > 31) {
    throw Error("unparseable timestamp \"" + text + "\": bad date");
  }
  int hh = 0, mm = 0, ss = 0;
  if (s.size() > 10) {
    if (s[10] != 'T' || s.size() < 16 || s[13] != ':') {
      throw Error("unparseable timestamp \"" + text + "\"");
    }
    hh = parse_fixed(s, 11, 2, "hour");
    mm = parse_fixed(s, 14, 2, "minute");
    if (s.size() > 16) {
      if (s[16] != ':' || s.size() != 19) {
        throw Error("unparseable timestamp \"" + text + "\"");
      }
      ss = parse_fixed(s, 17, 2, "second");
    }
    if (hh > 23 || mm > 59 || ss > 60) {
      throw Error("unparseable timestamp \"" + text + "\": bad time");
    }
  }
  return days_from_civil(year, month, day) * 86400 + hh * 3600 + mm * 60 + ss;
}

std::string format_timestamp(std::int64_t epoch_seconds) {
  std::int64_t days = epoch_seconds / 86400;
  std::int64_t rem = epoch_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  int y, m, d;
  civil_from_days(days, &y, &m, &d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                static_cast<int>(rem / 3600),
                static_cast<int>((rem % 3600) / 60),
                static_cast<int>(rem % 60));
  return buf;
}

// ---------------------------------------------------------------------------
// Aggregation over request events

std::vector<double> weekly_viewership(const std::vector<RequestEvent>& events,
                                      long long enrollment, int term_weeks,
                                      std::int64_t term_start) {
  if (enrollment <= 0) {
    throw Error("weekly_viewership: enrollment must be > 0");
  }
  if (term_weeks < 1) throw Error("weekly_viewership: term_weeks < 1");
  std::vector<double> out(static_cast<std::size_t>(term_weeks), 0.0);
  const std::int64_t week_seconds = 7ll * 86400ll;
  for (const auto& ev : events) {
    std::int64_t w = (ev.timestamp - term_start) / week_seconds;
    if (ev.timestamp < term_start) w = 0;
    if (w >= term_weeks) w = term_weeks - 1;
    out[static_cast<std::size_t>(w)] += 1.0;
  }
  for (double& v : out) v /= static_cast<double>(enrollment);
  return out;
}

CompositionProfile composition(const std::vector<RequestEvent>& events) {
  CompositionProfile profile;
  profile.total_events = static_cast<long long>(events.size());
  if (events.empty()) return profile;
  std::map<std::string, long long> counts;
  for (const auto& ev : events) ++counts[ev.category()];
  for (const auto& [category, count] : counts) {
    profile.shares[category] =
        static_cast<double>(count) / static_cast<double>(events.size());
  }
  return profile;
}

std::vector<std::string> motif_of(const CompositionProfile& profile) {
  std::vector<std::pair<std::string, double>> ranked(profile.shares.begin(),
                                                     profile.shares.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> motif;
  for (std::size_t i = 0; i < ranked.size() && i < 3; ++i) {
    motif.push_back(ranked[i].first);
  }
  std::sort(motif.begin(), motif.end());
  return motif;
}

std::vector<Motif> top_motifs(const std::vector<CompositionProfile>& profiles,
                              int k) {
  if (k < 1) throw Error("top_motifs: k must be >= 1");
  std::map<std::vector<std::string>, int> counts;
  for (const auto& profile : profiles) {
    auto motif = motif_of(profile);
    if (motif.empty()) continue;  // eventless course, no motif
    ++counts[motif];
  }
  std::vector<Motif> out;
  out.reserve(counts.size());
  for (const auto& [categories, count] : counts) {
    Motif m;
    m.categories = categories;
    m.course_count = count;
    m.coverage_pct =
        100.0 * count / static_cast<double>(profiles.empty() ? 1
                                                             : profiles.size());
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end(), [](const Motif& a, const Motif& b) {
    if (a.course_count != b.course_count) return a.course_count > b.course_count;
    return a.categories < b.categories;
  });
  if (static_cast<int>(out.size()) > k) out.resize(static_cast<std::size_t>(k));
  return out;
}

// ---------------------------------------------------------------------------
// Writers

namespace {

std::string flag_str(bool b) { return b ? "1" : "0"; }

std::string real_str(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const char* syllabus_str(SyllabusPlacement p) {
  switch (p) {
    case SyllabusPlacement::none:
      return "none";
    case SyllabusPlacement::file_in_files:
      return "file_in_files";
    case SyllabusPlacement::embedded_in_syllabus_tool:
      return "embedded_in_syllabus_tool";
  }
  return "none";
}

const char* delivery_str(Delivery d) {
  switch (d) {
    case Delivery::none_or_placeholder:
      return "none_or_placeholder";
    case Delivery::external_link_or_archive:
      return "external_link_or_archive";
    case Delivery::fully_hosted:
      return "fully_hosted";
  }
  return "none_or_placeholder";
}

}  // namespace

void write_course_table(std::ostream& out, const std::vector<CourseMeta>& meta,
                        const std::vector<CourseActivityRecord>& activity) {
  if (meta.size() != activity.size()) {
    throw Error("write_course_table: meta/activity size mismatch");
  }
  out << "course_id,term,undergraduate,stem,online,app_use,skills_training,"
         "enrollment,viewership,ta_count,gpa,dfw_rate,term_weeks,"
         "announcement_count,announcements_staff_authored,syllabus_placement,"
         "discussions_enabled,discussion_post_count,graded_fraction,"
         "file_count,cohort_tag\n";
  for (std::size_t i = 0; i < meta.size(); ++i) {
    const CourseMeta& m = meta[i];
    const CourseActivityRecord& a = activity[i];
    if (m.course_id != a.course_id) {
      throw Error("write_course_table: course_id mismatch at row " +
                  std::to_string(i));
    }
    std::vector<std::string> fields = {
        m.course_id,
        m.term,
        flag_str(m.undergraduate),
        flag_str(m.stem),
        flag_str(m.online),
        flag_str(m.app_use),
        flag_str(m.skills_training),
        std::to_string(m.enrollment),
        std::to_string(m.viewership),
        std::to_string(m.ta_count),
        real_str(m.gpa),
        real_str(m.dfw_rate),
        std::to_string(a.term_weeks),
        std::to_string(a.announcement_count),
        flag_str(a.announcements_staff_authored),
        syllabus_str(a.syllabus_placement),
        flag_str(a.discussions_enabled),
        std::to_string(a.discussion_post_count),
        real_str(a.graded_fraction),
        std::to_string(a.file_count),
        m.cohort_tag,
    };
    out << csv_join(fields) << "\n";
  }
}

void write_instruments(std::ostream& out,
                       const std::vector<CourseActivityRecord>& activity) {
  out << "course_id,kind,delivery,submission\n";
  for (const auto& rec : activity) {
    for (const auto& a : rec.assignments) {
      const char* sub = "offline_or_external";
      if (a.submission == AssignmentSubmissionMode::file_upload) {
        sub = "file_upload";
      } else if (a.submission == AssignmentSubmissionMode::text_entry) {
        sub = "text_entry";
      }
      out << csv_join({rec.course_id, "assignment", delivery_str(a.delivery),
                       sub})
          << "\n";
    }
    for (const auto& q : rec.quizzes) {
      const char* sub = q.submission == QuizSubmissionMode::within_lms
                            ? "within_lms"
                            : "offline_or_external";
      out << csv_join({rec.course_id, "quiz", delivery_str(q.delivery), sub})
          << "\n";
    }
  }
}

void write_requests(std::ostream& out,
                    const std::vector<RequestEvent>& events) {
  out << "timestamp,course_id,controller,action,actor_role\n";
  for (const auto& ev : events) {
    const char* role = "unknown";
    if (ev.actor_role == ActorRole::student) role = "student";
    else if (ev.actor_role == ActorRole::staff) role = "staff";
    out << csv_join({format_timestamp(ev.timestamp), ev.course_id,
                     ev.controller, ev.action, role})
        << "\n";
  }
}

}  // namespace dou
