#include "dou/activity.hpp"

#include <algorithm>

#include "dou/error.hpp"

namespace dou {

std::vector<std::string> validate_record(const CourseActivityRecord& rec) {
  std::vector<std::string> violations;
  auto bad = [&](const std::string& msg) {
    violations.push_back(rec.course_id + ": " + msg);
  };
  if (rec.course_id.empty()) violations.push_back("empty course_id");
  if (rec.term_weeks < 1) bad("term_weeks < 1");
  if (rec.announcement_count < 0) bad("negative announcement_count");
  if (rec.discussion_post_count < 0) bad("negative discussion_post_count");
  if (rec.file_count < 0) bad("negative file_count");
  if (rec.graded_fraction < 0.0 || rec.graded_fraction > 1.0) {
    bad("graded_fraction outside [0, 1]");
  }
  return violations;
}

int majority_level(const std::vector<int>& instrument_levels, int max_level) {
  if (instrument_levels.empty()) return 0;
  for (int lvl : instrument_levels) {
    if (lvl < 0 || lvl > max_level) {
      throw Error("instrument level " + std::to_string(lvl) +
                  " outside 0.." + std::to_string(max_level));
    }
  }
  const double n = static_cast<double>(instrument_levels.size());
  for (int lvl = max_level; lvl >= 1; --lvl) {
    int at_least = static_cast<int>(
        std::count_if(instrument_levels.begin(), instrument_levels.end(),
                      [lvl](int x) { return x >= lvl; }));
    if (at_least / n >= 0.5) return lvl;
  }
  return 0;
}

namespace {

// "At least one per week or course instrument". The instrument branch is
// skipped for courses with no instruments (the comparison would be vacuous).
bool weekly_or_per_instrument(int count, const CourseActivityRecord& rec) {
  if (count >= rec.term_weeks) return true;
  int instruments = rec.instrument_count();
  return instruments >= 1 && count >= instruments;
}

int classify_announcements(const CourseActivityRecord& rec) {
  if (rec.announcements_staff_authored &&
      weekly_or_per_instrument(rec.announcement_count, rec)) {
    return 2;
  }
  return rec.announcement_count > 0 ? 1 : 0;
}

int classify_discussions(const CourseActivityRecord& rec) {
  if (!rec.discussions_enabled) return 0;
  return weekly_or_per_instrument(rec.discussion_post_count, rec) ? 2 : 1;
}

}  // namespace

int classify_resource(const CourseActivityRecord& rec, Resource r,
                      const ClassifierOptions& opts) {
  switch (r) {
    case Resource::Announcements:
      return classify_announcements(rec);
    case Resource::Syllabus:
      return static_cast<int>(rec.syllabus_placement);
    case Resource::Discussions:
      return classify_discussions(rec);
    case Resource::AssignmentDelivery: {
      std::vector<int> levels;
      levels.reserve(rec.assignments.size());
      for (const auto& a : rec.assignments) {
        levels.push_back(static_cast<int>(a.delivery));
      }
      return majority_level(levels, 2);
    }
    case Resource::AssignmentSubmission: {
      std::vector<int> levels;
      levels.reserve(rec.assignments.size());
      for (const auto& a : rec.assignments) {
        levels.push_back(static_cast<int>(a.submission));
      }
      return majority_level(levels, 2);
    }
    case Resource::QuizDelivery: {
      std::vector<int> levels;
      levels.reserve(rec.quizzes.size());
      for (const auto& q : rec.quizzes) {
        levels.push_back(static_cast<int>(q.delivery));
      }
      return majority_level(levels, 2);
    }
    case Resource::QuizSubmission: {
      std::vector<int> levels;
      levels.reserve(rec.quizzes.size());
      for (const auto& q : rec.quizzes) {
        levels.push_back(static_cast<int>(q.submission));
      }
      return majority_level(levels, 1);
    }
    case Resource::Gradebook:
      return rec.graded_fraction >= opts.grading_threshold ? 1 : 0;
    case Resource::Files:
      return rec.file_count > 0 ? 1 : 0;
  }
  throw Error("unknown resource id");
}

ResourceLevels classify_course(const CourseActivityRecord& rec,
                               const ResourceTaxonomy& tax,
                               const ClassifierOptions& opts) {
  ResourceLevels out;
  for (const auto& spec : tax.resources) {
    out[spec.id] = std::min(classify_resource(rec, spec.id, opts),
                            spec.max_level);
  }
  return out;
}

}  // namespace dou
