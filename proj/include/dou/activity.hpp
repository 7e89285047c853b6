#pragma once

#include <array>
#include <string>
#include <vector>

#include "dou/model.hpp"

namespace dou {

// How an instrument (assignment or quiz) is presented to students. The enum
// value doubles as the delivery ordinal level.
enum class Delivery : int {
  none_or_placeholder = 0,
  external_link_or_archive = 1,
  fully_hosted = 2,
};

enum class AssignmentSubmissionMode : int {
  offline_or_external = 0,
  file_upload = 1,
  text_entry = 2,
};

enum class QuizSubmissionMode : int {
  offline_or_external = 0,
  within_lms = 1,
};

enum class SyllabusPlacement : int {
  none = 0,
  file_in_files = 1,
  embedded_in_syllabus_tool = 2,
};

struct AssignmentActivity {
  Delivery delivery = Delivery::none_or_placeholder;
  AssignmentSubmissionMode submission =
      AssignmentSubmissionMode::offline_or_external;
};

struct QuizActivity {
  Delivery delivery = Delivery::none_or_placeholder;
  QuizSubmissionMode submission = QuizSubmissionMode::offline_or_external;
};

// One normalized activity observation per course; the classifier's only
// input. Instrument details live in the assignments/quizzes collections.
struct CourseActivityRecord {
  std::string course_id;
  int term_weeks = 1;
  int announcement_count = 0;
  bool announcements_staff_authored = false;
  SyllabusPlacement syllabus_placement = SyllabusPlacement::none;
  bool discussions_enabled = false;
  int discussion_post_count = 0;
  std::vector<AssignmentActivity> assignments;
  std::vector<QuizActivity> quizzes;
  double graded_fraction = 0.0;
  int file_count = 0;

  int instrument_count() const {
    return static_cast<int>(assignments.size() + quizzes.size());
  }
};

std::vector<std::string> validate_record(const CourseActivityRecord& rec);

// Per-resource ordinal levels, indexed by Resource.
struct ResourceLevels {
  std::array<int, kResourceCount> level{};

  int& operator[](Resource r) { return level[static_cast<int>(r)]; }
  int operator[](Resource r) const { return level[static_cast<int>(r)]; }
  bool operator==(const ResourceLevels&) const = default;
};

struct ClassifierOptions {
  double grading_threshold = 1.0;  // graded_fraction >= threshold -> G = 1
};

// Highest level l in 0..max_level whose criterion holds for at least half of
// the instruments, i.e. share(levels >= l) >= 0.5. Cumulative form keeps the
// result defined and monotone for any split. Empty input -> 0.
int majority_level(const std::vector<int>& instrument_levels, int max_level);

int classify_resource(const CourseActivityRecord& rec, Resource r,
                      const ClassifierOptions& opts = {});

ResourceLevels classify_course(const CourseActivityRecord& rec,
                               const ResourceTaxonomy& tax,
                               const ClassifierOptions& opts = {});

}  // namespace dou
