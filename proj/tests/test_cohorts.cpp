#include "dou/cohorts.hpp"

#include <cmath>

#include "doctest.h"
#include "dou/error.hpp"

using namespace dou;

namespace {

ScoredCourse make_course(int dou_value, bool undergrad, bool online,
                         long long enrollment, int ta, long long viewership,
                         bool skills = false, bool app = false) {
  ScoredCourse course;
  static int counter = 0;
  course.meta.course_id = "K" + std::to_string(++counter);
  course.meta.term = "s23";
  course.meta.undergraduate = undergrad;
  course.meta.online = online;
  course.meta.enrollment = enrollment;
  course.meta.ta_count = ta;
  course.meta.viewership = viewership;
  course.meta.skills_training = skills;
  course.meta.app_use = app;
  course.meta.gpa = 3.0;
  course.meta.dfw_rate = 0.1;
  course.dou.value = dou_value;
  course.dou.tier = tier_from_value(dou_value);
  return course;
}

Cuts default_cuts(const Population& population) {
  return resolve_cuts(population, {});
}

}  // namespace

TEST_CASE("discretize rule application") {
  auto labels = discretize({1, 2, 3, 4}, CutScheme{CutKind::median, 0});
  CHECK(labels == std::vector<CutLabel>{CutLabel::low, CutLabel::low,
                                        CutLabel::high, CutLabel::high});

  labels = discretize({5, 5, 5}, CutScheme{CutKind::median, 0});
  for (auto l : labels) CHECK(l == CutLabel::low);  // ties go Low

  labels = discretize({10, 50}, CutScheme{CutKind::threshold, 40});
  CHECK(labels == std::vector<CutLabel>{CutLabel::low, CutLabel::high});

  labels = discretize({1, 2, 3, 4, 10}, CutScheme{CutKind::quantile, 0.8});
  CHECK(labels.back() == CutLabel::high);
  CHECK(labels.front() == CutLabel::low);

  CHECK_THROWS_AS(discretize({}, CutScheme{CutKind::median, 0}), Error);
}

TEST_CASE("cohort expression grammar") {
  CohortSpec spec = parse_cohort_expr("grad & online & ta:low & !skills");
  REQUIRE(spec.atoms.size() == 4);
  CHECK(spec.atoms[0].field == MetaField::undergraduate);
  CHECK(spec.atoms[0].op == CohortAtom::Op::is_false);
  CHECK(spec.atoms[1].field == MetaField::online);
  CHECK(spec.atoms[1].op == CohortAtom::Op::is_true);
  CHECK(spec.atoms[2].field == MetaField::ta_count);
  CHECK(spec.atoms[2].op == CohortAtom::Op::low);
  CHECK(spec.atoms[3].field == MetaField::skills_training);
  CHECK(spec.atoms[3].op == CohortAtom::Op::is_false);

  CHECK_THROWS_AS(parse_cohort_expr("bogus"), Error);
  CHECK_THROWS_AS(parse_cohort_expr("enroll:middling"), Error);
  CHECK_THROWS_AS(parse_cohort_expr("grad &"), Error);
  CHECK_THROWS_AS(parse_cohort_expr(""), Error);

  CohortSpec negated = parse_cohort_expr("!ta:high & !!stem");
  CHECK(negated.atoms[0].op == CohortAtom::Op::low);
  CHECK(negated.atoms[1].op == CohortAtom::Op::is_true);
}

TEST_CASE("cohort_frequency counts the Low share") {
  Population population;
  // 4 graduate online courses, 2 of them Low.
  population.push_back(make_course(0, false, true, 20, 0, 50));
  population.push_back(make_course(0, false, true, 25, 0, 60));
  population.push_back(make_course(1, false, true, 30, 0, 70));
  population.push_back(make_course(2, false, true, 35, 0, 80));
  // Background courses outside the cohort.
  for (int i = 0; i < 6; ++i) {
    population.push_back(make_course(1, true, false, 100, 3, 900));
  }
  Cuts cuts = default_cuts(population);

  CohortReport report = cohort_frequency(
      population, parse_cohort_expr("grad & online"), cuts);
  CHECK(report.member_count == 4);
  REQUIRE(report.low_dou_percent.has_value());
  CHECK(*report.low_dou_percent == doctest::Approx(50.0));

  CohortReport empty = cohort_frequency(
      population, parse_cohort_expr("grad & online & app"), cuts);
  CHECK(empty.member_count == 0);
  CHECK_FALSE(empty.low_dou_percent.has_value());
}

TEST_CASE("adding a conjunct never grows a cohort") {
  Population population;
  for (int i = 0; i < 40; ++i) {
    population.push_back(make_course(i % 3, i % 2 == 0, i % 4 == 0,
                                     10 + i * 7, i % 5, 100 + i * 13,
                                     i % 3 == 0, i % 7 == 0));
  }
  Cuts cuts = default_cuts(population);
  const std::string base = "undergrad";
  const std::string atoms[] = {"stem", "online", "ta:low", "view:high",
                               "!skills"};
  std::string expr = base;
  std::size_t prev = cohort_frequency(population, parse_cohort_expr(expr),
                                      cuts)
                         .member_count;
  for (const auto& atom : atoms) {
    expr += " & " + atom;
    std::size_t count = cohort_frequency(population, parse_cohort_expr(expr),
                                         cuts)
                            .member_count;
    CHECK(count <= prev);
    prev = count;
  }
}

TEST_CASE("full-population cohort equals the population Low share") {
  Population population;
  for (int i = 0; i < 10; ++i) {
    population.push_back(make_course(i < 3 ? 0 : 1, true, false, 50, 1, 100));
  }
  Cuts cuts = default_cuts(population);
  CohortReport report =
      cohort_frequency(population, parse_cohort_expr("undergrad"), cuts);
  CHECK(report.member_count == 10);
  CHECK(*report.low_dou_percent == doctest::Approx(30.0));
}

TEST_CASE("breakdown tiers sum to 100 and compositions count flags") {
  Population population;
  population.push_back(make_course(2, true, false, 50, 1, 100));  // High STEM?
  population.back().meta.stem = true;
  BreakdownReport solo = breakdown(population);
  // Single High STEM course: the High tier row shows stem at 100%.
  const TierCompositionRow& high = solo.by_tier[2];
  CHECK(high.count == 1);
  for (const auto& [name, pct] : high.flag_pct) {
    if (name == "stem") CHECK(pct == doctest::Approx(100.0));
  }

  for (int i = 0; i < 29; ++i) {
    population.push_back(make_course(i % 3, i % 2 == 0, i % 4 == 0,
                                     10 + i * 3, i % 4, 50 + i * 11,
                                     i % 3 == 1, i % 6 == 0));
  }
  BreakdownReport report = breakdown(population);
  REQUIRE_FALSE(report.by_attribute.empty());
  CHECK(report.by_attribute.front().attribute == "Overall");
  CHECK(report.by_attribute.front().count == population.size());
  for (const auto& row : report.by_attribute) {
    if (row.count == 0) continue;
    CHECK(row.pct_low + row.pct_medium + row.pct_high ==
          doctest::Approx(100.0).epsilon(0.001));
  }
  // Hand-counted fixture: tier counts add up to the population.
  std::size_t total = 0;
  for (const auto& row : report.by_tier) total += row.count;
  CHECK(total == population.size());
}

TEST_CASE("archetype detection rules") {
  ResourceTaxonomy tax = default_taxonomy();
  ArchetypeThresholds thresholds;

  // Low DOU + High viewership + file-dominated profile -> junk drive.
  ScoredCourse low_files = make_course(0, true, false, 50, 1, 5000);
  CompositionProfile files;
  files.total_events = 100;
  files.shares["files::show"] = 0.95;
  files.shares["courses::show"] = 0.05;
  auto labels = detect_archetypes(low_files, CutLabel::high, &files,
                                  thresholds, tax);
  CHECK(labels == std::set<Archetype>{Archetype::junk_drive});

  // Missing profile when the junk-drive gate is reachable -> error.
  CHECK_THROWS_AS(detect_archetypes(low_files, CutLabel::high, nullptr,
                                    thresholds, tax),
                  Error);

  // Gradebook at max, everything else zero.
  ScoredCourse gradebook = make_course(0, true, false, 50, 0, 100);
  gradebook.levels[Resource::Gradebook] = 1;
  labels = detect_archetypes(gradebook, CutLabel::low, nullptr, thresholds,
                             tax);
  CHECK(labels == std::set<Archetype>{Archetype::gradebook_only});

  // Low DOU + app use + Low viewership -> access portal.
  ScoredCourse portal = make_course(0, false, true, 20, 0, 10);
  portal.meta.app_use = true;
  labels = detect_archetypes(portal, CutLabel::low, nullptr, thresholds, tax);
  CHECK(labels == std::set<Archetype>{Archetype::access_portal});

  // High-DOU course matches nothing.
  ScoredCourse high = make_course(2, true, false, 50, 1, 5000);
  high.levels[Resource::Gradebook] = 1;
  high.levels[Resource::Files] = 1;
  labels = detect_archetypes(high, CutLabel::high, &files, thresholds, tax);
  CHECK(labels.empty());
}

TEST_CASE("junk-drive share gate respects the threshold") {
  ResourceTaxonomy tax = default_taxonomy();
  ArchetypeThresholds thresholds;  // 0.6 default
  ScoredCourse course = make_course(0, true, false, 50, 1, 5000);
  CompositionProfile profile;
  profile.total_events = 100;
  profile.shares["files::show"] = 0.3;
  profile.shares["folders::show"] = 0.2;
  profile.shares["file_previews::show"] = 0.1;  // file categories sum 0.6
  profile.shares["courses::show"] = 0.4;
  auto labels =
      detect_archetypes(course, CutLabel::high, &profile, thresholds, tax);
  CHECK(labels.count(Archetype::junk_drive) == 1);

  profile.shares["files::show"] = 0.25;  // now 0.55 < 0.6
  profile.shares["courses::show"] = 0.45;
  labels = detect_archetypes(course, CutLabel::high, &profile, thresholds,
                             tax);
  CHECK(labels.empty());
}

TEST_CASE("archetype report tabulates composition") {
  ResourceTaxonomy tax = default_taxonomy();
  Population population;
  for (int i = 0; i < 8; ++i) {
    population.push_back(make_course(1, true, false, 50 + i, 1, 100 + i));
  }
  ScoredCourse gb = make_course(0, true, false, 200, 0, 50);
  gb.levels[Resource::Gradebook] = 1;
  population.push_back(gb);

  Cuts cuts = resolve_cuts(population, {});
  std::map<std::string, CompositionProfile> profiles;
  ArchetypeReport report =
      archetype_report(population, profiles, cuts, {}, tax);
  REQUIRE(report.rows.size() == 3);
  CHECK(report.rows[1].archetype == Archetype::gradebook_only);
  CHECK(report.rows[1].count == 1);
  CHECK(report.members.count(gb.meta.course_id) == 1);
}

TEST_CASE("delta report arithmetic") {
  // Synthesize populations with fixed tier counts.
  auto population_with = [](int low, int medium, int high) {
    Population population;
    for (int i = 0; i < low; ++i) {
      population.push_back(make_course(0, true, false, 50, 1, 100));
    }
    for (int i = 0; i < medium; ++i) {
      population.push_back(make_course(1, true, false, 50, 1, 100));
    }
    for (int i = 0; i < high; ++i) {
      population.push_back(make_course(2, true, false, 50, 1, 100));
    }
    return population;
  };
  ResourceTaxonomy tax = default_taxonomy();
  Population before = population_with(3932, 2365, 673);
  Population after = population_with(3667, 2288, 1004);
  DeltaReport report = delta_report(before, after, tax);

  const TierDelta& low = report.overall[0];
  CHECK(low.before == 3932);
  CHECK(low.after == 3667);
  REQUIRE(low.percent_change.has_value());
  CHECK(*low.percent_change == doctest::Approx(-6.7395).epsilon(1e-3));

  const TierDelta& medium = report.overall[1];
  REQUIRE(medium.percent_change.has_value());
  CHECK(*medium.percent_change == doctest::Approx(-3.2558).epsilon(1e-3));

  const TierDelta& high = report.overall[2];
  REQUIRE(high.percent_change.has_value());
  CHECK(*high.percent_change == doctest::Approx(49.1828).epsilon(1e-3));

  // delta(P, P) is all-zero change.
  DeltaReport self = delta_report(before, before, tax);
  for (const auto& cell : self.overall) {
    if (cell.percent_change) CHECK(*cell.percent_change == 0.0);
  }

  // Zero before-count -> undefined, flagged.
  Population none;
  DeltaReport undefined = delta_report(none, after, tax);
  CHECK_FALSE(undefined.overall[0].percent_change.has_value());
}

TEST_CASE("per-resource delta skips structurally absent tiers") {
  ResourceTaxonomy tax = default_taxonomy();
  Population before;
  before.push_back(make_course(0, true, false, 50, 1, 100));
  before.back().levels[Resource::Files] = 1;  // rescales to tier High
  Population after = before;
  DeltaReport report = delta_report(before, after, tax);
  const auto& files = report.per_resource.at(Resource::Files);
  CHECK(files[0].has_value());        // Low exists
  CHECK_FALSE(files[1].has_value());  // Medium structurally absent
  REQUIRE(files[2].has_value());
  CHECK(files[2]->before == 1);
  CHECK(*files[2]->percent_change == 0.0);
}
