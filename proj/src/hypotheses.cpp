#include "dou/hypotheses.hpp"

#include <algorithm>

#include "dou/error.hpp"

namespace dou {

Population score_population(const std::vector<CourseActivityRecord>& activity,
                            const std::vector<CourseMeta>& meta,
                            const ModelConfig& config) {
  if (activity.size() != meta.size()) {
    throw Error("score_population: meta/activity size mismatch");
  }
  ClassifierOptions opts;
  opts.grading_threshold = config.grading_threshold;

  Population population;
  population.reserve(activity.size());
  for (std::size_t i = 0; i < activity.size(); ++i) {
    if (activity[i].course_id != meta[i].course_id) {
      throw Error("score_population: course_id mismatch at row " +
                  std::to_string(i) + " (\"" + activity[i].course_id +
                  "\" vs \"" + meta[i].course_id + "\")");
    }
    ScoredCourse course;
    course.meta = meta[i];
    course.levels = classify_course(activity[i], config.taxonomy, opts);
    course.dou = course_dou(course.levels, config.plan, config.taxonomy);
    population.push_back(std::move(course));
  }
  return population;
}

std::vector<HypothesisSpec> default_registry() {
  using MF = MetaField;
  using AK = AttributeKind;
  return {
      {"H1", "Undergraduate", MF::undergraduate, AK::binary_flag,
       "positive t: undergraduate courses score higher"},
      {"H2", "STEM", MF::stem, AK::binary_flag,
       "positive t: STEM courses score higher"},
      {"H3", "Online", MF::online, AK::binary_flag,
       "positive t: online-only courses score higher"},
      {"H4", "App use", MF::app_use, AK::binary_flag,
       "positive t: third-party app users score higher"},
      {"H5", "Enrollment", MF::enrollment, AK::numeric,
       "enrollment compared across score tiers"},
      {"H6", "Viewership", MF::viewership, AK::numeric,
       "pageviews compared across score tiers"},
      {"H7", "GPA", MF::gpa, AK::numeric,
       "average GPA compared across score tiers"},
      {"H8", "DFW", MF::dfw_rate, AK::numeric,
       "DFW rate compared across score tiers"},
      {"H9", "#TA", MF::ta_count, AK::numeric,
       "teaching staff count compared across score tiers"},
      {"H10", "Skills", MF::skills_training, AK::binary_flag,
       "positive t: trained instructors score higher"},
  };
}

std::vector<HypothesisSpec> build_registry(const ModelConfig& config) {
  if (config.hypotheses.empty()) return default_registry();
  std::vector<HypothesisSpec> registry;
  for (const auto& ov : config.hypotheses) {
    HypothesisSpec spec;
    spec.id = ov.id;
    auto field = meta_field_from_name(ov.attribute);
    if (!field) {
      throw Error("hypotheses config: unknown attribute \"" + ov.attribute +
                  "\"");
    }
    spec.attribute = *field;
    spec.label = ov.attribute;
    if (ov.kind == "binary_flag") {
      spec.kind = AttributeKind::binary_flag;
    } else if (ov.kind == "numeric") {
      spec.kind = AttributeKind::numeric;
    } else {
      throw Error("hypotheses config: kind must be binary_flag or numeric");
    }
    if (spec.kind == AttributeKind::binary_flag &&
        !meta_field_is_flag(spec.attribute)) {
      throw Error("hypotheses config: \"" + ov.attribute +
                  "\" is numeric, not a flag");
    }
    if (spec.kind == AttributeKind::numeric &&
        meta_field_is_flag(spec.attribute)) {
      throw Error("hypotheses config: \"" + ov.attribute +
                  "\" is a flag, not numeric");
    }
    registry.push_back(std::move(spec));
  }
  return registry;
}

namespace {

// DOU coding used in the tests: overall tier value 0/1/2, or the resource's
// own classified level for per-resource tables.
double dou_value(const ScoredCourse& course, std::optional<Resource> target) {
  if (!target) return static_cast<double>(course.dou.value);
  return static_cast<double>(course.levels[*target]);
}

HypothesisRow run_one(const Population& population, const HypothesisSpec& spec,
                      std::optional<Resource> target,
                      const ResourceTaxonomy& tax) {
  HypothesisRow row;
  row.spec = spec;

  if (spec.kind == AttributeKind::binary_flag) {
    std::vector<double> flag_true;
    std::vector<double> flag_false;
    for (const auto& course : population) {
      double v = dou_value(course, target);
      (meta_flag(course.meta, spec.attribute) ? flag_true : flag_false)
          .push_back(v);
    }
    if (flag_true.size() >= 2 && flag_false.size() >= 2) {
      row.t = t_test(flag_true, flag_false);
      row.f = anova_f({flag_true, flag_false});
    }
    if (!flag_true.empty() && !flag_false.empty() &&
        flag_true.size() + flag_false.size() >= 3) {
      row.h = kruskal_wallis({flag_true, flag_false});
    }
    return row;
  }

  // Numeric: attribute values per DOU group. The overall target groups by
  // the three tiers; a resource target groups by its levels 0..max (so
  // binary resources have two groups, not a structurally empty third).
  // Any empty group -> not computable.
  int n_groups = 3;
  if (target) {
    const ResourceSpec* res = tax.find(*target);
    n_groups = res ? res->max_level + 1 : 3;
  }
  std::vector<std::vector<double>> groups(
      static_cast<std::size_t>(n_groups));
  for (const auto& course : population) {
    int g = static_cast<int>(dou_value(course, target));
    if (g >= n_groups) g = n_groups - 1;
    groups[static_cast<std::size_t>(g)].push_back(
        meta_value(course.meta, spec.attribute));
  }
  bool any_empty = false;
  std::size_t total = 0;
  for (const auto& g : groups) {
    if (g.empty()) any_empty = true;
    total += g.size();
  }
  if (!any_empty) {
    if (total >= groups.size() + 1) row.f = anova_f(groups);
    if (total >= 3) row.h = kruskal_wallis(groups);
  }
  return row;
}

}  // namespace

HypothesisTable run_hypotheses(const Population& population,
                               const std::vector<HypothesisSpec>& registry,
                               std::optional<Resource> target,
                               const ResourceTaxonomy& tax) {
  HypothesisTable table;
  table.target = target;
  table.rows.reserve(registry.size());
  for (const auto& spec : registry) {
    table.rows.push_back(run_one(population, spec, target, tax));
  }
  return table;
}

std::map<std::string, HypothesisTable> run_snapshots(
    const std::map<std::string, Population>& snapshots,
    const std::vector<HypothesisSpec>& registry,
    std::optional<Resource> target, const ResourceTaxonomy& tax) {
  if (snapshots.empty()) throw Error("run_snapshots: no snapshots");
  std::map<std::string, HypothesisTable> tables;
  for (const auto& [term, population] : snapshots) {
    tables[term] = run_hypotheses(population, registry, target, tax);
  }
  return tables;
}

std::map<std::string, Population> split_by_term(const Population& population) {
  std::map<std::string, Population> snapshots;
  for (const auto& course : population) {
    snapshots[course.meta.term].push_back(course);
  }
  return snapshots;
}

}  // namespace dou
