#include "dou/cohorts.hpp"

#include <algorithm>
#include <cmath>

#include "dou/error.hpp"

namespace dou {

double cut_point(const std::vector<double>& values, const CutScheme& scheme) {
  if (scheme.kind == CutKind::threshold) return scheme.param;
  if (values.empty()) throw Error("cut_point: empty input");
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  if (scheme.kind == CutKind::median) {
    std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  }
  // quantile(q): the value at rank ceil(q*n), clamped (type-1 quantile).
  double q = scheme.param;
  if (q <= 0.0) return sorted.front();
  if (q >= 1.0) return sorted.back();
  std::size_t idx = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(sorted.size()))) - 1;
  if (idx >= sorted.size()) idx = sorted.size() - 1;
  return sorted[idx];
}

std::vector<CutLabel> discretize(const std::vector<double>& values,
                                 const CutScheme& scheme) {
  if (values.empty()) throw Error("discretize: empty input");
  double cut = cut_point(values, scheme);
  std::vector<CutLabel> labels;
  labels.reserve(values.size());
  for (double v : values) {
    labels.push_back(v > cut ? CutLabel::high : CutLabel::low);
  }
  return labels;
}

CutLabel Cuts::label(MetaField field, double value) const {
  auto it = points.find(field);
  if (it == points.end()) {
    throw Error(std::string("no cut resolved for \"") +
                meta_field_name(field) + "\"");
  }
  return value > it->second ? CutLabel::high : CutLabel::low;
}

Cuts resolve_cuts(const Population& population,
                  const std::map<std::string, CutScheme>& overrides) {
  static constexpr MetaField kNumeric[] = {
      MetaField::enrollment, MetaField::viewership, MetaField::ta_count,
      MetaField::gpa, MetaField::dfw_rate};
  Cuts cuts;
  for (MetaField field : kNumeric) {
    CutScheme scheme;
    auto it = overrides.find(meta_field_name(field));
    if (it != overrides.end()) scheme = it->second;
    if (scheme.kind != CutKind::threshold && population.empty()) {
      continue;  // nothing to cut; lookups will fail loudly
    }
    std::vector<double> values;
    values.reserve(population.size());
    for (const auto& course : population) {
      values.push_back(meta_value(course.meta, field));
    }
    cuts.points[field] = cut_point(values, scheme);
  }
  return cuts;
}

// ---------------------------------------------------------------------------
// Cohort expressions

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

CohortAtom parse_atom(const std::string& raw, const std::string& expr) {
  std::string token = trim(raw);
  bool negated = false;
  while (!token.empty() && token.front() == '!') {
    negated = !negated;
    token = trim(token.substr(1));
  }
  if (token.empty()) {
    throw Error("cohort expression \"" + expr + "\": empty atom");
  }

  CohortAtom atom;
  auto colon = token.find(':');
  if (colon != std::string::npos) {
    std::string attr = trim(token.substr(0, colon));
    std::string level = trim(token.substr(colon + 1));
    static const std::map<std::string, MetaField> kNumericNames = {
        {"enroll", MetaField::enrollment},
        {"enrollment", MetaField::enrollment},
        {"view", MetaField::viewership},
        {"viewership", MetaField::viewership},
        {"ta", MetaField::ta_count},
        {"ta_count", MetaField::ta_count},
        {"gpa", MetaField::gpa},
        {"dfw", MetaField::dfw_rate},
        {"dfw_rate", MetaField::dfw_rate},
    };
    auto it = kNumericNames.find(attr);
    if (it == kNumericNames.end()) {
      throw Error("cohort expression \"" + expr + "\": unknown attribute \"" +
                  attr + "\"");
    }
    atom.field = it->second;
    bool high;
    if (level == "low" || level == "lo") high = false;
    else if (level == "high" || level == "hi") high = true;
    else {
      throw Error("cohort expression \"" + expr + "\": bad level \"" + level +
                  "\" (want low or high)");
    }
    if (negated) high = !high;
    atom.op = high ? CohortAtom::Op::high : CohortAtom::Op::low;
    return atom;
  }

  static const std::map<std::string, std::pair<MetaField, bool>> kFlagNames = {
      {"undergrad", {MetaField::undergraduate, true}},
      {"undergraduate", {MetaField::undergraduate, true}},
      {"grad", {MetaField::undergraduate, false}},  // sugar for !undergrad
      {"stem", {MetaField::stem, true}},
      {"online", {MetaField::online, true}},
      {"app", {MetaField::app_use, true}},
      {"app_use", {MetaField::app_use, true}},
      {"skills", {MetaField::skills_training, true}},
      {"skills_training", {MetaField::skills_training, true}},
  };
  auto it = kFlagNames.find(token);
  if (it == kFlagNames.end()) {
    throw Error("cohort expression \"" + expr + "\": unknown attribute \"" +
                token + "\"");
  }
  atom.field = it->second.first;
  bool want = it->second.second;
  if (negated) want = !want;
  atom.op = want ? CohortAtom::Op::is_true : CohortAtom::Op::is_false;
  return atom;
}

bool atom_matches(const CohortAtom& atom, const ScoredCourse& course,
                  const Cuts& cuts) {
  switch (atom.op) {
    case CohortAtom::Op::is_true:
      return meta_flag(course.meta, atom.field);
    case CohortAtom::Op::is_false:
      return !meta_flag(course.meta, atom.field);
    case CohortAtom::Op::low:
      return cuts.label(atom.field, meta_value(course.meta, atom.field)) ==
             CutLabel::low;
    case CohortAtom::Op::high:
      return cuts.label(atom.field, meta_value(course.meta, atom.field)) ==
             CutLabel::high;
  }
  return false;
}

const std::pair<const char*, MetaField> kFlagColumns[] = {
    {"undergraduate", MetaField::undergraduate},
    {"stem", MetaField::stem},
    {"online", MetaField::online},
    {"app_use", MetaField::app_use},
    {"skills_training", MetaField::skills_training},
};

}  // namespace

CohortSpec parse_cohort_expr(const std::string& expr) {
  CohortSpec spec;
  spec.text = trim(expr);
  std::size_t start = 0;
  while (start <= expr.size()) {
    std::size_t amp = expr.find('&', start);
    std::string piece = amp == std::string::npos
                            ? expr.substr(start)
                            : expr.substr(start, amp - start);
    spec.atoms.push_back(parse_atom(piece, expr));
    if (amp == std::string::npos) break;
    start = amp + 1;
  }
  if (spec.atoms.empty()) {
    throw Error("cohort expression \"" + expr + "\": no atoms");
  }
  return spec;
}

namespace {

bool cohort_matches(const CohortSpec& spec, const ScoredCourse& course,
                    const Cuts& cuts) {
  return std::all_of(spec.atoms.begin(), spec.atoms.end(),
                     [&](const CohortAtom& atom) {
                       return atom_matches(atom, course, cuts);
                     });
}

}  // namespace

CohortReport cohort_frequency(const Population& population,
                              const CohortSpec& spec, const Cuts& cuts) {
  if (spec.atoms.empty()) throw Error("cohort_frequency: empty spec");
  CohortReport report;
  report.spec_text = spec.text;

  std::size_t low = 0;
  std::array<std::size_t, std::size(kFlagColumns)> flag_true{};
  for (const auto& course : population) {
    if (!cohort_matches(spec, course, cuts)) continue;
    ++report.member_count;
    if (course.dou.tier == Tier::Low) ++low;
    for (std::size_t i = 0; i < std::size(kFlagColumns); ++i) {
      if (meta_flag(course.meta, kFlagColumns[i].second)) ++flag_true[i];
    }
  }
  if (report.member_count > 0) {
    double n = static_cast<double>(report.member_count);
    report.low_dou_percent = 100.0 * static_cast<double>(low) / n;
    for (std::size_t i = 0; i < std::size(kFlagColumns); ++i) {
      report.composition.emplace_back(
          kFlagColumns[i].first,
          100.0 * static_cast<double>(flag_true[i]) / n);
    }
  }
  return report;
}

BreakdownReport breakdown(const Population& population) {
  BreakdownReport report;
  const double n = static_cast<double>(population.size());

  auto tier_row = [&](const std::string& name, auto&& member) {
    AttributeBreakdownRow row;
    row.attribute = name;
    std::array<std::size_t, 3> tiers{};
    for (const auto& course : population) {
      if (!member(course)) continue;
      ++row.count;
      ++tiers[static_cast<std::size_t>(course.dou.tier)];
    }
    if (row.count > 0) {
      double c = static_cast<double>(row.count);
      row.pct_low = 100.0 * static_cast<double>(tiers[0]) / c;
      row.pct_medium = 100.0 * static_cast<double>(tiers[1]) / c;
      row.pct_high = 100.0 * static_cast<double>(tiers[2]) / c;
    }
    return row;
  };

  report.by_attribute.push_back(
      tier_row("Overall", [](const ScoredCourse&) { return true; }));
  for (const auto& [name, field] : kFlagColumns) {
    report.by_attribute.push_back(tier_row(
        name, [field = field](const ScoredCourse& course) {
          return meta_flag(course.meta, field);
        }));
  }

  static constexpr MetaField kNumeric[] = {
      MetaField::enrollment, MetaField::viewership, MetaField::ta_count,
      MetaField::gpa, MetaField::dfw_rate};
  for (MetaField field : kNumeric) {
    NumericSummaryRow row;
    row.attribute = meta_field_name(field);
    if (!population.empty()) {
      double sum = 0.0;
      for (const auto& course : population) {
        sum += meta_value(course.meta, field);
      }
      row.mean = sum / n;
      if (population.size() > 1) {
        double ss = 0.0;
        for (const auto& course : population) {
          double d = meta_value(course.meta, field) - row.mean;
          ss += d * d;
        }
        row.stddev = std::sqrt(ss / (n - 1.0));
      }
    }
    report.numeric.push_back(row);
  }

  for (int t = 0; t < 3; ++t) {
    TierCompositionRow row;
    row.tier = static_cast<Tier>(t);
    std::array<std::size_t, std::size(kFlagColumns)> flag_true{};
    for (const auto& course : population) {
      if (static_cast<int>(course.dou.tier) != t) continue;
      ++row.count;
      for (std::size_t i = 0; i < std::size(kFlagColumns); ++i) {
        if (meta_flag(course.meta, kFlagColumns[i].second)) ++flag_true[i];
      }
    }
    for (std::size_t i = 0; i < std::size(kFlagColumns); ++i) {
      double pct = row.count == 0
                       ? 0.0
                       : 100.0 * static_cast<double>(flag_true[i]) /
                             static_cast<double>(row.count);
      row.flag_pct.emplace_back(kFlagColumns[i].first, pct);
    }
    report.by_tier.push_back(std::move(row));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Archetypes

const char* archetype_name(Archetype a) {
  switch (a) {
    case Archetype::junk_drive:
      return "junk-drive";
    case Archetype::gradebook_only:
      return "gradebook-only";
    case Archetype::access_portal:
      return "access-portal";
  }
  return "?";
}

bool is_file_category(const std::string& controller) {
  return controller == "files" || controller == "folders" ||
         controller == "file_previews";
}

std::set<Archetype> detect_archetypes(const ScoredCourse& course,
                                      CutLabel viewership_label,
                                      const CompositionProfile* profile,
                                      const ArchetypeThresholds& thresholds,
                                      const ResourceTaxonomy& tax) {
  std::set<Archetype> labels;

  if (course.dou.tier == Tier::Low && viewership_label == CutLabel::high) {
    if (profile == nullptr) {
      throw Error("detect_archetypes: course \"" + course.meta.course_id +
                  "\" needs a request profile for the junk-drive check");
    }
    double file_share = 0.0;
    for (const auto& [category, share] : profile->shares) {
      auto sep = category.find("::");
      if (is_file_category(category.substr(0, sep))) file_share += share;
    }
    if (file_share >= thresholds.file_share) {
      labels.insert(Archetype::junk_drive);
    }
  }

  const ResourceSpec* gradebook = tax.find(Resource::Gradebook);
  if (gradebook && course.levels[Resource::Gradebook] == gradebook->max_level) {
    bool others_zero = true;
    for (const auto& spec : tax.resources) {
      if (spec.id == Resource::Gradebook) continue;
      if (course.levels[spec.id] != 0) {
        others_zero = false;
        break;
      }
    }
    if (others_zero) labels.insert(Archetype::gradebook_only);
  }

  if (course.dou.tier == Tier::Low && course.meta.app_use &&
      viewership_label == CutLabel::low) {
    labels.insert(Archetype::access_portal);
  }
  return labels;
}

ArchetypeReport archetype_report(
    const Population& population,
    const std::map<std::string, CompositionProfile>& profiles,
    const Cuts& cuts, const ArchetypeThresholds& thresholds,
    const ResourceTaxonomy& tax) {
  static const CompositionProfile kEmptyProfile;
  static constexpr Archetype kOrder[] = {
      Archetype::junk_drive, Archetype::gradebook_only,
      Archetype::access_portal};
  static constexpr MetaField kLoHi[] = {
      MetaField::enrollment, MetaField::viewership, MetaField::ta_count};

  ArchetypeReport report;
  report.population_size = population.size();

  std::map<Archetype, Population> by_archetype;
  for (const auto& course : population) {
    CutLabel view_label = cuts.label(
        MetaField::viewership, static_cast<double>(course.meta.viewership));
    auto it = profiles.find(course.meta.course_id);
    const CompositionProfile* profile =
        it != profiles.end() ? &it->second : &kEmptyProfile;
    auto labels =
        detect_archetypes(course, view_label, profile, thresholds, tax);
    if (labels.empty()) continue;
    report.members[course.meta.course_id] =
        std::vector<Archetype>(labels.begin(), labels.end());
    for (Archetype a : labels) by_archetype[a].push_back(course);
  }

  for (Archetype a : kOrder) {
    ArchetypeRow row;
    row.archetype = a;
    const Population& members = by_archetype[a];
    row.count = members.size();
    row.pct_of_population =
        population.empty()
            ? 0.0
            : 100.0 * static_cast<double>(row.count) /
                  static_cast<double>(population.size());
    double n = row.count == 0 ? 1.0 : static_cast<double>(row.count);
    for (const auto& [name, field] : kFlagColumns) {
      std::size_t k = 0;
      for (const auto& course : members) {
        if (meta_flag(course.meta, field)) ++k;
      }
      row.flag_pct.emplace_back(name, 100.0 * static_cast<double>(k) / n);
    }
    for (MetaField field : kLoHi) {
      std::size_t lo = 0;
      for (const auto& course : members) {
        if (cuts.label(field, meta_value(course.meta, field)) ==
            CutLabel::low) {
          ++lo;
        }
      }
      double pct_lo = 100.0 * static_cast<double>(lo) / n;
      row.lo_hi.emplace_back(meta_field_name(field), pct_lo,
                             row.count == 0 ? 0.0 : 100.0 - pct_lo);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Before/after deltas

namespace {

std::optional<double> percent_change(long long before, long long after) {
  if (before <= 0) return std::nullopt;
  return 100.0 * static_cast<double>(after - before) /
         static_cast<double>(before);
}

}  // namespace

DeltaReport delta_report(const Population& before, const Population& after,
                         const ResourceTaxonomy& tax) {
  DeltaReport report;

  auto tally_overall = [](const Population& pop, bool is_after,
                          std::array<TierDelta, 3>& cells) {
    for (const auto& course : pop) {
      auto& cell = cells[static_cast<std::size_t>(course.dou.tier)];
      (is_after ? cell.after : cell.before) += 1;
    }
  };
  tally_overall(before, false, report.overall);
  tally_overall(after, true, report.overall);
  for (auto& cell : report.overall) {
    cell.percent_change = percent_change(cell.before, cell.after);
  }

  for (const auto& spec : tax.resources) {
    auto& cells = report.per_resource[spec.id];
    for (int lvl = 0; lvl <= spec.max_level; ++lvl) {
      int tier = rescale_level(lvl, spec.max_level);
      cells[static_cast<std::size_t>(tier)] = TierDelta{};
    }
    auto tally = [&](const Population& pop, bool is_after) {
      for (const auto& course : pop) {
        int tier = rescale_level(course.levels[spec.id], spec.max_level);
        auto& cell = cells[static_cast<std::size_t>(tier)];
        (is_after ? cell->after : cell->before) += 1;
      }
    };
    tally(before, false);
    tally(after, true);
    for (auto& cell : cells) {
      if (cell) cell->percent_change = percent_change(cell->before, cell->after);
    }
  }
  return report;
}

}  // namespace dou
