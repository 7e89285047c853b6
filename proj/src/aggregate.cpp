#include "dou/aggregate.hpp"

#include <algorithm>

#include "dou/error.hpp"

namespace dou {

const char* tier_name(Tier t) {
  switch (t) {
    case Tier::Low:
      return "Low";
    case Tier::Medium:
      return "Medium";
    case Tier::High:
      return "High";
  }
  return "?";
}

int zeta(const std::vector<int>& values) {
  if (values.empty()) throw Error("zeta: empty input");
  long long sum = 0;
  for (int v : values) {
    if (v < 0) throw Error("zeta: negative level");
    sum += v;
  }
  return static_cast<int>(sum / static_cast<long long>(values.size()));
}

int pair_term(int a, int b, int beta) {
  if (beta == 0) return std::max(a, b);
  return (a + b) / 2;
}

int rescale_level(int level, int max_level) {
  if (max_level <= 0) throw Error("rescale_level: max_level must be positive");
  return (2 * level + max_level / 2) / max_level;
}

CourseDou course_dou(const ResourceLevels& levels, const AggregationPlan& plan,
                     const ResourceTaxonomy& tax) {
  auto scaled = [&](Resource r) {
    const ResourceSpec* spec = tax.find(r);
    if (!spec) {
      throw Error("course_dou: plan references resource \"" + resource_id(r) +
                  "\" missing from taxonomy");
    }
    int lvl = levels[r];
    if (lvl < 0 || lvl > spec->max_level) {
      throw Error("course_dou: level " + std::to_string(lvl) + " for \"" +
                  resource_id(r) + "\" outside 0.." +
                  std::to_string(spec->max_level));
    }
    return plan.normalize_levels ? rescale_level(lvl, spec->max_level) : lvl;
  };

  CourseDou out;
  out.term_values.reserve(plan.pair_terms.size() + plan.single_terms.size());
  for (const auto& pair : plan.pair_terms) {
    out.term_values.push_back(
        pair_term(scaled(pair.a), scaled(pair.b), pair.beta));
  }
  for (Resource r : plan.single_terms) {
    out.term_values.push_back(scaled(r));
  }
  out.value = zeta(out.term_values);
  out.tier = tier_from_value(out.value);
  return out;
}

}  // namespace dou
