#pragma once

#include <string>
#include <vector>

#include "dou/activity.hpp"
#include "dou/model.hpp"

namespace dou {

enum class Tier : int { Low = 0, Medium = 1, High = 2 };

const char* tier_name(Tier t);
inline Tier tier_from_value(int value) { return static_cast<Tier>(value); }

// Overall course score plus the per-term values it was averaged from
// (pair terms in plan order, then singles), kept for explanation output.
struct CourseDou {
  int value = 0;  // 0, 1 or 2
  Tier tier = Tier::Low;
  std::vector<int> term_values;
};

// Floor of the arithmetic mean. Exact integer-sum division, no floating
// point accumulation. Throws on empty input.
int zeta(const std::vector<int>& values);

// beta=0 -> MAX(a, b): the better of the two resources carries the term.
// beta=1 -> floored average: both must contribute for a high term.
int pair_term(int a, int b, int beta);

// round(2 * level / max_level); exact in integers for max_level in {1, 2}.
int rescale_level(int level, int max_level);

CourseDou course_dou(const ResourceLevels& levels, const AggregationPlan& plan,
                     const ResourceTaxonomy& tax);

}  // namespace dou
