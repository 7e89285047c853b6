#include "dou/model.hpp"

#include <algorithm>

#include "doctest.h"
#include "dou/error.hpp"

using namespace dou;

TEST_CASE("default taxonomy matches the shipped measurement model") {
  ResourceTaxonomy tax = default_taxonomy();
  CHECK(tax.resources.size() == 9);
  CHECK(validate_taxonomy(tax).empty());

  // Binary resources: quiz submission, gradebook, files.
  CHECK(tax.find(Resource::QuizSubmission)->max_level == 1);
  CHECK(tax.find(Resource::Gradebook)->max_level == 1);
  CHECK(tax.find(Resource::Files)->max_level == 1);
  for (Resource r : {Resource::Announcements, Resource::Syllabus,
                     Resource::Discussions, Resource::AssignmentDelivery,
                     Resource::QuizDelivery, Resource::AssignmentSubmission}) {
    CHECK(tax.find(r)->max_level == 2);
  }
  for (const auto& spec : tax.resources) {
    CHECK(spec.level_descriptions.size() ==
          static_cast<std::size_t>(spec.max_level + 1));
  }
}

TEST_CASE("taxonomy validation catches duplicates and bad levels") {
  ResourceTaxonomy tax = default_taxonomy();
  tax.resources.push_back(tax.resources.front());  // duplicate An
  auto violations = validate_taxonomy(tax);
  REQUIRE(violations.size() == 1);
  CHECK(violations.front().find("An") != std::string::npos);

  ResourceTaxonomy bad_level = default_taxonomy();
  bad_level.resources[0].max_level = 3;
  violations = validate_taxonomy(bad_level);
  REQUIRE_FALSE(violations.empty());
  CHECK(violations.front().find("max_level") != std::string::npos);

  ResourceTaxonomy missing_desc = default_taxonomy();
  missing_desc.resources[0].level_descriptions.pop_back();
  CHECK_FALSE(validate_taxonomy(missing_desc).empty());
}

TEST_CASE("default plan validates against the default taxonomy") {
  ResourceTaxonomy tax = default_taxonomy();
  AggregationPlan plan = default_plan();
  CHECK(validate_plan(plan, tax).empty());
  CHECK(plan.pair_terms.size() == 4);
  CHECK(plan.single_terms.size() == 1);
  CHECK(plan.single_terms.front() == Resource::Announcements);

  auto beta_of = [&](Resource a, Resource b) {
    for (const auto& pair : plan.pair_terms) {
      if ((pair.a == a && pair.b == b) || (pair.a == b && pair.b == a)) {
        return pair.beta;
      }
    }
    return -1;
  };
  CHECK(beta_of(Resource::AssignmentDelivery,
                Resource::AssignmentSubmission) == 1);
  CHECK(beta_of(Resource::QuizDelivery, Resource::QuizSubmission) == 1);
  CHECK(beta_of(Resource::Syllabus, Resource::Files) == 0);
  CHECK(beta_of(Resource::Discussions, Resource::Gradebook) == 0);
}

TEST_CASE("plan validation enforces the partition invariant") {
  ResourceTaxonomy tax = default_taxonomy();

  AggregationPlan missing = default_plan();
  missing.pair_terms.erase(missing.pair_terms.begin() + 3);  // drop (D, G)
  auto violations = validate_plan(missing, tax);
  CHECK(violations.size() == 2);  // D and G both unassigned
  CHECK(std::any_of(violations.begin(), violations.end(),
                    [](const std::string& v) {
                      return v.find("\"G\" unassigned") != std::string::npos;
                    }));

  AggregationPlan duplicated = default_plan();
  duplicated.pair_terms.push_back(
      {Resource::Announcements, Resource::Files, 0});
  violations = validate_plan(duplicated, tax);
  CHECK_FALSE(violations.empty());
  CHECK(std::any_of(violations.begin(), violations.end(),
                    [](const std::string& v) {
                      return v.find("appears in 2 terms") != std::string::npos;
                    }));

  AggregationPlan fractional = default_plan();
  fractional.pair_terms[0].beta = 2;
  CHECK_FALSE(validate_plan(fractional, tax).empty());
}

TEST_CASE("validated plan covers the taxonomy resource set exactly") {
  ResourceTaxonomy tax = default_taxonomy();
  AggregationPlan plan = default_plan();
  REQUIRE(validate_plan(plan, tax).empty());
  std::vector<Resource> used;
  for (const auto& pair : plan.pair_terms) {
    used.push_back(pair.a);
    used.push_back(pair.b);
  }
  used.insert(used.end(), plan.single_terms.begin(), plan.single_terms.end());
  std::sort(used.begin(), used.end());
  CHECK(std::adjacent_find(used.begin(), used.end()) == used.end());
  CHECK(used.size() == tax.resources.size());
  for (const auto& spec : tax.resources) {
    CHECK(std::find(used.begin(), used.end(), spec.id) != used.end());
  }
}

TEST_CASE("config JSON round trip and violation reporting") {
  // Partial config: override one knob, keep defaults elsewhere.
  ModelConfig cfg = parse_config_json(R"({"grading_threshold": 0.8})");
  CHECK(cfg.grading_threshold == doctest::Approx(0.8));
  CHECK(cfg.plan.pair_terms.size() == 4);

  CHECK_THROWS_AS(parse_config_json("{nope"), Error);
  CHECK_THROWS_AS(
      parse_config_json(R"({"plan": {"pairs": [], "singles": ["An"]}})"),
      Error);  // partition violation: 8 resources unassigned
  CHECK_THROWS_AS(
      parse_config_json(
          R"({"plan": {"pairs": [{"a":"A_d","b":"A_s","beta":0.5}],
               "singles": ["An","S","D","Q_d","Q_s","G","F"]}})"),
      Error);  // fractional beta rejected
  CHECK_THROWS_AS(parse_config_json(R"({"cuts": {"enrollment":
      {"scheme": "quantile", "q": 1.5}}})"),
                  Error);

  ModelConfig cuts = parse_config_json(
      R"({"cuts": {"viewership": {"scheme": "threshold", "value": 500}}})");
  CHECK(cuts.cuts.at("viewership").kind == CutKind::threshold);
  CHECK(cuts.cuts.at("viewership").param == doctest::Approx(500));
}

TEST_CASE("resource ids round trip") {
  for (Resource r : kAllResources) {
    auto back = resource_from_id(resource_id(r));
    REQUIRE(back.has_value());
    CHECK(*back == r);
  }
  CHECK_FALSE(resource_from_id("nope").has_value());
}
