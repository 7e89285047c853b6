#include "dou/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dou/error.hpp"
#include "json.hpp"

namespace dou {

namespace {

const std::array<std::string, kResourceCount> kIds = {
    "An", "S", "D", "A_d", "Q_d", "A_s", "Q_s", "G", "F"};

}  // namespace

const std::string& resource_id(Resource r) {
  return kIds[static_cast<int>(r)];
}

std::optional<Resource> resource_from_id(const std::string& id) {
  for (int i = 0; i < kResourceCount; ++i) {
    if (kIds[i] == id) return static_cast<Resource>(i);
  }
  return std::nullopt;
}

const ResourceSpec* ResourceTaxonomy::find(Resource r) const {
  for (const auto& spec : resources) {
    if (spec.id == r) return &spec;
  }
  return nullptr;
}

ResourceTaxonomy default_taxonomy() {
  ResourceTaxonomy tax;
  tax.resources = {
      {Resource::Announcements, 2,
       {"None", "Placeholder announcements",
        "At least one per week or course instrument"}},
      {Resource::Syllabus, 2,
       {"None", "Syllabus under Files",
        "File previewed/embedded under Syllabus"}},
      {Resource::Discussions, 2,
       {"Discussions disabled", "No discussion activity",
        "One or more live discussion threads"}},
      {Resource::AssignmentDelivery, 2,
       {"No assignments on LMS or placeholders",
        "Link to DOC, ZIP or 3rd-party app",
        "Assignments fully hosted on LMS"}},
      {Resource::QuizDelivery, 2,
       {"No quizzes on LMS or placeholders",
        "Link to DOC, ZIP or 3rd-party app", "Quizzes fully hosted on LMS"}},
      {Resource::AssignmentSubmission, 2,
       {"No file upload, likely paper or 3rd-party app", "LMS file upload",
        "LMS text entry"}},
      {Resource::QuizSubmission, 1,
       {"No online submission, likely paper or 3rd-party app",
        "Submission within LMS"}},
      {Resource::Gradebook, 1,
       {"No grading activity in LMS",
        "Comprehensive grading for all assessments"}},
      {Resource::Files, 1, {"No files", "Course resources under Files"}},
  };
  return tax;
}

AggregationPlan default_plan() {
  AggregationPlan plan;
  plan.pair_terms = {
      {Resource::AssignmentDelivery, Resource::AssignmentSubmission, 1},
      {Resource::QuizDelivery, Resource::QuizSubmission, 1},
      {Resource::Syllabus, Resource::Files, 0},
      {Resource::Discussions, Resource::Gradebook, 0},
  };
  plan.single_terms = {Resource::Announcements};
  plan.normalize_levels = true;
  return plan;
}

std::vector<std::string> validate_taxonomy(const ResourceTaxonomy& tax) {
  std::vector<std::string> violations;
  std::array<int, kResourceCount> seen{};
  for (const auto& spec : tax.resources) {
    const std::string& id = resource_id(spec.id);
    if (++seen[static_cast<int>(spec.id)] == 2) {
      violations.push_back("duplicate resource id \"" + id + "\"");
    }
    if (spec.max_level < 1 || spec.max_level > 2) {
      violations.push_back("resource \"" + id + "\": max_level " +
                           std::to_string(spec.max_level) +
                           " outside {1, 2}");
    }
    if (static_cast<int>(spec.level_descriptions.size()) !=
        spec.max_level + 1) {
      violations.push_back(
          "resource \"" + id + "\": expected " +
          std::to_string(spec.max_level + 1) + " level descriptions, got " +
          std::to_string(spec.level_descriptions.size()));
    } else {
      for (int lvl = 0; lvl <= spec.max_level; ++lvl) {
        if (spec.level_descriptions[lvl].empty()) {
          violations.push_back("resource \"" + id +
                               "\": missing description for level " +
                               std::to_string(lvl));
        }
      }
    }
  }
  return violations;
}

std::vector<std::string> validate_plan(const AggregationPlan& plan,
                                       const ResourceTaxonomy& tax) {
  std::vector<std::string> violations;
  std::array<int, kResourceCount> uses{};

  auto check_member = [&](Resource r) {
    ++uses[static_cast<int>(r)];
    if (!tax.contains(r)) {
      violations.push_back("term references unknown resource \"" +
                           resource_id(r) + "\"");
    }
  };
  for (const auto& pair : plan.pair_terms) {
    check_member(pair.a);
    check_member(pair.b);
    if (pair.beta != 0 && pair.beta != 1) {
      violations.push_back("pair (" + resource_id(pair.a) + ", " +
                           resource_id(pair.b) + "): beta " +
                           std::to_string(pair.beta) + " outside {0, 1}");
    }
  }
  for (Resource r : plan.single_terms) check_member(r);

  for (const auto& spec : tax.resources) {
    int n = uses[static_cast<int>(spec.id)];
    if (n == 0) {
      violations.push_back("\"" + resource_id(spec.id) + "\" unassigned");
    } else if (n > 1) {
      violations.push_back("\"" + resource_id(spec.id) +
                           "\" appears in " + std::to_string(n) + " terms");
    }
  }
  if (plan.pair_terms.empty() && plan.single_terms.empty()) {
    violations.push_back("plan has no terms");
  }
  return violations;
}

ModelConfig default_config() {
  ModelConfig cfg;
  cfg.taxonomy = default_taxonomy();
  cfg.plan = default_plan();
  return cfg;
}

namespace {

using nlohmann::json;

CutScheme parse_cut(const json& j, const std::string& attr) {
  CutScheme cut;
  std::string scheme = j.at("scheme").get<std::string>();
  if (scheme == "median") {
    cut.kind = CutKind::median;
  } else if (scheme == "quantile") {
    cut.kind = CutKind::quantile;
    cut.param = j.at("q").get<double>();
    if (cut.param < 0.0 || cut.param > 1.0) {
      throw Error("config: cut for \"" + attr + "\": q outside [0, 1]");
    }
  } else if (scheme == "threshold") {
    cut.kind = CutKind::threshold;
    cut.param = j.at("value").get<double>();
  } else {
    throw Error("config: cut for \"" + attr + "\": unknown scheme \"" +
                scheme + "\"");
  }
  return cut;
}

Resource require_resource(const std::string& id, const std::string& where) {
  auto r = resource_from_id(id);
  if (!r) throw Error("config: " + where + ": unknown resource \"" + id + "\"");
  return *r;
}

}  // namespace

ModelConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("config: invalid JSON: ") + e.what());
  }

  ModelConfig cfg = default_config();

  if (j.contains("taxonomy")) {
    cfg.taxonomy.resources.clear();
    for (const auto& entry : j.at("taxonomy")) {
      ResourceSpec spec;
      spec.id = require_resource(entry.at("id").get<std::string>(),
                                 "taxonomy entry");
      spec.max_level = entry.at("max_level").get<int>();
      spec.level_descriptions =
          entry.at("levels").get<std::vector<std::string>>();
      cfg.taxonomy.resources.push_back(std::move(spec));
    }
  }
  if (j.contains("plan")) {
    const auto& p = j.at("plan");
    cfg.plan.pair_terms.clear();
    cfg.plan.single_terms.clear();
    for (const auto& entry : p.value("pairs", json::array())) {
      PairTerm term;
      term.a = require_resource(entry.at("a").get<std::string>(), "plan pair");
      term.b = require_resource(entry.at("b").get<std::string>(), "plan pair");
      if (!entry.at("beta").is_number_integer()) {
        throw Error("config: plan pair (" + resource_id(term.a) + ", " +
                    resource_id(term.b) +
                    "): beta must be the integer 0 or 1");
      }
      term.beta = entry.at("beta").get<int>();
      cfg.plan.pair_terms.push_back(term);
    }
    for (const auto& id : p.value("singles", json::array())) {
      cfg.plan.single_terms.push_back(
          require_resource(id.get<std::string>(), "plan single"));
    }
    cfg.plan.normalize_levels = p.value("normalize_levels", true);
  }
  cfg.grading_threshold = j.value("grading_threshold", cfg.grading_threshold);
  cfg.file_share_threshold =
      j.value("file_share_threshold", cfg.file_share_threshold);
  cfg.term_start = j.value("term_start", cfg.term_start);
  if (j.contains("cuts")) {
    for (const auto& [attr, spec] : j.at("cuts").items()) {
      cfg.cuts[attr] = parse_cut(spec, attr);
    }
  }
  if (j.contains("hypotheses")) {
    for (const auto& entry : j.at("hypotheses")) {
      HypothesisOverride h;
      h.id = entry.at("id").get<std::string>();
      h.attribute = entry.at("attribute").get<std::string>();
      h.kind = entry.at("kind").get<std::string>();
      cfg.hypotheses.push_back(std::move(h));
    }
  }

  auto violations = validate_taxonomy(cfg.taxonomy);
  auto plan_violations = validate_plan(cfg.plan, cfg.taxonomy);
  violations.insert(violations.end(), plan_violations.begin(),
                    plan_violations.end());
  if (cfg.grading_threshold < 0.0 || cfg.grading_threshold > 1.0) {
    violations.push_back("grading_threshold outside [0, 1]");
  }
  if (cfg.file_share_threshold < 0.0 || cfg.file_share_threshold > 1.0) {
    violations.push_back("file_share_threshold outside [0, 1]");
  }
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "config: " << violations.size() << " violation(s):";
    for (const auto& v : violations) msg << "\n  - " << v;
    throw Error(msg.str());
  }
  return cfg;
}

ModelConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

}  // namespace dou
