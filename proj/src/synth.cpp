#include "dou/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dou/error.hpp"
#include "json.hpp"

namespace dou {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(seed_ + counter_ * kGolden);
}

double CounterRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int CounterRng::next_int(int lo, int hi) {
  if (hi < lo) throw Error("next_int: empty range");
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next_u64() % span);
}

bool CounterRng::next_bernoulli(double p) { return next_unit() < p; }

double CounterRng::next_normal(double mean, double sigma) {
  // Box-Muller; always consumes two draws, second variate discarded.
  double u1 = next_unit();
  double u2 = next_unit();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  return mean + sigma * z;
}

int CounterRng::next_poisson(double mean) {
  if (mean < 0.0) throw Error("next_poisson: negative mean");
  double u = next_unit();
  double p = std::exp(-mean);
  double cum = p;
  int k = 0;
  while (u > cum && k < 1000) {
    ++k;
    p *= mean / k;
    cum += p;
  }
  return k;
}

int CounterRng::next_categorical(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) throw Error("next_categorical: zero total weight");
  double u = next_unit() * total;
  double cum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    if (u < cum) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

SynthConfig::SynthConfig() {
  level_distribution = {
      {Resource::Announcements, {0.35, 0.30, 0.35}},
      {Resource::Syllabus, {0.30, 0.40, 0.30}},
      {Resource::Discussions, {0.45, 0.35, 0.20}},
      {Resource::AssignmentDelivery, {0.25, 0.30, 0.45}},
      {Resource::QuizDelivery, {0.40, 0.25, 0.35}},
      {Resource::AssignmentSubmission, {0.30, 0.40, 0.30}},
      {Resource::QuizSubmission, {0.45, 0.55}},
      {Resource::Gradebook, {0.35, 0.65}},
      {Resource::Files, {0.15, 0.85}},
  };
}

std::vector<std::string> validate_synth_config(const SynthConfig& config) {
  std::vector<std::string> violations;
  if (config.n_courses < 1) violations.push_back("n_courses must be >= 1");
  if (config.term_weeks < 1) violations.push_back("term_weeks must be >= 1");
  auto check_p = [&](double p, const char* name) {
    if (p < 0.0 || p > 1.0) {
      violations.push_back(std::string(name) + " outside [0, 1]");
    }
  };
  check_p(config.p_undergraduate, "p_undergraduate");
  check_p(config.p_stem, "p_stem");
  check_p(config.p_online, "p_online");
  check_p(config.p_app_use, "p_app_use");
  check_p(config.p_skills_training, "p_skills_training");
  check_p(config.p_gradebook_only, "p_gradebook_only");
  if (config.ta_mean < 0.0) violations.push_back("ta_mean must be >= 0");
  if (config.propensity_sigma < 0.0) {
    violations.push_back("propensity_sigma must be >= 0");
  }
  if (!std::isfinite(config.viewership_coupling)) {
    violations.push_back("viewership_coupling must be finite");
  }

  ResourceTaxonomy tax = default_taxonomy();
  for (const auto& spec : tax.resources) {
    auto it = config.level_distribution.find(spec.id);
    if (it == config.level_distribution.end()) {
      violations.push_back("missing level distribution for \"" +
                           resource_id(spec.id) + "\"");
      continue;
    }
    const auto& dist = it->second;
    if (static_cast<int>(dist.size()) != spec.max_level + 1) {
      violations.push_back("level distribution for \"" + resource_id(spec.id) +
                           "\" must have " + std::to_string(spec.max_level + 1) +
                           " entries");
      continue;
    }
    double sum = 0.0;
    for (double p : dist) {
      if (p < 0.0) {
        violations.push_back("negative probability for \"" +
                             resource_id(spec.id) + "\"");
        break;
      }
      sum += p;
    }
    if (sum <= 0.0) {
      violations.push_back("zero-mass level distribution for \"" +
                           resource_id(spec.id) + "\"");
    }
  }
  for (const auto& effect : config.effects) {
    if (!std::isfinite(effect.shift)) {
      violations.push_back("planted effect shift must be finite");
    }
    if (!meta_field_is_flag(effect.attribute)) {
      violations.push_back(std::string("planted effect attribute \"") +
                           meta_field_name(effect.attribute) +
                           "\" is not a flag");
    }
  }
  return violations;
}

std::vector<double> tilt_distribution(const std::vector<double>& dist,
                                      double shift) {
  std::vector<double> out(dist);
  if (out.size() < 2 || shift == 0.0) return out;
  const std::size_t top = out.size() - 1;
  bool upward = shift > 0.0;
  double remaining = std::fabs(shift);
  for (int pass = 0; pass < 8 && remaining > 1e-12; ++pass) {
    // Mass able to move one step in the wanted direction.
    double movable = upward ? 1.0 - out[top] : 1.0 - out[0];
    if (movable <= 1e-12) break;
    double alpha = std::min(1.0, remaining / movable);
    std::vector<double> moved(out.size(), 0.0);
    if (upward) {
      for (std::size_t l = 0; l < top; ++l) moved[l + 1] += alpha * out[l];
      for (std::size_t l = 0; l < top; ++l) out[l] *= 1.0 - alpha;
    } else {
      for (std::size_t l = 1; l <= top; ++l) moved[l - 1] += alpha * out[l];
      for (std::size_t l = 1; l <= top; ++l) out[l] *= 1.0 - alpha;
    }
    for (std::size_t l = 0; l < out.size(); ++l) out[l] += moved[l];
    remaining -= alpha * movable;
  }
  return out;
}

namespace {

double snap(double v, double grid) { return std::round(v / grid) * grid; }

long long draw_lognormal_int(CounterRng& rng, const LogNormalSpec& spec,
                             long long lo) {
  double v = std::exp(rng.next_normal(spec.log_mean, spec.log_sigma));
  auto out = static_cast<long long>(std::llround(v));
  return std::max(lo, out);
}

struct LevelTargets {
  std::array<int, kResourceCount> level{};
  int operator[](Resource r) const { return level[static_cast<int>(r)]; }
};

// Synthesizes an activity record that classifies back to exactly the drawn
// target levels under the default taxonomy and classifier defaults.
CourseActivityRecord build_activity(CounterRng& rng, const LevelTargets& t,
                                    const SynthConfig& config,
                                    const std::string& course_id) {
  CourseActivityRecord rec;
  rec.course_id = course_id;
  rec.term_weeks = config.term_weeks;

  const int a_d = t[Resource::AssignmentDelivery];
  const int a_s = t[Resource::AssignmentSubmission];
  const int q_d = t[Resource::QuizDelivery];
  const int q_s = t[Resource::QuizSubmission];

  int n_assign = (a_d > 0 || a_s > 0) ? 2 + rng.next_int(0, 8)
                                      : rng.next_int(0, 5);
  int n_quiz = (q_d > 0 || q_s > 0) ? 2 + rng.next_int(0, 6)
                                    : rng.next_int(0, 4);

  // A strict majority of instruments sits exactly at the target level; the
  // rest draw at-or-below it, so the majority rule lands on the target.
  int exact_assign = n_assign - n_assign / 2;
  for (int i = 0; i < n_assign; ++i) {
    AssignmentActivity a;
    int lvl_d = i < exact_assign ? a_d : rng.next_int(0, a_d);
    int lvl_s = i < exact_assign ? a_s : rng.next_int(0, a_s);
    a.delivery = static_cast<Delivery>(lvl_d);
    a.submission = static_cast<AssignmentSubmissionMode>(lvl_s);
    rec.assignments.push_back(a);
  }
  int exact_quiz = n_quiz - n_quiz / 2;
  for (int i = 0; i < n_quiz; ++i) {
    QuizActivity q;
    int lvl_d = i < exact_quiz ? q_d : rng.next_int(0, q_d);
    int lvl_s = i < exact_quiz ? q_s : rng.next_int(0, q_s);
    q.delivery = static_cast<Delivery>(lvl_d);
    q.submission = static_cast<QuizSubmissionMode>(lvl_s);
    rec.quizzes.push_back(q);
  }

  const int weeks = config.term_weeks;
  const int instruments = rec.instrument_count();

  switch (t[Resource::Announcements]) {
    case 0:
      break;
    case 1:
      // Kept below both level-2 thresholds by the missing staff flag.
      rec.announcements_staff_authored = false;
      rec.announcement_count = rng.next_int(1, std::max(1, weeks - 1));
      break;
    case 2:
      rec.announcements_staff_authored = true;
      rec.announcement_count = weeks + rng.next_int(0, 5);
      break;
  }

  switch (t[Resource::Discussions]) {
    case 0:
      rec.discussions_enabled = false;
      break;
    case 1: {
      rec.discussions_enabled = true;
      int bound = weeks - 1;
      if (instruments > 0) bound = std::min(bound, instruments - 1);
      rec.discussion_post_count = rng.next_int(0, std::max(0, bound));
      break;
    }
    case 2:
      rec.discussions_enabled = true;
      rec.discussion_post_count = weeks + rng.next_int(0, 10);
      break;
  }

  rec.syllabus_placement =
      static_cast<SyllabusPlacement>(t[Resource::Syllabus]);
  rec.graded_fraction = t[Resource::Gradebook] == 1
                            ? 1.0
                            : snap(rng.next_unit() * 0.9, 0.01);
  rec.file_count =
      t[Resource::Files] == 1 ? 1 + rng.next_int(0, 99) : 0;
  return rec;
}

const char* kRequestVocabulary[][2] = {
    {"courses", "activity_stream_summary"},
    {"courses", "show"},
    {"folders", "resolve_path"},
    {"file_previews", "show"},
    {"folders", "show"},
    {"files", "index"},
    {"files", "show"},
    {"gradebook", "summary"},
    {"submissions", "update"},
    {"discussions_api", "view"},
    {"discussion_topics", "show"},
    {"assignments", "show"},
    {"assignments", "syllabus"},
    {"quizzes", "show"},
    {"wiki_pages", "show"},
    {"external_tools", "show"},
};

}  // namespace

SynthPopulation generate_population(const SynthConfig& config) {
  auto violations = validate_synth_config(config);
  if (!violations.empty()) {
    std::string msg = "synth config: ";
    for (std::size_t i = 0; i < violations.size(); ++i) {
      if (i) msg += "; ";
      msg += violations[i];
    }
    throw Error(msg);
  }

  ResourceTaxonomy tax = default_taxonomy();
  CounterRng rng(config.seed);
  SynthPopulation pop;
  pop.activity.reserve(static_cast<std::size_t>(config.n_courses));
  pop.meta.reserve(static_cast<std::size_t>(config.n_courses));

  for (int i = 0; i < config.n_courses; ++i) {
    // Both draws happen unconditionally so the stream shape does not depend
    // on config values.
    double propensity = rng.next_normal(0.0, config.propensity_sigma);
    bool gradebook_only = rng.next_bernoulli(config.p_gradebook_only);

    CourseMeta meta;
    char id[32];
    std::snprintf(id, sizeof(id), "SYN-%05d", i + 1);
    meta.course_id = id;
    meta.term = config.term;
    meta.undergraduate = rng.next_bernoulli(config.p_undergraduate);
    meta.stem = rng.next_bernoulli(config.p_stem);
    meta.online = rng.next_bernoulli(config.p_online);
    meta.app_use = rng.next_bernoulli(config.p_app_use);
    meta.skills_training = rng.next_bernoulli(config.p_skills_training);
    meta.enrollment = draw_lognormal_int(rng, config.enrollment, 1);
    LogNormalSpec viewership = config.viewership;
    viewership.log_mean += config.viewership_coupling * propensity;
    meta.viewership = draw_lognormal_int(rng, viewership, 0);
    meta.ta_count = rng.next_poisson(config.ta_mean);
    meta.gpa = snap(std::clamp(rng.next_normal(config.gpa.mean,
                                               config.gpa.sigma),
                               0.0, 4.0),
                    0.01);
    meta.dfw_rate = snap(std::clamp(rng.next_normal(config.dfw.mean,
                                                    config.dfw.sigma),
                                    0.0, 1.0),
                         0.0001);

    LevelTargets targets;
    if (gradebook_only) {
      targets.level[static_cast<int>(Resource::Gradebook)] = 1;
    } else {
      for (const auto& spec : tax.resources) {
        std::vector<double> dist = config.level_distribution.at(spec.id);
        if (propensity != 0.0) dist = tilt_distribution(dist, propensity);
        for (const auto& effect : config.effects) {
          if (!meta_flag(meta, effect.attribute)) continue;
          if (effect.target && *effect.target != spec.id) continue;
          dist = tilt_distribution(dist, effect.shift);
        }
        targets.level[static_cast<int>(spec.id)] = rng.next_categorical(dist);
      }
    }

    pop.activity.push_back(
        build_activity(rng, targets, config, meta.course_id));
    pop.meta.push_back(std::move(meta));
  }
  return pop;
}

std::vector<RequestEvent> generate_requests(
    const SynthConfig& config, const std::vector<CourseMeta>& meta) {
  const std::int64_t term_start = parse_timestamp(config.term_start);
  const std::int64_t term_seconds =
      static_cast<std::int64_t>(config.term_weeks) * 7 * 86400;

  std::vector<RequestEvent> events;
  for (std::size_t j = 0; j < meta.size(); ++j) {
    // Per-course derived stream, so the population stream stays untouched.
    CounterRng rng(mix64(config.seed + (j + 1) * 0xD1B54A32D192ED03ull));

    const std::size_t n_categories = std::size(kRequestVocabulary);
    std::vector<double> weights(n_categories, 0.0);
    if (rng.next_bernoulli(0.12)) {
      // File-drive course: page requests dominated by the files tree.
      weights[6] = 0.75;  // files::show
      weights[2] = 0.10;  // folders::resolve_path
      weights[1] = 0.10;  // courses::show
      weights[7] = 0.05;  // gradebook::summary
    } else {
      static const double base[] = {0.26, 0.23, 0.085, 0.066, 0.047, 0.037,
                                    0.03, 0.03, 0.03,  0.03,  0.03,  0.03,
                                    0.02, 0.03, 0.02,  0.01};
      for (std::size_t c = 0; c < n_categories; ++c) {
        weights[c] = base[c] * (0.5 + rng.next_unit());
      }
    }

    for (long long e = 0; e < meta[j].viewership; ++e) {
      RequestEvent ev;
      int c = rng.next_categorical(weights);
      ev.controller = kRequestVocabulary[c][0];
      ev.action = kRequestVocabulary[c][1];
      ev.course_id = meta[j].course_id;
      ev.timestamp =
          term_start +
          static_cast<std::int64_t>(rng.next_unit() *
                                    static_cast<double>(term_seconds - 1));
      ev.actor_role =
          rng.next_bernoulli(0.9) ? ActorRole::student : ActorRole::staff;
      events.push_back(std::move(ev));
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const RequestEvent& a, const RequestEvent& b) {
                     return a.timestamp < b.timestamp;
                   });
  return events;
}

// ---------------------------------------------------------------------------
// Config JSON

namespace {

using nlohmann::json;

}  // namespace

SynthConfig parse_synth_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("synth config: invalid JSON: ") + e.what());
  }
  SynthConfig config;
  config.n_courses = j.value("n_courses", config.n_courses);
  config.seed = j.value("seed", config.seed);
  config.term = j.value("term", config.term);
  config.term_weeks = j.value("term_weeks", config.term_weeks);
  config.term_start = j.value("term_start", config.term_start);
  config.p_undergraduate = j.value("p_undergraduate", config.p_undergraduate);
  config.p_stem = j.value("p_stem", config.p_stem);
  config.p_online = j.value("p_online", config.p_online);
  config.p_app_use = j.value("p_app_use", config.p_app_use);
  config.p_skills_training =
      j.value("p_skills_training", config.p_skills_training);
  if (j.contains("enrollment")) {
    config.enrollment.log_mean = j["enrollment"].value("log_mean", 0.0);
    config.enrollment.log_sigma = j["enrollment"].value("log_sigma", 1.0);
  }
  if (j.contains("viewership")) {
    config.viewership.log_mean = j["viewership"].value("log_mean", 0.0);
    config.viewership.log_sigma = j["viewership"].value("log_sigma", 1.0);
  }
  config.ta_mean = j.value("ta_mean", config.ta_mean);
  config.propensity_sigma =
      j.value("propensity_sigma", config.propensity_sigma);
  config.viewership_coupling =
      j.value("viewership_coupling", config.viewership_coupling);
  config.p_gradebook_only =
      j.value("p_gradebook_only", config.p_gradebook_only);
  if (j.contains("gpa")) {
    config.gpa.mean = j["gpa"].value("mean", config.gpa.mean);
    config.gpa.sigma = j["gpa"].value("sigma", config.gpa.sigma);
  }
  if (j.contains("dfw")) {
    config.dfw.mean = j["dfw"].value("mean", config.dfw.mean);
    config.dfw.sigma = j["dfw"].value("sigma", config.dfw.sigma);
  }
  if (j.contains("level_distribution")) {
    for (const auto& [id, dist] : j.at("level_distribution").items()) {
      auto r = resource_from_id(id);
      if (!r) throw Error("synth config: unknown resource \"" + id + "\"");
      config.level_distribution[*r] = dist.get<std::vector<double>>();
    }
  }
  if (j.contains("effects")) {
    config.effects.clear();
    for (const auto& entry : j.at("effects")) {
      PlantedEffect effect;
      auto attr = meta_field_from_name(entry.at("attribute"));
      if (!attr) {
        throw Error("synth config: unknown attribute \"" +
                    entry.at("attribute").get<std::string>() + "\"");
      }
      effect.attribute = *attr;
      std::string target = entry.value("target", "overall");
      if (target != "overall") {
        auto r = resource_from_id(target);
        if (!r) {
          throw Error("synth config: unknown effect target \"" + target +
                      "\"");
        }
        effect.target = *r;
      }
      effect.shift = entry.at("shift").get<double>();
      config.effects.push_back(effect);
    }
  }
  auto violations = validate_synth_config(config);
  if (!violations.empty()) {
    std::string msg = "synth config: ";
    for (std::size_t i = 0; i < violations.size(); ++i) {
      if (i) msg += "; ";
      msg += violations[i];
    }
    throw Error(msg);
  }
  return config;
}

std::string synth_config_to_json(const SynthConfig& config) {
  json j;
  j["n_courses"] = config.n_courses;
  j["seed"] = config.seed;
  j["term"] = config.term;
  j["term_weeks"] = config.term_weeks;
  j["term_start"] = config.term_start;
  j["p_undergraduate"] = config.p_undergraduate;
  j["p_stem"] = config.p_stem;
  j["p_online"] = config.p_online;
  j["p_app_use"] = config.p_app_use;
  j["p_skills_training"] = config.p_skills_training;
  j["enrollment"] = {{"log_mean", config.enrollment.log_mean},
                     {"log_sigma", config.enrollment.log_sigma}};
  j["viewership"] = {{"log_mean", config.viewership.log_mean},
                     {"log_sigma", config.viewership.log_sigma}};
  j["ta_mean"] = config.ta_mean;
  j["propensity_sigma"] = config.propensity_sigma;
  j["viewership_coupling"] = config.viewership_coupling;
  j["p_gradebook_only"] = config.p_gradebook_only;
  j["gpa"] = {{"mean", config.gpa.mean}, {"sigma", config.gpa.sigma}};
  j["dfw"] = {{"mean", config.dfw.mean}, {"sigma", config.dfw.sigma}};
  json dist = json::object();
  for (const auto& [r, weights] : config.level_distribution) {
    dist[resource_id(r)] = weights;
  }
  j["level_distribution"] = dist;
  json effects = json::array();
  for (const auto& effect : config.effects) {
    json e;
    e["attribute"] = meta_field_name(effect.attribute);
    e["target"] = effect.target ? resource_id(*effect.target) : "overall";
    e["shift"] = effect.shift;
    effects.push_back(e);
  }
  j["effects"] = effects;
  return j.dump(2) + "\n";
}

}  // namespace dou
