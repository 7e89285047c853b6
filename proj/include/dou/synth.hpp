#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dou/ingest.hpp"
#include "dou/model.hpp"

namespace dou {

// Counter-based deterministic generator. Each draw i mixes
// seed + (i+1) * 0x9E3779B97F4A7C15 through the splitmix64 finalizer
// (xorshift-multiply constants 0xBF58476D1CE4E5B9 / 0x94D049BB133111EB).
// The output sequence is part of the external contract: identical seeds
// reproduce identical populations across builds and platforms.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  double next_unit();                    // uniform [0, 1), 53-bit
  int next_int(int lo, int hi);          // uniform inclusive
  bool next_bernoulli(double p);
  double next_normal(double mean, double sigma);  // Box-Muller, two draws
  int next_poisson(double mean);         // inversion; mean < ~30
  int next_categorical(const std::vector<double>& weights);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t counter_ = 0;
};

struct LogNormalSpec {
  double log_mean = 0.0;
  double log_sigma = 1.0;
};

struct NormalSpec {
  double mean = 0.0;
  double sigma = 1.0;
};

// Planted group effect: attr-true courses get the target's level
// distribution tilted upward by a mean shift. target nullopt = every
// resource (an overall-DOU effect).
struct PlantedEffect {
  MetaField attribute = MetaField::undergraduate;
  std::optional<Resource> target;
  double shift = 0.0;
};

struct SynthConfig {
  int n_courses = 200;
  std::uint64_t seed = 1;
  std::string term = "term-1";
  int term_weeks = 15;
  std::string term_start = "2023-01-16";

  // Flag marginals (defaults sized to a plausible institutional mix).
  double p_undergraduate = 0.786;
  double p_stem = 0.612;
  double p_online = 0.312;
  double p_app_use = 0.047;
  double p_skills_training = 0.571;

  LogNormalSpec enrollment{3.35, 0.9};   // median ~28, long tail
  LogNormalSpec viewership{3.9, 1.0};    // total per-course pageviews
  double ta_mean = 0.9;                  // Poisson
  NormalSpec gpa{3.2, 0.4};              // clamped to [0, 4]
  NormalSpec dfw{0.08, 0.06};            // clamped to [0, 1]

  // Per-course adoption propensity: a normal(0, sigma) draw tilting every
  // resource distribution together, so levels correlate within a course and
  // the overall score spreads across all three tiers. 0 disables it.
  double propensity_sigma = 0.6;

  // Viewership log-mean shift per propensity unit: engaged course sites
  // draw more pageviews. 0 decouples them.
  double viewership_coupling = 0.5;

  // Probability of seeding a gradebook-only course (G at max, all other
  // levels zero); realistic marginals almost never produce the exact
  // pattern, so validation datasets can force a few.
  double p_gradebook_only = 0.0;

  // Per-resource categorical level distributions (index = level).
  std::map<Resource, std::vector<double>> level_distribution;

  std::vector<PlantedEffect> effects;

  SynthConfig();  // fills level_distribution defaults
};

std::vector<std::string> validate_synth_config(const SynthConfig& config);

SynthConfig parse_synth_config_json(const std::string& text);
std::string synth_config_to_json(const SynthConfig& config);

struct SynthPopulation {
  std::vector<CourseActivityRecord> activity;
  std::vector<CourseMeta> meta;
};

// Deterministic population draw: a single counter stream in course order
// (propensity, gradebook-only gate, meta, target levels, activity details).
// Request events are drawn separately (below) so generating them does not
// perturb this stream.
SynthPopulation generate_population(const SynthConfig& config);

// Page-request events per course, one derived stream per course keyed by
// (seed, course index); exactly meta.viewership events each.
std::vector<RequestEvent> generate_requests(const SynthConfig& config,
                                            const std::vector<CourseMeta>& meta);

// Tilts a categorical level distribution upward: probability mass
// proportional to `shift` moves one level up, clamped at the top level.
std::vector<double> tilt_distribution(const std::vector<double>& dist,
                                      double shift);

}  // namespace dou
