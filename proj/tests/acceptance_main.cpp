// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit status = number of failures.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dou/aggregate.hpp"
#include "dou/cohorts.hpp"
#include "dou/hypotheses.hpp"
#include "dou/model.hpp"
#include "dou/report.hpp"
#include "dou/stats.hpp"
#include "dou/synth.hpp"

using namespace dou;

namespace {

int g_failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("%s  %-22s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  if (!ok) ++g_failures;
}

// ---------------------------------------------------------------------------
// Shared fixtures

ResourceLevels levels_from(const std::array<int, 9>& raw) {
  ResourceLevels levels;
  for (int i = 0; i < 9; ++i) {
    levels[static_cast<Resource>(i)] = 0;
  }
  levels[Resource::Announcements] = raw[0];
  levels[Resource::Syllabus] = raw[1];
  levels[Resource::Discussions] = raw[2];
  levels[Resource::AssignmentDelivery] = raw[3];
  levels[Resource::QuizDelivery] = raw[4];
  levels[Resource::AssignmentSubmission] = raw[5];
  levels[Resource::QuizSubmission] = raw[6];
  levels[Resource::Gradebook] = raw[7];
  levels[Resource::Files] = raw[8];
  return levels;
}

// Direct literal evaluation of the score for the shipped plan, independent
// of the library's term machinery. Index order: An S D A_d Q_d A_s Q_s G F.
int direct_default_dou(const std::array<int, 9>& raw, bool normalize) {
  auto lvl = [&](int i, int max) {
    if (!normalize) return raw[i];
    return (2 * raw[i] + max / 2) / max;
  };
  int an = lvl(0, 2), s = lvl(1, 2), d = lvl(2, 2), a_d = lvl(3, 2),
      q_d = lvl(4, 2), a_s = lvl(5, 2), q_s = lvl(6, 1), g = lvl(7, 1),
      f = lvl(8, 1);
  auto blend = [](int a, int b, int beta) {
    return (1 - beta) * (a > b ? a : b) + beta * ((a + b) / 2);
  };
  return (blend(a_d, a_s, 1) + blend(q_d, q_s, 1) + blend(s, f, 0) +
          blend(d, g, 0) + an) /
         5;
}

// ---------------------------------------------------------------------------
// Criteria

void aggregation_oracle() {
  ResourceTaxonomy tax = default_taxonomy();
  AggregationPlan plan = default_plan();
  const std::array<int, 9> maxima = {2, 2, 2, 2, 2, 2, 1, 1, 1};

  auto start = std::chrono::steady_clock::now();
  int mismatches = 0;
  int checked = 0;
  for (int normalize = 0; normalize <= 1; ++normalize) {
    plan.normalize_levels = normalize == 1;
    std::array<int, 9> raw{};
    while (true) {
      int expected = direct_default_dou(raw, plan.normalize_levels);
      int got = course_dou(levels_from(raw), plan, tax).value;
      if (got != expected) ++mismatches;
      ++checked;
      int i = 8;
      while (i >= 0 && raw[i] == maxima[i]) raw[i--] = 0;
      if (i < 0) break;
      ++raw[i];
    }
  }
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::ostringstream detail;
  detail << checked << " vectors (both modes), " << mismatches
         << " mismatches, " << std::fixed << seconds << " s";
  report("aggregation-oracle",
         mismatches == 0 && checked == 2 * 5832 && seconds < 5.0,
         detail.str());
}

void fig4_pairing() {
  bool ok = pair_term(1, 0, 0) == 1 && pair_term(1, 0, 1) == 0;
  report("pairing-worked-example", ok,
         "pair(1,0,beta=0)=" + std::to_string(pair_term(1, 0, 0)) +
             ", pair(1,0,beta=1)=" + std::to_string(pair_term(1, 0, 1)));
}

void monotonicity_fuzz() {
  ResourceTaxonomy tax = default_taxonomy();
  AggregationPlan plan = default_plan();
  const std::array<int, 9> maxima = {2, 2, 2, 2, 2, 2, 1, 1, 1};
  CounterRng rng(0xD0F);
  int violations = 0;
  for (int it = 0; it < 10000; ++it) {
    std::array<int, 9> lo{}, hi{};
    for (int i = 0; i < 9; ++i) {
      lo[i] = rng.next_int(0, maxima[i]);
      hi[i] = rng.next_int(lo[i], maxima[i]);
    }
    if (course_dou(levels_from(hi), plan, tax).value <
        course_dou(levels_from(lo), plan, tax).value) {
      ++violations;
    }
  }
  report("monotonicity-fuzz", violations == 0,
         "10000 dominated pairs, " + std::to_string(violations) +
             " violations");
}

void f_equals_t_squared() {
  CounterRng rng(0xF0);
  double worst = 0.0;
  int checked = 0;
  for (int it = 0; it < 200; ++it) {
    std::size_t nx = static_cast<std::size_t>(rng.next_int(2, 40));
    std::size_t ny = static_cast<std::size_t>(rng.next_int(2, 40));
    std::vector<double> x(nx), y(ny);
    for (auto& v : x) v = rng.next_unit() * 10.0 + rng.next_unit();
    for (auto& v : y) v = rng.next_unit() * 10.0 - rng.next_unit();
    TestResult t = t_test(x, y);
    TestResult f = anova_f({x, y});
    if (f.statistic == 0.0) continue;
    double rel = std::fabs(f.statistic - t.statistic * t.statistic) /
                 f.statistic;
    worst = std::max(worst, rel);
    ++checked;
  }
  std::ostringstream detail;
  detail << checked << " datasets, max |F-t^2|/F = " << std::scientific
         << worst;
  report("f-equals-t-squared", checked == 200 && worst < 1e-9, detail.str());
}

struct TailCase {
  enum class TailKindTag { t, f, chi2 } kind;
  double x, df1, df2, expected;
};
using TailKind = TailCase::TailKindTag;

void statistics_references() {
  bool ok = true;
  std::ostringstream detail;

  TestResult kw = kruskal_wallis({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  if (std::fabs(kw.statistic - 7.2) > 1e-12) ok = false;
  if (std::fabs(kw.p_value - 0.027323722447292558) > 1e-6) ok = false;

  TestResult t = t_test({1, 2, 3, 4, 5}, {2, 3, 4, 5, 6});
  if (t.statistic != -1.0 || t.df1 != 8.0) ok = false;

  TestResult f = anova_f({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  if (f.statistic != 27.0 || f.df1 != 2.0 || *f.df2 != 6.0) ok = false;

  // Frozen from a 50-digit mpmath evaluation run before this build.
  static const TailCase kTable[] = {
      {TailKind::t, 0.5, 1.0, 0.0, 0.35241638234956673},
      {TailKind::t, 1.0, 2.0, 0.0, 0.21132486540518712},
      {TailKind::t, 2.0, 5.0, 0.0, 0.050969739414929178},
      {TailKind::t, 3.0, 10.0, 0.0, 0.0066718275112847886},
      {TailKind::t, 1.5, 30.0, 0.0, 0.072032964564323001},
      {TailKind::t, 9.8, 4864.0, 0.0, 9.0760617713901464e-23},
      {TailKind::t, 7.1, 10000.0, 0.0, 6.6621602661227253e-13},
      {TailKind::f, 1.0, 1.0, 1.0, 0.5},
      {TailKind::f, 27.0, 2.0, 6.0, 0.001},
      {TailKind::f, 3.5, 2.0, 4863.0, 0.030273474057629054},
      {TailKind::f, 96.0, 1.0, 4864.0, 1.8515357232839797e-22},
      {TailKind::f, 2.5, 3.0, 100.0, 0.06383295997908649},
      {TailKind::f, 50.2, 1.0, 2000.0, 1.916166925956302e-12},
      {TailKind::f, 0.5, 5.0, 5.0, 0.76748868086962138},
      {TailKind::chi2, 7.2, 2.0, 0.0, 0.027323722447292558},
      {TailKind::chi2, 95.0, 1.0, 0.0, 1.9038526505460319e-22},
      {TailKind::chi2, 1000.0, 2.0, 0.0, 7.1245764067412855e-218},
      {TailKind::chi2, 0.5, 10.0, 0.0, 0.99999338828943897},
      {TailKind::chi2, 24.7, 1.0, 0.0, 6.6984174369131503e-7},
      {TailKind::chi2, 77.0, 2.0, 0.0, 1.9039802832864523e-17},
  };
  double worst = 0.0;
  for (const auto& c : kTable) {
    double got = 0.0;
    switch (c.kind) {
      case TailKind::t:
        got = tail_probability(dou::TailKind::t, c.x, c.df1);
        break;
      case TailKind::f:
        got = tail_probability(dou::TailKind::f, c.x, c.df1, c.df2);
        break;
      case TailKind::chi2:
        got = tail_probability(dou::TailKind::chi2, c.x, c.df1);
        break;
    }
    worst = std::max(worst, std::fabs(got - c.expected));
  }
  if (worst > 1e-6) ok = false;

  detail << "KW H=" << kw.statistic << " p=" << kw.p_value
         << "; t=" << t.statistic << " df=" << t.df1 << "; F=" << f.statistic
         << " df=(" << f.df1 << "," << *f.df2 << ")"
         << "; tail table max |err| = " << std::scientific << worst;
  report("statistics-references", ok, detail.str());
}

void significance_coding() {
  const double ps[] = {0.2, 0.05, 0.03, 1e-10, 1e-12};
  const Significance want[] = {Significance::ns, Significance::star,
                               Significance::star, Significance::star,
                               Significance::double_star};
  bool ok = true;
  std::string got;
  for (int i = 0; i < 5; ++i) {
    Significance s = significance(ps[i]);
    if (s != want[i]) ok = false;
    if (i) got += ",";
    got += s == Significance::ns ? "ns"
          : s == Significance::star ? "*"
                                    : "**";
  }
  report("significance-coding", ok, "{0.2,0.05,0.03,1e-10,1e-12} -> " + got);
}

void delta_arithmetic() {
  auto pct2 = [](long long before, long long after) {
    double change = 100.0 * static_cast<double>(after - before) /
                    static_cast<double>(before);
    return format_number(change, 2);
  };
  std::string medium = pct2(2365, 2288);
  std::string high = pct2(673, 1004);
  std::string low = pct2(3932, 3667);
  bool ok = medium == "-3.26" && high == "49.18" && low == "-6.74";
  report("delta-arithmetic", ok,
         "2365->2288 = " + medium + "%, 673->1004 = +" + high +
             "%, 3932->3667 = " + low + "% (as computed)");
}

void synthetic_calibration() {
  auto start = std::chrono::steady_clock::now();
  ModelConfig model = default_config();
  auto registry = default_registry();

  // Null: no planted effects, balanced flag -> rejection rate near alpha.
  SynthConfig null_config;
  null_config.n_courses = 200;
  null_config.p_undergraduate = 0.5;
  int rejections = 0;
  int usable = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    null_config.seed = 100000 + static_cast<std::uint64_t>(rep);
    SynthPopulation pop = generate_population(null_config);
    Population scored = score_population(pop.activity, pop.meta, model);
    HypothesisTable table = run_hypotheses(scored, registry);
    if (!table.rows[0].t) continue;
    ++usable;
    if (table.rows[0].t->p_value <= 0.05) ++rejections;
  }
  double rate = static_cast<double>(rejections) /
                static_cast<double>(usable == 0 ? 1 : usable);

  // Power: +0.5 planted shift, ~500 per group.
  SynthConfig planted;
  planted.n_courses = 1000;
  planted.p_undergraduate = 0.5;
  planted.effects.push_back({MetaField::undergraduate, std::nullopt, 0.5});
  int powered = 0;
  for (int rep = 0; rep < 100; ++rep) {
    planted.seed = 900000 + static_cast<std::uint64_t>(rep);
    SynthPopulation pop = generate_population(planted);
    Population scored = score_population(pop.activity, pop.meta, model);
    HypothesisTable table = run_hypotheses(scored, registry);
    if (table.rows[0].t && table.rows[0].t->statistic > 0.0 &&
        table.rows[0].t->p_value < 1e-6) {
      ++powered;
    }
  }
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::ostringstream detail;
  detail << "null rejection rate " << rate << " over " << usable
         << " replicates; planted power " << powered << "/100; "
         << std::fixed << seconds << " s";
  bool ok = usable == 1000 && rate >= 0.03 && rate <= 0.07 && powered >= 95 &&
            seconds < 60.0;
  report("synthetic-calibration", ok, detail.str());
}

// ---------------------------------------------------------------------------
// Golden files

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<missing: " + path.string() + ">";
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool run_cli(const std::string& args, const std::filesystem::path& out) {
  std::string cmd = "cd \"" DOU_SOURCE_DIR "\" && \"" DOU_CLI_PATH "\" " +
                    args + " -o \"" + out.string() + "\"";
  return std::system(cmd.c_str()) == 0;
}

void golden_files() {
  namespace fs = std::filesystem;
  const fs::path golden_dir = fs::path(DOU_SOURCE_DIR) / "tests" / "golden";
  const fs::path work =
      fs::temp_directory_path() / "dou_acceptance_golden";
  fs::remove_all(work);
  fs::create_directories(work / "run1");
  fs::create_directories(work / "run2");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"score.txt",
       "score --courses data/sample/courses.csv "
       "--instruments data/sample/instruments.csv"},
      {"hypotheses.txt",
       "hypotheses --courses data/sample/courses.csv "
       "--instruments data/sample/instruments.csv"},
      {"hypotheses.json",
       "hypotheses --courses data/sample/courses.csv "
       "--instruments data/sample/instruments.csv --format json"},
      {"cohorts.txt",
       "cohorts --courses data/sample/courses.csv "
       "--instruments data/sample/instruments.csv "
       "--cohort \"grad & online\" --cohort \"ta:low & !skills\" "
       "--cohort \"undergrad & stem & enroll:high\""},
      {"archetypes.txt",
       "archetypes --courses data/sample/courses.csv "
       "--instruments data/sample/instruments.csv "
       "--requests data/sample/requests.csv"},
      {"delta.txt",
       "delta --before data/sample --after data/sample_after"},
  };

  bool ok = true;
  std::string detail;
  for (const auto& [name, args] : commands) {
    if (!run_cli(args, work / "run1" / name) ||
        !run_cli(args, work / "run2" / name)) {
      ok = false;
      detail = name + ": command failed";
      break;
    }
    std::string run1 = slurp(work / "run1" / name);
    std::string run2 = slurp(work / "run2" / name);
    std::string golden = slurp(golden_dir / name);
    if (run1 != run2) {
      ok = false;
      detail = name + ": differs across runs";
      break;
    }
    if (run1 != golden) {
      ok = false;
      detail = name + ": differs from frozen golden";
      break;
    }
  }
  if (ok) detail = std::to_string(commands.size()) + " reports byte-stable";
  report("golden-files", ok, detail);
}

}  // namespace

int main() {
  aggregation_oracle();
  fig4_pairing();
  monotonicity_fuzz();
  f_equals_t_squared();
  statistics_references();
  significance_coding();
  delta_arithmetic();
  synthetic_calibration();
  golden_files();
  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  }
  return g_failures;
}
