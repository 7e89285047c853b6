#include "dou/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dou/cohorts.hpp"
#include "dou/error.hpp"
#include "dou/hypotheses.hpp"
#include "dou/ingest.hpp"
#include "dou/report.hpp"
#include "dou/synth.hpp"

namespace dou {

namespace {

struct CommonOpts {
  std::string config_path;
  std::string format = "plain";
  int precision = 2;
  std::string output;
  bool lenient = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "Model config JSON");
  cmd->add_option("--format", opts.format, "plain, csv or json")
      ->check(CLI::IsMember({"plain", "csv", "json"}));
  cmd->add_option("--precision", opts.precision, "Decimal places (default 2)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("-o,--output", opts.output, "Write report here (default stdout)");
  cmd->add_flag("--lenient", opts.lenient,
                "Skip malformed input rows instead of aborting");
}

RenderOptions render_options(const CommonOpts& opts) {
  RenderOptions render;
  if (opts.format == "csv") render.format = RenderFormat::csv;
  else if (opts.format == "json") render.format = RenderFormat::structured;
  else render.format = RenderFormat::plain_table;
  render.precision = opts.precision;
  return render;
}

ModelConfig load_model(const CommonOpts& opts) {
  if (opts.config_path.empty()) return default_config();
  return load_config(opts.config_path);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file: " + path);
  return in;
}

void report_problems(const ParseReport& report) {
  for (const auto& problem : report.problems) {
    std::cerr << "warning: skipped " << problem << "\n";
  }
}

CourseTable load_table(const std::string& courses_path,
                       const std::string& instruments_path, ParseMode mode) {
  auto courses_in = open_input(courses_path);
  CourseTable table = parse_course_table(courses_in, mode, courses_path);
  if (!instruments_path.empty()) {
    auto instruments_in = open_input(instruments_path);
    attach_instruments(instruments_in, table.activity, mode, table.report,
                       instruments_path);
  }
  report_problems(table.report);
  return table;
}

void emit(const std::string& text, const CommonOpts& opts) {
  if (opts.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.output, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + opts.output);
  out << text;
}

std::optional<Resource> parse_target(const std::string& target) {
  if (target == "overall") return std::nullopt;
  auto r = resource_from_id(target);
  if (!r) throw Error("unknown target \"" + target + "\" (want overall or a resource id)");
  return r;
}

Provenance make_provenance(const ModelConfig& config,
                           std::vector<std::string> inputs,
                           const Cuts* cuts = nullptr) {
  Provenance prov;
  prov.config = config;
  prov.inputs = std::move(inputs);
  if (cuts) {
    for (const auto& [field, point] : cuts->points) {
      prov.cut_points[meta_field_name(field)] = point;
    }
  }
  return prov;
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Depth-of-use analytics for LMS course activity"};
  app.require_subcommand(1);

  // --- score ---------------------------------------------------------------
  auto* score = app.add_subcommand(
      "score", "Classify and score courses (per-resource levels + DOU tier)");
  CommonOpts score_opts;
  std::string score_courses, score_instruments;
  bool score_explain = false;
  score->add_option("--courses", score_courses, "courses.csv")->required();
  score->add_option("--instruments", score_instruments, "instruments.csv");
  score->add_flag("--explain", score_explain,
                  "Emit per-term aggregation traces");
  add_common(score, score_opts);

  // --- hypotheses ----------------------------------------------------------
  auto* hyp = app.add_subcommand(
      "hypotheses", "Run the hypothesis registry over a scored population");
  CommonOpts hyp_opts;
  std::string hyp_courses, hyp_instruments, hyp_target = "overall";
  bool hyp_by_term = false;
  hyp->add_option("--courses", hyp_courses, "courses.csv")->required();
  hyp->add_option("--instruments", hyp_instruments, "instruments.csv");
  hyp->add_option("--target", hyp_target,
                  "overall (default) or a resource id (An, S, ...)");
  hyp->add_flag("--by-term", hyp_by_term, "One table per term snapshot");
  add_common(hyp, hyp_opts);

  // --- cohorts ---------------------------------------------------------
  auto* cohorts_cmd = app.add_subcommand(
      "cohorts", "Low-DOU frequency for conjunctive cohorts, plus breakdown");
  CommonOpts cohorts_opts;
  std::string cohorts_courses, cohorts_instruments;
  std::vector<std::string> cohort_exprs;
  bool cohorts_breakdown = false;
  cohorts_cmd->add_option("--courses", cohorts_courses, "courses.csv")
      ->required();
  cohorts_cmd->add_option("--instruments", cohorts_instruments,
                          "instruments.csv");
  cohorts_cmd->add_option("--cohort", cohort_exprs,
                          "Cohort expression, e.g. \"grad & online & ta:low\" "
                          "(repeatable)");
  cohorts_cmd->add_flag("--breakdown", cohorts_breakdown,
                        "Population breakdown tables instead of cohorts");
  add_common(cohorts_cmd, cohorts_opts);

  // --- archetypes ------------------------------------------------------
  auto* arch = app.add_subcommand(
      "archetypes", "Detect junk-drive / gradebook-only / access-portal courses");
  CommonOpts arch_opts;
  std::string arch_courses, arch_instruments, arch_requests;
  arch->add_option("--courses", arch_courses, "courses.csv")->required();
  arch->add_option("--instruments", arch_instruments, "instruments.csv");
  arch->add_option("--requests", arch_requests, "requests.csv")->required();
  add_common(arch, arch_opts);

  // --- delta -----------------------------------------------------------
  auto* delta = app.add_subcommand(
      "delta", "Before/after DOU transition report over two snapshots");
  CommonOpts delta_opts;
  std::string delta_before, delta_after;
  delta->add_option("--before", delta_before,
                    "Directory with courses.csv + instruments.csv")
      ->required();
  delta->add_option("--after", delta_after,
                    "Directory with courses.csv + instruments.csv")
      ->required();
  add_common(delta, delta_opts);

  // --- motifs ----------------------------------------------------------
  auto* motifs_cmd = app.add_subcommand(
      "motifs", "Rank dominant page-request motifs across courses");
  CommonOpts motifs_opts;
  std::string motifs_requests;
  int motifs_top = 10;
  motifs_cmd->add_option("--requests", motifs_requests, "requests.csv")
      ->required();
  motifs_cmd->add_option("--top", motifs_top, "How many motifs (default 10)")
      ->check(CLI::PositiveNumber);
  add_common(motifs_cmd, motifs_opts);

  // --- synth -----------------------------------------------------------
  auto* synth = app.add_subcommand(
      "synth", "Write a deterministic synthetic dataset (CSV triplet)");
  CommonOpts synth_opts;
  std::string synth_out, synth_config_path;
  std::optional<std::uint64_t> synth_seed;
  std::optional<int> synth_courses;
  bool synth_no_requests = false;
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--synth-config", synth_config_path,
                    "Generator config JSON");
  synth->add_option("--seed", synth_seed, "Override the generator seed");
  synth->add_option("--courses", synth_courses, "Override n_courses");
  synth->add_flag("--no-requests", synth_no_requests,
                  "Skip the requests.csv (fast population-only draw)");
  add_common(synth, synth_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (score->parsed()) {
    ModelConfig config = load_model(score_opts);
    ParseMode mode =
        score_opts.lenient ? ParseMode::lenient : ParseMode::strict;
    CourseTable table = load_table(score_courses, score_instruments, mode);
    RenderRequest request;
    ScoresReport report;
    report.population = score_population(table.activity, table.meta, config);
    report.explain = score_explain;
    request.payload = std::move(report);
    request.options = render_options(score_opts);
    request.provenance =
        make_provenance(config, {score_courses, score_instruments});
    emit(render(request), score_opts);
    return 0;
  }

  if (hyp->parsed()) {
    ModelConfig config = load_model(hyp_opts);
    ParseMode mode = hyp_opts.lenient ? ParseMode::lenient : ParseMode::strict;
    CourseTable table = load_table(hyp_courses, hyp_instruments, mode);
    Population population =
        score_population(table.activity, table.meta, config);
    auto registry = build_registry(config);
    auto target = parse_target(hyp_target);
    RenderRequest request;
    if (hyp_by_term) {
      SnapshotsReport report;
      report.tables = run_snapshots(split_by_term(population), registry,
                                    target, config.taxonomy);
      request.payload = std::move(report);
    } else {
      request.payload =
          run_hypotheses(population, registry, target, config.taxonomy);
    }
    request.options = render_options(hyp_opts);
    request.provenance =
        make_provenance(config, {hyp_courses, hyp_instruments});
    emit(render(request), hyp_opts);
    return 0;
  }

  if (cohorts_cmd->parsed()) {
    ModelConfig config = load_model(cohorts_opts);
    ParseMode mode =
        cohorts_opts.lenient ? ParseMode::lenient : ParseMode::strict;
    CourseTable table =
        load_table(cohorts_courses, cohorts_instruments, mode);
    Population population =
        score_population(table.activity, table.meta, config);
    Cuts cuts = resolve_cuts(population, config.cuts);
    RenderRequest request;
    if (cohorts_breakdown) {
      request.payload = breakdown(population);
    } else {
      if (cohort_exprs.empty()) {
        throw Error("cohorts: need at least one --cohort expression "
                    "(or --breakdown)");
      }
      CohortsReport report;
      for (const auto& expr : cohort_exprs) {
        report.cohorts.push_back(
            cohort_frequency(population, parse_cohort_expr(expr), cuts));
      }
      request.payload = std::move(report);
    }
    request.options = render_options(cohorts_opts);
    request.provenance = make_provenance(
        config, {cohorts_courses, cohorts_instruments}, &cuts);
    emit(render(request), cohorts_opts);
    return 0;
  }

  if (arch->parsed()) {
    ModelConfig config = load_model(arch_opts);
    ParseMode mode = arch_opts.lenient ? ParseMode::lenient : ParseMode::strict;
    CourseTable table = load_table(arch_courses, arch_instruments, mode);
    Population population =
        score_population(table.activity, table.meta, config);
    auto requests_in = open_input(arch_requests);
    ParseReport request_report;
    auto events = parse_request_log(requests_in, mode, &request_report,
                                    arch_requests);
    report_problems(request_report);

    std::map<std::string, std::vector<RequestEvent>> by_course;
    for (auto& ev : events) by_course[ev.course_id].push_back(std::move(ev));
    std::map<std::string, CompositionProfile> profiles;
    for (const auto& [course_id, course_events] : by_course) {
      profiles[course_id] = composition(course_events);
    }

    Cuts cuts = resolve_cuts(population, config.cuts);
    ArchetypeThresholds thresholds;
    thresholds.file_share = config.file_share_threshold;
    RenderRequest request;
    request.payload = archetype_report(population, profiles, cuts, thresholds,
                                       config.taxonomy);
    request.options = render_options(arch_opts);
    request.provenance = make_provenance(
        config, {arch_courses, arch_instruments, arch_requests}, &cuts);
    emit(render(request), arch_opts);
    return 0;
  }

  if (delta->parsed()) {
    ModelConfig config = load_model(delta_opts);
    ParseMode mode =
        delta_opts.lenient ? ParseMode::lenient : ParseMode::strict;
    auto load_snapshot = [&](const std::string& dir) {
      CourseTable table = load_table(dir + "/courses.csv",
                                     dir + "/instruments.csv", mode);
      return score_population(table.activity, table.meta, config);
    };
    Population before = load_snapshot(delta_before);
    Population after = load_snapshot(delta_after);
    RenderRequest request;
    request.payload = delta_report(before, after, config.taxonomy);
    request.options = render_options(delta_opts);
    request.provenance =
        make_provenance(config, {delta_before, delta_after});
    emit(render(request), delta_opts);
    return 0;
  }

  if (motifs_cmd->parsed()) {
    ModelConfig config = load_model(motifs_opts);
    ParseMode mode =
        motifs_opts.lenient ? ParseMode::lenient : ParseMode::strict;
    auto requests_in = open_input(motifs_requests);
    ParseReport request_report;
    auto events = parse_request_log(requests_in, mode, &request_report,
                                    motifs_requests);
    report_problems(request_report);
    std::map<std::string, std::vector<RequestEvent>> by_course;
    for (auto& ev : events) by_course[ev.course_id].push_back(std::move(ev));
    std::vector<CompositionProfile> profiles;
    profiles.reserve(by_course.size());
    for (const auto& [course_id, course_events] : by_course) {
      profiles.push_back(composition(course_events));
    }
    MotifsReport report;
    report.motifs = top_motifs(profiles, motifs_top);
    report.population_size = profiles.size();
    RenderRequest request;
    request.payload = std::move(report);
    request.options = render_options(motifs_opts);
    request.provenance = make_provenance(config, {motifs_requests});
    emit(render(request), motifs_opts);
    return 0;
  }

  if (synth->parsed()) {
    SynthConfig config;
    if (!synth_config_path.empty()) {
      auto in = open_input(synth_config_path);
      std::ostringstream buf;
      buf << in.rdbuf();
      config = parse_synth_config_json(buf.str());
    }
    if (synth_seed) config.seed = *synth_seed;
    if (synth_courses) config.n_courses = *synth_courses;

    SynthPopulation population = generate_population(config);

    std::ofstream courses_out(synth_out + "/courses.csv", std::ios::binary);
    if (!courses_out) {
      throw Error("cannot write to output directory: " + synth_out);
    }
    write_course_table(courses_out, population.meta, population.activity);
    std::ofstream instruments_out(synth_out + "/instruments.csv",
                                  std::ios::binary);
    write_instruments(instruments_out, population.activity);
    if (!synth_no_requests) {
      auto events = generate_requests(config, population.meta);
      std::ofstream requests_out(synth_out + "/requests.csv",
                                 std::ios::binary);
      write_requests(requests_out, events);
    }
    std::ofstream config_out(synth_out + "/synth_config.json",
                             std::ios::binary);
    config_out << synth_config_to_json(config);
    std::cout << "wrote " << config.n_courses << " courses to " << synth_out
              << " (seed " << config.seed << ")\n";
    return 0;
  }

  return 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace dou
