#include "dou/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dou/error.hpp"
#include "json.hpp"

namespace dou {

std::string format_number(double v, int precision) {
  if (std::isnan(v)) return kDash;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

std::string format_statistic(const TestResult& result, int precision) {
  return format_number(result.statistic, precision) +
         significance_marker(result.significance);
}

namespace {

using nlohmann::json;

// Double -> JSON with value rounded to 12 significant digits, keeping
// structured output stable against accumulation-order noise.
json jnum(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return json(std::strtod(buf, nullptr));
}

std::string signed_pct(double v, int precision) {
  std::string body = format_number(v, precision);
  if (v >= 0.0 && !body.empty() && body[0] != '+') body = "+" + body;
  return body + "%";
}

// Fixed-width plain table: left-aligned cells, two-space gutters.
class Table {
 public:
  explicit Table(std::vector<std::string> header)
      : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string str() const {
    std::vector<std::size_t> widths(header_.size(), 0);
    auto widen = [&](const std::vector<std::string>& row) {
      for (std::size_t i = 0; i < row.size() && i < widths.size(); ++i) {
        widths[i] = std::max(widths[i], cell_width(row[i]));
      }
    };
    widen(header_);
    for (const auto& row : rows_) widen(row);

    std::string out;
    append_row(out, header_, widths);
    for (const auto& row : rows_) append_row(out, row, widths);
    return out;
  }

 private:
  // Column widths count display characters; the em dash is 3 bytes but one
  // character wide.
  static std::size_t cell_width(const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s) {
      if ((c & 0xC0) != 0x80) ++w;
    }
    return w;
  }

  static void append_row(std::string& out, const std::vector<std::string>& row,
                         const std::vector<std::size_t>& widths) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += row[i];
      if (i + 1 < row.size()) {
        std::size_t pad = widths[i] - cell_width(row[i]) + 2;
        out.append(pad, ' ');
      }
    }
    out += "\n";
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out.push_back(',');
    bool needs_quote =
        cells[i].find_first_of(",\"\n") != std::string::npos;
    if (needs_quote) {
      out.push_back('"');
      for (char c : cells[i]) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
      }
      out.push_back('"');
    } else {
      out += cells[i];
    }
  }
  out += "\n";
  return out;
}

json provenance_json(const Provenance& prov) {
  json j;
  json plan;
  json pairs = json::array();
  for (const auto& pair : prov.config.plan.pair_terms) {
    pairs.push_back({{"a", resource_id(pair.a)},
                     {"b", resource_id(pair.b)},
                     {"beta", pair.beta}});
  }
  json singles = json::array();
  for (Resource r : prov.config.plan.single_terms) {
    singles.push_back(resource_id(r));
  }
  plan["pairs"] = pairs;
  plan["singles"] = singles;
  plan["normalize_levels"] = prov.config.plan.normalize_levels;
  j["plan"] = plan;
  j["grading_threshold"] = jnum(prov.config.grading_threshold);
  j["file_share_threshold"] = jnum(prov.config.file_share_threshold);
  if (!prov.config.term_start.empty()) {
    j["term_start"] = prov.config.term_start;
  }
  if (!prov.cut_points.empty()) {
    json cuts = json::object();
    for (const auto& [attr, point] : prov.cut_points) cuts[attr] = jnum(point);
    j["cut_points"] = cuts;
  }
  if (prov.seed) j["seed"] = *prov.seed;
  if (!prov.inputs.empty()) j["inputs"] = prov.inputs;
  return j;
}

json test_result_json(const TestResult& r) {
  json j;
  switch (r.kind) {
    case StatKind::t:
      j["kind"] = "t";
      break;
    case StatKind::f:
      j["kind"] = "F";
      break;
    case StatKind::h:
      j["kind"] = "H";
      break;
  }
  j["statistic"] = jnum(r.statistic);
  j["df1"] = jnum(r.df1);
  if (r.df2) j["df2"] = jnum(*r.df2);
  j["p_value"] = jnum(r.p_value);
  j["significance"] = significance_marker(r.significance);
  if (r.kind == StatKind::f && r.df2) {
    j["f_crit_05"] = jnum(f_critical(0.05, r.df1, *r.df2));
  }
  return j;
}

// --------------------------------------------------------------------------
// Scores

int scaled_level(const ScoredCourse& course, const ModelConfig& config,
                 Resource r) {
  const ResourceSpec* spec = config.taxonomy.find(r);
  if (!spec) return course.levels[r];
  return config.plan.normalize_levels
             ? rescale_level(course.levels[r], spec->max_level)
             : course.levels[r];
}

std::string explain_line(const ScoredCourse& course,
                         const ModelConfig& config) {
  const AggregationPlan& plan = config.plan;
  std::ostringstream os;
  os << "  rescaled";
  for (Resource r : kAllResources) {
    if (!config.taxonomy.contains(r)) continue;
    os << " " << resource_id(r) << "=" << scaled_level(course, config, r);
  }
  os << " | terms";
  std::size_t idx = 0;
  for (const auto& pair : plan.pair_terms) {
    os << " P(" << resource_id(pair.a) << "," << resource_id(pair.b)
       << ";beta=" << pair.beta << ")=" << course.dou.term_values[idx++];
  }
  for (Resource r : plan.single_terms) {
    os << " S(" << resource_id(r) << ")=" << course.dou.term_values[idx++];
  }
  os << " -> floor(mean)=" << course.dou.value << " "
     << tier_name(course.dou.tier) << "\n";
  return os.str();
}

std::string render_scores(const ScoresReport& report,
                          const RenderOptions& options,
                          const Provenance& prov) {
  std::vector<std::string> header = {"course_id", "term"};
  for (Resource r : kAllResources) header.push_back(resource_id(r));
  header.push_back("value");
  header.push_back("tier");

  auto row_of = [&](const ScoredCourse& course) {
    std::vector<std::string> row = {course.meta.course_id, course.meta.term};
    for (Resource r : kAllResources) {
      row.push_back(std::to_string(course.levels[r]));
    }
    row.push_back(std::to_string(course.dou.value));
    row.push_back(tier_name(course.dou.tier));
    return row;
  };

  if (options.format == RenderFormat::csv) {
    std::string out = csv_line(header);
    for (const auto& course : report.population) {
      out += csv_line(row_of(course));
    }
    return out;
  }
  if (options.format == RenderFormat::structured) {
    json j;
    j["report"] = "scores";
    j["provenance"] = provenance_json(prov);
    json courses = json::array();
    for (const auto& course : report.population) {
      json c;
      c["course_id"] = course.meta.course_id;
      c["term"] = course.meta.term;
      json levels = json::object();
      json rescaled = json::object();
      for (Resource r : kAllResources) {
        levels[resource_id(r)] = course.levels[r];
        if (prov.config.taxonomy.contains(r)) {
          rescaled[resource_id(r)] = scaled_level(course, prov.config, r);
        }
      }
      c["levels"] = levels;
      c["rescaled"] = rescaled;
      c["terms"] = course.dou.term_values;
      c["value"] = course.dou.value;
      c["tier"] = tier_name(course.dou.tier);
      courses.push_back(c);
    }
    j["courses"] = courses;
    return j.dump(2) + "\n";
  }

  if (!report.explain) {
    Table table(header);
    for (const auto& course : report.population) table.add_row(row_of(course));
    return table.str();
  }
  // Explanations interleave with rows, so skip column alignment.
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out.push_back(' ');
    out += header[i];
  }
  out += "\n";
  for (const auto& course : report.population) {
    auto row = row_of(course);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(' ');
      out += row[i];
    }
    out += "\n";
    out += explain_line(course, prov.config);
  }
  return out;
}

// --------------------------------------------------------------------------
// Hypothesis tables

std::string hypothesis_label(const HypothesisRow& row) {
  if (row.spec.label.empty()) return row.spec.id;
  return row.spec.id + ": " + row.spec.label;
}

std::string render_hypotheses_plain(const HypothesisTable& table,
                                    const RenderOptions& options) {
  std::string title = "Target: ";
  title += table.target ? resource_id(*table.target) : "overall";
  Table t({"Hypothesis", "t", "F", "H"});
  for (const auto& row : table.rows) {
    auto cell = [&](const std::optional<TestResult>& r) {
      return r ? format_statistic(*r, options.precision) : std::string(kDash);
    };
    t.add_row({hypothesis_label(row), cell(row.t), cell(row.f), cell(row.h)});
  }
  return title + "\n" + t.str();
}

std::string render_hypotheses_csv(const HypothesisTable& table,
                                  bool with_term_column,
                                  const std::string& term = "") {
  std::string out;
  if (!with_term_column) {
    out = csv_line({"id", "label", "target", "t", "t_p", "F", "F_p", "H",
                    "H_p"});
  }
  std::string target = table.target ? resource_id(*table.target) : "overall";
  for (const auto& row : table.rows) {
    std::vector<std::string> cells;
    if (with_term_column) cells.push_back(term);
    cells.push_back(row.spec.id);
    cells.push_back(row.spec.label);
    cells.push_back(target);
    auto push = [&](const std::optional<TestResult>& r) {
      if (r) {
        char stat[64], p[64];
        std::snprintf(stat, sizeof(stat), "%.9g", r->statistic);
        std::snprintf(p, sizeof(p), "%.9g", r->p_value);
        cells.push_back(stat);
        cells.push_back(p);
      } else {
        cells.push_back("");
        cells.push_back("");
      }
    };
    push(row.t);
    push(row.f);
    push(row.h);
    out += csv_line(cells);
  }
  return out;
}

json hypothesis_table_json(const HypothesisTable& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r;
    r["id"] = row.spec.id;
    r["label"] = row.spec.label;
    r["attribute"] = meta_field_name(row.spec.attribute);
    r["kind"] = row.spec.kind == AttributeKind::binary_flag ? "binary_flag"
                                                            : "numeric";
    if (!row.spec.direction_note.empty()) {
      r["note"] = row.spec.direction_note;
    }
    r["t"] = row.t ? test_result_json(*row.t) : json(nullptr);
    r["F"] = row.f ? test_result_json(*row.f) : json(nullptr);
    r["H"] = row.h ? test_result_json(*row.h) : json(nullptr);
    rows.push_back(r);
  }
  json j;
  j["target"] = table.target ? resource_id(*table.target) : "overall";
  j["rows"] = rows;
  return j;
}

std::string render_hypotheses(const HypothesisTable& table,
                              const RenderOptions& options,
                              const Provenance& prov) {
  switch (options.format) {
    case RenderFormat::plain_table:
      return render_hypotheses_plain(table, options);
    case RenderFormat::csv:
      return render_hypotheses_csv(table, false);
    case RenderFormat::structured: {
      json j;
      j["report"] = "hypotheses";
      j["provenance"] = provenance_json(prov);
      j["table"] = hypothesis_table_json(table);
      return j.dump(2) + "\n";
    }
  }
  throw Error("render: unsupported format");
}

std::string render_snapshots(const SnapshotsReport& report,
                             const RenderOptions& options,
                             const Provenance& prov) {
  switch (options.format) {
    case RenderFormat::plain_table: {
      std::string out;
      for (const auto& [term, table] : report.tables) {
        out += "== " + term + " ==\n";
        out += render_hypotheses_plain(table, options);
      }
      return out;
    }
    case RenderFormat::csv: {
      std::string out = csv_line({"term", "id", "label", "target", "t", "t_p",
                                  "F", "F_p", "H", "H_p"});
      for (const auto& [term, table] : report.tables) {
        out += render_hypotheses_csv(table, true, term);
      }
      return out;
    }
    case RenderFormat::structured: {
      json j;
      j["report"] = "hypotheses_by_term";
      j["provenance"] = provenance_json(prov);
      json terms = json::object();
      for (const auto& [term, table] : report.tables) {
        terms[term] = hypothesis_table_json(table);
      }
      j["terms"] = terms;
      return j.dump(2) + "\n";
    }
  }
  throw Error("render: unsupported format");
}

// --------------------------------------------------------------------------
// Cohorts / breakdown / archetypes / delta / motifs

std::string render_cohorts(const CohortsReport& report,
                           const RenderOptions& options,
                           const Provenance& prov) {
  std::vector<std::string> header = {"cohort", "n", "low_dou_%"};
  std::vector<std::string> flags;
  if (!report.cohorts.empty()) {
    for (const auto& [name, pct] : report.cohorts.front().composition) {
      flags.push_back(name);
    }
  }
  if (flags.empty()) {
    flags = {"undergraduate", "stem", "online", "app_use", "skills_training"};
  }
  for (const auto& f : flags) header.push_back("%" + f);

  auto row_of = [&](const CohortReport& cohort) {
    std::vector<std::string> row = {cohort.spec_text,
                                    std::to_string(cohort.member_count)};
    row.push_back(cohort.low_dou_percent
                      ? format_number(*cohort.low_dou_percent,
                                      options.precision)
                      : std::string(kDash));
    if (cohort.composition.empty()) {
      for (std::size_t i = 0; i < flags.size(); ++i) {
        row.push_back(kDash);
      }
    } else {
      for (const auto& [name, pct] : cohort.composition) {
        row.push_back(format_number(pct, options.precision));
      }
    }
    return row;
  };

  switch (options.format) {
    case RenderFormat::plain_table: {
      Table t(header);
      for (const auto& cohort : report.cohorts) t.add_row(row_of(cohort));
      return t.str();
    }
    case RenderFormat::csv: {
      std::string out = csv_line(header);
      for (const auto& cohort : report.cohorts) {
        auto row = row_of(cohort);
        for (auto& cell : row) {
          if (cell == kDash) cell.clear();
        }
        out += csv_line(row);
      }
      return out;
    }
    case RenderFormat::structured: {
      json j;
      j["report"] = "cohorts";
      j["provenance"] = provenance_json(prov);
      json cohorts = json::array();
      for (const auto& cohort : report.cohorts) {
        json c;
        c["spec"] = cohort.spec_text;
        c["member_count"] = cohort.member_count;
        c["low_dou_percent"] = cohort.low_dou_percent
                                   ? jnum(*cohort.low_dou_percent)
                                   : json(nullptr);
        json comp = json::object();
        for (const auto& [name, pct] : cohort.composition) {
          comp[name] = jnum(pct);
        }
        c["composition"] = comp;
        cohorts.push_back(c);
      }
      j["cohorts"] = cohorts;
      return j.dump(2) + "\n";
    }
  }
  throw Error("render: unsupported format");
}

std::string render_breakdown(const BreakdownReport& report,
                             const RenderOptions& options,
                             const Provenance& prov) {
  const int p = options.precision;
  switch (options.format) {
    case RenderFormat::plain_table: {
      Table attr({"Attribute", "#", "%Low", "%Medium", "%High"});
      for (const auto& row : report.by_attribute) {
        attr.add_row({row.attribute, std::to_string(row.count),
                      format_number(row.pct_low, p),
                      format_number(row.pct_medium, p),
                      format_number(row.pct_high, p)});
      }
      Table numeric({"Attribute", "mean", "sd"});
      for (const auto& row : report.numeric) {
        numeric.add_row({row.attribute, format_number(row.mean, p),
                         format_number(row.stddev, p)});
      }
      std::vector<std::string> tier_header = {"DOU", "#"};
      if (!report.by_tier.empty()) {
        for (const auto& [name, pct] : report.by_tier.front().flag_pct) {
          tier_header.push_back("%" + name);
        }
      }
      Table tiers(tier_header);
      for (const auto& row : report.by_tier) {
        std::vector<std::string> cells = {tier_name(row.tier),
                                          std::to_string(row.count)};
        for (const auto& [name, pct] : row.flag_pct) {
          cells.push_back(format_number(pct, p));
        }
        tiers.add_row(cells);
      }
      return "Population by attribute\n" + attr.str() +
             "\nNumeric attributes\n" + numeric.str() +
             "\nComposition by DOU group\n" + tiers.str();
    }
    case RenderFormat::csv: {
      std::string out = csv_line(
          {"section", "row", "col", "value"});
      for (const auto& row : report.by_attribute) {
        out += csv_line({"by_attribute", row.attribute, "count",
                         std::to_string(row.count)});
        out += csv_line({"by_attribute", row.attribute, "pct_low",
                         format_number(row.pct_low, p)});
        out += csv_line({"by_attribute", row.attribute, "pct_medium",
                         format_number(row.pct_medium, p)});
        out += csv_line({"by_attribute", row.attribute, "pct_high",
                         format_number(row.pct_high, p)});
      }
      for (const auto& row : report.numeric) {
        out += csv_line({"numeric", row.attribute, "mean",
                         format_number(row.mean, p)});
        out += csv_line({"numeric", row.attribute, "sd",
                         format_number(row.stddev, p)});
      }
      for (const auto& row : report.by_tier) {
        out += csv_line({"by_tier", tier_name(row.tier), "count",
                         std::to_string(row.count)});
        for (const auto& [name, pct] : row.flag_pct) {
          out += csv_line({"by_tier", tier_name(row.tier), name,
                           format_number(pct, p)});
        }
      }
      return out;
    }
    case RenderFormat::structured: {
      json j;
      j["report"] = "breakdown";
      j["provenance"] = provenance_json(prov);
      json attrs = json::array();
      for (const auto& row : report.by_attribute) {
        attrs.push_back({{"attribute", row.attribute},
                         {"count", row.count},
                         {"pct_low", jnum(row.pct_low)},
                         {"pct_medium", jnum(row.pct_medium)},
                         {"pct_high", jnum(row.pct_high)}});
      }
      j["by_attribute"] = attrs;
      json nums = json::array();
      for (const auto& row : report.numeric) {
        nums.push_back({{"attribute", row.attribute},
                        {"mean", jnum(row.mean)},
                        {"sd", jnum(row.stddev)}});
      }
      j["numeric"] = nums;
      json tiers = json::array();
      for (const auto& row : report.by_tier) {
        json t;
        t["tier"] = tier_name(row.tier);
        t["count"] = row.count;
        json comp = json::object();
        for (const auto& [name, pct] : row.flag_pct) comp[name] = jnum(pct);
        t["composition"] = comp;
        tiers.push_back(t);
      }
      j["by_tier"] = tiers;
      return j.dump(2) + "\n";
    }
  }
  throw Error("render: unsupported format");
}

std::string render_archetypes(const ArchetypeReport& report,
                              const RenderOptions& options,
                              const Provenance& prov) {
  const int p = options.precision;
  switch (options.format) {
    case RenderFormat::plain_table: {
      std::vector<std::string> header = {"Attribute"};
      for (const auto& row : report.rows) {
        header.push_back(archetype_name(row.archetype));
      }
      Table t(header);
      std::vector<std::string> counts = {"Courses"};
      std::vector<std::string> pcts = {"% of population"};
      for (const auto& row : report.rows) {
        counts.push_back(std::to_string(row.count));
        pcts.push_back(format_number(row.pct_of_population, p));
      }
      t.add_row(counts);
      t.add_row(pcts);
      if (!report.rows.empty()) {
        for (std::size_t i = 0; i < report.rows.front().flag_pct.size(); ++i) {
          std::vector<std::string> cells = {
              report.rows.front().flag_pct[i].first};
          for (const auto& row : report.rows) {
            cells.push_back(format_number(row.flag_pct[i].second, p));
          }
          t.add_row(cells);
        }
        for (std::size_t i = 0; i < report.rows.front().lo_hi.size(); ++i) {
          std::vector<std::string> cells = {
              std::get<0>(report.rows.front().lo_hi[i]) + " (Lo, Hi)"};
          for (const auto& row : report.rows) {
            cells.push_back(format_number(std::get<1>(row.lo_hi[i]), p) +
                            ", " +
                            format_number(std::get<2>(row.lo_hi[i]), p));
          }
          t.add_row(cells);
        }
      }
      return t.str();
    }
    case RenderFormat::csv: {
      std::string out = csv_line({"archetype", "attribute", "value"});
      for (const auto& row : report.rows) {
        const std::string name = archetype_name(row.archetype);
        out += csv_line({name, "count", std::to_string(row.count)});
        out += csv_line({name, "pct_of_population",
                         format_number(row.pct_of_population, p)});
        for (const auto& [attr, pct] : row.flag_pct) {
          out += csv_line({name, attr, format_number(pct, p)});
        }
        for (const auto& [attr, lo, hi] : row.lo_hi) {
          out += csv_line({name, attr + "_lo", format_number(lo, p)});
          out += csv_line({name, attr + "_hi", format_number(hi, p)});
        }
      }
      return out;
    }
    case RenderFormat::structured: {
      json j;
      j["report"] = "archetypes";
      j["provenance"] = provenance_json(prov);
      j["population_size"] = report.population_size;
      json rows = json::array();
      for (const auto& row : report.rows) {
        json r;
        r["archetype"] = archetype_name(row.archetype);
        r["count"] = row.count;
        r["pct_of_population"] = jnum(row.pct_of_population);
        json comp = json::object();
        for (const auto& [attr, pct] : row.flag_pct) comp[attr] = jnum(pct);
        r["flag_pct"] = comp;
        json lohi = json::object();
        for (const auto& [attr, lo, hi] : row.lo_hi) {
          lohi[attr] = {{"low", jnum(lo)}, {"high", jnum(hi)}};
        }
        r["lo_hi_pct"] = lohi;
        rows.push_back(r);
      }
      j["rows"] = rows;
      json members = json::object();
      for (const auto& [course_id, labels] : report.members) {
        json names = json::array();
        for (Archetype a : labels) names.push_back(archetype_name(a));
        members[course_id] = names;
      }
      j["members"] = members;
      return j.dump(2) + "\n";
    }
  }
  throw Error("render: unsupported format");
}

std::string render_delta(const DeltaReport& report,
                         const RenderOptions& options,
                         const Provenance& prov) {
  const int p = options.precision;
  static constexpr Tier kTiers[] = {Tier::Low, Tier::Medium, Tier::High};
  switch (options.format) {
    case RenderFormat::plain_table: {
      Table overall({"DOU", "Before", "After", "% Change"});
      for (Tier tier : kTiers) {
        const TierDelta& cell = report.overall[static_cast<std::size_t>(tier)];
        overall.add_row({tier_name(tier), std::to_string(cell.before),
                         std::to_string(cell.after),
                         cell.percent_change
                             ? signed_pct(*cell.percent_change, p)
                             : std::string(kDash)});
      }
      std::vector<std::string> header = {"DOU"};
      for (const auto& [r, cells] : report.per_resource) {
        header.push_back(resource_id(r));
      }
      Table by_resource(header);
      for (Tier tier : kTiers) {
        std::vector<std::string> cells = {tier_name(tier)};
        for (const auto& [r, deltas] : report.per_resource) {
          const auto& cell = deltas[static_cast<std::size_t>(tier)];
          if (!cell || !cell->percent_change) {
            cells.push_back(kDash);
          } else {
            cells.push_back(signed_pct(*cell->percent_change, p));
          }
        }
        by_resource.add_row(cells);
      }
      return "Overall\n" + overall.str() + "\nBy resource (% change)\n" +
             by_resource.str();
    }
    case RenderFormat::csv: {
      std::string out = csv_line(
          {"scope", "tier", "before", "after", "percent_change"});
      for (Tier tier : kTiers) {
        const TierDelta& cell = report.overall[static_cast<std::size_t>(tier)];
        out += csv_line({"overall", tier_name(tier),
                         std::to_string(cell.before),
                         std::to_string(cell.after),
                         cell.percent_change
                             ? format_number(*cell.percent_change, p)
                             : std::string()});
      }
      for (const auto& [r, deltas] : report.per_resource) {
        for (Tier tier : kTiers) {
          const auto& cell = deltas[static_cast<std::size_t>(tier)];
          if (!cell) continue;  // structurally absent tier
          out += csv_line({resource_id(r), tier_name(tier),
                           std::to_string(cell->before),
                           std::to_string(cell->after),
                           cell->percent_change
                               ? format_number(*cell->percent_change, p)
                               : std::string()});
        }
      }
      return out;
    }
    case RenderFormat::structured: {
      json j;
      j["report"] = "delta";
      j["provenance"] = provenance_json(prov);
      json overall = json::object();
      for (Tier tier : kTiers) {
        const TierDelta& cell = report.overall[static_cast<std::size_t>(tier)];
        overall[tier_name(tier)] = {
            {"before", cell.before},
            {"after", cell.after},
            {"percent_change", cell.percent_change
                                   ? jnum(*cell.percent_change)
                                   : json(nullptr)}};
      }
      j["overall"] = overall;
      json per_resource = json::object();
      for (const auto& [r, deltas] : report.per_resource) {
        json res = json::object();
        for (Tier tier : kTiers) {
          const auto& cell = deltas[static_cast<std::size_t>(tier)];
          if (!cell) continue;
          res[tier_name(tier)] = {
              {"before", cell->before},
              {"after", cell->after},
              {"percent_change", cell->percent_change
                                     ? jnum(*cell->percent_change)
                                     : json(nullptr)}};
        }
        per_resource[resource_id(r)] = res;
      }
      j["per_resource"] = per_resource;
      return j.dump(2) + "\n";
    }
  }
  throw Error("render: unsupported format");
}

std::string render_motifs(const MotifsReport& report,
                          const RenderOptions& options,
                          const Provenance& prov) {
  auto motif_text = [](const Motif& m) {
    std::string out;
    for (std::size_t i = 0; i < m.categories.size(); ++i) {
      if (i) out += " + ";
      out += m.categories[i];
    }
    return out;
  };
  switch (options.format) {
    case RenderFormat::plain_table: {
      Table t({"Rank", "%Courses", "#", "Motif"});
      int rank = 1;
      for (const auto& m : report.motifs) {
        t.add_row({std::to_string(rank++),
                   format_number(m.coverage_pct, options.precision),
                   std::to_string(m.course_count), motif_text(m)});
      }
      return t.str();
    }
    case RenderFormat::csv: {
      std::string out = csv_line({"rank", "coverage_pct", "count", "motif"});
      int rank = 1;
      for (const auto& m : report.motifs) {
        out += csv_line({std::to_string(rank++),
                         format_number(m.coverage_pct, options.precision),
                         std::to_string(m.course_count), motif_text(m)});
      }
      return out;
    }
    case RenderFormat::structured: {
      json j;
      j["report"] = "motifs";
      j["provenance"] = provenance_json(prov);
      j["population_size"] = report.population_size;
      json motifs = json::array();
      for (const auto& m : report.motifs) {
        motifs.push_back({{"categories", m.categories},
                          {"count", m.course_count},
                          {"coverage_pct", jnum(m.coverage_pct)}});
      }
      j["motifs"] = motifs;
      return j.dump(2) + "\n";
    }
  }
  throw Error("render: unsupported format");
}

}  // namespace

std::string render(const RenderRequest& request) {
  if (request.options.precision < 0) {
    throw Error("render: precision must be >= 0");
  }
  return std::visit(
      [&](const auto& payload) -> std::string {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, ScoresReport>) {
          return render_scores(payload, request.options, request.provenance);
        } else if constexpr (std::is_same_v<T, HypothesisTable>) {
          return render_hypotheses(payload, request.options,
                                   request.provenance);
        } else if constexpr (std::is_same_v<T, SnapshotsReport>) {
          return render_snapshots(payload, request.options,
                                  request.provenance);
        } else if constexpr (std::is_same_v<T, CohortsReport>) {
          return render_cohorts(payload, request.options, request.provenance);
        } else if constexpr (std::is_same_v<T, BreakdownReport>) {
          return render_breakdown(payload, request.options,
                                  request.provenance);
        } else if constexpr (std::is_same_v<T, ArchetypeReport>) {
          return render_archetypes(payload, request.options,
                                   request.provenance);
        } else if constexpr (std::is_same_v<T, DeltaReport>) {
          return render_delta(payload, request.options, request.provenance);
        } else {
          return render_motifs(payload, request.options, request.provenance);
        }
      },
      request.payload);
}

}  // namespace dou
