#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "asmeta/error.hpp"
#include "asmeta/harness.hpp"

namespace asmeta {
namespace {

using ojson = nlohmann::ordered_json;

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string fixed4(const std::optional<double>& v) { return v ? fixed4(*v) : std::string(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

template <class... Fields>
void csv_row(std::ostringstream& out, const Fields&... fields) {
  bool first = true;
  ((out << (first ? "" : ",") << csv_field(fields), first = false), ...);
  out << '\n';
}

ojson optional_number(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

// Index of the approach with the lowest scenario rank, ties to the first.
std::optional<std::size_t> best_approach(const ScenarioResult& s) {
  std::optional<std::size_t> best;
  for (std::size_t a = 0; a < s.approaches.size(); ++a) {
    const auto& r = s.approaches[a].rank;
    if (r && (!best || *r < *s.approaches[*best].rank)) best = a;
  }
  return best;
}

std::string mark(bool bold, const std::string& text) { return bold && !text.empty() ? "**" + text + "**" : text; }

std::string dash_if_empty(const std::string& s) { return s.empty() ? "-" : s; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

std::string join_members(const std::vector<std::string>& members) {
  std::string out;
  for (std::size_t j = 0; j < members.size(); ++j) out += (j ? " + " : "") + members[j];
  return out;
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "markdown" || name == "md") return ReportFormat::Markdown;
  throw Error(Errc::InvalidConfig, "unknown report format '" + name + "' (expected json, csv or markdown)");
}

std::string report_to_json(const EvaluationReport& report) {
  ojson root;
  root["seed"] = report.seed;
  root["scenarios"] = ojson::array();
  for (const auto& s : report.scenarios) {
    ojson js;
    js["scenario"] = s.scenario;
    js["approaches"] = ojson::array();
    for (const auto& a : s.approaches) {
      ojson ja;
      ja["approach"] = a.approach;
      ja["is_base"] = a.is_base;
      ja["mean_npar10"] = optional_number(a.mean_npar10);
      ja["median_npar10"] = optional_number(a.median_npar10);
      ja["rank"] = optional_number(a.rank);
      if (a.versus_base) {
        ja["versus_base"] = {{"better_or_equal", a.versus_base->better_or_equal}, {"worse", a.versus_base->worse}};
      } else {
        ja["versus_base"] = nullptr;
      }
      ja["folds"] = ojson::array();
      for (const auto& f : a.folds) {
        ojson jf;
        jf["fold"] = f.fold;
        jf["status"] = f.error ? "failed" : "ok";
        jf["error"] = f.error ? ojson(*f.error) : ojson(nullptr);
        jf["par10"] = f.error ? ojson(nullptr) : ojson(f.par10);
        jf["npar10"] = optional_number(f.npar10);
        jf["n_timeouts"] = f.error ? ojson(nullptr) : ojson(f.n_timeouts);
        ja["folds"].push_back(std::move(jf));
      }
      js["approaches"].push_back(std::move(ja));
    }
    js["baselines"] = ojson::array();
    for (const auto& b : s.baselines) {
      js["baselines"].push_back({{"fold", b.fold},
                                 {"oracle_par10", b.oracle_par10},
                                 {"as_oracle_par10", b.as_oracle_par10},
                                 {"sbs_par10", b.sbs_par10},
                                 {"sbs_algorithm", b.sbs_algorithm},
                                 {"sbas_par10", b.sbas_par10},
                                 {"sbas_selector", b.sbas_selector}});
    }
    root["scenarios"].push_back(std::move(js));
  }
  root["summary"] = ojson::array();
  for (const auto& r : report.summary) {
    root["summary"].push_back({{"approach", r.approach},
                               {"mean_npar10", optional_number(r.mean_npar10)},
                               {"median_npar10", optional_number(r.median_npar10)},
                               {"avg_rank", optional_number(r.avg_rank)}});
  }
  return root.dump(2) + "\n";
}

std::string report_to_csv(const EvaluationReport& report) {
  std::ostringstream out;
  csv_row(out, "scenario", "approach", "fold", "status", "par10", "npar10", "n_timeouts", "best");
  for (const auto& s : report.scenarios) {
    const auto best = best_approach(s);
    for (std::size_t a = 0; a < s.approaches.size(); ++a) {
      const auto& r = s.approaches[a];
      for (const auto& f : r.folds) {
        csv_row(out, s.scenario, r.approach, std::to_string(f.fold), f.error ? "failed" : "ok",
                f.error ? "" : fixed4(f.par10), fixed4(f.npar10), f.error ? "" : std::to_string(f.n_timeouts),
                best == a ? "*" : "");
      }
    }
  }
  return out.str();
}

std::string report_to_markdown(const EvaluationReport& report) {
  std::ostringstream out;
  out << "| scenario | approach | mean nPAR10 | median nPAR10 | avg rank |\n";
  out << "|---|---|---:|---:|---:|\n";
  for (const auto& s : report.scenarios) {
    const auto best = best_approach(s);
    for (std::size_t a = 0; a < s.approaches.size(); ++a) {
      const auto& r = s.approaches[a];
      const bool bold = best == a;
      out << "| " << s.scenario << " | " << mark(bold, r.approach) << " | "
          << dash_if_empty(mark(bold, fixed4(r.mean_npar10))) << " | " << dash_if_empty(fixed4(r.median_npar10))
          << " | " << dash_if_empty(fixed4(r.rank)) << " |\n";
    }
  }
  std::optional<std::size_t> best;
  for (std::size_t a = 0; a < report.summary.size(); ++a) {
    const auto& r = report.summary[a].avg_rank;
    if (r && (!best || *r < *report.summary[*best].avg_rank)) best = a;
  }
  for (std::size_t a = 0; a < report.summary.size(); ++a) {
    const auto& r = report.summary[a];
    const bool bold = best == a;
    out << "| all | " << mark(bold, r.approach) << " | " << dash_if_empty(mark(bold, fixed4(r.mean_npar10)))
        << " | " << dash_if_empty(fixed4(r.median_npar10)) << " | " << dash_if_empty(fixed4(r.avg_rank)) << " |\n";
  }
  return out.str();
}

std::string timings_to_csv(const EvaluationReport& report) {
  std::ostringstream out;
  csv_row(out, "scenario", "approach", "fold", "fit_seconds", "predict_seconds");
  for (const auto& s : report.scenarios) {
    for (const auto& r : s.approaches) {
      for (const auto& f : r.folds) {
        char fit[32], pred[32];
        std::snprintf(fit, sizeof fit, "%.6f", f.fit_seconds);
        std::snprintf(pred, sizeof pred, "%.6f", f.predict_seconds);
        csv_row(out, s.scenario, r.approach, std::to_string(f.fold), std::string(fit), std::string(pred));
      }
    }
  }
  return out.str();
}

std::vector<std::string> emit_report(const EvaluationReport& report, const std::vector<ReportFormat>& formats,
                                     const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create output directory " + dir + ": " + ec.message());
  const std::filesystem::path base(dir);
  std::vector<std::string> written;
  auto emit = [&](const char* name, const std::string& text) {
    write_text(base / name, text);
    written.push_back((base / name).string());
  };
  for (auto f : formats) {
    switch (f) {
      case ReportFormat::Json: emit("report.json", report_to_json(report)); break;
      case ReportFormat::Csv: emit("report.csv", report_to_csv(report)); break;
      case ReportFormat::Markdown: emit("report.md", report_to_markdown(report)); break;
    }
  }
  emit("timings.csv", timings_to_csv(report));
  return written;
}

std::string sweep_to_csv(const SweepResult& sweep) {
  std::ostringstream out;
  out << "mask,members,n_members,mean_train_par10,mean_train_npar10,mean_test_npar10,median_test_npar10,best";
  for (const auto& f : sweep.folds) out << ",test_npar10_fold" << f.fold;
  out << '\n';
  for (const auto& row : sweep.rows) {
    out << row.mask << ',' << csv_field(join_members(row.members)) << ',' << row.members.size() << ','
        << fixed4(row.mean_train_par10) << ',' << fixed4(row.mean_train_npar10) << ',' << fixed4(row.mean_test_npar10) << ','
        << fixed4(row.median_test_npar10) << ',' << (row.mask == sweep.best_mask ? "*" : "");
    for (const auto& v : row.test_npar10) out << ',' << fixed4(v);
    out << '\n';
  }
  return out.str();
}

std::string sweep_to_json(const SweepResult& sweep) {
  ojson root;
  root["aggregation"] = to_string(sweep.aggregation);
  root["specs"] = sweep.specs;
  root["best_mask"] = sweep.best_mask;
  ojson folds = ojson::array();
  for (const auto& f : sweep.folds) folds.push_back(f.fold);
  root["folds"] = folds;
  root["rows"] = ojson::array();
  for (const auto& row : sweep.rows) {
    ojson train = ojson::array(), test = ojson::array();
    for (const auto& v : row.train_npar10) train.push_back(optional_number(v));
    for (const auto& v : row.test_npar10) test.push_back(optional_number(v));
    root["rows"].push_back({{"mask", row.mask},
                            {"members", row.members},
                            {"train_par10", row.train_par10},
                            {"train_npar10", train},
                            {"test_npar10", test},
                            {"mean_train_par10", row.mean_train_par10},
                            {"mean_train_npar10", optional_number(row.mean_train_npar10)},
                            {"mean_test_npar10", optional_number(row.mean_test_npar10)},
                            {"median_test_npar10", optional_number(row.median_test_npar10)}});
  }
  return root.dump(2) + "\n";
}

std::string baselines_to_csv(const std::string& scenario, const std::vector<BaselineFold>& folds) {
  std::ostringstream out;
  csv_row(out, "scenario", "fold", "oracle_par10", "as_oracle_par10", "sbs_par10", "sbas_par10", "sbs_algorithm",
          "sbas_selector");
  for (const auto& b : folds) {
    csv_row(out, scenario, std::to_string(b.fold), fixed4(b.oracle_par10), fixed4(b.as_oracle_par10),
            fixed4(b.sbs_par10), fixed4(b.sbas_par10), b.sbs_algorithm, b.sbas_selector);
  }
  return out.str();
}

}  // namespace asmeta
