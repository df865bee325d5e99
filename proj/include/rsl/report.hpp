#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsl/verify.hpp"

namespace rsl::report {

using nlohmann::json;

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json toJson(const verify::BoundReport& r) {
  json j;
  j["lemmaId"] = r.check_id;
  j["title"] = r.title;
  j["paramNames"] = r.param_names;
  j["params"] = r.params;
  j["bound"] = r.bound;
  j["actual"] = r.actual;
  j["stderr"] = r.std_error;
  j["pass"] = r.pass;
  j["lowerBound"] = r.lower_bound;
  j["worstMargin"] = r.worst_margin;
  j["seed"] = r.seed;
  j["n"] = r.n;
  j["wallTimeMs"] = r.wall_ms;
  if (!r.fits.empty()) {
    json fits = json::array();
    for (const auto& f : r.fits) {
      json jf;
      jf["name"] = f.name;
      jf["slope"] = f.fit.slope;
      jf["intercept"] = f.fit.intercept;
      jf["r2"] = f.fit.r2;
      jf["xs"] = f.fit.xs;
      jf["ys"] = f.fit.ys;
      jf["pass"] = f.pass;
      fits.push_back(std::move(jf));
    }
    j["fits"] = std::move(fits);
    // convenience top-level slope/r2 of the first fit
    j["slope"] = r.fits.front().fit.slope;
    j["r2"] = r.fits.front().fit.r2;
  }
  return j;
}

inline void writeJson(const verify::BoundReport& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << toJson(r).dump(2) << "\n";
}

inline void writeCsv(const verify::BoundReport& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "checkId";
  for (const auto& p : r.param_names) out << "," << p;
  out << ",bound,actual,stderr,pass\n";
  for (std::size_t i = 0; i < r.actual.size(); ++i) {
    out << r.check_id;
    for (double v : r.params[i]) out << "," << fmt17(v);
    out << "," << fmt17(r.bound[i]) << "," << fmt17(r.actual[i]) << ","
        << fmt17(r.std_error[i]) << "," << r.pass[i] << "\n";
  }
}

inline void writeBoth(const verify::BoundReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  writeJson(r, dir / (r.check_id + ".json"));
  writeCsv(r, dir / (r.check_id + ".csv"));
}

// Kernel table: one row per (a, b) pair with the analytic inner product and
// its Monte Carlo estimate.
inline void writeKernelTableCsv(const std::vector<verify::KernelRow>& rows,
                                const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "mark-function-id-a,mark-function-id-b,t,analytic,mc_estimate,mc_stderr,n\n";
  for (const auto& r : rows)
    out << r.id_a << "," << r.id_b << "," << fmt17(r.t) << "," << fmt17(r.analytic) << ","
        << fmt17(r.mc_estimate) << "," << fmt17(r.mc_std_error) << "," << r.n << "\n";
}

inline std::string summaryLine(const verify::BoundReport& r) {
  std::string line = r.check_id;
  line.resize(line.size() < 24 ? 24 : line.size(), ' ');
  line += r.allPass() ? "PASS" : "FAIL";
  line += "  points=" + std::to_string(r.actual.size());
  for (const auto& f : r.fits) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "  %s: slope=%.4f r2=%.5f", f.name.c_str(), f.fit.slope,
                  f.fit.r2);
    line += buf;
  }
  return line;
}

// Plot-ready per-check CSV: x = first parameter, y = actual.
inline void writePlotCsv(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "x,y,yerr,bound\n";
  const auto& params = j.at("params");
  const auto& actual = j.at("actual");
  const auto& se = j.at("stderr");
  const auto& bound = j.at("bound");
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double x = params[i].empty() ? static_cast<double>(i) : params[i][0].get<double>();
    out << fmt17(x) << "," << fmt17(actual[i].get<double>()) << ","
        << fmt17(se[i].get<double>()) << "," << fmt17(bound[i].get<double>()) << "\n";
  }
}

inline int writeMarkdownSummary(const std::filesystem::path& in_dir,
                                const std::filesystem::path& out_md) {
  std::vector<json> reports;
  if (std::filesystem::exists(in_dir))
    for (const auto& entry : std::filesystem::directory_iterator(in_dir))
      if (entry.path().extension() == ".json") {
        std::ifstream in(entry.path());
        json j;
        in >> j;
        reports.push_back(std::move(j));
      }
  if (reports.empty()) return 1;
  std::sort(reports.begin(), reports.end(),
            [](const json& a, const json& b) { return a.at("lemmaId") < b.at("lemmaId"); });
  std::ofstream out(out_md);
  out << "# Verification summary\n\n";
  out << "| check | description | points | result | slope | r2 |\n";
  out << "|---|---|---|---|---|---|\n";
  for (const auto& j : reports) {
    bool all = true;
    for (const auto& p : j.at("pass"))
      if (p.get<int>() == 0) all = false;
    if (j.contains("fits"))
      for (const auto& f : j.at("fits"))
        if (!f.at("pass").get<bool>()) all = false;
    out << "| " << j.at("lemmaId").get<std::string>() << " | "
        << j.value("title", std::string{}) << " | " << j.at("actual").size() << " | "
        << (all ? "pass" : "FAIL") << " | ";
    if (j.contains("slope"))
      out << fmt17(j.at("slope").get<double>()) << " | " << fmt17(j.at("r2").get<double>());
    else
      out << " | ";
    out << " |\n";
    writePlotCsv(j, out_md.parent_path() /
                        (j.at("lemmaId").get<std::string>() + "_plot.csv"));
  }
  return 0;
}

}  // namespace rsl::report
