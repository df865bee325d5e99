#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsl/brownian.hpp"
#include "rsl/config.hpp"
#include "rsl/poisson.hpp"
#include "rsl/report.hpp"
#include "rsl/rng.hpp"
#include "rsl/tilt.hpp"
#include "rsl/verify.hpp"

namespace fs = std::filesystem;
using rsl::Rng;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string fmt(double v) { return rsl::report::fmt17(v); }

std::vector<double> logGrid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] =
        std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
  return g;
}

std::vector<double> defaultLambdas() {
  return {0x1.0p-4, 0x1.0p-5, 0x1.0p-6, 0x1.0p-7, 0x1.0p-8, 0x1.0p-9};
}

// ---------------------------------------------------------------------------
// sample subcommand

int cmdSamplePoisson(double lambda, const std::vector<double>& marks, double t,
                     std::uint64_t n, std::uint64_t seed, std::ostream& out) {
  rsl::PoissonModel model{lambda, marks};
  model.validate();
  Rng rng(seed);
  out << "sample,t,n_atoms,atoms\n";
  for (std::uint64_t i = 0; i < n; ++i) {
    const rsl::MarkedPointSet z = rsl::samplePoisson(model, t, rng);
    out << i << "," << fmt(t) << "," << z.atoms.size() << ",";
    for (std::size_t k = 0; k < z.atoms.size(); ++k) {
      if (k) out << ";";
      out << fmt(z.atoms[k].time) << ":" << z.atoms[k].mark;
    }
    out << "\n";
  }
  return kExitPass;
}

int cmdSampleBrownian(double a, double t, std::uint64_t n, std::uint64_t seed,
                      std::ostream& out) {
  Rng rng(seed);
  out << "seed,t,empty,alpha,g_last\n";
  for (std::uint64_t i = 0; i < n; ++i) {
    const rsl::BrownianZeroSummary z = rsl::sampleZeroSummary(a, t, rng);
    out << seed << "," << fmt(t) << "," << (z.empty ? 1 : 0) << ","
        << (z.empty ? "nan" : fmt(z.alpha)) << ","
        << (z.empty ? "nan" : fmt(z.g_last)) << "\n";
  }
  return kExitPass;
}

int cmdSampleSeed(double a, double beta, double t, std::uint64_t n, std::uint64_t seed,
                  std::ostream& out) {
  rsl::SeedParams p{a, beta};
  p.validate();
  Rng rng(seed);
  out << "t,beta,a,empty,alpha,dm\n";
  for (std::uint64_t i = 0; i < n; ++i) {
    const rsl::BrownianZeroSummary z = rsl::sampleSeed(p, t, rng);
    out << fmt(t) << "," << fmt(beta) << "," << fmt(a) << "," << (z.empty ? 1 : 0) << ","
        << (z.empty ? "nan" : fmt(z.alpha)) << "," << (z.empty ? "nan" : fmt(z.diam()))
        << "\n";
  }
  return kExitPass;
}

// ---------------------------------------------------------------------------
// verify subcommand

struct VerifyOptions {
  std::uint64_t seed = 0;
  fs::path out_dir = "reports";
  unsigned jobs = 0;
  std::optional<std::uint64_t> n_override;
  rsl::Config cfg;
};

rsl::verify::BoundReport runCheck(const std::string& id, const VerifyOptions& opt) {
  using namespace rsl;
  using namespace rsl::verify;
  static const std::map<std::string, std::uint64_t> kStream = {
      {"tv-gamma", 1},  {"tail", 2},          {"bridge", 3},
      {"block-weights", 4}, {"hellinger-slope", 5}, {"kakutani", 6},
      {"overlap", 7},   {"diam-tail", 8},     {"poisson-kernel", 9},
      {"poisson-factorization", 10}};
  const Rng base = Rng(opt.seed).substream(1000 + kStream.at(id));
  const unsigned jobs = opt.jobs ? opt.jobs : defaultJobs();
  auto n_of = [&](const char* key, std::uint64_t dflt) {
    const std::uint64_t n = opt.n_override ? *opt.n_override : opt.cfg.getUInt(key, dflt);
    if (n < 10000) throw std::invalid_argument("verify: MC checks need n >= 10000");
    return n;
  };
  const double beta = opt.cfg.getDouble("seed.beta", 1.0);
  const double s = opt.cfg.getDouble("blocks.s", 1.0);
  const double t = opt.cfg.getDouble("blocks.t", 1.0);
  const auto lambdas = opt.cfg.getList("blocks.lambdas", defaultLambdas());

  if (id == "tv-gamma") {
    std::vector<std::pair<double, double>> grid;
    for (double c : opt.cfg.getList("tv-gamma.cs", logGrid(0.1, 100.0, 7)))
      for (double S : opt.cfg.getList("tv-gamma.Ss", logGrid(0.01, 10.0, 7)))
        grid.emplace_back(c, S);
    return checkTvGammaBound(grid);
  }
  if (id == "tail") {
    std::vector<TailPoint> grid;
    for (double c : opt.cfg.getList("tail.cs", logGrid(0.1, 100.0, 7)))
      for (double T : opt.cfg.getList("tail.Ts", logGrid(0.01, 10.0, 7)))
        for (double ratio : opt.cfg.getList("tail.ratios", {0.25, 0.5, 0.8}))
          grid.push_back({c, T, ratio * T});
    return checkTailBound(grid);
  }
  if (id == "bridge") return checkBridgeBound(s, t, lambdas);
  if (id == "block-weights")
    return checkBlockWeights(beta, s, t, lambdas, n_of("blocks.n", 10000000), base, jobs);
  if (id == "hellinger-slope")
    return hellingerSmallnessSlope(beta, s, t, lambdas, n_of("blocks.n", 10000000), base,
                                   jobs)
        .report;
  if (id == "kakutani") {
    const double kb = opt.cfg.getDouble("kakutani.beta", 1.0);
    const double kt = opt.cfg.getDouble("kakutani.t", 1.0);
    const auto N = opt.cfg.getUInt("kakutani.N", 1000);
    return kakutaniProduct(kb, kt, N).report;
  }
  if (id == "overlap") {
    const double b = opt.cfg.getDouble("overlap.beta", 1.0);
    std::vector<double> ts = opt.cfg.getList("overlap.ts", {});
    if (ts.empty())
      for (double frac : {0.05, 0.25, 0.5, 0.75, 1.0}) ts.push_back(frac * 2.0 / b);
    return checkLinearOverlap(b, ts);
  }
  if (id == "diam-tail")
    return checkDiamTail(beta, opt.cfg.getList("diam-tail.us", {0.02, 0.05, 0.1, 0.2, 0.4}),
                         n_of("diam-tail.n", 1000000), base, jobs);
  if (id == "poisson-kernel") {
    std::vector<KernelCase> cases;
    cases.push_back({PoissonModel{1.0, {1.0}}, MarkFunction{{1.0}}, MarkFunction{{3.0}},
                     1.0, "one", "three"});
    cases.push_back({PoissonModel{2.0, {0.5, 0.5}}, MarkFunction{{1.2, 0.8}},
                     MarkFunction{{0.9, 1.1}}, 0.5, "tilt-down", "tilt-up"});
    cases.push_back({PoissonModel{0.7, {0.25, 0.75}}, MarkFunction{{1.4, 0.6}},
                     MarkFunction{{1.0, 1.0}}, 2.0, "skew", "one"});
    const auto out = checkPoissonKernelDetailed(cases, n_of("poisson.n", 1000000), base, jobs);
    fs::create_directories(opt.out_dir);
    rsl::report::writeKernelTableCsv(out.rows, opt.out_dir / "poisson-kernel-table.csv");
    return out.report;
  }
  if (id == "poisson-factorization") {
    PoissonModel model{opt.cfg.getDouble("poisson.lambda", 1.5),
                       opt.cfg.getList("poisson.marks", {0.6, 0.4})};
    MarkFunction a{opt.cfg.getList("poisson.a", {1.2, 0.8})};
    return checkPoissonFactorization(model, a, opt.cfg.getDouble("poisson.s", 0.4),
                                     opt.cfg.getDouble("poisson.t", 0.6),
                                     n_of("poisson.factorization_n", 100000), base);
  }
  throw std::out_of_range("unknown check: " + id);
}

const std::vector<std::string>& allCheckIds() {
  static const std::vector<std::string> ids = {
      "tv-gamma", "tail",      "bridge",         "block-weights",
      "hellinger-slope", "kakutani", "overlap", "diam-tail",
      "poisson-kernel",  "poisson-factorization"};
  return ids;
}

int cmdVerify(const std::string& check_id, const VerifyOptions& opt) {
  std::vector<std::string> ids;
  if (check_id == "all")
    ids = allCheckIds();
  else {
    const auto& all = allCheckIds();
    if (std::find(all.begin(), all.end(), check_id) == all.end()) {
      std::cerr << "unknown check: " << check_id << "\n";
      return kExitUsage;
    }
    ids.push_back(check_id);
  }
  bool all_pass = true;
  bool numerical = false;
  std::vector<std::string> failures;
  for (const auto& id : ids) {
    try {
      const auto rep = runCheck(id, opt);
      rsl::report::writeBoth(rep, opt.out_dir);
      std::cout << rsl::report::summaryLine(rep) << "\n";
      if (!rep.allPass()) {
        all_pass = false;
        for (std::size_t i = 0; i < rep.pass.size(); ++i)
          if (!rep.pass[i]) {
            if (std::isnan(rep.actual[i])) numerical = true;
            std::string pt = id + " point " + std::to_string(i) + " (";
            for (std::size_t k = 0; k < rep.params[i].size(); ++k)
              pt += (k ? "," : "") + fmt(rep.params[i][k]);
            failures.push_back(pt + ")");
          }
      }
    } catch (const rsl::QuadratureError& e) {
      std::cerr << id << ": numerical failure: " << e.what() << "\n";
      return kExitNumerical;
    } catch (const rsl::verify::VerifyError& e) {
      std::cerr << id << ": numerical failure: " << e.what() << "\n";
      return kExitNumerical;
    }
  }
  for (const auto& f : failures) std::cerr << "FAIL " << f << "\n";
  if (!all_pass) return numerical ? kExitNumerical : kExitFail;
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"randomset-lab: samplers, densities and verification checks "
               "for random-set product systems"};
  app.require_subcommand(1);

  // ---- sample
  auto* sample = app.add_subcommand("sample", "draw samples and write a CSV");
  std::string kind, out_path = "-";
  double lambda = 2.0, t_par = 1.0, a_par = 1.0, beta_par = 1.0;
  std::string marks_str = "1";
  std::uint64_t n_par = 10;
  std::uint64_t seed_par = 0;
  sample->add_option("--kind", kind, "poisson | brownian | seed")->required();
  sample->add_option("--lambda", lambda, "poisson intensity");
  sample->add_option("--marks", marks_str, "comma-separated mark weights (sum 1)");
  sample->add_option("--t", t_par, "horizon");
  sample->add_option("--a", a_par, "Brownian start point");
  sample->add_option("--beta", beta_par, "vacuum rate");
  sample->add_option("--n", n_par, "number of samples");
  sample->add_option("--seed", seed_par, "RNG seed (required)")->required();
  sample->add_option("--out", out_path, "output file, - for stdout");

  // ---- verify
  auto* ver = app.add_subcommand("verify", "run a verification check");
  std::string check_id = "all", config_path, out_dir_flag;
  std::uint64_t vseed = 0;
  unsigned jobs = 0;
  std::uint64_t n_override = 0;
  ver->add_option("check", check_id, "check id or 'all'");
  ver->add_option("--config", config_path, "key=value config file");
  ver->add_option("--seed", vseed, "RNG seed (required)")->required();
  ver->add_option("--out-dir", out_dir_flag, "report directory");
  ver->add_option("--jobs", jobs, "worker threads (default: logical cores)");
  ver->add_option("--n", n_override, "override MC sample count");

  // ---- report
  auto* rpt = app.add_subcommand("report", "summarize report JSONs to markdown");
  std::string in_dir, out_md = "";
  rpt->add_option("in_dir", in_dir, "directory with verify JSON reports")->required();
  rpt->add_option("--out", out_md, "summary markdown path (default <in_dir>/summary.md)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample->parsed()) {
      std::ofstream file;
      std::ostream* os = &std::cout;
      if (out_path != "-") {
        file.open(out_path);
        if (!file) {
          std::cerr << "cannot open " << out_path << "\n";
          return kExitUsage;
        }
        os = &file;
      }
      if (kind == "poisson") {
        std::vector<double> marks;
        std::stringstream ss(marks_str);
        std::string tok;
        while (std::getline(ss, tok, ',')) marks.push_back(std::stod(tok));
        return cmdSamplePoisson(lambda, marks, t_par, n_par, seed_par, *os);
      }
      if (kind == "brownian") return cmdSampleBrownian(a_par, t_par, n_par, seed_par, *os);
      if (kind == "seed") return cmdSampleSeed(a_par, beta_par, t_par, n_par, seed_par, *os);
      std::cerr << "unknown kind: " << kind << "\n";
      return kExitUsage;
    }
    if (ver->parsed()) {
      VerifyOptions opt;
      opt.seed = vseed;
      if (!config_path.empty()) opt.cfg = rsl::Config::fromFile(config_path);
      if (n_override > 0) opt.n_override = n_override;
      opt.jobs = jobs;
      const char* env_out = std::getenv("RANDOMSET_LAB_OUT");
      opt.out_dir = !out_dir_flag.empty() ? fs::path(out_dir_flag)
                    : env_out             ? fs::path(env_out)
                                          : fs::path("reports");
      return cmdVerify(check_id, opt);
    }
    if (rpt->parsed()) {
      const fs::path dir(in_dir);
      const fs::path md = out_md.empty() ? dir / "summary.md" : fs::path(out_md);
      const int rc = rsl::report::writeMarkdownSummary(dir, md);
      if (rc != 0) std::cerr << "no reports found in " << dir << "\n";
      return rc == 0 ? kExitPass : kExitFail;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
