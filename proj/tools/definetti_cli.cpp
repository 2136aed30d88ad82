// Licensed under the Apache License 2.0 (see LICENSE file).

// Command-line front end. Talks to the library through the C interface only.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "definetti/definetti.h"

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(dft_status s, const char* what) {
  if (s != DFT_OK) {
    throw Failure(std::string(what) + ": " + dft_status_string(s) + ": " + dft_last_error());
  }
}

struct MeasureDeleter {
  void operator()(dft_measure* m) const { dft_measure_free(m); }
};
struct LawDeleter {
  void operator()(dft_mean_law* m) const { dft_mean_law_free(m); }
};
struct EmpiricalDeleter {
  void operator()(dft_empirical_law* m) const { dft_empirical_law_free(m); }
};
using Measure = std::unique_ptr<dft_measure, MeasureDeleter>;
using Law = std::unique_ptr<dft_mean_law, LawDeleter>;
using Empirical = std::unique_ptr<dft_empirical_law, EmpiricalDeleter>;

std::string take(char* s) {
  std::string out(s);
  dft_string_free(s);
  return out;
}

std::string num(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Inline JSON when the argument starts with '{', a file path otherwise.
Measure load_measure(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\n");
  const std::string text = first != std::string::npos && arg[first] == '{' ? arg : read_file(arg);
  dft_measure* m = nullptr;
  check(dft_measure_from_json(text.c_str(), &m), "--measure");
  return Measure(m);
}

// "1,2,5" or "log:LO:HI:COUNT".
std::vector<int64_t> parse_grid(const std::string& text) {
  std::vector<int64_t> out;
  if (text.rfind("log:", 0) == 0) {
    long long lo = 0;
    long long hi = 0;
    int count = 0;
    if (std::sscanf(text.c_str(), "log:%lld:%lld:%d", &lo, &hi, &count) != 3 || count < 1) {
      throw Failure("--n-grid: expected log:LO:HI:COUNT");
    }
    out.resize(static_cast<std::size_t>(count));
    std::size_t written = 0;
    check(dft_log_spaced_grid(lo, hi, count, out.data(), &written), "--n-grid");
    out.resize(written);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Failure("--n-grid: '" + item + "' is not an integer");
    }
  }
  if (out.empty()) throw Failure("--n-grid is empty");
  return out;
}

std::vector<double> parse_reals(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Failure(std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure("cannot write " + path);
  out << text;
}

struct Common {
  double tol = 0.0;
  double rel_tol = 0.0;
  std::string out;

  dft_quadrature_config quadrature() const {
    dft_quadrature_config cfg;
    dft_quadrature_config_default(&cfg);
    if (tol > 0.0) cfg.abs_tol = tol;
    if (rel_tol > 0.0) cfg.rel_tol = rel_tol;
    return cfg;
  }
};

int mode_code(const std::string& mode) {
  if (mode == "exact") return DFT_MODE_EXACT;
  if (mode == "perturbed") return DFT_MODE_PERTURBED;
  if (mode == "both") return DFT_MODE_BOTH;
  if (mode == "urn_mc") return DFT_MODE_URN_MC;
  throw Failure("--mode must be exact, perturbed, both or urn_mc");
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--tol", c.tol, "Absolute quadrature tolerance (default 1e-12)");
  app->add_option("--rel-tol", c.rel_tol, "Relative quadrature tolerance (default 1e-10)");
  app->add_option("--out", c.out, "Output file (default: standard output)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact laws and Wasserstein rates for exchangeable Bernoulli sequences"};
  app.require_subcommand(1);
  std::size_t workers = 0;
  app.add_option("--workers", workers, "Worker threads (default: all cores)");

  Common common;
  std::string measure_arg;
  std::string grid_arg;
  std::string mode = "exact";
  std::optional<uint64_t> seed;
  int64_t replications = 100000;
  std::string format = "csv";

  auto* distance = app.add_subcommand("distance", "Distances and bounds over a grid of n");
  distance->add_option("--measure", measure_arg, "Mixing measure as JSON or a JSON file")->required();
  distance->add_option("--n-grid", grid_arg, "Comma list or log:LO:HI:COUNT")->required();
  distance->add_option("--mode", mode, "exact, perturbed, both or urn_mc");
  distance->add_option("--seed", seed, "Seed (required for urn_mc)");
  distance->add_option("--replications", replications, "Monte Carlo replications per n (urn_mc)");
  distance->add_option("--format", format, "csv or json");
  add_common(distance, common);

  std::string fit_mode = "perturbed";
  std::string fit_json;
  auto* rate = app.add_subcommand("rate-fit", "Fit the log-log slope of a distance curve");
  rate->add_option("--measure", measure_arg, "Mixing measure as JSON or a JSON file")->required();
  rate->add_option("--n-grid", grid_arg, "Comma list or log:LO:HI:COUNT")->required();
  rate->add_option("--mode", fit_mode, "exact or perturbed");
  rate->add_option("--fit-json", fit_json, "Also write the fit summary as JSON here");
  add_common(rate, common);

  int64_t A = 1;
  int64_t B = 1;
  int64_t m = 1;
  int64_t n = 1;
  std::string sim_measure;
  auto* urn = app.add_subcommand("urn-sim", "Monte Carlo histogram of the number of ones");
  urn->add_option("-A", A, "Initial white balls");
  urn->add_option("-B", B, "Initial black balls");
  urn->add_option("-m", m, "Balls added per draw");
  urn->add_option("-n", n, "Draws")->required();
  urn->add_option("--replications", replications, "Replications");
  urn->add_option("--seed", seed, "Seed")->required();
  urn->add_option("--measure", sim_measure, "Sample theta from this measure instead of running an urn");
  urn->add_option("--out", common.out, "Output file (default: standard output)");

  std::string t_arg = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
  std::string chen_n = "1,4,16,64,256";
  auto* chen = app.add_subcommand("chen-check", "L1 Berry-Esseen bound for standardized binomials");
  chen->add_option("--t", t_arg, "Comma list of success probabilities");
  chen->add_option("--n-grid", chen_n, "Comma list or log:LO:HI:COUNT");
  chen->add_option("--out", common.out, "Output file (default: standard output)");

  int criterion = 0;
  int64_t urn_reps = 0;
  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  verify->add_option("--criterion", criterion, "Run only this criterion (1-based; 0 = all)");
  verify->add_option("--seed", seed, "Seed for the Monte Carlo checks")->required();
  verify->add_option("--urn-replications", urn_reps, "Replications for the urn check");
  add_common(verify, common);

  std::string table;
  auto* constant = app.add_subcommand("constant-ratio", "Ratio of the Beta constant to external constants");
  constant->add_option("--table", table, "CSV with columns alpha,beta,external")->required();
  constant->add_option("--out", common.out, "Output file (default: standard output)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (workers > 0) dft_set_worker_count(workers);
    const dft_quadrature_config cfg = common.quadrature();

    if (*distance) {
      const Measure mu = load_measure(measure_arg);
      const std::vector<int64_t> ns = parse_grid(grid_arg);
      const int code = mode_code(mode);
      if (code == DFT_MODE_URN_MC && !seed) throw Failure("--seed is required with --mode urn_mc");
      std::vector<dft_distance_report> reports(ns.size());
      check(dft_run_distance_curve(mu.get(), ns.data(), ns.size(), code, &cfg, seed.value_or(0), replications,
                                   reports.data()),
            "distance");
      char* text = nullptr;
      if (format == "json") {
        check(dft_reports_to_json(reports.data(), reports.size(), &text), "distance");
      } else if (format == "csv") {
        check(dft_reports_to_csv(reports.data(), reports.size(), &text), "distance");
      } else {
        throw Failure("--format must be csv or json");
      }
      emit(take(text), common.out);
      return 0;
    }

    if (*rate) {
      const Measure mu = load_measure(measure_arg);
      const std::vector<int64_t> ns = parse_grid(grid_arg);
      std::vector<double> d(ns.size());
      for (std::size_t i = 0; i < ns.size(); ++i) {
        if (fit_mode == "perturbed") {
          check(dft_dw_perturbed_prior(mu.get(), ns[i], &cfg, &d[i]), "rate-fit");
        } else if (fit_mode == "exact") {
          dft_mean_law* raw = nullptr;
          check(dft_mean_law_compute(mu.get(), static_cast<int>(ns[i]), &cfg, 0, &raw), "rate-fit");
          const Law law(raw);
          check(dft_dw_mean_vs_prior(law.get(), mu.get(), &d[i]), "rate-fit");
        } else {
          throw Failure("--mode must be exact or perturbed");
        }
      }
      double slope = 0.0;
      double intercept = 0.0;
      double residual = 0.0;
      check(dft_fit_rate(ns.data(), d.data(), ns.size(), &slope, &intercept, &residual), "rate-fit");
      char* csv = nullptr;
      check(dft_rate_fit_to_csv(ns.data(), d.data(), ns.size(), &csv), "rate-fit");
      emit(take(csv), common.out);
      std::ostringstream summary;
      summary << "{\"slope\": " << num(slope) << ", \"intercept\": " << num(intercept)
              << ", \"max_residual\": " << num(residual) << "}\n";
      if (!fit_json.empty()) emit(summary.str(), fit_json);
      std::cerr << "slope " << slope << " (max residual " << residual << ")\n";
      return 0;
    }

    if (*urn) {
      dft_empirical_law* raw = nullptr;
      Measure mu;
      if (!sim_measure.empty()) {
        mu = load_measure(sim_measure);
        check(dft_simulate_exchangeable(mu.get(), static_cast<int>(n), replications, *seed, &raw), "urn-sim");
      } else {
        check(dft_simulate_urn(A, B, m, n, replications, *seed, &raw), "urn-sim");
        dft_measure* beta = nullptr;
        check(dft_measure_beta(static_cast<double>(A) / static_cast<double>(m),
                               static_cast<double>(B) / static_cast<double>(m), &beta),
              "urn-sim");
        mu.reset(beta);
      }
      const Empirical emp(raw);
      char* csv = nullptr;
      check(dft_empirical_law_to_csv(emp.get(), &csv), "urn-sim");
      emit(take(csv), common.out);

      dft_mean_law* law_raw = nullptr;
      check(dft_mean_law_compute(mu.get(), static_cast<int>(n), &cfg, 0, &law_raw), "urn-sim");
      const Law law(law_raw);
      std::vector<double> exact(static_cast<std::size_t>(n) + 1);
      std::vector<int64_t> counts(exact.size());
      check(dft_mean_law_probs(law.get(), exact.data(), exact.size()), "urn-sim");
      check(dft_empirical_law_counts(emp.get(), counts.data(), counts.size()), "urn-sim");
      std::vector<double> prop(exact.size());
      for (std::size_t k = 0; k < prop.size(); ++k) {
        prop[k] = static_cast<double>(counts[k]) / static_cast<double>(replications);
      }
      double tv = 0.0;
      double emp_dw = 0.0;
      double dw = 0.0;
      check(dft_total_variation(prop.data(), exact.data(), prop.size(), &tv), "urn-sim");
      check(dft_empirical_dw(emp.get(), mu.get(), &emp_dw), "urn-sim");
      check(dft_dw_mean_vs_prior(law.get(), mu.get(), &dw), "urn-sim");
      std::cerr << "TV to exact law " << tv << "; empirical dW " << emp_dw << ", exact dW " << dw << "\n";
      return 0;
    }

    if (*chen) {
      const std::vector<double> ts = parse_reals(t_arg, "--t");
      const std::vector<int64_t> ns = parse_grid(chen_n);
      std::ostringstream os;
      os << "t,n,lhs,rhs,holds\n";
      bool ok = true;
      for (double t : ts) {
        for (int64_t k : ns) {
          double lhs = 0.0;
          double rhs = 0.0;
          check(dft_chen_bound_check(t, k, &lhs, &rhs), "chen-check");
          ok = ok && lhs <= rhs;
          os << num(t) << ',' << k << ',' << num(lhs) << ',' << num(rhs) << ',' << (lhs <= rhs ? "true" : "false") << '\n';
        }
      }
      emit(os.str(), common.out);
      return ok ? 0 : 1;
    }

    if (*verify) {
      dft_suite_config suite;
      dft_suite_config_default(&suite);
      suite.quadrature = cfg;
      suite.seed = *seed;
      if (urn_reps > 0) suite.urn_replications = urn_reps;
      char* json = nullptr;
      int passed = 0;
      check(dft_verify(&suite, criterion, &json, &passed), "verify");
      emit(take(json), common.out);
      std::cerr << (passed ? "all checks passed\n" : "some checks did not pass\n");
      return passed ? 0 : 1;
    }

    if (*constant) {
      std::istringstream in(read_file(table));
      std::string line;
      std::ostringstream os;
      os << "alpha,beta,c_alpha_beta,external,ratio\n";
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.find_first_of("0123456789") != 0) continue;
        const std::vector<double> row = parse_reals(line, "--table");
        if (row.size() != 3) throw Failure("--table: each row needs alpha,beta,external");
        dft_measure* raw = nullptr;
        check(dft_measure_beta(row[0], row[1], &raw), "constant-ratio");
        const Measure mu(raw);
        double c = 0.0;
        double ratio = 0.0;
        check(dft_bound_constants(mu.get(), &cfg, 0, nullptr, nullptr, &c), "constant-ratio");
        check(dft_compare_constant(mu.get(), row[2], &ratio), "constant-ratio");
        os << num(row[0]) << ',' << num(row[1]) << ',' << num(c) << ',' << num(row[2]) << ',' << num(ratio) << '\n';
      }
      emit(os.str(), common.out);
      return 0;
    }
  } catch (const Failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
