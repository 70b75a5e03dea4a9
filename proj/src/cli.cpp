#include "esslab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <stdexcept>

#include "esslab/experiments.hpp"
#include "esslab/report.hpp"

namespace esslab::cli {

namespace {

struct Options {
  std::string command;
  std::string dist;
  std::string n_list = "2";
  long trials = 1000;
  std::uint64_t seed = 0;
  int max_support = 2;
  std::string out;
  std::string format = "csv";
  std::string plot_out;
  int threads = 0;
  // fu-specific
  long pairs = 100000;
  int grid_points = 512;
  int check_n = 50;
  int quad_points = 256;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::vector<int> parse_n_list(const std::string& text, bool allow_list) {
  std::vector<int> ns;
  for (const auto& tok : split_list(text)) {
    try {
      size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      ns.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad value '" + tok + "' in --n");
    }
  }
  if (ns.empty()) throw std::invalid_argument("--n needs at least one value");
  if (!allow_list && ns.size() > 1) {
    throw std::invalid_argument("this command takes a single --n value");
  }
  return ns;
}

int effective_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("ESSLAB_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;  // auto
}

void write_table(const ResultTable& table, const Options& opt) {
  std::filesystem::path path(opt.out);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + opt.out);
  if (opt.format == "csv") {
    write_csv(table, out);
  } else {
    write_json(table, out);
  }
  if (!out.good()) throw std::runtime_error("failed writing output file: " + opt.out);
}

void write_plot(const std::vector<PlotEntry>& entries, const Options& opt) {
  if (opt.plot_out.empty()) return;
  std::filesystem::path path(opt.plot_out);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open plot output file: " + opt.plot_out);
  write_csv(build_plot_table(entries), out);
}

// Wall-clock details live only in the sidecar so result files stay
// byte-identical across reruns of the same configuration.
void write_meta(const Options& opt, const std::vector<std::string>& dists,
                const std::vector<int>& ns, double elapsed_seconds,
                const nlohmann::ordered_json& extras) {
  nlohmann::ordered_json meta;
  meta["command"] = opt.command;
  meta["dist"] = dists;
  meta["n"] = ns;
  meta["trials"] = opt.trials;
  meta["seed"] = opt.seed;
  meta["max_support"] = opt.max_support;
  meta["format"] = opt.format;
  meta["threads_requested"] = opt.threads;
  char stamp[32];
  std::time_t now = std::time(nullptr);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  meta["created_utc"] = stamp;
  meta["elapsed_seconds"] = elapsed_seconds;
  if (!extras.empty()) meta["extras"] = extras;
  std::ofstream out(opt.out + ".meta.json", std::ios::binary);
  if (out) out << meta.dump(2) << '\n';
}

Cell real(double v) { return Cell{v}; }
Cell integer(long long v) { return Cell{v}; }

int run_command(const Options& opt) {
  const bool multi_dist = opt.command == "sweep";
  const bool multi_n = opt.command != "chenstein" && opt.command != "fu";
  const auto dist_tokens = multi_dist ? split_list(opt.dist) : std::vector<std::string>{opt.dist};
  std::vector<DistributionSpec> specs;
  for (const auto& tok : dist_tokens) specs.push_back(parse_distribution(tok));
  const auto ns = parse_n_list(opt.n_list, multi_n);

  const int min_n = opt.command == "ess" || opt.command == "sweep" ? 1 : 2;
  for (int n : ns) {
    if (n < min_n) throw std::invalid_argument("--n must be >= " + std::to_string(min_n));
  }
  if (opt.trials < 1) throw std::invalid_argument("--trials must be >= 1");
  if (opt.max_support < 1 || opt.max_support > 3) {
    throw std::invalid_argument("--max-support must be in [1, 3]");
  }
  if (opt.format != "csv" && opt.format != "json") {
    throw std::invalid_argument("--format must be csv or json");
  }

  const int threads = effective_threads(opt.threads);
  const auto t0 = std::chrono::steady_clock::now();

  ResultTable table;
  std::vector<PlotEntry> plot;
  nlohmann::ordered_json extras;

  const auto seed_cell = Cell{static_cast<unsigned long long>(opt.seed)};

  if (opt.command == "ess" || opt.command == "sweep") {
    const bool sweep = opt.command == "sweep";
    table.columns = sweep
        ? std::vector<std::string>{"seed", "dist", "n", "trials", "mu", "stderr_mu",
                                   "mean_S1", "P_exist_le2"}
        : std::vector<std::string>{"seed", "dist", "n", "trials", "mean_S1", "mean_S2",
                                   "stderr_S2", "P_exist_le2"};
    if (!sweep && opt.max_support >= 3) table.columns.push_back("mean_S3");
    for (const auto& spec : specs) {
      for (int n : ns) {
        TrialPlan plan{spec, n, opt.trials, opt.seed, opt.max_support};
        const auto r = census_experiment(plan, threads);
        std::vector<Cell> row{seed_cell, spec.name(), integer(n), integer(opt.trials)};
        if (sweep) {
          row.insert(row.end(), {real(r.mean_s2.mean), real(r.mean_s2.std_error),
                                 real(r.mean_s1.mean), real(r.p_le2.mean)});
        } else {
          row.insert(row.end(), {real(r.mean_s1.mean), real(r.mean_s2.mean),
                                 real(r.mean_s2.std_error), real(r.p_le2.mean)});
          if (opt.max_support >= 3) row.push_back(real(r.mean_s3.mean));
        }
        table.rows.push_back(std::move(row));
        plot.push_back({n, "mu", r.mean_s2});
        std::printf("%s dist=%s n=%d trials=%ld mean_S1=%.6g mean_S2=%.6g (se %.3g) "
                    "P(S1+S2>0)=%.6g\n",
                    opt.command.c_str(), spec.name().c_str(), n, opt.trials,
                    r.mean_s1.mean, r.mean_s2.mean, r.mean_s2.std_error, r.p_le2.mean);
      }
    }
  } else if (opt.command == "hull") {
    table.columns = {"seed", "dist", "n", "trials", "E_V", "stderr_V", "E_V0",
                     "stderr_V0", "P_V0_zero", "stderr_P_V0_zero", "P_V_eq_4",
                     "stderr_P_V_eq_4"};
    for (const auto& spec : specs) {
      for (int n : ns) {
        TrialPlan plan{spec, n, opt.trials, opt.seed};
        const auto r = hull_experiment(plan, threads);
        table.rows.push_back({seed_cell, spec.name(), integer(n), integer(opt.trials),
                              real(r.e_v.mean), real(r.e_v.std_error), real(r.e_v0.mean),
                              real(r.e_v0.std_error), real(r.p_v0_zero.mean),
                              real(r.p_v0_zero.std_error), real(r.p_v_eq_4.mean),
                              real(r.p_v_eq_4.std_error)});
        plot.push_back({n, "E_V", r.e_v});
        plot.push_back({n, "E_V0", r.e_v0});
        plot.push_back({n, "P_V0_zero", r.p_v0_zero});
        plot.push_back({n, "P_V_eq_4", r.p_v_eq_4});
        std::printf("hull dist=%s n=%d trials=%ld E_V=%.6g E_V0=%.6g P(V0=0)=%.6g "
                    "P(V=4)=%.6g\n",
                    spec.name().c_str(), n, opt.trials, r.e_v.mean, r.e_v0.mean,
                    r.p_v0_zero.mean, r.p_v_eq_4.mean);
      }
    }
  } else if (opt.command == "gamma") {
    table.columns = {"seed", "dist", "n", "trials", "p_gamma", "stderr_p_gamma",
                     "mu_from_gamma", "stderr_mu_from_gamma"};
    for (const auto& spec : specs) {
      for (int n : ns) {
        TrialPlan plan{spec, n, opt.trials, opt.seed};
        const auto r = estimate_gamma_prob(plan, threads);
        const double m = 0.5 * static_cast<double>(n) * (n - 1);
        table.rows.push_back({seed_cell, spec.name(), integer(n), integer(opt.trials),
                              real(r.mean), real(r.std_error), real(m * r.mean),
                              real(m * r.std_error)});
        plot.push_back({n, "p_gamma", r});
        std::printf("gamma dist=%s n=%d trials=%ld p_gamma=%.6g mu_from_gamma=%.6g\n",
                    spec.name().c_str(), n, opt.trials, r.mean, m * r.mean);
      }
    }
  } else if (opt.command == "exist") {
    table.columns = {"seed", "dist", "n", "trials", "P_pure", "stderr_P_pure",
                     "P_two_point", "stderr_P_two_point", "P_le2", "stderr_P_le2"};
    for (const auto& spec : specs) {
      for (int n : ns) {
        TrialPlan plan{spec, n, opt.trials, opt.seed};
        const auto r = existence_experiment(plan, threads);
        table.rows.push_back({seed_cell, spec.name(), integer(n), integer(opt.trials),
                              real(r.p_pure.mean), real(r.p_pure.std_error),
                              real(r.p_two_point.mean), real(r.p_two_point.std_error),
                              real(r.p_le2.mean), real(r.p_le2.std_error)});
        plot.push_back({n, "P_pure", r.p_pure});
        plot.push_back({n, "P_two_point", r.p_two_point});
        plot.push_back({n, "P_le2", r.p_le2});
        std::printf("exist dist=%s n=%d trials=%ld P_pure=%.6g P_two_point=%.6g "
                    "P_le2=%.6g\n",
                    spec.name().c_str(), n, opt.trials, r.p_pure.mean,
                    r.p_two_point.mean, r.p_le2.mean);
      }
    }
  } else if (opt.command == "chenstein") {
    table.columns = {"seed", "dist", "n", "trials", "lambda", "b1", "b2", "bound",
                     "empirical_l1", "mc_error_l1"};
    const auto& spec = specs.front();
    const int n = ns.front();
    TrialPlan plan{spec, n, opt.trials, opt.seed};
    const auto census = census_experiment(plan, threads);
    const double m = 0.5 * static_cast<double>(n) * (n - 1);
    const double p_gamma = census.mean_s2.mean / m;
    const double p_joint =
        n > 2 ? census.adjacent_pair_rate / (m * (2.0 * n - 4.0)) : 0.0;
    const auto report = chen_stein_report(n, p_gamma, p_joint, census.pmf_s2);
    // Propagated Monte Carlo error: per-bin sampling noise of the empirical
    // pmf plus the effect of the lambda estimate on the Poisson reference
    // (the l1 distance moves by at most 2 per unit of lambda).
    double mc_error = 2.0 * census.mean_s2.std_error;
    for (const auto& [k, p] : census.pmf_s2) {
      mc_error += std::sqrt(p * (1.0 - p) / census.trials);
    }
    table.rows.push_back({seed_cell, spec.name(), integer(n), integer(opt.trials),
                          real(report.lambda), real(report.b1), real(report.b2),
                          real(report.bound), real(report.empirical_l1), real(mc_error)});
    extras["p_gamma"] = p_gamma;
    extras["p_joint"] = p_joint;
    std::printf("chenstein dist=%s n=%d trials=%ld lambda=%.6g bound=%.6g "
                "empirical_l1=%.6g mc_error=%.3g\n",
                spec.name().c_str(), n, opt.trials, report.lambda, report.bound,
                report.empirical_l1, mc_error);
  } else if (opt.command == "fu") {
    table.columns = {"seed", "dist", "pairs", "u", "F_U"};
    const auto& spec = specs.front();
    if (opt.grid_points < 2) throw std::invalid_argument("--grid-points must be >= 2");
    std::vector<double> grid(opt.grid_points);
    for (int g = 0; g < opt.grid_points; ++g) {
      grid[g] = static_cast<double>(g + 1) / opt.grid_points;
    }
    RngStream rng(RngStream::for_trial(opt.seed, 0).key());
    const auto r =
        fu_curve(spec, opt.pairs, grid, opt.check_n, rng, opt.quad_points, threads);
    for (size_t g = 0; g < r.grid.size(); ++g) {
      table.rows.push_back({seed_cell, spec.name(), integer(opt.pairs), real(r.grid[g]),
                            real(r.cdf[g])});
    }
    extras["fu_one_minus"] = r.fu_one_minus;
    extras["lemma5_check"] = r.lemma5_check;
    extras["check_n"] = r.check_n;
    extras["grid_points"] = opt.grid_points;
    extras["quad_points"] = opt.quad_points;
    std::printf("fu dist=%s pairs=%ld F_U(1-)=%.6g lemma5_check(n=%d)=%.6g\n",
                spec.name().c_str(), opt.pairs, r.fu_one_minus, r.check_n,
                r.lemma5_check);
  } else {
    throw std::invalid_argument("unknown command '" + opt.command + "'");
  }

  write_table(table, opt);
  write_plot(plot, opt);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_meta(opt, dist_tokens, ns, elapsed, extras);
  return 0;
}

}  // namespace

int run(std::vector<std::string> args) {
  Options opt;
  CLI::App app{"Monte Carlo laboratory for ESS counts in random games and "
               "convex hulls of random planar points"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub, bool with_n, bool with_trials) {
    sub->add_option("--dist", opt.dist, "distribution grammar, e.g. exp, weibull:0.5, sym(pareto:1)")
        ->required();
    if (with_n) sub->add_option("--n", opt.n_list, "game/sample size (comma list where supported)")->required();
    if (with_trials) sub->add_option("--trials", opt.trials, "Monte Carlo trials per cell");
    sub->add_option("--seed", opt.seed, "master seed (mandatory: runs are reproducible)")
        ->required();
    sub->add_option("--out", opt.out, "results file path")->required();
    sub->add_option("--format", opt.format, "csv or json");
    sub->add_option("--threads", opt.threads, "worker cap; 0 = ESSLAB_THREADS or auto");
  };

  auto* ess = app.add_subcommand("ess", "census of pure and mixed ESS counts");
  add_common(ess, true, true);
  ess->add_option("--max-support", opt.max_support, "largest support size to census (1-3)");
  ess->add_option("--plot-out", opt.plot_out, "long-format plot CSV");

  auto* sweep = app.add_subcommand("sweep", "ESS census over a (dist, n) grid");
  add_common(sweep, true, true);
  sweep->add_option("--max-support", opt.max_support, "largest support size to census (1-3)");
  sweep->add_option("--plot-out", opt.plot_out, "long-format plot CSV");

  auto* hull = app.add_subcommand("hull", "convex hull vertex statistics");
  add_common(hull, true, true);
  hull->add_option("--plot-out", opt.plot_out, "long-format plot CSV");

  auto* gamma = app.add_subcommand("gamma", "base pair-event probability");
  add_common(gamma, true, true);
  gamma->add_option("--plot-out", opt.plot_out, "long-format plot CSV");

  auto* exist = app.add_subcommand("exist", "ESS existence probabilities");
  add_common(exist, true, true);
  exist->add_option("--plot-out", opt.plot_out, "long-format plot CSV");

  auto* chen = app.add_subcommand("chenstein", "Poisson approximation bound report");
  add_common(chen, true, true);

  auto* fu = app.add_subcommand("fu", "empirical distribution of the pair statistic U");
  add_common(fu, false, false);
  fu->add_option("--pairs", opt.pairs, "number of point pairs");
  fu->add_option("--grid-points", opt.grid_points, "CDF grid resolution");
  fu->add_option("--check-n", opt.check_n, "n used in the integral cross-check");
  fu->add_option("--quad", opt.quad_points, "quadrature order");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  for (auto* sub : {ess, sweep, hull, gamma, exist, chen, fu}) {
    if (sub->parsed()) opt.command = sub->get_name();
  }

  try {
    return run_command(opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace esslab::cli
