#include "mpre/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mpre/analysis.hpp"
#include "mpre/errors.hpp"
#include "mpre/parallel.hpp"
#include "mpre/reports.hpp"
#include "mpre/rng.hpp"

namespace mpre::cli {

namespace {

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

std::string str17(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw io_error("write failed for " + path);
}

std::string echo_csv(const std::string& command, const ConfigEcho& config) {
  std::ostringstream os;
  os << "# mpre " << command << "\n";
  for (const auto& [k, v] : config) os << "# " << k << "=" << v << "\n";
  return os.str();
}

nlohmann::json echo_json(const ConfigEcho& config) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : config) j[k] = v;
  return j;
}

std::vector<std::pair<double, double>> parse_windows(const std::string& text) {
  std::vector<std::pair<double, double>> out;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    const auto sep = token.find(':');
    if (sep == std::string::npos)
      throw std::invalid_argument("window must be <lo>:<hi>, got '" + token +
                                  "'");
    try {
      out.emplace_back(std::stod(token.substr(0, sep)),
                       std::stod(token.substr(sep + 1)));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("bad window '" + token + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument("no windows given");
  return out;
}

std::vector<double> parse_csv_doubles(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    try {
      out.push_back(std::stod(token));
    } catch (...) {
      throw std::invalid_argument("bad number '" + token + "'");
    }
  }
  return out;
}

struct SimulateOpts {
  std::string scheme = "hat";
  int level = 12;
  std::uint64_t seed = 1;
  std::string exponent = "const:0.7";
  std::string times;  // empty -> dyadic:min(level,10)
  std::string out = "-";
  std::string format = "csv";
  std::string plot_data;
  std::string dump_increments;
  std::string use_increments;
  std::string export_exponent;
  int threads = 1;
};

int run_simulate(const SimulateOpts& opt) {
  const ExponentSpec spec = ExponentSpec::parse(opt.exponent);
  const std::string times_spec =
      opt.times.empty() ? "dyadic:" + std::to_string(std::min(opt.level, 10))
                        : opt.times;
  std::vector<double> times = parse_time_grid(times_spec);

  BrownianPath path = opt.use_increments.empty()
                          ? sample_brownian(opt.seed, opt.level)
                          : load_increments(opt.use_increments);
  const ExponentProcess A = spec.realize(path);
  const Scheme scheme = parse_scheme(opt.scheme);

  PathSeries series;
  if (scheme == Scheme::tilde) {
    series = simulate_tilde(path, A, times, opt.threads);
  } else if (scheme == Scheme::hat) {
    series = simulate_hat(path, A, times, opt.threads);
  } else {
    const KernelContext ctx{A, {.abs_tol = 1e-9}};
    series = simulate_haar_partial(haar_coefficients(path), ctx, times,
                                   path.level, opt.threads);
    series.seed = path.seed;
  }

  ConfigEcho config{{"scheme", scheme_name(scheme)},
                    {"J", std::to_string(path.level)},
                    {"seed", std::to_string(path.seed)},
                    {"exponent", spec.str()},
                    {"times", times_spec},
                    {"format", opt.format},
                    {"threads", std::to_string(opt.threads)}};

  if (opt.format == "csv") {
    std::ostringstream os;
    os << echo_csv("simulate", config);
    os << "t,value,scheme,J,seed\n";
    for (std::size_t i = 0; i < series.times.size(); ++i)
      os << str17(series.times[i]) << ',' << str17(series.values[i]) << ','
         << scheme_name(series.scheme) << ',' << series.level << ','
         << series.seed << "\n";
    write_output(opt.out, os.str());
  } else if (opt.format == "json") {
    nlohmann::json j{{"config", echo_json(config)},
                     {"t", series.times},
                     {"value", series.values}};
    write_output(opt.out, j.dump(2) + "\n");
  } else {
    throw std::invalid_argument("format must be csv or json");
  }

  if (!opt.plot_data.empty()) {
    std::ostringstream os;
    os << echo_csv("simulate --emit-plot-data", config);
    os << "t,value,exponent\n";
    for (std::size_t i = 0; i < series.times.size(); ++i)
      os << str17(series.times[i]) << ',' << str17(series.values[i]) << ','
         << str17(A.eval(series.times[i])) << "\n";
    write_output(opt.plot_data, os.str());
  }
  if (!opt.dump_increments.empty()) save_increments(path, opt.dump_increments);
  if (!opt.export_exponent.empty()) save_exponent_csv(A, opt.export_exponent);
  return 0;
}

struct ConvergenceOpts {
  std::string study = "sup";
  int level_min = 6;
  int level = 12;
  int ref_level = 16;
  int grid_level = 10;
  std::uint64_t master_seed = 1;
  int n_seeds = 200;
  double t_probe = 0.7;
  std::string exponent = "const:0.7";
  std::string anchors = "0.15,0.4,0.65";
  int sep_min = 2;
  int sep_max = 7;
  std::string out;
  std::string format = "json";
  int threads = 1;
};

int run_convergence(const ConvergenceOpts& opt) {
  const ExponentSpec spec = ExponentSpec::parse(opt.exponent);
  ConfigEcho config{{"study", opt.study},
                    {"exponent", spec.str()},
                    {"threads", std::to_string(opt.threads)}};
  nlohmann::json body;
  std::string text;

  if (opt.study == "sup") {
    if (opt.ref_level < opt.level + 4)
      throw std::invalid_argument("J_ref must exceed J by >= 4");
    config.insert(config.end(),
                  {{"j_min", std::to_string(opt.level_min)},
                   {"J", std::to_string(opt.level)},
                   {"J_ref", std::to_string(opt.ref_level)},
                   {"grid_level", std::to_string(opt.grid_level)},
                   {"seed", std::to_string(opt.master_seed)}});
    const ConvergenceReport report = single_path_convergence(
        spec, opt.master_seed, opt.level_min, opt.level, opt.ref_level,
        opt.grid_level, opt.threads);
    body = report_json(report);
    text = report_text(report);
  } else if (opt.study == "l1") {
    config.insert(config.end(),
                  {{"j_min", std::to_string(opt.level_min)},
                   {"J", std::to_string(opt.level)},
                   {"t_probe", str17(opt.t_probe)},
                   {"n_seeds", std::to_string(opt.n_seeds)},
                   {"master_seed", std::to_string(opt.master_seed)}});
    const RateReport report =
        l1_rate_study(spec, opt.level_min, opt.level, opt.t_probe, opt.n_seeds,
                      opt.master_seed, {.abs_tol = 1e-9}, opt.threads);
    body = report_json(report);
    text = report_text(report);
  } else if (opt.study == "moment") {
    std::vector<std::pair<double, double>> pairs;
    for (double anchor : parse_csv_doubles(opt.anchors))
      for (int j = opt.sep_min; j <= opt.sep_max; ++j)
        pairs.emplace_back(anchor, anchor + std::ldexp(1.0, -j));
    config.insert(config.end(),
                  {{"anchors", opt.anchors},
                   {"sep_min", std::to_string(opt.sep_min)},
                   {"sep_max", std::to_string(opt.sep_max)},
                   {"J_ref", std::to_string(opt.ref_level)},
                   {"n_seeds", std::to_string(opt.n_seeds)},
                   {"master_seed", std::to_string(opt.master_seed)}});
    const MomentReport report = kolmogorov_moment_check(
        spec, pairs, opt.n_seeds, opt.ref_level, opt.master_seed, opt.threads);
    body = report_json(report);
    text = report_text(report);
  } else {
    throw std::invalid_argument("study must be sup, l1, or moment");
  }

  std::cout << text;
  if (!opt.out.empty()) {
    if (opt.format == "json") {
      nlohmann::json j{{"config", echo_json(config)}, {"report", body}};
      write_output(opt.out, j.dump(2) + "\n");
    } else if (opt.format == "text") {
      write_output(opt.out, echo_csv("convergence", config) + text);
    } else {
      throw std::invalid_argument("format must be json or text");
    }
  }
  return 0;
}

struct HolderOpts {
  int level = 14;
  int grid_level = 12;
  int j_min = 4;
  int j_max = 10;
  std::string windows = "0:0.25,0.25:0.5,0.5:0.75,0.75:1";
  std::string exponent = "const:0.7";
  std::string scheme = "hat";
  std::uint64_t master_seed = 1;
  int n_seeds = 1;
  double tolerance = 0.1;
  std::string out;
  std::string format = "json";
  int threads = 1;
};

int run_holder(const HolderOpts& opt) {
  const ExponentSpec spec = ExponentSpec::parse(opt.exponent);
  const auto windows = parse_windows(opt.windows);
  const Scheme scheme = parse_scheme(opt.scheme);
  const std::vector<double> grid = dyadic_grid(opt.grid_level);

  ConfigEcho config{{"J", std::to_string(opt.level)},
                    {"grid_level", std::to_string(opt.grid_level)},
                    {"j_min", std::to_string(opt.j_min)},
                    {"j_max", std::to_string(opt.j_max)},
                    {"windows", opt.windows},
                    {"exponent", spec.str()},
                    {"scheme", scheme_name(scheme)},
                    {"master_seed", std::to_string(opt.master_seed)},
                    {"n_seeds", std::to_string(opt.n_seeds)},
                    {"tolerance", str17(opt.tolerance)},
                    {"threads", std::to_string(opt.threads)}};

  nlohmann::json per_seed = nlohmann::json::array();
  std::vector<double> mean_estimate(windows.size(), 0.0);
  std::vector<int> pass_count(windows.size(), 0);
  for (int i = 0; i < opt.n_seeds; ++i) {
    const std::uint64_t seed =
        opt.n_seeds == 1 ? opt.master_seed
                         : derive_seed(opt.master_seed, static_cast<std::uint64_t>(i));
    const BrownianPath path = sample_brownian(seed, opt.level);
    const ExponentProcess A = spec.realize(path);
    PathSeries series = scheme == Scheme::tilde
                            ? simulate_tilde(path, A, grid, opt.threads)
                            : simulate_hat(path, A, grid, opt.threads);
    const RegularityReport report = check_regularity_lowerbound(
        series, A, windows, opt.j_min, opt.j_max, opt.tolerance);
    std::cout << "seed " << seed << "\n" << report_text(report);
    nlohmann::json j = report_json(report);
    j["seed"] = seed;
    per_seed.push_back(std::move(j));
    for (std::size_t w = 0; w < windows.size(); ++w) {
      mean_estimate[w] += report.windows[w].report.estimate;
      pass_count[w] += report.windows[w].pass ? 1 : 0;
    }
  }

  nlohmann::json summary = nlohmann::json::array();
  std::cout << "summary over " << opt.n_seeds << " seed(s)\n";
  for (std::size_t w = 0; w < windows.size(); ++w) {
    const double mean = mean_estimate[w] / opt.n_seeds;
    std::cout << "  window [" << windows[w].first << "," << windows[w].second
              << "]: mean estimate " << mean << ", pass " << pass_count[w]
              << "/" << opt.n_seeds << "\n";
    summary.push_back({{"window", {windows[w].first, windows[w].second}},
                       {"mean_estimate", mean},
                       {"pass_count", pass_count[w]}});
  }

  if (!opt.out.empty()) {
    nlohmann::json j{{"config", echo_json(config)},
                     {"seeds", std::move(per_seed)},
                     {"summary", std::move(summary)}};
    write_output(opt.out, j.dump(2) + "\n");
  }
  return 0;
}

struct CoeffsOpts {
  int j_max = 6;
  int level = 12;
  std::uint64_t seed = 1;
  std::string exponent = "const:0.7";
  std::string times = "list:0.25,0.5,0.75,1";
  std::string out = "-";
  int threads = 1;
};

int run_coeffs(const CoeffsOpts& opt) {
  const ExponentSpec spec = ExponentSpec::parse(opt.exponent);
  const std::vector<double> times = parse_time_grid(opt.times);
  const BrownianPath path = sample_brownian(opt.seed, opt.level);
  const ExponentProcess A = spec.realize(path);
  const KernelContext ctx{A, {}};

  ConfigEcho config{{"j_max", std::to_string(opt.j_max)},
                    {"J", std::to_string(opt.level)},
                    {"seed", std::to_string(opt.seed)},
                    {"exponent", spec.str()},
                    {"times", opt.times},
                    {"threads", std::to_string(opt.threads)}};
  std::ostringstream os;
  os << echo_csv("coeffs", config);
  os << "j,k,t,inner_product,bound\n";
  for (int j = 0; j <= opt.j_max; ++j) {
    const double bound = std::sqrt(std::ldexp(1.0, -j));
    for (std::int64_t k = 0; k < (std::int64_t{1} << j); ++k)
      for (double t : times)
        os << j << ',' << k << ',' << str17(t) << ','
           << str17(haar_inner_product(ctx, t, j, k)) << ',' << str17(bound)
           << "\n";
  }
  write_output(opt.out, os.str());
  return 0;
}

int run_selftest(int threads) {
  int failures = 0;
  auto report = [&](bool ok, const std::string& name, const std::string& info) {
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << name
              << (info.empty() ? "" : "  " + info) << "\n";
    if (!ok) ++failures;
  };

  // Haar coefficient identity against independently sampled coarser paths.
  {
    bool ok = true;
    for (std::uint64_t seed : {1ull, 2ull}) {
      const BrownianPath path = sample_brownian(seed, 8);
      const HaarCoefficients coeffs = haar_coefficients(path);
      for (int j = 0; j < 8 && ok; ++j) {
        const BrownianPath fine = sample_brownian(seed, j + 1);
        const double scale = std::sqrt(std::ldexp(1.0, j));
        for (std::int64_t k = 0; k < (std::int64_t{1} << j); ++k) {
          const double direct = scale * (fine.increments[2 * k] -
                                         fine.increments[2 * k + 1]);
          if (coeffs.eps[j][k] != direct) {
            ok = false;
            break;
          }
        }
      }
      if (sample_brownian(seed, 0).increments[0] != coeffs.eta0) ok = false;
    }
    report(ok, "haar coefficient identity", "2 seeds, depth 8, exact");
  }

  // Haar partial sum equals the mean-kernel sum (two quadrature routes).
  {
    double worst = 0.0;
    const std::vector<double> grid = dyadic_grid(4);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      for (const char* expo : {"const:0.75", "sin:0.6:0.9:1"}) {
        const ExponentSpec spec = ExponentSpec::parse(expo);
        for (int level = 0; level <= 4; ++level) {
          const BrownianPath path = sample_brownian(seed, level);
          const ExponentProcess A = spec.realize(path);
          const KernelContext ctx{A, {}};
          const HaarCoefficients coeffs =
              level >= 1 ? haar_coefficients(path) : HaarCoefficients{
                               path.increments[0], {}};
          const PathSeries haar =
              simulate_haar_partial(coeffs, ctx, grid, level, threads);
          for (std::size_t i = 0; i < grid.size(); ++i) {
            double acc = 0.0;
            for (std::int64_t l = 0; l < path.cell_count(); ++l)
              acc += mean_kernel(ctx, grid[i], level, l) * path.increments[l];
            worst = std::max(worst, std::abs(haar.values[i] - acc));
          }
        }
      }
    }
    report(worst <= 1e-7, "partial sum vs mean-kernel sum",
           "max |diff| = " + str17(worst));
  }

  // Coefficient magnitude bound on a deterministic pseudo-random sweep.
  {
    const BrownianPath path = sample_brownian(5, 10);
    bool ok = true;
    int checked = 0;
    for (const char* expo : {"sin:0.55:0.95:2", "rl:0.9:0.55:0.95"}) {
      const ExponentSpec spec = ExponentSpec::parse(expo);
      const ExponentProcess A = spec.realize(path);
      const KernelContext ctx{A, {}};
      for (int draw = 0; draw < 250; ++draw) {
        const auto r = philox4x32(
            {kStreamGeneric, 7, static_cast<std::uint32_t>(draw), 0}, {99, 0});
        const double t = (r[0] >> 11) * 0x1.0p-21 * 0.9999999;
        const int j = static_cast<int>(r[1] % 9);
        const auto k = static_cast<std::int64_t>(r[2] % (1u << j));
        const double bound = std::sqrt(std::ldexp(1.0, -j));
        if (std::abs(haar_inner_product(ctx, t, j, k)) > bound) ok = false;
        ++checked;
      }
    }
    report(ok, "coefficient bound sweep",
           std::to_string(checked) + " random (t,j,k)");
  }

  std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  if (failures != 0) throw numeric_error("selftest failed");
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{
      "Simulation and verification toolkit for a multifractional process "
      "with random exponent"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file (flags win)");

  SimulateOpts sim;
  ConvergenceOpts conv;
  HolderOpts hold;
  CoeffsOpts coef;
  int selftest_threads = 1;
  int rc = 0;

  auto* s = app.add_subcommand("simulate", "simulate one path");
  s->add_option("--scheme", sim.scheme, "tilde|hat|haar")->capture_default_str();
  s->add_option("--J", sim.level, "dyadic level of the driving path")
      ->capture_default_str();
  s->add_option("--seed", sim.seed, "path seed")->capture_default_str();
  s->add_option("--exponent", sim.exponent,
                "const:<H> | sin:<a>:<b>:<f> | rl:<H>:<a>:<b>[:indep] | "
                "file:<path>")
      ->capture_default_str();
  s->add_option("--times", sim.times, "dyadic:<level> | list:<csv>");
  s->add_option("--out", sim.out, "output file, - for stdout")
      ->capture_default_str();
  s->add_option("--format", sim.format, "csv|json")->capture_default_str();
  s->add_option("--emit-plot-data", sim.plot_data,
                "also write t,value,exponent triples to this file");
  s->add_option("--dump-increments", sim.dump_increments,
                "write the driving increments as an MPREBM1 dump");
  s->add_option("--use-increments", sim.use_increments,
                "drive the simulation from an MPREBM1 dump");
  s->add_option("--export-exponent", sim.export_exponent,
                "write the realized exponent as s,value CSV");
  s->add_option("--threads", sim.threads, "worker threads")
      ->envname("MPRE_THREADS")
      ->capture_default_str();
  s->callback([&] { rc = run_simulate(sim); });

  auto* c = app.add_subcommand("convergence", "convergence studies");
  c->add_option("--study", conv.study, "sup|l1|moment")->capture_default_str();
  c->add_option("--j-min", conv.level_min, "lowest level")->capture_default_str();
  c->add_option("--J", conv.level, "highest level")->capture_default_str();
  c->add_option("--J-ref", conv.ref_level, "reference level (sup, >= J+4)")
      ->capture_default_str();
  c->add_option("--grid-level", conv.grid_level, "evaluation grid level")
      ->capture_default_str();
  c->add_option("--master-seed", conv.master_seed, "")->capture_default_str();
  c->add_option("--n-seeds", conv.n_seeds, "replicates (l1, moment)")
      ->capture_default_str();
  c->add_option("--t-probe", conv.t_probe, "probe time (l1)")
      ->capture_default_str();
  c->add_option("--exponent", conv.exponent, "")->capture_default_str();
  c->add_option("--anchors", conv.anchors, "moment-pair anchors")
      ->capture_default_str();
  c->add_option("--sep-min", conv.sep_min, "smallest separation level (moment)")
      ->capture_default_str();
  c->add_option("--sep-max", conv.sep_max, "largest separation level (moment)")
      ->capture_default_str();
  c->add_option("--out", conv.out, "report file");
  c->add_option("--format", conv.format, "json|text")->capture_default_str();
  c->add_option("--threads", conv.threads, "worker threads")
      ->envname("MPRE_THREADS")
      ->capture_default_str();
  c->callback([&] { rc = run_convergence(conv); });

  auto* h = app.add_subcommand("holder", "windowed regularity estimation");
  h->add_option("--J", hold.level, "simulation level")->capture_default_str();
  h->add_option("--grid-level", hold.grid_level, "evaluation grid level")
      ->capture_default_str();
  h->add_option("--j-min", hold.j_min, "")->capture_default_str();
  h->add_option("--j-max", hold.j_max, "")->capture_default_str();
  h->add_option("--windows", hold.windows, "comma list of lo:hi")
      ->capture_default_str();
  h->add_option("--exponent", hold.exponent, "")->capture_default_str();
  h->add_option("--scheme", hold.scheme, "tilde|hat")->capture_default_str();
  h->add_option("--master-seed", hold.master_seed, "")->capture_default_str();
  h->add_option("--n-seeds", hold.n_seeds, "")->capture_default_str();
  h->add_option("--tolerance", hold.tolerance, "lower-bound slack")
      ->capture_default_str();
  h->add_option("--out", hold.out, "report file (json)");
  h->add_option("--format", hold.format, "json")->capture_default_str();
  h->add_option("--threads", hold.threads, "worker threads")
      ->envname("MPRE_THREADS")
      ->capture_default_str();
  h->callback([&] { rc = run_holder(hold); });

  auto* k = app.add_subcommand("coeffs", "Haar inner products of the kernel");
  k->add_option("--j-max", coef.j_max, "")->capture_default_str();
  k->add_option("--J", coef.level, "exponent grid level")->capture_default_str();
  k->add_option("--seed", coef.seed, "")->capture_default_str();
  k->add_option("--exponent", coef.exponent, "")->capture_default_str();
  k->add_option("--times", coef.times, "")->capture_default_str();
  k->add_option("--out", coef.out, "")->capture_default_str();
  k->add_option("--threads", coef.threads, "worker threads")
      ->envname("MPRE_THREADS")
      ->capture_default_str();
  k->callback([&] { rc = run_coeffs(coef); });

  auto* t = app.add_subcommand("selftest", "fast invariant suite");
  t->add_option("--threads", selftest_threads, "worker threads")
      ->envname("MPRE_THREADS")
      ->capture_default_str();
  t->callback([&] { rc = run_selftest(selftest_threads); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}

}  // namespace mpre::cli
