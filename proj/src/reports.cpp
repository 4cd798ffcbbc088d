#include "mpre/reports.hpp"

#include <iomanip>
#include <sstream>

namespace mpre {

namespace {

std::string fixed(double v, int prec = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(4) << v;
  return os.str();
}

}  // namespace

nlohmann::json report_json(const RateReport& r) {
  return {{"study", r.study},
          {"exponent", r.exponent},
          {"levels", r.levels},
          {"errors", r.errors},
          {"fitted_slope", r.fitted_slope},
          {"slope_stderr", r.slope_stderr},
          {"target_slope", r.target_slope},
          {"n_seeds", r.n_seeds},
          {"master_seed", r.master_seed},
          {"degenerate", r.degenerate}};
}

nlohmann::json report_json(const HolderReport& r) {
  return {{"window", {r.window_lo, r.window_hi}},
          {"j_min", r.j_min},
          {"j_max", r.j_max},
          {"oscillations", r.oscillations},
          {"pair_counts", r.pair_counts},
          {"estimate", r.estimate},
          {"degenerate", r.degenerate},
          {"min_exponent", r.min_exponent}};
}

nlohmann::json report_json(const RegularityReport& r) {
  nlohmann::json windows = nlohmann::json::array();
  for (const auto& w : r.windows) {
    nlohmann::json j = report_json(w.report);
    j["gap"] = w.gap;
    j["pass"] = w.pass;
    windows.push_back(std::move(j));
  }
  return {{"exponent", r.exponent},
          {"tolerance", r.tolerance},
          {"windows", std::move(windows)}};
}

nlohmann::json report_json(const MomentReport& r) {
  return {{"exponent", r.exponent},
          {"separations", r.separations},
          {"mean_square", r.mean_square},
          {"fitted_slope", r.fitted_slope},
          {"slope_stderr", r.slope_stderr},
          {"n_seeds", r.n_seeds},
          {"ref_level", r.ref_level},
          {"master_seed", r.master_seed},
          {"degenerate", r.degenerate}};
}

nlohmann::json report_json(const ConvergenceReport& r) {
  return {{"exponent", r.exponent},
          {"seed", r.seed},
          {"ref_level", r.ref_level},
          {"grid_level", r.grid_level},
          {"levels", r.levels},
          {"tilde_sup", r.tilde_sup},
          {"hat_sup", r.hat_sup}};
}

nlohmann::json report_json(const MeanSquareHolderReport& r) {
  return {{"separations", r.separations},
          {"mean_square", r.mean_square},
          {"fitted_slope", r.fitted_slope},
          {"slope_stderr", r.slope_stderr},
          {"degenerate", r.degenerate},
          {"rho_target", r.rho_target},
          {"n_seeds", r.n_seeds}};
}

std::string report_text(const RateReport& r) {
  std::ostringstream os;
  os << "L1 rate study  exponent=" << r.exponent << "  seeds=" << r.n_seeds
     << "  master_seed=" << r.master_seed << "\n";
  os << "  J      mean|X^J - X~^J|\n";
  for (std::size_t i = 0; i < r.levels.size(); ++i)
    os << "  " << std::setw(2) << r.levels[i] << "     " << sci(r.errors[i])
       << "\n";
  if (r.degenerate)
    os << "  slope: degenerate (zero errors)\n";
  else
    os << "  fitted slope " << fixed(r.fitted_slope, 4) << " +- "
       << fixed(r.slope_stderr, 4) << "  (target <= " << fixed(r.target_slope, 4)
       << ")\n";
  return os.str();
}

std::string report_text(const RegularityReport& r) {
  std::ostringstream os;
  os << "Holder lower-bound check  exponent=" << r.exponent
     << "  tolerance=" << fixed(r.tolerance, 2) << "\n";
  os << "  window           estimate   min_A     gap      pass\n";
  for (const auto& w : r.windows) {
    os << "  [" << fixed(w.report.window_lo, 3) << "," << fixed(w.report.window_hi, 3)
       << "]   " << fixed(w.report.estimate, 4) << "     "
       << fixed(w.report.min_exponent, 4) << "   " << std::setw(7)
       << fixed(w.gap, 4) << "   " << (w.pass ? "yes" : "NO")
       << (w.report.degenerate ? " (degenerate)" : "") << "\n";
  }
  return os.str();
}

std::string report_text(const MomentReport& r) {
  std::ostringstream os;
  os << "Second-moment scaling  exponent=" << r.exponent
     << "  seeds=" << r.n_seeds << "  ref_level=" << r.ref_level << "\n";
  os << "  separation     E|X(t'')-X(t')|^2\n";
  for (std::size_t i = 0; i < r.separations.size(); ++i)
    os << "  " << sci(r.separations[i]) << "     " << sci(r.mean_square[i])
       << "\n";
  if (r.degenerate)
    os << "  slope: degenerate\n";
  else
    os << "  fitted slope " << fixed(r.fitted_slope, 4) << " +- "
       << fixed(r.slope_stderr, 4) << "\n";
  return os.str();
}

std::string report_text(const ConvergenceReport& r) {
  std::ostringstream os;
  os << "Single-path convergence  exponent=" << r.exponent
     << "  seed=" << r.seed << "  reference level=" << r.ref_level
     << "  grid level=" << r.grid_level << "\n";
  os << "  J      sup|X~^J - ref|    sup|X^^J - ref|\n";
  for (std::size_t i = 0; i < r.levels.size(); ++i)
    os << "  " << std::setw(2) << r.levels[i] << "     " << sci(r.tilde_sup[i])
       << "        " << sci(r.hat_sup[i]) << "\n";
  return os.str();
}

}  // namespace mpre
