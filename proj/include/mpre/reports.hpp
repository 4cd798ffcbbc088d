#pragma once

#include <string>

#include <json.hpp>

#include "mpre/analysis.hpp"
#include "mpre/exponent.hpp"

namespace mpre {

nlohmann::json report_json(const RateReport& report);
nlohmann::json report_json(const HolderReport& report);
nlohmann::json report_json(const RegularityReport& report);
nlohmann::json report_json(const MomentReport& report);
nlohmann::json report_json(const ConvergenceReport& report);
nlohmann::json report_json(const MeanSquareHolderReport& report);

std::string report_text(const RateReport& report);
std::string report_text(const RegularityReport& report);
std::string report_text(const MomentReport& report);
std::string report_text(const ConvergenceReport& report);

}  // namespace mpre
