#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "json.hpp"
#include "qwalk/coin.hpp"
#include "qwalk/localization.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

// Shortest text that round-trips through strtod (17 significant digits).
std::string format_double(double value);

// CSV writers. Headers: "m,p", "k,omega1,omega2,omega3,v1,v2,v3", "t,p0".
void write_distribution_csv(std::ostream& out, const ProbabilityDistribution& dist);
void write_dispersion_csv(std::ostream& out, const DispersionTable& table);
void write_origin_series_csv(std::ostream& out, std::span<const double> series);

nlohmann::json dispersion_to_json(const DispersionTable& table);

void to_json(nlohmann::json& j, const ProbabilityDistribution& dist);
void from_json(const nlohmann::json& j, ProbabilityDistribution& dist);

void to_json(nlohmann::json& j, const PeakVelocityResult& result);
void from_json(const nlohmann::json& j, PeakVelocityResult& result);

void to_json(nlohmann::json& j, const LocalizationReport& report);
void from_json(const nlohmann::json& j, LocalizationReport& report);

// {family, parameter, matrix: [[re, im] x 9, row-major]}
void to_json(nlohmann::json& j, const Coin& coin);
Coin coin_from_json(const nlohmann::json& j);

}  // namespace qwalk

namespace nlohmann {
template <>
struct adl_serializer<qwalk::Coin> {
  static qwalk::Coin from_json(const json& j) { return qwalk::coin_from_json(j); }
  static void to_json(json& j, const qwalk::Coin& coin) { qwalk::to_json(j, coin); }
};
}  // namespace nlohmann
