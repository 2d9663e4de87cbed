#include "qwalk/io.hpp"

#include <cstdio>
#include <ostream>

#include "qwalk/errors.hpp"

namespace qwalk {

using nlohmann::json;

namespace {

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw DomainError("complex numbers are encoded as [re, im]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_distribution_csv(std::ostream& out, const ProbabilityDistribution& dist) {
  out << "m,p\n";
  for (std::size_t i = 0; i < dist.p.size(); ++i) {
    out << dist.m_min + static_cast<long>(i) << ',' << format_double(dist.p[i]) << '\n';
  }
}

void write_dispersion_csv(std::ostream& out, const DispersionTable& table) {
  std::array<std::vector<double>, 3> velocity;
  for (int j = 0; j < 3; ++j) velocity[j] = group_velocity(table, j);
  out << "k,omega1,omega2,omega3,v1,v2,v3\n";
  for (std::size_t s = 0; s < table.size(); ++s) {
    out << format_double(table.k[s]);
    for (int j = 0; j < 3; ++j) out << ',' << format_double(table.omega[j][s]);
    for (int j = 0; j < 3; ++j) out << ',' << format_double(velocity[j][s]);
    out << '\n';
  }
}

void write_origin_series_csv(std::ostream& out, std::span<const double> series) {
  out << "t,p0\n";
  for (std::size_t t = 0; t < series.size(); ++t) out << t << ',' << format_double(series[t]) << '\n';
}

json dispersion_to_json(const DispersionTable& table) {
  json omega = json::array();
  json velocity = json::array();
  for (int j = 0; j < 3; ++j) {
    omega.push_back(table.omega[j]);
    velocity.push_back(group_velocity(table, j));
  }
  return {{"k", table.k}, {"omega", omega}, {"group_velocity", velocity}};
}

void to_json(json& j, const ProbabilityDistribution& dist) {
  j = {{"time", dist.time}, {"m_min", dist.m_min}, {"m_max", dist.m_max()}, {"p", dist.p}};
}

void from_json(const json& j, ProbabilityDistribution& dist) {
  j.at("time").get_to(dist.time);
  j.at("m_min").get_to(dist.m_min);
  j.at("p").get_to(dist.p);
  if (j.contains("m_max") && j.at("m_max").get<long>() != dist.m_max()) {
    throw DomainError("distribution m_max does not match the number of samples");
  }
}

void to_json(json& j, const PeakVelocityResult& result) {
  j = {{"v_left", result.v_left},
       {"v_right", result.v_right},
       {"k0", result.k0 ? json(*result.k0) : json(nullptr)},
       {"method", to_string(result.method)}};
}

void from_json(const json& j, PeakVelocityResult& result) {
  j.at("v_left").get_to(result.v_left);
  j.at("v_right").get_to(result.v_right);
  const auto& k0 = j.at("k0");
  result.k0 = k0.is_null() ? std::nullopt : std::optional<double>(k0.get<double>());
  result.method = velocity_method_from_string(j.at("method").get<std::string>());
}

void to_json(json& j, const LocalizationReport& report) {
  j = {{"series", report.series},
       {"cesaro_windows", {report.cesaro_windows.first, report.cesaro_windows.second}},
       {"trapping_estimate", report.trapping_estimate},
       {"converged", report.converged},
       {"flat_band", report.flat_band},
       {"flat_band_eigenvalue",
        report.flat_band_eigenvalue ? complex_to_json(*report.flat_band_eigenvalue) : json(nullptr)},
       {"trapping_absent_despite_flat_band", report.trapping_absent_despite_flat_band}};
}

void from_json(const json& j, LocalizationReport& report) {
  j.at("series").get_to(report.series);
  const auto& windows = j.at("cesaro_windows");
  report.cesaro_windows = {windows.at(0).get<double>(), windows.at(1).get<double>()};
  j.at("trapping_estimate").get_to(report.trapping_estimate);
  j.at("converged").get_to(report.converged);
  j.at("flat_band").get_to(report.flat_band);
  const auto& eigenvalue = j.at("flat_band_eigenvalue");
  report.flat_band_eigenvalue = eigenvalue.is_null() ? std::nullopt : std::optional(complex_from_json(eigenvalue));
  j.at("trapping_absent_despite_flat_band").get_to(report.trapping_absent_despite_flat_band);
}

void to_json(json& j, const Coin& coin) {
  json entries = json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) entries.push_back(complex_to_json(coin.matrix()(r, c)));
  }
  j = {{"family", to_string(coin.family())},
       {"parameter", coin.parameter() ? json(*coin.parameter()) : json(nullptr)},
       {"matrix", entries}};
}

Coin coin_from_json(const json& j) {
  const auto& entries = j.at("matrix");
  if (!entries.is_array() || entries.size() != 9) throw DomainError("coin matrix must list 9 [re, im] entries");
  CoinMatrix m;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m(r, c) = complex_from_json(entries.at(static_cast<std::size_t>(3 * r + c)));
  }
  const CoinFamily family = j.contains("family") ? coin_family_from_string(j.at("family").get<std::string>())
                                                 : CoinFamily::Custom;
  std::optional<double> parameter;
  if (j.contains("parameter") && !j.at("parameter").is_null()) parameter = j.at("parameter").get<double>();
  return Coin(m, family, parameter);
}

}  // namespace qwalk
