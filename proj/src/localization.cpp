#include "qwalk/localization.hpp"

#include <algorithm>
#include <numeric>

#include "qwalk/errors.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

std::vector<double> origin_series(const Coin& coin, const CoinState& psi_c, long steps) {
  if (steps < 1) throw DomainError("origin series needs at least one step");
  std::vector<double> series;
  series.reserve(static_cast<std::size_t>(steps) + 1);
  WalkState state = initial_state(psi_c);
  series.push_back(state.amplitude_at(0).squaredNorm());
  evolve(std::move(state), coin, steps,
         [&series](const WalkState& s) { series.push_back(s.amplitude_at(0).squaredNorm()); });
  return series;
}

double cesaro_average(std::span<const double> series, std::size_t first, std::size_t last) {
  if (first > last || last >= series.size()) throw DomainError("averaging window outside the series");
  const auto begin = series.begin() + static_cast<std::ptrdiff_t>(first);
  const auto end = series.begin() + static_cast<std::ptrdiff_t>(last) + 1;
  return std::accumulate(begin, end, 0.0) / static_cast<double>(last - first + 1);
}

TrappingEstimate trapping_estimate(std::span<const double> series) {
  if (series.size() < 200) throw DomainError("trapping estimate needs a series of at least 200 samples");
  const std::size_t n = series.size();
  const std::size_t quarter = n / 4;
  TrappingEstimate result;
  result.windows.first = cesaro_average(series, n - 2 * quarter, n - quarter - 1);
  result.windows.second = cesaro_average(series, n - quarter, n - 1);
  result.estimate = std::clamp(result.windows.second, 0.0, 1.0);
  result.converged = std::abs(result.windows.first - result.windows.second) < kTrappingConvergence;
  return result;
}

FlatBand flat_band_detect(const Coin& coin, int n_samples, double tolerance) {
  if (n_samples < 256) throw DomainError("flat band detection needs at least 256 samples");
  const DispersionTable table = dispersion_numeric(coin, n_samples);
  int best = -1;
  double best_variation = tolerance;
  for (int j = 0; j < 3; ++j) {
    const double variation = branch_variation(table, j);
    if (variation < best_variation) {
      best_variation = variation;
      best = j;
    }
  }
  if (best < 0) return {};
  const auto& w = table.omega[best];
  const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
  return {true, std::polar(1.0, wrap_phase(mean))};
}

LocalizationReport analyze_localization(const Coin& coin, const CoinState& psi_c, long steps, int n_samples,
                                        double tolerance) {
  LocalizationReport report;
  report.series = origin_series(coin, psi_c, steps);
  const TrappingEstimate trapping = trapping_estimate(report.series);
  report.cesaro_windows = trapping.windows;
  report.trapping_estimate = trapping.estimate;
  report.converged = trapping.converged;
  const FlatBand band = flat_band_detect(coin, n_samples, tolerance);
  report.flat_band = band.present;
  report.flat_band_eigenvalue = band.eigenvalue;
  report.trapping_absent_despite_flat_band = band.present && trapping.estimate < 1e-9;
  return report;
}

}  // namespace qwalk
