#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qwalk/coin.hpp"

namespace qwalk {

// p(0, t) for t = 0..steps.
std::vector<double> origin_series(const Coin& coin, const CoinState& psi_c, long steps);

// Mean of series[first..last], both inclusive.
double cesaro_average(std::span<const double> series, std::size_t first, std::size_t last);

struct TrappingEstimate {
  double estimate = 0.0;
  // Averages over the second-to-last and the last quarter of the series.
  std::pair<double, double> windows{0.0, 0.0};
  bool converged = false;
};

inline constexpr double kTrappingConvergence = 1e-3;

// Throws DomainError for series shorter than 200 samples.
TrappingEstimate trapping_estimate(std::span<const double> series);

struct FlatBand {
  bool present = false;
  std::optional<Complex> eigenvalue;
};

inline constexpr double kFlatBandTolerance = 1e-8;

FlatBand flat_band_detect(const Coin& coin, int n_samples = 1024, double tolerance = kFlatBandTolerance);

struct LocalizationReport {
  std::vector<double> series;
  std::pair<double, double> cesaro_windows{0.0, 0.0};
  double trapping_estimate = 0.0;
  bool converged = false;
  bool flat_band = false;
  std::optional<Complex> flat_band_eigenvalue;
  // Flat band present but this initial state has no overlap with the bound states.
  bool trapping_absent_despite_flat_band = false;
};

LocalizationReport analyze_localization(const Coin& coin, const CoinState& psi_c, long steps, int n_samples = 1024,
                                        double tolerance = kFlatBandTolerance);

}  // namespace qwalk
