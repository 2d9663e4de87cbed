#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "qwalk/coin.hpp"

namespace qwalk {

// Diag(e^{-ik}, 1, e^{ik}) * C, the propagator of Fourier mode k.
CoinMatrix momentum_propagator(const Coin& coin, double k);
CoinMatrix momentum_propagator(const CoinMatrix& coin, double k);

// Eigenphases of a unitary matrix in (-pi, pi], ascending.
std::array<double, 3> eigenphases(const CoinMatrix& unitary);

/// Eigenphase branches omega_j(k) sampled on a uniform grid of [0, 2 pi).
///
/// Branches are continuous (unwrapped) along the grid, so values may leave
/// (-pi, pi]; only exp(i omega) is meaningful. Branch index 2 holds the
/// flattest branch.
struct DispersionTable {
  CoinMatrix coin;
  std::vector<double> k;
  std::array<std::vector<double>, 3> omega;
  std::optional<std::array<std::vector<CoinVector>, 3>> eigenvectors;

  std::size_t size() const { return k.size(); }
};

struct DispersionOptions {
  double branch_jump_threshold = std::numbers::pi / 4.0;
  bool keep_eigenvectors = false;
};

inline constexpr int kFlatBranch = 2;
inline constexpr int kDefaultGridSize = 4096;

// Throws DomainError for n_samples < 16, BranchTrackingError when a branch
// moves by more than the jump threshold between neighbouring samples.
DispersionTable dispersion_numeric(const Coin& coin, int n_samples = kDefaultGridSize,
                                   const DispersionOptions& options = {});

// Closed-form (omega_1, omega_2, omega_3) for the Grover-derived families.
std::array<double, 3> dispersion_analytic(CoinFamily family, std::optional<double> parameter, double k);

// max_k |omega_j(k) - mean_k omega_j(k)|
double branch_variation(const DispersionTable& table, int branch);

// d omega_j / dk by central differences, periodic across k = 0.
std::vector<double> group_velocity(const DispersionTable& table, int branch);
std::vector<double> phase_curvature(const DispersionTable& table, int branch);

/// Wavenumber where d^2 omega / dk^2 changes sign on the given branch.
///
/// When a branch has several inflections the one with the largest |group
/// velocity| is returned (ties prefer k in [0, pi]); result lies in (-pi, pi].
/// Absent for flat or linear branches.
std::optional<double> stationary_point(const DispersionTable& table, int branch);

struct StationaryPoint {
  double k = 0.0;
  double velocity = 0.0;
};
std::vector<StationaryPoint> stationary_points(const DispersionTable& table, int branch);

enum class VelocityMethod { Analytic, Numeric };
std::string_view to_string(VelocityMethod method);
VelocityMethod velocity_method_from_string(std::string_view name);

struct PeakVelocityResult {
  double v_left = 0.0;
  double v_right = 0.0;
  std::optional<double> k0;
  VelocityMethod method = VelocityMethod::Numeric;
};

PeakVelocityResult peak_velocities_numeric(const Coin& coin, int n_samples = kDefaultGridSize);
PeakVelocityResult peak_velocities_analytic(const Coin& coin);

double peak_velocity_c1(double phi);
double peak_velocity_c2(double rho);
// Closed-form inflection wavenumber of the C1 family, phi in [0, pi/2).
double stationary_wavenumber_c1(double phi);
// peak_velocity_c1(phi) - (1 - 2 phi / pi) / sqrt(3)
double linear_approx_deviation(double phi);

}  // namespace qwalk
