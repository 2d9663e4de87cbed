#include "qwalk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

using std::numbers::pi;
constexpr double kTwoPi = 2.0 * pi;

// Below this spread a branch counts as flat.
constexpr double kFlatVariation = 1e-8;
// Step of the Richardson-extrapolated differences used for refinement.
constexpr double kRefineStep = 1e-2;

constexpr std::array<std::array<int, 3>, 6> kPermutations{{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

double clamped_acos(double x) {
  if (x > 1.0 && x - 1.0 <= 1e-12) x = 1.0;
  if (x < -1.0 && -1.0 - x <= 1e-12) x = -1.0;
  return std::acos(std::clamp(x, -1.0, 1.0));
}

// Representative of `phase` (mod 2 pi) closest to `reference`.
double unwrap_near(double phase, double reference) { return reference + wrap_phase(phase - reference); }

double grid_spacing(const DispersionTable& table) {
  const std::size_t n = table.size();
  if (n < 3) throw DomainError("dispersion table needs at least three samples");
  const double h = kTwoPi / static_cast<double>(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(table.k[i + 1] - table.k[i] - h) > 1e-9 * h) {
      throw DomainError("group velocity requires a uniform grid covering [0, 2 pi)");
    }
  }
  return h;
}

void check_branch(const DispersionTable& table, int branch) {
  if (branch < 0 || branch > 2) throw DomainError("branch index must be 0, 1 or 2");
  if (table.omega[branch].size() != table.size()) throw DomainError("dispersion table is inconsistent");
}

// Branch values padded with one periodic neighbour on each side. Across
// k = 0 the branches may be permuted, so the neighbour is the phase that
// best continues the local linear trend.
std::vector<double> periodic_extension(const DispersionTable& table, int branch) {
  const auto& w = table.omega[branch];
  const std::size_t n = w.size();
  auto matched = [&](double target, std::size_t sample) {
    double best = 0.0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 3; ++j) {
      const double d = std::abs(wrap_phase(table.omega[j][sample] - target));
      if (d < best_dist) {
        best_dist = d;
        best = unwrap_near(table.omega[j][sample], target);
      }
    }
    return best;
  };
  std::vector<double> ext(n + 2);
  std::copy(w.begin(), w.end(), ext.begin() + 1);
  ext.front() = matched(2.0 * w[0] - w[1], n - 1);
  ext.back() = matched(2.0 * w[n - 1] - w[n - 2], 0);
  return ext;
}

// Evaluates one tracked branch at arbitrary k by re-diagonalizing the
// propagator and picking the eigenphase nearest to a local Taylor prediction.
class BranchProbe {
 public:
  BranchProbe(const CoinMatrix& coin, double k_ref, double omega_ref, double slope, double curvature)
      : coin_(coin), k_ref_(k_ref), omega_ref_(omega_ref), slope_(slope), curvature_(curvature) {}

  double omega(double k) const {
    const double dk = k - k_ref_;
    const double predicted = omega_ref_ + slope_ * dk + 0.5 * curvature_ * dk * dk;
    double best = predicted;
    double best_dist = std::numeric_limits<double>::infinity();
    for (double phase : eigenphases(momentum_propagator(coin_, k))) {
      const double d = std::abs(wrap_phase(phase - predicted));
      if (d < best_dist) {
        best_dist = d;
        best = unwrap_near(phase, predicted);
      }
    }
    return best;
  }

  double first_derivative(double k) const {
    auto central = [&](double d) { return (omega(k + d) - omega(k - d)) / (2.0 * d); };
    return (4.0 * central(kRefineStep / 2.0) - central(kRefineStep)) / 3.0;
  }

  double second_derivative(double k) const {
    const double centre = omega(k);
    auto central = [&](double d) { return (omega(k + d) - 2.0 * centre + omega(k - d)) / (d * d); };
    return (4.0 * central(kRefineStep / 2.0) - central(kRefineStep)) / 3.0;
  }

 private:
  CoinMatrix coin_;
  double k_ref_;
  double omega_ref_;
  double slope_;
  double curvature_;
};

BranchProbe probe_at(const DispersionTable& table, int branch, std::size_t sample, double k_ref,
                     const std::vector<double>& velocity, const std::vector<double>& curvature) {
  return BranchProbe(table.coin, k_ref, table.omega[branch][sample], velocity[sample], curvature[sample]);
}

// Parity partners +-k0 tie; prefer k in [0, pi], then the smaller |k|.
bool folded_before(double a, double b) {
  const bool a_forward = a >= -1e-12;
  const bool b_forward = b >= -1e-12;
  if (a_forward != b_forward) return a_forward;
  return std::abs(a) < std::abs(b);
}

int sign_of(double value, double floor) {
  if (value > floor) return 1;
  if (value < -floor) return -1;
  return 0;
}

}  // namespace

CoinMatrix momentum_propagator(const CoinMatrix& coin, double k) {
  CoinMatrix u = coin;
  u.row(0) *= std::polar(1.0, -k);
  u.row(2) *= std::polar(1.0, k);
  return u;
}

CoinMatrix momentum_propagator(const Coin& coin, double k) {
  if (!std::isfinite(k)) throw DomainError("wavenumber must be finite");
  return momentum_propagator(coin.matrix(), k);
}

std::array<double, 3> eigenphases(const CoinMatrix& unitary) { return diagonalize_unitary(unitary).phases(); }

DispersionTable dispersion_numeric(const Coin& coin, int n_samples, const DispersionOptions& options) {
  if (n_samples < 16) throw DomainError("dispersion grid needs at least 16 samples");
  const auto n = static_cast<std::size_t>(n_samples);

  DispersionTable table;
  table.coin = coin.matrix();
  table.k.resize(n);
  for (auto& branch : table.omega) branch.resize(n);
  if (options.keep_eigenvectors) {
    table.eigenvectors.emplace();
    for (auto& branch : *table.eigenvectors) branch.resize(n);
  }

  for (std::size_t s = 0; s < n; ++s) {
    const double k = kTwoPi * static_cast<double>(s) / static_cast<double>(n);
    table.k[s] = k;
    const EigenSystem es = diagonalize_unitary(momentum_propagator(coin.matrix(), k));
    const auto phases = es.phases();

    std::array<int, 3> assignment{0, 1, 2};
    std::array<double, 3> predicted = phases;
    if (s > 0) {
      for (int j = 0; j < 3; ++j) {
        const double last = table.omega[j][s - 1];
        predicted[j] = s > 1 ? 2.0 * last - table.omega[j][s - 2] : last;
      }
      double best_cost = std::numeric_limits<double>::infinity();
      for (const auto& perm : kPermutations) {
        double cost = 0.0;
        for (int j = 0; j < 3; ++j) {
          const double d = wrap_phase(phases[perm[j]] - predicted[j]);
          cost += d * d;
        }
        if (cost < best_cost) {
          best_cost = cost;
          assignment = perm;
        }
      }
    }
    for (int j = 0; j < 3; ++j) {
      const double value = unwrap_near(phases[assignment[j]], predicted[j]);
      if (s > 0 && std::abs(value - table.omega[j][s - 1]) >= options.branch_jump_threshold) {
        throw BranchTrackingError("eigenphase branch " + std::to_string(j + 1) + " jumps at k = " + std::to_string(k),
                                  k);
      }
      table.omega[j][s] = value;
      if (table.eigenvectors) (*table.eigenvectors)[j][s] = es.eigenvectors[assignment[j]];
    }
  }

  int flattest = 0;
  for (int j = 1; j < 3; ++j) {
    if (branch_variation(table, j) < branch_variation(table, flattest)) flattest = j;
  }
  if (flattest != kFlatBranch) {
    std::swap(table.omega[flattest], table.omega[kFlatBranch]);
    if (table.eigenvectors) std::swap((*table.eigenvectors)[flattest], (*table.eigenvectors)[kFlatBranch]);
  }
  return table;
}

std::array<double, 3> dispersion_analytic(CoinFamily family, std::optional<double> parameter, double k) {
  const double ck = std::cos(k);
  switch (family) {
    case CoinFamily::Grover: {
      const double a = clamped_acos(-(2.0 + ck) / 3.0);
      return {a, -a, 0.0};
    }
    case CoinFamily::PermutationPi: return dispersion_analytic(CoinFamily::C1, pi / 2.0, k);
    case CoinFamily::C1: {
      if (!parameter || !std::isfinite(*parameter)) throw DomainError("c1 dispersion needs a finite phi");
      const double phi = *parameter;
      const double a = clamped_acos(-(2.0 + ck) * std::cos(phi) / 3.0);
      return {phi + a, phi - a, 0.0};
    }
    case CoinFamily::TrivialC: return dispersion_analytic(CoinFamily::C2, 0.0, k);
    case CoinFamily::TrivialCPrime: return dispersion_analytic(CoinFamily::C2, 1.0, k);
    case CoinFamily::C2: {
      if (!parameter || !(*parameter >= 0.0 && *parameter <= 1.0)) {
        throw DomainError("c2 dispersion needs rho in [0, 1]");
      }
      const double r2 = *parameter * *parameter;
      const double a = clamped_acos(r2 - 1.0 - r2 * ck);
      return {a, -a, 0.0};
    }
    case CoinFamily::Custom: break;
  }
  throw UnsupportedFamilyError("no closed-form dispersion for custom coins; use dispersion_numeric");
}

double branch_variation(const DispersionTable& table, int branch) {
  check_branch(table, branch);
  const auto& w = table.omega[branch];
  if (w.empty()) return 0.0;
  const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
  double spread = 0.0;
  for (double v : w) spread = std::max(spread, std::abs(v - mean));
  return spread;
}

std::vector<double> group_velocity(const DispersionTable& table, int branch) {
  check_branch(table, branch);
  const double h = grid_spacing(table);
  const auto ext = periodic_extension(table, branch);
  std::vector<double> v(table.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (ext[i + 2] - ext[i]) / (2.0 * h);
  return v;
}

std::vector<double> phase_curvature(const DispersionTable& table, int branch) {
  check_branch(table, branch);
  const double h = grid_spacing(table);
  const auto ext = periodic_extension(table, branch);
  std::vector<double> c(table.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (ext[i + 2] - 2.0 * ext[i + 1] + ext[i]) / (h * h);
  return c;
}

std::vector<StationaryPoint> stationary_points(const DispersionTable& table, int branch) {
  check_branch(table, branch);
  if (table.size() < 256) throw DomainError("stationary point search needs at least 256 samples");
  if (branch_variation(table, branch) < kFlatVariation) return {};
  const double h = grid_spacing(table);

  // Smooth continuation of the branch over [-pi, pi): the right half is the
  // branch itself, the left half is whichever branch continues it across k = 0.
  const auto& w = table.omega[branch];
  const std::size_t n = table.size();
  const std::size_t half = n / 2;
  const double target = 2.0 * w[0] - w[1];
  int partner = branch;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 3; ++j) {
    const double d = std::abs(wrap_phase(table.omega[j][n - 1] - target));
    if (d < best_dist) {
      best_dist = d;
      partner = j;
    }
  }
  const double offset = unwrap_near(table.omega[partner][n - 1], target) - table.omega[partner][n - 1];

  std::vector<double> k(n);
  std::vector<double> omega(n);
  for (std::size_t i = 0; i < n - half; ++i) {
    k[i] = table.k[half + i] - kTwoPi;
    omega[i] = table.omega[partner][half + i] + offset;
  }
  for (std::size_t i = 0; i < half; ++i) {
    k[n - half + i] = table.k[i];
    omega[n - half + i] = w[i];
  }

  // Rounding in the phases is amplified by 1/h^2 in the second difference.
  const double floor = std::max(1e-9, 1e-12 / (h * h));
  std::vector<double> slope(n, 0.0);
  std::vector<double> curvature(n, 0.0);
  std::vector<int> signs(n, 0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    slope[i] = (omega[i + 1] - omega[i - 1]) / (2.0 * h);
    curvature[i] = (omega[i + 1] - 2.0 * omega[i] + omega[i - 1]) / (h * h);
    signs[i] = sign_of(curvature[i], floor);
  }

  std::vector<StationaryPoint> points;
  std::size_t last = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (signs[i] == 0) continue;
    if (last != 0 && signs[i] != signs[last]) {
      const BranchProbe probe(table.coin, k[last], omega[last], slope[last], curvature[last]);
      double lo = k[last];
      double hi = k[i];
      const int sign_lo = signs[last];
      for (int iter = 0; iter < 200 && hi - lo > 1e-11; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double f = probe.second_derivative(mid);
        if (f == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((f > 0.0 ? 1 : -1) == sign_lo) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double root = 0.5 * (lo + hi);
      points.push_back({wrap_phase(root), probe.first_derivative(root)});
    }
    last = i;
  }
  return points;
}

std::optional<double> stationary_point(const DispersionTable& table, int branch) {
  const auto points = stationary_points(table, branch);
  if (points.empty()) return std::nullopt;
  auto preferred = [](const StationaryPoint& a, const StationaryPoint& b) {
    const double diff = std::abs(a.velocity) - std::abs(b.velocity);
    if (std::abs(diff) > 1e-9) return diff > 0.0;
    return folded_before(a.k, b.k);
  };
  return std::min_element(points.begin(), points.end(), preferred)->k;
}

std::string_view to_string(VelocityMethod method) {
  return method == VelocityMethod::Analytic ? "analytic" : "numeric";
}

VelocityMethod velocity_method_from_string(std::string_view name) {
  if (name == "analytic") return VelocityMethod::Analytic;
  if (name == "numeric") return VelocityMethod::Numeric;
  throw DomainError("unknown velocity method '" + std::string(name) + "'");
}

PeakVelocityResult peak_velocities_numeric(const Coin& coin, int n_samples) {
  const DispersionTable table = dispersion_numeric(coin, n_samples);

  std::vector<StationaryPoint> stationary;
  std::vector<double> sampled;
  for (int branch = 0; branch < 3; ++branch) {
    if (branch_variation(table, branch) < kFlatVariation) continue;
    const auto points = stationary_points(table, branch);
    stationary.insert(stationary.end(), points.begin(), points.end());
    // Sampled extremes cover linear bands, which have no isolated inflection.
    const auto velocity = group_velocity(table, branch);
    const auto curvature = phase_curvature(table, branch);
    const auto [lo, hi] = std::minmax_element(velocity.begin(), velocity.end());
    for (auto it : {lo, hi}) {
      const auto s = static_cast<std::size_t>(it - velocity.begin());
      sampled.push_back(probe_at(table, branch, s, table.k[s], velocity, curvature).first_derivative(table.k[s]));
    }
  }

  PeakVelocityResult result;
  result.method = VelocityMethod::Numeric;
  if (sampled.empty()) return result;

  result.v_right = *std::max_element(sampled.begin(), sampled.end());
  result.v_left = *std::min_element(sampled.begin(), sampled.end());
  const StationaryPoint* best = nullptr;
  for (const auto& p : stationary) {
    result.v_right = std::max(result.v_right, p.velocity);
    result.v_left = std::min(result.v_left, p.velocity);
  }
  for (const auto& p : stationary) {
    if (std::abs(p.velocity - result.v_right) > 1e-8) continue;
    if (!best || folded_before(p.k, best->k)) best = &p;
  }
  if (best) result.k0 = best->k;
  return result;
}

PeakVelocityResult peak_velocities_analytic(const Coin& coin) {
  PeakVelocityResult result;
  result.method = VelocityMethod::Analytic;
  double v = 0.0;
  switch (coin.family()) {
    case CoinFamily::Grover:
      v = 1.0 / std::sqrt(3.0);
      result.k0 = 0.0;
      break;
    case CoinFamily::C1: {
      // C1(pi - phi) is the complex conjugate of C1(phi) and spreads identically.
      double phi = coin.parameter().value_or(0.0);
      if (phi > pi / 2.0) phi = pi - phi;
      v = peak_velocity_c1(phi);
      if (phi < pi / 2.0) result.k0 = stationary_wavenumber_c1(phi);
      break;
    }
    case CoinFamily::C2: {
      const double rho = coin.parameter().value_or(1.0 / std::sqrt(3.0));
      v = peak_velocity_c2(rho);
      if (rho > 0.0 && rho < 1.0) result.k0 = 0.0;
      break;
    }
    case CoinFamily::PermutationPi:
    case CoinFamily::TrivialC: v = 0.0; break;
    case CoinFamily::TrivialCPrime: v = 1.0; break;
    case CoinFamily::Custom:
      throw UnsupportedFamilyError("no closed-form peak velocity for custom coins; use the numeric path");
  }
  result.v_right = v;
  result.v_left = -v;
  return result;
}

double peak_velocity_c1(double phi) {
  if (!(phi >= 0.0 && phi <= pi / 2.0)) throw DomainError("c1 peak velocity needs phi in [0, pi/2]");
  const double c2 = std::cos(phi) * std::cos(phi);
  const double inner = 3.0 - c2 - std::sin(phi) * std::sqrt(9.0 - c2);
  return std::sqrt(std::max(inner, 0.0)) / std::sqrt(6.0);
}

double peak_velocity_c2(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("c2 peak velocity needs rho in [0, 1]");
  return rho;
}

double stationary_wavenumber_c1(double phi) {
  if (!(phi >= 0.0 && phi < pi / 2.0)) throw DomainError("c1 stationary wavenumber needs phi in [0, pi/2)");
  const double c2 = std::cos(phi) * std::cos(phi);
  const double root = std::sqrt(9.0 - 10.0 * c2 + c2 * c2);
  return clamped_acos((9.0 - 5.0 * c2 - 3.0 * root) / (4.0 * c2));
}

double linear_approx_deviation(double phi) {
  return peak_velocity_c1(phi) - (1.0 - 2.0 * phi / pi) / std::sqrt(3.0);
}

}  // namespace qwalk
