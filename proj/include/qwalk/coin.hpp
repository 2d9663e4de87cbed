#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

namespace qwalk {

using Complex = std::complex<double>;
using CoinMatrix = Eigen::Matrix3cd;
using CoinVector = Eigen::Vector3cd;

// Component order of every coin vector is (L, S, R).
enum class CoinFamily { Grover, C1, C2, PermutationPi, TrivialC, TrivialCPrime, Custom };

std::string_view to_string(CoinFamily family);
CoinFamily coin_family_from_string(std::string_view name);

inline constexpr double kConstructionTolerance = 1e-12;
inline constexpr double kNumericTolerance = 1e-10;

/// Internal coin state (a_L, a_S, a_R).
class CoinState {
 public:
  CoinState() = default;
  CoinState(Complex left, Complex stay, Complex right) : amplitudes_(left, stay, right) {}
  explicit CoinState(const CoinVector& amplitudes) : amplitudes_(amplitudes) {}

  const CoinVector& amplitudes() const { return amplitudes_; }
  double norm() const { return amplitudes_.norm(); }
  bool is_normalized(double tolerance = kConstructionTolerance) const;
  CoinState normalized() const;

 private:
  CoinVector amplitudes_ = CoinVector::Zero();
};

/// A validated 3x3 unitary coin operator.
///
/// Construction checks unitarity (entrywise within 1e-12) and, for the
/// Grover-derived families, invariance under the L<->R exchange. Instances are
/// immutable.
class Coin {
 public:
  Coin(const CoinMatrix& matrix, CoinFamily family, std::optional<double> parameter = std::nullopt);

  const CoinMatrix& matrix() const { return matrix_; }
  CoinFamily family() const { return family_; }
  std::optional<double> parameter() const { return parameter_; }

 private:
  CoinMatrix matrix_;
  CoinFamily family_;
  std::optional<double> parameter_;
};

/// Spectral data of a coin: C = sum_j lambda_j v_j v_j^dagger.
struct EigenSystem {
  std::array<Complex, 3> eigenvalues;
  std::array<CoinVector, 3> eigenvectors;

  CoinMatrix projector(int j) const;
  // Eigenphases in (-pi, pi].
  std::array<double, 3> phases() const;
  CoinMatrix reconstruct() const;

  // Throws InvariantError if eigenvalues leave the unit circle or the
  // eigenvectors are not orthonormal.
  void validate(double tolerance = kConstructionTolerance) const;
};

Coin grover_coin();
Coin permutation_coin();      // Pi: swaps L and R
Coin trivial_coin_c();        // [[0,0,1],[0,-1,0],[1,0,0]]
Coin trivial_coin_c_prime();  // diag(-1, 1, -1)
Coin coin_c1(double phi);
Coin coin_c2(double rho);
Coin custom_coin(const CoinMatrix& matrix);

EigenSystem grover_eigensystem();
EigenSystem c2_eigensystem(double rho);

/// Sum_j exp(i theta_j) P_j as a Custom coin.
Coin coin_from_spectral(const EigenSystem& eigensystem, const std::array<double, 3>& phases);

/// Analytic eigensystem for the known families, Schur decomposition otherwise.
EigenSystem eigensystem_of(const Coin& coin);

/// Eigen decomposition of an arbitrary unitary 3x3 matrix via complex Schur form.
EigenSystem diagonalize_unitary(const CoinMatrix& unitary);

// Helpers shared with the analysis modules.
CoinMatrix exchange_matrix();
double max_entry_deviation(const CoinMatrix& a, const CoinMatrix& b);
bool is_unitary(const CoinMatrix& m, double tolerance = kConstructionTolerance);
bool is_exchange_symmetric(const CoinMatrix& m, double tolerance = kConstructionTolerance);
double wrap_phase(double angle);

}  // namespace qwalk
