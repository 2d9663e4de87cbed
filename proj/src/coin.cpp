#include "qwalk/coin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

using std::numbers::pi;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kInvSqrt3 = 1.0 / std::sqrt(3.0);
const double kInvSqrt6 = 1.0 / std::sqrt(6.0);

CoinVector real_vector(double l, double s, double r) { return CoinVector(Complex(l), Complex(s), Complex(r)); }

CoinMatrix spectral_sum(const std::array<Complex, 3>& eigenvalues, const std::array<CoinVector, 3>& vectors) {
  CoinMatrix m = CoinMatrix::Zero();
  for (int j = 0; j < 3; ++j) {
    m += eigenvalues[j] * vectors[j] * vectors[j].adjoint();
  }
  return m;
}

bool symmetric_family(CoinFamily family) { return family != CoinFamily::Custom; }

}  // namespace

std::string_view to_string(CoinFamily family) {
  switch (family) {
    case CoinFamily::Grover: return "grover";
    case CoinFamily::C1: return "c1";
    case CoinFamily::C2: return "c2";
    case CoinFamily::PermutationPi: return "pi";
    case CoinFamily::TrivialC: return "trivial_c";
    case CoinFamily::TrivialCPrime: return "trivial_c_prime";
    case CoinFamily::Custom: return "custom";
  }
  return "custom";
}

CoinFamily coin_family_from_string(std::string_view name) {
  for (auto family : {CoinFamily::Grover, CoinFamily::C1, CoinFamily::C2, CoinFamily::PermutationPi,
                      CoinFamily::TrivialC, CoinFamily::TrivialCPrime, CoinFamily::Custom}) {
    if (to_string(family) == name) return family;
  }
  throw DomainError("unknown coin family '" + std::string(name) + "'");
}

bool CoinState::is_normalized(double tolerance) const { return std::abs(amplitudes_.squaredNorm() - 1.0) <= tolerance; }

CoinState CoinState::normalized() const {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("coin state has zero or non-finite norm");
  return CoinState(CoinVector(amplitudes_ / n));
}

Coin::Coin(const CoinMatrix& matrix, CoinFamily family, std::optional<double> parameter)
    : matrix_(matrix), family_(family), parameter_(parameter) {
  if (!matrix_.allFinite()) throw InvariantError("coin matrix has non-finite entries");
  if (!is_unitary(matrix_)) {
    const double dev = max_entry_deviation(matrix_ * matrix_.adjoint(), CoinMatrix::Identity());
    throw InvariantError("coin matrix is not unitary: max |C C^dagger - I| = " + std::to_string(dev));
  }
  if (symmetric_family(family_) && !is_exchange_symmetric(matrix_)) {
    throw InvariantError("coin of family '" + std::string(to_string(family_)) + "' is not L<->R symmetric");
  }
}

CoinMatrix EigenSystem::projector(int j) const { return eigenvectors.at(j) * eigenvectors.at(j).adjoint(); }

std::array<double, 3> EigenSystem::phases() const {
  return {wrap_phase(std::arg(eigenvalues[0])), wrap_phase(std::arg(eigenvalues[1])),
          wrap_phase(std::arg(eigenvalues[2]))};
}

CoinMatrix EigenSystem::reconstruct() const { return spectral_sum(eigenvalues, eigenvectors); }

void EigenSystem::validate(double tolerance) const {
  for (int j = 0; j < 3; ++j) {
    if (std::abs(std::abs(eigenvalues[j]) - 1.0) > tolerance) {
      throw InvariantError("eigenvalue " + std::to_string(j + 1) + " is off the unit circle");
    }
    for (int l = 0; l < 3; ++l) {
      const Complex overlap = eigenvectors[j].dot(eigenvectors[l]);
      const double expected = j == l ? 1.0 : 0.0;
      if (std::abs(overlap - expected) > tolerance) {
        throw InvariantError("eigenvectors are not orthonormal");
      }
    }
  }
}

Coin grover_coin() {
  CoinMatrix m;
  m << -1, 2, 2,
        2, -1, 2,
        2, 2, -1;
  return Coin(m / 3.0, CoinFamily::Grover);
}

Coin permutation_coin() {
  CoinMatrix m;
  m << 0, 0, 1,
       0, 1, 0,
       1, 0, 0;
  return Coin(m, CoinFamily::PermutationPi);
}

Coin trivial_coin_c() {
  CoinMatrix m;
  m << 0, 0, 1,
       0, -1, 0,
       1, 0, 0;
  return Coin(m, CoinFamily::TrivialC);
}

Coin trivial_coin_c_prime() {
  CoinMatrix m = CoinMatrix::Zero();
  m.diagonal() << -1, 1, -1;
  return Coin(m, CoinFamily::TrivialCPrime);
}

EigenSystem grover_eigensystem() {
  EigenSystem es;
  es.eigenvalues = {Complex(-1.0), Complex(-1.0), Complex(1.0)};
  es.eigenvectors = {real_vector(kInvSqrt6, -2.0 * kInvSqrt6, kInvSqrt6), real_vector(kInvSqrt2, 0.0, -kInvSqrt2),
                     real_vector(kInvSqrt3, kInvSqrt3, kInvSqrt3)};
  return es;
}

EigenSystem c2_eigensystem(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("c2 parameter rho must lie in [0, 1]");
  const double co = std::sqrt(1.0 - rho * rho);
  EigenSystem es;
  es.eigenvalues = {Complex(-1.0), Complex(-1.0), Complex(1.0)};
  es.eigenvectors = {real_vector(rho * kInvSqrt2, -co, rho * kInvSqrt2), real_vector(kInvSqrt2, 0.0, -kInvSqrt2),
                     real_vector(co * kInvSqrt2, rho, co * kInvSqrt2)};
  return es;
}

namespace {

double reduce_c1_parameter(double phi) {
  if (!std::isfinite(phi)) throw DomainError("c1 parameter phi must be finite");
  double reduced = std::fmod(phi, pi);
  if (reduced < 0.0) reduced += pi;
  return reduced;
}

EigenSystem c1_eigensystem(double phi) {
  EigenSystem es = grover_eigensystem();
  es.eigenvalues[0] = -std::polar(1.0, 2.0 * phi);
  return es;
}

}  // namespace

Coin coin_c1(double phi) {
  const double reduced = reduce_c1_parameter(phi);
  const EigenSystem es = c1_eigensystem(reduced);
  return Coin(es.reconstruct(), CoinFamily::C1, reduced);
}

Coin coin_c2(double rho) {
  const EigenSystem es = c2_eigensystem(rho);
  return Coin(es.reconstruct(), CoinFamily::C2, rho);
}

Coin custom_coin(const CoinMatrix& matrix) { return Coin(matrix, CoinFamily::Custom); }

Coin coin_from_spectral(const EigenSystem& eigensystem, const std::array<double, 3>& phases) {
  eigensystem.validate(kNumericTolerance);
  std::array<Complex, 3> eigenvalues;
  for (int j = 0; j < 3; ++j) {
    if (!std::isfinite(phases[j])) throw DomainError("spectral phases must be finite");
    eigenvalues[j] = std::polar(1.0, phases[j]);
  }
  return Coin(spectral_sum(eigenvalues, eigensystem.eigenvectors), CoinFamily::Custom);
}

EigenSystem diagonalize_unitary(const CoinMatrix& unitary) {
  if (!unitary.allFinite() || !is_unitary(unitary, kNumericTolerance)) {
    throw InvariantError("diagonalization requires a unitary matrix");
  }
  // Schur vectors of a normal matrix are eigenvectors, and they come out
  // orthonormal even inside degenerate eigenspaces.
  const Eigen::ComplexSchur<CoinMatrix> schur(unitary);
  const CoinMatrix& t = schur.matrixT();
  const CoinMatrix& q = schur.matrixU();
  const double off_diagonal = std::max({std::abs(t(0, 1)), std::abs(t(0, 2)), std::abs(t(1, 2))});
  if (off_diagonal > kNumericTolerance) throw InvariantError("Schur form of a unitary matrix is not diagonal");

  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int a, int b) { return std::arg(t(a, a)) < std::arg(t(b, b)); });
  EigenSystem es;
  for (int j = 0; j < 3; ++j) {
    const Complex lambda = t(order[j], order[j]);
    es.eigenvalues[j] = lambda / std::abs(lambda);
    es.eigenvectors[j] = q.col(order[j]);
  }
  return es;
}

EigenSystem eigensystem_of(const Coin& coin) {
  switch (coin.family()) {
    case CoinFamily::Grover: return grover_eigensystem();
    case CoinFamily::C1: return c1_eigensystem(coin.parameter().value_or(0.0));
    case CoinFamily::C2: return c2_eigensystem(coin.parameter().value_or(1.0 / std::sqrt(3.0)));
    case CoinFamily::PermutationPi: return c1_eigensystem(pi / 2.0);
    case CoinFamily::TrivialC: return c2_eigensystem(0.0);
    case CoinFamily::TrivialCPrime: return c2_eigensystem(1.0);
    case CoinFamily::Custom: break;
  }
  return diagonalize_unitary(coin.matrix());
}

CoinMatrix exchange_matrix() {
  CoinMatrix x;
  x << 0, 0, 1,
       0, 1, 0,
       1, 0, 0;
  return x;
}

double max_entry_deviation(const CoinMatrix& a, const CoinMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

bool is_unitary(const CoinMatrix& m, double tolerance) {
  return max_entry_deviation(m * m.adjoint(), CoinMatrix::Identity()) <= tolerance;
}

bool is_exchange_symmetric(const CoinMatrix& m, double tolerance) {
  const CoinMatrix x = exchange_matrix();
  return max_entry_deviation(x * m * x, m) <= tolerance;
}

double wrap_phase(double angle) {
  double r = std::remainder(angle, 2.0 * pi);
  if (r <= -pi) r += 2.0 * pi;
  return r;
}

}  // namespace qwalk
