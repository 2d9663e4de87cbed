#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qwalk/coin.hpp"

namespace qwalk {

/// Amplitudes psi(m, t) of a walk started at the origin.
///
/// Storage is the dense window m in [-t, t], so the support bound holds by
/// construction.
class WalkState {
 public:
  long time() const { return time_; }
  long origin_offset() const { return -time_; }
  long min_site() const { return -time_; }
  long max_site() const { return time_; }
  std::span<const CoinVector> amplitudes() const { return amplitudes_; }

  // Zero outside the stored window.
  CoinVector amplitude_at(long site) const;
  double total_probability() const;

 private:
  friend WalkState initial_state(const CoinState& psi_c);
  friend void step_into(const WalkState& from, const CoinMatrix& coin, WalkState& to);

  long time_ = 0;
  std::vector<CoinVector> amplitudes_;
};

struct ProbabilityDistribution {
  long time = 0;
  long m_min = 0;
  std::vector<double> p;

  long m_max() const { return m_min + static_cast<long>(p.size()) - 1; }
  double at(long site) const;
  double total() const;
};

// Throws DomainError unless psi_c is normalized within 1e-12.
WalkState initial_state(const CoinState& psi_c);

// One application of U = S (I (x) C): coin on every site, then L -> m-1, S stays, R -> m+1.
WalkState step(const WalkState& state, const Coin& coin);
void step_into(const WalkState& from, const CoinMatrix& coin, WalkState& to);

WalkState evolve(WalkState state, const Coin& coin, long steps);

// Calls `observer` after every step with the current state.
WalkState evolve(WalkState state, const Coin& coin, long steps,
                 const std::function<void(const WalkState&)>& observer);

ProbabilityDistribution probability_distribution(const WalkState& state);

// Sites of maximal probability strictly right and strictly left of the origin.
struct SidePeaks {
  long right = 0;
  long left = 0;
};
SidePeaks side_peaks(const ProbabilityDistribution& dist);

}  // namespace qwalk
