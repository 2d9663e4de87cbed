#include "qwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qwalk/errors.hpp"

namespace qwalk {

CoinVector WalkState::amplitude_at(long site) const {
  if (site < -time_ || site > time_) return CoinVector::Zero();
  return amplitudes_[static_cast<std::size_t>(site + time_)];
}

double WalkState::total_probability() const {
  double total = 0.0;
  for (const auto& a : amplitudes_) total += a.squaredNorm();
  return total;
}

double ProbabilityDistribution::at(long site) const {
  if (site < m_min || site > m_max()) return 0.0;
  return p[static_cast<std::size_t>(site - m_min)];
}

double ProbabilityDistribution::total() const { return std::accumulate(p.begin(), p.end(), 0.0); }

WalkState initial_state(const CoinState& psi_c) {
  if (!psi_c.amplitudes().allFinite() || !psi_c.is_normalized()) {
    throw DomainError("initial coin state must be normalized within 1e-12");
  }
  WalkState state;
  state.time_ = 0;
  state.amplitudes_.assign(1, psi_c.amplitudes());
  return state;
}

void step_into(const WalkState& from, const CoinMatrix& coin, WalkState& to) {
  const std::size_t width = from.amplitudes_.size();
  to.time_ = from.time_ + 1;
  to.amplitudes_.assign(width + 2, CoinVector::Zero());
  // Site index i in `from` maps to i + 1 in `to` for the stay component.
  for (std::size_t i = 0; i < width; ++i) {
    const CoinVector c = coin * from.amplitudes_[i];
    to.amplitudes_[i](0) += c(0);
    to.amplitudes_[i + 1](1) += c(1);
    to.amplitudes_[i + 2](2) += c(2);
  }
}

WalkState step(const WalkState& state, const Coin& coin) {
  WalkState next;
  step_into(state, coin.matrix(), next);
  return next;
}

WalkState evolve(WalkState state, const Coin& coin, long steps) {
  return evolve(std::move(state), coin, steps, nullptr);
}

WalkState evolve(WalkState state, const Coin& coin, long steps,
                 const std::function<void(const WalkState&)>& observer) {
  if (steps < 0) throw DomainError("number of steps must be non-negative");
  WalkState scratch;
  for (long t = 0; t < steps; ++t) {
    step_into(state, coin.matrix(), scratch);
    std::swap(state, scratch);
    if (observer) observer(state);
  }
  return state;
}

ProbabilityDistribution probability_distribution(const WalkState& state) {
  ProbabilityDistribution dist;
  dist.time = state.time();
  dist.m_min = state.min_site();
  dist.p.reserve(state.amplitudes().size());
  for (const auto& a : state.amplitudes()) dist.p.push_back(a.squaredNorm());
  return dist;
}

SidePeaks side_peaks(const ProbabilityDistribution& dist) {
  SidePeaks peaks;
  double best_right = -1.0;
  double best_left = -1.0;
  for (long m = 1; m <= dist.m_max(); ++m) {
    if (dist.at(m) > best_right) {
      best_right = dist.at(m);
      peaks.right = m;
    }
  }
  for (long m = -1; m >= dist.m_min; --m) {
    if (dist.at(m) > best_left) {
      best_left = dist.at(m);
      peaks.left = m;
    }
  }
  return peaks;
}

}  // namespace qwalk
