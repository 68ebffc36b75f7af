#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"
#include "errors.hpp"
#include "model.hpp"

namespace airvote::channel {

/// One round of the fading multiple-access channel: per-worker complex gains,
/// the common receive amplitude rho, and the noise level. Invariant:
/// rho^2 <= (P0/d) |h_k|^2 for every participating worker.
struct ChannelRound {
  std::vector<std::complex<double>> h;
  double rho = 0.0;
  double N0 = 0.0;
  double P0 = 0.0;
  std::size_t d = 0;
};

struct ReceivedVector {
  std::vector<double> r_hat;
};

/// I.i.d. circularly-symmetric complex Gaussians with unit power: real and
/// imaginary parts independent N(0, 1/2). Redrawn every round (block fading).
inline std::vector<std::complex<double>> draw_channel(std::size_t K,
                                                      RngStream& stream) {
  if (K < 1) throw ConsistencyError("need at least one worker");
  const double s = std::sqrt(0.5);
  std::vector<std::complex<double>> h(K);
  for (std::size_t k = 0; k < K; ++k) {
    const double re = stream.normal(0.0, s);
    const double im = stream.normal(0.0, s);
    h[k] = {re, im};
  }
  return h;
}

/// Maximum feasible receive amplitude: rho = sqrt(P0/d) * min_k |h_k|, which
/// meets the per-worker power constraint with equality for the weakest one.
inline double power_scaling(const std::vector<std::complex<double>>& h,
                            double P0, std::size_t d) {
  if (h.empty()) throw ConsistencyError("empty channel vector");
  if (!(P0 > 0.0) || d < 1)
    throw ConsistencyError("power budget and dimension must be positive");
  double min_gain = std::abs(h[0]);
  for (const auto& hk : h) min_gain = std::min(min_gain, std::abs(hk));
  if (min_gain == 0.0)
    throw DegenerateChannelError("zero channel gain, round rejected");
  return std::sqrt(P0 / double(d)) * min_gain;
}

/// Uniform-forcing precoder x_k = rho * conj(h_k)/|h_k|^2 * m_k, so that
/// h_k * x_k = rho * m_k exactly.
inline std::vector<std::complex<double>> precode(const learn::SignVector& m,
                                                 std::complex<double> h_k,
                                                 double rho) {
  const double gain2 = std::norm(h_k);
  if (gain2 == 0.0)
    throw DegenerateChannelError("cannot invert a zero channel");
  const std::complex<double> factor = rho * std::conj(h_k) / gain2;
  std::vector<std::complex<double>> x(m.size());
  for (std::size_t j = 0; j < m.size(); ++j)
    x[j] = factor * double(m.signs[j]);
  return x;
}

namespace detail {

inline void check_messages(const std::vector<learn::SignVector>& messages,
                           std::size_t d) {
  if (messages.empty()) throw ConsistencyError("no messages to aggregate");
  for (const auto& m : messages)
    if (m.size() != d)
      throw ConsistencyError("message dimension " + std::to_string(m.size()) +
                             " does not match channel dimension " +
                             std::to_string(d));
}

}  // namespace detail

/// Superposed receive signal after channel inversion:
/// r_hat(j) = rho * sum_k m_k(j) + eta_j with eta_j ~ N(0, N0/2), the real
/// part of complex noise with power N0. The sign sum is accumulated in
/// integers, so noise-free ties are exact zeros.
inline ReceivedVector aggregate(const std::vector<learn::SignVector>& messages,
                                const ChannelRound& round, RngStream& stream) {
  detail::check_messages(messages, round.d);
  ReceivedVector r;
  r.r_hat.resize(round.d);
  const double noise_sigma = round.N0 > 0.0 ? std::sqrt(round.N0 / 2.0) : 0.0;
  for (std::size_t j = 0; j < round.d; ++j) {
    int sum = 0;
    for (const auto& m : messages) sum += m.signs[j];
    double v = round.rho * double(sum);
    if (noise_sigma > 0.0) v += stream.normal(0.0, noise_sigma);
    r.r_hat[j] = v;
  }
  return r;
}

/// Variant with per-worker amplitude scales (e.g. noncompliant transmitters
/// sending above the common power rule). All-ones scales reduce to
/// `aggregate` exactly.
inline ReceivedVector aggregate_scaled(
    const std::vector<learn::SignVector>& messages,
    const std::vector<double>& amp_scales, const ChannelRound& round,
    RngStream& stream) {
  detail::check_messages(messages, round.d);
  if (amp_scales.size() != messages.size())
    throw ConsistencyError("one amplitude scale per message required");
  ReceivedVector r;
  r.r_hat.resize(round.d);
  const double noise_sigma = round.N0 > 0.0 ? std::sqrt(round.N0 / 2.0) : 0.0;
  for (std::size_t j = 0; j < round.d; ++j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < messages.size(); ++k)
      sum += amp_scales[k] * double(messages[k].signs[j]);
    double v = round.rho * sum;
    if (noise_sigma > 0.0) v += stream.normal(0.0, noise_sigma);
    r.r_hat[j] = v;
  }
  return r;
}

/// Element-wise sign decode with sign(0) = +1.
inline learn::SignVector global_vote(const ReceivedVector& r) {
  learn::SignVector v;
  v.signs.resize(r.r_hat.size());
  for (std::size_t j = 0; j < r.r_hat.size(); ++j)
    v.signs[j] = r.r_hat[j] < 0.0 ? -1 : 1;
  return v;
}

/// Noise level from the transmit SNR definition SNR = P0/(d*N0):
/// N0 = (P0/d) / 10^(snr_db/10). An infinite snr_db yields N0 = 0.
inline double snr_to_noise(double snr_db, double P0, std::size_t d) {
  if (!(P0 > 0.0) || d < 1)
    throw ConsistencyError("power budget and dimension must be positive");
  return (P0 / double(d)) / std::pow(10.0, snr_db / 10.0);
}

}  // namespace airvote::channel
