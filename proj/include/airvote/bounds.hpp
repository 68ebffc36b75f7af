#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "channel.hpp"
#include "common.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "model.hpp"

namespace airvote::bounds {

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

/// Gradient-signal-to-data-noise ratio J = sqrt(A) |g| / sigma.
inline double gsnr(double g_j, double sigma_j, std::size_t A) {
  if (!(sigma_j > 0.0)) throw ConsistencyError("sigma must be positive");
  if (A < 1) throw ConsistencyError("batch size must be positive");
  return std::sqrt(double(A)) * std::abs(g_j) / sigma_j;
}

/// Scalar gradient oracle: one mini-batch gradient coordinate is simulated as
/// N(g, sigma^2/A) -- unbiased, symmetric, unimodal, with known noise scale.
struct GaussianGradOracle {
  double g = 0.0;
  double sigma = 1.0;
  std::size_t A = 1;

  double gsnr() const { return bounds::gsnr(g, sigma, A); }
  double ballot_sigma() const { return sigma / std::sqrt(double(A)); }
  int true_sign() const { return g < 0.0 ? -1 : 1; }
  double draw(RngStream& stream) const {
    return stream.normal(g, ballot_sigma());
  }
};

inline void validate_oracle(const GaussianGradOracle& o) {
  if (!(o.sigma > 0.0)) throw ConsistencyError("oracle sigma must be positive");
  if (o.A < 1) throw ConsistencyError("oracle batch size must be positive");
}

/// Oracle calibrated so its GSNR equals J (g = J, sigma = 1, A = 1).
inline GaussianGradOracle oracle_for_gsnr(double J) {
  if (!(J >= 0.0)) throw ConsistencyError("GSNR must be non-negative");
  return GaussianGradOracle{J, 1.0, 1};
}

struct BoundReport {
  double value = 0.0;
  bool valid = true;     // preconditions of the closed form hold
  bool vacuous = false;  // bound exceeds 1, so it constrains nothing
  std::string note;
};

/// Per-ballot sign error bound: 2/(9J^2) for J >= 2/sqrt(3), otherwise
/// 1/2 - J/(2 sqrt(3)); the two branches meet at 1/6.
inline double lemma1_bound(double J) {
  if (!(J >= 0.0)) throw ConsistencyError("GSNR must be non-negative");
  const double breakpoint = 2.0 / std::sqrt(3.0);
  if (J >= breakpoint) return 2.0 / (9.0 * J * J);
  return 0.5 - J / (2.0 * std::sqrt(3.0));
}

/// Local-vote error bound over s ballots: 1/(J sqrt(s)).
inline BoundReport prop1_bound(double J, std::size_t s) {
  if (!(J >= 0.0)) throw ConsistencyError("GSNR must be non-negative");
  if (s < 1) throw ConsistencyError("ballot count must be positive");
  BoundReport r;
  if (J == 0.0) {
    r.value = std::numeric_limits<double>::infinity();
    r.vacuous = true;
    r.note = "vacuous: zero GSNR";
    return r;
  }
  r.value = 1.0 / (J * std::sqrt(double(s)));
  r.vacuous = r.value > 1.0;
  if (r.vacuous) r.note = "vacuous: bound exceeds 1";
  return r;
}

/// Honest-worker error bound under Bernoulli(p) allocation: 1/(J sqrt(Kp)),
/// stated for p in (4/(J^2 K), 1].
inline BoundReport thm1_bound(double J, std::size_t K, double p) {
  if (!(J >= 0.0)) throw ConsistencyError("GSNR must be non-negative");
  if (K < 1) throw ConsistencyError("worker count must be positive");
  if (!(p > 0.0 && p <= 1.0))
    throw ConsistencyError("allocation probability must be in (0, 1]");
  BoundReport r;
  if (J == 0.0) {
    r.value = std::numeric_limits<double>::infinity();
    r.vacuous = true;
    r.valid = false;
    r.note = "invalid: zero GSNR";
    return r;
  }
  r.value = 1.0 / (J * std::sqrt(double(K) * p));
  r.vacuous = r.value > 1.0;
  const double p_floor = 4.0 / (J * J * double(K));
  r.valid = p > p_floor;
  if (!r.valid)
    r.note = "invalid: p <= " + std::to_string(p_floor) +
             " is outside the stated range";
  return r;
}

/// Global decode error bound:
/// P_err <= (1/2) sqrt((1-c)/K) + (1/(K rho)) sqrt(N0/2).
/// Valid when (1-c)(1-q) > 1/2, with q the honest-worker error probability
/// supplied by the caller.
inline BoundReport thm2_bound(double c, std::size_t K, double N0, double rho,
                              double q) {
  if (!(c >= 0.0 && c < 1.0))
    throw ConsistencyError("corruption level must be in [0, 1)");
  if (K < 1) throw ConsistencyError("worker count must be positive");
  if (!(rho > 0.0)) throw ConsistencyError("rho must be positive");
  if (!(N0 >= 0.0)) throw ConsistencyError("noise level must be non-negative");
  if (!(q >= 0.0 && q <= 1.0))
    throw ConsistencyError("honest error probability must be in [0, 1]");
  BoundReport r;
  r.value = 0.5 * std::sqrt((1.0 - c) / double(K)) +
            std::sqrt(N0 / 2.0) / (double(K) * rho);
  r.valid = (1.0 - c) * (1.0 - q) > 0.5;
  if (!r.valid)
    r.note = "invalid: (1-c)(1-q) = " +
             std::to_string((1.0 - c) * (1.0 - q)) + " is not above 1/2";
  r.vacuous = r.value > 1.0;
  return r;
}

/// Margin term of the convergence bound: Delta = 1 - sqrt((1-c)/K)
/// - (sqrt(2)/(K rho_min)) sqrt(N0).
inline double thm3_delta(double c, std::size_t K, double N0, double rho_min) {
  if (!(c >= 0.0 && c < 1.0))
    throw ConsistencyError("corruption level must be in [0, 1)");
  if (K < 1) throw ConsistencyError("worker count must be positive");
  if (!(rho_min > 0.0)) throw ConsistencyError("rho_min must be positive");
  if (!(N0 >= 0.0)) throw ConsistencyError("noise level must be non-negative");
  return 1.0 - std::sqrt((1.0 - c) / double(K)) -
         std::sqrt(2.0) * std::sqrt(N0) / (double(K) * rho_min);
}

/// Averaged expected gradient-norm bound after T rounds:
/// (1/sqrt(T)) (sqrt(L1)/Delta) (F0 - Fstar + 1/(2T)).
inline BoundReport thm3_bound(std::size_t T, double L1, double F0, double Fstar,
                              double c, std::size_t K, double N0,
                              double rho_min) {
  if (T < 1) throw ConsistencyError("round count must be positive");
  if (!(L1 > 0.0)) throw ConsistencyError("smoothness norm must be positive");
  if (!(F0 >= Fstar))
    throw ConsistencyError("initial loss must be at least the optimum");
  BoundReport r;
  const double delta = thm3_delta(c, K, N0, rho_min);
  r.valid = delta > 0.0;
  if (!r.valid) {
    r.value = std::numeric_limits<double>::infinity();
    r.note = "invalid: Delta = " + std::to_string(delta) +
             " (straggler-dominated regime, rho_min too small for this noise)";
    return r;
  }
  r.value = (1.0 / std::sqrt(double(T))) * (std::sqrt(L1) / delta) *
            (F0 - Fstar + 1.0 / (2.0 * double(T)));
  return r;
}

// ---------------------------------------------------------------------------
// Exact error probabilities for the Gaussian oracle, used as independent
// references for the Monte Carlo harnesses and for regime checks.

namespace detail {

inline double lchoose(std::size_t n, std::size_t k) {
  return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
         std::lgamma(double(n - k) + 1.0);
}

// P(W >= w_min) for W ~ Binomial(s, eps).
inline double binomial_tail(std::size_t s, double eps, std::size_t w_min) {
  if (w_min == 0) return 1.0;
  if (w_min > s) return 0.0;
  if (eps <= 0.0) return 0.0;
  if (eps >= 1.0) return 1.0;
  const double le = std::log(eps);
  const double l1e = std::log1p(-eps);
  double tail = 0.0;
  for (std::size_t w = w_min; w <= s; ++w)
    tail += std::exp(lchoose(s, w) + double(w) * le + double(s - w) * l1e);
  return std::min(tail, 1.0);
}

inline std::vector<double> binomial_cdf_table(std::size_t n, double p) {
  std::vector<double> cdf(n + 1, 0.0);
  if (p <= 0.0) {
    std::fill(cdf.begin(), cdf.end(), 1.0);
    return cdf;
  }
  if (p >= 1.0) {
    cdf[n] = 1.0;
    return cdf;
  }
  double pmf = std::pow(1.0 - p, double(n));
  double cum = pmf;
  cdf[0] = cum;
  for (std::size_t k = 0; k + 1 <= n; ++k) {
    pmf *= (double(n - k) / double(k + 1)) * (p / (1.0 - p));
    cum += pmf;
    cdf[k + 1] = std::min(cum, 1.0);
  }
  cdf[n] = 1.0;
  return cdf;
}

inline std::size_t draw_from_cdf(const std::vector<double>& cdf,
                                 RngStream& stream) {
  const double u = stream.uniform01();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  const std::size_t idx = std::size_t(it - cdf.begin());
  return std::min(idx, cdf.size() - 1);
}

}  // namespace detail

/// Probability one mini-batch gradient draw has the wrong sign: Phi(-J).
inline double ballot_error_probability(double J) {
  if (!(J >= 0.0)) throw ConsistencyError("GSNR must be non-negative");
  return normal_cdf(-J);
}

/// Exact error probability of a majority vote over s independent ballots with
/// per-ballot error eps and the sign(0) = +1 tie rule. With `conservative`
/// set, a tied vote counts as an error (the true sign is -1, which the tie
/// rule resolves against); otherwise ties favor the true sign.
inline double exact_local_vote_error(double J, std::size_t s,
                                     bool conservative = false) {
  if (s < 1) throw ConsistencyError("ballot count must be positive");
  const double eps = ballot_error_probability(J);
  const std::size_t w_min = conservative ? (s + 1) / 2 : s / 2 + 1;
  return detail::binomial_tail(s, eps, w_min);
}

/// Exact honest-worker error probability when the held-set size is
/// 1 + Binomial(K-1, p): the local-vote error averaged over that law.
inline double expected_hier_local_error(double J, std::size_t K, double p,
                                        bool conservative = false) {
  if (K < 1) throw ConsistencyError("worker count must be positive");
  if (!(p >= 0.0 && p <= 1.0))
    throw ConsistencyError("allocation probability must be in [0, 1]");
  const std::vector<double> cdf = detail::binomial_cdf_table(K - 1, p);
  double prev = 0.0;
  double total = 0.0;
  for (std::size_t n = 0; n < cdf.size(); ++n) {
    const double pmf = cdf[n] - prev;
    prev = cdf[n];
    if (pmf > 0.0)
      total += pmf * exact_local_vote_error(J, 1 + n, conservative);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Monte Carlo estimates with Wilson 99% intervals.

struct McEstimate {
  double rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double se = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
};

struct McGlobalEstimate {
  McEstimate est;
  double avg_bound = 0.0;  // trial-averaged closed-form bound (rho varies)
  double regime_q = 0.0;   // exact honest-worker error used for the regime check
  bool regime_valid = true;
};

inline constexpr double kWilsonZ99 = 2.5758293035489004;

inline McEstimate make_estimate(std::uint64_t errors, std::uint64_t trials) {
  McEstimate e;
  e.errors = errors;
  e.trials = trials;
  const double n = double(trials);
  const double phat = trials ? double(errors) / n : 0.0;
  e.rate = phat;
  e.se = trials ? std::sqrt(phat * (1.0 - phat) / n) : 0.0;
  const double z = kWilsonZ99;
  const double z2n = z * z / n;
  const double denom = 1.0 + z2n;
  const double center = (phat + z2n / 2.0) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / n + z2n / (4.0 * n)) / denom;
  e.ci_low = std::max(0.0, center - half);
  e.ci_high = std::min(1.0, center + half);
  return e;
}

namespace detail {

constexpr std::uint64_t kMinMcTrials = 10000;

inline bool local_vote_trial(const GaussianGradOracle& o, std::size_t s,
                             RngStream& stream) {
  int votes = 0;
  for (std::size_t i = 0; i < s; ++i) {
    const double x = o.draw(stream);
    votes += x < 0.0 ? -1 : 1;
  }
  const int vote = votes < 0 ? -1 : 1;
  return vote != o.true_sign();
}

inline std::uint64_t local_error_kernel(const GaussianGradOracle& o,
                                        std::size_t s, std::uint64_t trials,
                                        RngStream& stream) {
  std::uint64_t errors = 0;
  for (std::uint64_t t = 0; t < trials; ++t)
    errors += local_vote_trial(o, s, stream);
  return errors;
}

inline std::uint64_t theorem1_kernel(const GaussianGradOracle& o,
                                     const std::vector<double>& n_cdf,
                                     std::uint64_t trials, RngStream& stream) {
  std::uint64_t errors = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::size_t n = draw_from_cdf(n_cdf, stream);
    errors += local_vote_trial(o, 1 + n, stream);
  }
  return errors;
}

struct GlobalKernelParams {
  std::size_t K = 0;
  std::size_t B = 0;
  double c = 0.0;
  double N0 = 0.0;
  std::optional<double> fixed_rho;
};

// Per-trial draw order: honest workers in sequence (one uniform for the held
// count, then one normal per ballot), then K fading coefficients (2 normals
// each, unless rho is fixed), then one noise normal when N0 > 0.
inline void global_kernel(const GaussianGradOracle& o,
                          const std::vector<double>& n_cdf,
                          const GlobalKernelParams& gp, std::uint64_t trials,
                          RngStream& stream, std::uint64_t& errors,
                          double& bound_sum) {
  const int ts = o.true_sign();
  const std::size_t H = gp.K - gp.B;
  const double noise_sigma = gp.N0 > 0.0 ? std::sqrt(gp.N0 / 2.0) : 0.0;
  const double base_term = 0.5 * std::sqrt((1.0 - gp.c) / double(gp.K));
  const double half_sqrt = std::sqrt(0.5);
  for (std::uint64_t t = 0; t < trials; ++t) {
    int sum_m = 0;
    for (std::size_t h = 0; h < H; ++h) {
      const std::size_t n = draw_from_cdf(n_cdf, stream);
      const std::size_t s = 1 + n;
      int votes = 0;
      for (std::size_t i = 0; i < s; ++i)
        votes += o.draw(stream) < 0.0 ? -1 : 1;
      sum_m += votes < 0 ? -1 : 1;
    }
    sum_m += int(gp.B) * -ts;

    double rho;
    if (gp.fixed_rho) {
      rho = *gp.fixed_rho;
    } else {
      double min_mag2 = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < gp.K; ++k) {
        const double re = stream.normal(0.0, half_sqrt);
        const double im = stream.normal(0.0, half_sqrt);
        min_mag2 = std::min(min_mag2, re * re + im * im);
      }
      rho = std::sqrt(min_mag2);  // sqrt(P0/d) = 1 under unit normalization
    }

    double r = rho * double(sum_m);
    if (noise_sigma > 0.0) r += stream.normal(0.0, noise_sigma);
    const int decoded = r < 0.0 ? -1 : 1;
    errors += decoded != ts;
    bound_sum += base_term + noise_sigma / (double(gp.K) * rho);
  }
}

}  // namespace detail

/// Simulated local majority vote over s ballots; returns the error frequency
/// against sign(g) with a Wilson 99% interval.
inline McEstimate mc_local_error(const GaussianGradOracle& o, std::size_t s,
                                 std::uint64_t trials, RngStream& stream) {
  validate_oracle(o);
  if (s < 1) throw ConsistencyError("ballot count must be positive");
  if (trials < detail::kMinMcTrials)
    throw ConsistencyError("need at least 10000 trials");
  return make_estimate(detail::local_error_kernel(o, s, trials, stream),
                       trials);
}

/// As mc_local_error, but the ballot count per trial is 1 + Binomial(K-1, p).
inline McEstimate mc_theorem1_error(const GaussianGradOracle& o, std::size_t K,
                                    double p, std::uint64_t trials,
                                    RngStream& stream) {
  validate_oracle(o);
  if (K < 1) throw ConsistencyError("worker count must be positive");
  if (!(p >= 0.0 && p <= 1.0))
    throw ConsistencyError("allocation probability must be in [0, 1]");
  if (trials < detail::kMinMcTrials)
    throw ConsistencyError("need at least 10000 trials");
  const auto cdf = detail::binomial_cdf_table(K - 1, p);
  return make_estimate(detail::theorem1_kernel(o, cdf, trials, stream), trials);
}

struct GlobalMcOptions {
  bool enforce_regime = true;
  std::optional<double> fixed_rho;  // skip fading, use this receive amplitude
};

/// Full decode chain under the worst-case collusion attack: (1-c)K honest
/// workers run the hierarchical local vote, floor(cK) Byzantine workers send
/// the inverted true sign, fresh fading sets rho each trial, and the decoded
/// sign is compared against sign(g). Also averages the per-trial closed-form
/// bound, since rho varies by round.
inline McGlobalEstimate mc_global_error(const GaussianGradOracle& o,
                                        std::size_t K, double c, double p,
                                        double snr_db, std::uint64_t trials,
                                        RngStream& stream,
                                        const GlobalMcOptions& opts = {}) {
  validate_oracle(o);
  if (K < 1) throw ConsistencyError("worker count must be positive");
  if (!(c >= 0.0 && c < 1.0))
    throw ConsistencyError("corruption level must be in [0, 1)");
  if (!(p >= 0.0 && p <= 1.0))
    throw ConsistencyError("allocation probability must be in [0, 1]");
  if (trials < detail::kMinMcTrials)
    throw ConsistencyError("need at least 10000 trials");
  if (opts.fixed_rho && !(*opts.fixed_rho > 0.0))
    throw ConsistencyError("fixed rho must be positive");

  McGlobalEstimate out;
  out.regime_q = expected_hier_local_error(o.gsnr(), K, p, true);
  out.regime_valid = (1.0 - c) * (1.0 - out.regime_q) > 0.5;
  if (opts.enforce_regime && !out.regime_valid)
    throw InvalidRegimeError(
        "(1-c)(1-q) = " +
        std::to_string((1.0 - c) * (1.0 - out.regime_q)) +
        " is not above 1/2; the decode bound does not apply");

  detail::GlobalKernelParams gp;
  gp.K = K;
  gp.B = std::size_t(std::floor(c * double(K) + 1e-9));
  gp.c = c;
  gp.N0 = channel::snr_to_noise(snr_db, 1.0, 1);
  gp.fixed_rho = opts.fixed_rho;

  std::uint64_t errors = 0;
  double bound_sum = 0.0;
  const auto cdf = detail::binomial_cdf_table(K - 1, p);
  detail::global_kernel(o, cdf, gp, trials, stream, errors, bound_sum);
  out.est = make_estimate(errors, trials);
  out.avg_bound = bound_sum / double(trials);
  return out;
}

// ---------------------------------------------------------------------------
// Sharded drivers: a fixed shard count with per-shard derived streams makes
// results byte-identical for any thread count. Error counts merge as
// integers; bound sums merge in shard order.

inline constexpr std::size_t kMcShards = 64;

namespace detail {

inline std::uint64_t shard_trials(std::uint64_t total, std::size_t shard) {
  return total / kMcShards + (shard < total % kMcShards ? 1 : 0);
}

}  // namespace detail

inline McEstimate sharded_local_error(const GaussianGradOracle& o,
                                      std::size_t s, std::uint64_t trials,
                                      std::uint64_t seed,
                                      std::uint64_t point_tag,
                                      unsigned threads) {
  validate_oracle(o);
  if (s < 1) throw ConsistencyError("ballot count must be positive");
  if (trials < detail::kMinMcTrials)
    throw ConsistencyError("need at least 10000 trials");
  std::vector<std::uint64_t> errors(kMcShards, 0);
  parallel_for(kMcShards, threads, [&](std::size_t t) {
    RngStream stream = make_stream(seed, "mc-shard", point_tag, t);
    errors[t] = detail::local_error_kernel(o, s, detail::shard_trials(trials, t),
                                           stream);
  });
  std::uint64_t total = 0;
  for (std::uint64_t e : errors) total += e;
  return make_estimate(total, trials);
}

inline McEstimate sharded_theorem1_error(const GaussianGradOracle& o,
                                         std::size_t K, double p,
                                         std::uint64_t trials,
                                         std::uint64_t seed,
                                         std::uint64_t point_tag,
                                         unsigned threads) {
  validate_oracle(o);
  if (K < 1) throw ConsistencyError("worker count must be positive");
  if (!(p >= 0.0 && p <= 1.0))
    throw ConsistencyError("allocation probability must be in [0, 1]");
  if (trials < detail::kMinMcTrials)
    throw ConsistencyError("need at least 10000 trials");
  const auto cdf = detail::binomial_cdf_table(K - 1, p);
  std::vector<std::uint64_t> errors(kMcShards, 0);
  parallel_for(kMcShards, threads, [&](std::size_t t) {
    RngStream stream = make_stream(seed, "mc-shard", point_tag, t);
    errors[t] = detail::theorem1_kernel(o, cdf, detail::shard_trials(trials, t),
                                        stream);
  });
  std::uint64_t total = 0;
  for (std::uint64_t e : errors) total += e;
  return make_estimate(total, trials);
}

inline McGlobalEstimate sharded_global_error(const GaussianGradOracle& o,
                                             std::size_t K, double c, double p,
                                             double snr_db,
                                             std::uint64_t trials,
                                             std::uint64_t seed,
                                             std::uint64_t point_tag,
                                             unsigned threads,
                                             const GlobalMcOptions& opts = {}) {
  validate_oracle(o);
  if (K < 1) throw ConsistencyError("worker count must be positive");
  if (!(c >= 0.0 && c < 1.0))
    throw ConsistencyError("corruption level must be in [0, 1)");
  if (!(p >= 0.0 && p <= 1.0))
    throw ConsistencyError("allocation probability must be in [0, 1]");
  if (trials < detail::kMinMcTrials)
    throw ConsistencyError("need at least 10000 trials");

  McGlobalEstimate out;
  out.regime_q = expected_hier_local_error(o.gsnr(), K, p, true);
  out.regime_valid = (1.0 - c) * (1.0 - out.regime_q) > 0.5;
  if (opts.enforce_regime && !out.regime_valid)
    throw InvalidRegimeError(
        "(1-c)(1-q) = " +
        std::to_string((1.0 - c) * (1.0 - out.regime_q)) +
        " is not above 1/2; the decode bound does not apply");

  detail::GlobalKernelParams gp;
  gp.K = K;
  gp.B = std::size_t(std::floor(c * double(K) + 1e-9));
  gp.c = c;
  gp.N0 = channel::snr_to_noise(snr_db, 1.0, 1);
  gp.fixed_rho = opts.fixed_rho;

  const auto cdf = detail::binomial_cdf_table(K - 1, p);
  std::vector<std::uint64_t> errors(kMcShards, 0);
  std::vector<double> bound_sums(kMcShards, 0.0);
  parallel_for(kMcShards, threads, [&](std::size_t t) {
    RngStream stream = make_stream(seed, "mc-shard", point_tag, t);
    detail::global_kernel(o, cdf, gp, detail::shard_trials(trials, t), stream,
                          errors[t], bound_sums[t]);
  });
  std::uint64_t total = 0;
  double bound_sum = 0.0;
  for (std::size_t t = 0; t < kMcShards; ++t) {
    total += errors[t];
    bound_sum += bound_sums[t];
  }
  out.est = make_estimate(total, trials);
  out.avg_bound = bound_sum / double(trials);
  return out;
}

// ---------------------------------------------------------------------------
// Diagnostics on real data (reporting only, never used for bound validity).

/// Per-coordinate GSNR estimate: sigma_j taken as the per-sample gradient
/// standard deviation over the given indices.
inline std::vector<double> estimate_gsnr(const learn::ModelParams& params,
                                         const data::Dataset& ds,
                                         const std::vector<std::size_t>& indices,
                                         std::size_t A) {
  if (indices.size() < 2)
    throw ConsistencyError("need at least two samples to estimate a spread");
  if (A < 1) throw ConsistencyError("batch size must be positive");
  const std::size_t d = params.shape.dim();
  std::vector<double> mean(d, 0.0), m2(d, 0.0);
  std::size_t count = 0;
  for (std::size_t i : indices) {
    const learn::GradientVector g =
        learn::gradient(params, ds, std::vector<std::size_t>{i});
    ++count;
    for (std::size_t j = 0; j < d; ++j) {
      const double delta = g.values[j] - mean[j];
      mean[j] += delta / double(count);
      m2[j] += delta * (g.values[j] - mean[j]);
    }
  }
  std::vector<double> J(d, 0.0);
  const double root_a = std::sqrt(double(A));
  for (std::size_t j = 0; j < d; ++j) {
    const double var = m2[j] / double(count - 1);
    if (var > 0.0)
      J[j] = root_a * std::abs(mean[j]) / std::sqrt(var);
    else
      J[j] = mean[j] == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return J;
}

/// Crude largest-eigenvalue estimate of the loss Hessian by power iteration
/// on finite-difference Hessian-vector products. Approximate; for reporting
/// a plausible smoothness scale only.
inline double estimate_hessian_lmax(const learn::ModelParams& params,
                                    const data::Dataset& ds,
                                    const std::vector<std::size_t>& indices,
                                    std::size_t iters, std::uint64_t seed) {
  if (iters < 1) throw ConsistencyError("need at least one iteration");
  const std::size_t d = params.shape.dim();
  RngStream stream = make_stream(seed, "hessian");
  std::vector<double> v(d);
  double nrm = 0.0;
  for (double& x : v) {
    x = stream.normal();
    nrm += x * x;
  }
  nrm = std::sqrt(nrm);
  for (double& x : v) x /= nrm;

  const double h = 1e-4;
  double lambda = 0.0;
  learn::ModelParams plus = params, minus = params;
  for (std::size_t it = 0; it < iters; ++it) {
    for (std::size_t j = 0; j < d; ++j) {
      plus.values[j] = params.values[j] + h * v[j];
      minus.values[j] = params.values[j] - h * v[j];
    }
    const learn::GradientVector gp = learn::gradient(plus, ds, indices);
    const learn::GradientVector gm = learn::gradient(minus, ds, indices);
    std::vector<double> hv(d);
    double dot = 0.0, hv_norm = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      hv[j] = (gp.values[j] - gm.values[j]) / (2.0 * h);
      dot += v[j] * hv[j];
      hv_norm += hv[j] * hv[j];
    }
    lambda = dot;
    hv_norm = std::sqrt(hv_norm);
    if (hv_norm == 0.0) return 0.0;
    for (std::size_t j = 0; j < d; ++j) v[j] = hv[j] / hv_norm;
  }
  return std::abs(lambda);
}

}  // namespace airvote::bounds
