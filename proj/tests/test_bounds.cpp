#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include <airvote/bounds.hpp>
#include <airvote/common.hpp>
#include <airvote/dataset.hpp>
#include <airvote/errors.hpp>
#include <airvote/model.hpp>

#include "support/stats.hpp"

using namespace airvote;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Majority-vote error by exhaustive enumeration of which ballots erred,
// independent of the binomial-tail closed form under test.
double brute_force_vote_error(double eps, std::size_t s, bool conservative) {
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << s); ++mask) {
    const int errs = __builtin_popcount(mask);
    double w = 1.0;
    for (std::size_t i = 0; i < s; ++i)
      w *= (mask >> i) & 1u ? eps : 1.0 - eps;
    // True sign +1: votes = s - 2e, decoded -1 only when strictly negative.
    // True sign -1 (conservative): votes = 2e - s, a tie decodes to +1.
    const int votes = conservative ? 2 * errs - int(s) : int(s) - 2 * errs;
    const int decoded = votes < 0 ? -1 : 1;
    const int truth = conservative ? -1 : 1;
    if (decoded != truth) total += w;
  }
  return total;
}

}  // namespace

TEST_CASE("gsnr grows with batch size and vanishes with the gradient",
          "[bounds]") {
  REQUIRE(bounds::gsnr(1.0, 1.0, 1) == 1.0);
  REQUIRE(bounds::gsnr(1.0, 1.0, 4) == 2.0);
  REQUIRE(bounds::gsnr(0.0, 2.0, 8) == 0.0);
  REQUIRE(bounds::gsnr(-3.0, 1.5, 1) == Catch::Approx(2.0));
  REQUIRE_THROWS_AS(bounds::gsnr(1.0, 0.0, 1), ConsistencyError);
  REQUIRE_THROWS_AS(bounds::gsnr(1.0, -1.0, 1), ConsistencyError);
  REQUIRE_THROWS_AS(bounds::gsnr(1.0, 1.0, 0), ConsistencyError);
}

TEST_CASE("per-ballot bound is continuous and non-increasing", "[bounds]") {
  const double breakpoint = 2.0 / std::sqrt(3.0);
  REQUIRE(bounds::lemma1_bound(breakpoint) ==
          Catch::Approx(1.0 / 6.0).margin(1e-15));
  REQUIRE(bounds::lemma1_bound(std::nextafter(breakpoint, 0.0)) ==
          Catch::Approx(1.0 / 6.0).margin(1e-12));
  REQUIRE(bounds::lemma1_bound(0.0) == 0.5);
  REQUIRE(bounds::lemma1_bound(3.0) == Catch::Approx(2.0 / 81.0).margin(1e-15));

  double prev = bounds::lemma1_bound(0.0);
  bool monotone = true;
  for (int i = 1; i <= 500; ++i) {
    const double cur = bounds::lemma1_bound(0.01 * double(i));
    monotone = monotone && cur <= prev + 1e-15 && cur <= 0.5;
    prev = cur;
  }
  REQUIRE(monotone);
  REQUIRE_THROWS_AS(bounds::lemma1_bound(-0.1), ConsistencyError);
}

TEST_CASE("local-vote bound follows the inverse square root", "[bounds]") {
  REQUIRE(bounds::prop1_bound(2.0, 4).value == Catch::Approx(0.25));
  REQUIRE(bounds::prop1_bound(1.7, 1).value == Catch::Approx(1.0 / 1.7));
  REQUIRE(bounds::prop1_bound(3.0, 10).value ==
          Catch::Approx(bounds::prop1_bound(3.0, 5).value / std::sqrt(2.0)));

  const auto vac = bounds::prop1_bound(0.5, 1);
  REQUIRE(vac.vacuous);
  REQUIRE(vac.value == Catch::Approx(2.0));
  const auto zero = bounds::prop1_bound(0.0, 3);
  REQUIRE(zero.vacuous);
  REQUIRE(std::isinf(zero.value));

  bool monotone = true;
  double prev = kInf;
  for (std::size_t s = 1; s <= 50; ++s) {
    const double cur = bounds::prop1_bound(1.5, s).value;
    monotone = monotone && cur <= prev;
    prev = cur;
  }
  REQUIRE(monotone);
  REQUIRE_THROWS_AS(bounds::prop1_bound(1.0, 0), ConsistencyError);
}

TEST_CASE("hierarchical bound keeps the stated validity range", "[bounds]") {
  const auto r = bounds::thm1_bound(2.0, 50, 0.1);
  REQUIRE(r.value == Catch::Approx(0.22360679774997896).epsilon(1e-12));
  REQUIRE(r.valid);
  REQUIRE_FALSE(r.vacuous);

  // The stated range is the open interval, so the endpoint is excluded.
  const auto boundary = bounds::thm1_bound(2.0, 50, 4.0 / (4.0 * 50.0));
  REQUIRE_FALSE(boundary.valid);
  REQUIRE_FALSE(boundary.note.empty());

  // Kp = 1 collapses to the single-ballot bound.
  REQUIRE(bounds::thm1_bound(1.3, 10, 0.1).value ==
          Catch::Approx(bounds::prop1_bound(1.3, 1).value).epsilon(1e-14));

  REQUIRE_THROWS_AS(bounds::thm1_bound(1.0, 0, 0.5), ConsistencyError);
  REQUIRE_THROWS_AS(bounds::thm1_bound(1.0, 10, 0.0), ConsistencyError);
  REQUIRE_THROWS_AS(bounds::thm1_bound(1.0, 10, 1.2), ConsistencyError);

  bool monotone = true;
  double prev = kInf;
  for (std::size_t K = 1; K <= 100; ++K) {
    const double cur = bounds::thm1_bound(2.0, K, 0.3).value;
    monotone = monotone && cur <= prev;
    prev = cur;
  }
  prev = kInf;
  for (int i = 1; i <= 100; ++i) {
    const double cur = bounds::thm1_bound(2.0, 50, 0.01 * double(i)).value;
    monotone = monotone && cur <= prev;
    prev = cur;
  }
  prev = kInf;
  for (int i = 1; i <= 50; ++i) {
    const double cur = bounds::thm1_bound(0.1 * double(i), 50, 0.1).value;
    monotone = monotone && cur <= prev;
    prev = cur;
  }
  REQUIRE(monotone);
}

TEST_CASE("global decode bound splits into vote and noise terms", "[bounds]") {
  const auto clean = bounds::thm2_bound(0.4, 50, 0.0, 1.0, 0.0);
  REQUIRE(clean.value == Catch::Approx(0.05477225575051662).epsilon(1e-12));
  REQUIRE(clean.valid);

  const double noise_term = bounds::thm2_bound(0.0, 50, 0.1, 0.5, 0.0).value -
                            bounds::thm2_bound(0.0, 50, 0.0, 0.5, 0.0).value;
  REQUIRE(noise_term == Catch::Approx(0.008944271909999158).epsilon(1e-12));

  const auto edge = bounds::thm2_bound(0.5, 50, 0.0, 1.0, 0.0);
  REQUIRE_FALSE(edge.valid);  // (1-c)(1-q) = 1/2 exactly, not above

  REQUIRE_THROWS_AS(bounds::thm2_bound(1.0, 50, 0.0, 1.0, 0.0),
                    ConsistencyError);
  REQUIRE_THROWS_AS(bounds::thm2_bound(0.1, 50, 0.0, 0.0, 0.0),
                    ConsistencyError);
  REQUIRE_THROWS_AS(bounds::thm2_bound(0.1, 50, -0.1, 1.0, 0.0),
                    ConsistencyError);
  REQUIRE_THROWS_AS(bounds::thm2_bound(0.1, 50, 0.0, 1.0, 1.5),
                    ConsistencyError);
}

TEST_CASE("global decode bound moves the right way on a grid", "[bounds]") {
  bool ok = true;
  double prev = kInf;
  for (std::size_t K = 1; K <= 100; ++K) {
    const double cur = bounds::thm2_bound(0.2, K, 0.1, 0.7, 0.0).value;
    ok = ok && cur <= prev;
    prev = cur;
  }
  prev = kInf;
  for (int i = 1; i <= 30; ++i) {
    const double cur = bounds::thm2_bound(0.2, 50, 0.1, 0.1 * double(i), 0.0).value;
    ok = ok && cur <= prev;
    prev = cur;
  }
  prev = -kInf;
  for (int i = 0; i <= 20; ++i) {
    const double cur = bounds::thm2_bound(0.2, 50, 0.05 * double(i), 0.7, 0.0).value;
    ok = ok && cur >= prev;
    prev = cur;
  }
  prev = kInf;
  for (int i = 0; i <= 19; ++i) {
    const double cur = bounds::thm2_bound(0.05 * double(i), 50, 0.1, 0.7, 0.0).value;
    ok = ok && cur <= prev;
    prev = cur;
  }
  REQUIRE(ok);
}

TEST_CASE("convergence bound has the advertised limit and scaling",
          "[bounds]") {
  // Huge fleet, clean channel: Delta -> 1 and the bound collapses to
  // sqrt(L1/T) (F0 - Fstar + 1/(2T)).
  const auto lim = bounds::thm3_bound(4, 2.25, 3.0, 1.0, 0.0,
                                      std::size_t(1) << 40, 0.0, 1.0);
  REQUIRE(lim.valid);
  REQUIRE(lim.value == Catch::Approx(1.59375).epsilon(1e-5));

  const double b1 =
      bounds::thm3_bound(1000000, 1.0, 2.0, 0.0, 0.0, 50, 0.0, 1.0).value;
  const double b4 =
      bounds::thm3_bound(4000000, 1.0, 2.0, 0.0, 0.0, 50, 0.0, 1.0).value;
  REQUIRE(b4 / b1 == Catch::Approx(0.5).epsilon(1e-5));

  REQUIRE(bounds::thm3_delta(0.4, 50, 0.0, 1.0) ==
          Catch::Approx(0.8904554884989668).epsilon(1e-12));

  // Straggler-dominated: rho_min too small for the noise level.
  const auto bad = bounds::thm3_bound(100, 1.0, 2.0, 0.0, 0.0, 10, 4.0, 0.01);
  REQUIRE_FALSE(bad.valid);
  REQUIRE_FALSE(bad.note.empty());

  REQUIRE_THROWS_AS(bounds::thm3_bound(0, 1.0, 2.0, 0.0, 0.0, 10, 0.0, 1.0),
                    ConsistencyError);
  REQUIRE_THROWS_AS(bounds::thm3_bound(10, 0.0, 2.0, 0.0, 0.0, 10, 0.0, 1.0),
                    ConsistencyError);
  REQUIRE_THROWS_AS(bounds::thm3_bound(10, 1.0, 1.0, 2.0, 0.0, 10, 0.0, 1.0),
                    ConsistencyError);
}

TEST_CASE("exact vote error matches exhaustive enumeration", "[bounds]") {
  REQUIRE(bounds::ballot_error_probability(0.0) == Catch::Approx(0.5));
  REQUIRE(bounds::ballot_error_probability(1.0) ==
          Catch::Approx(0.15865525393145705).epsilon(1e-12));

  bool all_match = true;
  for (double J : {0.3, 1.0, 2.2}) {
    const double eps = bounds::ballot_error_probability(J);
    for (std::size_t s = 1; s <= 8; ++s) {
      for (bool cons : {false, true}) {
        const double exact = bounds::exact_local_vote_error(J, s, cons);
        const double brute = brute_force_vote_error(eps, s, cons);
        all_match = all_match && std::abs(exact - brute) <= 1e-12;
      }
    }
  }
  REQUIRE(all_match);
  REQUIRE_THROWS_AS(bounds::exact_local_vote_error(1.0, 0), ConsistencyError);
}

TEST_CASE("expected hierarchical error averages the binomial law", "[bounds]") {
  const double J = 0.8;
  REQUIRE(bounds::expected_hier_local_error(J, 7, 0.0) ==
          Catch::Approx(bounds::exact_local_vote_error(J, 1)).margin(1e-14));
  REQUIRE(bounds::expected_hier_local_error(J, 7, 1.0) ==
          Catch::Approx(bounds::exact_local_vote_error(J, 7)).margin(1e-14));

  // Small-K cross-check with explicit binomial weights.
  const std::size_t K = 6;
  const double p = 0.3;
  const double choose[6] = {1, 5, 10, 10, 5, 1};
  for (bool cons : {false, true}) {
    double expect = 0.0;
    for (std::size_t n = 0; n <= 5; ++n)
      expect += choose[n] * std::pow(p, double(n)) *
                std::pow(1.0 - p, double(5 - n)) *
                bounds::exact_local_vote_error(J, 1 + n, cons);
    REQUIRE(bounds::expected_hier_local_error(J, K, p, cons) ==
            Catch::Approx(expect).margin(1e-13));
  }
}

TEST_CASE("gradient oracle matches its advertised moments", "[bounds]") {
  bounds::GaussianGradOracle o{0.7, 2.0, 4};
  REQUIRE(o.gsnr() == Catch::Approx(0.7));
  REQUIRE(o.ballot_sigma() == Catch::Approx(1.0));
  REQUIRE(o.true_sign() == 1);
  REQUIRE(bounds::oracle_for_gsnr(2.5).gsnr() == Catch::Approx(2.5));

  RngStream s = make_stream(31, "test");
  const std::size_t n = 1000000;
  std::vector<double> draws(n);
  for (double& x : draws) x = o.draw(s);
  const double mean = teststats::mean(draws);
  const double var = teststats::sample_variance(draws);
  REQUIRE(std::abs(mean - 0.7) < 0.005);
  REQUIRE(var <= (o.sigma * o.sigma / double(o.A)) * 1.02);
  REQUIRE(var >= (o.sigma * o.sigma / double(o.A)) * 0.98);
}

TEST_CASE("simulated local vote agrees with the Gaussian tail", "[bounds]") {
  // No noise relative to the signal: never wrong.
  bounds::GaussianGradOracle quiet{1.0, 1e-9, 1};
  RngStream s0 = make_stream(41, "test", 0);
  REQUIRE(bounds::mc_local_error(quiet, 3, 10000, s0).rate == 0.0);

  RngStream s1 = make_stream(41, "test", 1);
  const auto one = bounds::mc_local_error(bounds::oracle_for_gsnr(1.0), 1,
                                          100000, s1);
  const double phi = 0.15865525393145705;
  REQUIRE(one.ci_low <= phi);
  REQUIRE(one.ci_high >= phi);

  RngStream s2 = make_stream(41, "test", 2);
  const auto five = bounds::mc_local_error(bounds::oracle_for_gsnr(1.0), 5,
                                           100000, s2);
  REQUIRE(five.rate <= bounds::prop1_bound(1.0, 5).value + 3.0 * five.se);
  const double exact5 = bounds::exact_local_vote_error(1.0, 5);
  REQUIRE(std::abs(five.rate - exact5) <= 5.0 * five.se);

  RngStream s3 = make_stream(41, "test", 3);
  REQUIRE_THROWS_AS(
      bounds::mc_local_error(bounds::oracle_for_gsnr(1.0), 1, 9999, s3),
      ConsistencyError);
  REQUIRE_THROWS_AS(
      bounds::mc_local_error(bounds::GaussianGradOracle{1.0, -1.0, 1}, 1,
                             10000, s3),
      ConsistencyError);
}

TEST_CASE("simulated hierarchical vote covers its degenerate ends",
          "[bounds]") {
  const auto o = bounds::oracle_for_gsnr(1.0);
  RngStream s1 = make_stream(43, "test", 1);
  const auto p0 = bounds::mc_theorem1_error(o, 20, 0.0, 100000, s1);
  const double phi = 0.15865525393145705;  // s = 1 always
  REQUIRE(p0.ci_low <= phi);
  REQUIRE(p0.ci_high >= phi);

  RngStream s2 = make_stream(43, "test", 2);
  const auto p1 = bounds::mc_theorem1_error(bounds::oracle_for_gsnr(0.5), 9,
                                            1.0, 100000, s2);
  const double exact9 = bounds::exact_local_vote_error(0.5, 9);
  REQUIRE(p1.ci_low <= exact9);
  REQUIRE(p1.ci_high >= exact9);

  RngStream s3 = make_stream(43, "test", 3);
  const auto mid = bounds::mc_theorem1_error(bounds::oracle_for_gsnr(2.0), 50,
                                             0.1, 100000, s3);
  REQUIRE(mid.rate <= 0.22360679774997896 + 3.0 * mid.se);

  RngStream s4 = make_stream(43, "test", 4);
  REQUIRE_THROWS_AS(bounds::mc_theorem1_error(o, 0, 0.1, 10000, s4),
                    ConsistencyError);
  REQUIRE_THROWS_AS(bounds::mc_theorem1_error(o, 10, 1.5, 10000, s4),
                    ConsistencyError);
}

TEST_CASE("simulated global decode stays under the closed form", "[bounds]") {
  const auto o2 = bounds::oracle_for_gsnr(2.0);

  RngStream s1 = make_stream(47, "test", 1);
  const auto clean =
      bounds::mc_global_error(o2, 50, 0.0, 1.0, kInf, 20000, s1);
  REQUIRE(clean.regime_valid);
  REQUIRE(clean.est.rate <= 0.07071067811865475 + 3.0 * clean.est.se);

  RngStream s2 = make_stream(47, "test", 2);
  const auto hostile =
      bounds::mc_global_error(o2, 50, 0.4, 0.1, 10.0, 20000, s2);
  REQUIRE(hostile.est.rate <= hostile.avg_bound + 3.0 * hostile.est.se);
  REQUIRE(hostile.regime_valid);
}

TEST_CASE("majority loss and perfect systems sit at the extremes",
          "[bounds]") {
  bounds::GaussianGradOracle sharp{1.0, 1e-9, 1};

  // Four colluders against one honest worker: every round decodes wrong.
  RngStream s1 = make_stream(53, "test", 1);
  bounds::GlobalMcOptions open;
  open.enforce_regime = false;
  const auto lost =
      bounds::mc_global_error(sharp, 5, 0.8, 1.0, kInf, 10000, s1, open);
  REQUIRE_FALSE(lost.regime_valid);
  REQUIRE(lost.est.rate == 1.0);

  // No attackers, no noise, no gradient noise: never wrong.
  RngStream s2 = make_stream(53, "test", 2);
  const auto perfect =
      bounds::mc_global_error(sharp, 50, 0.0, 0.0, kInf, 10000, s2);
  REQUIRE(perfect.est.rate == 0.0);

  // Outside the decode regime the estimator refuses by default.
  RngStream s3 = make_stream(53, "test", 3);
  REQUIRE_THROWS_AS(bounds::mc_global_error(bounds::oracle_for_gsnr(0.5), 10,
                                            0.4, 0.05, 10.0, 10000, s3),
                    InvalidRegimeError);
}

TEST_CASE("fixed receive amplitude skips the fading draw", "[bounds]") {
  bounds::GlobalMcOptions opts;
  opts.fixed_rho = 0.5;
  RngStream s1 = make_stream(59, "test", 1);
  const auto r = bounds::mc_global_error(bounds::oracle_for_gsnr(2.0), 50, 0.2,
                                         0.1, 10.0, 20000, s1, opts);
  // With constant rho the averaged bound equals the single closed form.
  const double q = bounds::expected_hier_local_error(2.0, 50, 0.1, true);
  const auto direct = bounds::thm2_bound(0.2, 50, 0.1, 0.5, q);
  REQUIRE(r.avg_bound == Catch::Approx(direct.value).epsilon(1e-12));
  REQUIRE(r.est.rate <= r.avg_bound + 3.0 * r.est.se);

  bounds::GlobalMcOptions bad;
  bad.fixed_rho = 0.0;
  RngStream s2 = make_stream(59, "test", 2);
  REQUIRE_THROWS_AS(bounds::mc_global_error(bounds::oracle_for_gsnr(2.0), 50,
                                            0.2, 0.1, 10.0, 20000, s2, bad),
                    ConsistencyError);
}

TEST_CASE("wilson intervals bracket the point estimate", "[bounds]") {
  const auto zero = bounds::make_estimate(0, 10000);
  REQUIRE(zero.rate == 0.0);
  REQUIRE(zero.ci_low == 0.0);
  REQUIRE(zero.ci_high > 0.0);

  const auto full = bounds::make_estimate(10000, 10000);
  REQUIRE(full.rate == 1.0);
  REQUIRE(full.ci_high == 1.0);
  REQUIRE(full.ci_low < 1.0);

  const auto mid = bounds::make_estimate(500, 10000);
  REQUIRE(mid.ci_low <= mid.rate);
  REQUIRE(mid.ci_high >= mid.rate);
  const auto wide = bounds::make_estimate(50, 1000);
  REQUIRE(wide.ci_high - wide.ci_low > mid.ci_high - mid.ci_low);
}

TEST_CASE("sharded estimators ignore the thread count", "[bounds]") {
  const auto o = bounds::oracle_for_gsnr(1.0);

  const auto l1 = bounds::sharded_local_error(o, 3, 20000, 7, 42, 1);
  const auto l4 = bounds::sharded_local_error(o, 3, 20000, 7, 42, 4);
  REQUIRE(l1.errors == l4.errors);
  REQUIRE(l1.rate == l4.rate);

  const auto t1 = bounds::sharded_theorem1_error(o, 20, 0.2, 20000, 7, 43, 1);
  const auto t4 = bounds::sharded_theorem1_error(o, 20, 0.2, 20000, 7, 43, 4);
  REQUIRE(t1.errors == t4.errors);

  const auto g1 =
      bounds::sharded_global_error(o, 10, 0.1, 0.3, 10.0, 20000, 7, 44, 1);
  const auto g3 =
      bounds::sharded_global_error(o, 10, 0.1, 0.3, 10.0, 20000, 7, 44, 3);
  REQUIRE(g1.est.errors == g3.est.errors);
  REQUIRE(g1.avg_bound == g3.avg_bound);

  // A different point tag gives an independent stream.
  const auto other = bounds::sharded_local_error(o, 3, 20000, 7, 99, 2);
  REQUIRE(l1.errors != other.errors);
}

TEST_CASE("closed forms dominate the exact error across the grid",
          "[bounds]") {
  bool ok = true;
  for (double J : {0.5, 1.0, 2.0, 4.0}) {
    for (std::size_t s : {1, 3, 5, 9}) {
      const auto b = bounds::prop1_bound(J, s);
      ok = ok && bounds::exact_local_vote_error(J, s) <= b.value + 1e-12;
    }
    for (std::size_t K : {10, 50}) {
      for (double p : {0.05, 0.1, 0.3}) {
        const auto b = bounds::thm1_bound(J, K, p);
        if (!b.valid) continue;  // outside the stated p-range
        ok = ok &&
             bounds::expected_hier_local_error(J, K, p) <= b.value + 1e-12;
      }
    }
  }
  REQUIRE(ok);
}

TEST_CASE("simulated decode stays under the bound across a grid",
          "[bounds][slow]") {
  const auto o = bounds::oracle_for_gsnr(2.0);
  std::size_t checked = 0, skipped = 0;
  for (std::size_t K : {10, 50}) {
    for (double p : {0.05, 0.3}) {
      for (double c : {0.0, 0.4}) {
        for (double snr : {0.0, 20.0}) {
          const std::uint64_t tag =
              fnv1a64("grid:" + std::to_string(K) + ":" + std::to_string(p) +
                      ":" + std::to_string(c) + ":" + std::to_string(snr));
          const double q = bounds::expected_hier_local_error(2.0, K, p, true);
          if (!((1.0 - c) * (1.0 - q) > 0.5)) {
            ++skipped;
            continue;
          }
          const auto r = bounds::sharded_global_error(o, K, c, p, snr, 10000,
                                                      61, tag, 2);
          INFO("K=" << K << " p=" << p << " c=" << c << " snr=" << snr);
          REQUIRE(r.est.rate <= r.avg_bound + 3.0 * r.est.se);
          ++checked;
        }
      }
    }
  }
  REQUIRE(checked >= 12);
  REQUIRE(checked + skipped == 16);
}

TEST_CASE("gsnr estimation reproduces a direct computation", "[bounds]") {
  const data::Dataset ds = data::generate_synthetic(2, 40, 3, 2.0, 5);
  learn::ModelShape shape;
  shape.kind = learn::ModelKind::logistic;
  shape.f = 3;
  shape.C = 2;
  learn::ModelParams params = learn::make_params(shape, 17);

  std::vector<std::size_t> idx(ds.n);
  for (std::size_t i = 0; i < ds.n; ++i) idx[i] = i;

  const std::size_t d = shape.dim();
  std::vector<std::vector<double>> per_sample;
  for (std::size_t i : idx)
    per_sample.push_back(
        learn::gradient(params, ds, std::vector<std::size_t>{i}).values);

  const std::size_t A = 16;
  const auto J = bounds::estimate_gsnr(params, ds, idx, A);
  REQUIRE(J.size() == d);
  bool close = true;
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> coord;
    for (const auto& g : per_sample) coord.push_back(g[j]);
    const double m = teststats::mean(coord);
    const double sd = std::sqrt(teststats::sample_variance(coord));
    const double expect = sd > 0.0 ? std::sqrt(double(A)) * std::abs(m) / sd
                                   : 0.0;
    close = close && std::abs(J[j] - expect) <= 1e-10 * (1.0 + expect);
  }
  REQUIRE(close);
  REQUIRE_THROWS_AS(bounds::estimate_gsnr(params, ds, {0}, A),
                    ConsistencyError);
}

TEST_CASE("power iteration finds the top curvature direction", "[bounds]") {
  const data::Dataset ds = data::generate_synthetic(2, 20, 2, 3.0, 9);
  learn::ModelShape shape;
  shape.kind = learn::ModelKind::logistic;
  shape.f = 2;
  shape.C = 2;
  learn::ModelParams params = learn::make_params(shape, 3);
  std::vector<std::size_t> idx(ds.n);
  for (std::size_t i = 0; i < ds.n; ++i) idx[i] = i;

  // Dense finite-difference Hessian, then power iteration on the matrix.
  const std::size_t d = shape.dim();
  const double h = 1e-5;
  std::vector<std::vector<double>> H(d, std::vector<double>(d, 0.0));
  for (std::size_t j = 0; j < d; ++j) {
    learn::ModelParams plus = params, minus = params;
    plus.values[j] += h;
    minus.values[j] -= h;
    const auto gp = learn::gradient(plus, ds, idx);
    const auto gm = learn::gradient(minus, ds, idx);
    for (std::size_t i = 0; i < d; ++i)
      H[i][j] = (gp.values[i] - gm.values[i]) / (2.0 * h);
  }
  std::vector<double> v(d, 1.0 / std::sqrt(double(d)));
  double lambda = 0.0;
  for (int it = 0; it < 300; ++it) {
    std::vector<double> w(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) w[i] += H[i][j] * v[j];
    double nrm = 0.0, dot = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      dot += v[i] * w[i];
      nrm += w[i] * w[i];
    }
    lambda = dot;
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < d; ++i) v[i] = w[i] / nrm;
  }

  const double est = bounds::estimate_hessian_lmax(params, ds, idx, 60, 11);
  REQUIRE(est == Catch::Approx(std::abs(lambda)).epsilon(0.05));
  REQUIRE_THROWS_AS(bounds::estimate_hessian_lmax(params, ds, idx, 0, 11),
                    ConsistencyError);
}
