#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "channel.hpp"
#include "common.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "geometric_median.hpp"
#include "model.hpp"
#include "worker.hpp"

namespace airvote::server {

enum class Scheme {
  hierarchical,
  naive_signsgd,
  hierarchical_noise_free,
  digital_gm,
};

inline std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::hierarchical: return "hierarchical";
    case Scheme::naive_signsgd: return "naive_signsgd";
    case Scheme::hierarchical_noise_free: return "hierarchical_noise_free";
    case Scheme::digital_gm: return "digital_gm";
  }
  return "unknown";
}

inline std::optional<Scheme> parse_scheme(std::string_view name) {
  if (name == "hierarchical") return Scheme::hierarchical;
  if (name == "naive_signsgd") return Scheme::naive_signsgd;
  if (name == "hierarchical_noise_free") return Scheme::hierarchical_noise_free;
  if (name == "digital_gm") return Scheme::digital_gm;
  return std::nullopt;
}

struct SyntheticSpec {
  int classes = 2;
  std::size_t per_class = 1000;
  std::size_t features = 20;
  double separation = 2.5;
  std::uint64_t seed = 1;
  std::size_t test_per_class = 500;
};

struct MnistSpec {
  std::string images;
  std::string labels;
  std::string test_images;
  std::string test_labels;
  int keep_classes = 0;           // 0 keeps all ten digit classes
  std::size_t max_per_class = 0;  // 0 keeps everything
};

struct DatasetSpec {
  enum class Kind { synthetic, mnist };
  Kind kind = Kind::synthetic;
  SyntheticSpec synthetic;
  MnistSpec mnist;
};

namespace detail {

// Optionally restricts a dataset to its first `keep_classes` labels and to at
// most `max_per_class` samples per class, preserving file order.
inline data::Dataset filter_dataset(const data::Dataset& ds, int keep_classes,
                                    std::size_t max_per_class) {
  if (keep_classes == 0 && max_per_class == 0) return ds;
  const int classes = keep_classes > 0 ? keep_classes : ds.num_classes;
  if (classes > ds.num_classes)
    throw ConsistencyError("cannot keep more classes than the dataset has");
  data::Dataset out;
  out.f = ds.f;
  out.num_classes = classes;
  out.name = ds.name + "/subset";
  std::vector<std::size_t> kept_per_class(classes, 0);
  for (std::size_t i = 0; i < ds.n; ++i) {
    const int y = ds.labels[i];
    if (y >= classes) continue;
    if (max_per_class > 0 && kept_per_class[y] >= max_per_class) continue;
    ++kept_per_class[y];
    out.labels.push_back(y);
    const double* row = ds.row(i);
    out.features.insert(out.features.end(), row, row + ds.f);
  }
  out.n = out.labels.size();
  data::validate_dataset(out);
  return out;
}

}  // namespace detail

inline std::pair<data::Dataset, data::Dataset> materialize_datasets(
    const DatasetSpec& spec) {
  if (spec.kind == DatasetSpec::Kind::synthetic) {
    const auto& s = spec.synthetic;
    data::Dataset train = data::generate_synthetic(
        s.classes, s.per_class, s.features, s.separation, s.seed);
    data::Dataset test = data::generate_synthetic(
        s.classes, s.test_per_class, s.features, s.separation,
        derive_seed(s.seed, "test-split"));
    test.name = "synthetic_test";
    return {std::move(train), std::move(test)};
  }
  const auto& m = spec.mnist;
  data::Dataset train = detail::filter_dataset(
      data::load_mnist_idx(m.images, m.labels), m.keep_classes,
      m.max_per_class);
  data::Dataset test = detail::filter_dataset(
      data::load_mnist_idx(m.test_images, m.test_labels), m.keep_classes,
      m.max_per_class);
  return {std::move(train), std::move(test)};
}

struct ExperimentConfig {
  Scheme scheme = Scheme::hierarchical;
  std::size_t K = 50;
  double c = 0.0;
  double p = 0.1;
  std::size_t A = 32;
  double eta = 0.01;
  std::size_t T = 100;
  double snr_db = 10.0;
  std::uint64_t seed = 1;
  learn::ModelKind model_kind = learn::ModelKind::logistic;
  std::size_t mlp_hidden = 32;
  DatasetSpec dataset;
  std::optional<worker::AttackSpec> attack;
  double h_min = 0.0;                   // 0 disables the gain cutoff
  double byzantine_power_scale = 1.0;   // transmit-power multiplier for attackers
  std::size_t eval_stride = 1;
};

inline void validate_config(const ExperimentConfig& cfg) {
  if (cfg.K < 1) throw ConsistencyError("K must be positive");
  if (!(cfg.c >= 0.0 && cfg.c < 1.0))
    throw ConsistencyError("corruption level must be in [0, 1)");
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0))
    throw ConsistencyError("allocation probability must be in [0, 1]");
  if (cfg.A < 1) throw ConsistencyError("batch size must be positive");
  if (!(cfg.eta > 0.0)) throw ConsistencyError("eta must be positive");
  if (cfg.T < 1) throw ConsistencyError("round count must be positive");
  if (std::isnan(cfg.snr_db)) throw ConsistencyError("snr_db must be a number");
  if (!(cfg.h_min >= 0.0)) throw ConsistencyError("h_min must be non-negative");
  if (!(cfg.byzantine_power_scale > 0.0))
    throw ConsistencyError("byzantine power scale must be positive");
  if (cfg.eval_stride < 1) throw ConsistencyError("eval stride must be positive");
  if (cfg.model_kind == learn::ModelKind::mlp && cfg.mlp_hidden < 1)
    throw ConsistencyError("mlp hidden width must be positive");
  const std::size_t B = std::size_t(std::floor(cfg.c * double(cfg.K) + 1e-9));
  if (B > 0 && !cfg.attack)
    throw ConsistencyError(
        "corruption level places workers under attacker control but no attack "
        "is configured");
}

struct RoundMetrics {
  std::size_t round = 0;
  bool evaluated = false;
  double train_loss = 0.0;
  double test_accuracy = 0.0;
  double sign_error_rate = 0.0;  // fraction of decoded coordinates that
                                 // disagree with sign(full-batch gradient)
  double rho = 0.0;
  double min_channel_gain = 0.0;
  double wall_time = 0.0;  // measured seconds; persisted outputs write 0
};

struct OperationTotals {
  std::uint64_t local_sgd = 0;  // mini-batch gradient evaluations
  std::uint64_t gm = 0;         // geometric-median aggregations
  std::uint64_t aircomp = 0;    // superposed channel uses
  std::uint64_t digital = 0;    // per-worker digital uplink transmissions
  std::uint64_t weiszfeld_iterations = 0;
  std::uint64_t weiszfeld_failures = 0;
};

struct RunResult {
  std::vector<RoundMetrics> metrics;
  learn::ModelParams final_params;
  ExperimentConfig config;
  OperationTotals totals;
  std::vector<std::string> warnings;
  double final_train_loss = 0.0;
  double final_test_accuracy = 0.0;
};

/// Nominal per-round operation counts for each aggregation scheme, as used in
/// communication/computation comparisons. For the hierarchical scheme the
/// local-SGD cell is the headline product p*K*K; the exact expectation
/// K*(1+(K-1)p), which additionally counts each worker's own sub-dataset, is
/// reported alongside under a separate name.
struct OperationCounts {
  double local_sgd = 0.0;
  double gm = 0.0;
  double aircomp = 0.0;
  double digital = 0.0;
  std::optional<double> local_sgd_expected;
};

inline OperationCounts operation_counts(std::string_view scheme, std::size_t K,
                                        double p, std::size_t G,
                                        std::size_t U) {
  if (K < 1) throw ConsistencyError("K must be positive");
  OperationCounts out;
  if (scheme == "hierarchical") {
    if (!(p >= 0.0 && p <= 1.0))
      throw ConsistencyError("allocation probability must be in [0, 1]");
    out.local_sgd = p * double(K) * double(K);
    out.aircomp = 1;
    out.local_sgd_expected = double(K) * (1.0 + double(K - 1) * p);
  } else if (scheme == "digital_gm") {
    out.local_sgd = double(K);
    out.gm = 1;
    out.digital = double(K);
  } else if (scheme == "rotaf") {
    if (G < 1) throw ConsistencyError("cluster count must be positive");
    out.local_sgd = double(K);
    out.gm = 1;
    out.aircomp = double(G);
  } else if (scheme == "aircomp_gm") {
    if (U < 1) throw ConsistencyError("iteration cap must be positive");
    out.local_sgd = double(K);
    out.aircomp = double(U);
  } else {
    throw ConsistencyError("unknown scheme '" + std::string(scheme) + "'");
  }
  return out;
}

namespace detail {

struct RunContext {
  data::Dataset train;
  data::Dataset test;
  data::Dataset flipped;  // populated only for the label-flip attack
  data::Partition part;
  std::vector<std::vector<std::size_t>> held_sets;
  std::vector<bool> is_byz;
  std::size_t B = 0;
  std::size_t mimic_target = 0;
  bool label_flip = false;
  learn::ModelShape shape;
  std::vector<std::size_t> all_train;
  double P0 = 0.0;
  double N0 = 0.0;
};

inline RunContext build_context(const ExperimentConfig& cfg) {
  RunContext ctx;
  auto [train, test] = materialize_datasets(cfg.dataset);
  data::validate_dataset(train);
  data::validate_dataset(test);
  ctx.train = std::move(train);
  ctx.test = std::move(test);

  ctx.shape.kind = cfg.model_kind;
  ctx.shape.f = ctx.train.f;
  ctx.shape.C = ctx.train.num_classes;
  ctx.shape.H = cfg.model_kind == learn::ModelKind::mlp ? cfg.mlp_hidden : 0;
  learn::validate_shape(ctx.shape);

  ctx.part = data::partition(ctx.train, cfg.K, cfg.seed);
  if (cfg.A > ctx.part.subset_size)
    throw ConsistencyError("batch size " + std::to_string(cfg.A) +
                           " exceeds subset size " +
                           std::to_string(ctx.part.subset_size));

  const double effective_p =
      cfg.scheme == Scheme::naive_signsgd ? 0.0 : cfg.p;
  const data::AllocationMatrix E =
      data::generate_allocation(cfg.K, effective_p, cfg.seed);
  ctx.held_sets = data::assigned_sets(E);

  ctx.B = std::size_t(std::floor(cfg.c * double(cfg.K) + 1e-9));
  ctx.is_byz.assign(cfg.K, false);
  if (ctx.B > 0) {
    std::vector<std::size_t> ids(cfg.K);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    RngStream stream = make_stream(cfg.seed, "byzantine");
    for (std::size_t i = cfg.K - 1; i > 0; --i) {
      const std::size_t j = stream.next_below(i + 1);
      std::swap(ids[i], ids[j]);
    }
    for (std::size_t i = 0; i < ctx.B; ++i) ctx.is_byz[ids[i]] = true;
  }

  if (cfg.attack && ctx.B > 0) {
    const auto variant = cfg.attack->variant;
    ctx.label_flip = variant == worker::AttackSpec::Variant::label_flip;
    if (ctx.label_flip) ctx.flipped = worker::label_flip_view(ctx.train);
    if (variant == worker::AttackSpec::Variant::mimic) {
      if (cfg.attack->mimic_target) {
        const std::size_t target = *cfg.attack->mimic_target;
        if (target >= cfg.K || ctx.is_byz[target])
          throw ConfigError("mimic target " + std::to_string(target) +
                            " is not an honest worker");
        ctx.mimic_target = target;
      } else {
        std::size_t target = 0;
        while (ctx.is_byz[target]) ++target;
        ctx.mimic_target = target;
      }
    }
  }

  ctx.all_train.resize(ctx.train.n);
  std::iota(ctx.all_train.begin(), ctx.all_train.end(), std::size_t{0});

  const std::size_t d = ctx.shape.dim();
  ctx.P0 = double(d);  // normalized so P0/d = 1
  ctx.N0 = cfg.scheme == Scheme::hierarchical_noise_free
               ? 0.0
               : channel::snr_to_noise(cfg.snr_db, ctx.P0, d);
  return ctx;
}

inline void fill_eval_metrics(RoundMetrics& m, const learn::ModelParams& params,
                              const RunContext& ctx,
                              const learn::GradientVector& g_true,
                              const learn::SignVector& decoded) {
  m.evaluated = true;
  m.train_loss = learn::loss(params, ctx.train, ctx.all_train);
  m.test_accuracy = learn::accuracy(params, ctx.test);
  const learn::SignVector truth = learn::sign_quantize(g_true);
  std::size_t diff = 0;
  for (std::size_t j = 0; j < truth.size(); ++j)
    diff += decoded.signs[j] != truth.signs[j];
  m.sign_error_rate = double(diff) / double(truth.size());
}

inline RunResult run_vote_scheme(const ExperimentConfig& cfg,
                                 RunContext& ctx, unsigned threads) {
  using clock = std::chrono::steady_clock;
  const std::size_t d = ctx.shape.dim();
  learn::ModelParams params = learn::make_params(ctx.shape, cfg.seed);
  RunResult res;
  res.config = cfg;
  res.metrics.reserve(cfg.T);
  const bool oracle_attack =
      cfg.attack &&
      cfg.attack->variant == worker::AttackSpec::Variant::oracle_sign_flip &&
      ctx.B > 0;

  for (std::size_t t = 0; t < cfg.T; ++t) {
    const auto t_start = clock::now();
    const bool eval = (t % cfg.eval_stride == 0) || (t + 1 == cfg.T);
    learn::GradientVector g_true;
    if (eval || oracle_attack)
      g_true = learn::gradient(params, ctx.train, ctx.all_train);

    // Phase 1: every worker that runs the local-vote pipeline. Byzantine
    // workers participate here only under the label-flip attack, where they
    // run the same pipeline on the poisoned view.
    std::vector<std::optional<worker::LocalUpdate>> updates(cfg.K);
    parallel_for(cfg.K, threads, [&](std::size_t k) {
      const worker::SubsetSeeder seeder{cfg.seed, k, t};
      if (!ctx.is_byz[k])
        updates[k] = worker::honest_update(params, ctx.train, ctx.part,
                                           ctx.held_sets[k], cfg.A, seeder);
      else if (ctx.label_flip)
        updates[k] = worker::honest_update(params, ctx.flipped, ctx.part,
                                           ctx.held_sets[k], cfg.A, seeder);
    });
    std::size_t phase1_done = 0;
    for (const auto& u : updates) phase1_done += u.has_value();
    const std::size_t phase1_expected =
        ctx.label_flip ? cfg.K : cfg.K - ctx.B;
    if (phase1_done != phase1_expected)
      throw std::logic_error("phase ordering violated: attacker ran before "
                             "honest updates completed");

    // Phase 2: attacks that observe the honest round.
    if (ctx.B > 0 && cfg.attack && !ctx.label_flip) {
      switch (cfg.attack->variant) {
        case worker::AttackSpec::Variant::directional:
          for (std::size_t k = 0; k < cfg.K; ++k)
            if (ctx.is_byz[k])
              updates[k] = worker::directional_update(d, k, t);
          break;
        case worker::AttackSpec::Variant::mimic: {
          const learn::SignVector& target =
              updates[ctx.mimic_target]->message;
          for (std::size_t k = 0; k < cfg.K; ++k)
            if (ctx.is_byz[k]) updates[k] = worker::mimic_update(target, k, t);
          break;
        }
        case worker::AttackSpec::Variant::omniscient: {
          std::vector<const learn::SignVector*> honest;
          honest.reserve(cfg.K - ctx.B);
          for (std::size_t k = 0; k < cfg.K; ++k)
            if (!ctx.is_byz[k]) honest.push_back(&updates[k]->message);
          for (std::size_t k = 0; k < cfg.K; ++k)
            if (ctx.is_byz[k])
              updates[k] = worker::omniscient_update(honest, k, t);
          break;
        }
        case worker::AttackSpec::Variant::oracle_sign_flip:
          for (std::size_t k = 0; k < cfg.K; ++k)
            if (ctx.is_byz[k])
              updates[k] = worker::oracle_sign_flip_update(g_true, k, t);
          break;
        case worker::AttackSpec::Variant::label_flip:
          break;  // handled in phase 1
      }
    }

    // Channel: fresh block fading, max-feasible rho, superposition, decode.
    RngStream ch_stream = make_stream(cfg.seed, "channel", t);
    const auto h = channel::draw_channel(cfg.K, ch_stream);
    std::vector<std::size_t> live;
    live.reserve(cfg.K);
    for (std::size_t k = 0; k < cfg.K; ++k)
      if (cfg.h_min <= 0.0 || std::abs(h[k]) >= cfg.h_min) live.push_back(k);
    if (live.empty())
      throw DegenerateChannelError(
          "no workers above the channel-gain cutoff in round " +
          std::to_string(t));

    channel::ChannelRound round;
    round.d = d;
    round.P0 = ctx.P0;
    round.N0 = ctx.N0;
    round.h.reserve(live.size());
    for (std::size_t k : live) round.h.push_back(h[k]);
    round.rho = channel::power_scaling(round.h, ctx.P0, d);
    double min_gain = std::abs(round.h.front());
    for (const auto& hk : round.h)
      min_gain = std::min(min_gain, std::abs(hk));

    std::vector<learn::SignVector> messages;
    messages.reserve(live.size());
    for (std::size_t k : live) messages.push_back(updates[k]->message);
    RngStream noise_stream = make_stream(cfg.seed, "noise", t);
    learn::SignVector decoded;
    if (cfg.byzantine_power_scale == 1.0) {
      decoded = channel::global_vote(
          channel::aggregate(messages, round, noise_stream));
    } else {
      std::vector<double> scales;
      scales.reserve(live.size());
      for (std::size_t k : live)
        scales.push_back(ctx.is_byz[k]
                             ? std::sqrt(cfg.byzantine_power_scale)
                             : 1.0);
      decoded = channel::global_vote(
          channel::aggregate_scaled(messages, scales, round, noise_stream));
    }

    RoundMetrics m;
    m.round = t;
    m.rho = round.rho;
    m.min_channel_gain = min_gain;
    if (eval) fill_eval_metrics(m, params, ctx, g_true, decoded);

    for (const auto& u : updates)
      if (u) res.totals.local_sgd += u->gradient_evals;
    res.totals.aircomp += 1;

    params = learn::sgd_step(params, decoded, cfg.eta);
    m.wall_time = std::chrono::duration<double>(clock::now() - t_start).count();
    res.metrics.push_back(m);
  }

  res.final_params = std::move(params);
  res.final_train_loss =
      learn::loss(res.final_params, ctx.train, ctx.all_train);
  res.final_test_accuracy = learn::accuracy(res.final_params, ctx.test);
  return res;
}

inline RunResult run_gm_scheme(const ExperimentConfig& cfg, RunContext& ctx,
                               unsigned threads) {
  using clock = std::chrono::steady_clock;
  const std::size_t d = ctx.shape.dim();
  learn::ModelParams params = learn::make_params(ctx.shape, cfg.seed);
  RunResult res;
  res.config = cfg;
  res.metrics.reserve(cfg.T);
  const bool oracle_attack =
      cfg.attack &&
      cfg.attack->variant == worker::AttackSpec::Variant::oracle_sign_flip &&
      ctx.B > 0;

  for (std::size_t t = 0; t < cfg.T; ++t) {
    const auto t_start = clock::now();
    const bool eval = (t % cfg.eval_stride == 0) || (t + 1 == cfg.T);
    learn::GradientVector g_true;
    if (eval || oracle_attack)
      g_true = learn::gradient(params, ctx.train, ctx.all_train);

    // Phase 1: each worker computes one mini-batch gradient on its own
    // sub-dataset (no redundancy in this baseline); digital uplinks carry the
    // real-valued vectors.
    std::vector<std::optional<learn::GradientVector>> grads(cfg.K);
    parallel_for(cfg.K, threads, [&](std::size_t k) {
      if (!ctx.is_byz[k] || ctx.label_flip) {
        RngStream stream = make_stream(cfg.seed, "minibatch", k, t, k);
        const data::MiniBatch mb =
            data::sample_minibatch(ctx.part, k, cfg.A, stream);
        const data::Dataset& view =
            ctx.is_byz[k] ? ctx.flipped : ctx.train;
        grads[k] = learn::gradient(params, view, mb.indices);
      }
    });
    std::size_t phase1_done = 0;
    for (const auto& g : grads) phase1_done += g.has_value();
    const std::size_t phase1_expected =
        ctx.label_flip ? cfg.K : cfg.K - ctx.B;
    if (phase1_done != phase1_expected)
      throw std::logic_error("phase ordering violated: attacker ran before "
                             "honest updates completed");
    res.totals.local_sgd += phase1_done;

    // Phase 2: attack vectors in gradient space.
    if (ctx.B > 0 && cfg.attack && !ctx.label_flip) {
      switch (cfg.attack->variant) {
        case worker::AttackSpec::Variant::directional: {
          learn::GradientVector ones;
          ones.values.assign(d, 1.0);
          for (std::size_t k = 0; k < cfg.K; ++k)
            if (ctx.is_byz[k]) grads[k] = ones;
          break;
        }
        case worker::AttackSpec::Variant::mimic:
          for (std::size_t k = 0; k < cfg.K; ++k)
            if (ctx.is_byz[k]) grads[k] = grads[ctx.mimic_target];
          break;
        case worker::AttackSpec::Variant::omniscient: {
          // Colluders send the negated honest mass, split between them, so
          // the plain sum of all uploads cancels.
          learn::GradientVector attack;
          attack.values.assign(d, 0.0);
          for (std::size_t k = 0; k < cfg.K; ++k)
            if (!ctx.is_byz[k])
              for (std::size_t j = 0; j < d; ++j)
                attack.values[j] += grads[k]->values[j];
          for (std::size_t j = 0; j < d; ++j)
            attack.values[j] = -attack.values[j] / double(ctx.B);
          for (std::size_t k = 0; k < cfg.K; ++k)
            if (ctx.is_byz[k]) grads[k] = attack;
          break;
        }
        case worker::AttackSpec::Variant::oracle_sign_flip: {
          learn::GradientVector flip = g_true;
          for (double& v : flip.values) v = -v;
          for (std::size_t k = 0; k < cfg.K; ++k)
            if (ctx.is_byz[k]) grads[k] = flip;
          break;
        }
        case worker::AttackSpec::Variant::label_flip:
          break;  // handled in phase 1
      }
    }

    std::vector<std::vector<double>> points;
    points.reserve(cfg.K);
    for (const auto& g : grads) points.push_back(g->values);
    const WeiszfeldResult gm = weiszfeld(points);
    res.totals.gm += 1;
    res.totals.digital += cfg.K;
    res.totals.weiszfeld_iterations += gm.iterations;
    if (!gm.converged) res.totals.weiszfeld_failures += 1;

    learn::GradientVector gm_vec;
    gm_vec.values = gm.point;
    const learn::SignVector decoded = learn::sign_quantize(gm_vec);

    RoundMetrics m;
    m.round = t;
    if (eval) fill_eval_metrics(m, params, ctx, g_true, decoded);
    params = learn::sgd_step(params, decoded, cfg.eta);
    m.wall_time = std::chrono::duration<double>(clock::now() - t_start).count();
    res.metrics.push_back(m);
  }

  if (res.totals.weiszfeld_failures > 0)
    res.warnings.push_back(
        "geometric median did not converge in " +
        std::to_string(res.totals.weiszfeld_failures) + " of " +
        std::to_string(cfg.T) + " rounds; last iterate used");

  res.final_params = std::move(params);
  res.final_train_loss =
      learn::loss(res.final_params, ctx.train, ctx.all_train);
  res.final_test_accuracy = learn::accuracy(res.final_params, ctx.test);
  return res;
}

}  // namespace detail

/// Runs the configured scheme end to end: data allocation once, then T rounds
/// of honest phase, attacker phase, channel aggregation (or geometric-median
/// aggregation) and one sign-descent step.
inline RunResult run_experiment(const ExperimentConfig& cfg,
                                unsigned threads = 1) {
  validate_config(cfg);
  detail::RunContext ctx = detail::build_context(cfg);
  if (cfg.scheme == Scheme::digital_gm)
    return detail::run_gm_scheme(cfg, ctx, threads);
  return detail::run_vote_scheme(cfg, ctx, threads);
}

inline RunResult run_hierarchical(ExperimentConfig cfg, unsigned threads = 1) {
  cfg.scheme = Scheme::hierarchical;
  return run_experiment(cfg, threads);
}

inline RunResult run_naive_signsgd(ExperimentConfig cfg, unsigned threads = 1) {
  cfg.scheme = Scheme::naive_signsgd;
  return run_experiment(cfg, threads);
}

inline RunResult run_noise_free(ExperimentConfig cfg, unsigned threads = 1) {
  cfg.scheme = Scheme::hierarchical_noise_free;
  return run_experiment(cfg, threads);
}

inline RunResult run_digital_gm(ExperimentConfig cfg, unsigned threads = 1) {
  cfg.scheme = Scheme::digital_gm;
  return run_experiment(cfg, threads);
}

}  // namespace airvote::server
