#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"
#include "dataset.hpp"
#include "errors.hpp"

namespace airvote::learn {

enum class ModelKind { logistic, mlp };

/// Flat parameter layout:
///   logistic: per class c, f weights then one bias -> index c*(f+1)+j,
///             bias at j = f; total (f+1)*C.
///   mlp: hidden layer first, row h occupies h*(f+1)+j with bias at j = f;
///        then output rows at offset (f+1)*H, row c occupies c*(H+1)+j with
///        bias at j = H; total (f+1)*H + (H+1)*C. Hidden activation is tanh.
struct ModelShape {
  ModelKind kind = ModelKind::logistic;
  std::size_t f = 0;
  int C = 0;
  std::size_t H = 0;  // hidden width, mlp only

  std::size_t dim() const {
    if (kind == ModelKind::logistic) return (f + 1) * std::size_t(C);
    return (f + 1) * H + (H + 1) * std::size_t(C);
  }
};

struct ModelParams {
  ModelShape shape;
  std::vector<double> values;
};

struct GradientVector {
  std::vector<double> values;
};

struct SignVector {
  std::vector<std::int8_t> signs;  // each -1 or +1
  std::size_t size() const { return signs.size(); }
};

inline void validate_shape(const ModelShape& shape) {
  if (shape.f < 1) throw ConsistencyError("model needs at least one feature");
  if (shape.C < 2) throw ConsistencyError("model needs at least two classes");
  if (shape.kind == ModelKind::mlp && shape.H < 1)
    throw ConsistencyError("mlp needs a positive hidden width");
}

/// Logistic models start at zero; mlp entries are uniform in
/// [-1/sqrt(f), 1/sqrt(f)] from the seeded stream.
inline ModelParams make_params(const ModelShape& shape, std::uint64_t seed) {
  validate_shape(shape);
  ModelParams params;
  params.shape = shape;
  params.values.assign(shape.dim(), 0.0);
  if (shape.kind == ModelKind::mlp) {
    RngStream stream = make_stream(seed, "init");
    const double bound = 1.0 / std::sqrt(double(shape.f));
    for (double& v : params.values) v = (2.0 * stream.uniform01() - 1.0) * bound;
  }
  return params;
}

namespace detail {

inline void check_batch(const ModelParams& params, const data::Dataset& ds,
                        const std::vector<std::size_t>& indices) {
  if (indices.empty()) throw ConsistencyError("empty index list");
  if (params.values.size() != params.shape.dim())
    throw ConsistencyError("parameter vector size does not match model shape");
  if (ds.f != params.shape.f || ds.num_classes != params.shape.C)
    throw ConsistencyError("dataset shape does not match model shape");
  for (std::size_t i : indices)
    if (i >= ds.n)
      throw ConsistencyError("sample index " + std::to_string(i) +
                             " out of range");
}

inline void logistic_scores(const ModelParams& params, const double* x,
                            double* scores) {
  const std::size_t f = params.shape.f;
  const int C = params.shape.C;
  for (int c = 0; c < C; ++c) {
    const double* w = params.values.data() + std::size_t(c) * (f + 1);
    double z = w[f];
    for (std::size_t j = 0; j < f; ++j) z += w[j] * x[j];
    scores[c] = z;
  }
}

inline void mlp_forward(const ModelParams& params, const double* x,
                        double* hidden, double* scores) {
  const std::size_t f = params.shape.f;
  const std::size_t H = params.shape.H;
  const int C = params.shape.C;
  const double* w1 = params.values.data();
  const double* w2 = params.values.data() + (f + 1) * H;
  for (std::size_t h = 0; h < H; ++h) {
    const double* row = w1 + h * (f + 1);
    double z = row[f];
    for (std::size_t j = 0; j < f; ++j) z += row[j] * x[j];
    hidden[h] = std::tanh(z);
  }
  for (int c = 0; c < C; ++c) {
    const double* row = w2 + std::size_t(c) * (H + 1);
    double z = row[H];
    for (std::size_t h = 0; h < H; ++h) z += row[h] * hidden[h];
    scores[c] = z;
  }
}

inline void scores_of(const ModelParams& params, const double* x,
                      double* hidden, double* scores) {
  if (params.shape.kind == ModelKind::logistic)
    logistic_scores(params, x, scores);
  else
    mlp_forward(params, x, hidden, scores);
}

// log(sum exp(scores)) with max subtraction; scores are replaced by softmax
// probabilities.
inline double softmax_inplace(double* scores, int C) {
  double mx = scores[0];
  for (int c = 1; c < C; ++c) mx = std::max(mx, scores[c]);
  double sum = 0.0;
  for (int c = 0; c < C; ++c) {
    scores[c] = std::exp(scores[c] - mx);
    sum += scores[c];
  }
  for (int c = 0; c < C; ++c) scores[c] /= sum;
  return std::log(sum) + mx;
}

}  // namespace detail

/// Mean softmax cross-entropy over the indexed samples.
inline double loss(const ModelParams& params, const data::Dataset& ds,
                   const std::vector<std::size_t>& indices) {
  detail::check_batch(params, ds, indices);
  const int C = params.shape.C;
  std::vector<double> hidden(params.shape.H);
  std::vector<double> scores(C);
  double total = 0.0;
  for (std::size_t i : indices) {
    detail::scores_of(params, ds.row(i), hidden.data(), scores.data());
    const double y_score = scores[ds.labels[i]];
    const double lse = detail::softmax_inplace(scores.data(), C);
    // lse here is log-sum-exp of the raw scores; cross-entropy = lse - z_y.
    total += lse - y_score;
  }
  return total / double(indices.size());
}

/// Analytic gradient of `loss` over the same index list.
inline GradientVector gradient(const ModelParams& params,
                               const data::Dataset& ds,
                               const std::vector<std::size_t>& indices) {
  detail::check_batch(params, ds, indices);
  const std::size_t f = params.shape.f;
  const std::size_t H = params.shape.H;
  const int C = params.shape.C;
  const double inv_b = 1.0 / double(indices.size());

  GradientVector g;
  g.values.assign(params.values.size(), 0.0);
  std::vector<double> hidden(H);
  std::vector<double> probs(C);

  for (std::size_t i : indices) {
    const double* x = ds.row(i);
    detail::scores_of(params, x, hidden.data(), probs.data());
    detail::softmax_inplace(probs.data(), C);
    const int y = ds.labels[i];

    if (params.shape.kind == ModelKind::logistic) {
      for (int c = 0; c < C; ++c) {
        const double coef = (probs[c] - (c == y ? 1.0 : 0.0)) * inv_b;
        double* gw = g.values.data() + std::size_t(c) * (f + 1);
        for (std::size_t j = 0; j < f; ++j) gw[j] += coef * x[j];
        gw[f] += coef;
      }
    } else {
      const double* w2 = params.values.data() + (f + 1) * H;
      double* g2 = g.values.data() + (f + 1) * H;
      std::vector<double> dhidden(H, 0.0);
      for (int c = 0; c < C; ++c) {
        const double delta = (probs[c] - (c == y ? 1.0 : 0.0)) * inv_b;
        const double* row = w2 + std::size_t(c) * (H + 1);
        double* grow = g2 + std::size_t(c) * (H + 1);
        for (std::size_t h = 0; h < H; ++h) {
          grow[h] += delta * hidden[h];
          dhidden[h] += delta * row[h];
        }
        grow[H] += delta;
      }
      for (std::size_t h = 0; h < H; ++h) {
        const double dz = dhidden[h] * (1.0 - hidden[h] * hidden[h]);
        double* grow = g.values.data() + h * (f + 1);
        for (std::size_t j = 0; j < f; ++j) grow[j] += dz * x[j];
        grow[f] += dz;
      }
    }
  }
  return g;
}

/// Element-wise sign with sign(0) = +1.
inline SignVector sign_quantize(const GradientVector& g) {
  SignVector s;
  s.signs.resize(g.values.size());
  for (std::size_t j = 0; j < g.values.size(); ++j)
    s.signs[j] = g.values[j] < 0.0 ? -1 : 1;
  return s;
}

/// One sign-descent step: every coordinate moves by exactly +-eta.
inline ModelParams sgd_step(const ModelParams& params,
                            const SignVector& direction, double eta) {
  if (!(eta > 0.0)) throw ConsistencyError("step size must be positive");
  if (direction.size() != params.values.size())
    throw ConsistencyError("direction dimension " +
                           std::to_string(direction.size()) +
                           " does not match parameter dimension " +
                           std::to_string(params.values.size()));
  ModelParams next = params;
  for (std::size_t j = 0; j < next.values.size(); ++j)
    next.values[j] -= eta * double(direction.signs[j]);
  return next;
}

/// Fraction of samples whose argmax class score equals the label; argmax ties
/// break toward the smallest class index.
inline double accuracy(const ModelParams& params, const data::Dataset& ds) {
  if (ds.n == 0) throw ConsistencyError("accuracy needs a non-empty dataset");
  const int C = params.shape.C;
  std::vector<double> hidden(params.shape.H);
  std::vector<double> scores(C);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < ds.n; ++i) {
    detail::scores_of(params, ds.row(i), hidden.data(), scores.data());
    int best = 0;
    for (int c = 1; c < C; ++c)
      if (scores[c] > scores[best]) best = c;
    hits += (best == ds.labels[i]);
  }
  return double(hits) / double(ds.n);
}

}  // namespace airvote::learn
