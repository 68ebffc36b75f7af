#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "model.hpp"

namespace airvote::worker {

struct AttackSpec {
  enum class Variant {
    label_flip,
    mimic,
    directional,
    omniscient,
    oracle_sign_flip,
  };
  Variant variant = Variant::label_flip;
  std::optional<std::size_t> mimic_target;  // defaults to lowest honest id
};

inline std::string attack_variant_name(AttackSpec::Variant v) {
  switch (v) {
    case AttackSpec::Variant::label_flip: return "label_flip";
    case AttackSpec::Variant::mimic: return "mimic";
    case AttackSpec::Variant::directional: return "directional";
    case AttackSpec::Variant::omniscient: return "omniscient";
    case AttackSpec::Variant::oracle_sign_flip: return "oracle_sign_flip";
  }
  return "unknown";
}

inline std::optional<AttackSpec::Variant> parse_attack_variant(
    std::string_view name) {
  if (name == "label_flip") return AttackSpec::Variant::label_flip;
  if (name == "mimic") return AttackSpec::Variant::mimic;
  if (name == "directional") return AttackSpec::Variant::directional;
  if (name == "omniscient") return AttackSpec::Variant::omniscient;
  if (name == "oracle_sign_flip") return AttackSpec::Variant::oracle_sign_flip;
  return std::nullopt;
}

struct WorkerRole {
  std::optional<AttackSpec> attack;  // empty means honest
  bool byzantine() const { return attack.has_value(); }
};

struct LocalUpdate {
  learn::SignVector message;
  std::size_t worker = 0;
  std::size_t round = 0;
  std::size_t gradient_evals = 0;  // mini-batch gradients consumed
};

/// Derives one independent mini-batch stream per (worker, round, subset), so
/// worker updates can run in any order or in parallel without changing the
/// result.
struct SubsetSeeder {
  std::uint64_t master = 0;
  std::uint64_t worker = 0;
  std::uint64_t round = 0;

  RngStream stream_for(std::size_t subset) const {
    return make_stream(master, "minibatch", worker, round, subset);
  }
};

/// Local majority vote: one mini-batch gradient per held sub-dataset, each
/// quantized to signs, then an element-wise vote with ties going to +1.
inline LocalUpdate honest_update(const learn::ModelParams& params,
                                 const data::Dataset& ds,
                                 const data::Partition& part,
                                 const std::vector<std::size_t>& S_k,
                                 std::size_t A, const SubsetSeeder& seeder) {
  if (S_k.empty()) throw ConsistencyError("worker holds no sub-datasets");
  const std::size_t d = params.shape.dim();
  std::vector<int> votes(d, 0);
  for (std::size_t i : S_k) {
    RngStream stream = seeder.stream_for(i);
    const data::MiniBatch mb = data::sample_minibatch(part, i, A, stream);
    const learn::GradientVector g = learn::gradient(params, ds, mb.indices);
    const learn::SignVector m = learn::sign_quantize(g);
    for (std::size_t j = 0; j < d; ++j) votes[j] += m.signs[j];
  }
  LocalUpdate up;
  up.worker = seeder.worker;
  up.round = seeder.round;
  up.gradient_evals = S_k.size();
  up.message.signs.resize(d);
  for (std::size_t j = 0; j < d; ++j)
    up.message.signs[j] = votes[j] < 0 ? -1 : 1;
  return up;
}

/// Label-poisoned view: y -> (C-1)-y, features untouched. Byzantine workers
/// under this attack run the honest pipeline on the flipped view.
inline data::Dataset label_flip_view(const data::Dataset& ds) {
  data::Dataset flipped = ds;
  for (int& y : flipped.labels) y = (ds.num_classes - 1) - y;
  flipped.name = ds.name + "/label_flipped";
  return flipped;
}

inline LocalUpdate directional_update(std::size_t d, std::size_t worker = 0,
                                      std::size_t round = 0) {
  if (d < 1) throw ConsistencyError("dimension must be positive");
  LocalUpdate up;
  up.worker = worker;
  up.round = round;
  up.message.signs.assign(d, 1);
  return up;
}

inline LocalUpdate mimic_update(const learn::SignVector& target_message,
                                std::size_t worker = 0, std::size_t round = 0) {
  LocalUpdate up;
  up.worker = worker;
  up.round = round;
  up.message = target_message;
  return up;
}

/// Emits the negated majority of all honest messages; a zero honest sum is
/// first resolved to +1 by the tie rule, so the emitted entry is -1.
inline LocalUpdate omniscient_update(
    const std::vector<const learn::SignVector*>& honest_messages,
    std::size_t worker = 0, std::size_t round = 0) {
  if (honest_messages.empty())
    throw ConsistencyError("omniscient attack needs honest messages");
  const std::size_t d = honest_messages.front()->size();
  std::vector<int> sum(d, 0);
  for (const learn::SignVector* m : honest_messages) {
    if (m->size() != d)
      throw ConsistencyError("honest message dimension mismatch");
    for (std::size_t j = 0; j < d; ++j) sum[j] += m->signs[j];
  }
  LocalUpdate up;
  up.worker = worker;
  up.round = round;
  up.message.signs.resize(d);
  for (std::size_t j = 0; j < d; ++j)
    up.message.signs[j] = sum[j] < 0 ? 1 : -1;
  return up;
}

/// Worst-case collusion: the inverse signs of the true full-batch gradient.
inline LocalUpdate oracle_sign_flip_update(const learn::GradientVector& g_true,
                                           std::size_t worker = 0,
                                           std::size_t round = 0) {
  LocalUpdate up;
  up.worker = worker;
  up.round = round;
  learn::SignVector s = learn::sign_quantize(g_true);
  for (auto& v : s.signs) v = -v;
  up.message = std::move(s);
  return up;
}

}  // namespace airvote::worker
