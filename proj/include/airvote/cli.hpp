#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bounds.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "server.hpp"

namespace airvote::cli {

inline std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Flag > AIRVOTE_OUT > config value.
inline std::string resolve_output_dir(const std::string& flag_value,
                                      const std::string& config_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("AIRVOTE_OUT"); env && *env) return env;
  return config_value;
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Metrics persistence. One CSV row per evaluated round; wall_time_s is always
// written as 0 so files are byte-identical across machines and thread counts
// (measured times stay available in memory on RunResult).

inline std::string metrics_csv(const server::RunResult& r) {
  std::string out =
      "round,train_loss,test_accuracy,sign_error_rate,rho,min_channel_gain,"
      "wall_time_s\n";
  for (const server::RoundMetrics& m : r.metrics) {
    if (!m.evaluated) continue;
    out += std::to_string(m.round);
    out += ',';
    out += format_g(m.train_loss);
    out += ',';
    out += format_g(m.test_accuracy);
    out += ',';
    out += format_g(m.sign_error_rate);
    out += ',';
    out += format_g(m.rho);
    out += ',';
    out += format_g(m.min_channel_gain);
    out += ",0\n";
  }
  return out;
}

inline json run_json(const server::RunResult& r) {
  const json echo = config_echo(r.config);
  std::uint64_t evaluated = 0;
  for (const server::RoundMetrics& m : r.metrics) evaluated += m.evaluated;
  json j;
  j["run_id"] = run_id(echo);
  j["config"] = echo;
  j["rounds"] = std::uint64_t(r.metrics.size());
  j["evaluated_rounds"] = evaluated;
  j["final_train_loss"] = r.final_train_loss;
  j["final_test_accuracy"] = r.final_test_accuracy;
  j["operation_totals"] = json{{"local_sgd", r.totals.local_sgd},
                               {"gm", r.totals.gm},
                               {"aircomp", r.totals.aircomp},
                               {"digital", r.totals.digital},
                               {"weiszfeld_iterations",
                                r.totals.weiszfeld_iterations},
                               {"weiszfeld_failures",
                                r.totals.weiszfeld_failures}};
  j["warnings"] = r.warnings;
  return j;
}

inline int cmd_train(const std::string& config_path,
                     const std::string& out_override = "",
                     std::ostream& os = std::cout) {
  const TrainConfig tc = parse_train_config(load_json_file(config_path));
  const server::RunResult result =
      server::run_experiment(tc.experiment, tc.threads);

  const std::filesystem::path dir =
      resolve_output_dir(out_override, tc.output_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "metrics.csv", metrics_csv(result));
  write_file(dir / "run.json", run_json(result).dump(2) + "\n");

  for (const std::string& w : result.warnings) os << "warning: " << w << "\n";
  std::uint64_t evaluated = 0;
  for (const server::RoundMetrics& m : result.metrics)
    evaluated += m.evaluated;
  os << "run " << run_id(config_echo(result.config))
     << ": scheme=" << server::scheme_name(result.config.scheme)
     << " rounds=" << result.metrics.size() << " evaluated=" << evaluated
     << " final_train_loss=" << format_g(result.final_train_loss)
     << " final_test_accuracy=" << format_g(result.final_test_accuracy)
     << "\n";
  os << "wrote " << (dir / "metrics.csv").string() << " and "
     << (dir / "run.json").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// Bound-validation suite: every grid point is checked as
// empirical <= bound + 3*SE. Invalid points (outside a bound's stated regime)
// are flagged and skipped, never counted as failures.

struct BoundRow {
  std::string name;
  double J = 0.0;
  std::optional<double> s, K, p, c, snr_db;
  std::optional<double> empirical, ci_low, ci_high, bound;
  bool valid = true;
  std::optional<bool> pass;  // unset = skipped
};

inline std::string bounds_csv(const std::vector<BoundRow>& rows) {
  auto cell = [](const std::optional<double>& v) {
    return v ? format_g(*v) : std::string("NA");
  };
  std::string out =
      "bound_name,J,s,K,p,c,snr_db,empirical,ci_low,ci_high,bound,valid,"
      "pass\n";
  for (const BoundRow& r : rows) {
    out += r.name;
    out += ',';
    out += format_g(r.J);
    out += ',';
    out += cell(r.s);
    out += ',';
    out += cell(r.K);
    out += ',';
    out += cell(r.p);
    out += ',';
    out += cell(r.c);
    out += ',';
    out += cell(r.snr_db);
    out += ',';
    out += cell(r.empirical);
    out += ',';
    out += cell(r.ci_low);
    out += ',';
    out += cell(r.ci_high);
    out += ',';
    out += cell(r.bound);
    out += ',';
    out += r.valid ? "true" : "false";
    out += ',';
    out += r.pass ? (*r.pass ? "true" : "false") : "NA";
    out += '\n';
  }
  return out;
}

inline std::vector<BoundRow> run_bounds_suite(const BoundsSuiteConfig& bc) {
  std::vector<BoundRow> rows;
  const auto corrupt = [&](double b) {
    return bc.corrupt_bounds_self_test ? b * 0.01 - 1.0 : b;
  };

  if (bc.run_prop1) {
    for (double J : bc.prop1_J) {
      for (std::uint64_t s : bc.prop1_s) {
        BoundRow row;
        row.name = "prop1_bound";
        row.J = J;
        row.s = double(s);
        const auto tag =
            fnv1a64("prop1:J=" + format_g(J) + ":s=" + std::to_string(s));
        const bounds::McEstimate est = bounds::sharded_local_error(
            bounds::oracle_for_gsnr(J), s, bc.trials, bc.seed, tag,
            bc.threads);
        row.empirical = est.rate;
        row.ci_low = est.ci_low;
        row.ci_high = est.ci_high;
        row.bound = corrupt(bounds::prop1_bound(J, s).value);
        row.pass = est.rate <= *row.bound + 3.0 * est.se;
        rows.push_back(std::move(row));
      }
    }
  }

  if (bc.run_thm1) {
    for (double J : bc.thm1_J) {
      for (double p : bc.thm1_p) {
        BoundRow row;
        row.name = "thm1_bound";
        row.J = J;
        row.K = double(bc.thm1_K);
        row.p = p;
        const bounds::BoundReport rep = bounds::thm1_bound(J, bc.thm1_K, p);
        row.valid = rep.valid;
        if (rep.valid) {
          const auto tag = fnv1a64("thm1:K=" + std::to_string(bc.thm1_K) +
                                   ":J=" + format_g(J) + ":p=" + format_g(p));
          const bounds::McEstimate est = bounds::sharded_theorem1_error(
              bounds::oracle_for_gsnr(J), bc.thm1_K, p, bc.trials, bc.seed,
              tag, bc.threads);
          row.empirical = est.rate;
          row.ci_low = est.ci_low;
          row.ci_high = est.ci_high;
          row.bound = corrupt(rep.value);
          row.pass = est.rate <= *row.bound + 3.0 * est.se;
        } else {
          row.bound = rep.value;
        }
        rows.push_back(std::move(row));
      }
    }
  }

  if (bc.run_thm2) {
    for (double c : bc.thm2_c) {
      for (double snr : bc.thm2_snr_db) {
        BoundRow row;
        row.name = "thm2_bound";
        row.J = bc.thm2_J;
        row.K = double(bc.thm2_K);
        row.p = bc.thm2_p;
        row.c = c;
        row.snr_db = snr;
        const double q = bounds::expected_hier_local_error(
            bc.thm2_J, bc.thm2_K, bc.thm2_p, true);
        row.valid = (1.0 - c) * (1.0 - q) > 0.5;
        if (row.valid) {
          const auto tag = fnv1a64("thm2:K=" + std::to_string(bc.thm2_K) +
                                   ":p=" + format_g(bc.thm2_p) +
                                   ":J=" + format_g(bc.thm2_J) +
                                   ":c=" + format_g(c) +
                                   ":snr=" + format_g(snr));
          const bounds::McGlobalEstimate g = bounds::sharded_global_error(
              bounds::oracle_for_gsnr(bc.thm2_J), bc.thm2_K, c, bc.thm2_p,
              snr, bc.trials, bc.seed, tag, bc.threads);
          row.empirical = g.est.rate;
          row.ci_low = g.est.ci_low;
          row.ci_high = g.est.ci_high;
          row.bound = corrupt(g.avg_bound);
          row.pass = g.est.rate <= *row.bound + 3.0 * g.est.se;
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

inline int cmd_validate_bounds(const std::string& config_path,
                               const std::string& out_override = "",
                               std::ostream& os = std::cout) {
  const BoundsSuiteConfig bc = parse_bounds_config(load_json_file(config_path));
  const std::vector<BoundRow> rows = run_bounds_suite(bc);

  const std::filesystem::path dir =
      resolve_output_dir(out_override, bc.output_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "bounds.csv", bounds_csv(rows));

  std::size_t valid = 0, failures = 0;
  for (const BoundRow& r : rows) {
    valid += r.valid;
    if (r.pass && !*r.pass) {
      ++failures;
      os << "FAIL " << r.name << " J=" << format_g(r.J);
      if (r.s) os << " s=" << format_g(*r.s);
      if (r.K) os << " K=" << format_g(*r.K);
      if (r.p) os << " p=" << format_g(*r.p);
      if (r.c) os << " c=" << format_g(*r.c);
      if (r.snr_db) os << " snr_db=" << format_g(*r.snr_db);
      os << ": empirical " << format_g(*r.empirical) << " > bound "
         << format_g(*r.bound) << " + 3*SE\n";
    }
  }
  os << "bounds: " << rows.size() << " points, " << valid << " valid, "
     << failures << " failures\n";
  os << "wrote " << (dir / "bounds.csv").string() << "\n";
  return failures > 0 ? 3 : 0;
}

inline int cmd_counts(const std::string& scheme, std::size_t K, double p,
                      std::size_t G, std::size_t U,
                      std::ostream& os = std::cout) {
  const server::OperationCounts oc = server::operation_counts(scheme, K, p, G, U);
  std::string line;
  const auto emit = [&](const char* name, double v) {
    if (v == 0.0) return;
    if (!line.empty()) line += ' ';
    line += name;
    line += '=';
    line += format_g(v);
  };
  emit("local_sgd", oc.local_sgd);
  emit("gm", oc.gm);
  emit("aircomp", oc.aircomp);
  emit("digital", oc.digital);
  os << line << "\n";
  if (oc.local_sgd_expected)
    os << "local_sgd_expected=" << format_g(*oc.local_sgd_expected) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// Exit codes: 0 success, 1 runtime failure, 2 configuration/consistency
// error, 3 bound validation failure.

inline int run_cli(int argc, const char* const* argv,
                   std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"one-bit hierarchical-vote distributed learning simulator"};
  app.require_subcommand(1);

  std::string train_config, train_out;
  CLI::App* train =
      app.add_subcommand("train", "run a training experiment from a JSON config");
  train->add_option("config", train_config, "JSON config path")->required();
  train->add_option("--out", train_out, "output directory override");

  std::string vb_config, vb_out;
  CLI::App* vb = app.add_subcommand(
      "validate-bounds", "Monte Carlo check of the closed-form error bounds");
  vb->add_option("config", vb_config, "JSON config path")->required();
  vb->add_option("--out", vb_out, "output directory override");

  std::string scheme;
  std::uint64_t K = 50, G = 10, U = 200;
  double p = 0.1;
  CLI::App* counts = app.add_subcommand(
      "counts", "per-round operation counts for an aggregation scheme");
  counts->add_option("--scheme", scheme, "scheme name")->required();
  counts->add_option("--K", K, "worker count");
  counts->add_option("--p", p, "allocation probability");
  counts->add_option("--G", G, "cluster count (rotaf)");
  counts->add_option("--U", U, "channel uses (aircomp_gm)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "argument error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (train->parsed()) return cmd_train(train_config, train_out, out);
    if (vb->parsed()) return cmd_validate_bounds(vb_config, vb_out, out);
    return cmd_counts(scheme, std::size_t(K), p, std::size_t(G),
                      std::size_t(U), out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ConsistencyError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace airvote::cli
