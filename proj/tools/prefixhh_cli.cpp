// Copyright 2026 The PrefixHH Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Batch front end: run experiments, solve budgets, generate synthetic data,
// run baselines. Exit codes: 0 success, 2 usage/config error, 3 infeasible
// budget, 4 runtime failure.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "prefixhh/accountant.hpp"
#include "prefixhh/baselines.hpp"
#include "prefixhh/codebook.hpp"
#include "prefixhh/data.hpp"
#include "prefixhh/engine.hpp"
#include "prefixhh/errors.hpp"
#include "prefixhh/metrics.hpp"

namespace {

using nlohmann::json;
using namespace prefixhh;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitRuntime = 4;

int env_threads() {
  const char* value = std::getenv("PREFIXHH_THREADS");
  if (!value) return 1;
  int threads = std::atoi(value);
  return threads >= 1 ? threads : 1;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// Everything a run needs, resolved from a config file.
struct Experiment {
  RawDataset raw;
  Codebook codebook = Codebook::build_fixed_width({}, 1);  // replaced below
  int word_bits = 60;
  std::vector<DeviceDataset> dataset;
  EncodeStats encode_stats;
  RunConfig run;
  bool two_rounds = false;
  std::string output_dir = ".";
  uint64_t window = 50;
  bool fp_universe_selected = false;
  // Baseline section.
  std::string method;
  TrieHHConfig triehh;
  bool triehh_rate_given = false;
  CentralNoiseConfig central;
  bool central_scale_given = false;
};

Codebook build_codebook(const json& cfg, const RawDataset& raw,
                        const std::string& config_dir) {
  if (cfg.contains("codebook")) {
    std::filesystem::path p = cfg.at("codebook").get<std::string>();
    if (p.is_relative()) p = config_dir / p;
    return Codebook::load_file(p.string());
  }
  std::string mode = "huffman";
  int bits_per_symbol = 5;
  if (cfg.contains("encoding")) {
    const json& enc = cfg.at("encoding");
    mode = enc.value("mode", mode);
    bits_per_symbol = enc.value("bits_per_symbol", bits_per_symbol);
  }
  if (mode == "huffman") {
    return Codebook::build_huffman(symbol_frequencies(raw));
  }
  if (mode == "fixed_width") {
    std::map<Symbol, uint64_t> freq = symbol_frequencies(raw);
    std::vector<Symbol> symbols;
    for (const auto& [sym, cnt] : freq) symbols.push_back(sym);
    return Codebook::build_fixed_width(symbols, bits_per_symbol);
  }
  throw Error(ErrorCode::kInvalidArgument,
              "config: encoding.mode must be huffman or fixed_width");
}

Experiment load_experiment(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config: " + config_path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse,
                "config " + config_path + ": " + e.what());
  }
  const std::string config_dir =
      std::filesystem::path(config_path).parent_path().string();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp = p;
    if (fp.is_relative() && !config_dir.empty()) fp = config_dir / fp;
    return fp.string();
  };

  Experiment ex;
  if (!cfg.contains("dataset")) {
    throw Error(ErrorCode::kInvalidArgument, "config: dataset path required");
  }
  ex.raw = load_tsv_raw(resolve(cfg.at("dataset").get<std::string>()));
  if (cfg.contains("encoding")) {
    ex.word_bits = cfg.at("encoding").value("word_bits", ex.word_bits);
  }
  ex.codebook = build_codebook(cfg, ex.raw, config_dir);
  ex.dataset =
      encode_dataset(ex.raw, ex.codebook, ex.word_bits, &ex.encode_stats);

  RunConfig& run = ex.run;
  run.rounds = cfg.value("rounds", run.rounds);
  run.dimension_limit = cfg.value("dimension_limit", run.dimension_limit);
  run.word_bits = ex.word_bits;
  run.seed = cfg.value("seed", run.seed);
  run.threads = env_threads();

  run.budget.epsilon_agg = 1.0;
  run.budget.delta = 1e-6;
  if (cfg.contains("budget")) {
    const json& b = cfg.at("budget");
    run.budget.epsilon_agg = b.value("epsilon_agg", run.budget.epsilon_agg);
    run.budget.delta = b.value("delta", run.budget.delta);
    run.budget.sampling_rate = b.value("sampling_rate", 1.0);
  }
  run.budget.rounds = run.rounds;
  run.budget.n_devices = ex.dataset.size();
  if (cfg.contains("epsilon_local")) {
    run.epsilon_local_override = cfg.at("epsilon_local").get<double>();
  }
  if (cfg.contains("fixed_segment_length")) {
    run.fixed_segment_length = cfg.at("fixed_segment_length").get<int>();
  }

  if (cfg.contains("prune")) {
    const json& p = cfg.at("prune");
    run.prune.tau0 = p.value("tau0", run.prune.tau0);
    run.prune.f_ratio = p.value("f_ratio", run.prune.f_ratio);
    run.prune.eta = p.value("eta", run.prune.eta);
    run.prune.e_floor = p.value("e_floor", run.prune.e_floor);
  }

  if (cfg.contains("selection")) {
    const json& s = cfg.at("selection");
    const std::string kind = s.value("kind", "unweighted");
    if (kind == "weighted") {
      run.selection.kind = SelectionPolicy::Kind::kWeighted;
    } else if (kind == "unweighted") {
      run.selection.kind = SelectionPolicy::Kind::kUnweighted;
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  "config: selection.kind must be weighted or unweighted");
    }
    run.selection.condition_on_prefix_list =
        s.value("condition_on_prefix_list", true);
  }

  const std::string mode = cfg.value("mode", "multi");
  if (mode == "single") {
    run.mode = RunConfig::Mode::kSingleDatapoint;
  } else if (mode == "multi") {
    run.mode = RunConfig::Mode::kMultiDatapoint;
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "config: mode must be single or multi");
  }

  const std::string noise = cfg.value("noise", "replacement");
  if (noise == "replacement") {
    run.oracle_factory = replacement_ohe_brr_factory(run.threads);
  } else if (noise == "deletion") {
    run.oracle_factory = deletion_ohe_brr_factory(run.threads);
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "config: noise must be replacement or deletion");
  }

  if (cfg.contains("deny_list")) {
    for (const std::string& w :
         load_word_list(resolve(cfg.at("deny_list").get<std::string>()))) {
      try {
        run.deny_list.insert(encode_utf8(w, ex.codebook, ex.word_bits));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kWordTooLong) throw;
      }
    }
  }

  ex.two_rounds = cfg.value("two_rounds", false);
  ex.output_dir = cfg.value("output_dir", std::string("."));
  if (std::filesystem::path(ex.output_dir).is_relative() &&
      !config_dir.empty()) {
    ex.output_dir = resolve(ex.output_dir);
  }
  ex.window = cfg.value("window", ex.window);
  ex.fp_universe_selected = cfg.value("fp_universe", std::string("raw")) ==
                            std::string("selected");

  if (cfg.contains("baseline")) {
    const json& b = cfg.at("baseline");
    ex.method = b.value("method", "");
    ex.triehh.theta = b.value("theta", ex.triehh.theta);
    if (b.contains("sampling_rate")) {
      ex.triehh.sampling_rate = b.at("sampling_rate").get<double>();
      ex.triehh_rate_given = true;
    }
    if (b.contains("scale")) {
      ex.central.scale = b.at("scale").get<double>();
      ex.central_scale_given = true;
    }
  }
  return ex;
}

void write_outputs(const Experiment& ex, const RunResult& result) {
  std::filesystem::create_directories(ex.output_dir);
  const GlobalDistribution dist = global_distribution(ex.dataset);
  const WordSet universe = ex.fp_universe_selected
                               ? result.selected_support
                               : raw_support(ex.dataset);
  const MetricsReport report =
      evaluate_run(result, dist, universe, ex.word_bits, ex.window);

  std::unordered_map<BitString, double, BitStringHash> estimates;
  for (const HeavyHitter& h : result.heavy_hitters) {
    if (h.origin == HeavyHitter::Origin::kDenyList) continue;
    estimates.emplace(h.bits.zero_extend(ex.word_bits), h.last_estimate);
  }

  {
    std::ofstream out(ex.output_dir + "/results.csv");
    if (!out) throw Error(ErrorCode::kIo, "cannot write results.csv");
    out << "rank,word,true_freq,est_freq,window_marginal_W" << ex.window
        << ",is_false_positive\n";
    for (size_t i = 0; i < report.ordered_hitters.size(); ++i) {
      BitString w = report.ordered_hitters[i];
      std::optional<std::string> text = decode_utf8(w, ex.codebook);
      auto est = estimates.find(w);
      out << (i + 1) << ','
          << (text ? *text : "0b" + w.to_string()) << ','
          << fmt(dist.mass_of(w)) << ','
          << (est == estimates.end() ? "nan" : fmt(est->second)) << ','
          << fmt(report.marginals[i]) << ','
          << (universe.count(w) ? 0 : 1) << '\n';
    }
  }

  {
    std::ofstream out(ex.output_dir + "/rounds.csv");
    if (!out) throw Error(ErrorCode::kIo, "cannot write rounds.csv");
    out << "round,prefix_count,segment_length,tau_final,kept,domain_size\n";
    for (const RoundStats& r : result.per_round) {
      out << r.round << ',' << r.prefix_count << ',' << r.segment_length << ','
          << fmt(r.tau_final) << ',' << r.kept << ',' << r.domain_size << '\n';
    }
  }

  {
    std::ofstream out(ex.output_dir + "/summary.txt");
    if (!out) throw Error(ErrorCode::kIo, "cannot write summary.txt");
    out << "discovered_count = " << report.discovered_count << '\n'
        << "fp_ratio = " << fmt(report.fp_ratio) << '\n'
        << "weight_ratio = " << fmt(report.weight_ratio) << '\n'
        << "utility_loss = " << fmt(report.utility_loss) << '\n'
        << "epsilon_local = " << fmt(result.epsilon_local) << '\n'
        << "achieved_epsilon_agg = " << fmt(result.achieved_epsilon_agg)
        << '\n'
        << "fp_count = " << report.fp_count << '\n'
        << "discovered_true_count = " << report.discovered_true_count << '\n'
        << "dropped_words = " << ex.encode_stats.dropped_words << '\n';
  }
}

int cmd_run(const std::string& config_path) {
  Experiment ex = load_experiment(config_path);
  RunResult result = ex.two_rounds
                         ? run_two_rounds(ex.dataset, ex.codebook, ex.run)
                         : run(ex.dataset, ex.codebook, ex.run);
  write_outputs(ex, result);
  return kExitOk;
}

int cmd_accountant(double eps_agg, double delta, uint64_t rounds,
                   uint64_t devices, double gamma, double tolerance) {
  PrivacyBudget budget;
  budget.epsilon_agg = eps_agg;
  budget.delta = delta;
  budget.rounds = rounds;
  budget.n_devices = devices;
  budget.sampling_rate = gamma;
  for (const std::string& w : budget.warnings()) {
    std::cerr << "warning: " << w << '\n';
  }
  AccountantResult res = solve_local_epsilon(budget, tolerance);
  std::cout << "epsilon_local = " << fmt(res.epsilon_local) << '\n'
            << "achieved_epsilon_agg = " << fmt(res.achieved_epsilon_agg)
            << '\n'
            << "bound = " << res.bound_name << '\n';
  if (!res.amplification_in_domain) {
    std::cout << "note: outside the shuffle bound's validity domain; the "
                 "local epsilon was not amplified\n";
  }
  for (int row = 0; row < 3; ++row) {
    if (std::abs(ReferenceEpsilonTable::kEpsAgg[row] - eps_agg) > 1e-12) {
      continue;
    }
    if (rounds >= 1 && rounds <= 6) {
      std::cout << "reference (numerical shuffle bound, N=1.6e6, T="
                << rounds << "): epsilon_local = "
                << fmt(ReferenceEpsilonTable::kEpsLocal[row][rounds - 1])
                << '\n';
    }
  }
  return kExitOk;
}

int cmd_gen(uint64_t devices, uint64_t vocab, double zipf, uint64_t seed,
            double words_mean, uint32_t words_min, const std::string& out) {
  ZipfSpec spec;
  spec.n_devices = devices;
  spec.vocab_size = vocab;
  spec.exponent = zipf;
  spec.seed = seed;
  spec.words_per_device_mean = words_mean;
  spec.words_per_device_min = words_min;
  save_tsv(out, generate_zipf(spec));
  return kExitOk;
}

int cmd_baseline(const std::string& config_path, const std::string& method_arg,
                 std::optional<uint64_t> theta_arg,
                 std::optional<double> rate_arg,
                 std::optional<uint64_t> rounds_arg) {
  Experiment ex = load_experiment(config_path);
  std::string method = method_arg.empty() ? ex.method : method_arg;
  if (theta_arg) ex.triehh.theta = *theta_arg;
  if (rate_arg) {
    ex.triehh.sampling_rate = *rate_arg;
    ex.triehh_rate_given = true;
  }
  if (rounds_arg) ex.run.rounds = *rounds_arg;

  TreePlan plan;
  plan.rounds = ex.run.rounds;
  plan.dimension_limit = ex.run.dimension_limit;
  plan.word_bits = ex.run.word_bits;
  plan.selection = ex.run.selection;
  plan.deny_list = ex.run.deny_list;
  plan.single_datapoint = ex.run.mode == RunConfig::Mode::kSingleDatapoint;
  plan.seed = ex.run.seed;
  plan.prune = ex.run.prune;

  RunResult result;
  if (method == "triehh") {
    result = run_triehh(ex.dataset, ex.codebook, ex.triehh, plan);
  } else if (method == "triehhpp") {
    TrieHHConfig cfg = ex.triehh;
    if (!ex.triehh_rate_given) {
      TrieHHppDerivation derived =
          derive_triehhpp_rate(ex.run.budget.epsilon_agg, ex.run.budget.delta,
                               plan.rounds, cfg.theta);
      cfg.sampling_rate = derived.sampling_rate;
      std::cout << "derived sampling_rate = " << fmt(cfg.sampling_rate)
                << " (round epsilon " << fmt(derived.epsilon_round) << ")\n";
    }
    result = run_triehh(ex.dataset, ex.codebook, cfg, plan);
  } else if (method == "central-laplace" || method == "central-gaussian") {
    CentralNoiseConfig cfg = ex.central;
    if (method == "central-laplace") {
      cfg.noise = CentralNoiseConfig::Noise::kLaplace;
      cfg.sensitivity = 2.0;  // one report per device; replacement moves two
      if (!ex.central_scale_given) {
        cfg.scale = central_laplace_scale(ex.run.budget.epsilon_agg,
                                          ex.run.budget.delta, plan.rounds,
                                          cfg.sensitivity);
      }
    } else {
      cfg.noise = CentralNoiseConfig::Noise::kGaussian;
      cfg.sensitivity = std::sqrt(2.0);
      if (!ex.central_scale_given) {
        cfg.scale = central_gaussian_sigma(ex.run.budget.epsilon_agg,
                                           ex.run.budget.delta, plan.rounds,
                                           cfg.sensitivity);
      }
    }
    std::cout << "noise scale = " << fmt(cfg.scale) << '\n';
    result = run_central(ex.dataset, ex.codebook, cfg, plan);
  } else {
    std::cerr << "unknown baseline method: " << method << '\n';
    return kExitConfig;
  }
  write_outputs(ex, result);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private heavy-hitter discovery simulator"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a prefix-tree experiment");
  run_cmd->add_option("--config", config_path, "Experiment config (JSON)")
      ->required();

  double eps_agg = 1.0, delta = 1e-6, gamma = 1.0, tolerance = 1e-3;
  uint64_t rounds = 1, devices = 1;
  CLI::App* acc_cmd =
      app.add_subcommand("accountant", "Solve the per-round local epsilon");
  acc_cmd->add_option("--eps-agg", eps_agg, "Aggregate epsilon")->required();
  acc_cmd->add_option("--delta", delta, "Aggregate delta")->required();
  acc_cmd->add_option("--rounds", rounds, "Iterations T")->required();
  acc_cmd->add_option("--devices", devices, "Device count N")->required();
  acc_cmd->add_option("--gamma", gamma, "Poisson sampling rate");
  acc_cmd->add_option("--tolerance", tolerance, "Solver tolerance");

  uint64_t gen_devices = 1000, gen_vocab = 1000, gen_seed = 1;
  double gen_zipf = 1.1, gen_words_mean = 10.0;
  uint32_t gen_words_min = 1;
  std::string gen_out = "dataset.tsv";
  CLI::App* gen_cmd =
      app.add_subcommand("gen", "Generate a synthetic Zipf dataset");
  gen_cmd->add_option("--devices", gen_devices, "Device count")->required();
  gen_cmd->add_option("--vocab", gen_vocab, "Vocabulary size")->required();
  gen_cmd->add_option("--zipf", gen_zipf, "Zipf exponent")->required();
  gen_cmd->add_option("--seed", gen_seed, "Seed")->required();
  gen_cmd->add_option("--words-mean", gen_words_mean,
                      "Mean words per device (Poisson)");
  gen_cmd->add_option("--words-min", gen_words_min, "Minimum words per device");
  gen_cmd->add_option("--out", gen_out, "Output TSV path");

  std::string bl_config, bl_method;
  std::optional<uint64_t> bl_theta, bl_rounds;
  std::optional<double> bl_rate;
  CLI::App* bl_cmd = app.add_subcommand("baseline", "Run a baseline method");
  bl_cmd->add_option("--config", bl_config, "Experiment config (JSON)")
      ->required();
  bl_cmd->add_option("--method", bl_method,
                     "triehh | triehhpp | central-laplace | central-gaussian");
  bl_cmd->add_option("--theta", bl_theta, "Vote threshold");
  bl_cmd->add_option("--rate", bl_rate, "Sampling rate");
  bl_cmd->add_option("--rounds", bl_rounds, "Iterations T");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(config_path);
    if (acc_cmd->parsed()) {
      return cmd_accountant(eps_agg, delta, rounds, devices, gamma, tolerance);
    }
    if (gen_cmd->parsed()) {
      return cmd_gen(gen_devices, gen_vocab, gen_zipf, gen_seed, gen_words_mean,
                     gen_words_min, gen_out);
    }
    if (bl_cmd->parsed()) {
      return cmd_baseline(bl_config, bl_method, bl_theta, bl_rate, bl_rounds);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::kBudgetTooTight:
        return kExitInfeasible;
      case ErrorCode::kInvalidArgument:
      case ErrorCode::kParse:
      case ErrorCode::kIo:
      case ErrorCode::kInfeasibleTheta:
        return kExitConfig;
      default:
        return kExitRuntime;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}
