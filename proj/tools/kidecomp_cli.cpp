// Copyright 2026 The kidecomp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// kidecomp: command-line front end over the C API.
//
// Exit codes: 0 success, 2 parse or validation failure, 3 numerical
// failure, 4 configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kid/kid.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitConfig = 4;

struct Failure {
  int exit_code;
  std::string message;
};

struct Config {
  std::string command;
  std::string input;
  std::string output;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int trials = 10000;
  int n_messages = 8;
  double delta = 0.25;
  std::string format = "json";
  int threads = 1;
  bool records = false;
  std::vector<double> deltas{-0.25, 0.0, 0.25};
  std::string decomposition;
  int channels = 20;
  std::string blocks = "2x1,1x2";
  int states = 3;
  std::string truth;
};

int exit_code_for(kid_status status) {
  switch (status) {
    case KID_ERR_PARSE:
    case KID_ERR_VALIDATION:
      return kExitInput;
    case KID_ERR_CONFIG_TOO_LARGE:
    case KID_ERR_INVALID_ARGUMENT:
    case KID_ERR_EMPTY_TYPICAL_SET:
    case KID_ERR_REJECTION_EXHAUSTED:
      return kExitConfig;
    default:
      return kid_status_is_numerical(status) ? kExitNumerical : kExitConfig;
  }
}

void check(kid_status status) {
  if (status != KID_OK) throw Failure{exit_code_for(status), kid_last_error()};
}

struct EnsembleDeleter {
  void operator()(kid_ensemble* e) const { kid_ensemble_free(e); }
};
struct DecompositionDeleter {
  void operator()(kid_decomposition* d) const { kid_decomposition_free(d); }
};
using EnsemblePtr = std::unique_ptr<kid_ensemble, EnsembleDeleter>;
using DecompositionPtr = std::unique_ptr<kid_decomposition, DecompositionDeleter>;

// Takes ownership of a string returned by the C API.
std::string take(char* s) {
  std::string out(s);
  kid_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitInput, "cannot read input file '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kExitConfig, "cannot write output file '" + path + "'"};
  out << text;
}

void emit(const Config& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
  } else {
    write_file(cfg.output, text);
  }
}

// Every floating-point number is reduced to 12 significant digits before
// printing.
void round12(json& j) {
  if (j.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", j.get<double>());
    j = std::strtod(buf, nullptr);
  } else if (j.is_structured()) {
    for (auto& x : j) round12(x);
  }
}

std::string render_text(const json& j, const std::string& prefix = "") {
  std::string out;
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      out += render_text(value, prefix.empty() ? key : prefix + "." + key);
    }
  } else if (j.is_array() && !j.empty() && j.front().is_object()) {
    for (std::size_t i = 0; i < j.size(); ++i) out += render_text(j[i], prefix + "[" + std::to_string(i) + "]");
  } else {
    out += prefix + " = " + j.dump() + "\n";
  }
  return out;
}

std::string format_output(const Config& cfg, json doc) {
  round12(doc);
  if (cfg.format == "text") return render_text(doc);
  return doc.dump(2) + "\n";
}

json config_echo(const Config& cfg) {
  json c{{"command", cfg.command},
         {"input", cfg.input},
         {"output", cfg.output.empty() ? "-" : cfg.output},
         {"tol", cfg.tol},
         {"seed", cfg.seed},
         {"trials", cfg.trials},
         {"n_messages", cfg.n_messages},
         {"delta", cfg.delta},
         {"format", cfg.format}};
  if (cfg.command == "simulate-asymptotic" || cfg.command == "rate-sweep") c["threads"] = cfg.threads;
  if (cfg.command == "simulate-individual") c["records"] = cfg.records;
  if (cfg.command == "rate-sweep") c["deltas"] = cfg.deltas;
  if (cfg.command == "verify") {
    c["decomposition"] = cfg.decomposition.empty() ? "-" : cfg.decomposition;
    c["channels"] = cfg.channels;
  }
  if (cfg.command == "gen") {
    c["blocks"] = cfg.blocks;
    c["states"] = cfg.states;
    c["truth"] = cfg.truth;
  }
  return c;
}

json report(const Config& cfg, json result, json residuals) {
  return json{{"version", std::string("kidecomp ") + kid_version()},
              {"config", config_echo(cfg)},
              {"result", std::move(result)},
              {"residuals", std::move(residuals)}};
}

EnsemblePtr load_ensemble(const Config& cfg) {
  if (cfg.input.empty()) throw Failure{kExitConfig, "--input is required"};
  const auto text = read_file(cfg.input);
  kid_ensemble* e = nullptr;
  check(kid_ensemble_read(text.c_str(), cfg.tol, &e));
  return EnsemblePtr(e);
}

DecompositionPtr decompose(const Config& cfg, const kid_ensemble* e) {
  kid_decomposition* d = nullptr;
  check(kid_decompose(e, cfg.seed, cfg.tol, &d));
  return DecompositionPtr(d);
}

kid_asymptotic_config asymptotic_config(const Config& cfg) {
  return {cfg.n_messages, cfg.delta, cfg.trials, cfg.seed, cfg.threads};
}

json parse_result(const std::string& text) { return json::parse(text); }

int run_decompose(const Config& cfg) {
  auto e = load_ensemble(cfg);
  auto d = decompose(cfg, e.get());
  char* text = nullptr;
  check(kid_decomposition_write(d.get(), &text));
  const auto result = parse_result(take(text));
  char* v = nullptr;
  check(kid_verify_json(d.get(), e.get(), cfg.tol, 0, cfg.seed, &v));
  const auto checks = parse_result(take(v));
  json residuals{{"max_reconstruction_residual", checks["max_reconstruction_residual"]},
                 {"max_weight_sum_residual", checks["max_weight_sum_residual"]}};
  emit(cfg, format_output(cfg, report(cfg, result, residuals)));
  return kExitOk;
}

int run_measures(const Config& cfg) {
  auto e = load_ensemble(cfg);
  auto d = decompose(cfg, e.get());
  kid_measures m{};
  check(kid_info_measures(d.get(), e.get(), cfg.tol, &m));
  json blocks = json::array();
  for (std::size_t l = 0; l < kid_decomposition_num_blocks(d.get()); ++l) {
    int n = 0;
    int k = 0;
    double p = 0.0;
    check(kid_decomposition_block(d.get(), l, &n, &k, &p));
    blocks.push_back({{"n", n}, {"k", k}, {"p", p}});
  }
  json result{{"S_total", m.S_total},
              {"I_C", m.I_C},
              {"I_NC", m.I_NC},
              {"I_R", m.I_R},
              {"E_per_prepare", m.E_per_prepare},
              {"E_per_consume", m.E_per_consume},
              {"E_asy", m.E_asy},
              {"I_passive", m.I_passive},
              {"hybrid_qubit_rate", m.hybrid_qubit_rate},
              {"hybrid_bit_rate", m.hybrid_bit_rate},
              {"blocks", std::move(blocks)}};
  emit(cfg, format_output(cfg, report(cfg, result, {{"additivity_residual", m.additivity_residual}})));
  return kExitOk;
}

int run_simulate_individual(const Config& cfg) {
  auto e = load_ensemble(cfg);
  auto d = decompose(cfg, e.get());
  char* text = nullptr;
  check(kid_simulate_individual_json(e.get(), d.get(), cfg.trials, cfg.seed, cfg.tol,
                                     cfg.records ? 1 : 0, &text));
  auto result = parse_result(take(text));
  const auto& s = result["summary"];
  json residuals{{"mixture_residual", s["mixture_residual"]},
                 {"max_fidelity_deficit", 1.0 - s["min_conditional_fidelity"].get<double>()}};
  emit(cfg, format_output(cfg, report(cfg, result, residuals)));
  return kExitOk;
}

int run_simulate_asymptotic(const Config& cfg) {
  auto e = load_ensemble(cfg);
  auto d = decompose(cfg, e.get());
  const auto acfg = asymptotic_config(cfg);
  char* text = nullptr;
  check(kid_simulate_asymptotic_json(e.get(), d.get(), &acfg, cfg.tol, &text));
  auto result = parse_result(take(text));
  kid_measures m{};
  check(kid_info_measures(d.get(), e.get(), cfg.tol, &m));
  result["I_NC"] = m.I_NC;
  json residuals{{"F_stderr", result["F_stderr"]},
                 {"rate_excess", result["qubit_rate_used"].get<double>() - (m.I_NC + cfg.delta)}};
  emit(cfg, format_output(cfg, report(cfg, result, residuals)));
  return kExitOk;
}

int run_rate_sweep(const Config& cfg) {
  auto e = load_ensemble(cfg);
  auto d = decompose(cfg, e.get());
  const auto acfg = asymptotic_config(cfg);
  char* text = nullptr;
  check(kid_rate_sweep_json(e.get(), d.get(), &acfg, cfg.deltas.data(), cfg.deltas.size(), cfg.tol,
                            &text));
  auto runs = parse_result(take(text));
  json table = json::array();
  for (const auto& r : runs) {
    table.push_back({{"delta", r["delta"]},
                     {"qubit_rate", r["qubit_rate_used"]},
                     {"F_bar", r["F_bar"]},
                     {"stderr", r["F_stderr"]},
                     {"F_mixture", r["F_mixture"]}});
  }
  kid_measures m{};
  check(kid_info_measures(d.get(), e.get(), cfg.tol, &m));
  json result{{"N", cfg.n_messages}, {"I_NC", m.I_NC}, {"table", std::move(table)}};
  emit(cfg, format_output(cfg, report(cfg, result, json::object())));
  return kExitOk;
}

int run_remove_redundancy(const Config& cfg) {
  auto e = load_ensemble(cfg);
  auto d = decompose(cfg, e.get());
  kid_ensemble* reduced = nullptr;
  check(kid_remove_redundancy(d.get(), e.get(), &reduced));
  EnsemblePtr owned(reduced);
  char* text = nullptr;
  check(kid_ensemble_write(owned.get(), &text));
  auto doc = parse_result(take(text));
  round12(doc);
  emit(cfg, doc.dump(1) + "\n");
  return kExitOk;
}

int run_verify(const Config& cfg) {
  auto e = load_ensemble(cfg);
  DecompositionPtr d;
  if (cfg.decomposition.empty()) {
    d = decompose(cfg, e.get());
  } else {
    // Accepts a bare decomposition file or a `decompose` report.
    auto doc = json::parse(read_file(cfg.decomposition), nullptr, false);
    if (doc.is_discarded()) throw Failure{kExitInput, "ParseError: decomposition file is not JSON"};
    if (doc.is_object() && doc.contains("result") && doc.contains("version")) doc = doc["result"];
    kid_decomposition* raw = nullptr;
    check(kid_decomposition_read(doc.dump().c_str(), &raw));
    d.reset(raw);
  }
  char* text = nullptr;
  check(kid_verify_json(d.get(), e.get(), cfg.tol, cfg.channels, cfg.seed, &text));
  auto result = parse_result(take(text));
  json residuals{{"max_reconstruction_residual", result["max_reconstruction_residual"]},
                 {"max_weight_sum_residual", result["max_weight_sum_residual"]},
                 {"max_channel_residual", result["max_channel_residual"]},
                 {"channel_tp_residual", result["channel_tp_residual"]}};
  emit(cfg, format_output(cfg, report(cfg, result, residuals)));
  return kExitOk;
}

std::vector<std::pair<int, int>> parse_blocks(const std::string& spec) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    try {
      if (x == std::string::npos) throw std::invalid_argument(item);
      std::size_t used_n = 0;
      std::size_t used_k = 0;
      const int n = std::stoi(item.substr(0, x), &used_n);
      const int k = std::stoi(item.substr(x + 1), &used_k);
      if (used_n != x || used_k != item.size() - x - 1) throw std::invalid_argument(item);
      out.emplace_back(n, k);
    } catch (const std::exception&) {
      throw Failure{kExitConfig, "--blocks: expected a list like 2x1,1x2, got '" + item + "'"};
    }
  }
  if (out.empty()) throw Failure{kExitConfig, "--blocks: at least one block required"};
  return out;
}

int run_gen(const Config& cfg) {
  if (cfg.output.empty()) throw Failure{kExitConfig, "gen requires --output"};
  const auto blocks = parse_blocks(cfg.blocks);
  std::vector<int> ns, ks;
  for (auto [n, k] : blocks) {
    ns.push_back(n);
    ks.push_back(k);
  }
  kid_ensemble* e = nullptr;
  kid_decomposition* truth = nullptr;
  check(kid_generate_planted(ns.data(), ks.data(), blocks.size(), cfg.states, cfg.seed, &e, &truth));
  EnsemblePtr owned_e(e);
  DecompositionPtr owned_t(truth);
  char* text = nullptr;
  check(kid_ensemble_write(e, &text));
  auto ens = parse_result(take(text));
  round12(ens);
  check(kid_decomposition_write(truth, &text));
  auto dec = parse_result(take(text));
  round12(dec);
  const std::string truth_path = cfg.truth.empty() ? cfg.output + ".truth.json" : cfg.truth;
  write_file(cfg.output, ens.dump(1) + "\n");
  write_file(truth_path, dec.dump(1) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Koashi-Imoto decomposition of quantum state ensembles"};
  app.set_version_flag("--version", std::string("kidecomp ") + kid_version());
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("-i,--input", cfg.input, "ensemble file");
    if (needs_input) in->required();
    sub->add_option("-o,--output", cfg.output, "output path (default stdout)");
    sub->add_option("--tol", cfg.tol, "relative tolerance")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    sub->add_option("--format", cfg.format, "json or text")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
  };
  auto simulation = [&](CLI::App* sub) {
    sub->add_option("--trials", cfg.trials, "Monte Carlo trials")->capture_default_str();
    sub->add_option("--n-messages", cfg.n_messages, "messages per block N")->capture_default_str();
    sub->add_option("--delta", cfg.delta, "rate slack in qubits per message")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "worker threads")->capture_default_str();
  };

  auto* dec = app.add_subcommand("decompose", "print the KI decomposition");
  common(dec, true);
  auto* mea = app.add_subcommand("measures", "entropic quantities and teleportation costs");
  common(mea, true);
  auto* ind = app.add_subcommand("simulate-individual", "per-message perfect teleportation");
  common(ind, true);
  ind->add_option("--trials", cfg.trials, "Monte Carlo trials")->capture_default_str();
  ind->add_flag("--records", cfg.records, "include every trial record");
  auto* asy = app.add_subcommand("simulate-asymptotic", "block compression at rate I_NC + delta");
  common(asy, true);
  simulation(asy);
  auto* swp = app.add_subcommand("rate-sweep", "asymptotic scheme over several deltas");
  common(swp, true);
  simulation(swp);
  swp->add_option("--deltas", cfg.deltas, "rate slacks")->delimiter(',')->capture_default_str();
  auto* red = app.add_subcommand("remove-redundancy", "drop the redundant K factors");
  common(red, true);
  auto* ver = app.add_subcommand("verify", "check a decomposition against its ensemble");
  common(ver, true);
  ver->add_option("--decomposition", cfg.decomposition, "decomposition file (default: decompose)");
  ver->add_option("--channels", cfg.channels, "random preserving channels")->capture_default_str();
  auto* gen = app.add_subcommand("gen", "write a planted ensemble and its ground truth");
  common(gen, false);
  gen->add_option("--blocks", cfg.blocks, "blocks as NxK list")->capture_default_str();
  gen->add_option("--states", cfg.states, "number of states")->capture_default_str();
  gen->add_option("--truth", cfg.truth, "ground truth path (default <output>.truth.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (!(cfg.tol > 0.0)) throw Failure{kExitConfig, "--tol must be positive"};
    if (cfg.trials < 1) throw Failure{kExitConfig, "--trials must be >= 1"};
    if (cfg.n_messages < 1) throw Failure{kExitConfig, "--n-messages must be >= 1"};
    if (cfg.channels < 0) throw Failure{kExitConfig, "--channels must be >= 0"};
    if (cfg.threads < 1) throw Failure{kExitConfig, "--threads must be >= 1"};
    if (cfg.command == "decompose") return run_decompose(cfg);
    if (cfg.command == "measures") return run_measures(cfg);
    if (cfg.command == "simulate-individual") return run_simulate_individual(cfg);
    if (cfg.command == "simulate-asymptotic") return run_simulate_asymptotic(cfg);
    if (cfg.command == "rate-sweep") return run_rate_sweep(cfg);
    if (cfg.command == "remove-redundancy") return run_remove_redundancy(cfg);
    if (cfg.command == "verify") return run_verify(cfg);
    if (cfg.command == "gen") return run_gen(cfg);
    throw Failure{kExitConfig, "unknown command " + cfg.command};
  } catch (const Failure& f) {
    std::cerr << "kidecomp " << cfg.command << ": " << f.message << "\n";
    return f.exit_code;
  }
}
