// hcs: command-line front end for quantized recovery from 1-bit measurements.
//
//   hcs quantizer --k 10 [--x-inf -1 --x-sup 1]
//   hcs recover --signal x.json --m 2000 --k 8 --seed 7 [--dequantize midpoint]
//   hcs bounds lemma4 --sparsity 10 --n 1000 --epsilon 0.1 --mu 0.05
//   hcs bench --config sweep.json --out sweep.csv
//
// Machine-readable results go to stdout (CSV or JSON), diagnostics to stderr.
// Exit status: 0 success, 2 usage or validation error, 3 data/dimension error.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hcs/bench.hpp"
#include "hcs/bounds.hpp"
#include "hcs/dequantizer.hpp"
#include "hcs/error.hpp"
#include "hcs/measurement.hpp"
#include "hcs/quantizer.hpp"
#include "hcs/recovery.hpp"
#include "hcs/serialization.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

using hcs::json;

struct QuantizerFlags {
  std::size_t k = 8;
  double x_inf = -1.0;
  double x_sup = 1.0;

  void attach(CLI::App& app, bool k_required) {
    auto* opt = app.add_option("--k", k, "Number of quantization intervals (>= 2)");
    if (k_required) opt->required();
    app.add_option("--x-inf", x_inf, "Lower end of the signal range")->capture_default_str();
    app.add_option("--x-sup", x_sup, "Upper end of the signal range")->capture_default_str();
  }
  hcs::HcsQuantizer build() const { return hcs::HcsQuantizer({k, x_inf, x_sup}); }
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double seconds(std::chrono::nanoseconds ns) { return std::chrono::duration<double>(ns).count(); }

// ---- quantizer -------------------------------------------------------------

int run_quantizer(const QuantizerFlags& flags) {
  const hcs::HcsQuantizer quantizer = flags.build();
  const auto s = quantizer.s_boundaries();
  const auto p = quantizer.p_boundaries();
  std::cout << "j,s_boundary,p_boundary\n";
  for (std::size_t j = 0; j < s.size(); ++j) {
    std::cout << j << ',' << fmt17(s[j]) << ',' << (j < p.size() ? fmt17(p[j]) : "") << '\n';
  }
  return kExitOk;
}

// ---- recover ---------------------------------------------------------------

struct RecoverFlags {
  std::string signal_path;
  std::optional<std::size_t> n;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  std::optional<double> snr_db;
  std::string dequantize;
  std::optional<std::size_t> sparsity;
  std::size_t max_iterations = 100;
  bool timing = false;
};

int run_recover(const RecoverFlags& flags, const QuantizerFlags& qflags) {
  const hcs::Signal x = hcs::signal_from_json(hcs::read_json_file(flags.signal_path));
  if (flags.n && *flags.n != x.size()) {
    throw hcs::Error(hcs::ErrorCode::kDimensionMismatch,
                     "--n " + std::to_string(*flags.n) + " but the signal has " +
                         std::to_string(x.size()) + " entries");
  }
  const hcs::HcsQuantizer quantizer = qflags.build();
  const auto ensemble = hcs::MeasurementEnsemble::generate(x.size(), flags.m, flags.seed);

  std::vector<double> measured(x.values().begin(), x.values().end());
  if (flags.snr_db) {
    measured = hcs::add_noise(measured, *flags.snr_db, hcs::derive_seed(flags.seed, {3}));
  }
  const hcs::OneBitMeasurements y = hcs::measure(ensemble, measured);
  const hcs::RecoveryResult result = hcs::recover(y, ensemble, quantizer);
  const hcs::QuantizedSignal truth = hcs::quantize(x, quantizer);

  json report{{"ensemble", hcs::ensemble_descriptor(ensemble)},
              {"quantizer", hcs::to_json(quantizer)},
              {"q_star", result.q_star.indices},
              {"q", truth.indices},
              {"quantizer_hash", hcs::hex64(quantizer.id())},
              {"quantized_error", hcs::quantized_error(truth, result.q_star)},
              {"kl_evaluations", result.kl_evaluations}};
  if (flags.snr_db) report["snr_db"] = *flags.snr_db;
  json timings{{"recovery_seconds", seconds(result.elapsed)}};

  if (!flags.dequantize.empty()) {
    const auto start = std::chrono::steady_clock::now();
    hcs::DequantizedSignal x_star;
    if (flags.dequantize == "midpoint") {
      x_star = hcs::midpoint_dequantize(result.q_star, quantizer);
    } else {
      hcs::DequantizerConfig config;
      config.max_iterations = flags.max_iterations;
      config.sparsity = flags.sparsity ? flags.sparsity : x.sparsity_hint();
      std::optional<hcs::BoxConstraint> box;
      if (flags.dequantize == "biht-box") box = hcs::box_from_recovery(result.q_star, quantizer);
      x_star = hcs::biht(y, ensemble, config, box);
    }
    timings["dequantize_seconds"] = seconds(std::chrono::steady_clock::now() - start);
    json dq = hcs::to_json(x_star);
    dq["method"] = flags.dequantize;
    dq["angular_error"] = hcs::angular_error(x.values(), x_star.values);
    dq["hamming_error"] = hcs::hamming_distance(hcs::measure(ensemble, x), hcs::measure(ensemble, x_star.values));
    report["x_star"] = dq;
  }
  if (flags.timing) report["timings"] = timings;
  std::cout << report.dump(2) << '\n';
  return kExitOk;
}

// ---- bounds ----------------------------------------------------------------

struct BoundFlags {
  double sigma = 0.0;
  double x_norm = 1.0;
  double g = 0.0;
  double gamma = 0.0;
  std::size_t m = 1;
  double x_i = 0.0;
  std::size_t candidate = 1;
  double eta = 0.05;
  std::size_t sparsity = 0;
  std::size_t n = 1;
  double epsilon = 0.1;
  double mu = 0.05;
  std::string signal_path;
};

void print_report(const hcs::BoundReport& report) {
  std::cout << hcs::to_json(report).dump(2) << '\n';
}

void add_bounds_commands(CLI::App& bounds, BoundFlags& f, QuantizerFlags& q,
                         std::function<void(hcs::BoundReport)>& pending) {
  using hcs::BoundKind;
  auto* c = bounds.add_subcommand("consistency", "Expected Hamming flip rate g(sigma, |x|)");
  c->add_option("--sigma", f.sigma, "Norm of the reconstruction error")->required();
  c->add_option("--x-norm", f.x_norm, "Norm of the signal")->capture_default_str();
  c->callback([&] {
    pending({"consistency_bound",
             {{"sigma", f.sigma}, {"x_norm", f.x_norm}},
             hcs::consistency_bound(f.sigma, f.x_norm),
             BoundKind::kDistance});
  });

  auto* t = bounds.add_subcommand("consistency-tail", "Tail probability exp(-2 m gamma^2)");
  t->add_option("--gamma", f.gamma, "Deviation above g")->required();
  t->add_option("--m", f.m, "Number of measurements")->required();
  t->add_option("--g", f.g, "Expected flip rate (reported only)");
  t->callback([&] {
    pending({"consistency_tail",
             {{"g", f.g}, {"gamma", f.gamma}, {"m", static_cast<double>(f.m)}},
             hcs::consistency_tail(f.gamma, f.m),
             BoundKind::kProbability});
  });

  auto* th2 = bounds.add_subcommand("theorem2", "Probability of recovering a wrong interval");
  th2->add_option("--x-i", f.x_i, "Signal coordinate")->required();
  th2->add_option("--candidate", f.candidate, "Wrong interval index q* (1-based)")->required();
  th2->add_option("--m", f.m, "Number of measurements")->required();
  q.attach(*th2, true);
  th2->callback([&] {
    pending({"theorem2_failure_bound",
             {{"x_i", f.x_i}, {"candidate", static_cast<double>(f.candidate)},
              {"m", static_cast<double>(f.m)}, {"k", static_cast<double>(q.k)},
              {"x_inf", q.x_inf}, {"x_sup", q.x_sup}},
             hcs::theorem2_failure_bound(f.x_i, q.build(), f.candidate, f.m),
             BoundKind::kProbability});
  });

  auto* c2 = bounds.add_subcommand("corollary2", "Measurements to recover x_i w.p. > 1 - eta");
  c2->add_option("--x-i", f.x_i, "Signal coordinate")->required();
  c2->add_option("--eta", f.eta, "Failure probability")->required();
  q.attach(*c2, true);
  c2->callback([&] {
    pending({"corollary2_measurements",
             {{"x_i", f.x_i}, {"eta", f.eta}, {"k", static_cast<double>(q.k)},
              {"x_inf", q.x_inf}, {"x_sup", q.x_sup}},
             static_cast<double>(hcs::corollary2_measurements(f.x_i, q.build(), f.eta)),
             BoundKind::kCount});
  });

  auto* c2s = bounds.add_subcommand("corollary2-signal",
                                    "Measurements to recover a whole signal w.p. > 1 - eta");
  c2s->add_option("--signal", f.signal_path, "Signal JSON file")->required();
  c2s->add_option("--eta", f.eta, "Failure probability")->required();
  q.attach(*c2s, true);
  c2s->callback([&] {
    const hcs::Signal x = hcs::signal_from_json(hcs::read_json_file(f.signal_path));
    pending({"corollary2_signal_measurements",
             {{"n", static_cast<double>(x.size())}, {"eta", f.eta},
              {"k", static_cast<double>(q.k)}, {"x_inf", q.x_inf}, {"x_sup", q.x_sup}},
             static_cast<double>(hcs::corollary2_signal_measurements(x.values(), q.build(), f.eta)),
             BoundKind::kCount});
  });

  auto* l4 = bounds.add_subcommand("lemma4", "Measurements for a binary epsilon-stable embedding");
  l4->add_option("--sparsity", f.sparsity, "Sparsity K")->required();
  l4->add_option("--n", f.n, "Signal dimension")->required();
  l4->add_option("--epsilon", f.epsilon, "Embedding distortion")->required();
  l4->add_option("--mu", f.mu, "Failure probability")->required();
  l4->callback([&] {
    pending({"lemma4_measurements",
             {{"sparsity", static_cast<double>(f.sparsity)}, {"n", static_cast<double>(f.n)},
              {"epsilon", f.epsilon}, {"mu", f.mu}},
             static_cast<double>(hcs::lemma4_measurements(f.sparsity, f.n, f.epsilon, f.mu)),
             BoundKind::kCount});
  });

  auto* t3 = bounds.add_subcommand("theorem3", "Angular error bound after dequantization");
  t3->add_option("--sigma", f.sigma, "Norm of the reconstruction error")->required();
  t3->add_option("--x-norm", f.x_norm, "Norm of the signal")->capture_default_str();
  t3->add_option("--gamma", f.gamma, "Hamming tail slack")->required();
  t3->add_option("--epsilon", f.epsilon, "Embedding distortion")->required();
  t3->callback([&] {
    pending({"theorem3_error_bound",
             {{"sigma", f.sigma}, {"x_norm", f.x_norm}, {"gamma", f.gamma},
              {"epsilon", f.epsilon}},
             hcs::theorem3_error_bound(f.sigma, f.x_norm, f.gamma, f.epsilon),
             BoundKind::kDistance});
  });

  bounds.require_subcommand(1);
}

// ---- bench -----------------------------------------------------------------

int run_bench(const std::string& config_path, const std::string& out_path) {
  hcs::ExperimentSpec spec;
  try {
    spec = hcs::experiment_spec_from_json(hcs::read_json_file(config_path));
  } catch (const hcs::Error& e) {
    throw hcs::Error(e.code() == hcs::ErrorCode::kIoError ? e.code() : hcs::ErrorCode::kSpecInvalid,
                     e.what());
  }
  std::cerr << "hcs bench: " << hcs::to_string(spec.family) << ", " << spec.grid.size()
            << " cells x " << spec.trials_per_cell << " trials, " << hcs::worker_threads()
            << " threads\n";
  const auto records = hcs::run_experiment(spec);
  const hcs::CsvSummary summary = hcs::emit_csv(records, spec.family, out_path, spec.record_timing);

  std::size_t failed = 0;
  for (const auto& r : records) {
    if (r.failure) {
      ++failed;
      std::cerr << "trial " << r.trial_index << " of cell " << r.cell_index
                << " failed: " << *r.failure << '\n';
    }
  }
  json out{{"family", std::string(hcs::to_string(spec.family))},
           {"rows", summary.rows},
           {"checksum", hcs::hex64(summary.checksum)},
           {"failed_trials", failed},
           {"output", out_path}};
  std::cout << out.dump(2) << '\n';
  return failed == 0 ? kExitOk : kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized recovery from 1-bit compressed measurements"};
  app.require_subcommand(1);

  QuantizerFlags quantizer_flags;
  auto* quantizer_cmd = app.add_subcommand("quantizer", "Print the quantizer boundary table (CSV)");
  quantizer_flags.attach(*quantizer_cmd, true);

  RecoverFlags recover_flags;
  QuantizerFlags recover_quantizer;
  auto* recover_cmd = app.add_subcommand("recover", "Measure a signal and recover its quantization");
  recover_cmd->add_option("--signal", recover_flags.signal_path, "Signal JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  recover_cmd->add_option("--n", recover_flags.n, "Expected signal dimension");
  recover_cmd->add_option("--m", recover_flags.m, "Number of 1-bit measurements")->required()
      ->check(CLI::PositiveNumber);
  recover_cmd->add_option("--seed", recover_flags.seed, "Ensemble seed")->capture_default_str();
  recover_cmd->add_option("--snr", recover_flags.snr_db, "Add Gaussian noise at this SNR (dB)");
  recover_cmd->add_option("--dequantize", recover_flags.dequantize, "Dequantizer")
      ->check(CLI::IsMember({"midpoint", "biht", "biht-box"}));
  recover_cmd->add_option("--sparsity", recover_flags.sparsity,
                          "BIHT sparsity (defaults to the signal's hint)");
  recover_cmd->add_option("--max-iterations", recover_flags.max_iterations, "BIHT iteration cap")
      ->capture_default_str();
  recover_cmd->add_flag("--timing", recover_flags.timing, "Include wall-clock timings");
  recover_quantizer.attach(*recover_cmd, true);

  BoundFlags bound_flags;
  QuantizerFlags bound_quantizer;
  std::optional<hcs::BoundReport> report;
  std::function<void(hcs::BoundReport)> pending = [&](hcs::BoundReport r) { report = std::move(r); };
  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate a closed-form bound (JSON)");
  add_bounds_commands(*bounds_cmd, bound_flags, bound_quantizer, pending);

  std::string config_path;
  std::string out_path;
  auto* bench_cmd = app.add_subcommand("bench", "Run an experiment sweep and write CSV");
  bench_cmd->add_option("--config", config_path, "Experiment config JSON")->required();
  bench_cmd->add_option("--out", out_path, "Destination CSV")->required();

  try {
    app.parse(argc, argv);
    if (*quantizer_cmd) return run_quantizer(quantizer_flags);
    if (*recover_cmd) return run_recover(recover_flags, recover_quantizer);
    if (*bounds_cmd) {
      if (report) print_report(*report);
      return kExitOk;
    }
    if (*bench_cmd) return run_bench(config_path, out_path);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const hcs::Error& e) {
    std::cerr << "hcs: " << hcs::to_string(e.code()) << ": " << e.what() << '\n';
    return hcs::is_data_error(e.code()) ? kExitData : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "hcs: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
