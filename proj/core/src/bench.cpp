#include "hcs/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <thread>

#include "hcs/error.hpp"
#include "hcs/measurement.hpp"
#include "hcs/quantizer.hpp"
#include "hcs/recovery.hpp"

namespace hcs {

namespace {

using Clock = std::chrono::steady_clock;

enum class Stream : std::uint64_t { kSignal = 1, kEnsemble = 2, kNoise = 3 };

std::uint64_t stream_seed(std::uint64_t trial_seed, Stream stream) {
  return derive_seed(trial_seed, {static_cast<std::uint64_t>(stream)});
}

// Depends only on the cell's coordinates, so reordering the grid leaves each
// record unchanged.
std::uint64_t trial_seed(std::uint64_t master, const GridCell& cell, std::size_t trial) {
  return derive_seed(master, {std::bit_cast<std::uint64_t>(cell.k_over_n),
                              std::bit_cast<std::uint64_t>(cell.m_over_n),
                              static_cast<std::uint64_t>(cell.m),
                              static_cast<std::uint64_t>(trial)});
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_seconds(std::chrono::nanoseconds ns) {
  return format_double(std::chrono::duration<double>(ns).count());
}

struct TrialContext {
  std::vector<double> clean;
  std::vector<double> measured;
  MeasurementEnsemble ensemble;
  OneBitMeasurements y;
};

TrialContext prepare_trial(const ExperimentSpec& spec, std::size_t sparsity, std::size_t m,
                           std::uint64_t seed) {
  std::vector<double> clean =
      generate_sparse_signal(spec.n, sparsity, stream_seed(seed, Stream::kSignal));
  std::vector<double> measured =
      spec.snr_db ? add_noise(clean, *spec.snr_db, stream_seed(seed, Stream::kNoise)) : clean;
  auto ensemble = MeasurementEnsemble::generate(spec.n, m, stream_seed(seed, Stream::kEnsemble));
  auto y = measure(ensemble, measured);
  return {std::move(clean), std::move(measured), std::move(ensemble), std::move(y)};
}

DequantizerConfig baseline_config(const ExperimentSpec& spec, std::size_t sparsity) {
  DequantizerConfig config = spec.dequantizer.value_or(DequantizerConfig{});
  config.sparsity = sparsity < spec.n ? std::optional<std::size_t>(sparsity) : std::nullopt;
  return config;
}

std::vector<double> clamp_to_range(std::vector<double> x, const HcsQuantizer& quantizer) {
  for (double& v : x) v = std::clamp(v, quantizer.config().x_inf, quantizer.config().x_sup);
  return x;
}

TrialRecord base_record(const ExperimentSpec& spec, std::size_t cell_index,
                        const GridCell& cell, std::size_t trial) {
  TrialRecord r;
  r.cell_index = cell_index;
  r.cell = cell;
  r.sparsity = cell_sparsity(spec, cell);
  r.m = cell_measurements(spec, cell);
  r.trial_index = trial;
  r.seed = trial_seed(spec.master_seed, cell, trial);
  return r;
}

void mark_failed(TrialRecord& r, const std::string& what) {
  r.failure = what;
  r.quantized_error = std::nan("");
}

std::vector<TrialRecord> recovery_trial(const ExperimentSpec& spec, const HcsQuantizer& quantizer,
                                        std::size_t cell_index, const GridCell& cell,
                                        std::size_t trial) {
  TrialRecord r = base_record(spec, cell_index, cell, trial);
  try {
    TrialContext ctx = prepare_trial(spec, r.sparsity, r.m, r.seed);
    const QuantizedSignal truth = quantize(ctx.clean, quantizer);
    const RecoveryResult hcs = recover(ctx.y, ctx.ensemble, quantizer);
    r.quantized_error = quantized_error(truth, hcs.q_star);
    r.elapsed_recovery = hcs.elapsed;
    if (spec.dequantizer) {
      const auto start = Clock::now();
      const DequantizedSignal x_star =
          biht(ctx.y, ctx.ensemble, baseline_config(spec, r.sparsity));
      const QuantizedSignal q_base = quantize(clamp_to_range(x_star.values, quantizer), quantizer);
      r.elapsed_baseline = Clock::now() - start;
      r.baseline_error = quantized_error(truth, q_base);
    }
  } catch (const Error& e) {
    mark_failed(r, e.what());
  }
  return {r};
}

std::vector<TrialRecord> consistency_trial(const ExperimentSpec& spec,
                                           const HcsQuantizer& quantizer, std::size_t cell_index,
                                           const GridCell& cell, std::size_t trial) {
  static constexpr const char* kMethods[] = {"midpoint", "biht-box", "biht"};
  std::vector<TrialRecord> out;
  for (const char* method : kMethods) {
    out.push_back(base_record(spec, cell_index, cell, trial));
    out.back().method = method;
  }
  try {
    TrialContext ctx = prepare_trial(spec, out[0].sparsity, out[0].m, out[0].seed);
    const QuantizedSignal truth = quantize(ctx.clean, quantizer);
    const RecoveryResult hcs = recover(ctx.y, ctx.ensemble, quantizer);
    const double err = quantized_error(truth, hcs.q_star);
    const OneBitMeasurements y_clean = measure(ctx.ensemble, ctx.clean);
    const DequantizerConfig config = baseline_config(spec, out[0].sparsity);

    auto fill = [&](TrialRecord& r, const std::vector<double>& x_star,
                    std::chrono::nanoseconds elapsed) {
      r.quantized_error = err;
      r.elapsed_recovery = hcs.elapsed;
      r.elapsed_baseline = elapsed;
      r.hamming_error = hamming_distance(y_clean, measure(ctx.ensemble, x_star));
      r.angular_error = angular_error(ctx.clean, x_star);
    };

    auto start = Clock::now();
    const DequantizedSignal mid = midpoint_dequantize(hcs.q_star, quantizer);
    fill(out[0], mid.values, Clock::now() - start);

    start = Clock::now();
    const DequantizedSignal boxed =
        biht(ctx.y, ctx.ensemble, config, box_from_recovery(hcs.q_star, quantizer));
    fill(out[1], boxed.values, Clock::now() - start);

    start = Clock::now();
    const DequantizedSignal plain = biht(ctx.y, ctx.ensemble, config);
    fill(out[2], plain.values, Clock::now() - start);
  } catch (const Error& e) {
    for (auto& r : out) mark_failed(r, e.what());
  }
  return out;
}

using TrialFn = std::vector<TrialRecord> (*)(const ExperimentSpec&, const HcsQuantizer&,
                                             std::size_t, const GridCell&, std::size_t);

std::vector<TrialRecord> run_jobs(const ExperimentSpec& spec, TrialFn fn, std::size_t threads) {
  validate(spec);
  const HcsQuantizer quantizer({spec.k, spec.x_inf, spec.x_sup});
  const std::size_t jobs = spec.grid.size() * spec.trials_per_cell;
  std::vector<std::vector<TrialRecord>> slots(jobs);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const std::size_t cell = job / spec.trials_per_cell;
      const std::size_t trial = job % spec.trials_per_cell;
      slots[job] = fn(spec, quantizer, cell, spec.grid[cell], trial);
    }
  };
  if (threads == 0) threads = worker_threads();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(jobs, 1));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  std::vector<TrialRecord> records;
  for (auto& slot : slots) {
    for (auto& r : slot) records.push_back(std::move(r));
  }
  return records;
}

}  // namespace

std::string_view to_string(ExperimentFamily family) noexcept {
  switch (family) {
    case ExperimentFamily::kPhaseGrid: return "phase-grid";
    case ExperimentFamily::kErrorVsM: return "error-vs-m";
    case ExperimentFamily::kConsistency: return "consistency";
  }
  return "unknown";
}

ExperimentFamily parse_family(std::string_view name) {
  for (auto f : {ExperimentFamily::kPhaseGrid, ExperimentFamily::kErrorVsM,
                 ExperimentFamily::kConsistency}) {
    if (name == to_string(f)) return f;
  }
  throw Error(ErrorCode::kSpecInvalid, "unknown experiment family '" + std::string(name) + "'");
}

void validate(const ExperimentSpec& spec) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kSpecInvalid, what); };
  if (spec.n == 0) fail("n must be >= 1");
  if (spec.k < 2) fail("k must be >= 2");
  if (!(spec.x_inf >= -1.0 && spec.x_inf < spec.x_sup && spec.x_sup <= 1.0)) {
    fail("quantizer range must satisfy -1 <= x_inf < x_sup <= 1");
  }
  if (spec.grid.empty()) fail("grid must be nonempty");
  if (spec.trials_per_cell == 0) fail("trials_per_cell must be >= 1");
  if (spec.sparsity && (*spec.sparsity == 0 || *spec.sparsity > spec.n)) {
    fail("sparsity must lie in [1, n]");
  }
  if (spec.snr_db && !std::isfinite(*spec.snr_db)) fail("snr_db must be finite");
  if (spec.family == ExperimentFamily::kConsistency && !spec.dequantizer) {
    fail("the consistency family needs a dequantizer config");
  }
  if (spec.dequantizer) {
    try {
      validate(*spec.dequantizer);
    } catch (const Error& e) {
      fail(std::string("dequantizer: ") + e.what());
    }
  }
  for (const GridCell& cell : spec.grid) {
    if (spec.family == ExperimentFamily::kPhaseGrid) {
      if (!(cell.k_over_n > 0.0 && cell.k_over_n <= 1.0)) fail("K/n must lie in (0, 1]");
      if (!(cell.m_over_n > 0.0) || !std::isfinite(cell.m_over_n)) fail("m/n must be > 0");
    } else if (cell.m == 0) {
      fail("measurement counts must be >= 1");
    }
  }
}

std::size_t cell_sparsity(const ExperimentSpec& spec, const GridCell& cell) {
  if (spec.family == ExperimentFamily::kPhaseGrid) {
    const double k = std::round(cell.k_over_n * static_cast<double>(spec.n));
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(k, 1.0)), 1, spec.n);
  }
  return spec.sparsity.value_or(spec.n);
}

std::size_t cell_measurements(const ExperimentSpec& spec, const GridCell& cell) {
  if (spec.family == ExperimentFamily::kPhaseGrid) {
    const double m = std::round(cell.m_over_n * static_cast<double>(spec.n));
    return static_cast<std::size_t>(std::max(m, 1.0));
  }
  return cell.m;
}

std::vector<double> generate_sparse_signal(std::size_t n, std::size_t sparsity,
                                           std::uint64_t seed) {
  if (n == 0 || sparsity == 0 || sparsity > n) {
    throw Error(ErrorCode::kInvalidDimension, "sparsity must lie in [1, n]");
  }
  NormalStream normals(seed);
  // Partial Fisher-Yates picks the support uniformly without replacement.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t r = 0; r < sparsity; ++r) {
    const std::size_t pick = r + static_cast<std::size_t>(normals.engine().below(n - r));
    std::swap(idx[r], idx[pick]);
  }
  std::vector<double> x(n, 0.0);
  double norm_sq = 0.0;
  do {
    norm_sq = 0.0;
    for (std::size_t r = 0; r < sparsity; ++r) {
      x[idx[r]] = normals.next();
      norm_sq += x[idx[r]] * x[idx[r]];
    }
  } while (!(norm_sq > 0.0));
  const double norm = std::sqrt(norm_sq);
  for (double& v : x) v /= norm;
  return x;
}

std::vector<double> add_noise(std::span<const double> x, double snr_db, std::uint64_t seed) {
  double power = 0.0;
  for (double v : x) power += v * v;
  const double noise_var =
      power / (static_cast<double>(x.size()) * std::pow(10.0, snr_db / 10.0));
  const double sd = std::sqrt(noise_var);
  NormalStream normals(seed);
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v += sd * normals.next();
  double sum = 0.0;
  for (double v : out) sum += v * v;
  const double norm = std::sqrt(sum);
  if (!(norm > 0.0)) throw Error(ErrorCode::kZeroVector, "noisy signal collapsed to zero");
  for (double& v : out) v /= norm;
  return out;
}

std::size_t worker_threads() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HCS_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && cap > 0) hw = std::min<std::size_t>(hw, cap);
  }
  return hw;
}

std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec, std::size_t threads) {
  if (spec.family == ExperimentFamily::kConsistency) return consistency_scatter(spec, threads);
  return run_jobs(spec, &recovery_trial, threads);
}

std::vector<TrialRecord> consistency_scatter(const ExperimentSpec& spec, std::size_t threads) {
  if (spec.family != ExperimentFamily::kConsistency) {
    throw Error(ErrorCode::kSpecInvalid, "consistency_scatter needs the consistency family");
  }
  return run_jobs(spec, &consistency_trial, threads);
}

std::string csv_header(ExperimentFamily family) {
  switch (family) {
    case ExperimentFamily::kPhaseGrid:
      return "K_over_n,m_over_n,trial,err,time_hcs,time_baseline,err_baseline";
    case ExperimentFamily::kErrorVsM:
      return "m,trial,err,time_hcs,time_baseline,err_baseline";
    case ExperimentFamily::kConsistency:
      return "trial,m,hamming,angular,method";
  }
  return {};
}

std::string csv_row(const TrialRecord& r, ExperimentFamily family, bool with_timing) {
  const std::string time_hcs = with_timing ? format_seconds(r.elapsed_recovery) : "";
  const std::string time_base =
      with_timing && r.elapsed_baseline ? format_seconds(*r.elapsed_baseline) : "";
  const std::string err_base = r.baseline_error ? format_double(*r.baseline_error) : "";
  const std::string trial = std::to_string(r.trial_index);
  switch (family) {
    case ExperimentFamily::kPhaseGrid:
      return format_double(r.cell.k_over_n) + ',' + format_double(r.cell.m_over_n) + ',' + trial +
             ',' + format_double(r.quantized_error) + ',' + time_hcs + ',' + time_base + ',' +
             err_base;
    case ExperimentFamily::kErrorVsM:
      return std::to_string(r.m) + ',' + trial + ',' + format_double(r.quantized_error) + ',' +
             time_hcs + ',' + time_base + ',' + err_base;
    case ExperimentFamily::kConsistency:
      return trial + ',' + std::to_string(r.m) + ',' +
             format_double(r.hamming_error.value_or(std::nan(""))) + ',' +
             format_double(r.angular_error.value_or(std::nan(""))) + ',' + r.method;
  }
  return {};
}

CsvSummary emit_csv(std::span<const TrialRecord> records, ExperimentFamily family,
                    const std::filesystem::path& destination, bool with_timing) {
  std::string text = csv_header(family) + '\n';
  for (const TrialRecord& r : records) text += csv_row(r, family, with_timing) + '\n';

  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot open '" + destination.string() + "' for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) {
    throw Error(ErrorCode::kIoError, "failed writing '" + destination.string() + "'");
  }
  return {records.size(), fnv1a64(text)};
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace hcs
