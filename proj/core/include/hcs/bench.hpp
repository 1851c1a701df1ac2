#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hcs/dequantizer.hpp"
#include "hcs/rng.hpp"

namespace hcs {

enum class ExperimentFamily { kPhaseGrid, kErrorVsM, kConsistency };

std::string_view to_string(ExperimentFamily family) noexcept;
// Throws kSpecInvalid for unknown names.
ExperimentFamily parse_family(std::string_view name);

// One grid coordinate. Phase grids use (k_over_n, m_over_n); the other
// families use an absolute measurement count m.
struct GridCell {
  double k_over_n = 0.0;
  double m_over_n = 0.0;
  std::size_t m = 0;
};

struct ExperimentSpec {
  ExperimentFamily family = ExperimentFamily::kPhaseGrid;
  std::size_t n = 128;
  std::size_t k = 8;
  double x_inf = -1.0;
  double x_sup = 1.0;
  std::vector<GridCell> grid;
  // Sparsity for error-vs-m and consistency; nullopt means dense.
  std::optional<std::size_t> sparsity;
  std::size_t trials_per_cell = 5;
  std::optional<double> snr_db;
  std::uint64_t master_seed = 0;
  // Enables the BIHT baseline (phase-grid, error-vs-m) and is required for
  // the consistency family.
  std::optional<DequantizerConfig> dequantizer;
  // Wall times are not reproducible, so they are left out of the CSV unless
  // asked for.
  bool record_timing = false;
};

// Throws kSpecInvalid describing the first violated constraint.
void validate(const ExperimentSpec& spec);

struct TrialRecord {
  std::size_t cell_index = 0;
  GridCell cell;
  std::size_t sparsity = 0;
  std::size_t m = 0;
  std::size_t trial_index = 0;
  std::uint64_t seed = 0;
  double quantized_error = 0.0;
  std::optional<double> baseline_error;
  std::chrono::nanoseconds elapsed_recovery{0};
  std::optional<std::chrono::nanoseconds> elapsed_baseline;
  std::optional<double> hamming_error;
  std::optional<double> angular_error;
  std::string method;  // consistency family only
  std::optional<std::string> failure;
};

// Unit-norm signal with `sparsity` nonzeros on a uniformly chosen support,
// values i.i.d. normal before normalization (uniform on the support sphere).
std::vector<double> generate_sparse_signal(std::size_t n, std::size_t sparsity,
                                           std::uint64_t seed);

// x + e with e i.i.d. N(0, s^2), s^2 = |x|^2 / (n 10^(snr/10)), renormalized.
std::vector<double> add_noise(std::span<const double> x, double snr_db, std::uint64_t seed);

// Resolved sparsity and measurement count for a cell.
std::size_t cell_sparsity(const ExperimentSpec& spec, const GridCell& cell);
std::size_t cell_measurements(const ExperimentSpec& spec, const GridCell& cell);

// Worker count from HCS_THREADS (falls back to hardware concurrency).
std::size_t worker_threads();

// Runs every (cell, trial) job; output order is (cell, trial[, method])
// regardless of how jobs were scheduled. threads = 0 uses worker_threads().
std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec, std::size_t threads = 0);

// The consistency family: full x -> y -> q* -> x* pipeline for the midpoint
// and box-constrained BIHT dequantizers.
std::vector<TrialRecord> consistency_scatter(const ExperimentSpec& spec,
                                             std::size_t threads = 0);

struct CsvSummary {
  std::size_t rows = 0;
  std::uint64_t checksum = 0;  // FNV-1a 64 of the written bytes
};

std::string csv_header(ExperimentFamily family);
std::string csv_row(const TrialRecord& record, ExperimentFamily family, bool with_timing);

// Throws kIoError with the path on failure.
CsvSummary emit_csv(std::span<const TrialRecord> records, ExperimentFamily family,
                    const std::filesystem::path& destination, bool with_timing = false);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t value);

}  // namespace hcs
