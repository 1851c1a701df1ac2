#include "hcs/serialization.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hcs/error.hpp"

namespace hcs {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::kParseError, what); }

const json& require(const json& doc, const char* key) {
  if (!doc.is_object()) parse_fail("expected a JSON object");
  const auto it = doc.find(key);
  if (it == doc.end()) parse_fail(std::string("missing field '") + key + "'");
  return *it;
}

double as_real(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    // strtod accepts decimal and scientific notation; reject trailing junk.
    char* end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (end != s.c_str() && *end == '\0') return d;
  }
  parse_fail(where + " is not a real number");
}

std::size_t as_count(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::size_t>();
  parse_fail(where + " is not a non-negative integer");
}

std::uint64_t as_seed(const json& v, const std::string& where) {
  if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0)) {
    return v.get<std::uint64_t>();
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc() && ptr == s.data() + s.size()) return out;
  }
  parse_fail(where + " is not a 64-bit unsigned seed");
}

std::vector<double> linspace(const json& axis, const std::string& where) {
  const double from = as_real(require(axis, "from"), where + ".from");
  const double to = as_real(require(axis, "to"), where + ".to");
  const std::size_t count = as_count(require(axis, "count"), where + ".count");
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(count == 1 ? from
                             : from + (to - from) * static_cast<double>(i) /
                                          static_cast<double>(count - 1));
  }
  return out;
}

}  // namespace

json to_json(const Signal& signal) {
  json doc{{"values", std::vector<double>(signal.values().begin(), signal.values().end())}};
  if (signal.sparsity_hint()) doc["sparsity"] = *signal.sparsity_hint();
  return doc;
}

Signal signal_from_json(const json& doc) {
  const json& values = require(doc, "values");
  if (!values.is_array()) parse_fail("'values' must be an array");
  std::vector<double> v;
  v.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    v.push_back(as_real(values[i], "values[" + std::to_string(i) + "]"));
  }
  std::optional<std::size_t> sparsity;
  if (doc.contains("sparsity") && !doc["sparsity"].is_null()) {
    sparsity = as_count(doc["sparsity"], "sparsity");
  }
  return Signal(std::move(v), sparsity);
}

json to_json(const OneBitMeasurements& y) {
  std::vector<int> bits(y.bits().begin(), y.bits().end());
  return json{{"bits", bits}};
}

OneBitMeasurements measurements_from_json(const json& doc) {
  const json& bits = require(doc, "bits");
  if (!bits.is_array()) parse_fail("'bits' must be an array");
  std::vector<std::int8_t> out;
  out.reserve(bits.size());
  for (const json& b : bits) {
    if (!b.is_number_integer()) parse_fail("bits must be integers");
    const long long v = b.get<long long>();
    if (v != 1 && v != -1) parse_fail("bits must be -1 or +1");
    out.push_back(static_cast<std::int8_t>(v));
  }
  return OneBitMeasurements(std::move(out));
}

json ensemble_descriptor(const MeasurementEnsemble& ensemble) {
  return json{{"n", ensemble.cols()}, {"m", ensemble.rows()}, {"seed", ensemble.seed()}};
}

MeasurementEnsemble ensemble_from_json(const json& doc) {
  return MeasurementEnsemble::generate(as_count(require(doc, "n"), "n"),
                                       as_count(require(doc, "m"), "m"),
                                       as_seed(require(doc, "seed"), "seed"));
}

json to_json(const HcsQuantizer& quantizer) {
  const auto p = quantizer.p_boundaries();
  const auto s = quantizer.s_boundaries();
  return json{{"k", quantizer.k()},
              {"x_inf", quantizer.config().x_inf},
              {"x_sup", quantizer.config().x_sup},
              {"delta", quantizer.delta()},
              {"p_boundaries", std::vector<double>(p.begin(), p.end())},
              {"s_boundaries", std::vector<double>(s.begin(), s.end())}};
}

HcsQuantizer quantizer_from_json(const json& doc) {
  return HcsQuantizer({as_count(require(doc, "k"), "k"), as_real(require(doc, "x_inf"), "x_inf"),
                       as_real(require(doc, "x_sup"), "x_sup")});
}

json to_json(const QuantizedSignal& q) {
  return json{{"indices", q.indices}, {"k", q.k}, {"quantizer_hash", hex64(q.quantizer_id)}};
}

QuantizedSignal quantized_from_json(const json& doc) {
  QuantizedSignal q;
  const json& indices = require(doc, "indices");
  if (!indices.is_array()) parse_fail("'indices' must be an array");
  q.k = as_count(require(doc, "k"), "k");
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const std::size_t v = as_count(indices[i], "indices[" + std::to_string(i) + "]");
    if (v < 1 || v > q.k) parse_fail("interval index outside [1, k]");
    q.indices.push_back(v);
  }
  const json& hash_field = require(doc, "quantizer_hash");
  if (!hash_field.is_string()) parse_fail("'quantizer_hash' must be a string");
  const std::string hash = hash_field.get<std::string>();
  const auto [ptr, ec] = std::from_chars(hash.data(), hash.data() + hash.size(), q.quantizer_id, 16);
  if (ec != std::errc() || ptr != hash.data() + hash.size()) parse_fail("bad quantizer_hash");
  return q;
}

json to_json(const RecoveryResult& result) {
  return json{{"q_star", to_json(result.q_star)},
              {"kl_evaluations", result.kl_evaluations},
              {"elapsed_seconds", std::chrono::duration<double>(result.elapsed).count()}};
}

json to_json(const DequantizedSignal& x_star) {
  return json{{"values", x_star.values},
              {"iterations_used", x_star.iterations_used},
              {"hamming_error_trace", x_star.hamming_error_trace}};
}

json to_json(const BoundReport& report) {
  return json{{"name", report.name},
              {"inputs", report.inputs},
              {"value", report.value},
              {"interpretation", std::string(to_string(report.interpretation))}};
}

json to_json(const DequantizerConfig& config) {
  json doc{{"max_iterations", config.max_iterations}, {"tolerance", config.tolerance}};
  doc["step_size"] = config.step_size ? json(*config.step_size) : json(nullptr);
  doc["sparsity"] = config.sparsity ? json(*config.sparsity) : json(nullptr);
  return doc;
}

DequantizerConfig dequantizer_config_from_json(const json& doc) {
  if (!doc.is_object()) parse_fail("dequantizer config must be an object");
  DequantizerConfig config;
  if (doc.contains("max_iterations")) {
    config.max_iterations = as_count(doc["max_iterations"], "max_iterations");
  }
  if (doc.contains("step_size") && !doc["step_size"].is_null()) {
    config.step_size = as_real(doc["step_size"], "step_size");
  }
  if (doc.contains("sparsity") && !doc["sparsity"].is_null()) {
    config.sparsity = as_count(doc["sparsity"], "sparsity");
  }
  if (doc.contains("tolerance")) config.tolerance = as_real(doc["tolerance"], "tolerance");
  validate(config);
  return config;
}

json to_json(const ExperimentSpec& spec) {
  json grid = json::array();
  for (const GridCell& c : spec.grid) {
    if (spec.family == ExperimentFamily::kPhaseGrid) {
      grid.push_back(json::array({c.k_over_n, c.m_over_n}));
    } else {
      grid.push_back(c.m);
    }
  }
  json doc{{"family", std::string(to_string(spec.family))},
           {"n", spec.n},
           {"k", spec.k},
           {"x_inf", spec.x_inf},
           {"x_sup", spec.x_sup},
           {"grid", grid},
           {"trials_per_cell", spec.trials_per_cell},
           {"master_seed", spec.master_seed},
           {"record_timing", spec.record_timing}};
  if (spec.sparsity) doc["sparsity"] = *spec.sparsity;
  if (spec.snr_db) doc["snr_db"] = *spec.snr_db;
  if (spec.dequantizer) doc["dequantizer"] = to_json(*spec.dequantizer);
  return doc;
}

ExperimentSpec experiment_spec_from_json(const json& doc) {
  if (!doc.is_object()) parse_fail("experiment config must be a JSON object");
  ExperimentSpec spec;
  try {
    spec.family = parse_family(require(doc, "family").get<std::string>());
  } catch (const json::exception&) {
    parse_fail("'family' must be a string");
  }
  spec.n = as_count(require(doc, "n"), "n");
  spec.k = as_count(require(doc, "k"), "k");
  if (doc.contains("x_inf")) spec.x_inf = as_real(doc["x_inf"], "x_inf");
  if (doc.contains("x_sup")) spec.x_sup = as_real(doc["x_sup"], "x_sup");
  if (doc.contains("sparsity") && !doc["sparsity"].is_null()) {
    spec.sparsity = as_count(doc["sparsity"], "sparsity");
  }
  if (doc.contains("trials_per_cell")) {
    spec.trials_per_cell = as_count(doc["trials_per_cell"], "trials_per_cell");
  }
  if (doc.contains("snr_db") && !doc["snr_db"].is_null()) {
    spec.snr_db = as_real(doc["snr_db"], "snr_db");
  }
  if (doc.contains("master_seed")) spec.master_seed = as_seed(doc["master_seed"], "master_seed");
  if (doc.contains("record_timing")) {
    if (!doc["record_timing"].is_boolean()) parse_fail("'record_timing' must be a boolean");
    spec.record_timing = doc["record_timing"].get<bool>();
  }
  if (doc.contains("dequantizer") && !doc["dequantizer"].is_null()) {
    try {
      spec.dequantizer = dequantizer_config_from_json(doc["dequantizer"]);
    } catch (const Error& e) {
      throw Error(ErrorCode::kSpecInvalid, std::string("dequantizer: ") + e.what());
    }
  }

  const json& grid = require(doc, "grid");
  if (spec.family == ExperimentFamily::kPhaseGrid) {
    if (grid.is_array()) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const json& cell = grid[i];
        if (!cell.is_array() || cell.size() != 2) parse_fail("phase grid cells are [K/n, m/n]");
        const std::string where = "grid[" + std::to_string(i) + "]";
        spec.grid.push_back({as_real(cell[0], where), as_real(cell[1], where), 0});
      }
    } else {
      const auto ks = linspace(require(grid, "k_over_n"), "grid.k_over_n");
      const auto ms = linspace(require(grid, "m_over_n"), "grid.m_over_n");
      for (double kn : ks) {
        for (double mn : ms) spec.grid.push_back({kn, mn, 0});
      }
    }
  } else if (grid.is_array()) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      spec.grid.push_back({0.0, 0.0, as_count(grid[i], "grid[" + std::to_string(i) + "]")});
    }
  } else {
    for (double m : linspace(require(grid, "m"), "grid.m")) {
      spec.grid.push_back({0.0, 0.0, static_cast<std::size_t>(std::llround(std::max(m, 0.0)))});
    }
  }

  validate(spec);
  return spec;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, "'" + path + "': " + e.what());
  }
}

}  // namespace hcs
