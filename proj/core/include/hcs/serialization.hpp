#pragma once

#include <nlohmann/json.hpp>

#include "hcs/bench.hpp"
#include "hcs/bounds.hpp"
#include "hcs/dequantizer.hpp"
#include "hcs/measurement.hpp"
#include "hcs/quantizer.hpp"
#include "hcs/recovery.hpp"

// JSON forms of the library's value types. Parsing failures throw
// hcs::Error with kParseError (malformed documents) or the validating
// constructor's own code (well-formed but invalid values).
namespace hcs {

using json = nlohmann::json;

// {"values": [...], "sparsity": K?}; values are numbers or decimal strings.
json to_json(const Signal& signal);
Signal signal_from_json(const json& doc);

// {"bits": [+1, -1, ...]}
json to_json(const OneBitMeasurements& y);
OneBitMeasurements measurements_from_json(const json& doc);

// Ensembles are stored by their generating triple only.
json ensemble_descriptor(const MeasurementEnsemble& ensemble);
MeasurementEnsemble ensemble_from_json(const json& doc);

// {k, x_inf, x_sup, delta, p_boundaries, s_boundaries}
json to_json(const HcsQuantizer& quantizer);
// Rebuilds from (k, x_inf, x_sup); other fields are ignored.
HcsQuantizer quantizer_from_json(const json& doc);

// {"indices": [...], "k": k, "quantizer_hash": "<16 hex digits>"}
json to_json(const QuantizedSignal& q);
QuantizedSignal quantized_from_json(const json& doc);

json to_json(const RecoveryResult& result);
json to_json(const DequantizedSignal& x_star);
json to_json(const BoundReport& report);

json to_json(const DequantizerConfig& config);
DequantizerConfig dequantizer_config_from_json(const json& doc);

json to_json(const ExperimentSpec& spec);
// Accepts an explicit "grid" list or a {"from", "to", "count"} range per axis.
ExperimentSpec experiment_spec_from_json(const json& doc);

// Reads and parses a JSON file; throws kIoError / kParseError.
json read_json_file(const std::string& path);

}  // namespace hcs
