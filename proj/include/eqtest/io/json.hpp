#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "eqtest/avt/avt.hpp"
#include "eqtest/experiments/sweep.hpp"
#include "eqtest/mnist/experiment.hpp"
#include "eqtest/pvt/pvt.hpp"
#include "eqtest/synth/fig2.hpp"

namespace eqt::io {

using nlohmann::json;

/// A group action loaded from a declarative spec, e.g.
///   {"kind": "rotation"}
///   {"kind": "image_d4", "side": 28, "output": "invariant"}
///   {"kind": "permutation", "input_generators": [[1, 2, 0]], "output_generators": []}
/// with an optional "distribution": {"elements": ["R", "R^2"], "weights": [0.5, 0.5]}
/// (weights default to uniform).
struct ActionSpec {
  GroupAction action;
  std::optional<GeneratorDistribution> distribution;
};

/// Throws ConfigError on unknown kinds, missing fields or bad element names.
ActionSpec parse_action_spec(const json& spec);
ActionSpec load_action_spec(const std::filesystem::path& path);

json action_to_json(const GroupAction& action);
json distribution_to_json(const GeneratorDistribution& dist, const GroupAction& action);
json noise_to_json(const NoiseModel& noise);
json bound_to_json(const VariationBound& bound);

/// Sweep config: {"test": "avt", "hypotheses": [{"label", "target", "action"}],
/// "input_law", "dimension", "n", "m", "L", "sigma", "t_sigma_multiples", "q",
/// "B", "baseline", "alpha_holder", "replicates", "alpha", "seed"}.
SweepSpec parse_sweep_spec(const json& spec);
json to_json(const SweepSpec& spec);

json to_json(const AvtReport& report, const GroupAction& action);
json to_json(const PvtReport& report, const GroupAction& action);
json to_json(const mnist::MnistReport& report);
json to_json(const RejectionTable& table);
json to_json(const Fig2Result& result);

/// Two-space indented dump with a trailing newline.
std::string dump(const json& value);
json load_json(const std::filesystem::path& path);

}  // namespace eqt::io
