#include "eqtest/io/json.hpp"

#include "eqtest/core/errors.hpp"
#include "eqtest/io/csv.hpp"

namespace eqt::io {

namespace {

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
T require(const json& obj, const char* key) {
  if (!obj.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return get_or<T>(obj, key, T{});
}

std::vector<std::vector<std::uint32_t>> permutation_list(const json& obj, const char* key) {
  return get_or<std::vector<std::vector<std::uint32_t>>>(obj, key, {});
}

json metric_echo(const Metric& metric) { return metric.name(); }

json sampling_conventions() {
  return {
      {"index_sampling", "uniform with replacement"},
      {"self_pairs", "J excludes I exactly when g.X_I coincides with X_I"},
      {"nn_ties", "lowest index"},
  };
}

}  // namespace

ActionSpec parse_action_spec(const json& spec) {
  if (!spec.is_object()) throw ConfigError("action spec must be a JSON object");
  const std::string kind = require<std::string>(spec, "kind");
  std::optional<GroupAction> action;
  if (kind == "rotation" || kind == "axis_rotation") {
    action = GroupAction::axis_rotation();
  } else if (kind == "sign_rotation" || kind == "axis_sign_rotation") {
    action = GroupAction::axis_sign_rotation();
  } else if (kind == "trivial") {
    action = GroupAction::trivial();
  } else if (kind == "image_d4") {
    const auto side = require<std::size_t>(spec, "side");
    const std::string output = get_or<std::string>(spec, "output", "invariant");
    if (output != "invariant" && output != "equivariant")
      throw ConfigError("image_d4 output must be 'invariant' or 'equivariant'");
    action = GroupAction::image_d4(side, output == "equivariant");
  } else if (kind == "permutation") {
    try {
      action = GroupAction::permutation(permutation_list(spec, "input_generators"),
                                        permutation_list(spec, "output_generators"));
    } catch (const InputError& e) {
      throw ConfigError(std::string("permutation action: ") + e.what());
    }
  } else {
    throw ConfigError("unknown action kind '" + kind + "'");
  }

  ActionSpec out{*action, std::nullopt};
  if (spec.contains("distribution")) {
    const json& d = spec.at("distribution");
    const auto names = require<std::vector<std::string>>(d, "elements");
    if (names.empty()) throw ConfigError("distribution needs at least one element");
    std::vector<ElementId> support;
    for (const std::string& name : names) {
      const auto id = out.action.find(name);
      if (!id) throw ConfigError("unknown group element '" + name + "'");
      support.push_back(*id);
    }
    try {
      if (d.contains("weights"))
        out.distribution = GeneratorDistribution(support, require<std::vector<double>>(d, "weights"));
      else
        out.distribution = GeneratorDistribution::uniform(support);
    } catch (const InputError& e) {
      throw ConfigError(std::string("distribution: ") + e.what());
    }
  }
  return out;
}

ActionSpec load_action_spec(const std::filesystem::path& path) { return parse_action_spec(load_json(path)); }

json action_to_json(const GroupAction& action) {
  json out{{"kind", std::string(to_string(action.kind()))}, {"order", action.size()}};
  if (action.kind() == ActionKind::image_d4) {
    out["side"] = action.image_side();
    out["output"] = action.equivariant_output() ? "equivariant" : "invariant";
  }
  json generators = json::array();
  for (ElementId g : action.generators()) generators.push_back(action.name(g));
  out["generators"] = generators;
  return out;
}

json distribution_to_json(const GeneratorDistribution& dist, const GroupAction& action) {
  json elements = json::array();
  for (ElementId g : dist.support()) elements.push_back(action.name(g));
  return {{"elements", elements}, {"weights", dist.weights()}};
}

json noise_to_json(const NoiseModel& noise) {
  switch (noise.kind()) {
    case NoiseKind::noiseless:
      return {{"kind", "noiseless"}};
    case NoiseKind::gaussian:
      return {{"kind", "gaussian"}, {"sigma", noise.sigma()}, {"output_dim", noise.output_dim()}};
    case NoiseKind::table: {
      json knots = json::array();
      for (const auto& [t, p] : noise.knots()) knots.push_back({t, p});
      return {{"kind", "table"}, {"knots", knots}, {"output_dim", noise.output_dim()}};
    }
  }
  throw InternalError("unhandled noise kind");
}

json bound_to_json(const VariationBound& bound) {
  json out{{"mode", bound.mode() == BoundMode::known ? "known" : "order_only"}, {"alpha", bound.alpha()}};
  if (bound.mode() == BoundMode::known) out["L"] = bound.lipschitz();
  if (bound.is_custom()) out["custom"] = true;
  return out;
}

SweepSpec parse_sweep_spec(const json& spec) {
  if (!spec.is_object()) throw ConfigError("sweep spec must be a JSON object");
  SweepSpec s;
  const std::string test = get_or<std::string>(spec, "test", "avt");
  if (test == "avt")
    s.test = TestKind::avt;
  else if (test == "pvt")
    s.test = TestKind::pvt;
  else
    throw ConfigError("test must be 'avt' or 'pvt'");
  for (const json& h : require<json>(spec, "hypotheses")) {
    s.hypotheses.push_back(
        {require<std::string>(h, "label"), require<std::string>(h, "target"), require<std::string>(h, "action")});
  }
  s.input_law = get_or<std::string>(spec, "input_law", s.input_law);
  s.dimension = get_or<std::size_t>(spec, "dimension", s.dimension);
  s.n_grid = require<std::vector<std::size_t>>(spec, "n");
  s.m_grid = get_or<std::vector<std::size_t>>(spec, "m", {});
  s.lipschitz_grid = get_or<std::vector<double>>(spec, "L", s.lipschitz_grid);
  s.sigma_grid = get_or<std::vector<double>>(spec, "sigma", s.sigma_grid);
  s.t_sigma_multiples = get_or<std::vector<double>>(spec, "t_sigma_multiples", s.t_sigma_multiples);
  s.q_grid = get_or<std::vector<double>>(spec, "q", s.q_grid);
  s.batches = get_or<std::size_t>(spec, "B", s.batches);
  s.baseline = pairing_from_string(get_or<std::string>(spec, "baseline", "nn"));
  s.batch_pairing = pairing_from_string(get_or<std::string>(spec, "batch_pairing", "uniform"));
  s.holder_alpha = get_or<double>(spec, "alpha_holder", s.holder_alpha);
  s.replicates = get_or<std::size_t>(spec, "replicates", s.replicates);
  s.alpha = get_or<double>(spec, "alpha", s.alpha);
  s.seed = get_or<std::uint64_t>(spec, "seed", s.seed);
  s.validate();
  return s;
}

json to_json(const SweepSpec& s) {
  json hyps = json::array();
  for (const Hypothesis& h : s.hypotheses) hyps.push_back({{"label", h.label}, {"target", h.target}, {"action", h.action}});
  json out{{"test", s.test == TestKind::avt ? "avt" : "pvt"},
           {"hypotheses", hyps},
           {"input_law", s.input_law},
           {"dimension", s.dimension},
           {"n", s.n_grid},
           {"m", s.m_grid},
           {"sigma", s.sigma_grid},
           {"alpha_holder", s.holder_alpha},
           {"replicates", s.replicates},
           {"alpha", s.alpha},
           {"seed", s.seed}};
  if (s.test == TestKind::avt) {
    out["L"] = s.lipschitz_grid;
    out["t_sigma_multiples"] = s.t_sigma_multiples;
  } else {
    out["q"] = s.q_grid;
    out["B"] = s.batches;
    out["baseline"] = std::string(to_string(s.baseline));
    out["batch_pairing"] = std::string(to_string(s.batch_pairing));
  }
  return out;
}

json to_json(const AvtReport& report, const GroupAction& action) {
  const AvtConfig& c = report.config;
  json config{{"m", c.m},
              {"grid_k", c.grid_k},
              {"noise", noise_to_json(c.noise)},
              {"bound", bound_to_json(c.bound)},
              {"metric", metric_echo(c.metric)},
              {"output_norm", c.norm ? c.norm->name() : "default"},
              {"seed", c.seed},
              {"stream", c.stream},
              {"action", action_to_json(action)}};
  if (c.generator_dist) config["generator_distribution"] = distribution_to_json(*c.generator_dist, action);
  json conventions = sampling_conventions();
  conventions["pairing"] = "nearest neighbour";
  conventions["exceedance"] = "D >= t; D > 0 when t = 0 on noiseless data";
  conventions["threshold_aggregation"] = "minimum over thresholds, no multiplicity correction";
  conventions["multi_output_noise"] = "union bound min(1, d_Y p_t) with max-norm outputs";

  json rows = json::array();
  for (const ThresholdRow& r : report.per_threshold)
    rows.push_back({{"t", r.t}, {"p_t", r.tail_bound}, {"N_t", r.exceedances}, {"p_value", r.p_value}});
  json out{{"test", "avt"}, {"p_value", report.p_value}, {"per_threshold", rows}, {"config", config},
           {"conventions", conventions}};
  if (!report.samples.empty()) {
    json samples = json::array();
    for (const AvtSample& s : report.samples)
      samples.push_back({{"g", action.name(s.pair.g)},
                         {"i", s.pair.i},
                         {"j", s.pair.j},
                         {"pair_distance", s.pair.pair_distance},
                         {"output_distance", s.output_distance},
                         {"variation", s.variation},
                         {"D", s.statistic}});
    out["samples"] = samples;
  }
  return out;
}

json to_json(const PvtReport& report, const GroupAction& action) {
  const PvtConfig& c = report.config;
  json config{{"m", c.m},
              {"B", c.batches},
              {"q", c.q},
              {"bound", bound_to_json(c.bound)},
              {"baseline", std::string(to_string(c.baseline))},
              {"batch_pairing", std::string(to_string(c.batch_pairing))},
              {"metric", metric_echo(c.metric)},
              {"output_norm", c.norm ? c.norm->name() : "default"},
              {"seed", c.seed},
              {"stream", c.stream},
              {"action", action_to_json(action)}};
  if (c.generator_dist) config["generator_distribution"] = distribution_to_json(*c.generator_dist, action);
  json conventions = sampling_conventions();
  conventions["pairing"] = c.batch_pairing == Pairing::nearest_neighbour
                              ? "nearest neighbour at positive distance"
                              : "uniform; pairs at distance 0 are redrawn";
  conventions["baseline"] = c.baseline == Pairing::nearest_neighbour
                                ? "identity action, nearest neighbour at positive distance"
                                : "identity action, uniform pairs";
  conventions["quantile"] = "type 7";
  conventions["p_value"] = "|{k : A_k <= A_0}| / B";
  json out{{"test", "pvt"},
           {"p_value", report.p_value},
           {"p_value_plus_one", report.p_value_plus_one},
           {"count_at_or_below", report.count_at_or_below},
           {"baseline_quantile", report.baseline_quantile},
           {"batch_quantiles", report.batch_quantiles},
           {"config", config},
           {"conventions", conventions}};
  if (!report.baseline_ratios.empty()) out["baseline_ratios"] = report.baseline_ratios;
  return out;
}

json to_json(const mnist::MnistReport& report) {
  json out{{"test", "mnist"},
           {"digit", report.digit},
           {"group", std::string(mnist::to_string(report.group))},
           {"bound_source", std::string(mnist::to_string(report.bound_source))},
           {"n", report.n},
           {"side", report.side},
           {"vacuous", report.vacuous},
           {"N_0", report.n0},
           {"p_value", report.p_value}};
  if (report.lipschitz) {
    const auto& l = *report.lipschitz;
    out["lipschitz"] = {{"value", l.value},
                        {"min_distance", l.min_distance},
                        {"class_one_used", l.class_one_used},
                        {"class_zero_used", l.class_zero_used},
                        {"negatives_used", l.negatives_used},
                        {"exhaustive", l.exhaustive}};
  }
  if (report.avt) out["avt"] = to_json(*report.avt, GroupAction::image_d4(report.side));
  return out;
}

json to_json(const RejectionTable& table) {
  json cells = json::array();
  for (const RejectionCell& c : table.cells) {
    json cell{{"hypothesis", c.hypothesis}, {"n", c.n},           {"m", c.m},
              {"sigma", c.sigma},           {"rejections", c.rejections}, {"replicates", c.replicates},
              {"proportion", c.proportion}, {"se", c.se}};
    if (table.spec.test == TestKind::avt) {
      cell["L"] = c.lipschitz;
      cell["t"] = c.t;
    } else {
      cell["q"] = c.q;
    }
    cells.push_back(cell);
  }
  return {{"spec", to_json(table.spec)}, {"cells", cells}};
}

json to_json(const Fig2Result& result) {
  json summary = json::array();
  for (const Fig2Summary& s : result.summary)
    summary.push_back({{"target", s.target},
                       {"n", s.n},
                       {"mean_plain", s.mean_plain},
                       {"se_plain", s.se_plain},
                       {"mean_symmetrised", s.mean_symmetrised},
                       {"se_symmetrised", s.se_symmetrised},
                       {"mean_difference", s.mean_difference},
                       {"se_difference", s.se_difference},
                       {"excluded_points", s.excluded_points}});
  const Fig2Config& c = result.config;
  json config{{"n", c.n_grid},
              {"replicates", c.replicates},
              {"radius", c.radius},
              {"noise_half_width", c.noise_half_width},
              {"calibration_grid", c.calibration_grid},
              {"calibration_replicates", c.calibration_replicates},
              {"seed", c.seed}};
  return {{"config", config}, {"bandwidth_constant", result.bandwidth_constant}, {"summary", summary}};
}

std::string dump(const json& value) { return value.dump(2) + "\n"; }

json load_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what(), 0);
  }
}

}  // namespace eqt::io
