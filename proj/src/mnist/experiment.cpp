#include "eqtest/mnist/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "eqtest/core/errors.hpp"

namespace eqt::mnist {

std::string_view to_string(GroupChoice choice) {
  switch (choice) {
    case GroupChoice::d4: return "D4";
    case GroupChoice::rotations: return "a";
    case GroupChoice::reflection: return "b";
  }
  return "unknown";
}

GroupChoice group_from_string(std::string_view text) {
  if (text == "D4" || text == "d4") return GroupChoice::d4;
  if (text == "a" || text == "rotations") return GroupChoice::rotations;
  if (text == "b" || text == "reflection") return GroupChoice::reflection;
  throw ConfigError("group must be one of D4, a, b");
}

std::string_view to_string(BoundSource source) {
  return source == BoundSource::other_digits ? "other-digits" : "orientation";
}

BoundSource bound_source_from_string(std::string_view text) {
  if (text == "other-digits" || text == "other_digits") return BoundSource::other_digits;
  if (text == "orientation") return BoundSource::orientation;
  throw ConfigError("bound source must be 'other-digits' or 'orientation'");
}

ImageDataset images_without_label(const ImageDataset& images, std::uint8_t digit) {
  if (images.labels.size() != images.size()) throw InputError("dataset has no labels for every image");
  ImageDataset out;
  out.rows = images.rows;
  out.cols = images.cols;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images.labels[i] == digit) continue;
    const auto img = images.image(i);
    out.pixels.insert(out.pixels.end(), img.begin(), img.end());
    out.labels.push_back(images.labels[i]);
  }
  return out;
}

EstimatedLipschitz estimate_mnist_bound(const OrientationDataset& dataset, const MnistConfig& config,
                                        const ImageDataset* other_digits) {
  if (config.bound_source == BoundSource::orientation)
    return estimate_lipschitz(dataset.data, config.subsample, config.seed, config.jobs);
  if (!other_digits) throw ConfigError("the other-digits bound needs the images of the other digits");
  if (other_digits->rows != dataset.side || other_digits->cols != dataset.side)
    throw InputError("other-digit images do not match the image size");
  return estimate_lipschitz(dataset.data, other_digits->pixels, config.subsample, config.seed, config.jobs);
}

namespace {

bool single_class(const OrientationDataset& dataset) {
  const auto& ys = dataset.data.outputs();
  return std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); });
}

}  // namespace

MnistReport run_mnist_experiment(const OrientationDataset& dataset, const MnistConfig& config,
                                 const ImageDataset* other_digits) {
  if (single_class(dataset)) return run_mnist_experiment(dataset, config, EstimatedLipschitz{});
  return run_mnist_experiment(dataset, config, estimate_mnist_bound(dataset, config, other_digits));
}

MnistReport run_mnist_experiment(const OrientationDataset& dataset, const MnistConfig& config,
                                 const EstimatedLipschitz& bound) {
  MnistReport report;
  report.digit = dataset.digit;
  report.group = config.group;
  report.bound_source = config.bound_source;
  report.n = dataset.data.size();
  report.side = dataset.side;
  if (single_class(dataset)) {
    report.vacuous = true;
    return report;
  }
  if (!(bound.value > 0.0) || !std::isfinite(bound.value)) throw InputError("the Lipschitz bound must be positive and finite");
  report.lipschitz = bound;

  const GroupAction action = GroupAction::image_d4(dataset.side);
  AvtConfig avt;
  avt.m = config.m;
  avt.thresholds = {0.0};
  avt.noise = NoiseModel::noiseless();
  avt.bound = VariationBound::holder(report.lipschitz->value, 1.0);
  switch (config.group) {
    case GroupChoice::d4:
      avt.generator_dist = GeneratorDistribution::uniform({action.at("a"), action.at("b")});
      break;
    case GroupChoice::rotations:
      avt.generator_dist = GeneratorDistribution::point_mass(action.at("a"));
      break;
    case GroupChoice::reflection:
      avt.generator_dist = GeneratorDistribution::point_mass(action.at("b"));
      break;
  }
  avt.seed = config.seed;
  avt.stream = 1;
  avt.jobs = config.jobs;
  report.avt = run_avt(dataset.data, action, avt);
  report.n0 = report.avt->per_threshold.front().exceedances;
  report.p_value = report.avt->p_value;
  return report;
}

}  // namespace eqt::mnist
