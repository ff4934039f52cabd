#include "eqtest/synth/targets.hpp"

#include <cmath>
#include <string>

#include "eqtest/core/errors.hpp"

namespace eqt {

SyntheticTarget::SyntheticTarget(TargetKind kind, std::size_t dim) : kind_(kind), dim_(dim) {
  if (dim_ == 0) throw InputError("target dimension must be positive");
}

SyntheticTarget SyntheticTarget::from_name(std::string_view name, std::size_t dim) {
  std::string key(name);
  if (key.size() > 1 && key[0] == 'f' && key[1] == '_') key.erase(1, 1);
  if (key == "f2") return SyntheticTarget(TargetKind::exp_abs_first, 2);
  if (key == "fd") return SyntheticTarget(TargetKind::exp_abs_first, dim);
  if (key == "fsim") return SyntheticTarget(TargetKind::exp_norm, dim);
  if (key == "f3") return SyntheticTarget(TargetKind::norm, dim);
  if (key == "f4") return SyntheticTarget(TargetKind::abs_first, dim);
  throw InputError("unknown target '" + std::string(name) + "'");
}

double SyntheticTarget::operator()(std::span<const double> x) const {
  if (x.size() != dim_) throw InputError("target evaluated at a point of the wrong dimension");
  auto euclid = [&] {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  };
  switch (kind_) {
    case TargetKind::exp_abs_first: return std::exp(-std::abs(x[0]));
    case TargetKind::exp_norm: return std::exp(-euclid());
    case TargetKind::norm: return euclid();
    case TargetKind::abs_first: return std::abs(x[0]);
  }
  return 0.0;
}

std::string SyntheticTarget::name() const {
  switch (kind_) {
    case TargetKind::exp_abs_first: return dim_ == 2 ? "f2" : "fd";
    case TargetKind::exp_norm: return "fsim";
    case TargetKind::norm: return "f3";
    case TargetKind::abs_first: return "f4";
  }
  return "unknown";
}

NoiseSpec NoiseSpec::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw InputError("noise sigma must be positive");
  return NoiseSpec(Kind::gaussian, sigma);
}

NoiseSpec NoiseSpec::uniform(double half_width) {
  if (!(half_width > 0.0)) throw InputError("uniform noise half-width must be positive");
  return NoiseSpec(Kind::uniform, half_width);
}

double NoiseSpec::draw(SeededRng& rng) const {
  switch (kind_) {
    case Kind::none: return 0.0;
    case Kind::gaussian: return rng.normal(0.0, scale_);
    case Kind::uniform: return rng.uniform(-scale_, scale_);
  }
  return 0.0;
}

InputLaw InputLaw::gaussian(double sd) {
  if (!(sd > 0.0)) throw InputError("input standard deviation must be positive");
  return InputLaw(Kind::gaussian, sd);
}

InputLaw InputLaw::ball(double radius) {
  if (!(radius > 0.0)) throw InputError("ball radius must be positive");
  return InputLaw(Kind::ball, radius);
}

InputLaw InputLaw::from_name(std::string_view name) {
  if (name == "gaussian") return gaussian();
  if (name == "ball") return ball();
  throw InputError("unknown input law '" + std::string(name) + "'");
}

void InputLaw::draw(SeededRng& rng, std::span<double> out) const {
  if (kind_ == Kind::gaussian) {
    for (double& v : out) v = rng.normal(0.0, scale_);
    return;
  }
  // Uniform direction scaled by radius * U^(1/d).
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& v : out) {
      v = rng.normal();
      norm += v * v;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  const double radius = scale_ * std::pow(rng.uniform01(), 1.0 / static_cast<double>(out.size()));
  for (double& v : out) v *= radius / norm;
}

std::string InputLaw::name() const { return kind_ == Kind::gaussian ? "gaussian" : "ball"; }

Dataset generate_dataset(const SyntheticTarget& target, const InputLaw& law, const NoiseSpec& noise,
                         std::size_t n, std::uint64_t seed) {
  if (n < 2) throw InputError("dataset needs at least 2 samples");
  SeededRng rng(seed);
  const std::size_t d = target.dim();
  std::vector<double> xs(n * d);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> x(xs.data() + i * d, d);
    law.draw(rng, x);
    ys[i] = target(x) + noise.draw(rng);
  }
  return Dataset(d, 1, std::move(xs), std::move(ys));
}

}  // namespace eqt
