#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>

#include "eqtest/avt/avt.hpp"
#include "eqtest/core/errors.hpp"
#include "eqtest/experiments/sweep.hpp"
#include "eqtest/io/csv.hpp"
#include "eqtest/io/json.hpp"
#include "eqtest/io/manifest.hpp"
#include "eqtest/mnist/experiment.hpp"
#include "eqtest/mnist/idx.hpp"
#include "eqtest/pvt/pvt.hpp"
#include "eqtest/synth/fig2.hpp"
#include "eqtest/util/parallel.hpp"

namespace eqt::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;

struct Common {
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  std::string out_dir = "eqtest-out";
};

struct DataArgs {
  std::string data;
  std::string labels;  // set: `data` is an IDX image file
  std::string action_spec;
};

struct AvtArgs {
  DataArgs data;
  std::size_t m = 0;
  double lipschitz = 1.0;
  double alpha_holder = 1.0;
  std::optional<double> sigma;
  std::vector<double> thresholds;
  std::size_t grid_k = 0;
  std::uint64_t stream = 0;
  bool keep_samples = false;
};

struct PvtArgs {
  DataArgs data;
  std::size_t m = 0;
  std::size_t batches = 100;
  double q = 0.95;
  double alpha_holder = 1.0;
  std::string baseline = "nn";
  std::string batch_pairing = "uniform";
  std::uint64_t stream = 0;
  bool keep_samples = false;
};

struct MnistArgs {
  std::string images;
  std::string labels;
  int digit = -1;
  std::string group = "D4";
  std::string bound_source = "other-digits";
  std::size_t m = 1000;
  std::optional<std::size_t> subsample;
};

struct Fig2Args {
  std::vector<std::size_t> n_grid;
  std::size_t replicates = 100;
  std::optional<double> bandwidth_c;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Dataset load_data(const DataArgs& args, io::RunManifest& manifest) {
  manifest.add_input(args.data);
  if (args.labels.empty()) return io::read_dataset_csv(args.data);
  manifest.add_input(args.labels);
  const mnist::ImageDataset images = mnist::load_mnist(args.data, args.labels);
  std::vector<double> outputs(images.labels.begin(), images.labels.end());
  return Dataset(images.pixel_count(), 1, images.pixels, std::move(outputs));
}

io::ActionSpec load_action(const DataArgs& args, io::RunManifest& manifest) {
  if (args.action_spec.empty()) return {GroupAction::axis_rotation(), std::nullopt};
  manifest.add_input(args.action_spec);
  return io::load_action_spec(args.action_spec);
}

fs::path finish(io::RunManifest& manifest, const Common& common, const fs::path& report, const json& body,
                std::ostream& out) {
  io::write_text(report, io::dump(body));
  manifest.add_output(report);
  const fs::path path = manifest.finish(common.out_dir);
  out << "report: " << report.string() << "\nmanifest: " << path.string() << '\n';
  return path;
}

void cmd_avt(const AvtArgs& a, const Common& common, std::ostream& out) {
  io::RunManifest manifest("avt", common.seed);
  const Dataset data = load_data(a.data, manifest);
  const io::ActionSpec spec = load_action(a.data, manifest);
  AvtConfig config;
  config.m = a.m;
  config.thresholds = a.thresholds;
  config.grid_k = a.grid_k;
  config.noise = a.sigma ? NoiseModel::gaussian(*a.sigma, data.output_dim()) : NoiseModel::noiseless();
  if (!a.sigma && config.thresholds.empty()) config.thresholds = {0.0};
  config.bound = VariationBound::holder(a.lipschitz, a.alpha_holder);
  config.generator_dist = spec.distribution;
  config.seed = common.seed;
  config.stream = a.stream;
  config.jobs = resolve_jobs(common.jobs);
  config.keep_samples = a.keep_samples;
  const AvtReport report = run_avt(data, spec.action, config);
  const json body = io::to_json(report, spec.action);
  manifest.set_config({{"report_config", body.at("config")}, {"jobs", config.jobs}});

  out << "avt: n=" << data.size() << " m=" << config.m << " action=" << to_string(spec.action.kind())
      << " L=" << fmt(a.lipschitz) << " alpha_holder=" << fmt(a.alpha_holder)
      << " noise=" << (a.sigma ? "gaussian sigma=" + fmt(*a.sigma) : std::string("noiseless"))
      << " seed=" << common.seed << " stream=" << a.stream << '\n';
  for (const ThresholdRow& r : report.per_threshold)
    out << "  t=" << fmt(r.t) << " p_t=" << fmt(r.tail_bound) << " N_t=" << r.exceedances
        << " p=" << fmt(r.p_value) << '\n';
  out << "p_value=" << fmt(report.p_value) << '\n';
  finish(manifest, common, fs::path(common.out_dir) / "avt_report.json", body, out);
}

void cmd_pvt(const PvtArgs& a, const Common& common, std::ostream& out) {
  io::RunManifest manifest("pvt", common.seed);
  const Dataset data = load_data(a.data, manifest);
  const io::ActionSpec spec = load_action(a.data, manifest);
  PvtConfig config;
  config.m = a.m;
  config.batches = a.batches;
  config.q = a.q;
  config.bound = VariationBound::order(a.alpha_holder);
  config.generator_dist = spec.distribution;
  config.baseline = pairing_from_string(a.baseline);
  config.batch_pairing = pairing_from_string(a.batch_pairing);
  config.seed = common.seed;
  config.stream = a.stream;
  config.jobs = resolve_jobs(common.jobs);
  config.keep_samples = a.keep_samples;
  const PvtReport report = run_pvt(data, spec.action, config);
  const json body = io::to_json(report, spec.action);
  manifest.set_config({{"report_config", body.at("config")}, {"jobs", config.jobs}});

  out << "pvt: n=" << data.size() << " m=" << config.m << " B=" << config.batches << " q=" << fmt(config.q)
      << " action=" << to_string(spec.action.kind()) << " alpha_holder=" << fmt(a.alpha_holder)
      << " baseline=" << to_string(config.baseline) << " batch_pairing=" << to_string(config.batch_pairing) << " seed=" << common.seed << " stream=" << a.stream << '\n';
  out << "  A_0=" << fmt(report.baseline_quantile) << " count(A_k <= A_0)=" << report.count_at_or_below << '\n';
  out << "p_value=" << fmt(report.p_value) << " (1+count)/(1+B)=" << fmt(report.p_value_plus_one) << '\n';
  finish(manifest, common, fs::path(common.out_dir) / "pvt_report.json", body, out);
}

void cmd_simulate(const std::string& spec_path, const Common& common, std::ostream& out) {
  io::RunManifest manifest("simulate", common.seed);
  manifest.add_input(spec_path);
  json raw = io::load_json(spec_path);
  SweepSpec spec = io::parse_sweep_spec(raw);
  if (!raw.contains("seed")) spec.seed = common.seed;
  spec.jobs = common.jobs;
  const RejectionTable table = run_sweep(spec);
  manifest.set_config({{"spec", io::to_json(spec)}, {"jobs", resolve_jobs(common.jobs)}});

  const fs::path dir = common.out_dir;
  io::write_text(dir / "table.csv", io::rejection_table_csv(table));
  io::write_text(dir / "plot_data.csv", io::plot_data_csv(table));
  io::write_text(dir / "table.json", io::dump(io::to_json(table)));
  for (const char* name : {"table.csv", "plot_data.csv", "table.json"}) manifest.add_output(dir / name);
  out << "simulate: " << (spec.test == TestKind::avt ? "avt" : "pvt") << " cells=" << table.cells.size()
      << " replicates=" << spec.replicates << " alpha=" << fmt(spec.alpha) << " seed=" << spec.seed << '\n';
  out << io::rejection_table_csv(table);
  out << "manifest: " << manifest.finish(dir).string() << '\n';
}

void cmd_mnist(const MnistArgs& a, const Common& common, std::ostream& out) {
  io::RunManifest manifest("mnist", common.seed);
  manifest.add_input(a.images);
  manifest.add_input(a.labels);
  const mnist::ImageDataset all = mnist::load_mnist(a.images, a.labels);
  const mnist::ImageDataset digit = all.with_label(static_cast<std::uint8_t>(a.digit));
  if (digit.size() < 2) throw InputError("fewer than two images carry label " + std::to_string(a.digit));
  const mnist::OrientationDataset dataset =
      mnist::build_orientation_dataset(digit, a.digit, mnist::kOrientedDigits, derive_seed(common.seed, {0}));
  mnist::MnistConfig config;
  config.group = mnist::group_from_string(a.group);
  config.bound_source = mnist::bound_source_from_string(a.bound_source);
  config.m = a.m;
  config.seed = common.seed;
  config.subsample = a.subsample;
  config.jobs = resolve_jobs(common.jobs);
  const mnist::ImageDataset others = mnist::images_without_label(all, static_cast<std::uint8_t>(a.digit));
  const mnist::MnistReport report = mnist::run_mnist_experiment(dataset, config, &others);
  const json body = io::to_json(report);
  manifest.set_config({{"digit", a.digit},
                       {"group", a.group},
                       {"bound_source", a.bound_source},
                       {"m", a.m},
                       {"subsample", a.subsample ? json(*a.subsample) : json(nullptr)},
                       {"jobs", config.jobs}});

  out << "mnist: digit=" << a.digit << " group=" << mnist::to_string(config.group) << " n=" << report.n
      << " m=" << a.m << " bound_source=" << a.bound_source << " seed=" << common.seed << '\n';
  if (report.vacuous) {
    out << "  single-class data: no Lipschitz estimate, nothing can be rejected\n";
  } else {
    out << "  L_hat=" << fmt(report.lipschitz->value) << " N_0=" << report.n0 << '\n';
  }
  out << "p_value=" << fmt(report.p_value) << '\n';
  finish(manifest, common, fs::path(common.out_dir) / "mnist_report.json", body, out);
}

void cmd_fig2(const Fig2Args& a, const Common& common, std::ostream& out) {
  io::RunManifest manifest("demo-fig2", common.seed);
  Fig2Config config;
  if (!a.n_grid.empty()) config.n_grid = a.n_grid;
  config.replicates = a.replicates;
  if (a.bandwidth_c) config.bandwidth_constant = {{"fsim", *a.bandwidth_c}, {"f2", *a.bandwidth_c}};
  config.seed = common.seed;
  config.jobs = resolve_jobs(common.jobs);
  const Fig2Result result = run_fig2_experiment(config);
  const json body = io::to_json(result);
  manifest.set_config({{"report_config", body.at("config")}, {"jobs", config.jobs}});

  const fs::path dir = common.out_dir;
  io::write_text(dir / "fig2_rows.csv", io::fig2_rows_csv(result));
  io::write_text(dir / "fig2_summary.csv", io::fig2_summary_csv(result));
  manifest.add_output(dir / "fig2_rows.csv");
  manifest.add_output(dir / "fig2_summary.csv");
  out << "demo-fig2: replicates=" << config.replicates << " seed=" << config.seed << '\n';
  out << io::fig2_summary_csv(result);
  finish(manifest, common, dir / "fig2.json", body, out);
}

void add_data_options(CLI::App* cmd, DataArgs& d) {
  cmd->add_option("data", d.data, "Dataset CSV (columns x0.., y0..) or IDX image file")->required();
  cmd->add_option("--labels", d.labels, "IDX label file; treats DATA as IDX images");
  cmd->add_option("--action-spec", d.action_spec, "Group action JSON (default: axis rotation)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tests for invariance and equivariance of a regression function under a finite group"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--seed", common.seed, "Base seed")->capture_default_str();
  app.add_option("--jobs", common.jobs, "Worker threads (0: all cores)")->capture_default_str();
  app.add_option("--out-dir", common.out_dir, "Directory for reports and the manifest")->capture_default_str();

  AvtArgs avt;
  CLI::App* avt_cmd = app.add_subcommand("avt", "Asymmetric variation test");
  add_data_options(avt_cmd, avt.data);
  avt_cmd->add_option("--m", avt.m, "Number of sampled pairs")->required()->check(CLI::PositiveNumber);
  avt_cmd->add_option("--L", avt.lipschitz, "Hoelder constant of the variation bound")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  avt_cmd->add_option("--alpha-holder", avt.alpha_holder, "Hoelder exponent in (0, 1]")->capture_default_str();
  avt_cmd->add_option("--sigma", avt.sigma, "Gaussian noise level (omit for noiseless data)")
      ->check(CLI::PositiveNumber);
  auto* thresholds = avt_cmd->add_option("--thresholds", avt.thresholds, "Thresholds t")->delimiter(',');
  avt_cmd->add_option("--grid-k", avt.grid_k, "Automatic grid of k thresholds")
      ->check(CLI::PositiveNumber)
      ->excludes(thresholds);
  avt_cmd->add_option("--stream", avt.stream, "RNG stream id")->capture_default_str();
  avt_cmd->add_flag("--keep-samples", avt.keep_samples, "Include every D statistic in the report");

  PvtArgs pvt;
  CLI::App* pvt_cmd = app.add_subcommand("pvt", "Permutation variant of the test");
  add_data_options(pvt_cmd, pvt.data);
  pvt_cmd->add_option("--m", pvt.m, "Pairs per batch")->required()->check(CLI::PositiveNumber);
  pvt_cmd->add_option("--B", pvt.batches, "Number of transformed batches")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  pvt_cmd->add_option("--q", pvt.q, "Quantile level in (0, 1]")->capture_default_str();
  pvt_cmd->add_option("--alpha-holder", pvt.alpha_holder, "Exponent of the order-only bound")->capture_default_str();
  pvt_cmd->add_option("--baseline", pvt.baseline, "Baseline pairing")
      ->capture_default_str()
      ->check(CLI::IsMember({"nn", "uniform"}));
  pvt_cmd->add_option("--batch-pairing", pvt.batch_pairing, "Pairing within transformed batches")
      ->capture_default_str()
      ->check(CLI::IsMember({"nn", "uniform"}));
  pvt_cmd->add_option("--stream", pvt.stream, "RNG stream id")->capture_default_str();
  pvt_cmd->add_flag("--keep-samples", pvt.keep_samples, "Include the baseline ratios in the report");

  std::string sweep_spec;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo rejection-proportion sweep");
  sim_cmd->add_option("spec", sweep_spec, "Sweep spec JSON")->required();

  MnistArgs mn;
  const fs::path default_mnist = fs::path(EQTEST_DATA_DIR) / "mnist5k";
  mn.images = (default_mnist / "train-images-idx3-ubyte.gz").string();
  mn.labels = (default_mnist / "train-labels-idx1-ubyte.gz").string();
  CLI::App* mnist_cmd = app.add_subcommand("mnist", "Orientation test on one MNIST digit");
  mnist_cmd->add_option("--images", mn.images, "IDX image file")->capture_default_str();
  mnist_cmd->add_option("--labels", mn.labels, "IDX label file")->capture_default_str();
  mnist_cmd->add_option("--digit", mn.digit, "Digit 0-9")->required()->check(CLI::Range(0, 9));
  mnist_cmd->add_option("--group", mn.group, "D4, a or b")
      ->capture_default_str()
      ->check(CLI::IsMember({"D4", "a", "b"}));
  mnist_cmd->add_option("--bound-source", mn.bound_source,
                        "Points behind L_hat: other-digits (every other digit's images join class 0) or orientation")
      ->capture_default_str()
      ->check(CLI::IsMember({"other-digits", "orientation"}));
  mnist_cmd->add_option("--m", mn.m, "Number of sampled pairs")->capture_default_str()->check(CLI::PositiveNumber);
  mnist_cmd->add_option("--subsample", mn.subsample, "Per-class subsample for the Lipschitz estimate")
      ->check(CLI::PositiveNumber);

  Fig2Args fig2;
  CLI::App* fig2_cmd = app.add_subcommand("demo-fig2", "Kernel symmetrisation MSE demo");
  fig2_cmd->add_option("--n", fig2.n_grid, "Training sizes")->delimiter(',');
  fig2_cmd->add_option("--replicates", fig2.replicates, "Replicates per n")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  fig2_cmd->add_option("--bandwidth-c", fig2.bandwidth_c, "Fixed bandwidth constant (default: calibrated)")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; every rejected argument is a configuration error.
    return app.exit(e, out, err) == 0 ? 0 : 3;
  }

  try {
    if (*avt_cmd) cmd_avt(avt, common, out);
    else if (*pvt_cmd) cmd_pvt(pvt, common, out);
    else if (*sim_cmd) cmd_simulate(sweep_spec, common, out);
    else if (*mnist_cmd) cmd_mnist(mn, common, out);
    else if (*fig2_cmd) cmd_fig2(fig2, common, out);
  } catch (const FormatError& e) {
    err << "error: malformed input: " << e.what() << '\n';
    return kExitInput;
  } catch (const ConfigError& e) {
    err << "error: configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}

}  // namespace eqt::cli
