#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "eqtest/io/csv.hpp"
#include "eqtest/io/json.hpp"
#include "eqtest/io/manifest.hpp"
#include "eqtest/synth/targets.hpp"
#include "oracles.hpp"

using namespace eqt;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "eqtest");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "eqtest_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_f2_csv(const fs::path& dir, double sigma, std::size_t n = 150) {
  const NoiseSpec noise = sigma > 0.0 ? NoiseSpec::gaussian(sigma) : NoiseSpec::none();
  const Dataset d = generate_dataset(SyntheticTarget::from_name("f2", 2), InputLaw::gaussian(), noise, n, 21);
  const fs::path p = dir / "data.csv";
  io::write_dataset_csv(p, d);
  return p;
}

const fs::path kGolden = EQTEST_GOLDEN_DIR;

}  // namespace

TEST_CASE("argument errors") {
  const fs::path dir = scratch("args");
  const fs::path data = write_f2_csv(dir, 0.05);
  CHECK(run_cli({}).code == 3);
  CHECK(run_cli({"--help"}).code == 0);
  CHECK(run_cli({"avt", data.string()}).code == 3);
  CHECK(run_cli({"avt", data.string(), "--m", "0"}).code == 3);
  CHECK(run_cli({"avt", data.string(), "--m", "5", "--thresholds", "0.1", "--grid-k", "3"}).code == 3);
  CHECK(run_cli({"pvt", data.string(), "--m", "5", "--baseline", "random"}).code == 3);
  CHECK(run_cli({"mnist", "--digit", "11"}).code == 3);

  const Result q = run_cli({"--out-dir", dir.string(), "pvt", data.string(), "--m", "5", "--q", "1.5"});
  CHECK(q.code == 3);
  CHECK(q.err.find("configuration") != std::string::npos);

  const Result missing = run_cli({"--out-dir", dir.string(), "avt", (dir / "none.csv").string(), "--m", "5"});
  CHECK(missing.code == 2);
}

TEST_CASE("malformed CSV reports the line") {
  const fs::path dir = scratch("malformed");
  io::write_text(dir / "bad.csv", "x0,x1,y0\n1,2,3\n4,oops,6\n");
  const Result r = run_cli({"--out-dir", dir.string(), "avt", (dir / "bad.csv").string(), "--m", "5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("noiseless data") {
  const fs::path dir = scratch("noiseless");
  const fs::path data = write_f2_csv(dir, 0.0);
  const Result broken = run_cli({"--out-dir", dir.string(), "--seed", "3", "avt", data.string(), "--m", "200"});
  REQUIRE(broken.code == 0);
  CHECK(broken.out.find("p_value=0\n") != std::string::npos);

  io::write_text(dir / "star.json", R"({"kind": "sign_rotation"})");
  const Result held = run_cli({"--out-dir", dir.string(), "avt", data.string(), "--m", "200", "--action-spec",
                               (dir / "star.json").string()});
  REQUIRE(held.code == 0);
  CHECK(held.out.find("p_value=1\n") != std::string::npos);
  const io::json report = io::load_json(dir / "avt_report.json");
  CHECK(report["p_value"] == 1.0);
  CHECK(report["config"]["action"]["kind"] == "axis_sign_rotation");
}

TEST_CASE("reports are byte-identical across reruns and worker counts") {
  const fs::path a = scratch("rerun_a");
  const fs::path b = scratch("rerun_b");
  const fs::path data = write_f2_csv(a, 0.05);
  const std::vector<std::string> common{"avt", data.string(), "--m", "150", "--sigma", "0.05", "--grid-k", "5",
                                        "--keep-samples"};
  auto with = [&](const fs::path& dir, const std::string& jobs) {
    std::vector<std::string> args{"--seed", "9", "--jobs", jobs, "--out-dir", dir.string()};
    args.insert(args.end(), common.begin(), common.end());
    return run_cli(args);
  };
  REQUIRE(with(a, "1").code == 0);
  REQUIRE(with(b, "4").code == 0);
  CHECK(io::read_text(a / "avt_report.json") == io::read_text(b / "avt_report.json"));

  const io::json manifest = io::load_json(a / "manifest.json");
  CHECK(manifest["subcommand"] == "avt");
  CHECK(manifest["seed"] == 9);
  CHECK(manifest["inputs"][0]["sha256"] == io::sha256_file(data));
}

TEST_CASE("PVT report matches the golden file") {
  const fs::path dir = scratch("golden");
  const Result r = run_cli({"--seed", "7", "--jobs", "1", "--out-dir", dir.string(), "pvt",
                            (kGolden / "f2_n60.csv").string(), "--m", "40", "--B", "20", "--q", "0.9",
                            "--keep-samples"});
  REQUIRE(r.code == 0);
  CHECK(io::read_text(dir / "pvt_report.json") == io::read_text(kGolden / "pvt_report.json"));

  const io::json report = io::load_json(kGolden / "pvt_report.json");
  const auto ratios = report["baseline_ratios"].get<std::vector<double>>();
  const auto batches = report["batch_quantiles"].get<std::vector<double>>();
  CHECK(ratios.size() == 40);
  CHECK(batches.size() == 20);
  const double a0 = oracle::quantile7(ratios, 0.9);
  CHECK(report["baseline_quantile"].get<double>() == doctest::Approx(a0).epsilon(1e-15));
  const auto count = std::count_if(batches.begin(), batches.end(), [&](double a) { return a <= a0; });
  CHECK(report["p_value"].get<double>() == doctest::Approx(static_cast<double>(count) / 20.0));
}

TEST_CASE("simulate writes tables and a manifest") {
  const fs::path dir = scratch("simulate");
  io::write_text(dir / "spec.json", R"({
    "test": "avt",
    "hypotheses": [{"label": "H0", "target": "f2", "action": "axis_sign_rotation"},
                   {"label": "H1", "target": "f2", "action": "axis_rotation"}],
    "n": [50],
    "replicates": 4,
    "seed": 1
  })");
  const Result r = run_cli({"--out-dir", (dir / "out").string(), "simulate", (dir / "spec.json").string()});
  REQUIRE(r.code == 0);
  const std::string table = io::read_text(dir / "out" / "table.csv");
  CHECK(table.rfind("hypothesis,n,m,sigma,L,t,q,rejections,replicates,proportion,se\n", 0) == 0);
  CHECK(std::count(table.begin(), table.end(), '\n') == 3);
  CHECK(fs::exists(dir / "out" / "plot_data.csv"));
  const io::json manifest = io::load_json(dir / "out" / "manifest.json");
  CHECK(manifest["inputs"][0]["sha256"] == io::sha256_file(dir / "spec.json"));
  CHECK(manifest["outputs"].size() == 3);

  io::write_text(dir / "bad.json", R"({"test": "avt", "n": [50]})");
  CHECK(run_cli({"--out-dir", (dir / "out").string(), "simulate", (dir / "bad.json").string()}).code == 3);
  io::write_text(dir / "broken.json", "{");
  CHECK(run_cli({"--out-dir", (dir / "out").string(), "simulate", (dir / "broken.json").string()}).code == 2);
}

TEST_CASE("mnist and demo subcommands") {
  const fs::path dir = scratch("mnist");
  if (fs::exists(fs::path(EQTEST_DATA_DIR) / "mnist5k" / "train-images-idx3-ubyte.gz")) {
    const Result r8 = run_cli({"--out-dir", dir.string(), "mnist", "--digit", "8", "--m", "200"});
    REQUIRE(r8.code == 0);
    CHECK(r8.out.find("single-class") != std::string::npos);
    CHECK(io::load_json(dir / "mnist_report.json")["vacuous"] == true);
  }
  const Result fig = run_cli({"--out-dir", dir.string(), "demo-fig2", "--n", "50,100", "--replicates", "2",
                              "--bandwidth-c", "1.5"});
  REQUIRE(fig.code == 0);
  CHECK(fs::exists(dir / "fig2_summary.csv"));
  CHECK(fs::exists(dir / "fig2.json"));
}
