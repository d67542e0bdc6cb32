#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "glse/experiment.hpp"
#include "glse/rng.hpp"

using namespace glse;

TEST_SUITE_BEGIN("experiment");

TEST_CASE("users_for maps load to a user count") {
  ExperimentConfig cfg;
  cfg.M = 64;
  CHECK(cfg.users_for(1.0) == 64);
  CHECK(cfg.users_for(1.4) == 45);
  CHECK(cfg.users_for(1.8) == 35);
  CHECK(cfg.users_for(2.2) == 29);
  CHECK(cfg.users_for(2.6) == 24);
  CHECK(cfg.users_for(3.0) == 21);
  CHECK_THROWS(cfg.users_for(0.0));
  CHECK_THROWS(cfg.users_for(100.0));
}

TEST_CASE("generate_channel moments and determinism") {
  const int M = 32, K = 32;
  const Eigen::MatrixXcd H = generate_channel(M, K, 77);
  const Eigen::MatrixXcd H2 = generate_channel(M, K, 77);
  CHECK((H - H2).norm() == 0.0);
  CHECK((generate_channel(M, K, 78) - H).norm() != 0.0);

  // Per-entry variance 1/M within 5%, pooled over 10^5+ entries.
  double acc = 0.0;
  int n = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::MatrixXcd G = generate_channel(M, K, 1000 + rep);
    acc += G.squaredNorm();
    n += M * K;
  }
  const double var = acc / n;
  CHECK(var == doctest::Approx(1.0 / M).epsilon(0.05));

  // Unit column energy on average.
  double col = 0.0;
  for (int k = 0; k < K; ++k) col += H.col(k).squaredNorm();
  CHECK(col / K == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("generate_symbols moments and determinism") {
  const Eigen::VectorXcd s = generate_symbols(64, 5);
  CHECK((s - generate_symbols(64, 5)).norm() == 0.0);

  double var = 0.0;
  cplx mean{0.0, 0.0};
  int n = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const Eigen::VectorXcd v = generate_symbols(512, 9000 + rep);
    var += v.squaredNorm();
    mean += v.sum();
    n += 512;
  }
  CHECK(var / n == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::abs(mean) / n <= 0.02);
}

TEST_CASE("config json round trip with theta defaulting to epsilon") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "glse_cfg_test";
  fs::create_directories(dir);
  const fs::path file = dir / "cfg.json";
  {
    std::ofstream f(file);
    f << R"({"M": 16, "epsilon": 0.12, "methods": ["direct"], "realizations": 2})";
  }
  const ExperimentConfig cfg = load_config(file);
  CHECK(cfg.M == 16);
  CHECK(cfg.epsilon == 0.12);
  CHECK(cfg.theta == 0.12);  // falls back to epsilon
  CHECK(cfg.methods.size() == 1);
  CHECK(cfg.realizations == 2);
  CHECK(cfg.papr_target_db == 5.0);

  {
    std::ofstream f(file);
    f << R"({"M": 16, "typo_key": 1})";
  }
  CHECK_THROWS(load_config(file));

  {
    std::ofstream f(file);
    f << R"({"methods": ["zf"]})";
  }
  CHECK_THROWS(load_config(file));
}

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.M = 16;
  cfg.xi_list = {1.0, 2.0};
  cfg.realizations = 3;
  cfg.methods = {"direct", "rzf"};
  cfg.master_seed = 42;
  cfg.threads = 2;
  cfg.solver.rel_tol = 1e-8;
  cfg.grid_points = 256;
  return cfg;
}

}  // namespace

TEST_CASE("run_sweep smoke test emits the expected row structure") {
  ExperimentConfig cfg;
  cfg.M = 8;
  cfg.xi_list = {1.0, 2.0};
  cfg.realizations = 1;
  cfg.methods = {"direct"};
  cfg.master_seed = 7;
  cfg.threads = 1;
  cfg.grid_points = 256;
  const SweepResult res = run_sweep(cfg);
  // Per xi: one realization row plus one mean row.
  CHECK(res.rows.size() == 4);
  CHECK(res.rows[0].method == "direct");
  CHECK_FALSE(res.rows[0].is_mean);
  CHECK(res.rows[1].is_mean);
  CHECK(res.rows[0].xi == 1.0);
  CHECK(res.rows[2].xi == 2.0);
  for (const SweepRow& r : res.rows) {
    CHECK(std::isfinite(r.d_db));
    CHECK(std::isfinite(r.d_tilde_db));
    CHECK(r.diverged == 0);
  }
}

TEST_CASE("cross-method fairness: same realization seeds per xi") {
  const SweepResult res = run_sweep(small_config());
  // rows: 3 direct + mean, then 3 rzf + mean, per xi.
  for (int xi_block = 0; xi_block < 2; ++xi_block) {
    const std::size_t base = static_cast<std::size_t>(xi_block) * 8;
    for (int r = 0; r < 3; ++r) {
      CHECK(res.rows[base + r].seed == res.rows[base + 4 + r].seed);
    }
  }
}

TEST_CASE("mean rows equal the linear-domain average of realization rows") {
  const SweepResult res = run_sweep(small_config());
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    if (!res.rows[i].is_mean) continue;
    double acc_d = 0.0, acc_dt = 0.0;
    int n = 0;
    for (std::size_t j = 0; j < res.rows.size(); ++j) {
      const SweepRow& r = res.rows[j];
      if (r.is_mean || r.xi != res.rows[i].xi || r.method != res.rows[i].method) continue;
      acc_d += std::pow(10.0, r.d_db / 10.0);
      acc_dt += std::pow(10.0, r.d_tilde_db / 10.0);
      ++n;
    }
    CHECK(res.rows[i].d_db == doctest::Approx(10.0 * std::log10(acc_d / n)).epsilon(1e-9));
    CHECK(res.rows[i].d_tilde_db ==
          doctest::Approx(10.0 * std::log10(acc_dt / n)).epsilon(1e-9));
  }
}

TEST_CASE("sweep csv is bit-identical across reruns") {
  const ExperimentConfig cfg = small_config();
  const std::string a = sweep_to_csv(run_sweep(cfg));
  const std::string b = sweep_to_csv(run_sweep(cfg));
  CHECK(a == b);
  CHECK(a.substr(0, a.find('\n')) ==
        "xi,K,method,seed,d_db,d_tilde_db,papr_db,tuning_param,iterations,diverged");

  // Column count is constant across rows.
  std::size_t pos = 0;
  while (pos < a.size()) {
    const std::size_t end = a.find('\n', pos);
    const std::string line = a.substr(pos, end - pos);
    CHECK(std::count(line.begin(), line.end(), ',') == 9);
    pos = end + 1;
  }
}

TEST_CASE("emit_outputs writes csv, plot blocks, and a reloadable manifest") {
  namespace fs = std::filesystem;
  const ExperimentConfig cfg = small_config();
  const SweepResult res = run_sweep(cfg);
  const fs::path dir = fs::temp_directory_path() / "glse_emit_test";
  fs::remove_all(dir);
  const OutputPaths paths = emit_outputs(res, dir);
  CHECK(fs::exists(paths.csv));
  CHECK(fs::exists(paths.plot_data));
  CHECK(fs::exists(paths.manifest));

  // Empty result still yields the header.
  SweepResult empty;
  empty.config = cfg;
  const OutputPaths p2 = emit_outputs(empty, dir / "empty");
  std::ifstream f(p2.csv);
  std::string line;
  std::getline(f, line);
  CHECK(line == "xi,K,method,seed,d_db,d_tilde_db,papr_db,tuning_param,iterations,diverged");
  const bool has_more = static_cast<bool>(std::getline(f, line)) && !line.empty();
  CHECK_FALSE(has_more);

  // Plot data has one block per method.
  std::ifstream pf(paths.plot_data);
  std::string content((std::istreambuf_iterator<char>(pf)), std::istreambuf_iterator<char>());
  CHECK(content.find("# direct") != std::string::npos);
  CHECK(content.find("# rzf") != std::string::npos);

  // Unwritable destination reports the offending path.
  const fs::path blocked = paths.csv / "sub";  // a file cannot be a directory
  try {
    emit_outputs(empty, blocked);
    CHECK(false);
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("sub") != std::string::npos);
  }
}

TEST_CASE("glse distortion decreases with the antenna surplus") {
  ExperimentConfig cfg;
  cfg.M = 32;
  cfg.xi_list = {1.0, 2.0, 3.0};
  cfg.realizations = 6;
  cfg.methods = {"direct"};
  cfg.master_seed = 11;
  cfg.threads = 0;
  cfg.grid_points = 256;
  const SweepResult res = run_sweep(cfg);
  double prev = 1e9;
  for (const SweepRow& r : res.rows) {
    if (!r.is_mean) continue;
    CHECK(r.d_tilde_db < prev);
    prev = r.d_tilde_db;
  }
}

TEST_SUITE_END();
