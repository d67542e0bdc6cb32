#include "glse/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "glse/rng.hpp"
#include "glse/version.hpp"
#include "parallel.hpp"

namespace glse {

using nlohmann::json;

int ExperimentConfig::users_for(double xi) const {
  if (!(xi > 0.0)) {
    throw std::invalid_argument("users_for: xi must be positive");
  }
  const int K = static_cast<int>(std::floor(static_cast<double>(M) / xi));
  if (K < 1) {
    throw std::invalid_argument("users_for: xi too large, no users left");
  }
  return K;
}

namespace {

void assign_if(const json& j, const char* key, double& out) {
  if (j.contains(key)) out = j.at(key).get<double>();
}
void assign_if(const json& j, const char* key, int& out) {
  if (j.contains(key)) out = j.at(key).get<int>();
}
void assign_if(const json& j, const char* key, bool& out) {
  if (j.contains(key)) out = j.at(key).get<bool>();
}
void assign_if(const json& j, const char* key, std::uint64_t& out) {
  if (j.contains(key)) out = j.at(key).get<std::uint64_t>();
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  for (const auto& item : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end()) {
      throw std::invalid_argument(std::string("config: unknown key '") + item.key() + "' in " +
                                  where);
    }
  }
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw std::runtime_error("config: cannot open " + file.string());
  }
  json j = json::parse(in);
  check_keys(j,
             {"M", "xi_list", "rho", "papr_target_db", "saleh", "p_out", "epsilon", "theta",
              "realizations", "master_seed", "methods", "amp", "solver", "rzf_delta",
              "grid_points", "threads"},
             "top level");

  ExperimentConfig cfg;
  assign_if(j, "M", cfg.M);
  if (j.contains("xi_list")) cfg.xi_list = j.at("xi_list").get<std::vector<double>>();
  assign_if(j, "rho", cfg.rho);
  assign_if(j, "papr_target_db", cfg.papr_target_db);
  if (j.contains("saleh")) {
    const json& s = j.at("saleh");
    check_keys(s, {"alpha_a", "beta_a", "alpha_phi", "beta_phi"}, "saleh");
    assign_if(s, "alpha_a", cfg.saleh.alpha_a);
    assign_if(s, "beta_a", cfg.saleh.beta_a);
    assign_if(s, "alpha_phi", cfg.saleh.alpha_phi);
    assign_if(s, "beta_phi", cfg.saleh.beta_phi);
  }
  assign_if(j, "p_out", cfg.p_out);
  assign_if(j, "epsilon", cfg.epsilon);
  if (j.contains("theta")) {
    cfg.theta = j.at("theta").get<double>();
  } else {
    cfg.theta = cfg.epsilon;
  }
  assign_if(j, "realizations", cfg.realizations);
  assign_if(j, "master_seed", cfg.master_seed);
  if (j.contains("methods")) cfg.methods = j.at("methods").get<std::vector<std::string>>();
  if (j.contains("amp")) {
    const json& a = j.at("amp");
    check_keys(a, {"max_iters", "damping", "stop_tol", "jitter"}, "amp");
    assign_if(a, "max_iters", cfg.amp.max_iters);
    assign_if(a, "damping", cfg.amp.damping);
    assign_if(a, "stop_tol", cfg.amp.stop_tol);
    assign_if(a, "jitter", cfg.amp.jitter);
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    check_keys(s, {"max_iters", "rel_tol", "acceleration"}, "solver");
    assign_if(s, "max_iters", cfg.solver.max_iters);
    assign_if(s, "rel_tol", cfg.solver.rel_tol);
    assign_if(s, "acceleration", cfg.solver.acceleration);
  }
  assign_if(j, "rzf_delta", cfg.rzf_delta);
  assign_if(j, "grid_points", cfg.grid_points);
  assign_if(j, "threads", cfg.threads);

  for (const std::string& m : cfg.methods) {
    if (m != "amp" && m != "direct" && m != "rzf") {
      throw std::invalid_argument("config: unknown method '" + m + "'");
    }
  }
  if (cfg.realizations < 1) {
    throw std::invalid_argument("config: realizations must be >= 1");
  }
  return cfg;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["M"] = c.M;
  j["xi_list"] = c.xi_list;
  j["rho"] = c.rho;
  j["papr_target_db"] = c.papr_target_db;
  j["saleh"] = {{"alpha_a", c.saleh.alpha_a},
                {"beta_a", c.saleh.beta_a},
                {"alpha_phi", c.saleh.alpha_phi},
                {"beta_phi", c.saleh.beta_phi}};
  j["p_out"] = c.p_out;
  j["epsilon"] = c.epsilon;
  j["theta"] = c.theta;
  j["realizations"] = c.realizations;
  j["master_seed"] = c.master_seed;
  j["methods"] = c.methods;
  j["amp"] = {{"max_iters", c.amp.max_iters},
              {"damping", c.amp.damping},
              {"stop_tol", c.amp.stop_tol},
              {"jitter", c.amp.jitter}};
  j["solver"] = {{"max_iters", c.solver.max_iters},
                 {"rel_tol", c.solver.rel_tol},
                 {"acceleration", c.solver.acceleration}};
  j["rzf_delta"] = c.rzf_delta;
  j["grid_points"] = c.grid_points;
  j["threads"] = c.threads;
  return j.dump(2);
}

Eigen::MatrixXcd generate_channel(int M, int K, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXcd H(M, K);
  const double var = 1.0 / static_cast<double>(M);
  for (int k = 0; k < K; ++k) {
    for (int m = 0; m < M; ++m) {
      H(m, k) = rng.complex_gaussian(var);
    }
  }
  return H;
}

Eigen::VectorXcd generate_symbols(int K, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXcd s(K);
  for (int k = 0; k < K; ++k) {
    s(k) = rng.complex_gaussian(1.0);
  }
  return s;
}

namespace {

struct RealizationMetrics {
  double d_lin = 0.0;
  double d_tilde_lin = 0.0;
  double papr_lin = 0.0;
  double iterations = 0.0;
  int diverged = 0;
  bool failed = false;
};

std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) {
    return "nan";
  }
  return std::string(buf, ptr);
}

SweepRow make_row(double xi, int K, const std::string& method, std::uint64_t seed,
                  const RealizationMetrics& m, double tuning) {
  SweepRow row;
  row.xi = xi;
  row.K = K;
  row.method = method;
  row.seed = seed;
  row.d_db = to_db(m.d_lin);
  row.d_tilde_db = to_db(m.d_tilde_lin);
  row.papr_db = to_db(m.papr_lin);
  row.tuning_param = tuning;
  row.iterations = m.iterations;
  row.diverged = m.diverged;
  return row;
}

SweepRow mean_row(double xi, int K, const std::string& method,
                  const std::vector<RealizationMetrics>& ms, double tuning) {
  double d = 0.0, dt = 0.0, pa = 0.0, it = 0.0;
  int div = 0;
  int n = 0;
  for (const auto& m : ms) {
    if (m.failed) {
      ++div;
      continue;
    }
    d += m.d_lin;
    dt += m.d_tilde_lin;
    pa += m.papr_lin;
    it += m.iterations;
    div += m.diverged;
    ++n;
  }
  SweepRow row;
  row.xi = xi;
  row.K = K;
  row.method = method;
  row.is_mean = true;
  row.d_db = to_db(d / n);
  row.d_tilde_db = to_db(dt / n);
  row.papr_db = to_db(pa / n);
  row.tuning_param = tuning;
  row.iterations = it / n;
  row.diverged = div;
  return row;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg) {
  const RfModel rf(cfg.saleh, cfg.p_out, cfg.epsilon);
  ProjectionConfig proj;
  proj.theta = cfg.theta;
  proj.grid_points = cfg.grid_points;

  const bool want_amp = std::count(cfg.methods.begin(), cfg.methods.end(), "amp") > 0;
  const bool want_direct = std::count(cfg.methods.begin(), cfg.methods.end(), "direct") > 0;
  const bool want_rzf = std::count(cfg.methods.begin(), cfg.methods.end(), "rzf") > 0;
  const int NR = cfg.realizations;

  SweepResult result;
  result.config = cfg;

  for (std::size_t xi_idx = 0; xi_idx < cfg.xi_list.size(); ++xi_idx) {
    const double xi = cfg.xi_list[xi_idx];
    const int K = cfg.users_for(xi);

    // Shared channel/symbol realizations; every method sees the same pair.
    std::vector<std::uint64_t> child(NR);
    std::vector<GlseProblem> problems(NR);
    const std::uint64_t xi_seed = Rng::derive(cfg.master_seed, xi_idx + 1);
    detail::parallel_for(static_cast<std::size_t>(NR), cfg.threads, [&](std::size_t r) {
      child[r] = Rng::derive(xi_seed, r + 1);
      GlseProblem p;
      p.H = generate_channel(cfg.M, K, Rng::derive(child[r], 0xA));
      p.s = generate_symbols(K, Rng::derive(child[r], 0xB));
      p.rho = cfg.rho;
      p.p_out = cfg.p_out;
      problems[r] = std::move(p);
    });

    // One penalty weight per load point, tuned on the whole ensemble.
    double lambda_star = 0.0;
    bool lambda_ok = true;
    if (want_amp || want_direct) {
      LambdaTuneOptions topt;
      topt.probe = want_direct ? LambdaTuneOptions::Probe::direct
                               : LambdaTuneOptions::Probe::amp;
      topt.amp = cfg.amp;
      topt.threads = cfg.threads;
      const TuneResult t =
          tune_lambda_for_papr(std::span<const GlseProblem>(problems), cfg.papr_target_db, topt);
      lambda_star = t.value;
      lambda_ok = t.feasible;
    }

    auto glse_metrics = [&](std::size_t r, bool use_amp) {
      RealizationMetrics m;
      try {
        GlseProblem p = problems[r];
        p.lambda = lambda_star;
        Eigen::VectorXcd w;
        if (use_amp) {
          const AmpResult a = amp_precode(p, cfg.amp);
          w = a.w;
          m.iterations = a.iterations;
          m.diverged = a.diverged ? 1 : 0;
        } else {
          const SolveResult sres = solve_glse_direct(p, cfg.solver);
          w = sres.w;
          m.iterations = sres.iterations;
          m.diverged = sres.converged ? 0 : 1;
        }
        const MetricReport rep =
            measure_glse_signal(p.H, w, p.s, p.rho, rf, proj, lambda_star);
        if (!rep.feasible) {
          throw std::runtime_error("infeasible precoder output");
        }
        m.d_lin = rep.d_predicted;
        m.d_tilde_lin = rep.d_actual;
        m.papr_lin = std::pow(10.0, rep.papr_db / 10.0);
        if (!lambda_ok) m.diverged = 1;
      } catch (const std::exception&) {
        m.failed = true;
        m.diverged = 1;
        m.d_lin = m.d_tilde_lin = m.papr_lin = std::numeric_limits<double>::quiet_NaN();
      }
      return m;
    };

    for (const std::string& method : cfg.methods) {
      std::vector<RealizationMetrics> ms(NR);
      double tuning = lambda_star;
      if (method == "amp") {
        detail::parallel_for(static_cast<std::size_t>(NR), cfg.threads,
                             [&](std::size_t r) { ms[r] = glse_metrics(r, true); });
      } else if (method == "direct") {
        detail::parallel_for(static_cast<std::size_t>(NR), cfg.threads,
                             [&](std::size_t r) { ms[r] = glse_metrics(r, false); });
      } else {  // rzf
        std::vector<Eigen::VectorXcd> x0(NR);
        detail::parallel_for(static_cast<std::size_t>(NR), cfg.threads, [&](std::size_t r) {
          x0[r] = rzf_precode(problems[r].H, problems[r].s, cfg.rzf_delta, 1.0);
        });
        GammaTuneOptions gopt;
        gopt.threads = cfg.threads;
        const TuneResult g = tune_gamma_for_papr(std::span<const Eigen::VectorXcd>(x0), rf,
                                                 cfg.papr_target_db, gopt);
        tuning = g.value;
        detail::parallel_for(static_cast<std::size_t>(NR), cfg.threads, [&](std::size_t r) {
          RealizationMetrics m;
          try {
            const Eigen::VectorXcd xs = g.value * x0[r];
            Eigen::VectorXcd wt(xs.size());
            for (Eigen::Index i = 0; i < xs.size(); ++i) {
              wt(i) = rf.true_output(xs(i));
            }
            m.d_lin = avg_distortion(problems[r].H, xs, problems[r].s, cfg.rho, K);
            m.d_tilde_lin = avg_distortion(problems[r].H, wt, problems[r].s, cfg.rho, K);
            m.papr_lin = papr(wt);
            m.diverged = g.feasible ? 0 : 1;
          } catch (const std::exception&) {
            m.failed = true;
            m.diverged = 1;
            m.d_lin = m.d_tilde_lin = m.papr_lin = std::numeric_limits<double>::quiet_NaN();
          }
          ms[r] = m;
        });
      }
      for (int r = 0; r < NR; ++r) {
        result.rows.push_back(make_row(xi, K, method, child[static_cast<std::size_t>(r)],
                                       ms[static_cast<std::size_t>(r)], tuning));
      }
      result.rows.push_back(mean_row(xi, K, method, ms, tuning));
    }
  }
  return result;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "xi,K,method,seed,d_db,d_tilde_db,papr_db,tuning_param,iterations,diverged\n";
  for (const SweepRow& r : result.rows) {
    out << format_double(r.xi) << ',' << r.K << ',' << r.method << ','
        << (r.is_mean ? std::string("mean") : std::to_string(r.seed)) << ','
        << format_double(r.d_db) << ',' << format_double(r.d_tilde_db) << ','
        << format_double(r.papr_db) << ',' << format_double(r.tuning_param) << ','
        << format_double(r.iterations) << ',' << r.diverged << '\n';
  }
  return out.str();
}

OutputPaths emit_outputs(const SweepResult& result, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  OutputPaths paths;
  paths.csv = out_dir / "sweep.csv";
  paths.plot_data = out_dir / "plot_data.txt";
  paths.manifest = out_dir / "manifest.json";

  {
    std::ofstream f(paths.csv, std::ios::binary);
    if (!f) throw std::runtime_error("emit_outputs: cannot write " + paths.csv.string());
    f << sweep_to_csv(result);
  }
  {
    std::ofstream f(paths.plot_data, std::ios::binary);
    if (!f) throw std::runtime_error("emit_outputs: cannot write " + paths.plot_data.string());
    bool first = true;
    for (const std::string& method : result.config.methods) {
      if (!first) f << '\n';
      first = false;
      f << "# " << method << '\n';
      for (const SweepRow& r : result.rows) {
        if (r.is_mean && r.method == method) {
          f << format_double(r.xi) << ' ' << format_double(r.d_tilde_db) << '\n';
        }
      }
    }
  }
  {
    std::ofstream f(paths.manifest, std::ios::binary);
    if (!f) throw std::runtime_error("emit_outputs: cannot write " + paths.manifest.string());
    json m;
    m["version"] = std::string(kVersion);
    m["master_seed"] = result.config.master_seed;
    m["config"] = json::parse(config_to_json(result.config));
    f << m.dump(2) << '\n';
  }
  return paths;
}

}  // namespace glse
