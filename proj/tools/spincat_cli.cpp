// Command-line surface for the collective-spin simulator: quantum-jump
// trajectories, cycle histograms, QFI tables, critical-probability sweeps,
// secret-sharing thresholds, permutation-invariant ensemble evolution,
// experimental rate algebra, and spin Wigner-function grids.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

#include "spincat/ensemble.hpp"
#include "spincat/io.hpp"
#include "spincat/metrology.hpp"
#include "spincat/rng.hpp"
#include "spincat/secret.hpp"
#include "spincat/spin.hpp"
#include "spincat/trajectory.hpp"
#include "spincat/wigner_d.hpp"
#include "spincat/wigner_function.hpp"

namespace {

using nlohmann::json;
using namespace spincat;

struct RunContext {
  std::string command;
  json config;
  std::uint64_t seed = 0;
  std::string out_base;
  std::string format = "csv";
  int workers = 1;
  std::vector<std::string> written;

  std::string data_path() const {
    return out_base + (format == "json" ? ".json" : ".csv");
  }
  std::string manifest_path() const { return out_base + ".manifest.json"; }

  void emit(const CsvTable& table, const json& record) {
    if (format == "json")
      write_text_file(data_path(), record.dump(2) + "\n");
    else
      write_text_file(data_path(), table.to_string());
    written.push_back(data_path());
    json manifest = make_manifest(command, config, seed, format, workers, {data_path()});
    write_text_file(manifest_path(), manifest.dump(2) + "\n");
    written.push_back(manifest_path());
  }

  void emit_with_extras(const CsvTable& table, const json& record, const json& extras) {
    if (format == "json")
      write_text_file(data_path(), record.dump(2) + "\n");
    else
      write_text_file(data_path(), table.to_string());
    written.push_back(data_path());
    json manifest = make_manifest(command, config, seed, format, workers, {data_path()});
    for (auto it = extras.begin(); it != extras.end(); ++it) manifest[it.key()] = it.value();
    write_text_file(manifest_path(), manifest.dump(2) + "\n");
    written.push_back(manifest_path());
  }
};

double get_num(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}
int get_int(const json& j, const std::string& key, int fallback) {
  return j.contains(key) ? j.at(key).get<int>() : fallback;
}
std::string get_str(const json& j, const std::string& key, const std::string& fallback) {
  return j.contains(key) ? j.at(key).get<std::string>() : fallback;
}

TrajectoryConfig trajectory_config(const json& cfg, std::uint64_t seed,
                                   const std::string& command) {
  check_known_keys(cfg, {"S", "upsilon", "t_max", "sampler", "dt", "settle_epsilon",
                         "n_trajectories"},
                   command);
  TrajectoryConfig tc;
  tc.spin = Spin::integer(get_int(cfg, "S", 10));
  tc.upsilon = get_num(cfg, "upsilon", 1.0);
  tc.t_max = get_num(cfg, "t_max", 50.0);
  tc.seed = seed;
  std::string sampler = get_str(cfg, "sampler", "exact");
  if (sampler == "exact")
    tc.sampler = JumpSampler::ExactWaitingTime;
  else if (sampler == "bernoulli")
    tc.sampler = JumpSampler::BernoulliDt;
  else
    throw std::invalid_argument(command + ": sampler must be \"exact\" or \"bernoulli\"");
  tc.dt = get_num(cfg, "dt", 0.0);
  tc.settle_epsilon = get_num(cfg, "settle_epsilon", 1e-6);
  return tc;
}

void run_trajectory_cmd(RunContext& ctx) {
  TrajectoryConfig tc = trajectory_config(ctx.config, ctx.seed, "trajectory");
  TrajectoryResult result = run_trajectory(tc);
  json record;
  record["jump_times"] = result.jump_times;
  record["settled_m"] = result.settled_m ? json(*result.settled_m) : json(nullptr);
  record["settled_parity"] =
      result.settled_parity
          ? json(*result.settled_parity == Parity::Plus ? "plus" : "minus")
          : json(nullptr);
  record["settle_time"] = result.settle_time ? json(*result.settle_time) : json(nullptr);
  json amps = json::array();
  for (int i = 0; i < result.final_state.spin.dim(); ++i)
    amps.push_back({result.final_state.amplitudes(i).real(),
                    result.final_state.amplitudes(i).imag()});
  record["final_state_y"] = amps;
  CsvTable table;
  table.header = {"jump_index", "t"};
  for (std::size_t i = 0; i < result.jump_times.size(); ++i)
    table.add_row({std::to_string(i), format_double(result.jump_times[i])});
  ctx.emit(table, record);
}

void run_histogram_cmd(RunContext& ctx) {
  TrajectoryConfig tc = trajectory_config(ctx.config, ctx.seed, "histogram");
  long n = static_cast<long>(get_num(ctx.config, "n_trajectories", 5000));
  CycleHistogram hist = run_histogram(tc, n, ctx.workers);
  int s = tc.spin.two_s / 2;
  CsvTable table;
  table.header = {"m", "count", "frequency", "analytic"};
  json record;
  record["n_trajectories"] = hist.n_trajectories;
  record["unsettled"] = hist.unsettled;
  json bins = json::array();
  for (int m = s % 2; m <= s; m += 2) {
    long count = hist.counts.count(m) ? hist.counts.at(m) : 0;
    LogD d = log_d_m0(tc.spin, m);
    double analytic = d.sign == 0 ? 0.0 : std::exp(2.0 * d.log_abs) * (m == 0 ? 1.0 : 2.0);
    double freq = double(count) / hist.n_trajectories;
    table.add_row({std::to_string(m), std::to_string(count), format_double(freq),
                   format_double(analytic)});
    bins.push_back({{"m", m}, {"count", count}, {"frequency", freq}, {"analytic", analytic}});
  }
  table.add_row({"-1", std::to_string(hist.unsettled),
                 format_double(double(hist.unsettled) / hist.n_trajectories), "0"});
  record["bins"] = bins;
  ctx.emit(table, record);
}

void run_qfi_cmd(RunContext& ctx) {
  check_known_keys(ctx.config, {"S", "grid_resolution"}, "qfi");
  Spin spin = Spin::integer(get_int(ctx.config, "S", 30));
  int res = get_int(ctx.config, "grid_resolution", 32);
  int s = spin.two_s / 2;
  CsvTable table;
  table.header = {"m", "qfi_x", "qfi_y", "qfi_z", "qfi_opt", "theta_opt", "phi_opt"};
  json rows = json::array();
  for (int m = s % 2; m <= s; m += 2) {
    StateVector chi = m == 0 ? dicke_state(spin, 0, Axis::Y)
                             : kitten_state(KittenSpec(spin, m, Parity::Plus));
    double qx = qfi(chi, {std::numbers::pi / 2, 0.0});
    double qy = qfi(chi, {std::numbers::pi / 2, std::numbers::pi / 2});
    double qz = qfi(chi, {0.0, 0.0});
    QfiScan scan = qfi_scan(chi, res);
    table.add_row({std::to_string(m), format_double(qx), format_double(qy),
                   format_double(qz), format_double(scan.optimum.value),
                   format_double(scan.optimum.direction.theta),
                   format_double(scan.optimum.direction.phi)});
    rows.push_back({{"m", m},
                    {"qfi_x", qx},
                    {"qfi_y", qy},
                    {"qfi_z", qz},
                    {"qfi_opt", scan.optimum.value},
                    {"theta_opt", scan.optimum.direction.theta},
                    {"phi_opt", scan.optimum.direction.phi}});
  }
  json record;
  record["rows"] = rows;
  ctx.emit(table, record);
}

void run_pcrit_cmd(RunContext& ctx) {
  check_known_keys(ctx.config, {"s_min", "s_max"}, "pcrit");
  int s_min = get_int(ctx.config, "s_min", 10);
  int s_max = get_int(ctx.config, "s_max", 100);
  if (s_min < 1 || s_max < s_min)
    throw std::invalid_argument("pcrit: need 1 <= s_min <= s_max");
  CsvTable table;
  table.header = {"S",           "m_crit",         "p_crit",     "p_crit_piecewise",
                  "p_cat_exact", "p_cat_stirling", "term_count", "alpha_r_exact",
                  "alpha_r_lower_bound"};
  json rows = json::array();
  for (int s = s_min; s <= s_max; ++s) {
    Spin spin = Spin::integer(s);
    int r = p_crit_term_count(spin);
    ApproxPair cat = p_cat(spin);
    ApproxPair alpha = alpha_r(spin, r);
    double lb = alpha_r_lower_bound(spin, r);
    table.add_row({std::to_string(s), format_double(m_crit(spin)),
                   format_double(p_crit(spin)), format_double(p_crit_piecewise(spin)),
                   format_double(cat.exact), format_double(cat.stirling), std::to_string(r),
                   format_double(alpha.exact), format_double(lb)});
    rows.push_back({{"S", s},
                    {"m_crit", m_crit(spin)},
                    {"p_crit", p_crit(spin)},
                    {"p_crit_piecewise", p_crit_piecewise(spin)},
                    {"p_cat_exact", cat.exact},
                    {"p_cat_stirling", cat.stirling},
                    {"term_count", r},
                    {"alpha_r_exact", alpha.exact},
                    {"alpha_r_lower_bound", lb}});
  }
  json record;
  record["rows"] = rows;
  ctx.emit(table, record);
}

void run_secret_cmd(RunContext& ctx) {
  check_known_keys(ctx.config, {"s_min", "s_max"}, "secret");
  int s_min = get_int(ctx.config, "s_min", 1);
  int s_max = get_int(ctx.config, "s_max", 20);
  if (s_min < 1 || s_max < s_min)
    throw std::invalid_argument("secret: need 1 <= s_min <= s_max");
  std::vector<CriticalRatioRow> scan = critical_ratio_scan(s_min, s_max);
  CsvTable table;
  table.header = {"S", "m", "p_crit_kitten", "p_crit_ghz", "is_crossing", "crossing_ratio",
                  "parity_z_plus", "parity_x_plus"};
  json rows = json::array();
  for (int s = s_min; s <= s_max; ++s) {
    Spin spin = Spin::integer(s);
    const CriticalRatioRow* cross = nullptr;
    for (const auto& row : scan)
      if (row.s == s) cross = &row;
    for (int m = 0; m <= s; ++m) {
      bool is_cross = cross && cross->m_star == m;
      double pz = 0.0, px = 0.0;
      if (m >= 1) {
        KittenSpec spec(spin, m, Parity::Plus);
        pz = spin.two_s <= 12 ? parity_expectation(spec, Axis::Z)
                              : parity_expectation_collective(spec, Axis::Z);
        px = spin.two_s <= 12 ? parity_expectation(spec, Axis::X)
                              : parity_expectation_collective(spec, Axis::X);
      }
      table.add_row({std::to_string(s), std::to_string(m),
                     format_double(p_crit_kitten(spin, m)), format_double(p_crit_ghz(spin)),
                     is_cross ? "1" : "0",
                     is_cross ? format_double(cross->ratio) : std::string(""),
                     format_double(pz), format_double(px)});
      rows.push_back({{"S", s},
                      {"m", m},
                      {"p_crit_kitten", p_crit_kitten(spin, m)},
                      {"p_crit_ghz", p_crit_ghz(spin)},
                      {"is_crossing", is_cross},
                      {"crossing_ratio", is_cross ? json(cross->ratio) : json(nullptr)},
                      {"parity_z_plus", pz},
                      {"parity_x_plus", px}});
    }
  }
  json record;
  record["rows"] = rows;
  ctx.emit(table, record);
}

void run_ensemble_cmd(RunContext& ctx) {
  check_known_keys(ctx.config, {"N", "upsilon", "gamma_eff", "t_max", "n_points"},
                   "ensemble");
  EnsembleConfig cfg;
  cfg.n_particles = get_int(ctx.config, "N", 10);
  cfg.upsilon = get_num(ctx.config, "upsilon", 1.0);
  cfg.gamma_eff = get_num(ctx.config, "gamma_eff", 0.0);
  double t_max = get_num(ctx.config, "t_max", 5.0);
  int n_points = get_int(ctx.config, "n_points", 50);
  if (t_max <= 0 || n_points < 1)
    throw std::invalid_argument("ensemble: need t_max > 0 and n_points >= 1");
  for (int i = 1; i <= n_points; ++i) cfg.t_grid.push_back(t_max * i / n_points);
  EnsembleGenerator generator = build_liouvillian(cfg);
  std::vector<PermInvariantState> snaps = evolve(cfg.initial_state(), generator, cfg.t_grid);
  int s = cfg.n_particles / 2;
  Spin spin = Spin::integer(s);
  CsvTable table;
  table.header = {"t", "m", "parity", "fidelity", "fit_value_growth", "fit_value_decay"};
  json rows = json::array();
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    double t = cfg.t_grid[i];
    for (int m = (s % 2 == 0 ? 2 : 1); m <= s; m += 2) {
      for (Parity parity : {Parity::Plus, Parity::Minus}) {
        double f = kitten_fidelity(snaps[i], KittenSpec(spin, m, parity));
        double fg = kitten_fit_growth(spin, m, cfg.upsilon, cfg.gamma_eff, cfg.n_particles, t);
        double fd = kitten_fit_decay(spin, m, cfg.upsilon, cfg.gamma_eff, cfg.n_particles, t);
        const char* p = parity == Parity::Plus ? "plus" : "minus";
        table.add_row({format_double(t), std::to_string(m), p, format_double(f),
                       format_double(fg), format_double(fd)});
        rows.push_back({{"t", t},
                        {"m", m},
                        {"parity", p},
                        {"fidelity", f},
                        {"fit_value_growth", fg},
                        {"fit_value_decay", fd}});
      }
    }
  }
  json record;
  record["rows"] = rows;
  TimescaleCheck check = timescale_check(cfg.upsilon, cfg.gamma_eff, cfg.n_particles);
  json extras;
  extras["timescale_ok"] = check.ok;
  extras["timescale_margin"] = check.margin;
  ctx.emit_with_extras(table, record, extras);
}

void run_rates_cmd(RunContext& ctx) {
  check_known_keys(ctx.config,
                   {"g", "omega_rabi", "delta", "kappa", "gamma", "n_bar", "kappa_in",
                    "kappa_out", "n_th", "n_particles"},
                   "rates");
  RateParams params;
  params.g = get_num(ctx.config, "g", 0.0);
  params.omega_rabi = get_num(ctx.config, "omega_rabi", 0.0);
  params.delta = get_num(ctx.config, "delta", 0.0);
  params.kappa = get_num(ctx.config, "kappa", 0.0);
  params.gamma = get_num(ctx.config, "gamma", 0.0);
  params.n_bar = get_num(ctx.config, "n_bar", 0.0);
  params.kappa_in = get_num(ctx.config, "kappa_in", 0.0);
  params.kappa_out = get_num(ctx.config, "kappa_out", 0.0);
  params.n_th = get_num(ctx.config, "n_th", 0.0);
  int n_particles = get_int(ctx.config, "n_particles", 1);
  DerivedRates derived = rates(params);
  CsvTable table;
  table.header = {"quantity", "value"};
  auto add = [&](const char* name, double value) {
    table.add_row({name, format_double(value)});
  };
  add("upsilon", derived.upsilon);
  add("gamma_eff", derived.gamma_eff);
  add("cooperativity", derived.cooperativity);
  add("n_bar_effective", derived.n_bar_effective);
  add("ratio_gamma_eff_over_upsilon", derived.ratio);
  add("inverse_upsilon", derived.inverse_upsilon);
  add("ratio_times_n", derived.ratio * n_particles);
  json record;
  record["upsilon"] = derived.upsilon;
  record["gamma_eff"] = derived.gamma_eff;
  record["cooperativity"] = derived.cooperativity;
  record["n_bar_effective"] = derived.n_bar_effective;
  record["ratio_gamma_eff_over_upsilon"] = derived.ratio;
  record["inverse_upsilon"] = derived.inverse_upsilon;
  record["ratio_times_n"] = derived.ratio * n_particles;
  json extras;
  extras["derived"] = record;
  ctx.emit_with_extras(table, record, extras);
}

void run_wigner_cmd(RunContext& ctx) {
  check_known_keys(ctx.config, {"S", "m", "parity", "n_theta", "n_phi"}, "wigner");
  Spin spin = Spin::integer(get_int(ctx.config, "S", 10));
  int m = get_int(ctx.config, "m", 0);
  std::string parity = get_str(ctx.config, "parity", "plus");
  if (parity != "plus" && parity != "minus")
    throw std::invalid_argument("wigner: parity must be \"plus\" or \"minus\"");
  StateVector state = kitten_state(
      KittenSpec(spin, m, parity == "plus" ? Parity::Plus : Parity::Minus));
  int n_theta = get_int(ctx.config, "n_theta", 64);
  int n_phi = get_int(ctx.config, "n_phi", 128);
  WignerGrid grid = wigner_function(state, n_theta, n_phi);
  CsvTable table;
  table.header = {"theta", "phi", "w"};
  for (int it = 0; it < grid.theta_points.size(); ++it)
    for (int ip = 0; ip < grid.phi_points.size(); ++ip)
      table.add_row({format_double(grid.theta_points(it)), format_double(grid.phi_points(ip)),
                     format_double(grid.values(it, ip))});
  json record;
  record["theta"] = std::vector<double>(grid.theta_points.data(),
                                        grid.theta_points.data() + grid.theta_points.size());
  record["phi"] = std::vector<double>(grid.phi_points.data(),
                                      grid.phi_points.data() + grid.phi_points.size());
  json values = json::array();
  for (int it = 0; it < grid.values.rows(); ++it) {
    json row = json::array();
    for (int ip = 0; ip < grid.values.cols(); ++ip) row.push_back(grid.values(it, ip));
    values.push_back(row);
  }
  record["values"] = values;
  json extras;
  extras["normalization_quadrature"] = wigner_normalization(state);
  extras["sign_changes_about_y"] = wigner_sign_changes_about_y(state);
  ctx.emit_with_extras(table, record, extras);
}

int default_workers() {
  if (const char* env = std::getenv("SPINCAT_WORKERS")) {
    int w = std::atoi(env);
    if (w >= 1) return w;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective-spin dissipative one-axis-twisting simulator"};
  app.require_subcommand(1);

  std::string config_path, out_base, format = "csv";
  std::uint64_t seed = 0;
  int workers = default_workers();
  app.add_option("--config", config_path, "JSON config (or manifest) file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master RNG seed");
  app.add_option("--out", out_base, "Output path base (extension appended)");
  app.add_option("--format", format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--workers", workers, "Worker thread count")->check(CLI::PositiveNumber);

  const char* commands[] = {"trajectory", "histogram", "qfi",   "pcrit",
                            "secret",     "ensemble",  "rates", "wigner"};
  for (const char* name : commands) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Collapse CLI11's assorted parse-error codes onto the 0/1/2 contract.
    return app.exit(e) == 0 ? 0 : 1;
  }
  std::string command = app.get_subcommands().front()->get_name();

  RunContext ctx;
  ctx.command = command;
  ctx.seed = seed;
  ctx.format = format;
  ctx.workers = workers;
  ctx.out_base = out_base.empty() ? command : out_base;
  try {
    ctx.config = config_path.empty() ? nlohmann::json::object()
                                     : spincat::load_config(config_path);
    if (command == "trajectory")
      run_trajectory_cmd(ctx);
    else if (command == "histogram")
      run_histogram_cmd(ctx);
    else if (command == "qfi")
      run_qfi_cmd(ctx);
    else if (command == "pcrit")
      run_pcrit_cmd(ctx);
    else if (command == "secret")
      run_secret_cmd(ctx);
    else if (command == "ensemble")
      run_ensemble_cmd(ctx);
    else if (command == "rates")
      run_rates_cmd(ctx);
    else if (command == "wigner")
      run_wigner_cmd(ctx);
  } catch (const spincat::NumericError& err) {
    for (const auto& path : ctx.written) std::filesystem::remove(path);
    std::cerr << "numeric failure: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    for (const auto& path : ctx.written) std::filesystem::remove(path);
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
