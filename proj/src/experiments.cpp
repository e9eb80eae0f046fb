#include "fgame/experiments.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "fgame/csv.hpp"
#include "fgame/region.hpp"

namespace fgame {

namespace {

// key, default (as written into the effective dump)
const std::vector<std::pair<std::string, std::string>>& known_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"game.alpha", "0.01"},
      {"game.sigma2", "0.1"},
      {"game.spectral_eff", "1"},
      {"game.phi", "exp_rate"},
      {"game.block_symbols", "100"},
      {"grid.power.count", "10"},
      {"grid.power.min_positive", "0.01"},
      {"grid.power.max", "10"},
      {"grid.gain.count", "10"},
      {"grid.gain.min", "0.04"},
      {"grid.gain.max", "10"},
      {"credit.m0", "35"},
      {"credit.beta", "10"},
      {"credit.mu", "20"},
      {"credit.nu", "1"},
      {"monitor.epsilon", "0"},
      {"monitor.drop_rule", "min_action"},
      {"path_loss.const", "1000"},
      {"path_loss.kappa", "5"},
      {"sim.nodes", "50"},
      {"sim.area_w", "1000"},
      {"sim.area_h", "1000"},
      {"sim.range", "150"},
      {"sim.frames", "20"},
      {"sim.packet_rate", "2"},
      {"sim.frame_seconds", "50"},
      {"sim.selfish_fraction", "0.5"},
      {"sim.selfish_initial_rate", "0.1"},
      {"sim.strategy", "sara"},
      {"sim.topology_draws", "50"},
      {"sim.max_topology_attempts", "10000"},
      {"sim.mean_mode", "unit"},
      {"sim.csi", "local"},
      {"sim.lambda", "0.5"},
      {"sim.policy_restarts", "1"},
      {"sim.policy_buckets", "8"},
      {"icarus.initial_credit", "220"},
      {"icarus.packet_credit", "0.5"},
      {"icarus.service_price", "2.3"},
      {"icarus.ifn", "5"},
      {"icarus.edp_th", "0.85"},
      {"gtft.generosity", "0.1"},
      {"gtft.window", "5"},
      {"anp.a", "1"},
      {"anp.b", "1"},
      {"region.lambda_points", "101"},
      {"region.csi", "global"},
      {"region.restarts", "1"},
      {"region.eta", "1e-9"},
      {"region.max_iters", "200"},
      {"region.oracle", "false"},
      {"region.oracle_max_pairs", "1000000"},
      {"region.theta_file", ""},
      {"equilibrium.instances", "10"},
      {"equilibrium.eps_list", "0,0.1,0.2"},
      {"equilibrium.verify", "false"},
      {"equilibrium.runs", "200"},
      {"equilibrium.margin", "0.05"},
      {"equilibrium.taus", "1,2,3"},
      {"equilibrium.ds", "0.25,0.5,1"},
      {"fwd.fractions", "0,0.25,0.5,0.75,1"},
      {"fwd.strategies", "sara,icarus,gtft"},
      {"epsweep.eps_list", "0,0.1,0.2,0.3,0.5"},
      {"epsweep.strategies", "sara,icarus"},
      {"anp.n_list", "10,20,50"},
      {"anp.strategies", "sara,icarus,gtft"},
      {"anp.spectral_eff", "3"},
      {"anp.mean_mode", "path_loss"},
      {"quant.h_list", "4,10,16"},
      {"quant.h_ref", "24"},
      {"quant.frames", "2000"},
      {"quant.seeds", "8"},
      {"quant.csi", "local"},
  };
  return keys;
}

SignalKind csi_from_string(const std::string& s, const std::string& what) {
  if (s == "global") return SignalKind::Global;
  if (s == "local") return SignalKind::Local;
  if (s == "none") return SignalKind::None;
  if (s == "custom") return SignalKind::Custom;
  throw std::runtime_error(what + ": unknown CSI kind '" + s +
                           "' (global|local|none|custom)");
}

}  // namespace

GameParams game_params_from(const Config& cfg) {
  GameParams p;
  p.alpha = cfg.get_double("game.alpha", p.alpha);
  p.sigma2 = cfg.get_double("game.sigma2", p.sigma2);
  p.spectral_eff = cfg.get_double("game.spectral_eff", p.spectral_eff);
  std::string phi = cfg.get_string("game.phi", "exp_rate");
  if (phi == "exp_rate")
    p.phi_kind = EfficiencyModel::ExpRate;
  else if (phi == "block")
    p.phi_kind = EfficiencyModel::BlockSuccess;
  else
    throw std::runtime_error("game.phi: unknown model '" + phi +
                             "' (exp_rate|block)");
  p.block_symbols = cfg.get_double("game.block_symbols", p.block_symbols);
  p.validate();
  return p;
}

PowerGrid power_grid_from(const Config& cfg) {
  return PowerGrid::uniform_db(cfg.get_int("grid.power.count", 10),
                               cfg.get_double("grid.power.min_positive", 0.01),
                               cfg.get_double("grid.power.max", 10.0));
}

ChannelGrid channel_grid_from(const Config& cfg) {
  return ChannelGrid::uniform(cfg.get_int("grid.gain.count", 10),
                              cfg.get_double("grid.gain.min", 0.04),
                              cfg.get_double("grid.gain.max", 10.0));
}

CreditParams credit_params_from(const Config& cfg) {
  CreditParams c;
  c.m0 = cfg.get_double("credit.m0", c.m0);
  c.beta = cfg.get_double("credit.beta", c.beta);
  c.mu = cfg.get_double("credit.mu", c.mu);
  c.nu = cfg.get_double("credit.nu", c.nu);
  c.validate();
  return c;
}

SimConfig sim_config_from(const Config& cfg) {
  SimConfig s;
  s.game = game_params_from(cfg);
  s.power = power_grid_from(cfg);
  s.gains = channel_grid_from(cfg);
  s.credit = credit_params_from(cfg);
  s.n_nodes = cfg.get_int("sim.nodes", s.n_nodes);
  s.area_w = cfg.get_double("sim.area_w", s.area_w);
  s.area_h = cfg.get_double("sim.area_h", s.area_h);
  s.range = cfg.get_double("sim.range", s.range);
  s.frames = cfg.get_int("sim.frames", s.frames);
  s.packet_rate = cfg.get_double("sim.packet_rate", s.packet_rate);
  s.frame_seconds = cfg.get_double("sim.frame_seconds", s.frame_seconds);
  s.selfish_fraction = cfg.get_double("sim.selfish_fraction", s.selfish_fraction);
  s.selfish_initial_rate =
      cfg.get_double("sim.selfish_initial_rate", s.selfish_initial_rate);
  s.strategy = strategy_kind_from_string(cfg.get_string("sim.strategy", "sara"));
  s.epsilon = cfg.get_double("monitor.epsilon", s.epsilon);
  std::string rule = cfg.get_string("monitor.drop_rule", "min_action");
  if (rule == "min_action")
    s.drop_rule = DropRule::MinAction;
  else if (rule == "no_coop_power")
    s.drop_rule = DropRule::NoCoopPower;
  else
    throw std::runtime_error("monitor.drop_rule: unknown rule '" + rule +
                             "' (min_action|no_coop_power)");
  s.path_loss.constant = cfg.get_double("path_loss.const", 1000.0);
  s.path_loss.kappa = cfg.get_double("path_loss.kappa", 5.0);
  std::string mode = cfg.get_string("sim.mean_mode", "unit");
  if (mode == "unit")
    s.mean_mode = ChannelMeanMode::Unit;
  else if (mode == "path_loss")
    s.mean_mode = ChannelMeanMode::PathLoss;
  else
    throw std::runtime_error("sim.mean_mode: unknown mode '" + mode +
                             "' (unit|path_loss)");
  s.csi = csi_from_string(cfg.get_string("sim.csi", "local"), "sim.csi");
  if (s.csi == SignalKind::Custom)
    throw std::runtime_error("sim.csi: custom tables apply to the region "
                             "experiment (region.theta_file), not the simulator");
  s.topology_draws = cfg.get_int("sim.topology_draws", s.topology_draws);
  s.max_topology_attempts =
      cfg.get_int("sim.max_topology_attempts", s.max_topology_attempts);
  s.lambda = cfg.get_double("sim.lambda", s.lambda);
  s.policy_restarts = cfg.get_int("sim.policy_restarts", s.policy_restarts);
  s.policy_buckets = cfg.get_int("sim.policy_buckets", s.policy_buckets);
  s.icarus.initial_credit =
      cfg.get_double("icarus.initial_credit", s.icarus.initial_credit);
  s.icarus.packet_credit =
      cfg.get_double("icarus.packet_credit", s.icarus.packet_credit);
  s.icarus.service_price =
      cfg.get_double("icarus.service_price", s.icarus.service_price);
  s.icarus.ifn = cfg.get_int("icarus.ifn", s.icarus.ifn);
  s.icarus.edp_th = cfg.get_double("icarus.edp_th", s.icarus.edp_th);
  s.gtft_generosity = cfg.get_double("gtft.generosity", s.gtft_generosity);
  s.gtft_window = cfg.get_int("gtft.window", s.gtft_window);
  s.anp_a = cfg.get_double("anp.a", s.anp_a);
  s.anp_b = cfg.get_double("anp.b", s.anp_b);
  s.validate();
  return s;
}

ValidationReport validate_config(const Config& cfg) {
  ValidationReport rep;
  std::set<std::string> known;
  for (const auto& [k, v] : known_keys()) known.insert(k);
  for (const auto& [k, e] : cfg.entries())
    if (!known.count(k))
      rep.errors.push_back(cfg.where(k) + ": unknown key");

  try {
    SimConfig s = sim_config_from(cfg);
    if (!s.credit.sufficiency_ok())
      rep.warnings.push_back(
          "credit.mu < 2*credit.beta: the sufficient condition that nodes "
          "always have enough credits is violated");
    if (s.epsilon > 0.4)
      rep.warnings.push_back(
          "monitor.epsilon close to 0.5: monitoring carries almost no "
          "information");
  } catch (const std::exception& ex) {
    rep.errors.push_back(ex.what());
  }

  std::ostringstream eff;
  for (const auto& [k, dflt] : known_keys())
    eff << k << " = " << cfg.get_string(k, dflt) << "\n";
  rep.effective = eff.str();
  return rep;
}

std::vector<TwoNodeScenario> equilibrium_instances(int count, double eps,
                                                   const Rng& rng) {
  std::vector<TwoNodeScenario> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    GameParams game;
    static const double alphas[5] = {0.006, 0.0075, 0.0085, 0.009, 0.0095};
    game.alpha = alphas[i % 5];
    game.spectral_eff = 3.0;  // makes the free-ride incentive real
    PowerGrid pg(std::vector<double>{0.5, 10.0});
    bool rich = (i / 5) % 2 == 1;
    ChannelGrid cg = rich ? ChannelGrid(std::vector<double>{0.5, 1.5})
                          : ChannelGrid(std::vector<double>{1.0});
    SignalKind csi = rich ? SignalKind::Local : SignalKind::None;
    CreditParams credit;  // default credit parameters
    out.push_back(TwoNodeScenario::build(pg, cg, game, csi, credit, eps,
                                         {1, 1, 1, 1}, 0.5,
                                         rng.child(0x1257u, i)));
  }
  return out;
}

const std::vector<std::string>& known_experiments() {
  static const std::vector<std::string> ids = {
      "region",          "equilibrium",       "forwarding-vs-selfish",
      "forwarding-vs-eps", "anp-vs-N",        "quantization-loss"};
  return ids;
}

namespace {

void write_manifest(const ExperimentSpec& spec, const std::string& schema,
                    const std::vector<std::string>& outputs) {
  std::string dump = spec.config.dump();
  std::ostringstream body;
  body << "experiment = " << spec.experiment << "\n";
  body << "seed = " << spec.seed << "\n";
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a(dump)));
  body << "config_fnv1a = " << hash << "\n";
  body << "schema = " << schema << "\n";
  for (const auto& f : outputs) body << "output = " << f << "\n";
  body << "--- config ---\n" << dump;
  std::string path = spec.out_dir + "/" + spec.experiment + "-" +
                     std::to_string(spec.seed) + ".manifest.txt";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << body.str();
}

std::string csv_path(const ExperimentSpec& spec, const std::string& suffix = "") {
  return spec.out_dir + "/" + spec.experiment + suffix + "-" +
         std::to_string(spec.seed) + ".csv";
}

int run_region(const ExperimentSpec& spec) {
  const Config& cfg = spec.config;
  GameParams game = game_params_from(cfg);
  PowerGrid pg = power_grid_from(cfg);
  ChannelGrid cg = channel_grid_from(cfg);
  GameTables tables = build_game_tables(pg, cg, game);
  SignalKind csi = csi_from_string(cfg.get_string("region.csi", "global"),
                                   "region.csi");
  SignalStructure theta;
  if (csi == SignalKind::Custom) {
    std::string path = cfg.get_string("region.theta_file", "");
    if (path.empty())
      throw std::runtime_error("region.csi = custom needs region.theta_file");
    theta = load_signal_structure_file(path);
    if (theta.state_count() != state_count(cg))
      throw std::runtime_error("region.theta_file: table rows != H^4 states");
  } else {
    theta = make_signal_structure(csi, cg);
  }
  StateDistribution rho =
      StateDistribution::quantized_rayleigh(cg, {1, 1, 1, 1});

  Algorithm1Options opts;
  opts.eta = cfg.get_double("region.eta", opts.eta);
  opts.max_iters = cfg.get_int("region.max_iters", opts.max_iters);
  int points = cfg.get_int("region.lambda_points", 101);
  int restarts = cfg.get_int("region.restarts", 1);
  std::vector<double> lambdas = uniform_lambda_grid(points);

  Rng rng(spec.seed);
  std::vector<FrontierPoint> frontier = pareto_sweep(
      lambdas, rho, theta, tables, opts, restarts, rng, spec.workers);

  std::string schema = "lambda,Eu1,Eu2,W,converged,iters";
  CsvWriter csv(csv_path(spec),
                {"lambda", "Eu1", "Eu2", "W", "converged", "iters"});
  for (const auto& pt : frontier)
    csv.write_row({csv_num(pt.lambda), csv_num(pt.eu1), csv_num(pt.eu2),
                   csv_num(pt.w), pt.converged ? "1" : "0",
                   std::to_string(pt.iters)});
  std::vector<std::string> outputs = {csv_path(spec)};

  if (cfg.get_bool("region.oracle", false)) {
    double guard = cfg.get_double("region.oracle_max_pairs", 1e6);
    CsvWriter ocsv(csv_path(spec, "-oracle"), {"lambda", "Eu1", "Eu2", "W"});
    for (double l : lambdas) {
      OracleResult res = brute_force_oracle(l, rho, theta, tables, guard);
      ocsv.write_row(
          {csv_num(l), csv_num(res.eu1), csv_num(res.eu2), csv_num(res.w)});
    }
    outputs.push_back(csv_path(spec, "-oracle"));
  }
  write_manifest(spec, schema, outputs);
  return 0;
}

int run_equilibrium(const ExperimentSpec& spec) {
  const Config& cfg = spec.config;
  int count = cfg.get_int("equilibrium.instances", 10);
  std::vector<double> eps_list =
      cfg.get_double_list("equilibrium.eps_list", {0.0, 0.1, 0.2});
  bool verify = cfg.get_bool("equilibrium.verify", false);
  int runs = cfg.get_int("equilibrium.runs", 200);
  double margin = cfg.get_double("equilibrium.margin", 0.05);
  std::vector<int> taus = cfg.get_int_list("equilibrium.taus", {1, 2, 3});
  std::vector<double> ds = cfg.get_double_list("equilibrium.ds", {0.25, 0.5, 1.0});

  std::vector<std::string> header = {"instance", "eps",       "c1",
                                     "r1",       "c2",        "r2",
                                     "delta_min", "feasible"};
  if (verify) {
    header.push_back("no_deviation_above");
    header.push_back("deviation_found_below");
  }
  std::string schema;
  for (std::size_t i = 0; i < header.size(); ++i)
    schema += (i ? "," : "") + header[i];
  CsvWriter csv(csv_path(spec), header);

  Rng rng(spec.seed);
  for (double eps : eps_list) {
    std::vector<TwoNodeScenario> instances =
        equilibrium_instances(count, eps, rng);
    for (int i = 0; i < count; ++i) {
      const TwoNodeScenario& sc = instances[i];
      EquilibriumReport rep = sc.equilibrium();
      std::vector<std::string> row = {
          std::to_string(i),      csv_num(eps),
          csv_num(rep.gaps.c1),   csv_num(rep.gaps.r1),
          csv_num(rep.gaps.c2),   csv_num(rep.gaps.r2),
          csv_num(rep.delta_min), rep.feasible ? "1" : "0"};
      if (verify) {
        Rng vr = rng.child(0xF0u, i);
        auto all_safe = [&](double delta) {
          int horizon = deviation_horizon(delta);
          for (int tau : taus)
            for (double d : ds)
              if (!verify_one_shot_deviation(sc, delta, tau, d, horizon, runs,
                                             vr.child(tau, int(d * 100))))
                return false;
          return true;
        };
        bool above = true, below_found = false;
        if (rep.delta_min + margin < 1.0) above = all_safe(rep.delta_min + margin);
        bool has_incentive = rep.gaps.c1 > 0 || rep.gaps.c2 > 0;
        if (has_incentive) {
          double delta = std::min(0.95, rep.delta_min - margin);
          if (delta >= 0.0) below_found = !all_safe(delta);
        }
        row.push_back(above ? "1" : "0");
        row.push_back(below_found ? "1" : "0");
      }
      csv.write_row(row);
    }
  }
  write_manifest(spec, schema, {csv_path(spec)});
  return 0;
}

SimConfig sim_for_network(const ExperimentSpec& spec) {
  SimConfig sim = sim_config_from(spec.config);
  sim.seed = spec.seed;
  sim.workers = spec.workers;
  if (spec.full_scale && !spec.config.has("sim.topology_draws"))
    sim.topology_draws = 1200;
  return sim;
}

int run_forwarding_vs_selfish(const ExperimentSpec& spec) {
  const Config& cfg = spec.config;
  std::vector<double> fractions =
      cfg.get_double_list("fwd.fractions", {0, 0.25, 0.5, 0.75, 1});
  std::vector<std::string> strategies =
      cfg.get_string_list("fwd.strategies", {"sara", "icarus", "gtft"});
  std::string schema =
      "selfish_fraction,strategy,forwarding_rate,mean_utility,anp_watts";
  CsvWriter csv(csv_path(spec), {"selfish_fraction", "strategy",
                                 "forwarding_rate", "mean_utility",
                                 "anp_watts"});
  for (const auto& name : strategies) {
    StrategyKind kind = strategy_kind_from_string(name);
    for (double f : fractions) {
      SimConfig sim = sim_for_network(spec);
      sim.strategy = kind;
      sim.selfish_fraction = f;
      Metrics m = run_simulation(sim);
      csv.write_row({csv_num(f), name, csv_num(m.forwarding_rate),
                     csv_num(m.mean_pair_utility), csv_num(m.anp_watts)});
    }
  }
  write_manifest(spec, schema, {csv_path(spec)});
  return 0;
}

int run_forwarding_vs_eps(const ExperimentSpec& spec) {
  const Config& cfg = spec.config;
  std::vector<double> eps_list =
      cfg.get_double_list("epsweep.eps_list", {0, 0.1, 0.2, 0.3, 0.5});
  std::vector<std::string> strategies =
      cfg.get_string_list("epsweep.strategies", {"sara", "icarus"});
  std::string schema = "epsilon,strategy,forwarding_rate";
  CsvWriter csv(csv_path(spec), {"epsilon", "strategy", "forwarding_rate"});
  for (const auto& name : strategies) {
    StrategyKind kind = strategy_kind_from_string(name);
    for (double eps : eps_list) {
      SimConfig sim = sim_for_network(spec);
      sim.strategy = kind;
      sim.epsilon = eps;
      Metrics m = run_simulation(sim);
      csv.write_row({csv_num(eps), name, csv_num(m.forwarding_rate)});
    }
  }
  write_manifest(spec, schema, {csv_path(spec)});
  return 0;
}

int run_anp_vs_n(const ExperimentSpec& spec) {
  const Config& cfg = spec.config;
  std::vector<int> n_list = cfg.get_int_list("anp.n_list", {10, 20, 50});
  std::vector<std::string> strategies =
      cfg.get_string_list("anp.strategies", {"sara", "icarus", "gtft"});
  std::string schema = "n_nodes,strategy,anp_watts,anp_dbm,forwarding_rate";
  CsvWriter csv(csv_path(spec), {"n_nodes", "strategy", "anp_watts",
                                 "anp_dbm", "forwarding_rate"});
  for (const auto& name : strategies) {
    StrategyKind kind = strategy_kind_from_string(name);
    for (int n : n_list) {
      SimConfig sim = sim_for_network(spec);
      sim.strategy = kind;
      sim.n_nodes = n;
      // The energy study adapts to link quality: path-loss means and the
      // higher spectral efficiency unless the config pins them.
      if (!cfg.has("sim.mean_mode")) {
        std::string mode = cfg.get_string("anp.mean_mode", "path_loss");
        sim.mean_mode = mode == "unit" ? ChannelMeanMode::Unit
                                       : ChannelMeanMode::PathLoss;
      }
      if (!cfg.has("game.spectral_eff"))
        sim.game.spectral_eff = cfg.get_double("anp.spectral_eff", 3.0);
      if (!cfg.has("sim.max_topology_attempts"))
        sim.max_topology_attempts = 100000;  // small n rejects a lot
      Metrics m = run_simulation(sim);
      csv.write_row({std::to_string(n), name, csv_num(m.anp_watts),
                     csv_num(m.anp_dbm), csv_num(m.forwarding_rate)});
    }
  }
  write_manifest(spec, schema, {csv_path(spec)});
  return 0;
}

int run_quantization(const ExperimentSpec& spec) {
  const Config& cfg = spec.config;
  QuantizationConfig qc;
  qc.game = game_params_from(cfg);
  qc.power = power_grid_from(cfg);
  qc.gain_lo = cfg.get_double("grid.gain.min", 0.04);
  qc.gain_hi = cfg.get_double("grid.gain.max", 10.0);
  qc.csi = csi_from_string(cfg.get_string("quant.csi", "local"), "quant.csi");
  qc.lambda = cfg.get_double("sim.lambda", 0.5);
  qc.credit = credit_params_from(cfg);
  qc.h_values = cfg.get_int_list("quant.h_list", {4, 10, 16});
  qc.h_reference = cfg.get_int("quant.h_ref", 24);
  qc.frames = cfg.get_int("quant.frames", 2000);
  qc.seeds = cfg.get_int("quant.seeds", 8);
  qc.seed = spec.seed;
  qc.workers = spec.workers;
  std::vector<QuantizationRow> rows = quantization_loss_experiment(qc);
  std::string schema = "h,social_welfare,loss";
  CsvWriter csv(csv_path(spec), {"h", "social_welfare", "loss"});
  for (const auto& r : rows)
    csv.write_row({std::to_string(r.h), csv_num(r.social_welfare),
                   csv_num(r.loss)});
  write_manifest(spec, schema, {csv_path(spec)});
  return 0;
}

}  // namespace

int run_experiment(const ExperimentSpec& spec) {
  const auto& ids = known_experiments();
  if (std::find(ids.begin(), ids.end(), spec.experiment) == ids.end()) {
    std::cerr << "unknown experiment '" << spec.experiment << "'; expected one of:";
    for (const auto& id : ids) std::cerr << ' ' << id;
    std::cerr << "\n";
    return 2;
  }
  ValidationReport rep = validate_config(spec.config);
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  if (!rep.ok()) {
    for (const auto& e : rep.errors) std::cerr << "error: " << e << "\n";
    return 1;
  }
  try {
    std::filesystem::create_directories(spec.out_dir);
    if (spec.experiment == "region") return run_region(spec);
    if (spec.experiment == "equilibrium") return run_equilibrium(spec);
    if (spec.experiment == "forwarding-vs-selfish")
      return run_forwarding_vs_selfish(spec);
    if (spec.experiment == "forwarding-vs-eps") return run_forwarding_vs_eps(spec);
    if (spec.experiment == "anp-vs-N") return run_anp_vs_n(spec);
    if (spec.experiment == "quantization-loss") return run_quantization(spec);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"forwarding-games experiments: utility region, SARA equilibrium "
               "checks, and network simulations"};
  std::string config_path, experiment, out_dir = ".";
  std::uint64_t seed = 1;
  int workers = 1;
  bool full_scale = false, validate_only = false;
  app.add_option("--config", config_path, "experiment config file");
  app.add_option("--experiment", experiment,
                 "region | equilibrium | forwarding-vs-selfish | "
                 "forwarding-vs-eps | anp-vs-N | quantization-loss");
  app.add_option("--seed", seed, "master seed (default 1)");
  app.add_option("--workers", workers, "parallel workers (default 1)");
  app.add_option("--out", out_dir, "output directory (default .)");
  app.add_flag("--full-scale", full_scale,
               "paper-scale runs (1200 topology draws)");
  app.add_flag("--validate", validate_only,
               "validate the config, print the effective settings, exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Config cfg;
  if (!config_path.empty()) {
    try {
      cfg = Config::parse_file(config_path);
    } catch (const std::exception& ex) {
      std::cerr << "error: " << ex.what() << "\n";
      return 1;
    }
  }

  if (validate_only) {
    ValidationReport rep = validate_config(cfg);
    for (const auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
    for (const auto& e : rep.errors) std::cout << "error: " << e << "\n";
    std::cout << rep.effective;
    return rep.ok() ? 0 : 1;
  }

  if (experiment.empty()) {
    std::cerr << "error: --experiment is required (see --help)\n";
    return 2;
  }
  if (workers < 1) {
    std::cerr << "error: --workers must be >= 1\n";
    return 2;
  }

  ExperimentSpec spec;
  spec.experiment = experiment;
  spec.config = std::move(cfg);
  spec.out_dir = out_dir;
  spec.seed = seed;
  spec.workers = workers;
  spec.full_scale = full_scale;
  return run_experiment(spec);
}

}  // namespace fgame
