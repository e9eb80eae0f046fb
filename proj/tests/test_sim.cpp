#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "fgame/csv.hpp"
#include "fgame/experiments.hpp"
#include "fgame/simulator.hpp"

using namespace fgame;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

SimConfig tiny_sim() {
  SimConfig cfg;
  cfg.n_nodes = 12;
  cfg.topology_draws = 4;
  cfg.frames = 10;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("topology: trivial acceptance, impossible ranges, invariants") {
  Rng rng(1);
  Topology two = generate_topology(2, 1000, 1000, 1e6, 10, rng);
  CHECK(two.attempts == 1);
  CHECK(two.pairs.size() == 1);

  CHECK_THROWS_WITH_AS(generate_topology(3, 1000, 1000, 0.0, 50, rng),
                       doctest::Contains("50 attempts"), std::runtime_error);

  int accepted_attempts = 0;
  double degree = 0.0;
  for (int i = 0; i < 20; ++i) {
    Topology t = generate_topology(50, 1000, 1000, 150, 10000, rng);
    accepted_attempts += t.attempts;
    degree += t.mean_degree(50);
    std::vector<int> deg(50, 0);
    for (std::size_t p = 0; p < t.pairs.size(); ++p) {
      CHECK(t.dist[p] <= 150.0);
      deg[t.pairs[p].first]++;
      deg[t.pairs[p].second]++;
    }
    for (int d : deg) CHECK(d >= 1);
  }
  // Monte-Carlo measurement: acceptance rate strictly positive, mean degree
  // in a sane band for n=50, range=150 in 1000x1000.
  CHECK(accepted_attempts >= 20);
  CHECK(degree / 20 > 2.0);
  CHECK(degree / 20 < 6.0);
}

TEST_CASE("pairwise game: full cooperation and full defection corners") {
  PowerGrid pg(std::vector<double>{0.0, 10.0});
  ChannelGrid cg(std::vector<double>{0.5, 2.0});
  GameParams params;
  GameTables tables = build_game_tables(pg, cg, params);
  StateDistribution rho = StateDistribution::quantized_rayleigh(cg, {1, 1, 1, 1});
  SignalStructure theta = make_signal_structure(SignalKind::Local, cg);
  PairScenario sc;
  sc.power = &pg;
  sc.gains = &cg;
  sc.game = &params;
  sc.tables = &tables;
  sc.rho = &rho;
  sc.theta = &theta;
  sc.packets = 50;

  std::vector<int> all_max(theta.s1_count, action_count(pg));
  FixedPolicyStrategy c1(all_max, action_count(pg));
  FixedPolicyStrategy c2(all_max, action_count(pg));
  PairRunResult coop = run_pairwise_game(sc, c1, c2, 15, Rng(3));
  CHECK(coop.forwarding_rate() == 1.0);

  AlwaysDefectStrategy d1(action_count(pg)), d2(action_count(pg));
  PairRunResult defect = run_pairwise_game(sc, d1, d2, 15, Rng(4));
  CHECK(defect.forwarding_rate() == 0.0);
  CHECK(defect.utility_sum == 0.0);  // static NE payoff with P_min = 0
  CHECK(defect.radiated_sum == 0.0);
}

TEST_CASE("anp: constant floor and the single-node example") {
  auto [floor_w, floor_dbm] = anp(0.0, 50, 1.0, 1.0);
  CHECK(floor_w == doctest::Approx(50.0));
  CHECK(floor_dbm == doctest::Approx(46.98970004336).epsilon(1e-9));
  auto [w, dbm] = anp(20.0, 1, 1.0, 0.0);
  CHECK(w == doctest::Approx(20.0));
  CHECK(dbm == doctest::Approx(43.0102999566).epsilon(1e-9));
  CHECK_THROWS(anp(1.0, 1, -1.0, 0.0));
}

TEST_CASE("run_simulation: cooperative network forwards everything") {
  SimConfig cfg = tiny_sim();
  cfg.strategy = StrategyKind::FullCooperation;
  cfg.selfish_fraction = 0.0;
  cfg.topology_draws = 1;
  cfg.frames = 1;
  Metrics m = run_simulation(cfg);
  CHECK(m.forwarding_rate == 1.0);
  CHECK(m.anp_watts >= cfg.n_nodes * cfg.anp_b);
}

TEST_CASE("run_simulation: all-defect network sits at the power floor") {
  SimConfig cfg = tiny_sim();
  cfg.strategy = StrategyKind::AlwaysDefect;
  Metrics m = run_simulation(cfg);
  CHECK(m.forwarding_rate == 0.0);
  CHECK(m.anp_watts == doctest::Approx(cfg.n_nodes * cfg.anp_b));
  CHECK(m.mean_pair_utility == 0.0);
}

TEST_CASE("run_simulation: identical seeds and any worker count match exactly") {
  SimConfig cfg = tiny_sim();
  cfg.strategy = StrategyKind::Sara;
  cfg.selfish_fraction = 0.5;
  cfg.epsilon = 0.1;
  cfg.workers = 1;
  Metrics a = run_simulation(cfg);
  cfg.workers = 8;
  Metrics b = run_simulation(cfg);
  CHECK(a.forwarding_rate == b.forwarding_rate);
  CHECK(a.anp_watts == b.anp_watts);
  CHECK(a.mean_pair_utility == b.mean_pair_utility);
  CHECK(a.credit_min == b.credit_min);
  CHECK(a.frame_forwarding == b.frame_forwarding);

  cfg.seed = 8;
  Metrics c = run_simulation(cfg);
  CHECK(a.forwarding_rate != c.forwarding_rate);  // seed actually matters
}

TEST_CASE("quantization loss: coarse grids lose more on continuous channels") {
  QuantizationConfig qc;
  qc.h_values = {4, 16};
  qc.h_reference = 20;
  qc.frames = 400;
  qc.seeds = 3;
  qc.workers = 2;
  auto rows = quantization_loss_experiment(qc);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].h == 4);
  CHECK(rows[1].h == 16);
  CHECK(rows[0].loss >= rows[1].loss);
  CHECK(rows[1].loss < 0.05);
}

// ---------------------------------------------------------------------------
// cli-experiments

TEST_CASE("region experiment: desk-scale csv, schema, and reproducibility") {
  fs::path out = fs::temp_directory_path() / "fgame_region_exp";
  fs::remove_all(out);
  ExperimentSpec spec;
  spec.experiment = "region";
  spec.config = Config::parse_string(
      "grid.power.count = 2\n"
      "grid.gain.count = 2\n"
      "region.lambda_points = 11\n"
      "region.csi = global\n");
  spec.out_dir = out.string();
  spec.seed = 5;
  spec.workers = 2;

  auto t0 = std::chrono::steady_clock::now();
  CHECK(run_experiment(spec) == 0);
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  CHECK(secs < 10.0);  // desk-scale contract

  fs::path csv = out / "region-5.csv";
  auto rows = read_csv(csv.string());
  REQUIRE(rows.size() == 12);  // header + 11 lambdas
  CHECK(rows[0] == std::vector<std::string>{"lambda", "Eu1", "Eu2", "W",
                                            "converged", "iters"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 6);
    double lambda = std::stod(rows[i][0]);
    double e1 = std::stod(rows[i][1]);
    double e2 = std::stod(rows[i][2]);
    double w = std::stod(rows[i][3]);
    CHECK(w == doctest::Approx(lambda * e1 + (1 - lambda) * e2).epsilon(1e-9));
  }

  std::string manifest = slurp(out / "region-5.manifest.txt");
  CHECK(manifest.find("config_fnv1a = ") != std::string::npos);
  CHECK(manifest.find("schema = lambda,Eu1,Eu2,W,converged,iters") !=
        std::string::npos);

  // Same spec + seed replays byte-identically, for any worker count.
  std::string first = slurp(csv);
  spec.workers = 1;
  fs::remove(csv);
  CHECK(run_experiment(spec) == 0);
  CHECK(slurp(csv) == first);
  fs::remove_all(out);
}

TEST_CASE("region experiment rejects oversized oracle requests") {
  fs::path out = fs::temp_directory_path() / "fgame_region_oracle";
  fs::remove_all(out);
  ExperimentSpec spec;
  spec.experiment = "region";
  spec.config = Config::parse_string("region.oracle = true\n");  // default (large) grids
  spec.out_dir = out.string();
  CHECK(run_experiment(spec) == 1);  // refusal diagnostic, nonzero exit
  fs::remove_all(out);
}

TEST_CASE("region experiment accepts a custom signal table") {
  fs::path out = fs::temp_directory_path() / "fgame_region_custom";
  fs::remove_all(out);
  fs::create_directories(out);
  {
    std::ofstream theta(out / "theta.txt");
    theta << "states 1\ns1_count 2\ns2_count 1\n";
    theta << "row 0 0 0 0.5\nrow 0 1 0 0.5\n";
  }
  ExperimentSpec spec;
  spec.experiment = "region";
  spec.config = Config::parse_string(
      "grid.power.count = 2\n"
      "grid.gain.count = 1\n"
      "grid.gain.min = 1\n"
      "region.csi = custom\n"
      "region.theta_file = " +
      (out / "theta.txt").string() +
      "\n"
      "region.lambda_points = 3\n"
      "region.oracle = true\n");
  spec.out_dir = out.string();
  CHECK(run_experiment(spec) == 0);
  auto rows = read_csv((out / "region-1.csv").string());
  REQUIRE(rows.size() == 4);
  // On this tiny instance algorithm 1 must meet the enumeration oracle.
  auto oracle = read_csv((out / "region-oracle-1.csv").string());
  for (int i = 1; i <= 3; ++i)
    CHECK(std::stod(rows[i][3]) == doctest::Approx(std::stod(oracle[i][3])));
  fs::remove_all(out);
}

TEST_CASE("equilibrium experiment emits report rows") {
  fs::path out = fs::temp_directory_path() / "fgame_eq_exp";
  fs::remove_all(out);
  ExperimentSpec spec;
  spec.experiment = "equilibrium";
  spec.config = Config::parse_string(
      "equilibrium.instances = 3\n"
      "equilibrium.eps_list = 0,0.2\n");
  spec.out_dir = out.string();
  spec.seed = 2;
  CHECK(run_experiment(spec) == 0);
  auto rows = read_csv((out / "equilibrium-2.csv").string());
  REQUIRE(rows.size() == 7);  // header + 3 instances x 2 eps
  CHECK(rows[0][6] == "delta_min");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][6]) >= 0.0);
    CHECK((rows[i][7] == "0" || rows[i][7] == "1"));
  }
  fs::remove_all(out);
}

TEST_CASE("experiment runner: exit codes for usage and config errors") {
  ExperimentSpec bad;
  bad.experiment = "turbo-encabulator";
  CHECK(run_experiment(bad) == 2);

  ExperimentSpec invalid;
  invalid.experiment = "region";
  invalid.config = Config::parse_string("game.alpha = -1\n");
  CHECK(run_experiment(invalid) == 1);
}

TEST_CASE("cli: help, usage errors, and validate mode") {
  const char* help[] = {"fgame", "--help"};
  CHECK(cli_main(2, help) == 0);

  const char* unknown_flag[] = {"fgame", "--frobnicate"};
  CHECK(cli_main(2, unknown_flag) == 2);

  const char* missing[] = {"fgame"};
  CHECK(cli_main(1, missing) == 2);

  const char* unknown_exp[] = {"fgame", "--experiment", "nope"};
  CHECK(cli_main(3, unknown_exp) == 2);

  fs::path cfg = fs::temp_directory_path() / "fgame_cli_cfg.cfg";
  {
    std::ofstream f(cfg);
    f << "credit.mu = 5\ncredit.beta = 10\n";
  }
  std::string cfg_str = cfg.string();
  const char* validate[] = {"fgame", "--config", cfg_str.c_str(), "--validate"};
  CHECK(cli_main(4, validate) == 0);

  const char* missing_cfg[] = {"fgame", "--config", "/nonexistent.cfg",
                               "--experiment", "region"};
  CHECK(cli_main(5, missing_cfg) == 1);
  fs::remove(cfg);
}

TEST_CASE("forwarding experiment csv replays byte-identically across workers") {
  fs::path out = fs::temp_directory_path() / "fgame_fwd_exp";
  fs::remove_all(out);
  ExperimentSpec spec;
  spec.experiment = "forwarding-vs-eps";
  spec.config = Config::parse_string(
      "sim.nodes = 12\n"
      "sim.topology_draws = 4\n"
      "epsweep.eps_list = 0,0.3\n"
      "epsweep.strategies = sara\n");
  spec.out_dir = out.string();
  spec.seed = 9;
  spec.workers = 1;
  CHECK(run_experiment(spec) == 0);
  std::string one = slurp(out / "forwarding-vs-eps-9.csv");
  spec.workers = 8;
  CHECK(run_experiment(spec) == 0);
  CHECK(slurp(out / "forwarding-vs-eps-9.csv") == one);
  auto rows = read_csv((out / "forwarding-vs-eps-9.csv").string());
  REQUIRE(rows.size() == 3);
  fs::remove_all(out);
}
