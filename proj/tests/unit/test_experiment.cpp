#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "symvqe/errors.hpp"
#include "symvqe/experiment.hpp"

using namespace symvqe;

namespace {

std::string temp_dir(const std::string& name) {
  const auto d = std::filesystem::temp_directory_path() / ("symvqe_test_" + name);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  apply_config_text(c,
                    "lx = 2\nly = 2\ndepth = 1\nkrylov_dim = 1\nmax_iterations = 3\n"
                    "n_seeds = 2\ninit_range = 0.5\n",
                    "test");
  return c;
}

}  // namespace

TEST(Config, ParsesKeyValueText) {
  ExperimentConfig c;
  apply_config_text(c,
                    "# comment line\n\n  lx = 6   # trailing comment\nly=1\nu_hubbard = 8.5\n"
                    "project_spin = false\nansatz = hva\noptimizer = gd\nrichardson = no\n",
                    "inline");
  EXPECT_EQ(c.lx, 6);
  EXPECT_EQ(c.ly, 1);
  EXPECT_EQ(c.u_hubbard, 8.5);
  EXPECT_FALSE(c.project_spin);
  EXPECT_EQ(c.ansatz, AnsatzKind::Hva);
  EXPECT_EQ(c.optimizer, OptimizerKind::Gd);
  EXPECT_FALSE(c.richardson);
  EXPECT_EQ(c.tau(), 0.005);
  c.set("ansatz", "efswap");
  EXPECT_EQ(c.tau(), 0.025);
  c.set("learning_rate", "0.1");
  EXPECT_EQ(c.tau(), 0.1);
}

TEST(Config, RejectsBadInput) {
  ExperimentConfig c;
  EXPECT_THROW(apply_config_text(c, "no_such_key = 1\n", "x"), ConfigError);
  EXPECT_THROW(apply_config_text(c, "lx 4\n", "x"), ConfigError);
  EXPECT_THROW(apply_config_text(c, "lx = four\n", "x"), ConfigError);
  EXPECT_THROW(apply_config_text(c, "delta = 0.05x\n", "x"), ConfigError);
  EXPECT_THROW(apply_config_text(c, "richardson = maybe\n", "x"), ConfigError);
  EXPECT_THROW(apply_config_text(c, "ansatz = ucc\n", "x"), ConfigError);
  try {
    apply_config_text(c, "lx = 4\n\nbogus = 1\n", "file.cfg");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("file.cfg:3"), std::string::npos);
  }
  ExperimentConfig v;
  v.krylov_dim = 0;
  EXPECT_THROW(v.validate(), ConfigError);
  v = ExperimentConfig{};
  v.learning_rate = -1.0;
  EXPECT_THROW(v.validate(), ConfigError);
  v = ExperimentConfig{};
  v.n_seeds = 0;
  EXPECT_THROW(v.validate(), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/path.cfg"), ConfigError);
  EXPECT_NO_THROW(ExperimentConfig{}.validate());
}

TEST(Config, DumpRoundTrips) {
  ExperimentConfig c = small_config();
  c.set("delta", "0.025");
  c.set("warm_start_path", "/tmp/x.txt");
  const std::string text = c.to_text();
  ExperimentConfig d;
  apply_config_text(d, text, "dump");
  EXPECT_EQ(d.to_text(), text);
  // Every documented key appears exactly once.
  std::istringstream lines(text);
  std::string line;
  std::vector<std::string> seen;
  while (std::getline(lines, line)) seen.push_back(line.substr(0, line.find(" = ")));
  EXPECT_EQ(seen, ExperimentConfig::keys());
}

TEST(Campaign, ZeroIterationsGiveInitialRecord) {
  ExperimentConfig c = small_config();
  c.n_seeds = 1;
  c.max_iterations = 0;
  const ExperimentContext ctx(c);
  const CampaignResult r = run_campaign(ctx);
  ASSERT_EQ(r.seeds.size(), 1u);
  ASSERT_EQ(r.seeds[0].history.size(), 1u);
  EXPECT_EQ(r.seeds[0].history[0].x, 0);
  EXPECT_EQ(r.seeds[0].theta, r.seeds[0].theta0);
  ASSERT_TRUE(r.e_exact.has_value());
  EXPECT_GE(r.seeds[0].history[0].e0, *r.e_exact - 1e-9);
}

TEST(Campaign, DeterministicAcrossRunsAndParallelism) {
  ExperimentConfig c = small_config();
  const ExperimentContext ctx(c);
  const CampaignResult a = run_campaign(ctx);
  const CampaignResult b = run_campaign(ctx);
  c.parallelism = 2;
  const ExperimentContext ctx2(c);
  const CampaignResult p = run_campaign(ctx2);
  for (const CampaignResult* other : {&b, &p}) {
    ASSERT_EQ(a.seeds.size(), other->seeds.size());
    for (std::size_t s = 0; s < a.seeds.size(); ++s) {
      EXPECT_EQ(a.seeds[s].theta, other->seeds[s].theta);
      ASSERT_EQ(a.seeds[s].history.size(), other->seeds[s].history.size());
      for (std::size_t x = 0; x < a.seeds[s].history.size(); ++x) {
        EXPECT_EQ(a.seeds[s].history[x].e0, other->seeds[s].history[x].e0);
        EXPECT_EQ(a.seeds[s].history[x].fidelity, other->seeds[s].history[x].fidelity);
        EXPECT_EQ(a.seeds[s].history[x].grad_norm, other->seeds[s].history[x].grad_norm);
      }
    }
  }
  EXPECT_NE(a.seeds[0].theta0, a.seeds[1].theta0);
}

TEST(Campaign, EmitsCsvThatRoundTrips) {
  ExperimentConfig c = small_config();
  const ExperimentContext ctx(c);
  const CampaignResult r = run_campaign(ctx);
  const std::string dir = temp_dir("emit");
  emit_results(r, dir);
  const std::string csv = slurp(dir + "/seed_0.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,E0,fidelity,S2,eta2,grad_norm,wall_time_ms");
  for (const auto& s : r.seeds) {
    const auto back = read_trajectory_csv(dir + "/seed_" + std::to_string(s.seed) + ".csv");
    ASSERT_EQ(back.size(), s.history.size());
    for (std::size_t x = 0; x < back.size(); ++x) {
      EXPECT_EQ(back[x].x, s.history[x].x);
      EXPECT_EQ(back[x].e0, s.history[x].e0);
      EXPECT_EQ(back[x].fidelity, s.history[x].fidelity);
      EXPECT_EQ(back[x].s2, s.history[x].s2);
      EXPECT_EQ(back[x].eta2, s.history[x].eta2);
      EXPECT_EQ(back[x].grad_norm, s.history[x].grad_norm);
      EXPECT_EQ(back[x].wall_ms, s.history[x].wall_ms);
    }
  }
  // The seed mean is recomputable from the per-seed files.
  const auto mean = read_trajectory_csv(dir + "/mean.csv");
  const auto s0 = read_trajectory_csv(dir + "/seed_0.csv");
  const auto s1 = read_trajectory_csv(dir + "/seed_1.csv");
  for (std::size_t x = 0; x < mean.size(); ++x) EXPECT_EQ(mean[x].e0, (s0[x].e0 + s1[x].e0) / 2);
  const std::string summary = slurp(dir + "/summary.txt");
  EXPECT_NE(summary.find("\ne_exact = "), std::string::npos);
  EXPECT_NE(summary.find("config.lx = 2"), std::string::npos);

  ExperimentConfig no_exact = small_config();
  no_exact.compute_exact = false;
  const ExperimentContext ctx2(no_exact);
  const std::string dir2 = temp_dir("emit_noexact");
  emit_results(run_campaign(ctx2), dir2);
  EXPECT_EQ(slurp(dir2 + "/summary.txt").find("\ne_exact = "), std::string::npos);
}

TEST(Campaign, WarmStartUsesStoredOptima) {
  ExperimentConfig c = small_config();
  const ExperimentContext ctx(c);
  const CampaignResult first = run_campaign(ctx);
  const std::string dir = temp_dir("warm");
  emit_results(first, dir);

  ExperimentConfig w = small_config();
  w.krylov_dim = 2;
  w.max_iterations = 0;
  w.warm_start_path = dir + "/optima.txt";
  const ExperimentContext wctx(w);
  const CampaignResult second = run_campaign(wctx);
  for (std::size_t s = 0; s < second.seeds.size(); ++s) {
    EXPECT_EQ(second.seeds[s].theta0, first.seeds[s].theta);
    // Expanding the subspace cannot raise the energy.
    EXPECT_LE(second.seeds[s].history[0].e0, first.seeds[s].history.back().e0 + 1e-12);
  }

  w.n_seeds = 3;
  const ExperimentContext bad(w);
  EXPECT_THROW(run_campaign(bad), ConfigError);
  w.n_seeds = 2;
  w.depth = 2;
  const ExperimentContext wrong_len(w);
  EXPECT_THROW(run_campaign(wrong_len), ConfigError);
}

TEST(Variance, OneRowPerDepth) {
  ExperimentConfig c = small_config();
  c.project_spatial = c.project_spin = c.project_eta = false;
  const ExperimentContext ctx(c);
  const auto rows = run_variance_diagnostics(ctx, {1, 2}, 2);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].depth, 1);
  EXPECT_EQ(rows[1].depth, 2);
  const std::string dir = temp_dir("variance");
  write_variance_csv(rows, dir + "/v.csv");
  const std::string csv = slurp(dir + "/v.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Exact, LadderGroundStateEnergy) {
  ExperimentConfig c;
  EXPECT_NEAR(exact_energy(c), -13.01250315, 1e-7);
}
