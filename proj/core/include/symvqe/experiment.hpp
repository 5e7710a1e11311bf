#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symvqe/ansatz.hpp"
#include "symvqe/hubbard.hpp"
#include "symvqe/krylov.hpp"
#include "symvqe/ngd.hpp"
#include "symvqe/projection.hpp"
#include "symvqe/sector.hpp"
#include "symvqe/trotter.hpp"

namespace symvqe {

struct ExperimentConfig {
  // model
  int lx = 4;
  int ly = 2;
  double t = 1.0;
  double u_hubbard = 4.0;
  Labeling labeling = Labeling::SpinUniform;
  // projector
  bool project_spatial = true;
  bool project_spin = true;
  bool project_eta = true;
  int j_spin = 0;
  int j_eta = 0;
  int n_polar_spin = 4;
  int n_polar_eta = 4;
  int n_azimuth = 6;
  std::string irrep = "A1";
  ProjectorMode projector_mode = ProjectorMode::Auto;
  // ansatz
  AnsatzKind ansatz = AnsatzKind::EfSwap;
  int depth = 2;
  std::uint64_t init_seed = 1;
  double init_range = 0.05;
  // solver
  int krylov_dim = 2;
  double s_threshold = 1e-10;
  double delta = 0.05;
  bool richardson = true;
  // optimizer
  OptimizerKind optimizer = OptimizerKind::Ngd;
  std::optional<double> learning_rate;  // defaults depend on the ansatz
  int max_iterations = 1000;
  double metric_regularization = 1e-8;
  // campaign
  int n_seeds = 1;
  std::string warm_start_path;
  int parallelism = 1;
  double max_wall_seconds = 0.0;
  bool compute_exact = true;
  std::string out_dir = "results";

  // 0.025 for efswap, 0.005 for hva unless learning_rate is set.
  double tau() const;
  ProjectorSpec projector_spec() const;

  // Throws ConfigError for unknown keys and malformed values.
  void set(const std::string& key, const std::string& value);
  // Range and consistency checks across keys.
  void validate() const;
  // Every key, one `key = value` line each, in a fixed order.
  std::string to_text() const;

  static const std::vector<std::string>& keys();
};

// `key = value` lines, `#` comments and blank lines.
void apply_config_text(ExperimentConfig& c, const std::string& text, const std::string& origin);
ExperimentConfig load_config(const std::string& path);

// Everything derived from the model and projector keys, built once and
// shared read-only by all seeds.
class ExperimentContext {
 public:
  explicit ExperimentContext(const ExperimentConfig& c);
  ExperimentContext(const ExperimentContext&) = delete;
  ExperimentContext& operator=(const ExperimentContext&) = delete;

  const ExperimentConfig& config() const { return cfg_; }
  const LadderLattice& lattice() const { return lat_; }
  const PauliSum& hamiltonian() const { return h_; }
  const SectorSpace& space() const { return space_; }
  const SectorOperator& h_sector() const { return *hs_; }
  const SectorProjector& projector() const { return *sp_; }
  const PowerEngine& power_engine() const { return eng_; }
  // Lanczos energy and normalized sector ground state, if compute_exact.
  std::optional<double> exact_energy() const { return e_exact_; }
  Diagnostics diagnostics() const;

  AnsatzCircuit make_ansatz(int depth) const;

 private:
  ExperimentConfig cfg_;
  LadderLattice lat_;
  PauliSum h_;
  SectorSpace space_;
  std::unique_ptr<SectorOperator> hs_, s2_, eta2_;
  PowerEngine eng_;
  std::unique_ptr<Projector> proj_;
  std::unique_ptr<SectorProjector> sp_;
  std::optional<double> e_exact_;
  CVector exact_;
};

// Lanczos ground-state energy of the configured model.
double exact_energy(const ExperimentConfig& c);

struct SeedResult {
  int seed = 0;
  std::vector<double> theta0;
  std::vector<double> theta;  // last recorded parameters
  std::vector<IterationRecord> history;
  bool truncated = false;
  std::string error;  // empty on success
  bool ok() const { return error.empty(); }
};

struct CampaignResult {
  ExperimentConfig config;
  std::optional<double> e_exact;
  std::vector<SeedResult> seeds;
  std::vector<IterationRecord> mean;  // seed average per x over successful seeds
  int best_seed = -1;                 // highest final fidelity (lowest E0 without exact)
  int n_failed() const;
};

// theta for each seed index, from a file written by emit_results.
std::map<int, std::vector<double>> load_warm_start(const std::string& path);

using ProgressCallback = std::function<void(int seed, const IterationRecord&)>;

// Throws NumericalError only when every seed fails.
CampaignResult run_campaign(const ExperimentContext& ctx, const ProgressCallback& progress = {});

// Writes seed_<i>.csv, mean.csv, optima.txt and summary.txt under dir.
void emit_results(const CampaignResult& r, const std::string& dir);

extern const char* const kCsvHeader;
void write_trajectory_csv(const std::vector<IterationRecord>& h, const std::string& path);
std::vector<IterationRecord> read_trajectory_csv(const std::string& path);

std::vector<VarianceResult> run_variance_diagnostics(const ExperimentContext& ctx,
                                                     const std::vector<int>& depths, int draws);
void write_variance_csv(const std::vector<VarianceResult>& rows, const std::string& path);

}  // namespace symvqe
