#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "symvqe/ansatz.hpp"
#include "symvqe/krylov.hpp"
#include "symvqe/linalg.hpp"

namespace symvqe {

struct DerivativeBundle {
  std::vector<CMatrix> dh;       // dH/dtheta_k = H_(,k) + H_(,k)^H
  std::vector<CMatrix> ds;       // dS/dtheta_k = S_(,k) + S_(,k)^H
  std::vector<CMatrix> s_right;  // S_(,k): <b_i|P|d_kj>
  std::vector<CMatrix> s_upper;  // S_(k,l) for k <= l, row-major upper triangle
  std::vector<CVector> dv0;

  int n_params() const { return static_cast<int>(dh.size()); }
  // S_(k,l) for any k, l, using S_(k,l)^H = S_(l,k).
  CMatrix s_both(int k, int l) const;
};

// [psi, d_1 psi, ..., d_N psi]. For the efSWAP ansatz each derivative is
// one preparation, d_k psi = psi(theta + pi e_k) / 2.
std::vector<CVector> derivative_states(const SectorAnsatz& a, const std::vector<double>& theta,
                                       int parallelism = 1);

// dbasis[k][j] = H_ST^j d_k psi, projected.
DerivativeBundle assemble_derivatives(const std::vector<ProjectedVector>& basis,
                                      const std::vector<std::vector<ProjectedVector>>& dbasis);

// dH and dS from matrices at theta +- pi/2 e_k. Every parameter must drive a
// single gate with an involutory generator (efSWAP).
struct PairFormDerivatives {
  std::vector<CMatrix> dh, ds;
};
PairFormDerivatives pair_form_derivatives(const SectorAnsatz& a, const SubspaceEngine& e,
                                          const std::vector<double>& theta);

std::vector<double> energy_gradient(const DerivativeBundle& b, const GevpSolution& sol);

// Throws SpectralGapError when E1 - E0 < gap_tol.
std::vector<CVector> eigenvector_derivative(const DerivativeBundle& b, const GevpSolution& sol,
                                            double im_c0 = 0.0, double gap_tol = 1e-10);

struct MetricResult {
  CMatrix g;      // real symmetric, stored with zero imaginary parts
  CMatrix gamma;  // <d_k Phi|d_l Phi>
  CVector beta;   // <Phi|d_k Phi>
};
MetricResult fubini_study_metric(const CMatrix& s, const DerivativeBundle& b, const CVector& v0);

enum class OptimizerKind { Ngd, Gd };
OptimizerKind parse_optimizer_kind(const std::string& s);
const char* optimizer_kind_name(OptimizerKind k);

struct IterationRecord {
  int x = 0;
  double e0 = 0.0;
  double fidelity = 0.0;
  double s2 = 0.0;
  double eta2 = 0.0;
  double grad_norm = 0.0;
  double wall_ms = 0.0;
  bool gd_fallback = false;
};

struct OptState {
  std::vector<double> theta;
  int x = 0;
  double tau = 0.025;
  std::vector<IterationRecord> history;
};

// factor tr(G) / N.
double default_regularization(const CMatrix& g, double factor = 1e-8);

// theta <- theta - tau Re[(G + eps I)^{-1} grad]. An empty G means plain GD.
void ngd_step(OptState& st, const CMatrix& g, const std::vector<double>& grad, double eps_reg);

// Observables a trial state is scored against; null entries are skipped.
struct Diagnostics {
  const SectorOperator* s2 = nullptr;
  const SectorOperator* eta2 = nullptr;
  const CVector* exact = nullptr;  // normalized sector ground state
};

struct Evaluation {
  SubspaceMatrices m;
  GevpSolution sol;
  double e0 = 0.0;
  double fidelity = 0.0;
  double s2 = 0.0;
  double eta2 = 0.0;
  std::vector<double> grad;
  CMatrix metric;  // empty when not requested or on GD fallback
  bool gd_fallback = false;
  std::string warning;
};

class Objective {
 public:
  // References must outlive the objective.
  Objective(const SectorAnsatz& a, const SubspaceEngine& e, Diagnostics diag = {},
            int parallelism = 1);

  int n_params() const { return a_->circuit().n_params; }
  const SubspaceEngine& engine() const { return *e_; }
  // Canonical-orthonormalization cutoff passed to solve_gevp.
  void set_s_threshold(double t) { s_threshold_ = t; }

  // E0 only.
  double energy(const std::vector<double>& theta) const;
  GevpSolution solve(const std::vector<double>& theta) const;
  Evaluation evaluate(const std::vector<double>& theta, bool with_metric, double im_c0 = 0.0) const;
  // Derivative bundle without dv0, for tests and diagnostics.
  DerivativeBundle bundle(const std::vector<double>& theta) const;

 private:
  void observables(Evaluation& ev, const std::vector<ProjectedVector>& basis) const;

  const SectorAnsatz* a_;
  const SubspaceEngine* e_;
  Diagnostics diag_;
  int parallelism_;
  double s_threshold_ = 1e-10;
};

struct OptimizerOptions {
  OptimizerKind kind = OptimizerKind::Ngd;
  double tau = 0.025;
  int max_iterations = 100;
  double reg_factor = 1e-8;  // eps = reg_factor tr(G) / N
  double max_wall_seconds = 0.0;  // 0 disables the guard
};

struct OptimizerResult {
  std::vector<double> theta;  // parameters of the last recorded iteration
  std::vector<IterationRecord> history;
  bool truncated = false;  // wall-clock budget hit
};

using IterationCallback = std::function<void(const IterationRecord&)>;

// Records iterations 0 .. max_iterations; a step follows every record but the last.
OptimizerResult optimize(const Objective& obj, std::vector<double> theta0,
                         const OptimizerOptions& opt, const IterationCallback& cb = {});

struct VarianceResult {
  int depth = 0;
  int draws = 0;
  double sigma2_ng = 0.0;
  double sigma2_g = 0.0;
  double stderr_ng = 0.0;
  double stderr_g = 0.0;
  double mean_ng = 0.0;  // empirical component means, for inspection
  double mean_g = 0.0;
};

// Means over r of (1/N) sum_k g_k^2 for the plain and natural gradients at
// uniform theta in [0, 2 pi).
VarianceResult gradient_variance(const Objective& obj, int draws, std::uint64_t seed,
                                 double reg_factor = 1e-8);

// Runs f(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& f);

}  // namespace symvqe
