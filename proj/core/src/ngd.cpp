#include "symvqe/ngd.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "symvqe/errors.hpp"

namespace symvqe {

namespace {

std::size_t upper_index(int k, int l, int n) {
  // Row k of the upper triangle starts after k rows of decreasing length.
  return static_cast<std::size_t>(k) * n - static_cast<std::size_t>(k) * (k - 1) / 2 + (l - k);
}

CMatrix plus_adjoint(const CMatrix& a) { return a + a.adjoint(); }

}  // namespace

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& f) {
  const std::size_t workers = std::min<std::size_t>(n, std::max(1, threads));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

CMatrix DerivativeBundle::s_both(int k, int l) const {
  const int n = n_params();
  if (k < 0 || l < 0 || k >= n || l >= n) throw UsageError("parameter index out of range");
  if (k <= l) return s_upper[upper_index(k, l, n)];
  return s_upper[upper_index(l, k, n)].adjoint();
}

std::vector<CVector> derivative_states(const SectorAnsatz& a, const std::vector<double>& theta,
                                       int parallelism) {
  const int n = a.circuit().n_params;
  std::vector<CVector> out(n + 1);
  parallel_for(n + 1, parallelism, [&](std::size_t i) {
    out[i] = i == 0 ? a.prepare(theta) : a.derivative(theta, static_cast<int>(i) - 1);
  });
  return out;
}

DerivativeBundle assemble_derivatives(const std::vector<ProjectedVector>& basis,
                                      const std::vector<std::vector<ProjectedVector>>& dbasis) {
  const int n = static_cast<int>(dbasis.size());
  DerivativeBundle b;
  b.dh.resize(n);
  b.ds.resize(n);
  b.s_right.resize(n);
  for (int k = 0; k < n; ++k) {
    if (dbasis[k].size() != basis.size()) throw UsageError("derivative basis has the wrong length");
    b.s_right[k] = SubspaceEngine::overlap(basis, dbasis[k]);
    b.dh[k] = plus_adjoint(SubspaceEngine::hamiltonian(basis, dbasis[k]));
    b.ds[k] = plus_adjoint(b.s_right[k]);
  }
  b.s_upper.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) b.s_upper.push_back(SubspaceEngine::overlap(dbasis[k], dbasis[l]));
  return b;
}

PairFormDerivatives pair_form_derivatives(const SectorAnsatz& a, const SubspaceEngine& e,
                                          const std::vector<double>& theta) {
  const AnsatzCircuit& c = a.circuit();
  std::vector<int> uses(c.n_params, 0);
  for (const AnsatzSlot& s : c.slots) {
    if (s.kind == GateKind::EXCHANGE || s.scale != 1.0)
      throw UsageError("pair form needs unit-scale gates with involutory generators");
    ++uses[s.param];
  }
  for (int u : uses)
    if (u != 1) throw UsageError("pair form needs one gate per parameter");
  PairFormDerivatives out;
  constexpr double half_pi = std::numbers::pi / 2;
  for (int k = 0; k < c.n_params; ++k) {
    std::vector<double> plus = theta, minus = theta;
    plus[k] += half_pi;
    minus[k] -= half_pi;
    const auto mp = e.matrices(e.basis(a.prepare(plus)));
    const auto mm = e.matrices(e.basis(a.prepare(minus)));
    out.dh.push_back(cplx{0.5} * (mp.h - mm.h));
    out.ds.push_back(cplx{0.5} * (mp.s - mm.s));
  }
  return out;
}

std::vector<double> energy_gradient(const DerivativeBundle& b, const GevpSolution& sol) {
  std::vector<double> g(b.n_params());
  for (int k = 0; k < b.n_params(); ++k) {
    const cplx val = sandwich(sol.v0, b.dh[k] - cplx{sol.e0} * b.ds[k], sol.v0);
    if (std::abs(val.imag()) > 1e-8)
      throw NumericalError("energy gradient has an imaginary part " + std::to_string(val.imag()));
    g[k] = val.real();
  }
  return g;
}

std::vector<CVector> eigenvector_derivative(const DerivativeBundle& b, const GevpSolution& sol,
                                            double im_c0, double gap_tol) {
  const std::size_t r = sol.vectors.size();
  if (r > 1 && sol.energies[1] - sol.e0 < gap_tol)
    throw SpectralGapError("E1 - E0 = " + std::to_string(sol.energies[1] - sol.e0) +
                           " is below the gap tolerance");
  std::vector<CVector> dv(b.n_params());
  for (int k = 0; k < b.n_params(); ++k) {
    const CMatrix a = b.dh[k] - cplx{sol.e0} * b.ds[k];
    const CVector av0 = a * sol.v0;
    const cplx c0(-0.5 * sandwich(sol.v0, b.ds[k], sol.v0).real(), im_c0);
    CVector d = sol.v0;
    scale(d, c0);
    for (std::size_t n = 1; n < r; ++n)
      axpy(dot(sol.vectors[n], av0) / (sol.e0 - sol.energies[n]), sol.vectors[n], d);
    dv[k] = std::move(d);
  }
  return dv;
}

MetricResult fubini_study_metric(const CMatrix& s, const DerivativeBundle& b, const CVector& v0) {
  const int n = b.n_params();
  if (static_cast<int>(b.dv0.size()) != n) throw UsageError("metric needs dv0 for every parameter");
  MetricResult r;
  r.g = CMatrix(n, n);
  r.gamma = CMatrix(n, n);
  r.beta.resize(n);
  // Per-k vectors reused across the l loop.
  std::vector<CVector> s_dv(n), sr_v(n);
  for (int k = 0; k < n; ++k) {
    s_dv[k] = s * b.dv0[k];
    sr_v[k] = b.s_right[k] * v0;
    r.beta[k] = dot(v0, s_dv[k]) + dot(v0, sr_v[k]);
  }
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const cplx gam = dot(b.dv0[k], s_dv[l]) + sandwich(v0, b.s_both(k, l), v0) +
                       dot(b.dv0[k], sr_v[l]) + dot(sr_v[k], b.dv0[l]);
      r.gamma(k, l) = gam;
      r.g(k, l) = (gam - std::conj(r.beta[k]) * r.beta[l]).real();
    }
  // Symmetrize the real part against rounding.
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      const double avg = 0.5 * (r.g(k, l).real() + r.g(l, k).real());
      r.g(k, l) = r.g(l, k) = avg;
    }
  return r;
}

OptimizerKind parse_optimizer_kind(const std::string& s) {
  if (s == "ngd") return OptimizerKind::Ngd;
  if (s == "gd") return OptimizerKind::Gd;
  throw ConfigError("unknown optimizer '" + s + "' (expected ngd or gd)");
}

const char* optimizer_kind_name(OptimizerKind k) { return k == OptimizerKind::Ngd ? "ngd" : "gd"; }

double default_regularization(const CMatrix& g, double factor) {
  if (g.rows() == 0) return 0.0;
  double tr = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i) tr += g(i, i).real();
  return factor * tr / static_cast<double>(g.rows());
}

void ngd_step(OptState& st, const CMatrix& g, const std::vector<double>& grad, double eps_reg) {
  if (!(st.tau > 0)) throw UsageError("learning rate must be positive");
  if (grad.size() != st.theta.size()) throw UsageError("gradient and parameter lengths differ");
  const std::size_t n = grad.size();
  std::vector<double> dir(grad);
  if (g.rows() != 0) {
    if (g.rows() != n || g.cols() != n) throw UsageError("metric has the wrong shape");
    const CVector x = hermitian_solve(g, CVector(grad.begin(), grad.end()), eps_reg);
    for (std::size_t k = 0; k < n; ++k) dir[k] = x[k].real();
  }
  for (std::size_t k = 0; k < n; ++k) st.theta[k] -= st.tau * dir[k];
  ++st.x;
}

Objective::Objective(const SectorAnsatz& a, const SubspaceEngine& e, Diagnostics diag,
                     int parallelism)
    : a_(&a), e_(&e), diag_(diag), parallelism_(parallelism) {
  if (a.prep_state().size() != e.space().dim()) throw UsageError("ansatz and engine sectors differ");
}

GevpSolution Objective::solve(const std::vector<double>& theta) const {
  return solve_gevp(e_->matrices(e_->basis(a_->prepare(theta))), s_threshold_);
}

double Objective::energy(const std::vector<double>& theta) const { return solve(theta).e0; }

DerivativeBundle Objective::bundle(const std::vector<double>& theta) const {
  const auto states = derivative_states(*a_, theta, parallelism_);
  const std::vector<ProjectedVector> basis = e_->basis(states[0]);
  std::vector<std::vector<ProjectedVector>> dbasis(states.size() - 1);
  parallel_for(dbasis.size(), parallelism_, [&](std::size_t k) { dbasis[k] = e_->basis(states[k + 1]); });
  return assemble_derivatives(basis, dbasis);
}

void Objective::observables(Evaluation& ev, const std::vector<ProjectedVector>& basis) const {
  if (diag_.s2) ev.s2 = e_->expectation(basis, ev.sol.v0, *diag_.s2);
  if (diag_.eta2) ev.eta2 = e_->expectation(basis, ev.sol.v0, *diag_.eta2);
  if (diag_.exact) ev.fidelity = e_->fidelity(basis, ev.sol.v0, *diag_.exact);
}

Evaluation Objective::evaluate(const std::vector<double>& theta, bool with_metric,
                               double im_c0) const {
  const auto states = derivative_states(*a_, theta, parallelism_);
  std::vector<std::vector<ProjectedVector>> all(states.size());
  parallel_for(states.size(), parallelism_, [&](std::size_t i) { all[i] = e_->basis(states[i]); });
  const std::vector<ProjectedVector> basis = std::move(all[0]);
  all.erase(all.begin());

  Evaluation ev;
  ev.m = e_->matrices(basis);
  ev.sol = solve_gevp(ev.m, s_threshold_);
  ev.e0 = ev.sol.e0;
  DerivativeBundle b = assemble_derivatives(basis, all);
  ev.grad = energy_gradient(b, ev.sol);
  if (with_metric) {
    try {
      b.dv0 = eigenvector_derivative(b, ev.sol, im_c0);
      ev.metric = fubini_study_metric(ev.m.s, b, ev.sol.v0).g;
    } catch (const SpectralGapError& err) {
      ev.gd_fallback = true;
      ev.warning = err.what();
    }
  }
  observables(ev, basis);
  return ev;
}

OptimizerResult optimize(const Objective& obj, std::vector<double> theta0,
                         const OptimizerOptions& opt, const IterationCallback& cb) {
  if (!(opt.tau > 0)) throw ConfigError("learning_rate must be positive");
  if (opt.max_iterations < 0) throw ConfigError("max_iterations must be non-negative");
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  OptState st;
  st.theta = std::move(theta0);
  st.tau = opt.tau;
  OptimizerResult res;
  const bool ngd = opt.kind == OptimizerKind::Ngd;
  for (int x = 0; x <= opt.max_iterations; ++x) {
    const auto t0 = clock::now();
    const Evaluation ev = obj.evaluate(st.theta, ngd);
    IterationRecord rec;
    rec.x = x;
    rec.e0 = ev.e0;
    rec.fidelity = ev.fidelity;
    rec.s2 = ev.s2;
    rec.eta2 = ev.eta2;
    double gn = 0.0;
    for (double g : ev.grad) gn += g * g;
    rec.grad_norm = std::sqrt(gn);
    rec.gd_fallback = ev.gd_fallback;
    res.theta = st.theta;
    if (x < opt.max_iterations) {
      const double eps = default_regularization(ev.metric, opt.reg_factor);
      ngd_step(st, ev.metric, ev.grad, eps);
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    res.history.push_back(rec);
    if (cb) cb(rec);
    if (opt.max_wall_seconds > 0 &&
        std::chrono::duration<double>(clock::now() - start).count() > opt.max_wall_seconds &&
        x < opt.max_iterations) {
      res.truncated = true;
      break;
    }
  }
  return res;
}

VarianceResult gradient_variance(const Objective& obj, int draws, std::uint64_t seed,
                                 double reg_factor) {
  if (draws < 2) throw ConfigError("variance needs at least two draws");
  const int n = obj.n_params();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  std::vector<double> per_ng(draws), per_g(draws);
  double sum_ng = 0.0, sum_g = 0.0;
  for (int r = 0; r < draws; ++r) {
    std::vector<double> theta(n);
    for (double& t : theta) t = angle(rng);
    const Evaluation ev = obj.evaluate(theta, true);
    CVector nat(ev.grad.begin(), ev.grad.end());
    if (!ev.gd_fallback)
      nat = hermitian_solve(ev.metric, nat, default_regularization(ev.metric, reg_factor));
    double a = 0.0, b = 0.0;
    for (int k = 0; k < n; ++k) {
      a += nat[k].real() * nat[k].real();
      b += ev.grad[k] * ev.grad[k];
      sum_ng += nat[k].real();
      sum_g += ev.grad[k];
    }
    per_ng[r] = a / n;
    per_g[r] = b / n;
  }
  auto mean_and_se = [&](const std::vector<double>& v, double& mean, double& se) {
    mean = 0.0;
    for (double x : v) mean += x;
    mean /= draws;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    se = std::sqrt(var / (draws - 1) / draws);
  };
  VarianceResult out;
  out.draws = draws;
  mean_and_se(per_ng, out.sigma2_ng, out.stderr_ng);
  mean_and_se(per_g, out.sigma2_g, out.stderr_g);
  out.mean_ng = sum_ng / (static_cast<double>(draws) * n);
  out.mean_g = sum_g / (static_cast<double>(draws) * n);
  return out;
}

}  // namespace symvqe
