#include "symvqe/projection.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "symvqe/errors.hpp"

namespace symvqe {

// ---- Point group -----------------------------------------------------------

std::array<double, 4> irrep_characters(const std::string& irrep) {
  if (irrep == "A1") return {1, 1, 1, 1};
  if (irrep == "A2") return {1, 1, -1, -1};
  if (irrep == "B1") return {1, -1, 1, -1};
  if (irrep == "B2") return {1, -1, -1, 1};
  throw ConfigError("unknown C2v irrep '" + irrep + "' (expected A1, A2, B1 or B2)");
}

std::vector<PointGroupElement> c2v_elements(const LadderLattice& lat,
                                            const std::array<double, 4>& characters) {
  static const char* names[4] = {"I", "C2", "sigma1", "sigma2"};
  const auto perms = lat.point_group();
  std::vector<PointGroupElement> out;
  for (int k = 0; k < 4; ++k) out.push_back({names[k], perms[k], characters[k]});
  return out;
}

std::vector<int> lift_site_permutation(const LadderLattice& lat, Labeling lab,
                                       const std::vector<int>& site_perm) {
  if (static_cast<int>(site_perm.size()) != lat.n_sites())
    throw UsageError("site permutation has the wrong length");
  std::vector<int> m(lat.n_qubits());
  for (int s = 1; s <= lat.n_sites(); ++s)
    for (Spin sp : {Spin::Up, Spin::Down})
      m[qubit_of(lat, lab, s, sp) - 1] = qubit_of(lat, lab, site_perm[s - 1], sp);
  return m;
}

namespace {

void check_permutation(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<char> seen(n + 1, 0);
  for (int v : perm) {
    if (v < 1 || v > n || seen[v]) throw UsageError("not a permutation of 1..N");
    seen[v] = 1;
  }
}

}  // namespace

std::vector<std::pair<int, int>> amida_decomposition(const std::vector<int>& perm) {
  check_permutation(perm);
  const int n = static_cast<int>(perm.size());
  // arr[p] is the mode label sitting at position p+1; sort by target.
  std::vector<int> arr(n);
  for (int p = 0; p < n; ++p) arr[p] = p + 1;
  std::vector<std::pair<int, int>> out;
  for (bool swapped = true; swapped;) {
    swapped = false;
    for (int p = 0; p + 1 < n; ++p) {
      if (perm[arr[p] - 1] > perm[arr[p + 1] - 1]) {
        std::swap(arr[p], arr[p + 1]);
        out.push_back({p + 1, p + 2});
        swapped = true;
      }
    }
  }
  return out;
}

Circuit fswap_network(int n_qubits, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != n_qubits) throw UsageError("permutation length mismatch");
  Circuit c(n_qubits);
  for (auto [a, b] : amida_decomposition(perm)) c.add(gate(GateKind::FSWAP, a, b));
  return c;
}

Circuit spatial_circuit(const LadderLattice& lat, Labeling lab, const PointGroupElement& g) {
  return fswap_network(lat.n_qubits(), lift_site_permutation(lat, lab, g.site_permutation));
}

StateVector apply_spatial_g(const LadderLattice& lat, Labeling lab, const PointGroupElement& g,
                            const StateVector& psi) {
  StateVector out = psi;
  CompiledCircuit::compile(spatial_circuit(lat, lab, g)).apply(out);
  return out;
}

// ---- SU(2) rotations -------------------------------------------------------

Circuit spin_rotation_y(double beta, const LadderLattice& lat, Labeling lab) {
  const int n = lat.n_qubits();
  Circuit c(n);
  if (beta == 0.0) return c;
  for (int s = 1; s <= lat.n_sites(); ++s)
    c.append(fermionic_two_level(n, qubit_of(lat, lab, s, Spin::Up),
                                 qubit_of(lat, lab, s, Spin::Down), GateKind::GIVENS, beta));
  return c;
}

Circuit eta_rotation_y(double beta, const LadderLattice& lat, Labeling lab) {
  const int n = lat.n_qubits();
  Circuit c(n);
  if (beta == 0.0) return c;
  for (int s = 1; s <= lat.n_sites(); ++s) {
    const int up = qubit_of(lat, lab, s, Spin::Up), dn = qubit_of(lat, lab, s, Spin::Down);
    // The Bogoliubov gate pairs c_a^+ c_b^+ with a < b; c_up^+ c_dn^+ flips
    // sign when the down mode comes first.
    const double sign = up < dn ? -1.0 : 1.0;
    c.append(fermionic_two_level(n, std::min(up, dn), std::max(up, dn), GateKind::BOGOLIUBOV,
                                 sign * lat.phi(s) * beta));
  }
  return c;
}

Circuit spin_rotation_z(double alpha, const LadderLattice& lat, Labeling lab) {
  Circuit c(lat.n_qubits());
  if (alpha == 0.0) return c;
  for (int s = 1; s <= lat.n_sites(); ++s) {
    c.add(gate(GateKind::RZ, qubit_of(lat, lab, s, Spin::Up), -alpha / 2));
    c.add(gate(GateKind::RZ, qubit_of(lat, lab, s, Spin::Down), alpha / 2));
  }
  return c;
}

Circuit eta_rotation_z(double alpha, const LadderLattice& lat, Labeling lab) {
  Circuit c(lat.n_qubits());
  if (alpha == 0.0) return c;
  for (int s = 1; s <= lat.n_sites(); ++s) {
    c.add(gate(GateKind::RZ, qubit_of(lat, lab, s, Spin::Up), -alpha / 2));
    c.add(gate(GateKind::RZ, qubit_of(lat, lab, s, Spin::Down), -alpha / 2));
  }
  return c;
}

// ---- Quadrature ------------------------------------------------------------

double legendre_p(int j, double x) {
  if (j < 0) throw UsageError("Legendre order must be non-negative");
  if (j == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int k = 1; k < j; ++k) {
    const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

QuadratureGrid gauss_legendre(int n, int alpha_count) {
  if (n < 1 || n > 16) throw ConfigError("Gauss-Legendre order must be in 1..16");
  if (alpha_count < 1) throw ConfigError("azimuth count must be positive");
  QuadratureGrid g;
  g.alpha_count = alpha_count;
  for (int k = 1; k <= n; ++k) {
    double x = std::cos(std::numbers::pi * (k - 0.25) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = legendre_p(n, x), pm = legendre_p(n - 1, x);
      dp = n * (x * p - pm) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double p = legendre_p(n, x), pm = legendre_p(n - 1, x);
    dp = n * (x * p - pm) / (x * x - 1.0);
    g.beta_nodes.push_back(std::acos(x));
    g.beta_weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return g;
}

JointGrid lebedev6_grid() {
  const double pi = std::numbers::pi;
  JointGrid g;
  g.alpha = {0, 0, pi / 2, pi, 3 * pi / 2, 0};
  g.beta = {0, pi / 2, pi / 2, pi / 2, pi / 2, pi};
  g.weight.assign(6, 1.0 / 6.0);
  return g;
}

namespace {

Circuit rotation_y(Su2 which, double beta, const LadderLattice& lat, Labeling lab) {
  return which == Su2::Spin ? spin_rotation_y(beta, lat, lab) : eta_rotation_y(beta, lat, lab);
}

Circuit rotation_z(Su2 which, double alpha, const LadderLattice& lat, Labeling lab) {
  return which == Su2::Spin ? spin_rotation_z(alpha, lat, lab) : eta_rotation_z(alpha, lat, lab);
}

StateVector rotated(const Circuit& c, const StateVector& psi) {
  StateVector v = psi;
  CompiledCircuit::compile(c).apply(v);
  return v;
}

}  // namespace

StateVector apply_su2_projection(const LadderLattice& lat, Labeling lab, Su2 which, int j,
                                 const QuadratureGrid& grid, const StateVector& psi) {
  if (j < 0) throw UsageError("target quantum number must be non-negative");
  StateVector polar(psi.n_qubits());
  for (std::size_t l = 0; l < grid.beta_nodes.size(); ++l) {
    const double b = grid.beta_nodes[l];
    const double w = grid.beta_weights[l] * legendre_p(j, std::cos(b));
    axpy(w, rotated(rotation_y(which, b, lat, lab), psi), polar);
  }
  StateVector out(psi.n_qubits());
  const int na = grid.alpha_count;
  for (int k = 0; k < na; ++k) {
    const double a = 2.0 * std::numbers::pi * k / na;
    axpy(1.0, rotated(rotation_z(which, a, lat, lab), polar), out);
  }
  scale(out, (2.0 * j + 1.0) / (2.0 * na));
  return out;
}

StateVector apply_su2_projection(const LadderLattice& lat, Labeling lab, Su2 which, int j,
                                 const JointGrid& grid, const StateVector& psi) {
  if (j < 0) throw UsageError("target quantum number must be non-negative");
  StateVector out(psi.n_qubits());
  for (std::size_t k = 0; k < grid.weight.size(); ++k) {
    Circuit c = rotation_y(which, grid.beta[k], lat, lab);
    c.append(rotation_z(which, grid.alpha[k], lat, lab));
    axpy(grid.weight[k] * legendre_p(j, std::cos(grid.beta[k])), rotated(c, psi), out);
  }
  scale(out, 2.0 * j + 1.0);
  return out;
}

// ---- Projector -------------------------------------------------------------

ProjectorSpec ProjectorSpec::full() {
  ProjectorSpec s;
  s.use_spatial = s.use_spin = s.use_eta = true;
  return s;
}

Projector::Projector(const LadderLattice& lat, Labeling lab, ProjectorSpec spec)
    : lat_(lat), lab_(lab), spec_(std::move(spec)), n_(lat.n_qubits()) {
  if (spec_.j_spin < 0 || spec_.j_eta < 0) throw ConfigError("target quantum numbers must be >= 0");
  if (spec_.n_azimuth < 1) throw ConfigError("n_azimuth must be positive");
  for (int s = 1; s <= lat.n_sites(); ++s) {
    up_mask_ |= std::uint64_t{1} << (qubit_of(lat, lab, s, Spin::Up) - 1);
    down_mask_ |= std::uint64_t{1} << (qubit_of(lat, lab, s, Spin::Down) - 1);
  }
  if (spec_.use_spatial) {
    const auto chars = irrep_characters(spec_.irrep);
    const auto elems = c2v_elements(lat, chars);
    for (const auto& g : elems)
      spatial_.push_back({g.character, CompiledCircuit::compile(spatial_circuit(lat, lab, g))});
    prefactor_ *= 1.0 / static_cast<double>(elems.size());  // one-dimensional irreps
  }
  auto polar_terms = [&](Su2 which, int j, int n_polar) {
    std::vector<Term> terms;
    const QuadratureGrid grid = gauss_legendre(n_polar);
    for (std::size_t l = 0; l < grid.beta_nodes.size(); ++l) {
      const double b = grid.beta_nodes[l];
      terms.push_back({grid.beta_weights[l] * legendre_p(j, std::cos(b)),
                       CompiledCircuit::compile(rotation_y(which, b, lat, lab))});
    }
    prefactor_ *= (2.0 * j + 1.0) / 2.0;
    return terms;
  };
  if (spec_.use_spin) spin_ = polar_terms(Su2::Spin, spec_.j_spin, spec_.n_polar_spin);
  if (spec_.use_eta) eta_ = polar_terms(Su2::Eta, spec_.j_eta, spec_.n_polar_eta);
}

std::size_t Projector::circuit_count() const {
  return spatial_.size() + spin_.size() + eta_.size();
}

void Projector::accumulate(const std::vector<Term>& terms, StateVector& v) {
  if (terms.empty()) return;
  StateVector acc(v.n_qubits());
  StateVector tmp;
  for (const Term& t : terms) {
    tmp = v;
    t.circuit.apply(tmp);
    axpy(t.weight, tmp, acc);
  }
  v = std::move(acc);
}

StateVector Projector::apply_matrix_form(const StateVector& ket) const {
  if (ket.n_qubits() != n_) throw UsageError("projector/state register mismatch");
  StateVector v = ket;
  accumulate(spatial_, v);
  accumulate(spin_, v);
  accumulate(eta_, v);
  if (prefactor_ != 1.0) scale(v, prefactor_);
  return v;
}

void Projector::check_sector(const StateVector& s) const {
  const int half = lat_.n_sites() / 2;
  double outside = 0.0, total = 0.0;
  for (std::size_t b = 0; b < s.size(); ++b) {
    const double w = std::norm(s[b]);
    total += w;
    if (lat_.n_sites() % 2 != 0 || std::popcount(b & up_mask_) != half ||
        std::popcount(b & down_mask_) != half)
      outside += w;
  }
  if (outside > 1e-20 * std::max(total, 1.0))
    throw UsageError("projected matrix element needs half-filling sector states");
}

cplx Projector::matrix_element(const StateVector& bra, const StateVector& ket,
                               const PauliSum* middle) const {
  if (bra.n_qubits() != n_) throw UsageError("projector/state register mismatch");
  if (active()) {
    check_sector(bra);
    check_sector(ket);
  }
  const StateVector v = apply_matrix_form(ket);
  return middle ? inner(bra, apply_pauli_sum(*middle, v)) : inner(bra, v);
}

StateVector Projector::apply_full(const StateVector& psi) const {
  if (psi.n_qubits() != n_) throw UsageError("projector/state register mismatch");
  StateVector v = psi;
  if (spec_.use_spatial) {
    accumulate(spatial_, v);
    scale(v, 1.0 / static_cast<double>(spatial_.size()));
  }
  if (spec_.use_spin)
    v = apply_su2_projection(lat_, lab_, Su2::Spin, spec_.j_spin,
                             gauss_legendre(spec_.n_polar_spin, spec_.n_azimuth), v);
  if (spec_.use_eta)
    v = apply_su2_projection(lat_, lab_, Su2::Eta, spec_.j_eta,
                             gauss_legendre(spec_.n_polar_eta, spec_.n_azimuth), v);
  return v;
}

CVector Projector::apply_sector(const CVector& x, const SectorSpace& space) const {
  if (!active()) return x;
  return space.restrict(apply_matrix_form(space.embed(x)));
}

// ---- Compiled projector ----------------------------------------------------

namespace {

void orthogonalize(const std::vector<CVector>& q, CVector& y) {
  for (int pass = 0; pass < 2; ++pass)
    for (const CVector& qk : q) axpy(-dot(qk, y), qk, y);
}

CVector random_vector(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  CVector x(dim);
  for (auto& v : x) v = cplx(nd(rng), nd(rng));
  return x;
}

}  // namespace

std::optional<CompiledProjector> CompiledProjector::build(const Projector& p,
                                                          const SectorSpace& space,
                                                          std::uint64_t seed,
                                                          std::size_t max_rank,
                                                          double check_tol) {
  const std::size_t dim = space.dim();
  std::mt19937_64 rng(seed);
  CompiledProjector cp;
  cp.dim_ = dim;
  constexpr int kBatch = 16;
  for (;;) {
    int added = 0;
    for (int b = 0; b < kBatch; ++b) {
      CVector y = p.apply_sector(random_vector(dim, rng), space);
      const double n0 = norm2(y);
      if (n0 == 0.0) continue;
      orthogonalize(cp.q_, y);
      const double n1 = norm2(y);
      if (n1 <= 1e-8 * n0) continue;
      scale(y, 1.0 / n1);
      cp.q_.push_back(std::move(y));
      ++added;
      if (cp.q_.size() > max_rank) return std::nullopt;
    }
    if (added == 0) break;
  }
  const std::size_t r = cp.q_.size();
  cp.m_ = CMatrix(r, r);
  for (std::size_t j = 0; j < r; ++j) {
    const CVector bj = p.apply_sector(cp.q_[j], space);
    for (std::size_t i = 0; i < r; ++i) cp.m_(i, j) = dot(cp.q_[i], bj);
  }
  double worst = 0.0;
  for (int t = 0; t < 4; ++t) {
    const CVector x = random_vector(dim, rng);
    const CVector want = p.apply_sector(x, space);
    const CVector got = cp.apply(x);
    double diff = 0.0;
    for (std::size_t k = 0; k < dim; ++k) diff = std::max(diff, std::abs(want[k] - got[k]));
    double scale_ref = 0.0;
    for (const auto& v : want) scale_ref = std::max(scale_ref, std::abs(v));
    worst = std::max(worst, diff / std::max(scale_ref, 1e-300));
  }
  cp.check_error_ = worst;
  if (!(worst <= check_tol)) return std::nullopt;
  return cp;
}

CVector CompiledProjector::coords(const CVector& x) const {
  if (x.size() != dim_) throw UsageError("compiled projector length mismatch");
  CVector c(q_.size());
  for (std::size_t i = 0; i < q_.size(); ++i) c[i] = dot(q_[i], x);
  return c;
}

CVector CompiledProjector::ket_coords(const CVector& x) const { return m_ * coords(x); }

CVector CompiledProjector::apply(const CVector& x) const {
  const CVector c = ket_coords(x);
  CVector y(dim_);
  for (std::size_t i = 0; i < q_.size(); ++i) axpy(c[i], q_[i], y);
  return y;
}

ProjectorMode parse_projector_mode(const std::string& s) {
  if (s == "auto") return ProjectorMode::Auto;
  if (s == "circuit") return ProjectorMode::Circuit;
  if (s == "compiled") return ProjectorMode::Compiled;
  throw ConfigError("projector_mode must be auto, circuit or compiled");
}

SectorProjector::SectorProjector(const Projector& p, const SectorSpace& space, ProjectorMode mode,
                                 std::uint64_t seed)
    : projector_(&p), space_(&space) {
  if (p.n_qubits() != space.n_qubits()) throw UsageError("projector/sector register mismatch");
  const bool worth = p.spec().use_spin || p.spec().use_eta;
  if (!p.active() || mode == ProjectorMode::Circuit) return;
  if (mode == ProjectorMode::Auto && !worth) return;
  compiled_ = CompiledProjector::build(p, space, seed);
  if (!compiled_ && mode == ProjectorMode::Compiled)
    throw NumericalError("compiled projector failed its rank or accuracy check");
}

CVector SectorProjector::bra_image(const CVector& a) const {
  return compiled_ ? compiled_->coords(a) : a;
}

CVector SectorProjector::ket_image(const CVector& b) const {
  if (compiled_) return compiled_->ket_coords(b);
  return projector_->apply_sector(b, *space_);
}

CVector SectorProjector::apply(const CVector& b) const {
  if (compiled_) return compiled_->apply(b);
  return projector_->apply_sector(b, *space_);
}

}  // namespace symvqe
