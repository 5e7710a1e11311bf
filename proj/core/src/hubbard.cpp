#include "symvqe/hubbard.hpp"

#include <bit>

#include "symvqe/errors.hpp"
#include "symvqe/linalg.hpp"

namespace symvqe {

Labeling parse_labeling(const std::string& s) {
  if (s == "spin_uniform" || s == "uniform") return Labeling::SpinUniform;
  if (s == "spin_alternating" || s == "alternating") return Labeling::SpinAlternating;
  throw ConfigError("unknown labeling '" + s + "'");
}

const char* labeling_name(Labeling l) {
  return l == Labeling::SpinUniform ? "spin_uniform" : "spin_alternating";
}

LadderLattice::LadderLattice(int lx, int ly) : lx_(lx), ly_(ly) {
  if (lx < 1 || ly < 1) throw ConfigError("lattice dimensions must be positive");
  n_sites_ = lx * ly;
  if (n_sites_ < 2) throw ConfigError("lattice needs at least two sites");
  if (2 * n_sites_ > kMaxQubits) throw ConfigError("lattice too large for the simulator");
  phi_.resize(n_sites_);
  for (int y = 0; y < ly; ++y)
    for (int x = 0; x < lx; ++x) phi_[site(x, y) - 1] = (x + y) % 2 == 0 ? 1 : -1;
  for (int y = 0; y < ly; ++y)
    for (int x = 0; x + 1 < lx; ++x) {
      Bond b{site(x, y), site(x + 1, y), x % 2 == 0 ? 'A' : 'C', 0};
      if (ly == 2) b.hva_class = (x == 0 || x + 1 == lx - 1) ? 1 : 2;
      bonds_.push_back(b);
    }
  for (int y = 0; y + 1 < ly; ++y)
    for (int x = 0; x < lx; ++x) {
      Bond b{site(x, y), site(x, y + 1), y % 2 == 0 ? 'B' : 'D', 0};
      if (ly == 2) b.hva_class = (x == 0 || x == lx - 1) ? 3 : 4;
      bonds_.push_back(b);
    }
  validate();
}

LadderLattice LadderLattice::from_bonds(int n_sites, std::vector<Bond> bonds,
                                        std::vector<int> phi) {
  if (n_sites < 2 || 2 * n_sites > kMaxQubits) throw ConfigError("unsupported site count");
  if (static_cast<int>(phi.size()) != n_sites) throw ConfigError("phi needs one entry per site");
  LadderLattice lat;
  lat.n_sites_ = n_sites;
  lat.bonds_ = std::move(bonds);
  lat.phi_ = std::move(phi);
  lat.validate();
  return lat;
}

void LadderLattice::validate() const {
  for (int p : phi_)
    if (p != 1 && p != -1) throw ConfigError("sublattice sign must be +1 or -1");
  for (const auto& b : bonds_) {
    if (b.i < 1 || b.j > n_sites_ || b.i >= b.j) throw ConfigError("malformed bond");
    if (phi_[b.i - 1] == phi_[b.j - 1])
      throw ConfigError("lattice is not bipartite: bond " + std::to_string(b.i) + "-" +
                        std::to_string(b.j) + " joins equal sublattices");
  }
}

int LadderLattice::hva_site_class(int s) const {
  if (!supports_hva()) throw ConfigError("HVA classes are defined for two-leg ladders only");
  const int x = x_of(s);
  return (x == 0 || x == lx_ - 1) ? 1 : 2;
}

std::array<std::vector<int>, 4> LadderLattice::point_group() const {
  if (!is_ladder()) throw ConfigError("point group needs a ladder lattice");
  std::array<std::vector<int>, 4> g;
  for (auto& p : g) p.resize(n_sites_);
  for (int y = 0; y < ly_; ++y)
    for (int x = 0; x < lx_; ++x) {
      const int s = site(x, y) - 1;
      g[0][s] = site(x, y);
      g[1][s] = site(lx_ - 1 - x, ly_ - 1 - y);
      g[2][s] = site(lx_ - 1 - x, y);
      g[3][s] = site(x, ly_ - 1 - y);
    }
  return g;
}

int qubit_of(const LadderLattice& lat, Labeling lab, int site, Spin s) {
  if (site < 1 || site > lat.n_sites()) throw UsageError("site out of range");
  const int down = s == Spin::Down ? 1 : 0;
  if (lab == Labeling::SpinUniform) return site + down * lat.n_sites();
  return 2 * site - 1 + down;
}

PauliSum hopping_term(int n, int p, int r, double t) {
  if (p > r) std::swap(p, r);
  std::uint64_t zs = 0;
  for (int k = p + 1; k < r; ++k) zs |= std::uint64_t{1} << (k - 1);
  const std::uint64_t xs = (std::uint64_t{1} << (p - 1)) | (std::uint64_t{1} << (r - 1));
  PauliSum h(n);
  h.add_term({-t / 2, xs, zs});       // X_p X_r Z...
  h.add_term({-t / 2, xs, zs | xs});  // Y_p Y_r Z...
  return h;
}

PauliSum build_hopping(const LadderLattice& lat, Labeling lab, double t) {
  const int n = lat.n_qubits();
  PauliSum h(n);
  for (Spin s : {Spin::Up, Spin::Down})
    for (const auto& b : lat.bonds())
      h += hopping_term(n, qubit_of(lat, lab, b.i, s), qubit_of(lat, lab, b.j, s), t);
  return h;
}

PauliSum build_interaction(const LadderLattice& lat, Labeling lab, double u) {
  const int n = lat.n_qubits();
  PauliSum h(n);
  for (int i = 1; i <= lat.n_sites(); ++i) {
    const std::uint64_t z = (std::uint64_t{1} << (qubit_of(lat, lab, i, Spin::Up) - 1)) |
                            (std::uint64_t{1} << (qubit_of(lat, lab, i, Spin::Down) - 1));
    h.add_term({u / 4, 0, z});
  }
  return h;
}

PauliSum build_hamiltonian(const LadderLattice& lat, Labeling lab, double t, double u) {
  return build_hopping(lat, lab, t) + build_interaction(lat, lab, u);
}

PauliSum build_number_op(const LadderLattice& lat, Labeling lab) {
  const int n = lat.n_qubits();
  PauliSum op(n);
  for (int i = 1; i <= lat.n_sites(); ++i)
    for (Spin s : {Spin::Up, Spin::Down}) op += number_op(n, qubit_of(lat, lab, i, s));
  return op.simplify();
}

namespace {

SymmetryOps assemble(const PauliSum& raise, PauliSum z) {
  const cplx half{0.5, 0.0};
  PauliSum lower(raise.n_qubits());
  for (auto t : raise.terms()) {
    // Pauli strings are Hermitian, so the adjoint only conjugates coefficients.
    t.coeff = std::conj(t.coeff);
    lower.add_term(t);
  }
  SymmetryOps o;
  o.x = (half * (raise + lower)).simplify();
  o.y = (cplx{0.0, -0.5} * (raise - lower)).simplify();
  o.z = z.simplify();
  o.square = o.x * o.x + o.y * o.y + o.z * o.z;
  o.square.simplify();
  return o;
}

}  // namespace

SymmetryOps build_spin_ops(const LadderLattice& lat, Labeling lab) {
  const int n = lat.n_qubits();
  PauliSum raise(n), z(n);
  for (int i = 1; i <= lat.n_sites(); ++i) {
    const int up = qubit_of(lat, lab, i, Spin::Up), dn = qubit_of(lat, lab, i, Spin::Down);
    raise += creation(n, up) * annihilation(n, dn);
    z += 0.5 * (number_op(n, up) - number_op(n, dn));
  }
  return assemble(raise.simplify(), z);
}

SymmetryOps build_eta_ops(const LadderLattice& lat, Labeling lab) {
  const int n = lat.n_qubits();
  PauliSum raise(n), z(n);
  for (int i = 1; i <= lat.n_sites(); ++i) {
    const int up = qubit_of(lat, lab, i, Spin::Up), dn = qubit_of(lat, lab, i, Spin::Down);
    raise += static_cast<double>(lat.phi(i)) * (creation(n, up) * creation(n, dn));
    z += 0.5 * (number_op(n, up) + number_op(n, dn) - PauliSum::identity(n));
  }
  return assemble(raise.simplify(), z);
}

GroundState lanczos_ground_state(const PauliSum& op, int max_iter, double tol,
                                 std::uint64_t seed) {
  if (!is_hermitian(op)) throw UsageError("lanczos_ground_state needs a Hermitian operator");
  const int n = op.n_qubits();
  StateVector in(n), out(n);
  const std::size_t dim = in.size();
  auto apply = [&](const cplx* x, cplx* y) {
    std::copy(x, x + dim, in.data());
    apply_pauli_sum(op, in, out);
    std::copy(out.data(), out.data() + dim, y);
  };
  LanczosResult r = lanczos(apply, dim, max_iter, tol, seed);
  GroundState g;
  g.energy = r.value;
  g.state = StateVector(n);
  std::copy(r.vector.begin(), r.vector.end(), g.state.data());
  g.residual = r.residual;
  g.iterations = r.iterations;
  return g;
}

std::vector<std::uint32_t> sector_indices(const LadderLattice& lat, Labeling lab) {
  if (lat.n_sites() % 2 != 0) throw ConfigError("half filling needs an even number of sites");
  std::uint64_t up = 0, dn = 0;
  for (int i = 1; i <= lat.n_sites(); ++i) {
    up |= std::uint64_t{1} << (qubit_of(lat, lab, i, Spin::Up) - 1);
    dn |= std::uint64_t{1} << (qubit_of(lat, lab, i, Spin::Down) - 1);
  }
  const int half = lat.n_sites() / 2;
  std::vector<std::uint32_t> idx;
  const std::uint64_t dim = std::uint64_t{1} << lat.n_qubits();
  for (std::uint64_t b = 0; b < dim; ++b)
    if (std::popcount(b & up) == half && std::popcount(b & dn) == half)
      idx.push_back(static_cast<std::uint32_t>(b));
  return idx;
}

}  // namespace symvqe
