#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "symvqe/pauli.hpp"
#include "symvqe/statevector.hpp"

namespace symvqe {

enum class Labeling { SpinUniform, SpinAlternating };

Labeling parse_labeling(const std::string& s);
const char* labeling_name(Labeling l);

enum class Spin { Up = 0, Down = 1 };

struct Bond {
  int i = 0, j = 0;   // 1-based sites, i < j
  char st_class = 'A';  // Trotter part: A, B, C (and D for ly > 2)
  int hva_class = 0;    // 1..4 on two-leg ladders, 0 otherwise
};

// Open lx x ly ladder. Site (x, y), 0-based, is numbered y*lx + x + 1, so the
// 4x2 cluster has sites 1-4 on the lower leg and 5-8 on the upper leg.
class LadderLattice {
 public:
  LadderLattice(int lx, int ly);
  // Arbitrary bond graph. phi holds +1/-1 per site; every bond must join
  // opposite signs.
  static LadderLattice from_bonds(int n_sites, std::vector<Bond> bonds, std::vector<int> phi);

  int lx() const { return lx_; }
  int ly() const { return ly_; }
  int n_sites() const { return n_sites_; }
  int n_qubits() const { return 2 * n_sites_; }
  const std::vector<Bond>& bonds() const { return bonds_; }
  int phi(int site) const { return phi_.at(site - 1); }
  bool is_ladder() const { return lx_ > 0; }

  int site(int x, int y) const { return y * lx_ + x + 1; }
  int x_of(int site) const { return (site - 1) % lx_; }
  int y_of(int site) const { return (site - 1) / lx_; }

  // Interaction class of a site for the HVA: 1 on the end columns, 2 inside.
  int hva_site_class(int site) const;
  bool supports_hva() const { return lx_ >= 2 && ly_ == 2; }

  // Site permutations of I, C2, sigma1 (mirror within rows), sigma2 (mirror
  // between legs). perm[s-1] is the image of site s.
  std::array<std::vector<int>, 4> point_group() const;

 private:
  LadderLattice() = default;
  void validate() const;

  int lx_ = 0, ly_ = 0, n_sites_ = 0;
  std::vector<Bond> bonds_;
  std::vector<int> phi_;
};

// 1-based qubit index of (site, spin).
int qubit_of(const LadderLattice& lat, Labeling lab, int site, Spin s);

PauliSum hopping_term(int n_qubits, int p, int r, double t);
PauliSum build_hamiltonian(const LadderLattice& lat, Labeling lab, double t, double u);
PauliSum build_hopping(const LadderLattice& lat, Labeling lab, double t);
PauliSum build_interaction(const LadderLattice& lat, Labeling lab, double u);

struct SymmetryOps {
  PauliSum square;  // S^2 or eta^2
  PauliSum z;
  PauliSum x;
  PauliSum y;
};
SymmetryOps build_spin_ops(const LadderLattice& lat, Labeling lab);
SymmetryOps build_eta_ops(const LadderLattice& lat, Labeling lab);
PauliSum build_number_op(const LadderLattice& lat, Labeling lab);

struct GroundState {
  double energy = 0.0;
  StateVector state;
  double residual = 0.0;
  int iterations = 0;
};
GroundState lanczos_ground_state(const PauliSum& op, int max_iter = 300, double tol = 1e-9,
                                 std::uint64_t seed = 7);

// Basis indices with N_up = N_down = L/2 (S_z = 0 and eta_z = 0), ascending.
std::vector<std::uint32_t> sector_indices(const LadderLattice& lat, Labeling lab);

struct GateCountRow {
  std::string operation;
  std::string gate;       // two-qubit gate realizing the operation
  int gate_count = 0;
  int jw_cz_count = 0;    // CZ gates spent on Jordan-Wigner strings
};
// Counts taken from the circuits this library builds for each operation.
std::vector<GateCountRow> gate_count_report(const LadderLattice& lat, Labeling lab);

}  // namespace symvqe
