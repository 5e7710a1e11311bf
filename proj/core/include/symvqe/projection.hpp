#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symvqe/gates.hpp"
#include "symvqe/hubbard.hpp"
#include "symvqe/linalg.hpp"
#include "symvqe/pauli.hpp"
#include "symvqe/sector.hpp"
#include "symvqe/statevector.hpp"

namespace symvqe {

// ---- Point group -----------------------------------------------------------

struct PointGroupElement {
  std::string name;               // I, C2, sigma1, sigma2
  std::vector<int> site_permutation;  // [s-1] is the image of site s
  double character = 1.0;
};

// C2v characters in the order I, C2, sigma1, sigma2 for A1, A2, B1, B2.
std::array<double, 4> irrep_characters(const std::string& irrep);
std::vector<PointGroupElement> c2v_elements(const LadderLattice& lat,
                                            const std::array<double, 4>& characters);

// Mode permutation on the 2L qubits induced by a site permutation, applied
// identically to both spins. [q-1] is the image of qubit q.
std::vector<int> lift_site_permutation(const LadderLattice& lat, Labeling lab,
                                       const std::vector<int>& site_perm);

// Adjacent transpositions (p, p+1), in application order, whose fermionic
// swaps map mode i to perm[i-1]. Bubble sort, scanning from low to high p.
std::vector<std::pair<int, int>> amida_decomposition(const std::vector<int>& perm);
Circuit fswap_network(int n_qubits, const std::vector<int>& perm);

Circuit spatial_circuit(const LadderLattice& lat, Labeling lab, const PointGroupElement& g);
StateVector apply_spatial_g(const LadderLattice& lat, Labeling lab, const PointGroupElement& g,
                            const StateVector& psi);

// ---- SU(2) rotations -------------------------------------------------------

// exp(-i beta S_y): fermionic Givens rotations on (i_up, i_down).
Circuit spin_rotation_y(double beta, const LadderLattice& lat, Labeling lab);
// exp(-i beta eta_y): fermionic Bogoliubov rotations with staggered sign.
Circuit eta_rotation_y(double beta, const LadderLattice& lat, Labeling lab);
Circuit spin_rotation_z(double alpha, const LadderLattice& lat, Labeling lab);
Circuit eta_rotation_z(double alpha, const LadderLattice& lat, Labeling lab);

// ---- Quadrature ------------------------------------------------------------

double legendre_p(int j, double x);

struct QuadratureGrid {
  std::vector<double> beta_nodes;    // ascending, cos(beta) are the Legendre roots
  std::vector<double> beta_weights;  // sum to 2
  int alpha_count = 1;               // periodic trapezoid on [0, 2 pi)
};
QuadratureGrid gauss_legendre(int n, int alpha_count = 1);

// Joint (alpha, beta) grid on the sphere; weights sum to 1.
struct JointGrid {
  std::vector<double> alpha, beta, weight;
};
JointGrid lebedev6_grid();

enum class Su2 { Spin, Eta };

// Full-state projector onto total J (J_z = 0 inputs), product grid form:
// (2J+1)/(2 N_az) sum_k sum_l w_l P_J(cos b_l) exp(-i a_k J_z) exp(-i b_l J_y).
StateVector apply_su2_projection(const LadderLattice& lat, Labeling lab, Su2 which, int j,
                                 const QuadratureGrid& grid, const StateVector& psi);
// Same with a joint sphere grid: (2J+1) sum_k w_k P_J(cos b_k) R(a_k, b_k).
StateVector apply_su2_projection(const LadderLattice& lat, Labeling lab, Su2 which, int j,
                                 const JointGrid& grid, const StateVector& psi);

// ---- Projector -------------------------------------------------------------

struct ProjectorSpec {
  bool use_spatial = false;
  bool use_spin = false;
  bool use_eta = false;
  int j_spin = 0;
  int j_eta = 0;
  int n_polar_spin = 4;
  int n_polar_eta = 4;
  int n_azimuth = 6;
  std::string irrep = "A1";

  static ProjectorSpec full();
  bool active() const { return use_spatial || use_spin || use_eta; }
};

// P = P_eta P_S P_spatial as a linear combination of circuits.
class Projector {
 public:
  Projector(const LadderLattice& lat, Labeling lab, ProjectorSpec spec);

  const ProjectorSpec& spec() const { return spec_; }
  bool active() const { return spec_.active(); }
  int n_qubits() const { return n_; }
  // (2 eta + 1)/2 * (2 S + 1)/2 * d / |G| over the active factors.
  double prefactor() const { return prefactor_; }
  // Circuit applications per use of apply_matrix_form.
  std::size_t circuit_count() const;

  // Azimuth-integrated form, including the prefactor. Exact for overlaps
  // with bras in the N_up = N_down = L/2 sector.
  StateVector apply_matrix_form(const StateVector& ket) const;
  // <bra| middle P |ket>. Both states must lie in the half-filling sector.
  cplx matrix_element(const StateVector& bra, const StateVector& ket,
                      const PauliSum* middle = nullptr) const;
  // Full projected state with the azimuthal factors.
  StateVector apply_full(const StateVector& psi) const;
  // Sector restriction of the matrix form.
  CVector apply_sector(const CVector& x, const SectorSpace& space) const;

 private:
  struct Term {
    double weight;
    CompiledCircuit circuit;
  };
  void check_sector(const StateVector& s) const;
  static void accumulate(const std::vector<Term>& terms, StateVector& v);

  LadderLattice lat_;
  Labeling lab_;
  ProjectorSpec spec_;
  int n_ = 0;
  double prefactor_ = 1.0;
  std::uint64_t up_mask_ = 0, down_mask_ = 0;
  std::vector<Term> spatial_, spin_, eta_;
};

// Low-rank form P = Q M Q^H of the sector-restricted projector, found by a
// randomized range finder and checked against the circuit form.
class CompiledProjector {
 public:
  // nullopt if the rank exceeds max_rank or the check fails.
  static std::optional<CompiledProjector> build(const Projector& p, const SectorSpace& space,
                                                std::uint64_t seed, std::size_t max_rank = 1024,
                                                double check_tol = 1e-12);

  std::size_t rank() const { return q_.size(); }
  std::size_t dim() const { return dim_; }
  double check_error() const { return check_error_; }
  // Q^H x
  CVector coords(const CVector& x) const;
  // M Q^H x
  CVector ket_coords(const CVector& x) const;
  CVector apply(const CVector& x) const;
  const std::vector<CVector>& columns() const { return q_; }
  const CMatrix& middle() const { return m_; }

 private:
  std::size_t dim_ = 0;
  std::vector<CVector> q_;  // orthonormal columns
  CMatrix m_;
  double check_error_ = 0.0;
};

enum class ProjectorMode { Auto, Circuit, Compiled };
ProjectorMode parse_projector_mode(const std::string& s);

// Sector-space projected forms <a|P|b> = dot(bra_image(a), ket_image(b)).
class SectorProjector {
 public:
  SectorProjector(const Projector& p, const SectorSpace& space, ProjectorMode mode,
                  std::uint64_t seed = 1);

  bool compiled() const { return compiled_.has_value(); }
  std::size_t rank() const { return compiled_ ? compiled_->rank() : 0; }
  double prefactor() const { return projector_->prefactor(); }
  const SectorSpace& space() const { return *space_; }
  const CompiledProjector* compiled_form() const { return compiled_ ? &*compiled_ : nullptr; }

  CVector bra_image(const CVector& a) const;
  CVector ket_image(const CVector& b) const;
  CVector apply(const CVector& b) const;  // P b in the sector

 private:
  const Projector* projector_;
  const SectorSpace* space_;
  std::optional<CompiledProjector> compiled_;
};

}  // namespace symvqe
