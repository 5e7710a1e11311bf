#pragma once

#include <optional>
#include <vector>

#include "symvqe/linalg.hpp"
#include "symvqe/pauli.hpp"
#include "symvqe/projection.hpp"
#include "symvqe/sector.hpp"
#include "symvqe/statevector.hpp"
#include "symvqe/trotter.hpp"

namespace symvqe {

struct SubspaceMatrices {
  CMatrix h;
  CMatrix s;
  double symmetrization_change = 0.0;  // largest entry change made by hermitize
  std::size_t dim() const { return h.rows(); }
};

struct GevpSolution {
  double e0 = 0.0;
  CVector v0;  // S-normalized
  int retained_dim = 0;
  std::vector<double> energies;  // ascending, retained subspace
  std::vector<CVector> vectors;  // S-orthonormal, vectors[0] == v0
};

// H^i_ST psi for i = 0 .. d-1.
std::vector<StateVector> build_basis(const StateVector& psi, const PowerEngine& eng, int d);

// Full-register reference assembly through the circuit-form projector.
SubspaceMatrices assemble_h_s(const std::vector<StateVector>& basis, const Projector& p,
                              const PauliSum& h);
double subspace_expectation(const std::vector<StateVector>& basis, const Projector& p,
                            const CVector& v0, const PauliSum& obs);
double fidelity(const std::vector<StateVector>& basis, const Projector& p, const CVector& v0,
                const StateVector& exact);

// Canonical orthonormalization: S eigenvalues below s_threshold * max are
// dropped. Eigenvectors have their first significant component real positive.
GevpSolution solve_gevp(const SubspaceMatrices& m, double s_threshold = 1e-10);

// A sector vector with the images that turn projected forms into dot
// products: <x|P|y> = dot(x.bra, y.ket) and <x|H P|y> = dot(x.hbra, y.ket).
struct ProjectedVector {
  CVector vec;
  CVector bra;
  CVector ket;
  CVector hbra;
};

class SubspaceEngine {
 public:
  // All references must outlive the engine.
  SubspaceEngine(const SectorProjector& p, const SectorOperator& h, const PowerEngine& eng,
                 int dim);

  int dim() const { return dim_; }
  const SectorProjector& projector() const { return *p_; }
  const SectorSpace& space() const { return p_->space(); }

  ProjectedVector project(CVector x) const;
  std::vector<ProjectedVector> basis(const CVector& psi) const;
  SubspaceMatrices matrices(const std::vector<ProjectedVector>& b) const { return matrices_of(b); }
  static SubspaceMatrices matrices_of(const std::vector<ProjectedVector>& b);

  // [i][j] = <a_i|P|b_j> and <a_i|H P|b_j>.
  static CMatrix overlap(const std::vector<ProjectedVector>& a,
                         const std::vector<ProjectedVector>& b);
  static CMatrix hamiltonian(const std::vector<ProjectedVector>& a,
                             const std::vector<ProjectedVector>& b);
  // [i][j] = <b_i|O P|b_j> for an O commuting with P.
  CMatrix observable(const std::vector<ProjectedVector>& b, const SectorOperator& obs) const;

  double expectation(const std::vector<ProjectedVector>& b, const CVector& v0,
                     const SectorOperator& obs) const;
  // |sum_j v_j <exact|P|b_j>|^2 / (v^H S v).
  double fidelity(const std::vector<ProjectedVector>& b, const CVector& v0,
                  const CVector& exact) const;

 private:
  const SectorProjector* p_;
  const SectorOperator* h_;
  const PowerEngine* eng_;
  int dim_;
  // Q^H H Q when H maps the compiled projector's range into itself; then
  // Q^H H x = (Q^H H Q) Q^H x and the H application per vector is skipped.
  std::optional<CMatrix> h_range_;
};

}  // namespace symvqe
