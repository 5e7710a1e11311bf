#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "symvqe/gates.hpp"
#include "symvqe/hubbard.hpp"
#include "symvqe/linalg.hpp"
#include "symvqe/sector.hpp"
#include "symvqe/statevector.hpp"

namespace symvqe {

enum class AnsatzKind { EfSwap, Hva };
AnsatzKind parse_ansatz_kind(const std::string& s);
const char* ansatz_kind_name(AnsatzKind k);

// One parametrized gate: fermionic_two_level(kind, qi, qj, scale * theta[param]).
struct AnsatzSlot {
  GateKind kind;  // FGATE, EXCHANGE or EZZ
  int qi = 0, qj = 0;
  int param = 0;
  double scale = 1.0;
};

// d psi / d theta_k = sum over terms of coeff * psi with the gate angle of
// one slot moved by shift.
struct ShiftTerm {
  std::size_t slot = 0;
  double shift = 0.0;
  double coeff = 0.0;
};

struct AnsatzCircuit {
  AnsatzKind kind = AnsatzKind::EfSwap;
  int n_qubits = 0;
  int depth = 0;
  int n_params = 0;
  Circuit prep;
  std::vector<AnsatzSlot> slots;  // application order

  // Gates of the parametrized part; slot_shift moves one slot's gate angle.
  Circuit layers(const std::vector<double>& theta, std::size_t shifted_slot = SIZE_MAX,
                 double slot_shift = 0.0) const;
  Circuit full_circuit(const std::vector<double>& theta) const;
  std::vector<ShiftTerm> derivative_terms(int k) const;
  // Parameter index shared by several slots.
  bool shared() const { return kind == AnsatzKind::Hva; }
};

// Site pairs carrying the bonding orbitals: the rungs on two-leg ladders,
// neighbouring leg sites on a single chain.
std::vector<std::pair<int, int>> bonding_pairs(const LadderLattice& lat);
// Product of (c_i^+ + c_j^+)/sqrt(2) over the bonding pairs, per spin.
Circuit build_bonding_prep(const LadderLattice& lat, Labeling lab);

AnsatzCircuit build_efswap_ansatz(const LadderLattice& lat, Labeling lab, int depth);
// Six shared parameters per layer: U1, U2, t1, t2, t3, t4 in application order.
AnsatzCircuit build_hva(const LadderLattice& lat, Labeling lab, int depth, double t, double u);

StateVector prepare_state(const AnsatzCircuit& a, const std::vector<double>& theta);
// prepare_state at theta + shift e_k. A shared parameter moves in every slot.
StateVector shifted_state(const AnsatzCircuit& a, const std::vector<double>& theta, int k,
                          double shift);
// The same with a single slot moved, in gate-angle units.
StateVector slot_shifted_state(const AnsatzCircuit& a, const std::vector<double>& theta,
                               std::size_t slot, double shift);
// d psi / d theta_k by the shift rule.
StateVector derivative_state(const AnsatzCircuit& a, const std::vector<double>& theta, int k);

// Uniform in [-range, range].
std::vector<double> random_parameters(int n, std::uint64_t seed, double range);

// The ansatz on the half-filling sector. The prep state is computed once.
class SectorAnsatz {
 public:
  SectorAnsatz(const AnsatzCircuit& a, const SectorSpace& space);

  const AnsatzCircuit& circuit() const { return a_; }
  const CVector& prep_state() const { return prep_; }
  CVector prepare(const std::vector<double>& theta) const;
  CVector slot_shifted(const std::vector<double>& theta, std::size_t slot, double shift) const;
  // d psi / d theta_k. Shared parameters whose slots are adjacent and have
  // commuting generators are differentiated by inserting -i G_k after their
  // gates, one sweep per parameter; everything else uses derivative_terms.
  CVector derivative(const std::vector<double>& theta, int k) const;
  bool generator_form() const { return !groups_.empty(); }

 private:
  struct Group {
    std::size_t begin = 0, end = 0;  // slot range
    SectorOperator generator;        // sum of scale * A_s / 2
  };
  CVector run_slots(CVector x, const std::vector<double>& theta, std::size_t begin,
                    std::size_t end) const;

  AnsatzCircuit a_;
  const SectorSpace* space_;
  CVector prep_;
  std::vector<Group> groups_;  // indexed by parameter
};

}  // namespace symvqe
