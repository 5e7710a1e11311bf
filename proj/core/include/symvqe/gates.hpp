#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symvqe/linalg.hpp"
#include "symvqe/statevector.hpp"

namespace symvqe {

class SectorSpace;

enum class GateKind {
  H,
  X,
  RX,
  RY,
  RZ,
  CNOT,  // control q0, target q1
  CZ,
  SWAP,
  FSWAP,  // SWAP * CZ
  CPHASE,
  GIVENS,
  BOGOLIUBOV,
  EXCHANGE,
  FGATE,  // exp(-i theta fswap / 2)
  EZZ,    // exp(-i theta Z Z / 2)
};

struct GateOp {
  GateKind kind;
  int q0 = 0;
  int q1 = 0;  // unused for one-qubit kinds
  double angle = 0.0;

  friend bool operator==(const GateOp&, const GateOp&) = default;
};

bool is_two_qubit(GateKind k);
bool is_parametrized(GateKind k);
const char* kind_name(GateKind k);

GateOp gate(GateKind k, int q0, double angle = 0.0);
GateOp gate(GateKind k, int q0, int q1, double angle = 0.0);

struct Circuit {
  int n_qubits = 0;
  std::vector<GateOp> ops;

  Circuit() = default;
  explicit Circuit(int n) : n_qubits(n) {}

  void add(const GateOp& g) { ops.push_back(g); }
  void append(const Circuit& c);
  // Throws UsageError if any op violates the target invariants.
  void validate() const;
};

Mat2 matrix_1q(const GateOp& g);
Mat4 matrix_2q(const GateOp& g);
// Row-major 2x2 (4 entries) or 4x4 (16 entries) depending on the kind.
std::vector<cplx> matrix_of(const GateOp& g);

// CZ(j, k) for every k strictly between i and j.
Circuit jw_cz_conjugation(int n_qubits, int i, int j);
Circuit long_range_fswap(int n_qubits, int i, int j);
// CZ string * core(i, j, theta) * CZ string. EZZ is emitted bare.
Circuit fermionic_two_level(int n_qubits, int i, int j, GateKind core, double theta);

// Where u is embedded, listed as (first, second) basis state of the pair:
//   A (10, 11)  controlled-u, control i
//   B (00, 01)  controlled-u on |0>_i
//   C (10, 01)
//   D (00, 11)
//   E (01, 11)  controlled-u, control j
//   F (00, 10)  controlled-u on |0>_j
enum class TwoLevelVariant { A, B, C, D, E, F };
Mat4 two_level_controlled_u(TwoLevelVariant v, const Mat2& u);

// One gate per line: KIND q_i [q_j] [angle].
std::string format_circuit(const Circuit& c);

void apply_gate(StateVector& s, const GateOp& g);
// Gate by gate, no fusion. Reference path.
void apply_circuit(StateVector& s, const Circuit& c);

// Executable form of a circuit. CZ-conjugated two-qubit composites are fused
// into one parity-selected sweep and long runs of monomial gates (those that
// map basis states to phased basis states) into a lookup table.
class CompiledCircuit {
 public:
  struct Options {
    bool fuse_jw = true;
    std::size_t monomial_min_run = 3;  // 0 disables table fusion
  };

  CompiledCircuit() = default;
  static CompiledCircuit compile(const Circuit& c, Options opt);
  static CompiledCircuit compile(const Circuit& c) { return compile(c, Options{}); }
  // Table fusion off, as needed by the sector kernel.
  static CompiledCircuit compile_for_sector(const Circuit& c);

  void apply(StateVector& s) const;
  // Applies the circuit to a vector stored on a particle-number sector. Every
  // gate must map the sector into itself; UsageError otherwise.
  void apply(CVector& x, const SectorSpace& space) const;
  int n_qubits() const { return n_; }
  std::size_t instruction_count() const { return ins_.size(); }

  struct Monomial {
    std::vector<std::uint32_t> target;
    std::vector<cplx> phase;
  };
  struct Instruction {
    enum class Type { One, Two, Parity, Table } type;
    int qi = 0, qj = 0;
    Mat2 u1{};
    Mat4 u{};
    Mat4 u_odd{};
    std::uint64_t mask = 0;
    std::size_t table = 0;
    bool diagonal = false;    // no off-diagonal entries
    bool conserving = false;  // couples only |01> and |10>
  };

 private:
  int n_ = 0;
  std::vector<Instruction> ins_;
  std::vector<Monomial> tables_;
};

// True for kinds whose matrix maps each basis state to a phased basis state.
bool is_monomial(GateKind k);

}  // namespace symvqe
