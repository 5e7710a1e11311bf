#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace symvqe {

using cplx = std::complex<double>;

// Row-major 2x2 and 4x4 gate matrices. For two-qubit gates on (qi, qj) the
// basis order is |0_i 0_j>, |0_i 1_j>, |1_i 0_j>, |1_i 1_j>.
using Mat2 = std::array<cplx, 4>;
using Mat4 = std::array<cplx, 16>;

constexpr int kMaxQubits = 24;

// Dense state of n qubits. Qubit k (1-based) lives in bit k-1 of the
// amplitude index.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(int n_qubits);  // all amplitudes zero

  int n_qubits() const { return n_; }
  std::size_t size() const { return amp_.size(); }

  cplx* data() { return amp_.data(); }
  const cplx* data() const { return amp_.data(); }
  cplx& operator[](std::size_t i) { return amp_[i]; }
  const cplx& operator[](std::size_t i) const { return amp_[i]; }

  std::vector<cplx>& amplitudes() { return amp_; }
  const std::vector<cplx>& amplitudes() const { return amp_; }

  void set_zero();

 private:
  int n_ = 0;
  std::vector<cplx> amp_;
};

StateVector zero_state(int n_qubits);
StateVector basis_state(int n_qubits, std::uint64_t index);

void apply_one_qubit(StateVector& s, int q, const Mat2& u);
void apply_two_qubit(StateVector& s, int qi, int qj, const Mat4& u);

// Applies u_even or u_odd depending on the parity of the amplitude bits in
// `mask` (which must not contain qi or qj). This is the single-sweep form of a
// two-qubit gate conjugated by a string of CZ gates sharing one of its targets.
void apply_two_qubit_parity(StateVector& s, int qi, int qj, const Mat4& u_even,
                            const Mat4& u_odd, std::uint64_t mask);

// Multiplies amplitude b by phases[b]. Used for fused diagonal gates.
void apply_diagonal(StateVector& s, const std::vector<cplx>& phases);

cplx inner(const StateVector& bra, const StateVector& ket);
void axpy(cplx alpha, const StateVector& x, StateVector& y);
void scale(StateVector& s, cplx alpha);
double norm(const StateVector& s);
double distance(const StateVector& a, const StateVector& b);

// Binary dump: 4-byte little-endian n_qubits, then (re, im) doubles.
void write_binary(const StateVector& s, std::ostream& os);
StateVector read_binary(std::istream& is);

bool is_unitary(const Mat2& u, double tol);
bool is_unitary(const Mat4& u, double tol);

}  // namespace symvqe
