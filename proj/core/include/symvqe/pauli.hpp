#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "symvqe/statevector.hpp"

namespace symvqe {

// coeff * P where P = i^{|x&z|} X^x Z^z, i.e. bit q of (x, z) selects the
// letter on qubit q+1: (0,0) I, (1,0) X, (1,1) Y, (0,1) Z.
struct PauliTerm {
  cplx coeff{1.0, 0.0};
  std::uint64_t x = 0;
  std::uint64_t z = 0;
};

class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(int n_qubits) : n_(n_qubits) {}

  static PauliSum identity(int n_qubits, cplx coeff = 1.0);
  // Letters as pairs (qubit, 'X'|'Y'|'Z'), e.g. {{1,'X'},{3,'Z'}}.
  static PauliSum term(int n_qubits, std::initializer_list<std::pair<int, char>> letters,
                       cplx coeff = 1.0);

  int n_qubits() const { return n_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  void add_term(const PauliTerm& t);
  // Merges equal strings and drops coefficients with magnitude below tol.
  PauliSum& simplify(double tol = 1e-14);

  PauliSum& operator+=(const PauliSum& o);
  PauliSum& operator-=(const PauliSum& o);
  PauliSum& operator*=(cplx s);

  std::string to_string() const;

 private:
  int n_ = 0;
  std::vector<PauliTerm> terms_;
};

PauliSum operator+(PauliSum a, const PauliSum& b);
PauliSum operator-(PauliSum a, const PauliSum& b);
PauliSum operator*(cplx s, PauliSum a);
PauliSum operator*(const PauliSum& a, const PauliSum& b);

// Product of two Pauli strings, returned in canonical form.
PauliTerm multiply(const PauliTerm& a, const PauliTerm& b);

// Jordan-Wigner ladder operators: c_q = Z_1 ... Z_{q-1} (X_q + i Y_q) / 2,
// with |1> the occupied state.
PauliSum creation(int n_qubits, int q);
PauliSum annihilation(int n_qubits, int q);
PauliSum number_op(int n_qubits, int q);

// True if every coefficient is real within tol after simplification.
bool is_hermitian(const PauliSum& p, double tol = 1e-12);
bool terms_commute(const PauliTerm& a, const PauliTerm& b);

void apply_pauli_sum(const PauliSum& op, const StateVector& in, StateVector& out);
StateVector apply_pauli_sum(const PauliSum& op, const StateVector& in);
cplx expectation(const PauliSum& op, const StateVector& psi);

}  // namespace symvqe
