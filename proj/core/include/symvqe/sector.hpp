#pragma once

#include <cstdint>
#include <vector>

#include "symvqe/linalg.hpp"
#include "symvqe/pauli.hpp"
#include "symvqe/statevector.hpp"

namespace symvqe {

// A subset of computational basis states, used as a compact representation of
// states confined to a fixed particle-number sector.
class SectorSpace {
 public:
  SectorSpace() = default;
  SectorSpace(int n_qubits, std::vector<std::uint32_t> basis);

  int n_qubits() const { return n_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<std::uint32_t>& basis() const { return basis_; }
  // Position of basis state b, or -1 outside the sector.
  std::int32_t index_of(std::uint64_t b) const { return lookup_[b]; }
  const std::int32_t* lookup() const { return lookup_.data(); }

  CVector restrict(const StateVector& s) const;
  StateVector embed(const CVector& x) const;
  // Norm of the part of s outside the sector.
  double leakage(const StateVector& s) const;

 private:
  int n_ = 0;
  std::vector<std::uint32_t> basis_;
  std::vector<std::int32_t> lookup_;
};

// Sparse (CSR) restriction of a Pauli operator that maps the sector into
// itself.
class SectorOperator {
 public:
  SectorOperator() = default;
  // Throws UsageError if op moves weight above tol out of the sector.
  static SectorOperator build(const PauliSum& op, const SectorSpace& space, double tol = 1e-12);

  std::size_t dim() const { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
  std::size_t nonzeros() const { return val_.size(); }
  void apply(const CVector& x, CVector& y) const;
  CVector apply(const CVector& x) const;
  cplx expectation(const CVector& x) const;

 private:
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> col_;
  std::vector<cplx> val_;
};

}  // namespace symvqe
