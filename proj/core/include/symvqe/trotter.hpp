#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symvqe/errors.hpp"
#include "symvqe/gates.hpp"
#include "symvqe/hubbard.hpp"
#include "symvqe/linalg.hpp"
#include "symvqe/pauli.hpp"
#include "symvqe/sector.hpp"
#include "symvqe/statevector.hpp"

namespace symvqe {

// Two-body piece of a Trotter part with a closed-form exponential.
struct TrotterTerm {
  enum class Type { Hop, ZZ } type;
  int p = 0, r = 0;    // qubits
  double coeff = 0.0;  // Hop: -coeff (c_p^+ c_r + h.c.); ZZ: coeff Z_p Z_r
};

// Ordered split H = sum of parts, each made of mutually commuting terms.
struct TrotterSplit {
  int n_qubits = 0;
  std::vector<std::string> labels;
  std::vector<PauliSum> parts;
  std::vector<std::vector<TrotterTerm>> terms;
  double constant = 0.0;  // identity part, applied as a global phase
};

// Parts A, B, C (and D when the ladder has more than two legs) from the
// bond classes, then the interaction U.
TrotterSplit make_trotter_split(const LadderLattice& lat, Labeling lab, double t, double u);

// Throws UsageError if a part has non-commuting terms or the parts do not sum
// to h.
void validate_split(const TrotterSplit& split, const PauliSum& h, double tol = 1e-12);

// exp(-i tau H_part).
Circuit part_exponential(const TrotterSplit& split, std::size_t part, double tau);
// Symmetric second-order step, first part outermost.
Circuit s2_circuit(const TrotterSplit& split, double delta);

StateVector apply_s2_step(const TrotterSplit& split, double delta, const StateVector& psi);
StateVector apply_h_power_st(const TrotterSplit& split, double delta, int n,
                             const StateVector& psi);
StateVector apply_h_power_richardson(const TrotterSplit& split, double delta, int n,
                                     const StateVector& psi);

// C(n, k) in exact integer arithmetic.
std::uint64_t binomial(int n, int k);

// H^n_ST(delta) psi = (i/delta)^n sum_k (-1)^k C(n,k) S2(delta/2)^(n-2k) psi.
// step(v, dt) applies S2(dt) to v in place. Vec needs axpy and scale.
template <class Vec, class Step>
Vec qpm_power(int n, double delta, const Vec& psi, Step&& step) {
  if (n < 0) throw UsageError("negative Hamiltonian power");
  if (n == 0) return psi;
  const double h = 0.5 * delta;
  Vec acc = psi;
  scale(acc, 0.0);
  // Powers n, n-2, ..., -n of S2(h). Forward chain for positive powers,
  // backward chain for negative ones.
  auto add = [&](int k, const Vec& v) {
    const double c = static_cast<double>(binomial(n, k));
    axpy((k % 2) ? -c : c, v, acc);
  };
  const int p0 = (n % 2) ? 1 : 2;
  Vec v = psi;
  for (int p = p0, walked = 0; p <= n; p += 2) {
    for (; walked < p; ++walked) step(v, h);
    add((n - p) / 2, v);
  }
  if (n % 2 == 0) add(n / 2, psi);
  v = psi;
  for (int p = p0, walked = 0; p <= n; p += 2) {
    for (; walked < p; ++walked) step(v, -h);
    add((n + p) / 2, v);
  }
  // (i/delta)^n
  cplx f = 1.0;
  for (int m = 0; m < n; ++m) f *= cplx(0.0, 1.0 / delta);
  scale(acc, f);
  return acc;
}

// Precompiled Trotter steps for the Krylov basis.
class PowerEngine {
 public:
  PowerEngine() = default;
  PowerEngine(const TrotterSplit& split, double delta, bool richardson);

  double delta() const { return delta_; }
  bool richardson() const { return richardson_; }

  StateVector apply(int n, const StateVector& psi) const;
  CVector apply(int n, const CVector& x, const SectorSpace& space) const;
  // apply(n, psi) for n = 0 .. count-1.
  std::vector<CVector> chain(int count, const CVector& x, const SectorSpace& space) const;

 private:
  // Index into steps_ for S2(+-delta/2) and S2(+-delta/4).
  const CompiledCircuit& step(double dt) const;
  template <class Vec, class Step>
  Vec power(int n, const Vec& psi, Step&& step) const;

  double delta_ = 0.0;
  bool richardson_ = true;
  double constant_ = 0.0;
  std::vector<double> dts_;
  std::vector<CompiledCircuit> steps_;
};

}  // namespace symvqe
