#include "symvqe/trotter.hpp"

#include <cmath>

#include "symvqe/errors.hpp"

namespace symvqe {

TrotterSplit make_trotter_split(const LadderLattice& lat, Labeling lab, double t, double u) {
  const int n = lat.n_qubits();
  TrotterSplit split;
  split.n_qubits = n;
  for (char cls : {'A', 'B', 'C', 'D'}) {
    PauliSum part(n);
    std::vector<TrotterTerm> terms;
    for (const Bond& b : lat.bonds()) {
      if (b.st_class != cls) continue;
      for (Spin s : {Spin::Up, Spin::Down}) {
        const int p = qubit_of(lat, lab, b.i, s), r = qubit_of(lat, lab, b.j, s);
        terms.push_back({TrotterTerm::Type::Hop, p, r, t});
        part += hopping_term(n, p, r, t);
      }
    }
    if (terms.empty()) continue;
    split.labels.push_back(std::string("t_") + cls);
    split.parts.push_back(std::move(part));
    split.terms.push_back(std::move(terms));
  }
  PauliSum inter(n);
  std::vector<TrotterTerm> terms;
  for (int i = 1; i <= lat.n_sites(); ++i) {
    const int p = qubit_of(lat, lab, i, Spin::Up), r = qubit_of(lat, lab, i, Spin::Down);
    terms.push_back({TrotterTerm::Type::ZZ, p, r, u / 4});
    inter.add_term({u / 4, 0, (std::uint64_t{1} << (p - 1)) | (std::uint64_t{1} << (r - 1))});
  }
  split.labels.push_back("U");
  split.parts.push_back(std::move(inter));
  split.terms.push_back(std::move(terms));
  return split;
}

void validate_split(const TrotterSplit& split, const PauliSum& h, double tol) {
  if (split.parts.size() != split.terms.size() || split.parts.size() != split.labels.size())
    throw UsageError("inconsistent Trotter split");
  if (split.parts.empty()) throw UsageError("empty Trotter split");
  PauliSum total = PauliSum::identity(split.n_qubits, split.constant);
  for (std::size_t k = 0; k < split.parts.size(); ++k) {
    PauliSum part = split.parts[k];
    part.simplify();
    const auto& ts = part.terms();
    for (std::size_t a = 0; a < ts.size(); ++a)
      for (std::size_t b = a + 1; b < ts.size(); ++b)
        if (!terms_commute(ts[a], ts[b]))
          throw UsageError("Trotter part " + split.labels[k] + " has non-commuting terms");
    total += part;
  }
  total -= h;
  total.simplify(tol);
  if (total.size() != 0) throw UsageError("Trotter parts do not sum to the Hamiltonian");
}

Circuit part_exponential(const TrotterSplit& split, std::size_t part, double tau) {
  const int n = split.n_qubits;
  Circuit c(n);
  for (const TrotterTerm& term : split.terms.at(part)) {
    if (term.type == TrotterTerm::Type::Hop)
      c.append(fermionic_two_level(n, term.p, term.r, GateKind::EXCHANGE, -2.0 * term.coeff * tau));
    else
      c.add(gate(GateKind::EZZ, term.p, term.r, 2.0 * term.coeff * tau));
  }
  return c;
}

Circuit s2_circuit(const TrotterSplit& split, double delta) {
  const std::size_t m = split.parts.size();
  Circuit c(split.n_qubits);
  // Operator A B C U C B A: the rightmost A acts first.
  for (std::size_t k = 0; k + 1 < m; ++k) c.append(part_exponential(split, k, delta / 2));
  c.append(part_exponential(split, m - 1, delta));
  for (std::size_t k = m - 1; k-- > 0;) c.append(part_exponential(split, k, delta / 2));
  return c;
}

namespace {

cplx phase(double constant, double dt) { return std::exp(cplx(0.0, -constant * dt)); }

}  // namespace

StateVector apply_s2_step(const TrotterSplit& split, double delta, const StateVector& psi) {
  StateVector out = psi;
  CompiledCircuit::compile(s2_circuit(split, delta)).apply(out);
  if (split.constant != 0.0) scale(out, phase(split.constant, delta));
  return out;
}

StateVector apply_h_power_st(const TrotterSplit& split, double delta, int n,
                             const StateVector& psi) {
  if (delta <= 0.0) throw UsageError("Trotter step must be positive");
  return PowerEngine(split, delta, false).apply(n, psi);
}

StateVector apply_h_power_richardson(const TrotterSplit& split, double delta, int n,
                                     const StateVector& psi) {
  if (delta <= 0.0) throw UsageError("Trotter step must be positive");
  return PowerEngine(split, delta, true).apply(n, psi);
}

std::uint64_t binomial(int n, int k) {
  if (n < 0 || n > 62) throw UsageError("binomial order out of range");
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  // r * (n - k + j) is divisible by j at every step.
  for (int j = 1; j <= k; ++j) r = r * static_cast<std::uint64_t>(n - k + j) / j;
  return r;
}

PowerEngine::PowerEngine(const TrotterSplit& split, double delta, bool richardson)
    : delta_(delta), richardson_(richardson), constant_(split.constant) {
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  dts_ = {delta / 2, -delta / 2, delta / 4, -delta / 4};
  for (double dt : dts_) steps_.push_back(CompiledCircuit::compile_for_sector(s2_circuit(split, dt)));
}

const CompiledCircuit& PowerEngine::step(double dt) const {
  for (std::size_t k = 0; k < dts_.size(); ++k)
    if (dts_[k] == dt) return steps_[k];
  throw UsageError("no compiled Trotter step for this time");
}

template <class Vec, class Step>
Vec PowerEngine::power(int n, const Vec& psi, Step&& apply_step) const {
  auto with_phase = [&](Vec& v, double dt) {
    apply_step(v, dt);
    if (constant_ != 0.0) scale(v, phase(constant_, dt));
  };
  if (!richardson_) return qpm_power(n, delta_, psi, with_phase);
  if (n == 0) return psi;
  Vec fine = qpm_power(n, delta_ / 2, psi, with_phase);
  const Vec coarse = qpm_power(n, delta_, psi, with_phase);
  scale(fine, 4.0 / 3.0);
  axpy(-1.0 / 3.0, coarse, fine);
  return fine;
}

StateVector PowerEngine::apply(int n, const StateVector& psi) const {
  return power(n, psi, [&](StateVector& v, double dt) { step(dt).apply(v); });
}

CVector PowerEngine::apply(int n, const CVector& x, const SectorSpace& space) const {
  return power(n, x, [&](CVector& v, double dt) { step(dt).apply(v, space); });
}

std::vector<CVector> PowerEngine::chain(int count, const CVector& x,
                                        const SectorSpace& space) const {
  std::vector<CVector> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(apply(i, x, space));
  return out;
}

}  // namespace symvqe
