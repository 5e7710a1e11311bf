#include "symvqe/ansatz.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <optional>
#include <random>

#include "symvqe/errors.hpp"
#include "symvqe/pauli.hpp"

namespace symvqe {

AnsatzKind parse_ansatz_kind(const std::string& s) {
  if (s == "efswap") return AnsatzKind::EfSwap;
  if (s == "hva") return AnsatzKind::Hva;
  throw ConfigError("unknown ansatz '" + s + "' (expected efswap or hva)");
}

const char* ansatz_kind_name(AnsatzKind k) { return k == AnsatzKind::EfSwap ? "efswap" : "hva"; }

Circuit AnsatzCircuit::layers(const std::vector<double>& theta, std::size_t shifted_slot,
                              double slot_shift) const {
  if (static_cast<int>(theta.size()) != n_params)
    throw UsageError("parameter vector has length " + std::to_string(theta.size()) +
                     ", ansatz expects " + std::to_string(n_params));
  Circuit c(n_qubits);
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const AnsatzSlot& sl = slots[s];
    double angle = sl.scale * theta[sl.param];
    if (s == shifted_slot) angle += slot_shift;
    c.append(fermionic_two_level(n_qubits, sl.qi, sl.qj, sl.kind, angle));
  }
  return c;
}

Circuit AnsatzCircuit::full_circuit(const std::vector<double>& theta) const {
  Circuit c = prep;
  c.append(layers(theta));
  return c;
}

std::vector<ShiftTerm> AnsatzCircuit::derivative_terms(int k) const {
  if (k < 0 || k >= n_params) throw UsageError("parameter index out of range");
  constexpr double pi = std::numbers::pi;
  std::vector<ShiftTerm> terms;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const AnsatzSlot& sl = slots[s];
    if (sl.param != k) continue;
    if (sl.kind == GateKind::EXCHANGE) {
      // (XX+YY)/2 has eigenvalues -1, 0, 1: a two-sided shift is exact.
      terms.push_back({s, pi, sl.scale / 4});
      terms.push_back({s, -pi, -sl.scale / 4});
    } else {
      // exp(-i a P / 2) with P^2 = I: d/da = exp(-i (a + pi) P / 2) / 2.
      terms.push_back({s, pi, sl.scale / 2});
    }
  }
  return terms;
}

std::vector<std::pair<int, int>> bonding_pairs(const LadderLattice& lat) {
  if (lat.n_sites() % 2) throw ConfigError("bonding-orbital prep needs an even number of sites");
  std::vector<std::pair<int, int>> pairs;
  if (lat.is_ladder() && lat.ly() == 2) {
    for (int x = 0; x < lat.lx(); ++x) pairs.push_back({lat.site(x, 0), lat.site(x, 1)});
  } else if (lat.is_ladder() && lat.ly() == 1) {
    for (int x = 0; x + 1 < lat.lx(); x += 2) pairs.push_back({lat.site(x, 0), lat.site(x + 1, 0)});
  } else {
    throw ConfigError("bonding-orbital prep needs a one- or two-leg ladder");
  }
  return pairs;
}

Circuit build_bonding_prep(const LadderLattice& lat, Labeling lab) {
  const int n = lat.n_qubits();
  Circuit c(n);
  // mode[a][x]: the qubit occupied in pair a when its bit x is set.
  std::vector<std::array<int, 2>> mode;
  for (Spin sp : {Spin::Up, Spin::Down})
    for (auto [i, j] : bonding_pairs(lat)) mode.push_back({qubit_of(lat, lab, i, sp), qubit_of(lat, lab, j, sp)});

  for (const auto& m : mode) {
    c.add(gate(GateKind::H, m[0]));
    c.add(gate(GateKind::CNOT, m[0], m[1]));
    c.add(gate(GateKind::X, m[0]));
  }
  // The qubit state is a product of (|10> + |01>)/sqrt(2). The fermionic
  // product of (c_lo^+ + c_hi^+) differs by the sign of ordering the chosen
  // modes, which factorizes into CZ (or Z) phases between pairs.
  for (std::size_t a = 0; a < mode.size(); ++a)
    for (std::size_t b = a + 1; b < mode.size(); ++b) {
      int f[2][2];
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) f[x][y] = mode[a][x] > mode[b][y];
      const int alpha = f[0][0] ^ f[1][0], beta = f[0][0] ^ f[0][1];
      const int gamma = f[0][0] ^ f[0][1] ^ f[1][0] ^ f[1][1];
      if (gamma) {
        c.add(gate(GateKind::CZ, mode[a][beta ? 0 : 1], mode[b][alpha ? 0 : 1]));
      } else {
        // RZ(pi) = -i Z; the global phase is irrelevant.
        if (alpha) c.add(gate(GateKind::RZ, mode[a][1], std::numbers::pi));
        if (beta) c.add(gate(GateKind::RZ, mode[b][1], std::numbers::pi));
      }
    }
  return c;
}

AnsatzCircuit build_efswap_ansatz(const LadderLattice& lat, Labeling lab, int depth) {
  if (depth < 1) throw ConfigError("depth must be at least 1");
  AnsatzCircuit a;
  a.kind = AnsatzKind::EfSwap;
  a.n_qubits = lat.n_qubits();
  a.depth = depth;
  a.prep = build_bonding_prep(lat, lab);
  std::vector<Bond> bonds = lat.bonds();
  std::stable_sort(bonds.begin(), bonds.end(),
                   [](const Bond& x, const Bond& y) { return x.st_class < y.st_class; });
  int p = 0;
  for (int l = 0; l < depth; ++l) {
    for (Spin sp : {Spin::Up, Spin::Down})
      for (const Bond& b : bonds)
        a.slots.push_back({GateKind::FGATE, qubit_of(lat, lab, b.i, sp), qubit_of(lat, lab, b.j, sp), p++, 1.0});
    for (int s = 1; s <= lat.n_sites(); ++s)
      a.slots.push_back({GateKind::EZZ, qubit_of(lat, lab, s, Spin::Up),
                         qubit_of(lat, lab, s, Spin::Down), p++, 1.0});
  }
  a.n_params = p;
  return a;
}

AnsatzCircuit build_hva(const LadderLattice& lat, Labeling lab, int depth, double t, double u) {
  if (depth < 1) throw ConfigError("depth must be at least 1");
  if (!lat.supports_hva()) throw ConfigError("the HVA partition is defined on two-leg ladders");
  AnsatzCircuit a;
  a.kind = AnsatzKind::Hva;
  a.n_qubits = lat.n_qubits();
  a.depth = depth;
  a.n_params = 6 * depth;
  a.prep = build_bonding_prep(lat, lab);
  // exp(-i theta h / 2) with h = -t (c^+ c + h.c.) is EXCHANGE(-t theta);
  // exp(-i theta (U/4) Z Z / 2) is EZZ(U theta / 4).
  for (int l = 0; l < depth; ++l) {
    for (int cls = 1; cls <= 2; ++cls)
      for (int s = 1; s <= lat.n_sites(); ++s)
        if (lat.hva_site_class(s) == cls)
          a.slots.push_back({GateKind::EZZ, qubit_of(lat, lab, s, Spin::Up),
                             qubit_of(lat, lab, s, Spin::Down), 6 * l + cls - 1, u / 4});
    for (int cls = 1; cls <= 4; ++cls)
      for (Spin sp : {Spin::Up, Spin::Down})
        for (const Bond& b : lat.bonds())
          if (b.hva_class == cls)
            a.slots.push_back({GateKind::EXCHANGE, qubit_of(lat, lab, b.i, sp),
                               qubit_of(lat, lab, b.j, sp), 6 * l + cls + 1, -t});
  }
  return a;
}

namespace {

StateVector run(const AnsatzCircuit& a, const Circuit& layers) {
  StateVector s = zero_state(a.n_qubits);
  Circuit c = a.prep;
  c.append(layers);
  CompiledCircuit::compile(c).apply(s);
  return s;
}

}  // namespace

StateVector prepare_state(const AnsatzCircuit& a, const std::vector<double>& theta) {
  return run(a, a.layers(theta));
}

StateVector shifted_state(const AnsatzCircuit& a, const std::vector<double>& theta, int k,
                          double shift) {
  if (k < 0 || k >= a.n_params) throw UsageError("parameter index out of range");
  std::vector<double> th = theta;
  if (static_cast<int>(th.size()) == a.n_params) th[k] += shift;
  return prepare_state(a, th);
}

StateVector slot_shifted_state(const AnsatzCircuit& a, const std::vector<double>& theta,
                               std::size_t slot, double shift) {
  if (slot >= a.slots.size()) throw UsageError("slot index out of range");
  return run(a, a.layers(theta, slot, shift));
}

StateVector derivative_state(const AnsatzCircuit& a, const std::vector<double>& theta, int k) {
  StateVector d(a.n_qubits);
  for (const ShiftTerm& term : a.derivative_terms(k))
    axpy(term.coeff, slot_shifted_state(a, theta, term.slot, term.shift), d);
  return d;
}

std::vector<double> random_parameters(int n, std::uint64_t seed, double range) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-range, range);
  std::vector<double> th(n);
  for (double& x : th) x = dist(rng);
  return th;
}

namespace {

// A with gate = exp(-i angle A / 2); empty for kinds without a fermionic form here.
std::optional<PauliSum> slot_generator(int n, const AnsatzSlot& s) {
  switch (s.kind) {
    case GateKind::EZZ:
      return PauliSum::term(n, {{s.qi, 'Z'}, {s.qj, 'Z'}});
    case GateKind::EXCHANGE:
    case GateKind::FGATE: {
      PauliSum g = creation(n, s.qi) * annihilation(n, s.qj) +
                   creation(n, s.qj) * annihilation(n, s.qi);
      if (s.kind == GateKind::FGATE)
        g += PauliSum::identity(n) - number_op(n, s.qi) - number_op(n, s.qj);
      return g.simplify();
    }
    default:
      return std::nullopt;
  }
}

bool commute(const PauliSum& a, const PauliSum& b) {
  return (a * b - b * a).simplify(1e-13).size() == 0;
}

}  // namespace

SectorAnsatz::SectorAnsatz(const AnsatzCircuit& a, const SectorSpace& space)
    : a_(a), space_(&space) {
  if (space.n_qubits() != a.n_qubits) throw UsageError("sector and ansatz sizes differ");
  StateVector s = zero_state(a.n_qubits);
  CompiledCircuit::compile(a.prep).apply(s);
  if (space.leakage(s) > 1e-12) throw UsageError("prep state lies outside the sector");
  prep_ = space.restrict(s);
  if (!a.shared()) return;

  // Slot ranges per parameter; give up on the generator form unless every
  // parameter owns one contiguous run of mutually commuting gates.
  std::vector<Group> groups(a.n_params);
  std::vector<bool> seen(a.n_params, false);
  for (std::size_t i = 0; i < a.slots.size();) {
    const int k = a.slots[i].param;
    if (seen[k]) return;
    seen[k] = true;
    std::size_t j = i;
    while (j < a.slots.size() && a.slots[j].param == k) ++j;
    std::vector<PauliSum> gens;
    PauliSum total(a.n_qubits);
    for (std::size_t q = i; q < j; ++q) {
      auto g = slot_generator(a.n_qubits, a.slots[q]);
      if (!g) return;
      for (const PauliSum& h : gens)
        if (!commute(*g, h)) return;
      total += (a.slots[q].scale / 2) * *g;
      gens.push_back(std::move(*g));
    }
    groups[k].begin = i;
    groups[k].end = j;
    groups[k].generator = SectorOperator::build(total.simplify(), space);
    i = j;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) return;
  groups_ = std::move(groups);
}

CVector SectorAnsatz::run_slots(CVector x, const std::vector<double>& theta, std::size_t begin,
                                std::size_t end) const {
  Circuit c(a_.n_qubits);
  for (std::size_t s = begin; s < end; ++s) {
    const AnsatzSlot& sl = a_.slots[s];
    c.append(fermionic_two_level(a_.n_qubits, sl.qi, sl.qj, sl.kind, sl.scale * theta[sl.param]));
  }
  CompiledCircuit::compile_for_sector(c).apply(x, *space_);
  return x;
}

CVector SectorAnsatz::prepare(const std::vector<double>& theta) const {
  CVector x = prep_;
  CompiledCircuit::compile_for_sector(a_.layers(theta)).apply(x, *space_);
  return x;
}

CVector SectorAnsatz::slot_shifted(const std::vector<double>& theta, std::size_t slot,
                                   double shift) const {
  if (slot >= a_.slots.size()) throw UsageError("slot index out of range");
  CVector x = prep_;
  CompiledCircuit::compile_for_sector(a_.layers(theta, slot, shift)).apply(x, *space_);
  return x;
}

CVector SectorAnsatz::derivative(const std::vector<double>& theta, int k) const {
  if (!groups_.empty()) {
    if (k < 0 || k >= a_.n_params) throw UsageError("parameter index out of range");
    if (static_cast<int>(theta.size()) != a_.n_params)
      throw UsageError("parameter vector has the wrong length");
    const Group& g = groups_[k];
    CVector x = run_slots(prep_, theta, 0, g.end);
    CVector y = g.generator.apply(x);
    scale(y, cplx(0.0, -1.0));
    return run_slots(std::move(y), theta, g.end, a_.slots.size());
  }
  CVector d(prep_.size());
  for (const ShiftTerm& term : a_.derivative_terms(k))
    axpy(term.coeff, slot_shifted(theta, term.slot, term.shift), d);
  return d;
}

}  // namespace symvqe
