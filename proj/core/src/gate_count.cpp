#include <string>
#include <vector>

#include "symvqe/gates.hpp"
#include "symvqe/hubbard.hpp"
#include "symvqe/projection.hpp"
#include "symvqe/trotter.hpp"

namespace symvqe {

namespace {

int count_kind(const Circuit& c, GateKind k) {
  int n = 0;
  for (const auto& g : c.ops) n += g.kind == k;
  return n;
}

GateCountRow row(std::string op, GateKind core, const Circuit& c) {
  GateCountRow r;
  r.operation = std::move(op);
  r.gate = kind_name(core);
  r.gate_count = count_kind(c, core);
  // Every CZ in these circuits belongs to a Jordan-Wigner conjugation.
  r.jw_cz_count = count_kind(c, GateKind::CZ);
  return r;
}

}  // namespace

std::vector<GateCountRow> gate_count_report(const LadderLattice& lat, Labeling lab) {
  std::vector<GateCountRow> rows;
  const double angle = 0.5;
  rows.push_back(row("spin_rotation", GateKind::GIVENS, spin_rotation_y(angle, lat, lab)));
  rows.push_back(row("eta_rotation", GateKind::BOGOLIUBOV, eta_rotation_y(angle, lat, lab)));

  const TrotterSplit split = make_trotter_split(lat, lab, 1.0, 4.0);
  Circuit hop(lat.n_qubits()), inter(lat.n_qubits());
  for (std::size_t p = 0; p < split.parts.size(); ++p) {
    const Circuit c = part_exponential(split, p, angle);
    (split.labels[p] == "U" ? inter : hop).append(c);
  }
  rows.push_back(row("hopping", GateKind::EXCHANGE, hop));
  // eZZ = CNOT RZ CNOT.
  GateCountRow u;
  u.operation = "interaction";
  u.gate = kind_name(GateKind::CNOT);
  u.gate_count = 2 * count_kind(inter, GateKind::EZZ);
  rows.push_back(u);

  if (lat.is_ladder()) {
    const auto g = c2v_elements(lat, irrep_characters("A1"));
    for (std::size_t k = 1; k < g.size(); ++k)
      rows.push_back(row("spatial_" + g[k].name, GateKind::FSWAP, spatial_circuit(lat, lab, g[k])));
  }
  return rows;
}

}  // namespace symvqe
