#include "symvqe/gates.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <utility>

#include "symvqe/errors.hpp"
#include "symvqe/sector.hpp"

namespace symvqe {

namespace {
constexpr cplx I1{0.0, 1.0};

Mat4 diag4(cplx a, cplx b, cplx c, cplx d) {
  return {a, 0, 0, 0, 0, b, 0, 0, 0, 0, c, 0, 0, 0, 0, d};
}
}  // namespace

bool is_two_qubit(GateKind k) {
  switch (k) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
      return false;
    default:
      return true;
  }
}

bool is_parametrized(GateKind k) {
  switch (k) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::CPHASE:
    case GateKind::GIVENS:
    case GateKind::BOGOLIUBOV:
    case GateKind::EXCHANGE:
    case GateKind::FGATE:
    case GateKind::EZZ:
      return true;
    default:
      return false;
  }
}

bool is_monomial(GateKind k) {
  switch (k) {
    case GateKind::X:
    case GateKind::RZ:
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::SWAP:
    case GateKind::FSWAP:
    case GateKind::CPHASE:
    case GateKind::EZZ:
      return true;
    default:
      return false;
  }
}

const char* kind_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::SWAP: return "SWAP";
    case GateKind::FSWAP: return "FSWAP";
    case GateKind::CPHASE: return "CPHASE";
    case GateKind::GIVENS: return "GIVENS";
    case GateKind::BOGOLIUBOV: return "BOGOLIUBOV";
    case GateKind::EXCHANGE: return "EXCHANGE";
    case GateKind::FGATE: return "FGATE";
    case GateKind::EZZ: return "EZZ";
  }
  return "?";
}

GateOp gate(GateKind k, int q0, double angle) {
  if (is_two_qubit(k)) throw UsageError(std::string(kind_name(k)) + " needs two targets");
  return GateOp{k, q0, 0, angle};
}

GateOp gate(GateKind k, int q0, int q1, double angle) {
  if (!is_two_qubit(k)) throw UsageError(std::string(kind_name(k)) + " takes one target");
  if (q0 == q1) throw UsageError("two-qubit gate needs distinct targets");
  return GateOp{k, q0, q1, angle};
}

void Circuit::append(const Circuit& c) {
  if (c.n_qubits > n_qubits) n_qubits = c.n_qubits;
  ops.insert(ops.end(), c.ops.begin(), c.ops.end());
}

void Circuit::validate() const {
  for (const auto& g : ops) {
    auto in_range = [&](int q) { return q >= 1 && q <= n_qubits; };
    if (!in_range(g.q0)) throw UsageError("gate target out of range");
    if (is_two_qubit(g.kind)) {
      if (!in_range(g.q1)) throw UsageError("gate target out of range");
      if (g.q0 == g.q1) throw UsageError("two-qubit gate with repeated target");
    }
  }
}

Mat2 matrix_1q(const GateOp& g) {
  const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
  const double r = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::H: return {r, r, r, -r};
    case GateKind::X: return {0, 1, 1, 0};
    case GateKind::RX: return {c, -I1 * s, -I1 * s, c};
    case GateKind::RY: return {c, -s, s, c};
    case GateKind::RZ: return {std::exp(-I1 * (g.angle / 2)), 0, 0, std::exp(I1 * (g.angle / 2))};
    default: throw UsageError(std::string(kind_name(g.kind)) + " is not a one-qubit gate");
  }
}

Mat4 matrix_2q(const GateOp& g) {
  const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
  switch (g.kind) {
    case GateKind::CNOT: return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0};
    case GateKind::CZ: return diag4(1, 1, 1, -1);
    case GateKind::SWAP: return {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1};
    case GateKind::FSWAP: return {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, -1};
    case GateKind::CPHASE: return diag4(1, 1, 1, std::exp(I1 * g.angle));
    case GateKind::GIVENS: return {1, 0, 0, 0, 0, c, s, 0, 0, -s, c, 0, 0, 0, 0, 1};
    case GateKind::BOGOLIUBOV: return {c, 0, 0, -s, 0, 1, 0, 0, 0, 0, 1, 0, s, 0, 0, c};
    case GateKind::EXCHANGE:
      return {1, 0, 0, 0, 0, c, -I1 * s, 0, 0, -I1 * s, c, 0, 0, 0, 0, 1};
    case GateKind::FGATE: {
      const cplx em = std::exp(-I1 * (g.angle / 2)), ep = std::exp(I1 * (g.angle / 2));
      return {em, 0, 0, 0, 0, c, -I1 * s, 0, 0, -I1 * s, c, 0, 0, 0, 0, ep};
    }
    case GateKind::EZZ: {
      const cplx em = std::exp(-I1 * (g.angle / 2)), ep = std::exp(I1 * (g.angle / 2));
      return diag4(em, ep, ep, em);
    }
    default: throw UsageError(std::string(kind_name(g.kind)) + " is not a two-qubit gate");
  }
}

std::vector<cplx> matrix_of(const GateOp& g) {
  if (is_two_qubit(g.kind)) {
    const Mat4 m = matrix_2q(g);
    return {m.begin(), m.end()};
  }
  const Mat2 m = matrix_1q(g);
  return {m.begin(), m.end()};
}

Circuit jw_cz_conjugation(int n_qubits, int i, int j) {
  if (i == j) throw UsageError("jw_cz_conjugation needs i != j");
  Circuit c(n_qubits);
  for (int k = std::min(i, j) + 1; k < std::max(i, j); ++k) c.add(gate(GateKind::CZ, j, k));
  return c;
}

Circuit long_range_fswap(int n_qubits, int i, int j) {
  const Circuit frag = jw_cz_conjugation(n_qubits, i, j);
  Circuit c(n_qubits);
  c.append(frag);
  c.add(gate(GateKind::FSWAP, i, j));
  c.append(frag);
  return c;
}

Circuit fermionic_two_level(int n_qubits, int i, int j, GateKind core, double theta) {
  switch (core) {
    case GateKind::GIVENS:
    case GateKind::BOGOLIUBOV:
    case GateKind::EXCHANGE:
    case GateKind::FGATE:
    case GateKind::EZZ:
      break;
    default:
      throw UsageError(std::string("fermionic_two_level does not accept ") + kind_name(core));
  }
  Circuit c(n_qubits);
  if (core == GateKind::EZZ) {
    c.add(gate(core, i, j, theta));
    return c;
  }
  const Circuit frag = jw_cz_conjugation(n_qubits, i, j);
  c.append(frag);
  c.add(gate(core, i, j, theta));
  c.append(frag);
  return c;
}

Mat4 two_level_controlled_u(TwoLevelVariant v, const Mat2& u) {
  int a = 0, b = 0;  // basis indices in 00, 01, 10, 11 order
  switch (v) {
    case TwoLevelVariant::A: a = 2, b = 3; break;
    case TwoLevelVariant::B: a = 0, b = 1; break;
    case TwoLevelVariant::C: a = 2, b = 1; break;
    case TwoLevelVariant::D: a = 0, b = 3; break;
    case TwoLevelVariant::E: a = 1, b = 3; break;
    case TwoLevelVariant::F: a = 0, b = 2; break;
  }
  Mat4 m = diag4(1, 1, 1, 1);
  m[4 * a + a] = u[0];
  m[4 * a + b] = u[1];
  m[4 * b + a] = u[2];
  m[4 * b + b] = u[3];
  return m;
}

std::string format_circuit(const Circuit& c) {
  std::ostringstream os;
  for (const auto& g : c.ops) {
    os << kind_name(g.kind) << ' ' << g.q0;
    if (is_two_qubit(g.kind)) os << ' ' << g.q1;
    if (is_parametrized(g.kind)) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", g.angle);
      os << ' ' << buf;
    }
    os << '\n';
  }
  return os.str();
}

void apply_gate(StateVector& s, const GateOp& g) {
  if (is_two_qubit(g.kind))
    apply_two_qubit(s, g.q0, g.q1, matrix_2q(g));
  else
    apply_one_qubit(s, g.q0, matrix_1q(g));
}

void apply_circuit(StateVector& s, const Circuit& c) {
  if (c.n_qubits != s.n_qubits()) throw UsageError("circuit/state qubit count mismatch");
  for (const auto& g : c.ops) apply_gate(s, g);
}

namespace {

// Image of basis state b under a monomial gate, with the picked-up phase.
std::pair<std::uint32_t, cplx> monomial_image(const GateOp& g, std::uint32_t b) {
  if (!is_two_qubit(g.kind)) {
    const Mat2 m = matrix_1q(g);
    const std::uint32_t bit = 1u << (g.q0 - 1);
    const int col = (b & bit) ? 1 : 0;
    const int row = std::abs(m[col]) > 0.0 ? 0 : 1;
    const std::uint32_t out = row ? (b | bit) : (b & ~bit);
    return {out, m[2 * row + col]};
  }
  const Mat4 m = matrix_2q(g);
  const std::uint32_t bi = 1u << (g.q0 - 1), bj = 1u << (g.q1 - 1);
  const int col = ((b & bi) ? 2 : 0) | ((b & bj) ? 1 : 0);
  int row = 0;
  while (row < 4 && std::abs(m[4 * row + col]) == 0.0) ++row;
  std::uint32_t out = b & ~(bi | bj);
  if (row & 2) out |= bi;
  if (row & 1) out |= bj;
  return {out, m[4 * row + col]};
}

// Z_q u Z_q, with q the first or second target of u.
Mat4 conjugate_by_z(const Mat4& u, bool on_first) {
  auto sign = [&](int idx) {
    const int bit = on_first ? (idx >> 1) & 1 : idx & 1;
    return bit ? -1.0 : 1.0;
  };
  Mat4 out = u;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out[4 * r + c] *= sign(r) * sign(c);
  return out;
}

// Matches [CZ(j,k1)..CZ(j,km)] core(a,b) [same CZs] starting at p, with j one
// of the core targets and every k outside them.
bool match_jw_composite(const std::vector<GateOp>& ops, std::size_t p,
                        CompiledCircuit::Instruction& in, std::size_t& next) {
  const std::size_t n = ops.size();
  std::size_t r = p;
  while (r < n && ops[r].kind == GateKind::CZ) ++r;
  const std::size_t len = r - p;
  if (len == 0 || r >= n || !is_two_qubit(ops[r].kind)) return false;
  if (r + 1 + len > n) return false;
  const GateOp& core = ops[r];
  int shared = 0;
  std::uint64_t mask = 0;
  std::set<std::pair<int, int>> run;
  for (std::size_t q = p; q < r; ++q) {
    const GateOp& z = ops[q];
    int j = 0, k = 0;
    if (z.q0 == core.q0 || z.q0 == core.q1) j = z.q0, k = z.q1;
    else if (z.q1 == core.q0 || z.q1 == core.q1) j = z.q1, k = z.q0;
    else return false;
    if (k == core.q0 || k == core.q1) return false;
    if (shared == 0) shared = j;
    if (shared != j) return false;
    const std::uint64_t bit = std::uint64_t{1} << (k - 1);
    if (mask & bit) return false;
    mask |= bit;
    run.insert(std::minmax(z.q0, z.q1));
  }
  for (std::size_t q = r + 1; q < r + 1 + len; ++q) {
    if (ops[q].kind != GateKind::CZ || !run.erase(std::minmax(ops[q].q0, ops[q].q1)))
      return false;
  }
  in.type = CompiledCircuit::Instruction::Type::Parity;
  in.qi = core.q0;
  in.qj = core.q1;
  in.u = matrix_2q(core);
  in.u_odd = conjugate_by_z(in.u, shared == core.q0);
  in.mask = mask;
  next = r + 1 + len;
  return true;
}

void classify(CompiledCircuit::Instruction& in) {
  using Type = CompiledCircuit::Instruction::Type;
  auto zero = [](cplx v) { return v.real() == 0.0 && v.imag() == 0.0; };
  if (in.type == Type::One) {
    in.diagonal = zero(in.u1[1]) && zero(in.u1[2]);
    in.conserving = in.diagonal;
    return;
  }
  if (in.type == Type::Table) return;
  bool diag = true, cons = true;
  for (const Mat4* m : {&in.u, &in.u_odd}) {
    if (in.type == Type::Two && m == &in.u_odd) continue;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        if (r == c || zero((*m)[4 * r + c])) continue;
        diag = false;
        if (!((r == 1 && c == 2) || (r == 2 && c == 1))) cons = false;
      }
  }
  in.diagonal = diag;
  in.conserving = cons;
}

}  // namespace

CompiledCircuit CompiledCircuit::compile(const Circuit& c, Options opt) {
  c.validate();
  CompiledCircuit cc;
  cc.n_ = c.n_qubits;
  const auto& ops = c.ops;
  const std::size_t n = ops.size();
  const bool tables_ok = opt.monomial_min_run > 0 && c.n_qubits <= 22;

  std::size_t p = 0;
  while (p < n) {
    // CZ-string * core * CZ-string, all CZs sharing one of the core targets.
    if (opt.fuse_jw && ops[p].kind == GateKind::CZ) {
      std::size_t next = 0;
      Instruction in;
      if (match_jw_composite(ops, p, in, next)) {
        cc.ins_.push_back(in);
        p = next;
        continue;
      }
    }

    if (tables_ok && is_monomial(ops[p].kind)) {
      std::size_t r = p;
      while (r < n && is_monomial(ops[r].kind)) ++r;
      // Leave a trailing CZ string alone if it opens a fusable composite.
      if (opt.fuse_jw && r < n && r - p >= opt.monomial_min_run) {
        std::size_t z = r;
        while (z > p && ops[z - 1].kind == GateKind::CZ) --z;
        if (z < r && is_two_qubit(ops[r].kind)) r = z;
      }
      if (r - p >= opt.monomial_min_run) {
        Monomial m;
        const std::uint32_t dim = 1u << c.n_qubits;
        m.target.resize(dim);
        m.phase.assign(dim, cplx{1.0, 0.0});
        for (std::uint32_t b = 0; b < dim; ++b) m.target[b] = b;
        for (std::size_t q = p; q < r; ++q) {
          for (std::uint32_t b = 0; b < dim; ++b) {
            auto [t, ph] = monomial_image(ops[q], m.target[b]);
            m.target[b] = t;
            m.phase[b] *= ph;
          }
        }
        Instruction in;
        in.type = Instruction::Type::Table;
        in.table = cc.tables_.size();
        cc.tables_.push_back(std::move(m));
        cc.ins_.push_back(in);
        p = r;
        continue;
      }
    }

    Instruction in;
    const GateOp& g = ops[p];
    if (is_two_qubit(g.kind)) {
      in.type = Instruction::Type::Two;
      in.qi = g.q0;
      in.qj = g.q1;
      in.u = matrix_2q(g);
    } else {
      in.type = Instruction::Type::One;
      in.qi = g.q0;
      in.u1 = matrix_1q(g);
    }
    cc.ins_.push_back(in);
    ++p;
  }
  for (auto& in : cc.ins_) classify(in);
  return cc;
}

CompiledCircuit CompiledCircuit::compile_for_sector(const Circuit& c) {
  Options opt;
  opt.monomial_min_run = 0;
  return compile(c, opt);
}

void CompiledCircuit::apply(StateVector& s) const {
  if (s.n_qubits() != n_) throw UsageError("compiled circuit/state qubit count mismatch");
  thread_local std::vector<cplx> scratch;
  for (const auto& in : ins_) {
    switch (in.type) {
      case Instruction::Type::One:
        apply_one_qubit(s, in.qi, in.u1);
        break;
      case Instruction::Type::Two:
        apply_two_qubit(s, in.qi, in.qj, in.u);
        break;
      case Instruction::Type::Parity:
        apply_two_qubit_parity(s, in.qi, in.qj, in.u, in.u_odd, in.mask);
        break;
      case Instruction::Type::Table: {
        const Monomial& m = tables_[in.table];
        scratch.resize(s.size());
        const cplx* a = s.data();
        for (std::size_t b = 0; b < m.target.size(); ++b) scratch[m.target[b]] = m.phase[b] * a[b];
        scratch.swap(s.amplitudes());
        break;
      }
    }
  }
}

void CompiledCircuit::apply(CVector& x, const SectorSpace& space) const {
  if (space.n_qubits() != n_) throw UsageError("compiled circuit/sector qubit count mismatch");
  if (x.size() != space.dim()) throw UsageError("sector vector length mismatch");
  const std::uint32_t* basis = space.basis().data();
  const std::int32_t* lookup = space.lookup();
  const std::size_t dim = space.dim();
  cplx* a = x.data();
  for (const auto& in : ins_) {
    if (in.type == Instruction::Type::Table || !in.conserving)
      throw UsageError("gate does not preserve the particle-number sector");
    if (in.type == Instruction::Type::One) {
      const std::uint32_t bit = 1u << (in.qi - 1);
      const cplx d0 = in.u1[0], d1 = in.u1[3];
      for (std::size_t k = 0; k < dim; ++k) a[k] *= (basis[k] & bit) ? d1 : d0;
      continue;
    }
    const std::uint32_t bi = 1u << (in.qi - 1), bj = 1u << (in.qj - 1);
    const std::uint32_t both = bi | bj;
    const bool parity = in.type == Instruction::Type::Parity;
    const std::uint64_t mask = in.mask;
    for (std::size_t k = 0; k < dim; ++k) {
      const std::uint32_t b = basis[k];
      const Mat4& u = (parity && (std::popcount(b & mask) & 1)) ? in.u_odd : in.u;
      const int local = ((b & bi) ? 2 : 0) | ((b & bj) ? 1 : 0);
      if (in.diagonal || local == 0 || local == 3) {
        a[k] *= u[5 * local];
        continue;
      }
      const std::int32_t partner = lookup[b ^ both];
      if (partner < 0) {
        const cplx off = local == 1 ? u[9] : u[6];
        if (off != cplx{}) throw UsageError("gate couples the sector to its complement");
        a[k] *= u[5 * local];
        continue;
      }
      if (local == 2) continue;  // handled from the |01> side
      const cplx x1 = a[k], x2 = a[partner];
      a[k] = u[5] * x1 + u[6] * x2;
      a[partner] = u[9] * x1 + u[10] * x2;
    }
  }
}

}  // namespace symvqe
