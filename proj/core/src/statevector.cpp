#include "symvqe/statevector.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "symvqe/errors.hpp"

namespace symvqe {

namespace {

void check_qubit(const StateVector& s, int q) {
  if (q < 1 || q > s.n_qubits())
    throw UsageError("qubit index " + std::to_string(q) + " out of range [1, " +
                     std::to_string(s.n_qubits()) + "]");
}

void check_same(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size())
    throw UsageError("state dimension mismatch: " + std::to_string(a.n_qubits()) +
                     " vs " + std::to_string(b.n_qubits()) + " qubits");
}

inline std::uint64_t insert_zero(std::uint64_t x, int bit) {
  const std::uint64_t low = x & ((std::uint64_t{1} << bit) - 1);
  return ((x >> bit) << (bit + 1)) | low;
}

inline bool zero(const cplx& z) { return z.real() == 0.0 && z.imag() == 0.0; }

enum class Shape { Diagonal, NumberConserving, General };

Shape classify(const Mat4& u) {
  auto nz = [&](int r, int c) { return !zero(u[4 * r + c]); };
  bool diag = true, conserving = true;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      if (r == c || !nz(r, c)) continue;
      diag = false;
      const bool inner_block = (r == 1 || r == 2) && (c == 1 || c == 2);
      if (!inner_block) conserving = false;
    }
  if (diag) return Shape::Diagonal;
  if (conserving) return Shape::NumberConserving;
  return Shape::General;
}

inline void apply_quad(cplx* a, std::uint64_t i00, std::uint64_t i01, std::uint64_t i10,
                       std::uint64_t i11, const Mat4& u, Shape shape) {
  const cplx a0 = a[i00], a1 = a[i01], a2 = a[i10], a3 = a[i11];
  if (zero(a0) && zero(a1) && zero(a2) && zero(a3)) return;
  switch (shape) {
    case Shape::Diagonal:
      a[i00] = u[0] * a0;
      a[i01] = u[5] * a1;
      a[i10] = u[10] * a2;
      a[i11] = u[15] * a3;
      break;
    case Shape::NumberConserving:
      a[i00] = u[0] * a0;
      a[i01] = u[5] * a1 + u[6] * a2;
      a[i10] = u[9] * a1 + u[10] * a2;
      a[i11] = u[15] * a3;
      break;
    case Shape::General:
      a[i00] = u[0] * a0 + u[1] * a1 + u[2] * a2 + u[3] * a3;
      a[i01] = u[4] * a0 + u[5] * a1 + u[6] * a2 + u[7] * a3;
      a[i10] = u[8] * a0 + u[9] * a1 + u[10] * a2 + u[11] * a3;
      a[i11] = u[12] * a0 + u[13] * a1 + u[14] * a2 + u[15] * a3;
      break;
  }
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw ConfigError("n_qubits must be in [1, " + std::to_string(kMaxQubits) +
                      "], got " + std::to_string(n_qubits));
  amp_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
}

void StateVector::set_zero() { std::fill(amp_.begin(), amp_.end(), cplx{0.0, 0.0}); }

StateVector zero_state(int n_qubits) {
  StateVector s(n_qubits);
  s[0] = 1.0;
  return s;
}

StateVector basis_state(int n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.size()) throw UsageError("basis index out of range");
  s[index] = 1.0;
  return s;
}

void apply_one_qubit(StateVector& s, int q, const Mat2& u) {
  check_qubit(s, q);
  const int b = q - 1;
  const std::uint64_t step = std::uint64_t{1} << b;
  const std::uint64_t half = s.size() >> 1;
  cplx* a = s.data();
  for (std::uint64_t k = 0; k < half; ++k) {
    const std::uint64_t i0 = insert_zero(k, b);
    const std::uint64_t i1 = i0 | step;
    const cplx a0 = a[i0], a1 = a[i1];
    a[i0] = u[0] * a0 + u[1] * a1;
    a[i1] = u[2] * a0 + u[3] * a1;
  }
}

void apply_two_qubit(StateVector& s, int qi, int qj, const Mat4& u) {
  check_qubit(s, qi);
  check_qubit(s, qj);
  if (qi == qj) throw UsageError("two-qubit gate needs distinct qubits");
  const int bi = qi - 1, bj = qj - 1;
  const int lo = std::min(bi, bj), hi = std::max(bi, bj);
  const std::uint64_t mi = std::uint64_t{1} << bi, mj = std::uint64_t{1} << bj;
  const std::uint64_t quarter = s.size() >> 2;
  const Shape shape = classify(u);
  cplx* a = s.data();
  for (std::uint64_t k = 0; k < quarter; ++k) {
    const std::uint64_t base = insert_zero(insert_zero(k, lo), hi);
    apply_quad(a, base, base | mj, base | mi, base | mi | mj, u, shape);
  }
}

void apply_two_qubit_parity(StateVector& s, int qi, int qj, const Mat4& u_even,
                            const Mat4& u_odd, std::uint64_t mask) {
  check_qubit(s, qi);
  check_qubit(s, qj);
  if (qi == qj) throw UsageError("two-qubit gate needs distinct qubits");
  const int bi = qi - 1, bj = qj - 1;
  const std::uint64_t mi = std::uint64_t{1} << bi, mj = std::uint64_t{1} << bj;
  if (mask & (mi | mj)) throw UsageError("parity mask overlaps gate targets");
  const int lo = std::min(bi, bj), hi = std::max(bi, bj);
  const std::uint64_t quarter = s.size() >> 2;
  const Shape se = classify(u_even), so = classify(u_odd);
  cplx* a = s.data();
  for (std::uint64_t k = 0; k < quarter; ++k) {
    const std::uint64_t base = insert_zero(insert_zero(k, lo), hi);
    const bool odd = std::popcount(base & mask) & 1;
    apply_quad(a, base, base | mj, base | mi, base | mi | mj, odd ? u_odd : u_even,
               odd ? so : se);
  }
}

void apply_diagonal(StateVector& s, const std::vector<cplx>& phases) {
  if (phases.size() != s.size()) throw UsageError("diagonal length mismatch");
  cplx* a = s.data();
  for (std::size_t i = 0; i < phases.size(); ++i) a[i] *= phases[i];
}

cplx inner(const StateVector& bra, const StateVector& ket) {
  check_same(bra, ket);
  const cplx* x = bra.data();
  const cplx* y = ket.data();
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < bra.size(); ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

void axpy(cplx alpha, const StateVector& x, StateVector& y) {
  check_same(x, y);
  const cplx* xs = x.data();
  cplx* ys = y.data();
  for (std::size_t i = 0; i < x.size(); ++i) ys[i] += alpha * xs[i];
}

void scale(StateVector& s, cplx alpha) {
  for (auto& z : s.amplitudes()) z *= alpha;
}

double norm(const StateVector& s) {
  double acc = 0.0;
  for (const auto& z : s.amplitudes()) acc += std::norm(z);
  return std::sqrt(acc);
}

double distance(const StateVector& a, const StateVector& b) {
  check_same(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
  return std::sqrt(acc);
}

void write_binary(const StateVector& s, std::ostream& os) {
  static_assert(std::endian::native == std::endian::little,
                "binary dump assumes a little-endian host");
  const std::uint32_t n = static_cast<std::uint32_t>(s.n_qubits());
  os.write(reinterpret_cast<const char*>(&n), sizeof n);
  for (const auto& z : s.amplitudes()) {
    const double re = z.real(), im = z.imag();
    os.write(reinterpret_cast<const char*>(&re), sizeof re);
    os.write(reinterpret_cast<const char*>(&im), sizeof im);
  }
  if (!os) throw std::runtime_error("failed writing state dump");
}

StateVector read_binary(std::istream& is) {
  std::uint32_t n = 0;
  is.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!is) throw std::runtime_error("truncated state dump header");
  StateVector s(static_cast<int>(n));
  for (auto& z : s.amplitudes()) {
    double re = 0.0, im = 0.0;
    is.read(reinterpret_cast<char*>(&re), sizeof re);
    is.read(reinterpret_cast<char*>(&im), sizeof im);
    z = {re, im};
  }
  if (!is) throw std::runtime_error("truncated state dump body");
  return s;
}

namespace {
template <std::size_t N, int D>
bool unitary_impl(const std::array<cplx, N>& u, double tol) {
  for (int r = 0; r < D; ++r)
    for (int c = 0; c < D; ++c) {
      cplx acc = 0.0;
      for (int k = 0; k < D; ++k) acc += std::conj(u[D * k + r]) * u[D * k + c];
      if (std::abs(acc - (r == c ? 1.0 : 0.0)) > tol) return false;
    }
  return true;
}
}  // namespace

bool is_unitary(const Mat2& u, double tol) { return unitary_impl<4, 2>(u, tol); }
bool is_unitary(const Mat4& u, double tol) { return unitary_impl<16, 4>(u, tol); }

}  // namespace symvqe
