#include "symvqe/pauli.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

#include "symvqe/errors.hpp"

namespace symvqe {

namespace {

constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

int popc(std::uint64_t v) { return std::popcount(v); }

std::uint64_t bit(int q) { return std::uint64_t{1} << (q - 1); }

}  // namespace

PauliSum PauliSum::identity(int n_qubits, cplx coeff) {
  PauliSum p(n_qubits);
  p.add_term({coeff, 0, 0});
  return p;
}

PauliSum PauliSum::term(int n_qubits, std::initializer_list<std::pair<int, char>> letters,
                        cplx coeff) {
  PauliTerm t{coeff, 0, 0};
  for (auto [q, c] : letters) {
    if (q < 1 || q > n_qubits) throw UsageError("Pauli letter on qubit out of range");
    if ((t.x | t.z) & bit(q)) throw UsageError("repeated qubit in Pauli string");
    switch (c) {
      case 'X': t.x |= bit(q); break;
      case 'Y': t.x |= bit(q); t.z |= bit(q); break;
      case 'Z': t.z |= bit(q); break;
      case 'I': break;
      default: throw UsageError(std::string("unknown Pauli letter ") + c);
    }
  }
  PauliSum p(n_qubits);
  p.add_term(t);
  return p;
}

void PauliSum::add_term(const PauliTerm& t) {
  const std::uint64_t limit = n_ >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
  if ((t.x | t.z) & ~limit) throw UsageError("Pauli term acts outside the register");
  terms_.push_back(t);
}

PauliSum& PauliSum::simplify(double tol) {
  std::map<std::pair<std::uint64_t, std::uint64_t>, cplx> acc;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> order;
  for (const auto& t : terms_) {
    auto key = std::make_pair(t.x, t.z);
    auto it = acc.find(key);
    if (it == acc.end()) {
      acc.emplace(key, t.coeff);
      order.push_back(key);
    } else {
      it->second += t.coeff;
    }
  }
  terms_.clear();
  for (const auto& key : order) {
    cplx c = acc[key];
    if (std::abs(c.imag()) < tol) c.imag(0.0);
    if (std::abs(c.real()) < tol) c.real(0.0);
    if (std::abs(c) >= tol) terms_.push_back({c, key.first, key.second});
  }
  return *this;
}

PauliSum& PauliSum::operator+=(const PauliSum& o) {
  if (n_ == 0) n_ = o.n_;
  if (o.n_ != n_) throw UsageError("PauliSum register mismatch");
  for (const auto& t : o.terms_) terms_.push_back(t);
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& o) {
  if (n_ == 0) n_ = o.n_;
  if (o.n_ != n_) throw UsageError("PauliSum register mismatch");
  for (auto t : o.terms_) {
    t.coeff = -t.coeff;
    terms_.push_back(t);
  }
  return *this;
}

PauliSum& PauliSum::operator*=(cplx s) {
  for (auto& t : terms_) t.coeff *= s;
  return *this;
}

std::string PauliSum::to_string() const {
  std::ostringstream os;
  for (const auto& t : terms_) {
    os << '(' << t.coeff.real() << (t.coeff.imag() < 0 ? "-" : "+") << std::abs(t.coeff.imag())
       << "i)";
    for (int q = 1; q <= n_; ++q) {
      const bool x = t.x & bit(q), z = t.z & bit(q);
      if (x && z) os << " Y" << q;
      else if (x) os << " X" << q;
      else if (z) os << " Z" << q;
    }
    os << '\n';
  }
  return os.str();
}

PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
PauliSum operator*(cplx s, PauliSum a) { return a *= s; }

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
  // i^{|xa&za|} Xa Za i^{|xb&zb|} Xb Zb = i^{...} (-1)^{|za&xb|} X^{xa^xb} Z^{za^zb}
  const std::uint64_t x = a.x ^ b.x, z = a.z ^ b.z;
  int e = popc(a.x & a.z) + popc(b.x & b.z) + 2 * popc(a.z & b.x) - popc(x & z);
  e = ((e % 4) + 4) % 4;
  return {a.coeff * b.coeff * kIPow[e], x, z};
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  if (a.n_qubits() != b.n_qubits()) throw UsageError("PauliSum register mismatch");
  PauliSum out(a.n_qubits());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) out.add_term(multiply(ta, tb));
  return out.simplify();
}

namespace {
PauliSum ladder(int n, int q, bool dagger) {
  if (q < 1 || q > n) throw UsageError("mode index out of range");
  std::uint64_t zs = 0;
  for (int k = 1; k < q; ++k) zs |= bit(k);
  // sigma^+ = |1><0| = (X - iY)/2, sigma^- = (X + iY)/2
  PauliSum p(n);
  p.add_term({0.5, bit(q), zs});
  p.add_term({dagger ? cplx{0.0, -0.5} : cplx{0.0, 0.5}, bit(q), zs | bit(q)});
  return p;
}
}  // namespace

PauliSum creation(int n_qubits, int q) { return ladder(n_qubits, q, true); }
PauliSum annihilation(int n_qubits, int q) { return ladder(n_qubits, q, false); }
PauliSum number_op(int n_qubits, int q) { return creation(n_qubits, q) * annihilation(n_qubits, q); }

bool is_hermitian(const PauliSum& p, double tol) {
  PauliSum s = p;
  s.simplify(tol * 1e-3);
  for (const auto& t : s.terms())
    if (std::abs(t.coeff.imag()) > tol) return false;
  return true;
}

bool terms_commute(const PauliTerm& a, const PauliTerm& b) {
  return ((popc(a.x & b.z) + popc(a.z & b.x)) % 2) == 0;
}

void apply_pauli_sum(const PauliSum& op, const StateVector& in, StateVector& out) {
  if (op.n_qubits() != in.n_qubits() || out.n_qubits() != in.n_qubits())
    throw UsageError("apply_pauli_sum register mismatch");
  out.set_zero();
  // Group by flip mask; fixed group and term order keeps results reproducible.
  std::vector<std::uint64_t> masks;
  std::map<std::uint64_t, std::vector<std::pair<cplx, std::uint64_t>>> groups;
  for (const auto& t : op.terms()) {
    auto it = groups.find(t.x);
    if (it == groups.end()) {
      masks.push_back(t.x);
      it = groups.emplace(t.x, std::vector<std::pair<cplx, std::uint64_t>>{}).first;
    }
    it->second.push_back({t.coeff * kIPow[popc(t.x & t.z) % 4], t.z});
  }
  const cplx* a = in.data();
  cplx* o = out.data();
  const std::size_t dim = in.size();
  for (std::uint64_t x : masks) {
    const auto& g = groups[x];
    for (std::size_t b = 0; b < dim; ++b) {
      const cplx ab = a[b];
      if (ab.real() == 0.0 && ab.imag() == 0.0) continue;
      cplx f = 0.0;
      for (const auto& [c, z] : g) f += (popc(b & z) & 1) ? -c : c;
      o[b ^ x] += f * ab;
    }
  }
}

StateVector apply_pauli_sum(const PauliSum& op, const StateVector& in) {
  StateVector out(in.n_qubits());
  apply_pauli_sum(op, in, out);
  return out;
}

cplx expectation(const PauliSum& op, const StateVector& psi) {
  return inner(psi, apply_pauli_sum(op, psi));
}

}  // namespace symvqe
