#include "symvqe/sector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>

#include "symvqe/errors.hpp"

namespace symvqe {

SectorSpace::SectorSpace(int n_qubits, std::vector<std::uint32_t> basis)
    : n_(n_qubits), basis_(std::move(basis)) {
  if (n_ < 1 || n_ > kMaxQubits) throw UsageError("sector register size out of range");
  if (basis_.size() > static_cast<std::size_t>(INT32_MAX)) throw UsageError("sector too large");
  lookup_.assign(std::size_t{1} << n_, -1);
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    const std::uint32_t b = basis_[k];
    if ((b >> n_) != 0) throw UsageError("sector basis state outside the register");
    if (lookup_[b] >= 0) throw UsageError("repeated sector basis state");
    lookup_[b] = static_cast<std::int32_t>(k);
  }
}

CVector SectorSpace::restrict(const StateVector& s) const {
  if (s.n_qubits() != n_) throw UsageError("sector/state register mismatch");
  CVector x(basis_.size());
  for (std::size_t k = 0; k < basis_.size(); ++k) x[k] = s[basis_[k]];
  return x;
}

StateVector SectorSpace::embed(const CVector& x) const {
  if (x.size() != basis_.size()) throw UsageError("sector vector length mismatch");
  StateVector s(n_);
  for (std::size_t k = 0; k < basis_.size(); ++k) s[basis_[k]] = x[k];
  return s;
}

double SectorSpace::leakage(const StateVector& s) const {
  if (s.n_qubits() != n_) throw UsageError("sector/state register mismatch");
  double acc = 0.0;
  for (std::size_t b = 0; b < s.size(); ++b)
    if (lookup_[b] < 0) acc += std::norm(s[b]);
  return std::sqrt(acc);
}

SectorOperator SectorOperator::build(const PauliSum& op, const SectorSpace& space, double tol) {
  if (op.n_qubits() != space.n_qubits()) throw UsageError("operator/sector register mismatch");
  static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::vector<std::uint64_t> masks;
  std::map<std::uint64_t, std::vector<std::pair<cplx, std::uint64_t>>> groups;
  for (const auto& t : op.terms()) {
    auto it = groups.find(t.x);
    if (it == groups.end()) {
      masks.push_back(t.x);
      it = groups.emplace(t.x, std::vector<std::pair<cplx, std::uint64_t>>{}).first;
    }
    it->second.push_back({t.coeff * kIPow[std::popcount(t.x & t.z) % 4], t.z});
  }
  const std::size_t dim = space.dim();
  // Column-wise generation, then a transpose into rows.
  std::vector<std::vector<std::pair<std::uint32_t, cplx>>> rows(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const std::uint64_t b = space.basis()[k];
    for (std::uint64_t x : masks) {
      cplx f = 0.0;
      for (const auto& [c, z] : groups[x]) f += (std::popcount(b & z) & 1) ? -c : c;
      if (std::abs(f) <= tol) continue;
      const std::int32_t row = space.index_of(b ^ x);
      if (row < 0) throw UsageError("operator couples the sector to its complement");
      rows[row].push_back({static_cast<std::uint32_t>(k), f});
    }
  }
  SectorOperator out;
  out.row_ptr_.reserve(dim + 1);
  out.row_ptr_.push_back(0);
  for (auto& r : rows) {
    std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t p = 0; p < r.size();) {
      std::size_t q = p;
      cplx v = 0.0;
      while (q < r.size() && r[q].first == r[p].first) v += r[q++].second;
      if (std::abs(v) > tol) {
        out.col_.push_back(r[p].first);
        out.val_.push_back(v);
      }
      p = q;
    }
    out.row_ptr_.push_back(out.val_.size());
  }
  return out;
}

void SectorOperator::apply(const CVector& x, CVector& y) const {
  const std::size_t n = dim();
  if (x.size() != n) throw UsageError("sector operator length mismatch");
  y.assign(n, cplx{});
  for (std::size_t r = 0; r < n; ++r) {
    cplx acc = 0.0;
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) acc += val_[p] * x[col_[p]];
    y[r] = acc;
  }
}

CVector SectorOperator::apply(const CVector& x) const {
  CVector y;
  apply(x, y);
  return y;
}

cplx SectorOperator::expectation(const CVector& x) const { return dot(x, apply(x)); }

}  // namespace symvqe
