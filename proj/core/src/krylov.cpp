#include "symvqe/krylov.hpp"

#include <algorithm>
#include <cmath>

#include "symvqe/errors.hpp"

namespace symvqe {

namespace {

void fix_phase(CVector& v) {
  double big = 0.0;
  for (const cplx& z : v) big = std::max(big, std::abs(z));
  for (const cplx& z : v)
    if (std::abs(z) > 1e-8 * big) {
      const cplx ph = std::conj(z) / std::abs(z);
      for (cplx& w : v) w *= ph;
      return;
    }
}

double quadratic(const CMatrix& a, const CVector& v) { return sandwich(v, a, v).real(); }

}  // namespace

std::vector<StateVector> build_basis(const StateVector& psi, const PowerEngine& eng, int d) {
  if (d < 1) throw ConfigError("Krylov dimension must be at least 1");
  std::vector<StateVector> out;
  out.reserve(d);
  for (int i = 0; i < d; ++i) out.push_back(i == 0 ? psi : eng.apply(i, psi));
  return out;
}

SubspaceMatrices assemble_h_s(const std::vector<StateVector>& basis, const Projector& p,
                              const PauliSum& h) {
  if (basis.empty()) throw UsageError("empty Krylov basis");
  const std::size_t d = basis.size();
  SubspaceMatrices m{CMatrix(d, d), CMatrix(d, d)};
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      m.h(i, j) = p.matrix_element(basis[i], basis[j], &h);
      m.s(i, j) = p.matrix_element(basis[i], basis[j]);
    }
  m.symmetrization_change = std::max(hermitize(m.h), hermitize(m.s));
  return m;
}

double subspace_expectation(const std::vector<StateVector>& basis, const Projector& p,
                            const CVector& v0, const PauliSum& obs) {
  const std::size_t d = basis.size();
  CMatrix o(d, d), s(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      o(i, j) = p.matrix_element(basis[i], basis[j], &obs);
      s(i, j) = p.matrix_element(basis[i], basis[j]);
    }
  hermitize(o);
  hermitize(s);
  return quadratic(o, v0) / quadratic(s, v0);
}

double fidelity(const std::vector<StateVector>& basis, const Projector& p, const CVector& v0,
                const StateVector& exact) {
  const std::size_t d = basis.size();
  CMatrix s(d, d);
  cplx amp = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    amp += v0[j] * p.matrix_element(exact, basis[j]);
    for (std::size_t i = 0; i < d; ++i) s(i, j) = p.matrix_element(basis[i], basis[j]);
  }
  hermitize(s);
  return std::norm(amp) / quadratic(s, v0);
}

GevpSolution solve_gevp(const SubspaceMatrices& m, double s_threshold) {
  const std::size_t d = m.dim();
  if (d == 0 || m.s.rows() != d) throw UsageError("subspace matrices have inconsistent sizes");
  const EighResult se = eigh(m.s);
  const double smax = se.values.back();
  if (!(smax > 1e-14)) throw DegenerateSubspaceError("overlap matrix has no usable eigenvalue");
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < d; ++k)
    if (se.values[k] >= s_threshold * smax) keep.push_back(k);
  const std::size_t r = keep.size();
  CMatrix x(d, r);
  for (std::size_t c = 0; c < r; ++c) {
    const double f = 1.0 / std::sqrt(se.values[keep[c]]);
    for (std::size_t i = 0; i < d; ++i) x(i, c) = f * se.vectors(i, keep[c]);
  }
  CMatrix hr = x.adjoint() * m.h * x;
  hermitize(hr);
  const EighResult he = eigh(hr);

  GevpSolution sol;
  sol.retained_dim = static_cast<int>(r);
  sol.energies = he.values;
  for (std::size_t n = 0; n < r; ++n) {
    CVector v = x * he.vectors.column(n);
    fix_phase(v);
    sol.vectors.push_back(std::move(v));
  }
  sol.e0 = sol.energies[0];
  sol.v0 = sol.vectors[0];
  return sol;
}

SubspaceEngine::SubspaceEngine(const SectorProjector& p, const SectorOperator& h,
                               const PowerEngine& eng, int dim)
    : p_(&p), h_(&h), eng_(&eng), dim_(dim) {
  if (dim < 1) throw ConfigError("Krylov dimension must be at least 1");
  if (h.dim() != p.space().dim()) throw UsageError("Hamiltonian and sector sizes differ");
  const CompiledProjector* cp = p.compiled_form();
  if (!cp) return;
  const auto& q = cp->columns();
  const std::size_t r = q.size();
  CMatrix hr(r, r);
  double defect = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < r; ++j) {
    CVector hq = h.apply(q[j]);
    for (std::size_t i = 0; i < r; ++i) hr(i, j) = dot(q[i], hq);
    scale = std::max(scale, norm2(hq));
    // Residual of H q_j outside the range.
    for (std::size_t i = 0; i < r; ++i) axpy(-hr(i, j), q[i], hq);
    defect = std::max(defect, norm2(hq));
  }
  if (defect <= 1e-10 * std::max(scale, 1.0)) h_range_ = std::move(hr);
}

ProjectedVector SubspaceEngine::project(CVector x) const {
  ProjectedVector pv;
  if (h_range_) {
    const CompiledProjector& cp = *p_->compiled_form();
    pv.bra = cp.coords(x);
    pv.ket = cp.middle() * pv.bra;
    pv.hbra = *h_range_ * pv.bra;
    pv.vec = std::move(x);
    return pv;
  }
  pv.bra = p_->bra_image(x);
  pv.ket = p_->ket_image(x);
  pv.hbra = p_->bra_image(h_->apply(x));
  pv.vec = std::move(x);
  return pv;
}

std::vector<ProjectedVector> SubspaceEngine::basis(const CVector& psi) const {
  std::vector<ProjectedVector> out;
  out.reserve(dim_);
  for (CVector& v : eng_->chain(dim_, psi, space())) out.push_back(project(std::move(v)));
  return out;
}

CMatrix SubspaceEngine::overlap(const std::vector<ProjectedVector>& a,
                                const std::vector<ProjectedVector>& b) {
  CMatrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = dot(a[i].bra, b[j].ket);
  return m;
}

CMatrix SubspaceEngine::hamiltonian(const std::vector<ProjectedVector>& a,
                                    const std::vector<ProjectedVector>& b) {
  CMatrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = dot(a[i].hbra, b[j].ket);
  return m;
}

SubspaceMatrices SubspaceEngine::matrices_of(const std::vector<ProjectedVector>& b) {
  if (b.empty()) throw UsageError("empty Krylov basis");
  SubspaceMatrices m{hamiltonian(b, b), overlap(b, b)};
  m.symmetrization_change = std::max(hermitize(m.h), hermitize(m.s));
  return m;
}

CMatrix SubspaceEngine::observable(const std::vector<ProjectedVector>& b,
                                   const SectorOperator& obs) const {
  CMatrix m(b.size(), b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const CVector ob = p_->bra_image(obs.apply(b[i].vec));
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = dot(ob, b[j].ket);
  }
  hermitize(m);
  return m;
}

double SubspaceEngine::expectation(const std::vector<ProjectedVector>& b, const CVector& v0,
                                   const SectorOperator& obs) const {
  CMatrix s = overlap(b, b);
  hermitize(s);
  return quadratic(observable(b, obs), v0) / quadratic(s, v0);
}

double SubspaceEngine::fidelity(const std::vector<ProjectedVector>& b, const CVector& v0,
                                const CVector& exact) const {
  const CVector eb = p_->bra_image(exact);
  cplx amp = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) amp += v0[j] * dot(eb, b[j].ket);
  CMatrix s = overlap(b, b);
  hermitize(s);
  return std::norm(amp) / quadratic(s, v0);
}

}  // namespace symvqe
