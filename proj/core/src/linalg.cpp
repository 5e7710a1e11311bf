#include "symvqe/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "symvqe/errors.hpp"

namespace symvqe {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(c_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

CVector CMatrix::column(std::size_t j) const {
  CVector v(r_);
  for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
  return v;
}

void CMatrix::set_column(std::size_t j, const CVector& v) {
  for (std::size_t i = 0; i < r_; ++i) (*this)(i, j) = v[i];
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw UsageError("matrix product shape mismatch");
  CMatrix m(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) += aik * b(k, j);
    }
  return m;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw UsageError("matrix sum shape mismatch");
  CMatrix m = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) += b(i, j);
  return m;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) { return a + cplx{-1.0} * b; }

CMatrix operator*(cplx s, const CMatrix& a) {
  CMatrix m = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) *= s;
  return m;
}

CVector operator*(const CMatrix& a, const CVector& x) {
  if (a.cols() != x.size()) throw UsageError("matrix-vector shape mismatch");
  CVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

cplx dot(const CVector& x, const CVector& y) {
  if (x.size() != y.size()) throw UsageError("vector length mismatch");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

void axpy(cplx alpha, const CVector& x, CVector& y) {
  if (x.size() != y.size()) throw UsageError("axpy length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(CVector& x, cplx alpha) {
  for (auto& v : x) v *= alpha;
}

double norm2(const CVector& x) { return std::sqrt(std::real(dot(x, x))); }

cplx sandwich(const CVector& x, const CMatrix& a, const CVector& y) { return dot(x, a * y); }

double max_abs(const CMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

double hermiticity_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) throw UsageError("hermiticity of a non-square matrix");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
  return m;
}

double hermitize(CMatrix& a) {
  if (a.rows() != a.cols()) throw UsageError("hermitize of a non-square matrix");
  double change = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j) {
      const cplx avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
      change = std::max(change, std::abs(avg - a(i, j)));
      a(i, j) = avg;
      a(j, i) = std::conj(avg);
    }
  return change;
}

EighResult eigh(const CMatrix& input) {
  const std::size_t n = input.rows();
  if (n != input.cols()) throw UsageError("eigh needs a square matrix");
  CMatrix a = input;
  hermitize(a);
  CMatrix v = CMatrix::identity(n);
  const double scale = std::max(max_abs(a), 1e-300);

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (off_norm() <= 1e-15 * scale * static_cast<double>(n)) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag <= 1e-300) continue;
        const cplx ph = a(p, q) / mag;  // e^{i phi}
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
        const cplx s_ph = s * ph, s_phc = s * std::conj(ph);
        // A <- A J, V <- V J
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * c - akq * s_phc;
          a(k, q) = akp * s_ph + akq * c;
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * c - vkq * s_phc;
          v(k, q) = vkp * s_ph + vkq * c;
        }
        // A <- J^H A
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s_ph * aqk;
          a(q, k) = s_phc * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
  }
  if (sweep == kMaxSweeps) throw NumericalError("Jacobi eigensolver did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  EighResult r;
  r.values.resize(n);
  r.vectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    r.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) r.vectors(i, k) = v(i, order[k]);
  }
  return r;
}

CVector hermitian_solve(const CMatrix& a_in, const CVector& b, double eps_reg) {
  const std::size_t n = a_in.rows();
  if (n != a_in.cols() || b.size() != n) throw UsageError("hermitian_solve shape mismatch");
  CMatrix a = a_in;
  for (std::size_t i = 0; i < n; ++i) a(i, i) += eps_reg;
  CVector x = b;
  const double scale = std::max(max_abs(a), 1e-300);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (std::abs(a(piv, k)) <= 1e-14 * scale)
      throw NumericalError("hermitian_solve: singular matrix after regularization");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(x[k], x[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = a(i, k) / a(k, k);
      if (f == cplx{0.0}) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      x[i] -= f * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    cplx acc = x[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= a(k, j) * x[j];
    x[k] = acc / a(k, k);
  }
  return x;
}

void tridiagonal_eigen(std::vector<double> d, std::vector<double> off, std::vector<double>& values,
                       std::vector<std::vector<double>>* vectors) {
  const int n = static_cast<int>(d.size());
  std::vector<double> e(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) e[i] = off[i];
  std::vector<std::vector<double>> z;
  if (vectors) {
    z.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) z[i][i] = 1.0;
  }
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = 0;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (iter++ == 200) throw NumericalError("tridiagonal QL did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (vectors) {
            for (int k = 0; k < n; ++k) {
              f = z[k][i + 1];
              z[k][i + 1] = s * z[k][i] + c * f;
              z[k][i] = c * z[k][i] - s * f;
            }
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
  values.resize(n);
  for (int k = 0; k < n; ++k) values[k] = d[order[k]];
  if (vectors) {
    vectors->assign(n, std::vector<double>(n));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) (*vectors)[k][i] = z[i][order[k]];
  }
}

LanczosResult lanczos(const LinearOperator& apply, std::size_t dim, int max_iter, double tol,
                      std::uint64_t seed) {
  if (dim == 0 || max_iter < 1) throw UsageError("lanczos needs dim > 0 and max_iter > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  std::vector<CVector> basis;
  CVector v(dim);
  for (auto& z : v) z = {uni(rng), uni(rng)};
  {
    const double nv = norm2(v);
    for (auto& z : v) z /= nv;
  }
  basis.push_back(v);

  std::vector<double> alpha, beta;
  CVector w(dim);
  LanczosResult best;
  best.residual = std::numeric_limits<double>::infinity();

  auto ritz = [&](bool exact_residual) {
    std::vector<double> vals;
    std::vector<std::vector<double>> vecs;
    tridiagonal_eigen(alpha, beta, vals, &vecs);
    const std::size_t m = alpha.size();
    CVector x(dim, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < dim; ++k) x[k] += vecs[0][i] * basis[i][k];
    const double nx = norm2(x);
    for (auto& z : x) z /= nx;
    double res = 0.0;
    if (exact_residual) {
      CVector ax(dim);
      apply(x.data(), ax.data());
      for (std::size_t k = 0; k < dim; ++k) res += std::norm(ax[k] - vals[0] * x[k]);
      res = std::sqrt(res);
    }
    LanczosResult r;
    r.value = vals[0];
    r.vector = std::move(x);
    r.residual = res;
    r.iterations = static_cast<int>(m);
    return r;
  };

  for (int j = 0; j < max_iter; ++j) {
    const CVector& vj = basis.back();
    apply(vj.data(), w.data());
    double a = 0.0;
    for (std::size_t k = 0; k < dim; ++k) a += std::real(std::conj(vj[k]) * w[k]);
    alpha.push_back(a);
    // Two passes of classical Gram-Schmidt against every stored vector.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : basis) {
        cplx c = 0.0;
        for (std::size_t k = 0; k < dim; ++k) c += std::conj(u[k]) * w[k];
        for (std::size_t k = 0; k < dim; ++k) w[k] -= c * u[k];
      }
    const double b = norm2(w);
    const bool invariant = b <= 1e-13 * std::max(1.0, std::abs(a));
    const bool check = invariant || j + 1 == max_iter || (j + 1) % 5 == 0;
    if (check) {
      std::vector<double> vals;
      std::vector<std::vector<double>> vecs;
      tridiagonal_eigen(alpha, beta, vals, &vecs);
      const double estimate = b * std::abs(vecs[0][alpha.size() - 1]);
      if (estimate <= tol || invariant || j + 1 == max_iter) {
        LanczosResult r = ritz(true);
        if (r.residual < best.residual) best = r;
        if (r.residual <= tol) return r;
        if (invariant) break;
      }
    }
    beta.push_back(b);
    CVector next(dim);
    for (std::size_t k = 0; k < dim; ++k) next[k] = w[k] / b;
    basis.push_back(std::move(next));
  }
  throw ConvergenceError("lanczos did not reach residual " + std::to_string(tol) +
                             " (best " + std::to_string(best.residual) + ")",
                         best.residual);
}

}  // namespace symvqe
