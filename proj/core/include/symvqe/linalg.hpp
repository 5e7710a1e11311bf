#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace symvqe {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

// Small dense complex matrix, row-major.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  CMatrix adjoint() const;
  CVector column(std::size_t j) const;
  void set_column(std::size_t j, const CVector& v);

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<cplx> a_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator+(const CMatrix& a, const CMatrix& b);
CMatrix operator-(const CMatrix& a, const CMatrix& b);
CMatrix operator*(cplx s, const CMatrix& a);
CVector operator*(const CMatrix& a, const CVector& x);

cplx dot(const CVector& x, const CVector& y);  // conjugate-linear in x
double norm2(const CVector& x);
void axpy(cplx alpha, const CVector& x, CVector& y);
void scale(CVector& x, cplx alpha);
// x^H A y
cplx sandwich(const CVector& x, const CMatrix& a, const CVector& y);

double max_abs(const CMatrix& a);
double hermiticity_defect(const CMatrix& a);  // max |A - A^H|
// Replaces A by (A + A^H) / 2 and returns the largest change made.
double hermitize(CMatrix& a);

struct EighResult {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // column k pairs with values[k]
};

// Cyclic complex Jacobi rotations. Intended for the small d x d matrices of
// the subspace problem and the parameter metric.
EighResult eigh(const CMatrix& a);

// Solves (A + eps I) x = b by Gaussian elimination with partial pivoting.
CVector hermitian_solve(const CMatrix& a, const CVector& b, double eps_reg);

// Eigenvalues (ascending) and optionally eigenvectors of a real symmetric
// tridiagonal matrix via implicit QL.
void tridiagonal_eigen(std::vector<double> diag, std::vector<double> off,
                       std::vector<double>& values, std::vector<std::vector<double>>* vectors);

using LinearOperator = std::function<void(const cplx* in, cplx* out)>;

struct LanczosResult {
  double value = 0.0;
  CVector vector;
  double residual = 0.0;
  int iterations = 0;
};

// Lowest eigenpair of a Hermitian operator. Stores every Krylov vector and
// reorthogonalizes against all of them.
LanczosResult lanczos(const LinearOperator& apply, std::size_t dim, int max_iter, double tol,
                      std::uint64_t seed);

}  // namespace symvqe
