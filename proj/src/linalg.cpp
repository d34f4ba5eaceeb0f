#include "chernlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace chernlab {

CMatrix CMatrix::identity(int size) {
  CMatrix m(size);
  for (int i = 0; i < size; ++i) m(i, i) = Complex(1.0, 0.0);
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = std::conj((*this)(j, i));
  return m;
}

CMatrix matmul(const CMatrix& x, const CMatrix& y) {
  CMatrix r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      Complex f = x(i, k);
      if (f == Complex(0.0, 0.0)) continue;
      for (int j = 0; j < x.n; ++j) r(i, j) += f * y(k, j);
    }
  return r;
}

std::vector<Complex> matvec(const CMatrix& m, const std::vector<Complex>& v) {
  std::vector<Complex> r(m.n);
  for (int i = 0; i < m.n; ++i) {
    Complex s(0.0, 0.0);
    for (int j = 0; j < m.n; ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

double max_abs(const CMatrix& m) {
  double r = 0.0;
  for (const Complex& v : m.a) r = std::max(r, std::abs(v));
  return r;
}

double max_abs_diff(const CMatrix& x, const CMatrix& y) {
  double r = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i)
    r = std::max(r, std::abs(x.a[i] - y.a[i]));
  return r;
}

double hermitian_defect(const CMatrix& m) {
  double r = 0.0;
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
  return r;
}

HermitianMatrix::HermitianMatrix(CMatrix matrix, double tol) : m(std::move(matrix)) {
  double defect = hermitian_defect(m);
  if (defect > tol)
    throw SingularMatrixError("matrix is not Hermitian (defect " +
                              std::to_string(defect) + ")");
}

PdCheckResult check_hermitian_pd(const CMatrix& m) {
  PdCheckResult result;
  result.hermitian_defect = hermitian_defect(m);

  int n = m.n;
  CMatrix h(n);  // Hermitian part, eliminated in place
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

  double scale = std::max(1.0, max_abs(h));
  double tol = 1e-12 * scale;

  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int j = k + 1; j < n; ++j)
      if (h(j, j).real() > h(p, p).real()) p = j;
    double pivot = h(p, p).real();
    if (pivot <= tol) {
      // No positive pivot left. Positive semidefinite iff the remaining
      // block vanishes: |h_ij|^2 <= h_ii h_jj forces it to zero when the
      // largest diagonal entry does.
      double rem = 0.0;
      for (int i = k; i < n; ++i)
        for (int j = k; j < n; ++j) rem = std::max(rem, std::abs(h(i, j)));
      result.min_eigenvalue_sign = rem <= 10.0 * tol ? 0 : -1;
      result.positive_definite = false;
      return result;
    }
    if (p != k) {  // symmetric row/column swap
      for (int j = 0; j < n; ++j) std::swap(h.a[k * n + j], h.a[p * n + j]);
      for (int i = 0; i < n; ++i) std::swap(h.a[i * n + k], h.a[i * n + p]);
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        h(i, j) -= h(i, k) * std::conj(h(j, k)) / pivot;
  }
  result.min_eigenvalue_sign = 1;
  result.positive_definite = true;
  return result;
}

CMatrix cholesky_lower(const CMatrix& h, double pivot_tol) {
  int n = h.n;
  CMatrix l(n);
  for (int j = 0; j < n; ++j) {
    Complex d = h(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * std::conj(l(j, k));
    double pivot = d.real();
    if (pivot < pivot_tol)
      throw SingularMatrixError("factorization pivot " + std::to_string(pivot) +
                                " below threshold at index " + std::to_string(j + 1));
    double root = std::sqrt(pivot);
    l(j, j) = Complex(root, 0.0);
    for (int i = j + 1; i < n; ++i) {
      Complex s = h(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / root;
    }
  }
  return l;
}

namespace {

// Inverse of a lower-triangular matrix by forward substitution.
CMatrix invert_lower(const CMatrix& l) {
  int n = l.n;
  CMatrix inv(n);
  for (int j = 0; j < n; ++j) {
    inv(j, j) = Complex(1.0, 0.0) / l(j, j);
    for (int i = j + 1; i < n; ++i) {
      Complex s(0.0, 0.0);
      for (int k = j; k < i; ++k) s += l(i, k) * inv(k, j);
      inv(i, j) = -s / l(i, i);
    }
  }
  return inv;
}

}  // namespace

HermitianMatrix invert_hermitian(const HermitianMatrix& h) {
  CMatrix linv = invert_lower(cholesky_lower(h.m));
  CMatrix inv = matmul(linv.adjoint(), linv);  // h^-1 = L^-H L^-1
  for (int i = 0; i < inv.n; ++i)
    for (int j = i; j < inv.n; ++j) {
      Complex v = 0.5 * (inv(i, j) + std::conj(inv(j, i)));
      inv(i, j) = v;
      inv(j, i) = std::conj(v);
    }
  return HermitianMatrix(std::move(inv));
}

UnitaryFrame unitary_frame(const HermitianMatrix& g) {
  // The frame must be orthonormal for the geometric pairing
  //   g(X, Ybar) = g_{i jbar} X^i conj(Y^j),
  // whose Gram matrix in linear-algebra convention (first slot conjugated)
  // is the transpose of g. For Hermitian g that transpose is conj(g), so the
  // triangular factorization runs on conj(g).
  CMatrix gt(g.dim());
  for (int i = 0; i < gt.n; ++i)
    for (int j = 0; j < gt.n; ++j) gt(i, j) = std::conj(g(i, j));
  CMatrix linv = invert_lower(cholesky_lower(gt));
  return UnitaryFrame{linv.adjoint()};  // E = (L^H)^-1, upper triangular
}

double frame_defect(const CMatrix& g, const CMatrix& e) {
  // gram(a, b) = g(e_a, ebar_b) = g_{i jbar} E(i, a) conj(E(j, b))
  CMatrix gram(g.n);
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b) {
      Complex acc(0.0, 0.0);
      for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
          acc += g(i, j) * e(i, a) * std::conj(e(j, b));
      gram(a, b) = acc;
    }
  return max_abs_diff(gram, CMatrix::identity(g.n));
}

CMatrix gram_schmidt_unitary(const CMatrix& m) {
  int n = m.n;
  CMatrix u = m;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      Complex proj(0.0, 0.0);
      for (int i = 0; i < n; ++i) proj += std::conj(u(i, k)) * u(i, j);
      for (int i = 0; i < n; ++i) u(i, j) -= proj * u(i, k);
    }
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += std::norm(u(i, j));
    norm = std::sqrt(norm);
    if (norm < 1e-10)
      throw SingularMatrixError("columns are numerically dependent");
    for (int i = 0; i < n; ++i) u(i, j) /= norm;
  }
  return u;
}

UnitaryFrame rotate_frame(const UnitaryFrame& frame, const CMatrix& u) {
  return UnitaryFrame{matmul(frame.e, u)};
}

double max_abs(const Tensor3& t) {
  double r = 0.0;
  for (const Complex& v : t.a) r = std::max(r, std::abs(v));
  return r;
}

double max_abs(const Tensor4& t) {
  double r = 0.0;
  for (const Complex& v : t.a) r = std::max(r, std::abs(v));
  return r;
}

double max_abs_diff(const Tensor4& x, const Tensor4& y) {
  double r = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i)
    r = std::max(r, std::abs(x.a[i] - y.a[i]));
  return r;
}

}  // namespace chernlab
