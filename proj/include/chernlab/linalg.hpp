#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace chernlab {

using Complex = std::complex<double>;

class SingularMatrixError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense square complex matrix, row-major, sized for chart dimensions
/// (n <= 8). M(i, j) is row i, column j.
struct CMatrix {
  int n = 0;
  std::vector<Complex> a;

  CMatrix() = default;
  explicit CMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size) {}

  static CMatrix identity(int size);

  Complex& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  Complex operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  CMatrix adjoint() const;  // conjugate transpose
};

CMatrix matmul(const CMatrix& x, const CMatrix& y);
std::vector<Complex> matvec(const CMatrix& m, const std::vector<Complex>& v);
double max_abs(const CMatrix& m);
double max_abs_diff(const CMatrix& x, const CMatrix& y);
/// max_ij |m - m^H|.
double hermitian_defect(const CMatrix& m);

/// Matrix certified Hermitian at construction (defect <= tol, default 1e-10).
struct HermitianMatrix {
  CMatrix m;

  explicit HermitianMatrix(CMatrix matrix, double tol = 1e-10);

  int dim() const { return m.n; }
  Complex operator()(int i, int j) const { return m(i, j); }
};

struct PdCheckResult {
  double hermitian_defect = 0.0;
  int min_eigenvalue_sign = 0;  // +1 definite, 0 semidefinite boundary, -1 indefinite/negative
  bool positive_definite = false;
};

/// Diagnostic positivity check on the Hermitian part of `m`, via complete
/// (diagonal) pivoting: a vanishing max pivot with a nonzero remaining block
/// means the matrix has a negative direction.
PdCheckResult check_hermitian_pd(const CMatrix& m);

/// Lower-triangular L with h = L L^H and positive real diagonal. Throws
/// SingularMatrixError when a pivot falls below `pivot_tol`.
CMatrix cholesky_lower(const CMatrix& h, double pivot_tol = 1e-12);

/// Inverse of a Hermitian positive definite matrix via its triangular
/// factorization; the result is symmetrized so it is Hermitian to rounding.
HermitianMatrix invert_hermitian(const HermitianMatrix& h);

/// Columns e_1..e_n are orthonormal for the geometric pairing
///   <X, Y>_g = g_{i jbar} X^i conj(Y^j),
/// i.e. g(i, j) E(i, a) conj(E(j, b)) = delta_ab (sum over i, j). Built from
/// the triangular factorization of conj(g) — the Gram matrix of that pairing
/// in first-slot-conjugated convention — which makes E upper triangular with
/// positive real diagonal, and the construction deterministic.
struct UnitaryFrame {
  CMatrix e;

  int dim() const { return e.n; }
};

UnitaryFrame unitary_frame(const HermitianMatrix& g);

/// max |g(i, j) E(i, a) conj(E(j, b)) - delta_ab|; diagnostic for frame tests.
double frame_defect(const CMatrix& g, const CMatrix& e);

/// Orthonormalizes the columns of m (standard inner product) with modified
/// Gram-Schmidt; used to turn random matrices into random unitaries. Throws
/// SingularMatrixError when the columns are numerically dependent.
CMatrix gram_schmidt_unitary(const CMatrix& m);

/// Frame rotated by a unitary matrix: columns of E U. Rotations preserve
/// g-orthonormality.
UnitaryFrame rotate_frame(const UnitaryFrame& frame, const CMatrix& u);

/// Rank-3 / rank-4 arrays of complex entries over a fixed dimension n.
struct Tensor3 {
  int n = 0;
  std::vector<Complex> a;

  Tensor3() = default;
  explicit Tensor3(int size)
      : n(size),
        a(static_cast<std::size_t>(size) * size * size) {}

  Complex& operator()(int i, int j, int k) {
    return a[(static_cast<std::size_t>(i) * n + j) * n + k];
  }
  Complex operator()(int i, int j, int k) const {
    return a[(static_cast<std::size_t>(i) * n + j) * n + k];
  }
};

struct Tensor4 {
  int n = 0;
  std::vector<Complex> a;

  Tensor4() = default;
  explicit Tensor4(int size)
      : n(size),
        a(static_cast<std::size_t>(size) * size * size * size) {}

  Complex& operator()(int i, int j, int k, int l) {
    return a[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
  }
  Complex operator()(int i, int j, int k, int l) const {
    return a[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
  }
};

double max_abs(const Tensor3& t);
double max_abs(const Tensor4& t);
double max_abs_diff(const Tensor4& x, const Tensor4& y);

}  // namespace chernlab
