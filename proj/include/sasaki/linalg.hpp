#pragma once

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <utility>

#include "sasaki/types.hpp"

namespace sasaki {

// Small dense complex matrix, row-major.
class CMat {
 public:
  CMat() = default;
  CMat(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols, Cx{}) {}
  static CMat identity(int n) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Cx& operator()(int i, int j) { return a_[i * cols_ + j]; }
  const Cx& operator()(int i, int j) const { return a_[i * cols_ + j]; }

  CMat transpose() const {
    CMat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  CMat conj() const {
    CMat c(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) c(i, j) = std::conj((*this)(i, j));
    return c;
  }
  double max_abs() const {
    double m = 0.0;
    for (const Cx& v : a_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int rows_ = 0, cols_ = 0;
  CVec a_;
};

inline CMat operator*(const CMat& a, const CMat& b) {
  assert(a.cols() == b.rows());
  CMat r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int l = 0; l < a.cols(); ++l) {
      Cx ail = a(i, l);
      if (ail == Cx{}) continue;
      for (int j = 0; j < b.cols(); ++j) r(i, j) += ail * b(l, j);
    }
  return r;
}

inline CMat operator-(const CMat& a, const CMat& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  CMat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

inline CVec operator*(const CMat& a, const CVec& x) {
  assert(a.cols() == static_cast<int>(x.size()));
  CVec y(a.rows(), Cx{});
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

// Cholesky H = L L^H for Hermitian positive definite H, L lower triangular
// with positive real diagonal. Admissibility rule: every pivot must exceed
// pivot_rel * trace(H)/n; pivots below that near zero signal a singular
// Hessian, negative ones an indefinite one.
inline CMat cholesky_lower(const CMat& h, double pivot_rel = 1e-10) {
  const int n = h.rows();
  assert(h.cols() == n);
  double trace = 0.0;
  for (int i = 0; i < n; ++i) trace += h(i, i).real();
  const double floor_val = pivot_rel * std::abs(trace) / std::max(n, 1);
  CMat l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = h(j, j).real();
    for (int p = 0; p < j; ++p) d -= std::norm(l(j, p));
    if (!(d > floor_val)) {
      if (d < -floor_val)
        throw HessianNotPositiveDefiniteError(
            "complex Hessian is not positive definite (pivot " +
            std::to_string(d) + ")");
      throw SingularHessianError("complex Hessian is numerically singular");
    }
    const double diag = std::sqrt(d);
    l(j, j) = diag;
    for (int i = j + 1; i < n; ++i) {
      Cx s = h(i, j);
      for (int p = 0; p < j; ++p) s -= l(i, p) * std::conj(l(j, p));
      l(i, j) = s / diag;
    }
  }
  return l;
}

// Inverse of H from its Cholesky factor: H^{-1} = L^{-H} L^{-1}.
inline CMat cholesky_inverse(const CMat& l) {
  const int n = l.rows();
  CMat linv(n, n);
  for (int j = 0; j < n; ++j) {
    linv(j, j) = 1.0 / l(j, j);
    for (int i = j + 1; i < n; ++i) {
      Cx s{};
      for (int p = j; p < i; ++p) s += l(i, p) * linv(p, j);
      linv(i, j) = -s / l(i, i);
    }
  }
  CMat inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Cx s{};
      for (int p = std::max(i, j); p < n; ++p)
        s += std::conj(linv(p, i)) * linv(p, j);
      inv(i, j) = s;
    }
  return inv;
}

// Determinant of a general complex matrix via LU with partial pivoting.
inline Cx det_lu(CMat a) {
  const int n = a.rows();
  Cx det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (std::abs(a(piv, c)) == 0.0) return Cx{};
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (int r = c + 1; r < n; ++r) {
      Cx f = a(r, c) / a(c, c);
      for (int j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

// Rank-3 / rank-4 complex arrays over the (2k+1)-dim basis.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), a_(static_cast<size_t>(n) * n * n, Cx{}) {}
  int dim() const { return n_; }
  Cx& operator()(int i, int j, int l) { return a_[(i * n_ + j) * n_ + l]; }
  const Cx& operator()(int i, int j, int l) const {
    return a_[(i * n_ + j) * n_ + l];
  }
  double max_abs() const {
    double m = 0.0;
    for (const Cx& v : a_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int n_ = 0;
  CVec a_;
};

class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n)
      : n_(n), a_(static_cast<size_t>(n) * n * n * n, Cx{}) {}
  int dim() const { return n_; }
  Cx& operator()(int i, int j, int l, int m) {
    return a_[((i * n_ + j) * n_ + l) * n_ + m];
  }
  const Cx& operator()(int i, int j, int l, int m) const {
    return a_[((i * n_ + j) * n_ + l) * n_ + m];
  }
  double max_abs() const {
    double m = 0.0;
    for (const Cx& v : a_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int n_ = 0;
  CVec a_;
};

// Real banded LU solve with partial pivoting, LAPACK-style storage.
// Rows carry kl subdiagonals and ku superdiagonals; pivoting needs kl extra
// superdiagonals of fill. Solves A x = b in place, returns x.
class BandedMatrix {
 public:
  BandedMatrix(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), w_(2 * kl + ku + 1),
        a_(static_cast<size_t>(n) * w_, 0.0) {}

  double& at(int i, int j) {
    assert(j - i <= ku_ + kl_ && i - j <= kl_);
    return a_[static_cast<size_t>(j) * w_ + (kl_ + ku_ + i - j)];
  }
  void add(int i, int j, double v) { at(i, j) += v; }

  std::vector<double> solve(std::vector<double> b) {
    const int n = n_, kl = kl_, ku = ku_ + kl_;  // ku includes fill space
    std::vector<int> piv(n);
    for (int c = 0; c < n; ++c) {
      int last = std::min(n - 1, c + kl);
      int p = c;
      for (int r = c + 1; r <= last; ++r)
        if (std::abs(entry(r, c)) > std::abs(entry(p, c))) p = r;
      piv[c] = p;
      if (std::abs(entry(p, c)) < 1e-300)
        throw SingularHessianError("banded LU: zero pivot");
      if (p != c) {
        int jmax = std::min(n - 1, c + ku);
        for (int j = c; j <= jmax; ++j) std::swap(entry(c, j), entry(p, j));
        std::swap(b[c], b[p]);
      }
      for (int r = c + 1; r <= last; ++r) {
        double f = entry(r, c) / entry(c, c);
        entry(r, c) = f;
        int jmax = std::min(n - 1, c + ku);
        for (int j = c + 1; j <= jmax; ++j) entry(r, j) -= f * entry(c, j);
        b[r] -= f * b[c];
      }
    }
    for (int r = n - 1; r >= 0; --r) {
      double s = b[r];
      int jmax = std::min(n - 1, r + ku);
      for (int j = r + 1; j <= jmax; ++j) s -= entry(r, j) * b[j];
      b[r] = s / entry(r, r);
    }
    return b;
  }

 private:
  double& entry(int i, int j) {
    return a_[static_cast<size_t>(j) * w_ + (kl_ + ku_ + i - j)];
  }
  int n_, kl_, ku_, w_;
  std::vector<double> a_;
};

}  // namespace sasaki
