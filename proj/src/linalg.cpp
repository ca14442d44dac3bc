#include "cpkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cpkit {

namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(op) + ": shapes " +
                            std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " +
                            std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  }
}

}  // namespace

CMatrix::CMatrix(const std::vector<std::vector<cx>>& rows) {
  rows_ = rows.size();
  cols_ = rows.empty() ? 0 : rows[0].size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw DimensionMismatch("CMatrix: ragged rows");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = cx(1.0, 0.0);
  return m;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
  require_same_shape(*this, o, "add");
  CMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
  return r;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
  require_same_shape(*this, o, "sub");
  CMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
  return r;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
  if (cols_ != o.rows_) {
    throw DimensionMismatch("mul: inner dimensions " + std::to_string(cols_) +
                            " vs " + std::to_string(o.rows_));
  }
  CMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const cx aik = data_[i * cols_ + k];
      if (aik == cx(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        r.data_[i * o.cols_ + j] += aik * o.data_[k * o.cols_ + j];
      }
    }
  }
  return r;
}

CMatrix CMatrix::operator*(cx s) const {
  CMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * s;
  return r;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  require_same_shape(*this, o, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  require_same_shape(*this, o, "sub");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      r(j, i) = std::conj((*this)(i, j));
  return r;
}

CMatrix CMatrix::transpose() const {
  CMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

CMatrix CMatrix::conj() const {
  CMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = std::conj(data_[i]);
  return r;
}

cx CMatrix::trace() const {
  if (!square()) throw DimensionMismatch("trace: non-square");
  cx t(0.0, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const cx& v : data_) m = std::max(m, std::abs(v));
  return m;
}

CMatrix CMatrix::submatrix(std::size_t r0, std::size_t c0, std::size_t nr,
                           std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) {
    throw DimensionMismatch("submatrix: block out of range");
  }
  CMatrix r(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
  return r;
}

CMatrix operator*(cx s, const CMatrix& m) { return m * s; }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cx aij = a(i, j);
      if (aij == cx(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

cx hs_inner(const CMatrix& x, const CMatrix& y) {
  if (!x.square() || !y.square() || x.rows() != y.rows()) {
    throw DimensionMismatch("hs_inner: need square matrices of equal dimension");
  }
  cx acc(0.0, 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      acc += std::conj(x(i, j)) * y(i, j);
  return acc;
}

double hs_norm(const CMatrix& x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) acc += std::norm(x(i, j));
  return std::sqrt(acc);
}

bool approx_eq(const CMatrix& x, const CMatrix& y, double tol) {
  require_same_shape(x, y, "approx_eq");
  return (x - y).max_abs() <= tol;
}

CMatrix partial_trace(const CMatrix& x, std::size_t dim_first,
                      std::size_t dim_second, TraceSide which) {
  if (!x.square() || x.rows() != dim_first * dim_second) {
    throw DimensionMismatch("partial_trace: matrix dimension " +
                            std::to_string(x.rows()) + " != " +
                            std::to_string(dim_first) + "*" +
                            std::to_string(dim_second));
  }
  if (which == TraceSide::second) {
    CMatrix r(dim_first, dim_first);
    for (std::size_t i = 0; i < dim_first; ++i)
      for (std::size_t j = 0; j < dim_first; ++j) {
        cx acc(0.0, 0.0);
        for (std::size_t m = 0; m < dim_second; ++m)
          acc += x(i * dim_second + m, j * dim_second + m);
        r(i, j) = acc;
      }
    return r;
  }
  CMatrix r(dim_second, dim_second);
  for (std::size_t m = 0; m < dim_second; ++m)
    for (std::size_t n = 0; n < dim_second; ++n) {
      cx acc(0.0, 0.0);
      for (std::size_t i = 0; i < dim_first; ++i)
        acc += x(i * dim_second + m, i * dim_second + n);
      r(m, n) = acc;
    }
  return r;
}

HermEig herm_eig(const CMatrix& h, double herm_tol) {
  if (!h.square()) throw DimensionMismatch("herm_eig: non-square");
  const std::size_t n = h.rows();
  const double herm_dev = (h - h.adjoint()).max_abs();
  if (!(herm_dev <= herm_tol)) {
    throw NotHermitian("herm_eig: deviation " + std::to_string(herm_dev));
  }

  CMatrix a = (h + h.adjoint()) * cx(0.5, 0.0);
  CMatrix v = CMatrix::identity(n);
  const double scale = std::max(a.max_abs(), 1e-300);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        off = std::max(off, std::abs(a(p, q)));
    if (off <= 1e-15 * scale) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-18 * scale) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const cx phase = apq / mag;
        const double tau = (app - aqq) / (2.0 * mag);
        const double sign = tau >= 0.0 ? 1.0 : -1.0;
        const double t = -sign / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const cx sigma = phase * (t * c);

        // a <- J^H a J and v <- v J with J = [[c, sigma], [-conj(sigma), c]].
        for (std::size_t r = 0; r < n; ++r) {
          const cx arp = a(r, p);
          const cx arq = a(r, q);
          a(r, p) = c * arp - std::conj(sigma) * arq;
          a(r, q) = sigma * arp + c * arq;
        }
        for (std::size_t col = 0; col < n; ++col) {
          const cx apc = a(p, col);
          const cx aqc = a(q, col);
          a(p, col) = c * apc - sigma * aqc;
          a(q, col) = std::conj(sigma) * apc + c * aqc;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const cx vrp = v(r, p);
          const cx vrq = v(r, q);
          v(r, p) = c * vrp - std::conj(sigma) * vrq;
          v(r, q) = sigma * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() > a(y, y).real();
  });

  HermEig out;
  out.eigenvalues.resize(n);
  out.vectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.eigenvalues[k] = a(src, src).real();
    // Phase convention: first component of noticeable size made real positive.
    cx anchor(1.0, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      const cx vr = v(r, src);
      if (std::abs(vr) > 1e-8) {
        anchor = std::conj(vr) / std::abs(vr);
        break;
      }
    }
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = anchor * v(r, src);
  }
  return out;
}

CMatrix mat_exp(const CMatrix& a) {
  if (!a.square()) throw DimensionMismatch("mat_exp: non-square");
  const std::size_t n = a.rows();

  double inf_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(a(i, j));
    inf_norm = std::max(inf_norm, row);
  }

  int squarings = 0;
  double scaled = inf_norm;
  while (scaled > 0.5 && squarings < 64) {
    scaled *= 0.5;
    ++squarings;
  }

  const CMatrix x = a * cx(std::ldexp(1.0, -squarings), 0.0);
  CMatrix sum = CMatrix::identity(n);
  CMatrix term = CMatrix::identity(n);
  for (int k = 1; k <= 64; ++k) {
    term = term * x * cx(1.0 / k, 0.0);
    sum += term;
    if (term.max_abs() <= 1e-20 * std::max(1.0, sum.max_abs())) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

CMatrix inverse(const CMatrix& a) {
  if (!a.square()) throw DimensionMismatch("inverse: non-square");
  const std::size_t n = a.rows();
  CMatrix w = a;
  CMatrix inv = CMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(w(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(w(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best < 1e-300) throw Error("inverse: singular matrix");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(w(pivot, j), w(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const cx d = w(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      w(col, j) /= d;
      inv(col, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const cx f = w(r, col);
      if (f == cx(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        w(r, j) -= f * w(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

double smallest_singular_value(const CMatrix& a) {
  const CMatrix gram = a.adjoint() * a;
  const HermEig eig = herm_eig(gram, 1e-6 * std::max(1.0, gram.max_abs()));
  const double lo = eig.eigenvalues.back();
  return std::sqrt(std::max(0.0, lo));
}

}  // namespace cpkit
