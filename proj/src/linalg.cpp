#include "ale/linalg.hpp"

#include "ale/errors.hpp"

namespace ale {

std::vector<std::size_t> rref(QMatrix& m) {
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t p = r;
    while (p < m.rows && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
    Q lead = m(r, c);
    for (std::size_t j = c; j < m.cols; ++j) m(r, j) /= lead;
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      Q f = m(i, c);
      for (std::size_t j = c; j < m.cols; ++j) m(i, j) -= f * m(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

std::size_t rank(QMatrix m) { return rref(m).size(); }

std::vector<QVector> nullspace(QMatrix m) {
  auto piv = rref(m);
  std::vector<bool> is_piv(m.cols, false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<QVector> basis;
  for (std::size_t f = 0; f < m.cols; ++f) {
    if (is_piv[f]) continue;
    QVector v(m.cols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<QVector> solve(const QMatrix& A, const QVector& b) {
  require(b.size() == A.rows, "solve: size mismatch");
  QMatrix aug(A.rows, A.cols + 1);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < A.cols; ++j) aug(i, j) = A(i, j);
    aug(i, A.cols) = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == A.cols) return std::nullopt;
  QVector x(A.cols, 0);
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug(i, A.cols);
  return x;
}

Q determinant(QMatrix m) {
  require(m.rows == m.cols, "determinant of a non-square matrix");
  Q det = 1;
  const std::size_t n = m.rows;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m(p, c)) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(m(i, c)) == 0) continue;
      Q f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

QMatrix matmul(const QMatrix& A, const QMatrix& B) {
  require(A.cols == B.rows, "matmul: shape mismatch");
  QMatrix C(A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t k = 0; k < A.cols; ++k) {
      if (sgn(A(i, k)) == 0) continue;
      for (std::size_t j = 0; j < B.cols; ++j) C(i, j) += A(i, k) * B(k, j);
    }
  return C;
}

}  // namespace ale
