#pragma once

// Exact dense linear algebra over Q: echelon forms, rank, nullspaces,
// solves and determinants. Floating work goes through Eigen instead.

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "ale/rational.hpp"

namespace ale {

struct QMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Q> a;

  QMatrix() = default;
  QMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  Q& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Q& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

using QVector = std::vector<Q>;

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(QMatrix& m);
std::size_t rank(QMatrix m);
std::vector<QVector> nullspace(QMatrix m);
// Some solution of A x = b, or nullopt when the system is inconsistent.
std::optional<QVector> solve(const QMatrix& A, const QVector& b);
Q determinant(QMatrix m);
QMatrix matmul(const QMatrix& A, const QMatrix& B);

// Incrementally maintained RREF of sparse rows keyed by an ordered key.
// add() reports whether the vector was independent of everything so far.
template <class Key>
class SparseEchelon {
 public:
  using Row = std::map<Key, Q>;

  bool add(Row v) {
    reduce(v);
    if (v.empty()) return false;
    const Key piv = v.begin()->first;
    Q lead = v.begin()->second;
    for (auto& [k, c] : v) c /= lead;
    for (auto& r : rows_) {
      auto it = r.find(piv);
      if (it == r.end()) continue;
      Q f = it->second;
      axpy(r, -f, v);
    }
    pivots_.push_back(piv);
    rows_.push_back(std::move(v));
    return true;
  }

  bool contains(Row v) const {
    reduce(v);
    return v.empty();
  }

  std::size_t dimension() const { return rows_.size(); }

 private:
  static void axpy(Row& r, const Q& f, const Row& v) {
    for (const auto& [k, c] : v) {
      auto [it, inserted] = r.try_emplace(k, 0);
      it->second += f * c;
      if (sgn(it->second) == 0) r.erase(it);
    }
  }

  void reduce(Row& v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      auto it = v.find(pivots_[i]);
      if (it == v.end()) continue;
      Q f = it->second;
      axpy(v, -f, rows_[i]);
    }
  }

  std::vector<Key> pivots_;
  std::vector<Row> rows_;
};

}  // namespace ale
