#include <cmath>
#include <random>

#include "ale/errors.hpp"
#include "ale/polytensor.hpp"
#include "ale/symbol.hpp"
#include "doctest.h"

using namespace ale;

namespace {

Eigen::VectorXd unit(int n, int i) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e(i) = 1;
  return e;
}

Eigen::MatrixXcd sym_product(int n, int i, int j) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  h(i, j) += 1;
  h(j, i) += 1;
  return h;
}

// Symbol of Delta^{k-1} B' assembled from the textbook Ricci linearization
// Ric'_ij = 1/2 (d^k d_i h_jk + d^k d_j h_ik - Lap h_ij - d_i d_j tr h)
// and B_ij = Lap A_ij - d^k d_i A_kj at the flat metric.
Eigen::MatrixXcd bach_oracle(const SymbolInput& in) {
  const int n = in.n;
  const double s = in.xi.squaredNorm();
  const Eigen::VectorXcd xi = in.xi.cast<cplx>();
  const Eigen::MatrixXcd& h = in.hhat;
  const Eigen::VectorXcd v = h * xi;
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd ric = 0.5 * (s * h + h.trace() * xi * xi.transpose() - xi * v.transpose() - v * xi.transpose());
  const cplx R = ric.trace();
  Eigen::MatrixXcd A = (ric - R / (2.0 * (n - 1)) * I) / double(n - 2);
  Eigen::MatrixXcd B = -s * A + xi * (A * xi).transpose();
  return std::pow(-s, in.k - 1) * B;
}

SymbolInput random_input(std::mt19937_64& rng, int n, int k) {
  std::normal_distribution<double> g;
  SymbolInput in;
  in.n = n;
  in.k = k;
  in.xi.resize(n);
  in.hhat.resize(n, n);
  for (int a = 0; a < n; ++a) {
    in.xi(a) = g(rng);
    for (int b = 0; b < n; ++b) in.hhat(a, b) = {g(rng), g(rng)};
  }
  in.hhat = (in.hhat + in.hhat.transpose()).eval();
  return in;
}

}  // namespace

TEST_CASE("symbol examples") {
  SymbolInput in;
  in.n = 4;
  in.k = 1;
  in.xi = unit(4, 0);
  in.hhat = sym_product(4, 1, 2);
  CHECK((linearized_obstruction_symbol(in) + 0.25 * in.hhat).norm() < 1e-15);
  CHECK(std::abs(linearized_scalar_symbol(in)) < 1e-15);

  in.hhat = Eigen::MatrixXcd::Identity(4, 4);
  CHECK(std::abs(linearized_scalar_symbol(in) - 3.0) < 1e-15);
  // Trace terms only: tr = 4, q = 1, s = 1, v = e1.
  Eigen::MatrixXcd S = linearized_obstruction_symbol(in);
  Eigen::MatrixXcd expect = -(1.0 / 4) * in.hhat;
  Eigen::MatrixXcd e11 = Eigen::MatrixXcd::Zero(4, 4);
  e11(0, 0) = 1;
  expect -= (4.0 / 12) * e11;
  expect -= (1.0 / 6) * e11;
  expect += (2.0 / 4) * e11;
  expect += ((4.0 - 1.0) / 12) * Eigen::MatrixXcd::Identity(4, 4);
  CHECK((S - expect).norm() < 1e-15);
  CHECK((S - bach_oracle(in)).norm() < 1e-15);
}

TEST_CASE("symbol agrees with the Ricci-based oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + trial % 6;
    const int k = 1 + trial % 3;
    SymbolInput in = random_input(rng, n, k);
    Eigen::MatrixXcd S = linearized_obstruction_symbol(in);
    CHECK((S - bach_oracle(in)).norm() <= 1e-12 * S.norm());
    CHECK((S - S.transpose()).norm() <= 1e-12 * S.norm());
  }
}

TEST_CASE("contracted Bianchi identity holds at the symbol level") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    SymbolInput in = random_input(rng, 5, 1);
    const Eigen::VectorXcd xi = in.xi.cast<cplx>();
    // div B' = 0 for every h at a flat metric.
    Eigen::VectorXcd d = linearized_obstruction_symbol(in) * xi;
    CHECK(d.norm() <= 1e-12 * std::pow(in.xi.norm(), 5) * in.hhat.norm());
  }
}

TEST_CASE("symbol sweep: gauge invariance, reduction and homogeneity") {
  auto r = symbol_sweep_serial(1000, 20240611);
  CHECK(r.trials == 1000);
  CHECK(r.lie_residual < 1e-12);
  CHECK(r.scalar_lie_residual < 1e-12);
  CHECK(r.reduction_residual < 1e-12);
  CHECK(r.homogeneity_residual < 1e-12);
  auto p = symbol_sweep(1000, 20240611, 2);
  CHECK(p.trials == r.trials);
  CHECK(p.lie_residual == r.lie_residual);
  CHECK(p.reduction_residual == r.reduction_residual);
}

TEST_CASE("symbol input validation") {
  SymbolInput in;
  in.n = 4;
  in.k = 1;
  in.xi = unit(4, 0);
  in.hhat = Eigen::MatrixXcd::Zero(4, 4);
  in.hhat(0, 1) = 1;
  CHECK_THROWS_AS(linearized_obstruction_symbol(in), PreconditionError);
  in.hhat = Eigen::MatrixXcd::Zero(3, 3);
  CHECK_THROWS_AS(linearized_obstruction_symbol(in), PreconditionError);
  in.n = 2;
  in.xi = unit(2, 0);
  in.hhat = Eigen::MatrixXcd::Zero(2, 2);
  CHECK_THROWS_AS(linearized_scalar_symbol(in), PreconditionError);
}

TEST_CASE("symbol matches the position-space operator on quartic monomials") {
  // For a constant-coefficient operator P of order 4, sum_{|a|=4} xi^a / a! P(x^a E)
  // is P(xi) E = (i)^{-4} S(xi) E = S(xi) E; lower-degree monomials are annihilated.
  for (int n : {3, 4}) {
    std::mt19937_64 rng(n);
    std::uniform_int_distribution<int> u(-3, 3);
    std::vector<std::vector<int>> quartic;
    std::vector<int> a(n, 0);
    auto enumerate = [&](auto&& self, int pos, int left) -> void {
      if (pos == n - 1) {
        a[pos] = left;
        quartic.push_back(a);
        return;
      }
      for (int c = left; c >= 0; --c) {
        a[pos] = c;
        self(self, pos + 1, left - c);
      }
    };
    enumerate(enumerate, 0, 4);
    for (int trial = 0; trial < 3; ++trial) {
      Eigen::VectorXd xi(n);
      for (int i = 0; i < n; ++i) xi(i) = u(rng);
      QMatrix E(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) E(i, j) = E(j, i) = Q(u(rng));
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
      for (const auto& alpha : quartic) {
        QPolyField mono = QPolyField::constant(n, Q(1));
        double weight = 1;
        for (int i = 0; i < n; ++i)
          for (int p = 0; p < alpha[i]; ++p) {
            mono = mono * QPolyField::coordinate(n, i);
            weight *= xi(i) / (p + 1);
          }
        QTensor h(n, 2);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) h.at({i, j}) = E(i, j) * mono;
        QTensor out = lin_bach(h, 1);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            const auto& c = out.at({i, j});
            REQUIRE(c.size() <= 1);
            if (c.size() == 1) {
              REQUIRE(c.terms().begin()->first.degree() == 0);
              acc(i, j) += weight * to_double(c.terms().begin()->second);
            }
          }
      }
      SymbolInput in;
      in.n = n;
      in.k = 1;
      in.xi = xi;
      in.hhat.resize(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) in.hhat(i, j) = to_double(E(i, j));
      Eigen::MatrixXcd S = linearized_obstruction_symbol(in);
      CHECK((acc - S).norm() <= 1e-12 * std::max(1.0, S.norm()));
    }
    // Degree 3 input: fourth-order operator kills it.
    QTensor h(n, 2);
    QPolyField cubic = QPolyField::coordinate(n, 0) * QPolyField::coordinate(n, 0) * QPolyField::coordinate(n, 1);
    h.at({0, 1}) = cubic;
    h.at({1, 0}) = cubic;
    CHECK(lin_bach(h, 1).is_zero());
  }
}
