#include "ale/symbol.hpp"

#include <cmath>

#include "ale/errors.hpp"

namespace ale {

void validate(const SymbolInput& in) {
  require(in.n >= 3, "symbol: n >= 3 expected");
  require(in.k >= 1, "symbol: k >= 1 expected");
  require(in.xi.size() == in.n, "symbol: xi has the wrong length");
  require(in.hhat.rows() == in.n && in.hhat.cols() == in.n, "symbol: hhat has the wrong shape");
  require((in.hhat - in.hhat.transpose()).norm() <= 1e-12 * std::max(1.0, in.hhat.norm()),
          "symbol: hhat must be symmetric");
}

Eigen::MatrixXcd linearized_obstruction_symbol(const SymbolInput& in) {
  validate(in);
  const int n = in.n;
  const double s = in.xi.squaredNorm();
  const Eigen::VectorXcd xi = in.xi.cast<cplx>();
  const Eigen::MatrixXcd& h = in.hhat;
  const cplx tr = h.trace();
  const Eigen::VectorXcd v = h * xi;
  const cplx q = xi.dot(v);  // xi real, so no conjugation issue
  const Eigen::MatrixXcd xx = xi * xi.transpose();
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  const double a = n - 2.0, b = n - 1.0;

  Eigen::MatrixXcd out = -(s * s / (2 * a)) * h;                   // Lap^2 h
  out -= (s * tr / (2 * a * b)) * xx;                               // Hess Lap tr
  out -= (q / (2 * b)) * xx;                                        // Hess div div
  out += (s / (2 * a)) * (xi * v.transpose() + v * xi.transpose());  // Lap div* div
  out += ((s * s * tr - s * q) / (2 * a * b)) * I;                  // trace terms
  return std::pow(-s, in.k - 1) * out;
}

cplx linearized_scalar_symbol(const SymbolInput& in) {
  validate(in);
  const Eigen::VectorXcd xi = in.xi.cast<cplx>();
  return in.xi.squaredNorm() * in.hhat.trace() - xi.dot(in.hhat * xi);
}

Eigen::MatrixXcd lie_symbol(const Eigen::VectorXd& xi, const Eigen::VectorXcd& v) {
  require(xi.size() == v.size(), "lie_symbol: size mismatch");
  const Eigen::VectorXcd x = xi.cast<cplx>();
  return cplx(0, 1) * (x * v.transpose() + v * x.transpose());
}

Eigen::MatrixXcd transverse_traceless(const Eigen::VectorXd& xi, const Eigen::MatrixXcd& h) {
  const Eigen::Index n = xi.size();
  require(n >= 2 && h.rows() == n && h.cols() == n, "transverse_traceless: size mismatch");
  const double s = xi.squaredNorm();
  require(s > 0, "transverse_traceless: xi = 0");
  const Eigen::MatrixXcd P =
      (Eigen::MatrixXd::Identity(n, n) - xi * xi.transpose() / s).cast<cplx>();
  Eigen::MatrixXcd t = P * h * P;
  t -= (t.trace() / double(n - 1)) * P;
  return t;
}

}  // namespace ale
