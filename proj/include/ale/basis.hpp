#pragma once

// Angular tensors on the round sphere, invariant subspaces of Euler-type
// operators, and the radial triple-bar norm.

#include <optional>
#include <string>
#include <vector>

#include "ale/expsum.hpp"
#include "ale/polytensor.hpp"

namespace ale {

// Homogeneous harmonic polynomial Re (x1 + i x2)^j.
QPolyField sectoral_harmonic(int n, int j);
// Same divided by r^j (homogeneity 0).
QPolyField angular_harmonic(int n, int j);

// An orthogonal family of tensors sharing one homogeneity. Elements are kept
// orthogonal but not normalized; weights[c] = <<e_c, e_c>>.
struct AngularBasis {
  int n = 0, rank = 0;
  Q degree;
  std::string tag;
  std::vector<QTensor> elements;
  std::vector<Q> weights;

  std::size_t size() const { return elements.size(); }
  QMatrix gram() const;
  // Exact coordinates of f in the basis; nullopt when f is outside the span.
  std::optional<QVector> coordinates_of(const QTensor& f) const;
};

// Gram-Schmidt on the slice inner product, dropping dependent elements.
AngularBasis make_basis(const std::vector<QTensor>& elements, const std::string& tag);

// phi dr dr, tau (x) dr, B, phi r^2 g~ for phi = angular_harmonic(n, j).
// j = 0 keeps T1, T4; j = 1 has B = 0.
std::vector<QTensor> scalar_type_tensors(int n, int j);
AngularBasis scalar_type_basis(int n, int j);
// Co-closed eigenform psi of degree j on S^{n-1} (homogeneity -1).
QTensor type_one_form(int n, int j);
AngularBasis typeI_basis(int n, int j);
// phi x / r^2 and grad phi (homogeneity -1); j = 0 keeps only the first.
AngularBasis typeII_basis(int n, int j);
// (r psi) (x) dr: seed of the vector-type 2-tensor modes.
QTensor vector_type_seed(int n, int j);
// Re(w1^{j-2} a (x) a) / r^j, a = w1 dw2 - w2 dw1: transverse traceless, n >= 4, j >= 2.
QTensor tensor_type_seed(int n, int j);

// Smallest span containing the seed and closed under f -> r^{-h} op(r^m f)
// for the probe exponents m (default 0..order). Throws after max_iter new elements.
AngularBasis closure_basis(const QTensor& seed, Opcode op, const OpParams& params, int max_iter = 50,
                           std::vector<Q> probes = {});
// Span of the stripped images of a basis, brought to homogeneity out_degree.
AngularBasis image_basis(const AngularBasis& in, Opcode op, const OpParams& params, const Q& out_degree,
                         std::vector<Q> probes = {});

// r^{d - h} f for f of pure homogeneity h (zero passes through).
QTensor strip_to_degree(const QTensor& f, const Q& d);

// Radial data of a separated field sum_c q_c(r) e_c, with q_c written in
// s = log r as exponential sums.
struct ModeProfile {
  std::vector<double> weights;  // <<e_c, e_c>>
  std::vector<ExpSum> q;
};

// |||h|||^2_{a,b} = int_a^b r^{-1} <<h, h>> dr.
double triple_bar_norm_sq(const ModeProfile& h, double a, double b);
double triple_bar_norm(const ModeProfile& h, double a, double b);

}  // namespace ale
