#pragma once

#include <Eigen/Dense>
#include <utility>

namespace gpdmm {

// Element of one edge space G_ij, stored flat. Matrix-shaped spaces are
// flattened row-major; the Frobenius inner product then coincides with the
// dot product, so every cone works on plain vectors.
using EdgeVector = Eigen::VectorXd;

Eigen::MatrixXd to_matrix(const EdgeVector& v, int rows, int cols);
EdgeVector from_matrix(const Eigen::MatrixXd& m);

// Closed convex cone describing the constraint set attached to one edge,
// together with the shape of its ambient space.
class ConeSpec {
 public:
  enum class Kind { Zero, Orthant, Psd, Soc };

  static ConeSpec zero(int dim) { return ConeSpec(Kind::Zero, dim, 1); }
  static ConeSpec orthant(int rows, int cols = 1) { return ConeSpec(Kind::Orthant, rows, cols); }
  static ConeSpec psd(int order) { return ConeSpec(Kind::Psd, order, order); }
  // Listed for completeness of the conic-program family; no shipped
  // experiment exercises it.
  static ConeSpec soc(int dim) { return ConeSpec(Kind::Soc, dim, 1); }

  Kind kind() const { return kind_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int ambient_dim() const { return rows_ * cols_; }
  int psd_order() const { return rows_; }
  bool self_dual() const { return kind_ != Kind::Zero; }

  bool operator==(const ConeSpec& o) const {
    return kind_ == o.kind_ && rows_ == o.rows_ && cols_ == o.cols_;
  }

 private:
  ConeSpec(Kind kind, int rows, int cols);
  Kind kind_;
  int rows_, cols_;
};

// P_K v. Idempotent; result lies in K.
EdgeVector project_cone(const ConeSpec& k, const EdgeVector& v);

// P_{K°} v, the projection onto the polar cone. Moreau: v = P_K v + P_{K°} v
// with the two parts orthogonal.
EdgeVector project_polar(const ConeSpec& k, const EdgeVector& v);

// One edge of the reflection 2 P_M - I with M = {u in K°, paired components
// equal}: returns (P_{K°}(y_ij + y_ji) - y_ij, P_{K°}(y_ij + y_ji) - y_ji).
// For the zero cone this is exactly the swap (y_ji, y_ij), implemented as
// such so equality-constrained runs are bit-identical to a plain y exchange.
std::pair<EdgeVector, EdgeVector> reflect_m(const ConeSpec& k, const EdgeVector& y_ij,
                                            const EdgeVector& y_ji);

// (|v - P_K v - P_{K°} v|, |<P_K v, P_{K°} v>|); both should vanish.
std::pair<double, double> moreau_check(const ConeSpec& k, const EdgeVector& v);

// Validates the dimension and symmetrises PSD-shaped data.
EdgeVector make_edge_vector(const ConeSpec& k, const EdgeVector& raw);

}  // namespace gpdmm
