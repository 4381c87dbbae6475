#ifndef CSAOPT_GEOMETRY_HPP
#define CSAOPT_GEOMETRY_HPP

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "csaopt/errors.hpp"
#include "csaopt/random.hpp"

namespace csaopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class GeomKind {
  euclidean_box,
  euclidean_ball,
  simplex_entropy,
  psd_trace_ball,
  product,
};

// A feasible set paired with its distance generating function. Supplies the
// prox-mapping, the Bregman distance V, the set diameter D and the growth
// constant Q that every solver schedule consumes.
//
// Kinds and their (norm, omega) pairs:
//   euclidean_box / euclidean_ball : l2 norm, omega = 0.5*|x|^2
//   simplex_entropy                : l1 norm, omega = sum x_i ln x_i
//   psd_trace_ball                 : Frobenius norm on {A >= 0, Tr A <= C},
//                                    matrices flattened column-major
//   product                        : block sums; |x|^2 = sum of block norms^2
//
// All operations are pure functions of their inputs; instances are immutable
// and safe to share across threads.
class ProxGeometry {
 public:
  static ProxGeometry box(Vector lower, Vector upper);
  static ProxGeometry interval(double lo, double hi);
  static ProxGeometry ball(Vector center, double radius);
  static ProxGeometry simplex(int dim);
  static ProxGeometry psd_trace_ball(int side, double trace_cap);
  static ProxGeometry product(std::vector<ProxGeometry> parts);

  GeomKind kind() const { return kind_; }
  // Ambient dimension (side*side for psd_trace_ball, block sum for product).
  int dimension() const { return dim_; }
  int matrix_side() const { return side_; }
  const Vector& prox_center() const { return center_; }

  // argmin_z <v,z> + V(x,z) over the set. The solvers pass v = gamma_k * h_k.
  Vector prox_map(const Vector& x, const Vector& v) const;
  // V(z, x) = omega(x) - omega(z) - <grad omega(z), x - z>.
  double bregman(const Vector& z, const Vector& x) const;
  // D = sqrt(max V). For simplex_entropy the two-argument max diverges and
  // the center-based convention D^2 = max_x V(prox_center, x) = ln(dim)
  // applies instead (runs start at the prox-center).
  double diameter() const;
  // Q with V(z,x) <= Q/2 |z-x|^2; absent for simplex_entropy (the KL / l1^2
  // ratio is unbounded toward the boundary).
  std::optional<double> growth_constant() const;
  double dual_norm(const Vector& v) const;

  bool contains(const Vector& p, double tol = kFeasTol) const;
  // Feasible draw from a fixed documented distribution (uniform for box,
  // ball and simplex); used by pilot runs and tests.
  Vector sample_point(const SampleToken& tok) const;

  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  double radius() const { return radius_; }
  double trace_cap() const { return trace_cap_; }
  const std::vector<ProxGeometry>& parts() const { return parts_; }

  static constexpr double kFeasTol = 1e-10;

 private:
  ProxGeometry() = default;

  Vector sample_point_impl(const SampleToken& tok, std::uint64_t slot_base) const;

  GeomKind kind_ = GeomKind::euclidean_box;
  int dim_ = 0;
  int side_ = 0;  // psd only
  Vector center_;
  Vector lower_, upper_;  // box
  Vector ball_center_;    // ball
  double radius_ = 0;     // ball
  double trace_cap_ = 0;  // psd
  std::vector<ProxGeometry> parts_;
};

// Symmetric PSD square root by eigendecomposition (negative eigenvalues
// clipped at zero).
Matrix psd_sqrt(const Matrix& a);

}  // namespace csaopt

#endif
