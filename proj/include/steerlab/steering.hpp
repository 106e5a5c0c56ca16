#pragma once

// Steering of S and E by positive operators applied to the reference R,
// and the geometry of the resulting reduced steering set of a qubit S.

#include "steerlab/basis.hpp"
#include "steerlab/density.hpp"
#include "steerlab/random.hpp"

namespace steerlab {

inline constexpr double kSteeringProbabilityFloor = 1e-12;
inline constexpr double kDomainRankTol = 1e-7;

/// Positive operator X_mu F_R^mu on R in the gauge X_0 = 1. For a qubit R
/// positivity is |X_vec| <= 1.
class SteeringOperator {
 public:
  /// Qubit reference; throws std::invalid_argument if |bloch| > 1.
  static SteeringOperator from_bloch(const Eigen::Vector3d& bloch);
  /// Full coefficient vector (X_0 must equal 1).
  static SteeringOperator from_coeffs(const RealVector& x);

  const RealVector& coeffs() const { return x_; }
  Eigen::Vector3d bloch() const { return x_.segment<3>(1); }
  /// X_mu F_R^mu as a matrix.
  ComplexMatrix op(int dim_r) const;

 private:
  explicit SteeringOperator(RealVector x) : x_(std::move(x)) {}
  RealVector x_;
};

class SteeringError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tr_R[(E (x) 1 (x) 1) rho] / Tr[(E (x) 1 (x) 1) rho]. Throws SteeringError
/// when the outcome has vanishing probability.
DensityMatrix steer_se(const DensityMatrix& rho, const SteeringOperator& x);

/// Unnormalized steering probability Tr[(E (x) 1 (x) 1) rho].
double steering_weight(const DensityMatrix& rho, const SteeringOperator& x);

/// Bloch vector of the steered state of a qubit S:
/// e_j = Theta_{j,mu} X_mu / Theta_{0,mu} X_mu. In the canonical gauge the
/// denominator is 1.
Eigen::Vector3d reduced_steer_s(const ThetaMatrix& theta, const SteeringOperator& x);

/// Same for a bare 3 x (n_r + 1) block such as an evolved S block.
Eigen::Vector3d reduced_steer_s(const RealMatrix& s_block, const RealVector& row0,
                                const SteeringOperator& x);

Eigen::Vector3d bloch_vector(const ComplexMatrix& qubit_state);
ComplexMatrix qubit_state(const Eigen::Vector3d& bloch);

struct EllipsoidGeometry {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d semiaxes = Eigen::Vector3d::Zero();  // descending
  Eigen::Matrix3d axes = Eigen::Matrix3d::Identity();  // columns

  /// Whether `p` lies in the ellipsoid (on its affine span when
  /// degenerate), within `tol` in the normalized quadratic form and in
  /// distance off the span.
  bool contains(const Eigen::Vector3d& p, double tol = 1e-9) const;
};

/// Image of the unit X-ball under X -> c + Q X, where c is column 0 and Q
/// columns 1..3 of the 3 x 4 S block of a canonical-gauge theta matrix.
EllipsoidGeometry steering_ellipsoid(const ThetaMatrix& theta);
EllipsoidGeometry steering_ellipsoid(const RealMatrix& s_block);

enum class SampleMode { Interior, Boundary };

/// Uniform on the unit ball (interior) or unit sphere (boundary).
SteeringOperator sample_X(Rng& rng, SampleMode mode);

/// Number of singular values of Q above kDomainRankTol * max(1, sigma_max).
int domain_rank(const ThetaMatrix& theta);
int domain_rank(const RealMatrix& s_block);

}  // namespace steerlab
