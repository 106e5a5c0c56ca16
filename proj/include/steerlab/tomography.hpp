#pragma once

// Process tomography of the dynamical map induced on a qubit S, from four
// steered input states and their evolved images.

#include <array>
#include <optional>
#include <string>

#include "steerlab/basis.hpp"
#include "steerlab/dynamics.hpp"
#include "steerlab/steering.hpp"

namespace steerlab {

inline constexpr double kCpTol = 1e-7;
inline constexpr double kProbeRankTol = 1e-8;
inline constexpr double kMapHermitianTol = 1e-6;
inline constexpr double kSuspectNegativity = 50.0;

enum class MapStatus { Ok, DegenerateDomain, NumericallySuspect, ReconstructionFailure };

const char* to_string(MapStatus s);

/// A acts on row-major vectorized 2x2 matrices, (rho~)_{ij} = A_{ij;i'j'} rho_{i'j'}.
/// B is its reshuffle, B_{ii';jj'} = A_{ij;i'j'}, Hermitian with trace 2 for
/// a trace- and Hermiticity-preserving map.
struct DynamicalMap {
  ComplexMatrix a;
  ComplexMatrix b;
  Eigen::Vector4d eigenvalues = Eigen::Vector4d::Zero();  // of B, ascending
  double b_neg = 0.0;
};

/// Row-major index of (i, j) in a vectorized 2x2 matrix.
constexpr int pair_index(int i, int j) { return 2 * i + j; }

/// B_{(i i'),(j j')} = A_{(i j),(i' j')}. The rule is its own inverse.
ComplexMatrix reshuffle(const ComplexMatrix& m);

struct ProbeSet {
  std::array<SteeringOperator, 4> ops;
  std::array<Eigen::Vector3d, 4> inputs;
  std::array<Eigen::Vector3d, 4> outputs;
};

/// X in {(1,0,0), (-1,0,0), (0,1,0), (0,0,1)}.
std::array<SteeringOperator, 4> canonical_probes();

/// Input Bloch vectors from theta and outputs from the evolved S block
/// (both normalized by row 0 of theta, which evolution leaves unchanged).
ProbeSet make_probe_set(const ThetaMatrix& theta, const RealMatrix& theta_tilde,
                        const std::array<SteeringOperator, 4>& ops);

/// Rank of the 4x4 real matrix with rows (1, e_in).
int verify_linear_independence(const ProbeSet& probes);

struct MapReconstruction {
  MapStatus status = MapStatus::ReconstructionFailure;
  std::optional<DynamicalMap> map;  // present unless the domain is degenerate
  int probe_rank = 0;
  std::string detail;

  bool ok() const { return status == MapStatus::Ok; }
};

MapReconstruction reconstruct_map(const ProbeSet& probes);
MapReconstruction reconstruct_map(const ThetaMatrix& theta, const RealMatrix& theta_tilde,
                                  const std::array<SteeringOperator, 4>& ops = canonical_probes());

/// sum |lambda_j| - 2 over the eigenvalues of B.
double b_negativity(const DynamicalMap& map);
double b_negativity(const Eigen::Vector4d& eigenvalues);

bool is_cp(const DynamicalMap& map, double tol = kCpTol);

/// Linear action on a 2x2 matrix. The input need not lie in the domain.
ComplexMatrix apply_map(const DynamicalMap& map, const ComplexMatrix& rho_s);

/// Qubit map rho = (1 + e.sigma)/2 -> (1 + (M e + t).sigma)/2, extended
/// linearly to all 2x2 matrices.
DynamicalMap map_from_affine(const Eigen::Matrix3d& m, const Eigen::Vector3d& t);

/// Map read off the evolution law directly, for domains too thin for four
/// probes. The S -> S part of the law is kept as is; every E and SE
/// coefficient is written as an affine function of the S Bloch vector
/// through X = Q^+ (e - c) on the domain (Q^+ the pseudo-inverse of the S
/// steering block). On a full-rank domain this equals the probe
/// reconstruction. A single-point domain gives DegenerateDomain, and a
/// coefficient that is not a function of e on the domain gives
/// ReconstructionFailure.
MapReconstruction extend_map(const ThetaMatrix& theta, const UCoeffs& u);

/// Builds the map record (B, eigenvalues, negativity) from an A matrix.
DynamicalMap map_from_a(const ComplexMatrix& a);

}  // namespace steerlab
