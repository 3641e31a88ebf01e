#ifndef PROJCOMP_LIE_CONNECTION_HPP
#define PROJCOMP_LIE_CONNECTION_HPP

#include <Eigen/Dense>
#include <vector>

#include "projcomp/lie_algebra.hpp"
#include "projcomp/ode.hpp"

namespace projcomp {

/// Left-invariant affine connection on a Lie group, given by the linear map
/// Γ : 𝔥 → gl(𝔥) in the fixed basis of the algebra.
struct LeftInvariantConnection {
  StructureConstants algebra;
  std::vector<MatrixXd> gamma;  // gamma[i] = Γ(e_i)

  MatrixXd gamma_of(const VectorXd& a) const;
};

/// Γ = p·ad. p = 1/2 is the Levi-Civita connection of a bi-invariant metric.
LeftInvariantConnection scaled_ad_connection(const StructureConstants& sc,
                                             double p);
inline LeftInvariantConnection half_ad_connection(
    const StructureConstants& sc) {
  return scaled_ad_connection(sc, 0.5);
}
LeftInvariantConnection zero_connection(const StructureConstants& sc);

/// T(A,B) = Γ(A)B - Γ(B)A - [A,B]
VectorXd connection_torsion(const LeftInvariantConnection& conn,
                            const VectorXd& a, const VectorXd& b);
bool is_torsion_free(const LeftInvariantConnection& conn, double tol = 1e-10);

/// κ(A,B) = [Γ(A),Γ(B)] - Γ([A,B])
MatrixXd connection_curvature(const LeftInvariantConnection& conn,
                              const VectorXd& a, const VectorXd& b);

/// K_{jl} = (K^i_{jil} + K^i_{lij})/2 with K^i_{jkl} = κ(e_k,e_l)^i_j.
MatrixXd symmetrized_ricci(const LeftInvariantConnection& conn);

/// The lift of Γ into trace-free (n+1)x(n+1) matrices:
///   C(A) = [ -tr Γ(A)/(n+1)   F(A) ; A   Γ(A) - tr Γ(A)/(n+1) ]
/// with F(A)_j = tr(Γ(e_j)∘ad_A)/(2(n+1)).
struct ProjectiveLift {
  StructureConstants algebra;
  std::vector<MatrixXd> e_map;  // E(e_i)
  MatrixXd f_form;              // F(e_i)_j

  MatrixXd e_of(const VectorXd& a) const;
  Eigen::RowVectorXd f_of(const VectorXd& a) const;
  MatrixXd c_of(const VectorXd& a) const;  // (n+1)x(n+1)
};

ProjectiveLift projective_lift(const LeftInvariantConnection& conn);

struct NormalityReport {
  bool normal = false;
  /// max over basis pairs of |(E(A)+trE(A))B - (E(B)+trE(B))A - [A,B]|
  double torsion_residual = 0.0;
  /// same condition phrased as | [C(A),C(B)] - C([A,B]) | projected mod 𝔤₀
  double invariant_residual = 0.0;
  /// traced-curvature residual Σ_i K^i_{jil} of the lift (reported, not gated)
  double traced_curvature_residual = 0.0;
};

NormalityReport normality_check(const ProjectiveLift& lift, double tol = 1e-9);

// --- the bi-invariant family on SL(2,R) ------------------------------------

/// Closed-form curvature blocks of C(A) = [0, q A*; A, p ad_A] on sl(2,R):
///   κ(A,B) = [ 0, 2pq [A,B]* ; (2p-1)[A,B], q(A⊗B* - B⊗A*) + p(p-1) ad_{[A,B]} ]
/// Returned as a 4x4 matrix in the block layout above.
MatrixXd sl2_family_curvature(double p, double q, const VectorXd& a,
                              const VectorXd& b);

/// Same object assembled from [C(A),C(B)] - C([A,B]) directly; used as an
/// independent route in tests.
MatrixXd sl2_family_curvature_direct(double p, double q, const VectorXd& a,
                                     const VectorXd& b);

/// sl(2,R) vector in the fixed H,E,F basis -> 2x2 traceless matrix.
Eigen::Matrix2d sl2_to_matrix(const VectorXd& a);

struct Sl2FlowState {
  double a = 1.0;
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  Eigen::Matrix3d c = Eigen::Matrix3d::Identity();
  Eigen::Matrix2d h = Eigen::Matrix2d::Identity();
};

struct Sl2FlowSample {
  double t;
  Sl2FlowState state;
  double det_c;
};

struct Sl2FlowResult {
  /// kSingular: det c crossed the floor (projective parameter blow-up).
  /// kDiverged: state norm passed the ceiling; growth to infinity in infinite
  /// time is not a singularity, so the ceiling sits high and the outcome is
  /// reported separately.
  enum class End { kReachedEnd, kSingular, kDiverged, kStepFailure };
  End end = End::kReachedEnd;
  double t_end = 0.0;
  std::vector<Sl2FlowSample> samples;
  std::string detail;
};

struct Sl2FlowOptions {
  double det_floor = 1e-8;
  double state_ceiling = 1e12;
  double sample_dt = 0.1;
  OdeOptions ode;
};

/// Geodesic flow of the bi-invariant family:
///   da = <b,A>, db = -(q/det c) cᵀcA, dc = -(1/det c)((cA)⊗b + p ad_{cA} c),
///   h⁻¹dh = (1/det c) cA.
/// Stops with End::kSingular when det c crosses the floor.
Sl2FlowResult sl2_geodesic_flow(double p, double q, const Eigen::Vector3d& a_dir,
                                const Sl2FlowState& init, double t_end,
                                const Sl2FlowOptions& opt = {});

enum class DirectionClass { kElliptic, kParabolic, kHyperbolic };

/// Sign of the constant Ricci term Ric(A,A) = -𝔅(A,A)/4 of Γ = ad/2 along
/// the one-parameter subgroup in direction A.
DirectionClass classify_direction(const StructureConstants& sc,
                                  const VectorXd& a, double zero_band = 1e-9);

const char* direction_class_name(DirectionClass c);

}  // namespace projcomp

#endif
