#ifndef PROJCOMP_CHART_HPP
#define PROJCOMP_CHART_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "projcomp/ode.hpp"

namespace projcomp {

/// Γ^i_{jk} at one point, flat storage.
struct Tensor3 {
  int n = 0;
  std::vector<double> v;

  Tensor3() = default;
  explicit Tensor3(int dim) : n(dim), v(dim * dim * dim, 0.0) {}
  double& operator()(int i, int j, int k) { return v[(i * n + j) * n + k]; }
  double operator()(int i, int j, int k) const { return v[(i * n + j) * n + k]; }
  void set_zero() { std::fill(v.begin(), v.end(), 0.0); }
};

/// R^i_{jkl} at one point, convention R(∂_k,∂_l)∂_j = R^i_{jkl} ∂_i.
struct Tensor4 {
  int n = 0;
  std::vector<double> v;

  Tensor4() = default;
  explicit Tensor4(int dim) : n(dim), v(dim * dim * dim * dim, 0.0) {}
  double& operator()(int i, int j, int k, int l) {
    return v[((i * n + j) * n + k) * n + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return v[((i * n + j) * n + k) * n + l];
  }
};

/// Affine connection on one coordinate chart: a Christoffel field plus a
/// domain predicate and a sampling box.
struct ChartConnection {
  int dim = 0;
  std::function<void(const VectorXd&, Tensor3&)> christoffel;
  std::function<bool(const VectorXd&)> inside;  // empty = whole chart
  VectorXd box_lo, box_hi;                      // sampling region
  bool has_torsion = false;
  /// Optional analytic symmetrized Ricci, used instead of finite differences.
  std::function<Eigen::MatrixXd(const VectorXd&)> analytic_ricci;
  double fd_scale = 1e-4;  // curvature step h = fd_scale * (1 + |x|)
  std::string name;

  void eval_christoffel(const VectorXd& x, Tensor3& g) const {
    christoffel(x, g);
  }
  bool contains(const VectorXd& x) const { return !inside || inside(x); }
};

ChartConnection flat_connection(int dim);

/// Γ^i_{jk} u^j w^k
VectorXd christoffel_bilinear(const Tensor3& g, const VectorXd& u,
                              const VectorXd& w);

/// Full curvature R^i_{jkl} = ∂_k Γ^i_{lj} - ∂_l Γ^i_{kj}
///                           + Γ^i_{km}Γ^m_{lj} - Γ^i_{lm}Γ^m_{kj},
/// with ∂Γ by central differences of the Christoffel field.
Tensor4 curvature_tensor(const ChartConnection& conn, const VectorXd& x);

/// Ric_{ij} = (R^k_{ikj} + R^k_{jki})/2
Eigen::MatrixXd ricci_tensor(const ChartConnection& conn, const VectorXd& x);

struct GeodesicTrajectory {
  int dim = 0;
  double t_start = 0.0, t_requested = 0.0;
  DenseSolution sol;  // state (x, v)

  enum class End { kReachedEnd, kChartExit, kStepFailure };
  End end = End::kReachedEnd;
  double t_end = 0.0;
  VectorXd x_end, v_end;
  /// max over steps of |interpolant defect at midpoint| * h  (local error units)
  double max_step_defect = 0.0;

  VectorXd x(double t) const { return sol.eval(t).head(dim); }
  VectorXd v(double t) const { return sol.eval(t).tail(dim); }
};

/// Integrates ẍ + Γ(ẋ,ẋ) = 0. Leaving the chart domain ends the run with
/// End::kChartExit and the exit state (a first-class outcome, not an error).
GeodesicTrajectory integrate_geodesic(const ChartConnection& conn,
                                      const VectorXd& x0, const VectorXd& v0,
                                      double t0, double t1,
                                      const OdeOptions& opt = {});

/// q(t) = Ric_{ij}(x(t)) v^i(t) v^j(t) along a trajectory.
class RicciAlong {
 public:
  RicciAlong(const ChartConnection& conn, const GeodesicTrajectory& traj)
      : m_conn(&conn), m_traj(&traj) {}
  double operator()(double t) const;

 private:
  const ChartConnection* m_conn;
  const GeodesicTrajectory* m_traj;
};

struct JacobiField {
  int dim = 0;         // ambient dimension n
  double t0 = 0.0, t1 = 0.0;
  DenseSolution sol;   // joint state (x, v, frame cols, a, a1)
  std::vector<double> zero_times;

  VectorXd a(double t) const;
  VectorXd a1(double t) const;
  /// Full frame (e_1 = velocity, then the parallel columns) at time t.
  Eigen::MatrixXd frame(double t) const;
};

/// Solves the normal Jacobi system along the trajectory in a frame
/// (e_1 = velocity, e_2..e_n parallel-transported, orthonormalised at start):
///   da^I/dt = a^I_1 (+ torsion term), da^I_1/dt = K^I_{11J} a^J
/// with K^I_{11J} the frame components of R(e_1, e_J)e_1.
JacobiField integrate_jacobi(const ChartConnection& conn,
                             const GeodesicTrajectory& traj,
                             const VectorXd& a0, const VectorXd& a1_0,
                             const OdeOptions& opt = {});

/// Normal components of the covariant acceleration of a parameterized chart
/// curve, per unit squared parameter speed. Vanishes identically exactly on
/// unparameterized geodesics.
VectorXd geodesic_curvature(const ChartConnection& conn,
                            const std::function<VectorXd(double)>& curve,
                            double t, double fd_step = 1e-5);

/// Layout of the joint state (x, v [, frame cols e_2..e_n] [, a, a1]) used by
/// the Jacobi solver and the multi-chart driver.
struct JointLayout {
  int n = 0;
  bool frame = false;
  bool jacobi = false;  // requires frame

  int frame_offset() const { return 2 * n; }
  int a_offset() const { return 2 * n + n * (n - 1); }
  int a1_offset() const { return a_offset() + (n - 1); }
  int size() const {
    return 2 * n + (frame ? n * (n - 1) : 0) + (jacobi ? 2 * (n - 1) : 0);
  }
};

/// RHS of the geodesic + parallel frame + normal Jacobi system on one chart.
OdeRhs make_joint_rhs(const ChartConnection& conn, const JointLayout& lay);

/// Orthonormal basis whose first column is parallel to v0; columns 2..n seed
/// the parallel frame of the Jacobi system.
Eigen::MatrixXd jacobi_start_frame(const VectorXd& v0);

struct WeylSample {
  VectorXd x;
  VectorXd lambda;
  double residual;
};

struct WeylResult {
  bool equivalent = false;
  double max_residual = 0.0;
  std::vector<WeylSample> samples;
};

struct WeylOptions {
  int n_samples = 25;
  std::uint64_t seed = 2024;
  double tol = 1e-8;
};

/// Tests whether two torsion-free chart connections differ by
/// λ_j δ^i_k + λ_k δ^i_j for a 1-form λ, recovering λ pointwise by the
/// closed-form trace projection.
WeylResult weyl_equivalence(const ChartConnection& conn_a,
                            const ChartConnection& conn_b,
                            const WeylOptions& opt = {});

/// The closed-form pointwise projection used by weyl_equivalence: returns
/// (lambda, residual) for the difference tensor D at one point.
std::pair<VectorXd, double> weyl_project(const Tensor3& diff);

}  // namespace projcomp

#endif
