#ifndef PROJCOMP_ATLAS_HPP
#define PROJCOMP_ATLAS_HPP

#include <functional>
#include <vector>

#include "projcomp/chart.hpp"

namespace projcomp {

/// A family of overlapping chart connections with transition maps. Chart
/// switching happens at accepted step ends inside overlaps, so charts must
/// stay valid some margin past the region where they are preferred.
struct Atlas {
  std::vector<ChartConnection> charts;
  /// Preferred chart at x while integrating in chart `cur` (return `cur` to
  /// stay). Hysteresis between preference regions avoids flip-flopping.
  std::function<int(int cur, const VectorXd& x)> prefer;
  std::function<VectorXd(int from, int to, const VectorXd& x)> map_point;
  std::function<Eigen::MatrixXd(int from, int to, const VectorXd& x)>
      map_jacobian;
};

class PoleHandling : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AtlasSample {
  double t = 0.0;
  int chart = 0;
  VectorXd x, v;
  Eigen::MatrixXd frame;  // columns e_2..e_n (chart coordinates)
  VectorXd a, a1;
};

struct AtlasTrajectory {
  struct Piece {
    int chart;
    DenseSolution sol;
  };
  int dim = 0;
  JointLayout layout;
  std::vector<Piece> pieces;
  double t_start = 0.0, t_end = 0.0;

  enum class End { kReachedEnd, kStopped, kStepFailure };
  End end = End::kReachedEnd;
  std::string detail;

  AtlasSample sample(double t) const;
};

struct AtlasObserverEvent {
  int chart;
  const DenseSegment* segment;
};

using AtlasObserver = std::function<ObserverSignal(const AtlasObserverEvent&)>;

struct AtlasIntegrateOptions {
  OdeOptions ode;
  bool with_frame = false;
  bool with_jacobi = false;
  VectorXd a0, a1_0;
  int max_transitions = 1000;

  AtlasIntegrateOptions() {
    ode.h_max = 0.05;  // keeps step ends inside chart overlaps
  }
};

/// Integrates the geodesic (optionally with parallel frame and Jacobi state)
/// across chart transitions. Jacobi components (a, a1) are frame components
/// and pass through transitions unchanged; frame columns transform by the
/// transition Jacobian.
AtlasTrajectory integrate_atlas_geodesic(const Atlas& atlas, int chart0,
                                         const VectorXd& x0, const VectorXd& v0,
                                         double t0, double t1,
                                         const AtlasIntegrateOptions& opt = {},
                                         const AtlasObserver& observer = {});

/// q(t) = Ric(v,v) along a multi-chart trajectory (chart-independent scalar).
class AtlasRicciAlong {
 public:
  AtlasRicciAlong(const Atlas& atlas, const AtlasTrajectory& traj)
      : m_atlas(&atlas), m_traj(&traj) {}
  double operator()(double t) const;

 private:
  const Atlas* m_atlas;
  const AtlasTrajectory* m_traj;
};

}  // namespace projcomp

#endif
