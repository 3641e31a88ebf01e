#ifndef PROJCOMP_REGISTRY_HPP
#define PROJCOMP_REGISTRY_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "projcomp/chart.hpp"
#include "projcomp/lie_connection.hpp"
#include "projcomp/zoll.hpp"

namespace projcomp {

/// Chart presentation of a left-invariant connection in exponential
/// coordinates: h = exp(x·e). Valid for |x| < radius.
ChartConnection exp_chart_connection(const LeftInvariantConnection& conn,
                                     double radius,
                                     bool fd_ricci_only = false);

struct GeometryParams {
  double alpha = 1.0, beta = 0.25, z0 = 0.5;  // zoll:paper parameters
};

/// A named geometry the completeness driver can sweep: either one chart or a
/// Zoll atlas (the shared metric owns the cap tables).
struct GeometryHandle {
  enum class Kind { kSingleChart, kZollAtlas };
  Kind kind = Kind::kSingleChart;
  std::string name;
  ChartConnection chart;
  std::shared_ptr<ZollMetric> metric;
  std::shared_ptr<LeftInvariantConnection> lie_conn;  // set for lie:* entries

  /// Deterministic initial condition for sweep geodesic `index`.
  std::function<void(std::uint64_t seed, int index, VectorXd& x0, VectorXd& v0)>
      sample_ic;
};

/// Names: flat, flat-torus, sphere, zoll:round, zoll:paper,
/// lie:so3, lie:sl2, lie:heisenberg, lie:abelian3.
GeometryHandle geometry_by_name(const std::string& name,
                                const GeometryParams& params = {});

}  // namespace projcomp

#endif
