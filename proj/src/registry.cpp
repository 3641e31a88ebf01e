#include "projcomp/registry.hpp"

#include <cmath>

#include "projcomp/rng.hpp"

namespace projcomp {

namespace {

/// Left-trivialized differential of exp: M(x) = Σ_k (-ad_x)^k / (k+1)!
Eigen::MatrixXd dexp_inverse_transport(const StructureConstants& sc,
                                       const VectorXd& x) {
  const int n = sc.dim;
  Eigen::MatrixXd ad = sc.ad(x);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd sum = term;
  for (int k = 1; k < 60; ++k) {
    term = (-1.0 / (k + 1.0)) * (term * ad);
    sum += term;
    if (term.lpNorm<Eigen::Infinity>() < 1e-18) break;
  }
  return sum;
}

/// Directional derivative DM(x)[u] of the series above.
Eigen::MatrixXd dexp_transport_derivative(const StructureConstants& sc,
                                          const VectorXd& x,
                                          const VectorXd& u) {
  const int n = sc.dim;
  Eigen::MatrixXd ad_x = sc.ad(x);
  Eigen::MatrixXd ad_u = sc.ad(u);
  // D(ad_x^k)[u] = Σ_{a+b=k-1} ad_x^a ad_u ad_x^b, with sign (-1)^k/(k+1)!
  std::vector<Eigen::MatrixXd> pow;
  pow.push_back(Eigen::MatrixXd::Identity(n, n));
  double norm = 1.0;
  for (int k = 1; k < 60 && norm > 1e-18; ++k) {
    pow.push_back(pow.back() * ad_x);
    norm = pow.back().lpNorm<Eigen::Infinity>() / std::tgamma(k + 2.0);
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  double fact = 1.0;  // (k+1)!
  double sign = 1.0;
  for (std::size_t k = 1; k < pow.size(); ++k) {
    fact *= (k + 1.0);
    sign = -sign;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t a = 0; a + 1 <= k; ++a) d += pow[a] * ad_u * pow[k - 1 - a];
    out += (sign / fact) * d;
  }
  return out;
}

}  // namespace

ChartConnection exp_chart_connection(const LeftInvariantConnection& conn,
                                     double radius, bool fd_ricci_only) {
  const int n = conn.algebra.dim;
  auto sc = std::make_shared<StructureConstants>(conn.algebra);
  auto lic = std::make_shared<LeftInvariantConnection>(conn);

  ChartConnection c;
  c.dim = n;
  c.christoffel = [sc, lic, n](const VectorXd& x, Tensor3& g) {
    Eigen::MatrixXd m = dexp_inverse_transport(*sc, x);
    Eigen::MatrixXd minv = m.inverse();
    // Quadratic form Q(u) = M^{-1} [ DM(x)[u] u + Γ(Mu)(Mu) ]
    auto q_of = [&](const VectorXd& u) {
      Eigen::MatrixXd dm = dexp_transport_derivative(*sc, x, u);
      VectorXd mu = m * u;
      return VectorXd(minv * (dm * u + lic->gamma_of(mu) * mu));
    };
    std::vector<VectorXd> q_diag(n);
    for (int j = 0; j < n; ++j) q_diag[j] = q_of(VectorXd::Unit(n, j));
    g.set_zero();
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        VectorXd val;
        if (j == k) {
          val = q_diag[j];
        } else {
          VectorXd q2 = q_of(VectorXd::Unit(n, j) + VectorXd::Unit(n, k));
          val = 0.5 * (q2 - q_diag[j] - q_diag[k]);
        }
        for (int i = 0; i < n; ++i) {
          if (j == k) {
            g(i, j, j) = val[i];
          } else {
            // val[i] is the symmetric bilinear coefficient B^i_{jk}; the
            // quadratic form sums both (j,k) and (k,j) slots.
            g(i, j, k) = val[i];
            g(i, k, j) = val[i];
          }
        }
      }
  };
  c.inside = [radius](const VectorXd& x) { return x.norm() < radius; };
  double rb = radius / std::sqrt(static_cast<double>(n)) * 0.8;
  c.box_lo = VectorXd::Constant(n, -rb);
  c.box_hi = VectorXd::Constant(n, rb);
  if (!fd_ricci_only) {
    Eigen::MatrixXd ric_frame = symmetrized_ricci(conn);
    c.analytic_ricci = [sc, ric_frame](const VectorXd& x) {
      Eigen::MatrixXd m = dexp_inverse_transport(*sc, x);
      return Eigen::MatrixXd(m.transpose() * ric_frame * m);
    };
  }
  c.name = "exp-chart";
  return c;
}

namespace {

SplitMix64 ic_rng(std::uint64_t seed, int index) {
  return SplitMix64(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

GeometryHandle flat_geometry(const std::string& name) {
  GeometryHandle h;
  h.kind = GeometryHandle::Kind::kSingleChart;
  h.name = name;
  h.chart = flat_connection(2);
  h.chart.name = name;
  h.sample_ic = [](std::uint64_t seed, int index, VectorXd& x0, VectorXd& v0) {
    SplitMix64 rng = ic_rng(seed, index);
    double ang = rng.uniform(0.0, 2.0 * M_PI);
    x0 = VectorXd::Zero(2);
    v0 = (VectorXd(2) << std::cos(ang), std::sin(ang)).finished();
  };
  return h;
}

GeometryHandle zoll_geometry(const std::string& name,
                             const ZollProfile& profile) {
  GeometryHandle h;
  h.kind = GeometryHandle::Kind::kZollAtlas;
  h.name = name;
  h.metric = std::make_shared<ZollMetric>(profile);
  auto metric = h.metric;
  h.sample_ic = [metric](std::uint64_t seed, int index, VectorXd& x0,
                         VectorXd& v0) {
    SplitMix64 rng = ic_rng(seed, index);
    double z0 = rng.uniform(-0.7, 0.7);
    double th0 = rng.uniform(0.0, 2.0 * M_PI);
    double psi = rng.uniform(0.0, 2.0 * M_PI);
    double vz, vth;
    metric->unit_tangent(z0, psi, vz, vth);
    x0 = (VectorXd(2) << z0, th0).finished();
    v0 = (VectorXd(2) << vz, vth).finished();
  };
  return h;
}

GeometryHandle lie_geometry(const std::string& name,
                            const std::string& algebra) {
  StructureConstants sc = algebra_by_name(algebra);
  GeometryHandle h;
  h.kind = GeometryHandle::Kind::kSingleChart;
  h.name = name;
  h.lie_conn =
      std::make_shared<LeftInvariantConnection>(half_ad_connection(sc));
  double radius = algebra == "so3" ? 0.9 * M_PI : 3.0;
  h.chart = exp_chart_connection(*h.lie_conn, radius);
  h.chart.name = name;
  const int n = sc.dim;
  h.sample_ic = [n](std::uint64_t seed, int index, VectorXd& x0, VectorXd& v0) {
    SplitMix64 rng = ic_rng(seed, index);
    x0 = VectorXd::Zero(n);
    v0.resize(n);
    double norm = 0.0;
    while (norm < 1e-3) {
      for (int i = 0; i < n; ++i) v0[i] = rng.uniform(-1.0, 1.0);
      norm = v0.norm();
    }
    v0 /= norm;
  };
  return h;
}

}  // namespace

GeometryHandle geometry_by_name(const std::string& name,
                                const GeometryParams& params) {
  if (name == "flat" || name == "flat-torus") return flat_geometry(name);
  if (name == "sphere" || name == "zoll:round")
    return zoll_geometry(name, round_profile());
  if (name == "zoll:paper")
    return zoll_geometry(
        name, build_paper_profile(params.alpha, params.beta, params.z0));
  if (name.rfind("lie:", 0) == 0) return lie_geometry(name, name.substr(4));
  throw std::invalid_argument("unknown geometry: " + name);
}

}  // namespace projcomp
