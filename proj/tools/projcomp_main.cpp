// Experiment driver: every module behind one CLI with plain-text configs and
// CSV/SVG outputs. Exit codes: 0 success, 2 usage/validation, 3 numerical
// failure.

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include "projcomp/config.hpp"
#include <sstream>

#include "projcomp/csv.hpp"
#include "projcomp/curve_model.hpp"
#include "projcomp/lie_algebra.hpp"
#include "projcomp/lie_connection.hpp"
#include "projcomp/oscillation.hpp"
#include "projcomp/registry.hpp"
#include "projcomp/svg.hpp"
#include "projcomp/sweep.hpp"
#include "projcomp/zoll.hpp"

namespace {

using namespace projcomp;

VectorXd parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  VectorXd v(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) v[i] = vals[i];
  return v;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

struct ClassifyArgs {
  std::string cover = "full";
  std::string monodromy = "none";
  std::string topology = "auto";
  std::string left = "boundless", right = "boundless";
};

int run_classify(const ClassifyArgs& a, std::ostream& out) {
  DevelopingInterval interval;
  if (a.cover == "full") interval.cover = CoverKind::kFullCover;
  else if (a.cover == "chart") interval.cover = CoverKind::kSingleChart;
  else if (a.cover == "halfchart") interval.cover = CoverKind::kHalfChart;
  else throw std::invalid_argument("unknown cover: " + a.cover);

  auto endpoint = [](const std::string& s) {
    if (s == "inf") return EndpointKind::kPole;
    if (s == "zero") return EndpointKind::kZeroPoint;
    if (s == "boundless") return EndpointKind::kBoundless;
    throw std::invalid_argument("unknown endpoint kind: " + s);
  };
  interval.left = endpoint(a.left);
  interval.right = endpoint(a.right);

  Monodromy mono = Monodromy::parse(a.monodromy);
  bool closed_requested = a.topology == "closed";
  bool open_requested = a.topology == "open";
  if (closed_requested && mono.kind == Monodromy::Kind::kNone)
    throw std::invalid_argument("closed curve requires a monodromy");
  if (open_requested && mono.kind != Monodromy::Kind::kNone)
    throw std::invalid_argument("open curve cannot carry a monodromy");

  CurveClass cc = classify_curve_connection(interval, mono);
  out << "kind,topology,subtype,invariant,winding,complete\n";
  out << cc.csv() << "\n";
  return 0;
}

struct CompleteArgs {
  std::string conn = "sphere";
  int sweep = 8;
  std::uint64_t seed = 1;
  double t_end = 40.0;
  double alpha = 1.0, beta = 0.25, z0 = 0.5;
  std::string out_path;
  bool serial = false;
  int threads = 0;
};

int run_complete(const CompleteArgs& a, std::ostream& out) {
  CompletenessSweepSpec spec;
  spec.conn = a.conn;
  spec.count = a.sweep;
  spec.seed = a.seed;
  spec.t_end = a.t_end;
  spec.params = {a.alpha, a.beta, a.z0};
  auto verdicts = completeness_sweep(spec, !a.serial, a.threads);
  out << CompletenessVerdict::csv_header() << "\n";
  for (const auto& v : verdicts) out << v.csv_row() << "\n";
  return 0;
}

struct ZollArgs {
  std::string profile = "paper";
  double alpha = 1.0, beta = 0.25, z0 = 0.5;
  int curvature_grid = 201;
  std::string plot_path;
  int closure = 0;
  std::uint64_t seed = 7;
  std::string out_path;
  bool serial = false;
  int threads = 0;
};

int run_zoll(const ZollArgs& a, std::ostream& out) {
  ZollProfile profile = a.profile == "round"
                            ? round_profile()
                            : build_paper_profile(a.alpha, a.beta, a.z0);
  ZollMetric metric(profile);

  out << "z,kappa\n";
  std::vector<double> zs, ks;
  for (int i = 0; i < a.curvature_grid; ++i) {
    double z = -0.99 + 1.98 * i / (a.curvature_grid - 1.0);
    double k = metric.gauss_curvature(z);
    zs.push_back(z);
    ks.push_back(k);
    out << format_double(z, 12) << ',' << format_double(k, 12) << "\n";
  }
  if (!a.plot_path.empty()) {
    SvgPlot plot("Gauss curvature, profile " + profile.name, "z", "kappa");
    plot.add_hline(0.0);
    plot.add_polyline(zs, ks);
    plot.write(a.plot_path);
  }
  if (a.closure > 0) {
    ZollSweepSpec spec;
    spec.count = a.closure;
    spec.seed = a.seed;
    auto cases = zoll_closure_sweep(metric, spec, !a.serial, a.threads);
    out << "case,z0,theta0,psi,closed,period,phase_distance,verdict\n";
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto& c = cases[i];
      out << i << ',' << format_double(c.z0, 12) << ','
          << format_double(c.theta0, 12) << ',' << format_double(c.psi, 12)
          << ',' << (c.closure.closed ? "true" : "false") << ','
          << format_double(c.closure.period, 12) << ','
          << format_double(c.closure.phase_distance, 6) << ','
          << verdict_name(c.verdict.verdict) << "\n";
    }
  }
  return 0;
}

struct LieArgs {
  std::string algebra = "so3";
  std::string algebra_file;
  std::string op = "ricci";
  double p = 0.5, q = 0.125;
  std::string direction = "0,1,0";
  double t_end = 10.0;
  std::string out_path;
};

void print_matrix(std::ostream& out, const std::string& label,
                  const Eigen::MatrixXd& m) {
  out << label << "\n";
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j)
      out << format_double(m(i, j), 12) << (j + 1 < m.cols() ? "," : "");
    out << "\n";
  }
}

int run_lie(const LieArgs& a, std::ostream& out) {
  StructureConstants sc = a.algebra_file.empty()
                              ? algebra_by_name(a.algebra)
                              : load_structure_constants_file(a.algebra_file);
  if (a.op == "killing") {
    print_matrix(out, "killing_form", killing_form(sc));
    return 0;
  }
  if (a.op == "ricci") {
    LeftInvariantConnection conn = half_ad_connection(sc);
    print_matrix(out, "symmetrized_ricci", symmetrized_ricci(conn));
    print_matrix(out, "minus_quarter_killing", -0.25 * killing_form(sc));
    return 0;
  }
  if (a.op == "normality") {
    LeftInvariantConnection conn = half_ad_connection(sc);
    NormalityReport rep = normality_check(projective_lift(conn));
    out << "normal,torsion_residual,invariant_residual,traced_residual\n";
    out << (rep.normal ? "true" : "false") << ','
        << format_double(rep.torsion_residual, 6) << ','
        << format_double(rep.invariant_residual, 6) << ','
        << format_double(rep.traced_curvature_residual, 6) << "\n";
    return 0;
  }
  if (a.op == "classify-directions") {
    VectorXd dir = parse_vector(a.direction);
    DirectionClass c = classify_direction(sc, dir);
    out << "direction,class\n";
    out << a.direction << ',' << direction_class_name(c) << "\n";
    return 0;
  }
  if (a.op == "flow") {
    if (sc.dim != 3 || a.algebra != "sl2")
      throw std::invalid_argument("flow requires --algebra sl2");
    Eigen::Vector3d dir = parse_vector(a.direction);
    Sl2FlowResult res =
        sl2_geodesic_flow(a.p, a.q, dir, Sl2FlowState{}, a.t_end);
    out << "t,a,detc,b1,b2,b3,h11,h12,h21,h22\n";
    for (const auto& s : res.samples) {
      out << format_double(s.t, 12) << ',' << format_double(s.state.a, 12)
          << ',' << format_double(s.det_c, 12);
      for (int i = 0; i < 3; ++i) out << ',' << format_double(s.state.b[i], 12);
      out << ',' << format_double(s.state.h(0, 0), 12) << ','
          << format_double(s.state.h(0, 1), 12) << ','
          << format_double(s.state.h(1, 0), 12) << ','
          << format_double(s.state.h(1, 1), 12);
      out << "\n";
    }
    out << "# end: "
        << (res.end == Sl2FlowResult::End::kReachedEnd   ? "reached"
            : res.end == Sl2FlowResult::End::kSingular   ? "singular"
            : res.end == Sl2FlowResult::End::kDiverged   ? "diverged"
                                                         : "step-failure")
        << " t=" << format_double(res.t_end, 12) << "\n";
    return 0;
  }
  throw std::invalid_argument("unknown lie op: " + a.op);
}

struct GeodesicArgs {
  std::string conn = "sphere";
  std::string x0 = "0,0";
  std::string v0 = "0,1";
  double t_end = 10.0;
  double alpha = 1.0, beta = 0.25, z0 = 0.5;
  int samples = 400;
  std::string out_path;
};

int run_geodesic(const GeodesicArgs& a, std::ostream& out) {
  GeometryHandle geom =
      geometry_by_name(a.conn, GeometryParams{a.alpha, a.beta, a.z0});
  VectorXd x0 = parse_vector(a.x0), v0 = parse_vector(a.v0);
  out << "t,chart";
  for (int i = 0; i < x0.size(); ++i) out << ",x" << i;
  for (int i = 0; i < x0.size(); ++i) out << ",v" << i;
  out << "\n";
  auto emit = [&](double t, int chart, const VectorXd& x, const VectorXd& v) {
    out << format_double(t, 12) << ',' << chart;
    for (int i = 0; i < x.size(); ++i) out << ',' << format_double(x[i], 12);
    for (int i = 0; i < v.size(); ++i) out << ',' << format_double(v[i], 12);
    out << "\n";
  };
  if (geom.kind == GeometryHandle::Kind::kZollAtlas) {
    Atlas atlas = geom.metric->atlas();
    AtlasTrajectory traj =
        integrate_atlas_geodesic(atlas, 0, x0, v0, 0.0, a.t_end);
    for (int i = 0; i <= a.samples; ++i) {
      double t = traj.t_end * i / a.samples;
      AtlasSample s = traj.sample(t);
      emit(t, s.chart, s.x, s.v);
    }
  } else {
    GeodesicTrajectory traj =
        integrate_geodesic(geom.chart, x0, v0, 0.0, a.t_end);
    for (int i = 0; i <= a.samples; ++i) {
      double t = traj.t_start + (traj.t_end - traj.t_start) * i / a.samples;
      emit(t, 0, traj.x(t), traj.v(t));
    }
    if (traj.end == GeodesicTrajectory::End::kChartExit)
      out << "# chart exit at t=" << format_double(traj.t_end, 12) << "\n";
  }
  return 0;
}

struct JacobiArgs {
  std::string conn = "sphere";
  std::string x0 = "0,0";
  std::string v0 = "0,1";
  double a0 = 0.0, a10 = 1.0;
  double t_end = 10.0;
  double alpha = 1.0, beta = 0.25, z0 = 0.5;
  int samples = 400;
  std::string out_path;
};

int run_jacobi(const JacobiArgs& a, std::ostream& out) {
  GeometryHandle geom =
      geometry_by_name(a.conn, GeometryParams{a.alpha, a.beta, a.z0});
  VectorXd x0 = parse_vector(a.x0), v0 = parse_vector(a.v0);
  out << "t,a,a1\n";
  if (geom.kind == GeometryHandle::Kind::kZollAtlas) {
    Atlas atlas = geom.metric->atlas();
    AtlasIntegrateOptions aopt;
    aopt.with_frame = true;
    aopt.with_jacobi = true;
    aopt.a0 = (VectorXd(1) << a.a0).finished();
    aopt.a1_0 = (VectorXd(1) << a.a10).finished();
    AtlasTrajectory traj =
        integrate_atlas_geodesic(atlas, 0, x0, v0, 0.0, a.t_end, aopt);
    double prev_a = traj.sample(0.0).a[0];
    double prev_t = 0.0;
    std::vector<double> zero_times;
    if (prev_a == 0.0) zero_times.push_back(0.0);
    for (int i = 0; i <= a.samples; ++i) {
      double t = traj.t_end * i / a.samples;
      AtlasSample s = traj.sample(t);
      out << format_double(t, 12) << ',' << format_double(s.a[0], 12) << ','
          << format_double(s.a1[0], 12) << "\n";
      if (i > 0 && prev_a * s.a[0] < 0.0)
        zero_times.push_back(bisect_zero(
            [&](double tt) { return traj.sample(tt).a[0]; }, prev_t, t,
            1e-10));
      prev_a = s.a[0];
      prev_t = t;
    }
    for (double z : zero_times)
      out << "# zero t=" << format_double(z, 12) << "\n";
  } else {
    GeodesicTrajectory traj =
        integrate_geodesic(geom.chart, x0, v0, 0.0, a.t_end);
    const int m = static_cast<int>(x0.size()) - 1;
    VectorXd av = VectorXd::Constant(m, a.a0);
    VectorXd a1v = VectorXd::Constant(m, a.a10);
    JacobiField field = integrate_jacobi(geom.chart, traj, av, a1v);
    for (int i = 0; i <= a.samples; ++i) {
      double t = field.t0 + (field.t1 - field.t0) * i / a.samples;
      out << format_double(t, 12) << ',' << format_double(field.a(t)[0], 12)
          << ',' << format_double(field.a1(t)[0], 12) << "\n";
    }
    for (double z : field.zero_times)
      out << "# zero t=" << format_double(z, 12) << "\n";
  }
  return 0;
}

/// Expands "--config file" into "--key value" tokens for keys the command
/// line does not already carry; explicit flags win over the file.
std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end()) return args;
  if (it + 1 == args.end())
    throw std::invalid_argument("--config requires a file path");
  std::string path = *(it + 1);
  args.erase(it, it + 2);
  auto kv = parse_config_file(path);
  for (const auto& [key, value] : kv) {
    std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) == args.end()) {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projective completeness toolkit"};
  app.name("projcomp");
  app.require_subcommand(1);
  std::string config_doc;
  auto add_config = [&config_doc](CLI::App* sub) {
    sub->add_option("--config", config_doc,
                    "plain-text config (key = value lines); explicit flags "
                    "override file entries");
  };

  ClassifyArgs ca;
  auto* classify = app.add_subcommand(
      "classify", "classify a projective connection on a curve");
  classify->add_option("--cover", ca.cover,
                       "developing image: full | chart | halfchart");
  classify->add_option("--monodromy", ca.monodromy,
                       "rot:<theta> | trans[:n] | dil:<r>[:n] | none");
  classify->add_option("--topology", ca.topology, "closed | open | auto");
  classify->add_option("--left", ca.left, "open-curve endpoint: inf|zero|boundless");
  classify->add_option("--right", ca.right, "open-curve endpoint");
  add_config(classify);

  CompleteArgs pa;
  auto* complete = app.add_subcommand(
      "complete", "completeness verdicts for a sweep of geodesics");
  complete->add_option("--conn", pa.conn,
                       "flat | flat-torus | sphere | zoll:round | zoll:paper "
                       "| lie:so3 | lie:sl2 | lie:heisenberg | lie:abelian3");
  complete->add_option("--sweep", pa.sweep, "number of geodesics");
  complete->add_option("--seed", pa.seed, "sweep seed");
  complete->add_option("--t-end", pa.t_end, "window length per ray");
  complete->add_option("--alpha", pa.alpha, "zoll:paper alpha");
  complete->add_option("--beta", pa.beta, "zoll:paper beta");
  complete->add_option("--z0", pa.z0, "zoll:paper z0");
  complete->add_option("--out", pa.out_path, "CSV output path (default stdout)");
  complete->add_flag("--serial", pa.serial, "disable the worker pool");
  complete->add_option("--threads", pa.threads, "worker count (0 = auto)");
  add_config(complete);

  ZollArgs za;
  auto* zoll = app.add_subcommand("zoll", "Zoll metric family tools");
  zoll->add_option("--profile", za.profile, "paper | round");
  zoll->add_option("--alpha", za.alpha, "profile alpha");
  zoll->add_option("--beta", za.beta, "profile beta");
  zoll->add_option("--z0", za.z0, "profile z0");
  zoll->add_option("--curvature-grid", za.curvature_grid, "kappa samples");
  zoll->add_option("--plot", za.plot_path, "write kappa(z) SVG");
  zoll->add_option("--closure", za.closure, "random geodesic closure cases");
  zoll->add_option("--seed", za.seed, "closure sweep seed");
  zoll->add_option("--out", za.out_path, "CSV output path");
  zoll->add_flag("--serial", za.serial, "disable the worker pool");
  zoll->add_option("--threads", za.threads, "worker count (0 = auto)");
  add_config(zoll);

  LieArgs la;
  auto* lie = app.add_subcommand("lie", "left-invariant connection tools");
  lie->add_option("--algebra", la.algebra, "so3 | sl2 | heisenberg | abelianN");
  lie->add_option("--algebra-file", la.algebra_file,
                  "structure constants file (dim line + 'i j k value' lines)");
  lie->add_option("--op", la.op,
                  "killing | ricci | normality | classify-directions | flow");
  lie->add_option("--p", la.p, "family parameter p");
  lie->add_option("--q", la.q, "family parameter q");
  lie->add_option("--direction", la.direction, "algebra vector, comma separated");
  lie->add_option("--t-end", la.t_end, "flow horizon");
  lie->add_option("--out", la.out_path, "output path");
  add_config(lie);

  GeodesicArgs ga;
  auto* geod = app.add_subcommand("geodesic", "integrate one geodesic");
  geod->add_option("--conn", ga.conn, "registry geometry");
  geod->add_option("--x0", ga.x0, "start point, comma separated");
  geod->add_option("--v0", ga.v0, "start velocity, comma separated");
  geod->add_option("--t-end", ga.t_end, "parameter horizon");
  geod->add_option("--alpha", ga.alpha, "zoll:paper alpha");
  geod->add_option("--beta", ga.beta, "zoll:paper beta");
  geod->add_option("--z0", ga.z0, "zoll:paper z0");
  geod->add_option("--samples", ga.samples, "CSV sample count");
  geod->add_option("--out", ga.out_path, "CSV output path");
  add_config(geod);

  JacobiArgs ja;
  auto* jac = app.add_subcommand("jacobi", "integrate a normal Jacobi field");
  jac->add_option("--conn", ja.conn, "registry geometry");
  jac->add_option("--x0", ja.x0, "start point");
  jac->add_option("--v0", ja.v0, "start velocity");
  jac->add_option("--a0", ja.a0, "initial normal component");
  jac->add_option("--a10", ja.a10, "initial normal derivative");
  jac->add_option("--t-end", ja.t_end, "parameter horizon");
  jac->add_option("--alpha", ja.alpha, "zoll:paper alpha");
  jac->add_option("--beta", ja.beta, "zoll:paper beta");
  jac->add_option("--z0", ja.z0, "zoll:paper z0");
  jac->add_option("--samples", ja.samples, "CSV sample count");
  jac->add_option("--out", ja.out_path, "CSV output path");
  add_config(jac);

  try {
    std::vector<std::string> args = expand_config_args(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 takes reversed args
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    std::ofstream file;
    if (app.got_subcommand(classify)) return run_classify(ca, std::cout);
    if (app.got_subcommand(complete))
      return run_complete(pa, open_output(file, pa.out_path));
    if (app.got_subcommand(zoll))
      return run_zoll(za, open_output(file, za.out_path));
    if (app.got_subcommand(lie))
      return run_lie(la, open_output(file, la.out_path));
    if (app.got_subcommand(geod))
      return run_geodesic(ga, open_output(file, ga.out_path));
    if (app.got_subcommand(jac))
      return run_jacobi(ja, open_output(file, ja.out_path));
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
