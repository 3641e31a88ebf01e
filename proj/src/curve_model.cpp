#include "projcomp/curve_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "projcomp/csv.hpp"

namespace projcomp {

SymmetryTrajectory integrate_symmetry(const CurveGauge& gauge,
                                      const SymmetryState& init, double t0,
                                      double t1, const OdeOptions& opt) {
  OdeRhs rhs = [&gauge](double t, const VectorXd& y, VectorXd& dy) {
    const double g = gauge.gamma11(t), w = gauge.omega1(t);
    dy.resize(3);
    dy[0] = y[1] - y[0] * g;
    dy[1] = 2.0 * y[0] * w - 2.0 * y[2];
    dy[2] = y[2] * g - y[1] * w;
  };
  VectorXd y0(3);
  y0 << init.x1, init.x11, init.xl;
  const double b0 = symmetry_invariant(init);

  SymmetryTrajectory traj;
  traj.t0 = t0;
  traj.t1 = t1;
  OdeResult res = integrate_dense(
      rhs, t0, y0, t1, opt, traj.sol, [&](const DenseSegment& seg) {
        VectorXd y = seg.eval(seg.t1());
        double drift = std::abs(symmetry_invariant({y[0], y[1], y[2]}) - b0);
        traj.invariant_drift = std::max(traj.invariant_drift, drift);
        return ObserverSignal::kContinue;
      });
  if (!res.ok()) throw StepFailure("integrate_symmetry: " + res.detail);
  return traj;
}

SymmetryClass classify_symmetry(const SymmetryState& s, double zero_band) {
  if (s.x1 == 0.0 && s.x11 == 0.0 && s.xl == 0.0) return SymmetryClass::kZero;
  const double b = symmetry_invariant(s);
  if (b < -zero_band) return SymmetryClass::kElliptic;
  if (b > zero_band) return SymmetryClass::kHyperbolic;
  return SymmetryClass::kParabolic;
}

const char* symmetry_class_name(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::kElliptic: return "elliptic";
    case SymmetryClass::kParabolic: return "parabolic";
    case SymmetryClass::kHyperbolic: return "hyperbolic";
    case SymmetryClass::kZero: return "zero";
  }
  return "?";
}

std::vector<SymmetryZero> zero_order_audit(const SymmetryTrajectory& traj,
                                           double tol) {
  std::vector<SymmetryZero> zeros;
  // Order-1 zeros: sign changes of X¹.
  for (double t : component_zeros(traj.sol, 0)) {
    SymmetryState s = traj.at(t);
    if (std::abs(s.x11) > tol) {
      zeros.push_back({t, 1});
    } else if (std::abs(s.xl) > tol) {
      zeros.push_back({t, 2});
    } else {
      throw AmbiguousZero("all symmetry components below tolerance at t=" +
                          std::to_string(t));
    }
  }
  // Order-2 zeros touch without a sign change: look where X¹₁ crosses zero
  // with X¹ also vanishing.
  for (double t : component_zeros(traj.sol, 1)) {
    SymmetryState s = traj.at(t);
    if (std::abs(s.x1) <= tol) {
      if (std::abs(s.xl) <= tol)
        throw AmbiguousZero("all symmetry components below tolerance at t=" +
                            std::to_string(t));
      bool dup = false;
      for (const auto& z : zeros) dup = dup || std::abs(z.t - t) < 1e-7;
      if (!dup) zeros.push_back({t, 2});
    }
  }
  std::sort(zeros.begin(), zeros.end(),
            [](const SymmetryZero& a, const SymmetryZero& b) { return a.t < b.t; });

  SymmetryState s0 = traj.at(traj.t0);
  if (classify_symmetry(s0) == SymmetryClass::kElliptic && !zeros.empty())
    throw std::logic_error("elliptic symmetry produced a zero");
  return zeros;
}

Monodromy Monodromy::parse(const std::string& text) {
  Monodromy m;
  if (text.empty() || text == "none") return m;
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    return parts;
  };
  auto parts = split(text);
  if (parts[0] == "rot") {
    if (parts.size() != 2) throw InvalidMonodromy("rot:<theta> expected");
    m.kind = Kind::kRotation;
    m.theta = std::stod(parts[1]);
  } else if (parts[0] == "trans") {
    m.kind = Kind::kTranslation;
    m.winding = parts.size() > 1 ? std::stoi(parts[1]) : 0;
  } else if (parts[0] == "dil") {
    if (parts.size() < 2) throw InvalidMonodromy("dil:<r>[:n] expected");
    m.kind = Kind::kDilation;
    m.ratio = std::stod(parts[1]);
    m.winding = parts.size() > 2 ? std::stoi(parts[2]) : 0;
  } else {
    throw InvalidMonodromy("unknown monodromy descriptor: " + text);
  }
  return m;
}

namespace {

bool curve_complete(CurveKind kind, bool closed, int subtype) {
  if (kind == CurveKind::kElliptic) return true;
  return closed && subtype == 2;
}

}  // namespace

std::string CurveClass::csv() const {
  std::string kind_s = kind == CurveKind::kElliptic    ? "elliptic"
                       : kind == CurveKind::kParabolic ? "parabolic"
                                                       : "hyperbolic";
  std::string sub = subtype == 0 ? "none" : std::to_string(subtype);
  return kind_s + "," + (closed ? "closed" : "open") + "," + sub + "," +
         format_double(invariant, 12) + "," + std::to_string(winding) + "," +
         (complete ? "true" : "false");
}

CurveClass classify_curve_connection(const DevelopingInterval& interval,
                                     const Monodromy& monodromy) {
  CurveClass out;
  if (monodromy.kind == Monodromy::Kind::kNone) {
    // Open curve, classified by the shape of the developing image.
    out.closed = false;
    bool left_open = interval.left == EndpointKind::kBoundless;
    bool right_open = interval.right == EndpointKind::kBoundless;
    bool has_zero_end = interval.left == EndpointKind::kZeroPoint ||
                        interval.right == EndpointKind::kZeroPoint;
    bool has_pole_end = interval.left == EndpointKind::kPole ||
                        interval.right == EndpointKind::kPole;
    if (interval.cover == CoverKind::kFullCover && left_open && right_open) {
      out.kind = CurveKind::kElliptic;
      out.subtype = 0;
    } else if (has_zero_end && has_pole_end) {
      out.kind = CurveKind::kHyperbolic;
      out.subtype = 1;
    } else if (has_pole_end) {
      out.kind = CurveKind::kParabolic;
      out.subtype = (left_open || right_open) ? 2 : 1;
    } else {
      throw InvalidMonodromy(
          "open interval endpoint types do not match any classified curve");
    }
    out.complete = curve_complete(out.kind, false, out.subtype);
    return out;
  }

  out.closed = true;
  switch (monodromy.kind) {
    case Monodromy::Kind::kRotation: {
      if (interval.cover != CoverKind::kFullCover)
        throw InvalidMonodromy(
            "rotation monodromy requires the full universal cover");
      if (monodromy.theta == 0.0)
        throw InvalidMonodromy("rotation angle must be nonzero");
      out.kind = CurveKind::kElliptic;
      out.subtype = 0;
      out.invariant = monodromy.theta;
      break;
    }
    case Monodromy::Kind::kTranslation: {
      out.kind = CurveKind::kParabolic;
      if (interval.cover == CoverKind::kSingleChart) {
        if (monodromy.winding != 0)
          throw InvalidMonodromy(
              "translation on a single chart cannot carry winding");
        out.subtype = 1;
      } else if (interval.cover == CoverKind::kFullCover) {
        if (monodromy.winding == 0)
          throw InvalidMonodromy(
              "translation on the full cover fixes the poles unless the "
              "winding is nonzero");
        out.subtype = 2;
        out.winding = std::abs(monodromy.winding);
      } else {
        throw InvalidMonodromy("translation monodromy on a half chart");
      }
      break;
    }
    case Monodromy::Kind::kDilation: {
      double r = monodromy.ratio;
      if (r <= 0.0) throw InvalidMonodromy("dilation ratio must be positive");
      if (r == 1.0)
        throw InvalidMonodromy("dilation ratio 1 is the identity");
      if (r < 1.0) r = 1.0 / r;  // conjugacy normalisation
      out.kind = CurveKind::kHyperbolic;
      out.invariant = r;
      if (interval.cover == CoverKind::kHalfChart) {
        if (monodromy.winding != 0)
          throw InvalidMonodromy(
              "dilation on a half chart cannot carry winding");
        out.subtype = 1;
      } else if (interval.cover == CoverKind::kFullCover) {
        if (monodromy.winding == 0)
          throw InvalidMonodromy(
              "dilation on the full cover fixes the zeros unless the winding "
              "is nonzero");
        out.subtype = 2;
        out.winding = std::abs(monodromy.winding);
      } else {
        throw InvalidMonodromy(
            "dilation monodromy on a single chart fixes an interior point");
      }
      break;
    }
    case Monodromy::Kind::kNone:
      break;  // unreachable
  }
  out.complete = curve_complete(out.kind, true, out.subtype);
  return out;
}

double CoverPoint::total() const { return branch * M_PI + phi; }

double phi_to_affine(double phi) { return std::cos(phi) / std::sin(phi); }

CoverPoint affine_to_phi(double x, int branch) {
  CoverPoint p;
  p.branch = branch;
  p.phi = M_PI_2 - std::atan(x);
  return p;
}

}  // namespace projcomp
