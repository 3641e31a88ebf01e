#ifndef PROJCOMP_CURVE_MODEL_HPP
#define PROJCOMP_CURVE_MODEL_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "projcomp/ode.hpp"

namespace projcomp {

/// Coframe data along a curve parameter t with ω¹ = dt: the functions
/// γ¹₁(t) and ω₁(t). The affine gauge has both identically zero.
struct CurveGauge {
  std::function<double(double)> gamma11;
  std::function<double(double)> omega1;

  static CurveGauge affine() {
    return {[](double) { return 0.0; }, [](double) { return 0.0; }};
  }
};

/// Components (X¹, X¹₁, X₁) of an infinitesimal symmetry along the curve.
struct SymmetryState {
  double x1 = 0.0;   // X¹
  double x11 = 0.0;  // X¹₁
  double xl = 0.0;   // X₁
};

/// 𝔹(X) = 2 X₁ X¹ + (X¹₁)²/2, constant along solutions in any gauge.
inline double symmetry_invariant(const SymmetryState& s) {
  return 2.0 * s.xl * s.x1 + 0.5 * s.x11 * s.x11;
}

struct SymmetryTrajectory {
  DenseSolution sol;  // components ordered (X¹, X¹₁, X₁)
  double t0 = 0.0, t1 = 0.0;
  double invariant_drift = 0.0;  // max |𝔹(t) - 𝔹(t0)| over accepted steps

  SymmetryState at(double t) const {
    VectorXd y = sol.eval(t);
    return {y[0], y[1], y[2]};
  }
};

/// Solves dX¹ = X¹₁ - X¹γ¹₁, dX¹₁ = 2X¹ω₁ - 2X₁, dX₁ = X₁γ¹₁ - X¹₁ω₁.
SymmetryTrajectory integrate_symmetry(const CurveGauge& gauge,
                                      const SymmetryState& init, double t0,
                                      double t1, const OdeOptions& opt = {});

enum class SymmetryClass { kElliptic, kParabolic, kHyperbolic, kZero };

SymmetryClass classify_symmetry(const SymmetryState& s,
                                double zero_band = 1e-9);
const char* symmetry_class_name(SymmetryClass c);

class AmbiguousZero : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SymmetryZero {
  double t;
  int order;  // 1 or 2
};

/// Zeros of X¹ along the trajectory with their orders: order 1 when X¹₁ ≠ 0
/// there, order 2 when X¹₁ = 0 and X₁ ≠ 0. Throws AmbiguousZero when all
/// three components vanish at a detected zero, and asserts that elliptic
/// trajectories produce none.
std::vector<SymmetryZero> zero_order_audit(const SymmetryTrajectory& traj,
                                           double tol = 1e-9);

// --- classification of projective connections on curves --------------------

enum class CoverKind { kFullCover, kSingleChart, kHalfChart };
enum class EndpointKind { kBoundless, kPole, kZeroPoint };

/// Image of the developing map inside the universal cover of the model line.
/// Closed curves use `cover`; open curves are encoded by their endpoint kinds
/// (kFullCover with both ends boundless is the complete open curve).
struct DevelopingInterval {
  CoverKind cover = CoverKind::kFullCover;
  EndpointKind left = EndpointKind::kBoundless;
  EndpointKind right = EndpointKind::kBoundless;
};

struct Monodromy {
  enum class Kind { kNone, kRotation, kTranslation, kDilation };
  Kind kind = Kind::kNone;
  double theta = 0.0;  // rotation angle in the cover coordinate
  double ratio = 0.0;  // dilation ratio
  int winding = 0;     // deck transformation count

  /// Parses "rot:<theta>", "trans[:n]", "dil:<r>[:n]", "none".
  static Monodromy parse(const std::string& text);
};

class InvalidMonodromy : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class CurveKind { kElliptic, kParabolic, kHyperbolic };

struct CurveClass {
  CurveKind kind = CurveKind::kElliptic;
  bool closed = false;
  int subtype = 0;         // 1, 2 or 0 for none
  double invariant = 0.0;  // theta (elliptic) or r (hyperbolic)
  int winding = 0;
  bool complete = false;

  /// One-line record: kind,topology,subtype,invariant,winding,complete
  std::string csv() const;
};

/// Kuiper-type classification. Closed curves require a monodromy without
/// interior fixed points; open curves must pass Monodromy::Kind::kNone.
CurveClass classify_curve_connection(const DevelopingInterval& interval,
                                     const Monodromy& monodromy);

// --- the cot chart on the universal cover -----------------------------------

/// Point of the universal cover: branch index plus phi in (0, pi].
struct CoverPoint {
  int branch = 0;
  double phi = 0.0;
  double total() const;
};

/// x = cot(phi) on the principal branch phi in (0, pi).
double phi_to_affine(double phi);
/// Inverse on the principal branch: phi = pi/2 - atan(x).
CoverPoint affine_to_phi(double x, int branch = 0);

}  // namespace projcomp

#endif
