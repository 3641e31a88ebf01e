#ifndef PROJCOMP_LIE_ALGEBRA_HPP
#define PROJCOMP_LIE_ALGEBRA_HPP

#include <Eigen/Dense>
#include <istream>
#include <string>
#include <vector>

namespace projcomp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Structure constants c^k_{ij} of a Lie algebra in a fixed basis:
/// [e_i, e_j] = c^k_{ij} e_k. Indices are 0-based internally.
struct StructureConstants {
  int dim = 0;
  std::vector<double> c;  // c[(k*dim + i)*dim + j]

  StructureConstants() = default;
  explicit StructureConstants(int n) : dim(n), c(n * n * n, 0.0) {}

  double& at(int k, int i, int j) { return c[(k * dim + i) * dim + j]; }
  double at(int k, int i, int j) const { return c[(k * dim + i) * dim + j]; }

  /// Sets c^k_{ij} = v and c^k_{ji} = -v.
  void set_bracket(int i, int j, int k, double v) {
    at(k, i, j) = v;
    at(k, j, i) = -v;
  }

  VectorXd bracket(const VectorXd& a, const VectorXd& b) const;
  /// (ad_a)^k_j = a^i c^k_{ij}
  MatrixXd ad(const VectorXd& a) const;
  MatrixXd ad_basis(int i) const;

  double antisymmetry_residual() const;
  double jacobi_residual() const;
  /// Throws std::invalid_argument if either invariant fails the tolerance
  /// (relative to the largest structure constant).
  void validate(double tol = 1e-9) const;
};

/// 𝔅_{ij} = tr(ad_{e_i} ad_{e_j}) = Σ_{k,l} c^k_{il} c^l_{jk}. Validates input.
MatrixXd killing_form(const StructureConstants& sc, double tol = 1e-9);

// Fixed-basis registry used throughout the examples and the CLI.
StructureConstants so3_algebra();        // [e_i,e_j] = eps_{ijk} e_k
StructureConstants sl2_algebra();        // basis H,E,F
StructureConstants heisenberg_algebra(); // [e_1,e_2] = e_3
StructureConstants abelian_algebra(int n);
StructureConstants algebra_by_name(const std::string& name);

/// Text format: optional comment lines starting with '#', a "dim N" line,
/// then one entry per line "i j k value" meaning c^k_{ij} = value (1-based).
/// The antisymmetric partner is filled in automatically.
StructureConstants load_structure_constants(std::istream& in);
StructureConstants load_structure_constants_file(const std::string& path);

}  // namespace projcomp

#endif
