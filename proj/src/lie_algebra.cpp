#include "projcomp/lie_algebra.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace projcomp {

VectorXd StructureConstants::bracket(const VectorXd& a,
                                     const VectorXd& b) const {
  VectorXd out = VectorXd::Zero(dim);
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) out[k] += at(k, i, j) * a[i] * b[j];
  return out;
}

MatrixXd StructureConstants::ad(const VectorXd& a) const {
  MatrixXd m = MatrixXd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k)
    for (int j = 0; j < dim; ++j)
      for (int i = 0; i < dim; ++i) m(k, j) += a[i] * at(k, i, j);
  return m;
}

MatrixXd StructureConstants::ad_basis(int i) const {
  MatrixXd m = MatrixXd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k)
    for (int j = 0; j < dim; ++j) m(k, j) = at(k, i, j);
  return m;
}

double StructureConstants::antisymmetry_residual() const {
  double r = 0.0;
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        r = std::max(r, std::abs(at(k, i, j) + at(k, j, i)));
  return r;
}

double StructureConstants::jacobi_residual() const {
  double r = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
          double s = 0.0;
          for (int m = 0; m < dim; ++m)
            s += at(m, i, j) * at(l, m, k) + at(m, j, k) * at(l, m, i) +
                 at(m, k, i) * at(l, m, j);
          r = std::max(r, std::abs(s));
        }
  return r;
}

void StructureConstants::validate(double tol) const {
  double scale = 1.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (antisymmetry_residual() > tol * scale)
    throw std::invalid_argument(
        "structure constants violate antisymmetry c^k_{ij} = -c^k_{ji}");
  if (jacobi_residual() > tol * scale * scale)
    throw std::invalid_argument(
        "structure constants violate the Jacobi identity");
}

MatrixXd killing_form(const StructureConstants& sc, double tol) {
  sc.validate(tol);
  const int n = sc.dim;
  MatrixXd b = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += sc.at(k, i, l) * sc.at(l, j, k);
      b(i, j) = s;
    }
  return b;
}

StructureConstants so3_algebra() {
  StructureConstants sc(3);
  sc.set_bracket(0, 1, 2, 1.0);  // [e1,e2] = e3
  sc.set_bracket(1, 2, 0, 1.0);  // [e2,e3] = e1
  sc.set_bracket(2, 0, 1, 1.0);  // [e3,e1] = e2
  return sc;
}

StructureConstants sl2_algebra() {
  // Basis H, E, F with [H,E] = 2E, [H,F] = -2F, [E,F] = H.
  StructureConstants sc(3);
  sc.set_bracket(0, 1, 1, 2.0);
  sc.set_bracket(0, 2, 2, -2.0);
  sc.set_bracket(1, 2, 0, 1.0);
  return sc;
}

StructureConstants heisenberg_algebra() {
  StructureConstants sc(3);
  sc.set_bracket(0, 1, 2, 1.0);  // [e1,e2] = e3
  return sc;
}

StructureConstants abelian_algebra(int n) { return StructureConstants(n); }

StructureConstants algebra_by_name(const std::string& name) {
  if (name == "so3") return so3_algebra();
  if (name == "sl2") return sl2_algebra();
  if (name == "heisenberg") return heisenberg_algebra();
  if (name.rfind("abelian", 0) == 0) {
    int n = 3;
    if (name.size() > 7) n = std::stoi(name.substr(7));
    return abelian_algebra(n);
  }
  throw std::invalid_argument("unknown algebra name: " + name);
}

StructureConstants load_structure_constants(std::istream& in) {
  std::string line;
  int dim = -1;
  StructureConstants sc;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto pos = line.find('#');
    if (pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "dim") {
      if (!(ls >> dim) || dim <= 0)
        throw std::invalid_argument("algebra file: bad dim line");
      sc = StructureConstants(dim);
      continue;
    }
    if (dim < 0)
      throw std::invalid_argument("algebra file: entry before dim line");
    int i = std::stoi(first), j, k;
    double v;
    if (!(ls >> j >> k >> v))
      throw std::invalid_argument("algebra file: bad entry at line " +
                                  std::to_string(lineno));
    if (i < 1 || i > dim || j < 1 || j > dim || k < 1 || k > dim)
      throw std::invalid_argument("algebra file: index out of range at line " +
                                  std::to_string(lineno));
    sc.set_bracket(i - 1, j - 1, k - 1, v);
  }
  if (dim < 0) throw std::invalid_argument("algebra file: missing dim line");
  sc.validate();
  return sc;
}

StructureConstants load_structure_constants_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open algebra file: " + path);
  return load_structure_constants(in);
}

}  // namespace projcomp
