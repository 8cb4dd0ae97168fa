#ifndef MEMFV_ELLIPTIC_HPP
#define MEMFV_ELLIPTIC_HPP

#include <vector>

#include "memfv/mesh.hpp"
#include "memfv/types.hpp"

namespace memfv {

// Diffusion coefficient, either global or per subdomain.
struct Diffusion {
  double d1 = 1.0;
  double d2 = 1.0;
  Diffusion() = default;
  Diffusion(double d) : d1(d), d2(d) {}
  Diffusion(double a, double b) : d1(a), d2(b) {}
  bool unit() const { return d1 == 1.0 && d2 == 1.0; }
  double min() const { return d1 < d2 ? d1 : d2; }
};

// Sparse symmetric positive definite operator for -D*Laplace with
// permeability-k membrane coupling and outer Dirichlet conditions, CSR
// storage. Immutable after assembly; concurrent solves are permitted.
struct MembraneOperator {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;
  std::vector<double> mass;  // cell volumes
  Diffusion diffusion;
  double permeability = 0.0;

  void apply(const Field& x, Field& y) const;  // y = A x
  Field apply(const Field& x) const;
  double entry(int i, int j) const;  // 0 if not stored
  std::vector<double> diag() const;
};

// Interior-face flux D*area/dist, membrane coupling D*k*area (k*area for the
// unit-diffusion operator used by the dual norm), Dirichlet faces
// D*area/half_dist on the diagonal. v'Aw is the discrete membrane bilinear
// form: sum of face gradient products plus k-weighted membrane jump products.
MembraneOperator assemble(const MembraneMesh& mesh, Diffusion diffusion,
                          double permeability);

double bilinear_form(const MembraneOperator& op, const Field& v, const Field& w);

struct EllipticSolveReport {
  Field solution;
  int iterations = 0;
  double residual = 0.0;  // relative
};

// Jacobi-preconditioned conjugate gradients for A w = M*rhs, relative
// residual <= tol, iteration cap 50*n. Throws NoConvergenceError on cap.
EllipticSolveReport solve_poisson(const MembraneOperator& op, const Field& rhs,
                                  double tol = 1e-12);

// Same solver for (M + dt*A) x = b with b a plain vector (not M-weighted);
// x0 is the initial guess.
EllipticSolveReport solve_shifted(const MembraneOperator& op, double dt,
                                  const Field& b, const Field& x0,
                                  double tol = 1e-12);

// sqrt(B[w,w]) with A w = M f; requires an operator assembled with unit
// diffusion (the plain-Laplacian membrane problem).
double dual_norm(const MembraneOperator& op, const Field& f, double tol = 1e-12);

// 1/lambda_min of A v = lambda M v via inverse power iteration; certifies
// ||v||_M^2 <= C_P * B[v,v] for all discrete v.
double poincare_constant(const MembraneOperator& op, double rq_tol = 1e-8);

}  // namespace memfv

#endif
