// Dense oracles used by the tests, independent of the CG/power-iteration
// paths they check.

#ifndef MEMFV_TESTS_ORACLES_HPP
#define MEMFV_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "memfv/elliptic.hpp"

namespace memfv::test {

inline Eigen::MatrixXd dense_matrix(const MembraneOperator& op) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(op.n, op.n);
  for (int i = 0; i < op.n; ++i)
    for (int p = op.row_ptr[i]; p < op.row_ptr[i + 1]; ++p)
      a(i, op.col[p]) += op.val[p];
  return a;
}

inline Eigen::VectorXd dense_mass(const MembraneOperator& op) {
  Eigen::VectorXd m(op.n);
  for (int i = 0; i < op.n; ++i) m(i) = op.mass[i];
  return m;
}

// Direct solve of A w = M rhs.
inline Field dense_poisson_solve(const MembraneOperator& op, const Field& rhs) {
  const Eigen::MatrixXd a = dense_matrix(op);
  Eigen::VectorXd b(op.n);
  for (int i = 0; i < op.n; ++i) b(i) = op.mass[i] * rhs[i];
  const Eigen::VectorXd x = a.ldlt().solve(b);
  return Field(x.data(), x.data() + op.n);
}

// sqrt(f' M A^{-1} M f) by dense factorization.
inline double dense_dual_norm(const MembraneOperator& op, const Field& f) {
  const Eigen::MatrixXd a = dense_matrix(op);
  Eigen::VectorXd mf(op.n);
  for (int i = 0; i < op.n; ++i) mf(i) = op.mass[i] * f[i];
  const Eigen::VectorXd w = a.ldlt().solve(mf);
  return std::sqrt(mf.dot(w));
}

// Generalized eigenpairs of A v = lambda M v, ascending.
struct DenseEigen {
  std::vector<double> values;
  Eigen::MatrixXd vectors;
};

inline DenseEigen dense_generalized_eigen(const MembraneOperator& op) {
  const Eigen::MatrixXd a = dense_matrix(op);
  const Eigen::MatrixXd m = dense_mass(op).asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, m);
  DenseEigen out;
  out.values.assign(solver.eigenvalues().data(),
                    solver.eigenvalues().data() + op.n);
  out.vectors = solver.eigenvectors();
  return out;
}

inline Field random_field(int n, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(lo, hi);
  Field f(n);
  for (int i = 0; i < n; ++i) f[i] = uni(rng);
  return f;
}

}  // namespace memfv::test

#endif
