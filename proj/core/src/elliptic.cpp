#include "memfv/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace memfv {

void MembraneOperator::apply(const Field& x, Field& y) const {
  y.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) s += val[p] * x[col[p]];
    y[i] = s;
  }
}

Field MembraneOperator::apply(const Field& x) const {
  Field y;
  apply(x, y);
  return y;
}

double MembraneOperator::entry(int i, int j) const {
  for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p)
    if (col[p] == j) return val[p];
  return 0.0;
}

std::vector<double> MembraneOperator::diag() const {
  std::vector<double> d(n, 0.0);
  for (int i = 0; i < n; ++i) d[i] = entry(i, i);
  return d;
}

MembraneOperator assemble(const MembraneMesh& mesh, Diffusion diffusion,
                          double permeability) {
  if (diffusion.d1 <= 0.0 || diffusion.d2 <= 0.0)
    throw InvalidParameterError("assemble: diffusion must be positive");
  if (permeability <= 0.0)
    throw InvalidParameterError("assemble: permeability must be positive");

  const int n = mesh.cell_count();
  std::vector<std::map<int, double>> rows(n);

  auto add = [&](int i, int j, double v) { rows[i][j] += v; };
  auto cell_d = [&](int c) {
    return mesh.subdomain_of(c) == 1 ? diffusion.d1 : diffusion.d2;
  };
  // Membrane coupling carries the D*k weight of the weak form; harmonic mean
  // reduces to D for uniform diffusion.
  const double d_mem =
      2.0 * diffusion.d1 * diffusion.d2 / (diffusion.d1 + diffusion.d2);

  for (const InteriorFace& f : mesh.interior_faces) {
    double t;
    if (f.membrane) {
      t = d_mem * permeability * f.area;
    } else {
      t = cell_d(f.left) * f.area / f.dist;
    }
    add(f.left, f.left, t);
    add(f.right, f.right, t);
    add(f.left, f.right, -t);
    add(f.right, f.left, -t);
  }
  for (const DirichletFace& f : mesh.dirichlet_faces) {
    add(f.cell, f.cell, cell_d(f.cell) * f.area / f.half_dist);
  }

  MembraneOperator op;
  op.n = n;
  op.diffusion = diffusion;
  op.permeability = permeability;
  op.mass.resize(n);
  for (int i = 0; i < n; ++i) op.mass[i] = mesh.cells[i].volume;

  op.row_ptr.resize(n + 1, 0);
  for (int i = 0; i < n; ++i)
    op.row_ptr[i + 1] = op.row_ptr[i] + static_cast<int>(rows[i].size());
  op.col.reserve(op.row_ptr[n]);
  op.val.reserve(op.row_ptr[n]);
  for (int i = 0; i < n; ++i) {
    for (const auto& [j, v] : rows[i]) {
      op.col.push_back(j);
      op.val.push_back(v);
    }
  }
  return op;
}

double bilinear_form(const MembraneOperator& op, const Field& v, const Field& w) {
  if (static_cast<int>(v.size()) != op.n || static_cast<int>(w.size()) != op.n)
    throw DimensionError("bilinear_form: field size does not match operator");
  Field aw = op.apply(w);
  double s = 0.0;
  for (int i = 0; i < op.n; ++i) s += v[i] * aw[i];
  return s;
}

namespace {

double dot(const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Jacobi-preconditioned CG on a generic SPD matvec.
template <class MatVec>
EllipticSolveReport pcg(const MatVec& matvec, const std::vector<double>& diag,
                        const Field& b, Field x, double tol, int max_iter,
                        const char* what) {
  const int n = static_cast<int>(b.size());
  const double bnorm = std::sqrt(dot(b, b));
  EllipticSolveReport rep;
  if (bnorm == 0.0) {
    rep.solution.assign(n, 0.0);
    return rep;
  }

  Field r(n), z(n), p(n), q(n);
  matvec(x, q);
  for (int i = 0; i < n; ++i) r[i] = b[i] - q[i];
  for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = dot(r, z);
  double rnorm = std::sqrt(dot(r, r));

  int it = 0;
  while (rnorm > tol * bnorm) {
    if (it >= max_iter)
      throw NoConvergenceError(std::string(what) + ": CG iteration cap exceeded",
                               rnorm / bnorm);
    matvec(p, q);
    const double alpha = rz / dot(p, q);
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    rnorm = std::sqrt(dot(r, r));
    for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    ++it;
  }

  rep.solution = std::move(x);
  rep.iterations = it;
  rep.residual = rnorm / bnorm;
  return rep;
}

}  // namespace

EllipticSolveReport solve_poisson(const MembraneOperator& op, const Field& rhs,
                                  double tol) {
  if (tol <= 0.0) throw InvalidParameterError("solve_poisson: tol must be positive");
  if (static_cast<int>(rhs.size()) != op.n)
    throw DimensionError("solve_poisson: rhs size does not match operator");
  Field b(op.n);
  for (int i = 0; i < op.n; ++i) b[i] = op.mass[i] * rhs[i];
  auto matvec = [&op](const Field& x, Field& y) { op.apply(x, y); };
  return pcg(matvec, op.diag(), b, Field(op.n, 0.0), tol, 50 * op.n,
             "solve_poisson");
}

EllipticSolveReport solve_shifted(const MembraneOperator& op, double dt,
                                  const Field& b, const Field& x0, double tol) {
  if (tol <= 0.0) throw InvalidParameterError("solve_shifted: tol must be positive");
  auto matvec = [&op, dt](const Field& x, Field& y) {
    op.apply(x, y);
    for (int i = 0; i < op.n; ++i) y[i] = op.mass[i] * x[i] + dt * y[i];
  };
  std::vector<double> d = op.diag();
  for (int i = 0; i < op.n; ++i) d[i] = op.mass[i] + dt * d[i];
  return pcg(matvec, d, b, x0, tol, 50 * op.n, "solve_shifted");
}

double dual_norm(const MembraneOperator& op, const Field& f, double tol) {
  if (!op.diffusion.unit())
    throw InvalidParameterError(
        "dual_norm: operator must be assembled with unit diffusion");
  EllipticSolveReport rep = solve_poisson(op, f, tol);
  return std::sqrt(std::max(0.0, bilinear_form(op, rep.solution, rep.solution)));
}

double poincare_constant(const MembraneOperator& op, double rq_tol) {
  Field v(op.n, 1.0);

  auto m_norm = [&op](const Field& x) {
    double s = 0.0;
    for (int i = 0; i < op.n; ++i) s += op.mass[i] * x[i] * x[i];
    return std::sqrt(s);
  };
  auto rayleigh = [&op](const Field& x) {
    Field ax = op.apply(x);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < op.n; ++i) {
      num += x[i] * ax[i];
      den += op.mass[i] * x[i] * x[i];
    }
    return num / den;
  };

  double nv = m_norm(v);
  for (int i = 0; i < op.n; ++i) v[i] /= nv;
  double lambda = rayleigh(v);

  const int max_outer = 2000;
  for (int it = 0; it < max_outer; ++it) {
    EllipticSolveReport rep = solve_poisson(op, v, 1e-12);
    Field w = std::move(rep.solution);
    const double nw = m_norm(w);
    for (int i = 0; i < op.n; ++i) w[i] /= nw;
    const double lambda_new = rayleigh(w);
    v = std::move(w);
    if (std::abs(lambda_new - lambda) <= rq_tol * std::abs(lambda_new))
      return 1.0 / lambda_new;
    lambda = lambda_new;
  }
  throw NoConvergenceError("poincare_constant: power iteration stagnated", lambda);
}

}  // namespace memfv
