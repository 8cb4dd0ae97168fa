#include <cmath>

#include "doctest.h"
#include "memfv/elliptic.hpp"
#include "oracles.hpp"

using namespace memfv;
using namespace memfv::test;

TEST_CASE("hand-assembled operator on the 4-cell mesh") {
  const MembraneMesh mesh = build_interval_mesh(1.0, 1.0, 2, 2);
  const MembraneOperator op = assemble(mesh, Diffusion(1.0), 1.0);

  // h = 1/2: interior flux D/h = 2, membrane coupling k = 1, Dirichlet 4.
  const double expected[4][4] = {{6, -2, 0, 0},
                                 {-2, 3, -1, 0},
                                 {0, -1, 3, -2},
                                 {0, 0, -2, 6}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(op.entry(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-15));

  CHECK(op.entry(1, 2) == -1.0);  // k * area, not D/dist
  CHECK(op.entry(0, 1) == -2.0);  // D * area / dist
}

TEST_CASE("assembly is exactly symmetric") {
  const MembraneMesh mesh = build_rect_mesh(1.0, 2.0, 1.0, 3, 5, 4);
  const MembraneOperator op = assemble(mesh, Diffusion(0.7, 1.3), 2.5);
  for (int i = 0; i < op.n; ++i)
    for (int p = op.row_ptr[i]; p < op.row_ptr[i + 1]; ++p)
      CHECK(op.val[p] == op.entry(op.col[p], i));
}

TEST_CASE("constant fields only feel Dirichlet rows") {
  const MembraneMesh mesh = build_rect_mesh(1.0, 1.0, 1.0, 4, 4, 3);
  const MembraneOperator op = assemble(mesh, Diffusion(2.0), 0.5);
  const Field av = op.apply(Field(op.n, 3.0));
  std::vector<bool> at_wall(op.n, false);
  for (const DirichletFace& f : mesh.dirichlet_faces) at_wall[f.cell] = true;
  for (int i = 0; i < op.n; ++i) {
    if (at_wall[i])
      CHECK(av[i] > 0.0);
    else
      CHECK(std::abs(av[i]) <= 1e-12 * op.entry(i, i));  // fp summation noise
  }
}

TEST_CASE("invalid parameters are rejected") {
  const MembraneMesh mesh = build_interval_mesh(1.0, 1.0, 2, 2);
  CHECK_THROWS_AS(assemble(mesh, Diffusion(-1.0), 1.0), InvalidParameterError);
  CHECK_THROWS_AS(assemble(mesh, Diffusion(1.0), 0.0), InvalidParameterError);
}

TEST_CASE("bilinear form") {
  const MembraneMesh mesh = build_interval_mesh(1.0, 1.0, 2, 2);
  const MembraneOperator op = assemble(mesh, Diffusion(1.0), 1.0);
  const int n = op.n;

  CHECK(bilinear_form(op, Field(n, 0.0), Field(n, 0.0)) == 0.0);

  // Indicator of the right subdomain: membrane jump contributes k*1*1 = 1,
  // the right Dirichlet face 4.
  Field ind(n, 0.0);
  ind[2] = ind[3] = 1.0;
  CHECK(bilinear_form(op, ind, ind) == doctest::Approx(5.0).epsilon(1e-15));

  const Field v = random_field(n, 1), w = random_field(n, 2);
  CHECK(bilinear_form(op, v, w) ==
        doctest::Approx(bilinear_form(op, w, v)).epsilon(1e-13));

  // Coercivity: positive on nonzero fields.
  CHECK(bilinear_form(op, v, v) > 0.0);

  Field bad(n - 1, 0.0);
  CHECK_THROWS_AS(bilinear_form(op, bad, bad), DimensionError);
}

TEST_CASE("energy Cauchy-Schwarz and duality inequalities") {
  const MembraneMesh mesh = build_rect_mesh(1.0, 1.0, 1.0, 4, 4, 4);
  const MembraneOperator op = assemble(mesh, Diffusion(1.0), 1.0);
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Field v = random_field(op.n, 100 + seed);
    const Field w = random_field(op.n, 200 + seed);
    const double bvw = bilinear_form(op, v, w);
    const double bvv = bilinear_form(op, v, v);
    const double bww = bilinear_form(op, w, w);
    CHECK(std::abs(bvw) <= std::sqrt(bvv * bww) * (1.0 + 1e-12));

    const double dn = dual_norm(op, v, 1e-13);
    double pairing = 0.0;
    for (int i = 0; i < op.n; ++i) pairing += op.mass[i] * v[i] * w[i];
    CHECK(std::abs(pairing) <= dn * std::sqrt(bww) + 1e-10);
  }
}

TEST_CASE("poisson solve against the dense oracle") {
  const MembraneMesh mesh = build_interval_mesh(1.0, 1.0, 16, 16);
  const MembraneOperator op = assemble(mesh, Diffusion(1.0), 1.0);

  SUBCASE("zero right-hand side") {
    const EllipticSolveReport rep = solve_poisson(op, Field(op.n, 0.0), 1e-12);
    CHECK(rep.iterations == 0);
    for (double v : rep.solution) CHECK(v == 0.0);
  }

  SUBCASE("constant source, the auxiliary G problem") {
    const Field rhs(op.n, 1.0);
    const Field cg = solve_poisson(op, rhs, 1e-13).solution;
    const Field dense = dense_poisson_solve(op, rhs);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < op.n; ++i) {
      num = std::max(num, std::abs(cg[i] - dense[i]));
      den = std::max(den, std::abs(dense[i]));
    }
    CHECK(num <= 1e-10 * den);
  }

  SUBCASE("oracle equivalence on random data, several operators") {
    for (unsigned seed = 0; seed < 5; ++seed) {
      const MembraneOperator op2 =
          assemble(mesh, Diffusion(0.3 + 0.4 * seed), 0.5 + seed);
      const Field rhs = random_field(op2.n, 50 + seed);
      const Field cg = solve_poisson(op2, rhs, 1e-13).solution;
      const Field dense = dense_poisson_solve(op2, rhs);
      double err = 0.0, scale = 0.0;
      for (int i = 0; i < op2.n; ++i) {
        err = std::max(err, std::abs(cg[i] - dense[i]));
        scale = std::max(scale, std::abs(dense[i]));
      }
      CHECK(err <= 1e-9 * scale);
    }
  }

  SUBCASE("linearity") {
    const Field f = random_field(op.n, 3), g = random_field(op.n, 4);
    Field combo(op.n);
    for (int i = 0; i < op.n; ++i) combo[i] = 1.5 * f[i] + 0.25 * g[i];
    const Field sf = solve_poisson(op, f, 1e-13).solution;
    const Field sg = solve_poisson(op, g, 1e-13).solution;
    const Field sc = solve_poisson(op, combo, 1e-13).solution;
    for (int i = 0; i < op.n; ++i)
      CHECK(sc[i] == doctest::Approx(1.5 * sf[i] + 0.25 * sg[i]).epsilon(1e-10));
  }
}

TEST_CASE("solver error paths") {
  const MembraneMesh mesh = build_interval_mesh(1.0, 1.0, 2, 2);
  const MembraneOperator op = assemble(mesh, Diffusion(1.0), 1.0);
  CHECK_THROWS_AS(solve_poisson(op, Field(op.n, 1.0), -1.0),
                  InvalidParameterError);
  CHECK_THROWS_AS(solve_poisson(op, Field(op.n - 1, 1.0), 1e-10),
                  DimensionError);
}

TEST_CASE("dual norm") {
  const MembraneMesh mesh = build_interval_mesh(1.0, 1.0, 16, 16);
  const MembraneOperator op = assemble(mesh, Diffusion(1.0), 1.0);

  SUBCASE("zero datum") { CHECK(dual_norm(op, Field(op.n, 0.0)) == 0.0); }

  SUBCASE("requires unit diffusion") {
    const MembraneOperator heavy = assemble(mesh, Diffusion(2.0), 1.0);
    CHECK_THROWS_AS(dual_norm(heavy, Field(heavy.n, 1.0)),
                    InvalidParameterError);
  }

  SUBCASE("generalized eigenvector relation") {
    const DenseEigen eig = dense_generalized_eigen(op);
    for (int mode : {0, 1, 5, 17}) {
      Field f(op.n);
      for (int i = 0; i < op.n; ++i) f[i] = eig.vectors(i, mode);
      double l2 = 0.0;
      for (int i = 0; i < op.n; ++i) l2 += op.mass[i] * f[i] * f[i];
      const double expected = std::sqrt(l2 / eig.values[mode]);
      CHECK(dual_norm(op, f, 1e-13) ==
            doctest::Approx(expected).epsilon(1e-8));
    }
  }

  SUBCASE("matches the dense expression on random data") {
    for (unsigned seed = 0; seed < 10; ++seed) {
      const Field f = random_field(op.n, 400 + seed);
      CHECK(dual_norm(op, f, 1e-13) ==
            doctest::Approx(dense_dual_norm(op, f)).epsilon(1e-8));
    }
  }

  SUBCASE("homogeneity") {
    const Field f = random_field(op.n, 77);
    const double base = dual_norm(op, f, 1e-13);
    Field scaled(op.n);
    for (int i = 0; i < op.n; ++i) scaled[i] = -3.0 * f[i];
    CHECK(dual_norm(op, scaled, 1e-13) ==
          doctest::Approx(3.0 * base).epsilon(1e-11));
  }
}

TEST_CASE("poincare constant") {
  SUBCASE("transparent membrane approaches the glued-interval value") {
    const MembraneMesh mesh = build_interval_mesh(1.0, 1.0, 64, 64);
    const double cp = poincare_constant(assemble(mesh, Diffusion(1.0), 1e9));
    const double exact = 4.0 / (M_PI * M_PI);
    CHECK(std::abs(cp - exact) <= 0.05 * exact);
  }

  SUBCASE("matches the dense smallest eigenvalue") {
    const MembraneMesh mesh = build_interval_mesh(1.0, 2.0, 16, 24);
    for (double k : {0.5, 1.0, 2.0}) {
      const MembraneOperator op = assemble(mesh, Diffusion(1.0), k);
      const DenseEigen eig = dense_generalized_eigen(op);
      CHECK(poincare_constant(op) ==
            doctest::Approx(1.0 / eig.values[0]).epsilon(1e-6));
    }
  }

  SUBCASE("strictly decreasing in k on an asymmetric domain") {
    const MembraneMesh mesh = build_interval_mesh(1.0, 2.0, 32, 64);
    double prev = 1e300;
    for (double k : {0.1, 1.0, 10.0}) {
      const double cp = poincare_constant(assemble(mesh, Diffusion(1.0), k));
      CHECK(cp < prev);
      prev = cp;
    }
  }

  SUBCASE("refinement stability") {
    const double cp64 = poincare_constant(
        assemble(build_interval_mesh(1.0, 1.0, 64, 64), Diffusion(1.0), 1.0));
    const double cp128 = poincare_constant(
        assemble(build_interval_mesh(1.0, 1.0, 128, 128), Diffusion(1.0), 1.0));
    CHECK(std::abs(cp128 - cp64) < 0.05 * cp64);
  }

  SUBCASE("certifies discrete coercivity") {
    const MembraneMesh mesh = build_interval_mesh(1.0, 2.0, 12, 12);
    const MembraneOperator op = assemble(mesh, Diffusion(1.0), 0.8);
    const double cp = poincare_constant(op);
    for (unsigned seed = 0; seed < 10; ++seed) {
      const Field v = random_field(op.n, 900 + seed);
      double l2 = 0.0;
      for (int i = 0; i < op.n; ++i) l2 += op.mass[i] * v[i] * v[i];
      CHECK(l2 <= cp * bilinear_form(op, v, v) * (1.0 + 1e-8));
    }
  }
}
