#include "memfv/mesh.hpp"

#include <cmath>
#include <cstdlib>

namespace memfv {

double MembraneMesh::total_volume() const {
  double v = 0.0;
  for (const Cell& c : cells) v += c.volume;
  return v;
}

void MembraneMesh::check_invariants() const {
  if (membrane_face_ids.empty())
    throw InvalidGeometryError("mesh has no membrane faces");

  bool side1 = false, side2 = false;
  for (const DirichletFace& f : dirichlet_faces) {
    if (f.side == 1) side1 = true;
    if (f.side == 2) side2 = true;
  }
  if (!side1 || !side2)
    throw InvalidGeometryError("Dirichlet faces missing on one outer boundary");

  for (const InteriorFace& f : interior_faces) {
    const bool same = cells[f.left].subdomain == cells[f.right].subdomain;
    if (same == f.membrane)
      throw InvalidGeometryError("interior face subdomain tagging inconsistent");
    if (f.membrane &&
        (cells[f.left].subdomain != 1 || cells[f.right].subdomain != 2))
      throw InvalidGeometryError("membrane face orientation violated");
  }

  const double expected = subdomain_volume1 + subdomain_volume2;
  if (std::abs(total_volume() - expected) > 1e-12 * expected)
    throw InvalidGeometryError("cell volumes do not sum to |Omega|");
}

MembraneMesh build_interval_mesh(double length1, double length2, int n1, int n2) {
  if (length1 <= 0.0 || length2 <= 0.0)
    throw InvalidGeometryError("interval mesh: lengths must be positive");
  if (n1 < 2 || n2 < 2)
    throw InvalidGeometryError("interval mesh: cell counts must be >= 2");

  MembraneMesh mesh;
  mesh.dim = 1;
  mesh.subdomain_volume1 = length1;
  mesh.subdomain_volume2 = length2;
  mesh.extent_x = length1 + length2;
  mesh.membrane_x = length1;

  const double h1 = length1 / n1;
  const double h2 = length2 / n2;

  mesh.cells.reserve(n1 + n2);
  for (int i = 0; i < n1; ++i)
    mesh.cells.push_back({(i + 0.5) * h1, 0.0, h1, 1});
  for (int j = 0; j < n2; ++j)
    mesh.cells.push_back({length1 + (j + 0.5) * h2, 0.0, h2, 2});

  for (int i = 0; i + 1 < n1 + n2; ++i) {
    InteriorFace f;
    f.left = i;
    f.right = i + 1;
    f.area = 1.0;
    f.dist = mesh.cells[i + 1].x - mesh.cells[i].x;
    f.membrane = (i == n1 - 1);
    if (f.membrane) mesh.membrane_face_ids.push_back(static_cast<int>(mesh.interior_faces.size()));
    mesh.interior_faces.push_back(f);
  }

  mesh.dirichlet_faces.push_back({0, 1.0, 0.5 * h1, 1});
  mesh.dirichlet_faces.push_back({n1 + n2 - 1, 1.0, 0.5 * h2, 2});

  mesh.check_invariants();
  return mesh;
}

MembraneMesh build_rect_mesh(double length1, double length2, double height,
                             int n1, int n2, int ny) {
  if (length1 <= 0.0 || length2 <= 0.0 || height <= 0.0)
    throw InvalidGeometryError("rect mesh: dimensions must be positive");
  if (n1 < 2 || n2 < 2 || ny < 2)
    throw InvalidGeometryError("rect mesh: cell counts must be >= 2");

  MembraneMesh mesh;
  mesh.dim = 2;
  mesh.subdomain_volume1 = length1 * height;
  mesh.subdomain_volume2 = length2 * height;
  mesh.extent_x = length1 + length2;
  mesh.extent_y = height;
  mesh.membrane_x = length1;

  const double hx1 = length1 / n1;
  const double hx2 = length2 / n2;
  const double hy = height / ny;
  const int nx = n1 + n2;

  // Index helper consistent with the block ordering: subdomain-1 cells first
  // (row-major over iy, ix), then subdomain-2 cells.
  auto cell_id = [&](int ix, int iy) {
    if (ix < n1) return iy * n1 + ix;
    return n1 * ny + iy * n2 + (ix - n1);
  };
  auto center_x = [&](int ix) {
    if (ix < n1) return (ix + 0.5) * hx1;
    return length1 + (ix - n1 + 0.5) * hx2;
  };
  auto width_x = [&](int ix) { return ix < n1 ? hx1 : hx2; };

  mesh.cells.resize(static_cast<std::size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      Cell c;
      c.x = center_x(ix);
      c.y = (iy + 0.5) * hy;
      c.volume = width_x(ix) * hy;
      c.subdomain = ix < n1 ? 1 : 2;
      mesh.cells[cell_id(ix, iy)] = c;
    }
  }

  // Vertical faces (x-normal), membrane between columns n1-1 and n1.
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix + 1 < nx; ++ix) {
      InteriorFace f;
      f.left = cell_id(ix, iy);
      f.right = cell_id(ix + 1, iy);
      f.area = hy;
      f.dist = 0.5 * (width_x(ix) + width_x(ix + 1));
      f.membrane = (ix == n1 - 1);
      if (f.membrane) mesh.membrane_face_ids.push_back(static_cast<int>(mesh.interior_faces.size()));
      mesh.interior_faces.push_back(f);
    }
  }
  // Horizontal faces (y-normal).
  for (int iy = 0; iy + 1 < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      InteriorFace f;
      f.left = cell_id(ix, iy);
      f.right = cell_id(ix, iy + 1);
      f.area = width_x(ix);
      f.dist = hy;
      f.membrane = false;
      mesh.interior_faces.push_back(f);
    }
  }

  // Outer boundary, fully Dirichlet. Left/right walls.
  for (int iy = 0; iy < ny; ++iy) {
    mesh.dirichlet_faces.push_back({cell_id(0, iy), hy, 0.5 * hx1, 1});
    mesh.dirichlet_faces.push_back({cell_id(nx - 1, iy), hy, 0.5 * hx2, 2});
  }
  // Bottom/top walls.
  for (int ix = 0; ix < nx; ++ix) {
    const int side = ix < n1 ? 1 : 2;
    mesh.dirichlet_faces.push_back({cell_id(ix, 0), width_x(ix), 0.5 * hy, side});
    mesh.dirichlet_faces.push_back({cell_id(ix, ny - 1), width_x(ix), 0.5 * hy, side});
  }

  mesh.check_invariants();
  return mesh;
}

std::vector<std::pair<double, double>> membrane_traces(const MembraneMesh& mesh,
                                                       const Field& field) {
  if (static_cast<int>(field.size()) != mesh.cell_count())
    throw DimensionError("membrane_traces: field size does not match mesh");
  std::vector<std::pair<double, double>> traces;
  traces.reserve(mesh.membrane_face_ids.size());
  for (int id : mesh.membrane_face_ids) {
    const InteriorFace& f = mesh.interior_faces[id];
    traces.emplace_back(field[f.left], field[f.right]);
  }
  return traces;
}

}  // namespace memfv
