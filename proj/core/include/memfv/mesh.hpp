#ifndef MEMFV_MESH_HPP
#define MEMFV_MESH_HPP

#include <utility>
#include <vector>

#include "memfv/types.hpp"

namespace memfv {

struct Cell {
  double x = 0.0;
  double y = 0.0;
  double volume = 0.0;
  int subdomain = 1;  // 1 or 2
};

// Face between two cells. For a membrane face, `left` always lies in
// subdomain 1 and `right` in subdomain 2.
struct InteriorFace {
  int left = -1;
  int right = -1;
  double area = 0.0;
  double dist = 0.0;  // distance between the adjacent cell centers
  bool membrane = false;
};

// Outer boundary face carrying a homogeneous Dirichlet condition.
struct DirichletFace {
  int cell = -1;
  double area = 0.0;
  double half_dist = 0.0;  // cell center to the wall
  int side = 1;            // 1 on the boundary of subdomain 1, 2 otherwise
};

// Structured cell grid on a domain split by a flat interior membrane.
// Cell ordering: all subdomain-1 cells first, then subdomain-2 cells,
// row-major within each block in 2D. Immutable after construction.
struct MembraneMesh {
  int dim = 1;
  std::vector<Cell> cells;
  std::vector<InteriorFace> interior_faces;
  std::vector<int> membrane_face_ids;  // indices into interior_faces
  std::vector<DirichletFace> dirichlet_faces;
  double subdomain_volume1 = 0.0;  // analytic |Omega^1|
  double subdomain_volume2 = 0.0;  // analytic |Omega^2|
  double extent_x = 0.0;  // domain length, membrane at membrane_x
  double extent_y = 0.0;  // height in 2D, 0 in 1D
  double membrane_x = 0.0;

  int cell_count() const { return static_cast<int>(cells.size()); }
  int subdomain_of(int c) const { return cells[c].subdomain; }
  int membrane_face_count() const { return static_cast<int>(membrane_face_ids.size()); }

  double total_volume() const;

  // Throws InvalidGeometryError if any structural invariant is violated.
  void check_invariants() const;
};

// Uniform cells on (0,length1) and (length1, length1+length2), one membrane
// face at x = length1, Dirichlet faces at both ends.
MembraneMesh build_interval_mesh(double length1, double length2, int n1, int n2);

// Rectangle (0,length1+length2) x (0,height) with a vertical membrane at
// x = length1 (ny faces) and Dirichlet faces on the whole outer boundary.
MembraneMesh build_rect_mesh(double length1, double length2, double height,
                             int n1, int n2, int ny);

// Per membrane face, the adjacent cell values on side 1 and side 2
// (first-order traces).
std::vector<std::pair<double, double>> membrane_traces(const MembraneMesh& mesh,
                                                       const Field& field);

}  // namespace memfv

#endif
