// Triangulations of the unit square: structured grids with SW-NE diagonals,
// barycentric (Alfeld) refinement, and face topology with normals and
// face diameters.

#ifndef SVCIP_MESH_HPP
#define SVCIP_MESH_HPP

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace svcip {

enum class Diagonal { SwNe };

struct Mesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> cells;  // vertex indices, counterclockwise
  std::vector<char> boundary_vertex;      // 1 if the vertex lies on the square boundary

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }

  double signed_area(int cell) const;
  Eigen::Vector2d barycenter(int cell) const;

  /// Maximum cell diameter (longest edge over all cells).
  double max_diameter() const;
  /// Smallest interior angle over all cells, in radians.
  double min_angle() const;
};

/// Structured triangulation of [0,1]^2 with n subdivisions per direction and
/// the stated diagonal in each grid square. Throws std::invalid_argument for n < 1.
Mesh build_unit_square_mesh(int n, Diagonal diagonal = Diagonal::SwNe);

/// Split every triangle into three by joining its barycenter to its vertices.
Mesh barycentric_refine(const Mesh& mesh);

struct Face {
  std::array<int, 2> vertices;  // ascending vertex indices
  int left_cell = -1;           // the lower adjacent cell index
  int right_cell = -1;          // -1 for boundary faces
  Eigen::Vector2d normal;       // unit, pointing out of left_cell
  double length = 0.0;          // h_F
};

struct FaceSet {
  std::vector<Face> faces;
  int interior_count = 0;
};

/// Enumerate all mesh edges with adjacency, outward-of-left unit normals and
/// lengths. Throws std::runtime_error if an edge is shared by more than two cells.
FaceSet build_face_topology(const Mesh& mesh);

/// Validate invariants (positive CCW areas, coordinates in [0,1]^2, index ranges).
/// Throws std::invalid_argument on violation.
void validate_mesh(const Mesh& mesh);

/// Dump the mesh as legacy-VTK ASCII (visualization only).
void write_mesh_vtk(const Mesh& mesh, const std::string& path);

}  // namespace svcip

#endif
