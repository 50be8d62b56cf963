// Reference Lagrange elements on the triangle with derivatives up to order 3,
// quadrature rules, global dof maps for the velocity/pressure pairs, and
// nodal interpolation of analytic fields.

#ifndef SVCIP_FEM_HPP
#define SVCIP_FEM_HPP

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "svcip/mesh.hpp"

namespace svcip {

using ScalarField = std::function<double(double, double)>;
using VectorField = std::function<Eigen::Vector2d(double, double)>;

/// Basis values and derivative tensors at one reference point.
/// Derivatives are in reference coordinates; callers push them to the
/// physical frame through the (affine, constant) cell Jacobian.
struct BasisTable {
  int order = 0;
  Eigen::VectorXd values;              // [n]
  Eigen::MatrixXd grad;                // [n x 2]      d/dx, d/dy
  Eigen::MatrixXd hess;                // [n x 3]      xx, xy, yy
  Eigen::MatrixXd third;               // [n x 4]      xxx, xxy, xyy, yyy
};

/// Nodal Lagrange element on the reference triangle (0,0)-(1,0)-(0,1) with
/// equispaced nodes.
class ReferenceElement {
 public:
  explicit ReferenceElement(int degree);

  int degree() const { return degree_; }
  int n_nodes() const { return static_cast<int>(nodes_ref_.size()); }
  const std::vector<Eigen::Vector2d>& nodes_ref() const { return nodes_ref_; }
  const std::vector<Eigen::Vector3d>& nodes_bary() const { return nodes_bary_; }

  /// Local node classification for dof numbering.
  struct NodeEntity {
    enum Kind { Vertex, Edge, Interior } kind;
    int index;  // vertex 0..2, local edge 0..2 (edge e joins vertices e and e+1), or interior slot
    int sub;    // position along the edge, 1..degree-1 counted from the edge's first vertex
  };
  const std::vector<NodeEntity>& node_entities() const { return entities_; }

  /// Evaluate all basis functions and derivatives up to `order` (0..3) at a
  /// reference point. Throws std::invalid_argument for order outside 0..3.
  BasisTable eval(const Eigen::Vector2d& ref_point, int order) const;

 private:
  int degree_;
  std::vector<Eigen::Vector2d> nodes_ref_;
  std::vector<Eigen::Vector3d> nodes_bary_;
  std::vector<NodeEntity> entities_;
  std::vector<std::array<int, 2>> mono_;  // monomial exponents (a,b), total degree <= k
  Eigen::MatrixXd coeffs_;                // [n_mono x n_basis], basis_i = sum_m coeffs(m,i) x^a y^b
};

struct QuadratureRule {
  std::vector<Eigen::Vector3d> points_bary;
  std::vector<Eigen::Vector2d> points_ref;
  std::vector<double> weights;  // sum to the reference area 1/2
  int exact_degree = 0;
};

/// Rule integrating all monomials of total degree <= target exactly on the
/// reference triangle. Supported targets: 1..12.
QuadratureRule quadrature(int target_degree);

struct EdgeQuadratureRule {
  std::vector<double> points;   // in [0,1]
  std::vector<double> weights;  // sum to 1
  int exact_degree = 0;
};

/// Gauss-Legendre rule on [0,1], exact for degree <= target. Targets 1..31.
EdgeQuadratureRule edge_quadrature(int target_degree);

enum class FieldType { VectorVelocity, ScalarPressure };
enum class Continuity { Continuous, Discontinuous };

struct DofMap {
  FieldType field = FieldType::VectorVelocity;
  Continuity continuity = Continuity::Continuous;
  int degree = 0;
  int components = 1;
  int n_scalar_nodes = 0;
  int n_dofs = 0;
  std::vector<std::vector<int>> cell_nodes;   // [cell][local node] -> global scalar node
  std::vector<Eigen::Vector2d> node_coords;   // [global scalar node]
  std::vector<int> boundary_dofs;             // sorted (velocity spaces only)
  std::vector<char> dof_is_boundary;          // [n_dofs]

  int dof(int node, int comp) const { return components * node + comp; }
};

/// Global numbering for a continuous or discontinuous Lagrange space.
/// Velocity spaces are vector-valued with interleaved components and carry a
/// boundary dof list for homogeneous Dirichlet elimination; the velocity
/// degree must be >= 2.
DofMap build_dofmap(const Mesh& mesh, const FaceSet& faces, const ReferenceElement& elem,
                    FieldType field, Continuity continuity);

/// Nodal interpolation of an analytic field.
Eigen::VectorXd interpolate(const VectorField& field, const DofMap& dofmap);
Eigen::VectorXd interpolate(const ScalarField& field, const DofMap& dofmap);

/// Per-cell affine geometry: x = v0 + J * xi.
struct CellGeometry {
  Eigen::Vector2d v0;
  Eigen::Matrix2d jac;
  Eigen::Matrix2d jac_inv;
  double det = 0.0;  // 2 * area

  Eigen::Vector2d to_physical(const Eigen::Vector2d& ref) const { return v0 + jac * ref; }
  Eigen::Vector2d to_reference(const Eigen::Vector2d& phys) const { return jac_inv * (phys - v0); }
};
CellGeometry cell_geometry(const Mesh& mesh, int cell);

/// BasisTable pushed to physical coordinates through a constant Jacobian.
BasisTable push_forward(const BasisTable& ref_table, const Eigen::Matrix2d& jac_inv);

/// Value and derivatives of one scalar component of an FE field at a point.
struct FieldDerivatives {
  double value = 0.0;
  Eigen::Vector2d grad = Eigen::Vector2d::Zero();
  Eigen::Vector3d hess = Eigen::Vector3d::Zero();  // xx, xy, yy
};

/// Evaluate component `comp` of a coefficient field on `cell` given a basis
/// table already in the physical frame.
FieldDerivatives eval_field_component(const Eigen::VectorXd& coeffs, const DofMap& dofmap, int cell,
                                      const BasisTable& phys_table, int comp);

}  // namespace svcip

#endif
