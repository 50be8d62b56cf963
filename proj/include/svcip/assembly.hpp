// Operator assembly for the mixed velocity/pressure discretization: mass,
// viscous stiffness, discrete divergence, linearized convection, the three
// continuous-interior-penalty face terms, grad-div, and load vectors.

#ifndef SVCIP_ASSEMBLY_HPP
#define SVCIP_ASSEMBLY_HPP

#include <functional>

#include <Eigen/Sparse>

#include "svcip/fem.hpp"
#include "svcip/mesh.hpp"

namespace svcip {

using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Matrix2dField = std::function<Eigen::Matrix2d(double, double)>;

/// Mesh, spaces and quadrature for one velocity/pressure pair.
/// Immutable after construction; shared by assembly, time stepping, analysis.
struct Discretization {
  Mesh mesh;
  FaceSet faces;
  ReferenceElement vel_elem;
  ReferenceElement pres_elem;
  DofMap vel_map;
  DofMap pres_map;
  QuadratureRule cell_quad;
  EdgeQuadratureRule face_quad;
  int k;

  Discretization(Mesh m, int k, Continuity pressure_continuity, int cell_quad_degree = -1,
                 int face_quad_degree = -1);
};

struct CipParameters {
  double delta1 = 1e-2;
  double delta2 = 1e-4;
  double delta3 = 1e-3;
  double u_floor = 1e-8;      // lower bound for the 1/max(u_floor, |u_h|_inf) factor
  bool use_global_h = false;  // weight faces by the mesh diameter instead of h_F
};

/// Lagged velocity field that transports the convection and CIP operators.
struct TransportField {
  Eigen::VectorXd coeffs;
  double node_inf_norm = 0.0;  // max Euclidean magnitude over Lagrange nodes
};
TransportField make_transport(const Discretization& disc, Eigen::VectorXd coeffs);

/// Max of |a| sampled at Lagrange nodes and interior-face quadrature points.
double transport_inf_norm(const Discretization& disc, const TransportField& a);

struct StokesBlocks {
  SparseMat mass;       // (phi_j, phi_i)
  SparseMat stiffness;  // nu (grad phi_j, grad phi_i)
  SparseMat divergence; // (div phi_j, psi_i), pressure rows x velocity columns
};

/// Velocity mass, nu-scaled stiffness and divergence coupling.
/// Throws std::invalid_argument for nu <= 0.
StokesBlocks assemble_stokes_blocks(const Discretization& disc, double nu);

SparseMat assemble_mass(const Discretization& disc);
SparseMat assemble_stiffness(const Discretization& disc);  // unscaled (grad, grad)
SparseMat assemble_divergence(const Discretization& disc);

/// Linearized convection ((a . grad) phi_j, phi_i).
SparseMat assemble_convection(const Discretization& disc, const TransportField& a);

/// The stabilization form: 1/max(u_floor, |a|_inf) *
///   sum_F  delta1 h^2 <[[(a.grad)phi x n]], ...>
///        + delta2 h^4 <[[curl((a.grad)phi)]], ...>
///        + delta3 h^6 <[[grad curl((a.grad)phi)]], ...>
/// over interior faces. Symmetric positive semidefinite by construction.
SparseMat assemble_cip(const Discretization& disc, const TransportField& a,
                       const CipParameters& params);

/// gamma (div phi_j, div phi_i). Throws std::invalid_argument for gamma < 0.
SparseMat assemble_graddiv(const Discretization& disc, double gamma);

/// (f, phi_i) by cell quadrature.
Eigen::VectorXd assemble_load(const Discretization& disc, const VectorField& f);

/// Load of a gradient forcing grad(phi) assembled as -(phi, div v); equal to
/// (grad phi, v) for v with zero boundary trace, and exactly representable as
/// B^T c whenever div(V_h) is contained in the pressure space.
Eigen::VectorXd assemble_gradient_load(const Discretization& disc, const ScalarField& potential);

/// (G_exact, grad phi_i) with G_exact a 2x2 gradient closure; the
/// Stokes-projection right-hand side.
Eigen::VectorXd assemble_velocity_gradient_rhs(const Discretization& disc, const Matrix2dField& grad);

/// m_q = integral of pressure basis q; the zero-mean constraint row.
Eigen::VectorXd pressure_mean_vector(const Discretization& disc);

/// Jump samples of the stabilized quantities of an FE velocity field across
/// one interior face, per face quadrature point: rows are
/// [[(a.grad)v x n]], [[curl((a.grad)v)]], and the two components of
/// [[grad curl((a.grad)v)]]. Diagnostic / test hook.
Eigen::Matrix4Xd cip_face_jumps(const Discretization& disc, const TransportField& a,
                                const Eigen::VectorXd& field, int face_index);

}  // namespace svcip

#endif
