#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/SparseCore>

#include "sdri/geometry.hpp"
#include "sdri/material.hpp"
#include "sdri/surface_energy.hpp"

namespace sdri {

/// Bilinear quadrilaterals on the composite cells. A lattice vertex carries
/// one node per edge-connected sector of its incident composite cells, where
/// two cells around the vertex are connected when the edge they share is not
/// a composite slit. Crack tips therefore stay closed.
struct SplitMesh {
  Grid grid;
  std::vector<int> element_cells;                  ///< grid cell per element
  std::vector<std::array<int, 4>> element_nodes;   ///< SW, SE, NE, NW
  std::vector<std::uint8_t> element_substrate;     ///< phase tag
  std::vector<int> node_vertex;                    ///< lattice vertex per node
  std::vector<int> node_component;
  int component_count = 0;

  int node_count() const { return static_cast<int>(node_vertex.size()); }
  int element_count() const { return static_cast<int>(element_cells.size()); }
  /// Lattice vertices carrying more than one node.
  int duplicated_vertices() const;
};

SplitMesh build_mesh(const Configuration& cfg);

/// Nodal displacements, interleaved (ux, uy) per node.
struct DisplacementField {
  std::vector<double> values;
  std::vector<int> pinned_dofs;
};

class ElasticityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadratic energy W(u) = uᵀ K u - 2 fᵀ u + c of a mesh.
struct ElasticSystem {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd load;
  double constant = 0.0;

  double energy(const std::vector<double>& u) const;
  std::vector<double> gradient(const std::vector<double>& u) const;
};

ElasticSystem assemble(const SplitMesh& mesh, const Material& material);

/// Minimizes W with three rigid degrees of freedom pinned per mesh
/// component. Throws ElasticityError if the relative residual exceeds 1e-10.
DisplacementField solve_equilibrium(const SplitMesh& mesh, const Material& material);

/// W by 2x2 Gauss quadrature of C (E(u) - E0) : (E(u) - E0).
double elastic_energy(const SplitMesh& mesh, const Material& material, const DisplacementField& u);
double elastic_energy(const Configuration& cfg, const DisplacementField& u, const Material& material);
/// ∫ |E(u) - E0|² over the composite region.
double strain_misfit(const SplitMesh& mesh, const Material& material, const DisplacementField& u);
/// Adds the rigid motion (tx, ty, θ) to every node of one mesh component.
void add_rigid_motion(const SplitMesh& mesh, DisplacementField& u, int component, double tx, double ty, double theta);

/// Equilibrium elastic energy of a configuration.
double equilibrium_energy(const Configuration& cfg, const Material& material);

struct VolumePenalty {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double v0 = 0.0;  ///< substrate target area
  double v1 = 0.0;  ///< composite target area
};

double volume_penalty(const Configuration& cfg, const VolumePenalty& p);

/// F = S + W (+ penalty), with W at equilibrium.
EnergyBreakdown total_energy(const Configuration& cfg, const SurfaceTensions& tensions, const Material& material,
                             const std::optional<VolumePenalty>& penalty = std::nullopt);

}  // namespace sdri
