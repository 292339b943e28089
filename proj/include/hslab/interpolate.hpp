#pragma once

#include <optional>
#include <vector>

#include "hslab/geometry.hpp"

namespace hslab {

// Uniform-grid point location over a meridian mesh.
class PointLocator {
 public:
  explicit PointLocator(const MeridianMesh& mesh);

  // containing cell, or -1 when outside (within tol of a cell counts)
  int locate(const Vec2& x, double tol = 1e-10) const;

  const MeridianMesh& mesh() const { return *mesh_; }

 private:
  const MeridianMesh* mesh_;
  double x0_, y0_, dx_, dy_;
  int nx_, ny_;
  std::vector<std::vector<int>> bins_;
};

// P1 evaluation; std::nullopt outside the mesh
std::optional<double> interpolate(const PointLocator& loc,
                                  const Eigen::VectorXd& u, const Vec2& x);
double interpolate_or(const PointLocator& loc, const Eigen::VectorXd& u,
                      const Vec2& x, double fallback);
std::optional<Vec2> interpolate_gradient(const PointLocator& loc,
                                         const Eigen::VectorXd& u,
                                         const Vec2& x);

}  // namespace hslab
