#include "hslab/interpolate.hpp"

#include <algorithm>
#include <cmath>

#include "hslab/discretize.hpp"

namespace hslab {

namespace {

Eigen::Vector3d barycentric(const MeridianMesh& mesh, int c, const Vec2& x) {
  const auto& t = mesh.cells[c];
  const Vec2 &a = mesh.nodes[t[0]], &b = mesh.nodes[t[1]], &d = mesh.nodes[t[2]];
  const double det = (b.x() - a.x()) * (d.y() - a.y()) -
                     (b.y() - a.y()) * (d.x() - a.x());
  const double l1 = ((x.x() - a.x()) * (d.y() - a.y()) -
                     (x.y() - a.y()) * (d.x() - a.x())) / det;
  const double l2 = ((b.x() - a.x()) * (x.y() - a.y()) -
                     (b.y() - a.y()) * (x.x() - a.x())) / det;
  return Eigen::Vector3d(1.0 - l1 - l2, l1, l2);
}

}  // namespace

PointLocator::PointLocator(const MeridianMesh& mesh) : mesh_(&mesh) {
  double x1 = -1e300, y1 = -1e300;
  x0_ = 1e300;
  y0_ = 1e300;
  for (const auto& p : mesh.nodes) {
    x0_ = std::min(x0_, p.x());
    y0_ = std::min(y0_, p.y());
    x1 = std::max(x1, p.x());
    y1 = std::max(y1, p.y());
  }
  const int target = std::max(8, static_cast<int>(
      std::sqrt(static_cast<double>(mesh.cells.size()))));
  nx_ = target;
  ny_ = target;
  dx_ = std::max((x1 - x0_) / nx_, 1e-300);
  dy_ = std::max((y1 - y0_) / ny_, 1e-300);
  bins_.resize(static_cast<std::size_t>(nx_) * ny_);
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    double cx0 = 1e300, cy0 = 1e300, cx1 = -1e300, cy1 = -1e300;
    for (int k = 0; k < 3; ++k) {
      const Vec2& p = mesh.nodes[mesh.cells[c][k]];
      cx0 = std::min(cx0, p.x());
      cy0 = std::min(cy0, p.y());
      cx1 = std::max(cx1, p.x());
      cy1 = std::max(cy1, p.y());
    }
    int i0 = std::clamp(static_cast<int>((cx0 - x0_) / dx_), 0, nx_ - 1);
    int i1 = std::clamp(static_cast<int>((cx1 - x0_) / dx_), 0, nx_ - 1);
    int j0 = std::clamp(static_cast<int>((cy0 - y0_) / dy_), 0, ny_ - 1);
    int j1 = std::clamp(static_cast<int>((cy1 - y0_) / dy_), 0, ny_ - 1);
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j)
        bins_[static_cast<std::size_t>(j) * nx_ + i].push_back(
            static_cast<int>(c));
  }
}

int PointLocator::locate(const Vec2& x, double tol) const {
  const int i = std::clamp(static_cast<int>((x.x() - x0_) / dx_), 0, nx_ - 1);
  const int j = std::clamp(static_cast<int>((x.y() - y0_) / dy_), 0, ny_ - 1);
  int best = -1;
  double best_def = tol;
  for (int c : bins_[static_cast<std::size_t>(j) * nx_ + i]) {
    Eigen::Vector3d l = barycentric(*mesh_, c, x);
    const double deficit = -l.minCoeff();
    if (deficit <= 0.0) return c;
    // tolerate slight outside-ness scaled by cell size
    double d2 = 0.0;
    for (int k = 0; k < 3; ++k) {
      Vec2 e = mesh_->nodes[mesh_->cells[c][k]] -
               mesh_->nodes[mesh_->cells[c][(k + 1) % 3]];
      d2 = std::max(d2, e.norm());
    }
    if (deficit * d2 < best_def) {
      best_def = deficit * d2;
      best = c;
    }
  }
  return best;
}

std::optional<double> interpolate(const PointLocator& loc,
                                  const Eigen::VectorXd& u, const Vec2& x) {
  const int c = loc.locate(x);
  if (c < 0) return std::nullopt;
  const auto& t = loc.mesh().cells[c];
  Eigen::Vector3d l = barycentric(loc.mesh(), c, x);
  return l[0] * u[t[0]] + l[1] * u[t[1]] + l[2] * u[t[2]];
}

double interpolate_or(const PointLocator& loc, const Eigen::VectorXd& u,
                      const Vec2& x, double fallback) {
  auto v = interpolate(loc, u, x);
  return v ? *v : fallback;
}

std::optional<Vec2> interpolate_gradient(const PointLocator& loc,
                                         const Eigen::VectorXd& u,
                                         const Vec2& x) {
  const int c = loc.locate(x);
  if (c < 0) return std::nullopt;
  return cell_gradient(loc.mesh(), c, u);
}

}  // namespace hslab
