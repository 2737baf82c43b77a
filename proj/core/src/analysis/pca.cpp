#include "zebra/analysis/pca.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "zebra/error.hpp"

namespace zebra::analysis {

Projection2D pca_project(const std::vector<AbilityProfile>& profiles) {
  if (profiles.size() < 3) {
    throw DimensionError("PCA needs at least 3 profiles, got " + std::to_string(profiles.size()));
  }
  const auto n = static_cast<Eigen::Index>(profiles.size());
  const auto m = static_cast<Eigen::Index>(profiles.front().vector.size());
  if (m < 2) throw DimensionError("PCA needs ability vectors of length >= 2");

  Eigen::MatrixXd data(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& v = profiles[static_cast<std::size_t>(i)].vector;
    if (static_cast<Eigen::Index>(v.size()) != m) {
      throw DimensionError("profile '" + profiles[static_cast<std::size_t>(i)].model +
                           "' has a different vector length");
    }
    for (Eigen::Index k = 0; k < m; ++k) data(i, k) = v[static_cast<std::size_t>(k)];
  }

  Projection2D out;
  for (const auto& p : profiles) out.models.push_back(p.model);
  out.coords.assign(profiles.size(), {0.0, 0.0});
  out.components = {std::vector<double>(static_cast<std::size_t>(m), 0.0),
                    std::vector<double>(static_cast<std::size_t>(m), 0.0)};

  const double scale = std::max(1.0, data.cwiseAbs().maxCoeff());
  Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw DimensionError("covariance eigendecomposition failed");
  // Ascending order; clamp round-off negatives.
  Eigen::VectorXd values = solver.eigenvalues().cwiseMax(0.0);
  const double total = values.sum();
  if (total <= 1e-20 * scale * scale) {
    out.degenerate = true;
    return out;
  }
  const double largest = values(m - 1);

  for (int c = 0; c < 2; ++c) {
    const Eigen::Index col = m - 1 - c;
    double lambda = values(col);
    if (lambda <= 1e-12 * largest) continue;
    Eigen::VectorXd axis = solver.eigenvectors().col(col);
    Eigen::Index pivot = 0;
    for (Eigen::Index k = 1; k < m; ++k) {
      if (std::abs(axis(k)) > std::abs(axis(pivot))) pivot = k;
    }
    if (axis(pivot) < 0) axis = -axis;

    out.explained_variance[static_cast<std::size_t>(c)] = lambda / total;
    Eigen::VectorXd projected = centered * axis;
    for (Eigen::Index i = 0; i < n; ++i) {
      out.coords[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = projected(i);
    }
    for (Eigen::Index k = 0; k < m; ++k) {
      out.components[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)] = axis(k);
    }
  }
  return out;
}

ordered_json to_json(const Projection2D& projection) {
  ordered_json doc = ordered_json::object();
  doc["models"] = projection.models;
  ordered_json coords = ordered_json::array();
  for (const auto& xy : projection.coords) coords.push_back({xy[0], xy[1]});
  doc["coords"] = std::move(coords);
  doc["explained_variance"] = {projection.explained_variance[0], projection.explained_variance[1]};
  doc["components"] = {projection.components[0], projection.components[1]};
  doc["degenerate"] = projection.degenerate;
  return doc;
}

}  // namespace zebra::analysis
