#pragma once

#include <array>
#include <string>
#include <vector>

#include "zebra/json_format.hpp"
#include "zebra/profile.hpp"

namespace zebra::analysis {

struct Projection2D {
  std::vector<std::string> models;
  std::vector<std::array<double, 2>> coords;
  std::array<double, 2> explained_variance{0.0, 0.0};
  // Principal axes (unit length, one entry per benchmark).
  std::array<std::vector<double>, 2> components;
  // All vectors identical: coords and explained variance are zero.
  bool degenerate = false;
};

// Two-component PCA of the ability vectors: center columns, eigendecompose
// the sample covariance, project onto the top two eigenvectors. Each axis is
// signed so that its largest-magnitude loading is positive. Eigenvalues below
// 1e-12 of the largest are treated as zero (component and coords zeroed).
// Throws DimensionError for fewer than 3 profiles or vectors shorter than 2.
Projection2D pca_project(const std::vector<AbilityProfile>& profiles);

// {"models", "coords": [[x, y], ...], "explained_variance": [a, b],
//  "components", "degenerate"}
ordered_json to_json(const Projection2D& projection);

}  // namespace zebra::analysis
