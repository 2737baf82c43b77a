#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/jacobi_pca.hpp"
#include "support/fixtures.hpp"
#include "zebra/analysis/pca.hpp"
#include "zebra/error.hpp"

using namespace zebra;

namespace {

void check_against_oracle(const std::vector<AbilityProfile>& profiles, double tol) {
  oracle::Matrix data;
  for (const auto& p : profiles) data.push_back(p.vector);
  auto expected = oracle::brute_pca(data);
  auto got = analysis::pca_project(profiles);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    CHECK(std::abs(got.coords[i][0] - expected.coords[i][0]) <= tol);
    CHECK(std::abs(got.coords[i][1] - expected.coords[i][1]) <= tol);
  }
  CHECK(std::abs(got.explained_variance[0] - expected.explained[0]) <= tol);
  CHECK(std::abs(got.explained_variance[1] - expected.explained[1]) <= tol);
}

}  // namespace

TEST_CASE("leaderboard projection matches Jacobi PCA") {
  auto set = build_profile_set(testing::load_table5());
  check_against_oracle(set.profiles, 1e-8);
  auto proj = analysis::pca_project(set.profiles);
  CHECK_FALSE(proj.degenerate);
  CHECK(proj.explained_variance[0] >= proj.explained_variance[1]);
  CHECK(proj.explained_variance[0] + proj.explained_variance[1] <= 1.0 + 1e-12);
  double norm = 0.0;
  for (double x : proj.components[0]) norm += x * x;
  CHECK(std::abs(norm - 1.0) < 1e-12);
}

TEST_CASE("random profiles match Jacobi PCA") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 20; ++k) {
    auto profiles = testing::random_profiles(rng, 3 + k % 10, 2 + k % 6, 1000);
    check_against_oracle(profiles, 1e-8);
  }
}

TEST_CASE("coordinates are centered and sign convention holds") {
  std::mt19937_64 rng(8);
  auto profiles = testing::random_profiles(rng, 9, 5, 1000);
  auto proj = analysis::pca_project(profiles);
  for (int c = 0; c < 2; ++c) {
    double sum = 0.0;
    for (const auto& xy : proj.coords) sum += xy[static_cast<std::size_t>(c)];
    CHECK(std::abs(sum) < 1e-12);
    const auto& axis = proj.components[static_cast<std::size_t>(c)];
    auto pivot = std::max_element(axis.begin(), axis.end(),
                                  [](double a, double b) { return std::abs(a) < std::abs(b); });
    CHECK(*pivot > 0.0);
  }
}

TEST_CASE("identical vectors are degenerate, small inputs rejected") {
  std::vector<AbilityProfile> same{{"a", {0.5, 0.5}, 0.5}, {"b", {0.5, 0.5}, 0.5}, {"c", {0.5, 0.5}, 0.5}};
  auto proj = analysis::pca_project(same);
  CHECK(proj.degenerate);
  for (const auto& xy : proj.coords) CHECK(xy == std::array<double, 2>{0.0, 0.0});

  CHECK_THROWS_AS(analysis::pca_project({same[0], same[1]}), DimensionError);
  std::vector<AbilityProfile> narrow{{"a", {0.1}, 0.1}, {"b", {0.2}, 0.2}, {"c", {0.3}, 0.3}};
  CHECK_THROWS_AS(analysis::pca_project(narrow), DimensionError);

  auto doc = analysis::to_json(proj);
  CHECK(doc["degenerate"] == true);
  CHECK(doc["coords"].size() == 3);
}

TEST_CASE("Llama-2 chat models are close in the projection") {
  auto set = build_profile_set(testing::load_table5());
  auto proj = analysis::pca_project(set.profiles);
  auto at = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(proj.models.begin(), proj.models.end(), name) - proj.models.begin());
  };
  // Rank of `other` among the neighbors of `self` (0 = nearest).
  auto rank = [&](std::size_t self, std::size_t other) {
    auto dist = [&](std::size_t k) {
      return std::hypot(proj.coords[self][0] - proj.coords[k][0], proj.coords[self][1] - proj.coords[k][1]);
    };
    std::size_t closer = 0;
    for (std::size_t k = 0; k < proj.models.size(); ++k)
      if (k != self && k != other && dist(k) < dist(other)) ++closer;
    return closer;
  };
  auto small = at("Llama-2-7b-chat"), large = at("Llama-2-13b-chat");
  REQUIRE(small < proj.models.size());
  REQUIRE(large < proj.models.size());
  CHECK(rank(small, large) <= 1);
  CHECK(rank(large, small) <= 1);
}

TEST_CASE("collinear points have no second component") {
  std::vector<AbilityProfile> line{{"a", {0.0, 0.0}, 0.0}, {"b", {0.5, 0.25}, 0.375}, {"c", {1.0, 0.5}, 0.75}};
  auto proj = analysis::pca_project(line);
  CHECK(std::abs(proj.explained_variance[0] - 1.0) < 1e-12);
  CHECK(proj.explained_variance[1] == 0.0);
  for (const auto& xy : proj.coords) CHECK(xy[1] == 0.0);
}
