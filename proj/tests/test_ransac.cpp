#include <doctest.h>

#include <random>
#include <vector>

#include "mf/geom/ransac.hpp"
#include "test_support.hpp"

using mf::Posed;
using mf::RansacConfig;

namespace {

// Independent re-implementation of the consensus search: matrix-based
// distances, explicit hypothesis loop, same tie rule.
std::vector<char> oracleConsensus(const std::vector<Posed>& estimates, const RansacConfig& cfg) {
  const int n = static_cast<int>(estimates.size());
  std::vector<Eigen::Matrix4d> mats;
  for (const Posed& p : estimates) mats.push_back(oracle::toMatrix(p));

  std::vector<char> best;
  int best_count = -1;
  bool best_has_first = false;
  for (int h = 0; h < n; ++h) {
    std::vector<char> flags(n, 0);
    int count = 0;
    for (int i = 0; i < n; ++i) {
      const bool in = oracle::translationDistance(mats[i], mats[h]) <= cfg.trans_thresh &&
                      oracle::rotationAngle(mats[i], mats[h]) <= cfg.rot_thresh;
      flags[i] = in ? 1 : 0;
      count += in;
    }
    const bool has_first = flags[0] != 0;
    if (count > best_count || (count == best_count && has_first && !best_has_first)) {
      best = flags;
      best_count = count;
      best_has_first = has_first;
    }
  }
  return best;
}

Posed perturb(std::mt19937_64& rng, const Posed& base, double trans, double rot) {
  Eigen::Vector3d axis = oracle::randomVector(rng);
  if (axis.norm() < 1e-9) axis = Eigen::Vector3d::UnitX();
  const Eigen::Vector3d dt = trans * oracle::randomVector(rng).normalized();
  return mf::compose(base, mf::Posed(Eigen::Quaterniond(Eigen::AngleAxisd(rot, axis.normalized())),
                                     dt));
}

}  // namespace

TEST_CASE("all mutually consistent estimates fuse to their average") {
  std::mt19937_64 rng(31);
  const Posed base = oracle::randomPose(rng);
  std::vector<Posed> estimates;
  for (int i = 0; i < 8; ++i) estimates.push_back(perturb(rng, base, 0.002, 0.005));

  const auto result = mf::ransacPoses(estimates, RansacConfig{});
  for (const char flag : result.inlier_flags) CHECK(flag == 1);
  CHECK(mf::isApprox(result.fused, mf::averagePoses(estimates), 1e-14));
}

TEST_CASE("single far outlier among eight is excluded") {
  std::mt19937_64 rng(32);
  const Posed base = oracle::randomPose(rng);
  std::vector<Posed> estimates;
  for (int i = 0; i < 7; ++i) estimates.push_back(perturb(rng, base, 0.002, 0.005));
  estimates.push_back(perturb(rng, base, 0.5, 1.2));  // way past both thresholds

  const auto result = mf::ransacPoses(estimates, RansacConfig{});
  for (int i = 0; i < 7; ++i) CHECK(result.inlier_flags[i] == 1);
  CHECK(result.inlier_flags[7] == 0);
  std::vector<Posed> inliers(estimates.begin(), estimates.begin() + 7);
  CHECK(mf::isApprox(result.fused, mf::averagePoses(inliers), 1e-14));
}

TEST_CASE("split set below min_inliers is degenerate") {
  std::mt19937_64 rng(33);
  const Posed a = oracle::randomPose(rng);
  const Posed b = mf::compose(a, Posed(Eigen::Quaterniond::Identity(), {1.0, 0.0, 0.0}));
  std::vector<Posed> estimates;
  for (int i = 0; i < 4; ++i) estimates.push_back(perturb(rng, a, 0.002, 0.004));
  for (int i = 0; i < 4; ++i) estimates.push_back(perturb(rng, b, 0.002, 0.004));

  RansacConfig cfg;
  cfg.min_inliers = 5;
  CHECK_THROWS_AS(mf::ransacPoses(estimates, cfg), mf::DegenerateError);
  // Majority default (5 of 8) fails the same way.
  CHECK_THROWS_AS(mf::ransacPoses(estimates, RansacConfig{}), mf::DegenerateError);
}

TEST_CASE("majority default accepts five of nine") {
  std::mt19937_64 rng(34);
  const Posed base = oracle::randomPose(rng);
  std::vector<Posed> estimates;
  for (int i = 0; i < 5; ++i) estimates.push_back(perturb(rng, base, 0.002, 0.004));
  for (int i = 0; i < 4; ++i) estimates.push_back(perturb(rng, base, 0.8, 1.5));

  const auto result = mf::ransacPoses(estimates, RansacConfig{});
  int inliers = 0;
  for (const char f : result.inlier_flags) inliers += f;
  CHECK(inliers == 5);
  for (int i = 0; i < 5; ++i) CHECK(result.inlier_flags[i] == 1);
}

TEST_CASE("tie between equal consensus sets prefers the one holding estimate 0") {
  std::mt19937_64 rng(35);
  const Posed a = oracle::randomPose(rng);
  const Posed b = mf::compose(a, Posed(Eigen::Quaterniond::Identity(), {2.0, 0.0, 0.0}));
  std::vector<Posed> estimates;
  for (int i = 0; i < 3; ++i) estimates.push_back(perturb(rng, a, 0.001, 0.002));
  for (int i = 0; i < 3; ++i) estimates.push_back(perturb(rng, b, 0.001, 0.002));

  RansacConfig cfg;
  cfg.min_inliers = 3;
  const auto result = mf::ransacPoses(estimates, cfg);
  CHECK(result.inlier_flags == std::vector<char>({1, 1, 1, 0, 0, 0}));
}

TEST_CASE("matches the exhaustive oracle on randomized instances") {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 200; ++trial) {
    const int total = 4 + 2 * (trial % 4);           // 4, 6, 8, 10
    const int outliers = trial % (total / 2);        // strictly below half
    const Posed base = oracle::randomPose(rng);
    std::vector<Posed> estimates;
    for (int i = 0; i < total - outliers; ++i) {
      estimates.push_back(perturb(rng, base, 0.003, 0.01));
    }
    for (int i = 0; i < outliers; ++i) {
      estimates.push_back(perturb(rng, base, 0.3 + 0.2 * i, 1.0 + 0.1 * i));
    }

    const auto result = mf::ransacPoses(estimates, RansacConfig{});
    CHECK(result.inlier_flags == oracleConsensus(estimates, RansacConfig{}));
    for (int i = 0; i < total; ++i) {
      CHECK(result.inlier_flags[static_cast<std::size_t>(i)] ==
            (i < total - outliers ? 1 : 0));
    }
  }
}

TEST_CASE("hypothesis sampling above the exhaustive cap is deterministic") {
  std::mt19937_64 rng(37);
  const Posed base = oracle::randomPose(rng);
  std::vector<Posed> estimates;
  for (int i = 0; i < 20; ++i) estimates.push_back(perturb(rng, base, 0.004, 0.01));
  for (int i = 0; i < 6; ++i) estimates.push_back(perturb(rng, base, 0.5, 1.2));

  const auto a = mf::ransacPoses(estimates, RansacConfig{}, 99);
  const auto b = mf::ransacPoses(estimates, RansacConfig{}, 99);
  CHECK(a.inlier_flags == b.inlier_flags);
  CHECK(a.hypothesis_index == b.hypothesis_index);
  CHECK(a.fused.rotation.coeffs() == b.fused.rotation.coeffs());
  CHECK(a.fused.translation == b.fused.translation);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(mf::ransacPoses(std::vector<Posed>{}, RansacConfig{}), mf::EmptySetError);
  RansacConfig bad;
  bad.trans_thresh = 0.0;
  CHECK_THROWS_AS(mf::ransacPoses(std::vector<Posed>{Posed::Identity()}, bad), mf::ConfigError);
  bad = RansacConfig{};
  bad.rot_thresh = -0.1;
  CHECK_THROWS_AS(mf::ransacPoses(std::vector<Posed>{Posed::Identity()}, bad), mf::ConfigError);
}
