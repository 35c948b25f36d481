#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <numeric>
#include <random>

#include "kdbench/collision.hpp"
#include "kdbench/kinematics.hpp"
#include "support/oracles.hpp"

using namespace kdbench;
using Eigen::Vector3d;

namespace {

KinematicChain z_joint() {
  KinematicChain c;
  c.name = "z";
  JointSpec j;
  j.name = "j0";
  j.lower = -std::numbers::pi;
  j.upper = std::numbers::pi;
  c.joints.push_back(j);
  return c;
}

Vector3d random_point(std::mt19937_64& rng, double half) {
  std::uniform_real_distribution<double> u(-half, half);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("capsule placement examples") {
  auto c = z_joint();
  c.capsules.push_back({"base", {0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}, 0.01});
  c.capsules.push_back({"j0", {0, 0, 0}, {0.1, 0, 0}, 0.02});
  const auto at_zero = place_capsules(c, JointState::Zero(1));
  CHECK(at_zero[0].a == Vector3d(0.1, 0.2, 0.3));
  CHECK(at_zero[1].b == Vector3d(0.1, 0, 0));
  const auto placed = place_capsules(c, JointState::Constant(1, std::numbers::pi / 2));
  CHECK(placed[0].b == Vector3d(0.4, 0.5, 0.6));
  CHECK(placed[1].a.norm() == 0.0);
  CHECK((placed[1].b - Vector3d(0, 0.1, 0)).norm() < 1e-15);
  CHECK(placed[1].radius == 0.02);
  CHECK(placed[1].source_index == 1);
}

TEST_CASE("capsule placement matches the transform oracle") {
  std::mt19937_64 rng(21);
  for (const auto& n : oracle::bundled_names()) {
    const auto chain = oracle::bundled(n);
    for (int s = 0; s < 50; ++s) {
      const auto q = oracle::random_in_limits(chain, rng);
      const auto frames = oracle::joint_transforms(chain, q);
      const auto placed = place_capsules(chain, q);
      REQUIRE(placed.size() == chain.capsules.size());
      for (std::size_t i = 0; i < placed.size(); ++i) {
        const int f = *chain.frame_index(chain.capsules[i].attached_joint);
        const Eigen::Matrix4d t = f < 0 ? Eigen::Matrix4d::Identity() : frames[static_cast<std::size_t>(f)];
        const Vector3d a = (t * chain.capsules[i].a.homogeneous()).head<3>();
        const Vector3d b = (t * chain.capsules[i].b.homogeneous()).head<3>();
        CHECK((placed[i].a - a).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((placed[i].b - b).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("segment distance examples") {
  CHECK(segment_distance(Vector3d(0, 0, 0), Vector3d(1, 0, 0), Vector3d(0, 0.1, 0), Vector3d(1, 0.1, 0)) ==
        doctest::Approx(0.1).epsilon(1e-15));
  CHECK(segment_distance(Vector3d(0, 0, 0), Vector3d(0, 0, 0), Vector3d(3, 4, 0), Vector3d(3, 4, 0)) == 5.0);
  // Crossing segments.
  CHECK(segment_distance(Vector3d(-1, 0, 0), Vector3d(1, 0, 0), Vector3d(0, -1, 0.5), Vector3d(0, 1, 0.5)) ==
        doctest::Approx(0.5).epsilon(1e-15));
  // Collinear, disjoint.
  CHECK(segment_distance(Vector3d(0, 0, 0), Vector3d(1, 0, 0), Vector3d(3, 0, 0), Vector3d(2, 0, 0)) == 1.0);
  // Float instantiation.
  CHECK(segment_distance(Eigen::Vector3f(0, 0, 0), Eigen::Vector3f(1, 0, 0), Eigen::Vector3f(0, 2, 0),
                         Eigen::Vector3f(1, 2, 0)) == 2.0f);
}

TEST_CASE("segment distance is symmetric and matches a dense grid") {
  std::mt19937_64 rng(23);
  for (int s = 0; s < 200; ++s) {
    const Vector3d a0 = random_point(rng, 0.15), a1 = random_point(rng, 0.15);
    const Vector3d b0 = random_point(rng, 0.15), b1 = random_point(rng, 0.15);
    const double d = segment_distance(a0, a1, b0, b1);
    CHECK(d == segment_distance(b0, b1, a0, a1));
    CHECK(std::abs(d - segment_distance(a1, a0, b1, b0)) < 1e-15);
    CHECK(std::abs(d - oracle::grid_segment_distance(a0, a1, b0, b1, 1000)) < 1e-4);
  }
}

TEST_CASE("segment distance symmetry is exact on many pairs") {
  std::mt19937_64 rng(29);
  for (int s = 0; s < 100000; ++s) {
    const Vector3d a0 = random_point(rng, 1), a1 = random_point(rng, 1);
    const Vector3d b0 = random_point(rng, 1), b1 = random_point(rng, 1);
    REQUIRE(segment_distance(a0, a1, b0, b1) == segment_distance(b0, b1, a0, a1));
  }
}

TEST_CASE("self collision examples") {
  auto c = z_joint();
  c.capsules.push_back({"j0", {0, 0, 0}, {0.1, 0, 0}, 0.02});
  CHECK_FALSE(check_self_collision(c, JointState::Zero(1)));

  c.capsules.push_back({"base", {0.05, 0, 0}, {0.2, 0, 0}, 0.02});
  const auto hit = check_self_collision(c, JointState::Zero(1));
  CHECK(hit.colliding);
  REQUIRE(hit.first_pair.has_value());
  CHECK(*hit.first_pair == CapsulePair{0, 1});

  c.collision_exemptions.push_back({1, 0});
  c.normalize_exemptions();
  CHECK_FALSE(check_self_collision(c, JointState::Zero(1)));
}

TEST_CASE("touching capsules do not collide") {
  auto c = z_joint();
  c.capsules.push_back({"base", {0, 0, 0}, {1, 0, 0}, 0.25});
  c.capsules.push_back({"base", {0, 0.5, 0}, {1, 0.5, 0}, 0.25});
  CHECK_FALSE(check_self_collision(c, JointState::Zero(1)));
  c.capsules[1].radius = 0.2500001;
  CHECK(check_self_collision(c, JointState::Zero(1)));
}

TEST_CASE("collision verdict is invariant under capsule reordering") {
  std::mt19937_64 rng(31);
  for (const auto& n : oracle::bundled_names()) {
    const auto chain = oracle::bundled(n);
    std::vector<std::size_t> perm(chain.capsules.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    KinematicChain shuffled = chain;
    std::vector<std::size_t> where(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
      shuffled.capsules[i] = chain.capsules[perm[i]];
      where[perm[i]] = i;
    }
    shuffled.collision_exemptions.clear();
    for (auto [i, j] : chain.collision_exemptions) shuffled.collision_exemptions.emplace_back(where[i], where[j]);
    shuffled.normalize_exemptions();
    int colliding = 0;
    for (int s = 0; s < 300; ++s) {
      const auto q = oracle::random_in_limits(chain, rng);
      const auto a = check_self_collision(chain, q);
      const auto b = check_self_collision(shuffled, q);
      CHECK(a.colliding == b.colliding);
      colliding += a.colliding;
    }
    CHECK(colliding > 0);
  }
}

TEST_CASE("shrinking a radius never creates a collision") {
  std::mt19937_64 rng(37);
  for (const auto& n : oracle::bundled_names()) {
    const auto chain = oracle::bundled(n);
    for (int s = 0; s < 200; ++s) {
      const auto q = oracle::random_in_limits(chain, rng);
      const bool before = check_self_collision(chain, q).colliding;
      KinematicChain smaller = chain;
      const auto i = std::uniform_int_distribution<std::size_t>(0, chain.capsules.size() - 1)(rng);
      smaller.capsules[i].radius *= std::uniform_real_distribution<double>(0.1, 1.0)(rng);
      if (!before) CHECK_FALSE(check_self_collision(smaller, q).colliding);
    }
  }
}
