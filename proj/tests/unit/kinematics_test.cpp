#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "check.hpp"
#include "twinloop/kinematics/kinematics.hpp"

using namespace twinloop;
using namespace twinloop::kinematics;

namespace {

// Independent forward model: planar two-link chain in the vertical plane of
// the base yaw, elevations absolute from the horizontal.
Vec3 reference_forward(double yaw, double rear, double fore, const SceneConfig& c) {
  const double r = c.rear_arm_length * std::cos(rear) + c.forearm_length * std::cos(fore);
  const double z = c.rear_arm_length * std::sin(rear) + c.forearm_length * std::sin(fore);
  return {c.base_position.x + r * std::cos(yaw), c.base_position.y + r * std::sin(yaw), c.base_height + z};
}

}  // namespace

TEST_CASE("forward matches the reference model") {
  SceneConfig c;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> yaw(c.base_yaw_limits.min, c.base_yaw_limits.max);
  std::uniform_real_distribution<double> rear(c.rear_elevation_limits.min, c.rear_elevation_limits.max);
  std::uniform_real_distribution<double> fore(c.fore_elevation_limits.min, c.fore_elevation_limits.max);
  for (int i = 0; i < 200; ++i) {
    const JointAngles j{yaw(rng), rear(rng), fore(rng)};
    const Vec3 a = forward(j, c);
    const Vec3 b = reference_forward(j.base_yaw, j.rear_elevation, j.fore_elevation, c);
    CHECK(world::distance(a, b) < 1e-9);
  }
}

TEST_CASE("fully stretched arm") {
  SceneConfig c;
  const Vec3 p = forward({0, 0, 0}, c);
  CHECK(p.x == doctest::Approx(c.rear_arm_length + c.forearm_length).epsilon(1e-12));
  CHECK(p.z == doctest::Approx(c.base_height));
  const auto j = inverse({c.rear_arm_length + c.forearm_length, 0, c.base_height}, c);
  const Vec3 back = forward(j, c);
  CHECK(std::abs(back.x - (c.rear_arm_length + c.forearm_length)) < 1e-9);
  CHECK(std::abs(back.y) < 1e-9);
  CHECK(std::abs(back.z - c.base_height) < 1e-9);
}

TEST_CASE("upright rear arm with horizontal forearm, and folded forearm") {
  SceneConfig c;
  const Vec3 p = forward({0, std::numbers::pi / 2, 0}, c);
  CHECK(p.x == doctest::Approx(c.forearm_length));
  CHECK(p.z == doctest::Approx(c.base_height + c.rear_arm_length));
  const Vec3 q = forward({0, std::numbers::pi / 2, -std::numbers::pi / 2}, c);
  CHECK(std::abs(q.x) < 1e-9);
  CHECK(q.z == doctest::Approx(c.base_height + c.rear_arm_length - c.forearm_length));
}

TEST_CASE("round trip on random reachable targets") {
  SceneConfig c;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1, 1);
  int checked = 0;
  while (checked < 1000) {
    const Vec3 t{u(rng) * 300, u(rng) * 300, u(rng) * 300 + 100};
    if (!reachable(t, c)) continue;
    const Vec3 back = forward(inverse(t, c), c);
    CHECK(world::distance(back, t) < 1e-6);
    ++checked;
  }
}

TEST_CASE("out of reach and joint limits") {
  SceneConfig c;
  CHECK_ERROR_CODE(inverse({400, 0, 80}, c), ErrorCode::kOutOfWorkspace);
  CHECK_FALSE(reachable({400, 0, 80}, c));
  CHECK_ERROR_CODE(inverse({-200, 0, 80}, c), ErrorCode::kJointLimitViolation);  // yaw 180 deg
  CHECK_ERROR_CODE(forward({0, -0.5, 0}, c), ErrorCode::kJointLimitViolation);
  CHECK_NOTHROW(forward_unchecked({0, -0.5, 0}, c));
}

TEST_CASE("clamp_to_workspace") {
  SceneConfig c;
  const Vec3 inside{200, 0, 50};
  CHECK(clamp_to_workspace(inside, c) == inside);
  const Vec3 far{600, 0, 80};
  const Vec3 clamped = clamp_to_workspace(far, c);
  CHECK(reachable(clamped, c));
  CHECK(clamped.x == doctest::Approx(c.rear_arm_length + c.forearm_length).epsilon(1e-3));
}

TEST_CASE("jacobian agrees with finite differences") {
  SceneConfig c;
  const JointAngles j{0.3, 0.8, -0.2};
  const auto jac = jacobian(j, c);
  const double h = 1e-6;
  for (int k = 0; k < 3; ++k) {
    JointAngles a = j, b = j;
    double* pa = k == 0 ? &a.base_yaw : k == 1 ? &a.rear_elevation : &a.fore_elevation;
    double* pb = k == 0 ? &b.base_yaw : k == 1 ? &b.rear_elevation : &b.fore_elevation;
    *pa += h;
    *pb -= h;
    const Vec3 d = (forward_unchecked(a, c) - forward_unchecked(b, c)) * (1 / (2 * h));
    CHECK(jac[0][k] == doctest::Approx(d.x).epsilon(1e-5));
    CHECK(jac[1][k] == doctest::Approx(d.y).epsilon(1e-5));
    CHECK(jac[2][k] == doctest::Approx(d.z).epsilon(1e-5));
  }
}
