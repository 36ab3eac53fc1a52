#include "twinloop/kinematics/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "twinloop/common/error.hpp"

namespace twinloop::kinematics {
namespace {

constexpr double kReachEps = 1e-9;

std::string describe(const JointAngles& j) {
  std::ostringstream out;
  out << "(" << j.base_yaw << ", " << j.rear_elevation << ", " << j.fore_elevation << ") rad";
  return out.str();
}

// Wraps an angle into (-pi, pi].
double wrap(double angle) {
  angle = std::remainder(angle, 2.0 * std::numbers::pi);
  return angle <= -std::numbers::pi ? angle + 2.0 * std::numbers::pi : angle;
}

// Nearest admissible yaw by angular distance.
double clamp_yaw(double yaw, const world::AngleRange& limits) {
  if (limits.contains(yaw)) {
    return yaw;
  }
  const double to_min = std::abs(wrap(yaw - limits.min));
  const double to_max = std::abs(wrap(yaw - limits.max));
  return to_min <= to_max ? limits.min : limits.max;
}

}  // namespace

bool within_limits(const JointAngles& joints, const SceneConfig& config) {
  return config.base_yaw_limits.contains(joints.base_yaw) &&
         config.rear_elevation_limits.contains(joints.rear_elevation) &&
         config.fore_elevation_limits.contains(joints.fore_elevation);
}

Vec3 forward_unchecked(const JointAngles& joints, const SceneConfig& config) {
  const double l1 = config.rear_arm_length;
  const double l2 = config.forearm_length;
  const double reach = l1 * std::cos(joints.rear_elevation) + l2 * std::cos(joints.fore_elevation);
  return {config.base_position.x + reach * std::cos(joints.base_yaw),
          config.base_position.y + reach * std::sin(joints.base_yaw),
          config.base_height + l1 * std::sin(joints.rear_elevation) +
              l2 * std::sin(joints.fore_elevation)};
}

Vec3 forward(const JointAngles& joints, const SceneConfig& config) {
  if (!within_limits(joints, config)) {
    throw Error(ErrorCode::kJointLimitViolation, "joints " + describe(joints) + " outside limits");
  }
  return forward_unchecked(joints, config);
}

JointAngles inverse(Vec3 target, const SceneConfig& config) {
  if (!world::is_finite(target)) {
    throw Error(ErrorCode::kOutOfWorkspace, "target is not finite");
  }
  const double l1 = config.rear_arm_length;
  const double l2 = config.forearm_length;
  const double dx = target.x - config.base_position.x;
  const double dy = target.y - config.base_position.y;
  const double reach = std::hypot(dx, dy);
  const double height = target.z - config.base_height;
  const double dist = std::hypot(reach, height);

  if (dist > l1 + l2 + kReachEps || dist < std::abs(l1 - l2) - kReachEps) {
    std::ostringstream out;
    out << "target (" << target.x << ", " << target.y << ", " << target.z
        << ") is " << dist << " mm from the shoulder; reach is [" << std::abs(l1 - l2) << ", "
        << l1 + l2 << "]";
    throw Error(ErrorCode::kOutOfWorkspace, out.str());
  }

  JointAngles joints;
  joints.base_yaw = reach > 0.0 ? std::atan2(dy, dx) : 0.0;

  // Law of cosines in the vertical plane through the base axis; the rear arm
  // is raised above the shoulder-target line by the interior angle.
  const double toward_target = std::atan2(height, reach);
  double cos_interior = 0.0;
  if (dist > 0.0) {
    cos_interior = (l1 * l1 + dist * dist - l2 * l2) / (2.0 * l1 * dist);
  }
  const double interior = std::acos(std::clamp(cos_interior, -1.0, 1.0));
  joints.rear_elevation = toward_target + interior;

  const double elbow_r = l1 * std::cos(joints.rear_elevation);
  const double elbow_z = l1 * std::sin(joints.rear_elevation);
  joints.fore_elevation = std::atan2(height - elbow_z, reach - elbow_r);

  if (!within_limits(joints, config)) {
    throw Error(ErrorCode::kJointLimitViolation,
                "solution " + describe(joints) + " for target violates joint limits");
  }
  return joints;
}

bool reachable(Vec3 target, const SceneConfig& config) noexcept {
  try {
    (void)inverse(target, config);
    return true;
  } catch (const Error&) {
    return false;
  }
}

Vec3 clamp_to_workspace(Vec3 target, const SceneConfig& config) {
  if (reachable(target, config)) {
    return target;
  }
  const double dx = target.x - config.base_position.x;
  const double dy = target.y - config.base_position.y;
  const double yaw = clamp_yaw(std::hypot(dx, dy) > 0.0 ? std::atan2(dy, dx) : 0.0,
                               config.base_yaw_limits);

  // The reachable set is symmetric under base rotation, so the nearest point
  // lies at the (clamped) target yaw. Search the two elevations there.
  const auto& rear = config.rear_elevation_limits;
  const auto& fore = config.fore_elevation_limits;
  auto cost = [&](double a, double b) {
    const Vec3 p = forward_unchecked({yaw, a, b}, config);
    const Vec3 d = p - target;
    return d.x * d.x + d.y * d.y + d.z * d.z;
  };

  double best_a = rear.min;
  double best_b = fore.min;
  double best = std::numeric_limits<double>::infinity();
  constexpr int kSteps = 90;
  for (int i = 0; i <= kSteps; ++i) {
    const double a = rear.min + (rear.max - rear.min) * i / kSteps;
    for (int k = 0; k <= kSteps; ++k) {
      const double b = fore.min + (fore.max - fore.min) * k / kSteps;
      const double c = cost(a, b);
      if (c < best) {
        best = c;
        best_a = a;
        best_b = b;
      }
    }
  }

  // Pattern search refinement inside the box.
  double step = std::max(rear.max - rear.min, fore.max - fore.min) / kSteps;
  while (step > 1e-12) {
    bool improved = false;
    const std::array<std::pair<double, double>, 4> moves{
        {{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}};
    for (const auto& [da, db] : moves) {
      const double a = std::clamp(best_a + da, rear.min, rear.max);
      const double b = std::clamp(best_b + db, fore.min, fore.max);
      const double c = cost(a, b);
      if (c < best) {
        best = c;
        best_a = a;
        best_b = b;
        improved = true;
      }
    }
    if (!improved) {
      step /= 2.0;
    }
  }

  Vec3 clamped = forward_unchecked({yaw, best_a, best_b}, config);
  // Round-trip through the solver so the result is exactly representable as
  // an admissible pose; fall back to the raw point when it lands on the rim.
  if (!reachable(clamped, config)) {
    const Vec3 shoulder = config.shoulder();
    for (double shrink = 1e-9; shrink < 1e-3 && !reachable(clamped, config); shrink *= 10.0) {
      clamped = shoulder + (clamped - shoulder) * (1.0 - shrink);
    }
  }
  return clamped;
}

std::array<std::array<double, 3>, 3> jacobian(const JointAngles& joints,
                                              const SceneConfig& config) {
  const double l1 = config.rear_arm_length;
  const double l2 = config.forearm_length;
  const double cy = std::cos(joints.base_yaw);
  const double sy = std::sin(joints.base_yaw);
  const double c2 = std::cos(joints.rear_elevation);
  const double s2 = std::sin(joints.rear_elevation);
  const double c3 = std::cos(joints.fore_elevation);
  const double s3 = std::sin(joints.fore_elevation);
  const double reach = l1 * c2 + l2 * c3;
  return {{
      {-reach * sy, -l1 * s2 * cy, -l2 * s3 * cy},
      {reach * cy, -l1 * s2 * sy, -l2 * s3 * sy},
      {0.0, l1 * c2, l2 * c3},
  }};
}

}  // namespace twinloop::kinematics
