#pragma once

#include <array>

#include "twinloop/world/types.hpp"

// Forward/inverse kinematics of the 3-DOF desktop arm: a yawing base, a rear
// arm and a forearm, each elevation measured absolutely from the horizontal.
// The suction cup always points down, so only the effector position matters.
namespace twinloop::kinematics {

using world::JointAngles;
using world::SceneConfig;
using world::Vec3;

bool within_limits(const JointAngles& joints, const SceneConfig& config);

/// Effector position for the given joints.
/// Throws Error(kJointLimitViolation) when a joint is outside its range.
Vec3 forward(const JointAngles& joints, const SceneConfig& config);

/// Same formula as forward() without the limit check.
Vec3 forward_unchecked(const JointAngles& joints, const SceneConfig& config);

/// Elbow-up solution. Throws Error(kOutOfWorkspace) when the target lies
/// outside the annulus [|L1 - L2|, L1 + L2] around the shoulder, and
/// Error(kJointLimitViolation) when the geometric solution breaks a limit.
JointAngles inverse(Vec3 target, const SceneConfig& config);

/// True iff inverse(target) would succeed.
bool reachable(Vec3 target, const SceneConfig& config) noexcept;

/// Nearest reachable point to `target` (identity for reachable targets).
Vec3 clamp_to_workspace(Vec3 target, const SceneConfig& config);

/// Analytic partial derivatives d(x, y, z)/d(yaw, rear, fore); row = axis.
std::array<std::array<double, 3>, 3> jacobian(const JointAngles& joints,
                                              const SceneConfig& config);

}  // namespace twinloop::kinematics
