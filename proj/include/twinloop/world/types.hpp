#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twinloop::world {

/// Point or displacement in the world frame, millimeters. z is up and the
/// table plane is z = 0.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend Vec3 operator*(double s, Vec3 a) { return a * s; }
};

inline double norm(Vec3 v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }
inline double distance(Vec3 a, Vec3 b) { return norm(a - b); }
inline double horizontal_distance(Vec3 a, Vec3 b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline bool is_finite(Vec3 v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}
inline Vec3 lerp(Vec3 a, Vec3 b, double t) { return a + (b - a) * t; }

enum class Color { kRed, kBlue, kYellow, kOther };

std::string_view to_string(Color color);
/// Unknown names map to Color::kOther.
Color color_from_string(std::string_view name);

struct CubeObject {
  std::string tag;
  Color color = Color::kOther;
  Vec3 center;
  double edge = 25.0;

  double top_z() const { return center.z + edge / 2.0; }
  double bottom_z() const { return center.z - edge / 2.0; }
  Vec3 top_center() const { return {center.x, center.y, top_z()}; }

  friend bool operator==(const CubeObject&, const CubeObject&) = default;
};

struct NamedPosition {
  std::string tag;
  Color color = Color::kOther;
  Vec3 center;  // on the table plane
  double radius = 20.0;

  friend bool operator==(const NamedPosition&, const NamedPosition&) = default;
};

/// Absolute joint angles in radians. Both arm elevations are measured from
/// the horizontal plane, not relative to the previous link.
struct JointAngles {
  double base_yaw = 0.0;
  double rear_elevation = 0.0;
  double fore_elevation = 0.0;

  friend bool operator==(const JointAngles&, const JointAngles&) = default;
};

struct RobotState {
  Vec3 effector;
  bool suction = false;
  JointAngles joints;

  friend bool operator==(const RobotState&, const RobotState&) = default;
};

struct WorldState {
  std::vector<CubeObject> cubes;  // kept sorted by tag
  std::vector<NamedPosition> positions;
  RobotState robot;
  std::optional<std::string> held;

  const CubeObject* find_cube(std::string_view tag) const;
  CubeObject* find_cube(std::string_view tag);
  const NamedPosition* find_position(std::string_view tag) const;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

struct AngleRange {
  double min = -std::numbers::pi;
  double max = std::numbers::pi;

  bool contains(double angle, double eps = 1e-9) const {
    return angle >= min - eps && angle <= max + eps;
  }
};

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

struct SceneConfig {
  double rear_arm_length = 135.0;
  double forearm_length = 147.0;
  Vec3 base_position{0.0, 0.0, 0.0};  // table-plane foot of the base axis
  double base_height = 80.0;          // shoulder joint above the table

  AngleRange base_yaw_limits{deg_to_rad(-135.0), deg_to_rad(135.0)};
  AngleRange rear_elevation_limits{deg_to_rad(0.0), deg_to_rad(90.0)};
  AngleRange fore_elevation_limits{deg_to_rad(-90.0), deg_to_rad(90.0)};

  double cube_edge = 25.0;
  double position_radius = 20.0;
  double tol_at = 15.0;
  double tol_on = 8.0;
  double tol_overlap = 2.0;
  double detector_noise = 0.0;
  double approach_height = 50.0;
  double grip_radius = 10.0;  // suction attaches within this distance of a cube top

  Vec3 home{200.0, 0.0, 150.0};

  Vec3 shoulder() const { return {base_position.x, base_position.y, base_height}; }
};

}  // namespace twinloop::world
