// geometry.hpp: oriented 3D boxes and their overlap metrics (3D IoU / GIoU)

#pragma once

#include <array>
#include <vector>

namespace immortal
{

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

struct Point2
{
  double x = 0.0;
  double y = 0.0;
};

using Polygon = std::vector<Point2>;

/**
 * @brief Gravity-aligned 3D box: center (x, y, z), heading yaw and extents l, w, h.
 *
 * Construction validates the extents and wraps yaw into (-pi, pi], so every
 * Box3D value in the program is valid.
 */
class Box3D
{
public:
  Box3D() = default;
  Box3D(double x, double y, double z, double yaw, double l, double w, double h);

  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  double yaw() const { return yaw_; }
  double l() const { return l_; }
  double w() const { return w_; }
  double h() const { return h_; }

  double volume() const { return l_ * w_ * h_; }
  double z_min() const { return z_ - 0.5 * h_; }
  double z_max() const { return z_ + 0.5 * h_; }

  /// [x, y, z, yaw, l, w, h]
  std::array<double, 7> as_array() const { return {x_, y_, z_, yaw_, l_, w_, h_}; }

  bool operator==(const Box3D&) const = default;

private:
  double x_ = 0.0, y_ = 0.0, z_ = 0.0, yaw_ = 0.0;
  double l_ = 1.0, w_ = 1.0, h_ = 1.0;
};

/// Bird's-eye-view rectangle corners, counter-clockwise.
std::array<Point2, 4> bev_corners(const Box3D& b);

/// Signed shoelace area; positive for counter-clockwise polygons.
double polygon_area(const Polygon& p);

/// Area of the intersection of two convex counter-clockwise polygons.
/// Degenerate (zero-area) inputs yield 0.
double polygon_intersection_area(const Polygon& p, const Polygon& q);

/// Convex hull (Andrew's monotone chain), counter-clockwise, no repeated points.
Polygon convex_hull(std::vector<Point2> points);

double intersection_volume(const Box3D& a, const Box3D& b);

double iou3d(const Box3D& a, const Box3D& b);

/// 3D GIoU with the enclosing volume taken as the BEV convex hull of both
/// boxes times the smallest z-interval covering both.
double giou3d(const Box3D& a, const Box3D& b);

}  // namespace immortal
