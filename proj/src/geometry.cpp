#include "immortal/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace immortal
{

namespace
{

// Points within this distance of a clipping edge count as inside it.
constexpr double kEdgeTolerance = 1e-9;

double cross(const Point2& o, const Point2& a, const Point2& b)
{
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

Point2 line_intersection(const Point2& p1, const Point2& p2, const Point2& a, const Point2& b)
{
  // Intersection of segment p1-p2 with the infinite line a-b.
  const double d1 = cross(a, b, p1);
  const double d2 = cross(a, b, p2);
  const double denom = d1 - d2;
  if (std::abs(denom) < 1e-300) {
    return p1;
  }
  const double t = d1 / denom;
  return {p1.x + t * (p2.x - p1.x), p1.y + t * (p2.y - p1.y)};
}

double overlap_1d(double a_min, double a_max, double b_min, double b_max)
{
  return std::max(0.0, std::min(a_max, b_max) - std::max(a_min, b_min));
}

Polygon to_polygon(const std::array<Point2, 4>& corners)
{
  return Polygon(corners.begin(), corners.end());
}

// Strict weak order on boxes so that pairwise kernels see a canonical
// argument order and symmetric metrics are bitwise symmetric.
bool box_less(const Box3D& a, const Box3D& b)
{
  return a.as_array() < b.as_array();
}

}  // namespace

double normalize_angle(double angle)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, two_pi);
  if (a <= -std::numbers::pi) {
    a += two_pi;
  } else if (a > std::numbers::pi) {
    a -= two_pi;
  }
  return a;
}

Box3D::Box3D(double x, double y, double z, double yaw, double l, double w, double h)
  : x_(x), y_(y), z_(z), yaw_(normalize_angle(yaw)), l_(l), w_(w), h_(h)
{
  for (double v : {x, y, z, yaw, l, w, h}) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("Box3D: non-finite field");
    }
  }
  if (!(l > 0.0 && w > 0.0 && h > 0.0)) {
    throw std::invalid_argument("Box3D: dimensions must be positive (l=" + std::to_string(l) +
                                ", w=" + std::to_string(w) + ", h=" + std::to_string(h) + ")");
  }
}

std::array<Point2, 4> bev_corners(const Box3D& b)
{
  const double c = std::cos(b.yaw());
  const double s = std::sin(b.yaw());
  const double hl = 0.5 * b.l();
  const double hw = 0.5 * b.w();
  // Local corners in CCW order: front-left, rear-left, rear-right, front-right.
  const std::array<Point2, 4> local = {{{hl, hw}, {-hl, hw}, {-hl, -hw}, {hl, -hw}}};
  std::array<Point2, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = {b.x() + c * local[i].x - s * local[i].y, b.y() + s * local[i].x + c * local[i].y};
  }
  return out;
}

double polygon_area(const Polygon& p)
{
  if (p.size() < 3) {
    return 0.0;
  }
  double twice = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Point2& a = p[i];
    const Point2& b = p[(i + 1) % p.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

double polygon_intersection_area(const Polygon& p, const Polygon& q)
{
  const double area_p = polygon_area(p);
  const double area_q = polygon_area(q);
  if (area_p <= 0.0 || area_q <= 0.0) {
    return 0.0;
  }

  // Sutherland-Hodgman: clip p successively by each edge of q.
  Polygon subject = p;
  for (std::size_t i = 0; i < q.size() && !subject.empty(); ++i) {
    const Point2& a = q[i];
    const Point2& b = q[(i + 1) % q.size()];
    const double edge_len = std::hypot(b.x - a.x, b.y - a.y);
    if (edge_len == 0.0) {
      continue;
    }
    auto inside = [&](const Point2& pt) { return cross(a, b, pt) / edge_len >= -kEdgeTolerance; };

    Polygon clipped;
    clipped.reserve(subject.size() + 2);
    for (std::size_t j = 0; j < subject.size(); ++j) {
      const Point2& cur = subject[j];
      const Point2& prev = subject[(j + subject.size() - 1) % subject.size()];
      const bool cur_in = inside(cur);
      const bool prev_in = inside(prev);
      if (cur_in) {
        if (!prev_in) {
          clipped.push_back(line_intersection(prev, cur, a, b));
        }
        clipped.push_back(cur);
      } else if (prev_in) {
        clipped.push_back(line_intersection(prev, cur, a, b));
      }
    }
    subject = std::move(clipped);
  }

  const double area = polygon_area(subject);
  return std::clamp(area, 0.0, std::min(area_p, area_q));
}

Polygon convex_hull(std::vector<Point2> points)
{
  std::sort(points.begin(), points.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }),
               points.end());
  if (points.size() < 3) {
    return points;
  }

  Polygon hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& pt : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pt) <= 0.0) {
      --k;
    }
    hull[k++] = pt;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) {
      --k;
    }
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

double intersection_volume(const Box3D& a, const Box3D& b)
{
  if (box_less(b, a)) {
    return intersection_volume(b, a);
  }
  const double dz = overlap_1d(a.z_min(), a.z_max(), b.z_min(), b.z_max());
  if (dz <= 0.0) {
    return 0.0;
  }
  // Footprints lie inside circles of radius half the diagonal.
  const double reach = 0.5 * (std::hypot(a.l(), a.w()) + std::hypot(b.l(), b.w()));
  if (std::hypot(a.x() - b.x(), a.y() - b.y()) > reach * (1.0 + 1e-9)) {
    return 0.0;
  }
  return polygon_intersection_area(to_polygon(bev_corners(a)), to_polygon(bev_corners(b))) * dz;
}

double iou3d(const Box3D& a, const Box3D& b)
{
  const double inter = intersection_volume(a, b);
  const double uni = a.volume() + b.volume() - inter;
  if (uni <= 0.0) {
    return 0.0;
  }
  return std::clamp(inter / uni, 0.0, 1.0);
}

double giou3d(const Box3D& a, const Box3D& b)
{
  const double inter = intersection_volume(a, b);
  const double uni = a.volume() + b.volume() - inter;

  const auto ca = bev_corners(a);
  const auto cb = bev_corners(b);
  std::vector<Point2> all(ca.begin(), ca.end());
  all.insert(all.end(), cb.begin(), cb.end());
  const double hull_area = polygon_area(convex_hull(std::move(all)));
  const double z_cover = std::max(a.z_max(), b.z_max()) - std::min(a.z_min(), b.z_min());
  // The hull contains both boxes, so C >= U up to rounding.
  const double enclosing = std::max(hull_area * z_cover, uni);

  const double iou = std::clamp(inter / uni, 0.0, 1.0);
  return iou - (enclosing - uni) / enclosing;
}

}  // namespace immortal
