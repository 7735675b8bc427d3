#include "tubelink/box.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tubelink {

Box::Box(double x1, double y1, double x2, double y2)
    : x1_(x1), y1_(y1), x2_(x2), y2_(y2) {
  if (!(std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
        std::isfinite(y2))) {
    throw std::invalid_argument("box coordinates must be finite");
  }
  if (!(x2 > x1 && y2 > y1)) {
    throw std::invalid_argument("box must have positive width and height");
  }
}

Box Box::from_center(double cx, double cy, double w, double h) {
  return Box(cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h);
}

Box Box::translated(double dx, double dy) const {
  return Box(x1_ + dx, y1_ + dy, x2_ + dx, y2_ + dy);
}

double intersection_area(const Box& a, const Box& b) {
  const double w = std::min(a.x2(), b.x2()) - std::max(a.x1(), b.x1());
  const double h = std::min(a.y2(), b.y2()) - std::max(a.y1(), b.y1());
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

double iou(const Box& a, const Box& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  return inter / (a.area() + b.area() - inter);
}

Box bounding_box(std::span<const Box> boxes) {
  if (boxes.empty()) {
    throw std::invalid_argument("bounding_box requires at least one box");
  }
  double x1 = boxes[0].x1(), y1 = boxes[0].y1();
  double x2 = boxes[0].x2(), y2 = boxes[0].y2();
  for (const Box& b : boxes.subspan(1)) {
    x1 = std::min(x1, b.x1());
    y1 = std::min(y1, b.y1());
    x2 = std::max(x2, b.x2());
    y2 = std::max(y2, b.y2());
  }
  return Box(x1, y1, x2, y2);
}

}  // namespace tubelink
