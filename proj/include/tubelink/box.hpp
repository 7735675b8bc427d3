#pragma once

#include <span>

namespace tubelink {

// Axis-aligned box in continuous pixel coordinates, corner form.
// Width and height must be strictly positive; inverted or degenerate
// boxes are rejected at construction so downstream code never has to
// re-check geometry.
class Box {
 public:
  Box(double x1, double y1, double x2, double y2);

  static Box from_center(double cx, double cy, double w, double h);

  double x1() const { return x1_; }
  double y1() const { return y1_; }
  double x2() const { return x2_; }
  double y2() const { return y2_; }

  double width() const { return x2_ - x1_; }
  double height() const { return y2_ - y1_; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (x1_ + x2_); }
  double center_y() const { return 0.5 * (y1_ + y2_); }

  Box translated(double dx, double dy) const;

  bool operator==(const Box&) const = default;

 private:
  double x1_, y1_, x2_, y2_;
};

double intersection_area(const Box& a, const Box& b);

// Intersection-over-union; exactly 0 for disjoint or touching boxes.
double iou(const Box& a, const Box& b);

// Smallest box containing every input box. Throws on an empty span.
Box bounding_box(std::span<const Box> boxes);

}  // namespace tubelink
