#include "mots/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mots/errors.hpp"

namespace mots {

BoundingBox::BoundingBox(double x, double y, double w, double h)
    : x_(x), y_(y), w_(w), h_(h) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(w) ||
      !std::isfinite(h)) {
    throw InvalidBox("bounding box has non-finite coordinates");
  }
  if (w <= 0.0 || h <= 0.0) {
    throw InvalidBox("bounding box extent must be positive, got w=" +
                     std::to_string(w) + " h=" + std::to_string(h));
  }
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  // (x + w) - x need not round back to w, so equal boxes are special-cased.
  if (a == b) return 1.0;
  const double ix = std::min(a.x() + a.w(), b.x() + b.w()) - std::max(a.x(), b.x());
  const double iy = std::min(a.y() + a.h(), b.y() + b.h()) - std::max(a.y(), b.y());
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  // Guard rounding so the result stays in [0,1].
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace mots
