#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mots {

// Axis-aligned box, top-left corner plus extent, in pixels.
// Construction rejects non-finite values and non-positive extents.
class BoundingBox {
 public:
  BoundingBox() = default;
  BoundingBox(double x, double y, double w, double h);

  static BoundingBox from_center(double cx, double cy, double w, double h) {
    return BoundingBox(cx - w / 2.0, cy - h / 2.0, w, h);
  }

  double x() const { return x_; }
  double y() const { return y_; }
  double w() const { return w_; }
  double h() const { return h_; }
  double area() const { return w_ * h_; }
  double center_x() const { return x_ + w_ / 2.0; }
  double center_y() const { return y_ + h_ / 2.0; }

  bool operator==(const BoundingBox&) const = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
  double w_ = 1.0;
  double h_ = 1.0;
};

double iou(const BoundingBox& a, const BoundingBox& b);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct ImageSize {
  double width = 0.0;
  double height = 0.0;
};

// Dense row-major matrix of doubles. Zero-sized dimensions are allowed,
// so a 0xN matrix still reports N columns.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace mots
