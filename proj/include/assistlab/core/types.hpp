#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>

namespace assistlab {

// Positions, input deltas and influence vectors all live in canvas pixels.
template<typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

using Vec2d = Vec2<double>;
using Vec2f = Vec2<float>;

using TargetId = std::uint32_t;

// Axis-aligned target rectangle. (x, y) is the top-left corner; the covered
// area is the half-open box [x, x + width) x [y, y + height).
template<typename Scalar>
struct TargetRect {
  Scalar x{0};
  Scalar y{0};
  Scalar width{1};
  Scalar height{1};
  TargetId id{0};

  Vec2<Scalar> min() const { return {x, y}; }
  Vec2<Scalar> max() const { return {x + width, y + height}; }
  Vec2<Scalar> center() const { return {x + width / Scalar(2), y + height / Scalar(2)}; }

  bool valid() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(width) &&
           std::isfinite(height) && width > Scalar(0) && height > Scalar(0);
  }

  bool contains(const Vec2<Scalar>& p) const {
    return p.x() >= x && p.x() < x + width && p.y() >= y && p.y() < y + height;
  }

  // Same size, centered on c.
  TargetRect centered_at(const Vec2<Scalar>& c) const {
    TargetRect r = *this;
    r.x = c.x() - width / Scalar(2);
    r.y = c.y() - height / Scalar(2);
    return r;
  }

  bool operator==(const TargetRect&) const = default;
};

using TargetRectd = TargetRect<double>;

template<typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
  return v.allFinite();
}

}  // namespace assistlab
