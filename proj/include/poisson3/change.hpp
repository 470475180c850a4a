#pragma once

// Formal coordinate changes of R^3 depending on the parameter eps.
//
// A change stores the new coordinates as series in the old ones. The origin
// may move with eps (images may contain pure-eps terms) but must be fixed at
// eps = 0, and the linear part at the origin, eps = 0, must be invertible.
//
// Exactness contract. Changes whose images have no pure-eps terms respect
// the truncation box exactly: compositions, inverses and pullbacks agree
// with the untruncated computation on every stored coefficient. Changes that
// move the origin with eps are faithful only on the region
// xyz-degree + eps-degree <= d; coefficients beyond that region are not
// meaningful and consumers must restrict to it.

#include "poisson3/series.hpp"

#include <array>

namespace poisson3 {

class CoordinateChange {
 public:
  // Validates: no constant terms at eps = 0, invertible linear part.
  explicit CoordinateChange(std::array<Series, 3> images);

  static CoordinateChange identity(Trunc t);

  Trunc trunc() const { return img_[0].trunc(); }
  const Series& image(int a) const { return img_[a]; }
  const std::array<Series, 3>& images() const { return img_; }

  // Some image contains a pure-eps term, so the origin moves with eps.
  bool moves_origin() const;

  // Composite change: apply *this first, then next.
  CoordinateChange then(const CoordinateChange& next) const;

  // Formal inverse within the truncation box.
  CoordinateChange inverse() const;

  // Pullback of a scalar: s composed with this change.
  Series apply(const Series& s) const { return s.substitute(img_); }

  // Linear part at the origin, eps = 0 (row a = d image[a]).
  std::array<std::array<Rat, 3>, 3> linear_part0() const;

  bool operator==(const CoordinateChange& o) const { return img_ == o.img_; }

 private:
  std::array<Series, 3> img_;
};

}  // namespace poisson3
