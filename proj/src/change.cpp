#include "poisson3/change.hpp"

namespace poisson3 {

namespace {

Rat det3(const std::array<std::array<Rat, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

CoordinateChange::CoordinateChange(std::array<Series, 3> images)
    : img_(std::move(images)) {
  Trunc t = img_[0].trunc();
  for (const Series& s : img_) {
    if (!(s.trunc() == t)) throw DomainError("mixed truncations in change");
    if (s.coeff({0, 0, 0, 0}) != 0)
      throw DomainError("coordinate change moves the origin at eps = 0");
  }
  auto L = linear_part0();
  if (det3(L) == 0)
    throw DomainError("coordinate change has singular linear part");
}

CoordinateChange CoordinateChange::identity(Trunc t) {
  return CoordinateChange({Series::variable(t, VAR_X),
                           Series::variable(t, VAR_Y),
                           Series::variable(t, VAR_Z)});
}

bool CoordinateChange::moves_origin() const {
  for (const Series& s : img_)
    if (!s.eps_part().is_zero()) return true;
  return false;
}

CoordinateChange CoordinateChange::then(const CoordinateChange& next) const {
  return CoordinateChange({next.img_[0].substitute(img_),
                           next.img_[1].substitute(img_),
                           next.img_[2].substitute(img_)});
}

std::array<std::array<Rat, 3>, 3> CoordinateChange::linear_part0() const {
  std::array<std::array<Rat, 3>, 3> L;
  for (int a = 0; a < 3; ++a)
    for (int v = 0; v < 3; ++v) {
      Mono m{0, 0, 0, 0};
      m[v] = 1;
      L[a][v] = img_[a].coeff(m);
    }
  return L;
}

CoordinateChange CoordinateChange::inverse() const {
  Trunc t = trunc();

  // Split each image into eps-only offset, linear-in-(x,y,z) part with
  // eps-dependent coefficients, and the nonlinear rest.
  std::array<Series, 3> offset{Series(t), Series(t), Series(t)};
  std::array<Series, 3> rest{Series(t), Series(t), Series(t)};
  // L[a][v]: eps-series coefficient of x_v in image a
  std::array<std::array<Series, 3>, 3> L{
      {{Series(t), Series(t), Series(t)},
       {Series(t), Series(t), Series(t)},
       {Series(t), Series(t), Series(t)}}};
  for (int a = 0; a < 3; ++a) {
    offset[a] = img_[a].eps_part();
    Series lin(t);
    for (int v = 0; v < 3; ++v) {
      // coefficient of x_v among xyz-degree-1 terms, kept as an eps-series
      SeriesBuilder sb(t);
      for (const auto& [idx, c] : img_[a].terms()) {
        Mono m = img_[a].ctx().mono(idx);
        Mono unit{0, 0, 0, 0};
        unit[v] = 1;
        if (m[0] == unit[0] && m[1] == unit[1] && m[2] == unit[2])
          sb.add({0, 0, 0, m[3]}, c);
      }
      L[a][v] = sb.take();
      lin += Series::mul(L[a][v], Series::variable(t, v), -1);
    }
    rest[a] = img_[a] - offset[a] - lin;
  }

  // Invert L over the eps-ring via the adjugate.
  Series det = L[0][0] * (L[1][1] * L[2][2] - L[1][2] * L[2][1]) -
               L[0][1] * (L[1][0] * L[2][2] - L[1][2] * L[2][0]) +
               L[0][2] * (L[1][0] * L[2][1] - L[1][1] * L[2][0]);
  Series detinv = det.reciprocal();
  std::array<std::array<Series, 3>, 3> Linv{
      {{Series(t), Series(t), Series(t)},
       {Series(t), Series(t), Series(t)},
       {Series(t), Series(t), Series(t)}}};
  auto cof = [&](int r, int c) {
    int r1 = (r + 1) % 3, r2 = (r + 2) % 3, c1 = (c + 1) % 3, c2 = (c + 2) % 3;
    return L[r1][c1] * L[r2][c2] - L[r1][c2] * L[r2][c1];
  };
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) Linv[a][b] = cof(b, a) * detinv;

  auto linv_apply = [&](const std::array<Series, 3>& v) {
    std::array<Series, 3> out{Series(t), Series(t), Series(t)};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) out[a] += Linv[a][b] * v[b];
    return out;
  };

  // Fixed point psi <- Linv (u - offset - rest(psi)); gains one order of the
  // combined (x,y,z,eps) filtration per pass.
  std::array<Series, 3> base{Series::variable(t, VAR_X) - offset[0],
                             Series::variable(t, VAR_Y) - offset[1],
                             Series::variable(t, VAR_Z) - offset[2]};
  std::array<Series, 3> psi = linv_apply(base);
  int passes = t.d + t.e + 1;
  for (int it = 0; it < passes; ++it) {
    std::array<Series, 3> v{base[0] - rest[0].substitute(psi),
                            base[1] - rest[1].substitute(psi),
                            base[2] - rest[2].substitute(psi)};
    std::array<Series, 3> next = linv_apply(v);
    if (next == psi) break;
    psi = std::move(next);
  }

  CoordinateChange inv(psi);
  // One-sided verification; for formal maps with invertible linear part this
  // implies the two-sided inverse. Origin-moving changes are only checked on
  // their exactness region xyz + eps <= d.
  bool offset_change = moves_origin();
  for (int a = 0; a < 3; ++a) {
    Series defect = img_[a].substitute(psi) - Series::variable(t, a);
    if (offset_change) defect = defect.truncated_total(t.d);
    if (!defect.is_zero())
      throw InternalError("coordinate change inversion failed to verify");
  }
  return inv;
}

}  // namespace poisson3
