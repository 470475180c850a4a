#include "poisson3/normal_form.hpp"

#include "poisson3/rational.hpp"

#include <array>
#include <utility>

namespace poisson3 {

std::optional<std::pair<Rat, Rat>> EigenPair::rational_pair() const {
  Rat disc = discriminant();
  if (!rat_is_square(disc)) return std::nullopt;
  Rat s = rat_sqrt(disc);
  Rat l1 = (trace + s) / 2, l2 = (trace - s) / 2;
  if (l1 < l2) std::swap(l1, l2);
  return std::make_pair(l1, l2);
}

namespace {

// Constant linear change sending the curl direction w0 at the origin to
// d/dy with unit size; the other two image slots complete a basis.
CoordinateChange align_to_y(Trunc t, const std::array<Rat, 3>& w0) {
  Series x = Series::variable(t, VAR_X), y = Series::variable(t, VAR_Y),
         z = Series::variable(t, VAR_Z);
  if (w0[1] != 0)
    return CoordinateChange({x - (w0[0] / w0[1]) * y, (Rat(1) / w0[1]) * y,
                             z - (w0[2] / w0[1]) * y});
  if (w0[0] != 0)
    return CoordinateChange(
        {y, (Rat(1) / w0[0]) * x, z - (w0[2] / w0[0]) * x});
  return CoordinateChange({y, (Rat(1) / w0[2]) * z, x});
}

}  // namespace

std::pair<PlanarFamily, CoordinateChange> v_reduce(const PoissonFamily& p) {
  Trunc t = p.trunc();
  for (const Series* s : {&p.xy, &p.yz, &p.zx})
    if (s->eval(Rat(0), Rat(0), Rat(0), Rat(0)) != 0)
      throw DomainError("origin is not a singular point at eps = 0");

  DifferentialObject cx = curl(p);
  std::array<Rat, 3> w0;
  for (int k = 0; k < 3; ++k)
    w0[k] = cx.comp[k].eval(Rat(0), Rat(0), Rat(0), Rat(0));
  if (w0[0] == 0 && w0[1] == 0 && w0[2] == 0)
    throw DomainError("not a V singularity");

  CoordinateChange lin = align_to_y(t, w0);
  PoissonFamily p1 = pushforward(p, lin);

  // Transport the curl as a vector field through the constant change; it
  // becomes d/dy plus terms vanishing at the origin at eps = 0.
  auto L = lin.linear_part0();
  CoordinateChange lin_inv = lin.inverse();
  std::array<Series, 3> X{Series::zero(t), Series::zero(t), Series::zero(t)};
  for (int a = 0; a < 3; ++a) {
    SeriesBuilder acc(t);
    for (int v = 0; v < 3; ++v)
      if (L[a][v] != 0) acc.add(L[a][v] * cx.comp[v]);
    X[a] = acc.take().substitute(lin_inv.images());
  }

  auto derive = [&](const Series& f) {
    SeriesBuilder acc(t);
    for (int v = 0; v < 3; ++v) acc.add(X[v] * f.partial(v));
    return acc.take();
  };

  // First integrals and the time function of X, degree by degree: each
  // correction -int_y(defect) raises the defect order until only terms
  // with no primitive inside the box remain.
  Series one = Series::constant(t, rat(1));
  auto straighten = [&](Series sol, bool unit) {
    int guard = 2 * (t.d + t.e) + 6;
    while (true) {
      Series r = derive(sol);
      if (unit) r -= one;
      if (r.is_zero()) break;
      Series c = -r.integrate(VAR_Y);
      if (c.is_zero()) break;
      sol += c;
      if (--guard < 0)
        throw InternalError("curl rectification failed to terminate");
    }
    return sol;
  };
  Series u = straighten(Series::variable(t, VAR_X), false);
  Series v = straighten(Series::variable(t, VAR_Y), true);
  Series w = straighten(Series::variable(t, VAR_Z), false);

  CoordinateChange rect({u, v, w});
  PoissonFamily p2 = pushforward(p1, rect);
  if (singular_origin_drifts(p)) {
    // Drifting data is faithful on xyz + eps <= d; drop the junk beyond.
    p2 = PoissonFamily(p2.xy.truncated_total(t.d), p2.yz.truncated_total(t.d),
                       p2.zx.truncated_total(t.d));
  }
  if (!p2.zx.is_zero())
    throw InternalError("rectified family kept a zx component");
  if (p2.xy.depends_on(VAR_Y) || p2.yz.depends_on(VAR_Y))
    throw InternalError("rectified family still depends on y");

  PlanarFamily out{-p2.xy, p2.yz, EigenPair{}};
  Rat axx = out.alpha.partial(VAR_X).eval(Rat(0), Rat(0), Rat(0), Rat(0));
  Rat axz = out.alpha.partial(VAR_Z).eval(Rat(0), Rat(0), Rat(0), Rat(0));
  Rat bxx = out.beta.partial(VAR_X).eval(Rat(0), Rat(0), Rat(0), Rat(0));
  Rat bxz = out.beta.partial(VAR_Z).eval(Rat(0), Rat(0), Rat(0), Rat(0));
  out.eigen = EigenPair{axx + bxz, axx * bxz - axz * bxx};
  if (out.eigen.trace == 0)
    throw InternalError("planar linearization lost its trace");
  return {std::move(out), lin.then(rect)};
}

}  // namespace poisson3
