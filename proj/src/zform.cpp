#include "poisson3/normal_form.hpp"

#include "poisson3/rational.hpp"

#include <array>
#include <utility>

namespace poisson3 {

ZFormFamily::ZFormFamily(Series byz_, Series bzx_)
    : byz(std::move(byz_)), bzx(std::move(bzx_)) {
  if (!(byz.trunc() == bzx.trunc()))
    throw DomainError("z-form components mix truncation orders");
}

PoissonFamily ZFormFamily::family() const {
  return PoissonFamily(Series::variable(trunc(), VAR_Z), byz, bzx);
}

namespace {

// Linear parts at eps = 0 of the three brackets, rows indexed like the
// 2-plane basis (dy^dz, dz^dx, dx^dy). Row m is the differential of the
// bracket attached to the m-th basis plane.
std::array<std::array<Rat, 3>, 3> jet_rows(const PoissonFamily& p) {
  std::array<const Series*, 3> comp = {&p.yz, &p.zx, &p.xy};
  std::array<std::array<Rat, 3>, 3> rows;
  for (int m = 0; m < 3; ++m)
    for (int k = 0; k < 3; ++k)
      rows[m][k] = comp[m]->partial(k).eval(Rat(0), Rat(0), Rat(0), Rat(0));
  return rows;
}

}  // namespace

std::pair<ZFormFamily, CoordinateChange> reduce_to_zform(
    const PoissonFamily& p) {
  Trunc t = p.trunc();
  for (const Series* s : {&p.xy, &p.yz, &p.zx})
    if (s->eval(Rat(0), Rat(0), Rat(0), Rat(0)) != 0)
      throw DomainError("origin is not a singular point at eps = 0");

  auto rows = jet_rows(p);

  // Candidate 2-planes xi, in coordinates over the basis above, each with a
  // decomposition xi = da ^ db for linear a, b. Every 2-plane in three
  // variables is decomposable, and a quadratic form vanishing on these six
  // points vanishes identically, so the list is exhaustive.
  Series x = Series::variable(t, VAR_X), y = Series::variable(t, VAR_Y),
         z = Series::variable(t, VAR_Z);
  struct Candidate {
    std::array<int, 3> xi;
    Series a, b;
  };
  const std::array<Candidate, 6> cands = {{{{0, 0, 1}, x, y},
                                           {{1, 0, 0}, y, z},
                                           {{0, 1, 0}, z, x},
                                           {{1, 1, 0}, y - x, z},
                                           {{1, 0, 1}, y, z - x},
                                           {{0, 1, 1}, x, y - z}}};

  // Q(xi) = T(xi) ^ xi with T(xi) the linear part of the bracket of any
  // decomposition of xi; nonzero iff that bracket completes (a, b) to a
  // coordinate system.
  auto q_value = [&](const std::array<int, 3>& xi) {
    Rat q = 0;
    for (int k = 0; k < 3; ++k) {
      Rat tk = 0;
      for (int m = 0; m < 3; ++m) tk += rat(xi[m]) * rows[m][k];
      q += tk * rat(xi[k]);
    }
    return q;
  };

  const Candidate* hit = nullptr;
  for (const auto& c : cands)
    if (q_value(c.xi) != 0) {
      hit = &c;
      break;
    }
  if (!hit) {
    bool jet_zero = true;
    for (int m = 0; m < 3 && jet_zero; ++m)
      for (int k = 0; k < 3; ++k)
        if (rows[m][k] != 0) {
          jet_zero = false;
          break;
        }
    if (jet_zero) throw DomainError("1-jet vanishes at the origin");
    throw DomainError("1-jet acts by a scalar on its derived plane");
  }

  Series c = poisson_bracket(p, hit->a, hit->b);
  CoordinateChange ch({hit->a, hit->b, c});
  PoissonFamily out = pushforward(p, ch);
  if (ch.moves_origin()) {
    // Offset transport is faithful on xyz + eps <= d; drop the junk beyond.
    out = PoissonFamily(out.xy.truncated_total(t.d),
                        out.yz.truncated_total(t.d),
                        out.zx.truncated_total(t.d));
  }
  if (!(out.xy == Series::variable(t, VAR_Z)))
    throw InternalError("third coordinate failed to become the xy bracket");
  return {ZFormFamily(out.yz, out.zx), ch};
}

}  // namespace poisson3
