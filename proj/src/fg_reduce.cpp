#include "poisson3/normal_form.hpp"

#include "poisson3/rational.hpp"

#include <utility>

namespace poisson3 {

CoordinateChange NormalFormData::composed() const {
  CoordinateChange acc = CoordinateChange::identity(f.trunc());
  for (const CoordinateChange& ch : change_log) acc = acc.then(ch);
  return acc;
}

PoissonFamily NormalFormData::family() const {
  Series z = Series::variable(f.trunc(), VAR_Z);
  return PoissonFamily(z, f.partial(VAR_X) + z * g.partial(VAR_X),
                       f.partial(VAR_Y) + z * g.partial(VAR_Y));
}

namespace {

Series without_x(const Series& s) {
  Trunc t = s.trunc();
  return s.substitute({Series::zero(t), Series::variable(t, VAR_Y),
                       Series::variable(t, VAR_Z)});
}

PoissonFamily scrub(const PoissonFamily& p) {
  int d = p.trunc().d;
  return PoissonFamily(p.xy.truncated_total(d), p.yz.truncated_total(d),
                       p.zx.truncated_total(d));
}

// One stage of the affine reduction. With both brackets affine in z below
// (x,y)-degree q, a z stretch absorbs the z^2 part at degree q, then x
// shifts and z shears restore {x,y} = z exactly. In region mode every
// transport is cut back to xyz + eps <= d, the faithful set for changes
// that move the origin along eps.
std::pair<ZFormFamily, CoordinateChange> stage(const ZFormFamily& zf, int q,
                                               bool region) {
  Trunc t = zf.trunc();
  const int d = t.d;
  if (q < 0 || q > d)
    throw DomainError("stage index outside the truncation box");
  for (int j = 0; j < q; ++j)
    if (!zf.byz.xy_part(j).z_part_ge(2).is_zero() ||
        !zf.bzx.xy_part(j).z_part_ge(2).is_zero())
      throw DomainError("brackets are not affine in z below the stage");

  Series x = Series::variable(t, VAR_X), y = Series::variable(t, VAR_Y),
         z = Series::variable(t, VAR_Z);
  CoordinateChange total = CoordinateChange::identity(t);

  Series alpha2 = zf.byz.xy_part(q).z_part_ge(2).z_shift_down(2);
  Series beta2 = zf.bzx.xy_part(q).z_part_ge(2).z_shift_down(2);
  if (alpha2.is_zero() && beta2.is_zero()) return {zf, total};

  // d alpha2/dy = d beta2/dx is forced by the Jacobi identity; it makes
  // the two partial potentials below agree.
  Series closing = alpha2.partial(VAR_Y) - beta2.partial(VAR_X);
  if (region ? !closing.truncated_total(d - 2).is_zero() : !closing.is_zero())
    throw DomainError("family fails the Jacobi identity at this stage");

  Series e = alpha2.integrate(VAR_X) + without_x(beta2).integrate(VAR_Y);
  CoordinateChange stretch({x, y, z + z * e});
  PoissonFamily cur = pushforward(zf.family(), stretch);
  if (region) cur = scrub(cur);
  total = total.then(stretch);

  // The stretch leaves {x,y} = z + z c with c of (x,y)-degree >= q+1.
  // Alternating x shifts (killing the z-divisible deviation) and z shears
  // (killing the z-free remainder it creates) push the deviation out of
  // the box; each full pass raises its lowest (x,y)-degree.
  int guard = 4 * (d + 3);
  while (true) {
    Series dev = cur.xy - z;
    if (dev.is_zero()) break;
    if (--guard < 0)
      throw InternalError("affine stage cleanup failed to terminate");
    Series gamma = dev.z_part_ge(1).z_shift_down(1);
    CoordinateChange fix =
        !gamma.is_zero()
            ? CoordinateChange({x - gamma.integrate(VAR_X), y, z})
            : CoordinateChange({x, y, z + (dev - dev.z_part_ge(1))});
    cur = pushforward(cur, fix);
    if (region) cur = scrub(cur);
    total = total.then(fix);
  }

  for (int j = 0; j < q; ++j)
    if (!(cur.yz.xy_part(j) == zf.byz.xy_part(j)) ||
        !(cur.zx.xy_part(j) == zf.bzx.xy_part(j)))
      throw InternalError("affine stage disturbed a settled degree");
  if (!cur.yz.xy_part(q).z_part_ge(2).is_zero() ||
      !cur.zx.xy_part(q).z_part_ge(2).is_zero())
    throw InternalError("affine stage left a z^2 term at its own degree");
  return {ZFormFamily(cur.yz, cur.zx), total};
}

}  // namespace

std::pair<ZFormFamily, CoordinateChange> zaffine_step(const ZFormFamily& zf,
                                                      int q) {
  return stage(zf, q, /*region=*/false);
}

NormalFormData reduce_to_fg(const PoissonFamily& p, int degree) {
  if (degree < 1) throw DomainError("reduction degree must be positive");
  Trunc t{degree, p.trunc().e};
  PoissonFamily work = p;
  if (!(t == p.trunc()))
    work = PoissonFamily(p.xy.refit(t), p.yz.refit(t), p.zx.refit(t));
  require_jacobi(work);

  auto [zf, ch0] = reduce_to_zform(work);
  bool region = ch0.moves_origin() || singular_origin_drifts(work);
  std::vector<CoordinateChange> log{ch0};
  for (int q = 0; q <= degree; ++q) {
    auto [nxt, ch] = stage(zf, q, region);
    if (!(ch == CoordinateChange::identity(t))) log.push_back(ch);
    zf = std::move(nxt);
  }
  if (!zf.byz.z_part_ge(2).is_zero() || !zf.bzx.z_part_ge(2).is_zero())
    throw InternalError("stages left a z^2 term");

  Series a0 = zf.byz.z_coeff(0), a1 = zf.byz.z_coeff(1);
  Series b0 = zf.bzx.z_coeff(0), b1 = zf.bzx.z_coeff(1);

  // Jacobi in the affine frame: the two rows are proportional and each of
  // (a0, b0), (a1, b1) is a gradient.
  auto flat = [&](Series s) {
    return region ? s.truncated_total(degree - 1) : s;
  };
  if (!flat(a0 * b1 - a1 * b0).is_zero() ||
      !flat(a0.partial(VAR_Y) - b0.partial(VAR_X)).is_zero() ||
      !flat(a1.partial(VAR_Y) - b1.partial(VAR_X)).is_zero())
    throw DomainError("reduced family fails the Jacobi identity");

  Series f = a0.integrate(VAR_X) + without_x(b0).integrate(VAR_Y);
  Series g = a1.integrate(VAR_X) + without_x(b1).integrate(VAR_Y);
  return NormalFormData{std::move(f), std::move(g), std::move(log)};
}

DifferentialObject dependence_residual(const NormalFormData& nf) {
  Trunc t = nf.f.trunc();
  Series w = nf.f.partial(VAR_X) * nf.g.partial(VAR_Y) -
             nf.f.partial(VAR_Y) * nf.g.partial(VAR_X);
  Series zero = Series::zero(t);
  return DifferentialObject::two_form(zero, zero, w.truncated_total(t.d - 1));
}

}  // namespace poisson3
