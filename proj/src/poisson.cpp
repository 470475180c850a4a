#include "poisson3/poisson.hpp"

#include "poisson3/rational.hpp"

#include <array>
#include <vector>

namespace poisson3 {

PoissonFamily::PoissonFamily(Series xy_, Series yz_, Series zx_)
    : xy(std::move(xy_)), yz(std::move(yz_)), zx(std::move(zx_)) {
  if (!(xy.trunc() == yz.trunc()) || !(xy.trunc() == zx.trunc()))
    throw DomainError("family components mix truncation orders");
}

Series jacobi_residual(const PoissonFamily& p) {
  DifferentialObject w = to_pfaffian(p);
  return wedge(w, exterior_derivative(w)).comp[0];
}

bool jacobi_holds(const PoissonFamily& p) {
  // Drifting families are faithful only on xyz + eps <= d, so the residual
  // is checked on the matching window.
  const Series r = jacobi_residual(p);
  if (singular_origin_drifts(p))
    return r.truncated_total(p.trunc().d - 1).is_zero();
  return r.is_zero_through_degree(p.trunc().d - 1);
}

void require_jacobi(const PoissonFamily& p) {
  if (!jacobi_holds(p))
    throw DomainError("family fails the Jacobi identity through degree d-1");
}

bool singular_origin_drifts(const PoissonFamily& p) {
  for (const Series* s : {&p.xy, &p.yz, &p.zx})
    for (int l = 1; l <= p.trunc().e; ++l)
      if (s->coeff(Mono{0, 0, 0, l}) != 0) return true;
  return false;
}

DifferentialObject curl(const PoissonFamily& p) {
  return sharp(exterior_derivative(flat(
      DifferentialObject::bivector(p.yz, p.zx, p.xy))));
}

Series poisson_bracket(const PoissonFamily& p, const Series& f,
                       const Series& g) {
  SeriesBuilder acc(p.trunc());
  acc.add(p.xy * (f.partial(VAR_X) * g.partial(VAR_Y) -
                  f.partial(VAR_Y) * g.partial(VAR_X)));
  acc.add(p.yz * (f.partial(VAR_Y) * g.partial(VAR_Z) -
                  f.partial(VAR_Z) * g.partial(VAR_Y)));
  acc.add(p.zx * (f.partial(VAR_Z) * g.partial(VAR_X) -
                  f.partial(VAR_X) * g.partial(VAR_Z)));
  return acc.take();
}

namespace {

// Antisymmetric component matrix: m[0][1] = {x,y}, m[1][2] = {y,z},
// m[2][0] = {z,x}.
std::array<std::array<Series, 3>, 3> component_matrix(const PoissonFamily& p) {
  Series z = Series::zero(p.trunc());
  std::array<std::array<Series, 3>, 3> m{{{z, p.xy, -p.zx},
                                          {-p.xy, z, p.yz},
                                          {p.zx, -p.yz, z}}};
  return m;
}

}  // namespace

PoissonFamily pushforward(const PoissonFamily& p, const CoordinateChange& ch) {
  auto m = component_matrix(p);
  auto jrow = [&](int a) {
    return std::array<Series, 3>{ch.image(a).partial(0),
                                 ch.image(a).partial(1),
                                 ch.image(a).partial(2)};
  };
  std::array<std::array<Series, 3>, 3> jac{jrow(0), jrow(1), jrow(2)};

  CoordinateChange inv = ch.inverse();
  std::array<Series, 3> back = {inv.image(0), inv.image(1), inv.image(2)};

  // W^{ab} = sum_{i<j} P^{ij} (J^a_i J^b_j - J^a_j J^b_i), then compose
  // with the inverse to express everything in the new coordinates.
  auto transported = [&](int a, int b) {
    SeriesBuilder acc(p.trunc());
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        if (m[i][j].is_zero()) continue;
        acc.add(m[i][j] * (jac[a][i] * jac[b][j] - jac[a][j] * jac[b][i]));
      }
    return acc.take().substitute(back);
  };

  return PoissonFamily(transported(0, 1), transported(1, 2),
                       transported(2, 0));
}

DifferentialObject lie_symmetry_residual(const DifferentialObject& x,
                                         const PoissonFamily& p) {
  if (x.kind != DiffKind::VectorField)
    throw DomainError("symmetry candidate must be a vector field");
  auto m = component_matrix(p);
  auto entry = [&](int a, int b) {
    SeriesBuilder acc(p.trunc());
    for (int l = 0; l < 3; ++l) {
      acc.add(x.comp[l] * m[a][b].partial(l));
      acc.add(-(m[l][b] * x.comp[a].partial(l)));
      acc.add(-(m[a][l] * x.comp[b].partial(l)));
    }
    return acc.take();
  };
  return DifferentialObject::bivector(entry(1, 2), entry(2, 0), entry(0, 1));
}

namespace {

Rat det3(const std::array<std::array<Rat, 3>, 3>& k) {
  return k[0][0] * (k[1][1] * k[2][2] - k[1][2] * k[2][1]) -
         k[0][1] * (k[1][0] * k[2][2] - k[1][2] * k[2][0]) +
         k[0][2] * (k[1][0] * k[2][1] - k[1][1] * k[2][0]);
}

// Row-reduce a list of rational 3-vectors; returns an independent subset.
std::vector<std::array<Rat, 3>> independent_span(
    std::vector<std::array<Rat, 3>> rows) {
  std::vector<std::array<Rat, 3>> basis;
  for (auto v : rows) {
    for (const auto& b : basis) {
      int piv = 0;
      while (piv < 3 && b[piv] == 0) ++piv;
      if (piv < 3 && v[piv] != 0) {
        Rat f = v[piv] / b[piv];
        for (int k = 0; k < 3; ++k) v[k] -= f * b[k];
      }
    }
    if (v[0] != 0 || v[1] != 0 || v[2] != 0) basis.push_back(v);
  }
  return basis;
}

bool in_span(const std::vector<std::array<Rat, 3>>& basis,
             std::array<Rat, 3> v) {
  auto ext = basis;
  ext.push_back(v);
  return independent_span(ext).size() == basis.size();
}

}  // namespace

LieAlgebra1Jet lie_1jet(const PoissonFamily& p, const std::array<Rat, 3>& pt) {
  const Series* comp[3][3] = {{nullptr, &p.xy, nullptr},
                              {nullptr, nullptr, &p.yz},
                              {&p.zx, nullptr, nullptr}};
  for (const Series* s : {&p.xy, &p.yz, &p.zx})
    if (s->eval(pt[0], pt[1], pt[2], Rat(0)) != 0)
      throw DomainError("linearization point is not a singular point");

  LieAlgebra1Jet out;
  out.jacobi_defect = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Series* s = comp[i][j] ? comp[i][j] : comp[j][i];
      if (!s) continue;
      int sign = comp[i][j] ? 1 : -1;
      for (int k = 0; k < 3; ++k) {
        Rat v = s->partial(k).eval(pt[0], pt[1], pt[2], Rat(0));
        out.c[i][j][k] = sign > 0 ? v : -v;
      }
    }

  // Jacobi witness: cyclic sums over the only ordered triple.
  for (int l = 0; l < 3; ++l) {
    Rat s = 0;
    for (int m = 0; m < 3; ++m)
      s += out.c[0][1][m] * out.c[m][2][l] + out.c[1][2][m] * out.c[m][0][l] +
           out.c[2][0][m] * out.c[m][1][l];
    out.jacobi_defect += abs(s);
  }

  // Killing form from the adjoint matrices ad_i[m][k] = c[i][k][m].
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Rat t = 0;
      for (int m = 0; m < 3; ++m)
        for (int k = 0; k < 3; ++k) t += out.c[i][k][m] * out.c[j][m][k];
      out.killing[i][j] = t;
    }

  bool all_zero = true;
  for (int i = 0; i < 3 && all_zero; ++i)
    for (int j = 0; j < 3 && all_zero; ++j)
      for (int k = 0; k < 3; ++k)
        if (out.c[i][j][k] != 0) {
          all_zero = false;
          break;
        }
  if (all_zero) {
    out.zero = true;
    return out;
  }

  Rat dk = det3(out.killing);
  if (dk != 0) {
    out.semisimple = true;
    Rat d1 = out.killing[0][0];
    Rat d2 = out.killing[0][0] * out.killing[1][1] -
             out.killing[0][1] * out.killing[1][0];
    out.killing_negdef = (d1 < 0 && d2 > 0 && dk < 0);
    return out;
  }

  // Solvable branch: find a 2-dimensional abelian ideal.
  std::vector<std::array<Rat, 3>> gens = {
      {out.c[0][1][0], out.c[0][1][1], out.c[0][1][2]},
      {out.c[1][2][0], out.c[1][2][1], out.c[1][2][2]},
      {out.c[2][0][0], out.c[2][0][1], out.c[2][0][2]}};
  auto derived = independent_span(gens);
  if (derived.size() >= 3)
    throw InternalError("degenerate Killing form with full derived algebra");

  auto bracket = [&](const std::array<Rat, 3>& u,
                     const std::array<Rat, 3>& v) {
    std::array<Rat, 3> r{Rat(0), Rat(0), Rat(0)};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) r[l] += u[i] * v[j] * out.c[i][j][l];
    return r;
  };
  auto is_zero3 = [](const std::array<Rat, 3>& v) {
    return v[0] == 0 && v[1] == 0 && v[2] == 0;
  };

  std::array<std::array<Rat, 3>, 2> ideal;
  if (derived.size() == 2) {
    ideal = {derived[0], derived[1]};
  } else {
    // Derived algebra is a line span(w); each ad acts on it by a scalar.
    std::array<Rat, 3> w = derived[0];
    int piv = 0;
    while (w[piv] == 0) ++piv;
    std::array<Rat, 3> lam{Rat(0), Rat(0), Rat(0)};
    for (int i = 0; i < 3; ++i) {
      std::array<Rat, 3> ei{Rat(0), Rat(0), Rat(0)};
      ei[i] = 1;
      auto bw = bracket(ei, w);
      Rat l = bw[piv] / w[piv];
      for (int k = 0; k < 3; ++k)
        if (bw[k] != l * w[k])
          throw DomainError(
              "linearization does not satisfy the Jacobi identity");
      lam[i] = l;
    }
    if (is_zero3(lam)) {
      // Any plane through the line works; complete w by a basis vector.
      std::array<Rat, 3> v{Rat(0), Rat(0), Rat(0)};
      for (int k = 0; k < 3; ++k) {
        v = {Rat(0), Rat(0), Rat(0)};
        v[k] = 1;
        if (!in_span({w}, v)) break;
      }
      ideal = {w, v};
    } else {
      // Kernel of the scalar action: two independent solutions of lam.v = 0.
      std::vector<std::array<Rat, 3>> sol;
      int lp = 0;
      while (lam[lp] == 0) ++lp;
      for (int k = 0; k < 3; ++k) {
        if (k == lp) continue;
        std::array<Rat, 3> v{Rat(0), Rat(0), Rat(0)};
        v[k] = 1;
        v[lp] = -lam[k] / lam[lp];
        sol.push_back(v);
      }
      ideal = {sol[0], sol[1]};
    }
  }

  std::vector<std::array<Rat, 3>> ib = {ideal[0], ideal[1]};
  std::array<Rat, 3> f3{Rat(0), Rat(0), Rat(0)};
  for (int k = 0; k < 3; ++k) {
    f3 = {Rat(0), Rat(0), Rat(0)};
    f3[k] = 1;
    if (!in_span(ib, f3)) break;
  }

  if (!is_zero3(bracket(ideal[0], ideal[1])))
    throw DomainError("linearization does not satisfy the Jacobi identity");

  // Coordinates of [f_i, f3] in the (f_1, f_2) basis: solve
  // c0*ideal[0] + c1*ideal[1] = v exactly, rejecting anything outside.
  auto in_ideal_coords = [&](const std::array<Rat, 3>& v) {
    const auto& a0 = ideal[0];
    int p1 = 0;
    while (p1 < 3 && a0[p1] == 0) ++p1;
    std::array<Rat, 3> b1 = ideal[1];
    Rat f10 = b1[p1] / a0[p1];
    for (int k = 0; k < 3; ++k) b1[k] -= f10 * a0[k];
    int p2 = 0;
    while (p2 < 3 && b1[p2] == 0) ++p2;
    if (p2 >= 3) throw InternalError("dependent ideal basis");
    std::array<Rat, 3> rv = v;
    Rat g0 = rv[p1] / a0[p1];
    for (int k = 0; k < 3; ++k) rv[k] -= g0 * a0[k];
    Rat c1 = rv[p2] / b1[p2];
    for (int k = 0; k < 3; ++k) rv[k] -= c1 * b1[k];
    Rat c0 = g0 - c1 * f10;
    for (int k = 0; k < 3; ++k)
      if (rv[k] != 0)
        throw DomainError(
            "linearization does not satisfy the Jacobi identity");
    return std::array<Rat, 2>{c0, c1};
  };

  std::array<std::array<Rat, 2>, 2> B;
  for (int i = 0; i < 2; ++i) B[i] = in_ideal_coords(bracket(ideal[i], f3));
  out.B = B;
  out.trace_B = B[0][0] + B[1][1];
  out.det_B = B[0][0] * B[1][1] - B[0][1] * B[1][0];
  bool b_zero =
      B[0][0] == 0 && B[0][1] == 0 && B[1][0] == 0 && B[1][1] == 0;
  if (b_zero) throw InternalError("trivial complement action on the ideal");
  out.scalar_B =
      B[0][1] == 0 && B[1][0] == 0 && B[0][0] == B[1][1] && B[0][0] != 0;
  return out;
}

PoissonFamily from_fg(const Series& f, const Series& g) {
  if (!(f.trunc() == g.trunc()))
    throw DomainError("plane function pair mixes truncation orders");
  for (const Series* s : {&f, &g}) {
    if (s->depends_on(VAR_Z))
      throw DomainError("plane functions must not depend on z");
    if (!s->xy_part(0).is_zero())
      throw DomainError("plane functions must vanish at the origin");
  }
  Series w = f.partial(VAR_X) * g.partial(VAR_Y) -
             f.partial(VAR_Y) * g.partial(VAR_X);
  if (!w.is_zero())
    throw DomainError("plane functions with independent differentials");
  Series z = Series::variable(f.trunc(), VAR_Z);
  return PoissonFamily(z, f.partial(VAR_X) + z * g.partial(VAR_X),
                       f.partial(VAR_Y) + z * g.partial(VAR_Y));
}

PoissonFamily from_planar(const Series& alpha, const Series& beta) {
  if (!(alpha.trunc() == beta.trunc()))
    throw DomainError("planar components mix truncation orders");
  if (alpha.depends_on(VAR_Y) || beta.depends_on(VAR_Y))
    throw DomainError("planar components must not depend on y");
  return PoissonFamily(-alpha, beta, Series::zero(alpha.trunc()));
}

DifferentialObject to_pfaffian(const PoissonFamily& p) {
  return DifferentialObject::one_form(p.yz, p.zx, p.xy);
}

PoissonFamily from_pfaffian(const DifferentialObject& w) {
  if (w.kind != DiffKind::OneForm)
    throw DomainError("pfaffian equation must be a 1-form");
  PoissonFamily p(w.comp[2], w.comp[0], w.comp[1]);
  require_jacobi(p);
  return p;
}

}  // namespace poisson3
