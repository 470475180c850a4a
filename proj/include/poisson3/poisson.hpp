#pragma once

// Truncated 1-parameter families of bivector fields on R^3 and the basic
// operations on them: Jacobi test, curl, pushforward along coordinate
// changes, linearization at a singular point, Pfaffian correspondence.
//
// Component convention: xy = {x,y}, yz = {y,z}, zx = {z,x}, so the bivector
// is  xy d/dx^d/dy + yz d/dy^d/dz + zx d/dz^d/dx.

#include "poisson3/change.hpp"
#include "poisson3/differential.hpp"
#include "poisson3/series.hpp"

#include <array>
#include <optional>

namespace poisson3 {

struct PoissonFamily {
  Series xy, yz, zx;

  PoissonFamily(Series xy_, Series yz_, Series zx_);

  Trunc trunc() const { return xy.trunc(); }
  bool operator==(const PoissonFamily& o) const {
    return xy == o.xy && yz == o.yz && zx == o.zx;
  }
};

// The scalar of w ^ dw where w is the dual 1-form; vanishes identically
// for genuine Poisson structures.
Series jacobi_residual(const PoissonFamily& p);

// True when the residual vanishes through total degree d-1; degree-d terms
// of the residual are not trustworthy for degree-d data and are ignored.
bool jacobi_holds(const PoissonFamily& p);
void require_jacobi(const PoissonFamily& p);

// Some bracket has a nonzero value at the origin for eps != 0: the singular
// point drifts, and transported data is faithful only on xyz + eps <= d.
bool singular_origin_drifts(const PoissonFamily& p);

// sharp(d(flat(P))): the classic curl of the component vector (yz, zx, xy).
DifferentialObject curl(const PoissonFamily& p);

// {f, g} = P(df, dg).
Series poisson_bracket(const PoissonFamily& p, const Series& f,
                       const Series& g);

// Transported family: W^{ab}(u) = sum P^{ij} (J^a_i J^b_j - J^b_i J^a_j)
// evaluated through the inverse change, where J is the Jacobian of ch.
PoissonFamily pushforward(const PoissonFamily& p, const CoordinateChange& ch);

// Components of the Lie derivative L_X P in the bivector basis
// (d/dy^d/dz, d/dz^d/dx, d/dx^d/dy).
DifferentialObject lie_symmetry_residual(const DifferentialObject& x,
                                         const PoissonFamily& p);

// Linearization of the eps = 0 member at a rational singular point.
// Structure constants c[i][j][k]: coefficient of e_k in [e_i, e_j] where
// (e_1,e_2,e_3) are the coordinate functions centered at the point.
struct LieAlgebra1Jet {
  std::array<std::array<std::array<Rat, 3>, 3>, 3> c{};
  std::array<std::array<Rat, 3>, 3> killing{};
  Rat jacobi_defect;  // max-abs-style witness: 0 iff c satisfies Jacobi
  bool zero = false;
  bool semisimple = false;
  bool killing_negdef = false;

  // For solvable nonzero algebras: bracketing with a complement vector acts
  // on a 2-dimensional abelian ideal; B is that action in an adapted basis.
  std::optional<std::array<std::array<Rat, 2>, 2>> B;
  Rat trace_B, det_B;
  bool scalar_B = false;  // B a nonzero multiple of the identity
};

LieAlgebra1Jet lie_1jet(const PoissonFamily& p, const std::array<Rat, 3>& pt);

// Families attached to a pair of plane functions f, g (no z dependence,
// vanishing at the origin for every parameter value):
//   {x,y} = z,  {y,z} = f_x + z g_x,  {z,x} = f_y + z g_y.
// Requires the compatibility df ^ dg = 0; rejects the pair otherwise.
PoissonFamily from_fg(const Series& f, const Series& g);

// Family  beta d/dy^d/dz - alpha d/dx^d/dy  attached to the planar vector
// field  alpha d/dx + beta d/dz  in the (x,z) plane (y acts as the Poisson
// symmetry direction). Inputs must not depend on y.
PoissonFamily from_planar(const Series& alpha, const Series& beta);

// Dual Pfaffian equation: w = yz dx + zx dy + xy dz.
DifferentialObject to_pfaffian(const PoissonFamily& p);

// Inverse direction; validates the integrability w ^ dw = 0 through
// degree d-1.
PoissonFamily from_pfaffian(const DifferentialObject& w);

}  // namespace poisson3
