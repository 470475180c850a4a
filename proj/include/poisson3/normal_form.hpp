#pragma once

// Reduction engines. A singular family with usable 1-jet is first carried to
// coordinates where {x,y} = z, then the remaining two brackets are made
// affine in z degree by degree, which exhibits the family as the gradient
// pair of two plane potentials (f, g). On top of that sit the specialized
// pipelines: V families become planar vector fields, N families get their
// radial lambda/mu data, A families get a Casimir and a Morse-split model.

#include "poisson3/poisson.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace poisson3 {

// Family in coordinates where {x,y} = z holds exactly:
//   {x,y} = z,  {y,z} = byz,  {z,x} = bzx.
struct ZFormFamily {
  Series byz, bzx;

  ZFormFamily(Series byz_, Series bzx_);

  Trunc trunc() const { return byz.trunc(); }
  // Materialize with the implicit z component.
  PoissonFamily family() const;
};

// Potential pair of a fully reduced family
//   {x,y} = z,  {y,z} = f_x + z g_x,  {z,x} = f_y + z g_y,
// f and g series in (x, y, eps) vanishing at the origin for every eps order,
// together with the ordered list of changes that led there.
struct NormalFormData {
  Series f, g;
  std::vector<CoordinateChange> change_log;

  CoordinateChange composed() const;
  // The family the pair describes (assembled directly from the gradients).
  PoissonFamily family() const;
};

// Eigenvalue pair of a 2x2 linearization, kept exact through trace and
// determinant of the characteristic polynomial t^2 - trace t + det.
// Meaningful up to a common nonzero factor.
struct EigenPair {
  Rat trace, det;

  Rat discriminant() const { return trace * trace - 4 * det; }
  bool real() const { return rat_sign(discriminant()) >= 0; }
  // Both eigenvalues rational; ordered with the larger one first.
  std::optional<std::pair<Rat, Rat>> rational_pair() const;
};

// Family of the shape  d/dy ^ v_eps  with  v_eps = alpha d/dx + beta d/dz,
// alpha and beta free of y. eigen describes the linearization of v_0 at the
// origin; its trace is nonzero on valid V inputs.
struct PlanarFamily {
  Series alpha, beta;
  EigenPair eigen;
};

// Radial data of an N family: in a plane frame with w = x^2 + sign a y^2,
//   g_x = x (lambda_0 + lambda_1 w + ...),   g_y = sign a y (...same...),
//   f_x / g_x = mu_0 + mu_1 w + ...
// lambda_k, mu_k are polynomials in eps alone; lambda[0](0) != 0 and
// mu[0](0) = 0. q1, q2 witness the z^2 tails of the two reduced brackets
// (zero except for coefficients beyond the faithful window).
struct NFamilyNormalForm {
  int sign = +1;       // +1 elliptic frame, -1 hyperbolic
  Rat frame_scale;     // the rational a > 0 in w = x^2 + sign a y^2
  std::vector<Series> lambda;
  std::vector<Series> mu;
  Series q1, q2;
};

// Casimir data of an algebraically isolated A family. C is a function of
// (x,y,z,eps) annihilated by both brackets; G is the solved two-variable
// ansatz with C = G(z, f). G is stored over (z, w, eps) with w held in the
// x slot of the series; its low part is w + z^2/2.
struct CasimirFamily {
  Series C;
  Series G;
};

// Model of an algebraically isolated A germ: the eps = 0 Casimir splits as
// z^2/2 + sign x^2/2 + delta y^{m+1}/(m+1), and the family contributes the
// unfolding terms h_i(eps) y^i. H is the positive multiplier in front of
// the model bivector.
struct ANormalForm {
  int sign = +1;
  int m = 2;               // lowest surviving y power is m+1
  int delta = +1;          // forced +1 when m is even
  std::vector<Series> h;   // h_0..h_{m-2}, eps polynomials, h_i(0) = 0
  Series H;
};

// Coordinates (a, b, {a,b}) in which the family takes the z-form. The pair
// (a, b) is searched among six linear candidates; their span is complete, so
// failure of all six means no coordinates exist at all: either the 1-jet
// vanishes or it acts by a scalar on its derived plane (the one excluded
// jet type).
std::pair<ZFormFamily, CoordinateChange> reduce_to_zform(const PoissonFamily& p);

// One stage of the affine reduction: given both brackets affine in z below
// xy-degree q, returns an equivalent z-form whose degree-q parts are affine
// in z as well. Components of xy-degree < q are returned bit-identical.
std::pair<ZFormFamily, CoordinateChange> zaffine_step(const ZFormFamily& zf,
                                                      int q);

// Full reduction to the potential pair: z-form, then affine stages for
// q = 0..degree, then integration of the affine coefficients.
NormalFormData reduce_to_fg(const PoissonFamily& p, int degree);

// df ^ dg as a 2-form, truncated to the degrees the reduction determines
// (total degree <= degree-1). Zero exactly for valid reductions.
DifferentialObject dependence_residual(const NormalFormData& nf);

// Rectifies the curl to d/dy and reads off the planar field. Requires a
// nonvanishing curl at the origin at eps = 0.
std::pair<PlanarFamily, CoordinateChange> v_reduce(const PoissonFamily& p);

// Radial normal form of an N family: recenters at the moving critical point
// of g, diagonalizes the quadratic frame over the rationals, removes
// non-radial harmonics by exact area-preserving flows, then extracts the
// lambda and mu series.
NFamilyNormalForm n_reduce(const PoissonFamily& p, int degree);

// Casimir family of an algebraically isolated A germ: solves g = l(f) for a
// one-variable series l, then integrates the two-variable ansatz G along z.
CasimirFamily a_casimir(const PoissonFamily& p, int degree);

// Morse data of the eps = 0 Casimir plus the unfolding coefficients.
ANormalForm a_normal_form(const PoissonFamily& p, int degree);

}  // namespace poisson3
