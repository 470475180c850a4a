#pragma once

// Differential-geometric wrappers over Series on R^3 (eps is a passive
// parameter). Component conventions, fixed once:
//   1-forms      (dx, dy, dz)
//   2-forms      (dy^dz, dz^dx, dx^dy)
//   3-forms      dx^dy^dz
//   vectors      (d/dx, d/dy, d/dz)
//   bivectors    (d/dy^d/dz, d/dz^d/dx, d/dx^d/dy)
// With these bases the musical isomorphism against dx^dy^dz is the identity
// on components in both degrees.

#include "poisson3/series.hpp"

#include <vector>

namespace poisson3 {

enum class DiffKind {
  Function,
  OneForm,
  TwoForm,
  ThreeForm,
  VectorField,
  Bivector,
};

int component_count(DiffKind k);

struct DifferentialObject {
  DiffKind kind;
  std::vector<Series> comp;

  DifferentialObject(DiffKind k, std::vector<Series> c);
  static DifferentialObject function(Series f);
  static DifferentialObject one_form(Series a, Series b, Series c);
  static DifferentialObject two_form(Series a, Series b, Series c);
  static DifferentialObject three_form(Series v);
  static DifferentialObject vector_field(Series a, Series b, Series c);
  static DifferentialObject bivector(Series a, Series b, Series c);

  Trunc trunc() const { return comp[0].trunc(); }
  bool is_zero() const;
};

// d on functions, 1-forms and 2-forms; 3-forms map to zero; multivector
// kinds are rejected.
DifferentialObject exterior_derivative(const DifferentialObject& w);

// Wedge products with total form degree <= 3, plus vector ^ vector.
// Function factors act by multiplication.
DifferentialObject wedge(const DifferentialObject& a,
                         const DifferentialObject& b);

// Musical isomorphisms for the volume form dx^dy^dz: multivectors to forms
// (vector -> 2-form, bivector -> 1-form) and back.
DifferentialObject flat(const DifferentialObject& v);
DifferentialObject sharp(const DifferentialObject& w);

}  // namespace poisson3
