#include "poisson3/differential.hpp"

#include "poisson3/rational.hpp"

namespace poisson3 {

int component_count(DiffKind k) {
  switch (k) {
    case DiffKind::Function:
    case DiffKind::ThreeForm:
      return 1;
    default:
      return 3;
  }
}

DifferentialObject::DifferentialObject(DiffKind k, std::vector<Series> c)
    : kind(k), comp(std::move(c)) {
  if ((int)comp.size() != component_count(kind))
    throw DomainError("differential object has wrong component count");
  for (const auto& s : comp)
    if (!(s.trunc() == comp[0].trunc()))
      throw DomainError("differential object mixes truncation orders");
}

DifferentialObject DifferentialObject::function(Series f) {
  return DifferentialObject(DiffKind::Function, {std::move(f)});
}
DifferentialObject DifferentialObject::one_form(Series a, Series b, Series c) {
  return DifferentialObject(DiffKind::OneForm,
                            {std::move(a), std::move(b), std::move(c)});
}
DifferentialObject DifferentialObject::two_form(Series a, Series b, Series c) {
  return DifferentialObject(DiffKind::TwoForm,
                            {std::move(a), std::move(b), std::move(c)});
}
DifferentialObject DifferentialObject::three_form(Series v) {
  return DifferentialObject(DiffKind::ThreeForm, {std::move(v)});
}
DifferentialObject DifferentialObject::vector_field(Series a, Series b,
                                                    Series c) {
  return DifferentialObject(DiffKind::VectorField,
                            {std::move(a), std::move(b), std::move(c)});
}
DifferentialObject DifferentialObject::bivector(Series a, Series b, Series c) {
  return DifferentialObject(DiffKind::Bivector,
                            {std::move(a), std::move(b), std::move(c)});
}

bool DifferentialObject::is_zero() const {
  for (const auto& s : comp)
    if (!s.is_zero()) return false;
  return true;
}

DifferentialObject exterior_derivative(const DifferentialObject& w) {
  switch (w.kind) {
    case DiffKind::Function: {
      const Series& f = w.comp[0];
      return DifferentialObject::one_form(f.partial(VAR_X), f.partial(VAR_Y),
                                          f.partial(VAR_Z));
    }
    case DiffKind::OneForm: {
      // d(A dx + B dy + C dz) in the (dy^dz, dz^dx, dx^dy) basis.
      const Series &A = w.comp[0], &B = w.comp[1], &C = w.comp[2];
      return DifferentialObject::two_form(C.partial(VAR_Y) - B.partial(VAR_Z),
                                          A.partial(VAR_Z) - C.partial(VAR_X),
                                          B.partial(VAR_X) - A.partial(VAR_Y));
    }
    case DiffKind::TwoForm: {
      // d(A dy^dz + B dz^dx + C dx^dy) = (div) dx^dy^dz.
      const Series &A = w.comp[0], &B = w.comp[1], &C = w.comp[2];
      return DifferentialObject::three_form(A.partial(VAR_X) +
                                            B.partial(VAR_Y) +
                                            C.partial(VAR_Z));
    }
    case DiffKind::ThreeForm:
      return DifferentialObject::three_form(Series::zero(w.trunc()));
    default:
      throw DomainError("exterior derivative of a multivector field");
  }
}

namespace {

// Determinant-style pairing used by both 1-form ^ 1-form and vector ^ vector.
std::vector<Series> cross(const std::vector<Series>& a,
                          const std::vector<Series>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

Series dot(const std::vector<Series>& a, const std::vector<Series>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

DifferentialObject scale_by(const Series& f, const DifferentialObject& w) {
  std::vector<Series> out;
  out.reserve(w.comp.size());
  for (const auto& s : w.comp) out.push_back(f * s);
  return DifferentialObject(w.kind, std::move(out));
}

int form_degree(DiffKind k) {
  switch (k) {
    case DiffKind::Function: return 0;
    case DiffKind::OneForm: return 1;
    case DiffKind::TwoForm: return 2;
    case DiffKind::ThreeForm: return 3;
    default: return -1;
  }
}

}  // namespace

DifferentialObject wedge(const DifferentialObject& a,
                         const DifferentialObject& b) {
  if (a.kind == DiffKind::Function) return scale_by(a.comp[0], b);
  if (b.kind == DiffKind::Function) return scale_by(b.comp[0], a);
  if (a.kind == DiffKind::VectorField && b.kind == DiffKind::VectorField)
    return DifferentialObject(DiffKind::Bivector, cross(a.comp, b.comp));

  int da = form_degree(a.kind), db = form_degree(b.kind);
  if (da < 0 || db < 0)
    throw DomainError("wedge of unsupported multivector kinds");
  if (da + db > 3) throw DomainError("wedge exceeds top degree");

  if (da == 1 && db == 1)
    return DifferentialObject(DiffKind::TwoForm, cross(a.comp, b.comp));
  if (da == 1 && db == 2)
    return DifferentialObject::three_form(dot(a.comp, b.comp));
  if (da == 2 && db == 1)
    return DifferentialObject::three_form(dot(a.comp, b.comp));
  throw DomainError("wedge of unsupported kinds");
}

DifferentialObject flat(const DifferentialObject& v) {
  if (v.kind == DiffKind::VectorField)
    return DifferentialObject(DiffKind::TwoForm, v.comp);
  if (v.kind == DiffKind::Bivector)
    return DifferentialObject(DiffKind::OneForm, v.comp);
  throw DomainError("flat expects a vector field or bivector");
}

DifferentialObject sharp(const DifferentialObject& w) {
  if (w.kind == DiffKind::TwoForm)
    return DifferentialObject(DiffKind::VectorField, w.comp);
  if (w.kind == DiffKind::OneForm)
    return DifferentialObject(DiffKind::Bivector, w.comp);
  throw DomainError("sharp expects a 1-form or 2-form");
}

}  // namespace poisson3
