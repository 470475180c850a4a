#pragma once

// Decision layer over the reduction engines. Every branch is an exact
// rational sign or vanishing test; when a decision would need data beyond
// the truncation degree the answer says so instead of guessing.

#include "poisson3/normal_form.hpp"

#include <optional>
#include <utility>

namespace poisson3 {

// Plane quadratic forms up to linear equivalence over R.
enum class QuadClass {
  pos_def,
  neg_def,
  indefinite,
  rank1_plus,
  rank1_minus,
  zero
};

// Exact signature of a homogeneous quadratic in (x, y). Rejects input with
// z, eps, or terms of other degrees.
QuadClass quadform_class(const Series& q2);

enum class SingTag {
  V,
  so3,
  sl2,
  Aplus,
  Aminus,
  Nplus,
  Nminus,
  N_undetermined,
  OutsideTaxonomy
};

const char* sing_tag_name(SingTag t);

// Coarse class readable from the 1-jet alone; N is not split further here.
enum class CoarseClass { V, Aplus, Aminus, N, so3, sl2, OutsideTaxonomy };

const char* coarse_class_name(CoarseClass c);

enum class VKind {
  node,
  saddle,
  focus,
  saddle_node,
  saddle_node_exclusive_or_undetermined
};

enum class VResonance { none, node_N, saddle_pq };

// Orbital data of a V singularity. The model id picks one of four plane
// shapes: 21 linear with modulus theta, 22 resonant node of integer ratio
// N, 23 resonant p:q saddle, 24 saddle-node of center power p. Only the
// fields the eigenvalues (and, for 24, the center curve) determine are
// filled; deeper moduli stay empty.
struct VSubtype {
  VKind kind = VKind::node;
  VResonance resonance = VResonance::none;
  int normal_form_id = 21;
  std::optional<Rat> theta;               // 21: -det / trace^2
  std::optional<int> N;                   // 22
  std::optional<std::pair<int, int>> pq;  // 23, irreducible
  std::optional<int> p;                   // 24, center power when visible
  std::optional<int> delta;               // 24: center sign for even p
};

// Sub-type from the eigenvalue pair alone. A zero eigenvalue gives the
// saddle-node kind with its deeper fields empty; classify refines it with
// the center curve. Throws "not a V singularity" when the trace vanishes.
VSubtype v_subtype(const EigenPair& e);

struct KappaInvariants {
  Rat kappa1, kappa2;
};

// kappa1 = lambda_0(0) mu_1(0),  kappa2 = lambda_0(0)^2 - 8 kappa1.
KappaInvariants kappas(const NFamilyNormalForm& nf);

// Morse data of the square direction; isolated is false when no tail power
// fits inside the box. generic means m = 2.
struct AInvariants {
  bool isolated = false;
  int sign = 0;
  int m = 0;
  int delta = 0;
  bool generic = false;
};

AInvariants a_invariants(const NormalFormData& nf);

struct SingularityClass {
  SingTag tag = SingTag::OutsideTaxonomy;
  std::optional<VSubtype> v;
  std::optional<AInvariants> a;
  std::optional<KappaInvariants> kappa;
};

// Full decision for the eps = 0 germ of the family; kappa data is attached
// when the family supports the radial reduction. Pre: the origin is a
// singular point at eps = 0.
SingularityClass classify(const PoissonFamily& p, int degree);

CoarseClass classify_1jet(const LieAlgebra1Jet& L);

}  // namespace poisson3
