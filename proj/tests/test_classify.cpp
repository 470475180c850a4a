#include "doctest.h"

#include "poisson3/classify.hpp"

#include "test_util.hpp"

#include <random>

using namespace poisson3;
using namespace poisson3::testing;

namespace {

const Trunc T62{6, 2};

Series sq(int v) {
  Mono m{0, 0, 0, 0};
  m[v] = 2;
  return Series::monomial(T62, m, rat(1));
}

Series zero() { return Series::zero(T62); }

PoissonFamily model_so3() {
  return PoissonFamily(var(T62, VAR_Z), var(T62, VAR_X), var(T62, VAR_Y));
}

PoissonFamily model_star_v() {
  // xy = 0, yz = y, zx = -x: the one jet acting by a scalar.
  return PoissonFamily(zero(), var(T62, VAR_Y), rat(-1) * var(T62, VAR_X));
}

PoissonFamily model_nplus(const Rat& quartic) {
  Series w = sq(0) + sq(1);
  Series f = rat(-1, 2) * (var(T62, VAR_EPS) * w) + quartic * (w * w);
  return from_fg(f, rat(1, 2) * w);
}

// Discrete payload of a classification, for invariance checks. Continuous
// moduli enter only through presence flags and the kappa signs.
struct Label {
  SingTag tag;
  int vkind = -1, vres = -1, vid = 0, vN = 0, vp = 0, vdelta = 0;
  bool vtheta = false;
  std::pair<int, int> vpq{0, 0};
  bool a_present = false, a_isolated = false, a_generic = false;
  int a_sign = 0, a_m = 0, a_delta = 0;
  bool k_present = false;
  int k1_sign = 0, k2_sign = 0;

  bool operator==(const Label&) const = default;
};

Label label_of(const SingularityClass& s) {
  Label l;
  l.tag = s.tag;
  if (s.v) {
    l.vkind = static_cast<int>(s.v->kind);
    l.vres = static_cast<int>(s.v->resonance);
    l.vid = s.v->normal_form_id;
    l.vN = s.v->N.value_or(0);
    l.vp = s.v->p.value_or(0);
    l.vdelta = s.v->delta.value_or(0);
    l.vtheta = s.v->theta.has_value();
    l.vpq = s.v->pq.value_or(std::pair<int, int>{0, 0});
  }
  if (s.a) {
    l.a_present = true;
    l.a_isolated = s.a->isolated;
    l.a_generic = s.a->generic;
    l.a_sign = s.a->sign;
    l.a_m = s.a->m;
    l.a_delta = s.a->delta;
  }
  if (s.kappa) {
    l.k_present = true;
    l.k1_sign = rat_sign(s.kappa->kappa1);
    l.k2_sign = rat_sign(s.kappa->kappa2);
  }
  return l;
}

}  // namespace

TEST_CASE("quadratic form signatures") {
  CHECK(quadform_class(sq(0) + sq(1)) == QuadClass::pos_def);
  CHECK(quadform_class(rat(-1) * sq(0) + rat(-2) * sq(1)) == QuadClass::neg_def);
  CHECK(quadform_class(mono(T62, 1, 1, 0, 0, 2)) == QuadClass::indefinite);
  CHECK(quadform_class(sq(0) + rat(-3) * mono(T62, 1, 1, 0, 0, 1) + sq(1)) ==
        QuadClass::indefinite);
  CHECK(quadform_class(rat(2) * sq(0) + rat(2) * mono(T62, 1, 1, 0, 0, 1) + sq(1)) ==
        QuadClass::pos_def);
  CHECK(quadform_class(sq(0)) == QuadClass::rank1_plus);
  CHECK(quadform_class(rat(-1) * sq(1)) == QuadClass::rank1_minus);
  // x^2 - 2xy + y^2 = (x - y)^2
  CHECK(quadform_class(sq(0) + mono(T62, 1, 1, 0, 0, -2) + sq(1)) ==
        QuadClass::rank1_plus);
  CHECK(quadform_class(zero()) == QuadClass::zero);

  CHECK_THROWS_WITH_AS(quadform_class(mono(T62, 3, 0, 0, 0, 1)),
                       "not a plane quadratic form", DomainError);
  CHECK_THROWS_WITH_AS(quadform_class(sq(0) + sq(2)),
                       "not a plane quadratic form", DomainError);
  CHECK_THROWS_WITH_AS(quadform_class(sq(0) + var(T62, VAR_EPS) * sq(1)),
                       "not a plane quadratic form", DomainError);
}

TEST_CASE("eigenvalue pairs pick their plane model") {
  // (2, 1): resonant node of integer ratio 2.
  VSubtype n2 = v_subtype(EigenPair{rat(3), rat(2)});
  CHECK(n2.kind == VKind::node);
  CHECK(n2.resonance == VResonance::node_N);
  CHECK(n2.normal_form_id == 22);
  REQUIRE(n2.N.has_value());
  CHECK(*n2.N == 2);

  // (-1, -2): same ratio seen from the contracting side.
  VSubtype n2m = v_subtype(EigenPair{rat(-3), rat(2)});
  CHECK(n2m.kind == VKind::node);
  REQUIRE(n2m.N.has_value());
  CHECK(*n2m.N == 2);

  // Double eigenvalue: star node, ratio 1.
  VSubtype star = v_subtype(EigenPair{rat(2), rat(1)});
  CHECK(star.kind == VKind::node);
  CHECK(star.resonance == VResonance::node_N);
  REQUIRE(star.N.has_value());
  CHECK(*star.N == 1);

  // (5, 2): rational but non integer ratio stays linearizable.
  VSubtype n52 = v_subtype(EigenPair{rat(7), rat(10)});
  CHECK(n52.kind == VKind::node);
  CHECK(n52.resonance == VResonance::none);
  CHECK(n52.normal_form_id == 21);
  REQUIRE(n52.theta.has_value());
  CHECK(*n52.theta == rat(-10, 49));

  // Irrational node.
  VSubtype nirr = v_subtype(EigenPair{rat(3), rat(1)});
  CHECK(nirr.kind == VKind::node);
  CHECK(nirr.resonance == VResonance::none);
  CHECK(nirr.normal_form_id == 21);

  // 1 +- i: focus.
  VSubtype foc = v_subtype(EigenPair{rat(2), rat(2)});
  CHECK(foc.kind == VKind::focus);
  CHECK(foc.normal_form_id == 21);
  REQUIRE(foc.theta.has_value());
  CHECK(*foc.theta == rat(-1, 2));

  // (3, -2): resonant 2:3 saddle.
  VSubtype s23 = v_subtype(EigenPair{rat(1), rat(-6)});
  CHECK(s23.kind == VKind::saddle);
  CHECK(s23.resonance == VResonance::saddle_pq);
  CHECK(s23.normal_form_id == 23);
  REQUIRE(s23.pq.has_value());
  CHECK(s23.pq->first == 2);
  CHECK(s23.pq->second == 3);

  // Irrational saddle.
  VSubtype sirr = v_subtype(EigenPair{rat(1), rat(-1, 3)});
  CHECK(sirr.kind == VKind::saddle);
  CHECK(sirr.resonance == VResonance::none);
  CHECK(sirr.normal_form_id == 21);
  REQUIRE(sirr.theta.has_value());
  CHECK(*sirr.theta == rat(1, 3));

  // One zero eigenvalue.
  VSubtype sn = v_subtype(EigenPair{rat(3), rat(0)});
  CHECK(sn.kind == VKind::saddle_node);
  CHECK(sn.normal_form_id == 24);
  CHECK(!sn.p.has_value());

  CHECK_THROWS_WITH_AS(v_subtype(EigenPair{rat(0), rat(-1)}),
                       "not a V singularity", DomainError);
}

TEST_CASE("eigenvalue data is scale free") {
  const EigenPair pairs[] = {
      {rat(3), rat(2)}, {rat(2), rat(2)}, {rat(1), rat(-6)}, {rat(3), rat(1)}};
  const Rat scales[] = {rat(2), rat(1, 3), rat(7, 5)};
  for (const EigenPair& e : pairs) {
    VSubtype base = v_subtype(e);
    for (const Rat& c : scales) {
      VSubtype got = v_subtype(EigenPair{c * e.trace, c * c * e.det});
      CHECK(got.kind == base.kind);
      CHECK(got.resonance == base.resonance);
      CHECK(got.normal_form_id == base.normal_form_id);
      CHECK(got.theta == base.theta);
      CHECK(got.N == base.N);
      CHECK(got.pq == base.pq);
    }
  }
}

TEST_CASE("kappa pairs from radial data") {
  auto make = [](const Rat& l0, const Rat& m1) {
    return NFamilyNormalForm{+1,
                             rat(1),
                             {Series::constant(T62, l0)},
                             {Series::zero(T62), Series::constant(T62, m1)},
                             Series::zero(T62),
                             Series::zero(T62)};
  };
  KappaInvariants a = kappas(make(rat(1), rat(1)));
  CHECK(a.kappa1 == rat(1));
  CHECK(a.kappa2 == rat(-7));
  KappaInvariants b = kappas(make(rat(1), rat(1, 9)));
  CHECK(b.kappa1 == rat(1, 9));
  CHECK(b.kappa2 == rat(1, 9));
  KappaInvariants c = kappas(make(rat(2), rat(-1)));
  CHECK(c.kappa1 == rat(-2));
  CHECK(c.kappa2 == rat(20));
}

TEST_CASE("coarse class from the one jet") {
  const std::array<Rat, 3> o{rat(0), rat(0), rat(0)};
  CHECK(classify_1jet(lie_1jet(model_so3(), o)) == CoarseClass::so3);
  CHECK(classify_1jet(lie_1jet(from_fg(sq(0) - sq(1), zero()), o)) ==
        CoarseClass::sl2);
  CHECK(classify_1jet(lie_1jet(model_star_v(), o)) == CoarseClass::V);
  CHECK(classify_1jet(lie_1jet(from_fg(sq(0) + mono(T62, 0, 3, 0, 0, 1), zero()), o)) ==
        CoarseClass::Aplus);
  CHECK(classify_1jet(lie_1jet(from_fg(rat(-1) * sq(0) + mono(T62, 0, 4, 0, 0, 1), zero()), o)) ==
        CoarseClass::Aminus);
  CHECK(classify_1jet(lie_1jet(model_nplus(rat(1, 4)), o)) == CoarseClass::N);
  PoissonFamily flat(sq(2), sq(0), sq(1));
  CHECK(classify_1jet(lie_1jet(flat, o)) == CoarseClass::OutsideTaxonomy);
}

TEST_CASE("model germs get their full labels") {
  SUBCASE("semisimple pair") {
    SingularityClass s = classify(model_so3(), 6);
    CHECK(s.tag == SingTag::so3);
    CHECK(!s.v);
    CHECK(!s.a);
    CHECK(!s.kappa);
    CHECK(classify(from_fg(sq(0) - sq(1), zero()), 6).tag == SingTag::sl2);
    CHECK(classify(from_fg(rat(-1) * (sq(0) + sq(1)), zero()), 6).tag ==
          SingTag::sl2);
  }

  SUBCASE("star node") {
    SingularityClass s = classify(model_star_v(), 6);
    REQUIRE(s.tag == SingTag::V);
    REQUIRE(s.v);
    CHECK(s.v->kind == VKind::node);
    CHECK(s.v->resonance == VResonance::node_N);
    CHECK(s.v->normal_form_id == 22);
    REQUIRE(s.v->N.has_value());
    CHECK(*s.v->N == 1);
  }

  SUBCASE("resonant node of ratio two") {
    SingularityClass s = classify(from_planar(rat(2) * var(T62, VAR_X), var(T62, VAR_Z)), 6);
    REQUIRE(s.tag == SingTag::V);
    REQUIRE(s.v);
    CHECK(s.v->kind == VKind::node);
    REQUIRE(s.v->N.has_value());
    CHECK(*s.v->N == 2);
  }

  SUBCASE("focus") {
    Series a = var(T62, VAR_X) - var(T62, VAR_Z);
    Series b = var(T62, VAR_X) + var(T62, VAR_Z);
    SingularityClass s = classify(from_planar(a, b), 6);
    REQUIRE(s.tag == SingTag::V);
    REQUIRE(s.v);
    CHECK(s.v->kind == VKind::focus);
    CHECK(s.v->normal_form_id == 21);
    REQUIRE(s.v->theta.has_value());
    CHECK(*s.v->theta == rat(-1, 2));
  }

  SUBCASE("saddle with modulus") {
    // xy = z, yz = -(5x + z): the linear model with modulus 5.
    PoissonFamily p(var(T62, VAR_Z),
                    rat(-5) * var(T62, VAR_X) - var(T62, VAR_Z), zero());
    SingularityClass s = classify(p, 6);
    REQUIRE(s.tag == SingTag::V);
    REQUIRE(s.v);
    CHECK(s.v->kind == VKind::saddle);
    CHECK(s.v->resonance == VResonance::none);
    REQUIRE(s.v->theta.has_value());
    CHECK(*s.v->theta == rat(5));
  }

  SUBCASE("generic saddle node") {
    SingularityClass s = classify(from_planar(sq(0), var(T62, VAR_Z)), 6);
    REQUIRE(s.tag == SingTag::V);
    REQUIRE(s.v);
    CHECK(s.v->kind == VKind::saddle_node);
    CHECK(s.v->normal_form_id == 24);
    REQUIRE(s.v->p.has_value());
    CHECK(*s.v->p == 1);
    REQUIRE(s.v->delta.has_value());
    CHECK(*s.v->delta == 1);
  }

  SUBCASE("degenerate saddle node keeps its center sign") {
    Series a = rat(-1) * mono(T62, 3, 0, 0, 0, 1);
    SingularityClass s = classify(from_planar(a, var(T62, VAR_Z)), 6);
    REQUIRE(s.v);
    CHECK(s.v->kind == VKind::saddle_node);
    REQUIRE(s.v->p.has_value());
    CHECK(*s.v->p == 2);
    REQUIRE(s.v->delta.has_value());
    CHECK(*s.v->delta == -1);
  }

  SUBCASE("center curve mixing does not change the power") {
    Series a = sq(0) + mono(T62, 1, 0, 1, 0, 3) + sq(2);
    Series b = var(T62, VAR_Z) + sq(0);
    SingularityClass s = classify(from_planar(a, b), 6);
    REQUIRE(s.v);
    CHECK(s.v->kind == VKind::saddle_node);
    REQUIRE(s.v->p.has_value());
    CHECK(*s.v->p == 1);
  }

  SUBCASE("line of singular points") {
    Series a = var(T62, VAR_X) * var(T62, VAR_Z);
    SingularityClass s = classify(from_planar(a, var(T62, VAR_Z)), 6);
    REQUIRE(s.v);
    CHECK(s.v->kind == VKind::saddle_node_exclusive_or_undetermined);
    CHECK(!s.v->p.has_value());
  }

  SUBCASE("cusp germ") {
    SingularityClass s = classify(from_fg(sq(0) + mono(T62, 0, 3, 0, 0, 1), zero()), 6);
    CHECK(s.tag == SingTag::Aplus);
    REQUIRE(s.a);
    CHECK(s.a->isolated);
    CHECK(s.a->sign == 1);
    CHECK(s.a->m == 2);
    CHECK(s.a->delta == 1);
    CHECK(s.a->generic);
    CHECK(!s.kappa);
  }

  SUBCASE("negative square with higher tail") {
    SingularityClass s =
        classify(from_fg(rat(-1) * sq(0) + mono(T62, 0, 4, 0, 0, 1), zero()), 6);
    CHECK(s.tag == SingTag::Aminus);
    REQUIRE(s.a);
    CHECK(s.a->isolated);
    CHECK(s.a->sign == -1);
    CHECK(s.a->m == 3);
    CHECK(!s.a->generic);
  }

  SUBCASE("flat square direction") {
    SingularityClass s = classify(from_fg(sq(0), zero()), 6);
    CHECK(s.tag == SingTag::Aplus);
    REQUIRE(s.a);
    CHECK(!s.a->isolated);
  }

  SUBCASE("elliptic radial germ") {
    SingularityClass s = classify(model_nplus(rat(1, 4)), 6);
    CHECK(s.tag == SingTag::Nplus);
    REQUIRE(s.kappa);
    CHECK(s.kappa->kappa1 == rat(1));
    CHECK(s.kappa->kappa2 == rat(-7));
  }

  SUBCASE("elliptic radial germ with small kappa") {
    SingularityClass s = classify(model_nplus(rat(1, 36)), 6);
    REQUIRE(s.tag == SingTag::Nplus);
    REQUIRE(s.kappa);
    CHECK(s.kappa->kappa1 == rat(1, 9));
    CHECK(s.kappa->kappa2 == rat(1, 9));
  }

  SUBCASE("hyperbolic radial germ") {
    Series w = sq(0) - sq(1);
    Series f = rat(-1, 2) * (var(T62, VAR_EPS) * w) + rat(1, 4) * (w * w);
    SingularityClass s = classify(from_fg(f, rat(1, 2) * w), 6);
    CHECK(s.tag == SingTag::Nminus);
    REQUIRE(s.kappa);
    CHECK(s.kappa->kappa1 == rat(1));
    CHECK(s.kappa->kappa2 == rat(-7));
  }

  SUBCASE("degenerate second potential") {
    Series u = sq(0);
    Series f = var(T62, VAR_EPS) * u + u * u;
    SingularityClass s = classify(from_fg(f, u), 6);
    CHECK(s.tag == SingTag::N_undetermined);
    CHECK(!s.kappa);
  }

  SUBCASE("vanishing one jet") {
    SingularityClass s = classify(PoissonFamily(sq(2), sq(0), sq(1)), 6);
    CHECK(s.tag == SingTag::OutsideTaxonomy);
    CHECK(!s.v);
    CHECK(!s.a);
    CHECK(!s.kappa);
  }
}

TEST_CASE("plane criterion for the V class") {
  auto is_v_by_witness = [](const PoissonFamily& p) {
    DifferentialObject c = curl(p);
    bool curl0 = false;
    for (const Series& s : c.comp)
      if (s.coeff(Mono{0, 0, 0, 0}) != 0) curl0 = true;
    LieAlgebra1Jet L = lie_1jet(p, {rat(0), rat(0), rat(0)});
    return curl0 || (L.B.has_value() && L.scalar_B);
  };
  const PoissonFamily germs[] = {
      model_so3(),
      model_star_v(),
      from_planar(sq(0), var(T62, VAR_Z)),
      from_fg(sq(0) + mono(T62, 0, 3, 0, 0, 1), zero()),
      model_nplus(rat(1, 4)),
      from_planar(var(T62, VAR_X) - var(T62, VAR_Z),
                  var(T62, VAR_X) + var(T62, VAR_Z)),
      PoissonFamily(sq(2), sq(0), sq(1)),
      from_fg(sq(0) - sq(1), zero()),
  };
  for (const PoissonFamily& p : germs) {
    CHECK((classify(p, 6).tag == SingTag::V) == is_v_by_witness(p));
  }
}

TEST_CASE("labels survive changes of coordinates") {
  std::mt19937 rng(7331);
  struct Germ {
    PoissonFamily p;
    bool offsets;
  };
  const Germ germs[] = {
      {model_star_v(), false},
      {PoissonFamily(var(T62, VAR_Z),
                     rat(-5) * var(T62, VAR_X) - var(T62, VAR_Z), zero()),
       false},
      {from_planar(sq(0), var(T62, VAR_Z)), false},
      {from_fg(sq(0) + mono(T62, 0, 3, 0, 0, 1) +
                   var(T62, VAR_EPS) * var(T62, VAR_Y),
               zero()),
       true},
      {model_nplus(rat(1, 4)), true},
      {from_fg(sq(0) - sq(1), zero()), false},
  };
  for (const Germ& g : germs) {
    const Label base = label_of(classify(g.p, 6));
    for (int trial = 0; trial < 2; ++trial) {
      CoordinateChange ch = random_change(T62, rng, g.offsets);
      const Label moved = label_of(classify(pushforward(g.p, ch), 6));
      CHECK(moved == base);
    }
  }
}
