#include "poisson3/normal_form.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <random>

using namespace poisson3;
using namespace poisson3::testing;

namespace {

const Trunc T62{6, 2};

bool is_identity(const CoordinateChange& ch) {
  return ch == CoordinateChange::identity(ch.trunc());
}

}  // namespace

TEST_CASE("family with {x,y} = z keeps its coordinates") {
  // {x,y} = z, {y,z} = x, {z,x} = y: the first candidate pair (x, y)
  // already certifies independence, so the change is the identity.
  PoissonFamily p(var(T62, 2), var(T62, 0), var(T62, 1));
  auto [zf, ch] = reduce_to_zform(p);
  CHECK(is_identity(ch));
  CHECK(zf.byz == var(T62, 0));
  CHECK(zf.bzx == var(T62, 1));
  CHECK(zf.family() == p);
}

TEST_CASE("scaled bracket is absorbed into the third coordinate") {
  // Relabeled gradient family: {x,y} = 2z, {y,z} = 2x, {z,x} = y.
  // The pair (x, y) still works; its bracket 2z becomes the new z.
  PoissonFamily p(rat(2) * var(T62, 2), rat(2) * var(T62, 0), var(T62, 1));
  require_jacobi(p);
  auto [zf, ch] = reduce_to_zform(p);
  CHECK(ch.image(0) == var(T62, 0));
  CHECK(ch.image(1) == var(T62, 1));
  CHECK(ch.image(2) == rat(2) * var(T62, 2));
  CHECK(zf.byz == rat(4) * var(T62, 0));
  CHECK(zf.bzx == rat(2) * var(T62, 1));
}

TEST_CASE("all axis pairs degenerate but a mixed pair works") {
  // {x,y} = -2x, {y,z} = z, {z,x} = 0. Pairs from single axis planes all
  // bracket to dependent functions; (y, z - x) is the first good one and
  // yields coordinates (y, z - x, z - 2x).
  PoissonFamily p(rat(-2) * var(T62, 0), var(T62, 2), Series::zero(T62));
  require_jacobi(p);
  auto [zf, ch] = reduce_to_zform(p);
  CHECK(ch.image(0) == var(T62, 1));
  CHECK(ch.image(1) == var(T62, 2) - var(T62, 0));
  CHECK(ch.image(2) == var(T62, 2) - rat(2) * var(T62, 0));
  CHECK(zf.byz == Series::zero(T62));
  CHECK(zf.bzx == rat(2) * var(T62, 1) - rat(3) * var(T62, 2));
  require_jacobi(zf.family());
}

TEST_CASE("scalar 1-jet action admits no z coordinates") {
  // d/dy ^ (x d/dx + z d/dz): the 1-jet acts as the identity on its
  // derived plane, the one excluded jet type.
  PoissonFamily p = from_planar(var(T62, 0), var(T62, 2));
  require_jacobi(p);
  CHECK_THROWS_WITH_AS(reduce_to_zform(p),
                       "1-jet acts by a scalar on its derived plane",
                       DomainError);
}

TEST_CASE("zero 1-jet admits no z coordinates") {
  PoissonFamily p(mono(T62, 2, 0, 0, 0, 1), Series::zero(T62),
                  Series::zero(T62));
  require_jacobi(p);
  CHECK_THROWS_WITH_AS(reduce_to_zform(p), "1-jet vanishes at the origin",
                       DomainError);
}

TEST_CASE("nonsingular origin is rejected") {
  PoissonFamily p(var(T62, 2) + Series::constant(T62, rat(1)), var(T62, 0),
                  var(T62, 1));
  CHECK_THROWS_AS(reduce_to_zform(p), DomainError);
}

TEST_CASE("offset certificate pair for a saddle-node planar family") {
  // d/dy ^ ((eps - x^2) d/dx + z d/dz), singular point drifting with eps.
  // The only certifying pair is (y, z - x); its bracket picks up a pure
  // eps term, so the change moves the origin and equalities hold on the
  // region xyz + eps <= d.
  Series eps = var(T62, 3);
  PoissonFamily p =
      from_planar(-eps + mono(T62, 2, 0, 0, 0, 1), var(T62, 2));
  require_jacobi(p);
  auto [zf, ch] = reduce_to_zform(p);
  CHECK(ch.image(0) == var(T62, 1));
  CHECK(ch.image(1) == var(T62, 2) - var(T62, 0));
  CHECK(ch.image(2) ==
        var(T62, 2) + eps - mono(T62, 2, 0, 0, 0, 1));
  CHECK(ch.moves_origin());

  // Forward check of the transported brackets: W o ch = {ch_a, ch_b}.
  PoissonFamily out = zf.family();
  Series byz_fwd = out.yz.substitute(ch.images());
  Series bzx_fwd = out.zx.substitute(ch.images());
  Series want_yz = poisson_bracket(p, ch.image(1), ch.image(2));
  Series want_zx = poisson_bracket(p, ch.image(2), ch.image(0));
  CHECK((byz_fwd - want_yz).truncated_total(5).is_zero());
  CHECK((bzx_fwd - want_zx).truncated_total(5).is_zero());
}

TEST_CASE("linear solvable structures reduce whenever the action is not scalar") {
  // {x,z} = b00 x + b01 y, {y,z} = b10 x + b11 y, {x,y} = 0 is a Lie
  // algebra for every matrix b; z coordinates exist iff b is not a
  // nonzero multiple of the identity.
  std::mt19937 rng(901);
  std::uniform_int_distribution<long> pick(-4, 4);
  int reduced = 0;
  for (int trial = 0; trial < 41; ++trial) {
    long b00 = pick(rng), b01 = pick(rng), b10 = pick(rng), b11 = pick(rng);
    if (trial == 0) b00 = b11 = 3, b01 = b10 = 0;  // pin one scalar case
    if (b00 == 0 && b01 == 0 && b10 == 0 && b11 == 0) continue;
    Series yz = rat(b10) * var(T62, 0) + rat(b11) * var(T62, 1);
    Series zx = -(rat(b00) * var(T62, 0) + rat(b01) * var(T62, 1));
    PoissonFamily p(Series::zero(T62), yz, zx);
    require_jacobi(p);
    bool is_scalar = b01 == 0 && b10 == 0 && b00 == b11;
    if (is_scalar) {
      CHECK_THROWS_AS(reduce_to_zform(p), DomainError);
      continue;
    }
    auto [zf, ch] = reduce_to_zform(p);
    CHECK(!ch.moves_origin());
    CHECK(zf.family().xy == var(T62, 2));
    require_jacobi(zf.family());
    // Transport is exact for origin-fixing changes.
    CHECK(pushforward(p, ch) == zf.family());
    ++reduced;
  }
  CHECK(reduced > 20);
}

TEST_CASE("semisimple structures always reduce") {
  PoissonFamily rot(var(T62, 2), var(T62, 0), var(T62, 1));
  PoissonFamily hyp(var(T62, 2), -var(T62, 0), var(T62, 1));
  for (const PoissonFamily* p : {&rot, &hyp}) {
    auto [zf, ch] = reduce_to_zform(*p);
    CHECK(zf.family().xy == var(T62, 2));
    CHECK(pushforward(*p, ch) == zf.family());
  }
}
