#include "poisson3/normal_form.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <random>

using namespace poisson3;
using namespace poisson3::testing;

namespace {

const Trunc T62{6, 2};

Series sq(int v) { return var(T62, v) * var(T62, v); }

bool all_zero(const std::vector<Series>& h) {
  for (const Series& s : h)
    if (!s.is_zero()) return false;
  return true;
}

}  // namespace

TEST_CASE("cusp germ splits with unit multiplier") {
  // f = x^2/2 + y^3/3 is already split: m = 2, leading coefficient 1/3,
  // multiplier (1/3) * 3 = 1.
  PoissonFamily p =
      from_fg(rat(1, 2) * sq(0) + rat(1, 3) * (var(T62, 1) * sq(1)),
              Series::zero(T62));
  ANormalForm a = a_normal_form(p, 6);
  CHECK(a.sign == 1);
  CHECK(a.m == 2);
  CHECK(a.delta == 1);
  CHECK(a.h.size() == 1);
  CHECK(all_zero(a.h));
  CHECK(a.H == Series::constant(T62, rat(1)));
}

TEST_CASE("negative square with quartic tail") {
  PoissonFamily p =
      from_fg(rat(-1, 2) * sq(0) + rat(1, 4) * (sq(1) * sq(1)),
              Series::zero(T62));
  ANormalForm a = a_normal_form(p, 6);
  CHECK(a.sign == -1);
  CHECK(a.m == 3);
  CHECK(a.delta == 1);
  CHECK(a.h.size() == 2);
  CHECK(all_zero(a.h));
  CHECK(a.H == Series::constant(T62, rat(1)));
}

TEST_CASE("unfolding term lands in the linear slot") {
  // f = x^2/2 + y^3/3 - eps y: the family part is -eps y, so h_0 = -eps.
  Series eps = var(T62, 3);
  PoissonFamily p =
      from_fg(rat(1, 2) * sq(0) + rat(1, 3) * (var(T62, 1) * sq(1)) -
                  eps * var(T62, 1),
              Series::zero(T62));
  ANormalForm a = a_normal_form(p, 6);
  CHECK(a.m == 2);
  CHECK(a.delta == 1);
  CHECK(a.h.size() == 1);
  CHECK(a.h[0] == -eps);
  CHECK(a.H == Series::constant(T62, rat(1)));
}

TEST_CASE("degenerate direction is sheared before splitting") {
  // 2x^2 + 2xy + y^2/2 = 2(x + y/2)^2, so the rank-one direction is tilted.
  Series x = var(T62, 0), y = var(T62, 1);
  PoissonFamily p = from_fg(
      rat(2) * sq(0) + rat(2) * (x * y) + rat(1, 2) * sq(1) + y * sq(1),
      Series::zero(T62));
  ANormalForm a = a_normal_form(p, 6);
  CHECK(a.sign == 1);
  CHECK(a.m == 2);
  CHECK(a.delta == 1);
  CHECK(all_zero(a.h));
  CHECK(a.H == Series::constant(T62, rat(3)));
}

TEST_CASE("odd tail keeps its sign, even tail is flipped") {
  PoissonFamily podd =
      from_fg(rat(1, 2) * sq(0) - rat(1, 2) * (sq(1) * sq(1)),
              Series::zero(T62));
  ANormalForm aodd = a_normal_form(podd, 6);
  CHECK(aodd.m == 3);
  CHECK(aodd.delta == -1);
  CHECK(aodd.H == Series::constant(T62, rat(2)));

  PoissonFamily peven =
      from_fg(rat(1, 2) * sq(0) - rat(1, 3) * (var(T62, 1) * sq(1)),
              Series::zero(T62));
  ANormalForm aeven = a_normal_form(peven, 6);
  CHECK(aeven.m == 2);
  CHECK(aeven.delta == 1);
  CHECK(aeven.H == Series::constant(T62, rat(1)));
}

TEST_CASE("non rank-one quadratic parts are rejected") {
  PoissonFamily rank0 = from_fg(sq(0) * var(T62, 1), Series::zero(T62));
  CHECK_THROWS_WITH_AS(a_normal_form(rank0, 6), "not an A singularity",
                       DomainError);
  PoissonFamily rank2 = from_fg(sq(0) + sq(1), Series::zero(T62));
  CHECK_THROWS_WITH_AS(a_normal_form(rank2, 6), "not an A singularity",
                       DomainError);
}

TEST_CASE("flat tail direction is reported as non isolated") {
  PoissonFamily p = from_fg(rat(1, 2) * sq(0), Series::zero(T62));
  CHECK_THROWS_WITH_AS(a_normal_form(p, 6),
                       "not algebraically isolated at degree 6", DomainError);
}

TEST_CASE("model data survives changes of coordinates") {
  Series eps = var(T62, 3);
  PoissonFamily base =
      from_fg(rat(1, 2) * sq(0) + rat(1, 3) * (var(T62, 1) * sq(1)) -
                  eps * var(T62, 1),
              Series::zero(T62));
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 3; ++trial) {
    CoordinateChange ch = random_change(T62, rng, /*allow_offsets=*/false);
    PoissonFamily moved = pushforward(base, ch);
    ANormalForm a = a_normal_form(moved, 6);
    CHECK(a.sign == 1);
    CHECK(a.m == 2);
    CHECK(a.delta == 1);
    REQUIRE(a.h.size() == 1);
    // The unfolding slot keeps a nonzero eps-linear coefficient: the moved
    // family still crosses the split at linear speed in eps.
    CHECK(a.h[0].coeff(Mono{0, 0, 0, 1}) != 0);
  }
}
