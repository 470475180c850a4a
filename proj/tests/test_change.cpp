#include "poisson3/change.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <random>

using namespace poisson3;
using namespace poisson3::testing;

namespace {
const Trunc T62{6, 2};
const Trunc T41{4, 1};
}  // namespace

TEST_CASE("identity behaves as a unit for composition") {
  auto id = CoordinateChange::identity(T62);
  CHECK(id.inverse() == id);
  std::mt19937 rng(1);
  auto ch = random_change(T62, rng);
  CHECK(ch.then(id) == ch);
  CHECK(id.then(ch) == ch);
}

TEST_CASE("shear has the obvious inverse") {
  Series x = var(T62, 0), y = var(T62, 1), z = var(T62, 2);
  CoordinateChange sh({x, y, z + x * x});
  CoordinateChange inv = sh.inverse();
  CHECK(inv.image(0) == x);
  CHECK(inv.image(1) == y);
  CHECK(inv.image(2) == z - x * x);
}

TEST_CASE("eps offset has the obvious inverse") {
  Series x = var(T62, 0), y = var(T62, 1), z = var(T62, 2);
  Series e = var(T62, VAR_EPS);
  CoordinateChange tr({x + e, y, z});
  CHECK(tr.inverse().image(0) == x - e);
  CHECK(tr.inverse().image(1) == y);
}

TEST_CASE("spatial random changes invert exactly on both sides") {
  std::mt19937 rng(4242);
  auto id62 = CoordinateChange::identity(T62);
  for (int trial = 0; trial < 12; ++trial) {
    auto ch = random_change(T62, rng, /*allow_offsets=*/false);
    auto inv = ch.inverse();
    CHECK(ch.then(inv) == id62);
    CHECK(inv.then(ch) == id62);
  }
  auto id41 = CoordinateChange::identity(T41);
  for (int trial = 0; trial < 12; ++trial) {
    auto ch = random_change(T41, rng, /*allow_offsets=*/false);
    auto inv = ch.inverse();
    CHECK(ch.then(inv) == id41);
    CHECK(inv.then(ch) == id41);
  }
}

TEST_CASE("changes with moving origin invert on the faithful region") {
  std::mt19937 rng(31337);
  for (int trial = 0; trial < 8; ++trial) {
    auto ch = random_change(T62, rng, /*allow_offsets=*/true);
    auto inv = ch.inverse();
    for (auto comp : {ch.then(inv), inv.then(ch)})
      for (int a = 0; a < 3; ++a) {
        Series defect = comp.image(a) - var(T62, a);
        CHECK(defect.truncated_total(T62.d).is_zero());
      }
  }
}

TEST_CASE("composition is associative") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    auto a = random_change(T41, rng, /*allow_offsets=*/false);
    auto b = random_change(T41, rng, /*allow_offsets=*/false);
    auto c = random_change(T41, rng, /*allow_offsets=*/false);
    CHECK(a.then(b).then(c) == a.then(b.then(c)));
  }
  // with offsets the two bracketings agree on the faithful region
  for (int trial = 0; trial < 5; ++trial) {
    auto a = random_change(T41, rng);
    auto b = random_change(T41, rng);
    auto c = random_change(T41, rng);
    auto lhs = a.then(b).then(c);
    auto rhs = a.then(b.then(c));
    for (int k = 0; k < 3; ++k)
      CHECK((lhs.image(k) - rhs.image(k)).truncated_total(T41.d).is_zero());
  }
}

TEST_CASE("apply is a ring morphism and matches composition") {
  std::mt19937 rng(12);
  auto ch = random_change(T62, rng, /*allow_offsets=*/false);
  Series f = random_series(T62, rng);
  Series g = random_series(T62, rng);
  CHECK(ch.apply(f * g) == ch.apply(f) * ch.apply(g));
  CHECK(ch.apply(f + g) == ch.apply(f) + ch.apply(g));
  // pullback through a composite = pullbacks in sequence
  auto ch2 = random_change(T62, rng, /*allow_offsets=*/false);
  CHECK(ch.then(ch2).apply(f) == ch.apply(ch2.apply(f)));
}

TEST_CASE("invalid changes are rejected") {
  Series x = var(T62, 0), y = var(T62, 1), z = var(T62, 2);
  Series one = Series::constant(T62, rat(1));
  CHECK_THROWS_AS(CoordinateChange({x + one, y, z}), DomainError);
  // linear part (x, x, z) is singular
  CHECK_THROWS_AS(CoordinateChange({x, x, z}), DomainError);
  // purely quadratic first image has no linear part at all
  CHECK_THROWS_AS(CoordinateChange({x * x, y, z}), DomainError);
}

TEST_CASE("linear part reads the Jacobian at the origin") {
  Series x = var(T62, 0), y = var(T62, 1), z = var(T62, 2);
  CoordinateChange ch({x + rat(2) * y, y, z + x * x});
  auto L = ch.linear_part0();
  CHECK(L[0][0] == rat(1));
  CHECK(L[0][1] == rat(2));
  CHECK(L[0][2] == rat(0));
  CHECK(L[2][2] == rat(1));
  CHECK(L[2][0] == rat(0));  // x^2 does not contribute to the linear part
}
