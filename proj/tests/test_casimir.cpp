#include "poisson3/normal_form.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <random>

using namespace poisson3;
using namespace poisson3::testing;

namespace {

const Trunc T62{6, 2};

Series sq(int v) { return var(T62, v) * var(T62, v); }

// All three bracket identities of the conserved quantity, checked as full
// box series.
bool annihilates(const PoissonFamily& p, const Series& C) {
  for (int v = 0; v < 3; ++v)
    if (!poisson_bracket(p, C, Series::variable(C.trunc(), v)).is_zero())
      return false;
  return true;
}

}  // namespace

TEST_CASE("quadratic germ with vanishing second potential") {
  // f = x^2 + y^2, g = 0: the conserved quantity is x^2 + y^2 + z^2/2 on
  // the nose, and the ansatz stops at w + z^2/2.
  PoissonFamily p = from_fg(sq(0) + sq(1), Series::zero(T62));
  CasimirFamily cf = a_casimir(p, 6);
  Series expect = sq(0) + sq(1) + rat(1, 2) * sq(2);
  CHECK(cf.C == expect);
  Series gexpect = var(T62, 0) + rat(1, 2) * sq(2);
  CHECK(cf.G == gexpect);
  CHECK(annihilates(p, cf.C));
}

TEST_CASE("identity relation gives the alternating ansatz tail") {
  // g = f: the ansatz collapses to w + sum_{j>=2} (-z)^j / j.
  Series u = sq(0) + var(T62, 1) * sq(1);
  PoissonFamily p = from_fg(u, u);
  CasimirFamily cf = a_casimir(p, 6);
  CHECK(cf.G.coeff(Mono{1, 0, 0, 0}) == rat(1));
  CHECK(cf.G.coeff(Mono{0, 0, 1, 0}) == rat(0));
  for (int j = 2; j <= 6; ++j) {
    Rat want = rat(j % 2 == 0 ? 1 : -1, j);
    CHECK(cf.G.coeff(Mono{0, 0, j, 0}) == want);
  }
  CHECK(annihilates(p, cf.C));
}

TEST_CASE("eps-dependent relation series is recovered") {
  // g = eps f + f^2 - 3 f^3 forces lambda = eps w + w^2 - 3 w^3.
  Series u = sq(0) + sq(1), eps = var(T62, 3);
  PoissonFamily p = from_fg(u, eps * u + u * u - rat(3) * (u * u * u));
  CasimirFamily cf = a_casimir(p, 6);
  CHECK(cf.G.coeff(Mono{1, 0, 0, 0}) == rat(1));
  CHECK(cf.G.coeff(Mono{0, 0, 2, 0}) == rat(1, 2));
  // z^3 coefficient of the ansatz is -lambda'(0)/3 = -eps/3.
  CHECK(cf.G.coeff(Mono{0, 0, 3, 0}) == rat(0));
  CHECK(cf.G.coeff(Mono{0, 0, 3, 1}) == rat(-1, 3));
  CHECK(annihilates(p, cf.C));
}

TEST_CASE("conserved quantity survives a change of coordinates") {
  Series u = sq(0) + var(T62, 1) * sq(1);
  PoissonFamily base = from_fg(u, u);
  std::mt19937 rng(911);
  for (int trial = 0; trial < 4; ++trial) {
    CoordinateChange ch = random_change(T62, rng, /*allow_offsets=*/false);
    PoissonFamily moved = pushforward(base, ch);
    CasimirFamily cf = a_casimir(moved, 6);
    CHECK(annihilates(moved, cf.C));
  }
}

TEST_CASE("unrelatable potentials are rejected") {
  // g = y cannot be a series in f = y^2/2 (a V germ).
  PoissonFamily v_germ = from_fg(rat(1, 2) * sq(1), var(T62, 1));
  CHECK_THROWS_WITH_AS(a_casimir(v_germ, 6),
                       "not algebraically isolated at this degree",
                       DomainError);
  // g = w cannot be a series in f = -eps w + w^2 (an N germ).
  Series w = sq(0) + sq(1), eps = var(T62, 3);
  PoissonFamily n_germ = from_fg(-(eps * w) + w * w, w);
  CHECK_THROWS_WITH_AS(a_casimir(n_germ, 6),
                       "not algebraically isolated at this degree",
                       DomainError);
}
