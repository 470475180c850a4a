#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace poisson3 {

// Exact rational scalar. GMP-backed so numerators and denominators can grow
// without overflow during long reduction pipelines.
using Rat = mpq_class;

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid mathematical input (precondition on the data fails).
struct DomainError : Error {
  using Error::Error;
};

// Malformed serialized input / bad configuration.
struct ParseError : Error {
  using Error::Error;
};

// Internal invariant violated; indicates a bug upstream, not bad user input.
struct InternalError : Error {
  using Error::Error;
};

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline int rat_sign(const Rat& r) { return sgn(r); }

// Canonical text form: "p" for integers, "p/q" otherwise, q > 0, gcd(p,q)=1.
std::string rat_str(const Rat& r);

// Accepts the canonical forms above (optional leading '-').
Rat rat_parse(const std::string& s);

double rat_double(const Rat& r);

// True iff r is the square of a rational.
bool rat_is_square(const Rat& r);

// Exact square root; pre: rat_is_square(r).
Rat rat_sqrt(const Rat& r);

// Exact n-th root if it exists.
std::optional<Rat> rat_nth_root(const Rat& r, unsigned n);

}  // namespace poisson3
