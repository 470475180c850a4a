#include "poisson3/rational.hpp"

namespace poisson3 {

std::string rat_str(const Rat& r) {
  // mpq_class keeps values canonicalized as long as we never poke the raw
  // mpq_t, so get_str() already gives "p" or "p/q" with q > 0.
  return r.get_str();
}

Rat rat_parse(const std::string& s) {
  if (s.empty()) throw ParseError("empty rational literal");
  std::size_t pos = 0;
  auto digits = [&](bool sign_ok) {
    if (sign_ok && pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    std::size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start) throw ParseError("bad rational literal: " + s);
  };
  digits(true);
  if (pos < s.size()) {
    if (s[pos] != '/') throw ParseError("bad rational literal: " + s);
    ++pos;
    digits(false);
    if (pos != s.size()) throw ParseError("bad rational literal: " + s);
  }
  Rat r;
  if (r.set_str(s, 10) != 0) throw ParseError("bad rational literal: " + s);
  if (r.get_den() == 0) throw ParseError("zero denominator: " + s);
  r.canonicalize();
  return r;
}

double rat_double(const Rat& r) { return r.get_d(); }

bool rat_is_square(const Rat& r) {
  if (sgn(r) < 0) return false;
  return mpz_perfect_square_p(r.get_num().get_mpz_t()) &&
         mpz_perfect_square_p(r.get_den().get_mpz_t());
}

Rat rat_sqrt(const Rat& r) {
  if (!rat_is_square(r)) throw DomainError("rat_sqrt of a non-square");
  mpz_class num, den;
  mpz_sqrt(num.get_mpz_t(), r.get_num().get_mpz_t());
  mpz_sqrt(den.get_mpz_t(), r.get_den().get_mpz_t());
  return Rat(num, den);
}

std::optional<Rat> rat_nth_root(const Rat& r, unsigned n) {
  if (n == 0) throw DomainError("0th root");
  if (sgn(r) < 0 && n % 2 == 0) return std::nullopt;
  mpz_class num, den;
  int exact_num = mpz_root(num.get_mpz_t(), r.get_num().get_mpz_t(), n);
  int exact_den = mpz_root(den.get_mpz_t(), r.get_den().get_mpz_t(), n);
  if (!exact_num || !exact_den) return std::nullopt;
  return Rat(num, den);
}

}  // namespace poisson3
