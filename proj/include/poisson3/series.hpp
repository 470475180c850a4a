#pragma once

// Truncated polynomial ring Q[x,y,z,eps] / (xyz-degree > D, eps-degree > E).
//
// x, y, z are the spatial coordinates, eps the family parameter. Truncation is
// a box: total degree in (x,y,z) at most D, degree in eps at most E, the two
// bounds independent. The box is an ideal under multiplication and under
// composition with constant-term-free images, so all ring operations are well
// defined on representatives.
//
// Terms are kept in the canonical order: ascending total degree (all four
// exponents), ties broken so that higher powers of earlier variables come
// first with precedence x > y > z > eps. Serialization iterates this order,
// which makes output byte-deterministic.

#include "poisson3/rational.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace poisson3 {

struct Trunc {
  int d = 6;  // max total degree in x,y,z
  int e = 2;  // max degree in eps
  bool operator==(const Trunc&) const = default;
};

// Exponents (i,j,k,l) of x^i y^j z^k eps^l.
using Mono = std::array<int, 4>;

inline constexpr int VAR_X = 0;
inline constexpr int VAR_Y = 1;
inline constexpr int VAR_Z = 2;
inline constexpr int VAR_EPS = 3;

// Shared tables for one truncation box: the canonical monomial list, an
// exponent -> position lookup, and the pairwise product table. Built once per
// (d,e) and cached for the process lifetime (thread safe).
class TruncCtx {
 public:
  static const TruncCtx& get(Trunc t);

  Trunc trunc() const { return t_; }
  int count() const { return static_cast<int>(monos_.size()); }
  const Mono& mono(int idx) const { return monos_[idx]; }
  int xyz_degree(int idx) const { return xyz_deg_[idx]; }

  // -1 when the exponents fall outside the box.
  int index(const Mono& m) const;
  int product(int a, int b) const { return prod_[a * count() + b]; }

 private:
  explicit TruncCtx(Trunc t);
  Trunc t_;
  std::vector<Mono> monos_;
  std::vector<int> lookup_;
  std::vector<int8_t> xyz_deg_;
  std::vector<int32_t> prod_;
};

class Series {
 public:
  using Term = std::pair<int32_t, Rat>;  // (position in canonical order, coeff)

  explicit Series(Trunc t) : ctx_(&TruncCtx::get(t)) {}

  static Series zero(Trunc t) { return Series(t); }
  static Series constant(Trunc t, const Rat& c);
  static Series variable(Trunc t, int var);
  static Series monomial(Trunc t, const Mono& m, const Rat& c);

  Trunc trunc() const { return ctx_->trunc(); }
  const TruncCtx& ctx() const { return *ctx_; }
  const std::vector<Term>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  // All terms of xyz-degree <= dmax vanish (eps-degree unrestricted).
  bool is_zero_through_degree(int dmax) const;

  Rat coeff(const Mono& m) const;
  // Some stored term has a positive exponent on var.
  bool depends_on(int var) const;
  // Largest xyz-degree among stored terms, -1 when zero.
  int max_xyz_degree() const;
  // Smallest combined degree i+j+k+l among stored terms, large value if zero.
  int order() const;

  Series operator-() const;
  Series& operator+=(const Series& o);
  Series& operator-=(const Series& o);
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(const Series& a, const Series& b) {
    return mul(a, b, -1);
  }
  Series& operator*=(const Series& o) { return *this = mul(*this, o, -1); }
  Series& operator*=(const Rat& c);
  friend Series operator*(Series a, const Rat& c) { return a *= c; }
  friend Series operator*(const Rat& c, Series a) { return a *= c; }
  bool operator==(const Series& o) const;

  // Product with terms of xyz-degree > cap dropped (cap < 0: no cap).
  static Series mul(const Series& a, const Series& b, int cap);

  Series pow(int n, int cap = -1) const;

  Series partial(int var) const;
  // Monomial-wise antiderivative; terms pushed outside the box are dropped.
  Series integrate(int var) const;

  // Copy with all terms of xyz-degree > dmax removed.
  Series truncated_xyz(int dmax) const;
  // Copy with all terms of eps-degree > emax removed.
  Series truncated_eps(int emax) const;
  // Copy with all terms of combined degree i+j+k+l > tmax removed. This is
  // the exactness region for compositions whose images move the origin
  // along eps: such substitutions are only faithful where xyz + eps <= d.
  Series truncated_total(int tmax) const;

  // Subseries of terms with given degree i+j in (x,y), exponents kept.
  Series xy_part(int q) const;
  // Subseries of terms with xy-degree >= q.
  Series xy_part_ge(int q) const;
  // Coefficient of z^k as a series without z.
  Series z_coeff(int k) const;
  // Subseries with z-exponent >= k.
  Series z_part_ge(int k) const;
  // Divide by z^k; pre: every term has z-exponent >= k.
  Series z_shift_down(int k) const;
  // Coefficient of eps^l as a series without eps.
  Series eps_coeff(int l) const;
  // Value as a polynomial in eps only (x=y=z=0 part).
  Series eps_part() const;

  // Composition s(img[0], img[1], img[2], eps). Images must have zero
  // constant term (pure-eps terms allowed). cap limits result xyz-degree.
  Series substitute(const std::array<Series, 3>& img, int cap = -1) const;
  // eps -> q(eps); q must have zero constant term and no x,y,z dependence.
  Series substitute_eps(const Series& q) const;

  Rat eval(const Rat& x, const Rat& y, const Rat& z, const Rat& eps) const;
  double eval(double x, double y, double z, double eps) const;

  // 1/s; pre: constant coefficient nonzero.
  Series reciprocal() const;
  // s^(1/n) via the binomial series; pre: constant coefficient exactly 1.
  Series root_unit(unsigned n) const;
  // Exact quotient *this / b; pre: b has nonzero constant coefficient.
  Series divide(const Series& b) const { return mul(*this, b.reciprocal(), -1); }

  // Rebuild the same polynomial in another truncation box. Terms that do not
  // fit the target box are dropped.
  Series refit(Trunc t) const;

  void set_coeff(const Mono& m, const Rat& c);

 private:
  const TruncCtx* ctx_;
  std::vector<Term> terms_;  // sorted by index, no zero coefficients

  void normalize(std::vector<Term>&& raw);
  friend class SeriesBuilder;
};

// Accumulator for building a series by repeated coefficient contributions.
class SeriesBuilder {
 public:
  explicit SeriesBuilder(Trunc t);
  void add(int idx, const Rat& c);
  void add(const Mono& m, const Rat& c);
  void add(const Series& s);
  void add_term_product(int ia, int ib, const Rat& ca, const Rat& cb, int cap);
  Series take();

 private:
  const TruncCtx* ctx_;
  std::vector<Rat> scratch_;
  std::vector<int32_t> touched_;
  std::vector<uint8_t> used_;
};

}  // namespace poisson3
