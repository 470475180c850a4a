#include "poisson3/series.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace poisson3 {

namespace {

int total_degree(const Mono& m) { return m[0] + m[1] + m[2] + m[3]; }

// Canonical order: ascending total degree, then higher exponents on earlier
// variables first (x > y > z > eps).
bool canonical_less(const Mono& a, const Mono& b) {
  int da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  for (int v = 0; v < 4; ++v)
    if (a[v] != b[v]) return a[v] > b[v];
  return false;
}

}  // namespace

TruncCtx::TruncCtx(Trunc t) : t_(t) {
  if (t.d < 1 || t.d > 16 || t.e < 0 || t.e > 8)
    throw DomainError("truncation out of supported range (1<=d<=16, 0<=e<=8)");
  for (int i = 0; i <= t.d; ++i)
    for (int j = 0; i + j <= t.d; ++j)
      for (int k = 0; i + j + k <= t.d; ++k)
        for (int l = 0; l <= t.e; ++l) monos_.push_back({i, j, k, l});
  std::sort(monos_.begin(), monos_.end(), canonical_less);

  int n = count();
  lookup_.assign((t.d + 1) * (t.d + 1) * (t.d + 1) * (t.e + 1), -1);
  xyz_deg_.resize(n);
  auto flat = [&](const Mono& m) {
    return ((m[0] * (t.d + 1) + m[1]) * (t.d + 1) + m[2]) * (t.e + 1) + m[3];
  };
  for (int idx = 0; idx < n; ++idx) {
    lookup_[flat(monos_[idx])] = idx;
    xyz_deg_[idx] = static_cast<int8_t>(monos_[idx][0] + monos_[idx][1] + monos_[idx][2]);
  }
  // The quadratic product table pays off only for boxes of moderate size;
  // above that product() falls back to exponent arithmetic.
  if (n <= 1500) {
    prod_.assign(static_cast<std::size_t>(n) * n, -1);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Mono m{monos_[a][0] + monos_[b][0], monos_[a][1] + monos_[b][1],
               monos_[a][2] + monos_[b][2], monos_[a][3] + monos_[b][3]};
        prod_[static_cast<std::size_t>(a) * n + b] = index(m);
      }
  }
}

int TruncCtx::index(const Mono& m) const {
  for (int v = 0; v < 4; ++v)
    if (m[v] < 0) return -1;
  if (m[0] + m[1] + m[2] > t_.d || m[3] > t_.e) return -1;
  return lookup_[((m[0] * (t_.d + 1) + m[1]) * (t_.d + 1) + m[2]) * (t_.e + 1) +
                 m[3]];
}

const TruncCtx& TruncCtx::get(Trunc t) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<TruncCtx>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(t.d, t.e);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::unique_ptr<TruncCtx>(new TruncCtx(t))).first;
  return *it->second;
}

// ---------------------------------------------------------------------------
// SeriesBuilder

SeriesBuilder::SeriesBuilder(Trunc t)
    : ctx_(&TruncCtx::get(t)),
      scratch_(ctx_->count()),
      used_(ctx_->count(), 0) {}

void SeriesBuilder::add(int idx, const Rat& c) {
  if (idx < 0) return;
  if (!used_[idx]) {
    used_[idx] = 1;
    touched_.push_back(idx);
    scratch_[idx] = c;
  } else {
    scratch_[idx] += c;
  }
}

void SeriesBuilder::add(const Mono& m, const Rat& c) { add(ctx_->index(m), c); }

void SeriesBuilder::add(const Series& s) {
  if (!(s.trunc() == ctx_->trunc()))
    throw DomainError("builder and series truncation mismatch");
  for (const auto& [idx, c] : s.terms()) add(idx, c);
}

void SeriesBuilder::add_term_product(int ia, int ib, const Rat& ca,
                                     const Rat& cb, int cap) {
  int p = ctx_->product(ia, ib);
  if (p < 0) return;
  if (cap >= 0 && ctx_->xyz_degree(p) > cap) return;
  if (!used_[p]) {
    used_[p] = 1;
    touched_.push_back(p);
    scratch_[p] = ca * cb;
  } else {
    scratch_[p] += ca * cb;
  }
}

Series SeriesBuilder::take() {
  std::sort(touched_.begin(), touched_.end());
  Series out(ctx_->trunc());
  out.terms_.reserve(touched_.size());
  for (int32_t idx : touched_) {
    if (scratch_[idx] != 0) out.terms_.emplace_back(idx, std::move(scratch_[idx]));
    used_[idx] = 0;
  }
  touched_.clear();
  return out;
}

// ---------------------------------------------------------------------------
// Series basics

Series Series::constant(Trunc t, const Rat& c) {
  Series s(t);
  if (c != 0) s.terms_.emplace_back(s.ctx_->index({0, 0, 0, 0}), c);
  return s;
}

Series Series::variable(Trunc t, int var) {
  Mono m{0, 0, 0, 0};
  m[var] = 1;
  return monomial(t, m, Rat(1));
}

Series Series::monomial(Trunc t, const Mono& m, const Rat& c) {
  Series s(t);
  int idx = s.ctx_->index(m);
  if (idx < 0) throw DomainError("monomial outside the truncation box");
  if (c != 0) s.terms_.emplace_back(idx, c);
  return s;
}

bool Series::is_zero_through_degree(int dmax) const {
  for (const auto& [idx, c] : terms_)
    if (ctx_->xyz_degree(idx) <= dmax) return false;
  return true;
}

Rat Series::coeff(const Mono& m) const {
  int idx = ctx_->index(m);
  if (idx < 0) return Rat(0);
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), idx,
      [](const Term& t, int32_t v) { return t.first < v; });
  if (it != terms_.end() && it->first == idx) return it->second;
  return Rat(0);
}

bool Series::depends_on(int var) const {
  for (const auto& [idx, c] : terms_)
    if (ctx_->mono(idx)[var] > 0) return true;
  return false;
}

int Series::max_xyz_degree() const {
  int m = -1;
  for (const auto& [idx, c] : terms_) m = std::max(m, ctx_->xyz_degree(idx));
  return m;
}

int Series::order() const {
  if (terms_.empty()) return 1 << 20;
  // terms are sorted by ascending total degree
  return total_degree(ctx_->mono(terms_.front().first));
}

Series Series::operator-() const {
  Series out = *this;
  for (auto& [idx, c] : out.terms_) c = -c;
  return out;
}

Series& Series::operator+=(const Series& o) {
  if (!(trunc() == o.trunc())) throw DomainError("mixed truncations");
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.cbegin();
  auto b = o.terms_.cbegin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      merged.push_back(*a++);
    } else if (a == terms_.end() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      Rat c = a->second + b->second;
      if (c != 0) merged.emplace_back(a->first, std::move(c));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

Series& Series::operator-=(const Series& o) { return *this += -o; }

Series& Series::operator*=(const Rat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [idx, v] : terms_) v *= c;
  return *this;
}

bool Series::operator==(const Series& o) const {
  return trunc() == o.trunc() && terms_ == o.terms_;
}

Series Series::mul(const Series& a, const Series& b, int cap) {
  if (!(a.trunc() == b.trunc())) throw DomainError("mixed truncations");
  if (a.is_zero() || b.is_zero()) return Series(a.trunc());
  SeriesBuilder sb(a.trunc());
  for (const auto& [ia, ca] : a.terms_)
    for (const auto& [ib, cb] : b.terms_)
      sb.add_term_product(ia, ib, ca, cb, cap);
  return sb.take();
}

Series Series::pow(int n, int cap) const {
  if (n < 0) throw DomainError("negative power");
  Series out = constant(trunc(), Rat(1));
  for (int i = 0; i < n; ++i) out = mul(out, *this, cap);
  return out;
}

Series Series::partial(int var) const {
  SeriesBuilder sb(trunc());
  for (const auto& [idx, c] : terms_) {
    Mono m = ctx_->mono(idx);
    if (m[var] == 0) continue;
    Rat nc = c * m[var];
    --m[var];
    sb.add(m, nc);
  }
  return sb.take();
}

Series Series::integrate(int var) const {
  SeriesBuilder sb(trunc());
  for (const auto& [idx, c] : terms_) {
    Mono m = ctx_->mono(idx);
    ++m[var];
    int tgt = ctx_->index(m);
    if (tgt < 0) continue;  // falls outside the box
    sb.add(tgt, c / m[var]);
  }
  return sb.take();
}

Series Series::truncated_xyz(int dmax) const {
  Series out(trunc());
  for (const auto& t : terms_)
    if (ctx_->xyz_degree(t.first) <= dmax) out.terms_.push_back(t);
  return out;
}

Series Series::truncated_eps(int emax) const {
  Series out(trunc());
  for (const auto& t : terms_)
    if (ctx_->mono(t.first)[3] <= emax) out.terms_.push_back(t);
  return out;
}

Series Series::truncated_total(int tmax) const {
  Series out(trunc());
  for (const auto& t : terms_)
    if (total_degree(ctx_->mono(t.first)) <= tmax) out.terms_.push_back(t);
  return out;
}

Series Series::xy_part(int q) const {
  Series out(trunc());
  for (const auto& t : terms_) {
    const Mono& m = ctx_->mono(t.first);
    if (m[0] + m[1] == q) out.terms_.push_back(t);
  }
  return out;
}

Series Series::xy_part_ge(int q) const {
  Series out(trunc());
  for (const auto& t : terms_) {
    const Mono& m = ctx_->mono(t.first);
    if (m[0] + m[1] >= q) out.terms_.push_back(t);
  }
  return out;
}

Series Series::z_coeff(int k) const {
  SeriesBuilder sb(trunc());
  for (const auto& [idx, c] : terms_) {
    Mono m = ctx_->mono(idx);
    if (m[2] != k) continue;
    m[2] = 0;
    sb.add(m, c);
  }
  return sb.take();
}

Series Series::z_part_ge(int k) const {
  Series out(trunc());
  for (const auto& t : terms_)
    if (ctx_->mono(t.first)[2] >= k) out.terms_.push_back(t);
  return out;
}

Series Series::z_shift_down(int k) const {
  SeriesBuilder sb(trunc());
  for (const auto& [idx, c] : terms_) {
    Mono m = ctx_->mono(idx);
    if (m[2] < k) throw DomainError("z_shift_down: term not divisible");
    m[2] -= k;
    sb.add(m, c);
  }
  return sb.take();
}

Series Series::eps_coeff(int l) const {
  SeriesBuilder sb(trunc());
  for (const auto& [idx, c] : terms_) {
    Mono m = ctx_->mono(idx);
    if (m[3] != l) continue;
    m[3] = 0;
    sb.add(m, c);
  }
  return sb.take();
}

Series Series::eps_part() const {
  Series out(trunc());
  for (const auto& t : terms_) {
    const Mono& m = ctx_->mono(t.first);
    if (m[0] == 0 && m[1] == 0 && m[2] == 0) out.terms_.push_back(t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generic sparse-Horner evaluation; shared by substitution and point
// evaluation. Entries must be sorted descending-lex by exponents.

namespace {

struct EvalEntry {
  Mono m;
  const Rat* c;
};

template <class V, class Tr>
V eval_rec(const std::vector<EvalEntry>& ents, std::size_t lo, std::size_t hi,
           int level, Tr& tr) {
  if (level == 4) return tr.from_rat(*ents[lo].c);
  V acc = tr.zero();
  bool have = false;
  int prev = 0;
  std::size_t p = lo;
  while (p < hi) {
    int e = ents[p].m[level];
    std::size_t q = p;
    while (q < hi && ents[q].m[level] == e) ++q;
    V grp = eval_rec<V>(ents, p, q, level + 1, tr);
    if (!have) {
      acc = std::move(grp);
      have = true;
    } else {
      tr.mul_pow(acc, level, prev - e);
      tr.add(acc, grp);
    }
    prev = e;
    p = q;
  }
  if (have && prev > 0) tr.mul_pow(acc, level, prev);
  return acc;
}

template <class V, class Tr>
V eval_series(const Series& s, Tr& tr) {
  if (s.is_zero()) return tr.zero();
  std::vector<EvalEntry> ents;
  ents.reserve(s.terms().size());
  const TruncCtx& cx = s.ctx();
  for (const auto& [idx, c] : s.terms()) ents.push_back({cx.mono(idx), &c});
  std::sort(ents.begin(), ents.end(), [](const EvalEntry& a, const EvalEntry& b) {
    return a.m > b.m;  // descending lexicographic
  });
  return eval_rec<V>(ents, 0, ents.size(), 0, tr);
}

struct SeriesTraits {
  Trunc t;
  std::array<const Series*, 4> vals;
  int cap;
  Series zero() const { return Series(t); }
  Series from_rat(const Rat& c) const { return Series::constant(t, c); }
  void add(Series& a, const Series& b) const { a += b; }
  void mul_pow(Series& a, int level, int n) const {
    for (int i = 0; i < n; ++i) a = Series::mul(a, *vals[level], cap);
  }
};

struct RatTraits {
  std::array<Rat, 4> vals;
  Rat zero() const { return Rat(0); }
  Rat from_rat(const Rat& c) const { return c; }
  void add(Rat& a, const Rat& b) const { a += b; }
  void mul_pow(Rat& a, int level, int n) const {
    for (int i = 0; i < n; ++i) a *= vals[level];
  }
};

struct DoubleTraits {
  std::array<double, 4> vals;
  double zero() const { return 0.0; }
  double from_rat(const Rat& c) const { return rat_double(c); }
  void add(double& a, double b) const { a += b; }
  void mul_pow(double& a, int level, int n) const {
    for (int i = 0; i < n; ++i) a *= vals[level];
  }
};

}  // namespace

Series Series::substitute(const std::array<Series, 3>& img, int cap) const {
  for (const Series& im : img) {
    if (!(im.trunc() == trunc())) throw DomainError("mixed truncations");
    if (im.coeff({0, 0, 0, 0}) != 0)
      throw DomainError("substitution image has a constant term");
  }
  Series eps = variable(trunc(), VAR_EPS);
  SeriesTraits tr{trunc(), {&img[0], &img[1], &img[2], &eps}, cap};
  return eval_series<Series>(*this, tr);
}

Series Series::substitute_eps(const Series& q) const {
  if (!(q.trunc() == trunc())) throw DomainError("mixed truncations");
  if (q.coeff({0, 0, 0, 0}) != 0 || !(q.eps_part() == q))
    throw DomainError("eps image must be a constant-free series in eps");
  Series vx = variable(trunc(), VAR_X);
  Series vy = variable(trunc(), VAR_Y);
  Series vz = variable(trunc(), VAR_Z);
  SeriesTraits tr{trunc(), {&vx, &vy, &vz, &q}, -1};
  return eval_series<Series>(*this, tr);
}

Rat Series::eval(const Rat& x, const Rat& y, const Rat& z, const Rat& eps) const {
  RatTraits tr{{x, y, z, eps}};
  return eval_series<Rat>(*this, tr);
}

double Series::eval(double x, double y, double z, double eps) const {
  DoubleTraits tr{{x, y, z, eps}};
  return eval_series<double>(*this, tr);
}

// ---------------------------------------------------------------------------

Series Series::reciprocal() const {
  Rat c = coeff({0, 0, 0, 0});
  if (c == 0) throw DomainError("reciprocal of a series with zero constant term");
  // 1/s = (1/c) * sum_k u^k with u = 1 - s/c (u has positive order).
  Series u = constant(trunc(), Rat(1)) - *this * (Rat(1) / c);
  int kmax = trunc().d + trunc().e;
  Series acc = constant(trunc(), Rat(1));
  for (int k = 0; k < kmax; ++k) acc = acc * u + constant(trunc(), Rat(1));
  return acc * (Rat(1) / c);
}

Series Series::root_unit(unsigned n) const {
  if (n == 0) throw DomainError("0th root");
  if (coeff({0, 0, 0, 0}) != 1)
    throw DomainError("root_unit needs constant coefficient 1");
  Series u = *this - constant(trunc(), Rat(1));
  int kmax = trunc().d + trunc().e;
  // binomial coefficients binom(1/n, k)
  std::vector<Rat> b(kmax + 1);
  b[0] = 1;
  Rat alpha = rat(1, n);
  for (int k = 1; k <= kmax; ++k) b[k] = b[k - 1] * (alpha - (k - 1)) / k;
  Series acc = constant(trunc(), b[kmax]);
  for (int k = kmax - 1; k >= 0; --k)
    acc = acc * u + constant(trunc(), b[k]);
  return acc;
}

Series Series::refit(Trunc t) const {
  Series out(t);
  SeriesBuilder sb(t);
  for (const auto& [idx, c] : terms_) sb.add(ctx_->mono(idx), c);
  return sb.take();
}

void Series::set_coeff(const Mono& m, const Rat& c) {
  int idx = ctx_->index(m);
  if (idx < 0) throw DomainError("set_coeff outside the truncation box");
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), idx,
      [](const Term& t, int32_t v) { return t.first < v; });
  bool present = it != terms_.end() && it->first == idx;
  if (c == 0) {
    if (present) terms_.erase(it);
  } else if (present) {
    it->second = c;
  } else {
    terms_.emplace(it, idx, c);
  }
}

}  // namespace poisson3
