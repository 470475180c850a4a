#include "poisson3/normal_form.hpp"

#include <string>
#include <vector>

namespace poisson3 {

namespace {

// Coefficient of y^i as a polynomial in eps alone.
Series y_row(const Series& s, int i) {
  Trunc t = s.trunc();
  Series out = Series::zero(t);
  for (int l = 0; l <= t.e; ++l) {
    Rat c = s.coeff(Mono{0, i, 0, l});
    if (c != 0) out.set_coeff(Mono{0, 0, 0, l}, c);
  }
  return out;
}

}  // namespace

ANormalForm a_normal_form(const PoissonFamily& p, int degree) {
  // The Casimir solve is the isolation gate; its z = 0 slice is exactly the
  // dependent potential, so the splitting happens on f directly.
  a_casimir(p, degree);
  NormalFormData nf = reduce_to_fg(p, degree);
  Trunc t = nf.f.trunc();
  bool region = nf.composed().moves_origin() || singular_origin_drifts(p);
  Series W = nf.f;
  if (region) W = W.truncated_total(degree);

  Series vx = Series::variable(t, VAR_X);
  Series vy = Series::variable(t, VAR_Y);
  Series vz = Series::variable(t, VAR_Z);

  // The quadratic part at eps = 0 must have rank exactly one.
  Rat qa = W.coeff(Mono{2, 0, 0, 0});
  Rat qb = W.coeff(Mono{1, 1, 0, 0});
  Rat qc = W.coeff(Mono{0, 2, 0, 0});
  if (qb * qb - 4 * qa * qc != 0 || (qa == 0 && qb == 0 && qc == 0))
    throw DomainError("not an A singularity");
  if (qa == 0) {
    // qb = 0 follows from the vanishing discriminant; swap the plane axes.
    W = W.substitute({vy, vx, vz});
    qa = qc;
  } else if (qb != 0) {
    W = W.substitute({vx - (qb / (2 * qa)) * vy, vy, vz});
  }
  int sign = rat_sign(qa);

  // Critical curve of the square direction: Newton with the constant slope
  // 2 qa. Each pass raises the residual order, so in-box it settles exactly.
  Series wx = W.partial(VAR_X);
  Series xs = Series::zero(t);
  bool settled = false;
  for (int pass = 0; pass <= t.d + t.e + 3; ++pass) {
    Series r = wx.substitute({xs, vy, vz});
    if (r.is_zero()) {
      settled = true;
      break;
    }
    xs = xs - (Rat(1) / (2 * qa)) * r;
  }
  if (!settled) throw InternalError("plane split failed to settle");

  Series Y = W.substitute({xs, vy, vz});
  Y = Y - Y.eps_part();
  if (Y.coeff(Mono{0, 1, 0, 0}) != 0 || Y.coeff(Mono{0, 2, 0, 0}) != 0)
    throw InternalError("plane split left low terms");

  int m = 0;
  for (int i = 3; i <= t.d; ++i)
    if (Y.coeff(Mono{0, i, 0, 0}) != 0) {
      m = i - 1;
      break;
    }
  if (m == 0)
    throw DomainError("not algebraically isolated at degree " +
                      std::to_string(degree));

  Rat c0 = Y.coeff(Mono{0, m + 1, 0, 0});
  if (m % 2 == 0 && rat_sign(c0) < 0) {
    Y = Y.substitute({vx, rat(-1) * vy, vz});
    c0 = Y.coeff(Mono{0, m + 1, 0, 0});
  }
  int delta = m % 2 == 1 ? rat_sign(c0) : 1;

  // Versal sweep: kill the lex-lowest deviation (eps order, then y degree).
  // Translates clear the y^m slot, scalings pin the lead coefficient,
  // higher tails are pushed up by y -> y + b y^{j-m}. Every substitution
  // creates only lex-higher terms, so the sweep terminates.
  int guard = 4 * (t.d + 2) * (t.e + 2);
  while (guard-- > 0) {
    int dl = -1, di = -1;
    Rat dc;
    for (int l = 0; l <= t.e && dl < 0; ++l)
      for (int i = 1; i <= t.d; ++i) {
        if (i < m) continue;
        if (i == m && l == 0) continue;
        if (i == m + 1 && l == 0) continue;
        Rat c = Y.coeff(Mono{0, i, 0, l});
        if (c != 0) {
          dl = l;
          di = i;
          dc = c;
          break;
        }
      }
    if (dl < 0) break;
    Rat step = Rat(0) - dc / (rat(m + 1) * c0);
    Series mono = Series::monomial(t, Mono{0, 0, 0, dl}, step);
    Series img = di == m ? vy + mono
                 : di == m + 1 ? vy + mono * vy
                               : vy + mono * vy.pow(di - m);
    Y = Y.substitute({vx, img, vz});
    Y = Y - Y.eps_part();
  }
  if (guard <= 0) throw InternalError("versal reduction failed to terminate");
  if (Y.coeff(Mono{0, m, 0, 0}) != 0)
    throw InternalError("versal reduction left a tail");

  std::vector<Series> ht;
  for (int i = 1; i <= m - 1; ++i) {
    Series row = y_row(Y, i);
    if (region) row = row.truncated_eps(degree - i - 1);
    ht.push_back(row);
  }

  Rat habs = c0;
  if (rat_sign(habs) < 0) habs = Rat(0) - habs;
  Rat hc = habs * rat(m + 1);

  std::vector<Series> h;
  for (int j = 0; j + 1 <= m - 1; ++j)
    h.push_back((rat(j + 1) / hc) * ht[j]);

  return ANormalForm{sign, m, delta, std::move(h),
                     Series::constant(t, hc)};
}

}  // namespace poisson3
