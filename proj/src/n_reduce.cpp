#include "poisson3/normal_form.hpp"

#include <array>
#include <vector>

namespace poisson3 {

namespace {

// Lie series of the area-preserving plane flow with Hamiltonian h:
//   s -> sum_k X_h^k(s) / k!,  X_h(s) = h_y s_x - h_x s_y.
// Terminates in the box because every application of X_h raises the combined
// (x,y,eps)-order of the argument.
Series lie_transport(const Series& s, const Series& hx, const Series& hy,
                     int guard) {
  Series acc = s, term = s;
  for (int k = 1;; ++k) {
    term = hy * term.partial(VAR_X) - hx * term.partial(VAR_Y);
    if (term.is_zero()) break;
    term *= rat(1, k);
    acc += term;
    if (k > guard)
      throw InternalError("area-preserving flow failed to terminate");
  }
  return acc;
}

// Potential pair carried through the plane reductions. Every map applied has
// constant Jacobian; the matching z-scaling rho keeps the bracket shape, so
// f picks up rho^2 and g picks up rho. Offsets restrict fidelity to the
// region xy-degree + eps-degree <= degree, hence the scrub.
struct PotentialPair {
  Series f, g;
  int degree;
  bool region;

  void scrub() {
    if (!region) return;
    f = f.truncated_total(degree);
    g = g.truncated_total(degree);
  }
  void apply(const std::array<Series, 3>& psi, const Rat& rho) {
    f = (rho * rho) * f.substitute(psi);
    g = rho * g.substitute(psi);
    scrub();
  }
};

// Pure-eps coefficient series of x^{n-i} y^i, i = 0..n, inside s.
std::vector<Series> xy_row_coeffs(const Series& s, int n) {
  Trunc t = s.trunc();
  std::vector<Series> out(n + 1, Series::zero(t));
  for (int i = 0; i <= n; ++i)
    for (int l = 0; l <= t.e; ++l) {
      Rat c = s.coeff(Mono{n - i, i, 0, l});
      if (rat_sign(c) != 0) out[i].set_coeff(Mono{0, 0, 0, l}, c);
    }
  return out;
}

}  // namespace

NFamilyNormalForm n_reduce(const PoissonFamily& p, int degree) {
  if (degree < 4)
    throw DomainError("insufficient truncation degree");

  NormalFormData nf = reduce_to_fg(p, degree);
  Trunc t = nf.f.trunc();
  Series vx = Series::variable(t, VAR_X), vy = Series::variable(t, VAR_Y),
         vz = Series::variable(t, VAR_Z);

  PotentialPair pair{nf.f, nf.g, degree,
                     nf.composed().moves_origin() || singular_origin_drifts(p)};
  pair.scrub();

  // Gate on the eps = 0 jet: g must start quadratic and nondegenerate, f must
  // start above degree two. These coefficients are insensitive to the
  // recentering below, which is O(eps).
  if (!pair.g.xy_part(1).eps_coeff(0).is_zero())
    throw DomainError("not an N singularity");
  auto quad = [&](int i, int j) { return pair.g.coeff(Mono{i, j, 0, 0}); };
  Rat disc = quad(1, 1) * quad(1, 1) - 4 * quad(2, 0) * quad(0, 2);
  if (rat_sign(disc) == 0)
    throw DomainError("center quadratic form is degenerate");
  if (!pair.f.xy_part(2).eps_coeff(0).is_zero() ||
      !pair.f.xy_part(1).eps_coeff(0).is_zero())
    throw DomainError("not an N singularity");

  // Follow the critical point of g along eps and translate it back to the
  // origin. The constant Hessian suffices: each pass gains one eps-order.
  {
    Rat h11 = 2 * quad(2, 0), h12 = quad(1, 1), h22 = 2 * quad(0, 2);
    Rat det = h11 * h22 - h12 * h12;
    Series gx = pair.g.partial(VAR_X), gy = pair.g.partial(VAR_Y);
    Series xs = Series::zero(t), ys = Series::zero(t);
    bool settled = false;
    for (int pass = 0; pass <= t.e + 1 && !settled; ++pass) {
      Series r1 = gx.substitute({xs, ys, vz});
      Series r2 = gy.substitute({xs, ys, vz});
      settled = r1.is_zero() && r2.is_zero();
      if (settled) break;
      xs -= (h22 / det) * r1 - (h12 / det) * r2;
      ys -= (h11 / det) * r2 - (h12 / det) * r1;
    }
    if (!settled)
      throw InternalError("critical point iteration failed to settle");
    if (!xs.is_zero() || !ys.is_zero()) {
      pair.region = true;
      pair.f = pair.f.substitute({vx + xs, vy + ys, vz});
      pair.f -= pair.f.eps_part();
      pair.g = pair.g.substitute({vx + xs, vy + ys, vz});
      pair.g -= pair.g.eps_part();
      pair.scrub();
    }
    if (!pair.g.partial(VAR_X).eps_part().is_zero() ||
        !pair.g.partial(VAR_Y).eps_part().is_zero())
      throw InternalError("recentering left a gradient at the origin");
    if (!pair.f.partial(VAR_X).eps_part().is_zero() ||
        !pair.f.partial(VAR_Y).eps_part().is_zero())
      throw InternalError("dependent potential kept a gradient at the origin");
  }

  // Bring the eps = 0 quadratic part of g to p (x^2 + tau y^2) with p > 0
  // by rational maps of constant Jacobian.
  if (rat_sign(quad(2, 0)) == 0) {
    if (rat_sign(quad(0, 2)) != 0)
      pair.apply({vy, -vx, vz}, rat(1));
    else
      pair.apply({vx + vy, vx - vy, vz}, rat(-1, 2));
  }
  if (rat_sign(quad(1, 1)) != 0) {
    Rat beta = quad(1, 1) / (2 * quad(2, 0));
    pair.apply({vx - beta * vy, vy, vz}, rat(1));
  }
  if (rat_sign(quad(2, 0)) < 0) {
    if (rat_sign(quad(0, 2)) > 0)
      pair.apply({vy, -vx, vz}, rat(1));
    else
      pair.apply({vy, vx, vz}, rat(-1));
  }
  Rat pc = quad(2, 0);
  Rat tau = quad(0, 2) / pc;
  if (rat_sign(pc) <= 0 || rat_sign(tau) == 0 ||
      rat_sign(quad(1, 1)) != 0)
    throw InternalError("quadratic frame normalization failed");
  Series w = vx * vx + tau * (vy * vy);

  // Remove non-radial harmonics degree by degree. At xy-degree n the flow
  // Hamiltonian h solves L(h) = r w^{n/2} - (degree-n part of g) with
  //   L(h) = X_h(p w) = 2 p (x h_y - tau y h_x),
  // an eps-free linear operator, so one exact solve handles all eps-orders
  // at once. Rounds repeat because the eps-tail of the quadratic part feeds
  // the same degree back at strictly higher eps-order.
  int guard = degree + t.e + 8;
  for (int n = 2; n <= degree; ++n) {
    for (int round = 0;; ++round) {
      Series dev = pair.g.xy_part(n);
      if (n == 2) dev -= pc * w;
      if (dev.is_zero()) break;
      if (round > t.e + 4)
        throw InternalError("harmonic removal failed to converge");

      int cols = n + 1 + (n % 2 == 0 ? 1 : 0);
      std::vector<std::vector<Rat>> M(n + 1, std::vector<Rat>(cols, Rat(0)));
      for (int i = 0; i <= n; ++i) {
        int a = n - i, b = i;
        if (b > 0) M[i - 1][i] += 2 * pc * b;
        if (a > 0) M[i + 1][i] -= 2 * pc * tau * a;
      }
      if (n % 2 == 0) {
        Rat binom(1);
        for (int j = 0; 2 * j <= n; ++j) {
          M[2 * j][n + 1] = -binom;
          binom = binom * (n / 2 - j) / (j + 1) * tau;
        }
      }
      std::vector<Series> rhs = xy_row_coeffs(-dev, n);

      // Gauss-Jordan over the rationals with series-valued right-hand side;
      // free columns are pinned to zero.
      std::vector<int> pivot_col;
      int rank = 0;
      for (int col = 0; col < cols && rank <= n; ++col) {
        int pr = -1;
        for (int r = rank; r <= n; ++r)
          if (rat_sign(M[r][col]) != 0) {
            pr = r;
            break;
          }
        if (pr < 0) continue;
        std::swap(M[pr], M[rank]);
        std::swap(rhs[pr], rhs[rank]);
        Rat lead = M[rank][col];
        for (int cc = col; cc < cols; ++cc) M[rank][cc] /= lead;
        rhs[rank] *= 1 / lead;
        for (int r = 0; r <= n; ++r) {
          if (r == rank || rat_sign(M[r][col]) == 0) continue;
          Rat fac = M[r][col];
          for (int cc = col; cc < cols; ++cc)
            M[r][cc] -= fac * M[rank][cc];
          rhs[r] -= fac * rhs[rank];
        }
        pivot_col.push_back(col);
        ++rank;
      }
      for (int r = rank; r <= n; ++r)
        if (!rhs[r].is_zero())
          throw InternalError("harmonic solve is inconsistent");

      Series h = Series::zero(t);
      for (int r = 0; r < rank; ++r) {
        if (pivot_col[r] > n) continue;
        int i = pivot_col[r];
        h += rhs[r] * Series::monomial(t, Mono{n - i, i, 0, 0}, rat(1));
      }
      if (n == 2 && !h.eps_coeff(0).is_zero())
        throw InternalError("quadratic stage produced an eps-free flow");
      if (h.is_zero()) break;  // deviation was purely radial

      Series hx = h.partial(VAR_X), hy = h.partial(VAR_Y);
      pair.f = lie_transport(pair.f, hx, hy, guard);
      pair.g = lie_transport(pair.g, hx, hy, guard);
      pair.scrub();
    }
  }

  // Both potentials are now series in w; read the coefficients off the pure
  // x-powers and check the reconstruction is exact.
  int kmax = degree / 2;
  std::vector<Series> lamt(kmax + 1, Series::zero(t));
  std::vector<Series> mut(kmax + 1, Series::zero(t));
  for (int k = 0; k <= kmax; ++k)
    for (int l = 0; l <= t.e; ++l) {
      Rat cg = pair.g.coeff(Mono{2 * k, 0, 0, l});
      if (rat_sign(cg) != 0) lamt[k].set_coeff(Mono{0, 0, 0, l}, cg);
      Rat cf = pair.f.coeff(Mono{2 * k, 0, 0, l});
      if (rat_sign(cf) != 0) mut[k].set_coeff(Mono{0, 0, 0, l}, cf);
    }
  if (!lamt[0].is_zero() || !mut[0].is_zero())
    throw InternalError("radial potential kept a constant term");
  Series gre = Series::zero(t), fre = Series::zero(t);
  for (int k = 1; k <= kmax; ++k) {
    gre += lamt[k] * w.pow(k);
    fre += mut[k] * w.pow(k);
  }
  if (!(gre == pair.g))
    throw InternalError("harmonic removal left a residue");
  if (!(fre == pair.f))
    throw InternalError("dependent potential failed to become radial");

  // g_x = x (lambda_0 + lambda_1 w + ...) and f_x / g_x = mu_0 + mu_1 w + ...
  // The quotient is a one-variable series division carried out with w parked
  // in the x slot.
  NFamilyNormalForm out{rat_sign(tau), rat_sign(tau) > 0 ? tau : -tau,
                        {},           {},
                        Series::zero(t), Series::zero(t)};
  for (int k = 0; k + 1 <= kmax; ++k)
    out.lambda.push_back(rat(2 * (k + 1)) * lamt[k + 1]);
  Series phi = Series::zero(t), gam = Series::zero(t);
  for (int k = 0; k + 1 <= kmax; ++k)
    for (int l = 0; l <= t.e; ++l) {
      Rat cl = out.lambda[k].coeff(Mono{0, 0, 0, l});
      if (rat_sign(cl) != 0) gam.set_coeff(Mono{k, 0, 0, l}, cl);
      Rat cm = 2 * (k + 1) * mut[k + 1].coeff(Mono{0, 0, 0, l});
      if (rat_sign(cm) != 0) phi.set_coeff(Mono{k, 0, 0, l}, cm);
    }
  Series s = phi.divide(gam);
  for (int k = 0; k + 1 <= kmax; ++k) {
    Series mk = Series::zero(t);
    for (int l = 0; l <= t.e; ++l) {
      Rat c = s.coeff(Mono{k, 0, 0, l});
      if (rat_sign(c) != 0) mk.set_coeff(Mono{0, 0, 0, l}, c);
    }
    out.mu.push_back(mk);
  }
  if (rat_sign(out.lambda[0].coeff(Mono{0, 0, 0, 0})) == 0)
    throw InternalError("leading radial coefficient vanished");
  if (rat_sign(out.mu[0].coeff(Mono{0, 0, 0, 0})) != 0)
    throw InternalError("ratio series fails to vanish at the center");

  // With offsets in play only eps-orders inside the fidelity region are
  // trustworthy: coefficient k draws on xy-degree 2(k+1).
  if (pair.region)
    for (std::size_t k = 0; k < out.lambda.size(); ++k) {
      int emax = degree - 2 * (static_cast<int>(k) + 1);
      out.lambda[k] = out.lambda[k].truncated_eps(emax);
      out.mu[k] = out.mu[k].truncated_eps(emax);
    }
  return out;
}

}  // namespace poisson3
