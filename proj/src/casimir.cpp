#include "poisson3/normal_form.hpp"

#include <vector>

namespace poisson3 {

namespace {

// Row-reduce M x = rhs over the rationals. Free unknowns are pinned to
// zero; returns false when the system is inconsistent.
bool solve_rational(std::vector<std::vector<Rat>> M, std::vector<Rat> rhs,
                    std::vector<Rat>& out, int cols) {
  int rows = static_cast<int>(M.size());
  std::vector<int> pivot_col;
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pr = -1;
    for (int r = rank; r < rows; ++r)
      if (M[r][c] != 0) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    std::swap(M[rank], M[pr]);
    std::swap(rhs[rank], rhs[pr]);
    Rat lead = M[rank][c];
    for (int cc = c; cc < cols; ++cc) M[rank][cc] = M[rank][cc] / lead;
    rhs[rank] = rhs[rank] / lead;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || M[r][c] == 0) continue;
      Rat k = M[r][c];
      for (int cc = c; cc < cols; ++cc)
        M[r][cc] = M[r][cc] - k * M[rank][cc];
      rhs[r] = rhs[r] - k * rhs[rank];
    }
    pivot_col.push_back(c);
    ++rank;
  }
  for (int r = rank; r < rows; ++r)
    if (rhs[r] != 0) return false;
  out.assign(cols, Rat(0));
  for (int r = 0; r < rank; ++r) out[pivot_col[r]] = rhs[r];
  return true;
}

}  // namespace

CasimirFamily a_casimir(const PoissonFamily& p, int degree) {
  NormalFormData nf = reduce_to_fg(p, degree);
  Trunc t = nf.f.trunc();
  CoordinateChange ch = nf.composed();
  bool region = ch.moves_origin() || singular_origin_drifts(p);
  const Series& f = nf.f;
  const Series& g = nf.g;

  // Solve g = sum_{k>=1} lam_{k,l} eps^l f^k coefficientwise over the plane
  // monomials. f has no constant or pure-eps part, so powers beyond the box
  // degree contribute nothing.
  int kmax = degree;
  std::vector<Series> fpow;
  fpow.push_back(f);
  for (int k = 2; k <= kmax; ++k) fpow.push_back(fpow.back() * f);

  int cols = kmax * (t.e + 1);
  std::vector<std::vector<Rat>> M;
  std::vector<Rat> rhs;
  for (int i = 0; i <= t.d; ++i)
    for (int j = 0; i + j <= t.d; ++j)
      for (int l = 0; l <= t.e; ++l) {
        if (region && i + j + l > degree) continue;
        std::vector<Rat> row(cols, Rat(0));
        for (int k = 1; k <= kmax; ++k)
          for (int le = 0; le <= l; ++le)
            row[(k - 1) * (t.e + 1) + le] =
                fpow[k - 1].coeff(Mono{i, j, 0, l - le});
        M.push_back(std::move(row));
        rhs.push_back(g.coeff(Mono{i, j, 0, l}));
      }
  std::vector<Rat> lam;
  if (!solve_rational(std::move(M), std::move(rhs), lam, cols))
    throw DomainError("not algebraically isolated at this degree");

  // d lambda / dw as a series with w in the x slot.
  Series lamp = Series::zero(t);
  for (int k = 1; k <= kmax; ++k)
    for (int l = 0; l <= t.e; ++l) {
      Rat c = lam[(k - 1) * (t.e + 1) + l];
      if (c != 0 && k - 1 <= t.d)
        lamp.set_coeff(Mono{k - 1, 0, 0, l}, lamp.coeff(Mono{k - 1, 0, 0, l}) +
                                                 rat(k) * c);
    }

  // z-power recursion of the ansatz: G_0 = w, G_1 = 0, and
  //   (j+1) G_{j+1} = G_{j-1}' - j lambda' G_j.
  std::vector<Series> gj;
  gj.push_back(Series::variable(t, VAR_X));
  gj.push_back(Series::zero(t));
  for (int j = 1; j < degree; ++j)
    gj.push_back((gj[j - 1].partial(VAR_X) - rat(j) * (lamp * gj[j])) *
                 rat(1, j + 1));

  // Assemble G over (z, w), keeping only the part that can reach the box
  // after w is replaced by f (w counts twice).
  Series G = Series::zero(t);
  for (int j = 0; j <= degree && j < static_cast<int>(gj.size()); ++j) {
    Series zj = Series::monomial(t, Mono{0, 0, j, 0}, Rat(1));
    G = G + zj * gj[j];
  }
  Series Gtrim = Series::zero(t);
  for (const auto& term : G.terms()) {
    Mono m = G.ctx().mono(term.first);
    if (m[VAR_Z] + 2 * m[VAR_X] <= degree) Gtrim.set_coeff(m, term.second);
  }

  Series C = Gtrim.substitute(
      {f, Series::zero(t), Series::variable(t, VAR_Z)});
  C = ch.apply(C);
  if (region) C = C.truncated_total(degree);

  // The conserved quantity must annihilate all three brackets of the input
  // family within the window the reduction determines.
  PoissonFamily pref(p.xy.refit(t), p.yz.refit(t), p.zx.refit(t));
  for (int v = 0; v < 3; ++v) {
    Series r = poisson_bracket(pref, C, Series::variable(t, v));
    bool ok = region ? r.truncated_total(degree - 1).is_zero()
                     : r.is_zero_through_degree(degree - 2);
    if (!ok)
      throw InternalError("conserved quantity fails the bracket identities");
  }

  return CasimirFamily{C, Gtrim};
}

}  // namespace poisson3
