#include "poisson3/bifurcation.hpp"

#include "poisson3/normal_form.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <thread>

namespace poisson3 {

namespace {

// ---------------------------------------------------------------------------
// Symbolic side.

// Planar field restricted to its invariant graph z = zeta(x, eps), carried
// with the parameter. The frame is built from the eps = 0 linear part (one
// zero and one nonzero eigenvalue); Newton passes raise the defect order in
// the combined (x, eps) filtration, so the graph settles inside the box.
Series center_restriction(const PlanarFamily& pf) {
  const Trunc t = pf.alpha.trunc();
  const Series a0 = pf.alpha.eps_coeff(0);
  const Series b0 = pf.beta.eps_coeff(0);
  const Rat ax = a0.coeff(Mono{1, 0, 0, 0}), az = a0.coeff(Mono{0, 0, 1, 0});
  const Rat bx = b0.coeff(Mono{1, 0, 0, 0}), bz = b0.coeff(Mono{0, 0, 1, 0});
  const Rat tau = ax + bz;
  if (tau == 0 || ax * bz - az * bx != 0)
    throw InternalError("center frame expects one zero eigenvalue");

  Rat k1 = az, k2 = Rat(0) - ax;
  if (k1 == 0 && k2 == 0) {
    k1 = bz;
    k2 = Rat(0) - bx;
  }
  Rat w1 = az, w2 = tau - ax;
  if (w1 == 0 && w2 == 0) {
    w1 = tau - bz;
    w2 = bx;
  }
  const Rat dT = k1 * w2 - k2 * w1;
  if (dT == 0) throw InternalError("center frame is degenerate");

  const Series vx = Series::variable(t, VAR_X);
  const Series vy = Series::variable(t, VAR_Y);
  const Series vz = Series::variable(t, VAR_Z);
  const Series xi = k1 * vx + w1 * vz;
  const Series zi = k2 * vx + w2 * vz;
  const Series au = pf.alpha.substitute({xi, vy, zi});
  const Series bu = pf.beta.substitute({xi, vy, zi});
  const Series af = (Rat(1) / dT) * (w2 * au - w1 * bu);
  const Series bf = (Rat(1) / dT) * (k1 * bu - k2 * au);

  Series zeta = Series::zero(t);
  bool settled = false;
  for (int pass = 0; pass <= t.d + t.e + 2; ++pass) {
    const Series defect = bf.substitute({vx, vy, zeta}) -
                          zeta.partial(VAR_X) * af.substitute({vx, vy, zeta});
    if (defect.is_zero()) {
      settled = true;
      break;
    }
    zeta = zeta - (Rat(1) / tau) * defect;
  }
  if (!settled) throw InternalError("center curve failed to settle");

  // Time is normalized so the transverse eigenvalue is one; signs of the
  // restricted coefficients then mean what they say.
  return (Rat(1) / tau) * af.substitute({vx, vy, zeta});
}

PointClass curve_kind_from_kappa(const KappaInvariants& k) {
  if (rat_sign(k.kappa2) < 0) return PointClass::V_focus;
  return rat_sign(k.kappa1) > 0 ? PointClass::V_node : PointClass::V_saddle;
}

PointClass v_point_class(VKind k) {
  switch (k) {
    case VKind::node: return PointClass::V_node;
    case VKind::saddle: return PointClass::V_saddle;
    case VKind::focus: return PointClass::V_focus;
    default: return PointClass::V_saddle_node;
  }
}

// ---------------------------------------------------------------------------
// Numeric side.

double ipow(double b, int n) {
  double r = 1;
  for (; n > 0; --n) r *= b;
  return r;
}

// Bracket component with eps folded into the coefficients: a plain
// polynomial in (x, y, z) evaluated together with its spatial gradient.
struct Poly3 {
  struct Term {
    int i, j, k;
    double c;
  };
  std::vector<Term> t;

  void eval(const std::array<double, 3>& u, double& v,
            std::array<double, 3>& g) const {
    v = 0;
    g = {0, 0, 0};
    for (const Term& m : t) {
      const double px = ipow(u[0], m.i), py = ipow(u[1], m.j),
                   pz = ipow(u[2], m.k);
      v += m.c * px * py * pz;
      if (m.i > 0) g[0] += m.c * m.i * ipow(u[0], m.i - 1) * py * pz;
      if (m.j > 0) g[1] += m.c * m.j * px * ipow(u[1], m.j - 1) * pz;
      if (m.k > 0) g[2] += m.c * m.k * px * py * ipow(u[2], m.k - 1);
    }
  }
};

Poly3 fold_eps(const Series& s, double eps) {
  std::map<std::array<int, 3>, double> acc;
  for (const auto& [idx, c] : s.terms()) {
    const Mono& m = s.ctx().mono(idx);
    acc[{m[0], m[1], m[2]}] += c.get_d() * ipow(eps, m[3]);
  }
  Poly3 p;
  for (const auto& [e, c] : acc)
    if (c != 0.0) p.t.push_back({e[0], e[1], e[2], c});
  return p;
}

// Components in the order (xy, yz, zx); the structure tensor of the
// linearization reads off their gradients.
std::array<Poly3, 3> fold_family(const PoissonFamily& p, double eps) {
  return {fold_eps(p.xy, eps), fold_eps(p.yz, eps), fold_eps(p.zx, eps)};
}

PointClass classify_linearization(const std::array<Poly3, 3>& br,
                                  const std::array<double, 3>& pt,
                                  double margin, double& margin_out) {
  margin_out = 0;
  double v;
  std::array<double, 3> gxy, gyz, gzx;
  br[0].eval(pt, v, gxy);
  br[1].eval(pt, v, gyz);
  br[2].eval(pt, v, gzx);

  // c3[i][j][k]: coefficient of e_k in [e_i, e_j].
  double c3[3][3][3] = {};
  for (int k = 0; k < 3; ++k) {
    c3[0][1][k] = gxy[k];
    c3[1][0][k] = -gxy[k];
    c3[1][2][k] = gyz[k];
    c3[2][1][k] = -gyz[k];
    c3[2][0][k] = gzx[k];
    c3[0][2][k] = -gzx[k];
  }
  double scale = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) scale = std::max(scale, std::fabs(c3[i][j][k]));
  if (scale == 0) return PointClass::unresolved;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c3[i][j][k] /= scale;

  // Killing form: nondegenerate exactly for the semisimple pair.
  Eigen::Matrix3d K;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double s = 0;
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) s += c3[a][c][d] * c3[b][d][c];
      K(a, b) = s;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> kes(K);
  const Eigen::Vector3d lam = kes.eigenvalues();  // ascending
  const double kmax = std::max(std::fabs(lam(0)), std::fabs(lam(2)));
  if (kmax > 0) {
    const double mss =
        std::min({std::fabs(lam(0)), std::fabs(lam(1)), std::fabs(lam(2))}) /
        kmax;
    if (mss > margin) {
      margin_out = mss;
      return lam(2) < 0 ? PointClass::so3 : PointClass::sl2;
    }
  }

  // Solvable route: the derived span and the action of a complement on it.
  Eigen::Matrix3d S;
  for (int k = 0; k < 3; ++k) {
    S(k, 0) = c3[0][1][k];
    S(k, 1) = c3[1][2][k];
    S(k, 2) = c3[2][0][k];
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(S, Eigen::ComputeFullU);
  const Eigen::Vector3d sig = svd.singularValues();
  if (sig(0) == 0) return PointClass::unresolved;
  const int rank = (sig(1) > margin * sig(0) ? 1 : 0) +
                   (sig(2) > margin * sig(0) ? 1 : 0) + 1;
  if (rank != 2) return PointClass::unresolved;

  const Eigen::Vector3d d1 = svd.matrixU().col(0);
  const Eigen::Vector3d d2 = svd.matrixU().col(1);
  const Eigen::Vector3d nc = svd.matrixU().col(2);
  auto ad = [&](const Eigen::Vector3d& u, const Eigen::Vector3d& w) {
    Eigen::Vector3d r = Eigen::Vector3d::Zero();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) r(k) += u(i) * w(j) * c3[i][j][k];
    return r;
  };
  Eigen::Matrix2d B;
  const Eigen::Vector3d bd1 = ad(nc, d1), bd2 = ad(nc, d2);
  B(0, 0) = d1.dot(bd1);
  B(1, 0) = d2.dot(bd1);
  B(0, 1) = d1.dot(bd2);
  B(1, 1) = d2.dot(bd2);
  const double bscale = B.cwiseAbs().maxCoeff();
  if (bscale == 0) return PointClass::unresolved;

  const double tr = B.trace() / bscale;
  if (std::fabs(tr) <= margin) return PointClass::unresolved;
  const double det = B.determinant() / (bscale * bscale);
  const double disc = tr * tr - 4 * det;
  if (disc < -margin) {
    margin_out = std::min(std::fabs(tr), -disc);
    return PointClass::V_focus;
  }
  if (disc > margin) {
    if (det < -margin) {
      margin_out = std::min({std::fabs(tr), disc, -det});
      return PointClass::V_saddle;
    }
    if (det > margin) {
      margin_out = std::min({std::fabs(tr), disc, det});
      return PointClass::V_node;
    }
    margin_out = std::min(std::fabs(tr), disc);
    return PointClass::V_saddle_node;
  }
  return PointClass::unresolved;
}

double linf(const Eigen::Vector3d& v) {
  return v.cwiseAbs().maxCoeff();
}

int worker_count(size_t jobs) {
  int w = 0;
  if (const char* env = std::getenv("POISSON3_THREADS")) w = std::atoi(env);
  if (w <= 0) w = static_cast<int>(std::thread::hardware_concurrency());
  if (w <= 0) w = 1;
  return static_cast<int>(std::min<size_t>(w, jobs ? jobs : 1));
}

// Closed loop vs unbounded branches for one group of curve samples, decided
// by the angular coverage around the centroid in the best-fit plane. An
// open call is decisive with few samples; a closed call needs enough of
// them to rule out accidental gaps. "" means no call.
std::string shape_call(const std::vector<std::array<double, 3>>& pts) {
  if (pts.size() < 4) return "";
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (const auto& x : pts) c += Eigen::Vector3d(x[0], x[1], x[2]);
  c /= static_cast<double>(pts.size());
  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
  for (const auto& x : pts) {
    const Eigen::Vector3d d = Eigen::Vector3d(x[0], x[1], x[2]) - c;
    M += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(M);
  const Eigen::Vector3d e1 = es.eigenvectors().col(2);  // largest spread
  const Eigen::Vector3d e2 = es.eigenvectors().col(1);
  std::vector<double> ang;
  ang.reserve(pts.size());
  for (const auto& x : pts) {
    const Eigen::Vector3d d = Eigen::Vector3d(x[0], x[1], x[2]) - c;
    ang.push_back(std::atan2(d.dot(e2), d.dot(e1)));
  }
  std::sort(ang.begin(), ang.end());
  double gap = 2 * M_PI + ang.front() - ang.back();
  for (size_t i = 1; i < ang.size(); ++i)
    gap = std::max(gap, ang[i] - ang[i - 1]);
  if (gap > M_PI / 2) return "open";
  return pts.size() >= 8 ? "closed" : "";
}

// Curves with distinct labels are distinct; the shape question is asked
// groupwise.
std::map<PointClass, std::vector<std::array<double, 3>>> curve_groups(
    const std::vector<SingularPointRecord>& recs) {
  std::map<PointClass, std::vector<std::array<double, 3>>> groups;
  for (const auto& r : recs)
    if (r.rank < 3) groups[r.cls].push_back(r.x);
  return groups;
}

void curve_diagnostics(EpsVerdict& ev) {
  size_t n = 0;
  double r2 = 0, h = 0, zmax = 0;
  for (const auto& r : ev.records) {
    if (r.rank == 3) continue;
    ++n;
    r2 += r.x[0] * r.x[0] + r.x[1] * r.x[1];
    h += r.x[0] * r.x[0] - r.x[1] * r.x[1];
    zmax = std::max(zmax, std::fabs(r.x[2]));
  }
  if (n == 0) return;
  ev.curve_r2_mean = r2 / static_cast<double>(n);
  ev.curve_h_mean = h / static_cast<double>(n);
  ev.curve_zmax = zmax;
  bool first = true;
  std::string combined;
  for (const auto& [cls, pts] : curve_groups(ev.records)) {
    const std::string s = shape_call(pts);
    if (first) {
      combined = s;
      first = false;
    } else if (s != combined) {
      combined = (s.empty() || combined.empty()) ? "" : "mixed";
    }
  }
  ev.curve_shape = combined;
}

std::vector<PointClass> sorted_classes(
    const std::vector<SingularPointRecord>& recs, bool isolated) {
  std::vector<PointClass> out;
  for (const auto& r : recs)
    if ((r.rank == 3) == isolated) out.push_back(r.cls);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PointClass> distinct(std::vector<PointClass> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void match_forecast(EpsVerdict& ev, const SideForecast& want,
                    const NumericOptions& opt) {
  for (const auto& r : ev.records)
    if (r.cls == PointClass::unresolved) {
      ev.outcome = "skipped";
      ev.note = "below resolution floor";
      return;
    }

  std::vector<PointClass> exp_pts = want.points;
  std::sort(exp_pts.begin(), exp_pts.end());
  if (sorted_classes(ev.records, true) != exp_pts) {
    ev.outcome = "mismatch";
    ev.note = "isolated points differ";
    return;
  }

  const std::vector<PointClass> cur = sorted_classes(ev.records, false);
  if (want.curve_classes.empty()) {
    if (!cur.empty()) {
      ev.outcome = "mismatch";
      ev.note = "unforeseen curve samples";
      return;
    }
    ev.outcome = "match";
    return;
  }
  if (cur.empty()) {
    ev.outcome = "mismatch";
    ev.note = "curve missing";
    return;
  }
  if (distinct(cur) != distinct(want.curve_classes)) {
    ev.outcome = "mismatch";
    ev.note = "curve classes differ";
    return;
  }

  // Two curves told apart by their labels must not touch.
  if (distinct(want.curve_classes).size() == 2) {
    double gap = 1e300;
    for (const auto& a : ev.records)
      for (const auto& b : ev.records) {
        if (a.rank == 3 || b.rank == 3 || a.cls == b.cls) continue;
        const double d = std::max({std::fabs(a.x[0] - b.x[0]),
                                   std::fabs(a.x[1] - b.x[1]),
                                   std::fabs(a.x[2] - b.x[2])});
        gap = std::min(gap, d);
      }
    if (gap <= 10 * opt.tol) {
      ev.outcome = "mismatch";
      ev.note = "curves are not disjoint";
      return;
    }
  }

  const std::string expect = want.closed_curve ? "closed" : "open";
  bool uncalled = false;
  for (const auto& [cls, pts] : curve_groups(ev.records)) {
    const std::string s = shape_call(pts);
    if (s.empty()) {
      uncalled = true;
      continue;
    }
    if (s != expect) {
      ev.outcome = "mismatch";
      ev.note = "curve shape differs";
      return;
    }
  }
  if (uncalled) ev.note = "too few curve samples for a shape call";
  ev.outcome = "match";
}

}  // namespace

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::saddle_node_V: return "saddle_node_V";
    case Scenario::A_split: return "A_split";
    case Scenario::N_a: return "N_a";
    case Scenario::N_b: return "N_b";
    case Scenario::N_c: return "N_c";
    case Scenario::none_irremovable: return "none_irremovable";
    case Scenario::unknown: return "unknown";
  }
  return "?";
}

const char* point_class_name(PointClass c) {
  switch (c) {
    case PointClass::so3: return "so3";
    case PointClass::sl2: return "sl2";
    case PointClass::V_node: return "V_node";
    case PointClass::V_saddle: return "V_saddle";
    case PointClass::V_focus: return "V_focus";
    case PointClass::V_saddle_node: return "V_saddle_node";
    case PointClass::unresolved: return "unresolved";
  }
  return "?";
}

BifurcationReport predict(const PoissonFamily& p, int degree) {
  BifurcationReport rep;
  rep.base = classify(p, degree);

  switch (rep.base.tag) {
    case SingTag::OutsideTaxonomy:
      rep.note = "one jet vanishes at the origin";
      return rep;

    case SingTag::so3:
    case SingTag::sl2: {
      const PointClass c =
          rep.base.tag == SingTag::so3 ? PointClass::so3 : PointClass::sl2;
      rep.scenario = Scenario::none_irremovable;
      rep.generic = true;
      rep.minus.points = {c};
      rep.plus.points = {c};
      return rep;
    }

    case SingTag::V: {
      const VSubtype& v = *rep.base.v;
      if (v.kind == VKind::node || v.kind == VKind::saddle ||
          v.kind == VKind::focus) {
        rep.scenario = Scenario::none_irremovable;
        rep.generic = true;
        rep.minus.curve_classes = {v_point_class(v.kind)};
        rep.plus.curve_classes = rep.minus.curve_classes;
        return rep;
      }
      if (v.kind == VKind::saddle_node_exclusive_or_undetermined) {
        rep.note = "no center power within the truncation";
        return rep;
      }
      if (v.p.value_or(0) != 1) {
        rep.note = "saddle node center power exceeds one";
        return rep;
      }
      const Series rest = center_restriction(v_reduce(p).first);
      const Rat f0p = rest.coeff(Mono{0, 0, 0, 1});
      const Rat c2 = rest.coeff(Mono{2, 0, 0, 0});
      if (f0p == 0) {
        rep.note = "saddle node unfolding is degenerate: f0'(0) = 0";
        return rep;
      }
      rep.scenario = Scenario::saddle_node_V;
      rep.generic = true;
      SideForecast lines;
      lines.curve_classes = {PointClass::V_saddle, PointClass::V_node};
      // The pair exists where the restricted quadratic and the unfolding
      // term pull in opposite directions.
      (rat_sign(c2 * f0p) < 0 ? rep.plus : rep.minus) = lines;
      return rep;
    }

    case SingTag::Aplus:
    case SingTag::Aminus: {
      if (!rep.base.a || !rep.base.a->isolated) {
        rep.note = "A germ is not algebraically isolated at this degree";
        return rep;
      }
      std::optional<ANormalForm> an;
      try {
        an = a_normal_form(p, degree);
      } catch (const DomainError& e) {
        rep.note = e.what();
        return rep;
      }
      if (an->m != 2) {
        rep.note = "A multiplicity exceeds two";
        return rep;
      }
      const Rat h0p = an->h[0].coeff(Mono{0, 0, 0, 1});
      if (h0p == 0) {
        rep.note = "A unfolding is degenerate: h0'(0) = 0";
        return rep;
      }
      rep.scenario = Scenario::A_split;
      rep.generic = true;
      SideForecast pts;
      pts.points = rep.base.tag == SingTag::Aplus
                       ? std::vector<PointClass>{PointClass::so3,
                                                 PointClass::sl2}
                       : std::vector<PointClass>{PointClass::sl2,
                                                 PointClass::sl2};
      // Points live where the unfolding term is negative.
      (rat_sign(h0p) < 0 ? rep.plus : rep.minus) = pts;
      return rep;
    }

    case SingTag::N_undetermined:
      rep.note = "N second quadratic form is degenerate";
      return rep;

    case SingTag::Nplus:
    case SingTag::Nminus: {
      std::optional<NFamilyNormalForm> nf;
      try {
        nf = n_reduce(p, degree);
      } catch (const DomainError& e) {
        rep.note = e.what();
        return rep;
      }
      const Rat mu1 =
          nf->mu.size() > 1 ? nf->mu[1].coeff(Mono{0, 0, 0, 0}) : Rat(0);
      const Rat mu0p =
          nf->mu.empty() ? Rat(0) : nf->mu[0].coeff(Mono{0, 0, 0, 1});
      if (mu1 == 0) {
        rep.note = "N singularity is degenerate: mu1(0) = 0";
        return rep;
      }
      if (mu0p == 0) {
        rep.note = "N unfolding is degenerate: mu0'(0) = 0";
        return rep;
      }
      const KappaInvariants kap = kappas(*nf);
      rep.radius2_over_eps = (Rat(0) - mu0p) / mu1;
      rep.generic = true;
      const PointClass on_curve = curve_kind_from_kappa(kap);

      if (rep.base.tag == SingTag::Nminus) {
        rep.scenario = Scenario::N_c;
        SideForecast s;
        s.points = {PointClass::sl2};
        s.curve_classes = {on_curve, on_curve};
        rep.minus = s;
        rep.plus = s;
        return rep;
      }

      const bool k1pos = rat_sign(kap.kappa1) > 0;
      rep.scenario = k1pos ? Scenario::N_a : Scenario::N_b;
      SideForecast circle, bare;
      // At the circle's center the two unfolding signs fight: the central
      // class there is the opposite of the bare-side one.
      circle.points = {k1pos ? PointClass::sl2 : PointClass::so3};
      circle.curve_classes = {on_curve};
      circle.closed_curve = true;
      bare.points = {k1pos ? PointClass::so3 : PointClass::sl2};
      if (rat_sign(*rep.radius2_over_eps) > 0) {
        rep.plus = circle;
        rep.minus = bare;
      } else {
        rep.minus = circle;
        rep.plus = bare;
      }
      return rep;
    }
  }
  return rep;
}

std::vector<SingularPointRecord> find_singular_points(
    const PoissonFamily& p, double eps, const NumericOptions& opt) {
  const std::array<Poly3, 3> br = fold_family(p, eps);
  const int g = std::max(1, opt.seeds_per_axis);

  auto residual_jacobian = [&](const std::array<double, 3>& u,
                               Eigen::Vector3d& F, Eigen::Matrix3d& J) {
    for (int b = 0; b < 3; ++b) {
      double v;
      std::array<double, 3> grad;
      br[b].eval(u, v, grad);
      F(b) = v;
      for (int k = 0; k < 3; ++k) J(b, k) = grad[k];
    }
  };

  // Deterministic in-cell jitter decorrelates the seeds from the grid
  // symmetries, so curve attractors are sampled at many positions instead
  // of collapsing onto a handful of symmetric limits.
  auto jitter = [](uint64_t h) {
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ULL;
    h ^= h >> 33;
    return static_cast<double>(h & 0xffffff) / 16777216.0 - 0.5;
  };
  auto seed_coord = [&](int idx, int axis, uint64_t h) {
    return opt.box *
           (-1.0 + 2.0 * (idx + 0.5 + 0.8 * jitter(h + axis * 0x9e3779b9ULL)) / g);
  };

  std::vector<std::array<double, 3>> hits;
  Eigen::Vector3d F;
  Eigen::Matrix3d J;
  for (int ix = 0; ix < g; ++ix)
    for (int iy = 0; iy < g; ++iy)
      for (int iz = 0; iz < g; ++iz) {
        const uint64_t h = static_cast<uint64_t>(ix) * 73856093ULL ^
                           static_cast<uint64_t>(iy) * 19349663ULL ^
                           static_cast<uint64_t>(iz) * 83492791ULL;
        std::array<double, 3> u{seed_coord(ix, 0, h), seed_coord(iy, 1, h),
                                seed_coord(iz, 2, h)};
        bool alive = true;
        for (int it = 0; it < 60 && alive; ++it) {
          residual_jacobian(u, F, J);
          Eigen::JacobiSVD<Eigen::Matrix3d> svd(
              J, Eigen::ComputeFullU | Eigen::ComputeFullV);
          svd.setThreshold(1e-12);
          Eigen::Vector3d step = -svd.solve(F);
          const double sn = linf(step);
          if (sn > 0.5 * opt.box) step *= 0.5 * opt.box / sn;
          for (int k = 0; k < 3; ++k) u[k] += step(k);
          if (std::max({std::fabs(u[0]), std::fabs(u[1]), std::fabs(u[2])}) >
              3 * opt.box)
            alive = false;
          if (sn <= 1e-15) break;
        }
        if (!alive) continue;
        residual_jacobian(u, F, J);
        if (linf(F) > opt.tol) continue;
        if (std::max({std::fabs(u[0]), std::fabs(u[1]), std::fabs(u[2])}) >
            opt.box + 10 * opt.tol)
          continue;
        hits.push_back(u);
      }

  std::sort(hits.begin(), hits.end());
  std::vector<SingularPointRecord> out;
  for (const auto& u : hits) {
    bool dup = false;
    for (const auto& kept : out) {
      const auto& v = kept.x;
      if (std::max({std::fabs(u[0] - v[0]), std::fabs(u[1] - v[1]),
                    std::fabs(u[2] - v[2])}) <= 10 * opt.tol) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    SingularPointRecord rec;
    rec.eps = eps;
    rec.x = u;
    residual_jacobian(u, F, J);
    rec.residual = linf(F);
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(J);
    const Eigen::Vector3d sig = svd.singularValues();
    rec.rank = 0;
    if (sig(0) > 0)
      for (int i = 0; i < 3; ++i)
        if (sig(i) > opt.sign_margin * sig(0)) ++rec.rank;
    rec.cls = classify_linearization(br, u, opt.sign_margin, rec.margin);
    out.push_back(rec);
  }
  return out;
}

PointClass classify_point(const PoissonFamily& p, double eps,
                          const std::array<double, 3>& pt,
                          const NumericOptions& opt, double* margin_out) {
  double m = 0;
  const PointClass c =
      classify_linearization(fold_family(p, eps), pt, opt.sign_margin, m);
  if (margin_out) *margin_out = m;
  return c;
}

VerificationReport verify(const PoissonFamily& p,
                          const std::vector<double>& eps_grid,
                          const NumericOptions& opt, int degree) {
  VerificationReport vr;
  vr.forecast = predict(p, degree);
  vr.per_eps.resize(eps_grid.size());

  auto work = [&](size_t i) {
    EpsVerdict& ev = vr.per_eps[i];
    ev.eps = eps_grid[i];
    ev.records = find_singular_points(p, ev.eps, opt);
    curve_diagnostics(ev);
    if (vr.forecast.scenario == Scenario::unknown) {
      ev.outcome = "skipped";
      ev.note = "no usable forecast";
      return;
    }
    if (ev.eps == 0.0) {
      ev.outcome = "skipped";
      ev.note = "degenerate parameter value";
      return;
    }
    match_forecast(ev, ev.eps < 0 ? vr.forecast.minus : vr.forecast.plus, opt);
  };

  const int W = worker_count(eps_grid.size());
  if (W <= 1) {
    for (size_t i = 0; i < eps_grid.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(W);
    for (int t = 0; t < W; ++t)
      pool.emplace_back([&, t] {
        for (size_t i = t; i < eps_grid.size(); i += W) work(i);
      });
    for (auto& th : pool) th.join();
  }

  bool any_match = false, any_mismatch = false;
  for (const auto& ev : vr.per_eps) {
    any_match |= ev.outcome == "match";
    any_mismatch |= ev.outcome == "mismatch";
  }
  vr.verdict = vr.forecast.scenario != Scenario::unknown && any_match &&
               !any_mismatch;
  return vr;
}

}  // namespace poisson3
