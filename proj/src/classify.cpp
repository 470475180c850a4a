#include "poisson3/classify.hpp"

#include <string>

namespace poisson3 {

namespace {

// Invariant graph z = zeta(x) of the eps = 0 planar field near a
// saddle-node frame, and the lowest pure x power of the field restricted to
// it. Returns (p, c) with x^{p+1} the lowest term and c its coefficient
// after rescaling time so the transverse eigenvalue is 1; empty when every
// in-box power vanishes.
std::optional<std::pair<int, Rat>> center_power(const PlanarFamily& pf) {
  const Trunc t = pf.alpha.trunc();
  const Series a0 = pf.alpha.eps_coeff(0);
  const Series b0 = pf.beta.eps_coeff(0);
  const Rat ax = a0.coeff(Mono{1, 0, 0, 0}), az = a0.coeff(Mono{0, 0, 1, 0});
  const Rat bx = b0.coeff(Mono{1, 0, 0, 0}), bz = b0.coeff(Mono{0, 0, 1, 0});
  const Rat tau = ax + bz;
  if (tau == 0 || ax * bz - az * bx != 0)
    throw InternalError("center frame expects one zero eigenvalue");

  // Columns: kernel vector, then an eigenvector for tau.
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
  const Series au = a0.substitute({xi, vy, zi});
  const Series bu = b0.substitute({xi, vy, zi});
  const Series af = (Rat(1) / dT) * (w2 * au - w1 * bu);
  const Series bf = (Rat(1) / dT) * (k1 * bu - k2 * au);

  // Newton passes: each one pushes the invariance defect to higher x order.
  Series zeta = Series::zero(t);
  bool settled = false;
  for (int pass = 0; pass <= t.d + 2; ++pass) {
    const Series defect = bf.substitute({vx, vy, zeta}) -
                          zeta.partial(VAR_X) * af.substitute({vx, vy, zeta});
    if (defect.is_zero()) {
      settled = true;
      break;
    }
    zeta = zeta - (Rat(1) / tau) * defect;
  }
  if (!settled) throw InternalError("center curve failed to settle");

  const Series rest = af.substitute({vx, vy, zeta});
  for (int i = 2; i <= t.d; ++i) {
    const Rat c = rest.coeff(Mono{i, 0, 0, 0});
    if (c != 0) return std::make_pair(i - 1, c / tau);
  }
  return std::nullopt;
}

// Degree-two slice of the eps = 0 part.
Series quad_slice(const Series& s) {
  const Series s0 = s.eps_coeff(0);
  return s0.truncated_xyz(2) - s0.truncated_xyz(1);
}

bool isolation_failure(const DomainError& e) {
  return std::string(e.what()).find("isolated") != std::string::npos;
}

}  // namespace

const char* sing_tag_name(SingTag t) {
  switch (t) {
    case SingTag::V: return "V";
    case SingTag::so3: return "so3";
    case SingTag::sl2: return "sl2";
    case SingTag::Aplus: return "Aplus";
    case SingTag::Aminus: return "Aminus";
    case SingTag::Nplus: return "Nplus";
    case SingTag::Nminus: return "Nminus";
    case SingTag::N_undetermined: return "N_undetermined";
    case SingTag::OutsideTaxonomy: return "OutsideTaxonomy";
  }
  return "?";
}

const char* coarse_class_name(CoarseClass c) {
  switch (c) {
    case CoarseClass::V: return "V";
    case CoarseClass::Aplus: return "Aplus";
    case CoarseClass::Aminus: return "Aminus";
    case CoarseClass::N: return "N";
    case CoarseClass::so3: return "so3";
    case CoarseClass::sl2: return "sl2";
    case CoarseClass::OutsideTaxonomy: return "OutsideTaxonomy";
  }
  return "?";
}

QuadClass quadform_class(const Series& q2) {
  Rat a(0), b(0), c(0);
  bool any = false;
  for (const auto& [idx, co] : q2.terms()) {
    const Mono& m = q2.ctx().mono(idx);
    if (m[VAR_Z] != 0 || m[VAR_EPS] != 0 || m[VAR_X] + m[VAR_Y] != 2)
      throw DomainError("not a plane quadratic form");
    if (m[VAR_X] == 2)
      a = co;
    else if (m[VAR_Y] == 2)
      c = co;
    else
      b = co;
    any = true;
  }
  if (!any) return QuadClass::zero;
  const int sd = rat_sign(b * b - 4 * a * c);
  if (sd < 0) return rat_sign(a) > 0 ? QuadClass::pos_def : QuadClass::neg_def;
  if (sd > 0) return QuadClass::indefinite;
  const int s = a != 0 ? rat_sign(a) : rat_sign(c);
  return s > 0 ? QuadClass::rank1_plus : QuadClass::rank1_minus;
}

VSubtype v_subtype(const EigenPair& e) {
  if (e.trace == 0) throw DomainError("not a V singularity");
  VSubtype vs;
  if (e.det == 0) {
    vs.kind = VKind::saddle_node;
    vs.normal_form_id = 24;
    return vs;
  }
  const Rat disc = e.discriminant();
  const Rat theta = Rat(0) - e.det / (e.trace * e.trace);
  if (rat_sign(disc) < 0) {
    vs.kind = VKind::focus;
    vs.normal_form_id = 21;
    vs.theta = theta;
    return vs;
  }
  if (rat_sign(e.det) < 0) {
    vs.kind = VKind::saddle;
    if (rat_is_square(disc)) {
      // Rational eigenvalues lambda1 > 0 > lambda2; the label is the
      // reduced ratio -lambda2 / lambda1.
      const auto pr = e.rational_pair();
      const Rat ratio = (Rat(0) - pr->second) / pr->first;
      vs.resonance = VResonance::saddle_pq;
      vs.normal_form_id = 23;
      vs.pq = std::make_pair(static_cast<int>(ratio.get_num().get_si()),
                             static_cast<int>(ratio.get_den().get_si()));
    } else {
      vs.normal_form_id = 21;
      vs.theta = theta;
    }
    return vs;
  }
  vs.kind = VKind::node;
  if (rat_is_square(disc)) {
    const auto pr = e.rational_pair();
    const Rat r1 = pr->first / pr->second;
    const Rat r2 = pr->second / pr->first;
    std::optional<int> N;
    if (r1.get_den() == 1 && r1 >= 1)
      N = static_cast<int>(r1.get_num().get_si());
    else if (r2.get_den() == 1 && r2 >= 1)
      N = static_cast<int>(r2.get_num().get_si());
    if (N) {
      vs.resonance = VResonance::node_N;
      vs.normal_form_id = 22;
      vs.N = N;
      return vs;
    }
  }
  vs.normal_form_id = 21;
  vs.theta = theta;
  return vs;
}

KappaInvariants kappas(const NFamilyNormalForm& nf) {
  const Rat l0 =
      nf.lambda.empty() ? Rat(0) : nf.lambda[0].coeff(Mono{0, 0, 0, 0});
  const Rat m1 = nf.mu.size() < 2 ? Rat(0) : nf.mu[1].coeff(Mono{0, 0, 0, 0});
  KappaInvariants k{l0 * m1, Rat(0)};
  k.kappa2 = l0 * l0 - 8 * k.kappa1;
  return k;
}

AInvariants a_invariants(const NormalFormData& nf) {
  AInvariants ai;
  try {
    const ANormalForm an = a_normal_form(nf.family(), nf.f.trunc().d);
    ai.isolated = true;
    ai.sign = an.sign;
    ai.m = an.m;
    ai.delta = an.delta;
    ai.generic = an.m == 2;
  } catch (const DomainError& e) {
    if (!isolation_failure(e)) throw;
    ai = AInvariants{};
  }
  return ai;
}

CoarseClass classify_1jet(const LieAlgebra1Jet& L) {
  if (L.zero) return CoarseClass::OutsideTaxonomy;
  if (L.semisimple)
    return L.killing_negdef ? CoarseClass::so3 : CoarseClass::sl2;
  if (L.trace_B != 0) return CoarseClass::V;
  if (rat_sign(L.det_B) > 0) return CoarseClass::Aplus;
  if (rat_sign(L.det_B) < 0) return CoarseClass::Aminus;
  return CoarseClass::N;
}

SingularityClass classify(const PoissonFamily& p, int degree) {
  SingularityClass out;
  const LieAlgebra1Jet L = lie_1jet(p, {Rat(0), Rat(0), Rat(0)});
  if (L.zero) {
    out.tag = SingTag::OutsideTaxonomy;
    return out;
  }

  bool curl_at_origin = false;
  const DifferentialObject cw = curl(p);
  for (const Series& s : cw.comp)
    if (s.coeff(Mono{0, 0, 0, 0}) != 0) curl_at_origin = true;

  if (curl_at_origin || (L.B.has_value() && L.scalar_B)) {
    out.tag = SingTag::V;
    const auto red = v_reduce(p);
    VSubtype vs = v_subtype(red.first.eigen);
    if (vs.kind == VKind::saddle_node) {
      if (const auto cp = center_power(red.first)) {
        vs.p = cp->first;
        vs.delta = cp->first % 2 == 0 ? rat_sign(cp->second) : 1;
      } else {
        vs.kind = VKind::saddle_node_exclusive_or_undetermined;
      }
    }
    out.v = vs;
    return out;
  }

  const NormalFormData nf = reduce_to_fg(p, degree);
  const QuadClass qf = quadform_class(quad_slice(nf.f));
  switch (qf) {
    case QuadClass::pos_def:
      out.tag = SingTag::so3;
      return out;
    case QuadClass::neg_def:
    case QuadClass::indefinite:
      out.tag = SingTag::sl2;
      return out;
    case QuadClass::rank1_plus:
    case QuadClass::rank1_minus: {
      out.tag = qf == QuadClass::rank1_plus ? SingTag::Aplus : SingTag::Aminus;
      AInvariants ai;
      try {
        const ANormalForm an = a_normal_form(p, degree);
        ai.isolated = true;
        ai.sign = an.sign;
        ai.m = an.m;
        ai.delta = an.delta;
        ai.generic = an.m == 2;
      } catch (const DomainError& e) {
        if (!isolation_failure(e)) throw;
      }
      out.a = ai;
      return out;
    }
    case QuadClass::zero: {
      switch (quadform_class(quad_slice(nf.g))) {
        case QuadClass::pos_def:
        case QuadClass::neg_def:
          out.tag = SingTag::Nplus;
          break;
        case QuadClass::indefinite:
          out.tag = SingTag::Nminus;
          break;
        default:
          out.tag = SingTag::N_undetermined;
          break;
      }
      try {
        out.kappa = kappas(n_reduce(p, degree));
      } catch (const DomainError&) {
        // radial data out of reach at this degree
      }
      return out;
    }
  }
  return out;
}

}  // namespace poisson3
