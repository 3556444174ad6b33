#include "opeflow/engine.hpp"

#include <algorithm>
#include <cassert>
#include <optional>

namespace opeflow::ope {

namespace {

Atom maybe_param(const std::string& name) {
  if (name == "1") return identity_atom();
  return param_atom(name);
}

Expansion single_term(std::vector<TraceChain> chains, CoeffPoly coeff = CoeffPoly(1)) {
  Expansion e;
  e.set_factors(1);
  OperatorTerm t;
  t.coeff = std::move(coeff);
  t.chains = std::move(chains);
  t.parts = {0};
  e.push(std::move(t));
  return e;
}

// ---------------------------------------------------------------------------
// Contraction driver.  Working terms keep per-atom uids so that each probe
// current is expanded exactly once and each contraction pattern is
// enumerated exactly once.

struct WAtom {
  Atom a;
  int uid = -1;
};
using WWord = std::vector<WAtom>;

struct WTerm {
  CoeffPoly coeff;
  std::vector<PoleFactor> pole;
  std::vector<WWord> chains;
  std::vector<int> parts;
  int d_holo = 0;
  int d_anti = 0;
};

struct Loc {
  int chain = -1;
  int pos = -1;
};

std::optional<Loc> find_uid(const WTerm& t, int uid) {
  for (std::size_t c = 0; c < t.chains.size(); ++c)
    for (std::size_t i = 0; i < t.chains[c].size(); ++i)
      if (t.chains[c][i].uid == uid) return Loc{static_cast<int>(c), static_cast<int>(i)};
  return std::nullopt;
}

void bump_pole(WTerm& t, int point, bool anti, int k) {
  for (auto& p : t.pole)
    if (p.point == point) {
      (anti ? p.anti : p.holo) += k;
      return;
    }
  PoleFactor p{point, 0, 0};
  (anti ? p.anti : p.holo) = k;
  t.pole.push_back(p);
}

void union_parts(WTerm& t, int fa, int fb) {
  if (fa == fb) return;
  const int la = t.parts.at(fa), lb = t.parts.at(fb);
  if (la == lb) return;
  for (int& l : t.parts)
    if (l == lb) l = la;
}

WWord slice(const WWord& w, int from, int to) { // [from, to)
  return WWord(w.begin() + from, w.begin() + to);
}
WWord cat(WWord a, const WWord& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// Word with position i removed, rotated so that the atom after i leads:
/// STr(X c Y) read off as (Y X).
WWord around(const WWord& w, int i) {
  return cat(slice(w, i + 1, static_cast<int>(w.size())), slice(w, 0, i));
}

struct RuleContext {
  int pole_point;   // the probe point carrying the new pole
  bool flip;        // active current sits at the base point (pass 2)
  int* next_uid;
};

CoeffPoly pole_sign(const RuleContext& ctx, int k) {
  return (ctx.flip && (k % 2)) ? CoeffPoly(-1) : CoeffPoly(1);
}

/// Current-current contraction.  Different chains merge into one trace,
/// one chain splits into two; both carry the level term at the double pole
/// and the commutator currents at the simple pole.
void contract_currents(const WTerm& base, Loc lc, Loc lq, bool anti,
                       const RuleContext& ctx, std::vector<WTerm>& out) {
  const WAtom active = base.chains[lc.chain][lc.pos];
  const WAtom partner = base.chains[lq.chain][lq.pos];
  const WAtom produced{current_atom(anti, 0, partner.a.origin), (*ctx.next_uid)++};

  std::vector<WWord> rest;
  for (std::size_t c = 0; c < base.chains.size(); ++c)
    if (static_cast<int>(c) != lc.chain && static_cast<int>(c) != lq.chain)
      rest.push_back(base.chains[c]);

  WTerm t0 = base;
  t0.chains.clear();
  union_parts(t0, active.a.origin, partner.a.origin);

  if (lc.chain != lq.chain) {
    const WWord a = around(base.chains[lc.chain], lc.pos);
    const WWord b = around(base.chains[lq.chain], lq.pos);

    WTerm lead = t0;
    lead.coeff *= -CoeffPoly::sym(Sym::Level) * pole_sign(ctx, 2);
    bump_pole(lead, ctx.pole_point, anti, 2);
    lead.chains = rest;
    lead.chains.push_back(cat(a, b));
    out.push_back(std::move(lead));

    WTerm c1 = t0;
    c1.coeff *= pole_sign(ctx, 1);
    bump_pole(c1, ctx.pole_point, anti, 1);
    c1.chains = rest;
    c1.chains.push_back(cat(cat(a, b), {produced}));
    out.push_back(std::move(c1));

    WTerm c2 = t0;
    c2.coeff *= CoeffPoly(-1) * pole_sign(ctx, 1);
    bump_pole(c2, ctx.pole_point, anti, 1);
    c2.chains = rest;
    c2.chains.push_back(cat(cat(b, a), {produced}));
    out.push_back(std::move(c2));
    return;
  }

  // Same chain: STr(.. c Y q Z ..) with the active rotated to the front.
  rest.clear();
  for (std::size_t c = 0; c < base.chains.size(); ++c)
    if (static_cast<int>(c) != lc.chain) rest.push_back(base.chains[c]);
  WWord w = base.chains[lc.chain];
  std::rotate(w.begin(), w.begin() + lc.pos, w.end());
  int qpos = -1;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i].uid == partner.uid) qpos = static_cast<int>(i);
  assert(qpos > 0);
  const WWord y = slice(w, 1, qpos);
  const WWord z = slice(w, qpos + 1, static_cast<int>(w.size()));

  WTerm lead = t0;
  lead.coeff *= -CoeffPoly::sym(Sym::Level) * pole_sign(ctx, 2);
  bump_pole(lead, ctx.pole_point, anti, 2);
  lead.chains = rest;
  lead.chains.push_back(z);
  lead.chains.push_back(y);
  out.push_back(std::move(lead));

  WTerm c1 = t0;
  c1.coeff *= CoeffPoly(-1) * pole_sign(ctx, 1);
  bump_pole(c1, ctx.pole_point, anti, 1);
  c1.chains = rest;
  c1.chains.push_back(cat(z, {produced}));
  c1.chains.push_back(y);
  out.push_back(std::move(c1));

  WTerm c2 = t0;
  c2.coeff *= pole_sign(ctx, 1);
  bump_pole(c2, ctx.pole_point, anti, 1);
  c2.chains = rest;
  c2.chains.push_back(cat(y, {produced}));
  c2.chains.push_back(z);
  out.push_back(std::move(c2));
}

/// Current against M or M^-1.  The current's slot glues to the left edge of
/// M (holomorphic) or the right edge (antiholomorphic); inverses swap the
/// side and the sign.
void contract_current_field(const WTerm& base, Loc lc, Loc lq, const RuleContext& ctx,
                            std::vector<WTerm>& out) {
  const WAtom active = base.chains[lc.chain][lc.pos];
  const WAtom partner = base.chains[lq.chain][lq.pos];
  const bool anti = active.a.kind == AtomKind::AntiholoCurrent;
  const bool inv = partner.a.kind == AtomKind::FundamentalInv;
  // field glues with M leading for (J,M) and (Jbar,M^-1), trailing otherwise
  const bool field_leads = (anti == inv);
  const int sign = field_leads ? -1 : +1;

  WTerm t = base;
  t.chains.clear();
  union_parts(t, active.a.origin, partner.a.origin);
  t.coeff *= CoeffPoly(sign) * pole_sign(ctx, 1);
  bump_pole(t, ctx.pole_point, anti, 1);

  if (lc.chain != lq.chain) {
    const WWord& c2 = base.chains[lq.chain];
    WWord spliced;
    if (field_leads)
      spliced = cat({c2[lq.pos]}, around(c2, lq.pos)); // M S R
    else
      spliced = cat(around(c2, lq.pos), {c2[lq.pos]}); // S R M
    const WWord& c1 = base.chains[lc.chain];
    WWord merged = slice(c1, 0, lc.pos);
    merged = cat(merged, spliced);
    merged = cat(merged, slice(c1, lc.pos + 1, static_cast<int>(c1.size())));
    for (std::size_t c = 0; c < base.chains.size(); ++c)
      if (static_cast<int>(c) != lc.chain && static_cast<int>(c) != lq.chain)
        t.chains.push_back(base.chains[c]);
    t.chains.push_back(std::move(merged));
    out.push_back(std::move(t));
    return;
  }

  // Same chain: STr(c Y q Z) splits into STr(q-side) STr(other).
  WWord w = base.chains[lc.chain];
  std::rotate(w.begin(), w.begin() + lc.pos, w.end());
  int qpos = -1;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i].uid == partner.uid) qpos = static_cast<int>(i);
  assert(qpos > 0);
  const WWord y = slice(w, 1, qpos);
  const WWord z = slice(w, qpos + 1, static_cast<int>(w.size()));
  for (std::size_t c = 0; c < base.chains.size(); ++c)
    if (static_cast<int>(c) != lc.chain) t.chains.push_back(base.chains[c]);
  if (field_leads) {
    t.chains.push_back(cat({w[qpos]}, z)); // STr(M Z), STr(Y)
    t.chains.push_back(y);
  } else {
    t.chains.push_back(z); // STr(Z), STr(Y M)
    t.chains.push_back(cat(y, {w[qpos]}));
  }
  out.push_back(std::move(t));
}

bool compatible(const Atom& active, const Atom& partner) {
  if (partner.is_fundamental()) return true;
  if (active.kind == AtomKind::HoloCurrent) return partner.kind == AtomKind::HoloCurrent;
  return partner.kind == AtomKind::AntiholoCurrent;
}

void check_vocabulary(const Expansion& e, const char* which) {
  for (const auto& t : e.terms())
    for (const auto& c : t.chains)
      for (const auto& a : c.word)
        switch (a.kind) {
          case AtomKind::Param:
          case AtomKind::Identity:
          case AtomKind::Iso:
          case AtomKind::IsoInv:
          case AtomKind::HoloCurrent:
          case AtomKind::AntiholoCurrent:
          case AtomKind::Fundamental:
          case AtomKind::FundamentalInv:
            break;
          default:
            throw UnknownVocabulary(std::string("no contraction rule for atom in ") + which);
        }
}

bool contains_stress(const Expansion& e) {
  for (const auto& t : e.terms())
    for (const auto& c : t.chains)
      for (const auto& a : c.word)
        if (a.kind == AtomKind::Stress) return true;
  return false;
}

Expansion run_ope(const Expansion& first, const Expansion& second, RadialOrder order,
                  const std::string& point_name, const OpeOptions& opts) {
  check_vocabulary(first, "first operand");
  check_vocabulary(second, "second operand");
  if (first.factors() != 1)
    throw std::invalid_argument("ope: the probe must be a single insertion");
  for (const auto& t : first.terms())
    if (!t.pole.empty() || t.d_holo || t.d_anti)
      throw std::invalid_argument("ope: the probe must be a plain local operator");

  Expansion out;
  out.copy_point_structure(second);
  const int new_pt = out.add_point(point_name, order == RadialOrder::FirstOutermost);
  const int new_factor = std::max(second.factors(), 1);
  out.set_factors(new_factor + 1);

  for (const auto& t2 : second.terms()) {
    for (const auto& t1 : first.terms()) {
      int next_uid = 0;
      WTerm seed;
      seed.coeff = t1.coeff * t2.coeff;
      seed.pole = t2.pole;
      seed.d_holo = t2.d_holo;
      seed.d_anti = t2.d_anti;
      seed.parts = t2.parts;
      if (seed.parts.empty()) seed.parts = {0};
      int maxlabel = *std::max_element(seed.parts.begin(), seed.parts.end());
      seed.parts.push_back(maxlabel + 1);
      for (const auto& c : t2.chains) {
        WWord w;
        for (const auto& a : c.word) w.push_back({a, next_uid++});
        seed.chains.push_back(std::move(w));
      }
      std::vector<int> actives;
      for (const auto& c : t1.chains) {
        WWord w;
        for (auto a : c.word) {
          // Constant parameter matrices carry no factor membership; only
          // field atoms matter for the linked-cluster bookkeeping.
          if (a.is_current() || a.is_fundamental()) {
            a.point = new_pt;
            a.origin = new_factor;
          }
          if (a.is_current()) actives.push_back(next_uid);
          w.push_back({a, next_uid++});
        }
        seed.chains.push_back(std::move(w));
      }
      if (opts.reverse_probe_order) std::reverse(actives.begin(), actives.end());

      std::vector<WTerm> work{seed};
      RuleContext ctx{new_pt, false, &next_uid};
      for (const int uid : actives) {
        std::vector<WTerm> next;
        for (const auto& w : work) {
          const auto lc = find_uid(w, uid);
          if (!lc) throw std::logic_error("active current vanished");
          next.push_back(w); // the uncontracted branch
          for (std::size_t c = 0; c < w.chains.size(); ++c) {
            for (std::size_t i = 0; i < w.chains[c].size(); ++i) {
              const Atom& q = w.chains[c][i].a;
              const Atom& act = w.chains[lc->chain][lc->pos].a;
              if (q.point == act.point) continue; // siblings stay normal-ordered
              if (!compatible(act, q)) continue;
              const Loc lq{static_cast<int>(c), static_cast<int>(i)};
              if (q.is_fundamental())
                contract_current_field(w, *lc, lq, ctx, next);
              else
                contract_currents(w, *lc, lq, act.kind == AtomKind::AntiholoCurrent, ctx, next);
            }
          }
        }
        work = std::move(next);
      }

      // Base-point currents acting on probe fields (needed only when the
      // probe itself carries M or M^-1).
      std::vector<int> base_actives;
      for (const auto& c : seed.chains)
        for (const auto& at : c)
          if (at.a.is_current() && at.a.point == 0) base_actives.push_back(at.uid);
      bool probe_has_fields = false;
      for (const auto& c : t1.chains)
        for (const auto& a : c.word)
          if (a.is_fundamental()) probe_has_fields = true;
      if (probe_has_fields) {
        RuleContext ctx2{new_pt, true, &next_uid};
        for (const int uid : base_actives) {
          std::vector<WTerm> next;
          for (const auto& w : work) {
            next.push_back(w);
            const auto lc = find_uid(w, uid);
            if (!lc) continue; // consumed in pass 1
            for (std::size_t c = 0; c < w.chains.size(); ++c) {
              for (std::size_t i = 0; i < w.chains[c].size(); ++i) {
                const Atom& q = w.chains[c][i].a;
                if (q.point != new_pt || !q.is_fundamental()) continue;
                contract_current_field(w, *lc, Loc{static_cast<int>(c), static_cast<int>(i)},
                                       ctx2, next);
              }
            }
          }
          work = std::move(next);
        }
      }

      for (auto& w : work) {
        OperatorTerm res;
        res.coeff = std::move(w.coeff);
        res.pole = std::move(w.pole);
        res.d_holo = w.d_holo;
        res.d_anti = w.d_anti;
        res.parts = std::move(w.parts);
        for (auto& c : w.chains) {
          TraceChain tc;
          for (auto& at : c) {
            if (at.a.point == new_pt) at.a.point = 0; // normal order at the base point
            tc.word.push_back(std::move(at.a));
          }
          res.chains.push_back(std::move(tc));
        }
        // keep the probe point on relocated atoms? no: finite remainders sit
        // at the base point (leading Taylor term).
        out.push(std::move(res));
      }
    }
  }
  out.canonicalize();
  return out;
}

Expansion expand_stress_product(const Expansion& target, RadialOrder order,
                                const std::string& point_name, const OpeOptions& opts) {
  check_vocabulary(target, "second operand");
  // T = -(1/2n) STr(J J) + (1/2n^2) STr J STr J
  Expansion bilinear = single_term(
      {TraceChain{{current_atom(false, 0), current_atom(false, 0)}}},
      CoeffPoly::mono(Rational(-1, 2), Monomial::of(Sym::Level, -1)));
  Expansion squared = single_term(
      {TraceChain{{current_atom(false, 0)}}, TraceChain{{current_atom(false, 0)}}},
      CoeffPoly::mono(Rational(1, 2), Monomial::of(Sym::Level, -2)));

  Expansion raw = run_ope(bilinear, target, order, point_name, opts);
  raw += run_ope(squared, target, order, point_name, opts);

  const int p = raw.point_index(point_name);
  Expansion out;
  out.copy_point_structure(raw);
  out.set_factors(raw.factors());
  for (const auto& t : raw.terms()) {
    const int a = t.pole_holo(p), b = t.pole_anti(p);
    if (a == 0 && b == 0) continue; // finite part not returned
    if (a == 1 && b == 0) continue; // subsumed by the translation descendant
    out.push(t);
  }
  // Simple pole: the descendant d(target)/z.
  for (const auto& t : target.terms()) {
    OperatorTerm d;
    d.coeff = t.coeff;
    d.pole = t.pole;
    d.pole.push_back(PoleFactor{p, 1, 0});
    d.d_holo = t.d_holo + 1;
    d.d_anti = t.d_anti;
    d.chains = t.chains;
    d.parts = t.parts.empty() ? std::vector<int>{0} : t.parts;
    d.parts.push_back(d.parts.front()); // the probe joins the target's cluster
    out.push(std::move(d));
  }
  out.canonicalize();
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Vocabulary

Expansion op_current_trace(const std::string& param, bool antiholo) {
  return single_term({TraceChain{{maybe_param(param), current_atom(antiholo, 0)}}});
}

Expansion op_two_trace_current() {
  return single_term({TraceChain{{current_atom(false, 0)}},
                      TraceChain{{current_atom(true, 0)}}});
}

Expansion op_single_trace_current() {
  return single_term({TraceChain{{current_atom(false, 0), iso_atom(false),
                                  current_atom(true, 0), iso_atom(true)}}});
}

Expansion op_dressed_current() {
  return single_term({TraceChain{{current_atom(false, 0), fundamental_atom(false, 0),
                                  current_atom(true, 0), fundamental_atom(true, 0)}}});
}

Expansion op_fundamental() {
  return single_term({TraceChain{{fundamental_atom(false, 0)}}});
}

Expansion op_fundamental_trace(const std::string& param) {
  return single_term({TraceChain{{fundamental_atom(false, 0), maybe_param(param)}}});
}

Expansion op_stress_tensor() {
  return single_term({TraceChain{{Atom{AtomKind::Stress, 0, 0, {}}}}});
}

// ---------------------------------------------------------------------------
// Operations

Expansion ope(const Expansion& first, const Expansion& second, RadialOrder order,
              const std::string& point_name, const OpeOptions& opts) {
  if (contains_stress(second))
    throw UnknownVocabulary("stress tensor may only appear as the probe");
  if (contains_stress(first)) {
    if (first.terms().size() != 1 || first.terms()[0].chains.size() != 1 ||
        first.terms()[0].chains[0].word.size() != 1)
      throw UnknownVocabulary("composite insertions of the stress tensor are not handled");
    return expand_stress_product(second, order, point_name, opts);
  }
  return run_ope(first, second, order, point_name, opts);
}

Expansion ope_with_T(const Expansion& target, const std::string& point_name) {
  return expand_stress_product(target, RadialOrder::FirstOutermost, point_name, {});
}

Expansion contract_current_current(const std::string& a, const std::string& b, bool antiholo) {
  return ope(op_current_trace(a, antiholo), op_current_trace(b, antiholo),
             RadialOrder::FirstOutermost, "z");
}

Expansion contract_current_M(const std::string& a, const std::string& b, Side side) {
  return ope(op_current_trace(a, side == Side::Right), op_fundamental_trace(b),
             RadialOrder::FirstOutermost, "z");
}

Expansion connected_part(Expansion e) {
  std::erase_if(e.mutable_terms(), [](const OperatorTerm& t) { return !t.connected(); });
  e.canonicalize();
  return e;
}

Expansion angular_average(Expansion e) {
  std::erase_if(e.mutable_terms(), [](const OperatorTerm& t) {
    return std::any_of(t.pole.begin(), t.pole.end(),
                       [](const PoleFactor& p) { return p.holo != p.anti; });
  });
  e.canonicalize();
  return e;
}

Expansion radial_integrate(const Expansion& e, const RadialRegion& region) {
  const int p = e.point_index(region.point);
  if (p == 0) throw std::invalid_argument("radial_integrate: unknown point " + region.point);
  int ref = 0;
  if (region.kind == RadialRegion::Kind::Exterior) {
    ref = e.point_index(region.reference);
    if (ref == 0)
      throw std::invalid_argument("radial_integrate: unknown reference point " + region.reference);
    if (e.point_depths()[p - 1] <= e.point_depths()[ref - 1])
      throw std::invalid_argument(
          "radial_integrate: exterior region contradicts the declared radial order");
  }

  Expansion out;
  out.copy_point_structure(e);
  out.set_factors(e.factors());

  for (auto t : e.terms()) {
    const int a = t.pole_holo(p), b = t.pole_anti(p);
    if (a != b) continue; // integrates to zero over a rotation-invariant region
    const int k = a;
    std::erase_if(t.pole, [&](const PoleFactor& f) { return f.point == p; });
    if (region.kind == RadialRegion::Kind::Exterior) {
      if (k == 0) {
        t.coeff *= CoeffPoly::sym(Sym::Area);
      } else if (k == 1) {
        throw DivergentIntegral("|u|^-2 over an unbounded exterior diverges");
      } else {
        t.coeff *= CoeffPoly::mono(Rational(1, k - 1), Monomial::of(Sym::Pi, 1));
        bool merged = false;
        for (auto& f : t.pole)
          if (f.point == ref) {
            f.holo += k - 1;
            f.anti += k - 1;
            merged = true;
          }
        if (!merged) t.pole.push_back(PoleFactor{ref, k - 1, k - 1});
      }
    } else {
      if (k == 0) {
        t.coeff *= CoeffPoly::sym(Sym::Area);
      } else if (region.lower_edge_at_zero) {
        throw DivergentIntegral("pole over an annulus extending to zero diverges");
      } else if (k == 1) {
        t.coeff *= CoeffPoly::mono(Rational(2), Monomial::of(Sym::Pi, 1)) *
                   CoeffPoly::sym(Sym::LogScale);
      } else {
        const Monomial pi = Monomial::of(Sym::Pi, 1);
        t.coeff *= CoeffPoly::mono(Rational(1, k - 1), pi) *
                   (CoeffPoly::sym(Sym::CutLo, 2 - 2 * k) - CoeffPoly::sym(Sym::CutHi, 2 - 2 * k));
      }
    }
    out.push(std::move(t));
  }
  out.canonicalize();
  return out;
}

Expansion substitute_level(const Expansion& e, int n) {
  Expansion out = e;
  for (auto& t : out.mutable_terms()) t.coeff = t.coeff.substituted(Sym::Level, Rational(n));
  out.canonicalize();
  return out;
}

}  // namespace opeflow::ope
