#include <doctest.h>

#include <algorithm>
#include <cstdint>

#include "opeflow/expr.hpp"

using namespace opeflow::ope;

TEST_SUITE_BEGIN("expr");

namespace {

Expansion one_term(std::vector<TraceChain> chains, CoeffPoly c = CoeffPoly(1)) {
  Expansion e;
  e.set_factors(1);
  OperatorTerm t;
  t.coeff = std::move(c);
  t.chains = std::move(chains);
  t.parts = {0};
  e.push(std::move(t));
  e.canonicalize();
  return e;
}

}  // namespace

TEST_CASE("cyclic words canonicalize to one representative") {
  TraceChain a{{param_atom("A"), current_atom(false, 0), param_atom("B")}};
  TraceChain b{{param_atom("B"), param_atom("A"), current_atom(false, 0)}};
  TraceChain c{{current_atom(false, 0), param_atom("B"), param_atom("A")}};
  CHECK(a.canonicalize());
  CHECK(b.canonicalize());
  CHECK(c.canonicalize());
  CHECK(a == b);
  CHECK(b == c);
}

TEST_CASE("unit and inverse cancellations") {
  // STr(1) = 0
  TraceChain unit{{identity_atom()}};
  CHECK_FALSE(unit.canonicalize());
  // identity atoms drop out of longer words
  TraceChain padded{{param_atom("A"), identity_atom(), current_atom(false, 0)}};
  TraceChain bare{{param_atom("A"), current_atom(false, 0)}};
  CHECK(padded.canonicalize());
  CHECK(bare.canonicalize());
  CHECK(padded == bare);
  // I I^-1 cancels cyclically: STr(I Jb Iinv J) stays, STr(Iinv I Jb) = STr(Jb)
  TraceChain iso{{iso_atom(true), iso_atom(false), current_atom(true, 0)}};
  TraceChain just_jb{{current_atom(true, 0)}};
  CHECK(iso.canonicalize());
  CHECK(just_jb.canonicalize());
  CHECK(iso == just_jb);
  // M(p) M^-1(p) from the same insertion collapses, across insertions it stays
  TraceChain mm{{fundamental_atom(false, 0, 1), fundamental_atom(true, 0, 1)}};
  CHECK_FALSE(mm.canonicalize());
  TraceChain cross{{fundamental_atom(false, 0, 1), fundamental_atom(true, 0, 2)}};
  CHECK(cross.canonicalize());
  CHECK(cross.word.size() == 2);
  // the wrap-around pair cancels too: STr(M Jb Minv) = STr(Jb)
  TraceChain wrap{{fundamental_atom(false, 0), current_atom(true, 0), fundamental_atom(true, 0)}};
  CHECK(wrap.canonicalize());
  CHECK(wrap == just_jb);
}

TEST_CASE("like terms merge and zero terms vanish") {
  Expansion e;
  e.set_factors(1);
  OperatorTerm t1;
  t1.coeff = CoeffPoly(2);
  t1.chains = {TraceChain{{param_atom("A"), current_atom(false, 0)}}};
  t1.parts = {0};
  OperatorTerm t2 = t1;
  t2.coeff = CoeffPoly(-2);
  t2.chains = {TraceChain{{current_atom(false, 0), param_atom("A")}}}; // same cyclic word
  e.push(t1);
  e.push(t2);
  e.canonicalize();
  CHECK(e.terms().empty());
}

TEST_CASE("expansions form a module over the coefficient ring") {
  Expansion e = one_term({TraceChain{{current_atom(false, 0)}}});
  Expansion f = e;
  f *= CoeffPoly::sym(Sym::Level);
  f += e;
  CHECK(f.terms().size() == 1);
  CHECK(f.terms()[0].coeff == CoeffPoly(1) + CoeffPoly::sym(Sym::Level));
}

TEST_CASE("parity is an involution exchanging chiralities") {
  Expansion e;
  e.set_factors(1);
  const int z = e.add_point("z", true);
  OperatorTerm t;
  t.coeff = CoeffPoly(1);
  t.pole = {PoleFactor{z, 2, 0}};
  t.d_holo = 1;
  t.chains = {TraceChain{{current_atom(false, 0), iso_atom(false), current_atom(true, 0),
                          iso_atom(true)}}};
  t.parts = {0};
  e.push(t);
  e.canonicalize();
  Expansion p = parity_transform(e);
  CHECK_FALSE(p == e);
  CHECK(parity_transform(p) == e);
  CHECK(p.terms()[0].pole[0].anti == 2);
  CHECK(p.terms()[0].pole[0].holo == 0);
  CHECK(p.terms()[0].d_anti == 1);
}

TEST_CASE("two-trace term is parity even") {
  Expansion oa = one_term({TraceChain{{current_atom(false, 0)}},
                           TraceChain{{current_atom(true, 0)}}});
  CHECK(parity_transform(oa) == oa);
}

TEST_CASE("single-trace current term is parity even") {
  Expansion oi = one_term({TraceChain{{current_atom(false, 0), iso_atom(false),
                                       current_atom(true, 0), iso_atom(true)}}});
  CHECK(parity_transform(oi) == oi);
}

TEST_CASE("text serialization round-trips") {
  Expansion e;
  e.set_factors(2);
  const int z = e.add_point("z", true);
  OperatorTerm t;
  t.coeff = -CoeffPoly::sym(Sym::Level);
  t.pole = {PoleFactor{z, 2, 1}};
  t.chains = {TraceChain{{param_atom("A"), current_atom(true, 0, 1)}},
              TraceChain{{fundamental_atom(false, 0)}}};
  t.parts = {0, 1};
  e.push(t);
  OperatorTerm t2;
  t2.coeff = CoeffPoly(1);
  t2.d_holo = 1;
  t2.chains = {TraceChain{{fundamental_atom(false, 0)}}};
  t2.parts = {0, 0};
  e.push(t2);
  e.canonicalize();

  const std::string text = e.str();
  const Expansion back = Expansion::from_text(text);
  CHECK(back == e);
  CHECK(back.str() == text);
}

TEST_CASE("json serialization round-trips") {
  Expansion e;
  e.set_factors(1);
  const int z = e.add_point("z", true);
  OperatorTerm t;
  t.coeff = CoeffPoly::mono(Rational(-1, 2), Monomial::of(Sym::Level, -1));
  t.pole = {PoleFactor{z, 1, 1}};
  t.chains = {TraceChain{{current_atom(false, 0), iso_atom(false), current_atom(true, 0),
                          iso_atom(true)}}};
  t.parts = {0};
  e.push(t);
  e.canonicalize();

  const std::string json = e.to_json();
  const Expansion back = Expansion::from_json(json);
  CHECK(back == e);
  CHECK(back.to_json() == json);
}

namespace {

// Tiny deterministic generator for property checks.
struct Rng {
  std::uint64_t s = 0x9e3779b97f4a7c15ull;
  std::uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

Atom random_atom(Rng& rng) {
  switch (rng.below(8)) {
    case 0: return param_atom(std::string(1, static_cast<char>('A' + rng.below(3))));
    case 1: return identity_atom();
    case 2: return iso_atom(false);
    case 3: return iso_atom(true);
    case 4: return current_atom(false, 0, rng.below(3));
    case 5: return current_atom(true, 0, rng.below(3));
    case 6: return fundamental_atom(false, 0, rng.below(3));
    default: return fundamental_atom(true, 0, rng.below(3));
  }
}

}  // namespace

TEST_CASE("property: rotations of a word canonicalize identically") {
  Rng rng;
  for (int trial = 0; trial < 200; ++trial) {
    TraceChain chain;
    const int len = 1 + rng.below(6);
    for (int i = 0; i < len; ++i) chain.word.push_back(random_atom(rng));
    TraceChain rotated = chain;
    std::rotate(rotated.word.begin(), rotated.word.begin() + rng.below(len), rotated.word.end());
    const bool a = chain.canonicalize();
    const bool b = rotated.canonicalize();
    CHECK(a == b);
    if (a) CHECK(chain == rotated);
  }
}

TEST_CASE("property: random expansions survive both serializations") {
  Rng rng;
  for (int trial = 0; trial < 50; ++trial) {
    Expansion e;
    e.set_factors(3);
    const int z = e.add_point("z", true);
    const int u = e.add_point("u", true);
    const int nterms = 1 + rng.below(4);
    for (int k = 0; k < nterms; ++k) {
      OperatorTerm t;
      t.coeff = CoeffPoly::mono(Rational(1 + rng.below(5), 1 + rng.below(7)),
                                Monomial::of(Sym::Level, rng.below(5) - 2));
      if (rng.below(2)) t.pole.push_back(PoleFactor{z, rng.below(3), rng.below(3)});
      if (rng.below(2)) t.pole.push_back(PoleFactor{u, rng.below(2), rng.below(2)});
      t.d_holo = rng.below(2);
      const int nchains = 1 + rng.below(2);
      for (int c = 0; c < nchains; ++c) {
        TraceChain chain;
        const int len = 1 + rng.below(4);
        for (int i = 0; i < len; ++i) chain.word.push_back(random_atom(rng));
        t.chains.push_back(std::move(chain));
      }
      t.parts = {rng.below(2), rng.below(2), 1};
      e.push(std::move(t));
    }
    e.canonicalize();
    CHECK(Expansion::from_text(e.str()) == e);
    CHECK(Expansion::from_json(e.to_json()) == e);
    // parity stays an involution on arbitrary content
    CHECK(parity_transform(parity_transform(e)) == e);
  }
}

TEST_CASE("operator comparison ignores factor bookkeeping") {
  Expansion a = one_term({TraceChain{{current_atom(false, 0, 3)}}});
  Expansion b = one_term({TraceChain{{current_atom(false, 0, 5)}}});
  CHECK_FALSE(a == b);
  CHECK(Expansion::equal_as_operators(a, b));
}

TEST_SUITE_END();
