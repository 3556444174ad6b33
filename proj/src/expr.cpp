#include "opeflow/expr.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace opeflow::ope {

Atom param_atom(std::string name, int origin) {
  return Atom{AtomKind::Param, 0, origin, std::move(name)};
}
Atom identity_atom() { return Atom{AtomKind::Identity, 0, 0, {}}; }
Atom iso_atom(bool inverse, int origin) {
  return Atom{inverse ? AtomKind::IsoInv : AtomKind::Iso, 0, origin, {}};
}
Atom current_atom(bool antiholo, int point, int origin) {
  return Atom{antiholo ? AtomKind::AntiholoCurrent : AtomKind::HoloCurrent, point, origin, {}};
}
Atom fundamental_atom(bool inverse, int point, int origin) {
  return Atom{inverse ? AtomKind::FundamentalInv : AtomKind::Fundamental, point, origin, {}};
}

namespace {

bool cancels(const Atom& a, const Atom& b) {
  if (a.kind == AtomKind::Iso && b.kind == AtomKind::IsoInv) return true;
  if (a.kind == AtomKind::IsoInv && b.kind == AtomKind::Iso) return true;
  // M(p) M^{-1}(p) from one and the same insertion multiplies to the unit;
  // across different factors the normal-ordered pair is a genuine operator.
  const bool mm = (a.kind == AtomKind::Fundamental && b.kind == AtomKind::FundamentalInv) ||
                  (a.kind == AtomKind::FundamentalInv && b.kind == AtomKind::Fundamental);
  return mm && a.point == b.point && a.origin == b.origin;
}

void rotate_minimal(std::vector<Atom>& w) {
  if (w.size() < 2) return;
  std::size_t best = 0;
  for (std::size_t k = 1; k < w.size(); ++k) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Atom& a = w[(k + i) % w.size()];
      const Atom& b = w[(best + i) % w.size()];
      if (a < b) { best = k; break; }
      if (b < a) break;
    }
  }
  std::rotate(w.begin(), w.begin() + best, w.end());
}

}  // namespace

bool TraceChain::canonicalize() {
  bool changed = true;
  while (changed) {
    changed = false;
    auto drop = std::remove_if(word.begin(), word.end(),
                               [](const Atom& a) { return a.kind == AtomKind::Identity; });
    if (drop != word.end()) { word.erase(drop, word.end()); changed = true; }
    for (std::size_t i = 0; i + 1 <= word.size() && word.size() >= 2; ++i) {
      const std::size_t j = (i + 1) % word.size();
      if (i != j && cancels(word[i], word[j])) {
        if (j > i) { word.erase(word.begin() + j); word.erase(word.begin() + i); }
        else { word.erase(word.begin() + i); word.erase(word.begin() + j); }
        changed = true;
        break;
      }
    }
  }
  if (word.empty()) return false; // STr(1) = 0
  rotate_minimal(word);
  return true;
}

bool OperatorTerm::connected() const {
  if (parts.size() <= 1) return true;
  return std::all_of(parts.begin(), parts.end(), [&](int p) { return p == parts.front(); });
}

int OperatorTerm::pole_holo(int point) const {
  for (const auto& p : pole)
    if (p.point == point) return p.holo;
  return 0;
}
int OperatorTerm::pole_anti(int point) const {
  for (const auto& p : pole)
    if (p.point == point) return p.anti;
  return 0;
}

int Expansion::add_point(std::string name, bool outermost) {
  point_names_.push_back(std::move(name));
  int depth = 0;
  if (!point_depths_.empty()) {
    const auto [lo, hi] = std::minmax_element(point_depths_.begin(), point_depths_.end());
    depth = outermost ? *hi + 1 : *lo - 1;
  }
  point_depths_.push_back(depth);
  return static_cast<int>(point_names_.size()); // 1-based; 0 is the base
}

int Expansion::point_index(std::string_view name) const {
  for (std::size_t i = 0; i < point_names_.size(); ++i)
    if (point_names_[i] == name) return static_cast<int>(i + 1);
  return 0;
}

namespace {

void relabel_parts(std::vector<int>& parts) {
  std::vector<int> map(parts.size(), -1);
  int next = 0;
  for (int& p : parts) {
    if (p < 0 || p >= static_cast<int>(map.size()))
      throw std::logic_error("partition label out of range");
    if (map[p] < 0) map[p] = next++;
    p = map[p];
  }
}

bool canonicalize_term(OperatorTerm& t) {
  relabel_parts(t.parts);
  // Atoms of factors already joined into one cluster are indistinguishable
  // for every later contraction, so their origin tags collapse onto the
  // cluster representative; without this, antisymmetric pairs would fail to
  // cancel after relocation to the base point.
  if (!t.parts.empty()) {
    std::vector<int> rep(t.parts.size(), -1);
    for (std::size_t i = 0; i < t.parts.size(); ++i)
      if (rep[t.parts[i]] < 0) rep[t.parts[i]] = static_cast<int>(i);
    for (auto& c : t.chains)
      for (auto& a : c.word)
        if (a.origin >= 0 && a.origin < static_cast<int>(t.parts.size()))
          a.origin = rep[t.parts[a.origin]];
  }
  for (auto& c : t.chains)
    if (!c.canonicalize()) return false;
  std::erase_if(t.pole, [](const PoleFactor& p) { return p.holo == 0 && p.anti == 0; });
  std::sort(t.pole.begin(), t.pole.end());
  std::sort(t.chains.begin(), t.chains.end());
  return !t.coeff.is_zero();
}

}  // namespace

void Expansion::canonicalize() {
  std::vector<OperatorTerm> merged;
  std::sort(terms_.begin(), terms_.end(),
            [](const OperatorTerm& a, const OperatorTerm& b) { return a.key() < b.key(); });
  for (auto& t : terms_) {
    if (!canonicalize_term(t)) continue;
    merged.push_back(std::move(t));
  }
  std::sort(merged.begin(), merged.end(),
            [](const OperatorTerm& a, const OperatorTerm& b) { return a.key() < b.key(); });
  terms_.clear();
  for (auto& t : merged) {
    if (!terms_.empty() && terms_.back().key() == t.key()) {
      terms_.back().coeff += t.coeff;
      if (terms_.back().coeff.is_zero()) terms_.pop_back();
    } else {
      terms_.push_back(std::move(t));
    }
  }
}

Expansion& Expansion::operator+=(const Expansion& o) {
  if (o.n_factors_ != n_factors_ && !o.terms_.empty() && !terms_.empty())
    throw std::invalid_argument("adding expansions over different factor sets");
  n_factors_ = std::max(n_factors_, o.n_factors_);
  if (point_names_.empty()) { point_names_ = o.point_names_; point_depths_ = o.point_depths_; }
  for (const auto& t : o.terms_) terms_.push_back(t);
  canonicalize();
  return *this;
}

Expansion& Expansion::operator*=(const CoeffPoly& c) {
  for (auto& t : terms_) t.coeff *= c;
  canonicalize();
  return *this;
}

bool operator==(const Expansion& a, const Expansion& b) {
  Expansion x = a, y = b;
  x.canonicalize();
  y.canonicalize();
  if (x.terms_.size() != y.terms_.size()) return false;
  for (std::size_t i = 0; i < x.terms_.size(); ++i) {
    if (x.terms_[i].key() != y.terms_[i].key()) return false;
    if (!(x.terms_[i].coeff == y.terms_[i].coeff)) return false;
  }
  return true;
}

namespace {

Expansion scrubbed(const Expansion& e) {
  Expansion out = e;
  out.canonicalize();
  for (auto& t : out.mutable_terms()) {
    for (auto& c : t.chains)
      for (auto& a : c.word) a.origin = 0;
    t.parts.clear();
  }
  // Origins changed the rotation tiebreak; re-rotate and re-merge (no new
  // word rewrites can fire because cancellation is origin-restricted).
  for (auto& t : out.mutable_terms())
    for (auto& c : t.chains) rotate_minimal(c.word);
  out.canonicalize();
  return out;
}

}  // namespace

bool Expansion::equal_as_operators(const Expansion& a, const Expansion& b) {
  return scrubbed(a) == scrubbed(b);
}

CoeffPoly Expansion::coefficient_of(const std::vector<PoleFactor>& pole,
                                    const std::vector<TraceChain>& chains,
                                    int d_holo, int d_anti) const {
  OperatorTerm pattern;
  pattern.coeff = CoeffPoly(1);
  pattern.pole = pole;
  pattern.chains = chains;
  pattern.d_holo = d_holo;
  pattern.d_anti = d_anti;
  if (!canonicalize_term(pattern)) return {};
  const Expansion self = scrubbed(*this);
  CoeffPoly sum;
  for (const auto& t : self.terms()) {
    if (t.pole == pattern.pole && t.chains == pattern.chains &&
        t.d_holo == pattern.d_holo && t.d_anti == pattern.d_anti)
      sum += t.coeff;
  }
  return sum;
}

Expansion Expansion::filtered_by_chains(const std::vector<TraceChain>& pattern) const {
  OperatorTerm pat;
  pat.coeff = CoeffPoly(1);
  pat.chains = pattern;
  if (!canonicalize_term(pat)) return {};
  Expansion canonical = *this;
  canonical.canonicalize();
  Expansion out;
  out.copy_point_structure(*this);
  out.set_factors(n_factors_);
  for (const auto& t : canonical.terms()) {
    std::vector<TraceChain> chains = t.chains; // already rewritten; rescrub and re-sort
    for (auto& c : chains)
      for (auto& a : c.word) a.origin = 0;
    for (auto& c : chains) rotate_minimal(c.word);
    std::sort(chains.begin(), chains.end());
    if (chains == pat.chains) out.push(t);
  }
  out.canonicalize();
  return out;
}

Expansion parity_transform(const Expansion& e) {
  Expansion out = e;
  for (auto& t : out.mutable_terms()) {
    for (auto& p : t.pole) std::swap(p.holo, p.anti);
    std::swap(t.d_holo, t.d_anti);
    for (auto& c : t.chains) {
      for (auto& a : c.word) {
        switch (a.kind) {
          case AtomKind::HoloCurrent: a.kind = AtomKind::AntiholoCurrent; break;
          case AtomKind::AntiholoCurrent: a.kind = AtomKind::HoloCurrent; break;
          case AtomKind::Fundamental: a.kind = AtomKind::FundamentalInv; break;
          case AtomKind::FundamentalInv: a.kind = AtomKind::Fundamental; break;
          case AtomKind::Iso: a.kind = AtomKind::IsoInv; break;
          case AtomKind::IsoInv: a.kind = AtomKind::Iso; break;
          default: break;
        }
      }
    }
  }
  out.canonicalize();
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

std::string atom_token(const Atom& a, const std::vector<std::string>& names) {
  std::string t;
  switch (a.kind) {
    case AtomKind::Param: t = "$" + a.name; break;
    case AtomKind::Identity: t = "Id"; break;
    case AtomKind::Iso: t = "I"; break;
    case AtomKind::IsoInv: t = "Iinv"; break;
    case AtomKind::HoloCurrent: t = "J"; break;
    case AtomKind::AntiholoCurrent: t = "Jb"; break;
    case AtomKind::Fundamental: t = "M"; break;
    case AtomKind::FundamentalInv: t = "Minv"; break;
    case AtomKind::Stress: t = "T"; break;
  }
  if (a.point != 0) {
    if (a.point < 1 || a.point > static_cast<int>(names.size()))
      throw std::logic_error("atom refers to unregistered point");
    t += "@" + names[a.point - 1];
  }
  if (a.origin != 0) t += "#" + std::to_string(a.origin);
  return t;
}

Atom atom_from_token(std::string_view token, const std::vector<std::string>& names) {
  Atom a;
  const auto hash = token.rfind('#');
  if (hash != std::string_view::npos) {
    a.origin = std::stoi(std::string(token.substr(hash + 1)));
    token = token.substr(0, hash);
  }
  const auto at = token.rfind('@');
  if (at != std::string_view::npos) {
    const auto pname = token.substr(at + 1);
    a.point = 0;
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == pname) a.point = static_cast<int>(i + 1);
    if (a.point == 0) throw std::invalid_argument("unknown point in atom token");
    token = token.substr(0, at);
  }
  if (!token.empty() && token.front() == '$') {
    a.kind = AtomKind::Param;
    a.name = std::string(token.substr(1));
  } else if (token == "Id") a.kind = AtomKind::Identity;
  else if (token == "I") a.kind = AtomKind::Iso;
  else if (token == "Iinv") a.kind = AtomKind::IsoInv;
  else if (token == "J") a.kind = AtomKind::HoloCurrent;
  else if (token == "Jb") a.kind = AtomKind::AntiholoCurrent;
  else if (token == "M") a.kind = AtomKind::Fundamental;
  else if (token == "Minv") a.kind = AtomKind::FundamentalInv;
  else if (token == "T") a.kind = AtomKind::Stress;
  else throw std::invalid_argument("unknown atom token: " + std::string(token));
  return a;
}

namespace {

std::string pole_text(const std::vector<PoleFactor>& pole,
                      const std::vector<std::string>& names) {
  if (pole.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& p : pole) {
    const std::string& nm = names.at(p.point - 1);
    if (p.holo != 0) {
      if (!first) os << " ";
      os << nm << "^" << -p.holo;
      first = false;
    }
    if (p.anti != 0) {
      if (!first) os << " ";
      os << nm << "bar^" << -p.anti;
      first = false;
    }
  }
  return first ? "1" : os.str();
}

std::string chains_text(const std::vector<TraceChain>& chains,
                        const std::vector<std::string>& names) {
  if (chains.empty()) return "-";
  std::ostringstream os;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    if (i) os << " ";
    os << "STr(";
    for (const auto& a : chains[i].word) os << " " << atom_token(a, names);
    os << " )";
  }
  return os.str();
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::string Expansion::str() const {
  Expansion copy = *this;
  copy.canonicalize();
  std::ostringstream os;
  os << "points:";
  for (const auto& n : copy.point_names_) os << " " << n;
  os << "\ndepths:";
  for (int d : copy.point_depths_) os << " " << d;
  os << "\nfactors: " << copy.n_factors_ << "\n";
  for (const auto& t : copy.terms_) {
    os << "term: " << t.coeff.str() << " ; " << pole_text(t.pole, copy.point_names_)
       << " ; d=" << t.d_holo << ",db=" << t.d_anti << " ; parts=";
    if (t.parts.empty()) os << "-";
    for (std::size_t i = 0; i < t.parts.size(); ++i)
      os << (i ? "," : "") << t.parts[i];
    os << " ; " << chains_text(t.chains, copy.point_names_) << "\n";
  }
  return os.str();
}

Expansion Expansion::from_text(std::string_view text) {
  Expansion out;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("points:", 0) == 0) {
      out.point_names_ = split_ws(line.substr(7));
    } else if (line.rfind("depths:", 0) == 0) {
      out.point_depths_.clear();
      for (const auto& t : split_ws(line.substr(7))) out.point_depths_.push_back(std::stoi(t));
    } else if (line.rfind("factors:", 0) == 0) {
      out.n_factors_ = std::stoi(line.substr(8));
    } else if (line.rfind("term:", 0) == 0) {
      const std::string body = line.substr(5);
      std::vector<std::string> fields;
      std::size_t start = 0;
      while (true) {
        const auto sep = body.find(" ; ", start);
        fields.push_back(body.substr(start, sep == std::string::npos ? sep : sep - start));
        if (sep == std::string::npos) break;
        start = sep + 3;
      }
      if (fields.size() != 5) throw std::invalid_argument("bad term line");
      OperatorTerm t;
      t.coeff = CoeffPoly::parse(fields[0]);
      if (split_ws(fields[1]) != std::vector<std::string>{"1"}) {
        for (const auto& tok : split_ws(fields[1])) {
          const auto caret = tok.find('^');
          if (caret == std::string::npos) throw std::invalid_argument("bad pole token");
          std::string nm = tok.substr(0, caret);
          const int exp = std::stoi(tok.substr(caret + 1));
          bool anti = false;
          if (nm.size() > 3 && nm.substr(nm.size() - 3) == "bar") {
            anti = true;
            nm = nm.substr(0, nm.size() - 3);
          }
          int pt = 0;
          for (std::size_t i = 0; i < out.point_names_.size(); ++i)
            if (out.point_names_[i] == nm) pt = static_cast<int>(i + 1);
          if (pt == 0) throw std::invalid_argument("pole names unknown point");
          bool found = false;
          for (auto& p : t.pole)
            if (p.point == pt) { (anti ? p.anti : p.holo) = -exp; found = true; }
          if (!found) {
            PoleFactor p{pt, 0, 0};
            (anti ? p.anti : p.holo) = -exp;
            t.pole.push_back(p);
          }
        }
      }
      {
        const auto d = split_ws(fields[2]);
        if (d.size() != 1) throw std::invalid_argument("bad derivative field");
        if (std::sscanf(d[0].c_str(), "d=%d,db=%d", &t.d_holo, &t.d_anti) != 2)
          throw std::invalid_argument("bad derivative field");
      }
      if (fields[3] != "parts=-") {
        std::string p = fields[3].substr(6);
        std::istringstream ps(p);
        std::string item;
        while (std::getline(ps, item, ',')) t.parts.push_back(std::stoi(item));
      }
      if (fields[4] != "-") {
        const auto toks = split_ws(fields[4]);
        TraceChain cur;
        bool open = false;
        for (const auto& tok : toks) {
          if (tok == "STr(") { cur = {}; open = true; }
          else if (tok == ")") { t.chains.push_back(cur); open = false; }
          else if (open) cur.word.push_back(atom_from_token(tok, out.point_names_));
          else throw std::invalid_argument("stray token in chains");
        }
        if (open) throw std::invalid_argument("unterminated chain");
      }
      out.terms_.push_back(std::move(t));
    }
  }
  out.canonicalize();
  return out;
}

std::string Expansion::to_json() const {
  Expansion copy = *this;
  copy.canonicalize();
  nlohmann::ordered_json j;
  j["points"] = copy.point_names_;
  j["depths"] = copy.point_depths_;
  j["factors"] = copy.n_factors_;
  j["terms"] = nlohmann::ordered_json::array();
  for (const auto& t : copy.terms_) {
    nlohmann::ordered_json jt;
    jt["coeff"] = t.coeff.str();
    jt["pole"] = nlohmann::ordered_json::array();
    for (const auto& p : t.pole)
      jt["pole"].push_back({{"point", copy.point_names_.at(p.point - 1)},
                            {"holo", p.holo},
                            {"anti", p.anti}});
    jt["d"] = {t.d_holo, t.d_anti};
    jt["parts"] = t.parts;
    jt["chains"] = nlohmann::ordered_json::array();
    for (const auto& c : t.chains) {
      nlohmann::ordered_json jc = nlohmann::ordered_json::array();
      for (const auto& a : c.word) jc.push_back(atom_token(a, copy.point_names_));
      jt["chains"].push_back(jc);
    }
    j["terms"].push_back(jt);
  }
  return j.dump(2);
}

Expansion Expansion::from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  Expansion out;
  out.point_names_ = j.at("points").get<std::vector<std::string>>();
  out.point_depths_ = j.at("depths").get<std::vector<int>>();
  out.n_factors_ = j.at("factors").get<int>();
  for (const auto& jt : j.at("terms")) {
    OperatorTerm t;
    t.coeff = CoeffPoly::parse(jt.at("coeff").get<std::string>());
    for (const auto& jp : jt.at("pole")) {
      PoleFactor p;
      const auto nm = jp.at("point").get<std::string>();
      p.point = 0;
      for (std::size_t i = 0; i < out.point_names_.size(); ++i)
        if (out.point_names_[i] == nm) p.point = static_cast<int>(i + 1);
      if (p.point == 0) throw std::invalid_argument("pole names unknown point");
      p.holo = jp.at("holo").get<int>();
      p.anti = jp.at("anti").get<int>();
      t.pole.push_back(p);
    }
    t.d_holo = jt.at("d").at(0).get<int>();
    t.d_anti = jt.at("d").at(1).get<int>();
    t.parts = jt.at("parts").get<std::vector<int>>();
    for (const auto& jc : jt.at("chains")) {
      TraceChain c;
      for (const auto& ja : jc)
        c.word.push_back(atom_from_token(ja.get<std::string>(), out.point_names_));
      t.chains.push_back(std::move(c));
    }
    out.terms_.push_back(std::move(t));
  }
  out.canonicalize();
  return out;
}

}  // namespace opeflow::ope
