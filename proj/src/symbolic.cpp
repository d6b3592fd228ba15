#include "gml/symbolic.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace gml::symbolic {

bool Theory::contains(const HornClause& c) const {
  return std::find(clauses.begin(), clauses.end(), c) != clauses.end();
}

std::set<std::string> Theory::vocabulary() const {
  std::set<std::string> vocab;
  for (const auto& c : clauses) {
    vocab.insert(c.body.begin(), c.body.end());
    vocab.insert(c.head);
  }
  return vocab;
}

Theory Theory::merged_with(const Theory& other) const {
  Theory out = *this;
  for (const auto& c : other.clauses) {
    if (!out.contains(c)) out.clauses.push_back(c);
  }
  return out;
}

std::set<std::string> forward_chain(const Theory& theory) {
  std::set<std::string> derived;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : theory.clauses) {
      if (derived.count(c.head)) continue;
      bool fires = std::all_of(c.body.begin(), c.body.end(),
                               [&](const std::string& a) { return derived.count(a) > 0; });
      if (fires) {
        derived.insert(c.head);
        changed = true;
      }
    }
  }
  return derived;
}

bool entails(const Theory& theory, const Goal& goal) {
  auto model = forward_chain(theory);
  return std::all_of(goal.atoms.begin(), goal.atoms.end(),
                     [&](const std::string& a) { return model.count(a) > 0; });
}

std::string apply_rename(const Rename& sigma, const std::string& atom) {
  auto it = sigma.find(atom);
  return it == sigma.end() ? atom : it->second;
}

Theory rename_theory(const Rename& sigma, const Theory& theory) {
  Theory out;
  for (const auto& c : theory.clauses) {
    HornClause rc;
    rc.head = apply_rename(sigma, c.head);
    for (const auto& a : c.body) rc.body.insert(apply_rename(sigma, a));
    out.clauses.push_back(std::move(rc));
  }
  return out;
}

Goal rename_goal(const Rename& sigma, const Goal& goal) {
  Goal out;
  for (const auto& a : goal.atoms) out.atoms.insert(apply_rename(sigma, a));
  return out;
}

void require_injective(const Rename& sigma, const std::set<std::string>& vocabulary) {
  std::map<std::string, std::string> image_to_src;
  for (const auto& a : vocabulary) {
    auto img = apply_rename(sigma, a);
    auto [it, fresh] = image_to_src.emplace(img, a);
    if (!fresh && it->second != a) {
      throw NonInjectiveRename("rename identifies atoms '" + it->second + "' and '" + a + "'");
    }
  }
}

SymbolicCertificate certify_symbolic(const Theory& hypothesis, const Theory& background_src,
                                     const Theory& background_dst, const Rename& sigma,
                                     const Goal& goal) {
  (void)background_src;  // admissibility reads only the transported side
  auto vocab = hypothesis.vocabulary();
  vocab.insert(goal.atoms.begin(), goal.atoms.end());
  require_injective(sigma, vocab);

  Theory transported = rename_theory(sigma, hypothesis).merged_with(background_dst);
  bool ok = entails(transported, rename_goal(sigma, goal));
  return {ok, ok ? Cost::finite(1.0) : Cost::infinite()};
}

bool conservative_extension_check(const Theory& base, const Theory& extension) {
  for (const auto& c : base.clauses) {
    if (!extension.contains(c)) throw NotASuperset("extension does not contain the base theory");
  }
  auto base_vocab = base.vocabulary();
  for (const auto& c : extension.clauses) {
    if (base.contains(c)) continue;
    if (base_vocab.count(c.head)) return false;
  }
  return true;
}

bool monotonicity_check(const Theory& theory, const Theory& extra, const Goal& goal) {
  return !(entails(theory, goal) && !entails(theory.merged_with(extra), goal));
}

Theory parse_theory(std::istream& in) {
  Theory out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
    if (tokens.empty()) continue;

    auto arrow = std::find(tokens.begin(), tokens.end(), "->");
    if (arrow == tokens.end() || std::next(arrow) == tokens.end() ||
        std::next(arrow, 2) != tokens.end()) {
      throw Error("theory line " + std::to_string(lineno) +
                  ": expected `body-atoms -> head`, got: " + line);
    }
    HornClause c;
    c.head = *std::next(arrow);
    c.body.insert(tokens.begin(), arrow);
    out.clauses.push_back(std::move(c));
  }
  return out;
}

Theory parse_theory_text(const std::string& text) {
  std::istringstream in(text);
  return parse_theory(in);
}

Goal parse_goal(const std::string& text) {
  std::istringstream in(text);
  Goal g;
  std::string tok;
  while (in >> tok) {
    if (tok == "?") continue;
    g.atoms.insert(tok);
  }
  if (g.atoms.empty()) throw Error("goal must name at least one atom");
  return g;
}

std::string format_theory(const Theory& theory) {
  std::ostringstream out;
  for (const auto& c : theory.clauses) {
    for (const auto& a : c.body) out << a << ' ';
    out << "-> " << c.head << '\n';
  }
  return out.str();
}

}  // namespace gml::symbolic
