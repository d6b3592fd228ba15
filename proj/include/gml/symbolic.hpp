#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gml/cost.hpp"
#include "gml/errors.hpp"

namespace gml::symbolic {

/// Definite propositional Horn clause: body atoms imply the head atom.
/// An empty body makes the clause a fact.
struct HornClause {
  std::set<std::string> body;
  std::string head;

  auto operator<=>(const HornClause&) const = default;
};

struct Theory {
  std::vector<HornClause> clauses;

  void add(std::set<std::string> body, std::string head) {
    clauses.push_back({std::move(body), std::move(head)});
  }
  void add_fact(std::string head) { add({}, std::move(head)); }

  bool contains(const HornClause& c) const;
  /// Atoms occurring anywhere in the theory (bodies and heads).
  std::set<std::string> vocabulary() const;
  /// Union of two theories (clause multiset union with dedup).
  Theory merged_with(const Theory& other) const;

  bool operator==(const Theory&) const = default;
};

/// Safety goal: a nonempty conjunction of atoms.
struct Goal {
  std::set<std::string> atoms;

  bool operator==(const Goal&) const = default;
};

using Rename = std::map<std::string, std::string>;

/// Forward-chaining fixpoint (least model) of a definite program.
std::set<std::string> forward_chain(const Theory& theory);

/// True iff every goal atom is in the least model of the theory.
bool entails(const Theory& theory, const Goal& goal);

/// Apply an atom rename; atoms without an entry map to themselves.
std::string apply_rename(const Rename& sigma, const std::string& atom);
Theory rename_theory(const Rename& sigma, const Theory& theory);
Goal rename_goal(const Rename& sigma, const Goal& goal);

/// Throws NonInjectiveRename when sigma identifies two distinct atoms of the
/// given vocabulary.
void require_injective(const Rename& sigma, const std::set<std::string>& vocabulary);

/// Symbolic admissibility certificate: the transported hypothesis together
/// with the target background must still entail the (transported) goal.
/// Finite cost 1.0 on success, INFINITE otherwise.
struct SymbolicCertificate {
  bool admissible;
  Cost cost;
};

SymbolicCertificate certify_symbolic(const Theory& hypothesis, const Theory& background_src,
                                     const Theory& background_dst, const Rename& sigma,
                                     const Goal& goal);

/// Syntactic conservativity: every clause added by the extension has a head
/// atom not occurring in the base theory. Throws NotASuperset when the base
/// is not contained in the extension.
bool conservative_extension_check(const Theory& base, const Theory& extension);

/// Runtime monotonicity assertion: entailment is never lost by adding clauses.
bool monotonicity_check(const Theory& theory, const Theory& extra, const Goal& goal);

/// Plain-text clause format, one clause per line:
///   `a b -> c`   clause with body {a, b} and head c
///   `-> c`       fact
/// Blank lines and lines starting with `#` are ignored.
Theory parse_theory(std::istream& in);
Theory parse_theory_text(const std::string& text);

/// Goal format: `? c d` or just whitespace-separated atoms.
Goal parse_goal(const std::string& text);

std::string format_theory(const Theory& theory);

}  // namespace gml::symbolic
