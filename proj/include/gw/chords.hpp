#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gw/normal_forms.hpp"

namespace gw::chords {

/// Perfect matching on positions 1..2m; canonical form is the sorted list of
/// (low, high) pairs.
struct ChordDiagram {
  int m = 0;
  std::vector<std::pair<int, int>> chords;

  void canonicalize();
  std::string text() const;  // e.g. "[(1,3),(2,4)]"

  bool operator==(const ChordDiagram&) const = default;
  bool operator<(const ChordDiagram& o) const { return chords < o.chords; }
};

/// Integer combination of same-size diagrams.
struct DiagramRelator {
  std::vector<std::pair<ChordDiagram, Int>> terms;  // canonical diagrams, sorted

  void canonicalize();
  bool operator==(const DiagramRelator&) const = default;
  bool operator<(const DiagramRelator& o) const { return terms < o.terms; }
};

/// All (2m-1)!! perfect matchings in canonical (lexicographic) order.
std::vector<ChordDiagram> enumerate(int m);

/// True when some gap between consecutive positions is crossed by no chord.
bool is_separated(const ChordDiagram& d);

/// One single-diagram relator per separated diagram.
std::vector<DiagramRelator> sep_relators(int m);

struct FourTOptions {
  bool negate_signs = false;  // experiment: global sign flip
  /// Experiment: group signs by endpoint (+,-,-,+) instead of alternating
  /// along the interval (+,-,+,-). Never acceptance-gated.
  bool group_swap = false;
};

/// Four-term relators: for every (m-1)-chord template, distinguished chord
/// (p, q) and far-endpoint gap, the alternating sum of the four diagrams
/// placing the new chord's near endpoint adjacent to p and q, signs in
/// interval order.
std::vector<DiagramRelator> four_t_relators(int m, const FourTOptions& opt = {});

struct AiOptions {
  FourTOptions four_t;
  /// Relabel positions i -> 2m+1-i before assembling (symmetry experiment).
  bool reflect = false;
};

/// Z{diagrams} / (SEP, 4T) as an abelian group.
CokerPresentation a_i_presentation(int m, const AiOptions& opt = {});

struct AiReport {
  int m = 0;
  std::size_t diagrams = 0;
  std::size_t sep_count = 0;
  std::size_t fourt_count = 0;
  CokerPresentation presentation;

  nlohmann::json to_json() const;
};

AiReport a_i_report(int m, const AiOptions& opt = {});

}  // namespace gw::chords
