#include "gw/chords.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace gw::chords {

void ChordDiagram::canonicalize() {
  for (auto& [a, b] : chords)
    if (a > b) std::swap(a, b);
  std::sort(chords.begin(), chords.end());
}

std::string ChordDiagram::text() const {
  std::string s = "[";
  for (std::size_t i = 0; i < chords.size(); ++i) {
    if (i) s += ",";
    s += "(" + std::to_string(chords[i].first) + "," +
         std::to_string(chords[i].second) + ")";
  }
  return s + "]";
}

void DiagramRelator::canonicalize() {
  std::map<ChordDiagram, Int> acc;
  for (auto& [d, c] : terms) acc[d] += c;
  terms.clear();
  for (auto& [d, c] : acc)
    if (c != 0) terms.emplace_back(d, c);
}

namespace {

void enumerate_rec(int m, std::vector<int>& free_pos,
                   ChordDiagram& partial, std::vector<ChordDiagram>& out) {
  if (free_pos.empty()) {
    out.push_back(partial);
    return;
  }
  int first = free_pos.front();
  for (std::size_t k = 1; k < free_pos.size(); ++k) {
    int mate = free_pos[k];
    std::vector<int> rest;
    rest.reserve(free_pos.size() - 2);
    for (std::size_t t = 1; t < free_pos.size(); ++t)
      if (t != k) rest.push_back(free_pos[t]);
    partial.chords.emplace_back(first, mate);
    enumerate_rec(m, rest, partial, out);
    partial.chords.pop_back();
  }
}

}  // namespace

std::vector<ChordDiagram> enumerate(int m) {
  if (m < 1) throw std::invalid_argument("enumerate: m >= 1");
  std::vector<int> pos(2 * m);
  for (int i = 0; i < 2 * m; ++i) pos[i] = i + 1;
  ChordDiagram partial;
  partial.m = m;
  std::vector<ChordDiagram> out;
  enumerate_rec(m, pos, partial, out);
  // pairing the least free position first yields sorted pair lists already,
  // in lexicographic order
  return out;
}

bool is_separated(const ChordDiagram& d) {
  int top = 2 * d.m;
  for (int gap = 1; gap < top; ++gap) {
    bool spanned = false;
    for (const auto& [a, b] : d.chords)
      if (a <= gap && gap < b) {
        spanned = true;
        break;
      }
    if (!spanned) return true;
  }
  return false;
}

std::vector<DiagramRelator> sep_relators(int m) {
  std::vector<DiagramRelator> out;
  for (const ChordDiagram& d : enumerate(m))
    if (is_separated(d)) {
      DiagramRelator r;
      r.terms.emplace_back(d, 1);
      out.push_back(std::move(r));
    }
  return out;
}

namespace {

// insert the far endpoint after gap `far_gap` (0 = before position 1) of a
// template on 2m-2 positions, then the near endpoint immediately left/right
// of template position `anchor`; returns the m-chord diagram on 2m points
ChordDiagram insert_chord(const ChordDiagram& tmpl, int far_gap, int anchor,
                          bool near_left) {
  const int old_n = 2 * tmpl.m;
  // slots: old positions get even slots; insertions order by slot value
  std::vector<std::pair<double, int>> items;  // (slot, old position or 0/-1)
  for (int p = 1; p <= old_n; ++p) items.emplace_back(p, p);
  items.emplace_back(far_gap + 0.5, -1);                       // far endpoint
  items.emplace_back(near_left ? anchor - 0.25 : anchor + 0.25, 0);  // near
  std::sort(items.begin(), items.end());

  std::vector<int> new_pos(old_n + 1);
  int near_at = 0, far_at = 0;
  for (std::size_t k = 0; k < items.size(); ++k) {
    int label = items[k].second;
    if (label > 0)
      new_pos[label] = static_cast<int>(k) + 1;
    else if (label == 0)
      near_at = static_cast<int>(k) + 1;
    else
      far_at = static_cast<int>(k) + 1;
  }

  ChordDiagram d;
  d.m = tmpl.m + 1;
  for (const auto& [a, b] : tmpl.chords) d.chords.emplace_back(new_pos[a], new_pos[b]);
  d.chords.emplace_back(near_at, far_at);
  d.canonicalize();
  return d;
}

}  // namespace

std::vector<DiagramRelator> four_t_relators(int m, const FourTOptions& opt) {
  if (m < 2) return {};
  const int s0 = opt.negate_signs ? -1 : 1;
  // interval-order alternating signs; the grouped (+,-,-,+) variant flips
  // the q pair
  const int sq = opt.group_swap ? -s0 : s0;
  std::set<DiagramRelator> seen;
  std::vector<DiagramRelator> out;
  for (const ChordDiagram& tmpl : enumerate(m - 1)) {
    for (const auto& [p, q] : tmpl.chords) {
      for (int far_gap = 0; far_gap <= 2 * (m - 1); ++far_gap) {
        DiagramRelator r;
        r.terms.emplace_back(insert_chord(tmpl, far_gap, p, true), s0);
        r.terms.emplace_back(insert_chord(tmpl, far_gap, p, false), -s0);
        r.terms.emplace_back(insert_chord(tmpl, far_gap, q, true), sq);
        r.terms.emplace_back(insert_chord(tmpl, far_gap, q, false), -sq);
        r.canonicalize();
        if (r.terms.empty()) continue;
        if (seen.insert(r).second) out.push_back(r);
      }
    }
  }
  return out;
}

CokerPresentation a_i_presentation(int m, const AiOptions& opt) {
  return a_i_report(m, opt).presentation;
}

AiReport a_i_report(int m, const AiOptions& opt) {
  if (m < 1) throw std::invalid_argument("a_i: m >= 1");
  std::vector<ChordDiagram> all = enumerate(m);
  std::map<ChordDiagram, std::size_t> index;
  for (std::size_t k = 0; k < all.size(); ++k) index.emplace(all[k], k);

  auto maybe_reflect = [&](ChordDiagram d) {
    if (opt.reflect) {
      for (auto& [a, b] : d.chords) {
        a = 2 * m + 1 - a;
        b = 2 * m + 1 - b;
      }
      d.canonicalize();
    }
    return d;
  };

  AiReport rep;
  rep.m = m;
  rep.diagrams = all.size();

  std::vector<SparseRow> rows;
  auto push_relator = [&](const DiagramRelator& r) {
    SparseRow row;
    for (const auto& [d, c] : r.terms)
      row.emplace_back(index.at(maybe_reflect(d)), c);
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    rows.push_back(std::move(row));
  };

  auto sep = sep_relators(m);
  rep.sep_count = sep.size();
  for (const auto& r : sep) push_relator(r);
  auto fourt = four_t_relators(m, opt.four_t);
  rep.fourt_count = fourt.size();
  for (const auto& r : fourt) push_relator(r);

  rep.presentation = cokernel_of_rows(all.size(), std::move(rows));
  return rep;
}

nlohmann::json AiReport::to_json() const {
  nlohmann::json tor = nlohmann::json::array();
  for (const Int& t : presentation.torsion) tor.push_back(t.get_str());
  return nlohmann::json{{"m", m},
                        {"diagrams", diagrams},
                        {"sep_count", sep_count},
                        {"fourt_count", fourt_count},
                        {"free_rank", presentation.free_rank},
                        {"torsion", tor}};
}

}  // namespace gw::chords
