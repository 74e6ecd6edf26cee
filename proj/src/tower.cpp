#include "gw/tower.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace gw::tower {

using braid::PiPresentation;
using lie::LieElement;

TowerSession::TowerSession(lie::Convention conv, Cache* cache)
    : braid_(conv), cache_(cache) {}

std::string TowerSession::npi_key(int n, int length) const {
  return "npi/n=" + std::to_string(n) + "/l=" + std::to_string(length) +
         "/conv=" + lie::convention_name(braid_.convention()) +
         "/v=" + kVersion;
}

std::string TowerSession::report_key(int m) const {
  return "e2report/m=" + std::to_string(m) +
         "/conv=" + lie::convention_name(braid_.convention()) +
         "/v=" + kVersion;
}

E1Column TowerSession::e1(int m, int total_degree) {
  if (m < 2) throw std::invalid_argument("e1: m >= 2");
  if (total_degree != 0 && total_degree != 1)
    throw std::invalid_argument("e1: total degree 0 or 1");

  E1Column col;
  col.m = m;
  col.total_degree = total_degree;
  if (total_degree == 0) {
    col.free_lattice = &braid_.npi_free(m, m - 1);
    col.torsion_rank = 0;  // covering monomials shorter than m-1 cannot exist
  } else {
    col.free_lattice = &braid_.npi_free(m, m);
    if (m == 2) {
      col.eta_special = true;  // pi_3(S^2) = Z on the Hopf class
      col.torsion_rank = 0;
    } else {
      col.torsion_rank = braid_.npi_free(m, m - 1).free_rank;
    }
  }
  if (cache_) cache_->put(npi_key(m, col.free_lattice->length),
                          col.free_lattice->to_json());
  return col;
}

std::vector<Int> TowerSession::eta_d1_column() {
  // d^1 on the Hopf class: for each coface, write d^i(b_12) = sum_k a_k and
  // take the pairwise Whitehead corrections sum_{k<l} [a_k, a_l]; the
  // composite pieces a_k o eta are torsion and drop in the free target.
  const PiPresentation& target = braid_.npi_free(3, 2);
  const lie::Mono* b12 = braid_.gen_mono(2, 1, 2);
  LieElement total;
  for (int i = 0; i <= 3; ++i) {
    LieElement image = braid_.coface_sub(2, i, b12->gen);
    std::vector<const lie::Mono*> terms;
    for (const auto& [mono, coef] : image) {
      if (coef != 1)
        throw std::logic_error("coface of a generator must have unit terms");
      terms.push_back(mono);
    }
    int sign = (i % 2 == 0) ? 1 : -1;
    for (std::size_t k = 0; k < terms.size(); ++k)
      for (std::size_t l = k + 1; l < terms.size(); ++l)
        lie::element_add(total, braid_.lie().bracket({{terms[k], 1}},
                                                     {{terms[l], 1}}),
                         sign);
  }
  return braid_.reduce_in(target, total);
}

IntMatrix TowerSession::d1_into_zero_line(int m) {
  if (m < 2) throw std::invalid_argument("d1: m >= 2");
  const PiPresentation& target = braid_.npi_free(m, m - 1);
  if (m == 2) return IntMatrix(target.free_rank, 0);  // column 1 is a point
  if (m == 3) {
    std::vector<Int> col = eta_d1_column();
    IntMatrix mat(target.free_rank, 1);
    for (std::size_t r = 0; r < target.free_rank; ++r) mat.at(r, 0) = col[r];
    return mat;
  }
  // m >= 4: torsion summands map to zero and suspended eta-composites give
  // no corrections, so the free part carries the whole differential
  return braid_.alternating_coface_sum(m - 1, m - 1).matrix;
}

E2Group TowerSession::e2_zero_line(int m) {
  E2Group g;
  g.m = m;
  g.presentation = cokernel(d1_into_zero_line(m));
  return g;
}

namespace {

CokerPresentation coker_from_json(const nlohmann::json& j) {
  CokerPresentation p;
  p.ambient_rank = j.at("ambient_rank").get<std::size_t>();
  p.free_rank = j.at("free_rank").get<std::size_t>();
  for (const auto& t : j.at("torsion"))
    p.torsion.emplace_back(t.get<std::string>());
  return p;
}

}  // namespace

nlohmann::json coker_to_json(const CokerPresentation& p) {
  nlohmann::json tor = nlohmann::json::array();
  for (const Int& t : p.torsion) tor.push_back(t.get_str());
  return nlohmann::json{{"ambient_rank", p.ambient_rank},
                        {"free_rank", p.free_rank},
                        {"torsion", tor}};
}

nlohmann::json ColumnReport::to_json() const {
  return nlohmann::json{
      {"m", m},
      {"convention", convention},
      {"e1_deg0", {{"free", e1_deg0_free}}},
      {"e1_deg1",
       {{"free", e1_deg1_free},
        {"torsion2", e1_deg1_torsion2},
        {"eta_special", eta_special}}},
      {"d1", {{"rows", d1.rows}, {"cols", d1.cols}, {"rank", d1.rank}}},
      {"e2", coker_to_json(e2)},
      {"chord_side", coker_to_json(chord_side)},
      {"match", match},
      {"rational_match", rational_match}};
}

ColumnReport TowerSession::verify_e2comp(int m) {
  if (cache_) {
    if (auto hit = cache_->get(report_key(m))) {
      const nlohmann::json& j = *hit;
      ColumnReport rep;
      rep.m = j.at("m").get<int>();
      rep.convention = j.at("convention").get<std::string>();
      rep.e1_deg0_free = j.at("e1_deg0").at("free").get<std::size_t>();
      rep.e1_deg1_free = j.at("e1_deg1").at("free").get<std::size_t>();
      rep.e1_deg1_torsion2 = j.at("e1_deg1").at("torsion2").get<std::size_t>();
      rep.eta_special = j.at("e1_deg1").at("eta_special").get<bool>();
      rep.d1.rows = j.at("d1").at("rows").get<std::size_t>();
      rep.d1.cols = j.at("d1").at("cols").get<std::size_t>();
      rep.d1.rank = j.at("d1").at("rank").get<std::size_t>();
      rep.e2 = coker_from_json(j.at("e2"));
      rep.chord_side = coker_from_json(j.at("chord_side"));
      rep.match = j.at("match").get<bool>();
      rep.rational_match = j.at("rational_match").get<bool>();
      return rep;
    }
  }

  ColumnReport rep;
  rep.m = m;
  rep.convention = lie::convention_name(braid_.convention());

  E1Column deg0 = e1(m, 0);
  rep.e1_deg0_free = deg0.free_rank();
  if (m >= 3) {
    // the d1 domain: degree-1 part of column m-1 at the same t
    E1Column deg1 = e1(m - 1, 1);
    rep.e1_deg1_free = deg1.free_rank();
    rep.e1_deg1_torsion2 = deg1.torsion_rank;
    rep.eta_special = deg1.eta_special;
  }

  IntMatrix d1 = d1_into_zero_line(m);
  rep.d1.rows = d1.rows();
  rep.d1.cols = d1.cols();
  rep.d1.rank = smith_normal_form(d1).divisors.size();

  rep.e2 = cokernel(d1);
  rep.chord_side = chords::a_i_presentation(m - 1);
  rep.rational_match = rep.e2.free_rank == rep.chord_side.free_rank;
  rep.match = rep.rational_match && rep.e2.torsion == rep.chord_side.torsion;

  if (cache_) cache_->put(report_key(m), rep.to_json());
  return rep;
}

}  // namespace gw::tower
