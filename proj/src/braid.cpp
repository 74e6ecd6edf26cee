#include "gw/braid.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace gw::braid {

using lie::LieElement;
using lie::Mono;

int GenTable::id_of(int i, int j) const {
  if (!(1 <= i && i < j && j <= n))
    throw std::out_of_range("BraidGen indices out of range");
  return (i - 1) * (2 * n - i) / 2 + (j - i - 1);
}

std::pair<int, int> GenTable::pair_of(int id) const {
  if (id < 0 || id >= count()) throw std::out_of_range("BraidGen id");
  int i = 1;
  int base = 0;
  while (base + (n - i) <= id) {
    base += n - i;
    ++i;
  }
  return {i, i + 1 + (id - base)};
}

std::uint32_t support_mask(const Mono* m, const GenTable& gt) {
  std::uint32_t mask = 0;
  for (int id : m->word) {
    auto [i, j] = gt.pair_of(id);
    mask |= 1u << (i - 1);
    mask |= 1u << (j - 1);
  }
  return mask;
}

bool tree_connected(const Mono* m, const GenTable& gt) {
  if (m->is_leaf()) return true;
  return (support_mask(m->left, gt) & support_mask(m->right, gt)) != 0 &&
         tree_connected(m->left, gt) && tree_connected(m->right, gt);
}

namespace {

std::uint32_t full_mask(int n) { return (1u << n) - 1; }

// fully reduce echelon rows: clear each row's entries at later pivots
// (exact for unit pivots, floor-mod otherwise)
void fully_reduce(std::vector<SparseRow>& rows) {
  for (std::size_t i = rows.size(); i-- > 0;) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      std::size_t pc = rows[j].front().first;
      const Int& pv = rows[j].front().second;
      Int coeff = 0;
      for (const auto& [c, v] : rows[i])
        if (c == pc) coeff = v;
      if (coeff == 0) continue;
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), coeff.get_mpz_t(), pv.get_mpz_t());
      if (q != 0) rows[i] = sparse_axpy(rows[i], Int(-q), rows[j]);
    }
  }
}

}  // namespace

BraidContext::BraidContext(lie::Convention conv) : lie_(conv) {}

void BraidContext::set_generator_order_seed(std::uint64_t seed) {
  if (!ideal_.empty() || !npi_cache_.empty())
    throw std::logic_error("generator order must be set before computations");
  order_seed_ = seed;
}

int BraidContext::perm_id(int n, int lex_id) {
  if (!order_seed_) return lex_id;
  auto it = id_perm_.find(n);
  if (it == id_perm_.end()) {
    GenTable gt{n};
    std::vector<int> p(gt.count());
    std::iota(p.begin(), p.end(), 0);
    std::mt19937_64 rng(*order_seed_ ^ (0x9e3779b9ull * static_cast<unsigned>(n)));
    for (std::size_t k = p.size(); k > 1; --k)
      std::swap(p[k - 1], p[rng() % k]);
    std::vector<int> inv(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) inv[p[k]] = static_cast<int>(k);
    it = id_perm_.emplace(n, std::move(p)).first;
    id_perm_inv_.emplace(n, std::move(inv));
  }
  return it->second[lex_id];
}

std::pair<int, int> BraidContext::perm_pair(int n, int id) {
  GenTable gt{n};
  if (!order_seed_) return gt.pair_of(id);
  perm_id(n, 0);  // force table
  return gt.pair_of(id_perm_inv_[n][id]);
}

const Mono* BraidContext::gen_mono(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  GenTable gt{n};
  return lie_.leaf(perm_id(n, gt.id_of(i, j)));
}

const std::vector<const Mono*>& BraidContext::component_monos(
    int n, int length, std::uint32_t support) {
  IdealKey key{n, length, support};
  auto it = comp_monos_.find(key);
  if (it != comp_monos_.end()) return it->second;

  GenTable gt{n};
  std::vector<const Mono*> monos;
  for (const Mono* m : lie_.hall_words(gt.count(), length))
    if (support_mask(m, gt) == support) monos.push_back(m);
  std::map<const Mono*, std::size_t, lie::MonoLess> index;
  for (std::size_t k = 0; k < monos.size(); ++k) index.emplace(monos[k], k);
  comp_index_.emplace(key, std::move(index));
  return comp_monos_.emplace(key, std::move(monos)).first->second;
}

SparseRow BraidContext::element_to_row(
    const LieElement& e,
    const std::map<const Mono*, std::size_t, lie::MonoLess>& index) const {
  SparseRow row;
  row.reserve(e.size());
  for (const auto& [m, c] : e) {
    auto it = index.find(m);
    if (it == index.end())
      throw std::logic_error("ideal element leaves its support component");
    row.emplace_back(it->second, c);
  }
  std::sort(row.begin(), row.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return row;
}

const RowEchelonLattice* BraidContext::find_component(
    int n, int length, std::uint32_t support) const {
  auto it = ideal_.find(IdealKey{n, length, support});
  return it == ideal_.end() ? nullptr : &it->second;
}

void BraidContext::build_ideal_level(int n, int length,
                                     std::optional<std::uint32_t> only_mask) {
  GenTable gt{n};
  const int gens = gt.count();

  std::map<std::uint32_t, std::vector<LieElement>> buckets;
  auto deposit = [&](std::uint32_t mask, LieElement e) {
    if (e.empty()) return;
    if (only_mask && mask != *only_mask) return;
    buckets[mask].push_back(std::move(e));
  };

  if (length == 2) {
    // r1: [b_ij, b_kl] with {i,j} and {k,l} disjoint
    for (int a = 0; a < gens; ++a)
      for (int b = a + 1; b < gens; ++b) {
        auto [i, j] = gt.pair_of(a);
        auto [k, l] = gt.pair_of(b);
        if (i == k || i == l || j == k || j == l) continue;
        LieElement e = lie_.bracket({{gen_mono(n, i, j), 1}},
                                    {{gen_mono(n, k, l), 1}});
        deposit((1u << (i - 1)) | (1u << (j - 1)) | (1u << (k - 1)) |
                    (1u << (l - 1)),
                std::move(e));
      }
    // r2: [b_ij, b_ik + b_jk] for k outside {i,j}
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) {
          if (k == i || k == j) continue;
          LieElement sum{{gen_mono(n, std::min(i, k), std::max(i, k)), 1}};
          lie::element_add(sum,
                           {{gen_mono(n, std::min(j, k), std::max(j, k)), 1}});
          LieElement e = lie_.bracket({{gen_mono(n, i, j), 1}}, sum);
          deposit((1u << (i - 1)) | (1u << (j - 1)) | (1u << (k - 1)),
                  std::move(e));
        }
  } else {
    // [m, I_j] over Hall monomials m of complementary length
    for (int sub_len = 2; sub_len < length; ++sub_len) {
      const int mono_len = length - sub_len;
      const auto& monos = lie_.hall_words(gens, mono_len);
      std::vector<std::uint32_t> mono_masks(monos.size());
      for (std::size_t k = 0; k < monos.size(); ++k)
        mono_masks[k] = support_mask(monos[k], gt);

      std::vector<IdealKey> lower;
      for (const auto& [key, lattice] : ideal_)
        if (key.n == n && key.length == sub_len && lattice.rank() > 0)
          lower.push_back(key);

      for (const IdealKey& key : lower) {
        const auto& comp = component_monos(n, sub_len, key.support);
        const auto rows = ideal_.at(key).rows();
        for (const SparseRow& row : rows) {
          LieElement v;
          for (const auto& [c, coef] : row) v.emplace(comp[c], coef);
          for (std::size_t k = 0; k < monos.size(); ++k) {
            std::uint32_t mask = mono_masks[k] | key.support;
            if (only_mask && mask != *only_mask) continue;
            deposit(mask, lie_.bracket({{monos[k], 1}}, v));
          }
        }
      }
    }
  }

  for (auto& [mask, elements] : buckets) {
    IdealKey key{n, length, mask};
    component_monos(n, length, mask);
    const auto& index = comp_index_.at(key);
    auto [it, fresh] = ideal_.try_emplace(key, index.size());
    if (!fresh) continue;  // already complete for this mask
    for (const LieElement& e : elements)
      it->second.add(element_to_row(e, index));
  }
  ++stats_.ideal_levels_built;
}

void BraidContext::ensure_ideal(int n, int max_length,
                                std::optional<std::uint32_t> final_mask) {
  if (max_length < 2) return;
  int built = 1;
  if (auto it = ideal_built_upto_.find(n); it != ideal_built_upto_.end())
    built = std::max(built, it->second);

  for (int len = built + 1; len <= max_length; ++len) {
    if (final_mask && len == max_length) {
      auto tag = std::make_tuple(n, len, *final_mask);
      if (!restricted_built_.count(tag)) {
        build_ideal_level(n, len, final_mask);
        restricted_built_.insert(tag);
      }
      return;  // top level is mask-restricted, not recorded as fully built
    }
    build_ideal_level(n, len, std::nullopt);
    ideal_built_upto_[n] = len;
  }
}

const RowEchelonLattice& BraidContext::ideal_component(int n, int length,
                                                       std::uint32_t support) {
  ensure_ideal(n, length);
  IdealKey key{n, length, support};
  auto it = ideal_.find(key);
  if (it == ideal_.end()) {
    component_monos(n, length, support);
    it = ideal_.try_emplace(key, comp_index_.at(key).size()).first;
  }
  return it->second;
}

std::vector<LieElement> BraidContext::ib_relators(int n, int length,
                                                  std::uint32_t support) {
  if (length < 2) throw std::invalid_argument("ib_relators: length >= 2");
  const RowEchelonLattice& lat = ideal_component(n, length, support);
  const auto& monos = component_monos(n, length, support);
  std::vector<LieElement> out;
  for (const SparseRow& row : lat.rows()) {
    LieElement e;
    for (const auto& [c, coef] : row) e.emplace(monos[c], coef);
    out.push_back(std::move(e));
  }
  return out;
}

const PiPresentation& BraidContext::npi_free(int n, int length) {
  auto cache_key = std::make_pair(n, length);
  auto hit = npi_cache_.find(cache_key);
  if (hit != npi_cache_.end()) return hit->second;

  GenTable gt{n};
  const std::uint32_t full = full_mask(n);
  ensure_ideal(n, length, full);
  const RowEchelonLattice* lat = find_component(n, length, full);
  const auto& cov_monos = component_monos(n, length, full);

  PiPresentation p;
  p.n = n;
  p.length = length;
  p.convention = lie_.convention();

  std::vector<std::size_t> keep_pos(cov_monos.size(), SIZE_MAX);
  for (std::size_t k = 0; k < cov_monos.size(); ++k)
    if (tree_connected(cov_monos[k], gt)) {
      keep_pos[k] = p.ambient.size();
      p.ambient.push_back(cov_monos[k]);
    }
  for (std::size_t k = 0; k < p.ambient.size(); ++k)
    p.ambient_index.emplace(p.ambient[k], k);

  // project the relator basis onto the connected ambient; a covering
  // monomial with a disjoint-support node lies in the ideal, so dropping
  // its coordinate is the same as adding it as a relator
  RowEchelonLattice reduced(p.ambient.size());
  if (lat)
    for (const SparseRow& row : lat->rows()) {
      SparseRow r;
      for (const auto& [c, v] : row)
        if (keep_pos[c] != SIZE_MAX) r.emplace_back(keep_pos[c], v);
      if (!r.empty()) reduced.add(std::move(r));
    }

  std::vector<SparseRow> rows(reduced.rows());
  fully_reduce(rows);

  const std::size_t a = p.ambient.size();
  p.relators = IntMatrix(a, rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (const auto& [c, v] : rows[k]) p.relators.at(c, k) = v;

  bool unit_pivots = std::all_of(
      rows.begin(), rows.end(),
      [](const SparseRow& r) { return r.front().second == 1; });

  if (unit_pivots) {
    std::vector<bool> is_pivot(a, false);
    for (const auto& r : rows) is_pivot[r.front().first] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < a; ++c)
      if (!is_pivot[c]) free_cols.push_back(c);

    p.free_rank = free_cols.size();
    p.basis_map = IntMatrix(p.free_rank, a);
    p.lift = IntMatrix(a, p.free_rank);
    std::vector<std::size_t> col_slot(a, SIZE_MAX);
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
      col_slot[free_cols[k]] = k;
      p.basis_map.at(k, free_cols[k]) = 1;
      p.lift.at(free_cols[k], k) = 1;
    }
    // reduced row e_p + sum t_c e_c makes q(e_p) = -sum t_c e_c
    for (const auto& r : rows) {
      std::size_t pcol = r.front().first;
      for (std::size_t t = 1; t < r.size(); ++t)
        p.basis_map.at(col_slot[r[t].first], pcol) = -r[t].second;
    }
  } else {
    SnfOptions opt;
    opt.track_inverses = true;
    SmithForm f = smith_normal_form(p.relators, opt);
    std::size_t s = f.divisors.size();
    for (const Int& d : f.divisors)
      if (d > 1) p.torsion.push_back(d);
    p.free_rank = a - s;
    p.basis_map = IntMatrix(p.free_rank, a);
    p.lift = IntMatrix(a, p.free_rank);
    for (std::size_t r = 0; r < p.free_rank; ++r)
      for (std::size_t c = 0; c < a; ++c)
        p.basis_map.at(r, c) = f.U.at(s + r, c);
    for (std::size_t r = 0; r < a; ++r)
      for (std::size_t c = 0; c < p.free_rank; ++c)
        p.lift.at(r, c) = f.U_inv->at(r, s + c);
  }

  ++stats_.npi_built;
  return npi_cache_.emplace(cache_key, std::move(p)).first->second;
}

CokerPresentation BraidContext::npi_cokernel(int n, int length) {
  const std::uint32_t full = full_mask(n);
  ensure_ideal(n, length, full);
  const RowEchelonLattice* lat = find_component(n, length, full);
  const auto& monos = component_monos(n, length, full);
  std::vector<SparseRow> rows;
  if (lat) rows = lat->rows();
  return cokernel_of_rows(monos.size(), std::move(rows));
}

LieElement BraidContext::coface_sub(int n, int k, int gen_id) {
  if (k < 0 || k > n + 1) throw std::out_of_range("coface index");
  auto [i, j] = perm_pair(n, gen_id);
  const int m = n + 1;
  LieElement out;
  if (k == 0) {
    out.emplace(gen_mono(m, i + 1, j + 1), 1);
  } else if (k == n + 1) {
    out.emplace(gen_mono(m, i, j), 1);
  } else if (i != k && j != k) {
    out.emplace(gen_mono(m, i < k ? i : i + 1, j < k ? j : j + 1), 1);
  } else if (j == k) {  // i < k: doubling the top index
    out.emplace(gen_mono(m, i, k), 1);
    out.emplace(gen_mono(m, i, k + 1), 1);
  } else {  // i == k < j: doubling the bottom index
    out.emplace(gen_mono(m, k, j + 1), 1);
    out.emplace(gen_mono(m, k + 1, j + 1), 1);
  }
  return out;
}

LieElement BraidContext::codegeneracy_sub(int n, int k, int gen_id) {
  if (k < 1 || k > n) throw std::out_of_range("codegeneracy index");
  auto [i, j] = perm_pair(n, gen_id);
  LieElement out;
  if (i == k || j == k) return out;  // forgotten point kills the class
  out.emplace(gen_mono(n - 1, i < k ? i : i - 1, j < k ? j : j - 1), 1);
  return out;
}

LieElement BraidContext::apply_sub(
    const Mono* m, const std::function<LieElement(int)>& sub) {
  if (m->is_leaf()) return sub(m->gen);
  return lie_.bracket(apply_sub(m->left, sub), apply_sub(m->right, sub));
}

IntMatrix BraidContext::coface_ambient_matrix(int n, int length, int k) {
  GenTable src{n}, tgt{n + 1};
  const auto src_basis = lie_.hall_words(src.count(), length);
  const auto tgt_basis = lie_.hall_words(tgt.count(), length);
  std::map<const Mono*, std::size_t, lie::MonoLess> tgt_index;
  for (std::size_t t = 0; t < tgt_basis.size(); ++t)
    tgt_index.emplace(tgt_basis[t], t);

  IntMatrix mat(tgt_basis.size(), src_basis.size());
  auto sub = [&](int g) { return coface_sub(n, k, g); };
  for (std::size_t c = 0; c < src_basis.size(); ++c) {
    LieElement img = apply_sub(src_basis[c], sub);
    for (const auto& [mono, coef] : img) mat.at(tgt_index.at(mono), c) = coef;
  }
  return mat;
}

IntMatrix BraidContext::codegeneracy_ambient_matrix(int n, int length, int k) {
  GenTable src{n}, tgt{n - 1};
  const auto src_basis = lie_.hall_words(src.count(), length);
  const auto tgt_basis = lie_.hall_words(tgt.count(), length);
  std::map<const Mono*, std::size_t, lie::MonoLess> tgt_index;
  for (std::size_t t = 0; t < tgt_basis.size(); ++t)
    tgt_index.emplace(tgt_basis[t], t);

  IntMatrix mat(tgt_basis.size(), src_basis.size());
  auto sub = [&](int g) { return codegeneracy_sub(n, k, g); };
  for (std::size_t c = 0; c < src_basis.size(); ++c) {
    LieElement img = apply_sub(src_basis[c], sub);
    for (const auto& [mono, coef] : img) mat.at(tgt_index.at(mono), c) = coef;
  }
  return mat;
}

std::vector<Int> BraidContext::reduce_in(const PiPresentation& p,
                                         const LieElement& e,
                                         bool verify_dropped) {
  GenTable gt{p.n};
  const std::uint32_t full = full_mask(p.n);

  std::vector<Int> amb(p.ambient.size());
  LieElement dropped;
  for (const auto& [m, c] : e) {
    if (support_mask(m, gt) != full) continue;  // non-covering part projects off
    auto it = p.ambient_index.find(m);
    if (it != p.ambient_index.end()) {
      amb[it->second] += c;
    } else {
      dropped.emplace(m, c);
    }
  }
  if (verify_dropped && !dropped.empty()) {
    const RowEchelonLattice& lat = ideal_component(p.n, p.length, full);
    const auto& idx = comp_index_.at(IdealKey{p.n, p.length, full});
    if (!lat.contains(element_to_row(dropped, idx)))
      throw std::logic_error(
          "dropped non-connected covering part is not in the relator lattice");
  }

  std::vector<Int> out(p.free_rank);
  for (std::size_t c = 0; c < p.ambient.size(); ++c)
    if (amb[c] != 0)
      for (std::size_t r = 0; r < p.free_rank; ++r)
        out[r] += p.basis_map.at(r, c) * amb[c];
  return out;
}

namespace {

InducedMap induced_from_sub(BraidContext& ctx, const PiPresentation& source,
                            const PiPresentation& target,
                            const std::function<LieElement(int)>& sub) {
  InducedMap im;
  im.source = &source;
  im.target = &target;
  im.matrix = IntMatrix(target.free_rank, source.free_rank);
  for (std::size_t c = 0; c < source.free_rank; ++c) {
    LieElement el;
    for (std::size_t r = 0; r < source.ambient.size(); ++r) {
      const Int& coef = source.lift.at(r, c);
      if (coef != 0)
        lie::element_add(el, ctx.apply_sub(source.ambient[r], sub), coef);
    }
    std::vector<Int> y = ctx.reduce_in(target, el);
    for (std::size_t r = 0; r < target.free_rank; ++r)
      im.matrix.at(r, c) = y[r];
  }
  return im;
}

}  // namespace

InducedMap BraidContext::coface_matrix(int k, const PiPresentation& source) {
  const PiPresentation& target = npi_free(source.n + 1, source.length);
  auto sub = [this, n = source.n, k](int g) { return coface_sub(n, k, g); };
  return induced_from_sub(*this, source, target, sub);
}

InducedMap BraidContext::codegeneracy_matrix(int k,
                                             const PiPresentation& source) {
  const PiPresentation& target = npi_free(source.n - 1, source.length);
  auto sub = [this, n = source.n, k](int g) {
    return codegeneracy_sub(n, k, g);
  };
  return induced_from_sub(*this, source, target, sub);
}

InducedMap BraidContext::alternating_coface_sum(int n, int length) {
  const PiPresentation& source = npi_free(n, length);
  const PiPresentation& target = npi_free(n + 1, length);
  InducedMap total;
  total.source = &source;
  total.target = &target;
  total.matrix = IntMatrix(target.free_rank, source.free_rank);
  for (int k = 0; k <= n + 1; ++k) {
    InducedMap part = coface_matrix(k, source);
    int sign = (k % 2 == 0) ? 1 : -1;
    for (std::size_t r = 0; r < target.free_rank; ++r)
      for (std::size_t c = 0; c < source.free_rank; ++c)
        total.matrix.at(r, c) += sign * part.matrix.at(r, c);
  }
  return total;
}

nlohmann::json PiPresentation::to_json() const {
  nlohmann::json amb = nlohmann::json::array();
  for (const Mono* m : ambient) amb.push_back(m->text());
  nlohmann::json tor = nlohmann::json::array();
  for (const Int& t : torsion) tor.push_back(t.get_str());
  return nlohmann::json{{"n", n},
                        {"length", length},
                        {"convention", lie::convention_name(convention)},
                        {"ambient", amb},
                        {"relators", relators.to_json()},
                        {"free_rank", free_rank},
                        {"torsion", tor},
                        {"basis_map", basis_map.to_json()},
                        {"lift", lift.to_json()}};
}

}  // namespace gw::braid
