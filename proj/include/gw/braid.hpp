#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gw/lie.hpp"
#include "gw/normal_forms.hpp"

namespace gw::braid {

/// Generator id <-> index pair (i, j), 1 <= i < j <= n, lexicographic.
struct GenTable {
  int n = 0;

  int count() const { return n * (n - 1) / 2; }
  int id_of(int i, int j) const;
  std::pair<int, int> pair_of(int id) const;
};

/// Bitmask of the point indices a monomial's generators touch (bit i-1).
std::uint32_t support_mask(const lie::Mono* m, const GenTable& gt);
/// True when every internal bracket node joins overlapping supports.
bool tree_connected(const lie::Mono* m, const GenTable& gt);

/// Presentation of the free part of a normalized homotopy group: ambient
/// lattice on connected covering Hall monomials modulo the infinitesimal
/// braid relator lattice, with maps in and out of the quotient.
struct PiPresentation {
  int n = 0;
  int length = 0;  // bracket length; homotopy degree is length + 1
  lie::Convention convention = lie::Convention::Classical;
  std::vector<const lie::Mono*> ambient;
  std::map<const lie::Mono*, std::size_t, lie::MonoLess> ambient_index;
  IntMatrix relators;        // ambient.size() x rank(relator lattice)
  std::size_t free_rank = 0;
  std::vector<Int> torsion;  // nonempty only if the presented group has torsion
  IntMatrix basis_map;       // free_rank x ambient: images in the quotient
  IntMatrix lift;            // ambient x free_rank: section of basis_map

  nlohmann::json to_json() const;
};

struct InducedMap {
  const PiPresentation* source = nullptr;
  const PiPresentation* target = nullptr;
  IntMatrix matrix;  // target.free_rank x source.free_rank
};

/// Owns the Lie context plus per-n relator-ideal lattices and cached
/// presentations. One instance per computation chain; not thread-shared.
class BraidContext {
public:
  explicit BraidContext(lie::Convention conv = lie::Convention::Classical);

  lie::LieContext& lie() { return lie_; }
  lie::Convention convention() const { return lie_.convention(); }

  /// Permute the total order of the b_ij generators (order-independence
  /// experiments). Must be called before anything is computed.
  void set_generator_order_seed(std::uint64_t seed);

  const lie::Mono* gen_mono(int n, int i, int j);

  /// Spanning elements of the (length, support) component of the two-sided
  /// ideal generated by the infinitesimal braid relators.
  std::vector<lie::LieElement> ib_relators(int n, int length,
                                           std::uint32_t support);

  /// Reduced lattice basis of an ideal component (built on demand).
  const RowEchelonLattice& ideal_component(int n, int length,
                                           std::uint32_t support);
  /// Monomials of the (length, support-exact) component, Hall order.
  const std::vector<const lie::Mono*>& component_monos(int n, int length,
                                                       std::uint32_t support);

  const PiPresentation& npi_free(int n, int length);
  /// Rank/torsion of the normalized quotient via the sparse path over all
  /// covering monomials, without basis maps. Cross-checks npi_free and
  /// carries the large-n cases.
  CokerPresentation npi_cokernel(int n, int length);

  // generator substitutions (source has n points)
  lie::LieElement coface_sub(int n, int k, int gen_id);        // k in 0..n+1
  lie::LieElement codegeneracy_sub(int n, int k, int gen_id);  // k in 1..n
  /// Apply a generator substitution bracket-by-bracket to a monomial.
  lie::LieElement apply_sub(
      const lie::Mono* m, const std::function<lie::LieElement(int)>& sub);

  /// Substitution matrices over full Hall bases (all supports); exact,
  /// quotient-free carriers for the cosimplicial identity checks.
  IntMatrix coface_ambient_matrix(int n, int length, int k);
  IntMatrix codegeneracy_ambient_matrix(int n, int length, int k);

  /// Quotient-level maps between normalized presentations.
  InducedMap coface_matrix(int k, const PiPresentation& source);
  InducedMap codegeneracy_matrix(int k, const PiPresentation& source);

  /// sum_k (-1)^k coface_matrix(k): the differential's building block.
  InducedMap alternating_coface_sum(int n, int length);

  /// Express a Lie element in quotient coordinates of a presentation.
  /// Non-covering terms project off; covering terms outside the ambient
  /// (disjoint-support bracket nodes) are dropped, and verified to lie in
  /// the relator lattice when `verify_dropped` is set.
  std::vector<Int> reduce_in(const PiPresentation& p, const lie::LieElement& e,
                             bool verify_dropped = false);

  struct Stats {
    std::size_t npi_built = 0;
    std::size_t ideal_levels_built = 0;
  };
  const Stats& stats() const { return stats_; }

private:
  struct IdealKey {
    int n, length;
    std::uint32_t support;
    bool operator<(const IdealKey& o) const {
      return std::tie(n, length, support) <
             std::tie(o.n, o.length, o.support);
    }
  };

  void ensure_ideal(int n, int max_length,
                    std::optional<std::uint32_t> final_mask = {});
  void build_ideal_level(int n, int length,
                         std::optional<std::uint32_t> only_mask);
  SparseRow element_to_row(
      const lie::LieElement& e,
      const std::map<const lie::Mono*, std::size_t, lie::MonoLess>& index)
      const;
  const RowEchelonLattice* find_component(int n, int length,
                                          std::uint32_t support) const;

  int perm_id(int n, int lex_id);
  std::pair<int, int> perm_pair(int n, int id);

  lie::LieContext lie_;
  std::optional<std::uint64_t> order_seed_;
  std::map<int, std::vector<int>> id_perm_, id_perm_inv_;
  std::map<int, int> ideal_built_upto_;  // n -> max length built in full
  std::set<std::tuple<int, int, std::uint32_t>> restricted_built_;
  std::map<IdealKey, RowEchelonLattice> ideal_;
  std::map<IdealKey, std::vector<const lie::Mono*>> comp_monos_;
  std::map<IdealKey, std::map<const lie::Mono*, std::size_t, lie::MonoLess>>
      comp_index_;
  std::map<std::pair<int, int>, PiPresentation> npi_cache_;
  Stats stats_;
};

}  // namespace gw::braid
