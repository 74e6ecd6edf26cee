#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "gw/braid.hpp"
#include "gw/cache.hpp"
#include "gw/chords.hpp"

namespace gw::tower {

/// One E^1 entry in total degree 0 or 1. The free summand is a b_ij lattice;
/// two-torsion is carried as a formal rank. Column 2, degree 1 is special:
/// its group is the infinite cyclic one generated by the Hopf class.
struct E1Column {
  int m = 0;
  int total_degree = 0;
  const braid::PiPresentation* free_lattice = nullptr;
  std::size_t torsion_rank = 0;
  bool eta_special = false;

  std::size_t free_rank() const {
    return eta_special ? 1 : free_lattice->free_rank;
  }
};

struct E2Group {
  int m = 0;
  CokerPresentation presentation;
};

struct D1Summary {
  std::size_t rows = 0, cols = 0, rank = 0;
};

/// Per-column verification report (JSON-facing, cached).
struct ColumnReport {
  int m = 0;
  std::string convention;
  std::size_t e1_deg0_free = 0;
  std::size_t e1_deg1_free = 0;
  std::size_t e1_deg1_torsion2 = 0;
  bool eta_special = false;
  D1Summary d1;
  CokerPresentation e2;
  CokerPresentation chord_side;
  bool match = false;           // free ranks and torsion lists agree
  bool rational_match = false;  // free ranks agree

  nlohmann::json to_json() const;
};

/// Drives the spectral-sequence assembly for one convention, with optional
/// on-disk caching of presentations and reports.
class TowerSession {
public:
  explicit TowerSession(lie::Convention conv = lie::Convention::Classical,
                        Cache* cache = nullptr);

  braid::BraidContext& braid() { return braid_; }
  Cache* cache() { return cache_; }

  E1Column e1(int m, int total_degree);

  /// Matrix of d^1 : E^1_{m-1, deg 1} -> E^1_{m, deg 0} on free parts
  /// (columns also cover the Hopf class at m = 3).
  IntMatrix d1_into_zero_line(int m);

  E2Group e2_zero_line(int m);

  ColumnReport verify_e2comp(int m);

  /// The Hopf-correction image in npi(3,2) coordinates (exposed for tests).
  std::vector<Int> eta_d1_column();

private:
  std::string npi_key(int n, int length) const;
  std::string report_key(int m) const;

  braid::BraidContext braid_;
  Cache* cache_ = nullptr;
};

nlohmann::json coker_to_json(const CokerPresentation& p);

}  // namespace gw::tower
