#include "gw/normal_forms.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace gw {

namespace {

Int abs_val(const Int& v) { return v < 0 ? Int(-v) : v; }

// floor division quotient, so remainders land in [0, |b|)
Int fdiv_q(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

struct Pivot {
  std::size_t r, c;
  bool found = false;
};

// smallest nonzero |entry| in the trailing submatrix, ties by (row, col)
Pivot find_pivot(const IntMatrix& d, std::size_t t) {
  Pivot best;
  Int best_abs;
  for (std::size_t r = t; r < d.rows(); ++r)
    for (std::size_t c = t; c < d.cols(); ++c) {
      const Int& v = d.at(r, c);
      if (v == 0) continue;
      Int a = abs_val(v);
      if (!best.found || a < best_abs) {
        best = {r, c, true};
        best_abs = a;
        if (best_abs == 1) return best;
      }
    }
  return best;
}

void check_bits(const IntMatrix& d, const SnfOptions& opt) {
  if (d.max_bits() > opt.max_entry_bits)
    throw ResourceLimitError("smith_normal_form: entry bit size exceeded cap");
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& A, const SnfOptions& opt) {
  const std::size_t m = A.rows(), n = A.cols();
  SmithForm f;
  f.D = A;
  f.U = IntMatrix::identity(m);
  f.V = IntMatrix::identity(n);
  if (opt.track_inverses) {
    f.U_inv = IntMatrix::identity(m);
    f.V_inv = IntMatrix::identity(n);
  }
  IntMatrix& D = f.D;

  // Row op on D/U corresponds to the inverse column op on U^{-1}; same for V.
  auto row_add = [&](std::size_t i, std::size_t j, const Int& q) {
    D.add_row_multiple(i, j, q);
    f.U.add_row_multiple(i, j, q);
    if (f.U_inv) f.U_inv->add_col_multiple(j, i, -q);
  };
  auto col_add = [&](std::size_t i, std::size_t j, const Int& q) {
    D.add_col_multiple(i, j, q);
    f.V.add_col_multiple(i, j, q);
    if (f.V_inv) f.V_inv->add_row_multiple(j, i, -q);
  };
  auto row_swap = [&](std::size_t i, std::size_t j) {
    D.swap_rows(i, j);
    f.U.swap_rows(i, j);
    if (f.U_inv) f.U_inv->swap_cols(i, j);
  };
  auto col_swap = [&](std::size_t i, std::size_t j) {
    D.swap_cols(i, j);
    f.V.swap_cols(i, j);
    if (f.V_inv) f.V_inv->swap_rows(i, j);
  };
  auto row_negate = [&](std::size_t i) {
    D.negate_row(i);
    f.U.negate_row(i);
    if (f.U_inv) f.U_inv->negate_col(i);
  };

  const std::size_t steps = std::min(m, n);
  std::size_t t = 0;
  for (; t < steps; ++t) {
    Pivot p = find_pivot(D, t);
    if (!p.found) break;
    row_swap(t, p.r);
    col_swap(t, p.c);

    // clear row t and column t; re-pivot whenever a division leaves a
    // smaller remainder somewhere
    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D.at(i, t) == 0) continue;
        Int q = fdiv_q(D.at(i, t), D.at(t, t));
        row_add(i, t, -q);
        if (D.at(i, t) != 0) dirty = true;  // remainder became new candidate
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D.at(t, j) == 0) continue;
        Int q = fdiv_q(D.at(t, j), D.at(t, t));
        col_add(j, t, -q);
        if (D.at(t, j) != 0) dirty = true;
      }
      check_bits(D, opt);
      if (!dirty) break;
      Pivot p2 = find_pivot(D, t);
      row_swap(t, p2.r);
      col_swap(t, p2.c);
    }

    // enforce divisibility: pivot must divide the whole trailing block
    for (;;) {
      bool fixed = true;
      for (std::size_t i = t + 1; i < m && fixed; ++i)
        for (std::size_t j = t + 1; j < n && fixed; ++j) {
          if (D.at(i, j) % D.at(t, t) != 0) {
            row_add(t, i, 1);  // pull the offending row up, re-eliminate
            fixed = false;
          }
        }
      if (fixed) break;
      for (;;) {
        bool dirty = false;
        for (std::size_t j = t + 1; j < n; ++j) {
          if (D.at(t, j) == 0) continue;
          Int q = fdiv_q(D.at(t, j), D.at(t, t));
          col_add(j, t, -q);
          if (D.at(t, j) != 0) dirty = true;
        }
        for (std::size_t i = t + 1; i < m; ++i) {
          if (D.at(i, t) == 0) continue;
          Int q = fdiv_q(D.at(i, t), D.at(t, t));
          row_add(i, t, -q);
          if (D.at(i, t) != 0) dirty = true;
        }
        check_bits(D, opt);
        if (!dirty) break;
        Pivot p2 = find_pivot(D, t);
        row_swap(t, p2.r);
        col_swap(t, p2.c);
      }
    }

    if (D.at(t, t) < 0) row_negate(t);
    f.divisors.push_back(D.at(t, t));
  }
  return f;
}

CokerPresentation cokernel(const IntMatrix& relators, const SnfOptions& opt) {
  SmithForm f = smith_normal_form(relators, opt);
  CokerPresentation p;
  p.ambient_rank = relators.rows();
  p.free_rank = relators.rows() - f.divisors.size();
  for (const Int& d : f.divisors)
    if (d > 1) p.torsion.push_back(d);
  return p;
}

std::vector<std::vector<Int>> kernel_basis(const IntMatrix& A,
                                           const SnfOptions& opt) {
  SmithForm f = smith_normal_form(A, opt);
  // columns of V beyond the rank map to zero columns of D = U A V,
  // and V unimodular makes them a saturated basis of ker A
  std::vector<std::vector<Int>> basis;
  for (std::size_t j = f.divisors.size(); j < A.cols(); ++j) {
    std::vector<Int> v(A.cols());
    for (std::size_t i = 0; i < A.cols(); ++i) v[i] = f.V.at(i, j);
    basis.push_back(std::move(v));
  }
  return basis;
}

namespace {

Int floor_q(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

void RowEchelonLattice::reduce_tail(std::size_t idx) {
  // single left-to-right pass against later pivots; they are final, so the
  // result is fully reduced
  for (std::size_t j = idx + 1; j < pivots_.size(); ++j) {
    std::size_t pc = pivots_[j].front().first;
    const Int& pv = pivots_[j].front().second;
    const SparseRow& row = pivots_[idx];
    auto it = std::lower_bound(
        row.begin(), row.end(), pc,
        [](const std::pair<std::size_t, Int>& e, std::size_t c) {
          return e.first < c;
        });
    if (it == row.end() || it->first != pc) continue;
    Int q = floor_q(it->second, pv);
    if (q != 0) pivots_[idx] = sparse_axpy(pivots_[idx], Int(-q), pivots_[j]);
  }
}

void RowEchelonLattice::repair_column(std::size_t idx) {
  // the pivot value at this column changed; earlier rows may now carry
  // out-of-range entries there (only rows with smaller leads can touch it)
  std::size_t pc = pivots_[idx].front().first;
  const Int& pv = pivots_[idx].front().second;
  for (std::size_t i = 0; i < idx; ++i) {
    const SparseRow& row = pivots_[i];
    auto it = std::lower_bound(
        row.begin(), row.end(), pc,
        [](const std::pair<std::size_t, Int>& e, std::size_t c) {
          return e.first < c;
        });
    if (it == row.end() || it->first != pc) continue;
    if (it->second >= 0 && it->second < pv) continue;
    Int q = floor_q(it->second, pv);
    pivots_[i] = sparse_axpy(pivots_[i], Int(-q), pivots_[idx]);
  }
}

void RowEchelonLattice::add(SparseRow row) {
  std::vector<std::size_t> dirty_cols;
  while (!row.empty()) {
    std::size_t lead = row.front().first;
    auto it = std::lower_bound(
        pivots_.begin(), pivots_.end(), lead,
        [](const SparseRow& r, std::size_t c) { return r.front().first < c; });
    if (it == pivots_.end() || it->front().first != lead) {
      if (row.front().second < 0)
        for (auto& [c, v] : row) v = -v;
      pivots_.insert(it, std::move(row));
      dirty_cols.push_back(lead);
      break;
    }
    const Int p = it->front().second;  // p > 0
    const Int x = row.front().second;
    if (x % p == 0) {
      row = sparse_axpy(row, Int(-x / p), *it);
    } else {
      // gcd combine: pivot' = s*pivot + t*row has lead g = gcd(p, x),
      // row' = (p/g)*row - (x/g)*pivot has lead 0
      Int g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t(),
                 x.get_mpz_t());
      SparseRow scaled_pivot = *it;
      for (auto& [c, v] : scaled_pivot) v *= s;
      SparseRow gcd_row = sparse_axpy(scaled_pivot, t, row);
      SparseRow scaled_row = row;
      for (auto& [c, v] : scaled_row) v *= Int(p / g);
      row = sparse_axpy(scaled_row, Int(-x / g), *it);
      *it = std::move(gcd_row);
      dirty_cols.push_back(lead);
    }
  }
  // restore full reduction, rightmost changed pivot first
  std::sort(dirty_cols.rbegin(), dirty_cols.rend());
  for (std::size_t col : dirty_cols) {
    auto it = std::lower_bound(
        pivots_.begin(), pivots_.end(), col,
        [](const SparseRow& r, std::size_t c) { return r.front().first < c; });
    std::size_t idx = static_cast<std::size_t>(it - pivots_.begin());
    reduce_tail(idx);
    repair_column(idx);
  }
}

bool RowEchelonLattice::contains(SparseRow row) const {
  while (!row.empty()) {
    std::size_t lead = row.front().first;
    auto it = std::lower_bound(
        pivots_.begin(), pivots_.end(), lead,
        [](const SparseRow& r, std::size_t c) { return r.front().first < c; });
    if (it == pivots_.end() || it->front().first != lead) return false;
    const Int& p = it->front().second;
    const Int& x = row.front().second;
    if (x % p != 0) return false;
    row = sparse_axpy(row, Int(-x / p), *it);
  }
  return true;
}

IntMatrix RowEchelonLattice::to_matrix() const {
  IntMatrix m(pivots_.size(), cols_);
  for (std::size_t i = 0; i < pivots_.size(); ++i)
    for (const auto& [c, v] : pivots_[i]) m.at(i, c) = v;
  return m;
}

CokerPresentation cokernel_of_rows(std::size_t cols,
                                   std::vector<SparseRow> rows,
                                   const SnfOptions& opt) {
  // Active-row storage with a per-column index; eliminate +-1 pivots with
  // row operations only (clearing a pivot column lets us drop row and
  // column: the pivot row's tail is removed by column operations that touch
  // nothing else). Remaining core goes to the dense SNF.
  std::vector<SparseRow> act;
  act.reserve(rows.size());
  for (auto& r : rows)
    if (!r.empty()) act.push_back(std::move(r));

  std::vector<bool> row_dead(act.size(), false);
  std::vector<bool> col_dead(cols, false);
  std::map<std::size_t, std::set<std::size_t>> col_index;
  for (std::size_t i = 0; i < act.size(); ++i)
    for (const auto& [c, v] : act[i]) col_index[c].insert(i);

  std::size_t unit_pivots = 0;
  for (;;) {
    // pick a +-1 entry minimizing fill estimate, ties by (row, col)
    std::size_t best_r = 0, best_c = 0;
    std::size_t best_cost = SIZE_MAX;
    bool found = false;
    for (std::size_t i = 0; i < act.size(); ++i) {
      if (row_dead[i]) continue;
      for (const auto& [c, v] : act[i]) {
        if (col_dead[c]) continue;
        if (v == 1 || v == -1) {
          std::size_t cost =
              (act[i].size() - 1) * (col_index[c].size() - 1);
          if (cost < best_cost) {
            best_cost = cost;
            best_r = i;
            best_c = c;
            found = true;
          }
        }
      }
      if (found && best_cost == 0) break;
    }
    if (!found) break;

    const SparseRow pivot_row = act[best_r];
    Int pv;
    for (const auto& [c, v] : pivot_row)
      if (c == best_c) pv = v;
    auto users = col_index[best_c];
    for (std::size_t i : users) {
      if (i == best_r || row_dead[i]) continue;
      Int coeff;
      for (const auto& [c, v] : act[i])
        if (c == best_c) coeff = v;
      if (coeff == 0) continue;
      // row_i -= (coeff/pv) * pivot_row ; pv is +-1 so this clears the entry
      SparseRow updated = sparse_axpy(act[i], Int(-coeff * pv), pivot_row);
      for (const auto& [c, v] : act[i]) col_index[c].erase(i);
      act[i] = std::move(updated);
      for (const auto& [c, v] : act[i]) col_index[c].insert(i);
      if (act[i].empty()) row_dead[i] = true;
    }
    for (const auto& [c, v] : pivot_row) col_index[c].erase(best_r);
    row_dead[best_r] = true;
    col_dead[best_c] = true;
    ++unit_pivots;
    if (act[best_r].capacity()) act[best_r] = SparseRow();
  }

  // densify the remaining core
  std::vector<std::size_t> live_cols;
  std::vector<std::size_t> col_pos(cols, SIZE_MAX);
  for (std::size_t c = 0; c < cols; ++c)
    if (!col_dead[c]) {
      col_pos[c] = live_cols.size();
      live_cols.push_back(c);
    }
  std::vector<std::size_t> live_rows;
  for (std::size_t i = 0; i < act.size(); ++i)
    if (!row_dead[i]) live_rows.push_back(i);

  IntMatrix core(live_cols.size(), live_rows.size());
  for (std::size_t k = 0; k < live_rows.size(); ++k)
    for (const auto& [c, v] : act[live_rows[k]])
      if (!col_dead[c]) core.at(col_pos[c], k) = v;

  CokerPresentation inner = cokernel(core, opt);
  CokerPresentation out;
  out.ambient_rank = cols;
  out.free_rank = inner.free_rank;
  out.torsion = inner.torsion;
  (void)unit_pivots;
  return out;
}

}  // namespace gw
