#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "gw/int_matrix.hpp"

namespace gw {

/// Thrown when elimination exceeds the configured entry bit-size cap.
/// Callers are expected to retry with a different pivot strategy or give up;
/// nothing in this library switches strategies automatically.
class ResourceLimitError : public std::runtime_error {
public:
  explicit ResourceLimitError(const std::string& what)
      : std::runtime_error(what) {}
};

struct SnfOptions {
  /// Abort when any working entry exceeds this many bits.
  std::size_t max_entry_bits = 1u << 20;
  /// Also track U^{-1} and V^{-1} (needed for quotient-lattice lifts).
  bool track_inverses = false;
};

/// U*A*V = D with U, V unimodular, D diagonal, divisors d1 | d2 | ..., di > 0.
struct SmithForm {
  IntMatrix U, D, V;
  std::vector<Int> divisors;
  std::optional<IntMatrix> U_inv, V_inv;
};

SmithForm smith_normal_form(const IntMatrix& A, const SnfOptions& opt = {});

/// Presentation of Z^ambient_rank / (column span of a relator matrix).
struct CokerPresentation {
  std::size_t ambient_rank = 0;
  std::size_t free_rank = 0;
  std::vector<Int> torsion;  // entries > 1, each dividing the next

  bool operator==(const CokerPresentation&) const = default;
};

/// Columns of `relators` are relator vectors in Z^rows.
CokerPresentation cokernel(const IntMatrix& relators, const SnfOptions& opt = {});

/// Saturated basis of { v : A v = 0 } as an integer lattice.
std::vector<std::vector<Int>> kernel_basis(const IntMatrix& A,
                                           const SnfOptions& opt = {});

/// Incremental integer row-echelon accumulator: maintains a basis (as rows in
/// Hermite-reduced echelon form) of the lattice spanned by all rows fed to
/// add(). Full reduction is maintained after every insertion; without it,
/// entries blow up exponentially on relator systems of a few hundred columns.
class RowEchelonLattice {
public:
  explicit RowEchelonLattice(std::size_t cols) : cols_(cols) {}

  void add(SparseRow row);
  /// True iff `row` lies in the current row span.
  bool contains(SparseRow row) const;

  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return pivots_.size(); }
  const std::vector<SparseRow>& rows() const { return pivots_; }
  IntMatrix to_matrix() const;

private:
  /// Floor-reduce the tail of pivot row `idx` against the later pivots.
  void reduce_tail(std::size_t idx);
  /// Re-reduce every earlier row at the (changed) pivot column of row `idx`.
  void repair_column(std::size_t idx);

  std::size_t cols_;
  // pivot rows sorted by leading column, leading coefficients positive
  std::vector<SparseRow> pivots_;
};

/// Cokernel of the lattice spanned by sparse relator rows inside Z^cols.
/// Eliminates +-1 pivots sparsely and hands the small remaining core to the
/// dense Smith routine. Equal to cokernel() on the transposed dense matrix.
CokerPresentation cokernel_of_rows(std::size_t cols,
                                   std::vector<SparseRow> rows,
                                   const SnfOptions& opt = {});

}  // namespace gw
