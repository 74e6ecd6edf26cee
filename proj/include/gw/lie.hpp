#pragma once

#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "gw/int_matrix.hpp"

namespace gw::lie {

/// Sign convention for the free Lie ring.
///
/// Classical: [x,x] = 0, [x,y] = -[y,x]; basis indexed by Lyndon words.
/// GradedSymmetric: generators odd of degree one, [x,y] = -(-1)^{|x||y|}[y,x];
/// basis additionally contains squares [w,w] of odd-degree Lyndon monomials.
/// The graded convention is experimental and never acceptance-gated.
enum class Convention { Classical, GradedSymmetric };

const char* convention_name(Convention c);

/// Bracket monomial: binary tree with generator-id leaves, hash-consed in a
/// LieContext so pointer equality is structural equality.
struct Mono {
  int gen = -1;  // >= 0 for leaves
  const Mono* left = nullptr;
  const Mono* right = nullptr;
  int length = 0;
  std::vector<int> word;  // foliage (leaf ids, left to right)

  bool is_leaf() const { return gen >= 0; }
  bool is_square() const { return !is_leaf() && left == right; }
  /// Canonical text, e.g. "[[1,2],3]" (ids printed 1-based).
  std::string text() const;
};

/// Hall order: by length, then lexicographically on the word.
struct MonoLess {
  bool operator()(const Mono* a, const Mono* b) const {
    if (a == b) return false;
    if (a->length != b->length) return a->length < b->length;
    return a->word < b->word;
  }
};

/// Integer combination of basis monomials, deterministically ordered.
using LieElement = std::map<const Mono*, Int, MonoLess>;

void element_add(LieElement& acc, const LieElement& e, const Int& scale = 1);
bool element_equal(const LieElement& a, const LieElement& b);

/// Input trees for normalize(): plain brackets of generators.
struct BracketExpr {
  int gen = -1;
  std::unique_ptr<BracketExpr> left, right;

  static BracketExpr g(int id);
  static BracketExpr br(BracketExpr a, BracketExpr b);
  BracketExpr clone() const;
};

/// Owns interned monomials and the memoized rewriting tables. Not shared
/// across threads; everything it hands out is immutable.
class LieContext {
public:
  explicit LieContext(Convention conv = Convention::Classical);
  ~LieContext();
  LieContext(const LieContext&) = delete;
  LieContext& operator=(const LieContext&) = delete;

  Convention convention() const { return conv_; }

  const Mono* leaf(int gen);
  const Mono* node(const Mono* l, const Mono* r);

  /// Normalized bracket of two basis monomials (memoized rewriting).
  const LieElement& basis_bracket(const Mono* x, const Mono* y);
  /// Bilinear extension.
  LieElement bracket(const LieElement& a, const LieElement& b);

  /// Rewrite an arbitrary bracket tree into the Hall (Lyndon) basis.
  /// Throws std::out_of_range for a generator id outside [0, alphabet).
  LieElement normalize(const BracketExpr& e, int alphabet);

  /// All Lyndon words of exactly `length` over `alphabet` letters (cached).
  const std::vector<std::vector<int>>& lyndon_words(int alphabet, int length);

  /// Hall basis monomials of the given length: standard bracketings of
  /// Lyndon words (plus squares in the graded convention), Hall order.
  std::vector<const Mono*> hall_words(int alphabet, int length);

  /// Hall words whose leaf multiset matches `counts` (indexed by generator).
  std::vector<const Mono*> multidegree_basis(int alphabet,
                                             const std::vector<int>& counts);

  /// Number of Hall words using each of the k generators exactly once.
  std::size_t multilinear_rank(int k);

  const Mono* standard_bracketing(const std::vector<int>& lyndon_word);

  /// Rewriting-step budget; exceeded means a convention bug, not big input.
  void set_fuel(std::size_t ops) { fuel_limit_ = ops; }

private:
  struct Impl;
  bool is_odd(const Mono* m) const;
  int swap_sign(const Mono* x, const Mono* y) const;

  Convention conv_;
  std::size_t fuel_limit_ = 200'000'000;
  std::size_t fuel_used_ = 0;
  std::unique_ptr<Impl> impl_;
};

/// Is `w` a Lyndon word (strictly smaller than all proper rotations)?
bool is_lyndon(const std::vector<int>& w);

}  // namespace gw::lie
