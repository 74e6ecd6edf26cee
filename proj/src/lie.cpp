#include "gw/lie.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace gw::lie {

const char* convention_name(Convention c) {
  return c == Convention::Classical ? "classical" : "graded-symmetric";
}

std::string Mono::text() const {
  if (is_leaf()) return std::to_string(gen + 1);
  return "[" + left->text() + "," + right->text() + "]";
}

void element_add(LieElement& acc, const LieElement& e, const Int& scale) {
  if (scale == 0) return;
  for (const auto& [m, c] : e) {
    auto it = acc.find(m);
    if (it == acc.end()) {
      acc.emplace(m, c * scale);
    } else {
      it->second += c * scale;
      if (it->second == 0) acc.erase(it);
    }
  }
}

bool element_equal(const LieElement& a, const LieElement& b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(),
                    [](const auto& x, const auto& y) {
                      return x.first == y.first && x.second == y.second;
                    });
}

BracketExpr BracketExpr::g(int id) {
  BracketExpr e;
  e.gen = id;
  return e;
}

BracketExpr BracketExpr::br(BracketExpr a, BracketExpr b) {
  BracketExpr e;
  e.left = std::make_unique<BracketExpr>(std::move(a));
  e.right = std::make_unique<BracketExpr>(std::move(b));
  return e;
}

BracketExpr BracketExpr::clone() const {
  BracketExpr e;
  e.gen = gen;
  if (left) e.left = std::make_unique<BracketExpr>(left->clone());
  if (right) e.right = std::make_unique<BracketExpr>(right->clone());
  return e;
}

bool is_lyndon(const std::vector<int>& w) {
  if (w.empty()) return false;
  for (std::size_t i = 1; i < w.size(); ++i) {
    // w < rotation starting at i  <=>  w < suffix-then-prefix; strict
    std::vector<int> rot(w.begin() + i, w.end());
    rot.insert(rot.end(), w.begin(), w.begin() + i);
    if (!(w < rot)) return false;
  }
  return true;
}

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<const Mono*, const Mono*>& p) const {
    auto a = reinterpret_cast<std::uintptr_t>(p.first);
    auto b = reinterpret_cast<std::uintptr_t>(p.second);
    return std::hash<std::uintptr_t>()(a * 0x9e3779b97f4a7c15ull ^ b);
  }
};

}  // namespace

struct LieContext::Impl {
  std::vector<std::unique_ptr<Mono>> pool;
  std::unordered_map<int, const Mono*> leaves;
  std::unordered_map<std::pair<const Mono*, const Mono*>, const Mono*, PairHash>
      nodes;
  std::unordered_map<std::pair<const Mono*, const Mono*>, LieElement, PairHash>
      bracket_memo;
  // (alphabet, length) -> Lyndon words in lex order
  std::map<std::pair<int, int>, std::vector<std::vector<int>>> lyndon_cache;
};

LieContext::LieContext(Convention conv)
    : conv_(conv), impl_(std::make_unique<Impl>()) {}
LieContext::~LieContext() = default;

const Mono* LieContext::leaf(int gen) {
  if (gen < 0) throw std::out_of_range("generator id must be >= 0");
  auto it = impl_->leaves.find(gen);
  if (it != impl_->leaves.end()) return it->second;
  auto m = std::make_unique<Mono>();
  m->gen = gen;
  m->length = 1;
  m->word = {gen};
  const Mono* p = m.get();
  impl_->pool.push_back(std::move(m));
  impl_->leaves.emplace(gen, p);
  return p;
}

const Mono* LieContext::node(const Mono* l, const Mono* r) {
  auto key = std::make_pair(l, r);
  auto it = impl_->nodes.find(key);
  if (it != impl_->nodes.end()) return it->second;
  auto m = std::make_unique<Mono>();
  m->left = l;
  m->right = r;
  m->length = l->length + r->length;
  m->word = l->word;
  m->word.insert(m->word.end(), r->word.begin(), r->word.end());
  const Mono* p = m.get();
  impl_->pool.push_back(std::move(m));
  impl_->nodes.emplace(key, p);
  return p;
}

bool LieContext::is_odd(const Mono* m) const {
  return conv_ == Convention::GradedSymmetric && (m->length % 2 == 1);
}

// sign s with [x,y] = s [y,x]
int LieContext::swap_sign(const Mono* x, const Mono* y) const {
  return (is_odd(x) && is_odd(y)) ? 1 : -1;
}

const LieElement& LieContext::basis_bracket(const Mono* x, const Mono* y) {
  auto key = std::make_pair(x, y);
  auto hit = impl_->bracket_memo.find(key);
  if (hit != impl_->bracket_memo.end()) return hit->second;

  if (++fuel_used_ > fuel_limit_)
    throw std::runtime_error(
        "lie rewriting exceeded fuel budget; convention bug suspected near " +
        x->text() + ", " + y->text());

  LieElement out;
  if (x == y) {
    if (is_odd(x)) out.emplace(node(x, x), 1);  // odd square is a basis element
  } else if (x->word > y->word) {
    LieElement sub = basis_bracket(y, x);  // copy: recursion may rehash memo
    element_add(out, sub, swap_sign(x, y));
  } else if (x->is_square()) {
    // [[w,w],y] = 2 [w,[w,y]] for odd w
    const Mono* w = x->left;
    LieElement inner = basis_bracket(w, y);
    for (const auto& [m, c] : inner)
      element_add(out, basis_bracket(w, m), 2 * c);
  } else if (y->is_square()) {
    // |square| even, so [x,[w,w]] = -[[w,w],x]
    LieElement sub = basis_bracket(y, x);
    element_add(out, sub, -1);
  } else if (x->is_leaf() || x->right->word >= y->word) {
    out.emplace(node(x, y), 1);  // standard bracketing of the Lyndon word xy
  } else {
    // x = [a,b] with b < y: [[a,b],y] = [a,[b,y]] - (-1)^{|a||b|} [b,[a,y]]
    const Mono* a = x->left;
    const Mono* b = x->right;
    {
      LieElement by = basis_bracket(b, y);
      for (const auto& [m, c] : by) element_add(out, basis_bracket(a, m), c);
    }
    int s = (is_odd(a) && is_odd(b)) ? 1 : -1;
    {
      LieElement ay = basis_bracket(a, y);
      for (const auto& [m, c] : ay)
        element_add(out, basis_bracket(b, m), s * c);
    }
  }
  return impl_->bracket_memo.emplace(std::move(key), std::move(out))
      .first->second;
}

LieElement LieContext::bracket(const LieElement& a, const LieElement& b) {
  LieElement out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b)
      element_add(out, basis_bracket(ma, mb), ca * cb);
  return out;
}

LieElement LieContext::normalize(const BracketExpr& e, int alphabet) {
  if (!e.left) {
    if (e.gen < 0 || e.gen >= alphabet)
      throw std::out_of_range("normalize: unknown generator id " +
                              std::to_string(e.gen));
    LieElement out;
    out.emplace(leaf(e.gen), 1);
    return out;
  }
  return bracket(normalize(*e.left, alphabet), normalize(*e.right, alphabet));
}

const std::vector<std::vector<int>>& LieContext::lyndon_words(int alphabet,
                                                              int length) {
  auto key = std::make_pair(alphabet, length);
  auto it = impl_->lyndon_cache.find(key);
  if (it != impl_->lyndon_cache.end()) return it->second;

  // Duval's algorithm, words of length exactly `length` in lex order
  std::vector<std::vector<int>> words;
  if (alphabet > 0 && length > 0) {
    std::vector<int> w{0};
    while (!w.empty()) {
      if (static_cast<int>(w.size()) == length)
        words.push_back(w);
      int k = static_cast<int>(w.size());
      while (static_cast<int>(w.size()) < length)
        w.push_back(w[w.size() - k]);
      while (!w.empty() && w.back() == alphabet - 1) w.pop_back();
      if (!w.empty()) ++w.back();
    }
  }
  return impl_->lyndon_cache.emplace(key, std::move(words)).first->second;
}

const Mono* LieContext::standard_bracketing(const std::vector<int>& w) {
  if (w.empty()) throw std::invalid_argument("empty word");
  if (w.size() == 1) return leaf(w[0]);
  // standard factorization w = uv, v the lexicographically least proper suffix
  std::size_t best = 1;
  for (std::size_t i = 2; i < w.size(); ++i) {
    if (std::lexicographical_compare(w.begin() + i, w.end(),
                                     w.begin() + best, w.end()))
      best = i;
  }
  std::vector<int> u(w.begin(), w.begin() + best);
  std::vector<int> v(w.begin() + best, w.end());
  return node(standard_bracketing(u), standard_bracketing(v));
}

std::vector<const Mono*> LieContext::hall_words(int alphabet, int length) {
  std::vector<const Mono*> out;
  for (const auto& w : lyndon_words(alphabet, length))
    out.push_back(standard_bracketing(w));
  if (conv_ == Convention::GradedSymmetric && length % 2 == 0 &&
      (length / 2) % 2 == 1) {
    for (const auto& w : lyndon_words(alphabet, length / 2)) {
      const Mono* b = standard_bracketing(w);
      out.push_back(node(b, b));
    }
  }
  std::sort(out.begin(), out.end(), MonoLess());
  return out;
}

std::vector<const Mono*> LieContext::multidegree_basis(
    int alphabet, const std::vector<int>& counts) {
  if (static_cast<int>(counts.size()) > alphabet)
    throw std::invalid_argument("multidegree over too many generators");
  int length = 0;
  for (int c : counts) length += c;
  std::vector<int> want(alphabet, 0);
  std::copy(counts.begin(), counts.end(), want.begin());

  std::vector<const Mono*> out;
  for (const Mono* m : hall_words(alphabet, length)) {
    std::vector<int> have(alphabet, 0);
    for (int g : m->word) ++have[g];
    if (have == want) out.push_back(m);
  }
  return out;
}

std::size_t LieContext::multilinear_rank(int k) {
  if (k < 1) throw std::invalid_argument("multilinear_rank: k >= 1 required");
  return multidegree_basis(k, std::vector<int>(k, 1)).size();
}

}  // namespace gw::lie
