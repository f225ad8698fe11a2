#include "stabfin/groups.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "stabfin/error.hpp"
#include "stabfin/text.hpp"

namespace stabfin {

std::size_t GroupElementHash::operator()(const GroupElement& e) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (std::int64_t v : e.payload()) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) fail(ErrorCode::Overflow, "free abelian coordinate overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) fail(ErrorCode::Overflow, "free abelian coordinate overflow");
  return r;
}

std::int64_t parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) fail(ErrorCode::ParseError, "expected an integer");
  std::size_t pos = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    pos = 1;
  }
  if (pos == s.size()) fail(ErrorCode::ParseError, "expected an integer in '" + std::string(s) + "'");
  std::int64_t v = 0;
  for (; pos < s.size(); ++pos) {
    if (!std::isdigit(static_cast<unsigned char>(s[pos]))) {
      fail(ErrorCode::ParseError, "expected an integer in '" + std::string(s) + "'");
    }
    v = checked_add(checked_mul(v, 10), s[pos] - '0');
  }
  return neg ? -v : v;
}

}  // namespace

namespace detail {

class GroupImpl {
 public:
  virtual ~GroupImpl() = default;
  virtual std::size_t width() const = 0;
  virtual GroupElement identity() const = 0;
  virtual GroupElement mul(const GroupElement& a, const GroupElement& b) const = 0;
  virtual GroupElement inv(const GroupElement& a) const = 0;
  virtual bool finite() const = 0;
  // Every element exactly once, any order. Only called for finite groups.
  virtual std::vector<GroupElement> generate(std::size_t cap) const = 0;
  virtual std::string format(const GroupElement& e) const = 0;
  virtual GroupElement parse(std::string_view text) const = 0;
  virtual bool abelian(const std::vector<GroupElement>* elements) const = 0;
  virtual std::size_t free_rank() const { return 0; }
  virtual GroupElement random(Xorshift64Star& rng, std::int64_t window,
                              const std::vector<GroupElement>* elements) const {
    (void)window;
    return (*elements)[rng.below(elements->size())];
  }
};

struct GroupData {
  GroupSpec spec;
  std::unique_ptr<GroupImpl> impl;
  std::string name;
  bool finite = false;
  GroupElement identity;
  std::vector<GroupElement> elements;
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> index;
  std::vector<Group> factors;
};

}  // namespace detail

namespace {

using detail::GroupImpl;

bool exhaustive_abelian(const GroupImpl& g, const std::vector<GroupElement>& elements) {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = i + 1; j < elements.size(); ++j) {
      if (!(g.mul(elements[i], elements[j]) == g.mul(elements[j], elements[i]))) return false;
    }
  }
  return true;
}

class CyclicImpl final : public GroupImpl {
 public:
  explicit CyclicImpl(std::int64_t n) : n_(n) {}
  std::size_t width() const override { return 1; }
  GroupElement identity() const override { return GroupElement{0}; }
  GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
    if (n_ == 0) return GroupElement{checked_add(a[0], b[0])};
    return GroupElement{(a[0] + b[0]) % n_};
  }
  GroupElement inv(const GroupElement& a) const override {
    if (n_ == 0) return GroupElement{-a[0]};
    return GroupElement{(n_ - a[0]) % n_};
  }
  bool finite() const override { return n_ > 0; }
  std::vector<GroupElement> generate(std::size_t) const override {
    std::vector<GroupElement> out;
    for (std::int64_t k = 0; k < n_; ++k) out.push_back(GroupElement{k});
    return out;
  }
  std::string format(const GroupElement& e) const override { return std::to_string(e[0]); }
  GroupElement parse(std::string_view text) const override {
    std::int64_t v = parse_int(text);
    if (n_ > 0) v = ((v % n_) + n_) % n_;
    return GroupElement{v};
  }
  bool abelian(const std::vector<GroupElement>*) const override { return true; }
  std::size_t free_rank() const override { return n_ == 0 ? 1 : 0; }
  GroupElement random(Xorshift64Star& rng, std::int64_t window,
                      const std::vector<GroupElement>* elements) const override {
    if (n_ > 0) return GroupImpl::random(rng, window, elements);
    return GroupElement{rng.between(-window, window)};
  }

 private:
  std::int64_t n_;
};

class FreeAbelianImpl final : public GroupImpl {
 public:
  explicit FreeAbelianImpl(std::int64_t rank) : r_(static_cast<std::size_t>(rank)) {}
  std::size_t width() const override { return r_; }
  GroupElement identity() const override { return GroupElement(Payload(r_, 0)); }
  GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
    Payload p(r_);
    for (std::size_t i = 0; i < r_; ++i) p[i] = checked_add(a[i], b[i]);
    return GroupElement(std::move(p));
  }
  GroupElement inv(const GroupElement& a) const override {
    Payload p(r_);
    for (std::size_t i = 0; i < r_; ++i) p[i] = -a[i];
    return GroupElement(std::move(p));
  }
  bool finite() const override { return r_ == 0; }
  std::vector<GroupElement> generate(std::size_t) const override { return {identity()}; }
  std::string format(const GroupElement& e) const override {
    if (r_ == 1) return std::to_string(e[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < r_; ++i) {
      if (i) s += ",";
      s += std::to_string(e[i]);
    }
    return s + ")";
  }
  GroupElement parse(std::string_view text) const override {
    text = trim(text);
    if (r_ == 1 && (text.empty() || text.front() != '(')) return GroupElement{parse_int(text)};
    if (text.size() < 2 || text.front() != '(' || text.back() != ')') {
      fail(ErrorCode::ParseError, "expected (a,b,...) for a free abelian element");
    }
    auto parts = split_top_level(text.substr(1, text.size() - 2), ',');
    if (r_ == 0 && parts.size() == 1 && trim(parts[0]).empty()) return identity();
    if (parts.size() != r_) fail(ErrorCode::ParseError, "wrong number of coordinates");
    Payload p;
    for (auto& part : parts) p.push_back(parse_int(part));
    return GroupElement(std::move(p));
  }
  bool abelian(const std::vector<GroupElement>*) const override { return true; }
  std::size_t free_rank() const override { return r_; }
  GroupElement random(Xorshift64Star& rng, std::int64_t window,
                      const std::vector<GroupElement>*) const override {
    Payload p(r_);
    for (auto& v : p) v = rng.between(-window, window);
    return GroupElement(std::move(p));
  }

 private:
  std::size_t r_;
};

class PermutationImpl final : public GroupImpl {
 public:
  PermutationImpl(std::int64_t degree, std::vector<std::vector<int>> gens)
      : n_(static_cast<std::size_t>(degree)), gens_(std::move(gens)) {}
  std::size_t width() const override { return n_; }
  GroupElement identity() const override {
    Payload p(n_);
    std::iota(p.begin(), p.end(), 0);
    return GroupElement(std::move(p));
  }
  // (a*b)(i) = a(b(i)): apply b first.
  GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
    Payload p(n_);
    for (std::size_t i = 0; i < n_; ++i) p[i] = a[static_cast<std::size_t>(b[i])];
    return GroupElement(std::move(p));
  }
  GroupElement inv(const GroupElement& a) const override {
    Payload p(n_);
    for (std::size_t i = 0; i < n_; ++i) p[static_cast<std::size_t>(a[i])] = static_cast<std::int64_t>(i);
    return GroupElement(std::move(p));
  }
  bool finite() const override { return true; }
  std::vector<GroupElement> generate(std::size_t cap) const override {
    std::vector<GroupElement> gens;
    for (const auto& g : gens_) gens.emplace_back(Payload(g.begin(), g.end()));
    std::unordered_set<GroupElement, GroupElementHash> seen{identity()};
    std::vector<GroupElement> out{identity()};
    std::deque<GroupElement> queue{identity()};
    while (!queue.empty()) {
      GroupElement x = queue.front();
      queue.pop_front();
      for (const auto& g : gens) {
        GroupElement y = mul(g, x);
        if (seen.insert(y).second) {
          if (out.size() >= cap) {
            fail(ErrorCode::BudgetExceeded, "permutation group exceeds order cap " + std::to_string(cap));
          }
          out.push_back(y);
          queue.push_back(y);
        }
      }
    }
    return out;
  }
  std::string format(const GroupElement& e) const override {
    std::string s;
    std::vector<bool> done(n_, false);
    for (std::size_t i = 0; i < n_; ++i) {
      if (done[i] || e[i] == static_cast<std::int64_t>(i)) continue;
      s += "(";
      std::size_t j = i;
      bool first = true;
      while (!done[j]) {
        done[j] = true;
        if (!first) s += " ";
        s += std::to_string(j + 1);
        first = false;
        j = static_cast<std::size_t>(e[j]);
      }
      s += ")";
    }
    return s.empty() ? "()" : s;
  }
  GroupElement parse(std::string_view text) const override {
    auto perm = parse_cycles(text, n_);
    return GroupElement(Payload(perm.begin(), perm.end()));
  }
  bool abelian(const std::vector<GroupElement>*) const override {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      for (std::size_t j = i + 1; j < gens_.size(); ++j) {
        GroupElement a(Payload(gens_[i].begin(), gens_[i].end()));
        GroupElement b(Payload(gens_[j].begin(), gens_[j].end()));
        if (!(mul(a, b) == mul(b, a))) return false;
      }
    }
    return true;
  }

  // Cycle notation with 1-based points; returns 0-based one-line images.
  static std::vector<int> parse_cycles(std::string_view text, std::size_t degree) {
    std::vector<int> perm(degree);
    std::iota(perm.begin(), perm.end(), 0);
    text = trim(text);
    if (text == "e" || text == "()" || text.empty()) return perm;
    std::size_t pos = 0;
    while (pos < text.size()) {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos == text.size()) break;
      if (text[pos] != '(') fail(ErrorCode::ParseError, "expected '(' in cycle notation");
      std::size_t close = text.find(')', pos);
      if (close == std::string_view::npos) fail(ErrorCode::ParseError, "unterminated cycle");
      std::vector<int> cycle;
      std::string inner(text.substr(pos + 1, close - pos - 1));
      for (char& c : inner) {
        if (c == ',') c = ' ';
      }
      std::istringstream in(inner);
      int v;
      while (in >> v) {
        if (v < 1 || static_cast<std::size_t>(v) > degree) {
          fail(ErrorCode::ParseError, "cycle point out of range");
        }
        cycle.push_back(v - 1);
      }
      // Compose: the new cycle is applied after the ones to its right, so build
      // right-to-left by post-composing each cycle read left-to-right.
      std::vector<int> c(degree);
      std::iota(c.begin(), c.end(), 0);
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        c[static_cast<std::size_t>(cycle[i])] = cycle[(i + 1) % cycle.size()];
      }
      std::vector<int> composed(degree);
      for (std::size_t i = 0; i < degree; ++i) composed[i] = perm[static_cast<std::size_t>(c[i])];
      perm = composed;
      pos = close + 1;
    }
    return perm;
  }

 private:
  std::size_t n_;
  std::vector<std::vector<int>> gens_;
};

class TableImpl final : public GroupImpl {
 public:
  explicit TableImpl(std::vector<std::vector<int>> table) : t_(std::move(table)) {
    const std::size_t n = t_.size();
    if (n == 0) fail(ErrorCode::InvalidTable, "empty table");
    for (const auto& row : t_) {
      if (row.size() != n) fail(ErrorCode::InvalidTable, "table is not square");
      for (int v : row) {
        if (v < 0 || static_cast<std::size_t>(v) >= n) fail(ErrorCode::InvalidTable, "entry out of range");
      }
    }
    std::optional<std::size_t> e;
    for (std::size_t i = 0; i < n && !e; ++i) {
      bool ok = true;
      for (std::size_t j = 0; j < n && ok; ++j) {
        ok = t_[i][j] == static_cast<int>(j) && t_[j][i] == static_cast<int>(j);
      }
      if (ok) e = i;
    }
    if (!e) fail(ErrorCode::InvalidTable, "no identity element");
    e_ = static_cast<std::int64_t>(*e);
    inv_.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (t_[i][j] == e_ && t_[j][i] == e_) inv_[i] = static_cast<std::int64_t>(j);
      }
      if (inv_[i] < 0) fail(ErrorCode::InvalidTable, "element " + std::to_string(i) + " has no inverse");
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t c = 0; c < n; ++c) {
          if (t_[static_cast<std::size_t>(t_[a][b])][c] != t_[a][static_cast<std::size_t>(t_[b][c])]) {
            fail(ErrorCode::InvalidTable, "associativity fails");
          }
        }
      }
    }
  }
  std::size_t width() const override { return 1; }
  GroupElement identity() const override { return GroupElement{e_}; }
  GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
    return GroupElement{t_[static_cast<std::size_t>(a[0])][static_cast<std::size_t>(b[0])]};
  }
  GroupElement inv(const GroupElement& a) const override {
    return GroupElement{inv_[static_cast<std::size_t>(a[0])]};
  }
  bool finite() const override { return true; }
  std::vector<GroupElement> generate(std::size_t) const override {
    std::vector<GroupElement> out;
    for (std::size_t i = 0; i < t_.size(); ++i) out.push_back(GroupElement{static_cast<std::int64_t>(i)});
    return out;
  }
  std::string format(const GroupElement& e) const override { return "#" + std::to_string(e[0]); }
  GroupElement parse(std::string_view text) const override {
    text = trim(text);
    if (!text.empty() && text.front() == '#') text.remove_prefix(1);
    std::int64_t v = parse_int(text);
    if (v < 0 || static_cast<std::size_t>(v) >= t_.size()) fail(ErrorCode::ParseError, "table index out of range");
    return GroupElement{v};
  }
  bool abelian(const std::vector<GroupElement>*) const override {
    for (std::size_t i = 0; i < t_.size(); ++i) {
      for (std::size_t j = 0; j < t_.size(); ++j) {
        if (t_[i][j] != t_[j][i]) return false;
      }
    }
    return true;
  }

 private:
  std::vector<std::vector<int>> t_;
  std::int64_t e_ = 0;
  std::vector<std::int64_t> inv_;
};

class ProductImpl final : public GroupImpl {
 public:
  explicit ProductImpl(std::vector<Group> factors) : factors_(std::move(factors)) {
    std::size_t off = 0;
    for (const auto& f : factors_) {
      offsets_.push_back(off);
      off += f.width();
    }
    width_ = off;
  }
  std::size_t width() const override { return width_; }
  GroupElement part(const GroupElement& e, std::size_t i) const {
    const auto& p = e.payload();
    return GroupElement(Payload(p.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
                                p.begin() + static_cast<std::ptrdiff_t>(offsets_[i] + factors_[i].width())));
  }
  GroupElement join(const std::vector<GroupElement>& parts) const {
    Payload p;
    for (const auto& x : parts) p.insert(p.end(), x.payload().begin(), x.payload().end());
    return GroupElement(std::move(p));
  }
  GroupElement identity() const override {
    std::vector<GroupElement> parts;
    for (const auto& f : factors_) parts.push_back(f.identity());
    return join(parts);
  }
  GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
    std::vector<GroupElement> parts;
    for (std::size_t i = 0; i < factors_.size(); ++i) parts.push_back(factors_[i].mul(part(a, i), part(b, i)));
    return join(parts);
  }
  GroupElement inv(const GroupElement& a) const override {
    std::vector<GroupElement> parts;
    for (std::size_t i = 0; i < factors_.size(); ++i) parts.push_back(factors_[i].inv(part(a, i)));
    return join(parts);
  }
  bool finite() const override {
    return std::all_of(factors_.begin(), factors_.end(), [](const Group& g) { return g.is_finite(); });
  }
  std::vector<GroupElement> generate(std::size_t cap) const override {
    std::size_t total = 1;
    for (const auto& f : factors_) {
      total *= f.order();
      if (total > cap) fail(ErrorCode::BudgetExceeded, "product exceeds order cap " + std::to_string(cap));
    }
    std::vector<GroupElement> out;
    std::vector<std::size_t> idx(factors_.size(), 0);
    for (std::size_t k = 0; k < total; ++k) {
      std::vector<GroupElement> parts;
      for (std::size_t i = 0; i < factors_.size(); ++i) parts.push_back(factors_[i].elements()[idx[i]]);
      out.push_back(join(parts));
      for (std::size_t i = factors_.size(); i-- > 0;) {
        if (++idx[i] < factors_[i].order()) break;
        idx[i] = 0;
      }
    }
    return out;
  }
  std::string format(const GroupElement& e) const override {
    std::string s = "<";
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += ",";
      s += factors_[i].format(part(e, i));
    }
    return s + ">";
  }
  GroupElement parse(std::string_view text) const override {
    text = trim(text);
    if (text.size() < 2 || text.front() != '<' || text.back() != '>') {
      fail(ErrorCode::ParseError, "expected <a,b,...> for a product element");
    }
    auto items = split_top_level(text.substr(1, text.size() - 2), ',');
    if (items.size() != factors_.size()) fail(ErrorCode::ParseError, "wrong number of product components");
    std::vector<GroupElement> parts;
    for (std::size_t i = 0; i < items.size(); ++i) parts.push_back(factors_[i].parse_element(items[i]));
    return join(parts);
  }
  bool abelian(const std::vector<GroupElement>*) const override {
    return std::all_of(factors_.begin(), factors_.end(), [](const Group& g) { return g.is_abelian(); });
  }
  GroupElement random(Xorshift64Star& rng, std::int64_t window,
                      const std::vector<GroupElement>*) const override {
    std::vector<GroupElement> parts;
    for (const auto& f : factors_) parts.push_back(f.random_element(rng, window));
    return join(parts);
  }
  const std::vector<Group>& factors() const { return factors_; }

 private:
  std::vector<Group> factors_;
  std::vector<std::size_t> offsets_;
  std::size_t width_ = 0;
};

class QuotientImpl final : public GroupImpl {
 public:
  QuotientImpl(Group parent, GroupElement z) : parent_(std::move(parent)) {
    GroupElement x = z;
    subgroup_.push_back(parent_.identity());
    while (!parent_.is_identity(x)) {
      subgroup_.push_back(x);
      x = parent_.mul(x, z);
    }
  }
  GroupElement canonical(const GroupElement& x) const {
    GroupElement best = x;
    for (const auto& h : subgroup_) {
      GroupElement y = parent_.mul(x, h);
      if (y < best) best = y;
    }
    return best;
  }
  std::size_t width() const override { return parent_.width(); }
  GroupElement identity() const override { return canonical(parent_.identity()); }
  GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
    return canonical(parent_.mul(a, b));
  }
  GroupElement inv(const GroupElement& a) const override { return canonical(parent_.inv(a)); }
  bool finite() const override { return parent_.is_finite(); }
  std::vector<GroupElement> generate(std::size_t) const override {
    std::set<GroupElement> reps;
    for (const auto& x : parent_.elements()) reps.insert(canonical(x));
    return {reps.begin(), reps.end()};
  }
  std::string format(const GroupElement& e) const override { return "[" + parent_.format(e) + "]"; }
  GroupElement parse(std::string_view text) const override {
    text = trim(text);
    if (text.size() >= 2 && text.front() == '[' && text.back() == ']') text = text.substr(1, text.size() - 2);
    return canonical(parent_.parse_element(text));
  }
  bool abelian(const std::vector<GroupElement>* elements) const override {
    if (parent_.is_abelian()) return true;
    return exhaustive_abelian(*this, *elements);
  }
  GroupElement random(Xorshift64Star& rng, std::int64_t window,
                      const std::vector<GroupElement>* elements) const override {
    if (elements) return GroupImpl::random(rng, window, elements);
    return canonical(parent_.random_element(rng, window));
  }
  std::size_t free_rank() const override { return parent_.free_rank(); }

 private:
  Group parent_;
  std::vector<GroupElement> subgroup_;
};

}  // namespace

// ---------------------------------------------------------------------------
// GroupSpec

GroupSpec GroupSpec::cyclic(std::int64_t order) {
  if (order < 0) fail(ErrorCode::InvalidSpec, "cyclic order must be >= 0");
  GroupSpec s;
  s.kind = Kind::cyclic;
  s.n = order;
  return s;
}

GroupSpec GroupSpec::free_abelian(std::int64_t rank) {
  if (rank < 0) fail(ErrorCode::InvalidSpec, "rank must be >= 0");
  GroupSpec s;
  s.kind = Kind::free_abelian;
  s.n = rank;
  return s;
}

GroupSpec GroupSpec::permutation(std::int64_t degree, std::vector<std::vector<int>> generators) {
  if (degree < 1) fail(ErrorCode::InvalidSpec, "permutation degree must be >= 1");
  for (const auto& g : generators) {
    if (static_cast<std::int64_t>(g.size()) != degree) fail(ErrorCode::InvalidSpec, "generator has wrong degree");
    std::vector<int> sorted = g;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] != static_cast<int>(i)) fail(ErrorCode::InvalidSpec, "generator is not a permutation");
    }
  }
  GroupSpec s;
  s.kind = Kind::permutation;
  s.n = degree;
  s.generators = std::move(generators);
  return s;
}

GroupSpec GroupSpec::symmetric(int degree) {
  if (degree < 1) fail(ErrorCode::InvalidSpec, "symmetric degree must be >= 1");
  std::vector<std::vector<int>> gens;
  if (degree >= 2) {
    std::vector<int> swap(static_cast<std::size_t>(degree));
    std::iota(swap.begin(), swap.end(), 0);
    std::swap(swap[0], swap[1]);
    gens.push_back(swap);
    std::vector<int> cycle(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i) cycle[static_cast<std::size_t>(i)] = (i + 1) % degree;
    gens.push_back(cycle);
  }
  return permutation(degree, gens);
}

GroupSpec GroupSpec::dihedral(int order) {
  if (order < 6 || order % 2) fail(ErrorCode::InvalidSpec, "dihedral order must be even and >= 6");
  const int n = order / 2;
  std::vector<int> rot(static_cast<std::size_t>(n)), refl(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    rot[static_cast<std::size_t>(i)] = (i + 1) % n;
    refl[static_cast<std::size_t>(i)] = (n - i) % n;
  }
  return permutation(n, {rot, refl});
}

GroupSpec GroupSpec::from_table(std::vector<std::vector<int>> table) {
  GroupSpec s;
  s.kind = Kind::table;
  s.table = std::move(table);
  s.n = static_cast<std::int64_t>(s.table.size());
  return s;
}

GroupSpec GroupSpec::product(std::vector<GroupSpec> factors) {
  if (factors.empty()) fail(ErrorCode::InvalidSpec, "product needs at least one factor");
  GroupSpec s;
  s.kind = Kind::product;
  s.factors = std::move(factors);
  return s;
}

GroupSpec GroupSpec::central_quotient(GroupSpec parent, Payload central) {
  GroupSpec s;
  s.kind = Kind::central_quotient;
  s.factors.push_back(std::move(parent));
  s.central = std::move(central);
  return s;
}

std::string GroupSpec::to_string() const {
  switch (kind) {
    case Kind::cyclic:
      if (n == 0) return "Z";
      if (n == 1) return "1";
      return "C" + std::to_string(n);
    case Kind::free_abelian:
      if (n == 0) return "1";
      if (n == 1) return "Z";
      return "Z^" + std::to_string(n);
    case Kind::permutation: {
      std::string s = "perm" + std::to_string(n) + ":[";
      for (std::size_t i = 0; i < generators.size(); ++i) {
        if (i) s += ",";
        Payload p(generators[i].begin(), generators[i].end());
        s += PermutationImpl(n, {}).format(GroupElement(p));
      }
      return s + "]";
    }
    case Kind::table: {
      std::string s = "table:[";
      for (std::size_t i = 0; i < table.size(); ++i) {
        if (i) s += ";";
        for (std::size_t j = 0; j < table[i].size(); ++j) {
          if (j) s += " ";
          s += std::to_string(table[i][j]);
        }
      }
      return s + "]";
    }
    case Kind::product: {
      std::string s;
      for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) s += "x";
        const auto& f = factors[i];
        bool wrap = f.kind == Kind::product;
        s += wrap ? "(" + f.to_string() + ")" : f.to_string();
      }
      return s;
    }
    case Kind::central_quotient: {
      std::string s = "quot(" + factors[0].to_string() + ",";
      Group parent = make_group(factors[0]);
      s += parent.format(GroupElement(central));
      return s + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Group

Group make_group(const GroupSpec& spec, std::size_t order_cap) {
  auto data = std::make_shared<detail::GroupData>();
  data->spec = spec;
  switch (spec.kind) {
    case GroupSpec::Kind::cyclic:
      if (spec.n < 0) fail(ErrorCode::InvalidSpec, "cyclic order must be >= 0");
      data->impl = std::make_unique<CyclicImpl>(spec.n);
      break;
    case GroupSpec::Kind::free_abelian:
      if (spec.n < 0) fail(ErrorCode::InvalidSpec, "rank must be >= 0");
      data->impl = std::make_unique<FreeAbelianImpl>(spec.n);
      break;
    case GroupSpec::Kind::permutation:
      data->impl = std::make_unique<PermutationImpl>(spec.n, spec.generators);
      break;
    case GroupSpec::Kind::table:
      data->impl = std::make_unique<TableImpl>(spec.table);
      break;
    case GroupSpec::Kind::product: {
      std::vector<Group> factors;
      for (const auto& f : spec.factors) factors.push_back(make_group(f, order_cap));
      data->factors = factors;
      data->impl = std::make_unique<ProductImpl>(std::move(factors));
      break;
    }
    case GroupSpec::Kind::central_quotient: {
      if (spec.factors.size() != 1) fail(ErrorCode::InvalidSpec, "central quotient needs one parent");
      Group parent = make_group(spec.factors[0], order_cap);
      GroupElement z(spec.central);
      if (z.size() != parent.width()) fail(ErrorCode::InvalidSpec, "central element has the wrong shape");
      if (!parent.element_order(z)) fail(ErrorCode::InvalidSpec, "central element must have finite order");
      if (parent.is_finite()) {
        for (const auto& x : parent.elements()) {
          if (!(parent.mul(x, z) == parent.mul(z, x))) {
            fail(ErrorCode::NonCentralElement, parent.format(z) + " does not commute with " + parent.format(x));
          }
        }
      } else if (!parent.is_abelian()) {
        fail(ErrorCode::Unsupported, "central quotient of an infinite non-abelian group");
      }
      data->impl = std::make_unique<QuotientImpl>(parent, z);
      break;
    }
  }
  data->finite = data->impl->finite();
  data->identity = data->impl->identity();
  data->name = spec.to_string();
  if (data->finite) {
    auto elems = data->impl->generate(order_cap);
    if (elems.size() > order_cap) {
      fail(ErrorCode::BudgetExceeded, "group order exceeds cap " + std::to_string(order_cap));
    }
    std::sort(elems.begin(), elems.end());
    auto id = std::find(elems.begin(), elems.end(), data->identity);
    std::rotate(elems.begin(), id, id + 1);
    data->elements = std::move(elems);
    for (std::size_t i = 0; i < data->elements.size(); ++i) data->index.emplace(data->elements[i], i);
  }
  Group g;
  g.data_ = std::move(data);
  return g;
}

const GroupSpec& Group::spec() const { return data_->spec; }
std::string Group::name() const { return data_->name; }
GroupElement Group::identity() const { return data_->identity; }

GroupElement Group::mul(const GroupElement& a, const GroupElement& b) const {
  return data_->impl->mul(a, b);
}

GroupElement Group::inv(const GroupElement& a) const { return data_->impl->inv(a); }

GroupElement Group::pow(const GroupElement& a, std::int64_t k) const {
  GroupElement base = k < 0 ? inv(a) : a;
  std::uint64_t e = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
  GroupElement result = identity();
  while (e) {
    if (e & 1) result = mul(result, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return result;
}

GroupElement Group::commutator(const GroupElement& a, const GroupElement& b) const {
  return mul(mul(a, b), mul(inv(a), inv(b)));
}

bool Group::is_finite() const { return data_->finite; }

std::size_t Group::order() const {
  if (!data_->finite) fail(ErrorCode::InfiniteGroup, name() + " is infinite");
  return data_->elements.size();
}

const std::vector<GroupElement>& Group::elements() const {
  if (!data_->finite) fail(ErrorCode::InfiniteGroup, name() + " is infinite");
  return data_->elements;
}

std::size_t Group::index_of(const GroupElement& e) const {
  if (!data_->finite) fail(ErrorCode::InfiniteGroup, name() + " is infinite");
  auto it = data_->index.find(e);
  if (it == data_->index.end()) fail(ErrorCode::Mismatch, "element is not in " + name());
  return it->second;
}

bool Group::less(const GroupElement& a, const GroupElement& b) const {
  const bool ia = a == data_->identity, ib = b == data_->identity;
  if (ia || ib) return ia && !ib;
  return a < b;
}

std::optional<std::int64_t> Group::element_order(const GroupElement& a) const {
  if (!data_->finite) {
    if (data_->spec.kind == GroupSpec::Kind::cyclic || data_->spec.kind == GroupSpec::Kind::free_abelian) {
      return is_identity(a) ? std::optional<std::int64_t>(1) : std::nullopt;
    }
    if (data_->spec.kind == GroupSpec::Kind::product) {
      std::int64_t l = 1;
      auto* impl = static_cast<const ProductImpl*>(data_->impl.get());
      for (std::size_t i = 0; i < data_->factors.size(); ++i) {
        auto o = data_->factors[i].element_order(impl->part(a, i));
        if (!o) return std::nullopt;
        l = std::lcm(l, *o);
      }
      return l;
    }
    if (is_identity(a)) return 1;
    fail(ErrorCode::Unsupported, "element order in " + name());
  }
  std::int64_t k = 1;
  GroupElement x = a;
  while (!is_identity(x)) {
    x = mul(x, a);
    ++k;
  }
  return k;
}

bool Group::is_abelian() const {
  return data_->impl->abelian(data_->finite ? &data_->elements : nullptr);
}

std::size_t Group::width() const { return data_->impl->width(); }
std::size_t Group::free_rank() const { return data_->impl->free_rank(); }
std::string Group::format(const GroupElement& e) const { return data_->impl->format(e); }

GroupElement Group::parse_element(std::string_view text) const {
  GroupElement e = data_->impl->parse(text);
  if (data_->finite && !data_->index.count(e)) {
    fail(ErrorCode::ParseError, "'" + std::string(text) + "' is not an element of " + name());
  }
  return e;
}

GroupElement Group::random_element(Xorshift64Star& rng, std::int64_t window) const {
  return data_->impl->random(rng, window, data_->finite ? &data_->elements : nullptr);
}

const std::vector<Group>& Group::factors() const { return data_->factors; }

bool operator==(const Group& a, const Group& b) {
  if (a.data_ == b.data_) return true;
  if (!a.data_ || !b.data_) return false;
  return a.data_->name == b.data_->name;
}

std::vector<GroupElement> enumerate(const Group& g) { return g.elements(); }

std::vector<GroupElement> centre(const Group& g) {
  const auto& elems = g.elements();
  std::vector<GroupElement> out;
  for (const auto& z : elems) {
    bool central = true;
    for (const auto& x : elems) {
      if (!(g.mul(z, x) == g.mul(x, z))) {
        central = false;
        break;
      }
    }
    if (central) out.push_back(z);
  }
  return out;
}

std::vector<std::size_t> subgroup_closure(const Group& g, const std::vector<GroupElement>& generators) {
  std::vector<bool> in(g.order(), false);
  std::vector<std::size_t> members{g.index_of(g.identity())};
  in[members[0]] = true;
  std::deque<GroupElement> queue{g.identity()};
  while (!queue.empty()) {
    GroupElement x = queue.front();
    queue.pop_front();
    for (const auto& s : generators) {
      GroupElement y = g.mul(x, s);
      std::size_t k = g.index_of(y);
      if (!in[k]) {
        in[k] = true;
        members.push_back(k);
        queue.push_back(y);
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

// ---------------------------------------------------------------------------
// Homomorphisms

GroupHom identity_hom(const Group& g) {
  return {g, g, [](const GroupElement& x) { return x; }, "id"};
}

GroupHom compose(const GroupHom& outer, const GroupHom& inner) {
  if (!(inner.target == outer.source)) fail(ErrorCode::Mismatch, "composition of incompatible homomorphisms");
  auto f = inner.rule;
  auto g = outer.rule;
  return {inner.source, outer.target, [f, g](const GroupElement& x) { return g(f(x)); },
          outer.label + "∘" + inner.label};
}

GroupHom reduction_hom(const Group& source, const Group& target) {
  const auto& s = source.spec();
  const auto& t = target.spec();
  const bool s_cyc = s.kind == GroupSpec::Kind::cyclic ||
                     (s.kind == GroupSpec::Kind::free_abelian && s.n == 1);
  if (!s_cyc || t.kind != GroupSpec::Kind::cyclic) {
    fail(ErrorCode::Unsupported, "reduction map needs cyclic source and target");
  }
  const std::int64_t m = s.kind == GroupSpec::Kind::cyclic ? s.n : 0;
  const std::int64_t n = t.n;
  if (n == 0 ? m != 0 : (m != 0 && m % n != 0)) {
    fail(ErrorCode::InvalidSpec, "reduction " + source.name() + " -> " + target.name() + " is not well defined");
  }
  return {source, target,
          [n](const GroupElement& x) {
            return n == 0 ? x : GroupElement{((x[0] % n) + n) % n};
          },
          "mod"};
}

GroupHom scaling_hom(const Group& g, std::int64_t k) {
  const auto kind = g.spec().kind;
  if (kind != GroupSpec::Kind::cyclic && kind != GroupSpec::Kind::free_abelian) {
    fail(ErrorCode::Unsupported, "scaling map needs a cyclic or free abelian group");
  }
  Group copy = g;
  return {g, g, [copy, k](const GroupElement& x) { return copy.pow(x, k); }, "x" + std::to_string(k)};
}

GroupHom projection_hom(const Group& product, std::size_t factor) {
  if (product.spec().kind != GroupSpec::Kind::product || factor >= product.factors().size()) {
    fail(ErrorCode::Unsupported, "projection needs a product group and a valid factor index");
  }
  std::size_t off = 0;
  for (std::size_t i = 0; i < factor; ++i) off += product.factors()[i].width();
  const std::size_t w = product.factors()[factor].width();
  return {product, product.factors()[factor],
          [off, w](const GroupElement& x) {
            const auto& p = x.payload();
            return GroupElement(Payload(p.begin() + static_cast<std::ptrdiff_t>(off),
                                        p.begin() + static_cast<std::ptrdiff_t>(off + w)));
          },
          "proj" + std::to_string(factor)};
}

GroupHom trivial_hom(const Group& source, const Group& target) {
  GroupElement e = target.identity();
  return {source, target, [e](const GroupElement&) { return e; }, "trivial"};
}

GroupHom quotient_hom(const Group& parent, const Group& quotient) {
  if (quotient.spec().kind != GroupSpec::Kind::central_quotient ||
      !(make_group(quotient.spec().factors[0]) == parent)) {
    fail(ErrorCode::Mismatch, "target is not a central quotient of the source");
  }
  Group q = quotient;
  return {parent, quotient, [q](const GroupElement& x) { return q.mul(x, q.identity()); }, "quotient"};
}

bool verify_hom(const GroupHom& h, std::uint64_t seed, std::size_t samples, std::size_t exhaustive_cap) {
  const Group& s = h.source;
  const Group& t = h.target;
  if (s.is_finite() && s.order() <= exhaustive_cap) {
    for (const auto& a : s.elements()) {
      for (const auto& b : s.elements()) {
        if (!(h(s.mul(a, b)) == t.mul(h(a), h(b)))) return false;
      }
    }
    return true;
  }
  Xorshift64Star rng(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    GroupElement a = s.random_element(rng);
    GroupElement b = s.random_element(rng);
    if (!(h(s.mul(a, b)) == t.mul(h(a), h(b)))) return false;
  }
  return true;
}

bool is_surjective(const GroupHom& h) {
  std::unordered_set<GroupElement, GroupElementHash> image;
  for (const auto& x : h.source.elements()) image.insert(h(x));
  return image.size() == h.target.order();
}

bool is_injective(const GroupHom& h) { return hom_kernel(h).size() == 1; }

std::vector<GroupElement> hom_kernel(const GroupHom& h) {
  std::vector<GroupElement> out;
  for (const auto& x : h.source.elements()) {
    if (h.target.is_identity(h(x))) out.push_back(x);
  }
  return out;
}

Abelianization abelianization(const Group& g) {
  const auto kind = g.spec().kind;
  if (kind == GroupSpec::Kind::cyclic || kind == GroupSpec::Kind::free_abelian) {
    return {g, identity_hom(g)};
  }
  if (!g.is_finite()) fail(ErrorCode::Unsupported, "abelianization of infinite " + g.name());
  if (g.is_abelian()) return {g, identity_hom(g)};

  const auto& elems = g.elements();
  std::vector<GroupElement> commutators;
  {
    std::unordered_set<GroupElement, GroupElementHash> seen;
    for (const auto& a : elems) {
      for (const auto& b : elems) {
        GroupElement c = g.commutator(a, b);
        if (seen.insert(c).second) commutators.push_back(c);
      }
    }
  }
  auto derived = subgroup_closure(g, commutators);
  // Coset labels ordered by the position of their first element in g.elements().
  std::vector<int> coset(elems.size(), -1);
  int count = 0;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (coset[i] >= 0) continue;
    for (std::size_t k : derived) coset[g.index_of(g.mul(elems[i], elems[k]))] = count;
    ++count;
  }
  std::vector<GroupElement> reps(static_cast<std::size_t>(count));
  for (std::size_t i = elems.size(); i-- > 0;) reps[static_cast<std::size_t>(coset[i])] = elems[i];
  std::vector<std::vector<int>> table(static_cast<std::size_t>(count), std::vector<int>(static_cast<std::size_t>(count)));
  for (int a = 0; a < count; ++a) {
    for (int b = 0; b < count; ++b) {
      GroupElement prod = g.mul(reps[static_cast<std::size_t>(a)], reps[static_cast<std::size_t>(b)]);
      table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = coset[g.index_of(prod)];
    }
  }
  Group ab = make_group(GroupSpec::from_table(table));
  Group src = g;
  auto labels = std::make_shared<std::vector<int>>(std::move(coset));
  GroupHom proj{g, ab,
                [src, labels](const GroupElement& x) {
                  return GroupElement{static_cast<std::int64_t>((*labels)[src.index_of(x)])};
                },
                "Ab"};
  return {ab, proj};
}

}  // namespace stabfin
