#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepkit {

// Error taxonomy shared by the whole library. CLI exit codes: input_error -> 2,
// capacity_error -> 3, consistency_error (internal invariant broke) -> 1.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct consistency_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void check_input(bool ok, const std::string& msg) {
  if (!ok) throw input_error(msg);
}
inline void check_capacity(bool ok, const std::string& msg) {
  if (!ok) throw capacity_error(msg);
}
inline void check_consistent(bool ok, const std::string& msg) {
  if (!ok) throw consistency_error(msg);
}

// Fixed-universe bitset with value semantics. Ordering is lexicographic on the
// ascending sequence of set indices, so {0} < {0,1} < {1}; this keeps every
// container and enumeration in the library deterministically ordered.
class Bits {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  Bits() = default;
  explicit Bits(std::size_t universe) : n_(universe), w_((universe + 63) / 64, 0) {}

  static Bits of(std::size_t universe, std::initializer_list<std::size_t> idx) {
    Bits b(universe);
    for (std::size_t i : idx) b.set(i);
    return b;
  }
  template <class Range>
  static Bits of_range(std::size_t universe, const Range& idx) {
    Bits b(universe);
    for (std::size_t i : idx) b.set(i);
    return b;
  }
  static Bits full(std::size_t universe) {
    Bits b(universe);
    for (std::size_t i = 0; i < b.w_.size(); ++i) b.w_[i] = ~std::uint64_t{0};
    b.trim();
    return b;
  }

  std::size_t universe() const { return n_; }

  bool test(std::size_t i) const {
    return i < n_ && (w_[i >> 6] >> (i & 63)) & 1;
  }
  void set(std::size_t i) {
    check_consistent(i < n_, "Bits::set index out of universe");
    w_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  void reset(std::size_t i) {
    check_consistent(i < n_, "Bits::reset index out of universe");
    w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (std::uint64_t w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }
  bool empty() const {
    for (std::uint64_t w : w_)
      if (w) return false;
    return true;
  }
  bool any() const { return !empty(); }

  Bits operator&(const Bits& o) const {
    Bits r = aligned(o);
    for (std::size_t i = 0; i < r.w_.size(); ++i) r.w_[i] = w_[i] & o.w_[i];
    return r;
  }
  Bits operator|(const Bits& o) const {
    Bits r = aligned(o);
    for (std::size_t i = 0; i < r.w_.size(); ++i) r.w_[i] = w_[i] | o.w_[i];
    return r;
  }
  // set difference
  Bits operator-(const Bits& o) const {
    Bits r = aligned(o);
    for (std::size_t i = 0; i < r.w_.size(); ++i) r.w_[i] = w_[i] & ~o.w_[i];
    return r;
  }
  Bits& operator&=(const Bits& o) {
    same_universe(o);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  Bits& operator|=(const Bits& o) {
    same_universe(o);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  Bits& operator-=(const Bits& o) {
    same_universe(o);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }
  Bits complement() const {
    Bits r(n_);
    for (std::size_t i = 0; i < r.w_.size(); ++i) r.w_[i] = ~w_[i];
    r.trim();
    return r;
  }

  bool subset_of(const Bits& o) const {
    same_universe(o);
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }
  bool intersects(const Bits& o) const {
    same_universe(o);
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }

  bool operator==(const Bits& o) const { return n_ == o.n_ && w_ == o.w_; }

  std::strong_ordering operator<=>(const Bits& o) const {
    same_universe(o);
    std::size_t a = find_first(), b = o.find_first();
    while (true) {
      if (a == npos && b == npos) return std::strong_ordering::equal;
      if (a == npos) return std::strong_ordering::less;  // proper prefix
      if (b == npos) return std::strong_ordering::greater;
      if (a != b) return a < b ? std::strong_ordering::less : std::strong_ordering::greater;
      a = find_next(a);
      b = o.find_next(b);
    }
  }

  std::size_t find_first() const { return scan_from(0); }
  // first set index strictly above i
  std::size_t find_next(std::size_t i) const { return scan_from(i + 1); }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for (std::size_t i = find_first(); i != npos; i = find_next(i)) out.push_back(i);
    return out;
  }

  // low 64 bits; valid as a full image only when universe() <= 64
  std::uint64_t word0() const { return w_.empty() ? 0 : w_[0]; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;

  void trim() {
    if (n_ & 63) w_.back() &= (~std::uint64_t{0}) >> (64 - (n_ & 63));
    if (n_ == 0) w_.clear();
  }
  void same_universe(const Bits& o) const {
    check_consistent(n_ == o.n_, "Bits universe mismatch");
  }
  Bits aligned(const Bits& o) const {
    same_universe(o);
    return Bits(n_);
  }
  std::size_t scan_from(std::size_t i) const {
    if (i >= n_) return npos;
    std::size_t word = i >> 6;
    std::uint64_t cur = w_[word] & (~std::uint64_t{0} << (i & 63));
    while (true) {
      if (cur) {
        std::size_t r = (word << 6) + static_cast<std::size_t>(__builtin_ctzll(cur));
        return r < n_ ? r : npos;
      }
      if (++word >= w_.size()) return npos;
      cur = w_[word];
    }
  }
};

using VertexSet = Bits;
using EdgeSet = Bits;

// Visits all k-subsets of {0,...,n-1} in lexicographic order. f gets the
// subset as a sorted index vector and returns false to stop early; the
// function returns false iff some call stopped the scan.
template <class F>
bool for_each_combination(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return true;
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  while (true) {
    if (!f(static_cast<const std::vector<std::size_t>&>(c))) return false;
    // advance odometer
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (c[i] != i + n - k) {
        ++c[i];
        for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
        break;
      }
      if (i == 0) return true;
    }
    if (k == 0) return true;
  }
}

// All subsets of {0,...,n-1} of size at most k, in (size, lex) order.
template <class F>
bool for_each_subset_upto(std::size_t n, std::size_t k, F&& f) {
  for (std::size_t s = 0; s <= std::min(n, k); ++s)
    if (!for_each_combination(n, s, f)) return false;
  return true;
}

}  // namespace sepkit
