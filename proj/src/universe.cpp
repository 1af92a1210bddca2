#include "cdrum/universe.hpp"

#include <array>
#include <sstream>

namespace cdrum {

std::vector<Mask> all_menus(int n) {
  std::vector<Mask> menus;
  Mask full = (Mask(1) << n) - 1;
  menus.reserve(full);
  for (Mask m = 1; m <= full; ++m) menus.push_back(m);
  std::sort(menus.begin(), menus.end(), canonical_mask_less);
  return menus;
}

std::vector<Mask> supersets_of(Mask menu, int n) {
  Mask full = (Mask(1) << n) - 1;
  Mask free = full & ~menu;
  std::vector<Mask> out;
  out.reserve(std::size_t(1) << popcount(free));
  // enumerate subsets of the complement and union them in
  Mask sub = free;
  while (true) {
    out.push_back(menu | sub);
    if (sub == 0) break;
    sub = (sub - 1) & free;
  }
  std::sort(out.begin(), out.end(), canonical_mask_less);
  return out;
}

OrderSpace::OrderSpace(int n) : n_(n), full_((Mask(1) << n) - 1) {
  if (n < 1 || n > 8) throw UniverseTooLargeError("linear order tables support 1..8 alternatives");
  Order perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
  do {
    orders_.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  top_.assign(orders_.size() * (full_ + 1), 0);
  icell_.assign(orders_.size() * static_cast<std::size_t>(n), 0);
  for (std::size_t r = 0; r < orders_.size(); ++r) {
    const Order& o = orders_[r];
    for (Mask m = 1; m <= full_; ++m) {
      for (std::uint8_t alt : o) {
        if (contains(m, alt)) {
          top_[r * (full_ + 1) + m] = alt;
          break;
        }
      }
    }
    Mask below = 0;
    for (int pos = n - 1; pos >= 0; --pos) {
      int alt = o[static_cast<std::size_t>(pos)];
      icell_[r * static_cast<std::size_t>(n) + alt] = below | (Mask(1) << alt);
      below |= Mask(1) << alt;
    }
  }
}

const OrderSpace& OrderSpace::get(int n) {
  static std::array<const OrderSpace*, 9> cache{};
  static std::mutex mutex;
  if (n < 1 || n > 8) throw UniverseTooLargeError("linear order tables support 1..8 alternatives");
  std::lock_guard<std::mutex> lock(mutex);
  if (!cache[static_cast<std::size_t>(n)])
    cache[static_cast<std::size_t>(n)] = new OrderSpace(n);
  return *cache[static_cast<std::size_t>(n)];
}

std::size_t OrderSpace::rank_of(const Order& order) const {
  // Lehmer code against the lexicographic enumeration
  std::size_t rank = 0;
  std::size_t fact = 1;
  for (std::size_t i = 2; i <= order.size(); ++i) fact *= i;
  for (std::size_t i = 0; i < order.size(); ++i) {
    fact /= order.size() - i;
    std::size_t smaller_later = 0;
    for (std::size_t j = i + 1; j < order.size(); ++j)
      if (order[j] < order[i]) ++smaller_later;
    rank += smaller_later * fact;
  }
  return rank;
}

std::string OrderSpace::format(std::size_t rank, const Universe& u) const {
  const Order& o = orders_[rank];
  std::string out;
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (i) out += ">";
    out += u.label(o[i]);
  }
  return out;
}

std::optional<std::size_t> OrderSpace::parse(const std::string& text, const Universe& u) const {
  Order order;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '>')) {
    auto idx = u.index_of(part);
    if (!idx) return std::nullopt;
    order.push_back(static_cast<std::uint8_t>(*idx));
  }
  if (static_cast<int>(order.size()) != n_) return std::nullopt;
  Order sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != i) return std::nullopt;
  return rank_of(order);
}

}  // namespace cdrum
