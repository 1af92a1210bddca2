#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cdrum/errors.hpp"

namespace cdrum {

// Menus are bitmasks over the canonical alternative ordering; bit i stands
// for alternatives[i].
using Mask = std::uint32_t;

inline int popcount(Mask m) { return std::popcount(m); }
inline bool contains(Mask menu, int alt) { return (menu >> alt) & 1u; }
inline bool subset_of(Mask a, Mask b) { return (a & ~b) == 0; }

// Canonical subset order: popcount descending, then numeric mask ascending.
// Every table layout, witness report and path tie-break uses this order.
inline bool canonical_mask_less(Mask a, Mask b) {
  int pa = popcount(a), pb = popcount(b);
  if (pa != pb) return pa > pb;
  return a < b;
}

// The finite alternative set X with its fixed canonical ordering.
class Universe {
 public:
  Universe() = default;

  explicit Universe(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw ParseError("universe must contain at least one alternative");
    if (labels_.size() > 20) throw UniverseTooLargeError("more than 20 alternatives");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!index_.emplace(labels_[i], static_cast<int>(i)).second)
        throw ParseError("duplicate alternative label '" + labels_[i] + "'");
    }
  }

  int size() const { return static_cast<int>(labels_.size()); }
  Mask full_mask() const { return (Mask(1) << labels_.size()) - 1; }
  const std::string& label(int i) const { return labels_[static_cast<std::size_t>(i)]; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<int> index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::string format_menu(Mask m) const {
    std::string out = "{";
    bool first = true;
    for (int i = 0; i < size(); ++i) {
      if (!contains(m, i)) continue;
      if (!first) out += ",";
      out += label(i);
      first = false;
    }
    return out + "}";
  }

  bool operator==(const Universe& other) const { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
  std::map<std::string, int> index_;
};

// All nonempty subsets of an n-element universe in canonical order.
std::vector<Mask> all_menus(int n);

// Subsets S with lo <= S <= hi (inclusive of both bounds), canonical order.
std::vector<Mask> supersets_of(Mask menu, int n);

// A linear order listed best-first.
using Order = std::vector<std::uint8_t>;

// Shared per-size tables for linear orders: lexicographic enumeration,
// Lehmer ranks, maxima and I-cells. Built once per n, immutable after.
class OrderSpace {
 public:
  static const OrderSpace& get(int n);

  int n() const { return n_; }
  std::size_t count() const { return orders_.size(); }
  const Order& order(std::size_t rank) const { return orders_[rank]; }
  const std::vector<Order>& orders() const { return orders_; }

  std::size_t rank_of(const Order& order) const;

  // Best element of menu under the order with this rank.
  int top(std::size_t rank, Mask menu) const { return top_[rank * (full_ + 1) + menu]; }

  // The unique menu A with order in I(x, A): x together with everything
  // ranked below x.
  Mask icell(std::size_t rank, int x) const { return icell_[rank * n_ + x]; }

  bool in_upper_set(std::size_t rank, int x, Mask menu) const {
    return top(rank, menu) == x;  // membership in N(x, menu)
  }

  std::string format(std::size_t rank, const Universe& u) const;
  std::optional<std::size_t> parse(const std::string& text, const Universe& u) const;

 private:
  explicit OrderSpace(int n);

  int n_ = 0;
  Mask full_ = 0;
  std::vector<Order> orders_;
  std::vector<std::uint8_t> top_;  // [rank][menu]
  std::vector<Mask> icell_;        // [rank][alternative]
};

}  // namespace cdrum
