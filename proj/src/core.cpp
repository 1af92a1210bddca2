#include "cdrum/core.hpp"

namespace cdrum {

std::string format_menu_seq(const Universe& u, const MenuSeq& m) {
  std::string out = "(";
  for (std::size_t i = 0; i < m.menus.size(); ++i) {
    if (i) out += ",";
    out += u.format_menu(m.menus[i]);
  }
  return out + ")";
}

std::string format_cell(const Universe& u, const Cell& c) {
  std::string out = "(";
  for (std::size_t i = 0; i < c.choices.choices.size(); ++i) {
    if (i) out += ",";
    out += u.label(c.choices.choices[i]);
  }
  out += ";";
  for (std::size_t i = 0; i < c.menus.menus.size(); ++i) {
    if (i) out += ",";
    out += u.format_menu(c.menus.menus[i]);
  }
  return out + ")";
}

std::vector<MenuSeq> all_menu_sequences(int n, int periods) {
  std::vector<Mask> menus = all_menus(n);
  std::vector<MenuSeq> out;
  MenuSeq current;
  current.menus.resize(static_cast<std::size_t>(periods));
  std::size_t total = 1;
  for (int t = 0; t < periods; ++t) total *= menus.size();
  out.reserve(total);
  std::vector<std::size_t> idx(static_cast<std::size_t>(periods), 0);
  while (true) {
    for (int t = 0; t < periods; ++t) current.menus[static_cast<std::size_t>(t)] = menus[idx[static_cast<std::size_t>(t)]];
    out.push_back(current);
    int t = periods - 1;
    while (t >= 0) {
      if (++idx[static_cast<std::size_t>(t)] < menus.size()) break;
      idx[static_cast<std::size_t>(t)] = 0;
      --t;
    }
    if (t < 0) break;
  }
  return out;
}

ObservationDomain full_domain(const Universe& u, int periods) {
  ObservationDomain d;
  d.periods = periods;
  for (const MenuSeq& m : all_menu_sequences(u.size(), periods)) d.observed.insert(m);
  return d;
}

bool is_full_domain(const ObservationDomain& domain, const Universe& u) {
  std::size_t menu_count = (std::size_t(1) << u.size()) - 1;
  std::size_t expected = 1;
  for (int t = 0; t < domain.periods; ++t) expected *= menu_count;
  return domain.observed.size() == expected;
}

std::vector<ChoiceSeq> choice_sequences(const MenuSeq& m) {
  std::vector<std::vector<std::uint8_t>> members(m.menus.size());
  for (std::size_t t = 0; t < m.menus.size(); ++t) {
    for (int i = 0; i < 32; ++i)
      if (contains(m.menus[t], i)) members[t].push_back(static_cast<std::uint8_t>(i));
  }
  std::vector<ChoiceSeq> out;
  std::size_t total = 1;
  for (const auto& v : members) total *= v.size();
  out.reserve(total);
  ChoiceSeq current;
  current.choices.resize(m.menus.size());
  std::vector<std::size_t> idx(m.menus.size(), 0);
  while (true) {
    for (std::size_t t = 0; t < m.menus.size(); ++t) current.choices[t] = members[t][idx[t]];
    out.push_back(current);
    int t = static_cast<int>(m.menus.size()) - 1;
    while (t >= 0) {
      auto tt = static_cast<std::size_t>(t);
      if (++idx[tt] < members[tt].size()) break;
      idx[tt] = 0;
      --t;
    }
    if (t < 0) break;
  }
  return out;
}

std::vector<Cell> all_histories(const Universe& u, int tau) {
  std::vector<Cell> out;
  for (const MenuSeq& m : all_menu_sequences(u.size(), tau)) {
    for (const ChoiceSeq& c : choice_sequences(m)) out.push_back(Cell{m, c});
  }
  return out;
}

}  // namespace cdrum
