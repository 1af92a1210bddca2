#include "cdrum/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cdrum {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

Mask parse_menu(const json& arr, const Universe& u, const std::string& where) {
  if (!arr.is_array() || arr.empty()) throw ParseError(where + ": menu must be a nonempty array");
  Mask m = 0;
  for (const auto& item : arr) {
    if (!item.is_string()) throw ParseError(where + ": menu entries must be labels");
    auto idx = u.index_of(item.get<std::string>());
    if (!idx) throw ParseError(where + ": unknown alternative '" + item.get<std::string>() + "'");
    m |= Mask(1) << *idx;
  }
  return m;
}

json menu_to_json(const Universe& u, Mask m) {
  json arr = json::array();
  for (int i = 0; i < u.size(); ++i)
    if (contains(m, i)) arr.push_back(u.label(i));
  return arr;
}

template <class Num>
JointRule<Num> dataset_rule(const json& doc, const Universe& u, int periods) {
  std::vector<std::pair<Cell, Num>> entries;
  if (!doc.contains("observations") || !doc["observations"].is_array())
    throw ParseError("missing observations array");
  for (const auto& obs : doc["observations"]) {
    if (!obs.contains("menus")) throw ParseError("observation without menus");
    const auto& menus_json = obs["menus"];
    if (!menus_json.is_array() || static_cast<int>(menus_json.size()) != periods)
      throw ParseError("observation menus must list one menu per period");
    MenuSeq menus;
    for (const auto& mj : menus_json) menus.menus.push_back(parse_menu(mj, u, "menus"));
    if (!obs.contains("probs") || !obs["probs"].is_array() || obs["probs"].empty())
      throw ParseError("observation " + format_menu_seq(u, menus) +
                       " lists no probabilities");
    for (const auto& pj : obs["probs"]) {
      if (!pj.contains("choices") || !pj.contains("p"))
        throw ParseError("probability entry needs choices and p");
      ChoiceSeq choices;
      for (const auto& cj : pj["choices"]) {
        auto idx = u.index_of(cj.get<std::string>());
        if (!idx) throw ParseError("unknown alternative '" + cj.get<std::string>() + "'");
        choices.choices.push_back(static_cast<std::uint8_t>(*idx));
      }
      if (choices.periods() != menus.periods())
        throw ParseError("choices must list one alternative per period");
      Cell cell{menus, choices};
      if (!cell.compatible()) throw ChoiceOutsideMenuError(format_cell(u, cell));
      entries.push_back({cell, parse_number<Num>(pj["p"].get<std::string>())});
    }
  }
  return validate_rjcr(u, periods, entries, Tolerance<Num>::standard());
}

}  // namespace

Dataset parse_dataset(const std::string& text, std::optional<NumericMode> force_mode) {
  json doc = parse_json(text);
  if (!doc.contains("alternatives")) throw ParseError("missing alternatives");
  std::vector<std::string> labels;
  for (const auto& a : doc["alternatives"]) labels.push_back(a.get<std::string>());
  Universe u(labels);
  if (!doc.contains("periods") || !doc["periods"].is_number_integer())
    throw ParseError("missing periods");
  int periods = doc["periods"].get<int>();
  if (periods < 1) throw ParseError("periods must be at least 1");

  NumericMode mode = NumericMode::Float;
  if (doc.contains("numeric_mode")) {
    std::string m = doc["numeric_mode"].get<std::string>();
    if (m == "rational")
      mode = NumericMode::Rational;
    else if (m == "float")
      mode = NumericMode::Float;
    else
      throw ParseError("numeric_mode must be 'float' or 'rational'");
  }
  if (force_mode) mode = *force_mode;

  Dataset ds;
  ds.mode = mode;
  if (mode == NumericMode::Rational)
    ds.rule = dataset_rule<Rational>(doc, u, periods);
  else
    ds.rule = dataset_rule<double>(doc, u, periods);
  return ds;
}

Dataset load_dataset(const std::string& path, std::optional<NumericMode> force_mode) {
  return parse_dataset(read_file(path), force_mode);
}

template <class Num>
std::string serialize_dataset(const JointRule<Num>& rule) {
  json doc;
  doc["alternatives"] = rule.u.labels();
  doc["periods"] = rule.periods;
  doc["numeric_mode"] = NumTraits<Num>::exact ? "rational" : "float";
  json observations = json::array();
  for (const MenuSeq& m : rule.domain.observed) {
    json obs;
    json menus = json::array();
    for (Mask menu : m.menus) menus.push_back(menu_to_json(rule.u, menu));
    obs["menus"] = menus;
    json probs = json::array();
    for (const ChoiceSeq& c : choice_sequences(m)) {
      Num v = rule.at(Cell{m, c});
      if (v == NumTraits<Num>::zero()) continue;
      json entry;
      json choices = json::array();
      for (std::uint8_t x : c.choices) choices.push_back(rule.u.label(x));
      entry["choices"] = choices;
      entry["p"] = format_number(v);
      probs.push_back(entry);
    }
    obs["probs"] = probs;
    observations.push_back(obs);
  }
  doc["observations"] = observations;
  return doc.dump(2) + "\n";
}

template std::string serialize_dataset<double>(const JointRule<double>&);
template std::string serialize_dataset<Rational>(const JointRule<Rational>&);

template <class Num>
void save_dataset(const JointRule<Num>& rule, const std::string& path) {
  write_file(path, serialize_dataset(rule));
}

template void save_dataset<double>(const JointRule<double>&, const std::string&);
template void save_dataset<Rational>(const JointRule<Rational>&, const std::string&);

ObservationDomain parse_domain(const std::string& text, const Universe& u) {
  json doc = parse_json(text);
  ObservationDomain d;
  if (!doc.contains("periods")) throw ParseError("domain file missing periods");
  d.periods = doc["periods"].get<int>();
  if (!doc.contains("observed") || !doc["observed"].is_array() || doc["observed"].empty())
    throw ParseError("domain file must list observed menu products");
  for (const auto& seq : doc["observed"]) {
    if (!seq.is_array() || static_cast<int>(seq.size()) != d.periods)
      throw ParseError("each observed product must list one menu per period");
    MenuSeq m;
    for (const auto& mj : seq) m.menus.push_back(parse_menu(mj, u, "observed"));
    d.observed.insert(m);
  }
  return d;
}

ObservationDomain load_domain(const std::string& path, const Universe& u) {
  return parse_domain(read_file(path), u);
}

template <class Num>
std::string serialize_representation(const CdrumRepresentation<Num>& rep) {
  const OrderSpace& space = OrderSpace::get(rep.u.size());
  json doc;
  doc["alternatives"] = rep.u.labels();
  doc["periods"] = rep.periods();
  doc["numeric_mode"] = NumTraits<Num>::exact ? "rational" : "float";
  json nu;
  for (std::size_t r = 0; r < rep.nu.weight.size(); ++r) {
    if (rep.nu.weight[r] == NumTraits<Num>::zero()) continue;
    nu[space.format(r, rep.u)] = format_number(rep.nu.weight[r]);
  }
  doc["nu"] = nu;
  json transitions = json::array();
  for (const auto& t : rep.transitions) {
    json tj;
    tj["degree"] = t.degree;
    tj["state_independent"] = t.state_independent;
    json kernels = json::array();
    for (const auto& [hist, dist] : t.kernel) {
      json kj;
      json choices = json::array();
      for (std::uint8_t x : hist.choices.choices) choices.push_back(rep.u.label(x));
      kj["choices"] = choices;
      if (!hist.menus.menus.empty()) {
        json cells = json::array();
        for (Mask m : hist.menus.menus) cells.push_back(menu_to_json(rep.u, m));
        kj["cells"] = cells;
      }
      json dj;
      for (std::size_t r = 0; r < dist.weight.size(); ++r) {
        if (dist.weight[r] == NumTraits<Num>::zero()) continue;
        dj[space.format(r, rep.u)] = format_number(dist.weight[r]);
      }
      kj["dist"] = dj;
      kernels.push_back(kj);
    }
    tj["kernels"] = kernels;
    transitions.push_back(tj);
  }
  doc["transitions"] = transitions;
  return doc.dump(2) + "\n";
}

template std::string serialize_representation<double>(const CdrumRepresentation<double>&);
template std::string serialize_representation<Rational>(const CdrumRepresentation<Rational>&);

namespace {

json utility_map(const Universe& u, const std::vector<double>& values) {
  json out;
  for (int i = 0; i < u.size(); ++i) out[u.label(i)] = format_number(values[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<double> parse_utility_map(const json& obj, const Universe& u,
                                      const std::string& where) {
  std::vector<double> out(static_cast<std::size_t>(u.size()), 0.0);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    auto idx = u.index_of(it.key());
    if (!idx) throw ParseError(where + ": unknown alternative '" + it.key() + "'");
    out[static_cast<std::size_t>(*idx)] = parse_number<double>(it.value().get<std::string>());
  }
  return out;
}

}  // namespace

std::string serialize_habit_params(const HabitLogitParams& params) {
  json doc;
  doc["model"] = "habit";
  doc["alternatives"] = params.u.labels();
  doc["outside"] = params.u.label(params.outside);
  doc["v"] = utility_map(params.u, params.v);
  json c;
  for (int i = 0; i < params.u.size(); ++i) {
    json arr = json::array();
    for (double ci : params.c[static_cast<std::size_t>(i)]) arr.push_back(format_number(ci));
    c[params.u.label(i)] = arr;
  }
  doc["c"] = c;
  return doc.dump(2) + "\n";
}

std::string serialize_learning_params(const LearningLogitParams& params) {
  json doc;
  doc["model"] = "learning";
  doc["alternatives"] = params.u.labels();
  doc["outside"] = params.u.label(params.outside);
  doc["mean"] = utility_map(params.u, params.mean);
  doc["realized"] = utility_map(params.u, params.realized);
  return doc.dump(2) + "\n";
}

std::variant<HabitLogitParams, LearningLogitParams> parse_params(const std::string& text) {
  json doc = parse_json(text);
  if (!doc.contains("alternatives") || !doc.contains("model"))
    throw ParseError("params file needs model and alternatives");
  std::vector<std::string> labels;
  for (const auto& a : doc["alternatives"]) labels.push_back(a.get<std::string>());
  Universe u(labels);
  int outside = 0;
  if (doc.contains("outside")) {
    auto idx = u.index_of(doc["outside"].get<std::string>());
    if (!idx) throw ParseError("unknown outside option");
    outside = *idx;
  }
  std::string model = doc["model"].get<std::string>();
  if (model == "habit") {
    HabitLogitParams params;
    params.u = u;
    params.outside = outside;
    params.v = parse_utility_map(doc.at("v"), u, "v");
    params.c.assign(static_cast<std::size_t>(u.size()), {});
    for (auto it = doc.at("c").begin(); it != doc.at("c").end(); ++it) {
      auto idx = u.index_of(it.key());
      if (!idx) throw ParseError("c: unknown alternative '" + it.key() + "'");
      for (const auto& v : it.value())
        params.c[static_cast<std::size_t>(*idx)].push_back(
            parse_number<double>(v.get<std::string>()));
    }
    return params;
  }
  if (model == "learning") {
    LearningLogitParams params;
    params.u = u;
    params.outside = outside;
    params.mean = parse_utility_map(doc.at("mean"), u, "mean");
    params.realized = parse_utility_map(doc.at("realized"), u, "realized");
    return params;
  }
  throw ParseError("unknown model '" + model + "'");
}

std::variant<HabitLogitParams, LearningLogitParams> load_params(const std::string& path) {
  return parse_params(read_file(path));
}

}  // namespace cdrum
