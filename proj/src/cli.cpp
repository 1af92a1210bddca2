#include "cdrum/cli.hpp"

#include <chrono>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "cdrum/fixtures.hpp"
#include "cdrum/io.hpp"
#include "cdrum/lp_test.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cdrum {

using nlohmann::json;

namespace {

struct VerdictFailure {};  // marks exit code 1 paths

json axiom_report_json(const AxiomReport& r) {
  json j;
  j["axiom"] = r.axiom;
  j["holds"] = r.holds;
  j["tolerance"] = r.tolerance;
  j["violations"] = r.violation_count;
  json w = json::array();
  for (const auto& witness : r.witnesses) {
    w.push_back({{"site", witness.site}, {"lhs", witness.lhs}, {"rhs", witness.rhs}});
  }
  j["witnesses"] = w;
  return j;
}

json cell_json(const Universe& u, const Cell& cell) {
  json menus = json::array();
  for (Mask m : cell.menus.menus) {
    json menu = json::array();
    for (int i = 0; i < u.size(); ++i)
      if (contains(m, i)) menu.push_back(u.label(i));
    menus.push_back(menu);
  }
  json choices = json::array();
  for (std::uint8_t x : cell.choices.choices) choices.push_back(u.label(x));
  return json{{"menus", menus}, {"choices", choices}};
}

Universe letter_universe(int n) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(std::string(1, static_cast<char>('a' + i)));
  return Universe(labels);
}

template <class Num>
Tolerance<Num> tolerance_from(std::optional<double> flag) {
  Tolerance<Num> tol = Tolerance<Num>::standard();
  if (flag && !NumTraits<Num>::exact) tol.eps = Num(*flag);
  return tol;
}

JointRule<double> to_float_rule(const JointRule<Rational>& p) {
  JointRule<double> out;
  out.u = p.u;
  out.periods = p.periods;
  out.domain = p.domain;
  for (const auto& [cell, value] : p.prob) out.prob[cell] = to_double(value);
  return out;
}

JointRule<double> dataset_as_float(const Dataset& ds) {
  if (std::holds_alternative<JointRule<double>>(ds.rule))
    return std::get<JointRule<double>>(ds.rule);
  return to_float_rule(std::get<JointRule<Rational>>(ds.rule));
}

template <class Num>
json mobius_json(const MobiusTable<Num>& q) {
  json cells = json::array();
  for (const auto& [cell, value] : q.value) {
    json c = cell_json(q.u, cell);
    c["q"] = format_number(value);
    cells.push_back(c);
  }
  return json{{"depth", q.depth}, {"cells", cells}};
}

template <class Num>
json check_json(const JointRule<Num>& p, const Tolerance<Num>& tol) {
  json out;
  std::vector<AxiomReport> reports;
  reports.push_back(check_complete_monotonicity(mobius_inverse(p), tol));
  reports.push_back(check_marginality(p, tol));
  reports.push_back(check_recursivity(p, tol));
  reports.push_back(check_regularity(p, tol));
  reports.push_back(check_increasing_differences(p, tol));
  reports.push_back(check_choice_set_independence(p, tol));
  json ax = json::array();
  bool cm = reports[0].holds, marg = reports[1].holds, csi = reports[5].holds;
  for (const auto& r : reports) ax.push_back(axiom_report_json(r));
  out["axioms"] = ax;
  out["cdrum"] = cm && marg;
  out["si_cdrum"] = cm && marg && csi;
  out["numeric_mode"] = NumTraits<Num>::exact ? "rational" : "float";
  return out;
}

template <class Num>
json test_json(const TestOutcome<Num>& outcome, const std::string& form, std::ostream& err) {
  json out;
  out["form"] = form;
  out["feasible"] = outcome.feasible;
  out["statistic"] = format_number(outcome.statistic);
  out["threshold"] = outcome.threshold;
  out["method"] = outcome.method;
  out["omega"] = outcome.omega;
  err << "test " << form << " solved in " << outcome.seconds << "s\n";
  return out;
}

json stationary_json(const HabitLogitParams& params) {
  std::vector<double> dist = stationary_distribution(params);
  const Universe& u = params.u;
  json stationary, statics;
  double denom = 0.0;
  std::vector<double> statically(static_cast<std::size_t>(u.size()));
  for (int i = 0; i < u.size(); ++i) denom += std::exp(params.v[static_cast<std::size_t>(i)]);
  for (int i = 0; i < u.size(); ++i)
    statically[static_cast<std::size_t>(i)] = std::exp(params.v[static_cast<std::size_t>(i)]) / denom;
  for (int i = 0; i < u.size(); ++i) {
    stationary[u.label(i)] = format_number(dist[static_cast<std::size_t>(i)]);
    statics[u.label(i)] = format_number(statically[static_cast<std::size_t>(i)]);
  }
  return json{{"stationary", stationary}, {"static_shares", statics}};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"consumption dependent random utility toolkit"};
  app.require_subcommand(1);

  std::string input, limited, outside_label, params_path, output_path;
  std::string numeric = "auto", form = "facet", flow_rows = "limited", convention = "auto";
  std::string model = "habit", mode = "mixture", fixture_name = "example2";
  std::optional<double> tolerance_flag;
  int threads = 0, sizes_n = 0, depth = 0, k_components = 3, periods = 2, universe_n = 3;
  int agents = 1000, trials = 100;
  std::uint64_t seed = 1;
  double epsilon = 0.1;

  app.add_option("--threads", threads, "worker threads (0 = library default)");

  auto add_common = [&](CLI::App* cmd, bool needs_input) {
    auto* opt = cmd->add_option("--input", input, "dataset JSON path");
    if (needs_input) opt->required();
    cmd->add_option("--numeric", numeric, "numeric mode: float|rational|auto")
        ->check(CLI::IsMember({"float", "rational", "auto"}));
    cmd->add_option("--tolerance", tolerance_flag, "absolute tolerance (float mode)");
  };

  auto* validate_cmd = app.add_subcommand("validate", "validate a dataset");
  add_common(validate_cmd, true);

  auto* mobius_cmd = app.add_subcommand("mobius", "emit the signed lattice coefficients");
  add_common(mobius_cmd, true);
  mobius_cmd->add_option("--depth", depth, "truncation depth (default: all periods)");

  auto* check_cmd = app.add_subcommand("check", "run the axiom battery");
  add_common(check_cmd, true);

  auto* recover_cmd = app.add_subcommand("recover", "recover an explicit representation");
  add_common(recover_cmd, true);

  auto* test_cmd = app.add_subcommand("test", "cone feasibility hypothesis test");
  add_common(test_cmd, true);
  test_cmd->add_option("--form", form, "vertex|facet")->check(CLI::IsMember({"vertex", "facet"}));
  test_cmd->add_option("--limited", limited, "domain file restricting observed menu products");
  test_cmd->add_option("--flow-rows", flow_rows, "facet flow rows: limited|full")
      ->check(CLI::IsMember({"limited", "full"}));
  test_cmd->add_option("--convention", convention, "vertex rows: tuple|triple|auto")
      ->check(CLI::IsMember({"tuple", "triple", "auto"}));

  auto* sizes_cmd = app.add_subcommand("sizes", "matrix row counts by universe size");
  sizes_cmd->add_option("--n", sizes_n, "number of alternatives")->required();

  auto* fit_cmd = app.add_subcommand("fit", "identify dynamic logit parameters");
  add_common(fit_cmd, true);
  fit_cmd->add_option("--model", model, "habit|learning")
      ->check(CLI::IsMember({"habit", "learning"}));
  fit_cmd->add_option("--outside", outside_label, "outside option label")->required();

  auto* longrun_cmd = app.add_subcommand("predict-longrun", "stationary market shares");
  longrun_cmd->add_option("--params", params_path, "habit params JSON (as emitted by fit)");
  add_common(longrun_cmd, false);
  longrun_cmd->add_option("--outside", outside_label, "outside option (with --input)");

  auto* classify_cmd = app.add_subcommand("classify", "two-period model classification");
  add_common(classify_cmd, true);

  auto* simulate_cmd = app.add_subcommand("simulate", "generate datasets");
  add_common(simulate_cmd, false);
  simulate_cmd->add_option("--mode", mode, "mixture|perturb|sample|fixture")
      ->check(CLI::IsMember({"mixture", "perturb", "sample", "fixture"}));
  simulate_cmd->add_option("--n", universe_n, "universe size (mixture mode)");
  simulate_cmd->add_option("--periods", periods, "number of periods");
  simulate_cmd->add_option("--k", k_components, "mixture components");
  simulate_cmd->add_option("--seed", seed, "random seed");
  simulate_cmd->add_option("--epsilon", epsilon, "perturbation magnitude");
  simulate_cmd->add_option("--agents", agents, "trajectories per menu product");
  simulate_cmd->add_option("--params", params_path, "logit params to sample from");
  simulate_cmd->add_option("--fixture", fixture_name,
                           "example1|example2|example3|example4 (fixture mode)");
  simulate_cmd->add_option("--output", output_path, "write dataset here instead of stdout");

  auto* oracle_cmd = app.add_subcommand("oracle", "vertex/facet/axioms agreement harness");
  oracle_cmd->add_option("--trials", trials, "number of trials");
  oracle_cmd->add_option("--seed", seed, "random seed");
  oracle_cmd->add_option("--n", universe_n, "universe size (at most 3)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help() << std::flush;
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 2;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  std::optional<NumericMode> force_mode;
  if (numeric == "float") force_mode = NumericMode::Float;
  if (numeric == "rational") force_mode = NumericMode::Rational;

  auto emit = [&](const json& doc) { out << doc.dump(2) << "\n"; };

  try {
    if (validate_cmd->parsed()) {
      Dataset ds = load_dataset(input, force_mode);
      json doc;
      doc["valid"] = true;
      doc["alternatives"] = ds.universe().labels();
      doc["periods"] = ds.periods();
      doc["numeric_mode"] = ds.mode == NumericMode::Rational ? "rational" : "float";
      std::visit(
          [&](const auto& rule) {
            using Num = std::decay_t<decltype(rule.prob.begin()->second)>;
            auto tol = tolerance_from<Num>(tolerance_flag);
            doc["worst_normalization_deviation"] = format_number(validate_rule(rule, tol));
            doc["observed_products"] = rule.domain.observed.size();
          },
          ds.rule);
      emit(doc);
      return 0;
    }

    if (mobius_cmd->parsed()) {
      Dataset ds = load_dataset(input, force_mode);
      json doc;
      std::visit(
          [&](const auto& rule) {
            using Num = std::decay_t<decltype(rule.prob.begin()->second)>;
            auto tol = tolerance_from<Num>(tolerance_flag);
            int d = depth == 0 ? rule.periods : depth;
            doc = d == rule.periods ? mobius_json(mobius_inverse(rule))
                                    : mobius_json(truncated_mobius(rule, d, tol));
          },
          ds.rule);
      emit(doc);
      return 0;
    }

    if (check_cmd->parsed()) {
      Dataset ds = load_dataset(input, force_mode);
      json doc;
      bool holds = false;
      std::visit(
          [&](const auto& rule) {
            using Num = std::decay_t<decltype(rule.prob.begin()->second)>;
            auto tol = tolerance_from<Num>(tolerance_flag);
            doc = check_json(rule, tol);
            holds = doc["cdrum"].get<bool>();
          },
          ds.rule);
      emit(doc);
      return holds ? 0 : 1;
    }

    if (recover_cmd->parsed()) {
      Dataset ds = load_dataset(input, force_mode);
      std::string doc;
      std::visit(
          [&](const auto& rule) {
            using Num = std::decay_t<decltype(rule.prob.begin()->second)>;
            auto tol = tolerance_from<Num>(tolerance_flag);
            auto rep = recover_representation(rule, tol);
            doc = serialize_representation(rep);
          },
          ds.rule);
      out << doc;
      return 0;
    }

    if (test_cmd->parsed()) {
      Dataset ds = load_dataset(input, force_mode);
      json doc;
      bool feasible = false;
      std::visit(
          [&](auto rule) {
            if (!limited.empty()) {
              ObservationDomain dom = load_domain(limited, rule.u);
              rule = restrict_rule(rule, dom);
            }
            if (form == "vertex") {
              VertexTestOptions options;
              if (convention == "tuple") options.convention = VertexConvention::FullTuple;
              if (convention == "triple") options.convention = VertexConvention::PerChoiceTriple;
              auto outcome = test_cdrum_vertex(rule, options);
              feasible = outcome.feasible;
              doc = test_json(outcome, form, err);
            } else {
              auto outcome = test_cdrum_facet(rule, flow_rows == "full");
              feasible = outcome.feasible;
              doc = test_json(outcome, form, err);
            }
          },
          ds.rule);
      emit(doc);
      return feasible ? 0 : 1;
    }

    if (sizes_cmd->parsed()) {
      auto [e_rows, f_rows] = matrix_sizes(sizes_n);
      emit(json{{"E_rows", e_rows}, {"F_rows", f_rows}});
      return 0;
    }

    if (fit_cmd->parsed()) {
      Dataset ds = load_dataset(input, force_mode);
      JointRule<double> rule = dataset_as_float(ds);
      auto idx = rule.u.index_of(outside_label);
      if (!idx) throw ParseError("unknown outside option '" + outside_label + "'");
      auto ccs = to_conditional(rule, tolerance_from<double>(tolerance_flag));
      if (model == "habit")
        out << serialize_habit_params(identify_habit_logit(ccs, *idx));
      else
        out << serialize_learning_params(identify_learning_logit(ccs, *idx));
      return 0;
    }

    if (longrun_cmd->parsed()) {
      HabitLogitParams params;
      if (!params_path.empty()) {
        auto loaded = load_params(params_path);
        if (!std::holds_alternative<HabitLogitParams>(loaded))
          throw ParseError("predict-longrun needs habit params");
        params = std::get<HabitLogitParams>(loaded);
      } else if (!input.empty()) {
        Dataset ds = load_dataset(input, force_mode);
        JointRule<double> rule = dataset_as_float(ds);
        auto idx = rule.u.index_of(outside_label);
        if (!idx) throw ParseError("predict-longrun from data needs --outside");
        params = identify_habit_logit(
            to_conditional(rule, tolerance_from<double>(tolerance_flag)), *idx);
      } else {
        throw ParseError("predict-longrun needs --params or --input");
      }
      emit(stationary_json(params));
      return 0;
    }

    if (classify_cmd->parsed()) {
      Dataset ds = load_dataset(input, force_mode);
      JointRule<double> rule = dataset_as_float(ds);
      auto ccs = to_conditional(rule, tolerance_from<double>(tolerance_flag));
      double eps = tolerance_flag.value_or(kFloatTolerance);
      ClassifyResult result = classify(ccs, eps);
      emit(json{{"consumption_dependent", result.consumption_dependent},
                {"learning", result.learning},
                {"habit_formation", result.habit_formation},
                {"variety", result.variety}});
      return result.consumption_dependent ? 0 : 1;
    }

    if (simulate_cmd->parsed()) {
      std::string payload;
      bool rational = numeric == "rational";
      if (mode == "mixture") {
        Universe u = letter_universe(universe_n);
        if (rational)
          payload = serialize_dataset(
              random_mixture<Rational>(u, periods, k_components, seed).rule);
        else
          payload =
              serialize_dataset(random_mixture<double>(u, periods, k_components, seed).rule);
      } else if (mode == "perturb") {
        if (input.empty()) throw ParseError("perturb mode needs --input");
        Dataset ds = load_dataset(input, force_mode);
        std::visit(
            [&](const auto& rule) {
              using Num = std::decay_t<decltype(rule.prob.begin()->second)>;
              payload = serialize_dataset(perturb(rule, Num(epsilon), seed));
            },
            ds.rule);
      } else if (mode == "sample") {
        ObservationDomain dom;
        ConditionalSystem<double> ccs;
        if (!params_path.empty()) {
          auto loaded = load_params(params_path);
          if (std::holds_alternative<HabitLogitParams>(loaded)) {
            const auto& p = std::get<HabitLogitParams>(loaded);
            dom = full_domain(p.u, periods);
            ccs = eval_habit_logit(p, dom, periods);
          } else {
            const auto& p = std::get<LearningLogitParams>(loaded);
            dom = full_domain(p.u, periods);
            ccs = eval_learning_logit(p, dom, periods);
          }
          payload = serialize_dataset(sample_choices<double>(ccs, dom, agents, seed));
        } else if (!input.empty()) {
          Dataset ds = load_dataset(input, force_mode);
          JointRule<double> rule = dataset_as_float(ds);
          auto rep = recover_representation(rule, tolerance_from<double>(tolerance_flag));
          payload = serialize_dataset(
              sample_choices<double>(rep, rule.domain, agents, seed));
        } else {
          throw ParseError("sample mode needs --params or --input");
        }
      } else {  // fixture
        if (rational) {
          if (fixture_name == "example1")
            payload = serialize_dataset(fixtures::waning_self_control<Rational>());
          else if (fixture_name == "example2")
            payload = serialize_dataset(fixtures::perfect_habit<Rational>());
          else if (fixture_name == "example3")
            payload = serialize_dataset(fixtures::persistent_state<Rational>());
          else if (fixture_name == "example4")
            payload = serialize_dataset(fixtures::state_dependent_pair<Rational>());
          else
            throw ParseError("unknown fixture '" + fixture_name + "'");
        } else {
          if (fixture_name == "example1")
            payload = serialize_dataset(fixtures::waning_self_control<double>());
          else if (fixture_name == "example2")
            payload = serialize_dataset(fixtures::perfect_habit<double>());
          else if (fixture_name == "example3")
            payload = serialize_dataset(fixtures::persistent_state<double>());
          else if (fixture_name == "example4")
            payload = serialize_dataset(fixtures::state_dependent_pair<double>());
          else
            throw ParseError("unknown fixture '" + fixture_name + "'");
        }
      }
      if (output_path.empty())
        out << payload;
      else
        write_file(output_path, payload);
      return 0;
    }

    if (oracle_cmd->parsed()) {
      OracleReport report = oracle_agreement(letter_universe(universe_n), trials, seed);
      json detail = json::array();
      for (const auto& trial : report.detail) {
        detail.push_back(json{{"kind", trial.kind},
                              {"vertex", trial.vertex},
                              {"facet", trial.facet},
                              {"facet_full", trial.facet_full},
                              {"axioms", trial.axioms},
                              {"agree", trial.agree}});
      }
      emit(json{{"trials", report.trials},
                {"agreements", report.agreements},
                {"all_agree", report.all_agree},
                {"detail", detail}});
      return report.all_agree ? 0 : 1;
    }
  } catch (const MarginalityViolatedError& e) {
    emit(json{{"error", {{"type", "MarginalityViolated"}, {"message", e.what()}}}});
    err << e.what() << "\n";
    return 1;
  } catch (const NotCdrumError& e) {
    emit(json{{"error", {{"type", "NotCdrum"}, {"message", e.what()}}}});
    err << e.what() << "\n";
    return 1;
  } catch (const PositivityViolatedError& e) {
    emit(json{{"error", {{"type", "PositivityViolated"}, {"message", e.what()}}}});
    err << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    emit(json{{"error", {{"type", "InputError"}, {"message", e.what()}}}});
    err << e.what() << "\n";
    return 2;
  }

  err << app.help();
  return 2;
}

}  // namespace cdrum
