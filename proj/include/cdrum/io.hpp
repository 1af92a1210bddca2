#pragma once

#include <optional>
#include <string>
#include <variant>

#include "cdrum/core.hpp"
#include "cdrum/parametric.hpp"
#include "cdrum/recovery.hpp"

namespace cdrum {

struct Dataset {
  NumericMode mode = NumericMode::Float;
  std::variant<JointRule<double>, JointRule<Rational>> rule;

  const Universe& universe() const {
    return std::visit([](const auto& r) -> const Universe& { return r.u; }, rule);
  }
  int periods() const {
    return std::visit([](const auto& r) { return r.periods; }, rule);
  }
};

// Canonical JSON dataset: keys sorted, probabilities as strings, zero cells
// omitted, observations in canonical menu-sequence order. save-then-load is
// the identity, and load-then-save is the identity on canonical files.
Dataset parse_dataset(const std::string& text, std::optional<NumericMode> force_mode = {});
Dataset load_dataset(const std::string& path, std::optional<NumericMode> force_mode = {});

template <class Num>
std::string serialize_dataset(const JointRule<Num>& rule);

template <class Num>
void save_dataset(const JointRule<Num>& rule, const std::string& path);

ObservationDomain parse_domain(const std::string& text, const Universe& u);
ObservationDomain load_domain(const std::string& path, const Universe& u);

template <class Num>
std::string serialize_representation(const CdrumRepresentation<Num>& rep);

std::string serialize_habit_params(const HabitLogitParams& params);
std::string serialize_learning_params(const LearningLogitParams& params);

// Either model, keyed by the "model" field.
std::variant<HabitLogitParams, LearningLogitParams> parse_params(const std::string& text);
std::variant<HabitLogitParams, LearningLogitParams> load_params(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace cdrum
