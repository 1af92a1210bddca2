#pragma once

#include <stdexcept>
#include <string>

namespace cdrum {

// Base class for all library errors. Subtypes carry enough context in the
// message to locate the offending cell or constraint.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

class NegativeProbabilityError : public Error {
 public:
  explicit NegativeProbabilityError(const std::string& entry)
      : Error("negative probability at " + entry) {}
};

class NormalizationError : public Error {
 public:
  NormalizationError(const std::string& menu_seq, const std::string& deviation)
      : Error("probabilities for menu sequence " + menu_seq + " do not sum to one (deviation " +
              deviation + ")") {}
};

class ChoiceOutsideMenuError : public Error {
 public:
  explicit ChoiceOutsideMenuError(const std::string& entry)
      : Error("choice outside menu at " + entry) {}
};

class MarginalityViolatedError : public Error {
 public:
  explicit MarginalityViolatedError(const std::string& worst)
      : Error("marginality violated, worst case " + worst) {}
};

class DomainIncompleteError : public Error {
 public:
  explicit DomainIncompleteError(const std::string& missing)
      : Error("domain incomplete, missing menu sequence " + missing) {}
};

class NotCdrumError : public Error {
 public:
  explicit NotCdrumError(const std::string& report)
      : Error("rule is not consistent with consumption dependent random utility: " + report) {}
};

class UniverseTooLargeError : public Error {
 public:
  explicit UniverseTooLargeError(const std::string& what) : Error("universe too large: " + what) {}
};

class SolverStalledError : public Error {
 public:
  explicit SolverStalledError(const std::string& residual)
      : Error("quadratic solver stalled, first-order residual " + residual) {}
};

class PositivityViolatedError : public Error {
 public:
  explicit PositivityViolatedError(const std::string& entry)
      : Error("positivity violated at " + entry) {}
};

class NegativeCapacityError : public Error {
 public:
  explicit NegativeCapacityError(const std::string& edge)
      : Error("negative edge capacity at " + edge) {}
};

class ConservationViolatedError : public Error {
 public:
  explicit ConservationViolatedError(const std::string& node)
      : Error("flow conservation violated at node " + node) {}
};

}  // namespace cdrum
