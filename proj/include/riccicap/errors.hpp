#ifndef RICCICAP_ERRORS_HPP
#define RICCICAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace riccicap {

// Bad arguments, mismatched grids, out-of-range parameters.
struct InvalidInput : std::invalid_argument {
  explicit InvalidInput(const std::string& msg) : std::invalid_argument(msg) {}
};

// phi <= 0 (or non-finite state) where the metric must be positive:
// neckpinch/collapse detection.
struct DegenerateMetric : std::runtime_error {
  int node;
  DegenerateMetric(const std::string& msg, int node_index)
      : std::runtime_error(msg), node(node_index) {}
};

// Pinching functionals need R > 0 at every node.
struct PinchingUndefined : std::runtime_error {
  explicit PinchingUndefined(const std::string& msg) : std::runtime_error(msg) {}
};

// A preset whose parameters violate the positivity screen.
struct PresetRejected : InvalidInput {
  explicit PresetRejected(const std::string& msg) : InvalidInput(msg) {}
};

// Power-law fits need enough dynamic range.
struct FitWindowError : std::runtime_error {
  explicit FitWindowError(const std::string& msg) : std::runtime_error(msg) {}
};

// A convergence study aborted because one of its runs failed.
struct StudyError : std::runtime_error {
  explicit StudyError(const std::string& msg) : std::runtime_error(msg) {}
};

// Persisted trace/snapshot files that do not match the schema.
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace riccicap

#endif
