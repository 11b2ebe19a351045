#pragma once

// JSON ingestion of channels, states, ensembles and constraints, and JSON
// emission of results. Matrices are nested row lists whose entries are
// either real numbers or [re, im] pairs.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holevo/additivity.hpp"
#include "holevo/capacity.hpp"
#include "holevo/experiments.hpp"

namespace holevo {

/// Raw {"d_in", "d_out", "kraus", "tags"?} or a named constructor such as
/// {"kind": "depolarizing", "d": 2, "p": 0.5}. Malformed JSON or missing
/// fields raise kParse.
Channel channel_from_json(std::string_view text);
DensityOperator state_from_json(std::string_view text);
Ensemble ensemble_from_json(std::string_view text);
/// "unconstrained", {"kind": "singleton", "state": ...} or
/// {"kind": "expectation", "observable": ..., "bound": h}.
ConstraintSet constraint_from_json(std::string_view text);

std::string channel_to_json(const Channel& phi);
std::string ensemble_to_json(const Ensemble& e);

struct OutputFormat {
  bool bits = false;                 ///< entropic numbers divided by log 2
  std::optional<double> wall_time;  ///< seconds; omitted when empty
};

std::string to_json(const CapacityResult& r, const OutputFormat& f = {});
std::string to_json(const ChiFunctionResult& r, const OutputFormat& f = {});
std::string to_json(const ConvexClosureResult& r, const OutputFormat& f = {});
std::string to_json(const AdditivityReport& r, const OutputFormat& f = {});
std::string to_json(const std::vector<DiscontinuityRow>& rows, const OutputFormat& f = {});
std::string to_json(const std::vector<SuiteResult>& suites, const OutputFormat& f = {});

/// Rounds to 12 significant digits, the precision of every emitted number.
double round12(double v);

}  // namespace holevo
