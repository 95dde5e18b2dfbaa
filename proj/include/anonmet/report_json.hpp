#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "anonmet/asymmetry.hpp"
#include "anonmet/classify.hpp"
#include "anonmet/metrology.hpp"
#include "anonmet/protocol.hpp"
#include "anonmet/states.hpp"

// State-file I/O and report rendering. State files are UTF-8 JSON with
// row-major [re, im] entry pairs; doubles are written shortest-round-trip
// (17 significant digits when needed) so save -> load reproduces the matrix
// bit for bit. Infinite report values are carried as the token "inf".

namespace anonmet {

using Json = nlohmann::json;

// Thrown for malformed input files; `position` is the byte offset when the
// underlying parser provides one.
struct LoadError : std::runtime_error {
  explicit LoadError(const std::string& what, long position = -1)
      : std::runtime_error(what), position(position) {}
  long position;
};

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json state_to_json(const DensityMatrix& rho, const std::optional<StateSpec>& meta = std::nullopt);
// Throws LoadError on malformed input and std::invalid_argument (with the
// offending residual) when the parsed matrix violates a state invariant.
DensityMatrix state_from_json(const Json& j);

void save_state(const std::string& path, const DensityMatrix& rho,
                const std::optional<StateSpec>& meta = std::nullopt);
DensityMatrix load_state(const std::string& path);

Json pair_to_json(const HamiltonianPair& pair);
HamiltonianPair pair_from_json(const Json& j);

// One JSON value per report type; schema_version is bumped on layout changes.
Json to_json(const ClassificationReport& r);
Json to_json(const MeritReport& r, MeritDirection direction);
Json to_json(const ProtocolTranscript& t);
Json to_json(const RobustnessReport& r);
Json to_json(const AttackResult& r);
Json modes_to_json(const ModeDecomposition& d, double completeness_residual);

// Human-readable tables for the same reports.
std::string render(const ClassificationReport& r);
std::string render(const MeritReport& r, MeritDirection direction);
std::string render(const ProtocolTranscript& t);
std::string render(const RobustnessReport& r);
std::string render(const AttackResult& r);
std::string render_modes(const ModeDecomposition& d, double completeness_residual, bool show_matrices);

}  // namespace anonmet
