#pragma once

#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace catvar::cli {

enum class Command { catenoid, lambda0, ms, threshold, annulus, oval };
enum class Format { json, csv };

struct Sweep {
  double from;
  double to;
  int count;
};

struct RunConfig {
  Command command = Command::lambda0;
  std::optional<std::string> input_path;
  std::optional<std::string> output_path;
  Format format = Format::json;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;  // defaults merged in
  std::map<std::string, int> grid;           // defaults merged in
  std::optional<Sweep> sweep;

  // command-specific
  double scale = 1.0;
  double offset = 0.0;
  double slab_lower = -1.0;
  double slab_upper = 1.0;
  bool slab_given = false;
  double apex = 0.0;
  std::optional<double> lower_length;
  std::optional<double> upper_length;
  std::optional<double> catenoid_scale;  // annulus: generate catenoid data
  bool random_data = false;              // annulus: seeded random adapted data
  bool projected = false;                // annulus: random projected data instead
  std::optional<std::string> data_output;
  std::optional<std::vector<double>> ellipse;  // oval: semi-axes
};

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kBadConfig = 2;
inline constexpr int kBadInput = 3;
inline constexpr int kNumerical = 4;

// Parses argv-style arguments (without the program name). Throws
// ConfigurationError on unknown flags, unknown --tol/--grid keys,
// nonpositive tolerances and grid entries below their minimum. Returns
// nullopt after printing help to `out`.
std::optional<RunConfig> parse_command_line(const std::vector<std::string>& args,
                                            std::ostream& out);

// Runs the command and returns the emitted artifact text.
std::string execute(const RunConfig& config);

int exit_code_for(const std::exception& e);

// Full pipeline: parse, execute, write to --output (atomically) or `out`.
// Errors go to `err` as a one-line JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace catvar::cli
