#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace parlab::lab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitBudget = 3;

const std::vector<std::string>& command_names();

struct OutputFile {
  std::string name;
  std::string bytes;
};

// A validated command ready to run. Parsing does every schema and budget
// check, so run() only computes.
struct Plan {
  nlohmann::ordered_json flags;  // design decisions in effect
  std::function<std::vector<OutputFile>()> run;
};

// Throws SchemaError, BudgetExceeded or TooLarge.
Plan plan_command(const std::string& command, const nlohmann::json& params, std::uint64_t seed);

struct Invocation {
  std::string command;
  std::filesystem::path config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
};

// Reads and validates the config, writes manifest.json, runs, writes the
// outputs and rewrites the manifest with end time and output digests.
// Returns the process exit code; diagnostics go to err.
int run_invocation(const Invocation& inv, std::ostream& err);

// `lab <command> --config path.json [--seed N] [--out dir]`.
int lab_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace parlab::lab
