#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qkr/errors.hpp"

namespace qkr::cli {

/// What a subcommand needs at run time.
struct RunContext {
  std::filesystem::path out_dir;
  std::ostream& out;
  std::ostream& err;
  Diagnostics diag;
};

/// A registered subcommand: `run` writes its outputs under ctx.out_dir and
/// returns a flat JSON summary of scalar results.
struct Command {
  CLI::App* app;
  std::function<nlohmann::json(RunContext&)> run;
};

Command add_classical(CLI::App& root);
Command add_talbot(CLI::App& root);
Command add_sqr(CLI::App& root);
Command add_hqr(CLI::App& root);
Command add_average(CLI::App& root);
Command add_evolve(CLI::App& root);
/// Runs the Cartesian product of a parameter grid, one output directory per run.
Command add_sweep(CLI::App& root);

/// Parses and runs one command line. When `summary` is given it receives the
/// run summary on success.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             nlohmann::json* summary);

/// Fills options of `app` not given on the command line from a JSON object.
/// Throws ValidationError on unknown keys or malformed values.
void apply_json_config(CLI::App& app, const std::filesystem::path& path);

/// Converts a JSON value into CLI tokens for option `key`.
std::vector<std::string> json_tokens(const std::string& key, const nlohmann::json& value);

/// Option values of `app` as JSON strings (given or default).
nlohmann::json option_values(const CLI::App& app);

}  // namespace qkr::cli
