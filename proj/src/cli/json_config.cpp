#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "qkr/io.hpp"

namespace qkr::cli {

namespace {

std::string scalar_token(const std::string& key, const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return io::format_double(v.get<double>());
  throw ValidationError("config key '" + key + "' has an unsupported value type");
}

}  // namespace

std::vector<std::string> json_tokens(const std::string& key, const nlohmann::json& value) {
  std::vector<std::string> tokens;
  if (value.is_array()) {
    for (const auto& v : value) tokens.push_back(scalar_token(key, v));
  } else {
    tokens.push_back(scalar_token(key, value));
  }
  return tokens;
}

void apply_json_config(CLI::App& app, const std::filesystem::path& path) {
  nlohmann::json config;
  try {
    config = io::read_json(path);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("cannot parse config " + path.string() + ": " + e.what());
  }
  if (!config.is_object()) throw ValidationError("config " + path.string() + " must be a JSON object");
  for (const auto& [key, value] : config.items()) {
    CLI::Option* opt = key == "config" ? nullptr : app.get_option_no_throw("--" + key);
    if (opt == nullptr) throw ValidationError("unknown config key '" + key + "' for " + app.get_name());
    if (opt->count() > 0) continue;  // command-line flags win
    auto tokens = json_tokens(key, value);
    if (opt->get_type_size_max() == 0) {
      // Flag: only a true value sets it.
      if (tokens.size() != 1 || (tokens[0] != "true" && tokens[0] != "false")) {
        throw ValidationError("config key '" + key + "' expects a boolean");
      }
      if (tokens[0] == "false") continue;
    }
    try {
      opt->add_result(tokens);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ValidationError("config key '" + key + "': " + e.what());
    }
  }
}

nlohmann::json option_values(const CLI::App& app) {
  nlohmann::json j = nlohmann::json::object();
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || name.empty()) continue;
    if (opt->count() > 0) {
      auto r = opt->results();
      j[name] = r.size() == 1 ? nlohmann::json(r[0]) : nlohmann::json(r);
    } else {
      j[name] = opt->get_default_str();
    }
  }
  return j;
}

}  // namespace qkr::cli
