#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "qkr/cli.hpp"
#include "qkr/io.hpp"
#include "qkr/parallel.hpp"

namespace qkr::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct Grid {
  std::string command;
  ordered_json base;
  std::vector<std::pair<std::string, ordered_json>> axes;
  std::size_t runs = 1;
  ordered_json raw;
};

Grid load_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open grid file " + path.string());
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("cannot parse grid " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError("grid must be a JSON object");
  Grid g;
  g.raw = j;
  for (const auto& [key, value] : j.items()) {
    if (key == "command" && value.is_string()) {
      g.command = value.get<std::string>();
    } else if (key == "base" && value.is_object()) {
      g.base = value;
    } else if (key == "axes" && value.is_object()) {
      for (const auto& [name, values] : value.items()) {
        if (!values.is_array() || values.empty()) throw ValidationError("axis '" + name + "' must be a non-empty array");
        g.axes.emplace_back(name, values);
        g.runs *= values.size();
      }
    } else {
      throw ValidationError("unknown or malformed grid key '" + key + "'");
    }
  }
  if (g.command.empty() || g.command == "sweep") throw ValidationError("grid needs a 'command' other than sweep");
  if (g.base.is_null()) g.base = ordered_json::object();
  return g;
}

/// Parameters of run `index`; the last axis varies fastest.
ordered_json run_params(const Grid& g, std::size_t index) {
  ordered_json p = g.base;
  std::vector<std::size_t> digits(g.axes.size());
  for (std::size_t a = g.axes.size(); a-- > 0;) {
    const std::size_t size = g.axes[a].second.size();
    digits[a] = index % size;
    index /= size;
  }
  for (std::size_t a = 0; a < g.axes.size(); ++a) p[g.axes[a].first] = g.axes[a].second[digits[a]];
  return p;
}

std::string run_name(std::size_t index) {
  std::ostringstream s;
  s << "run_" << std::setw(4) << std::setfill('0') << index;
  return s.str();
}

std::vector<std::string> run_args(const Grid& g, const ordered_json& params, const std::filesystem::path& dir) {
  std::vector<std::string> args{"qkr", "--out-dir=" + dir.string(), g.command};
  for (const auto& [key, value] : params.items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + key);
      continue;
    }
    std::string joined;
    for (const auto& tok : json_tokens(key, value)) joined += (joined.empty() ? "" : ",") + tok;
    args.push_back("--" + key + "=" + joined);
  }
  return args;
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return io::format_double(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
  return quoted + "\"";
}

struct RunResult {
  int code = 0;
  bool reused = false;
  json summary;
  std::string error;
};

}  // namespace

Command add_sweep(CLI::App& root) {
  struct Opts {
    std::string grid;
    int jobs = 1;
    bool fresh = false;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("sweep", "Cartesian parameter grid over one subcommand, resumable");
  app->add_option("--grid", o->grid, "grid JSON: {command, base, axes}")->required()->check(CLI::ExistingFile);
  app->add_option("--jobs", o->jobs, "concurrent runs");
  app->add_flag("--fresh", o->fresh, "ignore completed runs from a previous invocation");
  return {app, [o](RunContext& ctx) {
            const Grid g = load_grid(o->grid);
            auto results = parallel_map<RunResult>(g.runs, o->jobs, [&](std::size_t i) {
              RunResult r;
              const auto params = run_params(g, i);
              const auto dir = ctx.out_dir / run_name(i);
              const auto record = dir / "sweep_run.json";
              if (!o->fresh && std::filesystem::exists(record)) {
                try {
                  const json prev = io::read_json(record);
                  if (prev.at("command") == g.command && prev.at("params") == json(params)) {
                    r.reused = true;
                    r.summary = prev.at("summary");
                    return r;
                  }
                } catch (const std::exception&) {
                  // Unreadable record: rerun.
                }
              }
              std::filesystem::remove(record);
              std::ostringstream sink, errors;
              r.code = dispatch(run_args(g, params, dir), sink, errors, &r.summary);
              r.error = errors.str();
              if (r.code == kExitOk) {
                io::write_json(record, json{{"command", g.command}, {"params", params}, {"summary", r.summary}});
              }
              return r;
            });

            // Summary columns: axes, then the union of scalar summary keys.
            std::set<std::string> keys;
            for (const auto& r : results) {
              for (const auto& [k, v] : r.summary.items()) {
                if (!v.is_structured()) keys.insert(k);
              }
            }
            std::ostringstream csv;
            csv << "run";
            for (const auto& [name, values] : g.axes) csv << ',' << name;
            for (const auto& k : keys) csv << ',' << k;
            csv << ",status\n";
            json runs = json::array();
            int failed = 0, reused = 0, worst = kExitOk;
            for (std::size_t i = 0; i < results.size(); ++i) {
              const auto& r = results[i];
              const auto params = run_params(g, i);
              const std::string status = r.code == kExitOk ? "ok" : "exit_" + std::to_string(r.code);
              csv << i;
              for (const auto& [name, values] : g.axes) csv << ',' << csv_cell(json(params[name]));
              for (const auto& k : keys) csv << ',' << (r.summary.contains(k) ? csv_cell(r.summary[k]) : "");
              csv << ',' << status << '\n';
              ctx.out << run_name(i) << ' ' << status << (r.reused ? " (reused)" : "") << '\n';
              if (r.code != kExitOk) {
                ++failed;
                worst = std::max(worst, r.code);
                ctx.err << run_name(i) << ": " << r.error;
              }
              if (r.reused) ++reused;
              runs.push_back({{"run", run_name(i)}, {"params", params}, {"status", status}});
            }
            std::filesystem::create_directories(ctx.out_dir);
            std::ofstream(ctx.out_dir / "sweep.csv", std::ios::binary) << csv.str();
            io::write_json(ctx.out_dir / "sweep_manifest.json",
                           json{{"grid", json::parse(g.raw.dump())}, {"runs", runs}});
            if (worst == kExitNumericalGuard) throw NumericalGuardError(std::to_string(failed) + " sweep runs aborted");
            if (failed > 0) throw ValidationError(std::to_string(failed) + " sweep runs failed");
            return json{{"runs", g.runs}, {"reused", reused}};
          }};
}

}  // namespace qkr::cli
