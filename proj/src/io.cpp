#include "qkr/io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>

#include "qkr/errors.hpp"

namespace qkr::io {
namespace {

static_assert(std::endian::native == std::endian::little, "raw snapshots assume a little-endian host");

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
  return out;
}

template <class T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ValidationError("truncated raw snapshot");
  return value;
}

}  // namespace

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw ValidationError("table row has the wrong number of columns");
  rows.push_back(std::move(row));
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", value);
  return buf.data();
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Table& table) {
  auto out = open_out(path);
  write_csv(out, table);
}

Table series_table(const ObservableSeries& series, const std::string& suffix) {
  series.validate();
  Table table;
  table.columns.push_back("t");
  std::vector<const std::vector<double>*> cols;
  const std::pair<const char*, const std::vector<double>*> named[] = {
      {"p_mean", &series.p_mean}, {"e_mean", &series.e_mean}, {"norm", &series.norm}};
  for (const auto& [name, column] : named) {
    if (column->empty()) continue;
    table.columns.push_back(std::string(name) + suffix);
    cols.push_back(column);
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::vector<double> row{static_cast<double>(series.times[i])};
    for (const auto* column : cols) row.push_back((*column)[i]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

nlohmann::json snapshot_json(const BlochWaveState& state) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : state.samples()) samples.push_back({s.real(), s.imag()});
  return {{"n_grid", state.n_grid()},
          {"beta", state.beta()},
          {"drift_offset", state.drift_offset()},
          {"samples", std::move(samples)}};
}

BlochWaveState snapshot_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n_grid").get<std::size_t>();
    const auto& raw = j.at("samples");
    if (raw.size() != n) throw ValidationError("snapshot sample count does not match n_grid");
    std::vector<cplx> samples;
    samples.reserve(n);
    for (const auto& pair : raw) samples.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    return BlochWaveState(std::move(samples), j.at("beta").get<double>(), j.at("drift_offset").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed snapshot: ") + e.what());
  }
}

void write_raw_snapshot(const std::filesystem::path& path, const BlochWaveState& state) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out.write("QKRS", 4);
  put<std::uint64_t>(out, state.n_grid());
  put<double>(out, state.beta());
  put<double>(out, state.drift_offset());
  for (const auto& s : state.samples()) {
    put<double>(out, s.real());
    put<double>(out, s.imag());
  }
}

BlochWaveState read_raw_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || std::memcmp(magic.data(), "QKRS", 4) != 0) throw ValidationError("not a raw snapshot");
  const auto n = get<std::uint64_t>(in);
  if (n > (std::uint64_t{1} << 32)) throw ValidationError("raw snapshot grid too large");
  const double beta = get<double>(in);
  const double drift = get<double>(in);
  std::vector<cplx> samples(n);
  for (auto& s : samples) {
    const double re = get<double>(in);
    s = {re, get<double>(in)};
  }
  return BlochWaveState(std::move(samples), beta, drift);
}

nlohmann::json classification_json(const SqrRegime& regime, double slope) {
  nlohmann::json j{{"ell", regime.ell},
                   {"beta", regime.beta},
                   {"v", regime.v},
                   {"class", to_string(regime.classification)},
                   {"D", slope}};
  if (regime.classification == SqrClass::Drifting) {
    j["q"] = nullptr;
  } else {
    j["q"] = regime.q;
  }
  return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

}  // namespace qkr::io
