#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "matchsim/report.hpp"

namespace matchsim {

namespace {

template <typename T>
void append_number(std::string& line, T value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  line.append(buf.data(), ptr);
}

template <typename T>
T parse_field(std::string_view field, std::size_t line, std::size_t column, const char* name) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
    throw CsvError(line, column, std::string("cannot parse ") + name + " from '" +
                                     std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::size_t write_csv(std::span<const SweepRow> rows, std::ostream& out) {
  std::string text = kCsvHeader;
  text += '\n';
  for (const auto& row : rows) {
    append_number(text, row.n);
    text += ',';
    append_number(text, row.k);
    text += ',';
    append_number(text, row.rho);
    text += ',';
    append_number(text, row.trial);
    text += ',';
    append_number(text, row.seed);
    text += ',';
    append_number(text, row.deviators);
    text += ',';
    append_number(text, row.ratio);
    text += '\n';
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  return text.size();
}

std::size_t write_csv(std::span<const SweepRow> rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  const std::size_t bytes = write_csv(rows, out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
  return bytes;
}

std::vector<SweepRow> read_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw CsvError(1, 0, "missing header");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) {
    throw CsvError(1, 0, "expected header '" + std::string(kCsvHeader) + "'");
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::array<std::string_view, 7> fields;
    std::size_t count = 0;
    std::string_view rest = line;
    for (;;) {
      const auto comma = rest.find(',');
      if (count == fields.size()) {
        throw CsvError(line_no, count + 1, "too many columns (expected 7)");
      }
      fields[count++] = rest.substr(0, comma);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (count != fields.size()) {
      throw CsvError(line_no, count, "expected 7 columns, found " + std::to_string(count));
    }

    SweepRow row;
    row.n = parse_field<std::size_t>(fields[0], line_no, 1, "n");
    row.k = parse_field<std::size_t>(fields[1], line_no, 2, "k");
    row.rho = parse_field<double>(fields[2], line_no, 3, "rho");
    row.trial = parse_field<std::size_t>(fields[3], line_no, 4, "trial");
    row.seed = parse_field<std::uint64_t>(fields[4], line_no, 5, "seed");
    row.deviators = parse_field<std::size_t>(fields[5], line_no, 6, "D");
    row.ratio = parse_field<double>(fields[6], line_no, 7, "ratio");

    if (row.n == 0) throw CsvError(line_no, 1, "n must be at least 1");
    if (row.k == 0) throw CsvError(line_no, 2, "k must be at least 1");
    if (!std::isfinite(row.rho) || row.rho < 0.0) {
      throw CsvError(line_no, 3, "rho must be finite and non-negative");
    }
    if (row.deviators > row.n) throw CsvError(line_no, 6, "D exceeds n");
    if (!(row.ratio >= 0.0 && row.ratio <= 1.0)) {
      throw CsvError(line_no, 7, "ratio out of range [0, 1]");
    }
    if (row.ratio != static_cast<double>(row.deviators) / static_cast<double>(row.n)) {
      throw CsvError(line_no, 7, "ratio does not equal D/n");
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  try {
    return read_csv(in);
  } catch (const CsvError& e) {
    throw CsvError(e.line(), e.column(), e.detail(), path.string());
  }
}

}  // namespace matchsim
