#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "matchsim/sweep.hpp"

namespace matchsim {

/// Thrown by read_csv; `line` and `column` are 1-based (column 0 = whole line).
class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, std::size_t column, const std::string& detail,
           const std::string& source = {})
      : std::runtime_error((source.empty() ? std::string{} : source + ": ") + "line " +
                           std::to_string(line) +
                           (column ? ", column " + std::to_string(column) : std::string{}) +
                           ": " + detail),
        line_(line),
        column_(column),
        detail_(detail) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

inline constexpr const char* kCsvHeader = "n,k,rho,trial,seed,D,ratio";

/// Header plus one LF-terminated line per row. Floats use the shortest text that
/// round-trips. Returns the number of bytes written.
std::size_t write_csv(std::span<const SweepRow> rows, std::ostream& out);
std::size_t write_csv(std::span<const SweepRow> rows, const std::filesystem::path& path);

std::vector<SweepRow> read_csv(std::istream& in);
std::vector<SweepRow> read_csv(const std::filesystem::path& path);

enum class PlotKey { k, rho };

struct PlotSpec {
  PlotKey series = PlotKey::k;
  // Optional split into side-by-side panels (for example one per rho).
  std::optional<PlotKey> panel;
  std::optional<std::size_t> fix_k;
  std::optional<double> fix_rho;
  bool log_y = false;
  std::string title = "Share of recipients with a useful truncation";
  std::string x_label = "market size n";
  std::string y_label = "D(n)/n";
};

/// Thrown when the spec selects no data.
class PlotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Self-contained SVG 1.1 document: one polyline per series, legend, ticked axes.
/// Output depends only on the arguments.
std::string render_plot(std::span<const AggregateRow> aggregates, const PlotSpec& spec);

}  // namespace matchsim
