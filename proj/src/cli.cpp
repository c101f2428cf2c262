#include "matchsim/cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "matchsim/matching.hpp"
#include "matchsim/report.hpp"
#include "matchsim/sweep.hpp"
#include "matchsim/verify.hpp"

namespace matchsim::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  for (;;) {
    const auto pos = s.find(sep);
    parts.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) return parts;
    s.remove_prefix(pos + 1);
  }
}

template <typename T>
T parse_number(std::string_view text, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError(std::string("invalid ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::size_t> ladder_values() {
  auto values = default_n_ladder();
  for (std::size_t extra : {500, 600, 800, 1000, 1500, 2000, 3000, 4000, 5000}) {
    values.push_back(extra);
  }
  return values;
}

const char* kGridHelp =
    "Grids: --n accepts a:b:ladder (the ladder 5,10,20,35,50,75,100,150,200,300,400,"
    "500,600,800,1000,1500,... clipped to [a,b] with both ends kept), a:b:step, or a "
    "comma list. --k and --rho take comma lists.";

struct ColorScheme {
  bool enabled = false;
  std::string error(const std::string& s) const {
    return enabled ? "\x1b[31m" + s + "\x1b[0m" : s;
  }
};

int sweep_command(const std::map<std::string, std::string>& flags, std::ostream& out,
                  std::ostream& err) {
  auto get = [&flags](const std::string& key, const std::string& fallback) {
    auto it = flags.find(key);
    return it == flags.end() ? fallback : it->second;
  };

  SweepConfig config;
  config.n_values = parse_size_grid(get("n", "5:400:ladder"));
  config.k_values = parse_size_grid(get("k", "10,15,20,40"));
  config.rho_values = parse_real_list(get("rho", "0.05,1.0,3.0"));
  config.trials = parse_number<std::size_t>(get("trials", "50"), "trials");
  config.master_seed = parse_number<std::uint64_t>(get("seed", "0"), "seed");
  config.workers = parse_number<std::size_t>(get("workers", "0"), "workers");
  const std::string out_path = get("out", "");
  if (out_path.empty()) throw UsageError("sweep needs --out");
  const bool quiet = get("quiet", "false") == "true";
  try {
    validate(config);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  std::size_t last_percent = 101;
  ProgressSink progress;
  if (!quiet) {
    progress = [&err, &last_percent](std::size_t done, std::size_t total) {
      const std::size_t percent = done * 100 / total;
      if (percent == last_percent && done != total) return;
      last_percent = percent;
      err << "\rsweep: " << done << '/' << total << " cells (" << percent << "%)";
      if (done == total) err << '\n';
      err.flush();
    };
  }
  const auto rows = run_sweep(config, progress);
  const std::filesystem::path path(out_path);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::size_t bytes = write_csv(rows, path);
  out << "wrote " << rows.size() << " rows (" << bytes << " bytes) to " << out_path << '\n';
  return 0;
}

int plot_command(const std::string& in_path, const std::string& out_path,
                 const std::string& series, const std::string& panel,
                 const std::vector<std::string>& fixes, bool log_y, const std::string& title,
                 std::ostream& out) {
  auto parse_key = [](const std::string& key) {
    if (key == "k") return PlotKey::k;
    if (key == "rho") return PlotKey::rho;
    throw UsageError("plot key must be 'k' or 'rho', got '" + key + "'");
  };
  PlotSpec spec;
  spec.series = parse_key(series);
  if (!panel.empty()) spec.panel = parse_key(panel);
  spec.log_y = log_y;
  if (!title.empty()) spec.title = title;
  for (const auto& fix : fixes) {
    const auto eq = fix.find('=');
    if (eq == std::string::npos) throw UsageError("--fix expects key=value, got '" + fix + "'");
    const std::string key = fix.substr(0, eq);
    const std::string_view value = std::string_view(fix).substr(eq + 1);
    if (key == "k") {
      spec.fix_k = parse_number<std::size_t>(value, "k");
    } else if (key == "rho") {
      spec.fix_rho = parse_number<double>(value, "rho");
    } else {
      throw UsageError("--fix key must be 'k' or 'rho', got '" + key + "'");
    }
  }

  const auto rows = read_csv(std::filesystem::path(in_path));
  if (rows.empty()) throw std::runtime_error(in_path + ": no rows to plot");
  const auto svg = render_plot(aggregate(rows), spec);
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + out_path + "' for writing");
  file << svg;
  if (!file.flush()) throw std::runtime_error("write to '" + out_path + "' failed");
  out << "wrote " << out_path << '\n';
  return 0;
}

int verify_command(const OracleConfig& config, std::ostream& out) {
  const auto report = run_oracle_suite(config);
  for (const auto& check : report.checks) {
    out << (check.failures ? "FAIL " : "PASS ") << check.name << " (" << check.cases
        << " cases, " << check.failures << " failures)\n";
    if (check.failures) out << "minimal counterexample:\n" << check.counterexample;
  }
  return report.ok() ? 0 : 1;
}

}  // namespace

std::vector<std::size_t> parse_size_grid(std::string_view text) {
  text = trim(text);
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("grid '" + std::string(text) + "' needs a:b:ladder or a:b:step");
    const auto lo = parse_number<std::size_t>(parts[0], "grid start");
    const auto hi = parse_number<std::size_t>(parts[1], "grid end");
    if (lo == 0 || hi < lo) throw UsageError("grid '" + std::string(text) + "' needs 1 <= a <= b");
    std::vector<std::size_t> values;
    if (parts[2] == "ladder") {
      values.push_back(lo);
      for (auto v : ladder_values()) {
        if (v > lo && v < hi) values.push_back(v);
      }
      if (hi != lo) values.push_back(hi);
    } else {
      const auto step = parse_number<std::size_t>(parts[2], "grid step");
      if (step == 0) throw UsageError("grid step must be positive");
      for (std::size_t v = lo; v <= hi; v += step) values.push_back(v);
    }
    return values;
  }
  std::vector<std::size_t> values;
  for (auto part : split(text, ',')) values.push_back(parse_number<std::size_t>(part, "size"));
  return values;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> values;
  for (auto part : split(trim(text), ',')) values.push_back(parse_number<double>(part, "number"));
  return values;
}

std::map<std::string, std::string> parse_config(std::string_view text) {
  std::map<std::string, std::string> entries;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = trim(line.substr(0, hash));
    }
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    entries[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
  }
  return entries;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ColorScheme colors;
  colors.enabled = &err == &std::cerr && ::isatty(STDERR_FILENO) && !std::getenv("NO_COLOR");

  CLI::App app{"Measures how often recipients can gain by truncating their list under "
               "proposer-proposing deferred acceptance."};
  app.name("matchsim");
  app.require_subcommand(1);

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write a CSV");
  sweep->footer(kGridHelp);
  std::map<std::string, std::string> sweep_flags;
  std::string config_path;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"n", "market sizes (default 5:400:ladder)"},
           {"k", "proposer list lengths (default 10,15,20,40)"},
           {"rho", "preference correlations (default 0.05,1.0,3.0)"},
           {"trials", "markets per (n, k, rho) cell (default 50)"},
           {"seed", "master seed (default 0)"},
           {"workers", "worker threads, 0 = all cores (default 0)"},
           {"out", "CSV destination"}}) {
    sweep->add_option_function<std::string>(
        "--" + name, [&sweep_flags, name](const std::string& v) { sweep_flags[name] = v; }, help);
  }
  sweep->add_flag_callback("--quiet", [&sweep_flags] { sweep_flags["quiet"] = "true"; },
                           "no progress on stderr");
  sweep->add_option("--config", config_path,
                    "key = value file with any of: n k rho trials seed workers out");

  auto* plot = app.add_subcommand("plot", "Aggregate a sweep CSV into an SVG trend plot");
  std::string in_path, plot_out, series = "k", panel, title;
  std::vector<std::string> fixes;
  bool log_y = false;
  plot->add_option("--in", in_path, "sweep CSV")->required();
  plot->add_option("--out", plot_out, "SVG destination")->required();
  plot->add_option("--series", series, "one line per value of: k | rho (default k)");
  plot->add_option("--panel", panel, "one panel per value of: k | rho");
  plot->add_option("--fix", fixes, "keep only rows with key=value, e.g. rho=1.0 (repeatable)");
  plot->add_flag("--log-y", log_y, "logarithmic y axis");
  plot->add_option("--title", title, "plot title");

  auto* verify = app.add_subcommand("verify", "Run the brute-force oracle checks");
  OracleConfig oracle;
  verify->add_option("--oracle-n", oracle.max_n, "largest market size (default 4)")
      ->check(CLI::Range(std::size_t{1}, kDefaultEnumerationBound));
  verify->add_option("--max-k", oracle.max_k, "largest proposer list (default 3)")
      ->check(CLI::Range(1, 4));
  verify->add_option("--cases", oracle.cases, "number of random markets (default 1000)");
  verify->add_option("--seed", oracle.seed, "seed (default 1)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << colors.error("error: ") << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    if (*sweep) {
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::runtime_error("cannot read config '" + config_path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        static const std::vector<std::string> known = {"n",    "k",       "rho", "trials",
                                                       "seed", "workers", "out", "quiet"};
        for (auto& [key, value] : parse_config(buffer.str())) {
          if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw UsageError("config '" + config_path + "': unknown key '" + key + "'");
          }
          sweep_flags.try_emplace(key, value);  // command-line flags win
        }
      }
      return sweep_command(sweep_flags, out, err);
    }
    if (*plot) return plot_command(in_path, plot_out, series, panel, fixes, log_y, title, out);
    if (*verify) return verify_command(oracle, out);
  } catch (const UsageError& e) {
    err << colors.error("error: ") << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << colors.error("error: ") << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace matchsim::cli
