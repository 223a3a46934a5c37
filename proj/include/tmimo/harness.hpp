#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tmimo/iterative.hpp"

namespace tmimo {

inline constexpr const char* kVersion = "tmimo 0.1.0";

enum class ReportFormat { kCsv, kJsonLines };

struct RunConfig {
  LinkConfig link;
  std::vector<double> snr_db{7.0};
  std::vector<double> ter{2e-3};
  std::vector<ClipMode> modes{ClipMode::kSuDapdc};
  bool selective_decoding = true;
  std::size_t window = 1;
  std::size_t max_iterations = 5;
  std::size_t frames = 10;
  std::uint64_t seed = 1;
  std::string out_path;
  ReportFormat format = ReportFormat::kCsv;

  void validate() const;
};

/// Applies one `key = value` setting. Throws std::invalid_argument on unknown
/// keys or malformed values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Flat key-value text: one `key = value` per line, `#` starts a comment.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

std::vector<double> parse_number_list(std::string_view text);

struct ReportRow {
  double snr_db = 0.0;
  double ter = 0.0;
  std::string mode;
  std::size_t iteration = 0;  // one based
  double ber_true = 0.0;
  double ber_est = 0.0;
  double visited_nodes_cum = 0.0;
  double beta_stores_cum = 0.0;
  double non_rwc = 0.0;
  std::size_t frames = 0;
};

/// Per-frame statistics of one (snr, ter, mode) cell, kept for audits.
struct CellTrace {
  double snr_db = 0.0;
  double ter = 0.0;
  ClipMode mode = ClipMode::kExact;
  std::vector<std::vector<IterationStats>> frames;
};

struct Report {
  RunConfig config;
  std::string version = kVersion;
  bool inconsistent_config = false;
  std::vector<ReportRow> rows;
  std::vector<CellTrace> cells;
};

/// Mean over frames per iteration. Frames that stopped early repeat their final
/// BER and cumulative counters in later iterations and count zero non-RWC bits.
std::vector<ReportRow> aggregate_cell(const CellTrace& cell);

/// Simulates every (snr, ter, mode) cell. Frame f always sees the same data,
/// channel and noise draws, whatever the cell, worker count or execution order.
Report run_experiment(const RunConfig& cfg, Execution exec = Execution::kParallel);

inline constexpr const char* kCsvHeader =
    "snr_db,ter,mode,iteration,ber_true,ber_est,visited_nodes_cum,beta_stores_cum,non_rwc,frames";

void write_csv(const Report& report, std::ostream& out);
void write_json_lines(const Report& report, std::ostream& out);
/// Config echo, seed, version and SNR convention as one JSON document.
std::string metadata_json(const Report& report);

/// Writes the report to `path` plus `path + ".meta.json"`. Throws std::runtime_error on I/O failure.
void emit_report(const Report& report, const std::string& path, ReportFormat format);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

}  // namespace tmimo
