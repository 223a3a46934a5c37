#include "tmimo/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace tmimo {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  while (!text.empty()) {
    const auto pos = text.find(',');
    const auto item = trim(text.substr(0, pos));
    if (!item.empty()) out.push_back(item);
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return out;
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw std::invalid_argument("not a number: " + std::string(s));
  return v;
}

template <typename T>
T parse_unsigned(std::string_view s) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw std::invalid_argument("not an integer: " + std::string(s));
  return v;
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (auto item : split_list(text)) out.push_back(parse_double(item));
  return out;
}

void RunConfig::validate() const {
  link.validate();
  if (snr_db.empty() || ter.empty() || modes.empty()) throw std::invalid_argument("config: empty snr/ter/mode list");
  for (double t : ter) (void)ter_threshold(t);
  if (frames < 1) throw std::invalid_argument("config: frames must be >= 1");
  if (max_iterations < 1) throw std::invalid_argument("config: max_iterations must be >= 1");
  if (window < 1) throw std::invalid_argument("config: w must be >= 1");
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "m_t") cfg.link.m_t = parse_unsigned<std::size_t>(value);
  else if (key == "m_r") cfg.link.m_r = parse_unsigned<std::size_t>(value);
  else if (key == "constellation") cfg.link.constellation = std::string(value);
  else if (key == "code_length" || key == "k") cfg.link.code_length = parse_unsigned<std::size_t>(value);
  else if (key == "snr_db" || key == "snr") cfg.snr_db = parse_number_list(value);
  else if (key == "ter") cfg.ter = parse_number_list(value);
  else if (key == "mode") {
    cfg.modes.clear();
    for (auto item : split_list(value)) cfg.modes.push_back(parse_clip_mode(item));
  } else if (key == "w" || key == "window") cfg.window = parse_unsigned<std::size_t>(value);
  else if (key == "decoding") {
    if (value == "full") cfg.selective_decoding = false;
    else if (value == "selective") cfg.selective_decoding = true;
    else throw std::invalid_argument("decoding must be full or selective");
  } else if (key == "max_iterations" || key == "iterations") cfg.max_iterations = parse_unsigned<std::size_t>(value);
  else if (key == "frames") cfg.frames = parse_unsigned<std::size_t>(value);
  else if (key == "seed") cfg.seed = parse_unsigned<std::uint64_t>(value);
  else if (key == "out") cfg.out_path = std::string(value);
  else if (key == "format") {
    if (value == "csv") cfg.format = ReportFormat::kCsv;
    else if (value == "jsonl" || value == "json-lines") cfg.format = ReportFormat::kJsonLines;
    else throw std::invalid_argument("format must be csv or jsonl");
  } else
    throw std::invalid_argument("unknown config key: " + std::string(key));
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = line;
    if (const auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
    sv = trim(sv);
    if (sv.empty()) continue;
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(base, sv.substr(0, eq), sv.substr(eq + 1));
  }
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in, std::move(base));
}

std::vector<ReportRow> aggregate_cell(const CellTrace& cell) {
  std::vector<ReportRow> rows;
  std::size_t longest = 0;
  for (const auto& f : cell.frames) longest = std::max(longest, f.size());
  const double n = static_cast<double>(cell.frames.size());
  for (std::size_t i = 0; i < longest; ++i) {
    ReportRow row;
    row.snr_db = cell.snr_db;
    row.ter = cell.ter;
    row.mode = std::string(to_string(cell.mode));
    row.iteration = i + 1;
    row.frames = cell.frames.size();
    for (const auto& f : cell.frames) {
      const bool running = i < f.size();
      const IterationStats& s = f[std::min(i, f.size() - 1)];
      row.ber_true += s.ber_true;
      row.ber_est += s.ber_estimate;
      row.visited_nodes_cum += static_cast<double>(s.visited_nodes);
      row.beta_stores_cum += static_cast<double>(s.beta_stores);
      // A stopped frame processes no bits, just as its cumulative counters stop growing.
      if (running) row.non_rwc += static_cast<double>(s.non_rwc_count);
    }
    row.ber_true /= n;
    row.ber_est /= n;
    row.visited_nodes_cum /= n;
    row.beta_stores_cum /= n;
    row.non_rwc /= n;
    rows.push_back(row);
  }
  return rows;
}

Report run_experiment(const RunConfig& cfg, Execution exec) {
  cfg.validate();
  Report report;
  report.config = cfg;
  report.inconsistent_config =
      cfg.selective_decoding && std::find(cfg.modes.begin(), cfg.modes.end(), ClipMode::kExact) != cfg.modes.end();

  const Permutation perm =
      Permutation::build(cfg.link.code_length, derive_seed(cfg.seed, 0, Stream::kInterleaver));

  for (double snr : cfg.snr_db)
    for (double ter : cfg.ter)
      for (ClipMode mode : cfg.modes) {
        CellTrace cell;
        cell.snr_db = snr;
        cell.ter = ter;
        cell.mode = mode;
        cell.frames.resize(cfg.frames);
        report.cells.push_back(std::move(cell));
      }

  const std::size_t cells_per_snr = cfg.ter.size() * cfg.modes.size();
  auto simulate_frame = [&](std::size_t f) {
    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
      const double nv = snr_to_noise_var(cfg.snr_db[si], cfg.link.m_t);
      const TransmittedFrame tx = transmit_frame(cfg.link, perm, nv, cfg.seed, f);
      for (std::size_t ci = 0; ci < cells_per_snr; ++ci) {
        CellTrace& cell = report.cells[si * cells_per_snr + ci];
        ReceiverConfig rc;
        rc.mode = cell.mode;
        rc.ter = cell.ter;
        rc.selective_decoding = cfg.selective_decoding;
        rc.window = cfg.window;
        rc.max_iterations = cfg.max_iterations;
        rc.exec = Execution::kSerial;
        cell.frames[f] = run_frame(tx, cfg.link, perm, rc).stats;
      }
    }
  };

  const auto frames = static_cast<std::ptrdiff_t>(cfg.frames);
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t f = 0; f < frames; ++f) simulate_frame(static_cast<std::size_t>(f));
  } else {
    for (std::ptrdiff_t f = 0; f < frames; ++f) simulate_frame(static_cast<std::size_t>(f));
  }

  for (const auto& cell : report.cells) {
    auto rows = aggregate_cell(cell);
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  return report;
}

std::string format_number(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("format_number failed");
  return std::string(buf, p);
}

void write_csv(const Report& report, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : report.rows) {
    out << format_number(r.snr_db) << ',' << format_number(r.ter) << ',' << r.mode << ',' << r.iteration << ','
        << format_number(r.ber_true) << ',' << format_number(r.ber_est) << ',' << format_number(r.visited_nodes_cum)
        << ',' << format_number(r.beta_stores_cum) << ',' << format_number(r.non_rwc) << ',' << r.frames << '\n';
  }
}

void write_json_lines(const Report& report, std::ostream& out) {
  for (const auto& r : report.rows) {
    nlohmann::ordered_json j;
    j["snr_db"] = r.snr_db;
    j["ter"] = r.ter;
    j["mode"] = r.mode;
    j["iteration"] = r.iteration;
    j["ber_true"] = r.ber_true;
    j["ber_est"] = r.ber_est;
    j["visited_nodes_cum"] = r.visited_nodes_cum;
    j["beta_stores_cum"] = r.beta_stores_cum;
    j["non_rwc"] = r.non_rwc;
    j["frames"] = r.frames;
    out << j.dump() << '\n';
  }
}

std::string metadata_json(const Report& report) {
  const RunConfig& c = report.config;
  nlohmann::ordered_json j;
  j["version"] = report.version;
  j["seed"] = c.seed;
  j["m_t"] = c.link.m_t;
  j["m_r"] = c.link.m_r;
  j["constellation"] = c.link.constellation;
  j["code_length"] = c.link.code_length;
  j["snr_db"] = c.snr_db;
  j["ter"] = c.ter;
  std::vector<std::string> modes;
  for (auto m : c.modes) modes.emplace_back(to_string(m));
  j["mode"] = modes;
  j["decoding"] = c.selective_decoding ? "selective" : "full";
  j["w"] = c.window;
  j["max_iterations"] = c.max_iterations;
  j["frames"] = c.frames;
  j["snr_convention"] = kSnrConvention;
  j["inconsistent_config"] = report.inconsistent_config;
  return j.dump(2);
}

void emit_report(const Report& report, const std::string& path, ReportFormat format) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output: " + path);
    if (format == ReportFormat::kCsv)
      write_csv(report, out);
    else
      write_json_lines(report, out);
    if (!out) throw std::runtime_error("write failed: " + path);
  }
  std::ofstream meta(path + ".meta.json", std::ios::binary);
  if (!meta) throw std::runtime_error("cannot open output: " + path + ".meta.json");
  meta << metadata_json(report) << '\n';
  if (!meta) throw std::runtime_error("write failed: " + path + ".meta.json");
}

}  // namespace tmimo
