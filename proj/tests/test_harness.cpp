#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "tmimo/harness.hpp"

using namespace tmimo;

namespace {

RunConfig small_config() {
  RunConfig cfg;
  cfg.link.code_length = 768;
  cfg.snr_db = {6.0, 8.0};
  cfg.ter = {2e-3};
  cfg.modes = {ClipMode::kExact, ClipMode::kSuDapdc};
  cfg.selective_decoding = false;
  cfg.frames = 4;
  cfg.max_iterations = 3;
  cfg.seed = 17;
  return cfg;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::string csv_of(const Report& r) {
  std::ostringstream out;
  write_csv(r, out);
  return out.str();
}

}  // namespace

TEST_CASE("config text parsing") {
  std::istringstream in(
      "# campaign\n"
      "m_t = 2\n"
      "m_r = 3\n"
      "constellation = qpsk\n"
      "code_length = 512   # trailing comment\n"
      "snr_db = 7, 8,9\n"
      "ter = 2e-3,1e-4\n"
      "mode = exact, su_dapdc\n"
      "w = 2\n"
      "decoding = full\n"
      "max_iterations = 4\n"
      "frames = 12\n"
      "seed = 42\n"
      "out = report.jsonl\n"
      "format = jsonl\n");
  const auto cfg = parse_config(in);
  CHECK(cfg.link.m_t == 2);
  CHECK(cfg.link.m_r == 3);
  CHECK(cfg.link.constellation == "qpsk");
  CHECK(cfg.link.code_length == 512);
  CHECK(cfg.snr_db == std::vector<double>{7.0, 8.0, 9.0});
  CHECK(cfg.ter == std::vector<double>{2e-3, 1e-4});
  CHECK(cfg.modes == std::vector<ClipMode>{ClipMode::kExact, ClipMode::kSuDapdc});
  CHECK(cfg.window == 2);
  CHECK_FALSE(cfg.selective_decoding);
  CHECK(cfg.max_iterations == 4);
  CHECK(cfg.frames == 12);
  CHECK(cfg.seed == 42);
  CHECK(cfg.out_path == "report.jsonl");
  CHECK(cfg.format == ReportFormat::kJsonLines);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config errors") {
  RunConfig cfg;
  CHECK_THROWS_AS(apply_setting(cfg, "colour", "blue"), std::invalid_argument);
  CHECK_THROWS_AS(apply_setting(cfg, "frames", "ten"), std::invalid_argument);
  CHECK_THROWS_AS(apply_setting(cfg, "snr_db", "7,x"), std::invalid_argument);
  CHECK_THROWS_AS(apply_setting(cfg, "mode", "turbo"), std::invalid_argument);
  CHECK_THROWS_AS(apply_setting(cfg, "decoding", "half"), std::invalid_argument);
  std::istringstream bad("frames 10\n");
  CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);
  cfg.frames = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.link.code_length = 100;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK_THROWS_AS(load_config_file("/nonexistent/cfg.txt"), std::runtime_error);
}

TEST_CASE("single frame smoke run") {
  RunConfig cfg = small_config();
  cfg.snr_db = {7.0};
  cfg.modes = {ClipMode::kExact};
  cfg.frames = 1;
  const auto report = run_experiment(cfg);
  CHECK(report.rows.size() >= 1);
  CHECK(report.rows.size() <= cfg.max_iterations);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    CHECK(report.rows[i].iteration == i + 1);
    CHECK(report.rows[i].frames == 1);
  }
}

TEST_CASE("reports are deterministic and independent of execution order") {
  const auto cfg = small_config();
  const auto a = run_experiment(cfg, Execution::kParallel);
  const auto b = run_experiment(cfg, Execution::kParallel);
  const auto c = run_experiment(cfg, Execution::kSerial);
  CHECK(csv_of(a) == csv_of(b));
  CHECK(csv_of(a) == csv_of(c));
  CHECK(metadata_json(a) == metadata_json(c));
  auto other = cfg;
  other.seed = 18;
  CHECK(csv_of(run_experiment(other)) != csv_of(a));
}

TEST_CASE("aggregation equals a recomputation from per-frame stats") {
  const auto report = run_experiment(small_config());
  REQUIRE(report.cells.size() == 4);
  std::size_t row = 0;
  for (const auto& cell : report.cells) {
    std::size_t longest = 0;
    for (const auto& f : cell.frames) longest = std::max(longest, f.size());
    for (std::size_t i = 0; i < longest; ++i, ++row) {
      REQUIRE(row < report.rows.size());
      const auto& r = report.rows[row];
      double ber = 0.0, est = 0.0, nodes = 0.0, betas = 0.0, nrwc = 0.0;
      for (const auto& f : cell.frames) {
        const auto& s = i < f.size() ? f[i] : f.back();
        ber += s.ber_true;
        est += s.ber_estimate;
        nodes += static_cast<double>(s.visited_nodes);
        betas += static_cast<double>(s.beta_stores);
        if (i < f.size()) nrwc += static_cast<double>(s.non_rwc_count);
      }
      const double n = static_cast<double>(cell.frames.size());
      CHECK(r.snr_db == cell.snr_db);
      CHECK(r.mode == to_string(cell.mode));
      CHECK(r.iteration == i + 1);
      CHECK(r.ber_true == doctest::Approx(ber / n).epsilon(1e-14));
      CHECK(r.ber_est == doctest::Approx(est / n).epsilon(1e-14));
      CHECK(r.visited_nodes_cum == doctest::Approx(nodes / n).epsilon(1e-14));
      CHECK(r.beta_stores_cum == doctest::Approx(betas / n).epsilon(1e-14));
      CHECK(r.non_rwc == doctest::Approx(nrwc / n).epsilon(1e-14));
    }
  }
  CHECK(row == report.rows.size());
}

TEST_CASE("stopped frames keep cumulative curves flat and add no non-rwc bits") {
  CellTrace cell;
  cell.mode = ClipMode::kSuPdc;
  IterationStats s0{0, 0.1, 0.2, 100, 10, 50, false};
  IterationStats s1{1, 0.01, 0.02, 150, 15, 20, true};
  IterationStats t0{0, 0.3, 0.4, 120, 10, 50, false};
  IterationStats t1{1, 0.2, 0.3, 200, 20, 40, false};
  IterationStats t2{2, 0.001, 0.0, 260, 25, 10, true};
  cell.frames = {{s0, s1}, {t0, t1, t2}};
  const auto rows = aggregate_cell(cell);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2].visited_nodes_cum == doctest::Approx((150 + 260) / 2.0));
  CHECK(rows[2].ber_true == doctest::Approx((0.02 + 0.0) / 2.0));
  CHECK(rows[0].non_rwc == doctest::Approx(50.0));
  CHECK(rows[1].non_rwc == doctest::Approx((20 + 40) / 2.0));
  CHECK(rows[2].non_rwc == doctest::Approx(10 / 2.0));
  CHECK(rows[2].beta_stores_cum == doctest::Approx((15 + 25) / 2.0));
}

TEST_CASE("empty campaign gives a header-only csv") {
  Report empty;
  std::ostringstream out;
  write_csv(empty, out);
  CHECK(out.str() == std::string(kCsvHeader) + "\n");
}

TEST_CASE("one cell with two iterations gives two rows") {
  RunConfig cfg = small_config();
  cfg.snr_db = {2.0};
  cfg.ter = {1e-4};
  cfg.modes = {ClipMode::kSuPdc};
  cfg.frames = 1;
  cfg.max_iterations = 2;
  const auto report = run_experiment(cfg);
  const auto text = csv_of(report);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

TEST_CASE("csv and json lines agree field by field") {
  const auto report = run_experiment(small_config());
  std::istringstream csv(csv_of(report));
  std::ostringstream js;
  write_json_lines(report, js);
  std::istringstream jl(js.str());

  std::string header;
  std::getline(csv, header);
  const auto names = split(header, ',');
  CHECK(names.size() == 10);
  std::string cline, jline;
  std::size_t rows = 0;
  while (std::getline(csv, cline)) {
    REQUIRE(std::getline(jl, jline));
    const auto fields = split(cline, ',');
    const auto obj = nlohmann::json::parse(jline);
    REQUIRE(fields.size() == names.size());
    REQUIRE(obj.size() == names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto& v = obj.at(names[i]);
      if (v.is_string())
        CHECK(fields[i] == v.get<std::string>());
      else
        CHECK(std::stod(fields[i]) == v.get<double>());
    }
    ++rows;
  }
  CHECK_FALSE(std::getline(jl, jline));
  CHECK(rows == report.rows.size());
}

TEST_CASE("numbers round trip at full precision") {
  for (double v : {0.1, 1.0 / 3.0, 2e-3, 123456789.125, 0.0, 5e-324, -7.25e300}) {
    const auto text = format_number(v);
    double back = 1.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    CHECK(back == v);
  }
}

TEST_CASE("report files and metadata are written") {
  const auto dir = std::filesystem::temp_directory_path() / "tmimo_harness_test";
  std::filesystem::create_directories(dir);
  RunConfig cfg = small_config();
  cfg.snr_db = {8.0};
  cfg.frames = 2;
  const auto report = run_experiment(cfg);
  const auto path = (dir / "r.csv").string();
  emit_report(report, path, ReportFormat::kCsv);
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  CHECK(first == kCsvHeader);
  std::ifstream meta(path + ".meta.json");
  const auto j = nlohmann::json::parse(meta);
  CHECK(j.at("seed") == 17);
  CHECK(j.at("version") == kVersion);
  CHECK(j.at("snr_convention") == kSnrConvention);
  CHECK(j.at("mode").size() == 2);
  CHECK_THROWS_AS(emit_report(report, (dir / "missing" / "r.csv").string(), ReportFormat::kCsv), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("approximate demapping is cheaper than exact at the same seed") {
  RunConfig cfg;
  cfg.link.code_length = 4608;
  cfg.snr_db = {9.0};
  cfg.ter = {2e-3};
  cfg.modes = {ClipMode::kExact, ClipMode::kSuDapdc};
  cfg.selective_decoding = false;
  cfg.frames = 1;
  cfg.seed = 3;
  const auto report = run_experiment(cfg);
  const auto& exact = report.cells[0].frames[0];
  const auto& approx = report.cells[1].frames[0];
  REQUIRE(exact.size() >= 2);
  const std::size_t n = std::min(exact.size(), approx.size());
  for (std::size_t q = 0; q < n; ++q) CHECK(approx[q].visited_nodes < exact[q].visited_nodes);
}
