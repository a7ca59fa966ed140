#include "roto/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace roto {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no,
                                        const std::string& source) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  if (quoted) {
    throw ValidationError(source + ":" + std::to_string(line_no) + ": unterminated quote");
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') {
      out.push_back('"');
    }
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

double parse_double(const std::string& text, std::size_t line_no, const std::string& column,
                    const std::string& source) {
  double value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') {
    ++first;
  }
  while (last > first && (last[-1] == ' ' || last[-1] == '\r')) {
    --last;
  }
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ValidationError(source + ":" + std::to_string(line_no) + ": column '" + column +
                          "': not a number: '" + text + "'");
  }
  return value;
}

std::vector<std::string> expected_header(const std::vector<Category>& categories) {
  std::vector<std::string> out = {"player_id", "player_name"};
  for (const auto& c : categories) {
    out.push_back(c.name);
    if (c.kind == CategoryKind::Percentage) {
      out.push_back(c.name + "_volume");
    }
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out += (i ? sep : "") + parts[i];
  }
  return out;
}

void check_schema(const Json& j, const char* what) {
  if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion) {
    throw ValidationError(std::string(what) + ": unsupported schema_version " +
                          j.at("schema_version").dump());
  }
}

Json matrix_to_json(const MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(m(r, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXd matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ValidationError(std::string(what) + ": expected a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ValidationError(std::string(what) + ": ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) {
    throw std::runtime_error("format_double failed");
  }
  return std::string(buf, ptr);
}

PlayerPool read_projections(std::istream& in, const std::vector<Category>& categories,
                            const std::string& source) {
  const auto header = expected_header(categories);
  std::string line;
  std::size_t line_no = 0;
  bool has_tags = false;
  if (!std::getline(in, line)) {
    throw ValidationError(source + ": empty file, expected header");
  }
  ++line_no;
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  auto got = split_csv_line(line, line_no, source);
  if (got.size() == header.size() + 1 && got.back() == "tags") {
    has_tags = true;
    got.pop_back();
  }
  if (got != header) {
    throw ValidationError(source + ":1: header mismatch, expected '" + join(header, ",") +
                          "[,tags]'");
  }

  PlayerPool pool;
  std::unordered_set<std::string> ids;
  const std::size_t width = header.size() + (has_tags ? 1 : 0);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const auto fields = split_csv_line(line, line_no, source);
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    if (fields.size() != width) {
      throw ValidationError(where + "expected " + std::to_string(width) + " fields, got " +
                            std::to_string(fields.size()));
    }
    PlayerProjection p;
    p.id = fields[0];
    p.name = fields[1];
    if (p.id.empty()) {
      throw ValidationError(where + "empty player_id");
    }
    if (!ids.insert(p.id).second) {
      throw ValidationError(where + "duplicate player_id '" + p.id + "'");
    }
    std::size_t col = 2;
    for (const auto& c : categories) {
      const double v = parse_double(fields[col], line_no, header[col], source);
      ++col;
      double vol = 0;
      if (c.kind == CategoryKind::Percentage) {
        vol = parse_double(fields[col], line_no, header[col], source);
        ++col;
        if (v < 0 || v > 1) {
          throw ValidationError(where + "rate for '" + c.name + "' outside [0, 1]: " +
                                fields[col - 2]);
        }
        if (vol < 0) {
          throw ValidationError(where + "negative volume for '" + c.name + "'");
        }
      }
      if (!std::isfinite(v) || !std::isfinite(vol)) {
        throw ValidationError(where + "non-finite value for '" + c.name + "'");
      }
      p.value.push_back(v);
      p.volume.push_back(vol);
    }
    if (has_tags && !fields[col].empty()) {
      std::stringstream ss(fields[col]);
      std::string tag;
      while (std::getline(ss, tag, ';')) {
        if (!tag.empty()) {
          p.tags.push_back(tag);
        }
      }
    }
    pool.push_back(std::move(p));
  }
  return pool;
}

PlayerPool load_projections(const fs::path& path, const std::vector<Category>& categories) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open projections file " + path.string());
  }
  return read_projections(in, categories, path.string());
}

void write_projections(std::ostream& out, const PlayerPool& pool,
                       const std::vector<Category>& categories) {
  validate_pool(pool, categories);
  out << join(expected_header(categories), ",") << ",tags\n";
  for (const auto& p : pool) {
    out << quote_csv(p.id) << ',' << quote_csv(p.name);
    for (std::size_t c = 0; c < categories.size(); ++c) {
      out << ',' << format_double(p.value[c]);
      if (categories[c].kind == CategoryKind::Percentage) {
        out << ',' << format_double(p.volume[c]);
      }
    }
    out << ',' << quote_csv(join(p.tags, ";")) << '\n';
  }
}

void save_projections(const fs::path& path, const PlayerPool& pool,
                      const std::vector<Category>& categories) {
  std::ostringstream ss;
  write_projections(ss, pool, categories);
  write_text(path, ss.str());
}

double league_rate(const PlayerPool& pool, std::size_t category) {
  double made = 0;
  double attempts = 0;
  for (const auto& p : pool) {
    made += p.value.at(category) * p.volume.at(category);
    attempts += p.volume.at(category);
  }
  if (!(attempts > 0)) {
    throw ValidationError("league_rate: no attempts recorded");
  }
  return made / attempts;
}

Json categories_to_json(const std::vector<Category>& categories) {
  Json out = Json::array();
  for (const auto& c : categories) {
    out.push_back({{"name", c.name},
                   {"kind", c.kind == CategoryKind::Counting ? "counting" : "percentage"},
                   {"higher_is_better", c.higher_is_better},
                   {"tau", c.tau}});
  }
  return out;
}

std::vector<Category> categories_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError("categories: expected a non-empty array");
  }
  std::vector<Category> out;
  for (const auto& e : j) {
    Category c;
    c.name = e.at("name").get<std::string>();
    const auto kind = e.value("kind", std::string("counting"));
    if (kind == "counting") {
      c.kind = CategoryKind::Counting;
    } else if (kind == "percentage") {
      c.kind = CategoryKind::Percentage;
    } else {
      throw ValidationError("category '" + c.name + "': unknown kind '" + kind + "'");
    }
    c.higher_is_better = e.value("higher_is_better", true);
    c.tau = e.value("tau", 1.0);
    out.push_back(std::move(c));
  }
  return out;
}

Json league_config_to_json(const LeagueConfig& config) {
  return {{"schema_version", kSchemaVersion},
          {"teams", config.teams},
          {"roster_size", config.roster_size},
          {"categories", categories_to_json(config.categories)},
          {"rho", matrix_to_json(config.rho)},
          {"chi", config.chi},
          {"basis_chi_power", config.basis_chi_power},
          {"hscore",
           {{"candidate_width", config.hscore.candidate_width},
            {"optimizer_steps", config.hscore.optimizer_steps},
            {"step_size", config.hscore.step_size},
            {"gradient_tolerance", config.hscore.gradient_tolerance},
            {"future_scale", config.hscore.future_scale}}}};
}

LeagueConfig league_config_from_json(const Json& j) {
  try {
    check_schema(j, "league config");
    LeagueConfig config;
    config.teams = j.value("teams", config.teams);
    config.roster_size = j.value("roster_size", config.roster_size);
    if (j.contains("categories")) {
      config.categories = categories_from_json(j.at("categories"));
      config.rho = MatrixXd::Identity(config.num_categories(), config.num_categories());
    }
    if (j.contains("rho")) {
      config.rho = matrix_from_json(j.at("rho"), "rho");
    }
    config.chi = j.value("chi", config.chi);
    config.basis_chi_power = j.value("basis_chi_power", config.basis_chi_power);
    if (j.contains("hscore")) {
      const auto& h = j.at("hscore");
      config.hscore.candidate_width = h.value("candidate_width", config.hscore.candidate_width);
      config.hscore.optimizer_steps = h.value("optimizer_steps", config.hscore.optimizer_steps);
      config.hscore.step_size = h.value("step_size", config.hscore.step_size);
      config.hscore.gradient_tolerance =
          h.value("gradient_tolerance", config.hscore.gradient_tolerance);
      config.hscore.future_scale = h.value("future_scale", config.hscore.future_scale);
    }
    config.validate();
    return config;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("league config: ") + e.what());
  }
}

Json state_to_json(const MatrixXd& mu, const LeagueShape& shape) {
  Json sigma = Json::array();
  for (Eigen::Index c = 0; c < shape.sigma_c.size(); ++c) {
    sigma.push_back(shape.sigma_c(c));
  }
  return {{"schema_version", kSchemaVersion},
          {"num_opponents", shape.num_opponents},
          {"mu", matrix_to_json(mu)},
          {"rho", matrix_to_json(shape.rho)},
          {"sigma_c", std::move(sigma)}};
}

StateFile state_from_json(const Json& j) {
  try {
    check_schema(j, "state");
    StateFile out;
    out.mu = matrix_from_json(j.at("mu"), "mu");
    out.shape.num_opponents = j.value("num_opponents", static_cast<int>(out.mu.cols()));
    const Eigen::Index nc = out.mu.rows();
    out.shape.rho = j.contains("rho") ? matrix_from_json(j.at("rho"), "rho")
                                      : MatrixXd::Identity(nc, nc);
    out.shape.sigma_c = VectorXd::Zero(nc);
    if (j.contains("sigma_c")) {
      const auto& s = j.at("sigma_c");
      if (!s.is_array() || static_cast<Eigen::Index>(s.size()) != nc) {
        throw ValidationError("state: sigma_c needs one entry per category");
      }
      for (Eigen::Index c = 0; c < nc; ++c) {
        out.shape.sigma_c(c) = s[static_cast<std::size_t>(c)].get<double>();
      }
    }
    check_dimensions(out.mu, out.shape);
    return out;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("state: ") + e.what());
  }
}

Json breakdown_to_json(const ObjectiveBreakdown& bd) {
  return {{"mu_T", bd.mu_T},       {"sigma2_T", bd.sigma2_T}, {"e_sigma2_M", bd.e_sigma2_M},
          {"mu_L", bd.mu_L},       {"sigma2_L", bd.sigma2_L}, {"mu_D", bd.mu_D},
          {"sigma2_D", bd.sigma2_D}, {"v", bd.v}};
}

Json report_to_json(const SimReport& r) {
  Json teams = Json::array();
  for (const auto& t : r.teams_detail) {
    teams.push_back({{"batch", t.batch},
                     {"seat", t.seat},
                     {"win_rate", t.win_rate},
                     {"mean_standard_points", t.mean_standard_points},
                     {"players", t.players},
                     {"punts", t.punts}});
  }
  return {{"schema_version", r.schema_version},
          {"layout", r.layout},
          {"chi", r.chi},
          {"teams", r.teams},
          {"roster_size", r.roster_size},
          {"categories", r.categories},
          {"master_seed", r.master_seed},
          {"seasons_per_draft", r.seasons_per_draft},
          {"punt_threshold", r.punt_threshold},
          {"batch_labels", r.batch_labels},
          {"win_rate", r.win_rate},
          {"seat_win_rate", r.seat_win_rate},
          {"seat_ci_halfwidth", r.seat_ci_halfwidth},
          {"mean_win_rate", r.mean_win_rate},
          {"mean_ci_halfwidth", r.mean_ci_halfwidth},
          {"focus_seasons", r.focus_seasons},
          {"category_points", r.category_points},
          {"team_records", std::move(teams)}};
}

SimReport report_from_json(const Json& j) {
  try {
    check_schema(j, "report");
    SimReport r;
    r.schema_version = j.at("schema_version").get<int>();
    r.layout = j.at("layout").get<std::string>();
    r.chi = j.at("chi").get<double>();
    r.teams = j.at("teams").get<int>();
    r.roster_size = j.at("roster_size").get<int>();
    r.categories = j.at("categories").get<std::vector<std::string>>();
    r.master_seed = j.at("master_seed").get<std::uint64_t>();
    r.seasons_per_draft = j.at("seasons_per_draft").get<int>();
    r.punt_threshold = j.at("punt_threshold").get<double>();
    r.batch_labels = j.at("batch_labels").get<std::vector<std::string>>();
    r.win_rate = j.at("win_rate").get<std::vector<std::vector<double>>>();
    r.seat_win_rate = j.at("seat_win_rate").get<std::vector<double>>();
    r.seat_ci_halfwidth = j.at("seat_ci_halfwidth").get<std::vector<double>>();
    r.mean_win_rate = j.at("mean_win_rate").get<double>();
    r.mean_ci_halfwidth = j.at("mean_ci_halfwidth").get<double>();
    r.focus_seasons = j.at("focus_seasons").get<std::int64_t>();
    r.category_points = j.at("category_points").get<std::vector<std::vector<double>>>();
    for (const auto& t : j.at("team_records")) {
      TeamRecord rec;
      rec.batch = t.at("batch").get<int>();
      rec.seat = t.at("seat").get<int>();
      rec.win_rate = t.at("win_rate").get<double>();
      rec.mean_standard_points = t.at("mean_standard_points").get<std::vector<double>>();
      rec.players = t.at("players").get<std::vector<std::string>>();
      rec.punts = t.at("punts").get<std::vector<bool>>();
      r.teams_detail.push_back(std::move(rec));
    }
    return r;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("report: ") + e.what());
  }
}

std::string report_to_csv(const SimReport& r) {
  std::ostringstream out;
  out << "batch";
  for (int s = 0; s < r.teams; ++s) {
    out << ",seat_" << s;
  }
  out << ",mean\n";
  for (std::size_t b = 0; b < r.win_rate.size(); ++b) {
    out << quote_csv(b < r.batch_labels.size() ? r.batch_labels[b] : std::to_string(b));
    double sum = 0;
    for (double v : r.win_rate[b]) {
      out << ',' << format_double(v);
      sum += v;
    }
    out << ',' << format_double(r.win_rate[b].empty() ? 0.0 : sum / r.win_rate[b].size())
        << '\n';
  }
  out << "mean";
  for (double v : r.seat_win_rate) {
    out << ',' << format_double(v);
  }
  out << ',' << format_double(r.mean_win_rate) << '\n';
  return out.str();
}

Json read_json_file(const fs::path& path) {
  const std::string text = read_text(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path.string() + ": invalid JSON: " + e.what());
  }
}

void write_json_file(const fs::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

std::string content_hash(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunStore::RunStore(fs::path root) : root_(std::move(root)) {}

std::string RunStore::write_report(const SimReport& report, const Json& config,
                                   std::string run_id) {
  if (run_id.empty()) {
    run_id = "run-" + content_hash(config.dump());
  }
  if (run_id.find('/') != std::string::npos || run_id == "." || run_id == "..") {
    throw ValidationError("invalid run id '" + run_id + "'");
  }
  fs::create_directories(root_);
  const fs::path dir = root_ / run_id;
  // create_directory is atomic: it reports whether this call made the directory.
  if (!fs::create_directory(dir)) {
    throw ValidationError("run '" + run_id + "' already exists in " + root_.string());
  }
  write_json_file(dir / "config.json", config);
  write_json_file(dir / "report.json", report_to_json(report));
  write_text(dir / "report.csv", report_to_csv(report));
  return run_id;
}

SimReport RunStore::read_report(const std::string& run_id) const {
  const fs::path path = root_ / run_id / "report.json";
  if (!fs::exists(path)) {
    throw ValidationError("unknown run '" + run_id + "'");
  }
  return report_from_json(read_json_file(path));
}

Json RunStore::read_config(const std::string& run_id) const {
  const fs::path path = root_ / run_id / "config.json";
  if (!fs::exists(path)) {
    throw ValidationError("unknown run '" + run_id + "'");
  }
  return read_json_file(path);
}

std::vector<std::string> RunStore::list() const {
  std::vector<std::string> out;
  if (!fs::exists(root_)) {
    return out;
  }
  for (const auto& e : fs::directory_iterator(root_)) {
    if (e.is_directory() && fs::exists(e.path() / "report.json")) {
      out.push_back(e.path().filename().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace roto
