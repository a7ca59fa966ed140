#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "roto/draft.hpp"
#include "roto/season.hpp"

namespace roto {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Projection CSV: player_id, player_name, then one column per category in
// order. A percentage category c takes two columns, `c` (rate) and
// `c_volume` (attempts). An optional trailing `tags` column holds
// ';'-separated tags. Numbers use '.' regardless of locale.

/// Throws ValidationError with the offending line number on malformed input.
PlayerPool read_projections(std::istream& in, const std::vector<Category>& categories,
                            const std::string& source = "<stream>");
PlayerPool load_projections(const std::filesystem::path& path,
                            const std::vector<Category>& categories);

void write_projections(std::ostream& out, const PlayerPool& pool,
                       const std::vector<Category>& categories);
void save_projections(const std::filesystem::path& path, const PlayerPool& pool,
                      const std::vector<Category>& categories);

/// Volume-weighted league rate of a percentage category:
/// sum(rate * volume) / sum(volume).
double league_rate(const PlayerPool& pool, std::size_t category);

/// Shortest round-trip decimal text, locale independent.
std::string format_double(double x);

Json categories_to_json(const std::vector<Category>& categories);
std::vector<Category> categories_from_json(const Json& j);

Json league_config_to_json(const LeagueConfig& config);
/// Missing keys take their defaults; schema_version, when present, must match.
LeagueConfig league_config_from_json(const Json& j);

/// Matchup state file consumed by `objective eval`: mu (|C| rows of |O|),
/// rho, sigma_c and num_opponents.
struct StateFile {
  MatrixXd mu;
  LeagueShape shape;
};

Json state_to_json(const MatrixXd& mu, const LeagueShape& shape);
StateFile state_from_json(const Json& j);

Json breakdown_to_json(const ObjectiveBreakdown& bd);

Json report_to_json(const SimReport& report);
SimReport report_from_json(const Json& j);
/// Table-1 layout: batch, seat_0 .. seat_{K-1}, mean; one row per batch.
std::string report_to_csv(const SimReport& report);

Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with sorted keys and a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);

/// Directory of immutable runs: <root>/<run id>/{config.json, report.json,
/// report.csv}.
class RunStore {
 public:
  explicit RunStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  /// Writes a new run. An empty `run_id` derives one from the config
  /// contents. Throws ValidationError if the run id already exists.
  std::string write_report(const SimReport& report, const Json& config,
                           std::string run_id = "");
  SimReport read_report(const std::string& run_id) const;
  Json read_config(const std::string& run_id) const;
  std::vector<std::string> list() const;

 private:
  std::filesystem::path root_;
};

/// Stable 64-bit FNV-1a hash as 16 hex digits.
std::string content_hash(const std::string& text);

}  // namespace roto
