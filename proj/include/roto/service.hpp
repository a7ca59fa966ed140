#pragma once

// Live draft assistant: in-memory drafts with an append-only event log,
// optimistic concurrency on a version counter, and V-ranked recommendations.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "roto/data_io.hpp"
#include "roto/draft.hpp"

namespace roto {

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VersionConflict : public std::runtime_error {
 public:
  VersionConflict(const std::string& what, std::int64_t current)
      : std::runtime_error(what), current_version(current) {}
  std::int64_t current_version;
};

struct DraftEvent {
  enum class Kind { Pick, Undo };
  Kind kind = Kind::Pick;
  int seat = -1;
  std::string player_id;
};

struct Recommendation {
  std::string player_id;
  std::string name;
  double v = 0;
  double delta_v = 0;  // v minus the seat's current-roster baseline
  double gscore = 0;
  std::vector<double> category_win_probability;
};

struct RecommendationList {
  std::int64_t version = 0;
  int seat = 0;
  double baseline_v = 0;
  std::vector<Recommendation> items;  // sorted by v descending
};

struct DraftSnapshot {
  std::string id;
  std::int64_t version = 0;
  LeagueConfig config;
  std::shared_ptr<const PlayerPool> pool;
  DraftState state;
  std::vector<DraftEvent> events;
};

/// Folds an event log over an empty draft. Throws ValidationError on an
/// inconsistent log.
DraftState replay_events(const std::vector<DraftEvent>& events, const PlayerPool& pool,
                         const LeagueConfig& config);

class DraftService {
 public:
  /// `estimate_rho` replaces config.rho with the pool's category correlation.
  /// Throws ValidationError (including UnsupportedLeagueSize) on bad input.
  std::string create_league(LeagueConfig config, PlayerPool pool, bool estimate_rho = true);

  DraftSnapshot get(const std::string& id) const;

  /// Returns the new version. Throws NotFound, VersionConflict or
  /// ValidationError.
  std::int64_t record_pick(const std::string& id, std::int64_t expected_version, int seat,
                           const std::string& player_id);
  std::int64_t undo_last(const std::string& id, std::int64_t expected_version);

  /// Pure read: top `width` candidates for `seat`.
  RecommendationList recommendations(const std::string& id, int seat, int width) const;

  /// Matchup state (objective eval format) of `seat` after adding
  /// `player_id`, with the optimized future picks, plus its V.
  Json export_candidate_state(const std::string& id, int seat, const std::string& player_id) const;

  /// Writes every draft's config, pool and event log as JSON.
  void save_snapshot(const std::filesystem::path& path) const;
  /// Replaces the current drafts with those in the snapshot.
  void load_snapshot(const std::filesystem::path& path);

  std::vector<std::string> ids() const;

 private:
  struct Entry {
    mutable std::mutex mutex;
    std::string id;
    LeagueConfig config;
    std::shared_ptr<const PlayerPool> pool;
    std::vector<double> scores;
    std::map<std::string, int> index;  // player id -> pool index
    DraftState state;
    std::int64_t version = 0;
    std::vector<DraftEvent> events;
  };

  std::shared_ptr<Entry> find(const std::string& id) const;
  static std::shared_ptr<Entry> make_entry(std::string id, LeagueConfig config, PlayerPool pool);
  static int player_index(const Entry& e, const std::string& player_id);
  static void apply(Entry& e, const DraftEvent& ev);

  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> drafts_;
  std::uint64_t next_id_ = 1;
};

Json snapshot_to_json(const DraftSnapshot& s);
Json recommendations_to_json(const RecommendationList& list,
                             const std::vector<Category>& categories);

}  // namespace roto
