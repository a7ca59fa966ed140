#include "roto/service.hpp"

#include <algorithm>

namespace roto {

namespace {

Json pool_to_json(const PlayerPool& pool) {
  Json out = Json::array();
  for (const auto& p : pool) {
    out.push_back({{"id", p.id},
                   {"name", p.name},
                   {"value", p.value},
                   {"volume", p.volume},
                   {"tags", p.tags}});
  }
  return out;
}

PlayerPool pool_from_json(const Json& j) {
  PlayerPool pool;
  for (const auto& e : j) {
    PlayerProjection p;
    p.id = e.at("id").get<std::string>();
    p.name = e.value("name", p.id);
    p.value = e.at("value").get<std::vector<double>>();
    p.volume = e.at("volume").get<std::vector<double>>();
    p.tags = e.value("tags", std::vector<std::string>{});
    pool.push_back(std::move(p));
  }
  return pool;
}

Json events_to_json(const std::vector<DraftEvent>& events) {
  Json out = Json::array();
  for (const auto& ev : events) {
    if (ev.kind == DraftEvent::Kind::Pick) {
      out.push_back({{"type", "pick"}, {"seat", ev.seat}, {"player_id", ev.player_id}});
    } else {
      out.push_back({{"type", "undo"}});
    }
  }
  return out;
}

std::vector<DraftEvent> events_from_json(const Json& j) {
  std::vector<DraftEvent> out;
  for (const auto& e : j) {
    DraftEvent ev;
    const auto type = e.at("type").get<std::string>();
    if (type == "pick") {
      ev.seat = e.at("seat").get<int>();
      ev.player_id = e.at("player_id").get<std::string>();
    } else if (type == "undo") {
      ev.kind = DraftEvent::Kind::Undo;
    } else {
      throw ValidationError("unknown event type '" + type + "'");
    }
    out.push_back(std::move(ev));
  }
  return out;
}

}  // namespace

DraftState replay_events(const std::vector<DraftEvent>& events, const PlayerPool& pool,
                         const LeagueConfig& config) {
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    index.emplace(pool[i].id, static_cast<int>(i));
  }
  DraftState state(config.teams, config.roster_size, pool.size());
  for (const auto& ev : events) {
    if (ev.kind == DraftEvent::Kind::Undo) {
      state.undo_last();
      continue;
    }
    const auto it = index.find(ev.player_id);
    if (it == index.end()) {
      throw ValidationError("unknown player id '" + ev.player_id + "'");
    }
    state.apply_pick(ev.seat, it->second);
  }
  return state;
}

std::shared_ptr<DraftService::Entry> DraftService::make_entry(std::string id, LeagueConfig config,
                                                              PlayerPool pool) {
  config.validate();
  validate_pool(pool, config.categories);
  const std::size_t needed =
      static_cast<std::size_t>(config.teams) * static_cast<std::size_t>(config.roster_size);
  if (pool.size() < needed) {
    throw ValidationError("pool has " + std::to_string(pool.size()) + " players, need at least " +
                          std::to_string(needed));
  }
  auto e = std::make_shared<Entry>();
  e->id = std::move(id);
  e->scores = gscores(pool, config);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    e->index.emplace(pool[i].id, static_cast<int>(i));
  }
  e->state = DraftState(config.teams, config.roster_size, pool.size());
  e->config = std::move(config);
  e->pool = std::make_shared<const PlayerPool>(std::move(pool));
  return e;
}

std::string DraftService::create_league(LeagueConfig config, PlayerPool pool, bool estimate_rho) {
  config.validate();
  if (estimate_rho) {
    validate_pool(pool, config.categories);
    config.rho = estimate_category_correlation(pool, config);
  }
  std::unique_lock lock(mutex_);
  const std::string id = "lg-" + std::to_string(next_id_);
  auto entry = make_entry(id, std::move(config), std::move(pool));
  ++next_id_;
  drafts_.emplace(id, std::move(entry));
  return id;
}

std::shared_ptr<DraftService::Entry> DraftService::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  const auto it = drafts_.find(id);
  if (it == drafts_.end()) {
    throw NotFound("unknown league '" + id + "'");
  }
  return it->second;
}

int DraftService::player_index(const Entry& e, const std::string& player_id) {
  const auto it = e.index.find(player_id);
  if (it == e.index.end()) {
    throw ValidationError("unknown player id '" + player_id + "'");
  }
  return it->second;
}

void DraftService::apply(Entry& e, const DraftEvent& ev) {
  if (ev.kind == DraftEvent::Kind::Undo) {
    e.state.undo_last();
  } else {
    e.state.apply_pick(ev.seat, player_index(e, ev.player_id));
  }
  e.events.push_back(ev);
  ++e.version;
}

DraftSnapshot DraftService::get(const std::string& id) const {
  const auto e = find(id);
  std::lock_guard lock(e->mutex);
  return {e->id, e->version, e->config, e->pool, e->state, e->events};
}

std::int64_t DraftService::record_pick(const std::string& id, std::int64_t expected_version,
                                       int seat, const std::string& player_id) {
  const auto e = find(id);
  std::lock_guard lock(e->mutex);
  if (expected_version != e->version) {
    throw VersionConflict("expected version " + std::to_string(expected_version) +
                              " but draft is at " + std::to_string(e->version),
                          e->version);
  }
  apply(*e, {DraftEvent::Kind::Pick, seat, player_id});
  return e->version;
}

std::int64_t DraftService::undo_last(const std::string& id, std::int64_t expected_version) {
  const auto e = find(id);
  std::lock_guard lock(e->mutex);
  if (expected_version != e->version) {
    throw VersionConflict("expected version " + std::to_string(expected_version) +
                              " but draft is at " + std::to_string(e->version),
                          e->version);
  }
  apply(*e, {DraftEvent::Kind::Undo, -1, {}});
  return e->version;
}

RecommendationList DraftService::recommendations(const std::string& id, int seat,
                                                 int width) const {
  if (width < 1) {
    throw ValidationError("width must be positive");
  }
  const auto e = find(id);
  DraftState state;
  RecommendationList out;
  {
    std::lock_guard lock(e->mutex);
    state = e->state;
    out.version = e->version;
  }
  const auto& pool = *e->pool;
  out.seat = seat;
  const auto evals = evaluate_candidates(state, seat, pool, e->config, e->scores, width);
  out.baseline_v = evaluate_baseline(state, seat, pool, e->config, e->scores).v;
  for (const auto& ev : evals) {
    Recommendation r;
    const auto& p = pool[static_cast<std::size_t>(ev.player)];
    r.player_id = p.id;
    r.name = p.name;
    r.v = ev.v;
    r.delta_v = ev.v - out.baseline_v;
    r.gscore = ev.gscore;
    r.category_win_probability.assign(ev.category_win_probability.data(),
                                      ev.category_win_probability.data() +
                                          ev.category_win_probability.size());
    out.items.push_back(std::move(r));
  }
  return out;
}

Json DraftService::export_candidate_state(const std::string& id, int seat,
                                          const std::string& player_id) const {
  const auto e = find(id);
  DraftState state;
  std::int64_t version = 0;
  {
    std::lock_guard lock(e->mutex);
    state = e->state;
    version = e->version;
  }
  const int player = player_index(*e, player_id);
  const auto eval = evaluate_candidate(state, seat, *e->pool, e->config, e->scores, player);
  Json out = state_to_json(eval.mu, eval.shape);
  out["player_id"] = player_id;
  out["seat"] = seat;
  out["version"] = version;
  out["v"] = eval.v;
  return out;
}

void DraftService::save_snapshot(const std::filesystem::path& path) const {
  Json drafts = Json::array();
  std::uint64_t next = 0;
  std::vector<std::shared_ptr<Entry>> entries;
  {
    std::shared_lock lock(mutex_);
    next = next_id_;
    for (const auto& [id, e] : drafts_) {
      entries.push_back(e);
    }
  }
  for (const auto& e : entries) {
    std::lock_guard lock(e->mutex);
    drafts.push_back({{"id", e->id},
                      {"config", league_config_to_json(e->config)},
                      {"pool", pool_to_json(*e->pool)},
                      {"events", events_to_json(e->events)}});
  }
  const Json out = {{"schema_version", kSchemaVersion}, {"next_id", next}, {"drafts", drafts}};
  const auto tmp = path.string() + ".tmp";
  write_json_file(tmp, out);
  std::filesystem::rename(tmp, path);
}

void DraftService::load_snapshot(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  if (j.value("schema_version", 0) != kSchemaVersion) {
    throw ValidationError("snapshot: unsupported schema_version");
  }
  std::map<std::string, std::shared_ptr<Entry>> loaded;
  try {
    for (const auto& d : j.at("drafts")) {
      auto entry = make_entry(d.at("id").get<std::string>(), league_config_from_json(d.at("config")),
                              pool_from_json(d.at("pool")));
      for (const auto& ev : events_from_json(d.at("events"))) {
        apply(*entry, ev);
      }
      loaded.emplace(entry->id, std::move(entry));
    }
  } catch (const Json::exception& ex) {
    throw ValidationError(std::string("snapshot: ") + ex.what());
  }
  std::unique_lock lock(mutex_);
  drafts_ = std::move(loaded);
  next_id_ = std::max<std::uint64_t>(j.value("next_id", std::uint64_t{1}), drafts_.size() + 1);
}

std::vector<std::string> DraftService::ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, e] : drafts_) {
    out.push_back(id);
  }
  return out;
}

Json snapshot_to_json(const DraftSnapshot& s) {
  const auto& pool = *s.pool;
  Json rosters = Json::array();
  for (const auto& r : s.state.rosters) {
    Json ids = Json::array();
    for (int idx : r) {
      ids.push_back(pool[static_cast<std::size_t>(idx)].id);
    }
    rosters.push_back(std::move(ids));
  }
  Json picks = Json::array();
  for (std::size_t i = 0; i < s.state.picks.size(); ++i) {
    picks.push_back({{"pick", i},
                     {"seat", seat_for_pick(static_cast<int>(i), s.state.teams)},
                     {"player_id", pool[static_cast<std::size_t>(s.state.picks[i])].id}});
  }
  Json players = Json::array();
  for (std::size_t i = 0; i < pool.size(); ++i) {
    players.push_back({{"id", pool[i].id},
                       {"name", pool[i].name},
                       {"tags", pool[i].tags},
                       {"available", !s.state.taken[i]}});
  }
  Json categories = Json::array();
  for (const auto& c : s.config.categories) {
    categories.push_back(c.name);
  }
  const bool complete = s.state.complete();
  return {{"id", s.id},
          {"version", s.version},
          {"teams", s.config.teams},
          {"roster_size", s.config.roster_size},
          {"chi", s.config.chi},
          {"categories", std::move(categories)},
          {"current_pick", s.state.current_pick()},
          {"round", s.state.round()},
          {"seat_on_clock", complete ? Json(nullptr) : Json(s.state.seat_on_clock())},
          {"complete", complete},
          {"rosters", std::move(rosters)},
          {"picks", std::move(picks)},
          {"players", std::move(players)},
          {"event_count", s.events.size()}};
}

Json recommendations_to_json(const RecommendationList& list,
                             const std::vector<Category>& categories) {
  Json names = Json::array();
  for (const auto& c : categories) {
    names.push_back(c.name);
  }
  Json items = Json::array();
  for (const auto& r : list.items) {
    items.push_back({{"player_id", r.player_id},
                     {"name", r.name},
                     {"v", r.v},
                     {"delta_v", r.delta_v},
                     {"gscore", r.gscore},
                     {"category_win_probability", r.category_win_probability}});
  }
  return {{"version", list.version},
          {"seat", list.seat},
          {"baseline_v", list.baseline_v},
          {"categories", std::move(names)},
          {"recommendations", std::move(items)}};
}

}  // namespace roto
