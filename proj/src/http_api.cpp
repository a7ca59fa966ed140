#include "roto/http_api.hpp"

#include <sstream>

#include "roto/season.hpp"
// After Eigen: <resolv.h> defines a _res macro that collides with Eigen.
#include "httplib.h"

namespace roto {

namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

// Maps library exceptions onto HTTP statuses.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const NotFound& e) {
      send(res, 404, {{"error", e.what()}});
    } catch (const VersionConflict& e) {
      send(res, 409, {{"error", e.what()}, {"current_version", e.current_version}});
    } catch (const Json::exception& e) {
      send(res, 400, {{"error", std::string("malformed request: ") + e.what()}});
    } catch (const ValidationError& e) {
      send(res, 422, {{"error", e.what()}});
    } catch (const std::exception& e) {
      send(res, 500, {{"error", e.what()}});
    }
  };
}

Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) {
    return Json::object();
  }
  return Json::parse(req.body);
}

int int_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) {
    throw ValidationError(std::string("missing query parameter '") + name + "'");
  }
  const auto text = req.get_param_value(name);
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) {
      throw std::invalid_argument(text);
    }
    return static_cast<int>(v);
  } catch (const std::logic_error&) {
    throw ValidationError(std::string("query parameter '") + name + "' must be an integer");
  }
}

}  // namespace

void register_routes(httplib::Server& server, DraftService& service,
                     std::function<void()> on_mutation) {
  auto mutated = [on_mutation] {
    if (on_mutation) {
      on_mutation();
    }
  };

  server.Post("/leagues", guarded([&service, mutated](const httplib::Request& req,
                                                      httplib::Response& res) {
    const Json body = parse_body(req);
    LeagueConfig config = league_config_from_json(body.value("config", Json::object()));
    PlayerPool pool;
    if (body.contains("projections_csv")) {
      std::istringstream in(body.at("projections_csv").get<std::string>());
      pool = read_projections(in, config.categories, "projections_csv");
    } else if (body.contains("synthetic_seed")) {
      SyntheticPoolConfig syn;
      syn.players = body.value("synthetic_players", syn.players);
      pool = generate_synthetic_pool(syn,
                                     SeededRng(body.at("synthetic_seed").get<std::uint64_t>(), 0));
    } else {
      throw ValidationError("request needs 'projections_csv' or 'synthetic_seed'");
    }
    const std::string id =
        service.create_league(std::move(config), std::move(pool), body.value("estimate_rho", true));
    mutated();
    send(res, 201, {{"id", id}, {"version", 0}});
  }));

  server.Get(R"(/leagues/([^/]+))",
             guarded([&service](const httplib::Request& req, httplib::Response& res) {
               send(res, 200, snapshot_to_json(service.get(req.matches[1])));
             }));

  server.Post(R"(/leagues/([^/]+)/picks)", guarded([&service, mutated](const httplib::Request& req,
                                                                      httplib::Response& res) {
    const Json body = parse_body(req);
    const auto version = service.record_pick(req.matches[1],
                                             body.at("expected_version").get<std::int64_t>(),
                                             body.at("seat").get<int>(),
                                             body.at("player_id").get<std::string>());
    mutated();
    send(res, 200, {{"version", version}});
  }));

  server.Delete(R"(/leagues/([^/]+)/picks/last)",
                guarded([&service, mutated](const httplib::Request& req, httplib::Response& res) {
                  std::int64_t expected = 0;
                  if (req.has_param("expected_version")) {
                    expected = int_param(req, "expected_version");
                  } else {
                    expected = parse_body(req).at("expected_version").get<std::int64_t>();
                  }
                  const auto version = service.undo_last(req.matches[1], expected);
                  mutated();
                  send(res, 200, {{"version", version}});
                }));

  server.Get(R"(/leagues/([^/]+)/recommendations)",
             guarded([&service](const httplib::Request& req, httplib::Response& res) {
               const std::string id = req.matches[1];
               const int seat = int_param(req, "seat");
               const int width = req.has_param("width") ? int_param(req, "width") : 10;
               const auto list = service.recommendations(id, seat, width);
               send(res, 200, recommendations_to_json(list, service.get(id).config.categories));
             }));

  server.Get(R"(/leagues/([^/]+)/export)",
             guarded([&service](const httplib::Request& req, httplib::Response& res) {
               if (!req.has_param("player_id")) {
                 throw ValidationError("missing query parameter 'player_id'");
               }
               send(res, 200,
                    service.export_candidate_state(req.matches[1], int_param(req, "seat"),
                                                   req.get_param_value("player_id")));
             }));
}

}  // namespace roto
