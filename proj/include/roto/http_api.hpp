#pragma once

#include <functional>

#include "roto/service.hpp"

namespace httplib {
class Server;
}

namespace roto {

/// Routes:
///   POST   /leagues
///   GET    /leagues/{id}
///   POST   /leagues/{id}/picks
///   DELETE /leagues/{id}/picks/last?expected_version=
///   GET    /leagues/{id}/recommendations?seat=&width=
///   GET    /leagues/{id}/export?seat=&player_id=
/// Errors are {"error": message} with 400 (malformed request), 404, 409
/// (stale version, plus "current_version") or 422 (validation).
/// `on_mutation` runs after every accepted mutation.
void register_routes(httplib::Server& server, DraftService& service,
                     std::function<void()> on_mutation = {});

}  // namespace roto
