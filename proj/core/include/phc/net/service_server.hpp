#ifndef PHC_NET_SERVICE_SERVER_HPP
#define PHC_NET_SERVICE_SERVER_HPP

#include <httplib.h>

#include <functional>

#include "phc/relying_party.hpp"

namespace phc::net {

struct ServiceServerOptions {
  /// Clock for delegation expiry; injectable for deterministic tests.
  std::function<uint64_t()> now = nullptr;
};

/// Wires relying-party endpoints onto an httplib server:
///   GET  /challenge             POST /register
///   POST /suspend (admin)       POST /delegation/verify
///   POST /admin/install-ring
void attach_service_routes(httplib::Server& srv, RelyingParty& rp,
                           ServiceServerOptions opts = {});

}  // namespace phc::net

#endif
