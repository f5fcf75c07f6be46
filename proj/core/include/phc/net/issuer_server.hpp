#ifndef PHC_NET_ISSUER_SERVER_HPP
#define PHC_NET_ISSUER_SERVER_HPP

#include <httplib.h>

#include "phc/errors.hpp"
#include "phc/issuer.hpp"

namespace phc::net {

/// Wires issuer endpoints onto an httplib server:
///   POST /enroll                POST /revoke
///   GET  /ring/{epoch}          POST /admin/advance-epoch
///   GET  /issuer-key
///
/// Admin routes are unauthenticated; bind loopback only.
void attach_issuer_routes(httplib::Server& srv, Issuer& issuer);

/// Status code for a domain error (shared by both servers; frozen in
/// docs/protocol.md).
int http_status_for(Err code);

}  // namespace phc::net

#endif
