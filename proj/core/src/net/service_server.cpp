#include "phc/net/service_server.hpp"

#include <chrono>

#include "phc/encode.hpp"
#include "phc/errors.hpp"
#include "phc/net/issuer_server.hpp"
#include "phc/wire.hpp"

namespace phc::net {

namespace {

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const PhcError& e) {
    reply(res, http_status_for(e.code()), wire::error_body(e));
  } catch (const std::exception& e) {
    reply(res, 500, wire::error_body(PhcError(Err::internal_error, e.what())));
  }
}

uint64_t wall_clock_seconds() {
  return static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::seconds>(
                                   std::chrono::system_clock::now()
                                       .time_since_epoch())
                                   .count());
}

}  // namespace

void attach_service_routes(httplib::Server& srv, RelyingParty& rp,
                           ServiceServerOptions opts) {
  auto now_fn = opts.now ? opts.now : wall_clock_seconds;

  srv.Get("/challenge", [&rp](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      Bytes nonce = rp.issue_challenge();
      Json scopes = Json::array();
      for (const auto& s : rp.config().scopes) scopes.push_back(s);
      reply(res, 200,
            wire::envelope("challenge",
                           Json{{"nonce", hex_encode(nonce)},
                                {"service_id", rp.config().service_id},
                                {"scopes", scopes}}));
    });
  });

  srv.Post("/register", [&rp](const httplib::Request& req,
                              httplib::Response& res) {
    guarded(res, [&] {
      auto [kind, body] = wire::open_envelope_text(req.body);
      if (kind != "register") {
        throw PhcError(Err::malformed_request, "expected kind=register");
      }
      if (!body.contains("presentation") ||
          !body.at("presentation").is_object() || !body.contains("scope") ||
          !body.at("scope").is_string() || !body.contains("challenge") ||
          !body.at("challenge").is_string()) {
        throw PhcError(Err::malformed_request,
                       "register needs presentation, scope, challenge");
      }
      Presentation pres = wire::presentation_from_json(
          rp.params(), body.at("presentation"));
      std::string scope = body.at("scope").get<std::string>();
      Bytes challenge = hex_decode(body.at("challenge").get<std::string>());
      GroupElement tag = rp.verify_presentation(pres, scope, challenge);
      std::string account = rp.register_account(pres.issuer_id, tag);
      // The tag stays server-side; the holder can recompute it anyway.
      reply(res, 200,
            wire::envelope("account", Json{{"account_id", account}}));
    });
  });

  srv.Post("/suspend", [&rp](const httplib::Request& req,
                             httplib::Response& res) {
    guarded(res, [&] {
      auto [kind, body] = wire::open_envelope_text(req.body);
      if (kind != "suspend") {
        throw PhcError(Err::malformed_request, "expected kind=suspend");
      }
      if (!body.contains("issuer_id") || !body.at("issuer_id").is_string() ||
          !body.contains("tag") || !body.at("tag").is_string()) {
        throw PhcError(Err::malformed_request, "suspend needs issuer_id, tag");
      }
      GroupElement tag{hex_to_int(body.at("tag").get<std::string>())};
      rp.suspend(body.at("issuer_id").get<std::string>(), tag);
      reply(res, 200, wire::envelope("ok", Json::object()));
    });
  });

  srv.Post("/delegation/verify", [&rp, now_fn](const httplib::Request& req,
                                               httplib::Response& res) {
    guarded(res, [&] {
      auto [kind, body] = wire::open_envelope_text(req.body);
      if (kind != "delegation-verify") {
        throw PhcError(Err::malformed_request,
                       "expected kind=delegation-verify");
      }
      if (!body.contains("attestation") ||
          !body.at("attestation").is_object()) {
        throw PhcError(Err::malformed_request, "missing attestation");
      }
      DelegationAttestation att =
          wire::attestation_from_json(rp.params(), body.at("attestation"));
      bool valid = rp.check_delegation(att, now_fn());
      reply(res, 200,
            wire::envelope("delegation-result", Json{{"valid", valid}}));
    });
  });

  srv.Post("/admin/install-ring", [&rp](const httplib::Request& req,
                                        httplib::Response& res) {
    guarded(res, [&] {
      auto [kind, body] = wire::open_envelope_text(req.body);
      if (kind != "install-ring") {
        throw PhcError(Err::malformed_request, "expected kind=install-ring");
      }
      EpochRing ring = wire::ring_from_json(rp.params(), body);
      rp.install_ring(ring);
      reply(res, 200, wire::envelope("ok", Json::object()));
    });
  });
}

}  // namespace phc::net
