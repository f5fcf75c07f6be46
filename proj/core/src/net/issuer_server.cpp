#include "phc/net/issuer_server.hpp"

#include "phc/encode.hpp"
#include "phc/errors.hpp"
#include "phc/wire.hpp"

namespace phc::net {

int http_status_for(Err code) {
  switch (code) {
    case Err::malformed_request:
    case Err::malformed_file:
    case Err::unsupported_version:
    case Err::malformed_signature:
    case Err::duplicate_ring_member:
    case Err::invalid_index:
    case Err::key_mismatch:
      return 400;
    case Err::invalid_ticket:
    case Err::suspended_credential:
    case Err::suspended_principal:
    case Err::invalid_proof:
    case Err::bad_ring_signature:
    case Err::bad_ring_snapshot:
      return 403;
    case Err::unknown_epoch:
    case Err::unknown_recovery_code:
    case Err::unknown_issuer:
    case Err::unknown_principal:
      return 404;
    case Err::duplicate_enrollment:
    case Err::duplicate_key:
    case Err::already_revoked_this_epoch:
    case Err::replayed_challenge:
    case Err::limit_reached:
    case Err::stale_epoch:
    case Err::stale_ring:
    case Err::key_not_in_ring:
      return 409;
    default:
      return 500;
  }
}

namespace {

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, const PhcError& e) {
  reply(res, http_status_for(e.code()), wire::error_body(e));
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const PhcError& e) {
    reply_error(res, e);
  } catch (const std::exception& e) {
    reply_error(res, PhcError(Err::internal_error, e.what()));
  }
}

}  // namespace

void attach_issuer_routes(httplib::Server& srv, Issuer& issuer) {
  srv.Post("/enroll", [&issuer](const httplib::Request& req,
                                httplib::Response& res) {
    guarded(res, [&] {
      auto [kind, body] = wire::open_envelope_text(req.body);
      if (kind != "enroll") {
        throw PhcError(Err::malformed_request, "expected kind=enroll");
      }
      EnrollmentRequest er = wire::enrollment_from_json(issuer.params(), body);
      EnrollmentReceipt receipt = issuer.enroll(er);
      reply(res, 200,
            wire::envelope("enroll-receipt",
                           Json{{"epoch", receipt.epoch},
                                {"cohort_index", receipt.cohort_index},
                                {"position", receipt.position}}));
    });
  });

  srv.Post("/revoke", [&issuer](const httplib::Request& req,
                                httplib::Response& res) {
    guarded(res, [&] {
      auto [kind, body] = wire::open_envelope_text(req.body);
      if (kind != "revoke") {
        throw PhcError(Err::malformed_request, "expected kind=revoke");
      }
      if (!body.contains("recovery_code") ||
          !body.at("recovery_code").is_string()) {
        throw PhcError(Err::malformed_request, "missing recovery_code");
      }
      Bytes code = hex_decode(body.at("recovery_code").get<std::string>());
      std::string ticket = issuer.revoke(code);
      reply(res, 200,
            wire::envelope("revoke-receipt",
                           Json{{"reenroll_ticket", ticket}}));
    });
  });

  srv.Get(R"(/ring/(\d+))", [&issuer](const httplib::Request& req,
                                      httplib::Response& res) {
    guarded(res, [&] {
      uint64_t epoch = std::stoull(req.matches[1].str());
      EpochRing ring = issuer.ring(epoch);
      reply(res, 200,
            wire::envelope("ring", wire::ring_to_json(issuer.params(), ring)));
    });
  });

  srv.Post("/admin/advance-epoch", [&issuer](const httplib::Request&,
                                             httplib::Response& res) {
    guarded(res, [&] {
      uint64_t epoch = issuer.advance_epoch();
      reply(res, 200, wire::envelope("epoch", Json{{"epoch", epoch}}));
    });
  });

  srv.Get("/issuer-key", [&issuer](const httplib::Request&,
                                   httplib::Response& res) {
    guarded(res, [&] {
      const GroupParams& params = issuer.params();
      reply(res, 200,
            wire::envelope(
                "issuer-key",
                Json{{"issuer_id", issuer.id()},
                     {"params", wire::params_to_json(params)},
                     {"y", int_to_hex(issuer.public_key().v, params.p_bytes())},
                     {"epoch", issuer.current_epoch()}}));
    });
  });
}

}  // namespace phc::net
