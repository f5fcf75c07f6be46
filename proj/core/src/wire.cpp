#include "phc/wire.hpp"

#include "phc/encode.hpp"
#include "phc/errors.hpp"

namespace phc::wire {

namespace {

mpz_class element_from_hex(const GroupParams& params, const Json& j,
                           const char* field) {
  if (!j.contains(field) || !j.at(field).is_string()) {
    throw PhcError(Err::malformed_request,
                   std::string("missing hex field: ") + field);
  }
  mpz_class v = hex_to_int(j.at(field).get<std::string>());
  if (!is_subgroup_element(params, v)) {
    throw PhcError(Err::malformed_request,
                   std::string(field) + " is not a valid group element");
  }
  return v;
}

mpz_class scalar_from_hex(const GroupParams& params, const Json& j,
                          const char* field) {
  if (!j.contains(field) || !j.at(field).is_string()) {
    throw PhcError(Err::malformed_request,
                   std::string("missing hex field: ") + field);
  }
  mpz_class v = hex_to_int(j.at(field).get<std::string>());
  if (v < 0 || v >= params.q) {
    throw PhcError(Err::malformed_request,
                   std::string(field) + " is out of scalar range");
  }
  return v;
}

std::string req_string(const Json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_string()) {
    throw PhcError(Err::malformed_request,
                   std::string("missing string field: ") + field);
  }
  return j.at(field).get<std::string>();
}

uint64_t req_u64(const Json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_number_unsigned()) {
    throw PhcError(Err::malformed_request,
                   std::string("missing integer field: ") + field);
  }
  return j.at(field).get<uint64_t>();
}

}  // namespace

Json envelope(std::string_view kind, Json body) {
  return Json{{"v", kProtocolVersion},
              {"kind", std::string(kind)},
              {"body", std::move(body)}};
}

std::pair<std::string, Json> open_envelope(const Json& doc) {
  if (!doc.is_object() || !doc.contains("v") || !doc.contains("kind") ||
      !doc.contains("body") || !doc.at("body").is_object()) {
    throw PhcError(Err::malformed_request, "not a protocol envelope");
  }
  if (!doc.at("v").is_number_integer() ||
      doc.at("v").get<int>() != kProtocolVersion) {
    throw PhcError(Err::unsupported_version, "unknown envelope version");
  }
  return {req_string(doc, "kind"), doc.at("body")};
}

std::pair<std::string, Json> open_envelope_text(const std::string& text) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    throw PhcError(Err::malformed_request, "request body is not JSON");
  }
  return open_envelope(doc);
}

Json error_body(const PhcError& e) {
  return envelope("error", Json{{"code", std::string(err_code(e.code()))},
                                {"message", e.what()}});
}

// ---- params ----------------------------------------------------------------

Json params_to_json(const GroupParams& params) {
  return Json{{"name", params.name},
              {"p", int_to_hex(params.p, params.p_bytes())},
              {"q", int_to_hex(params.q, params.q_bytes())},
              {"g", int_to_hex(params.g, params.p_bytes())}};
}

GroupParams params_from_json(const Json& j) {
  std::string name = req_string(j, "name");
  if (auto preset = params_by_name(name)) return *preset;
  GroupParams params;
  params.name = name;
  params.p = hex_to_int(req_string(j, "p"));
  params.q = hex_to_int(req_string(j, "q"));
  params.g = hex_to_int(req_string(j, "g"));
  if (params.p != 2 * params.q + 1 || params.g <= 1 || params.g >= params.p) {
    throw PhcError(Err::malformed_request, "inconsistent group parameters");
  }
  return params;
}

// ---- epoch ring ---------------------------------------------------------------

Json ring_to_json(const GroupParams& params, const EpochRing& ring) {
  Json cohorts = Json::array();
  for (const auto& cohort : ring.cohorts) {
    Json c = Json::array();
    for (const auto& y : cohort) c.push_back(int_to_hex(y.v, params.p_bytes()));
    cohorts.push_back(std::move(c));
  }
  return Json{{"issuer_id", ring.issuer_id},
              {"epoch", ring.epoch},
              {"cohorts", std::move(cohorts)},
              {"sig_c", int_to_hex(ring.snapshot_sig.c.v, params.q_bytes())},
              {"sig_s", int_to_hex(ring.snapshot_sig.s.v, params.q_bytes())}};
}

EpochRing ring_from_json(const GroupParams& params, const Json& j) {
  EpochRing ring;
  ring.issuer_id = req_string(j, "issuer_id");
  ring.epoch = req_u64(j, "epoch");
  if (!j.contains("cohorts") || !j.at("cohorts").is_array()) {
    throw PhcError(Err::malformed_request, "ring without cohorts");
  }
  for (const auto& cj : j.at("cohorts")) {
    if (!cj.is_array()) {
      throw PhcError(Err::malformed_request, "cohort is not an array");
    }
    std::vector<GroupElement> cohort;
    for (const auto& yj : cj) {
      if (!yj.is_string()) {
        throw PhcError(Err::malformed_request, "ring member is not hex");
      }
      mpz_class v = hex_to_int(yj.get<std::string>());
      if (!element_in_range(params, v)) {
        throw PhcError(Err::malformed_request, "ring member out of range");
      }
      cohort.push_back(GroupElement{v});
    }
    ring.cohorts.push_back(std::move(cohort));
  }
  ring.snapshot_sig.c = Scalar{scalar_from_hex(params, j, "sig_c")};
  ring.snapshot_sig.s = Scalar{scalar_from_hex(params, j, "sig_s")};
  return ring;
}

// ---- presentation ---------------------------------------------------------------

Json presentation_to_json(const GroupParams& params, const Presentation& p) {
  Json s = Json::array();
  for (const auto& si : p.sig.s) {
    s.push_back(int_to_hex(si.v, params.q_bytes()));
  }
  return Json{{"issuer_id", p.issuer_id},
              {"epoch", p.epoch},
              {"cohort_index", p.cohort_index},
              {"c1", int_to_hex(p.sig.c1.v, params.q_bytes())},
              {"s", std::move(s)},
              {"tag", int_to_hex(p.sig.tag.v, params.p_bytes())}};
}

Presentation presentation_from_json(const GroupParams& params, const Json& j) {
  Presentation p;
  p.issuer_id = req_string(j, "issuer_id");
  p.epoch = req_u64(j, "epoch");
  p.cohort_index = static_cast<uint32_t>(req_u64(j, "cohort_index"));
  p.sig.c1 = Scalar{scalar_from_hex(params, j, "c1")};
  if (!j.contains("s") || !j.at("s").is_array()) {
    throw PhcError(Err::malformed_request, "presentation without responses");
  }
  for (const auto& sj : j.at("s")) {
    if (!sj.is_string()) {
      throw PhcError(Err::malformed_request, "response is not hex");
    }
    mpz_class v = hex_to_int(sj.get<std::string>());
    if (v < 0 || v >= params.q) {
      throw PhcError(Err::malformed_request, "response out of scalar range");
    }
    p.sig.s.push_back(Scalar{v});
  }
  p.sig.tag = GroupElement{element_from_hex(params, j, "tag")};
  return p;
}

// ---- delegation attestation ------------------------------------------------------

Json attestation_to_json(const GroupParams& params,
                         const DelegationAttestation& att) {
  return Json{{"issuer_id", att.issuer_id},
              {"pseudonym_scope", att.pseudonym_scope},
              {"tag", int_to_hex(att.tag.v, params.p_bytes())},
              {"agent_pub", int_to_hex(att.agent_pub.v, params.p_bytes())},
              {"scope", att.scope},
              {"expiry", att.expiry},
              {"sig_c", int_to_hex(att.sig.c.v, params.q_bytes())},
              {"sig_s", int_to_hex(att.sig.s.v, params.q_bytes())}};
}

DelegationAttestation attestation_from_json(const GroupParams& params,
                                            const Json& j) {
  DelegationAttestation att;
  att.issuer_id = req_string(j, "issuer_id");
  att.pseudonym_scope = req_string(j, "pseudonym_scope");
  att.tag = GroupElement{element_from_hex(params, j, "tag")};
  att.agent_pub = GroupElement{element_from_hex(params, j, "agent_pub")};
  att.scope = req_string(j, "scope");
  att.expiry = req_u64(j, "expiry");
  att.sig.c = Scalar{scalar_from_hex(params, j, "sig_c")};
  att.sig.s = Scalar{scalar_from_hex(params, j, "sig_s")};
  return att;
}

// ---- enrollment request ------------------------------------------------------------

Json enrollment_to_json(const GroupParams& params, const EnrollmentRequest& req) {
  Json j{{"root_id", req.root_id},
         {"y", int_to_hex(req.y.v, params.p_bytes())},
         {"recovery_hash", hex_encode(req.recovery_hash)}};
  if (req.reenroll_ticket) j["reenroll_ticket"] = *req.reenroll_ticket;
  return j;
}

EnrollmentRequest enrollment_from_json(const GroupParams& params, const Json& j) {
  EnrollmentRequest req;
  req.root_id = req_string(j, "root_id");
  req.y = GroupElement{element_from_hex(params, j, "y")};
  Bytes rh = hex_decode(req_string(j, "recovery_hash"));
  if (rh.size() != req.recovery_hash.size()) {
    throw PhcError(Err::malformed_request, "recovery_hash must be 32 bytes");
  }
  std::copy(rh.begin(), rh.end(), req.recovery_hash.begin());
  if (j.contains("reenroll_ticket")) {
    req.reenroll_ticket = req_string(j, "reenroll_ticket");
  }
  return req;
}

}  // namespace phc::wire
