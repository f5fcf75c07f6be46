// phc: command-line front end for the personhood-credential toolkit.
//
// Machine-readable JSON goes to stdout, prose to stderr. Exit code 0 on
// success; protocol errors map to the per-class codes in
// docs/protocol.md.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "phc/encode.hpp"
#include "phc/errors.hpp"
#include "phc/event_log.hpp"
#include "phc/group.hpp"
#include "phc/net/client.hpp"
#include "phc/net/issuer_server.hpp"
#include "phc/net/service_server.hpp"
#include "phc/sim/linkage.hpp"
#include "phc/sim/world.hpp"
#include "phc/wallet.hpp"
#include "phc/wire.hpp"

namespace {

using phc::Json;

void print_result(const Json& j) {
  std::cout << j.dump(2) << std::endl;
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : fallback;
}

phc::GroupParams resolve_params(const std::string& name) {
  auto p = phc::params_by_name(name);
  if (!p) {
    throw phc::PhcError(phc::Err::malformed_request,
                        "unknown parameter preset: " + name);
  }
  return *p;
}

struct HostPort {
  std::string host = "127.0.0.1";
  int port = 0;
};

HostPort split_url(const std::string& url) {
  // accepts host:port or http://host:port
  std::string rest = url;
  if (rest.rfind("http://", 0) == 0) rest = rest.substr(7);
  auto colon = rest.rfind(':');
  if (colon == std::string::npos) {
    throw phc::PhcError(phc::Err::malformed_request,
                        "expected host:port, got " + url);
  }
  HostPort hp;
  hp.host = rest.substr(0, colon);
  hp.port = std::stoi(rest.substr(colon + 1));
  return hp;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw phc::PhcError(phc::Err::malformed_file, "cannot open " + path);
  }
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw phc::PhcError(phc::Err::malformed_file, path + " is not JSON");
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  out << text;
  if (!out) {
    throw phc::PhcError(phc::Err::internal_error, "cannot write " + path);
  }
}

// ---- issuer ------------------------------------------------------------------

int cmd_issuer_init(const std::string& id, const std::string& params_name,
                    uint64_t seed, const std::string& data_dir,
                    uint32_t cohort_capacity, bool no_enforce) {
  phc::IssuerOptions opts;
  opts.cohort_capacity = cohort_capacity;
  opts.enforce_one_per_person = !no_enforce;
  phc::Issuer issuer =
      phc::Issuer::create(id, resolve_params(params_name), seed, opts);
  phc::EventLog log(std::filesystem::path(data_dir) / "issuer.log");
  log.append(issuer.creation_event());
  std::cerr << "initialized issuer '" << id << "' in " << data_dir << "\n";
  print_result(Json{{"issuer_id", id},
                    {"params", params_name},
                    {"epoch", issuer.current_epoch()},
                    {"log", log.path().string()}});
  return 0;
}

phc::Issuer load_issuer(const std::string& data_dir) {
  auto path = std::filesystem::path(data_dir) / "issuer.log";
  auto events = phc::EventLog::read_all(path);
  if (events.empty()) {
    throw phc::PhcError(phc::Err::malformed_file,
                        "no issuer state in " + data_dir + " (run issuer init)");
  }
  return phc::Issuer::replay(events);
}

int cmd_issuer_serve(const std::string& data_dir, const std::string& bind,
                     int port) {
  phc::Issuer issuer = load_issuer(data_dir);
  phc::EventLog log(std::filesystem::path(data_dir) / "issuer.log");
  issuer.set_event_sink(
      [&log](const std::vector<Json>& evs) { log.append_batch(evs); });

  httplib::Server srv;
  phc::net::attach_issuer_routes(srv, issuer);
  std::cerr << "issuer '" << issuer.id() << "' (epoch "
            << issuer.current_epoch() << ") listening on " << bind << ":"
            << port << "\n";
  std::cerr << "admin routes are unauthenticated; keep the bind loopback\n";
  if (!srv.listen(bind, port)) {
    throw phc::PhcError(phc::Err::internal_error, "cannot bind server");
  }
  return 0;
}

int cmd_issuer_advance(const std::string& data_dir) {
  phc::Issuer issuer = load_issuer(data_dir);
  phc::EventLog log(std::filesystem::path(data_dir) / "issuer.log");
  issuer.set_event_sink(
      [&log](const std::vector<Json>& evs) { log.append_batch(evs); });
  uint64_t epoch = issuer.advance_epoch();
  std::cerr << "advanced to epoch " << epoch << "\n";
  print_result(Json{{"epoch", epoch}});
  return 0;
}

int cmd_issuer_show_ring(const std::string& data_dir, int64_t epoch) {
  phc::Issuer issuer = load_issuer(data_dir);
  uint64_t e = epoch < 0 ? issuer.current_epoch()
                         : static_cast<uint64_t>(epoch);
  print_result(phc::wire::ring_to_json(issuer.params(), issuer.ring(e)));
  return 0;
}

// ---- service ------------------------------------------------------------------

int cmd_service_init(const std::string& id, const std::string& params_name,
                     uint64_t seed, const std::string& data_dir,
                     const std::vector<std::string>& accept, uint32_t limit) {
  phc::GroupParams params = resolve_params(params_name);
  phc::ServiceConfig config;
  config.service_id = id;
  config.account_limit = limit;
  for (const auto& spec : accept) {
    auto eq = spec.find('=');
    if (eq == std::string::npos) {
      throw phc::PhcError(phc::Err::malformed_request,
                          "--accept wants issuer_id=pubkey_hex");
    }
    config.accepted_issuers.push_back(phc::AcceptedIssuer{
        spec.substr(0, eq),
        phc::GroupElement{phc::hex_to_int(spec.substr(eq + 1))}});
  }
  phc::RelyingParty rp = phc::RelyingParty::create(config, params, seed);
  phc::EventLog log(std::filesystem::path(data_dir) / "service.log");
  log.append(rp.creation_event());
  std::cerr << "initialized service '" << id << "' in " << data_dir << "\n";
  print_result(Json{{"service_id", id},
                    {"params", params_name},
                    {"account_limit", limit},
                    {"log", log.path().string()}});
  return 0;
}

phc::RelyingParty load_service(const std::string& data_dir) {
  auto path = std::filesystem::path(data_dir) / "service.log";
  auto events = phc::EventLog::read_all(path);
  if (events.empty()) {
    throw phc::PhcError(phc::Err::malformed_file,
                        "no service state in " + data_dir +
                            " (run service init)");
  }
  return phc::RelyingParty::replay(events);
}

int cmd_service_serve(const std::string& data_dir, const std::string& bind,
                      int port, const std::vector<std::string>& issuer_urls) {
  phc::RelyingParty rp = load_service(data_dir);
  phc::EventLog log(std::filesystem::path(data_dir) / "service.log");
  rp.set_event_sink(
      [&log](const std::vector<Json>& evs) { log.append_batch(evs); });

  // Ring snapshots are transient: refetch from the issuers on startup.
  for (const auto& url : issuer_urls) {
    HostPort hp = split_url(url);
    phc::net::IssuerClient cli(hp.host, hp.port);
    auto info = cli.issuer_key();
    rp.install_ring(cli.ring(rp.params(), info.epoch));
    std::cerr << "installed ring for issuer '" << info.issuer_id << "' epoch "
              << info.epoch << "\n";
  }

  httplib::Server srv;
  phc::net::attach_service_routes(srv, rp);
  std::cerr << "service '" << rp.config().service_id << "' listening on "
            << bind << ":" << port << "\n";
  std::cerr << "admin routes are unauthenticated; keep the bind loopback\n";
  if (!srv.listen(bind, port)) {
    throw phc::PhcError(phc::Err::internal_error, "cannot bind server");
  }
  return 0;
}

int cmd_service_suspend(const std::string& data_dir, const std::string& issuer,
                        const std::string& tag_hex) {
  phc::RelyingParty rp = load_service(data_dir);
  phc::EventLog log(std::filesystem::path(data_dir) / "service.log");
  rp.set_event_sink(
      [&log](const std::vector<Json>& evs) { log.append_batch(evs); });
  rp.suspend(issuer, phc::GroupElement{phc::hex_to_int(tag_hex)});
  std::cerr << "suspended pseudonym under issuer '" << issuer << "'\n";
  print_result(Json{{"suspended", true}});
  return 0;
}

// ---- wallet -------------------------------------------------------------------

int cmd_wallet_new(const std::string& params_name, uint64_t seed,
                   const std::string& out) {
  phc::GroupParams params = resolve_params(params_name);
  phc::Drbg rng(seed);
  auto [kp, recovery] = phc::create_identity(params, rng);
  phc::Credential cred;
  cred.params_name = params.name;
  cred.keypair = kp;
  cred.recovery_code = recovery;
  phc::save_credential(cred, out);
  std::cerr << "wrote new identity to " << out << " (not yet enrolled)\n";
  print_result(Json{{"credential", out},
                    {"y", phc::int_to_hex(kp.y.v, params.p_bytes())}});
  return 0;
}

int cmd_wallet_enroll(const std::string& cred_path, const std::string& issuer_url,
                      const std::string& root_id, const std::string& ticket) {
  phc::Credential cred = phc::load_credential(cred_path);
  phc::GroupParams params = resolve_params(cred.params_name);
  HostPort hp = split_url(issuer_url);
  phc::net::IssuerClient cli(hp.host, hp.port);
  auto info = cli.issuer_key();
  if (!(info.params == params)) {
    throw phc::PhcError(phc::Err::malformed_request,
                        "issuer parameter set differs from the credential's");
  }
  phc::EnrollmentRequest req;
  req.root_id = root_id;
  req.y = cred.keypair.y;
  req.recovery_hash = phc::sha256(cred.recovery_code);
  if (!ticket.empty()) req.reenroll_ticket = ticket;
  phc::EnrollmentReceipt receipt = cli.enroll(params, req);
  cred.issuer_id = info.issuer_id;
  cred.epoch = receipt.epoch;
  cred.cohort_index = receipt.cohort_index;
  cred.position = receipt.position;
  phc::save_credential(cred, cred_path);
  std::cerr << "enrolled with issuer '" << info.issuer_id << "'\n";
  print_result(Json{{"issuer_id", info.issuer_id},
                    {"epoch", receipt.epoch},
                    {"cohort_index", receipt.cohort_index},
                    {"position", receipt.position}});
  return 0;
}

int cmd_wallet_present(const std::string& cred_path,
                       const std::string& issuer_url,
                       const std::string& service_url, const std::string& scope,
                       uint64_t seed) {
  phc::Credential cred = phc::load_credential(cred_path);
  phc::GroupParams params = resolve_params(cred.params_name);
  HostPort ihp = split_url(issuer_url);
  phc::net::IssuerClient issuer(ihp.host, ihp.port);
  phc::EpochRing ring = issuer.ring(params, cred.epoch);

  HostPort shp = split_url(service_url);
  phc::net::ServiceClient service(shp.host, shp.port);
  phc::net::ChallengeInfo ch = service.challenge();

  phc::Drbg rng(seed);
  phc::PresentationContext ctx{cred.issuer_id, ch.service_id, scope, ch.nonce};
  phc::Presentation pres =
      phc::create_presentation(params, cred, ring, ctx, rng);
  std::string account =
      service.register_account(params, pres, scope, ch.nonce);
  std::cerr << "registered verified account at '" << ch.service_id << "'\n";
  print_result(Json{{"account_id", account},
                    {"service_id", ch.service_id},
                    {"scope", scope}});
  return 0;
}

// ---- sim -----------------------------------------------------------------------

int cmd_sim_run(const std::string& config_path, uint64_t seed,
                const std::string& out, const std::string& csv) {
  Json doc = load_json_file(config_path);
  std::string scenario = doc.value("scenario", "run");
  Json result;
  if (scenario == "linkage") {
    phc::sim::LinkageConfig lc;
    lc.seed = seed;
    lc.n_people = doc.value("n_people", 100u);
    lc.trials = doc.value("trials", 30u);
    lc.params_preset = doc.value("params", "test-256");
    lc.cohort_capacity = doc.value("cohort_capacity", 64u);
    lc.mutation =
        phc::sim::mutation_from_string(doc.value("mutation", "none"));
    result = phc::sim::linkage_experiment(lc).to_json();
    if (!csv.empty()) {
      write_text_file(csv, "trial,accuracy\n");
    }
  } else {
    phc::sim::SimConfig config = phc::sim::SimConfig::from_json(doc);
    config.seed = seed;
    phc::sim::Metrics metrics;
    if (scenario == "sockpuppet") {
      metrics = phc::sim::scenario_sockpuppet(config);
    } else if (scenario == "bot-suspension") {
      metrics = phc::sim::scenario_bot_suspension(config);
    } else if (scenario == "delegation") {
      metrics = phc::sim::scenario_delegation(config);
    } else {
      metrics = phc::sim::run(config);
    }
    result = metrics.to_json();
    if (!csv.empty()) write_text_file(csv, metrics.timeseries_csv());
  }
  if (!out.empty()) write_text_file(out, result.dump(2) + "\n");
  print_result(result);
  return 0;
}

int cmd_sim_report(const std::string& in, const std::string& csv) {
  Json doc = load_json_file(in);
  if (!csv.empty() && doc.contains("timeseries")) {
    std::string text = "epoch,step,attacker_active,honest_active,abusive_actions\n";
    for (const auto& pt : doc.at("timeseries")) {
      text += std::to_string(pt.value("epoch", 0)) + "," +
              std::to_string(pt.value("step", 0)) + "," +
              std::to_string(pt.value("attacker_active", 0)) + "," +
              std::to_string(pt.value("honest_active", 0)) + "," +
              std::to_string(pt.value("abusive_actions", 0)) + "\n";
    }
    write_text_file(csv, text);
  }
  Json summary{{"services", doc.value("services", Json::array())},
               {"gated_attacker_share", doc.value("gated_attacker_share", 0.0)},
               {"ungated_attacker_share",
                doc.value("ungated_attacker_share", 0.0)},
               {"abusive_actions_total", doc.value("abusive_actions_total", 0)}};
  print_result(summary);
  return 0;
}

// ---- params ---------------------------------------------------------------------

int cmd_params_generate(unsigned bits, uint64_t seed) {
  phc::Drbg rng(seed);
  phc::GroupParams params = phc::generate_params(bits, rng);
  print_result(phc::wire::params_to_json(params));
  return 0;
}

int cmd_params_show(const std::string& name) {
  print_result(phc::wire::params_to_json(resolve_params(name)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"personhood-credential toolkit"};
  app.set_help_all_flag("--help-all", "expanded help for every subcommand");
  app.set_config("--config-file",
                 env_or("HOME", ".") + "/.phc/config.json",
                 "optional config file; flags override it");
  app.require_subcommand(1);

  std::string default_data_dir = env_or("PHC_DATA_DIR", "./phc-data");
  std::string default_params = env_or("PHC_PARAMS", "test-256");
  std::string default_bind = env_or("PHC_BIND_ADDR", "127.0.0.1");

  int exit_code = 0;
  // ---- issuer
  auto* issuer = app.add_subcommand("issuer", "issuer-side operations");
  {
    auto* init = issuer->add_subcommand("init", "create fresh issuer state");
    auto id = std::make_shared<std::string>("issuer-1");
    auto params = std::make_shared<std::string>(default_params);
    auto seed = std::make_shared<uint64_t>(1);
    auto dir = std::make_shared<std::string>(default_data_dir);
    auto cohort = std::make_shared<uint32_t>(64);
    auto no_enforce = std::make_shared<bool>(false);
    init->add_option("--id", *id, "issuer identifier");
    init->add_option("--params", *params, "parameter preset name");
    init->add_option("--seed", *seed, "issuer randomness seed");
    init->add_option("--data-dir", *dir, "state directory");
    init->add_option("--cohort-capacity", *cohort, "max keys per cohort");
    init->add_flag("--no-enforce-limit", *no_enforce,
                   "disable the one-credential-per-person check");
    init->callback([=, &exit_code] {
      exit_code =
          cmd_issuer_init(*id, *params, *seed, *dir, *cohort, *no_enforce);
    });

    auto* serve = issuer->add_subcommand("serve", "run the issuer HTTP service");
    auto sdir = std::make_shared<std::string>(default_data_dir);
    auto bind = std::make_shared<std::string>(default_bind);
    auto port = std::make_shared<int>(8081);
    serve->add_option("--data-dir", *sdir, "state directory");
    serve->add_option("--bind", *bind, "bind address");
    serve->add_option("--port", *port, "listen port");
    serve->callback(
        [=, &exit_code] { exit_code = cmd_issuer_serve(*sdir, *bind, *port); });

    auto* adv = issuer->add_subcommand("advance-epoch",
                                       "open the next epoch (offline admin)");
    auto adir = std::make_shared<std::string>(default_data_dir);
    adv->add_option("--data-dir", *adir, "state directory");
    adv->callback([=, &exit_code] { exit_code = cmd_issuer_advance(*adir); });

    auto* show = issuer->add_subcommand("show-ring", "print an epoch ring");
    auto shdir = std::make_shared<std::string>(default_data_dir);
    auto epoch = std::make_shared<int64_t>(-1);
    show->add_option("--data-dir", *shdir, "state directory");
    show->add_option("--epoch", *epoch, "epoch (default: current)");
    show->callback(
        [=, &exit_code] { exit_code = cmd_issuer_show_ring(*shdir, *epoch); });
  }

  // ---- service
  auto* service = app.add_subcommand("service", "relying-party operations");
  {
    auto* init = service->add_subcommand("init", "create fresh service state");
    auto id = std::make_shared<std::string>("svc-1");
    auto params = std::make_shared<std::string>(default_params);
    auto seed = std::make_shared<uint64_t>(2);
    auto dir = std::make_shared<std::string>(default_data_dir);
    auto accept = std::make_shared<std::vector<std::string>>();
    auto limit = std::make_shared<uint32_t>(1);
    init->add_option("--id", *id, "service identifier");
    init->add_option("--params", *params, "parameter preset name");
    init->add_option("--seed", *seed, "service randomness seed");
    init->add_option("--data-dir", *dir, "state directory");
    init->add_option("--accept", *accept,
                     "accepted issuer as issuer_id=pubkey_hex (repeatable)");
    init->add_option("--limit", *limit, "verified accounts per credential");
    init->callback([=, &exit_code] {
      exit_code = cmd_service_init(*id, *params, *seed, *dir, *accept, *limit);
    });

    auto* serve = service->add_subcommand("serve", "run the service HTTP API");
    auto sdir = std::make_shared<std::string>(default_data_dir);
    auto bind = std::make_shared<std::string>(default_bind);
    auto port = std::make_shared<int>(8082);
    auto issuers = std::make_shared<std::vector<std::string>>();
    serve->add_option("--data-dir", *sdir, "state directory");
    serve->add_option("--bind", *bind, "bind address");
    serve->add_option("--port", *port, "listen port");
    serve->add_option("--issuer-url", *issuers,
                      "issuer host:port to fetch rings from (repeatable)");
    serve->callback([=, &exit_code] {
      exit_code = cmd_service_serve(*sdir, *bind, *port, *issuers);
    });

    auto* susp = service->add_subcommand("suspend",
                                         "suspend a pseudonym (offline admin)");
    auto spdir = std::make_shared<std::string>(default_data_dir);
    auto issuer_id = std::make_shared<std::string>();
    auto tag = std::make_shared<std::string>();
    susp->add_option("--data-dir", *spdir, "state directory");
    susp->add_option("--issuer", *issuer_id, "issuer id")->required();
    susp->add_option("--tag", *tag, "pseudonym tag hex")->required();
    susp->callback([=, &exit_code] {
      exit_code = cmd_service_suspend(*spdir, *issuer_id, *tag);
    });
  }

  // ---- wallet
  auto* wallet = app.add_subcommand("wallet", "holder-side operations");
  {
    auto* neu = wallet->add_subcommand("new", "create an identity file");
    auto params = std::make_shared<std::string>(default_params);
    auto seed = std::make_shared<uint64_t>(7);
    auto out = std::make_shared<std::string>("credential.json");
    neu->add_option("--params", *params, "parameter preset name");
    neu->add_option("--seed", *seed, "wallet randomness seed");
    neu->add_option("--out", *out, "credential file path");
    neu->callback(
        [=, &exit_code] { exit_code = cmd_wallet_new(*params, *seed, *out); });

    auto* enroll = wallet->add_subcommand("enroll", "enroll with an issuer");
    auto cred = std::make_shared<std::string>("credential.json");
    auto url = std::make_shared<std::string>("127.0.0.1:8081");
    auto root = std::make_shared<std::string>();
    auto ticket = std::make_shared<std::string>();
    enroll->add_option("--cred", *cred, "credential file path");
    enroll->add_option("--issuer-url", *url, "issuer host:port");
    enroll->add_option("--root-id", *root, "verified root identifier")
        ->required();
    enroll->add_option("--ticket", *ticket, "re-enroll ticket");
    enroll->callback([=, &exit_code] {
      exit_code = cmd_wallet_enroll(*cred, *url, *root, *ticket);
    });

    auto* present = wallet->add_subcommand(
        "present", "present the credential and register an account");
    auto pcred = std::make_shared<std::string>("credential.json");
    auto purl = std::make_shared<std::string>("127.0.0.1:8081");
    auto surl = std::make_shared<std::string>("127.0.0.1:8082");
    auto scope = std::make_shared<std::string>("account-registration");
    auto pseed = std::make_shared<uint64_t>(11);
    present->add_option("--cred", *pcred, "credential file path");
    present->add_option("--issuer-url", *purl, "issuer host:port");
    present->add_option("--service-url", *surl, "service host:port");
    present->add_option("--scope", *scope, "registration scope");
    present->add_option("--seed", *pseed, "presentation randomness seed");
    present->callback([=, &exit_code] {
      exit_code = cmd_wallet_present(*pcred, *purl, *surl, *scope, *pseed);
    });

    auto* delegate = wallet->add_subcommand(
        "delegate", "sign a delegation attestation for an agent key");
    auto dcred = std::make_shared<std::string>("credential.json");
    auto sid = std::make_shared<std::string>();
    auto dscope = std::make_shared<std::string>("delegated-task");
    auto pscope = std::make_shared<std::string>("account-registration");
    auto agent = std::make_shared<std::string>();
    auto expiry = std::make_shared<uint64_t>(0);
    auto dseed = std::make_shared<uint64_t>(13);
    delegate->add_option("--cred", *dcred, "credential file path");
    delegate->add_option("--service-id", *sid, "service identifier")
        ->required();
    delegate->add_option("--agent-pub", *agent, "agent public key hex")
        ->required();
    delegate->add_option("--scope", *dscope, "delegated scope");
    delegate->add_option("--pseudonym-scope", *pscope,
                         "scope the pseudonym was registered under");
    delegate->add_option("--expiry", *expiry, "expiry (unix seconds)")
        ->required();
    delegate->add_option("--seed", *dseed, "signing randomness seed");
    delegate->callback([=, &exit_code] {
      phc::Credential cred = phc::load_credential(*dcred);
      phc::GroupParams params = resolve_params(cred.params_name);
      phc::Drbg rng(*dseed);
      phc::PresentationContext ctx{cred.issuer_id, *sid, *pscope, {}};
      auto att = phc::create_delegation(
          params, cred, ctx, phc::GroupElement{phc::hex_to_int(*agent)},
          *dscope, *expiry, rng);
      print_result(phc::wire::attestation_to_json(params, att));
      exit_code = 0;
    });

    auto* revoke = wallet->add_subcommand(
        "revoke", "revoke the credential with its recovery code");
    auto rcred = std::make_shared<std::string>("credential.json");
    auto rurl = std::make_shared<std::string>("127.0.0.1:8081");
    revoke->add_option("--cred", *rcred, "credential file path");
    revoke->add_option("--issuer-url", *rurl, "issuer host:port");
    revoke->callback([=, &exit_code] {
      phc::Credential cred = phc::load_credential(*rcred);
      HostPort hp = split_url(*rurl);
      phc::net::IssuerClient cli(hp.host, hp.port);
      std::string ticket = cli.revoke(cred.recovery_code);
      std::cerr << "revoked; keep the ticket to re-enroll this epoch\n";
      print_result(Json{{"reenroll_ticket", ticket}});
      exit_code = 0;
    });
  }

  // ---- sim
  auto* sim = app.add_subcommand("sim", "ecosystem simulator");
  {
    auto* run = sim->add_subcommand("run", "run a scenario config");
    auto config = std::make_shared<std::string>();
    auto seed = std::make_shared<uint64_t>(0);
    auto out = std::make_shared<std::string>();
    auto csv = std::make_shared<std::string>();
    run->add_option("--config", *config, "scenario JSON path")->required();
    run->add_option("--seed", *seed, "run seed")->required();
    run->add_option("--out", *out, "write the JSON report here too");
    run->add_option("--csv", *csv, "write the time-series CSV here");
    run->callback([=, &exit_code] {
      exit_code = cmd_sim_run(*config, *seed, *out, *csv);
    });

    auto* report = sim->add_subcommand("report", "summarize a saved report");
    auto in = std::make_shared<std::string>();
    auto rcsv = std::make_shared<std::string>();
    report->add_option("--in", *in, "report JSON path")->required();
    report->add_option("--csv", *rcsv, "write the time-series CSV here");
    report->callback(
        [=, &exit_code] { exit_code = cmd_sim_report(*in, *rcsv); });
  }

  // ---- params
  auto* params_cmd = app.add_subcommand("params", "group parameter tools");
  {
    auto* gen = params_cmd->add_subcommand("generate", "search a safe prime");
    auto bits = std::make_shared<unsigned>(256);
    auto seed = std::make_shared<uint64_t>(1);
    gen->add_option("--bits", *bits, "modulus bit length (even, >= 16)");
    gen->add_option("--seed", *seed, "search seed");
    gen->callback(
        [=, &exit_code] { exit_code = cmd_params_generate(*bits, *seed); });

    auto* show = params_cmd->add_subcommand("show", "print a named preset");
    auto name = std::make_shared<std::string>(default_params);
    show->add_option("--name", *name, "preset name");
    show->callback([=, &exit_code] { exit_code = cmd_params_show(*name); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const phc::PhcError& e) {
    std::cerr << "error [" << phc::err_code(e.code()) << "]: " << e.what()
              << "\n";
    return phc::err_exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
