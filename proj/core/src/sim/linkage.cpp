#include "phc/sim/linkage.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "phc/encode.hpp"
#include "phc/errors.hpp"
#include "phc/issuer.hpp"
#include "phc/lsag.hpp"
#include "phc/wallet.hpp"

namespace phc::sim {

Bytes linkage_context_bytes(Mutation mutation, std::string_view issuer_id,
                            std::string_view service_id,
                            std::string_view scope) {
  switch (mutation) {
    case Mutation::none:
      return presentation_context_bytes(issuer_id, service_id, scope);
    case Mutation::shared_ctx:
      // service identity missing: tags collide across services
      return presentation_context_bytes(issuer_id, "", scope);
    case Mutation::tag_reuse:
      // one global context: a single tag everywhere
      return presentation_context_bytes(issuer_id, "", "");
  }
  return presentation_context_bytes(issuer_id, service_id, scope);
}

bool LinkageReport::within_3_sigma() const {
  return std::abs(accuracy_mean - baseline_mean) <= 3.0 * baseline_sigma;
}

Json LinkageReport::to_json() const {
  Json trials_j = Json::array();
  for (double a : per_trial) trials_j.push_back(a);
  return Json{{"accuracy_mean", accuracy_mean},
              {"baseline_mean", baseline_mean},
              {"baseline_sigma", baseline_sigma},
              {"trials", trials},
              {"n_people", n_people},
              {"within_3_sigma", within_3_sigma()},
              {"per_trial", trials_j}};
}

namespace {

struct TranscriptEntry {
  std::string tag_hex;
  uint32_t cohort_index = 0;
  size_t true_person = 0;  // harness ground truth, never shown to the adversary
};

/// One column of the adversary's view: shuffled (tag, cohort) pairs.
std::vector<TranscriptEntry> shuffled(std::vector<TranscriptEntry> entries,
                                      Drbg& rng) {
  for (size_t i = entries.size(); i > 1; --i) {
    size_t j = rng.below(static_cast<unsigned long>(i)).get_ui();
    std::swap(entries[i - 1], entries[j]);
  }
  return entries;
}

/// Generic matching adversary: exact tag equality first (catches
/// context-derivation regressions), then uniform within-cohort pairing.
double adversary_accuracy(const std::vector<TranscriptEntry>& a,
                          const std::vector<TranscriptEntry>& b, Drbg& rng) {
  std::map<std::string, size_t> b_by_tag;
  for (size_t i = 0; i < b.size(); ++i) b_by_tag[b[i].tag_hex] = i;

  size_t correct = 0;
  std::vector<bool> a_matched(a.size(), false), b_matched(b.size(), false);

  for (size_t i = 0; i < a.size(); ++i) {
    auto hit = b_by_tag.find(a[i].tag_hex);
    if (hit != b_by_tag.end()) {
      a_matched[i] = true;
      b_matched[hit->second] = true;
      if (a[i].true_person == b[hit->second].true_person) correct += 1;
    }
  }

  // remaining candidates pair uniformly within each cohort
  std::map<uint32_t, std::vector<size_t>> a_rest, b_rest;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a_matched[i]) a_rest[a[i].cohort_index].push_back(i);
  }
  for (size_t i = 0; i < b.size(); ++i) {
    if (!b_matched[i]) b_rest[b[i].cohort_index].push_back(i);
  }
  for (auto& [cohort, a_idx] : a_rest) {
    auto& b_idx = b_rest[cohort];
    for (size_t i = a_idx.size(); i > 1; --i) {
      size_t j = rng.below(static_cast<unsigned long>(i)).get_ui();
      std::swap(a_idx[i - 1], a_idx[j]);
    }
    size_t pairs = std::min(a_idx.size(), b_idx.size());
    for (size_t i = 0; i < pairs; ++i) {
      if (a[a_idx[i]].true_person == b[b_idx[i]].true_person) correct += 1;
    }
  }
  return a.empty() ? 0.0 : static_cast<double>(correct) / a.size();
}

}  // namespace

LinkageReport linkage_experiment(const LinkageConfig& config) {
  auto preset = params_by_name(config.params_preset);
  if (!preset) {
    throw std::invalid_argument("unknown params preset: " +
                                config.params_preset);
  }
  const GroupParams params = *preset;
  if (params.p_bits() < 256) {
    throw PhcError(Err::toy_params_rejected,
                   "linkage experiment needs >= 256-bit parameters");
  }
  if (config.n_people < 100) {
    throw std::invalid_argument("linkage experiment needs n_people >= 100");
  }
  if (config.trials < 30) {
    throw std::invalid_argument("linkage experiment needs >= 30 trials");
  }

  const std::string scope = "account-registration";
  const std::array<std::string, 2> service_ids = {"svc-a", "svc-b"};

  LinkageReport report;
  report.trials = config.trials;
  report.n_people = config.n_people;

  Drbg master(config.seed);
  double accuracy_sum = 0.0;
  double cohort_count_sum = 0.0;

  for (uint32_t trial = 0; trial < config.trials; ++trial) {
    Drbg rng = master.fork("trial-" + std::to_string(trial));
    IssuerOptions opts;
    opts.cohort_capacity = config.cohort_capacity;
    Issuer issuer = Issuer::create("issuer-0", params, rng.u64(), opts);

    struct PersonState {
      Credential cred;
    };
    std::vector<PersonState> people;
    for (uint32_t i = 0; i < config.n_people; ++i) {
      auto [kp, recovery] = create_identity(params, rng);
      EnrollmentRequest req;
      req.root_id = "person-" + std::to_string(i);
      req.y = kp.y;
      req.recovery_hash = sha256(recovery);
      EnrollmentReceipt receipt = issuer.enroll(req);
      Credential cred;
      cred.issuer_id = issuer.id();
      cred.params_name = params.name;
      cred.epoch = receipt.epoch;
      cred.keypair = kp;
      cred.cohort_index = receipt.cohort_index;
      cred.position = receipt.position;
      cred.recovery_code = recovery;
      people.push_back(PersonState{std::move(cred)});
    }

    EpochRing ring = issuer.current_ring();
    std::array<std::vector<TranscriptEntry>, 2> transcripts;
    for (size_t s = 0; s < service_ids.size(); ++s) {
      for (size_t i = 0; i < people.size(); ++i) {
        const Credential& cred = people[i].cred;
        Bytes ctx = linkage_context_bytes(config.mutation, cred.issuer_id,
                                          service_ids[s], scope);
        GroupElement h = lsag_context_base(params, ctx);
        GroupElement tag = pow_e(params, h, cred.keypair.x);
        transcripts[s].push_back(
            TranscriptEntry{int_to_hex(tag.v, params.p_bytes()),
                            cred.cohort_index, i});
      }
    }

    // Spot-check that the transcript tags are exactly what full
    // presentations produce, including under mutation.
    for (size_t probe = 0; probe < 4 && probe < people.size(); ++probe) {
      size_t i = (probe * 37) % people.size();
      const Credential& cred = people[i].cred;
      Bytes ctx = linkage_context_bytes(config.mutation, cred.issuer_id,
                                        service_ids[0], scope);
      Bytes msg = presentation_message_bytes(service_ids[0], scope,
                                             rng.bytes(16));
      const auto& cohort = ring.cohorts[cred.cohort_index];
      size_t position = 0;
      for (size_t p = 0; p < cohort.size(); ++p) {
        if (cohort[p].v == cred.keypair.y.v) position = p;
      }
      RingSignature sig = lsag_sign(params, cohort, position, cred.keypair.x,
                                    ctx, msg, rng);
      LsagResult res = lsag_verify(params, cohort, ctx, msg, sig);
      if (!res.valid ||
          int_to_hex(res.tag.v, params.p_bytes()) !=
              transcripts[0][i].tag_hex) {
        throw PhcError(Err::internal_error,
                       "linkage transcript diverged from live presentations");
      }
    }

    std::set<uint32_t> occupied;
    for (const auto& e : transcripts[0]) occupied.insert(e.cohort_index);
    cohort_count_sum += static_cast<double>(occupied.size());

    Drbg adversary_rng = rng.fork("adversary");
    double acc = adversary_accuracy(shuffled(transcripts[0], rng),
                                    shuffled(transcripts[1], rng),
                                    adversary_rng);
    report.per_trial.push_back(acc);
    accuracy_sum += acc;
  }

  report.accuracy_mean = accuracy_sum / config.trials;
  double mean_cohorts = cohort_count_sum / config.trials;
  report.baseline_mean = mean_cohorts / config.n_people;
  report.baseline_sigma = std::sqrt(mean_cohorts) / config.n_people /
                          std::sqrt(static_cast<double>(config.trials));
  return report;
}

}  // namespace phc::sim
