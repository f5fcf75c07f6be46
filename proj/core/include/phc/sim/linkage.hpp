#ifndef PHC_SIM_LINKAGE_HPP
#define PHC_SIM_LINKAGE_HPP

#include "phc/bytes.hpp"
#include "phc/sim/config.hpp"

namespace phc::sim {

/// Colluding-adversary unlinkability experiment. Per trial: one issuer,
/// two services; everyone enrolls and presents at both services. The
/// adversary receives the issuer's persisted state plus both services'
/// transcripts (pseudonym tag + cohort index, arrival order shuffled
/// away) and tries to match service-A pseudonyms to service-B
/// pseudonyms. Its toolbox is equality and structure comparison only;
/// no discrete-log computation.
struct LinkageConfig {
  uint64_t seed = 1;
  uint32_t n_people = 100;
  uint32_t trials = 30;
  std::string params_preset = "test-256";
  uint32_t cohort_capacity = 64;
  Mutation mutation = Mutation::none;
};

struct LinkageReport {
  double accuracy_mean = 0.0;
  /// Analytic within-cohort random-matching baseline: a uniform
  /// per-cohort permutation fixes one element per cohort in expectation,
  /// so the mean is (#cohorts)/n and the trial variance (#cohorts)/n^2.
  double baseline_mean = 0.0;
  double baseline_sigma = 0.0;  // sigma of the mean over `trials`
  uint32_t trials = 0;
  uint32_t n_people = 0;
  std::vector<double> per_trial;

  bool within_3_sigma() const;
  Json to_json() const;
};

/// Context derivation under test; the mutations mirror real deployment
/// mistakes (service identity dropped, or one global tag context).
Bytes linkage_context_bytes(Mutation mutation, std::string_view issuer_id,
                            std::string_view service_id,
                            std::string_view scope);

/// Throws toy-params-rejected below 256-bit parameters and
/// std::invalid_argument for n_people < 100 or trials < 30.
LinkageReport linkage_experiment(const LinkageConfig& config);

}  // namespace phc::sim

#endif
