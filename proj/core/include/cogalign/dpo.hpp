#pragma once

#include <span>
#include <string>
#include <vector>

#include "cogalign/manifest.hpp"
#include "cogalign/random.hpp"

namespace cogalign::dpo {

// The four log-probabilities entering one preference term.
struct PreferenceLogProbs {
  double logp_theta_pos = 0;
  double logp_theta_neg = 0;
  double logp_ref_pos = 0;
  double logp_ref_neg = 0;
};

struct DpoConfig {
  double beta = 1.0;  // deviation control against the frozen reference
  double learning_rate = 0.5;
  int epochs = 400;
  uint64_t seed = 0;
};

// Numerically stable -log sigmoid(x) = softplus(-x); no overflow for
// |x| <= 700.
double neg_log_sigmoid(double x);

// Mean over the batch of -log sigmoid(r_delta), with
// r_delta = beta * [(logp_theta_pos - logp_ref_pos)
//                   - (logp_theta_neg - logp_ref_neg)].
// Throws DomainError on an empty batch, non-finite or positive log-probs,
// or beta <= 0.
double dpo_loss(std::span<const PreferenceLogProbs> batch, double beta);

// ---------------------------------------------------------------------------
// Toy policy: linear scores over handcrafted candidate-response features,
// softmax-normalized over each instance's candidate set. A desk-scale
// stand-in for the VLM policy.
// ---------------------------------------------------------------------------

struct CandidateSet {
  std::vector<std::vector<double>> features;  // one vector per candidate
  int pos_index = 0;
  int neg_index = 1;
};

struct ToyPolicy {
  std::vector<double> weights;

  double score(std::span<const double> phi) const;
  // log softmax over the candidate set; sums to 0 in probability space.
  std::vector<double> log_probs(const CandidateSet& set) const;
};

// Batch DPO loss for the toy policy against a frozen reference.
double dpo_loss(std::span<const CandidateSet> batch, const ToyPolicy& theta,
                const ToyPolicy& ref, double beta);

// Exact analytic gradient of the batch DPO loss w.r.t. theta's weights.
std::vector<double> dpo_gradient(std::span<const CandidateSet> batch,
                                 const ToyPolicy& theta, const ToyPolicy& ref,
                                 double beta);

// Mean negative log-probability of the chosen candidates only.
double sft_loss(std::span<const CandidateSet> batch, const ToyPolicy& theta);

std::vector<double> sft_gradient(std::span<const CandidateSet> batch,
                                 const ToyPolicy& theta);

// Fraction of sets whose chosen candidate outscores the rejected one; exact
// ties credit 0.5.
double pairwise_accuracy(std::span<const CandidateSet> batch,
                         const ToyPolicy& policy);

struct TrainReport {
  std::string method;  // "dpo" | "sft"
  double beta = 0;
  double learning_rate = 0;
  int epochs = 0;
  uint64_t seed = 0;
  double heldout_pairwise_accuracy = 0;
  double final_loss = 0;
  ToyPolicy policy;
};

// Full-batch gradient descent from zero-initialized weights; the reference
// policy is the frozen initial policy. Data splits 80/20 (train/held-out) by
// a seed-derived shuffle. Deterministic given (data, config).
TrainReport train_toy(std::span<const CandidateSet> dataset,
                      const std::string& method, const DpoConfig& config);

struct GradCheckReport {
  int points = 0;
  double max_rel_error = 0;
};

// Central finite differences (step h) against the analytic gradient at
// `points` random weight vectors.
GradCheckReport gradient_check(std::span<const CandidateSet> batch, double beta,
                               uint64_t seed, int points = 50, double h = 1e-5);

// Deterministic synthetic candidate sets for self-contained numeric checks.
std::vector<CandidateSet> synthetic_candidate_sets(int n, int dim,
                                                   int candidates,
                                                   uint64_t seed);

}  // namespace cogalign::dpo
