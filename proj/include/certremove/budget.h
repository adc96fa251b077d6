// Copyright 2026 The certremove Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CERTREMOVE_BUDGET_H_
#define CERTREMOVE_BUDGET_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace certremove {

// c = sqrt(2 log(1.5 / delta)), the noise multiplier for which Gaussian
// objective perturbation with standard deviation c * eps' / eps gives
// (eps, delta)-certified removal for a gradient residual of norm eps'.
double NoiseMultiplier(double delta);

enum class BudgetScheme {
  kGaussian,        // (eps, delta): beta_max = sigma * eps / c
  kSphericalGamma,  // pure eps: beta_max = eps', the declared residual bound
};

struct LedgerEntry {
  std::int64_t timestamp_ms = 0;
  Eigen::Index batch_size = 0;
  double increment = 0.0;
};

enum class ChargeDecision { kAccepted, kRetrainRequired };

// Running sum of gradient-residual bounds against the removal budget.
//
// Guarantees: while beta_accumulated <= beta_max, the model obtained after
// the recorded removals is (epsilon, delta)-certified with respect to
// retraining on the remaining data. A single delta covers the whole sequence
// of removals; it is not split per removal. Retraining draws a fresh b and
// starts a fresh ledger; composing guarantees across retrain cycles is the
// operator's responsibility.
class BudgetLedger {
 public:
  // An empty Gaussian ledger with zero budget.
  BudgetLedger() = default;

  // Requires epsilon > 0, 0 < delta < 1.5, sigma > 0.
  static BudgetLedger Make(double epsilon, double delta, double sigma);
  // A ledger for a model trained without noise: beta_max = 0, so only
  // removals with a zero residual bound (least squares) are accepted.
  static BudgetLedger MakeNoiseless(double epsilon, double delta);
  // Pure eps-certified removal with perturbation drawn by
  // SamplePerturbationSphericalGamma(d, epsilon, epsilon_prime, .).
  static BudgetLedger MakeSphericalGamma(double epsilon, double epsilon_prime);
  // Rebuilds a persisted ledger. Throws Error(kParameter) if the fields are
  // inconsistent or the entries do not replay to beta_accumulated exactly.
  static BudgetLedger Restore(BudgetScheme scheme, double epsilon, double delta,
                              double sigma, double c_value, double beta_max,
                              double beta_accumulated,
                              std::vector<LedgerEntry> entries);

  // Accepts iff beta_accumulated + increment <= beta_max; a rejected charge
  // leaves the ledger untouched. Throws Error(kParameter) on a negative or
  // non-finite increment.
  ChargeDecision TryCharge(double increment, Eigen::Index batch_size = 1);
  bool WouldAccept(double increment) const;

  // beta_max - beta_accumulated.
  double Remaining() const { return beta_max_ - beta_accumulated_; }

  BudgetScheme scheme() const { return scheme_; }
  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  double sigma() const { return sigma_; }
  double c_value() const { return c_value_; }
  double beta_max() const { return beta_max_; }
  double beta_accumulated() const { return beta_accumulated_; }
  const std::vector<LedgerEntry>& entries() const { return entries_; }

 private:
  BudgetScheme scheme_ = BudgetScheme::kGaussian;
  double epsilon_ = 0.0;
  double delta_ = 0.0;
  double sigma_ = 0.0;
  double c_value_ = 0.0;
  double beta_max_ = 0.0;
  double beta_accumulated_ = 0.0;
  std::vector<LedgerEntry> entries_;
};

// floor((beta_max - beta_accumulated) / typical_increment).
std::int64_t SupportedRemovalsEstimate(const BudgetLedger& ledger,
                                       double typical_increment);

struct PrivacyParams {
  double epsilon = 0.0;
  double delta = 0.0;
};

// A linear model with (eps_cr, delta_cr)-certified removal on top of an
// (eps_dp, delta_dp)-differentially private feature extractor is
// (eps_dp + eps_cr, delta_dp + delta_cr)-certified.
PrivacyParams ComposeWithDpExtractor(double eps_dp, double delta_dp,
                                     double eps_cr, double delta_cr);

}  // namespace certremove

#endif  // CERTREMOVE_BUDGET_H_
