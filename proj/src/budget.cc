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

#include "certremove/budget.h"

#include <chrono>
#include <cmath>
#include <string>

#include "certremove/error.h"

namespace certremove {
namespace {

std::int64_t NowMillis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

void CheckEpsilonDelta(double epsilon, double delta) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kParameter, "epsilon must be finite and > 0");
  }
  if (!(delta > 0.0) || !(delta < 1.5)) {
    throw Error(ErrorCode::kParameter, "delta must lie in (0, 1.5)");
  }
}

}  // namespace

double NoiseMultiplier(double delta) {
  if (!(delta > 0.0) || !(delta < 1.5)) {
    throw Error(ErrorCode::kParameter, "delta must lie in (0, 1.5)");
  }
  return std::sqrt(2.0 * std::log(1.5 / delta));
}

BudgetLedger BudgetLedger::Make(double epsilon, double delta, double sigma) {
  CheckEpsilonDelta(epsilon, delta);
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kParameter, "sigma must be finite and > 0");
  }
  BudgetLedger ledger;
  ledger.scheme_ = BudgetScheme::kGaussian;
  ledger.epsilon_ = epsilon;
  ledger.delta_ = delta;
  ledger.sigma_ = sigma;
  ledger.c_value_ = NoiseMultiplier(delta);
  ledger.beta_max_ = sigma * epsilon / ledger.c_value_;
  return ledger;
}

BudgetLedger BudgetLedger::MakeNoiseless(double epsilon, double delta) {
  CheckEpsilonDelta(epsilon, delta);
  BudgetLedger ledger;
  ledger.scheme_ = BudgetScheme::kGaussian;
  ledger.epsilon_ = epsilon;
  ledger.delta_ = delta;
  ledger.c_value_ = NoiseMultiplier(delta);
  return ledger;
}

BudgetLedger BudgetLedger::MakeSphericalGamma(double epsilon,
                                              double epsilon_prime) {
  if (!(epsilon > 0.0) || !(epsilon_prime > 0.0)) {
    throw Error(ErrorCode::kParameter, "epsilon and epsilon_prime must be > 0");
  }
  BudgetLedger ledger;
  ledger.scheme_ = BudgetScheme::kSphericalGamma;
  ledger.epsilon_ = epsilon;
  ledger.beta_max_ = epsilon_prime;
  return ledger;
}

BudgetLedger BudgetLedger::Restore(BudgetScheme scheme, double epsilon,
                                   double delta, double sigma, double c_value,
                                   double beta_max, double beta_accumulated,
                                   std::vector<LedgerEntry> entries) {
  BudgetLedger ledger;
  if (scheme == BudgetScheme::kGaussian) {
    ledger = sigma > 0.0 ? Make(epsilon, delta, sigma)
                         : MakeNoiseless(epsilon, delta);
    if (ledger.c_value_ != c_value || ledger.beta_max_ != beta_max) {
      throw Error(ErrorCode::kParameter,
                  "ledger c_value/beta_max do not match epsilon, delta, sigma");
    }
  } else {
    ledger = MakeSphericalGamma(epsilon, beta_max);
  }
  double replay = 0.0;
  for (const LedgerEntry& e : entries) {
    if (!(e.increment >= 0.0)) {
      throw Error(ErrorCode::kParameter, "ledger entry has a negative increment");
    }
    replay += e.increment;
  }
  if (replay != beta_accumulated) {
    throw Error(ErrorCode::kParameter,
                "ledger entries do not replay to beta_accumulated");
  }
  if (beta_accumulated > ledger.beta_max_) {
    throw Error(ErrorCode::kParameter, "ledger is over budget");
  }
  ledger.beta_accumulated_ = beta_accumulated;
  ledger.entries_ = std::move(entries);
  return ledger;
}

bool BudgetLedger::WouldAccept(double increment) const {
  return beta_accumulated_ + increment <= beta_max_;
}

ChargeDecision BudgetLedger::TryCharge(double increment,
                                       Eigen::Index batch_size) {
  if (!(increment >= 0.0) || !std::isfinite(increment)) {
    throw Error(ErrorCode::kParameter,
                "increment must be finite and >= 0, got " + std::to_string(increment));
  }
  if (!WouldAccept(increment)) return ChargeDecision::kRetrainRequired;
  beta_accumulated_ += increment;
  entries_.push_back(LedgerEntry{NowMillis(), batch_size, increment});
  return ChargeDecision::kAccepted;
}

std::int64_t SupportedRemovalsEstimate(const BudgetLedger& ledger,
                                       double typical_increment) {
  if (!(typical_increment > 0.0)) {
    throw Error(ErrorCode::kParameter, "typical increment must be > 0");
  }
  const double remaining = std::max(0.0, ledger.Remaining());
  return static_cast<std::int64_t>(std::floor(remaining / typical_increment));
}

PrivacyParams ComposeWithDpExtractor(double eps_dp, double delta_dp,
                                     double eps_cr, double delta_cr) {
  if (!(eps_dp >= 0.0) || !(delta_dp >= 0.0) || !(eps_cr >= 0.0) ||
      !(delta_cr >= 0.0)) {
    throw Error(ErrorCode::kParameter, "privacy parameters must be >= 0");
  }
  return PrivacyParams{eps_dp + eps_cr, delta_dp + delta_cr};
}

}  // namespace certremove
