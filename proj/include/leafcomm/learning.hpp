/*! \file learning.hpp
  \brief PAC learning of formulas over XOR leaves: exhaustive weighted parity
  learner plus multiplicative-weights boosting into a weighted majority vote.
*/
#pragma once

#include "leafcomm/common.hpp"
#include "leafcomm/hardness.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace leafcomm {

struct SignedParity {
  u64 mask = 0;
  bool negated = false;
  bool eval(u64 x) const { return parity(x & mask) != negated; }
  bool operator==(const SignedParity& o) const = default;
};

struct WeightedVote {
  SignedParity h;
  Rational weight;
};

/// A single signed parity, or a vote that outputs 1 iff the weighted sum of +-1 votes is positive.
struct Hypothesis {
  bool is_vote = false;
  SignedParity single;
  std::vector<WeightedVote> votes;

  bool eval(u64 x) const;
  static Hypothesis parity_hypothesis(SignedParity h);
  static Hypothesis vote(std::vector<WeightedVote> votes);
};

struct Example {
  u64 x = 0;
  bool y = false;
};

/// Draws (x, target(x)) with x from a weight table or uniform over n bits.
class ExampleOracle {
 public:
  ExampleOracle(int n, std::function<bool(u64)> target, u64 seed);
  ExampleOracle(const Distribution& d, std::function<bool(u64)> target, u64 seed);

  int n() const { return n_; }
  Example draw();
  std::vector<Example> draw_many(std::size_t count);
  bool target(u64 x) const { return target_(x); }

 private:
  int n_;
  std::function<bool(u64)> target_;
  std::vector<double> cumulative_;  // empty for uniform
  Rng rng_;
};

struct WeakFit {
  SignedParity h;
  Rational error;  // weighted error of h
};

/// Minimizes weighted error over all 2^(n+1) signed parities; ties to the smallest mask, then positive sign.
WeakFit weak_learn_parity(int n, const std::vector<Example>& samples, const std::vector<Rational>& weights);

struct BoostOptions {
  Rational eps = Rational(1, 10);
  Rational delta = Rational(1, 10);
  double advantage_floor = 0;   // beta: caller-asserted weak advantage
  int max_rounds = 256;
  std::size_t sample_budget = 200000;
  bool strict_floor = false;    // throw when a round's advantage is below the floor
};

struct BoostRound {
  SignedParity h;
  Rational error;               // weighted error on the reweighted sample
  Rational training_error;      // running vote on the training sample
  double loss_bound = 1;        // prod_t 2 sqrt(e_t (1 - e_t)), bounds training_error, nonincreasing
  bool below_floor = false;
};

struct BoostReport {
  Hypothesis hypothesis;
  std::vector<BoostRound> rounds;
  std::size_t train_size = 0, holdout_size = 0;
  Rational training_error;
  Rational holdout_error;
  double min_advantage = 0.5;
  int floor_violations = 0;
  bool reached_target = false;  // training error <= eps/2
};

/// Training and held-out sample sizes for the options (delta split evenly between them).
std::size_t boost_train_size(int n, const BoostOptions& o);
std::size_t boost_holdout_size(const BoostOptions& o);

BoostReport boost(ExampleOracle& oracle, const BoostOptions& o);

/// Correlation constant measured on the XOR-formula fixture (see the hardness tests).
inline constexpr double kFloorConstant = 0.75;

/// Weak advantage floor for size-s targets: half the correlation floor at eps0 = 1/4.
double formula_xor_advantage_floor(int s, double c = kFloorConstant);

BoostReport pac_learn_formula_xor(ExampleOracle& oracle, int s, const Rational& eps, const Rational& delta,
                                  int max_rounds = 256);

/// Exact error of h against target under the uniform distribution on n bits.
Rational uniform_error(const Hypothesis& h, int n, const std::function<bool(u64)>& target);

}  // namespace leafcomm
