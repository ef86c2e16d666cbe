#include "leafcomm/learning.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace leafcomm {

bool Hypothesis::eval(u64 x) const {
  if (!is_vote) return single.eval(x);
  Rational score = 0;
  for (const auto& v : votes) {
    if (v.h.eval(x))
      score += v.weight;
    else
      score -= v.weight;
  }
  return score > 0;
}

Hypothesis Hypothesis::parity_hypothesis(SignedParity h) {
  Hypothesis out;
  out.single = h;
  return out;
}

Hypothesis Hypothesis::vote(std::vector<WeightedVote> votes) {
  Rational total = 0;
  for (const auto& v : votes) {
    if (v.weight < 0) throw ValidationError("vote weights must be nonnegative");
    total += v.weight;
  }
  if (total <= 0) throw ValidationError("vote needs positive total weight");
  Hypothesis out;
  out.is_vote = true;
  out.votes = std::move(votes);
  return out;
}

// ---------------------------------------------------------------- oracle

ExampleOracle::ExampleOracle(int n, std::function<bool(u64)> target, u64 seed)
    : n_(n), target_(std::move(target)), rng_(Rng(seed).split(0x6c6561726eULL)) {
  if (n < 1 || n > 20) throw ValidationError("example oracle supports 1 <= n <= 20");
}

ExampleOracle::ExampleOracle(const Distribution& d, std::function<bool(u64)> target, u64 seed)
    : ExampleOracle(d.n, std::move(target), seed) {
  double acc = 0;
  cumulative_.reserve(d.weights.size());
  for (const auto& w : d.weights) cumulative_.push_back(acc += w.get_d());
}

Example ExampleOracle::draw() {
  Example e;
  if (cumulative_.empty()) {
    e.x = rng_.below(u64{1} << n_);
  } else {
    double u = rng_.uniform01() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    e.x = static_cast<u64>(std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                                     static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
  }
  e.y = target_(e.x);
  return e;
}

std::vector<Example> ExampleOracle::draw_many(std::size_t count) {
  std::vector<Example> out(count);
  for (auto& e : out) e = draw();
  return out;
}

// ---------------------------------------------------------------- weak learner

namespace {

// bins[x] = (weight labeled 0) - (weight labeled 1) at input x, integer scaled.
WeakFit best_signed_parity(int n, std::vector<BigInt> bins, const BigInt& total) {
  if (total <= 0) throw ValidationError("weak learner needs positive total weight");
  for (std::size_t h = 1; h < bins.size(); h <<= 1)
    for (std::size_t i = 0; i < bins.size(); i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        BigInt u = bins[j];
        bins[j] += bins[j + h];
        bins[j + h] = u - bins[j + h];
      }
  // bins[S] = agree - disagree for the positive parity S
  std::size_t best = 0;
  bool neg = bins[0] < 0;
  BigInt best_abs = abs(bins[0]);
  for (std::size_t s = 1; s < (std::size_t{1} << n); ++s) {
    BigInt a = abs(bins[s]);
    if (a > best_abs) {
      best_abs = a;
      best = s;
      neg = bins[s] < 0;
    }
  }
  WeakFit fit;
  fit.h = {best, neg};
  fit.error = frac(total - best_abs, 2 * total);
  return fit;
}

}  // namespace

WeakFit weak_learn_parity(int n, const std::vector<Example>& samples, const std::vector<Rational>& weights) {
  if (samples.empty()) throw ValidationError("weak learner needs at least one sample");
  if (weights.size() != samples.size()) throw ValidationError("one weight per sample required");
  if (n < 0 || n > 20) throw ValidationError("weak learner supports n <= 20");
  BigInt L = 1;
  for (const auto& w : weights) {
    if (w < 0) throw ValidationError("weights must be nonnegative");
    mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), w.get_den_mpz_t());
  }
  std::vector<BigInt> bins(std::size_t{1} << n);
  BigInt total = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].x >> n) throw ValidationError("sample has bits beyond n");
    BigInt v = Rational(weights[i] * L).get_num();
    total += v;
    if (samples[i].y)
      bins[samples[i].x] -= v;
    else
      bins[samples[i].x] += v;
  }
  if (total == 0) throw ValidationError("weights are all zero");
  return best_signed_parity(n, std::move(bins), total);
}

// ---------------------------------------------------------------- boosting

std::size_t boost_train_size(int n, const BoostOptions& o) {
  // Occam bound for a vote of max_rounds signed parities, delta/2 split evenly across rounds
  double eps = o.eps.get_d(), delta = o.delta.get_d();
  double bits = o.max_rounds * (n + 1) * std::log(2.0) + std::log(4.0 * o.max_rounds / delta);
  return static_cast<std::size_t>(std::ceil(4.0 / eps * bits));
}

std::size_t boost_holdout_size(const BoostOptions& o) {
  // Hoeffding at accuracy eps/4 and confidence delta/2
  double a = o.eps.get_d() / 4;
  return static_cast<std::size_t>(std::ceil(std::log(4.0 / o.delta.get_d()) / (2 * a * a)));
}

namespace {

struct Group {
  u64 x;
  bool y;
  long count;
};

const BigInt kWeightScale = BigInt(1) << 48;

}  // namespace

BoostReport boost(ExampleOracle& oracle, const BoostOptions& o) {
  if (o.eps <= 0 || o.eps >= 1 || o.delta <= 0 || o.delta >= 1) throw ValidationError("eps and delta must be in (0, 1)");
  if (o.max_rounds < 1) throw ValidationError("max_rounds must be positive");
  const int n = oracle.n();
  BoostReport rep;
  rep.train_size = boost_train_size(n, o);
  rep.holdout_size = boost_holdout_size(o);
  if (rep.train_size + rep.holdout_size > o.sample_budget)
    throw ValidationError("sample budget exceeded: need " + std::to_string(rep.train_size + rep.holdout_size) +
                          ", budget " + std::to_string(o.sample_budget));

  // samples with equal (x, y) always carry equal weight, so the run works on groups
  std::map<std::pair<u64, bool>, long> counts;
  for (const auto& e : oracle.draw_many(rep.train_size)) ++counts[{e.x, e.y}];
  std::vector<Group> groups;
  for (const auto& [key, c] : counts) groups.push_back({key.first, key.second, c});
  const long m = static_cast<long>(rep.train_size);

  std::vector<BigInt> w(groups.size());  // group weight = count * per-sample weight, scaled
  for (std::size_t g = 0; g < groups.size(); ++g) w[g] = BigInt(groups[g].count) * kWeightScale / m;

  int rounds = o.max_rounds;
  if (o.advantage_floor > 0) {
    double t = std::ceil(std::log(2.0 / o.eps.get_d()) / (2 * o.advantage_floor * o.advantage_floor));
    if (t < rounds) rounds = std::max(1, static_cast<int>(t));
  }
  const bool vacuous = o.eps >= Rational(1, 2);

  std::vector<WeightedVote> votes;
  std::vector<Rational> score(groups.size(), 0);
  double loss = 1;
  for (int r = 0; r < rounds; ++r) {
    std::vector<BigInt> bins(std::size_t{1} << n);
    BigInt total = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      total += w[g];
      if (groups[g].y)
        bins[groups[g].x] -= w[g];
      else
        bins[groups[g].x] += w[g];
    }
    WeakFit fit = best_signed_parity(n, std::move(bins), total);
    BoostRound round;
    round.h = fit.h;
    round.error = fit.error;
    double adv = 0.5 - fit.error.get_d();
    rep.min_advantage = std::min(rep.min_advantage, adv);
    if (adv < o.advantage_floor) {
      round.below_floor = true;
      ++rep.floor_violations;
      if (o.strict_floor)
        throw AssertionFailure("weak learner advantage " + std::to_string(adv) + " below floor " +
                               std::to_string(o.advantage_floor) + " in round " + std::to_string(r));
    }

    if (fit.error == 0 || vacuous || (votes.empty() && fit.error >= Rational(1, 2))) {
      // exact fit, nothing to boost, or no parity helps at all: this parity is the hypothesis
      votes.assign(1, {fit.h, Rational(1)});
      long wrong = 0;
      for (const auto& g : groups)
        if (fit.h.eval(g.x) != g.y) wrong += g.count;
      round.training_error = frac(wrong, m);
      round.loss_bound = 2 * std::sqrt(fit.error.get_d() * (1 - fit.error.get_d()));
      rep.rounds.push_back(round);
      break;
    }
    if (fit.error >= Rational(1, 2)) {
      round.training_error = rep.rounds.empty() ? Rational(1, 2) : rep.rounds.back().training_error;
      round.loss_bound = loss;
      rep.rounds.push_back(round);
      break;
    }

    double e = fit.error.get_d();
    loss *= 2 * std::sqrt(e * (1 - e));
    round.loss_bound = loss;
    Rational beta = fit.error / (1 - fit.error);
    Rational alpha(std::log(Rational(1 - fit.error).get_d() / fit.error.get_d()));
    votes.push_back({fit.h, alpha});

    long wrong = 0;
    BigInt new_total = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      bool correct = fit.h.eval(groups[g].x) == groups[g].y;
      if (fit.h.eval(groups[g].x))
        score[g] += alpha;
      else
        score[g] -= alpha;
      if ((score[g] > 0) != groups[g].y) wrong += groups[g].count;
      if (correct) w[g] = BigInt(w[g] * beta.get_num()) / beta.get_den();
      new_total += w[g];
    }
    // renormalize to the fixed scale; weights never drop to zero
    for (auto& wg : w) {
      wg = wg * kWeightScale / new_total;
      if (wg == 0) wg = 1;
    }
    round.training_error = frac(wrong, m);
    rep.rounds.push_back(round);
    if (round.training_error <= o.eps / 2) break;
  }

  rep.hypothesis = votes.size() == 1 ? Hypothesis::parity_hypothesis(votes[0].h) : Hypothesis::vote(std::move(votes));
  rep.training_error = rep.rounds.back().training_error;
  rep.reached_target = rep.training_error <= o.eps / 2;

  long wrong = 0;
  for (const auto& e : oracle.draw_many(rep.holdout_size))
    if (rep.hypothesis.eval(e.x) != e.y) ++wrong;
  rep.holdout_error = frac(wrong, static_cast<long>(rep.holdout_size));
  return rep;
}

double formula_xor_advantage_floor(int s, double c) {
  return leaf_xor_floor(std::max(s, 1), Rational(1, 4), c) / 2;
}

BoostReport pac_learn_formula_xor(ExampleOracle& oracle, int s, const Rational& eps, const Rational& delta,
                                  int max_rounds) {
  if (s < 1) throw ValidationError("formula size must be positive");
  BoostOptions o;
  o.eps = eps;
  o.delta = delta;
  o.max_rounds = max_rounds;
  o.advantage_floor = formula_xor_advantage_floor(s);
  return boost(oracle, o);
}

Rational uniform_error(const Hypothesis& h, int n, const std::function<bool(u64)>& target) {
  long wrong = 0;
  for (u64 x = 0; x < (u64{1} << n); ++x)
    if (h.eval(x) != target(x)) ++wrong;
  return frac(wrong, BigInt(1) << n);
}

}  // namespace leafcomm
