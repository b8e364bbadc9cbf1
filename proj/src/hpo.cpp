#include "lifnet/hpo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <string>

#include "lifnet/errors.hpp"
#include "lifnet/rng.hpp"

namespace lifnet {

namespace {

template <typename T>
void check_interval(const Interval<T>& iv, const char* name) {
  if (!std::isfinite(static_cast<double>(iv.lo)) || !std::isfinite(static_cast<double>(iv.hi)) || iv.lo > iv.hi) {
    throw ConfigError(std::string("search interval '") + name + "' is empty or not finite");
  }
}

double draw(SplitMix64& g, const Interval<double>& iv) {
  const double u = uniform01(g);
  if (iv.lo == iv.hi) return iv.lo;
  return std::min(iv.hi, iv.lo + (iv.hi - iv.lo) * u);
}

int draw(SplitMix64& g, const Interval<int>& iv) {
  const double u = uniform01(g);
  const auto span = static_cast<double>(iv.hi) - static_cast<double>(iv.lo) + 1.0;
  return std::min(iv.hi, iv.lo + static_cast<int>(std::floor(u * span)));
}

}  // namespace

void SearchSpace::validate() const {
  check_interval(tau_m, "tau_m");
  check_interval(v_th, "v_th");
  check_interval(bias, "bias");
  check_interval(h1, "h1");
  check_interval(h2, "h2");
  check_interval(t_steps, "t_steps");
  check_interval(gain, "gain");
  check_interval(sgl_alpha, "sgl_alpha");
  check_interval(sgl_eta, "sgl_eta");
  check_interval(tempotron_lambda, "tempotron_lambda");
  check_interval(tempotron_threshold, "tempotron_threshold");
  check_interval(bal_lr, "bal_lr");
  check_interval(bal_u_decay, "bal_u_decay");
  if (schemes.empty()) throw ConfigError("search space lists no encoder scheme");
}

bool TrialParams::inside(const SearchSpace& s) const {
  return s.tau_m.contains(tau_m) && s.v_th.contains(v_th) && s.bias.contains(bias) && s.h1.contains(h1) &&
         s.h2.contains(h2) && s.t_steps.contains(t_steps) &&
         std::find(s.schemes.begin(), s.schemes.end(), scheme) != s.schemes.end() && s.gain.contains(gain) &&
         s.sgl_alpha.contains(sgl_alpha) && s.sgl_eta.contains(sgl_eta) &&
         s.tempotron_lambda.contains(tempotron_lambda) && s.tempotron_threshold.contains(tempotron_threshold) &&
         s.bal_lr.contains(bal_lr) && s.bal_u_decay.contains(bal_u_decay);
}

RunSpec TrialParams::apply(RunSpec base) const {
  base.tau_m = tau_m;
  base.v_th = v_th;
  base.bias = bias;
  base.h1 = static_cast<std::size_t>(h1);
  base.h2 = static_cast<std::size_t>(h2);
  base.t_steps = static_cast<std::size_t>(t_steps);
  base.scheme = scheme;
  base.gain = gain;
  base.sgl_alpha = sgl_alpha;
  base.sgl_eta = sgl_eta;
  base.sgl_center.reset();
  base.tempotron_lambda = tempotron_lambda;
  base.tempotron_threshold = tempotron_threshold;
  base.bal.lr = bal_lr;
  base.bal.u_decay = bal_u_decay;
  return base;
}

TrialParams RandomSampler::sample(const SearchSpace& space, std::size_t trial_index, std::uint64_t base_seed) const {
  space.validate();
  SplitMix64 g(derive_seed(base_seed, {0x4D50ULL, trial_index}));
  // Fixed draw order; adding a dimension must append here.
  TrialParams p;
  p.tau_m = draw(g, space.tau_m);
  p.v_th = draw(g, space.v_th);
  p.bias = draw(g, space.bias);
  p.h1 = draw(g, space.h1);
  p.h2 = draw(g, space.h2);
  p.t_steps = draw(g, space.t_steps);
  const auto n_schemes = static_cast<int>(space.schemes.size());
  p.scheme = space.schemes[static_cast<std::size_t>(draw(g, Interval<int>{0, n_schemes - 1}))];
  p.gain = draw(g, space.gain);
  p.sgl_alpha = draw(g, space.sgl_alpha);
  p.sgl_eta = draw(g, space.sgl_eta);
  p.tempotron_lambda = draw(g, space.tempotron_lambda);
  p.tempotron_threshold = draw(g, space.tempotron_threshold);
  p.bal_lr = draw(g, space.bal_lr);
  p.bal_u_decay = draw(g, space.bal_u_decay);
  return p;
}

TrialParams sample_trial(const SearchSpace& space, std::size_t trial_index, std::uint64_t base_seed) {
  return RandomSampler{}.sample(space, trial_index, base_seed);
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial_index) {
  return derive_seed(base_seed, {0x7E1A15ULL, trial_index});
}

StudyReport run_study(const SearchSpace& space, const Objective& objective, std::size_t n_trials,
                      std::size_t parallelism, std::uint64_t base_seed, Rule rule, const Sampler& sampler) {
  if (n_trials == 0) throw ConfigError("a study needs at least one trial");
  if (parallelism == 0) throw ConfigError("parallelism must be >= 1");
  space.validate();

  const auto start = std::chrono::steady_clock::now();
  StudyReport study;
  study.rule = rule;
  study.base_seed = base_seed;
  study.trials.resize(n_trials);

  const auto n = static_cast<long long>(n_trials);
#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(parallelism))
  for (long long k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    Trial& t = study.trials[i];
    t.id = i;
    t.seed = trial_seed(base_seed, i);
    try {
      t.params = sampler.sample(space, i, base_seed);
      auto report = objective(t.params, t.seed);
      if (!std::isfinite(report.final_val_accuracy)) throw DomainError("validation accuracy is not finite");
      t.report = std::move(report);
      t.status = TrialStatus::complete;
    } catch (const std::exception& e) {
      t.status = TrialStatus::failed;
      t.error = e.what();
    } catch (...) {
      t.status = TrialStatus::failed;
      t.error = "unknown error";
    }
  }

  std::optional<std::size_t> best;
  for (const auto& t : study.trials) {
    if (t.status != TrialStatus::complete) continue;
    if (!best || t.report->final_val_accuracy > study.trials[*best].report->final_val_accuracy) best = t.id;
  }
  study.total_wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!best) {
    throw StudyError("all " + std::to_string(n_trials) + " trials failed; first error: " + study.trials[0].error);
  }
  study.best_trial_id = *best;
  return study;
}

Objective training_objective(const RunSpec& base, const TrainingData& data) {
  return [base, &data](const TrialParams& params, std::uint64_t seed) {
    RunSpec spec = params.apply(base);
    spec.seed = seed;
    return run_training(spec, data).second;
  };
}

}  // namespace lifnet
