#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "lifnet/errors.hpp"
#include "lifnet/hpo.hpp"
#include "lifnet/report.hpp"

using namespace lifnet;

namespace {

TrainReport fake_report(double val) {
  TrainReport r;
  r.final_val_accuracy = val;
  r.final_train_accuracy = val;
  r.epochs_run = 1;
  return r;
}

const TrainingData& tiny_data() {
  static const TrainingData data = [] {
    SyntheticSpec spec;
    spec.n = 120;
    spec.seed = 21;
    return prepare_data(generate_synthetic(spec), 0.8, 21).data;
  }();
  return data;
}

}  // namespace

TEST_SUITE("hpo") {
  TEST_CASE("samples stay in range") {
    const SearchSpace space;
    for (std::size_t i = 0; i < 10000; ++i) CHECK(sample_trial(space, i, 99).inside(space));
  }

  TEST_CASE("integer and categorical draws cover their range") {
    const SearchSpace space;
    std::vector<int> seen_t(21, 0);
    int poisson = 0;
    for (std::size_t i = 0; i < 4000; ++i) {
      const auto p = sample_trial(space, i, 1);
      ++seen_t[static_cast<std::size_t>(p.t_steps)];
      poisson += p.scheme == EncoderScheme::poisson;
    }
    for (int t = 5; t <= 20; ++t) CHECK(seen_t[static_cast<std::size_t>(t)] > 0);
    CHECK(poisson > 1800);
    CHECK(poisson < 2200);
  }

  TEST_CASE("sampling is deterministic and seed-isolated") {
    const SearchSpace space;
    CHECK(sample_trial(space, 7, 3) == sample_trial(space, 7, 3));
    CHECK_FALSE(sample_trial(space, 7, 3) == sample_trial(space, 8, 3));
    CHECK_FALSE(sample_trial(space, 7, 3) == sample_trial(space, 7, 4));
  }

  TEST_CASE("degenerate intervals") {
    SearchSpace space;
    space.tau_m = {2.5, 2.5};
    space.h1 = {80, 80};
    space.schemes = {EncoderScheme::rate};
    for (std::size_t i = 0; i < 100; ++i) {
      const auto p = sample_trial(space, i, 0);
      CHECK(p.tau_m == 2.5);
      CHECK(p.h1 == 80);
      CHECK(p.scheme == EncoderScheme::rate);
    }
    space.v_th = {0.5, 0.4};
    CHECK_THROWS_AS(space.validate(), ConfigError);
  }

  TEST_CASE("single trial study") {
    const auto s = run_study(SearchSpace{}, [](const TrialParams&, std::uint64_t) { return fake_report(0.3); }, 1, 1,
                             5);
    CHECK(s.trials.size() == 1);
    CHECK(s.best_trial_id == 0);
  }

  TEST_CASE("monotone objective picks the last trial") {
    const std::size_t n = 12;
    std::vector<TrialParams> order;
    const SearchSpace space;
    for (std::size_t i = 0; i < n; ++i) order.push_back(sample_trial(space, i, 8));
    auto objective = [&](const TrialParams& p, std::uint64_t) {
      const auto it = std::find(order.begin(), order.end(), p);
      return fake_report(static_cast<double>(it - order.begin()) / static_cast<double>(n));
    };
    CHECK(run_study(space, objective, n, 1, 8).best_trial_id == n - 1);
  }

  TEST_CASE("ties go to the lowest id and failures are excluded") {
    auto objective = [](const TrialParams& p, std::uint64_t) {
      if (p.h1 % 3 == 0) throw std::runtime_error("diverged");
      return fake_report(0.75);
    };
    const auto s = run_study(SearchSpace{}, objective, 40, 1, 2);
    std::size_t first_ok = 0;
    while (s.trials[first_ok].status != TrialStatus::complete) ++first_ok;
    CHECK(s.best_trial_id == first_ok);
    for (const auto& t : s.trials) {
      if (t.params.h1 % 3 == 0) {
        CHECK(t.status == TrialStatus::failed);
        CHECK(t.error == "diverged");
        CHECK_FALSE(t.report.has_value());
      }
    }
  }

  TEST_CASE("all failed") {
    auto objective = [](const TrialParams&, std::uint64_t) -> TrainReport { throw DomainError("nan"); };
    CHECK_THROWS_AS(run_study(SearchSpace{}, objective, 3, 1, 0), StudyError);
    CHECK_THROWS_AS(run_study(SearchSpace{}, objective, 0, 1, 0), ConfigError);
  }

  TEST_CASE("best is the maximum over complete trials") {
    RunSpec base;
    base.epochs = 2;
    const auto s = run_study(SearchSpace{}, training_objective(base, tiny_data()), 6, 1, 4);
    for (const auto& t : s.trials) {
      if (t.status == TrialStatus::complete) {
        CHECK(s.best().report->final_val_accuracy >= t.report->final_val_accuracy);
      }
    }
  }

  TEST_CASE("study does not depend on parallelism") {
    RunSpec base;
    base.rule = Rule::tempotron;
    base.epochs = 2;
    const auto obj = training_objective(base, tiny_data());
    const auto a = run_study(SearchSpace{}, obj, 6, 1, 11, Rule::tempotron);
    const auto b = run_study(SearchSpace{}, obj, 6, 4, 11, Rule::tempotron);
    CHECK(mask_volatile(to_json(a)).dump() == mask_volatile(to_json(b)).dump());
  }

  TEST_CASE("trial parameters map onto a run") {
    const auto p = sample_trial(SearchSpace{}, 3, 3);
    RunSpec base;
    base.sgl_center = 1.0;
    const auto r = p.apply(base);
    CHECK(r.tau_m == p.tau_m);
    CHECK(r.h2 == static_cast<std::size_t>(p.h2));
    CHECK(r.network(16).lif_h1.v_th == p.v_th);
    CHECK(r.sgl().center == p.v_th);
    CHECK(r.tempotron().t_window == r.t_steps);
    CHECK(r.tempotron().tau_s == doctest::Approx(p.tau_m / 4));
  }
}

TEST_SUITE("report") {
  TEST_CASE("masking replaces volatile fields only") {
    Json j{{"a", 1},
           {"wall_time_seconds", 3.2},
           {"nested", {{"timestamp", "now"}, {"rows", {{{"train_time_seconds", 1.0}, {"x", 2}}}}}}};
    const auto m = mask_volatile(j);
    CHECK(m["a"] == 1);
    CHECK(m["wall_time_seconds"].is_null());
    CHECK(m["nested"]["timestamp"].is_null());
    CHECK(m["nested"]["rows"][0]["train_time_seconds"].is_null());
    CHECK(m["nested"]["rows"][0]["x"] == 2);
  }

  TEST_CASE("train report json") {
    TrainReport r = fake_report(0.9);
    r.rule = Rule::bal;
    r.curve.push_back({1, 0.5, 0.6});
    r.labels_queried = 10;
    r.pool_size = 20;
    const auto j = to_json(r);
    CHECK(j["rule"] == "bal");
    CHECK(j["labels_queried"] == 10);
    CHECK(j["curve"][0]["val_accuracy"] == 0.6);
    CHECK_FALSE(to_json(fake_report(0.1)).contains("labels_queried"));
  }

  TEST_CASE("model round trip") {
    for (auto rule : {Rule::sgl, Rule::tempotron}) {
      RunSpec spec;
      spec.rule = rule;
      spec.epochs = 1;
      auto model = run_training(spec, tiny_data()).first;
      model.stats = FeatureStats{std::vector<double>(16, 0.1), std::vector<double>(16, 0.9)};
      const auto back = model_from_json(Json::parse(model_to_json(model).dump()));
      CHECK(back.weights == model.weights);
      CHECK(back.network.lif_h1 == model.network.lif_h1);
      CHECK(back.tempotron.tau_s == model.tempotron.tau_s);
      CHECK(back.stats->max == model.stats->max);
      CHECK(evaluate_accuracy(back, tiny_data().val) == evaluate_accuracy(model, tiny_data().val));
    }
    CHECK_THROWS_AS(model_from_json(Json{{"format", "other"}}), InputError);
    CHECK_THROWS_AS(model_from_json(Json::object()), InputError);
  }

  TEST_CASE("study csv has one row per trial") {
    const auto s = run_study(SearchSpace{}, [](const TrialParams&, std::uint64_t) { return fake_report(0.5); }, 4, 1,
                             1);
    std::ostringstream out;
    write_study_csv(s, out);
    const auto text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
  }

  TEST_CASE("benchmark markdown mirrors json") {
    BenchmarkOptions options;
    options.n_trials = 2;
    options.base.epochs = 2;
    const auto r = run_benchmark(options, tiny_data());
    CHECK(r.rows.size() == 3);
    const auto md = to_markdown(r);
    const auto j = to_json(r);
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", j["rows"][i]["val_accuracy_pct"].get<double>());
      CHECK(md.find(buf) != std::string::npos);
      CHECK(md.find(std::string(to_string(r.rows[i].rule))) != std::string::npos);
    }
    CHECK(std::count(md.begin(), md.end(), '\n') == 5);
  }
}
