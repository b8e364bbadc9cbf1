#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "lifnet/active.hpp"
#include "lifnet/errors.hpp"
#include "lifnet/experiment.hpp"
#include "lifnet/information.hpp"
#include "lifnet/surrogate.hpp"
#include "lifnet/tempotron.hpp"
#include "lifnet/training.hpp"
#include "oracles.hpp"

using namespace lifnet;

namespace {

SpikeTrain bernoulli_train(std::size_t t, std::size_t c, double p, std::mt19937_64& rng) {
  SpikeTrain s(t, c);
  std::bernoulli_distribution b(p);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < c; ++j) s.set(i, j, b(rng));
  return s;
}

const TrainingData& small_data() {
  static const TrainingData data = [] {
    SyntheticSpec spec;
    spec.n = 200;
    spec.seed = 5;
    return prepare_data(generate_synthetic(spec), 0.8, 5).data;
  }();
  return data;
}

}  // namespace

TEST_SUITE("information") {
  TEST_CASE("entropy examples") {
    CHECK(entropy_bits(std::vector<int>(10, 0), 2) == 0.0);
    CHECK(entropy_bits(std::vector<int>{0, 1, 0, 1, 0, 1}, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(entropy_bits(std::vector<int>{0, 1, 2, 3, 3, 2, 1, 0}, 4) == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("population symbols") {
    SpikeTrain s(3, 4);
    s.set(1, 0, true);
    s.set(2, 0, true);
    s.set(2, 1, true);
    s.set(2, 2, true);
    s.set(2, 3, true);
    CHECK(spike_symbols(s, 2) == std::vector<int>{0, 0, 1});
    CHECK(spike_symbols(s, 4) == std::vector<int>{0, 1, 3});
    CHECK_THROWS_AS(spike_symbols(s, 1), ConfigError);
  }

  TEST_CASE("mutual information examples") {
    std::mt19937_64 rng(1);
    const auto a = bernoulli_train(500, 1, 0.3, rng);
    CHECK(std::abs(mutual_information(a, a, 2) - spike_entropy(a, 2)) <= 1e-9);
    CHECK(mutual_information(a, SpikeTrain(500, 1), 2) == 0.0);
    CHECK_THROWS_AS(mutual_information(a, SpikeTrain(499, 1), 2), InputError);
  }

  TEST_CASE("mutual information matches the joint-entropy oracle") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
      const int k = 2 + static_cast<int>(rng() % 4);
      std::vector<int> x(300), y(300);
      for (std::size_t t = 0; t < 300; ++t) {
        x[t] = static_cast<int>(rng() % static_cast<unsigned>(k));
        y[t] = rng() % 3 == 0 ? x[t] : static_cast<int>(rng() % static_cast<unsigned>(k));
      }
      CHECK(mutual_information_bits(x, y, k) == doctest::Approx(oracle::mutual_information(x, y, k)).epsilon(1e-9));
    }
  }

  TEST_CASE("independent long trains carry little information") {
    std::mt19937_64 rng(3);
    std::vector<int> x, y;
    for (int w = 0; w < 10; ++w) {
      const auto a = spike_symbols(bernoulli_train(1000, 1, 0.5, rng), 2);
      const auto b = spike_symbols(bernoulli_train(1000, 1, 0.5, rng), 2);
      x.insert(x.end(), a.begin(), a.end());
      y.insert(y.end(), b.begin(), b.end());
    }
    CHECK(mutual_information_bits(x, y, 2) <= 0.05);
  }
}

TEST_SUITE("tempotron") {
  TEST_CASE("kernel peak and shape") {
    const double tm = 2.0, ts = 0.5;
    const double peak = psp_peak_time(tm, ts);
    CHECK(peak == doctest::Approx(2.0 * 0.5 / 1.5 * std::log(4.0)));
    CHECK(psp_kernel(peak, tm, ts) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(psp_kernel(-0.5, tm, ts) == 0.0);
    CHECK(psp_kernel(0.0, tm, ts) == 0.0);
    for (double dt = 0.0; dt < 30.0; dt += 0.01) CHECK(psp_kernel(dt, tm, ts) >= 0.0);
    CHECK_THROWS_AS(psp_kernel(1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(psp_kernel(1.0, 1.0, 2.0), DomainError);
  }

  TEST_CASE("hand-computed single-spike update") {
    // One spike at t = 2 on channel 0. K(1) > K(2), so t_max = 3 and the
    // channel-0 step is lambda K(1).
    const auto p = TempotronParams::with_ratio(2.0, 0.25, 0.01, 10);
    SpikeTrain s(11, 2);
    s.set(2, 0, true);
    const auto times = spike_times(s);
    const std::vector<double> w{1.0, 0.5};
    CHECK(tempotron_t_max(w, times, p).t_max == 3);
    const auto up = tempotron_update(w, times, true, false, p);
    CHECK(std::abs(up[0] - 0.009973013817341163) <= 1e-12);
    CHECK(up[1] == 0.0);
    const auto down = tempotron_update(w, times, false, true, p);
    CHECK(std::abs(down[0] + 0.009973013817341163) <= 1e-12);
    const auto none = tempotron_update(w, times, true, true, p);
    CHECK(std::all_of(none.begin(), none.end(), [](double x) { return x == 0.0; }));
  }

  TEST_CASE("update locality") {
    std::mt19937_64 rng(6);
    const auto p = TempotronParams::with_ratio(2.5, 0.25, 0.02, 12);
    for (int trial = 0; trial < 100; ++trial) {
      const auto s = bernoulli_train(12, 8, 0.2, rng);
      std::vector<double> w(8);
      for (auto& x : w) x = std::uniform_real_distribution<double>(-1, 1)(rng);
      const auto times = spike_times(s);
      const auto t_max = static_cast<double>(tempotron_t_max(w, times, p).t_max);
      const auto d = tempotron_update(w, times, true, false, p);
      for (std::size_t i = 0; i < 8; ++i) {
        const bool before = std::any_of(times[i].begin(), times[i].end(), [&](double t) { return t < t_max; });
        if (!before) CHECK(d[i] == 0.0);
      }
    }
  }

  TEST_CASE("scale covariance") {
    std::mt19937_64 rng(7);
    const auto p = TempotronParams::with_ratio(1.8, 0.25, 0.01, 10);
    for (int trial = 0; trial < 50; ++trial) {
      const auto times = spike_times(bernoulli_train(11, 6, 0.3, rng));
      std::vector<double> w(6);
      for (auto& x : w) x = std::uniform_real_distribution<double>(-1, 1)(rng);
      std::vector<double> w3(w);
      for (auto& x : w3) x *= 3.0;
      for (double t = 0; t <= 10; t += 1) {
        CHECK(tempotron_potential(w3, times, p, t) ==
              doctest::Approx(3.0 * tempotron_potential(w, times, p, t)).epsilon(1e-12));
      }
      CHECK(tempotron_t_max(w3, times, p).t_max == tempotron_t_max(w, times, p).t_max);
    }
  }

  TEST_CASE("trace table agrees with direct potential") {
    std::mt19937_64 rng(8);
    const auto p = TempotronParams::with_ratio(2.2, 0.25, 0.01, 9);
    const PspTable table(p);
    const auto s = bernoulli_train(9, 5, 0.4, rng);
    const auto tr = table.traces(s);
    const auto times = spike_times(s);
    std::vector<double> w{0.3, -0.2, 0.9, 0.1, -0.7};
    const auto peak = peak_from_traces(tr, 5, w);
    const auto direct = tempotron_t_max(w, times, p);
    CHECK(peak.t_max == direct.t_max);
    CHECK(peak.v_max == doctest::Approx(direct.v_max).epsilon(1e-12));
  }

  TEST_CASE("params validation") {
    CHECK_THROWS_AS((TempotronParams{1.0, 1.0, 0.01, 10, 1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((TempotronParams{2.0, 0.5, 0.0, 10, 1.0}.validate()), ConfigError);
    CHECK(TempotronParams::with_ratio(2.0, 0.25, 0.01, 10).tau_s == 0.5);
  }
}

TEST_SUITE("surrogate") {
  TEST_CASE("surrogate closed form") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 100000; ++i) {
      const SglParams p{0.01 + std::abs(u(rng)), 0.1, u(rng)};
      const double v = u(rng);
      const double expect = p.alpha * std::exp(-p.alpha * (v - p.center) * (v - p.center));
      REQUIRE(std::abs(surrogate_derivative(v, p) - expect) <= 1e-12);
    }
  }

  TEST_CASE("normalized output") {
    const auto a = normalized_output(std::vector<double>{0.7, 0.1});
    CHECK(a[0] == 1.0);
    CHECK(a[1] == 0.0);
    const auto b = normalized_output(std::vector<double>{-2.0, -2.0});
    CHECK(b[0] == 0.5);
    CHECK(b[1] == 0.5);
  }

  TEST_CASE("hand-computed 2-2-2 updates") {
    // alpha 2, eta 0.1, centre 0.5, v_out (0.7, 0.1), target class 1.
    const SglParams p{2.0, 0.1, 0.5};
    const std::vector<double> v_out{0.7, 0.1};
    const std::vector<double> y{0.0, 1.0};
    const auto y_hat = normalized_output(v_out);
    const auto delta = sgl_error(y, y_hat, v_out, p);
    CHECK(std::abs(delta[0] - -0.18462326927732717) <= 1e-12);
    CHECK(std::abs(delta[1] - 0.1452298074147382) <= 1e-12);

    WeightMatrix w(2, 2);
    w(0, 0) = 0.5;
    w(0, 1) = -0.2;
    w(1, 0) = 0.1;
    w(1, 1) = 0.4;
    const auto u = sgl_layer_updates(std::vector<double>{2, 0}, std::vector<double>{1, 3}, delta, w);
    CHECK(std::abs(u.h2_out(0, 0) - -0.18462326927732717) <= 1e-12);
    CHECK(std::abs(u.h2_out(0, 1) - 0.1452298074147382) <= 1e-12);
    CHECK(std::abs(u.h2_out(1, 0) - -0.5538698078319815) <= 1e-12);
    CHECK(std::abs(u.h2_out(1, 1) - 0.4356894222442146) <= 1e-12);
    CHECK(std::abs(u.h1_h2(0, 0) - -0.24271519224322247) <= 1e-12);
    CHECK(std::abs(u.h1_h2(0, 1) - 0.07925919207632513) <= 1e-12);
    CHECK(u.h1_h2(1, 0) == 0.0);
    CHECK(u.h1_h2(1, 1) == 0.0);
    CHECK_THROWS_AS(sgl_layer_updates(std::vector<double>{1}, std::vector<double>{1, 2, 3}, delta, w), ConfigError);
  }

  TEST_CASE("correct samples give zero updates") {
    NetworkConfig c;
    c.lif_h1.v_th = c.lif_h2.v_th = c.lif_out.v_th = 0.3;
    std::mt19937_64 rng(10);
    const auto w = init_weights(c, rng);
    int seen = 0;
    for (int trial = 0; trial < 60; ++trial) {
      const auto in = bernoulli_train(c.t_steps, c.d_in, 0.5, rng);
      const auto rec = forward(c, w, in);
      const int label = predict(rec);
      if (rec.logits[0] == rec.logits[1]) continue;
      const auto step = sgl_sample_update(c, w, in, label, SglParams{});
      CHECK(step.zero);
      for (double x : step.updates.h1_h2.values()) CHECK(x == 0.0);
      for (double x : step.updates.h2_out.values()) CHECK(x == 0.0);
      ++seen;
    }
    CHECK(seen > 0);
  }
}

TEST_SUITE("active") {
  TEST_CASE("silent sample scores zero and ranks last") {
    NetworkConfig c;
    c.d_in = 4;
    c.h1 = 12;
    c.h2 = 8;
    c.lif_h1.v_th = c.lif_h2.v_th = c.lif_out.v_th = 0.1;
    std::mt19937_64 rng(11);
    const auto w = init_weights(c, rng);
    const auto u = Uncertainty::uniform(c, 1.0);
    CHECK(bal_score(c, w, u, SpikeTrain(c.t_steps, 4), 2) == 0.0);
    const std::vector<double> scores{0.0, 0.7, 0.3, 0.7};
    CHECK(rank_by_score(scores) == std::vector<std::size_t>{1, 3, 2, 0});
  }

  TEST_CASE("score is the uncertainty-weighted sum of pairwise information") {
    NetworkConfig c;
    c.d_in = 5;
    c.h1 = 10;
    c.h2 = 6;
    c.t_steps = 16;
    c.lif_h1.v_th = c.lif_h2.v_th = c.lif_out.v_th = 0.15;
    std::mt19937_64 rng(12);
    const auto w = init_weights(c, rng);
    auto u = Uncertainty::uniform(c, 1.0);
    for (auto& x : u.h2_out.values()) x = std::uniform_real_distribution<double>(0, 2)(rng);
    const auto in = bernoulli_train(16, 5, 0.6, rng);
    const auto rec = forward(c, w, in);
    double expect = 0.0;
    for (std::size_t i = 0; i < c.h2; ++i) {
      std::vector<int> pre(16);
      for (std::size_t t = 0; t < 16; ++t) pre[t] = rec.h2_spikes.at(t, i);
      for (std::size_t k = 0; k < 2; ++k) {
        std::vector<int> post(16);
        for (std::size_t t = 0; t < 16; ++t) post[t] = rec.out_spikes.at(t, k);
        expect += u.h2_out(i, k) * oracle::mutual_information(pre, post, 2);
      }
    }
    CHECK(bal_score(c, w, u, in, 2) == doctest::Approx(expect).epsilon(1e-9));
  }

  TEST_CASE("selection size and full pool") {
    const auto& data = small_data();
    RunSpec spec;
    spec.rule = Rule::bal;
    spec.epochs = 0;
    auto model = run_training(spec, data).first;
    const auto u = Uncertainty::uniform(model.network, 1.0);
    BalParams p;
    p.query_fraction = 1.0;
    auto picked = bal_select(data.val, model, u, p);
    std::sort(picked.begin(), picked.end());
    std::vector<std::size_t> all(data.val.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    CHECK(picked == all);
    p.query_fraction = 0.25;
    CHECK(bal_select(data.val, model, u, p).size() == 10);
    CHECK_THROWS_AS(bal_select(Dataset{}, model, u, p), InputError);
  }

  TEST_CASE("higher information sample is picked first") {
    // Sample A drives the network, sample B leaves it silent.
    const auto& data = small_data();
    RunSpec spec;
    spec.rule = Rule::bal;
    spec.v_th = 0.1;
    spec.epochs = 0;
    auto model = run_training(spec, data).first;
    Dataset pool;
    pool.d = data.train.d;
    pool.features.assign(pool.d, 0.0);
    pool.features.insert(pool.features.end(), pool.d, 0.6);
    pool.labels = {0, 1};
    const auto u = Uncertainty::uniform(model.network, 1.0);
    const auto scores = bal_scores_serial(model, u, pool, std::vector<std::size_t>{0, 1}, 2);
    REQUIRE(scores[1] > scores[0]);
    BalParams p;
    p.query_fraction = 0.5;
    CHECK(bal_select(pool, model, u, p) == std::vector<std::size_t>{1});
  }

  TEST_CASE("zero uncertainty freezes the network") {
    const auto& data = small_data();
    RunSpec spec;
    spec.rule = Rule::bal;
    spec.epochs = 0;
    const auto before = run_training(spec, data).first.weights;
    spec.bal.u_init = 0.0;
    spec.epochs = 5;
    const auto [model, report] = run_training(spec, data);
    CHECK(model.weights == before);
    CHECK(report.labels_queried.has_value());
  }

  TEST_CASE("full budget with near-unit decay tracks the surrogate rule") {
    const auto& data = small_data();
    RunSpec sgl;
    sgl.epochs = 3;
    RunSpec bal = sgl;
    bal.rule = Rule::bal;
    bal.bal.query_fraction = 1.0;
    bal.bal.acquisition_rounds = 1;
    bal.bal.u_init = 1.0;
    bal.bal.u_decay = 1.0 - 1e-12;
    bal.bal.lr = sgl.sgl_eta;
    const auto a = run_training(sgl, data);
    const auto b = run_training(bal, data);
    CHECK(b.second.labels_queried == b.second.pool_size);
    // Same training set, same shuffles: weights agree up to the decay.
    const auto wa = a.first.weights.h2_out.values();
    const auto wb = b.first.weights.h2_out.values();
    for (std::size_t k = 0; k < wa.size(); ++k) CHECK(wb[k] == doctest::Approx(wa[k]).epsilon(1e-6));
    CHECK(a.second.final_val_accuracy == b.second.final_val_accuracy);
  }

  TEST_CASE("parallel scores match serial") {
    const auto& data = small_data();
    RunSpec spec;
    spec.rule = Rule::bal;
    spec.epochs = 1;
    const auto model = run_training(spec, data).first;
    const auto u = Uncertainty::uniform(model.network, 1.0);
    std::vector<std::size_t> rows(data.train.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    CHECK(bal_scores(model, u, data.train, rows, 2) == bal_scores_serial(model, u, data.train, rows, 2));
  }

  TEST_CASE("params validation") {
    BalParams p;
    CHECK_NOTHROW(p.validate());
    p.u_decay = 1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.u_decay = 0.9;
    p.bins = 1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.bins = 2;
    p.query_fraction = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
  }
}

TEST_SUITE("training") {
  TEST_CASE("rule names") {
    CHECK(rule_from_string("sgl") == Rule::sgl);
    CHECK(rule_from_string("tempotron") == Rule::tempotron);
    CHECK(rule_from_string("bal") == Rule::bal);
    CHECK_THROWS_AS(rule_from_string("stdp"), ConfigError);
  }

  TEST_CASE("every rule is bitwise reproducible") {
    const auto& data = small_data();
    for (auto rule : {Rule::sgl, Rule::tempotron, Rule::bal}) {
      RunSpec spec;
      spec.rule = rule;
      spec.epochs = 3;
      spec.scheme = EncoderScheme::poisson;
      const auto a = run_training(spec, data);
      const auto b = run_training(spec, data);
      CHECK(a.first.weights == b.first.weights);
      CHECK(a.second.final_val_accuracy == b.second.final_val_accuracy);
      CHECK(a.first.weights.all_finite());
      for (const auto& e : a.second.curve) {
        CHECK((e.train_accuracy >= 0.0 && e.train_accuracy <= 1.0));
        CHECK((e.val_accuracy >= 0.0 && e.val_accuracy <= 1.0));
      }
    }
  }

  TEST_CASE("input weights stay frozen") {
    const auto& data = small_data();
    for (auto rule : {Rule::sgl, Rule::tempotron, Rule::bal}) {
      RunSpec spec;
      spec.rule = rule;
      spec.epochs = 0;
      const auto before = run_training(spec, data).first.weights;
      spec.epochs = 2;
      const auto after = run_training(spec, data).first.weights;
      CHECK(after.in_h1 == before.in_h1);
      if (rule == Rule::tempotron) CHECK(after.h1_h2 == before.h1_h2);
    }
  }

  TEST_CASE("parallel evaluation matches serial") {
    const auto& data = small_data();
    for (auto rule : {Rule::sgl, Rule::tempotron}) {
      RunSpec spec;
      spec.rule = rule;
      spec.epochs = 2;
      spec.scheme = EncoderScheme::poisson;
      const auto model = run_training(spec, data).first;
      CHECK(evaluate_accuracy(model, data.val, 7) == evaluate_accuracy_serial(model, data.val, 7));
    }
  }

  TEST_CASE("zero epochs") {
    const auto& data = small_data();
    RunSpec spec;
    spec.epochs = 0;
    const auto r = run_training(spec, data).second;
    CHECK(r.epochs_run == 0);
    CHECK(r.curve.empty());
  }

  TEST_CASE("training rejects bad inputs") {
    auto data = small_data();
    RunSpec spec;
    spec.t_steps = 0;
    CHECK_THROWS_AS(run_training(spec, data), ConfigError);
    spec = RunSpec{};
    data.train = Dataset{};
    data.train.d = data.val.d;
    CHECK_THROWS_AS(run_training(spec, data), InputError);
  }
}
