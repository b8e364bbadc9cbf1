// lifnet: data generation, training, evaluation, hyperparameter studies and
// the rule benchmark matrix.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error,
// 3 runtime failure.

#include <omp.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lifnet/benchmark.hpp"
#include "lifnet/errors.hpp"
#include "lifnet/experiment.hpp"
#include "lifnet/hpo.hpp"
#include "lifnet/report.hpp"

namespace {

using namespace lifnet;

enum Exit { ok = 0, usage = 1, data_error = 2, runtime_failure = 3 };

struct Common {
  std::uint64_t seed = 42;
  std::string data;
  std::string out;
  bool verbose = false;
};

struct Fixed {
  std::size_t epochs = 30;
  double train_fraction = 0.8;
  double tau_ratio = 0.25;
  bool resample = false;
  double u_init = 1.0;
  int bins = 2;
  double query_fraction = 0.5;
  double seed_fraction = 0.1;
  std::size_t acquisition_rounds = 5;
};

// Flags that no study samples: shared by train, hpo and bench.
void add_fixed_options(CLI::App* cmd, Fixed& f) {
  cmd->add_option("--epochs", f.epochs, "Training epochs (BAL: rounds)")->capture_default_str();
  cmd->add_option("--train-fraction", f.train_fraction, "Stratified train share")->capture_default_str();
  cmd->add_option("--tau-ratio", f.tau_ratio, "Tempotron tau_s / tau_m")->capture_default_str();
  cmd->add_flag("--resample", f.resample, "Poisson: new raster every epoch");
  cmd->add_option("--u-init", f.u_init, "BAL initial uncertainty")->capture_default_str();
  cmd->add_option("--bins", f.bins, "BAL entropy histogram bins")->capture_default_str();
  cmd->add_option("--query-fraction", f.query_fraction, "BAL label budget, fraction of the pool")
      ->capture_default_str();
  cmd->add_option("--seed-fraction", f.seed_fraction, "BAL initially labeled share")->capture_default_str();
  cmd->add_option("--acquisition-rounds", f.acquisition_rounds, "BAL rounds that query labels")
      ->capture_default_str();
}

RunSpec base_spec(const Fixed& f, std::uint64_t seed) {
  RunSpec s;
  s.epochs = f.epochs;
  s.tau_ratio = f.tau_ratio;
  s.resample_per_epoch = f.resample;
  s.bal.u_init = f.u_init;
  s.bal.bins = f.bins;
  s.bal.query_fraction = f.query_fraction;
  s.bal.seed_fraction = f.seed_fraction;
  s.bal.acquisition_rounds = f.acquisition_rounds;
  s.seed = seed;
  return s;
}

bool on_command_line(const CLI::Option* opt, int argc, char** argv) {
  for (const auto& name : opt->get_lnames()) {
    const std::string flag = "--" + name;
    for (int i = 1; i < argc; ++i) {
      if (flag == argv[i] || std::strncmp(argv[i], (flag + "=").c_str(), flag.size() + 1) == 0) return true;
    }
  }
  return false;
}

void print_precedence(const CLI::App& app, const CLI::App& sub, int argc, char** argv) {
  std::cerr << "effective settings (flag > config > default):\n";
  for (const CLI::App* a : {&app, &sub}) {
    for (const CLI::Option* opt : a->get_options()) {
      if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
      std::string source = "default";
      std::string value = opt->get_default_str();
      if (opt->count() > 0) {
        source = on_command_line(opt, argc, argv) ? "flag" : "config";
        value.clear();
        for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
      }
      std::cerr << "  " << (a == &app ? std::string() : a->get_name() + " ") << "--" << opt->get_lnames().front()
                << " = " << value << " (" << source << ")\n";
    }
  }
}

Dataset load_data(const Common& c) {
  if (!c.data.empty()) return load_csv(c.data);
  return default_dataset(c.seed);
}

std::string describe(const Common& c, const Dataset& d) {
  const std::string src = c.data.empty() ? "synthetic seed " + std::to_string(c.seed) : c.data;
  return src + " (n=" + std::to_string(d.size()) + ", d=" + std::to_string(d.d) + ")";
}

// JSON to --out, or to stdout when no path was given.
void emit(const Json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json(j, path);
  }
}

std::ostream& info(const Common& c) { return c.out.empty() ? std::cerr : std::cout; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spiking network training and benchmark tool", "lifnet"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI config file; keys for a subcommand go under [<subcommand>]");

  Common common;
  app.add_option("--seed", common.seed, "Seed for data, split, initialization and encoding")->capture_default_str();
  app.add_option("--data", common.data, "Feature CSV (default: built-in synthetic dataset)");
  app.add_option("--out", common.out, "Output path");
  app.add_flag("--verbose", common.verbose, "Print every setting and where it came from");

  // gen-data
  SyntheticSpec synth;
  auto* gen = app.add_subcommand("gen-data", "Write a synthetic dataset as CSV");
  std::string gen_out = "synthetic.csv";
  gen->add_option("--n", synth.n, "Samples")->capture_default_str();
  gen->add_option("--d", synth.d, "Features")->capture_default_str();
  gen->add_option("--separation", synth.separation, "Distance between class means in units of std")
      ->capture_default_str();
  gen->add_option("--std", synth.std0, "Per-class standard deviation")->capture_default_str();
  gen->add_option("--balance", synth.class_balance, "Fraction of class 1")->capture_default_str();

  // train
  auto* train = app.add_subcommand("train", "Train one rule and write its report");
  std::string rule_name = "sgl";
  std::string scheme_name = "rate";
  std::string model_path;
  RunSpec spec;
  double center = std::numeric_limits<double>::quiet_NaN();
  Fixed fixed;
  train->add_option("--rule", rule_name, "sgl, tempotron or bal")->capture_default_str();
  train->add_option("--model", model_path, "Save the trained model here");
  train->add_option("--h1", spec.h1, "First hidden layer size")->capture_default_str();
  train->add_option("--h2", spec.h2, "Second hidden layer size")->capture_default_str();
  train->add_option("--tau-m", spec.tau_m, "Membrane time constant (steps)")->capture_default_str();
  train->add_option("--v-th", spec.v_th, "Firing threshold")->capture_default_str();
  train->add_option("--bias", spec.bias, "Constant input current")->capture_default_str();
  train->add_option("--t-steps", spec.t_steps, "Simulation steps per sample")->capture_default_str();
  train->add_option("--scheme", scheme_name, "poisson or rate")->capture_default_str();
  train->add_option("--gain", spec.gain, "Feature to firing-probability scale")->capture_default_str();
  train->add_option("--alpha", spec.sgl_alpha, "Surrogate sharpness")->capture_default_str();
  train->add_option("--eta", spec.sgl_eta, "Surrogate-gradient learning rate")->capture_default_str();
  train->add_option("--center", center, "Surrogate centre (default: v-th)");
  train->add_option("--lambda", spec.tempotron_lambda, "Tempotron learning rate")->capture_default_str();
  train->add_option("--threshold", spec.tempotron_threshold, "Tempotron firing threshold")->capture_default_str();
  train->add_option("--bal-lr", spec.bal.lr, "BAL learning rate")->capture_default_str();
  train->add_option("--u-decay", spec.bal.u_decay, "BAL uncertainty decay")->capture_default_str();
  add_fixed_options(train, fixed);

  // eval
  auto* eval = app.add_subcommand("eval", "Score a saved model on a dataset");
  std::string eval_model;
  eval->add_option("--model", eval_model, "Model file written by train")->required();

  // hpo
  auto* hpo = app.add_subcommand("hpo", "Random-search study for one rule");
  std::string hpo_rule = "sgl";
  std::size_t trials = 30;
  std::size_t parallelism = static_cast<std::size_t>(omp_get_max_threads());
  std::string csv_path;
  Fixed hpo_fixed;
  hpo->add_option("--rule", hpo_rule, "sgl, tempotron or bal")->capture_default_str();
  hpo->add_option("--trials", trials, "Number of trials")->capture_default_str();
  hpo->add_option("--parallelism", parallelism, "Concurrent trials")->capture_default_str();
  hpo->add_option("--csv", csv_path, "Also write the trials as CSV");
  add_fixed_options(hpo, hpo_fixed);

  // bench
  auto* bench = app.add_subcommand("bench", "Study and retrain every rule; Markdown table plus JSON");
  std::vector<std::string> bench_rules{"sgl", "tempotron", "bal"};
  std::size_t bench_trials = 10;
  std::string markdown_path;
  Fixed bench_fixed;
  bench->add_option("--rules", bench_rules, "Comma-separated rules")->delimiter(',')->capture_default_str();
  bench->add_option("--trials", bench_trials, "Trials per rule")->capture_default_str();
  bench->add_option("--parallelism", parallelism, "Concurrent trials")->capture_default_str();
  bench->add_option("--markdown", markdown_path, "Also write the Markdown table here");
  add_fixed_options(bench, bench_fixed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? Exit::ok : Exit::usage;
  }

  try {
    const CLI::App* chosen = app.get_subcommands().front();
    if (common.verbose) print_precedence(app, *chosen, argc, argv);

    if (chosen == gen) {
      synth.std1 = synth.std0;
      synth.seed = common.seed;
      const auto path = common.out.empty() ? gen_out : common.out;
      const auto data = generate_synthetic(synth);
      write_csv(data, std::filesystem::path(path));
      std::cout << "n=" << data.size() << " d=" << data.d << " class0=" << data.count(0)
                << " class1=" << data.count(1) << " -> " << path << '\n';
      return Exit::ok;
    }

    if (chosen == train) {
      RunSpec run = spec;
      const RunSpec fixed_spec = base_spec(fixed, common.seed);
      run.rule = rule_from_string(rule_name);
      run.scheme = scheme_from_string(scheme_name);
      if (!std::isnan(center)) run.sgl_center = center;
      run.epochs = fixed_spec.epochs;
      run.tau_ratio = fixed_spec.tau_ratio;
      run.resample_per_epoch = fixed_spec.resample_per_epoch;
      const double lr = run.bal.lr;
      const double decay = run.bal.u_decay;
      run.bal = fixed_spec.bal;
      run.bal.lr = lr;
      run.bal.u_decay = decay;
      run.seed = common.seed;

      const auto raw = load_data(common);
      run.validate(raw.d);
      const auto prepared = prepare_data(raw, fixed.train_fraction, common.seed);
      auto [model, report] = run_training(run, prepared.data);
      model.stats = prepared.stats;
      if (!model_path.empty()) save_model(model, model_path);
      emit(to_json(report), common.out);
      info(common) << to_string(report.rule) << ": train " << report.final_train_accuracy << " val "
                   << report.final_val_accuracy << " in " << report.wall_time_seconds << " s on "
                   << describe(common, raw) << '\n';
      return Exit::ok;
    }

    if (chosen == eval) {
      const auto model = load_model(eval_model);
      auto data = load_data(common);
      data.validate(false);
      if (data.d != model.network.d_in) {
        throw InputError("dataset has " + std::to_string(data.d) + " features, model expects " +
                         std::to_string(model.network.d_in));
      }
      if (model.stats) data = normalize_dataset(data, *model.stats);
      const double acc = evaluate_accuracy(model, data, val_stream_offset);
      emit(Json{{"rule", to_string(model.rule)}, {"n", data.size()}, {"accuracy", acc}}, common.out);
      info(common) << "accuracy " << acc << " on " << describe(common, data) << '\n';
      return Exit::ok;
    }

    if (chosen == hpo) {
      RunSpec base = base_spec(hpo_fixed, common.seed);
      base.rule = rule_from_string(hpo_rule);
      const auto raw = load_data(common);
      const auto prepared = prepare_data(raw, hpo_fixed.train_fraction, common.seed);
      const auto study = run_study(SearchSpace{}, training_objective(base, prepared.data), trials, parallelism,
                                   common.seed, base.rule);
      emit(to_json(study), common.out);
      if (!csv_path.empty()) {
        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv) throw std::runtime_error("cannot write '" + csv_path + "'");
        write_study_csv(study, csv);
      }
      const auto& best = study.best();
      info(common) << "best trial " << best.id << " of " << study.trials.size() << ": val "
                   << best.report->final_val_accuracy << "  " << to_json(best.params).dump() << '\n';
      return Exit::ok;
    }

    if (chosen == bench) {
      BenchmarkOptions options;
      options.rules.clear();
      for (const auto& r : bench_rules) options.rules.push_back(rule_from_string(r));
      options.n_trials = bench_trials;
      options.parallelism = parallelism;
      options.base = base_spec(bench_fixed, common.seed);
      const auto raw = load_data(common);
      options.dataset = describe(common, raw);
      const auto prepared = prepare_data(raw, bench_fixed.train_fraction, common.seed);
      const auto report = run_benchmark(options, prepared.data);
      const auto table = to_markdown(report);
      if (!common.out.empty()) write_json(to_json(report), common.out);
      if (!markdown_path.empty()) {
        std::ofstream md(markdown_path, std::ios::binary);
        if (!md) throw std::runtime_error("cannot write '" + markdown_path + "'");
        md << table;
      }
      std::cout << table;
      for (const auto& row : report.rows) {
        if (!row.ok) std::cerr << to_string(row.rule) << " failed: " << row.error << '\n';
      }
      return report.all_failed() ? Exit::runtime_failure : Exit::ok;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return Exit::usage;
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return Exit::data_error;
  } catch (const InputError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return Exit::data_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::runtime_failure;
  }
  return Exit::usage;
}
