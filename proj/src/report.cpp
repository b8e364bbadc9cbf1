#include "lifnet/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <string_view>

#include "lifnet/errors.hpp"

namespace lifnet {

namespace {

constexpr std::string_view volatile_keys[] = {"wall_time_seconds", "total_wall_time_seconds",
                                              "train_time_seconds", "study_wall_time_seconds", "timestamp"};

Json lif_json(const LifParams& p) {
  return {{"tau_m", p.tau_m}, {"v_th", p.v_th}, {"v_reset", p.v_reset}, {"r_m", p.r_m}, {"bias", p.bias}};
}

LifParams lif_from(const Json& j) {
  return {j.at("tau_m").get<double>(), j.at("v_th").get<double>(), j.at("v_reset").get<double>(),
          j.at("r_m").get<double>(), j.at("bias").get<double>()};
}

Json matrix_json(const WeightMatrix& w) {
  const auto v = w.values();
  return {{"rows", w.rows()}, {"cols", w.cols()}, {"values", std::vector<double>(v.begin(), v.end())}};
}

WeightMatrix matrix_from(const Json& j) {
  WeightMatrix w(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto values = j.at("values").get<std::vector<double>>();
  if (values.size() != w.values().size()) throw InputError("weight matrix value count does not match its shape");
  std::copy(values.begin(), values.end(), w.values().begin());
  return w;
}

void put_double(std::ostream& out, double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  out.write(buf, res.ptr - buf);
}

}  // namespace

Json to_json(const TrainReport& r) {
  Json curve = Json::array();
  for (const auto& e : r.curve) {
    curve.push_back({{"epoch", e.epoch}, {"train_accuracy", e.train_accuracy}, {"val_accuracy", e.val_accuracy}});
  }
  Json j{{"rule", to_string(r.rule)},
         {"epochs_run", r.epochs_run},
         {"final_train_accuracy", r.final_train_accuracy},
         {"final_val_accuracy", r.final_val_accuracy},
         {"wall_time_seconds", r.wall_time_seconds},
         {"curve", std::move(curve)}};
  if (r.labels_queried) j["labels_queried"] = *r.labels_queried;
  if (r.pool_size) j["pool_size"] = *r.pool_size;
  return j;
}

Json to_json(const TrialParams& p) {
  return {{"tau_m", p.tau_m},
          {"v_th", p.v_th},
          {"bias", p.bias},
          {"h1", p.h1},
          {"h2", p.h2},
          {"t_steps", p.t_steps},
          {"scheme", to_string(p.scheme)},
          {"gain", p.gain},
          {"sgl_alpha", p.sgl_alpha},
          {"sgl_eta", p.sgl_eta},
          {"tempotron_lambda", p.tempotron_lambda},
          {"tempotron_threshold", p.tempotron_threshold},
          {"bal_lr", p.bal_lr},
          {"bal_u_decay", p.bal_u_decay}};
}

Json to_json(const Trial& t) {
  Json j{{"trial_id", t.id},
         {"status", t.status == TrialStatus::complete ? "complete" : "failed"},
         {"seed", t.seed},
         {"params", to_json(t.params)}};
  if (t.report) {
    j["val_accuracy"] = t.report->final_val_accuracy;
    j["wall_time_seconds"] = t.report->wall_time_seconds;
    j["report"] = to_json(*t.report);
  } else {
    j["val_accuracy"] = nullptr;
    j["error"] = t.error;
  }
  return j;
}

Json to_json(const StudyReport& s) {
  Json trials = Json::array();
  for (const auto& t : s.trials) trials.push_back(to_json(t));
  return {{"rule", to_string(s.rule)},
          {"base_seed", s.base_seed},
          {"n_trials", s.trials.size()},
          {"best_trial_id", s.best_trial_id},
          {"best_val_accuracy", s.best().report->final_val_accuracy},
          {"total_wall_time_seconds", s.total_wall_time_seconds},
          {"trials", std::move(trials)}};
}

Json to_json(const BenchmarkReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json j{{"rule", to_string(row.rule)}, {"status", row.ok ? "ok" : "failed"}};
    if (row.ok) {
      j["best_params"] = to_json(*row.best_params);
      j["best_trial_id"] = row.best_trial_id;
      j["trials_failed"] = row.trials_failed;
      j["val_accuracy_pct"] = row.val_accuracy_pct;
      j["train_time_seconds"] = row.train_time_seconds;
      j["study_wall_time_seconds"] = row.study_wall_time_seconds;
      if (row.labels_queried) j["labels_queried"] = *row.labels_queried;
    } else {
      j["error"] = row.error;
    }
    rows.push_back(std::move(j));
  }
  return {{"rows", std::move(rows)},
          {"environment",
           {{"seed", r.seed},
            {"n_trials", r.n_trials},
            {"epochs", r.epochs},
            {"dataset", r.dataset},
            {"machine", r.machine},
            {"timestamp", r.timestamp}}}};
}

void write_study_csv(const StudyReport& s, std::ostream& out) {
  out << "trial_id,status,seed,tau_m,v_th,bias,h1,h2,t_steps,scheme,gain,sgl_alpha,sgl_eta,tempotron_lambda,"
         "tempotron_threshold,bal_lr,bal_u_decay,final_train_accuracy,final_val_accuracy,wall_time_seconds\n";
  for (const auto& t : s.trials) {
    const auto& p = t.params;
    out << t.id << ',' << (t.status == TrialStatus::complete ? "complete" : "failed") << ',' << t.seed;
    for (double x : {p.tau_m, p.v_th, p.bias}) {
      out << ',';
      put_double(out, x);
    }
    out << ',' << p.h1 << ',' << p.h2 << ',' << p.t_steps << ',' << to_string(p.scheme);
    for (double x : {p.gain, p.sgl_alpha, p.sgl_eta, p.tempotron_lambda, p.tempotron_threshold, p.bal_lr,
                     p.bal_u_decay}) {
      out << ',';
      put_double(out, x);
    }
    if (t.report) {
      for (double x : {t.report->final_train_accuracy, t.report->final_val_accuracy, t.report->wall_time_seconds}) {
        out << ',';
        put_double(out, x);
      }
    } else {
      out << ",,,";
    }
    out << '\n';
  }
}

Json mask_volatile(Json j) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const bool hit = std::find(std::begin(volatile_keys), std::end(volatile_keys), it.key()) != std::end(volatile_keys);
      it.value() = hit ? Json(nullptr) : mask_volatile(std::move(it.value()));
    }
  } else if (j.is_array()) {
    for (auto& v : j) v = mask_volatile(std::move(v));
  }
  return j;
}

Json model_to_json(const Model& m) {
  const auto& n = m.network;
  const auto& e = m.encoder;
  const auto& t = m.tempotron;
  Json j{{"format", "lifnet-model"},
         {"version", 1},
         {"rule", to_string(m.rule)},
         {"network",
          {{"d_in", n.d_in},
           {"h1", n.h1},
           {"h2", n.h2},
           {"n_out", n.n_out},
           {"t_steps", n.t_steps},
           {"readout", to_string(n.readout)},
           {"lif_h1", lif_json(n.lif_h1)},
           {"lif_h2", lif_json(n.lif_h2)},
           {"lif_out", lif_json(n.lif_out)}}},
         {"encoder",
          {{"scheme", to_string(e.scheme)},
           {"t_steps", e.t_steps},
           {"gain", e.gain},
           {"seed", e.seed},
           {"resample_per_epoch", e.resample_per_epoch}}},
         {"tempotron",
          {{"tau_m", t.tau_m},
           {"tau_s", t.tau_s},
           {"lambda_lr", t.lambda_lr},
           {"t_window", t.t_window},
           {"threshold", t.threshold}}},
         {"weights",
          {{"in_h1", matrix_json(m.weights.in_h1)},
           {"h1_h2", matrix_json(m.weights.h1_h2)},
           {"h2_out", matrix_json(m.weights.h2_out)}}}};
  if (m.stats) j["feature_stats"] = {{"min", m.stats->min}, {"max", m.stats->max}};
  return j;
}

Model model_from_json(const Json& j) {
  try {
    if (j.at("format").get<std::string>() != "lifnet-model") throw InputError("not a lifnet model file");
    Model m;
    m.rule = rule_from_string(j.at("rule").get<std::string>());
    const auto& n = j.at("network");
    m.network.d_in = n.at("d_in").get<std::size_t>();
    m.network.h1 = n.at("h1").get<std::size_t>();
    m.network.h2 = n.at("h2").get<std::size_t>();
    m.network.n_out = n.at("n_out").get<std::size_t>();
    m.network.t_steps = n.at("t_steps").get<std::size_t>();
    m.network.readout = readout_from_string(n.at("readout").get<std::string>());
    m.network.lif_h1 = lif_from(n.at("lif_h1"));
    m.network.lif_h2 = lif_from(n.at("lif_h2"));
    m.network.lif_out = lif_from(n.at("lif_out"));
    const auto& e = j.at("encoder");
    m.encoder.scheme = scheme_from_string(e.at("scheme").get<std::string>());
    m.encoder.t_steps = e.at("t_steps").get<std::size_t>();
    m.encoder.gain = e.at("gain").get<double>();
    m.encoder.seed = e.at("seed").get<std::uint64_t>();
    m.encoder.resample_per_epoch = e.at("resample_per_epoch").get<bool>();
    const auto& t = j.at("tempotron");
    m.tempotron.tau_m = t.at("tau_m").get<double>();
    m.tempotron.tau_s = t.at("tau_s").get<double>();
    m.tempotron.lambda_lr = t.at("lambda_lr").get<double>();
    m.tempotron.t_window = t.at("t_window").get<std::size_t>();
    m.tempotron.threshold = t.at("threshold").get<double>();
    const auto& w = j.at("weights");
    m.weights = {matrix_from(w.at("in_h1")), matrix_from(w.at("h1_h2")), matrix_from(w.at("h2_out"))};
    if (j.contains("feature_stats")) {
      const auto& s = j.at("feature_stats");
      m.stats = FeatureStats{s.at("min").get<std::vector<double>>(), s.at("max").get<std::vector<double>>()};
      if (m.stats->min.size() != m.network.d_in || m.stats->max.size() != m.network.d_in) {
        throw InputError("feature stats dimension does not match the network input");
      }
    }
    m.network.validate();
    m.encoder.validate();
    m.weights.check_shapes(m.network);
    if (!m.weights.all_finite()) throw InputError("model weights contain NaN or Inf");
    return m;
  } catch (const Json::exception& ex) {
    throw InputError(std::string("malformed model file: ") + ex.what());
  } catch (const ConfigError& ex) {
    throw InputError(std::string("invalid model file: ") + ex.what());
  }
}

void write_json(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

void save_model(const Model& model, const std::filesystem::path& path) { write_json(model_to_json(model), path); }

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(ParseError::Kind::missing_file, 0, "cannot open '" + path.string() + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& ex) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + ex.what());
  }
  return model_from_json(j);
}

}  // namespace lifnet
