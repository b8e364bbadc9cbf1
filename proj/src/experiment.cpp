#include "lifnet/experiment.hpp"

#include "lifnet/errors.hpp"

namespace lifnet {

NetworkConfig RunSpec::network(std::size_t d_in) const {
  NetworkConfig c;
  c.d_in = d_in;
  c.h1 = h1;
  c.h2 = h2;
  const LifParams lif{tau_m, v_th, 0.0, 1.0, bias};
  c.lif_h1 = lif;
  c.lif_h2 = lif;
  c.lif_out = lif;
  c.t_steps = t_steps;
  c.readout = rule == Rule::tempotron ? Readout::spike_count : Readout::membrane_logit;
  return c;
}

EncoderConfig RunSpec::encoder() const {
  EncoderConfig e;
  e.scheme = scheme;
  e.t_steps = t_steps;
  e.gain = gain;
  e.seed = seed;
  e.resample_per_epoch = resample_per_epoch;
  return e;
}

SglParams RunSpec::sgl() const { return {sgl_alpha, sgl_eta, sgl_center.value_or(v_th)}; }

TempotronParams RunSpec::tempotron() const {
  return TempotronParams::with_ratio(tau_m, tau_ratio, tempotron_lambda, t_steps, tempotron_threshold);
}

void RunSpec::validate(std::size_t d_in) const {
  network(d_in).validate();
  encoder().validate();
  switch (rule) {
    case Rule::sgl: sgl().validate(); break;
    case Rule::tempotron: tempotron().validate(); break;
    case Rule::bal:
      sgl().validate();
      bal.validate();
      break;
  }
}

std::pair<Model, TrainReport> run_training(const RunSpec& spec, const TrainingData& data) {
  spec.validate(data.train.d);
  const auto net = spec.network(data.train.d);
  const auto enc = spec.encoder();
  switch (spec.rule) {
    case Rule::sgl: return train_sgl(net, enc, data, spec.sgl(), spec.epochs, spec.seed);
    case Rule::tempotron: return train_tempotron(net, enc, data, spec.tempotron(), spec.epochs, spec.seed);
    case Rule::bal: return train_bal(net, enc, data, spec.sgl(), spec.bal, spec.epochs, spec.seed);
  }
  throw ConfigError("unknown rule");
}

Dataset default_dataset(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.seed = seed;
  return generate_synthetic(spec);
}

}  // namespace lifnet
