#include "spikeloom/blocks.hpp"

namespace spikeloom::blocks {

namespace {

// Synapse delay for a pre-spike -> post-spike span, compensating the firing
// latency of the post neuron at drive level.
int hop(int span_ms, int latency_ms) {
  const int d = span_ms - latency_ms;
  if (d < 1) throw BuildError("delta_t too small for block timing");
  return d;
}

int drive_latency(const Circuit& c, const NeuronSpec& neuron) {
  return calibrate(neuron, c.drive_margin()).drive_latency_ms;
}

std::string name(const std::string& prefix, const std::string& base) { return prefix + base; }

}  // namespace

NeuronSpec default_block_neuron() {
  LifParams p;
  p.tau_ms = 0.5;
  return NeuronSpec::lif_neuron(p);
}

PacemakerHandle build_pacemaker(Circuit& circuit, int phases, int delta_t_ms,
                                const NeuronSpec& neuron, const std::string& prefix) {
  if (phases < 2) throw BuildError("pacemaker needs at least 2 phases");
  if (delta_t_ms < 1) throw BuildError("pacemaker delta_t must be >= 1 ms");
  const int lat = drive_latency(circuit, neuron);

  PacemakerHandle pm;
  pm.phases = phases;
  pm.delta_t_ms = delta_t_ms;
  pm.t0 = 1;
  for (int k = 1; k <= phases; ++k) {
    NeuronId id = circuit.add_neuron(neuron, name(prefix, "P" + std::to_string(k)));
    circuit.set_port(name(prefix, "P" + std::to_string(k)), id);
    pm.phase_neurons.push_back(id);
  }
  for (int k = 0; k < phases; ++k) {
    circuit.add_synapse(pm.phase_neurons[k], pm.phase_neurons[(k + 1) % phases], 1.0,
                        hop(delta_t_ms, lat));
  }
  circuit.schedule_spike(pm.phase_neurons[0], pm.t0);
  return pm;
}

GateHandle build_and_gate(Circuit& circuit, int fan_in, const NeuronSpec& neuron,
                          const std::string& prefix) {
  if (fan_in < 2 || fan_in > 4) {
    throw BuildError("AND fan-in must be between 2 and 4 (theta/4 per input is the limit)");
  }
  const int lat = drive_latency(circuit, neuron);
  GateHandle g;
  g.kind = GateKind::And;
  g.output = circuit.add_neuron(neuron, name(prefix, "and_out"));
  for (int i = 0; i < fan_in; ++i) {
    NeuronId in = circuit.add_neuron(neuron, name(prefix, "and_in" + std::to_string(i)));
    circuit.add_synapse(in, g.output, 1.0 / fan_in, hop(circuit.delta_t_ms(), lat));
    g.inputs.push_back(in);
  }
  return g;
}

GateHandle build_or_gate(Circuit& circuit, int fan_in, const NeuronSpec& neuron,
                         const std::string& prefix) {
  if (fan_in < 1) throw BuildError("OR fan-in must be >= 1");
  const int lat = drive_latency(circuit, neuron);
  GateHandle g;
  g.kind = GateKind::Or;
  g.output = circuit.add_neuron(neuron, name(prefix, "or_out"));
  for (int i = 0; i < fan_in; ++i) {
    NeuronId in = circuit.add_neuron(neuron, name(prefix, "or_in" + std::to_string(i)));
    circuit.add_synapse(in, g.output, 1.0, hop(circuit.delta_t_ms(), lat));
    g.inputs.push_back(in);
  }
  return g;
}

namespace {

// A_i fires at phi_1 when S_i is silent, B_i when S_i fires; both are sampled
// one tick after phi_1 and compensated downstream.
struct ControlLayer {
  std::vector<NeuronId> a, b;
};

ControlLayer build_control_layer(Circuit& circuit, const PacemakerHandle& pm,
                                 const std::vector<NeuronId>& controls,
                                 const NeuronSpec& neuron, const std::string& prefix) {
  ControlLayer layer;
  const NeuronId p1 = pm.phase_neurons[0];
  for (std::size_t i = 0; i < controls.size(); ++i) {
    NeuronId a = circuit.add_neuron(neuron, name(prefix, "A" + std::to_string(i)));
    NeuronId b = circuit.add_neuron(neuron, name(prefix, "B" + std::to_string(i)));
    circuit.add_synapse(p1, a, 1.0, 1);
    circuit.add_synapse(p1, b, 0.5, 1);
    circuit.add_synapse(controls[i], a, -2.0, 1);
    circuit.add_synapse(controls[i], b, 0.5, 1);
    layer.a.push_back(a);
    layer.b.push_back(b);
  }
  return layer;
}

}  // namespace

SelectorHandle build_selector(Circuit& circuit, const PacemakerHandle& pm, int omega,
                              const SelectorOptions& options) {
  if (omega < 1 || omega > 3) throw BuildError("selector omega out of range (1..3)");
  const int lat = drive_latency(circuit, options.neuron);
  const int dt = pm.delta_t_ms;
  const int sample_skew = 1 + lat;  // A/B fire this long after phi_1
  const std::string& px = options.prefix;

  SelectorHandle sel;
  sel.omega = omega;
  const int n_inputs = 1 << omega;

  for (int i = 0; i < omega; ++i) {
    NeuronId s = circuit.add_neuron(options.neuron, name(px, "S" + std::to_string(i)));
    circuit.set_port(name(px, "S" + std::to_string(i)), s);
    sel.controls.push_back(s);
  }
  for (int j = 0; j < n_inputs; ++j) {
    NeuronId in = circuit.add_neuron(options.neuron, name(px, "I" + std::to_string(j)));
    circuit.set_port(name(px, "I" + std::to_string(j)), in);
    sel.inputs.push_back(in);
  }

  ControlLayer layer = build_control_layer(circuit, pm, sel.controls, options.neuron, px);
  sel.a = layer.a;
  sel.b = layer.b;

  sel.y = circuit.add_neuron(options.neuron, name(px, "Y"));
  circuit.set_port(name(px, "Y"), sel.y);

  const double w = 1.0 / (omega + 1);
  for (int j = 0; j < n_inputs; ++j) {
    NeuronId c = circuit.add_neuron(options.neuron, name(px, "C" + std::to_string(j)));
    sel.c.push_back(c);
    for (int i = 0; i < omega; ++i) {
      NeuronId enable = ((j >> i) & 1) ? layer.b[i] : layer.a[i];
      circuit.add_synapse(enable, c, w, hop(dt - sample_skew, lat));
    }
    circuit.add_synapse(sel.inputs[j], c, w, hop(dt, lat));
    circuit.add_synapse(c, sel.y, 1.0, hop(dt, lat));
  }
  return sel;
}

void configure_function_generator(Circuit& circuit, const SelectorHandle& selector,
                                  const PacemakerHandle& pm, const std::vector<bool>& table) {
  if (table.size() != selector.inputs.size()) {
    throw BuildError("function table must have one entry per selector input");
  }
  const NeuronSpec& neuron = circuit.spec(selector.inputs[0]);
  const int lat = drive_latency(circuit, neuron);
  const NeuronId p2 = pm.phase_neurons[1];
  for (std::size_t j = 0; j < table.size(); ++j) {
    if (table[j]) {
      circuit.add_synapse(p2, selector.inputs[j], 1.0, hop((pm.phases - 1) * pm.delta_t_ms, lat));
    }
  }
}

DecoderHandle build_decoder(Circuit& circuit, const PacemakerHandle& pm, int omega,
                            const DecoderOptions& options) {
  if (omega < 1 || omega > 3) throw BuildError("decoder omega out of range (1..3)");
  if (!options.controls.empty() && options.controls.size() != static_cast<std::size_t>(omega)) {
    throw BuildError("decoder control count must equal omega");
  }
  const int lat = drive_latency(circuit, options.neuron);
  const int dt = pm.delta_t_ms;
  const int sample_skew = 1 + lat;
  const std::string& px = options.prefix;

  DecoderHandle dec;
  dec.omega = omega;

  if (options.controls.empty()) {
    for (int i = 0; i < omega; ++i) {
      NeuronId s = circuit.add_neuron(options.neuron, name(px, "S" + std::to_string(i)));
      circuit.set_port(name(px, "S" + std::to_string(i)), s);
      dec.controls.push_back(s);
    }
  } else {
    dec.controls = options.controls;
  }

  if (options.input.has_value()) {
    dec.input = *options.input;
  } else {
    dec.input = circuit.add_neuron(options.neuron, name(px, "I"));
    circuit.set_port(name(px, "I"), dec.input);
  }
  if (options.tie_input_high) {
    circuit.add_synapse(pm.phase_neurons[1], dec.input, 1.0, hop((pm.phases - 1) * dt, lat));
  }

  ControlLayer layer = build_control_layer(circuit, pm, dec.controls, options.neuron, px);
  dec.a = layer.a;
  dec.b = layer.b;

  const int n_outputs = 1 << omega;
  const double w = 1.0 / (omega + 1);
  for (int j = 0; j < n_outputs; ++j) {
    NeuronId y = circuit.add_neuron(options.neuron, name(px, "Y" + std::to_string(j)));
    circuit.set_port(name(px, "Y" + std::to_string(j)), y);
    dec.outputs.push_back(y);
    for (int i = 0; i < omega; ++i) {
      NeuronId enable = ((j >> i) & 1) ? layer.b[i] : layer.a[i];
      circuit.add_synapse(enable, y, w, hop(dt - sample_skew, lat));
    }
    circuit.add_synapse(dec.input, y, w, hop(dt, lat));
  }
  return dec;
}

}  // namespace spikeloom::blocks
