#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spikeloom/engine.hpp"

namespace spikeloom::blocks {

/// Neuron used by the block builders unless the caller overrides it: a
/// fast-membrane LIF whose short time constant keeps the coincidence window
/// at one tick.
NeuronSpec default_block_neuron();

/// Closed ring P1..Pn firing delta_t apart; firing times define phases
/// phi_1..phi_n. The builder schedules the kick-start spike at t = 1 ms.
struct PacemakerHandle {
  std::vector<NeuronId> phase_neurons;  // P1..Pn
  int phases = 0;
  int delta_t_ms = 0;
  std::int64_t t0 = 0;  // first phi_1 spike time

  std::int64_t period_ms() const { return static_cast<std::int64_t>(phases) * delta_t_ms; }
  /// Spike time of P<phase> (1-based) in the given cycle (0-based).
  std::int64_t onset(std::int64_t cycle, int phase) const {
    return t0 + cycle * period_ms() + static_cast<std::int64_t>(phase - 1) * delta_t_ms;
  }
  std::int64_t phi1(std::int64_t cycle) const { return onset(cycle, 1); }
};

PacemakerHandle build_pacemaker(Circuit& circuit, int phases, int delta_t_ms,
                                const NeuronSpec& neuron = default_block_neuron(),
                                const std::string& prefix = "");

enum class GateKind { And, Or };

struct GateHandle {
  GateKind kind = GateKind::And;
  std::vector<NeuronId> inputs;
  NeuronId output = 0;
};

/// Coincidence AND: output fires iff all n inputs spike in the same tick.
/// Fan-in is capped at 4 (theta/4 per input is the reliability boundary).
GateHandle build_and_gate(Circuit& circuit, int fan_in,
                          const NeuronSpec& neuron = default_block_neuron(),
                          const std::string& prefix = "");

/// Any single input spike triggers the output one delta_t later.
GateHandle build_or_gate(Circuit& circuit, int fan_in,
                         const NeuronSpec& neuron = default_block_neuron(),
                         const std::string& prefix = "");

/// Selector: 2^omega spike inputs I_j, omega control inputs S_i, one output Y.
/// Controls and inputs are sampled at phi_1; the selected C_j fires at phi_2
/// and Y at phi_3.
struct SelectorHandle {
  std::vector<NeuronId> inputs;    // I0..I(2^omega - 1)
  std::vector<NeuronId> controls;  // S0..S(omega-1)
  std::vector<NeuronId> a, b;      // A_i / B_i pairs
  std::vector<NeuronId> c;         // C_j layer
  NeuronId y = 0;
  int omega = 0;
};

struct SelectorOptions {
  NeuronSpec neuron = default_block_neuron();
  std::string prefix{};
};

SelectorHandle build_selector(Circuit& circuit, const PacemakerHandle& pm, int omega,
                              const SelectorOptions& options = {});

/// Ties selector input I_j to phi_2 (constant '1') wherever table[j] is set;
/// entries left clear stay genuinely unconnected. Y then computes f(S...) at
/// phi_3 from the second cycle on (the tie needs one cycle to start).
void configure_function_generator(Circuit& circuit, const SelectorHandle& selector,
                                  const PacemakerHandle& pm, const std::vector<bool>& table);

/// Decoder: one input I routed to one of 2^omega outputs chosen by the
/// controls. Input and controls are sampled at phi_1; the selected Y_j fires
/// at phi_2, or stays silent when I is silent.
struct DecoderHandle {
  NeuronId input = 0;
  std::vector<NeuronId> controls;  // S0..S(omega-1)
  std::vector<NeuronId> a, b;
  std::vector<NeuronId> outputs;  // Y0..Y(2^omega - 1)
  int omega = 0;
};

struct DecoderOptions {
  NeuronSpec neuron = default_block_neuron();
  std::string prefix{};
  /// Reuse existing neurons as controls (S0 first); empty means create fresh
  /// stimulus neurons.
  std::vector<NeuronId> controls{};
  std::optional<NeuronId> input{};
  /// Wire I from phi_2 so it fires at every phi_1 from cycle 1 on, turning
  /// the block into a one-hot address decoder.
  bool tie_input_high = false;
};

DecoderHandle build_decoder(Circuit& circuit, const PacemakerHandle& pm, int omega,
                            const DecoderOptions& options = {});

}  // namespace spikeloom::blocks
