#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace spikeloom {

using NeuronId = std::uint32_t;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BuildError : Error {
  using Error::Error;
};
struct CalibrationError : Error {
  using Error::Error;
};

enum class NeuronModel { SimpleModel, Lif };

/// Izhikevich simple-model parameters; defaults are the regular-spiking set.
struct SmParams {
  double a = 0.02;
  double b = 0.2;
  double c = -65.0;
  double d = 8.0;
  bool operator==(const SmParams&) const = default;
};

/// Leaky integrate-and-fire parameters. Synaptic input arrives as an
/// instantaneous potential kick; v_floor bounds hyperpolarization so strong
/// inhibition does not leave a long-lived residual.
struct LifParams {
  double tau_ms = 10.0;
  double v_rest = -65.0;
  double v_threshold = -50.0;
  double v_reset = -65.0;
  double v_floor = -80.0;
  bool operator==(const LifParams&) const = default;
};

struct NeuronSpec {
  NeuronModel model = NeuronModel::Lif;
  SmParams sm{};
  LifParams lif{};

  static NeuronSpec simple_model(SmParams p = {});
  static NeuronSpec lif_neuron(LifParams p = {});

  void validate() const;  // throws BuildError on bad parameters
  bool operator==(const NeuronSpec&) const = default;
};

struct NeuronState {
  double v = 0.0;
  double u = 0.0;  // SM recovery variable, unused for LIF
  double pending_input = 0.0;
};

namespace detail {

/// Per-neuron runtime parameters compiled from a NeuronSpec.
struct ModelRt {
  NeuronModel model = NeuronModel::Lif;
  double decay = 0.0, v_rest = 0.0, v_threshold = 0.0, v_reset = 0.0, v_floor = 0.0;  // LIF
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;                                          // SM
};

struct StepOut {
  bool fired = false;
  bool overflowed = false;
};

ModelRt compile_model(const NeuronSpec& spec);
StepOut advance(const ModelRt& m, NeuronState& s, double input);

}  // namespace detail

/// Directed edge. Weight is a signed fraction of theta (+1.0 = one full
/// spike-triggering EPSP); delay is a whole number of ticks >= 1.
struct Synapse {
  NeuronId pre = 0;
  NeuronId post = 0;
  double weight = 0.0;
  int delay_ms = 1;
};

struct NoiseConfig {
  double sigma = 0.0;  // per delivering synapse per tick, as a fraction of theta
  std::uint64_t seed = 1;
};

struct SpikeEvent {
  std::int64_t time_ms = 0;
  NeuronId neuron = 0;
};

struct ScheduledSpike {
  NeuronId neuron = 0;
  std::int64_t time_ms = 0;
};

/// Recorded spikes, time-ordered, with a label per neuron id.
class Raster {
 public:
  Raster() = default;
  Raster(std::vector<SpikeEvent> events, std::vector<std::string> labels);

  const std::vector<SpikeEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const std::string& label(NeuronId id) const;

  std::vector<std::int64_t> times_of(NeuronId id) const;
  bool spiked_in(NeuronId id, std::int64_t from_ms, std::int64_t to_ms) const;  // [from, to)
  std::size_t count_in(NeuronId id, std::int64_t from_ms, std::int64_t to_ms) const;

  void append(std::int64_t time_ms, NeuronId id);
  void set_labels(std::vector<std::string> labels) { labels_ = std::move(labels); }

  /// CSV lines `time_ms,neuron_id,label`, ordered by time then neuron id.
  void write_csv(std::ostream& out) const;

 private:
  std::vector<SpikeEvent> events_;
  std::vector<std::string> labels_;
};

/// Neuron table + synapse table + named ports + stimulus schedule.
/// delta_t_ms is the base assembly-to-assembly delay used by block builders;
/// drive_margin scales delivered synaptic current above the calibrated
/// threshold so designed coincidences keep headroom under noise.
class Circuit {
 public:
  explicit Circuit(int delta_t_ms = 20, double drive_margin = 1.2);

  NeuronId add_neuron(const NeuronSpec& spec, std::string label);
  void add_synapse(NeuronId pre, NeuronId post, double weight_theta, int delay_ms);

  void set_port(const std::string& name, NeuronId id);
  NeuronId port(const std::string& name) const;
  bool has_port(const std::string& name) const;

  /// Forced external spike: at time_ms the neuron receives a suprathreshold
  /// current and fires in that tick.
  void schedule_spike(NeuronId id, std::int64_t time_ms);

  std::size_t neuron_count() const { return specs_.size(); }
  const NeuronSpec& spec(NeuronId id) const;
  const std::string& label(NeuronId id) const;
  std::vector<std::string> labels() const { return labels_; }
  const std::vector<Synapse>& synapses() const { return synapses_; }
  const std::map<std::string, NeuronId>& ports() const { return ports_; }
  const std::vector<ScheduledSpike>& scheduled() const { return scheduled_; }
  int delta_t_ms() const { return delta_t_ms_; }
  double drive_margin() const { return drive_margin_; }

 private:
  void check_id(NeuronId id) const;

  std::vector<NeuronSpec> specs_;
  std::vector<std::string> labels_;
  std::vector<Synapse> synapses_;
  std::map<std::string, NeuronId> ports_;
  std::vector<ScheduledSpike> scheduled_;
  int delta_t_ms_ = 20;
  double drive_margin_ = 1.2;
};

struct Calibration {
  double theta = 0.0;            // smallest single-tick current spiking within 2 ms of rest
  double instant_current = 0.0;  // smallest current spiking in the arrival tick itself
  int drive_latency_ms = 0;      // arrival-to-spike delay at drive_margin * theta
};

/// Bisection calibration of the spike-triggering current for a neuron model.
Calibration calibrate(const NeuronSpec& spec, double drive_margin = 1.2);
double calibrate_theta(const NeuronSpec& spec);

/// Quiescent membrane state (analytic fixed point, checked for stability).
NeuronState resting_state(const NeuronSpec& spec);

/// 1 ms time-stepped simulation of a circuit with delayed synapses and
/// optional Gaussian synaptic noise. Deterministic for a fixed seed.
class Simulator {
 public:
  explicit Simulator(const Circuit& circuit, NoiseConfig noise = {});

  /// Advance one tick; returns the neurons that fired this tick (ascending id).
  const std::vector<NeuronId>& step();
  void run_for(std::int64_t duration_ms);
  void run_until(std::int64_t time_ms);

  void schedule_spike(NeuronId id, std::int64_t time_ms);  // time >= now

  std::int64_t now() const { return now_; }
  const Raster& raster() const { return raster_; }
  Raster take_raster() { return std::move(raster_); }
  const NeuronState& state(NeuronId id) const;
  double theta(NeuronId id) const;
  std::uint64_t overflow_count() const { return overflows_; }

 private:
  struct Delivery {
    NeuronId post;
    double weight;
  };
  struct OutEdge {
    NeuronId post;
    double weight;
    int delay_ms;
  };

  void deliver_tick_inputs();

  std::size_t n_ = 0;
  std::vector<detail::ModelRt> models_;
  std::vector<NeuronState> states_;
  std::vector<double> theta_;      // calibrated threshold current
  std::vector<double> drive_;      // margin * theta
  std::vector<double> noise_std_;  // sigma * theta
  std::vector<double> force_;      // injected current for scheduled spikes
  std::vector<std::vector<OutEdge>> out_;
  std::vector<std::vector<Delivery>> ring_;
  std::map<std::int64_t, std::vector<NeuronId>> externals_;
  std::vector<NeuronId> fired_;
  std::int64_t now_ = 0;
  std::uint64_t overflows_ = 0;
  double sigma_ = 0.0;
  std::mt19937_64 rng_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
  Raster raster_;
};

/// Build a simulator, run `duration_ms` ticks, return the raster.
Raster run(const Circuit& circuit, std::int64_t duration_ms, NoiseConfig noise = {});

}  // namespace spikeloom
