#include "spikeloom/engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace spikeloom {

// Spike apex and hyperpolarization guard for the simple model. The apex is
// the model's standard 30 mV cutoff; the floor keeps strong inhibition from
// pushing v into the region where the quadratic term rebounds.
namespace {
constexpr double kSmApexMv = 30.0;
constexpr double kSmFloorMv = -90.0;
}  // namespace

namespace detail {

ModelRt compile_model(const NeuronSpec& spec) {
  ModelRt m{};
  m.model = spec.model;
  if (spec.model == NeuronModel::Lif) {
    m.decay = std::exp(-1.0 / spec.lif.tau_ms);
    m.v_rest = spec.lif.v_rest;
    m.v_threshold = spec.lif.v_threshold;
    m.v_reset = spec.lif.v_reset;
    m.v_floor = spec.lif.v_floor;
  } else {
    m.a = spec.sm.a;
    m.b = spec.sm.b;
    m.c = spec.sm.c;
    m.d = spec.sm.d;
  }
  return m;
}

StepOut advance(const ModelRt& m, NeuronState& s, double input) {
  StepOut out;
  if (m.model == NeuronModel::Lif) {
    s.v = m.v_rest + (s.v - m.v_rest) * m.decay;
    s.v += input;
    if (s.v >= m.v_threshold) {
      s.v = m.v_reset;
      out.fired = true;
    }
    if (s.v < m.v_floor) s.v = m.v_floor;
    return out;
  }
  // Simple model: two half-ms substeps for numerical stability.
  for (int half = 0; half < 2; ++half) {
    s.v += 0.5 * (0.04 * s.v * s.v + 5.0 * s.v + 140.0 - s.u + input);
    if (s.v < kSmFloorMv) s.v = kSmFloorMv;
    if (s.v >= kSmApexMv) break;
  }
  s.u += m.a * (m.b * s.v - s.u);
  if (!std::isfinite(s.v) || !std::isfinite(s.u)) {
    s.v = m.c;
    s.u = m.b * m.c;
    out.overflowed = true;
    return out;
  }
  if (s.v >= kSmApexMv) {
    s.v = m.c;
    s.u += m.d;
    out.fired = true;
  }
  return out;
}

}  // namespace detail

namespace {

// Latency from the input tick to the spike tick, or -1 if no spike occurs
// within the window.
int fires_within(const detail::ModelRt& m, const NeuronState& rest, double current,
                 int window_ms) {
  NeuronState s = rest;
  for (int t = 0; t <= window_ms; ++t) {
    if (detail::advance(m, s, t == 0 ? current : 0.0).fired) return t;
  }
  return -1;
}

}  // namespace

NeuronSpec NeuronSpec::simple_model(SmParams p) {
  NeuronSpec spec;
  spec.model = NeuronModel::SimpleModel;
  spec.sm = p;
  return spec;
}

NeuronSpec NeuronSpec::lif_neuron(LifParams p) {
  NeuronSpec spec;
  spec.model = NeuronModel::Lif;
  spec.lif = p;
  return spec;
}

void NeuronSpec::validate() const {
  if (model == NeuronModel::Lif) {
    const auto& p = lif;
    for (double v : {p.tau_ms, p.v_rest, p.v_threshold, p.v_reset, p.v_floor}) {
      if (!std::isfinite(v)) throw BuildError("LIF parameter not finite");
    }
    if (p.tau_ms <= 0.0) throw BuildError("LIF time constant must be positive");
    if (p.v_threshold <= p.v_reset) throw BuildError("LIF threshold must exceed reset");
    if (p.v_threshold <= p.v_rest) throw BuildError("LIF threshold must exceed rest");
    if (p.v_floor > p.v_reset) throw BuildError("LIF floor must not exceed reset");
  } else {
    const auto& p = sm;
    for (double v : {p.a, p.b, p.c, p.d}) {
      if (!std::isfinite(v)) throw BuildError("SM parameter not finite");
    }
    if (p.a <= 0.0) throw BuildError("SM recovery rate a must be positive");
    if (p.c >= kSmApexMv) throw BuildError("SM reset must lie below the spike apex");
  }
}

NeuronState resting_state(const NeuronSpec& spec) {
  spec.validate();
  NeuronState s;
  if (spec.model == NeuronModel::Lif) {
    s.v = spec.lif.v_rest;
    return s;
  }
  // Fixed point of the SM: 0.04 v^2 + (5 - b) v + 140 = 0, lower root, u = b v.
  const double b = spec.sm.b;
  const double disc = (5.0 - b) * (5.0 - b) - 4.0 * 0.04 * 140.0;
  if (disc < 0.0) {
    throw CalibrationError("simple model has no resting state for these parameters");
  }
  s.v = (-(5.0 - b) - std::sqrt(disc)) / (2.0 * 0.04);
  s.u = b * s.v;

  // Reject unstable fixed points: a nudged neuron must settle, not spike.
  const detail::ModelRt m = detail::compile_model(spec);
  NeuronState probe = s;
  probe.v += 0.5;
  for (int t = 0; t < 400; ++t) {
    if (detail::advance(m, probe, 0.0).fired) {
      throw CalibrationError("simple model resting state is unstable");
    }
  }
  if (std::abs(probe.v - s.v) > 1.0) {
    throw CalibrationError("simple model resting state is unstable");
  }
  return s;
}

Calibration calibrate(const NeuronSpec& spec, double drive_margin) {
  if (!(drive_margin >= 1.0) || !std::isfinite(drive_margin)) {
    throw CalibrationError("drive margin must be >= 1");
  }
  const NeuronState rest = resting_state(spec);
  const detail::ModelRt m = detail::compile_model(spec);

  auto bisect = [&](int window_ms) {
    double hi = 1.0;
    int guard = 0;
    while (fires_within(m, rest, hi, window_ms) < 0) {
      hi *= 2.0;
      if (++guard > 100) throw CalibrationError("no spiking response found during calibration");
    }
    double lo = 0.0;
    for (int i = 0; i < 120; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (fires_within(m, rest, mid, window_ms) >= 0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  };

  Calibration cal;
  cal.theta = bisect(2);
  cal.instant_current = bisect(0);
  cal.drive_latency_ms = fires_within(m, rest, drive_margin * cal.theta, 8);
  if (cal.drive_latency_ms < 0) {
    throw CalibrationError("margin-scaled threshold current failed to spike");
  }
  return cal;
}

double calibrate_theta(const NeuronSpec& spec) { return calibrate(spec, 1.2).theta; }

Raster::Raster(std::vector<SpikeEvent> events, std::vector<std::string> labels)
    : events_(std::move(events)), labels_(std::move(labels)) {}

const std::string& Raster::label(NeuronId id) const {
  static const std::string unknown = "?";
  return id < labels_.size() ? labels_[id] : unknown;
}

std::vector<std::int64_t> Raster::times_of(NeuronId id) const {
  std::vector<std::int64_t> times;
  for (const auto& e : events_) {
    if (e.neuron == id) times.push_back(e.time_ms);
  }
  return times;
}

bool Raster::spiked_in(NeuronId id, std::int64_t from_ms, std::int64_t to_ms) const {
  return count_in(id, from_ms, to_ms) > 0;
}

std::size_t Raster::count_in(NeuronId id, std::int64_t from_ms, std::int64_t to_ms) const {
  std::size_t n = 0;
  for (const auto& e : events_) {
    if (e.neuron == id && e.time_ms >= from_ms && e.time_ms < to_ms) ++n;
  }
  return n;
}

void Raster::append(std::int64_t time_ms, NeuronId id) { events_.push_back({time_ms, id}); }

void Raster::write_csv(std::ostream& out) const {
  out << "time_ms,neuron_id,label\n";
  for (const auto& e : events_) {
    out << e.time_ms << ',' << e.neuron << ',' << label(e.neuron) << '\n';
  }
}

Circuit::Circuit(int delta_t_ms, double drive_margin)
    : delta_t_ms_(delta_t_ms), drive_margin_(drive_margin) {
  if (delta_t_ms < 1) throw BuildError("delta_t must be at least 1 ms");
  if (!(drive_margin >= 1.0)) throw BuildError("drive margin must be >= 1");
}

NeuronId Circuit::add_neuron(const NeuronSpec& spec, std::string label) {
  spec.validate();
  specs_.push_back(spec);
  labels_.push_back(std::move(label));
  return static_cast<NeuronId>(specs_.size() - 1);
}

void Circuit::check_id(NeuronId id) const {
  if (id >= specs_.size()) throw BuildError("unknown neuron id");
}

void Circuit::add_synapse(NeuronId pre, NeuronId post, double weight_theta, int delay_ms) {
  check_id(pre);
  check_id(post);
  if (weight_theta == 0.0 || !std::isfinite(weight_theta)) {
    throw BuildError("synapse weight must be nonzero");
  }
  if (delay_ms < 1) throw BuildError("synapse delay must be at least 1 ms");
  synapses_.push_back({pre, post, weight_theta, delay_ms});
}

void Circuit::set_port(const std::string& name, NeuronId id) {
  check_id(id);
  if (ports_.contains(name)) throw BuildError("duplicate port name: " + name);
  ports_.emplace(name, id);
}

NeuronId Circuit::port(const std::string& name) const {
  auto it = ports_.find(name);
  if (it == ports_.end()) throw BuildError("unknown port: " + name);
  return it->second;
}

bool Circuit::has_port(const std::string& name) const { return ports_.contains(name); }

void Circuit::schedule_spike(NeuronId id, std::int64_t time_ms) {
  check_id(id);
  if (time_ms < 0) throw BuildError("cannot schedule a spike before t=0");
  scheduled_.push_back({id, time_ms});
}

const NeuronSpec& Circuit::spec(NeuronId id) const {
  check_id(id);
  return specs_[id];
}

const std::string& Circuit::label(NeuronId id) const {
  check_id(id);
  return labels_[id];
}

Simulator::Simulator(const Circuit& circuit, NoiseConfig noise)
    : n_(circuit.neuron_count()), sigma_(noise.sigma), rng_(noise.seed) {
  if (sigma_ < 0.0) throw BuildError("noise sigma must be >= 0");

  models_.reserve(n_);
  states_.reserve(n_);
  theta_.reserve(n_);
  drive_.reserve(n_);
  noise_std_.reserve(n_);
  force_.reserve(n_);

  // Calibrate each distinct spec once.
  std::vector<NeuronSpec> seen;
  std::vector<Calibration> cals;
  std::vector<NeuronState> rests;
  for (NeuronId id = 0; id < n_; ++id) {
    const NeuronSpec& spec = circuit.spec(id);
    std::size_t k = 0;
    for (; k < seen.size(); ++k) {
      if (seen[k] == spec) break;
    }
    if (k == seen.size()) {
      seen.push_back(spec);
      cals.push_back(calibrate(spec, circuit.drive_margin()));
      rests.push_back(resting_state(spec));
    }
    models_.push_back(detail::compile_model(spec));
    states_.push_back(rests[k]);
    theta_.push_back(cals[k].theta);
    drive_.push_back(circuit.drive_margin() * cals[k].theta);
    noise_std_.push_back(sigma_ * cals[k].theta);
    force_.push_back(2.0 * cals[k].instant_current);
  }

  out_.assign(n_, {});
  int max_delay = 1;
  for (const Synapse& s : circuit.synapses()) {
    out_[s.pre].push_back({s.post, s.weight, s.delay_ms});
    max_delay = std::max(max_delay, s.delay_ms);
  }
  ring_.assign(static_cast<std::size_t>(max_delay) + 1, {});

  for (const ScheduledSpike& e : circuit.scheduled()) {
    externals_[e.time_ms].push_back(e.neuron);
  }
  raster_.set_labels(circuit.labels());
}

void Simulator::schedule_spike(NeuronId id, std::int64_t time_ms) {
  if (id >= n_) throw BuildError("unknown neuron id");
  if (time_ms < now_) throw Error("cannot schedule a spike in the past");
  externals_[time_ms].push_back(id);
}

const NeuronState& Simulator::state(NeuronId id) const {
  if (id >= n_) throw BuildError("unknown neuron id");
  return states_[id];
}

double Simulator::theta(NeuronId id) const {
  if (id >= n_) throw BuildError("unknown neuron id");
  return theta_[id];
}

void Simulator::deliver_tick_inputs() {
  auto& bucket = ring_[static_cast<std::size_t>(now_ % static_cast<std::int64_t>(ring_.size()))];
  for (const Delivery& d : bucket) {
    double current = d.weight * drive_[d.post];
    if (sigma_ > 0.0) current += gauss_(rng_) * noise_std_[d.post];
    states_[d.post].pending_input += current;
  }
  bucket.clear();

  if (auto it = externals_.find(now_); it != externals_.end()) {
    for (NeuronId id : it->second) states_[id].pending_input += force_[id];
    externals_.erase(it);
  }
}

const std::vector<NeuronId>& Simulator::step() {
  deliver_tick_inputs();
  fired_.clear();
  for (NeuronId id = 0; id < n_; ++id) {
    NeuronState& s = states_[id];
    const double input = s.pending_input;
    s.pending_input = 0.0;

    const detail::StepOut out = detail::advance(models_[id], s, input);
    if (out.overflowed) ++overflows_;
    if (out.fired) {
      raster_.append(now_, id);
      fired_.push_back(id);
    }
  }
  for (NeuronId id : fired_) {
    for (const OutEdge& e : out_[id]) {
      auto idx = static_cast<std::size_t>((now_ + e.delay_ms) % static_cast<std::int64_t>(ring_.size()));
      ring_[idx].push_back({e.post, e.weight});
    }
  }
  ++now_;
  return fired_;
}

void Simulator::run_for(std::int64_t duration_ms) { run_until(now_ + duration_ms); }

void Simulator::run_until(std::int64_t time_ms) {
  while (now_ < time_ms) step();
}

Raster run(const Circuit& circuit, std::int64_t duration_ms, NoiseConfig noise) {
  if (duration_ms < 0) throw BuildError("duration must be >= 0");
  Simulator sim(circuit, noise);
  sim.run_for(duration_ms);
  return sim.take_raster();
}

}  // namespace spikeloom
