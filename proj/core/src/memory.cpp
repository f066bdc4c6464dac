#include "spikeloom/memory.hpp"

namespace spikeloom::memory {

namespace {

int hop(int span_ms, int latency_ms) {
  const int d = span_ms - latency_ms;
  if (d < 1) throw BuildError("delta_t too small for memory timing");
  return d;
}

std::string name(const std::string& prefix, const std::string& base) { return prefix + base; }

// Kernel pair plus n bistable bit loops. Loop neurons trade half-EPSPs with
// their pair while the matching kernel neuron supplies the other half.
struct LoopWiring {
  NeuronId ka, kb;
  std::vector<NeuronId> a, b;
};

LoopWiring add_kernel_and_loops(Circuit& c, int n_bits, const NeuronSpec& neuron, int dt, int lat,
                                const std::string& prefix, const std::string& cell_suffix) {
  LoopWiring w;
  w.ka = c.add_neuron(neuron, name(prefix, "Ka" + cell_suffix));
  w.kb = c.add_neuron(neuron, name(prefix, "Kb" + cell_suffix));
  c.add_synapse(w.ka, w.kb, 1.0, hop(dt, lat));
  c.add_synapse(w.kb, w.ka, 1.0, hop(dt, lat));
  for (int j = 0; j < n_bits; ++j) {
    NeuronId a = c.add_neuron(neuron, name(prefix, "a_" + std::to_string(j) + cell_suffix));
    NeuronId b = c.add_neuron(neuron, name(prefix, "b_" + std::to_string(j) + cell_suffix));
    c.add_synapse(a, b, 0.5, hop(dt, lat));
    c.add_synapse(b, a, 0.5, hop(dt, lat));
    c.add_synapse(w.ka, b, 0.5, hop(dt, lat));
    c.add_synapse(w.kb, a, 0.5, hop(dt, lat));
    w.a.push_back(a);
    w.b.push_back(b);
  }
  return w;
}

}  // namespace

int cell_index(std::uint8_t address_bits) { return address_bits & 0x0F; }

int trapped_a_phase(int store_phase, int loops, int phases) {
  if (phases < 2) throw BuildError("phase count must be >= 2");
  if (store_phase < 1 || store_phase > phases) throw BuildError("store phase out of range");
  if (loops < 0) throw BuildError("loop count must be >= 0");
  return static_cast<int>((store_phase - 1 + 2LL * loops) % phases) + 1;
}

std::vector<NeuronId> MemoryCellHandle::all_neurons() const {
  std::vector<NeuronId> ids{ka, kb, gk, ge, ge_relay};
  for (auto v : {&a, &b, &gm, &gr}) ids.insert(ids.end(), v->begin(), v->end());
  return ids;
}

MemoryCellHandle build_memory_cell(Circuit& circuit, const blocks::PacemakerHandle& pm,
                                   int n_bits, const NeuronSpec& neuron,
                                   const std::string& prefix) {
  if (n_bits < 1) throw BuildError("memory cell needs at least one bit");
  const int dt = pm.delta_t_ms;
  const int lat = calibrate(neuron, circuit.drive_margin()).drive_latency_ms;

  MemoryCellHandle cell;
  cell.enable = circuit.add_neuron(neuron, name(prefix, "enable"));
  cell.m_in = circuit.add_neuron(neuron, name(prefix, "M"));
  cell.r_in = circuit.add_neuron(neuron, name(prefix, "R"));
  cell.e_in = circuit.add_neuron(neuron, name(prefix, "E"));
  circuit.set_port(name(prefix, "enable"), cell.enable);
  circuit.set_port(name(prefix, "M"), cell.m_in);
  circuit.set_port(name(prefix, "R"), cell.r_in);
  circuit.set_port(name(prefix, "E"), cell.e_in);
  for (int j = 0; j < n_bits; ++j) {
    NeuronId in = circuit.add_neuron(neuron, name(prefix, "in_" + std::to_string(j)));
    circuit.set_port(name(prefix, "in_" + std::to_string(j)), in);
    cell.bit_in.push_back(in);
  }

  LoopWiring loops = add_kernel_and_loops(circuit, n_bits, neuron, dt, lat, prefix, "");
  cell.ka = loops.ka;
  cell.kb = loops.kb;
  cell.a = loops.a;
  cell.b = loops.b;
  circuit.set_port(name(prefix, "Ka"), cell.ka);
  circuit.set_port(name(prefix, "Kb"), cell.kb);

  // Store: the (enable AND m) event starts the kernel; Ka fires 2*delta_t
  // after the strobe and Kb is inhibited at store time.
  cell.gk = circuit.add_neuron(neuron, name(prefix, "GK"));
  circuit.add_synapse(cell.enable, cell.gk, 0.5, hop(dt, lat));
  circuit.add_synapse(cell.m_in, cell.gk, 0.5, hop(dt, lat));
  circuit.add_synapse(cell.gk, cell.ka, 2.0, hop(dt, lat));
  circuit.add_synapse(cell.gk, cell.kb, -2.0, 1);

  for (int j = 0; j < n_bits; ++j) {
    const std::string js = std::to_string(j);
    NeuronId gm = circuit.add_neuron(neuron, name(prefix, "GM_" + js));
    circuit.add_synapse(cell.enable, gm, 1.0 / 3.0, hop(dt, lat));
    circuit.add_synapse(cell.m_in, gm, 1.0 / 3.0, hop(dt, lat));
    circuit.add_synapse(cell.bit_in[j], gm, 1.0 / 3.0, hop(dt, lat));
    circuit.add_synapse(gm, cell.a[j], 2.0, hop(dt, lat));
    cell.gm.push_back(gm);

    // Read: the trapped spike alternates between a and b every delta_t, so
    // both columns feed the gate; at most one arrives per tick.
    NeuronId gr = circuit.add_neuron(neuron, name(prefix, "GR_" + js));
    circuit.add_synapse(cell.enable, gr, 1.0 / 3.0, hop(dt, lat));
    circuit.add_synapse(cell.r_in, gr, 1.0 / 3.0, hop(dt, lat));
    circuit.add_synapse(cell.a[j], gr, 1.0 / 3.0, hop(dt, lat));
    circuit.add_synapse(cell.b[j], gr, 1.0 / 3.0, hop(dt, lat));
    circuit.set_port(name(prefix, "out_" + js), gr);
    cell.gr.push_back(gr);
  }

  // Erase: two inhibition waves delta_t apart cover a full loop period, so
  // whichever kernel neuron is due next is silenced and the loops starve.
  cell.ge = circuit.add_neuron(neuron, name(prefix, "GE"));
  cell.ge_relay = circuit.add_neuron(neuron, name(prefix, "GEr"));
  circuit.add_synapse(cell.enable, cell.ge, 0.5, hop(dt, lat));
  circuit.add_synapse(cell.e_in, cell.ge, 0.5, hop(dt, lat));
  circuit.add_synapse(cell.ge, cell.ka, -2.0, hop(dt, lat));
  circuit.add_synapse(cell.ge, cell.kb, -2.0, hop(dt, lat));
  circuit.add_synapse(cell.ge, cell.ge_relay, 1.0, hop(dt, lat));
  circuit.add_synapse(cell.ge_relay, cell.ka, -2.0, hop(dt, lat));
  circuit.add_synapse(cell.ge_relay, cell.kb, -2.0, hop(dt, lat));
  return cell;
}

std::vector<NeuronId> DraftMemoryHandle::cell_neurons(int k) const {
  const Cell& c = cells.at(static_cast<std::size_t>(k));
  std::vector<NeuronId> ids{c.ka, c.kb, c.gk, c.ge, c.ge_relay, c.gsm};
  for (int j = 0; j < 2; ++j) {
    ids.push_back(c.a[j]);
    ids.push_back(c.b[j]);
    ids.push_back(c.gm[j]);
    ids.push_back(c.gr[j]);
  }
  return ids;
}

DraftMemoryHandle build_draft_memory(Circuit& circuit, const blocks::PacemakerHandle& pm,
                                     const NeuronSpec& neuron, const std::string& prefix) {
  if (pm.phases < 4) throw BuildError("draft memory needs a pacemaker with at least 4 phases");
  const int dt = pm.delta_t_ms;
  const int lat = calibrate(neuron, circuit.drive_margin()).drive_latency_ms;

  DraftMemoryHandle dm;
  dm.pm = pm;

  for (int i = 0; i < 4; ++i) {
    const std::string n = "D" + std::to_string(i);
    dm.address[i] = circuit.add_neuron(neuron, name(prefix, n));
    circuit.set_port(name(prefix, n), dm.address[i]);
  }
  dm.m_in = circuit.add_neuron(neuron, name(prefix, "M"));
  dm.r_in = circuit.add_neuron(neuron, name(prefix, "R"));
  dm.e_in = circuit.add_neuron(neuron, name(prefix, "E"));
  dm.npi_in = circuit.add_neuron(neuron, name(prefix, "nPi"));
  dm.pi_in = circuit.add_neuron(neuron, name(prefix, "Pi"));
  circuit.set_port(name(prefix, "M"), dm.m_in);
  circuit.set_port(name(prefix, "R"), dm.r_in);
  circuit.set_port(name(prefix, "E"), dm.e_in);
  circuit.set_port(name(prefix, "nPi"), dm.npi_in);
  circuit.set_port(name(prefix, "Pi"), dm.pi_in);

  // Address decoders: D3 D2 select the high line, D1 D0 the low line, both
  // enabled every cycle through their tied inputs.
  blocks::DecoderOptions hi_opt;
  hi_opt.neuron = neuron;
  hi_opt.prefix = name(prefix, "decHi_");
  hi_opt.controls = {dm.address[2], dm.address[3]};
  hi_opt.tie_input_high = true;
  dm.dec_hi = blocks::build_decoder(circuit, pm, 2, hi_opt);

  blocks::DecoderOptions lo_opt;
  lo_opt.neuron = neuron;
  lo_opt.prefix = name(prefix, "decLo_");
  lo_opt.controls = {dm.address[0], dm.address[1]};
  lo_opt.tie_input_high = true;
  dm.dec_lo = blocks::build_decoder(circuit, pm, 2, lo_opt);

  dm.npi_ans = circuit.add_neuron(neuron, name(prefix, "nPiAns"));
  dm.pi_ans = circuit.add_neuron(neuron, name(prefix, "PiAns"));
  circuit.set_port(name(prefix, "nPiAns"), dm.npi_ans);
  circuit.set_port(name(prefix, "PiAns"), dm.pi_ans);
  const std::array<NeuronId, 2> ans{dm.npi_ans, dm.pi_ans};
  const std::array<NeuronId, 2> attr{dm.npi_in, dm.pi_in};

  for (int k = 0; k < 16; ++k) {
    const std::string ks = "_" + std::to_string(k);
    const NeuronId line_hi = dm.dec_hi.outputs[static_cast<std::size_t>(k >> 2)];
    const NeuronId line_lo = dm.dec_lo.outputs[static_cast<std::size_t>(k & 3)];

    NeuronId sel = circuit.add_neuron(neuron, name(prefix, "Sel" + ks));
    circuit.set_port(name(prefix, "Sel" + ks), sel);
    circuit.add_synapse(line_hi, sel, 0.5, hop(dt, lat));
    circuit.add_synapse(line_lo, sel, 0.5, hop(dt, lat));
    dm.sel.push_back(sel);

    DraftMemoryHandle::Cell cell;
    LoopWiring loops = add_kernel_and_loops(circuit, 2, neuron, dt, lat, prefix, ks);
    cell.ka = loops.ka;
    cell.kb = loops.kb;
    circuit.set_port(name(prefix, "Ka" + ks), cell.ka);
    circuit.set_port(name(prefix, "Kb" + ks), cell.kb);
    for (int j = 0; j < 2; ++j) {
      cell.a[j] = loops.a[static_cast<std::size_t>(j)];
      cell.b[j] = loops.b[static_cast<std::size_t>(j)];
      circuit.set_port(name(prefix, "a_" + std::to_string(j) + ks), cell.a[j]);
      circuit.set_port(name(prefix, "b_" + std::to_string(j) + ks), cell.b[j]);
    }

    // Commands reach the cell gates at phi_4 through 3*delta_t delay lines;
    // the selection spike (phi_3) contributes the remaining condition.
    cell.gk = circuit.add_neuron(neuron, name(prefix, "GK" + ks));
    circuit.add_synapse(sel, cell.gk, 0.5, hop(dt, lat));
    circuit.add_synapse(dm.m_in, cell.gk, 0.5, hop(3 * dt, lat));
    circuit.add_synapse(cell.gk, cell.ka, 2.0, hop(dt, lat));
    circuit.add_synapse(cell.gk, cell.kb, -2.0, 1);

    for (int j = 0; j < 2; ++j) {
      NeuronId gm = circuit.add_neuron(neuron, name(prefix, "GM_" + std::to_string(j) + ks));
      circuit.add_synapse(sel, gm, 1.0 / 3.0, hop(dt, lat));
      circuit.add_synapse(dm.m_in, gm, 1.0 / 3.0, hop(3 * dt, lat));
      circuit.add_synapse(attr[static_cast<std::size_t>(j)], gm, 1.0 / 3.0, hop(3 * dt, lat));
      circuit.add_synapse(gm, cell.a[j], 2.0, hop(dt, lat));
      cell.gm[j] = gm;

      NeuronId gr = circuit.add_neuron(neuron, name(prefix, "GR_" + std::to_string(j) + ks));
      circuit.add_synapse(sel, gr, 1.0 / 3.0, hop(dt, lat));
      circuit.add_synapse(dm.r_in, gr, 1.0 / 3.0, hop(3 * dt, lat));
      circuit.add_synapse(cell.a[j], gr, 1.0 / 3.0, hop(dt, lat));
      circuit.add_synapse(cell.b[j], gr, 1.0 / 3.0, hop(dt, lat));
      // Answer neurons are plain sinks; a 1 ms hop keeps the burst inside the
      // transaction's own cycle even for a 4-phase pacemaker.
      circuit.add_synapse(gr, ans[static_cast<std::size_t>(j)], 1.0, 1);
      cell.gr[j] = gr;
    }

    cell.ge = circuit.add_neuron(neuron, name(prefix, "GE" + ks));
    cell.ge_relay = circuit.add_neuron(neuron, name(prefix, "GEr" + ks));
    circuit.add_synapse(sel, cell.ge, 0.5, hop(dt, lat));
    circuit.add_synapse(dm.e_in, cell.ge, 0.5, hop(3 * dt, lat));
    circuit.add_synapse(cell.ge, cell.ka, -2.0, hop(dt, lat));
    circuit.add_synapse(cell.ge, cell.kb, -2.0, hop(dt, lat));
    circuit.add_synapse(cell.ge, cell.ge_relay, 1.0, hop(dt, lat));
    circuit.add_synapse(cell.ge_relay, cell.ka, -2.0, hop(dt, lat));
    circuit.add_synapse(cell.ge_relay, cell.kb, -2.0, hop(dt, lat));

    // Store wave: on (address AND M) the cell is cleared at phi_4, one phase
    // before the restart at phi_5, so a store into an active cell behaves as
    // erase-then-store.
    cell.gsm = circuit.add_neuron(neuron, name(prefix, "GSM" + ks));
    circuit.add_synapse(line_hi, cell.gsm, 1.0 / 3.0, hop(dt, lat));
    circuit.add_synapse(line_lo, cell.gsm, 1.0 / 3.0, hop(dt, lat));
    circuit.add_synapse(dm.m_in, cell.gsm, 1.0 / 3.0, hop(2 * dt, lat));
    for (NeuronId target : {cell.ka, cell.kb, cell.a[0], cell.b[0], cell.a[1], cell.b[1]}) {
      circuit.add_synapse(cell.gsm, target, -2.0, hop(dt, lat));
    }

    dm.cells.push_back(cell);
  }
  return dm;
}

}  // namespace spikeloom::memory
