#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spikeloom/blocks.hpp"
#include "spikeloom/engine.hpp"

namespace spikeloom::memory {

/// Binary interpretation of an address nibble (bit i = D_i); identifies which
/// Sel_k neuron fires.
int cell_index(std::uint8_t address_bits);

/// Phase (1-based) at which the a-column of a trapped bit fires after
/// `loops` full reverberations of the 2*delta_t loop. With an odd phase
/// count the spike drifts through all phases; with an even count the
/// a-column stays on phases of its starting parity.
int trapped_a_phase(int store_phase, int loops, int phases);

/// One memory cell: an always-reverberating kernel pair plus one bistable
/// loop per bit, gated for store/read/erase. Strobe `enable` together with a
/// command input (and bit inputs for stores) at a pacemaker onset X: gates
/// fire at X + delta_t and the loops start at X + 2*delta_t.
struct MemoryCellHandle {
  NeuronId enable = 0;
  NeuronId m_in = 0, r_in = 0, e_in = 0;
  std::vector<NeuronId> bit_in;

  NeuronId ka = 0, kb = 0;
  NeuronId gk = 0;  // kernel store gate (enable AND m)
  std::vector<NeuronId> a, b;
  std::vector<NeuronId> gm, gr;  // per-bit store / read gates; gr are the out ports
  NeuronId ge = 0, ge_relay = 0;

  std::vector<NeuronId> all_neurons() const;
};

MemoryCellHandle build_memory_cell(Circuit& circuit, const blocks::PacemakerHandle& pm,
                                   int n_bits, const NeuronSpec& neuron = blocks::default_block_neuron(),
                                   const std::string& prefix = "");

/// The 16-cell draft memory: two omega=2 address decoders over D3 D2 / D1 D0,
/// a one-hot selection layer, gated two-bit cells (bit 0 = nPi, bit 1 = Pi),
/// and converged answer neurons. One transaction per pacemaker cycle, with
/// D/M/R/E/nPi/Pi all spiking at phi_1; answers appear on nPiAns / PiAns
/// within the same cycle.
struct DraftMemoryHandle {
  blocks::PacemakerHandle pm;

  std::array<NeuronId, 4> address{};  // D0..D3 by bit index
  NeuronId m_in = 0, r_in = 0, e_in = 0;
  NeuronId npi_in = 0, pi_in = 0;

  blocks::DecoderHandle dec_hi, dec_lo;
  std::vector<NeuronId> sel;  // Sel_0..Sel_15

  struct Cell {
    NeuronId ka = 0, kb = 0;
    NeuronId gk = 0;
    std::array<NeuronId, 2> a{}, b{};
    std::array<NeuronId, 2> gm{}, gr{};
    NeuronId ge = 0, ge_relay = 0;
    NeuronId gsm = 0;  // store wave: clears old content one phase before restart
  };
  std::vector<Cell> cells;

  NeuronId npi_ans = 0, pi_ans = 0;

  std::vector<NeuronId> cell_neurons(int k) const;
};

DraftMemoryHandle build_draft_memory(Circuit& circuit, const blocks::PacemakerHandle& pm,
                                     const NeuronSpec& neuron = blocks::default_block_neuron(),
                                     const std::string& prefix = "");

}  // namespace spikeloom::memory
