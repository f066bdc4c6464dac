#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "spikeloom/engine.hpp"
#include "spikeloom/stream.hpp"

namespace spikeloom::oracle {

using stream::Attribute;
using stream::StreamOp;

/// Selector reference: OR over control minterms gating the matching input;
/// equivalently, the input bit addressed by the control value.
bool selector_truth(unsigned controls, unsigned inputs, int omega);

/// Decoder reference: one-hot mask at the control value when the input is
/// high, zero otherwise.
unsigned decoder_truth(unsigned controls, bool input, int omega);

bool is_prime(int n);

/// Reference memory: cell index -> optional attribute pair; an absent entry
/// is an erased or never-stored cell.
class RefMemory {
 public:
  const std::optional<Attribute>& cell(int index) const;
  bool operator==(const RefMemory&) const = default;

  friend std::optional<Attribute> ref_apply(RefMemory& memory, const StreamOp& op,
                                            stream::CodeScheme scheme);

 private:
  std::array<std::optional<Attribute>, 16> cells_{};
};

/// Apply one transaction; returns the expected answer for retrieves
/// (nullopt when the cell is empty) and nullopt for stores/erases.
std::optional<Attribute> ref_apply(RefMemory& memory, const StreamOp& op,
                                   stream::CodeScheme scheme);

/// Expected answer per transaction for a whole op sequence (meaningful for
/// retrieves; nullopt elsewhere).
std::vector<std::optional<Attribute>> ref_timeline(const std::vector<StreamOp>& ops,
                                                   stream::CodeScheme scheme);

struct TransactionResult {
  std::size_t index = 0;
  StreamOp op;
  std::optional<Attribute> expected{};
  bool observed_pi = false;
  bool observed_npi = false;
  bool pass = false;
};

struct Report {
  std::vector<TransactionResult> rows;
  int mismatches = 0;

  bool pass() const { return mismatches == 0; }
  /// One line per transaction: index, op, expected, observed, PASS/FAIL.
  void write(std::ostream& out) const;
};

/// Check answer-neuron activity in each transaction's window against the
/// reference timeline. Non-retrieve windows must stay silent.
Report compare_answers(const Raster& raster, const std::vector<stream::TxSlot>& slots,
                       const std::vector<std::optional<Attribute>>& expected,
                       NeuronId npi_ans, NeuronId pi_ans, std::int64_t window_ms);

}  // namespace spikeloom::oracle
