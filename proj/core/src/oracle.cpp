#include "spikeloom/oracle.hpp"

#include <ostream>

#include "spikeloom/memory.hpp"

namespace spikeloom::oracle {

bool selector_truth(unsigned controls, unsigned inputs, int omega) {
  if (omega < 1) throw BuildError("omega must be >= 1");
  const unsigned n_inputs = 1u << omega;
  if (controls >= n_inputs) throw BuildError("control value out of range");
  if (inputs >= (1u << n_inputs)) throw BuildError("input mask out of range");
  return ((inputs >> controls) & 1u) != 0;
}

unsigned decoder_truth(unsigned controls, bool input, int omega) {
  if (omega < 1) throw BuildError("omega must be >= 1");
  if (controls >= (1u << omega)) throw BuildError("control value out of range");
  return input ? (1u << controls) : 0u;
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

const std::optional<Attribute>& RefMemory::cell(int index) const {
  return cells_.at(static_cast<std::size_t>(index));
}

std::optional<Attribute> ref_apply(RefMemory& memory, const StreamOp& op,
                                   stream::CodeScheme scheme) {
  op.validate();
  const int cell = memory::cell_index(stream::encode_value(op.value, scheme));
  auto& slot = memory.cells_[static_cast<std::size_t>(cell)];
  switch (op.op) {
    case stream::OpKind::Store:
      slot = op.attribute;
      return std::nullopt;
    case stream::OpKind::Erase:
      slot.reset();
      return std::nullopt;
    case stream::OpKind::Retrieve:
      return slot;
  }
  return std::nullopt;
}

std::vector<std::optional<Attribute>> ref_timeline(const std::vector<StreamOp>& ops,
                                                   stream::CodeScheme scheme) {
  RefMemory memory;
  std::vector<std::optional<Attribute>> expected;
  expected.reserve(ops.size());
  for (const StreamOp& op : ops) expected.push_back(ref_apply(memory, op, scheme));
  return expected;
}

namespace {

const char* attr_name(const std::optional<Attribute>& a) {
  if (!a) return "none";
  return *a == Attribute::Prime ? "Pi" : "nPi";
}

}  // namespace

void Report::write(std::ostream& out) const {
  for (const TransactionResult& r : rows) {
    const char* observed = r.observed_pi ? (r.observed_npi ? "Pi+nPi" : "Pi")
                                         : (r.observed_npi ? "nPi" : "none");
    out << r.index << ' ' << stream::to_string(r.op.op) << ' ' << r.op.value << " expected="
        << (r.op.op == stream::OpKind::Retrieve ? attr_name(r.expected) : "-")
        << " observed=" << observed << ' ' << (r.pass ? "PASS" : "FAIL") << '\n';
  }
  out << (mismatches == 0 ? "all transactions PASS" : "mismatches: " + std::to_string(mismatches))
      << '\n';
}

Report compare_answers(const Raster& raster, const std::vector<stream::TxSlot>& slots,
                       const std::vector<std::optional<Attribute>>& expected,
                       NeuronId npi_ans, NeuronId pi_ans, std::int64_t window_ms) {
  if (expected.size() != slots.size()) {
    throw BuildError("expected-answer timeline does not match transaction count");
  }
  Report report;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    TransactionResult row;
    row.index = i;
    row.op = slots[i].op;
    row.expected = expected[i];
    const std::int64_t from = slots[i].phi1_ms;
    const std::int64_t to = from + window_ms;
    row.observed_pi = raster.spiked_in(pi_ans, from, to);
    row.observed_npi = raster.spiked_in(npi_ans, from, to);
    if (row.op.op == stream::OpKind::Retrieve) {
      const bool want_pi = row.expected == Attribute::Prime;
      const bool want_npi = row.expected == Attribute::NonPrime;
      row.pass = row.observed_pi == want_pi && row.observed_npi == want_npi;
    } else {
      row.pass = !row.observed_pi && !row.observed_npi;
    }
    if (!row.pass) ++report.mismatches;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace spikeloom::oracle
