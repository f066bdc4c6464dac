#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spikeloom/blocks.hpp"
#include "spikeloom/engine.hpp"

namespace spikeloom::stream {

struct ParseError : Error {
  ParseError(int line_number, const std::string& what)
      : Error("line " + std::to_string(line_number) + ": " + what), line(line_number) {}
  int line = 0;
};

enum class OpKind { Store, Retrieve, Erase };
enum class Attribute { NonPrime, Prime };
enum class CodeScheme { Binary, Gray };

/// One memory transaction. Stores carry exactly one attribute; retrieves and
/// erases carry none.
struct StreamOp {
  int value = 0;  // 0..15
  OpKind op = OpKind::Store;
  std::optional<Attribute> attribute{};

  void validate() const;  // throws BuildError on a malformed op
};

struct Scenario {
  CodeScheme scheme = CodeScheme::Binary;
  std::vector<StreamOp> ops;
};

/// Address nibble for a value, bit i = D_i. Gray is v XOR (v >> 1).
std::uint8_t encode_value(int value, CodeScheme scheme);
int decode_value(std::uint8_t bits, CodeScheme scheme);

struct PortSpike {
  std::string port;
  std::int64_t time_ms = 0;
};

struct TxSlot {
  StreamOp op;
  std::int64_t phi1_ms = 0;
};

struct CompiledStream {
  std::vector<PortSpike> spikes;
  std::vector<TxSlot> slots;
};

/// Map each op to spikes on D3..D0 plus one of M/R/E plus attribute lines,
/// all at consecutive phi_1 onsets starting at `start_cycle`. A 0 bit means
/// no spike.
CompiledStream compile_stream(const std::vector<StreamOp>& ops, CodeScheme scheme,
                              const blocks::PacemakerHandle& pm, std::int64_t start_cycle = 1);

/// Schedule a compiled stream onto a circuit's named ports.
void schedule_stream(Circuit& circuit, const CompiledStream& compiled,
                     const std::string& port_prefix = "");

/// Store 0..15 in order with prime attributes, then retrieve in the order
/// 0, 8, 4, 3, 1, 12, 6, 7, 2, 9, 5, 11, 13.
Scenario primes_demo_scenario(CodeScheme scheme);

/// Plain-text scenario format: header `CODE BINARY|GRAY`, then one op per
/// line (`STORE v PRIME|NONPRIME`, `RETRIEVE v`, `ERASE v`). Blank lines and
/// `#` comments are allowed. Throws ParseError with a 1-based line number.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);
void write_scenario(std::ostream& out, const Scenario& scenario);

const char* to_string(OpKind op);
const char* to_string(Attribute a);
const char* to_string(CodeScheme s);

}  // namespace spikeloom::stream
