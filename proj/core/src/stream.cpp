#include "spikeloom/stream.hpp"

#include <fstream>
#include <sstream>

namespace spikeloom::stream {

void StreamOp::validate() const {
  if (value < 0 || value > 15) throw BuildError("stream value out of range 0..15");
  if (op == OpKind::Store) {
    if (!attribute.has_value()) throw BuildError("store op requires exactly one attribute");
  } else if (attribute.has_value()) {
    throw BuildError("retrieve/erase ops carry no attribute");
  }
}

std::uint8_t encode_value(int value, CodeScheme scheme) {
  if (value < 0 || value > 15) throw BuildError("value out of range 0..15");
  const auto v = static_cast<std::uint8_t>(value);
  return scheme == CodeScheme::Binary ? v : static_cast<std::uint8_t>(v ^ (v >> 1));
}

int decode_value(std::uint8_t bits, CodeScheme scheme) {
  bits &= 0x0F;
  if (scheme == CodeScheme::Binary) return bits;
  int v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 1) | (((bits >> i) & 1) ^ (v & 1));
  return v;
}

CompiledStream compile_stream(const std::vector<StreamOp>& ops, CodeScheme scheme,
                              const blocks::PacemakerHandle& pm, std::int64_t start_cycle) {
  CompiledStream out;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const StreamOp& op = ops[i];
    op.validate();
    const std::int64_t t = pm.phi1(start_cycle + static_cast<std::int64_t>(i));
    const std::uint8_t bits = encode_value(op.value, scheme);
    for (int b = 0; b < 4; ++b) {
      if ((bits >> b) & 1) out.spikes.push_back({"D" + std::to_string(b), t});
    }
    switch (op.op) {
      case OpKind::Store:
        out.spikes.push_back({"M", t});
        out.spikes.push_back({*op.attribute == Attribute::Prime ? "Pi" : "nPi", t});
        break;
      case OpKind::Retrieve:
        out.spikes.push_back({"R", t});
        break;
      case OpKind::Erase:
        out.spikes.push_back({"E", t});
        break;
    }
    out.slots.push_back({op, t});
  }
  return out;
}

void schedule_stream(Circuit& circuit, const CompiledStream& compiled,
                     const std::string& port_prefix) {
  for (const PortSpike& s : compiled.spikes) {
    circuit.schedule_spike(circuit.port(port_prefix + s.port), s.time_ms);
  }
}

Scenario primes_demo_scenario(CodeScheme scheme) {
  auto prime16 = [](int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d) {
      if (n % d == 0) return false;
    }
    return true;
  };
  Scenario sc;
  sc.scheme = scheme;
  for (int v = 0; v <= 15; ++v) {
    sc.ops.push_back({v, OpKind::Store, prime16(v) ? Attribute::Prime : Attribute::NonPrime});
  }
  for (int v : {0, 8, 4, 3, 1, 12, 6, 7, 2, 9, 5, 11, 13}) {
    sc.ops.push_back({v, OpKind::Retrieve, std::nullopt});
  }
  return sc;
}

namespace {

std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> words;
  std::istringstream in(line);
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

int parse_value(const std::string& word, int line_no) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(word, &pos);
    if (pos != word.size() || v < 0 || v > 15) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError(line_no, "expected a value in 0..15, got '" + word + "'");
  }
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
  Scenario sc;
  bool have_header = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto words = split_words(line);
    if (words.empty()) continue;

    if (!have_header) {
      if (words[0] != "CODE" || words.size() != 2) {
        throw ParseError(line_no, "expected header 'CODE BINARY|GRAY'");
      }
      if (words[1] == "BINARY") {
        sc.scheme = CodeScheme::Binary;
      } else if (words[1] == "GRAY") {
        sc.scheme = CodeScheme::Gray;
      } else {
        throw ParseError(line_no, "unknown code scheme '" + words[1] + "'");
      }
      have_header = true;
      continue;
    }

    StreamOp op;
    if (words[0] == "STORE") {
      if (words.size() != 3) throw ParseError(line_no, "expected 'STORE v PRIME|NONPRIME'");
      op.op = OpKind::Store;
      op.value = parse_value(words[1], line_no);
      if (words[2] == "PRIME") {
        op.attribute = Attribute::Prime;
      } else if (words[2] == "NONPRIME") {
        op.attribute = Attribute::NonPrime;
      } else {
        throw ParseError(line_no, "unknown attribute '" + words[2] + "'");
      }
    } else if (words[0] == "RETRIEVE" || words[0] == "ERASE") {
      if (words.size() != 2) throw ParseError(line_no, "expected '" + words[0] + " v'");
      op.op = words[0] == "RETRIEVE" ? OpKind::Retrieve : OpKind::Erase;
      op.value = parse_value(words[1], line_no);
    } else {
      throw ParseError(line_no, "unknown operation '" + words[0] + "'");
    }
    sc.ops.push_back(op);
  }
  if (!have_header) throw ParseError(line_no == 0 ? 1 : line_no, "missing 'CODE' header");
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file: " + path);
  return parse_scenario(in);
}

void write_scenario(std::ostream& out, const Scenario& scenario) {
  out << "CODE " << to_string(scenario.scheme) << '\n';
  for (const StreamOp& op : scenario.ops) {
    op.validate();
    out << to_string(op.op) << ' ' << op.value;
    if (op.attribute) out << ' ' << to_string(*op.attribute);
    out << '\n';
  }
}

const char* to_string(OpKind op) {
  switch (op) {
    case OpKind::Store: return "STORE";
    case OpKind::Retrieve: return "RETRIEVE";
    case OpKind::Erase: return "ERASE";
  }
  return "?";
}

const char* to_string(Attribute a) { return a == Attribute::Prime ? "PRIME" : "NONPRIME"; }

const char* to_string(CodeScheme s) { return s == CodeScheme::Binary ? "BINARY" : "GRAY"; }

}  // namespace spikeloom::stream
