#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "spikeloom/oracle.hpp"
#include "spikeloom/stream.hpp"

using namespace spikeloom;
using stream::Attribute;
using stream::CodeScheme;
using stream::OpKind;
using stream::StreamOp;

namespace {

blocks::PacemakerHandle fake_pm() {
  blocks::PacemakerHandle pm;
  pm.phases = 5;
  pm.delta_t_ms = 20;
  pm.t0 = 1;
  return pm;
}

bool has_spike(const stream::CompiledStream& cs, const std::string& port, std::int64_t t) {
  for (const auto& s : cs.spikes) {
    if (s.port == port && s.time_ms == t) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("encoding matches the published stream samples") {
  CHECK(stream::encode_value(5, CodeScheme::Binary) == 0b0101);
  CHECK(stream::encode_value(5, CodeScheme::Gray) == 0b0111);
  CHECK(stream::encode_value(0, CodeScheme::Gray) == 0b0000);
  CHECK(stream::encode_value(2, CodeScheme::Gray) == 0b0011);
  CHECK(stream::encode_value(3, CodeScheme::Gray) == 0b0010);
  CHECK_THROWS_AS(stream::encode_value(16, CodeScheme::Binary), BuildError);
  CHECK_THROWS_AS(stream::encode_value(-1, CodeScheme::Gray), BuildError);
}

TEST_CASE("gray adjacency: consecutive codes differ in exactly one bit") {
  for (int v = 0; v < 15; ++v) {
    const unsigned diff = stream::encode_value(v, CodeScheme::Gray) ^
                          stream::encode_value(v + 1, CodeScheme::Gray);
    CHECK(std::popcount(diff) == 1);
  }
}

TEST_CASE("round trip: decode inverts encode for both schemes") {
  for (auto scheme : {CodeScheme::Binary, CodeScheme::Gray}) {
    for (int v = 0; v <= 15; ++v) {
      CHECK(stream::decode_value(stream::encode_value(v, scheme), scheme) == v);
    }
  }
}

TEST_CASE("compile: store 5 with Pi spikes D2, D0, M, Pi at the first phi_1") {
  const auto pm = fake_pm();
  auto cs = stream::compile_stream({{5, OpKind::Store, Attribute::Prime}}, CodeScheme::Binary, pm);
  const std::int64_t t = pm.phi1(1);
  REQUIRE(cs.slots.size() == 1);
  CHECK(cs.slots[0].phi1_ms == t);
  CHECK(cs.spikes.size() == 4);
  CHECK(has_spike(cs, "D2", t));
  CHECK(has_spike(cs, "D0", t));
  CHECK(has_spike(cs, "M", t));
  CHECK(has_spike(cs, "Pi", t));
}

TEST_CASE("compile: retrieve 5 spikes D2, D0, R") {
  const auto pm = fake_pm();
  auto cs = stream::compile_stream({{5, OpKind::Retrieve, {}}}, CodeScheme::Binary, pm);
  const std::int64_t t = pm.phi1(1);
  CHECK(cs.spikes.size() == 3);
  CHECK(has_spike(cs, "D2", t));
  CHECK(has_spike(cs, "D0", t));
  CHECK(has_spike(cs, "R", t));
}

TEST_CASE("compile: empty op list yields no spikes") {
  auto cs = stream::compile_stream({}, CodeScheme::Binary, fake_pm());
  CHECK(cs.spikes.empty());
  CHECK(cs.slots.empty());
}

TEST_CASE("compile: every spike lands on a phi_1 onset") {
  const auto pm = fake_pm();
  std::vector<StreamOp> ops;
  for (int v = 0; v <= 15; ++v) {
    ops.push_back({v, OpKind::Store, v % 2 ? Attribute::Prime : Attribute::NonPrime});
    ops.push_back({v, OpKind::Retrieve, {}});
  }
  auto cs = stream::compile_stream(ops, CodeScheme::Gray, pm);
  for (const auto& s : cs.spikes) {
    CHECK((s.time_ms - pm.t0) % pm.period_ms() == 0);
  }
  for (std::size_t i = 0; i < cs.slots.size(); ++i) {
    CHECK(cs.slots[i].phi1_ms == pm.phi1(1 + static_cast<std::int64_t>(i)));
  }
}

TEST_CASE("compile rejects malformed ops") {
  const auto pm = fake_pm();
  CHECK_THROWS_AS(stream::compile_stream({{5, OpKind::Store, {}}}, CodeScheme::Binary, pm),
                  BuildError);
  CHECK_THROWS_AS(stream::compile_stream({{5, OpKind::Retrieve, Attribute::Prime}},
                                         CodeScheme::Binary, pm),
                  BuildError);
  CHECK_THROWS_AS(stream::compile_stream({{-3, OpKind::Erase, {}}}, CodeScheme::Binary, pm),
                  BuildError);
}

TEST_CASE("primes demo scenario: 16 stores, prime flags, fixed retrieve order") {
  const auto sc = stream::primes_demo_scenario(CodeScheme::Binary);
  REQUIRE(sc.ops.size() == 29);
  for (int v = 0; v <= 15; ++v) {
    const StreamOp& op = sc.ops[static_cast<std::size_t>(v)];
    CHECK(op.op == OpKind::Store);
    CHECK(op.value == v);
    CHECK(op.attribute ==
          (oracle::is_prime(v) ? Attribute::Prime : Attribute::NonPrime));
  }
  const std::vector<int> retrieves{0, 8, 4, 3, 1, 12, 6, 7, 2, 9, 5, 11, 13};
  for (std::size_t i = 0; i < retrieves.size(); ++i) {
    const StreamOp& op = sc.ops[16 + i];
    CHECK(op.op == OpKind::Retrieve);
    CHECK(op.value == retrieves[i]);
    CHECK_FALSE(op.attribute.has_value());
  }
}

TEST_CASE("scenario files round-trip and match the built-in primes demo") {
  for (auto scheme : {CodeScheme::Binary, CodeScheme::Gray}) {
    const auto sc = stream::primes_demo_scenario(scheme);
    std::stringstream io;
    stream::write_scenario(io, sc);
    const auto parsed = stream::parse_scenario(io);
    CHECK(parsed.scheme == sc.scheme);
    REQUIRE(parsed.ops.size() == sc.ops.size());
    for (std::size_t i = 0; i < sc.ops.size(); ++i) {
      CHECK(parsed.ops[i].op == sc.ops[i].op);
      CHECK(parsed.ops[i].value == sc.ops[i].value);
      CHECK(parsed.ops[i].attribute == sc.ops[i].attribute);
    }
  }
}

TEST_CASE("scenario parsing reports line numbers") {
  auto expect_error_line = [](const std::string& text, int line) {
    std::istringstream in(text);
    try {
      stream::parse_scenario(in);
      FAIL("expected ParseError");
    } catch (const stream::ParseError& e) {
      CHECK(e.line == line);
    }
  };
  expect_error_line("STORE 5 PRIME\n", 1);                          // missing header
  expect_error_line("CODE BINARY\nSTORE 5\n", 2);                   // missing attribute
  expect_error_line("CODE BINARY\nSTORE 5 PRIME\nPOKE 3\n", 3);     // unknown op
  expect_error_line("CODE BINARY\n\n# c\nRETRIEVE 16\n", 4);        // value range
  expect_error_line("CODE OCTAL\n", 1);                             // bad scheme
  expect_error_line("", 1);                                         // empty file
}

TEST_CASE("scenario parsing skips comments and blank lines") {
  std::istringstream in("# header comment\nCODE GRAY\n\nSTORE 2 PRIME # inline\nERASE 2\n");
  const auto sc = stream::parse_scenario(in);
  CHECK(sc.scheme == CodeScheme::Gray);
  REQUIRE(sc.ops.size() == 2);
  CHECK(sc.ops[0].op == OpKind::Store);
  CHECK(sc.ops[1].op == OpKind::Erase);
}
