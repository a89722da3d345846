#pragma once

// Text checkpoint for a ValueNetwork:
//
//   rlsim value network v1
//   config: <config text>
//   config_hash: <16 hex digits, fnv1a of the config text>
//   shape: <input> <hidden>
//   params: <count>
//   <one hexfloat per line, flat parameter layout>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "rlsim/core/error.hpp"
#include "rlsim/core/random.hpp"
#include "rlsim/game/text.hpp"
#include "rlsim/learning/value_network.hpp"

namespace rlsim {

inline constexpr std::string_view kCheckpointHeader = "rlsim value network v1";

inline std::string config_hash(const GameConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(to_text(config))));
  return buf;
}

inline void save_checkpoint(std::ostream& out, const ValueNetwork& net, const GameConfig& config) {
  out << kCheckpointHeader << '\n';
  out << "config: " << to_text(config) << '\n';
  out << "config_hash: " << config_hash(config) << '\n';
  out << "shape: " << net.input_width() << ' ' << net.hidden_width() << '\n';
  out << "params: " << net.parameters().size() << '\n';
  out << std::hexfloat;
  for (double p : net.parameters()) out << p << '\n';
  out << std::defaultfloat;
}

// Rejects files written for another configuration or with another shape.
inline ValueNetwork load_checkpoint(std::istream& in, const GameConfig& expected) {
  std::string line;
  auto expect_line = [&](std::string_view key) {
    if (!std::getline(in, line) || line.rfind(key, 0) != 0) throw ParseError("checkpoint: expected '" + std::string(key) + "'");
    return line.substr(key.size());
  };
  if (!std::getline(in, line) || line != kCheckpointHeader) throw ParseError("checkpoint: bad header");
  const std::string cfg = expect_line("config: ");
  const std::string hash = expect_line("config_hash: ");
  if (hash != config_hash(expected) || cfg != to_text(expected))
    throw InvalidConfig("checkpoint", "written for '" + cfg + "', expected '" + to_text(expected) + "'");

  std::istringstream shape(expect_line("shape: "));
  std::size_t input = 0, hidden = 0;
  shape >> input >> hidden;
  ValueNetwork net(encode_len(expected));
  if (input != net.input_width()) throw DimensionMismatch(net.input_width(), input);
  if (hidden != net.hidden_width()) throw DimensionMismatch(net.hidden_width(), hidden);
  const std::size_t count = std::stoull(expect_line("params: "));
  if (count != net.parameters().size()) throw DimensionMismatch(net.parameters().size(), count);

  for (double& p : net.parameters()) {
    if (!std::getline(in, line)) throw ParseError("checkpoint: truncated parameters");
    // istream hexfloat extraction is unreliable; strtod reads hexfloats.
    char* end = nullptr;
    p = std::strtod(line.c_str(), &end);
    if (end == line.c_str()) throw ParseError("checkpoint: bad parameter '" + line + "'");
  }
  if (!net.all_finite()) throw ParseError("checkpoint: non-finite parameter");
  return net;
}

inline void save_checkpoint(const std::string& path, const ValueNetwork& net, const GameConfig& config) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  save_checkpoint(out, net, config);
}

inline ValueNetwork load_checkpoint(const std::string& path, const GameConfig& expected) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return load_checkpoint(in, expected);
}

}  // namespace rlsim
