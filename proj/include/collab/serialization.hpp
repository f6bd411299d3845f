// Copyright 2026 The collab developers. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <string>

#include "collab/mechanism.hpp"
#include "collab/model.hpp"
#include "collab/ordered_mpc.hpp"
#include "collab/timed_crypto.hpp"
#include "json.hpp"

namespace collab {

// Players and graph vertices are 1-based in every JSON surface (matching
// the usual [n] convention) and 0-based in memory.

inline nlohmann::json instance_to_json(const Instance& inst) {
  nlohmann::json j{{"n", inst.n},        {"alpha", inst.alpha}, {"beta", inst.beta},
                   {"s0", inst.s0},      {"smax", inst.smax},
                   {"epsilon", inst.epsilon}};
  if (const auto* nd = std::get_if<NDimBounds>(&inst.bounds))
    j["bounds"] = {{"ndim", nd->mu}};
  else if (const auto* ns = std::get_if<NSquaredBounds>(&inst.bounds))
    j["bounds"] = {{"nsq", ns->mu}};
  else
    throw std::invalid_argument("instance json: general bounds are in-process only");
  return j;
}

inline Instance instance_from_json(const nlohmann::json& j) {
  Instance inst;
  inst.n = j.at("n").get<int>();
  inst.alpha = j.at("alpha").get<std::vector<double>>();
  inst.beta = j.at("beta").get<double>();
  inst.s0 = j.at("s0").get<double>();
  inst.smax = j.at("smax").get<double>();
  inst.epsilon = j.value("epsilon", 0.0);
  const auto& bounds = j.at("bounds");
  if (bounds.contains("ndim"))
    inst.bounds = NDimBounds{bounds.at("ndim").get<std::vector<double>>()};
  else if (bounds.contains("nsq"))
    inst.bounds =
        NSquaredBounds{bounds.at("nsq").get<std::vector<std::vector<double>>>()};
  else
    throw std::invalid_argument("instance json: bounds must be ndim or nsq");
  inst.validate();
  return inst;
}

inline nlohmann::json outcome_to_json(const ProposedOutcome& outcome, bool feasible) {
  nlohmann::json j;
  j["feasible"] = feasible;
  nlohmann::json pi = nlohmann::json::array();
  for (int player : outcome.order.player_at) pi.push_back(player + 1);
  j["pi"] = pi;
  j["delta"] = outcome.delta;
  return j;
}

inline nlohmann::json infeasible_outcome_json() {
  return nlohmann::json{{"feasible", false}, {"pi", nullptr}, {"delta", nullptr}};
}

inline FasInstance graph_from_json(const nlohmann::json& j, double gamma) {
  FasInstance graph;
  graph.n = j.at("n").get<int>();
  graph.gamma = gamma;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 3)
      throw std::invalid_argument("graph json: edges are [u, v, w] triples");
    graph.edges.push_back(
        {e[0].get<int>() - 1, e[1].get<int>() - 1, e[2].get<double>()});
  }
  graph.validate();
  return graph;
}

inline FunctionSpec function_from_json(const nlohmann::json& j) {
  FunctionSpec f;
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "identity")
      f.kind = FunctionSpec::Kind::Identity;
    else if (name == "xor_sum")
      f.kind = FunctionSpec::Kind::XorSum;
    else
      throw std::invalid_argument("function spec: unknown builtin " + name);
    return f;
  }
  if (j.contains("table")) {
    f.kind = FunctionSpec::Kind::Table;
    for (const auto& row : j.at("table")) {
      f.table[row.at("in").get<std::vector<std::uint64_t>>()] =
          row.at("out").get<std::vector<std::uint64_t>>();
    }
    return f;
  }
  if (j.contains("const")) {
    f.kind = FunctionSpec::Kind::Const;
    f.const_outputs = j.at("const").get<std::vector<std::uint64_t>>();
    return f;
  }
  throw std::invalid_argument("function spec: expected builtin name, table or const");
}

inline OrderFunctionSpec order_function_from_json(const nlohmann::json& j) {
  OrderFunctionSpec p;
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "identity")
      p.kind = OrderFunctionSpec::Kind::Identity;
    else if (name == "sort_order_p" || name == "sort_desc")
      p.kind = OrderFunctionSpec::Kind::SortDesc;
    else
      throw std::invalid_argument("order spec: unknown builtin " + name);
    return p;
  }
  if (j.contains("table")) {
    p.kind = OrderFunctionSpec::Kind::Table;
    for (const auto& row : j.at("table")) {
      std::vector<int> order;
      for (int player : row.at("pi").get<std::vector<int>>()) order.push_back(player - 1);
      p.table[row.at("in").get<std::vector<std::uint64_t>>()] = order;
    }
    return p;
  }
  if (j.contains("const")) {
    p.kind = OrderFunctionSpec::Kind::Const;
    for (int player : j.at("const").get<std::vector<int>>())
      p.const_order.push_back(player - 1);
    return p;
  }
  throw std::invalid_argument("order spec: expected builtin name, table or const");
}

inline OrderedSpec ordered_spec_from_json(const nlohmann::json& j) {
  OrderedSpec spec;
  spec.n = j.at("n").get<int>();
  spec.output_bits = j.value("bits", 16);
  spec.f = function_from_json(j.at("f"));
  spec.p = order_function_from_json(j.at("p"));
  spec.validate();
  return spec;
}

// -- puzzles -------------------------------------------------------------

inline std::string bytes_to_hex(const Bytes& data) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (auto c : data) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

inline Bytes hex_to_bytes(const std::string& hex) {
  if (hex.size() % 2) throw std::invalid_argument("hex: odd length");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("hex: bad digit");
  };
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
  return out;
}

inline const char* scheme_name(PuzzleScheme scheme) {
  return scheme == PuzzleScheme::HashChain ? "hash" : "square";
}

inline PuzzleScheme scheme_from_name(const std::string& name) {
  if (name == "hash") return PuzzleScheme::HashChain;
  if (name == "square") return PuzzleScheme::Squaring;
  throw std::invalid_argument("puzzle scheme must be 'hash' or 'square'");
}

inline nlohmann::json puzzle_to_json(const TimeLockPuzzle& puzzle) {
  return {{"scheme", scheme_name(puzzle.scheme)}, {"kappa", puzzle.kappa},
          {"x", bytes_to_hex(puzzle.x)},          {"t", puzzle.t},
          {"b", bytes_to_hex(puzzle.b)},          {"a", bytes_to_hex(puzzle.a)},
          {"len", puzzle.data_len}};
}

inline TimeLockPuzzle puzzle_from_json(const nlohmann::json& j) {
  TimeLockPuzzle puzzle;
  puzzle.scheme = scheme_from_name(j.at("scheme").get<std::string>());
  puzzle.kappa = j.at("kappa").get<int>();
  puzzle.x = hex_to_bytes(j.at("x").get<std::string>());
  puzzle.t = j.at("t").get<std::int64_t>();
  puzzle.b = hex_to_bytes(j.at("b").get<std::string>());
  puzzle.a = hex_to_bytes(j.at("a").get<std::string>());
  puzzle.data_len = j.value("len", puzzle.b.size());
  return puzzle;
}

inline nlohmann::json line_puzzle_to_json(const TimeLinePuzzle& puzzle) {
  nlohmann::json masked = nlohmann::json::array();
  for (const auto& b : puzzle.b) masked.push_back(bytes_to_hex(b));
  return {{"scheme", scheme_name(puzzle.scheme)},
          {"kappa", puzzle.kappa},
          {"x", bytes_to_hex(puzzle.x)},
          {"t_vec", puzzle.t},
          {"b_vec", masked},
          {"a", bytes_to_hex(puzzle.a)},
          {"len", puzzle.data_len},
          {"sorted", puzzle.delays_sorted}};
}

inline TimeLinePuzzle line_puzzle_from_json(const nlohmann::json& j) {
  TimeLinePuzzle puzzle;
  puzzle.scheme = scheme_from_name(j.at("scheme").get<std::string>());
  puzzle.kappa = j.at("kappa").get<int>();
  puzzle.x = hex_to_bytes(j.at("x").get<std::string>());
  puzzle.t = j.at("t_vec").get<std::vector<std::int64_t>>();
  for (const auto& b : j.at("b_vec"))
    puzzle.b.push_back(hex_to_bytes(b.get<std::string>()));
  puzzle.a = hex_to_bytes(j.at("a").get<std::string>());
  if (j.contains("len"))
    puzzle.data_len = j.at("len").get<std::vector<std::size_t>>();
  else
    for (const auto& b : puzzle.b) puzzle.data_len.push_back(b.size());
  puzzle.delays_sorted = j.value("sorted", true);
  return puzzle;
}

}  // namespace collab
