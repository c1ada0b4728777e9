#pragma once

// Serialization: potential specs as JSON objects, and locale-independent
// 17-significant-digit number formatting for CSV and JSON output.
//
//   {"kind": "Delta", "kappa": 1.0}
//   {"kind": "SquareWell", "qa": 3.0, "a": 1.0}
//   {"kind": "PiecewiseConstant", "a": 1.0, "segments": [[-1, -0.5, -2], [-0.5, 0.5, -4], [0.5, 1, -2]]}

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "scatter1d/errors.hpp"
#include "scatter1d/potentials.hpp"

namespace scatter1d {

inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  if (res.ec != std::errc()) throw NumericalError("could not format number");
  return {buf, res.ptr};
}

/// nlohmann's dump() with floats written by format_double instead of the
/// shortest round-trip form; non-finite values become null as in dump().
inline void write_json(std::string& out, const nlohmann::json& j, int indent, int depth = 0) {
  const auto newline = [&](int d) {
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  if (j.is_number_float()) {
    const double v = j.get<double>();
    out += std::isfinite(v) ? format_double(v) : "null";
  } else if (j.is_object() && !j.empty()) {
    out += '{';
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ',';
      first = false;
      newline(depth + 1);
      out += nlohmann::json(it.key()).dump();
      out += ": ";
      write_json(out, it.value(), indent, depth + 1);
    }
    newline(depth);
    out += '}';
  } else if (j.is_array() && !j.empty()) {
    out += '[';
    bool first = true;
    for (const auto& v : j) {
      if (!first) out += ',';
      first = false;
      newline(depth + 1);
      write_json(out, v, indent, depth + 1);
    }
    newline(depth);
    out += ']';
  } else {
    out += j.dump();
  }
}

inline std::string dump_json(const nlohmann::json& j, int indent = 2) {
  std::string out;
  write_json(out, j, indent);
  return out;
}

inline nlohmann::json to_json(const PotentialSpec& spec) {
  nlohmann::json j;
  j["kind"] = to_string(spec.kind());
  switch (spec.kind()) {
    case PotentialKind::Delta: j["kappa"] = spec.kappa(); break;
    case PotentialKind::SquareWell:
      j["qa"] = spec.qa();
      j["a"] = spec.half_range();
      break;
    case PotentialKind::PiecewiseConstant: {
      j["a"] = spec.half_range();
      auto segs = nlohmann::json::array();
      for (const auto& s : spec.segments()) segs.push_back({s.left, s.right, s.depth});
      j["segments"] = segs;
      break;
    }
  }
  return j;
}

namespace detail {

inline double json_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw InvalidArgument(std::string("potential JSON: missing \"") + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_number()) throw InvalidArgument(std::string("potential JSON: \"") + key + "\" must be a number");
  return v.get<double>();
}

}  // namespace detail

inline PotentialSpec potential_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw InvalidArgument("potential JSON: expected an object with a string \"kind\"");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "Delta") return make_delta(detail::json_number(j, "kappa"));
  if (kind == "SquareWell") return make_square_well(detail::json_number(j, "qa"), j.contains("a") ? detail::json_number(j, "a") : 1.0);
  if (kind == "PiecewiseConstant") {
    if (!j.contains("segments") || !j.at("segments").is_array())
      throw InvalidArgument("potential JSON: \"segments\" must be an array of [left, right, depth]");
    std::vector<Segment> segs;
    for (const auto& s : j.at("segments")) {
      if (!s.is_array() || s.size() != 3 || !s[0].is_number() || !s[1].is_number() || !s[2].is_number())
        throw InvalidArgument("potential JSON: each segment must be [left, right, depth]");
      segs.push_back({s[0].get<double>(), s[1].get<double>(), s[2].get<double>()});
    }
    auto spec = make_piecewise(std::move(segs));
    if (j.contains("a") && std::abs(detail::json_number(j, "a") - spec.half_range()) > 1e-12 * spec.half_range())
      throw InvalidArgument("potential JSON: \"a\" does not match the segment tiling");
    return spec;
  }
  throw InvalidArgument("potential JSON: unknown kind \"" + kind + "\" (Delta, SquareWell, PiecewiseConstant)");
}

inline PotentialSpec parse_potential(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("potential JSON: ") + e.what());
  }
  return potential_from_json(j);
}

}  // namespace scatter1d
