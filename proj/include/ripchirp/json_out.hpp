#pragma once

// JSON serialization of reports. Floating-point values are always written
// with 17 significant digits ("%#.17g") so reports are reproducible byte for
// byte and lose nothing on re-read.

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "ripchirp/addcomb.hpp"
#include "ripchirp/params.hpp"
#include "ripchirp/ric.hpp"

namespace ripchirp {

using Json = nlohmann::ordered_json;

namespace detail {

inline void append_double(std::string& out, double d) {
  if (!std::isfinite(d)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%#.17g", d);
  out += buf;
}

inline void dump_into(std::string& out, const Json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(key).dump();
        out += indent < 0 ? ":" : ": ";
        dump_into(out, value, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_into(out, value, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      append_double(out, j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace detail

inline std::string dump_json(const Json& j, int indent = 2) {
  std::string out;
  detail::dump_into(out, j, indent, 0);
  out += '\n';
  return out;
}

inline Json to_json(const ParameterReport& r) {
  return Json{{"m", r.m},
              {"log2M", r.log2M},
              {"tau", r.tau},
              {"two_tau_minus_1", r.two_tau_minus_1},
              {"gamma", r.gamma},
              {"alpha", r.alpha},
              {"eps1", r.eps1},
              {"eps", r.eps},
              {"feasible_gamma", r.feasible_gamma},
              {"feasible_eps", r.feasible_eps},
              {"log_base_note", kLogBaseNote}};
}

inline Json to_json(const RICEstimate& e) {
  Json j{{"k", e.k},
         {"delta_lower", e.delta_lower},
         {"method", to_string(e.method)},
         {"supports_examined", e.supports_examined},
         {"extremal_support", e.extremal_support}};
  j["seed"] = e.seed ? Json(*e.seed) : Json(nullptr);
  return j;
}

inline Json to_json(const ResidueSet& s) { return Json(s.elements()); }

}  // namespace ripchirp
