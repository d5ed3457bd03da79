#pragma once

// JSON and CSV serialization of reports, symbols and Grassmann values.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "verify.hpp"

namespace osp22 {

using json = nlohmann::ordered_json;

inline json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

/// [{monomial, re, im}, ...] by monomial bitmask.
inline json grassmann_json(const GrassmannElement& e) {
  json terms = json::array();
  for (const auto& [m, c] : e.terms())
    terms.push_back({{"monomial", e.generators()->monomial_name(m)}, {"re", c.real()}, {"im", c.imag()}});
  return terms;
}

inline json config_json(const RunConfig& c) {
  json zs = json::array(), ts = json::array();
  for (cplx z : c.z_samples) zs.push_back(complex_json(z));
  for (double t : c.t_samples) ts.push_back(t);
  return {{"nmax", c.nmax},
          {"nodes", c.nodes},
          {"tolerances",
           {{"algebra", c.tol.algebra},
            {"quadrature", c.tol.quadrature},
            {"coherent", c.tol.coherent},
            {"residual", c.tol.residual},
            {"isometry", c.tol.isometry}}},
          {"z_samples", zs},
          {"t_samples", ts},
          {"coherent_cap", c.coherent_cap},
          {"seed", c.seed},
          {"format", c.format}};
}

inline std::string fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

/// Deterministic payload plus checksum; timing lives outside the payload.
inline json report_json(const VerificationReport& r) {
  json records = json::array();
  for (const auto& c : r.records)
    records.push_back({{"id", c.id}, {"anchor", c.anchor}, {"defect", c.defect}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  json payload = {{"suite", r.suite},
                  {"pass", r.pass()},
                  {"checks", r.records.size()},
                  {"config", config_json(r.config)},
                  {"records", records}};
  const std::string digest = fnv1a64(payload.dump());
  return {{"payload", payload}, {"checksum", "fnv1a64:" + digest}, {"meta", {{"wall_time_s", r.wall_time_s}}}};
}

inline void write_report_csv(std::ostream& os, const VerificationReport& r) {
  os << "id,anchor,defect,tolerance,pass\n";
  os << std::setprecision(6);
  for (const auto& c : r.records) {
    std::string anchor = c.anchor;
    for (auto& ch : anchor)
      if (ch == '"') ch = '\'';
    os << c.id << ",\"" << anchor << "\"," << c.defect << "," << c.tolerance << "," << (c.pass ? "true" : "false")
       << "\n";
  }
}

}  // namespace osp22
