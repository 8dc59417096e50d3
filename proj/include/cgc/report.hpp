#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "cgc/catalog.hpp"
#include "cgc/sos.hpp"
#include "cgc/spectral.hpp"
#include "cgc/topology.hpp"

namespace cgc {

// Fixed 12-significant-digit formatting so identical runs emit identical
// bytes regardless of locale or platform printf quirks for specials.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Rounds through the 12-digit representation so JSON numbers match the CSV.
inline double rounded_double(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_double(v).c_str(), nullptr);
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string spectrum_csv(const std::vector<SpectrumReport>& reports) {
  std::string out = "index,label,order,nu,lambda_max,method,residual\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const SpectrumReport& r = reports[i];
    out += std::to_string(i) + "," + r.label + "," + std::to_string(r.order) +
           "," + format_double(r.nu) + "," + format_double(r.lambda_max) + "," +
           r.method + "," + format_double(r.residual) + "\n";
  }
  return out;
}

inline Json verdict_json(const Verdict& v) {
  Json j;
  j["min_nu"] = rounded_double(v.min_nu);
  j["exponent"] = rounded_double(v.exponent);
  j["r_squared"] = rounded_double(v.r_squared);
  j["verdict"] = v.verdict;
  return j;
}

inline Json stabilization_json(const StabilizationReport& r) {
  Json j;
  j["radius"] = r.radius;
  j["stabilized"] = r.stabilized;
  j["at_index"] = r.at_index;
  j["signature_hash"] =
      r.signature ? hash_hex(r.signature->hash()) : std::string();
  return j;
}

inline Json certificate_json(const SosCertificate& cert) {
  Json j;
  j["group"] = cert.group ? cert.group->label() : std::string();
  j["nu"] = rounded_double(cert.nu);
  j["epsilon"] = rounded_double(cert.epsilon);
  j["R"] = cert.radius;
  j["n"] = cert.n;
  j["residual_l1"] = rounded_double(cert.residual_l1);
  j["converged"] = cert.converged;
  j["seed"] = cert.seed;
  Json xi = Json::array();
  for (const auto& e : cert.xi) {
    Json entries = Json::array();
    for (const auto& [g, c] : e.coeffs())
      entries.push_back(Json::array({g, rounded_double(c.real())}));
    xi.push_back(std::move(entries));
  }
  j["xi"] = std::move(xi);
  return j;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("short write to " + path);
}

}  // namespace cgc
