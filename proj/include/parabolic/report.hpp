#pragma once

// Verification reports and their byte-stable JSON / CSV serializations.
// Floats are always printed with 17 significant digits.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "parabolic/errors.hpp"

namespace parabolic {

inline constexpr const char* kReportSchema = "parabolic-report/1";

struct Check {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool pass = false;

  /// Passes iff value is finite and value <= tol.
  static Check at_most(std::string name, double value, double tol) {
    return {std::move(name), value, tol, std::isfinite(value) && value <= tol};
  }
};

struct PairingSection {
  long n = 0;
  std::vector<unsigned> alpha;
  nlohmann::ordered_json c1;  // {"mode", "value", ...}
  double result = 0.0;
  std::string exact_numerator;
  std::string exact_denominator;
};

struct Report {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::optional<PairingSection> pairing;
  std::vector<Check> checks;

  void add(Check c) { checks.push_back(std::move(c)); }

  bool passed() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

enum class Format { Json, Csv };

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void write_json(std::ostream& os, const nlohmann::ordered_json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << nlohmann::json(it.key()).dump() << ": ";
        write_json(os, it.value(), indent + 2);
      }
      os << "\n" << close << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // scalar arrays on one line
      bool scalars = true;
      for (const auto& e : j) scalars = scalars && !e.is_structured();
      os << "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << ",";
        first = false;
        if (scalars) {
          write_json(os, e, indent);
        } else {
          os << "\n" << pad;
          write_json(os, e, indent + 2);
        }
      }
      if (!scalars) os << "\n" << close;
      os << "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double x = j.get<double>();
      os << (std::isfinite(x) ? format_double(x) : std::string("null"));
      return;
    }
    default:
      os << j.dump();
  }
}

/// Quotes a CSV field when it contains a separator, quote or line break.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const Report& report) {
  nlohmann::ordered_json doc;
  doc["schema"] = kReportSchema;
  doc["command"] = report.command;
  doc["config"] = report.config;
  if (report.pairing) {
    const auto& p = *report.pairing;
    doc["n"] = p.n;
    doc["alpha"] = p.alpha;
    doc["C1"] = p.c1;
    doc["result"] = p.result;
    doc["exact_numerator"] = p.exact_numerator;
    doc["exact_denominator"] = p.exact_denominator;
  }
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["value"] = c.value;
    e["tol"] = c.tol;
    e["pass"] = c.pass;
    checks.push_back(std::move(e));
  }
  doc["checks"] = std::move(checks);
  doc["passed"] = report.passed();
  return doc;
}

inline std::string emit(const Report& report, Format format) {
  std::ostringstream os;
  if (format == Format::Json) {
    detail::write_json(os, to_json(report), 0);
    os << "\n";
  } else {
    os << "name,value,tol,pass\n";
    for (const auto& c : report.checks) {
      os << detail::csv_field(c.name) << "," << format_double(c.value) << "," << format_double(c.tol) << ","
         << (c.pass ? "true" : "false") << "\n";
    }
  }
  return os.str();
}

inline void write_report(const Report& report, Format format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_report: cannot open '" + path + "' for writing");
  out << emit(report, format);
  out.flush();
  if (!out) throw Error("write_report: write to '" + path + "' failed");
}

}  // namespace parabolic
