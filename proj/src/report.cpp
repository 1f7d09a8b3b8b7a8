// Copyright 2026 The bhastlo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bhastlo/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace bhastlo {

const char* to_string(Tier tier) noexcept {
  switch (tier) {
    case Tier::Hard: return "hard";
    case Tier::Fitted: return "fitted";
    case Tier::Exploratory: return "exploratory";
  }
  return "?";
}

const char* to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Skipped: return "SKIPPED";
  }
  return "?";
}

void CheckReport::add_row(std::string label, double t, double lhs, double rhs) {
  const double margin = rhs - lhs;
  if (margin < worst_margin || std::isnan(margin)) worst_margin = margin;
  if ((margin < -tolerance || std::isnan(margin)) && verdict != Verdict::Skipped &&
      tier != Tier::Exploratory)
    verdict = Verdict::Fail;
  rows.push_back({std::move(label), t, lhs, rhs, margin});
}

void CheckReport::set_constant(const std::string& key, double value) {
  for (auto& [k, v] : constants)
    if (k == key) {
      v = value;
      return;
    }
  constants.emplace_back(key, value);
}

double CheckReport::constant(const std::string& key) const {
  for (const auto& [k, v] : constants)
    if (k == key) return v;
  throw std::out_of_range("no constant named " + key + " in " + name);
}

void CheckReport::set_parameter(const std::string& key, std::string value) {
  parameters.emplace_back(key, std::move(value));
}

void CheckReport::set_parameter(const std::string& key, double value) {
  parameters.emplace_back(key, format_double(value));
}

void CheckReport::set_diagnostic(const std::string& key, double value) {
  for (auto& [k, v] : diagnostics)
    if (k == key) {
      v = value;
      return;
    }
  diagnostics.emplace_back(key, value);
}

void CheckReport::fail(std::string reason) {
  verdict = Verdict::Fail;
  notes.push_back(std::move(reason));
}

void CheckReport::skip(std::string reason) {
  verdict = Verdict::Skipped;
  notes.push_back("skipped: " + std::move(reason));
}

bool all_hard_passed(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports)
    if (r.tier == Tier::Hard && r.verdict == Verdict::Fail) return false;
  return true;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_report_csv(std::ostream& os, const std::vector<CheckReport>& reports) {
  os << "check,tier,label,t,lhs,rhs,margin\n";
  for (const auto& r : reports)
    for (const auto& row : r.rows)
      os << csv_field(r.name) << ',' << to_string(r.tier) << ','
         << csv_field(row.label) << ',' << format_double(row.t) << ','
         << format_double(row.lhs) << ',' << format_double(row.rhs) << ','
         << format_double(row.margin) << '\n';
}

void write_summary(std::ostream& os, const std::vector<CheckReport>& reports,
                   const std::vector<std::string>& header) {
  for (const auto& line : header) os << line << '\n';
  os << '\n';
  for (const auto& r : reports) {
    os << '[' << to_string(r.verdict) << "] " << r.name << " (" << to_string(r.tier)
       << ")";
    if (!r.rows.empty()) os << "  worst margin " << format_double(r.worst_margin);
    os << '\n';
    for (const auto& [k, v] : r.parameters) os << "    param " << k << " = " << v << '\n';
    for (const auto& [k, v] : r.constants)
      os << "    fitted " << k << " = " << format_double(v) << '\n';
    for (const auto& [k, v] : r.diagnostics)
      os << "    diag " << k << " = " << format_double(v) << '\n';
    for (const auto& n : r.notes) os << "    note: " << n << '\n';
  }
  os << '\n' << (all_hard_passed(reports) ? "ALL HARD CHECKS PASSED" : "HARD CHECK FAILURE")
     << '\n';
}

}  // namespace bhastlo
