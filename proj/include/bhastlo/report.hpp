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

#pragma once

#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace bhastlo {

/// Hard checks are unconditional inequalities; fitted checks report the
/// smallest constant that makes an inequality with an unspecified constant
/// hold and judge its stability; exploratory checks never fail a run.
enum class Tier { Hard, Fitted, Exploratory };

enum class Verdict { Pass, Fail, Skipped };

const char* to_string(Tier tier) noexcept;
const char* to_string(Verdict verdict) noexcept;

/// One evaluated inequality lhs <= rhs; margin = rhs - lhs.
struct ReportRow {
  std::string label;
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
};

struct CheckReport {
  std::string name;
  Tier tier = Tier::Hard;
  Verdict verdict = Verdict::Pass;
  double tolerance = 0.0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::string, double>> constants;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::pair<std::string, double>> diagnostics;
  std::vector<std::string> notes;
  std::vector<ReportRow> rows;

  CheckReport() = default;
  CheckReport(std::string name_, Tier tier_, double tolerance_)
      : name(std::move(name_)), tier(tier_), tolerance(tolerance_) {}

  bool passed() const { return verdict == Verdict::Pass; }
  bool skipped() const { return verdict == Verdict::Skipped; }

  /// Records lhs <= rhs and fails the report if rhs - lhs < -tolerance.
  void add_row(std::string label, double t, double lhs, double rhs);
  void set_constant(const std::string& key, double value);
  double constant(const std::string& key) const;
  void set_parameter(const std::string& key, std::string value);
  void set_parameter(const std::string& key, double value);
  void set_diagnostic(const std::string& key, double value);
  void fail(std::string reason);
  void skip(std::string reason);
};

/// Folds several reports into one verdict: passes iff none failed.
bool all_hard_passed(const std::vector<CheckReport>& reports);

std::string format_double(double v);

/// Compact %.12g form for labels and keys.
std::string format_short(double v);

/// One row per evaluated inequality:
/// check,tier,label,t,lhs,rhs,margin
void write_report_csv(std::ostream& os, const std::vector<CheckReport>& reports);

/// Human-readable verdicts, fitted constants, and notes.
void write_summary(std::ostream& os, const std::vector<CheckReport>& reports,
                   const std::vector<std::string>& header);

}  // namespace bhastlo
