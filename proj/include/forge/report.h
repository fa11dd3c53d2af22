// Copyright 2026 The Forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Paper-style result tables: one row per (prompt template, model) with the
// base and per-type detection rates, their mean, F1, ER and MR.

#ifndef FORGE_REPORT_H_
#define FORGE_REPORT_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forge/metrics.h"
#include "forge/records.h"

namespace forge {

struct ReportOptions {
  size_t mr_k = 30;
  uint64_t seed = 0;
  std::map<std::string, bool> mr_overrides;
  std::string mr_override_source;  // file name, for the footer
};

struct ReportRow {
  std::string template_id;
  std::string model;
  std::optional<Rational> base;
  std::optional<Rational> avg;  // mean of the 8 type rates when all exist
  std::array<std::optional<Rational>, 8> type_rates;
  std::optional<Rational> f1;
  std::optional<Rational> er;
  std::array<std::optional<MrResult>, 8> mr;
  size_t records = 0;
  size_t unparseable = 0;
};

// Rows sorted by (template, model).
std::vector<ReportRow> BuildReport(const std::vector<ResultRecord>& records,
                                   const ReportOptions& options);

std::vector<std::string> ReportHeader();
// Cells as rendered; missing values are "—".
std::vector<std::string> ReportCells(const ReportRow& row);

std::string RenderTsv(const std::vector<ReportRow>& rows);
std::string RenderText(const std::vector<ReportRow>& rows,
                       const ReportOptions& options);

}  // namespace forge

#endif  // FORGE_REPORT_H_
