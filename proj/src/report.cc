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

#include "forge/report.h"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "forge/rng.h"
#include "forge/utf8.h"

namespace forge {
namespace {

constexpr char kMissing[] = "—";

std::string Cell(const std::optional<Rational>& r) {
  return r ? FormatRational(*r) : kMissing;
}

template <typename F>
std::optional<Rational> Guarded(F f) {
  try {
    return f();
  } catch (const ValidationError&) {
    return std::nullopt;
  }
}

size_t DisplayWidth(const std::string& s) {
  size_t w = 0;
  for (char32_t c : utf8::Decode(s)) {
    const bool wide = utf8::IsCjk(c) || (c >= 0xFF01 && c <= 0xFF60) ||
                      (c >= 0x3000 && c <= 0x303F);
    w += wide ? 2 : 1;
  }
  return w;
}

}  // namespace

std::vector<ReportRow> BuildReport(const std::vector<ResultRecord>& records,
                                   const ReportOptions& options) {
  using Key = std::pair<std::string, std::string>;
  std::map<Key, std::vector<const ResultRecord*>> cells;
  for (const ResultRecord& r : records) {
    cells[{r.template_id, r.model}].push_back(&r);
  }
  std::vector<ReportRow> rows;
  for (const auto& [key, recs] : cells) {
    ReportRow row;
    row.template_id = key.first;
    row.model = key.second;
    row.records = recs.size();
    std::vector<VerdictLabel> base, non_toxic;
    std::array<std::vector<VerdictLabel>, 8> by_type;
    std::array<std::vector<MrItem>, 8> mr_items;
    std::vector<ScoredSample> scored;
    for (const ResultRecord* r : recs) {
      if (r->label == VerdictLabel::kUnparseable) ++row.unparseable;
      scored.push_back({r->gold_label, r->label});
      if (r->gold_label == Label::kNonToxic) {
        non_toxic.push_back(r->label);
      } else if (!r->type) {
        base.push_back(r->label);
      } else {
        const size_t t = TypeIndex(*r->type);
        by_type[t].push_back(r->label);
        if (r->label == VerdictLabel::kToxic) {
          mr_items[t].push_back(
              {r->sample_id, r->extracted, r->gold_entity, r->perturbed_forms});
        }
      }
    }
    row.base = Guarded([&] { return DetectionRate(base); });
    row.er = Guarded([&] { return ErrorRate(non_toxic); });
    row.f1 = Guarded([&] { return F1(Confusion(scored)); });
    Rational sum(0);
    bool all = true;
    for (size_t t = 0; t < 8; ++t) {
      row.type_rates[t] = Guarded([&] { return DetectionRate(by_type[t]); });
      if (row.type_rates[t]) {
        sum += *row.type_rates[t];
      } else {
        all = false;
      }
      if (!mr_items[t].empty()) {
        const uint64_t seed = DeriveSeed(
            options.seed, row.template_id + "\t" + row.model, t + 1);
        row.mr[t] = MisinterpretationRate(mr_items[t], options.mr_k, seed,
                                          options.mr_overrides);
      }
    }
    if (all) row.avg = sum / 8;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> ReportHeader() {
  std::vector<std::string> h = {"Prompt", "Model", "Base", "Avg."};
  for (PerturbationType t : kAllPerturbationTypes) {
    h.emplace_back(TypeName(t));
  }
  h.insert(h.end(), {"F1", "ER"});
  for (PerturbationType t : kAllPerturbationTypes) {
    h.push_back("MR:" + std::string(TypeName(t)));
  }
  for (PerturbationType t : kAllPerturbationTypes) {
    h.push_back("MR_n:" + std::string(TypeName(t)));
  }
  h.insert(h.end(), {"N", "Unparseable"});
  return h;
}

std::vector<std::string> ReportCells(const ReportRow& row) {
  std::vector<std::string> c = {row.template_id, row.model, Cell(row.base),
                                Cell(row.avg)};
  for (const auto& r : row.type_rates) c.push_back(Cell(r));
  c.push_back(Cell(row.f1));
  c.push_back(Cell(row.er));
  for (const auto& m : row.mr) {
    c.push_back(m && m->sampled > 0 ? FormatRational(m->rate) : kMissing);
  }
  for (const auto& m : row.mr) {
    c.push_back(m ? std::to_string(m->sampled) : kMissing);
  }
  c.push_back(std::to_string(row.records));
  c.push_back(std::to_string(row.unparseable));
  return c;
}

std::string RenderTsv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      out << (i ? "\t" : "") << cells[i];
    }
    out << '\n';
  };
  line(ReportHeader());
  for (const ReportRow& r : rows) line(ReportCells(r));
  return out.str();
}

std::string RenderText(const std::vector<ReportRow>& rows,
                       const ReportOptions& options) {
  std::vector<std::vector<std::string>> table = {ReportHeader()};
  for (const ReportRow& r : rows) table.push_back(ReportCells(r));
  std::vector<size_t> width(table[0].size(), 0);
  for (const auto& cells : table) {
    for (size_t i = 0; i < cells.size(); ++i) {
      width[i] = std::max(width[i], DisplayWidth(cells[i]));
    }
  }
  std::ostringstream out;
  for (size_t row = 0; row < table.size(); ++row) {
    std::string line;
    for (size_t i = 0; i < table[row].size(); ++i) {
      const std::string& cell = table[row][i];
      const std::string pad(width[i] - DisplayWidth(cell), ' ');
      // Names left-aligned, numbers right-aligned.
      line += i < 2 ? cell + pad : pad + cell;
      if (i + 1 < table[row].size()) line += "  ";
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
    if (row == 0) {
      size_t total = 0;
      for (size_t w : width) total += w + 2;
      out << std::string(total - 2, '-') << '\n';
    }
  }
  out << "\nRates are percentages; F1 is a fraction. Missing cells: "
      << kMissing << ".\n";
  out << "MR: sample of up to " << options.mr_k << " correct detections per "
      << "cell (seed " << options.seed << "); ";
  if (options.mr_overrides.empty()) {
    out << "automatic matcher only (auto-MR).\n";
  } else {
    out << "human judgments from " << options.mr_override_source
        << " take precedence over the automatic matcher.\n";
  }
  return out.str();
}

}  // namespace forge
