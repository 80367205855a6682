// Copyright 2026 The Probseg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PROBSEG_REPORT_HPP
#define PROBSEG_REPORT_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "probseg/correspondence.hpp"
#include "probseg/errors.hpp"
#include "probseg/io.hpp"

namespace probseg {

struct LabelPairDice {
  int automated;
  int ground_truth;
  double binary_dsc;  // complement of the cost-matrix weight for this pair
};

/// Everything a comparison produces: both Dice values (or the one that was
/// requested), the label correspondence with its merge record, the
/// per-pair binary Dice table, and the flags that were in force.
struct ComparisonReport {
  std::optional<double> dsc_f1;
  std::optional<double> dsc_f2;
  // Present when the under-segmented mirror merge was applied: the Dice
  // after grouping ground-truth channels per the merge record.
  std::optional<double> dsc_f1_merged_gt;
  std::optional<double> dsc_f2_merged_gt;
  Matching correspondence;
  MergeRecord merges;
  std::vector<LabelPairDice> per_label_binary_dsc;
  std::map<std::string, std::string> parameters;
};

enum class ReportFormat { json, flat };

inline std::string render_report_json(const ComparisonReport& report) {
  nlohmann::ordered_json j;
  j["format"] = "probseg-report v1";
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.parameters) params[k] = v;
  j["parameters"] = params;
  if (report.dsc_f1) j["dsc_f1"] = *report.dsc_f1;
  if (report.dsc_f2) j["dsc_f2"] = *report.dsc_f2;
  if (report.dsc_f1_merged_gt) j["dsc_f1_merged_gt"] = *report.dsc_f1_merged_gt;
  if (report.dsc_f2_merged_gt) j["dsc_f2_merged_gt"] = *report.dsc_f2_merged_gt;

  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& [a, g] : report.correspondence.pairs) {
    pairs.push_back({{"automated", a}, {"ground_truth", g}});
  }
  j["correspondence"] = {
      {"pairs", pairs},
      {"unmatched_automated", report.correspondence.unmatched_automated},
      {"unmatched_gt", report.correspondence.unmatched_gt},
  };
  nlohmann::ordered_json merges = nlohmann::ordered_json::array();
  for (const auto& m : report.merges) {
    merges.push_back(
        {{"absorbed", m.absorbed}, {"host", m.host}, {"gain", m.gain}});
  }
  j["merges"] = merges;
  nlohmann::ordered_json table = nlohmann::ordered_json::array();
  for (const auto& e : report.per_label_binary_dsc) {
    table.push_back({{"automated", e.automated},
                     {"ground_truth", e.ground_truth},
                     {"binary_dsc", e.binary_dsc}});
  }
  j["per_label_binary_dsc"] = table;
  return j.dump(2) + "\n";
}

/// One metric per line, comma-separated, for spreadsheet ingestion.
inline std::string render_report_flat(const ComparisonReport& report) {
  std::string out = "metric,value\n";
  const auto add = [&out](const std::string& key, double v) {
    out += key + "," + detail::format_double(v) + "\n";
  };
  if (report.dsc_f1) add("dsc_f1", *report.dsc_f1);
  if (report.dsc_f2) add("dsc_f2", *report.dsc_f2);
  if (report.dsc_f1_merged_gt) add("dsc_f1_merged_gt", *report.dsc_f1_merged_gt);
  if (report.dsc_f2_merged_gt) add("dsc_f2_merged_gt", *report.dsc_f2_merged_gt);
  for (const auto& e : report.per_label_binary_dsc) {
    add("binary_dsc_" + std::to_string(e.automated) + "_" +
            std::to_string(e.ground_truth),
        e.binary_dsc);
  }
  for (const auto& m : report.merges) {
    add("merge_gain_" + std::to_string(m.absorbed) + "_into_" +
            std::to_string(m.host),
        m.gain);
  }
  return out;
}

inline void write_report(const ComparisonReport& report,
                         const std::filesystem::path& path,
                         ReportFormat format) {
  detail::atomic_write(path, format == ReportFormat::json
                                 ? render_report_json(report)
                                 : render_report_flat(report));
}

/// Parses a JSON report back; the flat table is export-only.
inline ComparisonReport read_report(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(path.string() + ": " + e.what());
  }
  ComparisonReport report;
  if (j.contains("parameters")) {
    for (const auto& [k, v] : j["parameters"].items()) {
      report.parameters[k] = v.get<std::string>();
    }
  }
  if (j.contains("dsc_f1")) report.dsc_f1 = j["dsc_f1"].get<double>();
  if (j.contains("dsc_f2")) report.dsc_f2 = j["dsc_f2"].get<double>();
  if (j.contains("dsc_f1_merged_gt")) {
    report.dsc_f1_merged_gt = j["dsc_f1_merged_gt"].get<double>();
  }
  if (j.contains("dsc_f2_merged_gt")) {
    report.dsc_f2_merged_gt = j["dsc_f2_merged_gt"].get<double>();
  }
  if (j.contains("correspondence")) {
    const auto& c = j["correspondence"];
    for (const auto& p : c.value("pairs", nlohmann::json::array())) {
      report.correspondence.pairs.emplace_back(p["automated"].get<int>(),
                                               p["ground_truth"].get<int>());
      report.correspondence.matched_automated.push_back(
          p["automated"].get<int>());
    }
    for (const auto& v :
         c.value("unmatched_automated", nlohmann::json::array())) {
      report.correspondence.unmatched_automated.push_back(v.get<int>());
    }
    for (const auto& v : c.value("unmatched_gt", nlohmann::json::array())) {
      report.correspondence.unmatched_gt.push_back(v.get<int>());
    }
  }
  for (const auto& m : j.value("merges", nlohmann::json::array())) {
    report.merges.push_back({m["absorbed"].get<int>(), m["host"].get<int>(),
                             m["gain"].get<double>()});
  }
  for (const auto& e :
       j.value("per_label_binary_dsc", nlohmann::json::array())) {
    report.per_label_binary_dsc.push_back({e["automated"].get<int>(),
                                           e["ground_truth"].get<int>(),
                                           e["binary_dsc"].get<double>()});
  }
  return report;
}

}  // namespace probseg

#endif  // PROBSEG_REPORT_HPP
