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

// probseg: compare probabilistic or crisp segmentations, match their
// labels, and generate synthetic benchmarks.
//
// Exit codes: 0 success, 1 I/O or usage error, 2 validation failure.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "probseg/probseg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;

struct ValidationFailure {
  std::string message;
};

probseg::PixelSimilarityKind parse_kind(const std::string& s) {
  return s == "f2" ? probseg::PixelSimilarityKind::aitchison
                   : probseg::PixelSimilarityKind::absolute_difference;
}

probseg::MergePolicy parse_merge(const std::string& s) {
  if (s == "over") return probseg::MergePolicy::over_segmented;
  if (s == "under") return probseg::MergePolicy::under_segmented;
  return probseg::MergePolicy::none;
}

/// Loads either a probability volume or a crisp label map (one-hot
/// embedded) based on the file's magic line.
probseg::ProbSegmentation load_segmentation(const std::filesystem::path& path,
                                            bool normalize) {
  const auto kind = probseg::detect_file_kind(path);
  switch (kind) {
    case probseg::SegmentationFileKind::prob_volume:
      return probseg::read_prob_volume(path, {.normalize = normalize});
    case probseg::SegmentationFileKind::label_map:
      return probseg::crisp_to_prob(probseg::read_label_map(path));
    default:
      throw probseg::parse_error(path.string() +
                                 ": similarity maps are not segmentations");
  }
}

void require_same_domain(const probseg::ProbSegmentation& gt,
                         const probseg::ProbSegmentation& a) {
  if (gt.domain() != a.domain()) {
    throw ValidationFailure{"grid shapes differ: ground truth is " +
                            gt.domain().to_string() + ", automated is " +
                            a.domain().to_string()};
  }
}

/// Reorders the automated channels to the ground truth's label order.
/// Requires identical label sets; used by --assume-corresponding.
probseg::ProbSegmentation align_by_label_identity(
    const probseg::ProbSegmentation& a, const probseg::ProbSegmentation& gt) {
  if (!a.labels().same_labels(gt.labels())) {
    throw ValidationFailure{
        "--assume-corresponding requires identical label sets, got " +
        a.labels().to_string() + " vs " + gt.labels().to_string()};
  }
  std::vector<std::size_t> perm;
  perm.reserve(gt.label_count());
  for (int label : gt.labels().labels()) {
    perm.push_back(*a.labels().position_of(label));
  }
  return probseg::reorder_channels(a, perm, gt.labels());
}

struct CompareOptions {
  std::string gt_path;
  std::string auto_path;
  std::string metric = "both";
  // Empty means "follow --metric" (f1 when --metric is both).
  std::string match_metric;
  std::string merge = "none";
  bool assume_corresponding = false;
  bool normalize = false;
  std::string report_path;
  std::string report_format = "json";
  std::string simmap_f1;
  std::string simmap_f2;
};

std::string resolve_match_metric(const CompareOptions& opt) {
  if (!opt.match_metric.empty()) return opt.match_metric;
  return opt.metric == "f2" ? "f2" : "f1";
}

std::map<std::string, std::string> base_parameters(const CompareOptions& opt) {
  return {
      {"ground_truth", opt.gt_path},
      {"automated", opt.auto_path},
      {"metric", opt.metric},
      {"match_metric", resolve_match_metric(opt)},
      {"merge", opt.merge},
      {"assume_corresponding", opt.assume_corresponding ? "true" : "false"},
      {"normalize", opt.normalize ? "true" : "false"},
  };
}

int run_compare(const CompareOptions& opt) {
  const auto gt = load_segmentation(opt.gt_path, opt.normalize);
  const auto automated = load_segmentation(opt.auto_path, opt.normalize);
  require_same_domain(gt, automated);

  const bool want_f1 = opt.metric != "f2";
  const bool want_f2 = opt.metric != "f1";
  const auto match_kind = parse_kind(resolve_match_metric(opt));

  probseg::ComparisonReport report;
  report.parameters = base_parameters(opt);

  std::optional<probseg::SimilarityMap> map_f1, map_f2;
  if (opt.assume_corresponding) {
    if (automated.label_count() != gt.label_count()) {
      throw ValidationFailure{
          "--assume-corresponding requires equal label counts, got " +
          std::to_string(automated.label_count()) + " vs " +
          std::to_string(gt.label_count())};
    }
    const auto aligned = align_by_label_identity(automated, gt);
    if (want_f1) {
      auto r = probseg::continuous_dice(
          aligned, gt, probseg::PixelSimilarityKind::absolute_difference);
      report.dsc_f1 = r.value;
      map_f1 = std::move(r.map);
    }
    if (want_f2) {
      auto r = probseg::continuous_dice(aligned, gt,
                                        probseg::PixelSimilarityKind::aitchison);
      report.dsc_f2 = r.value;
      map_f2 = std::move(r.map);
    }
  } else {
    const auto result = probseg::establish_correspondence(
        automated, gt, match_kind, parse_merge(opt.merge));
    report.correspondence = result.matching;
    report.merges = result.merges;
    for (const auto& [a_label, gt_label] : result.matching.pairs) {
      const double dsc =
          probseg::continuous_dice(probseg::auxiliary_binary(automated, a_label),
                                   probseg::auxiliary_binary(gt, gt_label),
                                   match_kind)
              .value;
      report.per_label_binary_dsc.push_back({a_label, gt_label, dsc});
    }
    if (want_f1) {
      auto r = probseg::final_dice(
          result, gt, probseg::PixelSimilarityKind::absolute_difference);
      report.dsc_f1 = r.value;
      map_f1 = std::move(r.map);
    }
    if (want_f2) {
      auto r = probseg::final_dice(result, gt,
                                   probseg::PixelSimilarityKind::aitchison);
      report.dsc_f2 = r.value;
      map_f2 = std::move(r.map);
    }
    // The under-segmented mirror regroups ground-truth channels for
    // reporting; surface the regrouped Dice beside the raw one.
    if (parse_merge(opt.merge) == probseg::MergePolicy::under_segmented &&
        !result.merges.empty()) {
      const auto merged_gt = probseg::apply_merge_grouping(gt, result.merges);
      const auto merged_rel =
          probseg::apply_merge_grouping(result.relabeled, result.merges);
      if (want_f1) {
        report.dsc_f1_merged_gt =
            probseg::continuous_dice(
                merged_rel, merged_gt,
                probseg::PixelSimilarityKind::absolute_difference)
                .value;
      }
      if (want_f2) {
        report.dsc_f2_merged_gt =
            probseg::continuous_dice(merged_rel, merged_gt,
                                     probseg::PixelSimilarityKind::aitchison)
                .value;
      }
    }
  }

  if (!opt.simmap_f1.empty() && map_f1) {
    probseg::write_similarity_map(*map_f1, opt.simmap_f1);
  }
  if (!opt.simmap_f2.empty() && map_f2) {
    probseg::write_similarity_map(*map_f2, opt.simmap_f2);
  }
  if (!opt.report_path.empty()) {
    probseg::write_report(report, opt.report_path,
                          opt.report_format == "flat"
                              ? probseg::ReportFormat::flat
                              : probseg::ReportFormat::json);
  }

  if (report.dsc_f1) {
    std::cout << "dsc_f1 " << probseg::detail::format_double(*report.dsc_f1)
              << "\n";
  }
  if (report.dsc_f2) {
    std::cout << "dsc_f2 " << probseg::detail::format_double(*report.dsc_f2)
              << "\n";
  }
  if (report.dsc_f1_merged_gt) {
    std::cout << "dsc_f1_merged_gt "
              << probseg::detail::format_double(*report.dsc_f1_merged_gt)
              << "\n";
  }
  if (report.dsc_f2_merged_gt) {
    std::cout << "dsc_f2_merged_gt "
              << probseg::detail::format_double(*report.dsc_f2_merged_gt)
              << "\n";
  }
  return kExitOk;
}

struct MatchOptions {
  std::string gt_path;
  std::string auto_path;
  std::string metric = "f1";
  std::string merge = "none";
  bool normalize = false;
  std::string relabel_out;
  std::string relabel_encoding = "binary";
  std::string report_path;
  std::string report_format = "json";
};

int run_match(const MatchOptions& opt) {
  const auto gt = load_segmentation(opt.gt_path, opt.normalize);
  const auto automated = load_segmentation(opt.auto_path, opt.normalize);
  require_same_domain(gt, automated);
  const auto kind = parse_kind(opt.metric);
  const auto result = probseg::establish_correspondence(
      automated, gt, kind, parse_merge(opt.merge));

  probseg::ComparisonReport report;
  report.parameters = {{"ground_truth", opt.gt_path},
                       {"automated", opt.auto_path},
                       {"metric", opt.metric},
                       {"merge", opt.merge},
                       {"normalize", opt.normalize ? "true" : "false"}};
  report.correspondence = result.matching;
  report.merges = result.merges;

  std::cout << "automated ground_truth binary_dsc\n";
  for (const auto& [a_label, gt_label] : result.matching.pairs) {
    const double dsc =
        probseg::continuous_dice(probseg::auxiliary_binary(automated, a_label),
                                 probseg::auxiliary_binary(gt, gt_label), kind)
            .value;
    report.per_label_binary_dsc.push_back({a_label, gt_label, dsc});
    std::cout << a_label << " " << gt_label << " "
              << probseg::detail::format_double(dsc) << "\n";
  }
  for (int label : result.matching.unmatched_automated) {
    std::cout << "unmatched_automated " << label << "\n";
  }
  for (int label : result.matching.unmatched_gt) {
    std::cout << "unmatched_gt " << label << "\n";
  }
  for (const auto& m : result.merges) {
    std::cout << "merge " << m.absorbed << " -> " << m.host << " gain "
              << probseg::detail::format_double(m.gain) << "\n";
  }

  if (!opt.relabel_out.empty()) {
    probseg::write_prob_volume(result.relabeled, opt.relabel_out,
                               opt.relabel_encoding == "text"
                                   ? probseg::VolumeEncoding::text
                                   : probseg::VolumeEncoding::binary);
  }
  if (!opt.report_path.empty()) {
    probseg::write_report(report, opt.report_path,
                          opt.report_format == "flat"
                              ? probseg::ReportFormat::flat
                              : probseg::ReportFormat::json);
  }
  return kExitOk;
}

struct BenchOptions {
  std::string kind = "blur";
  std::uint64_t seed = 0;
  std::size_t size = 48;
  std::size_t shapes = 2;
  std::vector<double> strengths;
  std::string metric = "f1";
  std::string out_path;
  std::string json_path;
};

std::vector<double> default_ladder(const std::string& kind) {
  if (kind == "noise") return {0.0, 0.05, 0.1, 0.2, 0.3};
  if (kind == "deform") return {0.0, 1.0, 2.0, 4.0, 6.0};
  return {0.0, 1.0, 2.0, 4.0, 8.0};  // blur
}

probseg::PerturbationKind parse_perturbation(const std::string& s) {
  if (s == "noise") return probseg::PerturbationKind::noise;
  if (s == "deform") return probseg::PerturbationKind::deform;
  return probseg::PerturbationKind::blur;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    probseg::detail::atomic_write(out_path, text);
  }
}

int run_bench(const BenchOptions& opt) {
  const probseg::PixelDomain domain({opt.size, opt.size});
  const auto gt = probseg::make_synthetic_gt(opt.shapes, domain, opt.seed);

  if (opt.kind == "rank") {
    // Seven graded blur corruptions, ranked back by Dice.
    const std::vector<double> ladder = {0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0};
    std::vector<probseg::ProbSegmentation> candidates;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      candidates.push_back(
          perturb(gt, {probseg::PerturbationKind::blur, ladder[i],
                       probseg::derive_seed(opt.seed, i)}));
    }
    const auto ranked =
        probseg::rank_segmentations(gt, candidates, parse_kind(opt.metric));
    emit(probseg::ranking_csv(ranked), opt.out_path);
    if (!opt.json_path.empty()) {
      nlohmann::ordered_json j;
      j["format"] = "probseg-bench v1";
      j["mode"] = "rank";
      j["seed"] = opt.seed;
      j["metric"] = opt.metric;
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (const auto& r : ranked) {
        rows.push_back({{"rank", r.rank},
                        {"candidate", r.input_index},
                        {"strength", ladder[r.input_index]},
                        {"dsc", r.dsc}});
      }
      j["ranking"] = rows;
      probseg::detail::atomic_write(opt.json_path, j.dump(2) + "\n");
    }
    return kExitOk;
  }

  const auto kind = parse_perturbation(opt.kind);
  const std::vector<double> strengths =
      opt.strengths.empty() ? default_ladder(opt.kind) : opt.strengths;
  const auto curve = probseg::degradation_curve(gt, kind, strengths, opt.seed);
  emit(probseg::degradation_curve_csv(curve), opt.out_path);
  if (!opt.json_path.empty()) {
    nlohmann::ordered_json j;
    j["format"] = "probseg-bench v1";
    j["mode"] = "curve";
    j["kind"] = opt.kind;
    j["seed"] = opt.seed;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& s : curve.samples) {
      rows.push_back({{"strength", s.strength},
                      {"dsc_f1", s.dsc_f1},
                      {"dsc_f2", s.dsc_f2}});
    }
    j["samples"] = rows;
    probseg::detail::atomic_write(opt.json_path, j.dump(2) + "\n");
  }
  return kExitOk;
}

int run_validate(const std::string& path, bool normalize) {
  const auto kind = probseg::detect_file_kind(path);
  if (kind == probseg::SegmentationFileKind::label_map) {
    probseg::read_label_map(path);  // construction enforces the invariants
    std::cout << "valid\n";
    return kExitOk;
  }
  if (kind != probseg::SegmentationFileKind::prob_volume) {
    throw probseg::parse_error(path + ": not a segmentation file");
  }
  auto seg =
      probseg::read_prob_volume(path, {.normalize = normalize, .validate = false});
  const auto violations = probseg::validate(seg);
  for (const auto& v : violations) {
    std::cout << v.message() << "\n";
  }
  if (!violations.empty()) {
    std::cerr << path << ": " << violations.size() << " violation(s)\n";
    return kExitValidation;
  }
  std::cout << "valid\n";
  return kExitOk;
}

struct ConvertOptions {
  std::string in_path;
  std::string out_path;
  std::string to = "prob";
  std::string encoding = "binary";
  bool normalize = false;
};

int run_convert(const ConvertOptions& opt) {
  const auto encoding = opt.encoding == "text" ? probseg::VolumeEncoding::text
                                               : probseg::VolumeEncoding::binary;
  if (opt.to == "crisp") {
    const auto seg = load_segmentation(opt.in_path, opt.normalize);
    probseg::write_label_map(probseg::prob_to_crisp(seg), opt.out_path);
  } else {
    const auto seg = load_segmentation(opt.in_path, opt.normalize);
    probseg::write_prob_volume(seg, opt.out_path, encoding);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-region probabilistic segmentation comparison"};
  app.require_subcommand(1);

  CompareOptions compare_opt;
  auto* compare = app.add_subcommand(
      "compare", "Compare an automated segmentation against a ground truth");
  compare->add_option("ground_truth", compare_opt.gt_path)->required();
  compare->add_option("automated", compare_opt.auto_path)->required();
  compare->add_option("--metric", compare_opt.metric)
      ->check(CLI::IsMember({"both", "f1", "f2"}));
  compare->add_option("--match-metric", compare_opt.match_metric,
                      "Kernel for the correspondence cost matrix")
      ->check(CLI::IsMember({"f1", "f2"}));
  compare->add_option("--merge", compare_opt.merge)
      ->check(CLI::IsMember({"none", "over", "under"}));
  compare->add_flag("--assume-corresponding",
                    compare_opt.assume_corresponding,
                    "Skip matching; labels already correspond");
  compare->add_flag("--normalize", compare_opt.normalize,
                    "Repair near-valid probability sums on read");
  compare->add_option("--report", compare_opt.report_path);
  compare->add_option("--format", compare_opt.report_format)
      ->check(CLI::IsMember({"json", "flat"}));
  compare->add_option("--simmap-f1", compare_opt.simmap_f1,
                      "Write the per-pixel f1 similarity map here");
  compare->add_option("--simmap-f2", compare_opt.simmap_f2);

  MatchOptions match_opt;
  auto* match = app.add_subcommand(
      "match", "Print the label correspondence between two segmentations");
  match->add_option("ground_truth", match_opt.gt_path)->required();
  match->add_option("automated", match_opt.auto_path)->required();
  match->add_option("--metric", match_opt.metric)
      ->check(CLI::IsMember({"f1", "f2"}));
  match->add_option("--merge", match_opt.merge)
      ->check(CLI::IsMember({"none", "over", "under"}));
  match->add_flag("--normalize", match_opt.normalize);
  match->add_option("--relabel-out", match_opt.relabel_out,
                    "Write the relabeled automated volume here");
  match->add_option("--relabel-encoding", match_opt.relabel_encoding)
      ->check(CLI::IsMember({"binary", "text"}));
  match->add_option("--report", match_opt.report_path);
  match->add_option("--format", match_opt.report_format)
      ->check(CLI::IsMember({"json", "flat"}));

  BenchOptions bench_opt;
  auto* bench = app.add_subcommand(
      "bench", "Synthetic degradation curves and rankings");
  bench->add_option("--kind", bench_opt.kind)
      ->check(CLI::IsMember({"blur", "noise", "deform", "rank"}));
  bench->add_option("--seed", bench_opt.seed);
  bench->add_option("--size", bench_opt.size, "Grid side length")
      ->check(CLI::Range(std::size_t{8}, std::size_t{4096}));
  bench->add_option("--shapes", bench_opt.shapes, "Foreground region count")
      ->check(CLI::Range(std::size_t{1}, std::size_t{32}));
  bench->add_option("--strengths", bench_opt.strengths)->delimiter(',');
  bench->add_option("--metric", bench_opt.metric)
      ->check(CLI::IsMember({"f1", "f2"}));
  bench->add_option("--out", bench_opt.out_path, "CSV path (default stdout)");
  bench->add_option("--json", bench_opt.json_path, "Also write JSON here");

  std::string validate_path;
  bool validate_normalize = false;
  auto* validate_cmd =
      app.add_subcommand("validate", "Check a segmentation file's invariants");
  validate_cmd->add_option("input", validate_path)->required();
  validate_cmd->add_flag("--normalize", validate_normalize);

  ConvertOptions convert_opt;
  auto* convert = app.add_subcommand(
      "convert", "Convert between crisp and probabilistic formats");
  convert->add_option("input", convert_opt.in_path)->required();
  convert->add_option("output", convert_opt.out_path)->required();
  convert->add_option("--to", convert_opt.to)
      ->check(CLI::IsMember({"prob", "crisp"}));
  convert->add_option("--encoding", convert_opt.encoding)
      ->check(CLI::IsMember({"binary", "text"}));
  convert->add_flag("--normalize", convert_opt.normalize);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (compare->parsed()) return run_compare(compare_opt);
    if (match->parsed()) return run_match(match_opt);
    if (bench->parsed()) return run_bench(bench_opt);
    if (validate_cmd->parsed()) {
      return run_validate(validate_path, validate_normalize);
    }
    if (convert->parsed()) return run_convert(convert_opt);
  } catch (const ValidationFailure& e) {
    std::cerr << "error: " << e.message << "\n";
    return kExitValidation;
  } catch (const probseg::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const probseg::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
