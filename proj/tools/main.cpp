// Copyright 2026 The cxrharmon Authors. All Rights Reserved.
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

// cxrharmon CLI: harmonize multi-source chest X-ray corpora from adapter
// profiles, compose datasets, build covariate-shift splits, preprocess
// samples, and calibrate model scores. Exit codes: 0 success, 1 usage,
// 2 data error.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cxrharmon/calibration.hpp"
#include "cxrharmon/composition.hpp"
#include "cxrharmon/covariate.hpp"
#include "cxrharmon/dataset.hpp"
#include "cxrharmon/errors.hpp"
#include "cxrharmon/ingestion.hpp"
#include "cxrharmon/io.hpp"
#include "cxrharmon/transforms.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct StatsArgs {
  std::string input;
  bool human = false;
};

struct CovariateArgs {
  std::string d1;
  std::string d2;
  std::string target;
  std::string d2_target;
  double ratio = 0.5;
  std::string mode = "train";
  uint64_t seed = 0;
  std::vector<double> fractions;
  std::string out_dir;
};

struct CalibrateArgs {
  std::vector<std::string> inputs;  // "<pathology>=<csv path>"
  std::string out;
};

struct ApplyArgs {
  std::string scores;
  std::string params;
  std::string out;
};

struct PreprocessArgs {
  std::string profile;
  size_t index = 0;
  std::string transform = "crop,resize:224";
  std::optional<uint64_t> seed;
  std::string out_prefix;
};

struct MergeArgs {
  std::vector<std::string> inputs;
  std::string relabel_to;
  std::string out;
  std::string stats_out;
};

struct SubsetArgs {
  std::string input;
  std::string indexes;
  std::string where;
  std::string views;
  bool unique_patients = false;
  std::string out;
};

struct ClassDiffArgs {
  std::string input;
  std::string target;
  size_t res = 224;
  std::string out_prefix;
};

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t comma = std::min(text.find(',', pos), text.size());
    std::string token = text.substr(pos, comma - pos);
    if (!token.empty()) out.push_back(std::move(token));
    if (comma == text.size()) break;
    pos = comma + 1;
  }
  return out;
}

int run_stats(const StatsArgs& args) {
  const cxrharmon::Dataset ds = cxrharmon::load_input(args.input);
  if (args.human) {
    std::cout << ds.summary() << "\n";
  } else {
    std::cout << cxrharmon::stats_json(ds).dump(2) << "\n";
  }
  return kExitOk;
}

int run_covariate(const CovariateArgs& args) {
  cxrharmon::CovariateSpec spec{
      cxrharmon::load_input(args.d1),
      cxrharmon::load_input(args.d2),
      cxrharmon::normalize_name(args.target),
      cxrharmon::normalize_name(args.d2_target.empty() ? args.target : args.d2_target),
      cxrharmon::split_mode_from_string(args.mode),
      args.ratio,
      args.seed,
      {}};
  if (!args.fractions.empty()) {
    spec.pool_fractions = {args.fractions[0], args.fractions[1], args.fractions[2]};
  }

  const cxrharmon::Dataset split = cxrharmon::build_covariate(spec);

  fs::create_directories(args.out_dir);
  const fs::path manifest_path = fs::path(args.out_dir) / "manifest.csv";
  cxrharmon::write_manifest(split, manifest_path);

  size_t positives_from_d1 = 0;
  size_t positives = 0;
  for (size_t r = 0; r < split.num_samples(); ++r) {
    if (split.labels().at(r, 0) != cxrharmon::TriState::kPresent) continue;
    ++positives;
    if (split.csv().cell(r, cxrharmon::kSourceNameColumn) == spec.d1.name()) {
      ++positives_from_d1;
    }
  }

  json provenance;
  provenance["format_version"] = 1;
  provenance["d1"] = {{"input", args.d1}, {"name", spec.d1.name()}};
  provenance["d2"] = {{"input", args.d2}, {"name", spec.d2.name()}};
  provenance["d1_target"] = std::get<cxrharmon::Pathology>(spec.d1_target).name();
  provenance["d2_target"] = std::get<cxrharmon::Pathology>(spec.d2_target).name();
  provenance["mode"] = args.mode;
  provenance["ratio"] = args.ratio;
  provenance["seed"] = args.seed;
  provenance["pool_fractions"] = {spec.pool_fractions.train, spec.pool_fractions.valid,
                                  spec.pool_fractions.test};
  provenance["size"] = split.num_samples();
  provenance["positives"] = positives;
  provenance["positives_from_d1"] = positives_from_d1;
  const fs::path provenance_path = fs::path(args.out_dir) / "provenance.json";
  cxrharmon::atomic_write_text(provenance_path, provenance.dump(2) + "\n");

  std::cout << json{{"manifest", manifest_path.string()},
                    {"provenance", provenance_path.string()},
                    {"size", split.num_samples()}}
                   .dump(2)
            << "\n";
  return kExitOk;
}

cxrharmon::ScoredSet read_scored_csv(const fs::path& path) {
  const cxrharmon::Table table = cxrharmon::Table::from_csv(cxrharmon::read_csv_file(path));
  for (const char* column : {"id", "score", "label"}) {
    if (!table.has_column(column)) {
      throw cxrharmon::FormatError(path.string() + " needs columns id,score,label");
    }
  }
  cxrharmon::ScoredSet set;
  for (size_t r = 0; r < table.num_rows(); ++r) {
    const std::string& label = table.cell(r, "label");
    if (label.empty() || label == "NaN" || label == "nan") continue;  // no information
    int y;
    if (label == "0" || label == "0.0") {
      y = 0;
    } else if (label == "1" || label == "1.0") {
      y = 1;
    } else {
      throw cxrharmon::FormatError(path.string() + " row " + std::to_string(r) +
                                   ": label must be 0, 1, or NaN");
    }
    double score;
    try {
      score = std::stod(table.cell(r, "score"));
    } catch (const std::exception&) {
      throw cxrharmon::FormatError(path.string() + " row " + std::to_string(r) +
                                   ": score is not a number");
    }
    set.scores.push_back(score);
    set.labels.push_back(y);
  }
  return set;
}

int run_calibrate(const CalibrateArgs& args) {
  cxrharmon::CalibrationParams params;
  for (const auto& input : args.inputs) {
    const size_t eq = input.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == input.size()) {
      throw CLI::ValidationError("--input", "expected <pathology>=<csv path>, got '" + input + "'");
    }
    const cxrharmon::Pathology pathology = cxrharmon::normalize_name(input.substr(0, eq));
    const cxrharmon::ScoredSet set = read_scored_csv(input.substr(eq + 1));
    params.set(pathology, cxrharmon::op_point(set));
  }
  cxrharmon::atomic_write_text(args.out, params.to_json().dump(2) + "\n");
  std::cout << params.to_json().dump(2) << "\n";
  return kExitOk;
}

int run_apply(const ApplyArgs& args) {
  const cxrharmon::CalibrationParams params =
      cxrharmon::CalibrationParams::from_json(cxrharmon::read_json_file(args.params));
  cxrharmon::Table table = cxrharmon::Table::from_csv(cxrharmon::read_csv_file(args.scores));
  if (!table.has_column("id")) {
    throw cxrharmon::FormatError(args.scores + " needs an id column");
  }

  for (const auto& column : std::vector<std::string>(table.columns())) {
    if (column == "id") continue;
    const std::string canonical = cxrharmon::normalize_name(column).name();
    const auto opt = params.get(canonical);
    if (!opt.has_value()) {
      throw cxrharmon::DomainError("no operating point for score column '" + column +
                                   "' (canonical '" + canonical + "') in " + args.params);
    }
    for (size_t r = 0; r < table.num_rows(); ++r) {
      const std::string& cell = table.cell(r, column);
      if (cell.empty() || cell == "NaN" || cell == "nan") {
        table.set_cell(r, column, "NaN");
        continue;
      }
      double x;
      try {
        x = std::stod(cell);
      } catch (const std::exception&) {
        throw cxrharmon::FormatError(args.scores + " row " + std::to_string(r) + " column " +
                                     column + ": not a number");
      }
      char buffer[32];
      std::snprintf(buffer, sizeof buffer, "%.17g", cxrharmon::apply_opt(x, *opt));
      table.set_cell(r, column, buffer);
    }
  }
  cxrharmon::atomic_write_text(args.out, cxrharmon::write_csv(table.to_csv()));
  std::cout << json{{"out", args.out}}.dump(2) << "\n";
  return kExitOk;
}

int run_preprocess(const PreprocessArgs& args) {
  const cxrharmon::Dataset ds =
      cxrharmon::load_dataset(cxrharmon::AdapterProfile::from_file(args.profile));
  cxrharmon::TransformChain chain;
  try {
    chain = cxrharmon::TransformChain::parse(args.transform);
  } catch (const cxrharmon::FormatError& e) {
    throw CLI::ValidationError("--transform", e.what());
  }
  const cxrharmon::Sample sample = ds.sample(args.index, &chain, args.seed);

  const fs::path bin_path = args.out_prefix + ".bin";
  const fs::path header_path = args.out_prefix + ".json";
  cxrharmon::write_tensor_f32(sample.img, bin_path, header_path);
  std::cout << json{{"bin", bin_path.string()},
                    {"header", header_path.string()},
                    {"shape", {1, sample.img.height(), sample.img.width()}}}
                   .dump(2)
            << "\n";
  return kExitOk;
}

int run_merge(const MergeArgs& args) {
  std::vector<cxrharmon::Dataset> children;
  children.reserve(args.inputs.size());
  for (const auto& input : args.inputs) children.push_back(cxrharmon::load_input(input));

  if (!args.relabel_to.empty()) {
    const cxrharmon::Taxonomy target =
        cxrharmon::Taxonomy::from_json(cxrharmon::read_json_file(args.relabel_to));
    for (auto& child : children) child = cxrharmon::relabel(child, target);
  }

  cxrharmon::Dataset merged = [&] {
    try {
      return cxrharmon::merge(children);
    } catch (const cxrharmon::PathologyMismatch& e) {
      throw cxrharmon::PathologyMismatch(std::string(e.what()) +
                                         " (pass --relabel-to <taxonomy.json>)");
    }
  }();

  cxrharmon::write_manifest(merged, args.out);
  if (!args.stats_out.empty()) {
    cxrharmon::atomic_write_text(args.stats_out, cxrharmon::stats_json(merged).dump(2) + "\n");
  }
  std::cout << json{{"out", args.out}, {"num_samples", merged.num_samples()}}.dump(2) << "\n";
  return kExitOk;
}

int run_subset(const SubsetArgs& args) {
  const cxrharmon::Dataset ds = cxrharmon::load_input(args.input);
  cxrharmon::Dataset result = [&] {
    if (!args.indexes.empty()) {
      return cxrharmon::subset(ds, cxrharmon::read_index_file(args.indexes));
    }
    if (!args.where.empty()) {
      return cxrharmon::subset(ds, cxrharmon::where_indexes(ds, args.where));
    }
    if (!args.views.empty()) {
      return cxrharmon::filter_views(ds, split_commas(args.views));
    }
    return ds;
  }();
  if (args.unique_patients) result = cxrharmon::unique_patients(result);

  cxrharmon::write_manifest(result, args.out);
  std::cout << json{{"out", args.out}, {"num_samples", result.num_samples()}}.dump(2) << "\n";
  return kExitOk;
}

int run_classdiff(const ClassDiffArgs& args) {
  const cxrharmon::Dataset ds = cxrharmon::load_input(args.input);
  const cxrharmon::Image diff =
      cxrharmon::class_mean_difference(ds, cxrharmon::normalize_name(args.target), args.res);
  const fs::path png_path = args.out_prefix + ".png";
  const fs::path sidecar_path = args.out_prefix + ".json";
  cxrharmon::export_difference_png(diff, png_path, sidecar_path);
  std::cout << json{{"png", png_path.string()}, {"sidecar", sidecar_path.string()}}.dump(2)
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cxrharmon: multi-source chest X-ray dataset harmonization"};
  app.require_subcommand(1);

  StatsArgs stats_args;
  auto* stats = app.add_subcommand("stats", "Summarize a dataset (counts per pathology)");
  stats->add_option("input", stats_args.input, "Adapter profile (.json) or manifest (.csv)")
      ->required();
  stats->add_flag("--human", stats_args.human, "Pretty summary text instead of JSON");
  stats->add_flag("--json", "Emit JSON (default)");

  CovariateArgs cov_args;
  auto* covariate = app.add_subcommand("covariate", "Build a controlled covariate-shift split");
  covariate->add_option("--d1", cov_args.d1, "First source (profile or manifest)")->required();
  covariate->add_option("--d2", cov_args.d2, "Second source (profile or manifest)")->required();
  covariate->add_option("--target", cov_args.target, "Target pathology name")->required();
  covariate->add_option("--d2-target", cov_args.d2_target,
                        "Target pathology in d2 when named differently");
  covariate->add_option("--ratio", cov_args.ratio, "Origin/label correlation, in (0, 1)")
      ->required()
      ->check(CLI::Validator(
          [](std::string& value) {
            try {
              const double r = std::stod(value);
              if (r > 0.0 && r < 1.0) return std::string();
            } catch (const std::exception&) {
            }
            return std::string("ratio must be in (0, 1)");
          },
          "RATIO"));
  covariate->add_option("--mode", cov_args.mode, "train, valid, or test")
      ->required()
      ->check(CLI::IsMember({"train", "valid", "test"}));
  covariate->add_option("--seed", cov_args.seed, "Deterministic sampling seed")->default_val(0);
  covariate
      ->add_option("--pool-fractions", cov_args.fractions,
                   "train valid test pool fractions (default 0.7 0.1 0.2)")
      ->expected(3);
  covariate->add_option("--out", cov_args.out_dir, "Output directory")->required();

  CalibrateArgs cal_args;
  auto* calibrate = app.add_subcommand("calibrate", "Compute per-pathology operating points");
  calibrate
      ->add_option("--input", cal_args.inputs,
                   "<pathology>=<csv> with columns id,score,label (repeatable)")
      ->required();
  calibrate->add_option("--out", cal_args.out, "Output params JSON")->required();

  ApplyArgs apply_args;
  auto* apply = app.add_subcommand("apply", "Apply operating-point calibration to scores");
  apply->add_option("--scores", apply_args.scores, "CSV: id column + one column per pathology")
      ->required();
  apply->add_option("--params", apply_args.params, "Params JSON from calibrate")->required();
  apply->add_option("--out", apply_args.out, "Output CSV")->required();

  PreprocessArgs pre_args;
  auto* preprocess = app.add_subcommand("preprocess", "Export one preprocessed sample tensor");
  preprocess->add_option("--profile", pre_args.profile, "Adapter profile (.json)")->required();
  preprocess->add_option("--index", pre_args.index, "Sample index")->default_val(0);
  preprocess->add_option("--transform", pre_args.transform,
                         "Transform chain, e.g. crop,resize:224,augment:seed=7");
  preprocess->add_option("--seed", pre_args.seed, "Augmentation seed override");
  preprocess->add_option("--out", pre_args.out_prefix, "Output prefix (.bin/.json)")->required();

  MergeArgs merge_args;
  auto* merge = app.add_subcommand("merge", "Merge datasets into one manifest");
  merge->add_option("--input", merge_args.inputs, "Profile or manifest (repeatable, in order)")
      ->required();
  merge->add_option("--relabel-to", merge_args.relabel_to,
                    "Taxonomy JSON to relabel every child to before merging");
  merge->add_option("--out", merge_args.out, "Output manifest CSV")->required();
  merge->add_option("--stats-json", merge_args.stats_out, "Also write a stats JSON");

  SubsetArgs subset_args;
  auto* subset = app.add_subcommand("subset", "Select rows into a new manifest");
  subset->add_option("input", subset_args.input, "Profile or manifest")->required();
  auto* opt_indexes =
      subset->add_option("--indexes", subset_args.indexes, "Newline-delimited index file");
  auto* opt_where =
      subset->add_option("--where", subset_args.where, "Predicate 'column op value'");
  auto* opt_views =
      subset->add_option("--views", subset_args.views, "Comma-separated canonical views");
  opt_indexes->excludes(opt_where)->excludes(opt_views);
  opt_where->excludes(opt_views);
  subset->add_flag("--unique-patients", subset_args.unique_patients,
                   "Keep first image per patient (applied last)");
  subset->add_option("--out", subset_args.out, "Output manifest CSV")->required();

  ClassDiffArgs diff_args;
  auto* classdiff = app.add_subcommand("classdiff", "Class-mean difference image for a target");
  classdiff->add_option("--input", diff_args.input, "Adapter profile (.json)")->required();
  classdiff->add_option("--target", diff_args.target, "Target pathology name")->required();
  classdiff->add_option("--res", diff_args.res, "Output resolution")->default_val(224);
  classdiff->add_option("--out", diff_args.out_prefix, "Output prefix (.png/.json)")->required();

  try {
    app.parse(argc, argv);
    if (stats->parsed()) return run_stats(stats_args);
    if (covariate->parsed()) return run_covariate(cov_args);
    if (calibrate->parsed()) return run_calibrate(cal_args);
    if (apply->parsed()) return run_apply(apply_args);
    if (preprocess->parsed()) return run_preprocess(pre_args);
    if (merge->parsed()) return run_merge(merge_args);
    if (subset->parsed()) return run_subset(subset_args);
    if (classdiff->parsed()) return run_classdiff(diff_args);
    return kExitUsage;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cxrharmon::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
