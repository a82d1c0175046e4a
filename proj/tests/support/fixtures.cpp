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

#include "support/fixtures.hpp"

#include <unistd.h>

#include <atomic>
#include <fstream>

#include <json.hpp>

#include "cxrharmon/io.hpp"

namespace cxrharmon::testing {

namespace {

std::atomic<uint64_t> g_tempdir_counter{0};

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TempDir::TempDir() {
  const uint64_t id = g_tempdir_counter.fetch_add(1);
  path_ = std::filesystem::temp_directory_path() /
          ("cxrharmon_test_" + std::to_string(::getpid()) + "_" + std::to_string(id));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

LabelMatrix labels_from_strings(const std::vector<std::string>& rows, size_t cols) {
  LabelMatrix labels(rows.size(), cols);
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < cols; ++c) {
      switch (rows[r].at(c)) {
        case '0':
          labels.set(r, c, TriState::kAbsent);
          break;
        case '1':
          labels.set(r, c, TriState::kPresent);
          break;
        default:
          labels.set(r, c, TriState::kUnknown);
          break;
      }
    }
  }
  return labels;
}

Image gradient_image(size_t index, size_t side) {
  Image img(side, side);
  const double base = -512.0 + 16.0 * static_cast<double>(index % 64);
  for (size_t r = 0; r < side; ++r) {
    for (size_t c = 0; c < side; ++c) {
      img.at(r, c) = base + static_cast<double>(r) - static_cast<double>(c) * 0.5;
    }
  }
  return img;
}

Dataset make_memory_dataset(MemorySpec spec) {
  const size_t n = spec.label_rows.size();
  std::vector<Image> images = std::move(spec.images);
  if (images.empty()) {
    images.reserve(n);
    for (size_t i = 0; i < n; ++i) images.push_back(gradient_image(i, spec.image_side));
  }

  Table csv;
  if (!spec.patientids.empty()) csv.set_column(kPatientIdColumn, spec.patientids);
  if (!spec.views.empty()) csv.set_column(kViewColumn, spec.views);
  if (csv.columns().empty()) {
    // Tables cannot be all-empty when rows exist; keep a plain row id column.
    std::vector<std::string> ids(n);
    for (size_t i = 0; i < n; ++i) ids[i] = std::to_string(i);
    csv.set_column("row_id", std::move(ids));
  }

  std::vector<Pathology> pathologies;
  pathologies.reserve(spec.pathologies.size());
  for (const auto& name : spec.pathologies) pathologies.push_back(Pathology::canonical(name));

  const bool has_masks = !spec.masks.empty();
  auto source = has_masks
                    ? std::make_shared<InMemorySource>(std::move(images), std::move(spec.masks))
                    : std::make_shared<InMemorySource>(std::move(images));
  std::vector<ImageRef> refs;
  refs.reserve(n);
  for (size_t i = 0; i < n; ++i) refs.push_back(ImageRef{source, i});

  return Dataset(spec.name, Taxonomy(std::move(pathologies)),
                 labels_from_strings(spec.label_rows, spec.pathologies.size()), std::move(csv),
                 std::move(refs), DatasetKind::kSource, {}, spec.masks_enabled);
}

void write_png(const std::filesystem::path& path, size_t width, size_t height,
               const std::function<uint16_t(size_t, size_t)>& pixel, int bit_depth) {
  RawImage img;
  img.width = width;
  img.height = height;
  img.bit_depth = bit_depth;
  img.pixels.resize(width * height);
  for (size_t r = 0; r < height; ++r) {
    for (size_t c = 0; c < width; ++c) img.pixels[r * width + c] = pixel(r, c);
  }
  encode_png_gray(path, img);
}

std::filesystem::path write_nih_style_fixture(const std::filesystem::path& dir) {
  const auto imgdir = dir / "images";
  std::filesystem::create_directories(imgdir);

  // 12 rows; findings chosen to exercise multi-token cells, "No Finding",
  // repeated patients, and the PA/AP/Lateral view mix.
  const std::vector<std::string> findings = {
      "Cardiomegaly|Effusion", "No Finding",        "Atelectasis",
      "Effusion",              "Pneumonia|Effusion", "No Finding",
      "Cardiomegaly",          "Atelectasis|Pneumonia", "No Finding",
      "Effusion|Cardiomegaly", "Pneumonia",          "No Finding"};
  const std::vector<std::string> patients = {"p01", "p01", "p02", "p03", "p04", "p05",
                                             "p06", "p06", "p06", "p07", "p08", "p09"};
  const std::vector<std::string> views = {"PA", "PA", "AP", "LL", "PA", "PA",
                                          "AP", "PA", "LL", "PA", "AP", "PA"};

  std::string csv = "Image Index,Finding Labels,Patient ID,View Position,Follow-up #\n";
  for (size_t i = 0; i < findings.size(); ++i) {
    const std::string filename = "img" + std::to_string(i) + ".png";
    write_png(imgdir / filename, 10, 10, [i](size_t r, size_t c) {
      return static_cast<uint16_t>((i * 17 + r * 3 + c) % 256);
    });
    csv += "\"" + filename + "\",\"" + findings[i] + "\"," + patients[i] + "," + views[i] + "," +
           std::to_string(i) + "\n";
  }
  write_text(dir / "metadata.csv", csv);

  // Box masks for two images; img0 has two Cardiomegaly boxes to exercise
  // the OR-merge path.
  write_text(dir / "masks.csv",
             "image,pathology,x,y,w,h\n"
             "img0.png,Cardiomegaly,1,1,3,3\n"
             "img0.png,Cardiomegaly,2,2,3,3\n"
             "img0.png,Effusion,0,0,2,2\n"
             "img4.png,Pneumonia,4,4,4,4\n");

  nlohmann::json profile = {
      {"format_version", 1},
      {"name", "nih_fixture"},
      {"imgpath", "images"},
      {"csvpath", "metadata.csv"},
      {"image_column", "Image Index"},
      {"bit_depth", 8},
      {"pathologies", {"Atelectasis", "Cardiomegaly", "Effusion", "Pneumonia"}},
      {"labels",
       {{"mode", "delimited_string"},
        {"column", "Finding Labels"},
        {"delimiter", "|"},
        {"negation_token", "No Finding"}}},
      {"patientid_column", "Patient ID"},
      {"view_column", "View Position"},
      {"view_map", {{"PA", "PA"}, {"AP", "AP"}, {"LL", "Lateral"}}},
      {"offset_column", "Follow-up #"},
      {"mask_source", {{"type", "sidecar_csv"}, {"path", "masks.csv"}}},
  };
  const auto profile_path = dir / "nih_profile.json";
  write_text(profile_path, profile.dump(2));
  return profile_path;
}

std::filesystem::path write_chexpert_style_fixture(const std::filesystem::path& dir) {
  const auto imgdir = dir / "chex_images";
  std::filesystem::create_directories(imgdir);

  std::string csv = "Path,Sex,Frontal/Lateral,Atelectasis,Edema\n";
  const std::vector<std::pair<std::string, std::string>> cells = {
      {"1.0", "0.0"}, {"-1.0", "1.0"}, {"", "-1.0"}, {"0.0", ""}, {"1.0", "1.0"}};
  const std::vector<std::string> sexes = {"F", "M", "F", "F", "M"};
  for (size_t i = 0; i < cells.size(); ++i) {
    const std::string filename = "view" + std::to_string(i) + ".png";
    write_png(imgdir / filename, 8, 8, [i](size_t r, size_t c) {
      return static_cast<uint16_t>((i * 31 + r + c * 5) % 256);
    });
    csv += filename + "," + sexes[i] + ",Frontal," + cells[i].first + "," + cells[i].second + "\n";
  }
  write_text(dir / "chex.csv", csv);

  nlohmann::json profile = {
      {"format_version", 1},
      {"name", "chex_fixture"},
      {"imgpath", "chex_images"},
      {"csvpath", "chex.csv"},
      {"image_column", "Path"},
      {"bit_depth", 8},
      {"pathologies", {"Atelectasis", "Edema"}},
      {"labels",
       {{"mode", "per_column"},
        {"columns",
         {{"Atelectasis",
           {{"column", "Atelectasis"},
            {"positive", {"1.0", "1"}},
            {"negative", {"0.0", "0"}},
            {"unknown", {"-1.0", "-1", ""}}}},
          {"Edema",
           {{"column", "Edema"},
            {"positive", {"1.0", "1"}},
            {"negative", {"0.0", "0"}},
            {"unknown", {"-1.0", "-1", ""}}}}}}}},
  };
  const auto profile_path = dir / "chex_profile.json";
  write_text(profile_path, profile.dump(2));
  return profile_path;
}

std::filesystem::path write_patch_fixture(const std::filesystem::path& dir, size_t positives,
                                          size_t negatives) {
  const auto imgdir = dir / "patch_images";
  std::filesystem::create_directories(imgdir);

  std::string csv = "file,Lesion\n";
  const size_t total = positives + negatives;
  for (size_t i = 0; i < total; ++i) {
    const bool positive = i < positives;
    const std::string filename = "case" + std::to_string(i) + ".png";
    write_png(imgdir / filename, 32, 32, [positive](size_t r, size_t c) {
      const bool in_patch = r >= 8 && r < 16 && c >= 8 && c < 16;
      return static_cast<uint16_t>(positive && in_patch ? 250 : 40);
    });
    csv += filename + "," + (positive ? "1" : "0") + "\n";
  }
  write_text(dir / "patch.csv", csv);

  nlohmann::json profile = {
      {"format_version", 1},
      {"name", "patch_fixture"},
      {"imgpath", "patch_images"},
      {"csvpath", "patch.csv"},
      {"image_column", "file"},
      {"bit_depth", 8},
      {"pathologies", {"Lesion"}},
      {"labels",
       {{"mode", "per_column"},
        {"columns",
         {{"Lesion",
           {{"column", "Lesion"}, {"positive", {"1"}}, {"negative", {"0"}}, {"unknown", {""}}}}}}}},
  };
  const auto profile_path = dir / "patch_profile.json";
  write_text(profile_path, profile.dump(2));
  return profile_path;
}

namespace {

// Quota-filling plan shared by the in-memory and on-disk covariate fixtures:
// pick patient ids until the requested mode pool holds exactly per_cell
// Present and per_cell Absent rows; rows landing in other pools alternate
// labels so those pools stay usable.
struct CovariatePlan {
  std::vector<std::string> patientids;
  std::vector<TriState> labels;
};

CovariatePlan plan_covariate_rows(const std::string& patient_prefix, size_t per_cell,
                                  uint64_t seed, SplitMode mode,
                                  const PoolFractions& fractions) {
  CovariatePlan plan;
  size_t mode_pos = 0;
  size_t mode_neg = 0;
  size_t other_rows = 0;
  bool flip = false;
  for (size_t k = 0; mode_pos < per_cell || mode_neg < per_cell; ++k) {
    if (k > 100000) throw Error("covariate fixture failed to fill pools");
    const std::string pid = patient_prefix + std::to_string(k);

    // Probe this patient's pool through the public API with a 1-row dataset.
    Table csv;
    csv.set_column(kPatientIdColumn, {pid});
    Dataset probe("probe", Taxonomy({Pathology::canonical("target")}),
                  labels_from_strings({"1"}, 1), std::move(csv));
    const Pools pools =
        partition_pools(probe, {TriState::kPresent}, seed, fractions);
    const bool in_mode_pool = (mode == SplitMode::kTrain && !pools.train.empty()) ||
                              (mode == SplitMode::kValid && !pools.valid.empty()) ||
                              (mode == SplitMode::kTest && !pools.test.empty());

    if (in_mode_pool) {
      if (mode_pos <= mode_neg && mode_pos < per_cell) {
        plan.labels.push_back(TriState::kPresent);
        ++mode_pos;
      } else if (mode_neg < per_cell) {
        plan.labels.push_back(TriState::kAbsent);
        ++mode_neg;
      } else if (mode_pos < per_cell) {
        plan.labels.push_back(TriState::kPresent);
        ++mode_pos;
      } else {
        continue;  // both quotas already full; skip this row entirely
      }
    } else {
      plan.labels.push_back(flip ? TriState::kPresent : TriState::kAbsent);
      flip = !flip;
      ++other_rows;
    }
    plan.patientids.push_back(pid);
  }
  (void)other_rows;
  return plan;
}

}  // namespace

Dataset make_covariate_source(const std::string& name, const std::string& patient_prefix,
                              size_t per_cell, uint64_t seed, SplitMode mode,
                              const PoolFractions& fractions) {
  const CovariatePlan plan =
      plan_covariate_rows(patient_prefix, per_cell, seed, mode, fractions);
  std::vector<std::string> rows;
  rows.reserve(plan.labels.size());
  for (TriState label : plan.labels) {
    rows.push_back(label == TriState::kPresent ? "1" : "0");
  }
  MemorySpec spec;
  spec.name = name;
  spec.pathologies = {"target"};
  spec.label_rows = std::move(rows);
  spec.patientids = plan.patientids;
  spec.image_side = 8;
  return make_memory_dataset(std::move(spec));
}

std::filesystem::path write_covariate_cli_fixture(const std::filesystem::path& dir,
                                                  const std::string& name,
                                                  const std::string& patient_prefix,
                                                  size_t per_cell, uint64_t seed,
                                                  SplitMode mode) {
  const CovariatePlan plan = plan_covariate_rows(patient_prefix, per_cell, seed, mode, {});
  const auto imgdir = dir / (name + "_images");
  std::filesystem::create_directories(imgdir);

  std::string csv = "file,pid,Pneumonia\n";
  for (size_t i = 0; i < plan.patientids.size(); ++i) {
    const std::string filename = name + "_" + std::to_string(i) + ".png";
    write_png(imgdir / filename, 8, 8, [i](size_t r, size_t c) {
      return static_cast<uint16_t>((i + r * 7 + c * 13) % 256);
    });
    csv += filename + "," + plan.patientids[i] + "," +
           (plan.labels[i] == TriState::kPresent ? "1" : "0") + "\n";
  }
  write_text(dir / (name + ".csv"), csv);

  nlohmann::json profile = {
      {"format_version", 1},
      {"name", name},
      {"imgpath", name + "_images"},
      {"csvpath", name + ".csv"},
      {"image_column", "file"},
      {"bit_depth", 8},
      {"pathologies", {"Pneumonia"}},
      {"labels",
       {{"mode", "per_column"},
        {"columns",
         {{"Pneumonia",
           {{"column", "Pneumonia"},
            {"positive", {"1"}},
            {"negative", {"0"}},
            {"unknown", {""}}}}}}}},
      {"patientid_column", "pid"},
  };
  const auto profile_path = dir / (name + "_profile.json");
  write_text(profile_path, profile.dump(2));
  return profile_path;
}

}  // namespace cxrharmon::testing
