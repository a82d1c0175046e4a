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

#include "cxrharmon/ingestion.hpp"

#include <fstream>

#include <doctest.h>

#include "cxrharmon/rng.hpp"
#include "support/fixtures.hpp"

namespace cxrharmon {
namespace {

using testing::TempDir;
using testing::write_png;

TEST_CASE("png decode preserves stored pixels exactly") {
  TempDir tmp;

  SUBCASE("8-bit all-zero") {
    const auto path = tmp.path() / "zero.png";
    write_png(path, 4, 4, [](size_t, size_t) { return 0; }, 8);
    const RawImage img = decode_image(path, 8);
    CHECK(img.width == 4);
    CHECK(img.height == 4);
    CHECK(img.bit_depth == 8);
    for (uint16_t p : img.pixels) CHECK(p == 0);
  }

  SUBCASE("16-bit max pixel survives") {
    const auto path = tmp.path() / "max16.png";
    write_png(path, 3, 2, [](size_t r, size_t c) {
      return static_cast<uint16_t>(r == 0 && c == 0 ? 65535 : 1234);
    }, 16);
    const RawImage img = decode_image(path, 16);
    CHECK(img.at(0, 0) == 65535);
    CHECK(img.at(1, 2) == 1234);
  }

  SUBCASE("16-bit random content round trips") {
    Xoshiro256pp rng(21);
    RawImage out;
    out.width = 9;
    out.height = 7;
    out.bit_depth = 16;
    for (size_t k = 0; k < 63; ++k) out.pixels.push_back(static_cast<uint16_t>(rng.below(65536)));
    const auto path = tmp.path() / "rand16.png";
    encode_png_gray(path, out);
    const RawImage back = decode_image(path, 16);
    CHECK(back.pixels == out.pixels);
  }
}

TEST_CASE("png decode rejects color, depth mismatch, and junk") {
  TempDir tmp;

  SUBCASE("bit depth mismatch") {
    const auto path = tmp.path() / "deep.png";
    write_png(path, 2, 2, [](size_t, size_t) { return 7; }, 16);
    CHECK_THROWS_AS(decode_image(path, 8), BitDepthMismatch);
  }

  SUBCASE("color png") {
    // Minimal 1x1 RGB PNG, stored literally.
    static const unsigned char kRgbPng[] = {
        0x89, 0x50, 0x4E, 0x47, 0x0D, 0x0A, 0x1A, 0x0A, 0x00, 0x00, 0x00, 0x0D, 0x49, 0x48,
        0x44, 0x52, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x08, 0x02, 0x00, 0x00,
        0x00, 0x90, 0x77, 0x53, 0xDE, 0x00, 0x00, 0x00, 0x0C, 0x49, 0x44, 0x41, 0x54, 0x78,
        0x9C, 0x63, 0xF8, 0xCF, 0xC0, 0x00, 0x00, 0x00, 0x03, 0x00, 0x01, 0x86, 0xA8, 0x1D,
        0xB5, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4E, 0x44, 0xAE, 0x42, 0x60, 0x82};
    const auto path = tmp.path() / "rgb.png";
    std::ofstream(path, std::ios::binary)
        .write(reinterpret_cast<const char*>(kRgbPng), sizeof kRgbPng);
    CHECK_THROWS_AS(decode_image(path, 8), DecodeError);
  }

  SUBCASE("not a png") {
    const auto path = tmp.path() / "fake.png";
    std::ofstream(path) << "definitely not a png";
    CHECK_THROWS_AS(decode_image(path, 8), DecodeError);
  }

  SUBCASE("truncated png") {
    const auto good = tmp.path() / "good.png";
    write_png(good, 16, 16, [](size_t r, size_t c) { return static_cast<uint16_t>(r + c); }, 8);
    std::ifstream in(good, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto path = tmp.path() / "cut.png";
    std::ofstream(path, std::ios::binary).write(bytes.data(), bytes.size() / 2);
    CHECK_THROWS_AS(decode_image(path, 8), DecodeError);
  }

  SUBCASE("missing file") {
    CHECK_THROWS_AS(decode_image(tmp.path() / "absent.png", 8), DecodeError);
  }
}

TEST_CASE("scale_pixels maps the possible range, not the observed range") {
  SUBCASE("8-bit endpoints") {
    RawImage img{2, 1, 8, {0, 255}};
    const Image scaled = scale_pixels(img);
    CHECK(scaled.at(0, 0) == -1024.0);
    CHECK(scaled.at(0, 1) == 1024.0);
  }
  SUBCASE("16-bit endpoints") {
    RawImage img{2, 1, 16, {0, 65535}};
    const Image scaled = scale_pixels(img);
    CHECK(scaled.at(0, 0) == -1024.0);
    CHECK(scaled.at(0, 1) == 1024.0);
  }
  SUBCASE("hand-evaluated 16-bit value") {
    RawImage img{1, 1, 16, {16384}};
    CHECK(scale_pixels(img).at(0, 0) == doctest::Approx(-511.9922).epsilon(1e-6));
  }
  SUBCASE("no per-image contrast stretch") {
    // Max pixel 100 in an 8-bit image must not map to +1024.
    RawImage img{2, 1, 8, {0, 100}};
    const Image scaled = scale_pixels(img);
    CHECK(scaled.at(0, 1) == doctest::Approx(100.0 / 255.0 * 2048.0 - 1024.0));
    CHECK(scaled.at(0, 1) < 0.0);
  }
}

TEST_CASE("scale_pixels is affine and monotone") {
  Xoshiro256pp rng(31);
  for (int depth : {8, 16}) {
    const double denom = depth == 8 ? 255.0 : 65535.0;
    const uint16_t max_value = depth == 8 ? 255 : 65535;
    RawImage img;
    img.width = 64;
    img.height = 1;
    img.bit_depth = depth;
    for (size_t k = 0; k < 64; ++k) {
      img.pixels.push_back(static_cast<uint16_t>(rng.below(max_value + 1)));
    }
    const Image scaled = scale_pixels(img);
    CHECK(scaled.min_value() >= -1024.0);
    CHECK(scaled.max_value() <= 1024.0);
    for (size_t a = 0; a < 64; ++a) {
      for (size_t b = a + 1; b < 64; ++b) {
        const double expected =
            (static_cast<double>(img.pixels[a]) - static_cast<double>(img.pixels[b])) * 2048.0 /
            denom;
        CHECK(scaled.at(0, a) - scaled.at(0, b) == doctest::Approx(expected).epsilon(1e-9));
        if (img.pixels[a] > img.pixels[b]) CHECK(scaled.at(0, a) > scaled.at(0, b));
      }
    }
  }
}

TEST_CASE("NIH-style fixture loads with delimited labels") {
  TempDir tmp;
  const auto profile_path = testing::write_nih_style_fixture(tmp.path());
  const AdapterProfile profile = AdapterProfile::from_file(profile_path);
  LoadStats stats;
  const Dataset ds = load_dataset(profile, &stats);

  CHECK(ds.name() == "nih_fixture");
  CHECK(ds.num_samples() == 12);
  CHECK(stats.csv_rows == 12);
  CHECK(stats.dropped_missing_image == 0);

  // Row 0 is "Cardiomegaly|Effusion": 1 in both columns, 0 elsewhere.
  const auto cardio = ds.pathologies().index_of("Cardiomegaly");
  const auto effusion = ds.pathologies().index_of("Effusion");
  const auto atelectasis = ds.pathologies().index_of("Atelectasis");
  REQUIRE(cardio.has_value());
  REQUIRE(effusion.has_value());
  CHECK(ds.labels().at(0, *cardio) == TriState::kPresent);
  CHECK(ds.labels().at(0, *effusion) == TriState::kPresent);
  CHECK(ds.labels().at(0, *atelectasis) == TriState::kAbsent);

  // "No Finding" row decodes all-Absent.
  for (size_t c = 0; c < ds.pathologies().size(); ++c) {
    CHECK(ds.labels().at(1, c) == TriState::kAbsent);
  }

  // Standardized columns got populated.
  CHECK(ds.csv().cell(0, kPatientIdColumn) == "p01");
  CHECK(ds.csv().cell(3, kViewColumn) == "Lateral");  // LL mapped through view_map
  CHECK(ds.csv().cell(5, kOffsetColumn) == "5");
  CHECK(ds.csv().cell(0, kHasMasksColumn) == "true");
  CHECK(ds.csv().cell(1, kHasMasksColumn) == "false");
  // Two of twelve images carry mask entries.
  size_t with_masks = 0;
  for (const auto& cell : ds.csv().column(kHasMasksColumn)) with_masks += cell == "true" ? 1 : 0;
  CHECK(with_masks == 2);
  // Raw columns preserved.
  CHECK(ds.csv().has_column("Finding Labels"));
}

TEST_CASE("CheXpert-style fixture maps -1 and blank to Unknown") {
  TempDir tmp;
  const auto profile_path = testing::write_chexpert_style_fixture(tmp.path());
  const Dataset ds = load_dataset(AdapterProfile::from_file(profile_path));

  const auto atelectasis = ds.pathologies().index_of("Atelectasis");
  const auto edema = ds.pathologies().index_of("Edema");
  REQUIRE(atelectasis.has_value());
  REQUIRE(edema.has_value());

  CHECK(ds.labels().at(0, *atelectasis) == TriState::kPresent);
  CHECK(ds.labels().at(0, *edema) == TriState::kAbsent);
  CHECK(ds.labels().at(1, *atelectasis) == TriState::kUnknown);  // -1.0
  CHECK(ds.labels().at(2, *atelectasis) == TriState::kUnknown);  // blank
  CHECK(ds.labels().at(2, *edema) == TriState::kUnknown);        // -1.0
  CHECK(ds.labels().at(4, *edema) == TriState::kPresent);
}

TEST_CASE("load_dataset drops rows with missing images and counts them") {
  TempDir tmp;
  const auto profile_path = testing::write_nih_style_fixture(tmp.path());
  std::filesystem::remove(tmp.path() / "images" / "img3.png");
  std::filesystem::remove(tmp.path() / "images" / "img7.png");

  LoadStats stats;
  const Dataset ds = load_dataset(AdapterProfile::from_file(profile_path), &stats);
  CHECK(stats.csv_rows == 12);
  CHECK(stats.dropped_missing_image == 2);
  CHECK(stats.usable_rows == 10);
  CHECK(ds.num_samples() == 10);
  CHECK(stats.usable_rows + stats.dropped_missing_image == stats.csv_rows);
}

TEST_CASE("load_dataset raises ProfileError for a missing column") {
  TempDir tmp;
  const auto profile_path = testing::write_nih_style_fixture(tmp.path());
  AdapterProfile profile = AdapterProfile::from_file(profile_path);
  profile.view_column = "viewz";
  CHECK_THROWS_AS(load_dataset(profile), ProfileError);
}

TEST_CASE("load_dataset raises EmptyDataset when nothing is usable") {
  TempDir tmp;
  const auto profile_path = testing::write_nih_style_fixture(tmp.path());
  std::filesystem::remove_all(tmp.path() / "images");
  std::filesystem::create_directories(tmp.path() / "images");
  CHECK_THROWS_AS(load_dataset(AdapterProfile::from_file(profile_path)), EmptyDataset);
}

TEST_CASE("profile validation catches structural mistakes") {
  TempDir tmp;
  AdapterProfile profile = AdapterProfile::from_file(testing::write_nih_style_fixture(tmp.path()));

  SUBCASE("bad bit depth") {
    profile.bit_depth = 12;
    CHECK_THROWS_AS(profile.validate(), ProfileError);
  }
  SUBCASE("both label modes") {
    profile.per_column.emplace();
    CHECK_THROWS_AS(profile.validate(), ProfileError);
  }
  SUBCASE("no label mode") {
    profile.delimited.reset();
    CHECK_THROWS_AS(profile.validate(), ProfileError);
  }
  SUBCASE("overlapping value sets") {
    profile.delimited.reset();
    std::map<std::string, PerColumnRule> rules;
    for (const auto& p : profile.pathologies) {
      rules[p.name()] = PerColumnRule{"col", {"1"}, {"1"}, {}};
    }
    profile.per_column = std::move(rules);
    CHECK_THROWS_AS(profile.validate(), ProfileError);
  }
  SUBCASE("missing csv") {
    profile.csvpath = tmp.path() / "nope.csv";
    CHECK_THROWS_AS(load_dataset(profile), ProfileError);
  }
}

TEST_CASE("manifest round trip preserves labels and provenance") {
  TempDir tmp;
  const Dataset ds = load_dataset(
      AdapterProfile::from_file(testing::write_nih_style_fixture(tmp.path())));

  const auto manifest_path = tmp.path() / "manifest.csv";
  {
    std::ofstream out(manifest_path, std::ios::binary);
    out << write_csv(manifest_table(ds).to_csv());
  }
  const Dataset back = load_manifest(manifest_path);

  CHECK(back.num_samples() == ds.num_samples());
  CHECK(back.pathologies() == ds.pathologies());
  for (size_t r = 0; r < ds.num_samples(); ++r) {
    CHECK(back.csv().cell(r, kSourceNameColumn) == "nih_fixture");
    CHECK(back.csv().cell(r, kSourceIndexColumn) == std::to_string(r));
    for (size_t c = 0; c < ds.pathologies().size(); ++c) {
      CHECK(back.labels().at(r, c) == ds.labels().at(r, c));
    }
  }
  CHECK_FALSE(back.has_images());
  CHECK_THROWS_AS(back.sample(0), DomainError);
}

TEST_CASE("bitmap mask directories attach per-image segmentations") {
  TempDir tmp;
  const auto imgdir = tmp.path() / "images";
  const auto maskdir = tmp.path() / "masks";
  std::filesystem::create_directories(imgdir);
  std::filesystem::create_directories(maskdir);

  write_png(imgdir / "scan0.png", 8, 8, [](size_t r, size_t c) {
    return static_cast<uint16_t>(r * 8 + c);
  });
  write_png(imgdir / "scan1.png", 8, 8, [](size_t, size_t) { return 50; });
  // Segmentation for scan0 only: ones in the top-left quadrant.
  write_png(maskdir / "scan0__Lung_Opacity.png", 8, 8, [](size_t r, size_t c) {
    return static_cast<uint16_t>(r < 4 && c < 4 ? 255 : 0);
  });

  {
    std::ofstream csv(tmp.path() / "meta.csv");
    csv << "file,Lung Opacity\nscan0.png,1\nscan1.png,0\n";
  }
  nlohmann::json profile = {
      {"name", "bitmap_fixture"},
      {"imgpath", "images"},
      {"csvpath", "meta.csv"},
      {"image_column", "file"},
      {"bit_depth", 8},
      {"pathologies", {"Lung Opacity"}},
      {"labels",
       {{"mode", "per_column"},
        {"columns",
         {{"Lung Opacity",
           {{"column", "Lung Opacity"}, {"positive", {"1"}}, {"negative", {"0"}}}}}}}},
      {"mask_source", {{"type", "bitmap_dir"}, {"path", "masks"}}}};
  {
    std::ofstream out(tmp.path() / "profile.json");
    out << profile.dump(2);
  }

  const Dataset ds =
      attach_masks(load_dataset(AdapterProfile::from_file(tmp.path() / "profile.json")), true);
  CHECK(ds.csv().cell(0, kHasMasksColumn) == "true");
  CHECK(ds.csv().cell(1, kHasMasksColumn) == "false");

  const Sample s0 = ds.sample(0);
  REQUIRE(s0.pathology_masks.count(0) == 1);
  CHECK(s0.pathology_masks.at(0).at(0, 0) == 1.0);
  CHECK(s0.pathology_masks.at(0).at(5, 5) == 0.0);
  CHECK(ds.sample(1).pathology_masks.empty());
}

TEST_CASE("load_input dispatches on extension") {
  TempDir tmp;
  CHECK_THROWS_AS(load_input(tmp.path() / "x.txt"), FormatError);
}

}  // namespace
}  // namespace cxrharmon
