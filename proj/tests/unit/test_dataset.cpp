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

#include "cxrharmon/dataset.hpp"

#include <doctest.h>

#include "cxrharmon/composition.hpp"
#include "cxrharmon/rng.hpp"
#include "support/fixtures.hpp"

namespace cxrharmon {
namespace {

using testing::make_memory_dataset;
using testing::MemorySpec;

MemorySpec small_spec() {
  MemorySpec spec;
  spec.name = "demo";
  spec.pathologies = {"Atelectasis", "Effusion"};
  spec.label_rows = {"10", "N1", "01", "1N"};
  spec.views = {"PA", "AP", "PA", "Lateral"};
  spec.patientids = {"a", "b", "c", "d"};
  return spec;
}

TEST_CASE("get_sample returns the aligned image, labels, and metadata") {
  const Dataset ds = make_memory_dataset(small_spec());

  TransformChain chain;
  chain.crop().resize(224);
  const Sample s = ds.sample(0, &chain);
  CHECK(s.img.height() == 224);
  CHECK(s.img.width() == 224);

  const Sample plain = ds.sample(3);
  CHECK(plain.lab == ds.labels().row(3));
  CHECK(plain.metadata.at(kViewColumn) == "Lateral");
  CHECK(plain.pathology_masks.empty());

  CHECK_THROWS_AS(ds.sample(4), IndexOutOfRange);
}

TEST_CASE("get_sample is deterministic given (index, transform, seed)") {
  const Dataset ds = make_memory_dataset(small_spec());
  TransformChain chain;
  chain.crop().resize(32).augment();

  Xoshiro256pp rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    const size_t index = static_cast<size_t>(rng.below(ds.num_samples()));
    const uint64_t seed = rng.next();
    const Sample a = ds.sample(index, &chain, seed);
    const Sample b = ds.sample(index, &chain, seed);
    CHECK(a.img == b.img);
    CHECK(a.lab == b.lab);
  }
}

TEST_CASE("totals counts definite labels and skips Unknown") {
  MemorySpec spec;
  spec.pathologies = {"Edema"};
  spec.label_rows = {"1", "0", "N", "1"};
  const Dataset ds = make_memory_dataset(spec);

  const LabelTotals totals = ds.totals();
  REQUIRE(totals.size() == 1);
  CHECK(totals[0].first.name() == "Edema");
  CHECK(totals[0].second.absent == 1);
  CHECK(totals[0].second.present == 2);
}

TEST_CASE("totals of an all-Unknown column is zero/zero") {
  MemorySpec spec;
  spec.pathologies = {"Edema"};
  spec.label_rows = {"N", "N", "N"};
  const Dataset ds = make_memory_dataset(spec);
  CHECK(ds.totals()[0].second.absent == 0);
  CHECK(ds.totals()[0].second.present == 0);
}

TEST_CASE("totals are invariant under row permutation") {
  const Dataset ds = make_memory_dataset(small_spec());
  const Dataset shuffled = subset(ds, {3, 0, 2, 1});
  CHECK(ds.totals()[0].second == shuffled.totals()[0].second);
  CHECK(ds.totals()[1].second == shuffled.totals()[1].second);
}

TEST_CASE("header shows name, size, and first-appearance views") {
  const Dataset ds = make_memory_dataset(small_spec());
  CHECK(ds.header() == "demo num_samples=4 views=['PA', 'AP', 'Lateral']");

  MemorySpec no_views = small_spec();
  no_views.views.clear();
  const Dataset plain = make_memory_dataset(no_views);
  CHECK(plain.header() == "demo num_samples=4");
}

TEST_CASE("summary renders totals in the printed dictionary style") {
  MemorySpec spec;
  spec.name = "tiny";
  spec.pathologies = {"Edema", "Mass"};
  spec.label_rows = {"10", "11"};
  const Dataset ds = make_memory_dataset(spec);
  CHECK(ds.summary() ==
        "tiny num_samples=2\n"
        "{'Edema': {0.0: 0, 1.0: 2},\n"
        " 'Mass': {0.0: 1, 1.0: 1}}");
}

TEST_CASE("subset and merge summaries render the provenance tree") {
  const Dataset ds = make_memory_dataset(small_spec());
  const Dataset sub = subset(ds, {0, 2, 3});
  const std::string sub_summary = sub.summary();
  CHECK(sub_summary.find("SubsetDataset num_samples=3\n") == 0);
  CHECK(sub_summary.find("└ of demo num_samples=4 views=['PA', 'AP', 'Lateral']") !=
        std::string::npos);

  MemorySpec other = small_spec();
  other.name = "other";
  const Dataset merged = merge({ds, make_memory_dataset(other)});
  const std::string merged_summary = merged.summary();
  CHECK(merged_summary.find("MergeDataset num_samples=8\n") == 0);
  CHECK(merged_summary.find("├0 demo num_samples=4") != std::string::npos);
  CHECK(merged_summary.find("└1 other num_samples=4") != std::string::npos);
}

TEST_CASE("dataset constructor enforces the alignment invariants") {
  Table csv;
  csv.set_column("x", {"1", "2"});
  CHECK_THROWS_AS(Dataset("bad", Taxonomy({Pathology::canonical("Edema")}), LabelMatrix(3, 1),
                          csv),
                  DomainError);
  CHECK_THROWS_AS(Dataset("bad", Taxonomy({Pathology::canonical("Edema")}), LabelMatrix(2, 2),
                          csv),
                  DomainError);
}

TEST_CASE("attach_masks toggles per-sample masks and needs a source") {
  MemorySpec spec;
  spec.pathologies = {"Pneumonia", "Mass"};
  spec.label_rows = {"10", "01", "11", "00", "1N"};
  spec.image_side = 8;
  spec.masks[0] = {{"Pneumonia", BoxGeometry{0, 0, 3, 3}}};
  spec.masks[2] = {{"Mass", BoxGeometry{1, 1, 2, 2}},
                   {"Mass", BoxGeometry{4, 4, 2, 2}},
                   {"Ghost Finding", BoxGeometry{0, 0, 1, 1}}};
  const Dataset ds = make_memory_dataset(spec);

  const Dataset with_masks = attach_masks(ds, true);
  const Sample s0 = with_masks.sample(0);
  REQUIRE(s0.pathology_masks.count(0) == 1);
  CHECK(s0.pathology_masks.at(0).at(0, 0) == 1.0);

  // Two Mass boxes OR-merge into one mask keyed by the pathology's index;
  // the unknown "Ghost Finding" mask is dropped.
  const Sample s2 = with_masks.sample(2);
  REQUIRE(s2.pathology_masks.size() == 1);
  REQUIRE(s2.pathology_masks.count(1) == 1);
  CHECK(s2.pathology_masks.at(1).at(1, 1) == 1.0);
  CHECK(s2.pathology_masks.at(1).at(4, 4) == 1.0);

  // Unmasked samples carry an empty map.
  CHECK(with_masks.sample(1).pathology_masks.empty());

  // Disabled again: no masks.
  const Dataset disabled = attach_masks(with_masks, false);
  CHECK(disabled.sample(0).pathology_masks.empty());

  // No mask source anywhere: enabling fails.
  MemorySpec bare;
  bare.pathologies = {"Edema"};
  bare.label_rows = {"1"};
  CHECK_THROWS_AS(attach_masks(make_memory_dataset(bare), true), NoMaskSource);
}

TEST_CASE("masks follow crop/resize/augment and stay in [0,1]") {
  MemorySpec spec;
  spec.pathologies = {"Pneumonia"};
  spec.label_rows = {"1"};
  spec.image_side = 16;
  spec.masks[0] = {{"Pneumonia", BoxGeometry{4, 4, 6, 6}}};
  const Dataset ds = attach_masks(make_memory_dataset(spec), true);

  TransformChain chain;
  chain.crop().resize(24).augment(AugmentationSpec{}, 3);
  const Sample s = ds.sample(0, &chain, 3);
  REQUIRE(s.pathology_masks.count(0) == 1);
  const Image& mask = s.pathology_masks.at(0);
  CHECK(mask.same_shape(s.img));
  CHECK(mask.min_value() >= 0.0);
  CHECK(mask.max_value() <= 1.0);
  CHECK(mask.max_value() > 0.5);  // the box survived the pipeline
}

TEST_CASE("mask lookup keys track the pathology list after relabel") {
  MemorySpec spec;
  spec.pathologies = {"Pneumonia", "Mass"};
  spec.label_rows = {"11"};
  spec.image_side = 8;
  spec.masks[0] = {{"Mass", BoxGeometry{0, 0, 2, 2}}};
  const Dataset ds = attach_masks(make_memory_dataset(spec), true);
  CHECK(ds.sample(0).pathology_masks.count(1) == 1);

  // After reordering, Mass sits at index 0 and the mask key follows.
  const Dataset reordered = relabel(
      ds, Taxonomy({Pathology::canonical("Mass"), Pathology::canonical("Pneumonia")}));
  CHECK(reordered.sample(0).pathology_masks.count(0) == 1);

  // Dropping Mass entirely drops its mask.
  const Dataset dropped = relabel(ds, Taxonomy({Pathology::canonical("Pneumonia")}));
  CHECK(dropped.sample(0).pathology_masks.empty());
}

TEST_CASE("manifest table lists provenance, standardized columns, then labels") {
  const Dataset ds = make_memory_dataset(small_spec());
  const Table manifest = manifest_table(ds);
  const auto& columns = manifest.columns();
  REQUIRE(columns.size() >= 4);
  CHECK(columns[0] == kSourceNameColumn);
  CHECK(columns[1] == kSourceIndexColumn);
  CHECK(manifest.cell(2, kSourceIndexColumn) == "2");
  CHECK(manifest.cell(1, "Atelectasis") == "NaN");
  CHECK(manifest.cell(0, "Atelectasis") == "1");
  CHECK(manifest.cell(0, "Effusion") == "0");
}

}  // namespace
}  // namespace cxrharmon
