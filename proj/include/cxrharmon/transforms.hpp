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

#ifndef CXRHARMON_TRANSFORMS_HPP_
#define CXRHARMON_TRANSFORMS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cxrharmon/image.hpp"

namespace cxrharmon {

// Bounds for the random affine augmentation. Draws are uniform within each
// bound. Out-of-frame pixels fill with image_fill for images and mask_fill
// for masks.
struct AugmentationSpec {
  double max_rotation_deg = 45.0;
  double max_translation_frac = 0.15;
  double scale_min = 0.9;
  double scale_max = 1.1;
  double image_fill = -1024.0;
  double mask_fill = 0.0;
};

// One concrete affine draw: rotate theta about the image center, scale, then
// translate by (tx, ty) pixels.
struct AugmentParams {
  double theta_deg = 0.0;
  double tx = 0.0;
  double ty = 0.0;
  double scale = 1.0;
};

// Crops the centered square window of side min(H, W); offsets floor for odd
// remainders. Pixels are copied unmodified.
Image center_crop(const Image& img);

// Bilinear resize to res x res using half-pixel-center mapping
// src = (i + 0.5) * S / RES - 0.5 with source coordinates clamped to
// [0, S - 1]. Constant images stay constant; RES == S is an exact identity.
Image resize_bilinear(const Image& img, size_t res);

// The deterministic parameter draw behind augment(): xoshiro256++ seeded with
// `seed`, draws in the order theta, tx, ty, scale. `side` converts the
// translation fraction into pixels.
AugmentParams draw_augment_params(const AugmentationSpec& spec, uint64_t seed, size_t side);

// Applies one affine warp (inverse-mapped, bilinear, constant fill).
Image warp_affine(const Image& img, const AugmentParams& params, double fill);

// Seeded random augmentation. The same seed yields bit-identical output, and
// the identical affine parameters are applied to every mask (mask fill 0) so
// images and masks stay in lockstep. The image must be square; each mask must
// match its shape (ShapeMismatch otherwise). Mask values are clamped back
// into [0, 1] after interpolation.
std::pair<Image, std::map<size_t, Image>> augment(const Image& img,
                                                  const std::map<size_t, Image>& masks,
                                                  const AugmentationSpec& spec, uint64_t seed);

struct CenterCropStep {};
struct ResizeStep {
  size_t res = 0;
};
struct AugmentStep {
  AugmentationSpec spec;
  std::optional<uint64_t> seed;
};

using TransformStep = std::variant<CenterCropStep, ResizeStep, AugmentStep>;

// Ordered preprocessing chain: any number of crop/resize steps, at most one
// augment. Expressible as a CLI string, e.g. "crop,resize:224,augment:seed=7".
class TransformChain {
 public:
  TransformChain() = default;

  TransformChain& crop();
  TransformChain& resize(size_t res);                                     // res >= 1
  TransformChain& augment(AugmentationSpec spec = {},
                          std::optional<uint64_t> seed = std::nullopt);   // at most one

  const std::vector<TransformStep>& steps() const { return steps_; }
  bool has_augment() const;

  // Applies the chain to an image and (optionally) its masks. seed_override
  // takes precedence over the augment step's own seed; with neither, seed 0.
  Image apply(Image img, std::map<size_t, Image>* masks,
              std::optional<uint64_t> seed_override = std::nullopt) const;

  // Parses "crop,resize:224,augment:seed=7". Throws FormatError on anything
  // unrecognized.
  static TransformChain parse(std::string_view text);
  std::string to_string() const;

 private:
  std::vector<TransformStep> steps_;
};

}  // namespace cxrharmon

#endif  // CXRHARMON_TRANSFORMS_HPP_
