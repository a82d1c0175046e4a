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

#include "cxrharmon/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>

#include "cxrharmon/rng.hpp"

namespace cxrharmon {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

// Bilinear sample at (x, y) in pixel coordinates; neighbors outside the grid
// contribute `fill`.
double sample_bilinear_fill(const Image& img, double x, double y, double fill) {
  const double x0f = std::floor(x);
  const double y0f = std::floor(y);
  const long x0 = static_cast<long>(x0f);
  const long y0 = static_cast<long>(y0f);
  const double dx = x - x0f;
  const double dy = y - y0f;

  auto fetch = [&](long yy, long xx) -> double {
    if (yy < 0 || xx < 0 || yy >= static_cast<long>(img.height()) ||
        xx >= static_cast<long>(img.width())) {
      return fill;
    }
    return img.at(static_cast<size_t>(yy), static_cast<size_t>(xx));
  };

  const double v00 = fetch(y0, x0);
  const double v01 = fetch(y0, x0 + 1);
  const double v10 = fetch(y0 + 1, x0);
  const double v11 = fetch(y0 + 1, x0 + 1);
  const double top = v00 * (1.0 - dx) + v01 * dx;
  const double bottom = v10 * (1.0 - dx) + v11 * dx;
  return top * (1.0 - dy) + bottom * dy;
}

// Bilinear sample with source coordinates clamped to the grid (no fill);
// used by resize so edges replicate.
double sample_bilinear_clamped(const Image& img, double x, double y) {
  const size_t w = img.width();
  const size_t h = img.height();
  x = clamp(x, 0.0, static_cast<double>(w - 1));
  y = clamp(y, 0.0, static_cast<double>(h - 1));
  const size_t x0 = static_cast<size_t>(std::floor(x));
  const size_t y0 = static_cast<size_t>(std::floor(y));
  const size_t x1 = std::min(x0 + 1, w - 1);
  const size_t y1 = std::min(y0 + 1, h - 1);
  const double dx = x - static_cast<double>(x0);
  const double dy = y - static_cast<double>(y0);
  const double top = img.at(y0, x0) * (1.0 - dx) + img.at(y0, x1) * dx;
  const double bottom = img.at(y1, x0) * (1.0 - dx) + img.at(y1, x1) * dx;
  return top * (1.0 - dy) + bottom * dy;
}

size_t parse_size(std::string_view text, std::string_view what) {
  size_t value = 0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw FormatError("bad " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Image center_crop(const Image& img) {
  if (img.height() == 0 || img.width() == 0) {
    throw DomainError("center_crop requires a non-empty image");
  }
  const size_t side = std::min(img.height(), img.width());
  const size_t row0 = (img.height() - side) / 2;
  const size_t col0 = (img.width() - side) / 2;
  Image out(side, side);
  for (size_t r = 0; r < side; ++r) {
    for (size_t c = 0; c < side; ++c) {
      out.at(r, c) = img.at(row0 + r, col0 + c);
    }
  }
  return out;
}

Image resize_bilinear(const Image& img, size_t res) {
  if (res == 0) throw DomainError("resize target must be >= 1");
  if (img.height() == 0 || img.width() == 0) {
    throw DomainError("resize requires a non-empty image");
  }
  if (res == img.height() && res == img.width()) return img;

  Image out(res, res);
  const double sy = static_cast<double>(img.height()) / static_cast<double>(res);
  const double sx = static_cast<double>(img.width()) / static_cast<double>(res);
  for (size_t r = 0; r < res; ++r) {
    const double src_y = (static_cast<double>(r) + 0.5) * sy - 0.5;
    for (size_t c = 0; c < res; ++c) {
      const double src_x = (static_cast<double>(c) + 0.5) * sx - 0.5;
      out.at(r, c) = sample_bilinear_clamped(img, src_x, src_y);
    }
  }
  return out;
}

AugmentParams draw_augment_params(const AugmentationSpec& spec, uint64_t seed, size_t side) {
  Xoshiro256pp rng(seed);
  AugmentParams p;
  p.theta_deg = rng.uniform(-spec.max_rotation_deg, spec.max_rotation_deg);
  const double max_t = spec.max_translation_frac * static_cast<double>(side);
  p.tx = rng.uniform(-max_t, max_t);
  p.ty = rng.uniform(-max_t, max_t);
  p.scale = rng.uniform(spec.scale_min, spec.scale_max);
  return p;
}

Image warp_affine(const Image& img, const AugmentParams& params, double fill) {
  const double theta = params.theta_deg * kPi / 180.0;
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const double cx = (static_cast<double>(img.width()) - 1.0) / 2.0;
  const double cy = (static_cast<double>(img.height()) - 1.0) / 2.0;

  Image out(img.height(), img.width());
  for (size_t r = 0; r < img.height(); ++r) {
    for (size_t c = 0; c < img.width(); ++c) {
      // Inverse map: undo translation, rotation, then scale about the center.
      const double qx = static_cast<double>(c) - cx - params.tx;
      const double qy = static_cast<double>(r) - cy - params.ty;
      const double rx = (cos_t * qx + sin_t * qy) / params.scale;
      const double ry = (-sin_t * qx + cos_t * qy) / params.scale;
      out.at(r, c) = sample_bilinear_fill(img, rx + cx, ry + cy, fill);
    }
  }
  return out;
}

std::pair<Image, std::map<size_t, Image>> augment(const Image& img,
                                                  const std::map<size_t, Image>& masks,
                                                  const AugmentationSpec& spec, uint64_t seed) {
  if (img.height() != img.width()) {
    throw DomainError("augment requires a square image (crop first)");
  }
  for (const auto& [key, mask] : masks) {
    if (!mask.same_shape(img)) {
      throw ShapeMismatch("mask for pathology index " + std::to_string(key) +
                          " does not match the image shape");
    }
  }

  const AugmentParams params = draw_augment_params(spec, seed, img.height());
  Image warped = warp_affine(img, params, spec.image_fill);
  std::map<size_t, Image> warped_masks;
  for (const auto& [key, mask] : masks) {
    Image m = warp_affine(mask, params, spec.mask_fill);
    for (double& v : m.data()) v = clamp(v, 0.0, 1.0);
    warped_masks.emplace(key, std::move(m));
  }
  return {std::move(warped), std::move(warped_masks)};
}

TransformChain& TransformChain::crop() {
  steps_.emplace_back(CenterCropStep{});
  return *this;
}

TransformChain& TransformChain::resize(size_t res) {
  if (res == 0) throw DomainError("resize target must be >= 1");
  steps_.emplace_back(ResizeStep{res});
  return *this;
}

TransformChain& TransformChain::augment(AugmentationSpec spec, std::optional<uint64_t> seed) {
  if (has_augment()) throw DomainError("transform chain allows at most one augment step");
  steps_.emplace_back(AugmentStep{spec, seed});
  return *this;
}

bool TransformChain::has_augment() const {
  for (const auto& step : steps_) {
    if (std::holds_alternative<AugmentStep>(step)) return true;
  }
  return false;
}

Image TransformChain::apply(Image img, std::map<size_t, Image>* masks,
                            std::optional<uint64_t> seed_override) const {
  for (const auto& step : steps_) {
    if (std::holds_alternative<CenterCropStep>(step)) {
      img = center_crop(img);
      if (masks != nullptr) {
        for (auto& [key, mask] : *masks) mask = center_crop(mask);
      }
    } else if (const auto* rs = std::get_if<ResizeStep>(&step)) {
      img = resize_bilinear(img, rs->res);
      if (masks != nullptr) {
        for (auto& [key, mask] : *masks) mask = resize_bilinear(mask, rs->res);
      }
    } else {
      const auto& as = std::get<AugmentStep>(step);
      const uint64_t seed = seed_override.value_or(as.seed.value_or(0));
      auto [warped, warped_masks] =
          cxrharmon::augment(img, masks != nullptr ? *masks : std::map<size_t, Image>{}, as.spec, seed);
      img = std::move(warped);
      if (masks != nullptr) *masks = std::move(warped_masks);
    }
  }
  return img;
}

TransformChain TransformChain::parse(std::string_view text) {
  TransformChain chain;
  if (text.empty()) return chain;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view token = text.substr(pos, comma - pos);
    if (token.empty()) {
      throw FormatError("empty step in transform string");
    }
    const size_t colon = token.find(':');
    const std::string_view head = token.substr(0, colon);
    const std::string_view arg =
        colon == std::string_view::npos ? std::string_view{} : token.substr(colon + 1);

    if (head == "crop") {
      if (!arg.empty()) throw FormatError("crop takes no argument");
      chain.crop();
    } else if (head == "resize") {
      if (arg.empty()) throw FormatError("resize needs a target, e.g. resize:224");
      const size_t res = parse_size(arg, "resize target");
      if (res == 0) throw FormatError("resize target must be >= 1");
      chain.resize(res);
    } else if (head == "augment") {
      std::optional<uint64_t> seed;
      if (!arg.empty()) {
        constexpr std::string_view kSeedPrefix = "seed=";
        if (arg.substr(0, kSeedPrefix.size()) != kSeedPrefix) {
          throw FormatError("augment argument must be seed=<n>");
        }
        seed = parse_size(arg.substr(kSeedPrefix.size()), "augment seed");
      }
      try {
        chain.augment(AugmentationSpec{}, seed);
      } catch (const DomainError& e) {
        throw FormatError(e.what());
      }
    } else {
      throw FormatError("unknown transform step: '" + std::string(head) + "'");
    }
    if (comma == text.size()) break;
    pos = comma + 1;
  }
  return chain;
}

std::string TransformChain::to_string() const {
  std::string out;
  for (const auto& step : steps_) {
    if (!out.empty()) out.push_back(',');
    if (std::holds_alternative<CenterCropStep>(step)) {
      out += "crop";
    } else if (const auto* rs = std::get_if<ResizeStep>(&step)) {
      out += "resize:" + std::to_string(rs->res);
    } else {
      const auto& as = std::get<AugmentStep>(step);
      out += "augment";
      if (as.seed.has_value()) out += ":seed=" + std::to_string(*as.seed);
    }
  }
  return out;
}

}  // namespace cxrharmon
