// Copyright 2026 The HDR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "hdr/core/io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include "hdr/core/error.hpp"

namespace hdr::io {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

std::uint8_t to_byte(float v) { return static_cast<std::uint8_t>(std::lround(v * 255.0f)); }

}  // namespace

void write_png(const std::filesystem::path& path, const ImageGrid& img) {
  if (img.channels() != 1 && img.channels() != 3) {
    throw InvalidInput("write_png: only 1- or 3-channel grids are supported");
  }
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("cannot open " + path.string() + " for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng: allocation failed");
  }
  const int h = img.height(), w = img.width(), c = img.channels();
  std::vector<std::uint8_t> row(static_cast<std::size_t>(w) * c);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng: failed writing " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, w, h, 8, c == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int ch = 0; ch < c; ++ch) row[x * c + ch] = to_byte(img.at(ch, y, x));
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

ImageGrid read_png(const std::filesystem::path& path, int channels) {
  if (channels != 1 && channels != 3) throw InvalidInput("read_png: channels must be 1 or 3");
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw IoError("cannot open " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng: allocation failed");
  }
  std::vector<std::uint8_t> pixels;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng: failed reading " + path.string());
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_packing(png);
  png_set_expand(png);
  const int color = png_get_color_type(png, info);
  if (channels == 3 && (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)) {
    png_set_gray_to_rgb(png);
  }
  if (channels == 1 && (color & PNG_COLOR_MASK_COLOR)) {
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  }
  png_read_update_info(png, info);
  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  const int got = png_get_channels(png, info);
  if (got != channels) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("read_png: unexpected channel layout in " + path.string());
  }
  pixels.resize(static_cast<std::size_t>(w) * h * channels);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = pixels.data() + static_cast<std::size_t>(y) * w * channels;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<float> values(pixels.size());
  for (int ch = 0; ch < channels; ++ch) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        values[(static_cast<std::size_t>(ch) * h + y) * w + x] =
            pixels[(static_cast<std::size_t>(y) * w + x) * channels + ch] / 255.0f;
      }
    }
  }
  return ImageGrid(h, w, channels, std::move(values));
}

ImageGrid quantize8(const ImageGrid& img) {
  std::vector<float> values(img.values().begin(), img.values().end());
  for (float& v : values) v = to_byte(v) / 255.0f;
  return ImageGrid(img.height(), img.width(), img.channels(), std::move(values));
}

nlohmann::json to_json(const CropTransform& t) {
  return {{"center", {t.center_x, t.center_y}},
          {"side_len", t.side_len},
          {"out_size", t.out_size},
          {"flipped", t.flipped}};
}

CropTransform crop_from_json(const nlohmann::json& j) {
  CropTransform t;
  t.center_x = j.at("center").at(0).get<double>();
  t.center_y = j.at("center").at(1).get<double>();
  t.side_len = j.at("side_len").get<double>();
  t.out_size = j.at("out_size").get<int>();
  t.flipped = j.at("flipped").get<bool>();
  return t;
}

nlohmann::json joints_to_json(const JointSet& joints) {
  nlohmann::json j2 = nlohmann::json::array(), j3 = nlohmann::json::array();
  nlohmann::json valid = nlohmann::json::array();
  for (int i = 0; i < kNumJoints; ++i) {
    j2.push_back({joints.joints_2d[i].x(), joints.joints_2d[i].y()});
    j3.push_back({joints.joints_3d[i].x(), joints.joints_3d[i].y(), joints.joints_3d[i].z()});
    valid.push_back(joints.valid[i]);
  }
  return {{"joints_2d", j2}, {"joints_3d", j3}, {"valid", valid}, {"root_index", joints.root_index}};
}

JointSet joints_from_json(const nlohmann::json& j) {
  JointSet out;
  for (int i = 0; i < kNumJoints; ++i) {
    const auto& p2 = j.at("joints_2d").at(i);
    const auto& p3 = j.at("joints_3d").at(i);
    out.joints_2d[i] = {p2.at(0).get<double>(), p2.at(1).get<double>()};
    out.joints_3d[i] = {p3.at(0).get<double>(), p3.at(1).get<double>(), p3.at(2).get<double>()};
    out.valid[i] = j.at("valid").at(i).get<bool>();
  }
  out.root_index = j.value("root_index", 0);
  return out;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
  if (!os) throw IoError("failed writing " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace hdr::io
