// Copyright 2026 The frcopt Authors
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

#include "frc/io.hpp"

#include "frc/error.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

namespace frc::app {

namespace fs = std::filesystem;

namespace {

constexpr const char* kFormat = "frc-checkpoint";

json network_json(const nn::NetworkConfig& n) {
  return {{"num_frequencies", n.num_frequencies},
          {"l_min", n.l_min},
          {"l_max", n.l_max},
          {"common_widths", n.common_widths},
          {"branch_widths", n.branch_widths},
          {"head", n.head == nn::HeadMode::MultiMaterial ? "multi_material" : "standard"},
          {"num_densities", n.num_densities},
          {"rho_f_lower", n.rho_f_lower},
          {"rho_f_upper", n.rho_f_upper},
          {"fixed_rho_m", n.fixed_rho_m ? json(*n.fixed_rho_m) : json(nullptr)}};
}

nn::NetworkConfig network_from_json(const json& j) {
  nn::NetworkConfig n;
  n.num_frequencies = j.at("num_frequencies").get<int>();
  n.l_min = j.at("l_min").get<double>();
  n.l_max = j.at("l_max").get<double>();
  n.common_widths = j.at("common_widths").get<std::vector<int>>();
  n.branch_widths = j.at("branch_widths").get<std::vector<int>>();
  const std::string head = j.at("head").get<std::string>();
  if (head != "standard" && head != "multi_material") throw IoError("checkpoint: unknown head '" + head + "'");
  n.head = head == "multi_material" ? nn::HeadMode::MultiMaterial : nn::HeadMode::Standard;
  n.num_densities = j.at("num_densities").get<int>();
  n.rho_f_lower = j.at("rho_f_lower").get<double>();
  n.rho_f_upper = j.at("rho_f_upper").get<double>();
  if (!j.at("fixed_rho_m").is_null()) n.fixed_rho_m = j.at("fixed_rho_m").get<double>();
  return n;
}

std::vector<double> to_vector(const Eigen::MatrixXd& m) {
  return std::vector<double>(m.data(), m.data() + m.size());
}

}  // namespace

json checkpoint_json(const RunConfig& config, const nn::NeuralField& field) {
  json layers = json::array();
  for (const auto& l : field.weights().layers) {
    layers.push_back({{"name", l.name},
                      {"fan_in", l.weight.rows()},
                      {"fan_out", l.weight.cols()},
                      {"weight", to_vector(l.weight)},
                      {"bias", to_vector(l.bias)}});
  }
  const Eigen::MatrixXd& F = field.embedding().frequencies;
  json emb = json::array();
  for (Eigen::Index r = 0; r < F.rows(); ++r) {
    emb.push_back(std::vector<double>(F.cols()));
    for (Eigen::Index c = 0; c < F.cols(); ++c) emb[r][c] = F(r, c);
  }
  return {{"format", kFormat},
          {"version", kCheckpointVersion},
          {"config", to_json(config)},
          {"network", network_json(field.config())},
          {"embedding", emb},
          {"layers", layers}};
}

Checkpoint checkpoint_from_json(const json& doc) {
  if (!doc.is_object() || doc.value("format", "") != kFormat) {
    throw IoError("not an frc checkpoint");
  }
  const int version = doc.value("version", -1);
  if (version != kCheckpointVersion) {
    throw VersionError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                       std::to_string(kCheckpointVersion) + ")");
  }
  try {
    Checkpoint cp;
    cp.config = parse_config(doc.at("config"));
    const nn::NetworkConfig net = network_from_json(doc.at("network"));
    nn::FourierEmbedding emb;
    const json& e = doc.at("embedding");
    if (!e.is_array() || e.size() != 2) throw IoError("checkpoint: embedding must have two rows");
    emb.frequencies.resize(2, net.num_frequencies);
    for (int r = 0; r < 2; ++r) {
      const auto row = e[r].get<std::vector<double>>();
      if (static_cast<int>(row.size()) != net.num_frequencies) throw IoError("checkpoint: embedding size mismatch");
      for (int c = 0; c < net.num_frequencies; ++c) emb.frequencies(r, c) = row[c];
    }
    nn::MlpWeights w;
    for (const json& lj : doc.at("layers")) {
      nn::DenseLayer l;
      l.name = lj.at("name").get<std::string>();
      const int fan_in = lj.at("fan_in").get<int>();
      const int fan_out = lj.at("fan_out").get<int>();
      const auto wv = lj.at("weight").get<std::vector<double>>();
      const auto bv = lj.at("bias").get<std::vector<double>>();
      if (static_cast<int>(wv.size()) != fan_in * fan_out || static_cast<int>(bv.size()) != fan_out) {
        throw IoError("checkpoint: layer '" + l.name + "' has inconsistent sizes");
      }
      l.weight = Eigen::Map<const Eigen::MatrixXd>(wv.data(), fan_in, fan_out);
      l.bias = Eigen::Map<const Eigen::RowVectorXd>(bv.data(), fan_out);
      w.layers.push_back(std::move(l));
    }
    cp.field = nn::NeuralField(net, std::move(emb), std::move(w));
    return cp;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed checkpoint: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const fs::path& path, const RunConfig& config, const nn::NeuralField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << checkpoint_json(config, field).dump() << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Checkpoint load_checkpoint(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path.string() + "'");
  const json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw IoError("checkpoint '" + path.string() + "' is not valid JSON");
  return checkpoint_from_json(doc);
}

FieldRaster sample_field(const nn::NeuralField& field, const fea::StructuredGrid& grid, int res) {
  if (res < 1) throw std::invalid_argument("field resolution must be >= 1");
  FieldRaster r;
  r.width = grid.nelx() * res;
  r.height = grid.nely() * res;
  const double d = grid.h() / res;
  r.points.resize(static_cast<Eigen::Index>(r.width) * r.height, 2);
  for (int j = 0; j < r.height; ++j) {
    for (int i = 0; i < r.width; ++i) {
      const Eigen::Index k = static_cast<Eigen::Index>(j) * r.width + i;
      r.points(k, 0) = (i + 0.5) * d;
      r.points(k, 1) = (j + 0.5) * d;
    }
  }
  r.samples = field.evaluate(r.points);
  return r;
}

void write_png(const fs::path& path, const std::vector<double>& values, int width, int height) {
  if (width < 1 || height < 1 || values.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("write_png: size mismatch");
  }
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.string().c_str(), "wb"), &std::fclose);
  if (!fp) throw IoError("cannot write '" + path.string() + "'");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng initialization failed");
  }
  std::vector<png_byte> row(width);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng failed writing '" + path.string() + "'");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  // PNG rows run top to bottom; sample rows run bottom to top.
  for (int j = height - 1; j >= 0; --j) {
    for (int i = 0; i < width; ++i) {
      const double v = std::clamp(values[static_cast<std::size_t>(j) * width + i], 0.0, 1.0);
      row[i] = static_cast<png_byte>(std::lround(255.0 * (1.0 - v)));
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void write_field_csv(const fs::path& path, const FieldRaster& raster) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "x,y,rho_m,rho_f,theta\n";
  char buf[160];
  for (std::size_t k = 0; k < raster.samples.size(); ++k) {
    const auto& s = raster.samples[k];
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.9g,%.9g,%.9g\n", raster.points(k, 0), raster.points(k, 1),
                  s.rho_m, s.rho_f, s.theta);
    out << buf;
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

ArtifactSet::ArtifactSet(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create output directory '" + dir_.string() + "': " + ec.message());
}

fs::path ArtifactSet::stage(const std::string& name) {
  fs::path final_path = dir_ / name;
  fs::path partial = final_path;
  partial += ".partial";
  staged_.push_back(partial);
  final_.push_back(final_path);
  return partial;
}

void ArtifactSet::commit() {
  for (std::size_t i = 0; i < staged_.size(); ++i) {
    std::error_code ec;
    fs::rename(staged_[i], final_[i], ec);
    if (ec) throw IoError("cannot finalize '" + final_[i].string() + "': " + ec.message());
  }
  staged_.clear();
}

}  // namespace frc::app
