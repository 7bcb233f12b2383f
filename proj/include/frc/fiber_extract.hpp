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

#pragma once

// Continuous fiber tracks traced through a converged design field.
//
// Each element carries a fiber budget (target rho_f sampled at its center)
// and an achieved fraction that grows as fiber segments are committed. A
// track is seeded in the first non-void element (row-major scan) with
// budget left, then marched along theta in both directions until it would
// leave the domain, enter void, or enter an element whose budget is used.

#include "frc/mesh_fea.hpp"
#include "frc/neural_field.hpp"

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace frc::fiber {

using Point = Eigen::Vector2d;

struct FieldPoint {
  double rho_m = 0.0;
  double rho_f = 0.0;
  double theta = 0.0;
};

using FieldQuery = std::function<FieldPoint(const Point&)>;

// Queries a network; in multi-material mode rho_m is the fiber-bearing
// material density.
FieldQuery network_query(const nn::NeuralField& field);

struct ExtractionParams {
  double thickness = 0.1;
  double step = 0.5;
  double void_threshold = 0.5;
  // 0 selects 10 (nelx + nely).
  int max_points = 0;
  // Elements are seeded only while target - achieved is at least this
  // fraction of one full crossing, t h / v_e.
  double min_seed_deficit = 0.5;

  void validate() const;
  int point_cap(const fea::StructuredGrid& grid) const;
};

struct FiberTrack {
  std::vector<Point> points;
  double thickness = 0.0;

  double length() const;
};

struct ExtractionState {
  Eigen::VectorXd target;  // rho_f per element
  Eigen::VectorXd rho_m;
  Eigen::VectorXd achieved;
  // Elements that produced an empty track and are no longer seeded.
  std::vector<bool> exhausted;

  // Non-void with budget left.
  bool open(int e, double void_threshold) const;
};

ExtractionState init_state(const FieldQuery& field, const fea::StructuredGrid& grid);

// (element, clipped length) for every element the segment crosses, in
// order along the segment. Parts outside the domain are dropped.
std::vector<std::pair<int, double>> clip_segment(const fea::StructuredGrid& grid, const Point& a,
                                                 const Point& b);

// t * clipped length / v_e for the part of [a, b] inside element e.
double density_increment(const fea::StructuredGrid& grid, const Point& a, const Point& b, int e,
                         double thickness);

// One step of length delta along theta(point), oriented to agree with
// `heading`. Returns nothing when the step leaves the domain or any element
// it crosses is void or out of budget.
std::optional<Point> trace_step(const Point& point, const Eigen::Vector2d& heading,
                                const FieldQuery& field, const fea::StructuredGrid& grid,
                                const ExtractionState& state, const ExtractionParams& params);

struct ExtractionResult {
  std::vector<FiberTrack> tracks;
  ExtractionState state;
};

ExtractionResult extract_fibers(const FieldQuery& field, const fea::StructuredGrid& grid,
                                const ExtractionParams& params);

// Blocks of "track <id> thickness <t>" followed by "x y" lines, blank line
// between blocks.
void write_polyline(std::ostream& out, const std::vector<FiberTrack>& tracks);
// y is flipped so the domain origin is at the bottom-left of the image.
void write_svg(std::ostream& out, const std::vector<FiberTrack>& tracks, double width,
               double height);

}  // namespace frc::fiber
