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

#include "frc/fiber_extract.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace frc::fiber {

namespace {

constexpr double kBudgetTol = 1e-12;

// Radical inverse in base 2.
double van_der_corput(unsigned k) {
  double x = 0.0;
  double f = 0.5;
  while (k) {
    if (k & 1u) x += f;
    k >>= 1u;
    f *= 0.5;
  }
  return x;
}

// Liang-Barsky clip of a + t (b - a), t in [0, 1], to the domain.
bool clip_to_domain(const fea::StructuredGrid& grid, const Point& a, const Point& b, double& t0,
                    double& t1) {
  t0 = 0.0;
  t1 = 1.0;
  const Point d = b - a;
  const double p[4] = {-d.x(), d.x(), -d.y(), d.y()};
  const double q[4] = {a.x(), grid.width() - a.x(), a.y(), grid.height() - a.y()};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
  }
  return t0 < t1;
}

}  // namespace

FieldQuery network_query(const nn::NeuralField& field) {
  return [&field](const Point& p) {
    const nn::FieldSample s = field.evaluate(p.x(), p.y());
    return FieldPoint{s.densities.empty() ? s.rho_m : s.densities.front(), s.rho_f, s.theta};
  };
}

void ExtractionParams::validate() const {
  if (!(thickness > 0.0)) throw std::invalid_argument("extraction.thickness must be positive");
  if (!(step > 0.0)) throw std::invalid_argument("extraction.step must be positive");
  if (!(void_threshold > 0.0 && void_threshold < 1.0)) {
    throw std::invalid_argument("extraction.void_threshold must lie in (0, 1)");
  }
  if (max_points < 0) throw std::invalid_argument("extraction.max_points must be >= 0");
  if (!(min_seed_deficit >= 0.0)) throw std::invalid_argument("extraction.min_seed_deficit must be >= 0");
}

int ExtractionParams::point_cap(const fea::StructuredGrid& grid) const {
  return max_points > 0 ? max_points : 10 * (grid.nelx() + grid.nely());
}

double FiberTrack::length() const {
  double l = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) l += (points[i] - points[i - 1]).norm();
  return l;
}

bool ExtractionState::open(int e, double void_threshold) const {
  return rho_m[e] >= void_threshold && achieved[e] < target[e] - kBudgetTol;
}

ExtractionState init_state(const FieldQuery& field, const fea::StructuredGrid& grid) {
  const int ne = grid.num_elements();
  ExtractionState s;
  s.target.resize(ne);
  s.rho_m.resize(ne);
  s.achieved = Eigen::VectorXd::Zero(ne);
  s.exhausted.assign(ne, false);
  for (int e = 0; e < ne; ++e) {
    const FieldPoint f = field(grid.element_center(e));
    s.target[e] = f.rho_f;
    s.rho_m[e] = f.rho_m;
  }
  return s;
}

std::vector<std::pair<int, double>> clip_segment(const fea::StructuredGrid& grid, const Point& a,
                                                 const Point& b) {
  std::vector<std::pair<int, double>> out;
  double t0;
  double t1;
  if (!clip_to_domain(grid, a, b, t0, t1)) return out;
  const Point d = b - a;
  const double len = d.norm();
  const double h = grid.h();
  std::vector<double> ts{t0, t1};
  if (d.x() != 0.0) {
    const double lo = std::min(a.x() + t0 * d.x(), a.x() + t1 * d.x());
    const double hi = std::max(a.x() + t0 * d.x(), a.x() + t1 * d.x());
    for (int i = static_cast<int>(std::ceil(lo / h)); i * h <= hi; ++i) {
      const double t = (i * h - a.x()) / d.x();
      if (t > t0 && t < t1) ts.push_back(t);
    }
  }
  if (d.y() != 0.0) {
    const double lo = std::min(a.y() + t0 * d.y(), a.y() + t1 * d.y());
    const double hi = std::max(a.y() + t0 * d.y(), a.y() + t1 * d.y());
    for (int j = static_cast<int>(std::ceil(lo / h)); j * h <= hi; ++j) {
      const double t = (j * h - a.y()) / d.y();
      if (t > t0 && t < t1) ts.push_back(t);
    }
  }
  std::sort(ts.begin(), ts.end());
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const double piece = (ts[k + 1] - ts[k]) * len;
    if (piece <= 1e-14 * std::max(1.0, len)) continue;
    const Point mid = a + 0.5 * (ts[k] + ts[k + 1]) * d;
    const auto e = grid.element_containing(mid);
    if (!e) continue;
    if (!out.empty() && out.back().first == *e) {
      out.back().second += piece;
    } else {
      out.emplace_back(*e, piece);
    }
  }
  return out;
}

double density_increment(const fea::StructuredGrid& grid, const Point& a, const Point& b, int e,
                         double thickness) {
  double len = 0.0;
  for (const auto& [el, l] : clip_segment(grid, a, b)) {
    if (el == e) len += l;
  }
  return thickness * len / grid.element_area();
}

std::optional<Point> trace_step(const Point& point, const Eigen::Vector2d& heading,
                                const FieldQuery& field, const fea::StructuredGrid& grid,
                                const ExtractionState& state, const ExtractionParams& params) {
  const double theta = field(point).theta;
  Eigen::Vector2d dir(std::cos(theta), std::sin(theta));
  if (dir.dot(heading) < 0.0) dir = -dir;
  const Point next = point + params.step * dir;
  if (!grid.contains(next)) return std::nullopt;
  const auto end = grid.element_containing(next);
  if (!end || !state.open(*end, params.void_threshold)) return std::nullopt;
  for (const auto& [e, len] : clip_segment(grid, point, next)) {
    if (!state.open(e, params.void_threshold)) return std::nullopt;
  }
  return next;
}

namespace {

void commit(const fea::StructuredGrid& grid, const Point& a, const Point& b, double thickness,
            ExtractionState& state) {
  for (const auto& [e, len] : clip_segment(grid, a, b)) {
    state.achieved[e] += thickness * len / grid.element_area();
  }
}

// Marches from `seed` along `heading`; returns the new points (seed excluded).
std::vector<Point> march(const Point& seed, Eigen::Vector2d heading, int budget,
                         const FieldQuery& field, const fea::StructuredGrid& grid,
                         ExtractionState& state, const ExtractionParams& params) {
  std::vector<Point> pts;
  Point cur = seed;
  while (static_cast<int>(pts.size()) < budget) {
    const auto next = trace_step(cur, heading, field, grid, state, params);
    if (!next) break;
    commit(grid, cur, *next, params.thickness, state);
    heading = (*next - cur).normalized();
    pts.push_back(*next);
    cur = *next;
  }
  return pts;
}

}  // namespace

ExtractionResult extract_fibers(const FieldQuery& field, const fea::StructuredGrid& grid,
                                const ExtractionParams& params) {
  params.validate();
  ExtractionResult res;
  ExtractionState& state = res.state;
  state = init_state(field, grid);
  const int ne = grid.num_elements();
  const double h = grid.h();
  const double min_deficit = params.min_seed_deficit * params.thickness * h / grid.element_area();
  const int cap = params.point_cap(grid);
  std::vector<unsigned> seeds(ne, 0);

  int scan = 0;
  while (true) {
    // Elements before `scan` can only lose budget, so the scan never rewinds.
    while (scan < ne && !(state.open(scan, params.void_threshold) && !state.exhausted[scan] &&
                          state.target[scan] - state.achieved[scan] >= min_deficit)) {
      ++scan;
    }
    if (scan == ne) break;
    const int e = scan;

    const Point c = grid.element_center(e);
    const double theta_c = field(c).theta;
    const Eigen::Vector2d normal(-std::sin(theta_c), std::cos(theta_c));
    double frac = van_der_corput(seeds[e]++) + 0.5;
    frac -= std::floor(frac);
    Point seed = c + (frac - 0.5) * 0.9 * h * normal;
    const double eps = 1e-9 * h;
    seed.x() = std::clamp(seed.x(), c.x() - 0.5 * h + eps, c.x() + 0.5 * h - eps);
    seed.y() = std::clamp(seed.y(), c.y() - 0.5 * h + eps, c.y() + 0.5 * h - eps);

    const double theta_s = field(seed).theta;
    const Eigen::Vector2d h0(std::cos(theta_s), std::sin(theta_s));
    std::vector<Point> fwd = march(seed, h0, cap - 1, field, grid, state, params);
    const int left = cap - 1 - static_cast<int>(fwd.size());
    std::vector<Point> back = march(seed, -h0, left, field, grid, state, params);
    if (fwd.empty() && back.empty()) {
      state.exhausted[e] = true;
      continue;
    }
    FiberTrack track;
    track.thickness = params.thickness;
    track.points.assign(back.rbegin(), back.rend());
    track.points.push_back(seed);
    track.points.insert(track.points.end(), fwd.begin(), fwd.end());
    res.tracks.push_back(std::move(track));
  }
  return res;
}

void write_polyline(std::ostream& out, const std::vector<FiberTrack>& tracks) {
  char buf[96];
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    if (i > 0) out << '\n';
    std::snprintf(buf, sizeof buf, "track %zu thickness %.6f\n", i, tracks[i].thickness);
    out << buf;
    for (const Point& p : tracks[i].points) {
      std::snprintf(buf, sizeof buf, "%.6f %.6f\n", p.x(), p.y());
      out << buf;
    }
  }
}

void write_svg(std::ostream& out, const std::vector<FiberTrack>& tracks, double width,
               double height) {
  char buf[96];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << ' ' << height
      << "\" width=\"" << 10 * width << "\" height=\"" << 10 * height << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\" stroke=\"gray\" stroke-width=\"0.05\"/>\n";
  for (const auto& t : tracks) {
    out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"" << t.thickness << "\" points=\"";
    for (std::size_t i = 0; i < t.points.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.6f,%.6f", i ? " " : "", t.points[i].x(),
                    height - t.points[i].y());
      out << buf;
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace frc::fiber
