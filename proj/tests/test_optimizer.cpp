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

#include "frc/optimizer.hpp"

#include "frc/error.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <limits>
#include <sstream>

using namespace frc;

namespace {

struct GradFixture {
  opt::LossModel model;
  nn::MlpWeights weights;
  double J0;

  GradFixture(const std::string& problem, std::uint64_t seed)
      : model(make_model(problem, seed)), weights(make_weights(model, seed)), J0(model.initial_objective(3.0)) {}

  static opt::LossModel make_model(const std::string& problem, std::uint64_t seed) {
    opt::Problem p = test::small_problem(problem, 8, 4);
    nn::NetworkConfig net;
    std::mt19937_64 rng(seed);
    auto emb = nn::init_embedding(net, p.grid.h(), rng);
    return opt::LossModel(p, net, emb);
  }

  static nn::MlpWeights make_weights(opt::LossModel& m, std::uint64_t seed) {
    std::mt19937_64 rng(seed + 1);
    nn::MlpWeights w = nn::init_weights(m.network(), rng);
    // Nonzero biases so every parameter path carries gradient.
    std::normal_distribution<double> n(0.0, 0.1);
    for (auto& l : w.layers)
      for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias[i] = n(rng);
    return w;
  }

  double loss_at(const Eigen::VectorXd& flat, const opt::LossTerms& terms) {
    nn::MlpWeights w = weights;
    w.assign(flat);
    return model.evaluate(w, 10.0, 3.0, J0, terms, false).loss.L;
  }

  // Worst relative error over `count` random components. Components whose
  // derivative is negligible against the largest one are compared against
  // that scale instead.
  double check(const opt::LossTerms& terms, int count, std::uint64_t seed) {
    const Eigen::VectorXd g = model.evaluate(weights, 10.0, 3.0, J0, terms, true).gradient;
    const Eigen::VectorXd w0 = weights.flatten();
    REQUIRE(g.size() == w0.size());
    const double scale = g.cwiseAbs().maxCoeff();
    REQUIRE(scale > 0.0);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, w0.size() - 1);
    double worst = 0.0;
    for (int k = 0; k < count; ++k) {
      const Eigen::Index i = pick(rng);
      const double step = 1e-6 * std::max(1.0, std::abs(w0[i]));
      Eigen::VectorXd wp = w0;
      Eigen::VectorXd wm = w0;
      wp[i] += step;
      wm[i] -= step;
      const double fd = (loss_at(wp, terms) - loss_at(wm, terms)) / (2.0 * step);
      const double err = std::abs(fd - g[i]) / std::max({std::abs(fd), std::abs(g[i]), 1e-3 * scale});
      worst = std::max(worst, err);
    }
    return worst;
  }
};

}  // namespace

TEST_CASE("gradient matches central differences for compliance") {
  GradFixture f("tip_cantilever", 11);
  CHECK(f.check({}, 20, 5) < 1e-4);
}

TEST_CASE("gradient matches central differences for the mechanism objective") {
  GradFixture f("compliant_inverter", 11);
  CHECK(f.check({}, 20, 6) < 1e-4);
}

TEST_CASE("gradient of each isolated loss term matches central differences") {
  GradFixture f("tip_cantilever", 12);
  SUBCASE("objective") { CHECK(f.check({true, false, false}, 20, 7) < 1e-4); }
  SUBCASE("matrix volume") { CHECK(f.check({false, true, false}, 20, 8) < 1e-4); }
  SUBCASE("fiber volume") { CHECK(f.check({false, false, true}, 20, 9) < 1e-4); }
}

TEST_CASE("gradient matches central differences for the multi-material loss") {
  GradFixture f("multi_material_cantilever", 13);
  CHECK(f.check({}, 20, 10) < 1e-4);
  CHECK(f.check({false, true, false}, 20, 11) < 1e-4);
}

TEST_CASE("loss assembly") {
  const auto a = opt::loss(2.0, 2.0, 0.0, 0.0, 50.0);
  CHECK(a.L == 1.0);
  CHECK(opt::loss(3.0, 4.0, 0.0, 0.0, 7.0).L == 0.75);
  const auto b = opt::loss(0.8, 1.0, 0.1, -0.2, 10.0);
  CHECK(b.L == doctest::Approx(1.3).epsilon(1e-14));
  CHECK(b.J_scaled == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(b.g_m == 0.1);
  CHECK(b.g_f == -0.2);
  // Mechanism objectives are scaled by |J0|.
  CHECK(opt::loss(-0.5, 2.0, 0.0, 0.0, 1.0).L == -0.25);
}

TEST_CASE("volume constraints") {
  opt::ConstraintSpec spec;
  spec.V_m = 0.5;
  spec.r_f = 0.5;
  std::vector<double> half(40, 0.5), full(40, 1.0), quarter(40, 0.25);
  CHECK(opt::volume_constraints(half, quarter, 1.0, spec).first == 0.0);
  CHECK(opt::volume_constraints(full, quarter, 2.0, spec).first == 1.0);
  CHECK(opt::volume_constraints(half, quarter, 1.0, spec).second == 0.0);
  CHECK(opt::volume_constraints(half, half, 1.0, spec).second == doctest::Approx(1.0).epsilon(1e-15));

  SUBCASE("zero fiber budget") {
    spec.r_f = 0.0;
    std::vector<double> none(40, 0.0);
    CHECK(opt::volume_constraints(half, none, 1.0, spec).second == 0.0);
    CHECK(std::isinf(opt::volume_constraints(half, quarter, 1.0, spec).second));
  }
  SUBCASE("size mismatch") {
    std::vector<double> three(3, 0.5);
    CHECK_THROWS_AS(opt::volume_constraints(half, three, 1.0, spec), std::invalid_argument);
  }
}

TEST_CASE("mass constraint") {
  material::MaterialSet one;
  one.materials = {{"m", 1.0, 0.3, 1.0}};
  Eigen::MatrixXd filled(50, 2);
  filled.col(0).setOnes();
  filled.col(1).setZero();
  CHECK(opt::mass_constraint_multi(filled, 0.5, one, 25.0) == doctest::Approx(0.0).epsilon(1e-15));

  Eigen::MatrixXd empty(50, 2);
  empty.col(0).setZero();
  empty.col(1).setOnes();
  CHECK(opt::mass_constraint_multi(empty, 1.0, one, 25.0) == doctest::Approx(-1.0).epsilon(1e-8));

  material::MaterialSet two;
  two.materials = {{"matrix1", 0.6, 0.3, 0.4}, {"matrix2", 4.0, 0.3, 1.0}};
  const Eigen::MatrixXd third = Eigen::MatrixXd::Constant(1800, 3, 1.0 / 3.0);
  // 1800 (0.4 + 1.0 + 1e-9) / 3 / 600 - 1
  CHECK(opt::mass_constraint_multi(third, 1.0, two, 600.0) == doctest::Approx(0.4000000010).epsilon(1e-12));
  CHECK_THROWS_AS(opt::mass_constraint_multi(third, 1.0, two, 0.0), std::invalid_argument);

  std::vector<double> rf(100, 0.25);
  CHECK(opt::fiber_volume_multi(rf, 0.25) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(opt::fiber_volume_multi(rf, 0.125) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("adam steps") {
  SUBCASE("zero gradient gives no update") {
    Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(5, -1, 1);
    const Eigen::VectorXd w0 = w;
    opt::AdamState s(5);
    CHECK(opt::adam_step(w, Eigen::VectorXd::Zero(5), s, 0.01) == 0.0);
    CHECK(w == w0);
  }
  SUBCASE("first step moves each component by about lr") {
    Eigen::VectorXd g(4);
    g << 3.0, -0.02, 1e-3, -250.0;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(4);
    opt::AdamState s(4);
    const double norm = opt::adam_step(w, g, s, 0.01);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(w[i]) == doctest::Approx(0.01).epsilon(1e-4));
      CHECK(w[i] * g[i] < 0.0);
    }
    CHECK(norm == doctest::Approx(0.02).epsilon(1e-4));
  }
  SUBCASE("three steps on w^2 decrease it") {
    Eigen::VectorXd w = Eigen::VectorXd::Ones(1);
    opt::AdamState s(1);
    double f = 1.0;
    for (int k = 0; k < 3; ++k) {
      opt::adam_step(w, 2.0 * w, s, 0.01);
      CHECK(w[0] * w[0] < f);
      f = w[0] * w[0];
    }
    CHECK(s.t == 3);
  }
  SUBCASE("non-finite gradient is rejected") {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(3);
    g[1] = std::numeric_limits<double>::infinity();
    opt::AdamState s(3);
    CHECK_THROWS_AS(opt::adam_step(w, g, s, 0.01), NumericError);
    CHECK(w.isZero(0.0));
  }
}

TEST_CASE("continuation schedule") {
  const opt::Schedule s;
  for (int k : {0, 1, 100, 1000}) {
    const auto c = opt::continuation_at(s, k);
    CHECK(c.alpha == std::min(100.0, 0.05 + k * 0.05));
    CHECK(c.p == std::min(8.0, 1.0 + k * 0.02));
  }
  opt::ContinuationState c = opt::continuation_at(s, 0);
  opt::continuation_update(c, s);
  CHECK(c.alpha == doctest::Approx(0.10).epsilon(1e-15));
  CHECK(c.p == doctest::Approx(1.02).epsilon(1e-15));
  CHECK(opt::continuation_at(s, 350).p == 8.0);
  for (int k = 0; k < 5000; k += 7) CHECK(opt::continuation_at(s, k).alpha <= 100.0);
}

TEST_CASE("history ordering and csv") {
  opt::History h;
  opt::EpochRecord r;
  r.epoch = 0;
  h.append(r);
  r.epoch = 1;
  h.append(r);
  CHECK_THROWS_AS(h.append(r), std::logic_error);
  r.epoch = 0;
  CHECK_THROWS_AS(h.append(r), std::logic_error);
  CHECK(h.size() == 2);
  std::ostringstream out;
  h.write_csv(out);
  const std::string csv = out.str();
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.rfind("epoch", 0) == 0);
}

TEST_CASE("short training run") {
  const opt::Problem p = test::small_problem("tip_cantilever", 12, 6);
  nn::NetworkConfig net;
  opt::RunOptions o;
  o.seed = 3;
  o.schedule.max_epochs = 25;
  std::vector<int> seen;
  o.on_epoch = [&](const opt::EpochRecord& r) { seen.push_back(r.epoch); };
  const opt::RunResult a = opt::run(p, net, o);

  REQUIRE(a.history.size() == 25);
  CHECK(a.epochs == 25);
  CHECK(seen.size() == 25);
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    const auto& r = a.history.records()[i];
    CHECK(r.epoch == static_cast<int>(i));
    const auto c = opt::continuation_at(o.schedule, r.epoch);
    CHECK(r.alpha == c.alpha);
    CHECK(r.p == c.p);
    const double L = r.loss.J / a.J0 + r.alpha * (r.loss.g_m * r.loss.g_m + r.loss.g_f * r.loss.g_f);
    CHECK(std::abs(r.loss.L - L) <= 1e-12 * std::max(1.0, std::abs(L)));
    CHECK(r.dw_norm > 0.0);
  }
  CHECK(a.history.back().loss.L < a.history.records()[5].loss.L);
  CHECK(a.final.rho_m.size() == p.grid.num_elements());

  SUBCASE("same seed reproduces the run bitwise") {
    o.on_epoch = nullptr;
    const opt::RunResult b = opt::run(p, net, o);
    CHECK(b.field.weights().flatten() == a.field.weights().flatten());
    CHECK(b.history.back().loss.L == a.history.back().loss.L);
  }
  SUBCASE("zero epochs returns the initial weights") {
    o.schedule.max_epochs = 0;
    const opt::RunResult z = opt::run(p, net, o);
    CHECK(z.history.empty());
    CHECK(z.epochs == 0);
    const opt::RunResult z2 = opt::run(p, net, o);
    CHECK(z.field.weights().flatten() == z2.field.weights().flatten());
  }
}

TEST_CASE("uniform design objective") {
  opt::Problem p = test::small_problem("tip_cantilever", 6, 3);
  nn::NetworkConfig net;
  std::mt19937_64 rng(4);
  opt::LossModel m(p, net, nn::init_embedding(net, p.grid.h(), rng));
  const double J1 = m.uniform_objective(0.5, 0.5, 0.0, 1.0);
  const double J3 = m.uniform_objective(0.5, 0.5, 0.0, 3.0);
  // Uniform density scales K by rho^p up to the floor.
  CHECK(J3 / J1 == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(m.initial_objective(1.0) == doctest::Approx(J1).epsilon(1e-12));
  CHECK(J1 > 0.0);
}
