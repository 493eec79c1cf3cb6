#include <cmath>
#include <limits>

#include "doctest.h"
#include "wavenet/adam.hpp"
#include "wavenet/error.hpp"

using namespace wavenet;

namespace {

struct Toy {
  std::vector<double> f{8.0};
  std::vector<double> gf{0.0};
  std::vector<double> w{0.3, -0.2};
  std::vector<double> gw{0.0, 0.0};

  std::vector<ParamView> views() {
    return {{"wavelet.f", f, gf, ParamGroup::wavelet}, {"dense.weight", w, gw, ParamGroup::network}};
  }
};

}  // namespace

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
  Toy toy;
  Adam opt;
  for (int i = 0; i < 5; ++i) opt.step(toy.views());
  CHECK(toy.f[0] == 8.0);
  CHECK(toy.w == std::vector<double>{0.3, -0.2});
  CHECK(opt.steps() == 5);
}

TEST_CASE("adam: first step moves by about the learning rate") {
  Toy toy;
  toy.gf[0] = 2.5;
  toy.gw = {-0.01, 4.0};
  Adam opt;
  opt.step(toy.views());
  // Bias-corrected first step is lr * g / (|g| + eps).
  CHECK(toy.f[0] == doctest::Approx(8.0 - 0.1).epsilon(1e-8));
  CHECK(toy.w[0] == doctest::Approx(0.3 + 1e-4).epsilon(1e-8));
  CHECK(toy.w[1] == doctest::Approx(-0.2 - 1e-4).epsilon(1e-8));
}

TEST_CASE("adam: wavelet group moves 1000x farther under the default rates") {
  Toy toy;
  Adam opt;
  for (int i = 0; i < 10; ++i) {
    toy.gf[0] = 0.7 + 0.1 * i;
    toy.gw = {0.7 + 0.1 * i, 0.0};
    opt.step(toy.views());
  }
  const double df = std::abs(toy.f[0] - 8.0);
  const double dw = std::abs(toy.w[0] - 0.3);
  CHECK(df / dw == doctest::Approx(1000.0).epsilon(1e-9));
}

TEST_CASE("adam: equal learning rates give equal updates for equal gradients") {
  Toy toy;
  Adam opt({0.01, 0.01});
  toy.f[0] = 0.3;
  for (int i = 0; i < 4; ++i) {
    toy.gf[0] = std::sin(i + 1.0);
    toy.gw[0] = std::sin(i + 1.0);
    opt.step(toy.views());
  }
  CHECK(toy.f[0] == toy.w[0]);
}

TEST_CASE("adam: repeated runs are bitwise identical") {
  auto run = [] {
    Toy toy;
    Adam opt;
    for (int i = 0; i < 20; ++i) {
      toy.gf[0] = std::cos(0.3 * i);
      toy.gw = {std::sin(0.7 * i), 1.0 / (i + 1.0)};
      opt.step(toy.views());
    }
    return std::vector<double>{toy.f[0], toy.w[0], toy.w[1]};
  };
  CHECK(run() == run());
}

TEST_CASE("adam: non-finite gradient aborts the step") {
  for (double bad : {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity()}) {
    Toy toy;
    Adam opt;
    toy.gf[0] = 1.0;
    toy.gw = {0.5, bad};
    CHECK_THROWS_AS(opt.step(toy.views()), NumericError);
    CHECK(toy.f[0] == 8.0);
    CHECK(toy.w[0] == 0.3);
    CHECK(opt.steps() == 0);
  }
}

TEST_CASE("clip after step") {
  std::vector<MorletParams> p{{35.0, 2.0}, {0.1, 20.0}, {10.0, 10.0}};
  clip_wavelet_params(p);
  CHECK(p[0].f == kFreqMax);
  CHECK(p[0].w == kWidthMin);
  CHECK(p[1].f == kFreqMin);
  CHECK(p[1].w == kWidthMax);
  CHECK(p[2].f == 10.0);
  for (const auto& q : p) CHECK(q.in_clip_box());
}
