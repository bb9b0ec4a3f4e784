#include "oracles.hpp"
#include "polfid/channels.hpp"
#include "polfid/error.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace polfid;

namespace {

const MediumParams kMedium{};
const WavepacketSpec kPacket{};
const QuadratureConfig kQuad{};

// N(gbar = 1) for c k0 / Omega = 1/2, 50-digit evaluation.
constexpr double kN1 = 0.62126781251816649;

const std::vector<double> kGbarGrid{0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0};

WavepacketSpec with_sigma(double sigma) {
  WavepacketSpec wp;
  wp.sigma = sigma;
  return wp;
}

}  // namespace

TEST_SUITE("channels") {
  TEST_CASE("erasure closed form") {
    CHECK(fidelity_erasure_uniform(0.0, 0.7, kMedium, kPacket) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(fidelity_erasure_uniform(1.0, 1.0, kMedium, kPacket) == doctest::Approx(kN1).epsilon(1e-14));
    CHECK(std::abs(fidelity_erasure_uniform(1e3, 1.0, kMedium, kPacket) - 0.5) < 1e-3);
    CHECK_THROWS_AS(fidelity_erasure_uniform(1.0, 1.2, kMedium, kPacket), ValidationError);
  }

  TEST_CASE("dephasing closed form normalizes to N") {
    const double f0 = fidelity_dephasing_uniform(0.0, kMedium, kPacket, kQuad);
    const double f1 = fidelity_dephasing_uniform(1.0, kMedium, kPacket, kQuad);
    CHECK(f0 > 0.0);
    CHECK(std::abs(f1 / f0 - kN1) <= 1e-14);
    CHECK(f1 == doctest::Approx(kN1 * f0).epsilon(1e-14));
  }

  TEST_CASE("dephasing closed form agrees with the Parseval oracle at g = 0") {
    const SphereRule rule = make_sphere_rule(48);
    for (double sigma : {0.25, 0.5, 1.0, 2.0}) {
      const WavepacketSpec wp = with_sigma(sigma);
      const double closed = fidelity_dephasing_uniform(0.0, kMedium, wp, kQuad);
      const double oracle = numeric_overlap_dephasing(0.0, CompletelyDephasing{1.0}, kMedium, wp, rule);
      CHECK(std::abs(oracle / closed - 1.0) <= 1e-4);
    }
  }

  TEST_CASE("dephasing oracle ratio, monotonicity and volume independence") {
    const SphereRule rule = make_sphere_rule(32);
    const CompletelyDephasing channel{1.0};
    const double base = numeric_overlap_dephasing(0.0, channel, kMedium, kPacket, rule);
    double previous = base;
    for (double gbar = 0.25; gbar <= 10.0; gbar += 0.25) {
      const double g = coupling_from_gbar(gbar, kMedium);
      const double f = numeric_overlap_dephasing(g, channel, kMedium, kPacket, rule);
      CHECK(std::abs(f / base - weight_N(kPacket.k0_mag, g, kMedium)) <= 1e-6);
      CHECK(f < previous);
      previous = f;
    }
    CHECK(numeric_overlap_dephasing(0.0, CompletelyDephasing{50.0}, kMedium, kPacket, rule) ==
          doctest::Approx(base).epsilon(1e-14));
  }

  TEST_CASE("depolarizing closed form and deviation") {
    CHECK(fidelity_depolarizing_uniform(0.0, 0.5, 4.0, kMedium, kPacket) == doctest::Approx(0.625).epsilon(1e-15));
    const double normalized = normalized_fidelity(Depolarizing{0.5, 4.0, 8.0}, 1.0, kMedium, kPacket);
    // (0.5 N + 0.125) / 0.625 with N at 50 digits.
    CHECK(normalized == doctest::Approx(0.69701425001453319).epsilon(1e-14));
    CHECK(normalized - kN1 > 0.07);
  }

  TEST_CASE("depolarizing normalized fidelity approaches N as alpha grows") {
    const double p = 0.5;
    for (double gbar : {0.1, 1.0, 10.0}) {
      const double g = coupling_from_gbar(gbar, kMedium);
      const double n = weight_N(kPacket.k0_mag, g, kMedium);
      double previous_gap = INFINITY;
      for (double alpha : {1.0, 10.0, 1e2, 1e4, 1e6, 1e9}) {
        const double f0 = p + (1.0 - p) / alpha;
        const double gap = normalized_fidelity(Depolarizing{p, alpha, 8.0}, g, kMedium, kPacket) - n;
        CHECK(gap > 0.0);
        CHECK(gap <= (1.0 - p) / (alpha * f0) + 1e-15);
        CHECK(gap < previous_gap);
        previous_gap = gap;
      }
      CHECK(previous_gap < 1e-9);
    }
  }

  TEST_CASE("universality across erasure and dephasing") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pdist(1e-3, 1.0);
    for (double gbar : kGbarGrid) {
      const double g = coupling_from_gbar(gbar, kMedium);
      const double n = weight_N(kPacket.k0_mag, g, kMedium);
      for (int trial = 0; trial < 10; ++trial) {
        CHECK(normalized_fidelity(Erasure{pdist(rng)}, g, kMedium, kPacket) == n);
      }
      CHECK(normalized_fidelity(CompletelyDephasing{2.0}, g, kMedium, kPacket) == n);
    }
    CHECK(normalized_fidelity(Erasure{0.3}, 1.0, kMedium, kPacket) == doctest::Approx(kN1).epsilon(1e-14));
  }

  TEST_CASE("baselines at g = 0 equal the medium-free values") {
    CHECK(fidelity_erasure_uniform(0.0, 0.4, kMedium, kPacket) == doctest::Approx(0.4));
    CHECK(fidelity_depolarizing_uniform(0.0, 0.2, 3.0, kMedium, kPacket) == doctest::Approx(0.2 + 0.8 / 3.0));
    const IntegralEstimate i1 = dephasing_uniform_integral(kPacket, kQuad);
    CHECK(fidelity_dephasing_uniform(0.0, kMedium, kPacket, kQuad) ==
          doctest::Approx(dephasing_uniform_baseline(kPacket, i1.value)).epsilon(1e-14));
  }

  TEST_CASE("fidelities decrease with coupling and respect bounds") {
    const IntegralEstimate i1 = dephasing_uniform_integral(kPacket, kQuad);
    double prev_e = INFINITY, prev_c = INFINITY, prev_d = INFINITY, prev_dn = INFINITY;
    for (int i = 0; i <= 100; ++i) {
      const double gbar = i == 0 ? 0.0 : std::pow(10.0, -3.0 + 4.0 * i / 100.0);
      const double g = coupling_from_gbar(gbar, kMedium);
      const double n = weight_N(kPacket.k0_mag, g, kMedium);
      const double fe = fidelity_erasure_uniform(g, 0.8, kMedium, kPacket);
      const double fc = fidelity_dephasing_uniform(g, kMedium, kPacket, i1.value);
      const double fd = fidelity_depolarizing_uniform(g, 0.5, 4.0, kMedium, kPacket);
      const double fdn = normalized_fidelity(Depolarizing{0.5, 4.0, 8.0}, g, kMedium, kPacket);
      CHECK(fe < prev_e);
      CHECK(fc < prev_c);
      CHECK(fd < prev_d);
      CHECK(fdn < prev_dn);
      CHECK(fe <= 1.0);
      CHECK(fd <= 1.0);
      CHECK(n > 0.5);
      CHECK(n <= 1.0);
      if (g > 0.0) CHECK(fdn > n);
      prev_e = fe, prev_c = fc, prev_d = fd, prev_dn = fdn;
    }
  }

  TEST_CASE("numeric overlap oracle") {
    const SphereRule rule = make_sphere_rule(32);
    CHECK(numeric_overlap_fidelity(0.0, kMedium, kPacket, rule) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(numeric_overlap_fidelity(1.0, kMedium, kPacket, rule) - kN1) <= 1e-6);
    CHECK(std::abs(numeric_overlap_fidelity(1e3, kMedium, kPacket, rule) - 0.5) <= 1e-3);
    for (double gbar : kGbarGrid) {
      const double g = coupling_from_gbar(gbar, kMedium);
      CHECK(std::abs(numeric_overlap_fidelity(g, kMedium, kPacket, rule) -
                     normalized_fidelity(Erasure{1.0}, g, kMedium, kPacket)) <= 1e-6);
    }
  }

  TEST_CASE("coarse rules are rejected by the oracles") {
    const SphereRule coarse = make_sphere_rule(3);
    CHECK_THROWS_AS(numeric_overlap_fidelity(1.0, kMedium, kPacket, coarse), ValidationError);
    CHECK_THROWS_AS(numeric_overlap_dephasing(1.0, CompletelyDephasing{}, kMedium, kPacket, coarse), ValidationError);
  }

  TEST_CASE("invalid channel parameters and zero baseline") {
    CHECK_THROWS_AS(validate(ChannelSpec{Erasure{-0.1}}), ValidationError);
    CHECK_THROWS_AS(validate(ChannelSpec{CompletelyDephasing{0.0}}), ValidationError);
    CHECK_THROWS_AS(validate(ChannelSpec{Depolarizing{0.5, 0.0, 1.0}}), ValidationError);
    CHECK_THROWS_AS(validate(ChannelSpec{Depolarizing{0.5, 1.0, -1.0}}), ValidationError);
    CHECK_THROWS_AS(normalized_fidelity(Erasure{0.0}, 1.0, kMedium, kPacket), ValidationError);
    WavepacketSpec fast = kPacket;
    fast.k0_mag = 1.5;
    CHECK_THROWS_AS(fidelity_erasure_uniform(0.5, 1.0, kMedium, fast), ValidationError);
  }

  TEST_CASE("labels") {
    CHECK(channel_label(Erasure{0.3}) == "erasure[p=0.3]");
    CHECK(channel_label(CompletelyDephasing{1.0}) == "dephasing[V=1]");
    CHECK(channel_label(Depolarizing{0.5, 4.0, 8.0}) == "depolarizing[p=0.5;alpha=4;Lambda=8]");
    CHECK(channel_kind(Depolarizing{}) == "depolarizing");
    CHECK(to_string(MediumKind::RandomDiffusion) == "random-diffusion");
  }
}
