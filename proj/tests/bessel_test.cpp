#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "mppc/bessel.hpp"
#include "mppc/paircorr.hpp"
#include "oracles.hpp"

namespace mppc {
namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<double, 9> kArgs{0.3, 5.0, 12.0, 12.5, 30.0, 31.4, 100.0, 1000.0, 10000.0};

struct OracleRow {
  double nu;
  std::array<double, 9> values;
};

// J_nu(t) at kArgs, evaluated with 40-digit arithmetic.
const std::array<OracleRow, 9> kOracle{{
    {0.0, {0.97762624653829608922, -0.17759677131433830435, 0.047689310796833536624,
           0.14688405470042110231, -0.086367983581040211336, 0.098653744091573117803,
           0.019985850304223122424, 0.024786686152420174561, -0.0070961603533888014773}},
    {1.0, {0.14831881627310400238, -0.32757913759146522204, -0.22344710449062761237,
           -0.16548380461475971846, -0.11875106261662293652, -0.10110399295094175924,
           -0.077145352014112158033, 0.0047283119070895239176, 0.0036474507555295803441}},
    {2.0, {0.011165861949063963219, 0.046565116277752215532, -0.084930494878604805352,
           -0.17336146343878265726, 0.078451246073265348901, -0.10509348886551845308,
           -0.021528757344505365585, -0.024777229528605995513, 0.0070968898435399073933}},
    {0.5, {0.43049351732812455754, -0.34216798479816180976, -0.12358853595594194375,
           -0.014967249458668382989, -0.14392965337039988914, -0.0022676613707778381661,
           -0.040402132716252123744, 0.02086326660509382773, -0.0024384500245313915408}},
    {1.5, {0.043309881918378320896, -0.16965130614474076152, -0.20466344849652968759,
           -0.22637633819446598575, -0.027267945711177687796, -0.14244276587455402039,
           -0.069207112795890604984, -0.014168706104322200496, 0.0075968568331918927529}},
    {2.5, {0.0026053018556586674554, 0.24037720111131735285, 0.072422673831809521857,
           -0.03936307170800345359, 0.14120285879928212036, -0.01134152008220503064,
           0.038325919332375405594, -0.020905772723406794331, 0.0024407290815813491086}},
    {3.0, {0.00055934304774884605867, 0.36483123061366699446, 0.19513693953109267725,
           0.11000813631434926814, 0.12921122875972498304, 0.087716287362977624486,
           0.076284201720331943409, -0.0048274208252039478996, -0.0036446119995921643812}},
    {3.7, {5.7683560599249623311e-5, 0.40885095219977578547, 0.22412194772724559981,
           0.2278337484991712166, 0.0094778233664410673822, 0.14191805869274462894,
           0.056858397343506855355, 0.01983793020706474799, -0.0079788122407784386947}},
    {5.0, {6.3044326337710711158e-7, 0.26114054612017009005, -0.073470963101658581266,
           0.034737699762239727682, -0.14324029551207707699, -0.056670538857519834145,
           -0.074195736964513920834, 0.0050254069452331860742, 0.003638932738303572651}},
}};

TEST(BesselJ, Examples) {
  EXPECT_EQ(bessel_j(0.0, 0.0).value, 1.0);
  EXPECT_EQ(bessel_j(2.0, 0.0).value, 0.0);
  EXPECT_NEAR(bessel_j(0.5, kPi / 2).value, 2.0 / kPi, 1e-15);
  EXPECT_NEAR(bessel_j(1.0, 1.0).value, 0.44005058574493351596, 1e-15);
}

TEST(BesselJ, MatchesHighPrecisionTable) {
  for (const auto& row : kOracle) {
    for (std::size_t i = 0; i < kArgs.size(); ++i) {
      const auto eval = bessel_j(row.nu, kArgs[i]);
      EXPECT_NEAR(eval.value, row.values[i], 1e-12) << "nu=" << row.nu << " t=" << kArgs[i];
      EXPECT_LE(eval.abs_error_bound, 1e-10);
      EXPECT_LE(std::fabs(eval.value - row.values[i]), eval.abs_error_bound + 1e-15)
          << "nu=" << row.nu << " t=" << kArgs[i];
    }
  }
}

TEST(BesselJ, MethodSwitchesAtCutoff) {
  EXPECT_EQ(bessel_j(1.0, kSeriesCutoff).method, BesselMethod::Series);
  EXPECT_EQ(bessel_j(1.0, std::nextafter(kSeriesCutoff, 100.0)).method, BesselMethod::Quadrature);
}

TEST(BesselJ, AgreesWithStandardLibrary) {
  testing::Gen gen(61);
  for (int i = 0; i < 500; ++i) {
    const double nu = gen.coin() ? static_cast<double>(gen.uniform(0, 5)) : gen.real(0, 5);
    const double t = gen.log_real(1e-3, 1e4);
    EXPECT_NEAR(bessel_j(nu, t).value, std::cyl_bessel_j(nu, t), 1e-9)
        << "nu=" << nu << " t=" << t;
  }
}

TEST(BesselJ, HalfOrderClosedForm) {
  for (double t = 0.1; t <= 50.0; t += 0.0499) {
    const double closed = std::sqrt(2.0 / (kPi * t)) * std::sin(t);
    EXPECT_NEAR(bessel_j(0.5, t).value, closed, 1e-12) << t;
  }
}

TEST(BesselJ, RecurrenceResidual) {
  for (double nu : {1.0, 1.5, 2.0, 2.5, 3.3, 4.0}) {
    for (double t : {0.5, 3.0, 11.9, 12.1, 40.0, 333.3, 5000.0, 9999.0}) {
      const double residual = bessel_j(nu - 1, t).value + bessel_j(nu + 1, t).value -
                              2 * nu / t * bessel_j(nu, t).value;
      EXPECT_LT(std::fabs(residual), 1e-9) << "nu=" << nu << " t=" << t;
    }
  }
}

TEST(BesselJ, SmallArgumentLimit) {
  for (double t : {1e-3, 1e-5, 1e-7}) EXPECT_NEAR(bessel_j(1.0, t).value / t, 0.5, t);
}

TEST(BesselJ, DomainErrors) {
  EXPECT_THROW((void)bessel_j(-0.1, 1.0), std::domain_error);
  EXPECT_THROW((void)bessel_j(5.1, 1.0), std::domain_error);
  EXPECT_THROW((void)bessel_j(1.0, -1.0), std::domain_error);
  EXPECT_THROW((void)bessel_j(1.0, 1e4 + 1), std::domain_error);
  EXPECT_THROW((void)bessel_asymptotic(1.0, 0.5), std::domain_error);
}

TEST(BesselAsymptotic, HalfOrderIsExact) {
  for (double t = 1.0; t < 1000.0; t *= 1.37)
    EXPECT_NEAR(bessel_asymptotic(0.5, t), std::sqrt(2.0 / (kPi * t)) * std::sin(t), 1e-12);
}

TEST(BesselAsymptotic, CloseAtLargeArgument) {
  EXPECT_NEAR(bessel_asymptotic(0.0, 1e4), bessel_j(0.0, 1e4).value, 1e-5);
  double worst = 0.0;
  for (double t = 10.0; t <= 1e4; t *= 1.05)
    worst = std::max(worst, std::fabs(bessel_j(1.0, t).value - bessel_asymptotic(1.0, t)) *
                                std::pow(t, 1.5));
  // First neglected Hankel term: sqrt(2/pi) (4 nu^2 - 1) / 8 = 0.299 for nu = 1.
  EXPECT_LT(worst, 0.35);
}

TEST(FourierBall, Examples) {
  const std::array<std::int64_t, 2> zero{0, 0}, e1{1, 0};
  EXPECT_NEAR(fourier_coeff_ball(zero, 1.0, 100), kPi / 100, 1e-16);
  EXPECT_NEAR(fourier_coeff_ball(e1, 1.0, 100), 0.029890905631337474089, 1e-14);
}

TEST(FourierBall, DependsOnlyOnNorm) {
  const std::array<std::array<std::int64_t, 2>, 8> orbit{
      {{3, 4}, {4, 3}, {-3, 4}, {3, -4}, {-4, -3}, {0, 5}, {-5, 0}, {5, 0}}};
  const double reference = fourier_coeff_ball(orbit[0], 0.7, 50);
  for (const auto& r : orbit) EXPECT_NEAR(fourier_coeff_ball(r, 0.7, 50), reference, 1e-15);
}

TEST(FourierBall, MatchesDiskQuadrature) {
  const double s = 1.0;
  const std::size_t N = 100;
  const double radius = s / std::sqrt(static_cast<double>(N));
  for (std::int64_t a = -20; a <= 20; a += 3) {
    for (std::int64_t b = -20; b <= 20; b += 4) {
      if (a * a + b * b > 400) continue;
      const std::array<std::int64_t, 2> r{a, b};
      EXPECT_NEAR(fourier_coeff_ball(r, s, N), testing::disk_fourier_quadrature(a, b, radius), 1e-8)
          << a << "," << b;
    }
  }
}

TEST(FourierBall, SmallCoefficientBound) {
  // |c_r| <= omega_d s^d / N for every r: |J_nu(x)| / x^nu <= 1 / (2^nu Gamma(nu + 1)).
  for (std::size_t d : {1u, 2u, 3u}) {
    const double c0 = unit_ball_volume(d) * std::pow(0.8, static_cast<double>(d)) / 1000.0;
    for (std::int64_t k = 1; k <= 300; ++k) {
      std::vector<std::int64_t> r(d, 0);
      r[0] = k;
      if (d > 1) r[1] = k / 3;
      EXPECT_LE(std::fabs(fourier_coeff_ball(r, 0.8, 1000)), c0 * (1 + 1e-12));
    }
  }
}

TEST(FourierBox, Examples) {
  EXPECT_DOUBLE_EQ(fourier_coeff_box(0, 1.0, 16, 2), 0.5);
  // Half-width 1/4: r = 1 gives sin(pi/2)/pi, r = 2 lands on the first zero.
  EXPECT_NEAR(fourier_coeff_box(1, 1.0, 16, 2), 1.0 / kPi, 1e-16);
  EXPECT_NEAR(fourier_coeff_box(2, 1.0, 16, 2), 0.0, 1e-16);
  const std::array<std::int64_t, 2> r{0, 0};
  EXPECT_DOUBLE_EQ(fourier_coeff_box(r, 1.0, 16), 0.25);
}

TEST(FourierBox, PartialSumsConvergeToIndicator) {
  // Half-width h = s N^{-1/d} = 0.2; test points at distance >= 0.01 from +-0.2.
  const double s = 0.2;
  const std::size_t N = 1;
  const double h = s;
  const int R = 100000;
  for (double theta : {0.0, 0.1, 0.19, 0.21, 0.35, 0.5, -0.15, -0.3}) {
    long double sum = fourier_coeff_box(0, s, N, 1);
    for (int r = 1; r <= R; ++r)
      sum += 2.0L * fourier_coeff_box(r, s, N, 1) * std::cos(2 * kPi * r * theta);
    const double indicator = std::fabs(theta) <= h ? 1.0 : 0.0;
    EXPECT_NEAR(static_cast<double>(sum), indicator, 1e-3) << theta;
  }
}

TEST(CheckBounds, IntegerOrdersBoundedByOne) {
  std::vector<double> ts;
  for (double t = 1e-3; t <= 1e4; t *= 1.1) ts.push_back(t);
  const std::vector<double> nus{1.0, 1.5, 2.0, 2.5, 3.0};
  const auto report = check_bessel_bounds(nus, ts);
  EXPECT_TRUE(report.ok());
  ASSERT_EQ(report.rows.size(), nus.size());
  for (const auto& row : report.rows) {
    EXPECT_LE(row.max_abs, 1.0);
    EXPECT_LE(row.max_sqrt_t_abs, 1.0);
    EXPECT_LE(row.max_abs_small_t, 0.5);
  }
  EXPECT_LE(std::fabs(bessel_j(1.0, 1e4).value), 0.008);
  EXPECT_LE(std::sqrt(1e4) * std::fabs(bessel_j(1.0, 1e4).value), 0.8);
}

}  // namespace
}  // namespace mppc
