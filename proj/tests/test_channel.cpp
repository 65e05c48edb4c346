#include "doctest.h"

#include <cmath>
#include <random>

#include "uwac/channel.hpp"

using namespace uwac;

namespace {
doctest::Approx near(double v, double eps = 1e-12) {
    return doctest::Approx(v).epsilon(eps);
}
}  // namespace

TEST_CASE("absorption matches hand-computed values across the band") {
    // Frozen from an independent evaluation of the same formulas.
    CHECK(absorption_db_per_km(FrequencyKHz(0.05)) == near(0.0023018142144638405));
    CHECK(absorption_db_per_km(FrequencyKHz(0.1)) == near(0.0031991089108910895));
    CHECK(absorption_db_per_km(FrequencyKHz(0.2999)) == near(0.01206635444953232));
    CHECK(absorption_db_per_km(FrequencyKHz(0.3)) == near(0.013073151264675752));
    CHECK(absorption_db_per_km(FrequencyKHz(1.0)) == near(0.06900409046574006));
    CHECK(absorption_db_per_km(FrequencyKHz(10.0)) == near(1.1870299387081567));
    CHECK(absorption_db_per_km(FrequencyKHz(100.0)) == near(34.068662759965136));
    CHECK(absorption_db_per_km(FrequencyKHz(1000.0)) == near(318.9333365098587));
}

TEST_CASE("absorption is increasing in frequency") {
    double prev = 0.0;
    for (double f = 0.02; f < 1000.0; f *= 1.3) {
        const double a = absorption_db_per_km(FrequencyKHz(f));
        CHECK(a > prev);
        prev = a;
    }
}

TEST_CASE("frequency and distance types reject non-positive values") {
    CHECK_THROWS_AS(FrequencyKHz(0.0), std::domain_error);
    CHECK_THROWS_AS(FrequencyKHz(-1.0), std::domain_error);
    CHECK_THROWS_AS(FrequencyKHz(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(FrequencyKHz(std::numeric_limits<double>::infinity()),
                    std::domain_error);
    CHECK_THROWS_AS(DistanceKm(0.0), std::domain_error);
    CHECK_THROWS_AS(DistanceKm(-2.0), std::domain_error);
    CHECK(FrequencyKHz(3.5).value == 3.5);
    CHECK(DistanceKm(0.25).value == 0.25);
}

TEST_CASE("environment validation and typical spreading range") {
    EnvironmentParams env;
    env.validate();
    CHECK(env.spreading_k == 1.5);
    CHECK(env.shipping_s == 0.5);
    CHECK(env.wind_w == 0.0);
    CHECK(env.spreading_in_typical_range());

    env.spreading_k = 2.5;  // allowed, just atypical
    env.validate();
    CHECK_FALSE(env.spreading_in_typical_range());

    env = {};
    env.shipping_s = 1.5;
    CHECK_THROWS_AS(env.validate(), std::domain_error);
    env = {};
    env.shipping_s = -0.1;
    CHECK_THROWS_AS(env.validate(), std::domain_error);
    env = {};
    env.wind_w = -1.0;
    CHECK_THROWS_AS(env.validate(), std::domain_error);
    env = {};
    env.spreading_k = 0.0;
    CHECK_THROWS_AS(env.validate(), std::domain_error);
}

TEST_CASE("noise components match hand-computed spectra") {
    EnvironmentParams env;  // s = 0.5, w = 0
    const NoiseComponents n1 = noise_components(FrequencyKHz(1.0), env);
    CHECK(n1.turbulence == near(50.11872336272722));
    CHECK(n1.shipping == near(8374.84256683654));
    CHECK(n1.wind == near(26030.82049146191));
    CHECK(n1.thermal == near(0.03162277660168379));
    CHECK(n1.total() == near(34455.81340443778));
    CHECK(noise_psd_db(FrequencyKHz(1.0), env) == near(45.372625068378255));
    CHECK(noise_psd_linear(FrequencyKHz(1.0), env).value == near(34455.81340443778));

    CHECK(noise_psd_db(FrequencyKHz(10.0), env) == near(29.354703574234854));
    CHECK(noise_psd_db(FrequencyKHz(100.0), env) == near(25.13312156022254));

    EnvironmentParams stormy;
    stormy.shipping_s = 1.0;
    stormy.wind_w = 10.0;
    CHECK(noise_psd_db(FrequencyKHz(1.0), stormy) == near(67.93096365490162));
}

TEST_CASE("noise responds to shipping and wind in the right direction") {
    EnvironmentParams lo;
    lo.shipping_s = 0.0;
    EnvironmentParams hi;
    hi.shipping_s = 1.0;
    const FrequencyKHz f(0.3);  // shipping-dominated region
    CHECK(noise_components(f, hi).shipping > noise_components(f, lo).shipping);
    CHECK(noise_components(f, hi).turbulence == noise_components(f, lo).turbulence);

    EnvironmentParams calm;
    EnvironmentParams windy;
    windy.wind_w = 15.0;
    const FrequencyKHz fw(2.0);
    CHECK(noise_components(fw, windy).wind > noise_components(fw, calm).wind);
    CHECK(noise_components(fw, windy).thermal == noise_components(fw, calm).thermal);
}

TEST_CASE("shipping and wind components fall with frequency past their peaks") {
    EnvironmentParams env;
    env.wind_w = 5.0;
    double prev_s = noise_components(FrequencyKHz(1.0), env).shipping;
    double prev_w = noise_components(FrequencyKHz(1.0), env).wind;
    for (double f = 2.0; f <= 512.0; f *= 2.0) {
        const NoiseComponents nc = noise_components(FrequencyKHz(f), env);
        CHECK(nc.shipping < prev_s);
        CHECK(nc.wind < prev_w);
        prev_s = nc.shipping;
        prev_w = nc.wind;
    }
}

TEST_CASE("path loss composes spreading and absorption") {
    EnvironmentParams env;  // k = 1.5
    CHECK(path_loss_db(DistanceKm(2.0), FrequencyKHz(10.0), env) ==
          near(6.889509812376032));
    // At the 1 km reference distance only absorption remains.
    CHECK(path_loss_db(DistanceKm(1.0), FrequencyKHz(10.0), env) ==
          near(1.1870299387081567));
    CHECK(path_loss_linear(DistanceKm(1.0), FrequencyKHz(10.0), env) ==
          near(std::pow(10.0, 1.1870299387081567 / 10.0)));
}

TEST_CASE("spreading factor shifts path loss by an exact distance offset") {
    // Changing k from k1 to k2 adds (k2 - k1) * 10log10(l), whatever f is.
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> lf(-1.0, 2.0);
    std::uniform_real_distribution<double> ff(-1.5, 2.5);
    for (int i = 0; i < 50; ++i) {
        const double l = std::pow(10.0, lf(rng));
        const double f = std::pow(10.0, ff(rng));
        EnvironmentParams a;
        a.spreading_k = 1.0;
        EnvironmentParams b;
        b.spreading_k = 2.0;
        const double da = path_loss_db(DistanceKm(l), FrequencyKHz(f), a);
        const double db = path_loss_db(DistanceKm(l), FrequencyKHz(f), b);
        CHECK(db - da == near(10.0 * std::log10(l), 1e-9));
    }
}

TEST_CASE("channel product in dB equals path loss plus noise") {
    EnvironmentParams env;
    const DistanceKm l(5.0);
    const FrequencyKHz f(10.0);
    CHECK(an_product_db(l, f, env) == near(45.77440333281592));
    CHECK(an_product_db(DistanceKm(1.0), FrequencyKHz(20.0), env) ==
          near(28.00756581622151));
    CHECK(an_product_db(DistanceKm(0.5), FrequencyKHz(1.0), env) ==
          near(40.891677178651406));
    CHECK(an_product_db(DistanceKm(10.0), FrequencyKHz(50.0), env) ==
          near(210.38338785652604));
    CHECK(an_product(l, f, env) ==
          near(std::pow(10.0, an_product_db(l, f, env) / 10.0)));
}

TEST_CASE("frequency grid is log spaced with exact endpoints") {
    const FrequencyGrid g = FrequencyGrid::make();
    REQUIRE(g.built());
    REQUIRE(g.freqs_khz.size() == 2000);
    CHECK(g.freqs_khz.front() == 0.01);
    CHECK(g.freqs_khz.back() == 1000.0);
    // Constant adjacent ratio within floating tolerance.
    const double ratio = g.freqs_khz[1] / g.freqs_khz[0];
    for (size_t i = 1; i + 1 < g.freqs_khz.size(); i += 97) {
        CHECK(g.freqs_khz[i + 1] / g.freqs_khz[i] == near(ratio, 1e-9));
    }
    const FrequencyGrid small = FrequencyGrid::make(1.0, 4.0, 3);
    REQUIRE(small.freqs_khz.size() == 3);
    CHECK(small.freqs_khz[0] == 1.0);
    CHECK(small.freqs_khz[1] == near(2.0));
    CHECK(small.freqs_khz[2] == 4.0);

    CHECK_THROWS_AS(FrequencyGrid::make(1.0, 1.0, 10), std::domain_error);
    CHECK_THROWS_AS(FrequencyGrid::make(-1.0, 10.0, 10), std::domain_error);
    CHECK_THROWS_AS(FrequencyGrid::make(1.0, 10.0, 1), std::domain_error);
}

TEST_CASE("quietest frequency matches a grid argmin and falls with distance") {
    EnvironmentParams env;
    const FrequencyGrid g = FrequencyGrid::make();
    // Frozen argmin values computed independently on the same grid.
    CHECK(optimal_frequency(DistanceKm(0.1), env, g).value ==
          near(37.522100606340786));
    CHECK(optimal_frequency(DistanceKm(1.0), env, g).value ==
          near(20.144295151655204));
    CHECK(optimal_frequency(DistanceKm(10.0), env, g).value ==
          near(5.907254650186181));

    double prev = 1e9;
    for (double l = 0.1; l <= 100.0; l *= 1.7) {
        const double f0 = optimal_frequency(DistanceKm(l), env, g).value;
        CHECK(f0 <= prev);
        prev = f0;
    }
}

TEST_CASE("quietest frequency does not depend on the spreading factor") {
    const FrequencyGrid g = FrequencyGrid::make();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> lf(-1.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        const double l = std::pow(10.0, lf(rng));
        EnvironmentParams a;
        a.spreading_k = 1.0;
        EnvironmentParams b;
        b.spreading_k = 2.0;
        CHECK(optimal_frequency(DistanceKm(l), a, g).value ==
              optimal_frequency(DistanceKm(l), b, g).value);
    }
}
