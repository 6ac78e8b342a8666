#include <doctest.h>

#include <random>

#include "loramab/phy.hpp"

using namespace loramab;

TEST_CASE("data rate worked values") {
    PhyConfig cfg;
    CHECK(data_rate(7, cfg) == doctest::Approx(5468.75));
    CHECK(data_rate(12, cfg) == doctest::Approx(292.96875));
    for (int c = 7; c < 12; ++c) CHECK(data_rate(c, cfg) > data_rate(c + 1, cfg));
    CHECK_THROWS_AS(data_rate(6, cfg), std::invalid_argument);
    CHECK_THROWS_AS(data_rate(13, cfg), std::invalid_argument);
}

TEST_CASE("airtime worked values and linearity") {
    PhyConfig cfg;
    CHECK(airtime(7, 20, cfg) == doctest::Approx(160.0 / 5468.75));
    CHECK(airtime(12, 20, cfg) == doctest::Approx(0.546133).epsilon(1e-5));
    CHECK(airtime(9, 40, cfg) == doctest::Approx(2.0 * airtime(9, 20, cfg)));
}

TEST_CASE("tx energy worked values") {
    PhyConfig cfg;  // eta=2, P_o=10 dBm
    CHECK(tx_energy(Action{14.0, 0, 7, 1}, 20, cfg) == doctest::Approx(1.763e-3).epsilon(1e-3));
    CHECK(tx_energy(Action{8.0, 0, 7, 1}, 20, cfg) == doctest::Approx(6.618e-4).epsilon(1e-3));
    CHECK(tx_energy(Action{14.0, 0, 7, 2}, 20, cfg) ==
          doctest::Approx(2.0 * tx_energy(Action{14.0, 0, 7, 1}, 20, cfg)));
}

TEST_CASE("tx energy monotone in power, code and repetitions") {
    PhyConfig cfg;
    std::mt19937_64 rng(4);
    const double powers[] = {2, 5, 8, 11, 14};
    for (int i = 0; i < 200; ++i) {
        const double p = powers[rng() % 5];
        const int c = 7 + int(rng() % 6);
        const int m = 1 + int(rng() % 3);
        const double e = tx_energy(Action{p, 0, c, m}, 20, cfg);
        if (p < 14) CHECK(tx_energy(Action{p + 3, 0, c, m}, 20, cfg) > e);
        if (c < 12) CHECK(tx_energy(Action{p, 0, c + 1, m}, 20, cfg) > e);
        CHECK(tx_energy(Action{p, 0, c, m + 1}, 20, cfg) > e);
    }
}

TEST_CASE("snr threshold table") {
    PhyConfig cfg;
    CHECK(snr_threshold(7, cfg) == -6.0);
    CHECK(snr_threshold(10, cfg) == -15.0);
    CHECK(snr_threshold(12, cfg) == -20.0);
    CHECK_THROWS_AS(snr_threshold(6, cfg), std::invalid_argument);
    for (int c = 7; c < 12; ++c) CHECK(snr_threshold(c, cfg) > snr_threshold(c + 1, cfg));
}

TEST_CASE("received power") {
    PhyConfig cfg;
    cfg.path_gain = 1.0;
    CHECK(received_power(14.0, 100.0, 0.0, cfg) == 0.0);
    const double p1 = received_power(14.0, 100.0, 1.0, cfg);
    CHECK(p1 == doctest::Approx(0.0251189 * 1e-8).epsilon(1e-4));
    CHECK(received_power(14.0, 200.0, 1.0, cfg) == doctest::Approx(p1 / 16.0));
}

TEST_CASE("dbm/watts round trip") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-60.0, 40.0);
    for (int i = 0; i < 1000; ++i) {
        const double dbm = u(rng);
        CHECK(watts_to_dbm(dbm_to_watts(dbm)) == doctest::Approx(dbm).epsilon(1e-12));
    }
}

TEST_CASE("action space enumeration and energy floor") {
    PhyConfig phy;
    ActionSpaceConfig cfg;
    cfg.powers_dbm = {2, 5, 8, 11, 14};
    cfg.subchannels = 3;
    cfg.codes = {7, 8, 9, 10, 11, 12};
    cfg.repetitions = {1};
    const ActionSpace space = build_action_space(cfg, 20, phy);
    CHECK(space.size() == 90);  // 5 x 3 x 6 x 1
    double mn = 1e30;
    for (double e : space.energy_j) {
        CHECK(e > 0.0);
        mn = std::min(mn, e);
    }
    CHECK(space.e_min_j == mn);
    CHECK(space.e_min_j == doctest::Approx(tx_energy(Action{2.0, 0, 7, 1}, 20, phy)));
}

TEST_CASE("phy config validation") {
    PhyConfig bad;
    bad.snr_thresholds_db[9] = 0.0;  // breaks strict decrease
    CHECK_THROWS(bad.validate());
    PhyConfig ok;
    CHECK_NOTHROW(ok.validate());
}
