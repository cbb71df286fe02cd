#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "latsq/classical.hpp"
#include "latsq/numeric.hpp"
#include "latsq/rng.hpp"

using namespace latsq;

TEST_CASE("kick: v' = v - sin x") {
    ClassicalEnsemble e;
    e.x = {pi / 2.0, 0.0, -pi / 2.0};
    e.v = {0.0, 0.37, 0.3};
    kick_in_place(e);
    CHECK(e.v[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(e.v[1] == doctest::Approx(0.37).epsilon(1e-15));  // force-free at the minimum
    CHECK(e.v[2] == doctest::Approx(1.3).epsilon(1e-15));
    CHECK(e.x[0] == pi / 2.0);
}

TEST_CASE("drift: x' = x + v dtau wrapped into [-pi, pi)") {
    ClassicalEnsemble e;
    e.x = {0.0, 0.5, 0.0};
    e.v = {1.0, 0.0, 2.0};
    drift_in_place(e, pi);
    CHECK(e.x[0] == -pi);  // +pi wraps to -pi
    CHECK(e.x[1] == 0.5);
    drift_in_place(e, pi);  // second particle still pinned, third at two full turns
    CHECK(e.x[1] == 0.5);
    CHECK(std::abs(e.x[2]) < 1e-12);
    CHECK_THROWS_AS(drift_in_place(e, -0.1), std::domain_error);
}

TEST_CASE("sample_thermal is deterministic and matches the requested width") {
    const auto a = sample_thermal(1000, 0.5, 42);
    const auto b = sample_thermal(1000, 0.5, 42);
    CHECK(a.x == b.x);
    CHECK(a.v == b.v);
    const auto c = sample_thermal(1000, 0.5, 43);
    CHECK(c.x != a.x);

    const auto z = sample_thermal(100, 0.0, 7);
    CHECK(std::all_of(z.v.begin(), z.v.end(), [](double v) { return v == 0.0; }));
    CHECK(std::all_of(z.x.begin(), z.x.end(), [](double x) { return x >= -pi && x < pi; }));

    CHECK_THROWS_AS(sample_thermal(0, 0.5, 1), std::domain_error);

    // sd of 1e6 Gaussian draws: standard error of the sd is sigma/sqrt(2n)
    const auto big = sample_thermal(1000000, 0.5, 2024);
    double ss = 0.0;
    for (double v : big.v) ss += v * v;
    const double sd = std::sqrt(ss / static_cast<double>(big.size()));
    CHECK(sd > 0.4985);
    CHECK(sd < 0.5015);
}

TEST_CASE("localization factor: uniform ensemble sits at 1, point ensemble at 0") {
    const auto u = sample_thermal(1000000, 0.0, 5);
    CHECK(std::abs(localization_factor_mc(u) - 1.0) < 3.0 / std::sqrt(1e6));

    ClassicalEnsemble point;
    point.x.assign(100, 0.0);
    point.v.assign(100, 0.0);
    CHECK(localization_factor_mc(point) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("single cold kick reaches L = 0.42 at tau = 1.84") {
    auto e = sample_thermal(1000000, 0.0, 11);
    kick_in_place(e);
    drift_in_place(e, 1.84);
    CHECK(localization_factor_mc(e) == doctest::Approx(0.42).epsilon(0.025));
}

TEST_CASE("closed-form localization factor") {
    CHECK(localization_factor_closed(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    // global minimum at the first maximum of J_1 (mpmath references)
    CHECK(localization_factor_closed(1.8411837813406593, 0.0) ==
          doctest::Approx(0.41813477571840362).epsilon(1e-13));
    // sigma = 1, tau = 2: 1 - e^{-2} J_1(2)
    CHECK(localization_factor_closed(2.0, 1.0) ==
          doctest::Approx(0.92194878479264254).epsilon(1e-13));
    CHECK_THROWS_AS(localization_factor_closed(-1.0, 0.0), std::domain_error);
}

TEST_CASE("rainbow positions") {
    const auto at_focus = rainbow_positions(1.0);
    CHECK(at_focus.first == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(at_focus.second == doctest::Approx(0.0).epsilon(1e-12));

    const auto r = rainbow_positions(std::sqrt(2.0));
    CHECK(r.first == doctest::Approx(-0.21460183660255169).epsilon(1e-13));
    CHECK(r.second == doctest::Approx(0.21460183660255169).epsilon(1e-13));

    CHECK_THROWS_AS(rainbow_positions(0.999), std::domain_error);
}

TEST_CASE("rainbow positions sit on the Monte Carlo density peaks") {
    const double tau = 3.0;
    auto e = sample_thermal(10000000, 0.0, 17);
    kick_in_place(e);
    drift_in_place(e, tau);
    const auto hist = histogram_density(e, 256);
    const auto peaks = rainbow_positions(tau);
    const double h = two_pi / 256.0;

    for (double xc : {peaks.first, peaks.second}) {
        // highest histogram bin within +-5 bins of the predicted caustic
        double best = -1.0;
        double best_x = 0.0;
        for (std::size_t i = 0; i < hist.grid.size(); ++i) {
            if (std::abs(wrap_angle(hist.grid[i] - xc)) < 5.0 * h && hist.f[i] > best) {
                best = hist.f[i];
                best_x = hist.grid[i];
            }
        }
        CHECK(std::abs(wrap_angle(best_x - xc)) <= 1.5 * h);
        CHECK(best > 1.0);  // far above the 1/(2 pi) background
    }
}

TEST_CASE("asymptotic rainbow velocity approaches 1") {
    const auto abs_xc = [](double tau) { return std::sqrt(tau * tau - 1.0) - std::acos(1.0 / tau); };
    for (double tau : {50.0, 100.0}) {
        const double v = (abs_xc(tau + 0.5) - abs_xc(tau - 0.5));
        CHECK(std::abs(v - 1.0) < 1e-2);
    }
}

TEST_CASE("branch enumeration: single branch before focus, three between caustics") {
    // tau = 0.5, x = 0: only x0 = 0, derivative 1 - tau
    const auto roots = branch_roots(0.5, 0.0);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(0.0).epsilon(1e-10));

    const double tau = 2.0;
    const auto caustics = rainbow_positions(tau);
    const double xc = caustics.second;  // +0.6849
    CHECK(branch_roots(tau, xc - 0.05).size() == 3);
    CHECK(branch_roots(tau, xc + 0.05).size() == 1);
    CHECK(branch_roots(tau, -xc + 0.05).size() == 3);
    CHECK(branch_roots(tau, -xc - 0.05).size() == 1);
}

TEST_CASE("spatial density: uniform at tau = 0 and analytic single-branch value") {
    const auto grid = periodic_grid(128);
    const auto d0 = spatial_density(0.0, 0.0, grid);
    for (double f : d0.f) CHECK(f == doctest::Approx(1.0 / two_pi).epsilon(1e-10));
    const auto dt = spatial_density(0.0, 0.7, grid);
    for (double f : dt.f) CHECK(f == doctest::Approx(1.0 / two_pi).epsilon(1e-8));

    // sigma = 0, tau = 0.5 at x = 0: f = 1 / (2 pi |1 - tau|)
    const std::vector<double> probe{0.0};
    const auto d = spatial_density(0.5, 0.0, probe);
    CHECK(d.f[0] == doctest::Approx(1.0 / (two_pi * 0.5)).epsilon(1e-10));
}

TEST_CASE("thermal spatial density integrates to 1 and matches Monte Carlo") {
    const double tau = 1.0, sigma = 0.1;
    const auto grid = periodic_grid(4096);
    const auto d = spatial_density(tau, sigma, grid);
    CHECK(d.integral() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(*std::min_element(d.f.begin(), d.f.end()) >= 0.0);
    // finite central peak (no singularity at finite temperature)
    CHECK(*std::max_element(d.f.begin(), d.f.end()) < 10.0);

    const std::size_t n = 10000000;
    auto e = sample_thermal(n, sigma, 23);
    kick_in_place(e);
    drift_in_place(e, tau);
    const std::size_t bins = 128;
    const std::size_t sub = 9;  // histogram estimates bin averages, so average the oracle too
    const auto hist = histogram_density(e, bins);
    const double h = two_pi / static_cast<double>(bins);
    const auto fine = spatial_density(tau, sigma, periodic_grid(bins * sub));
    for (std::size_t i = 0; i < bins; ++i) {
        double avg = 0.0;
        for (std::size_t j = 0; j < sub; ++j) avg += fine.f[i * sub + j];
        avg /= static_cast<double>(sub);
        const double se = std::sqrt(std::max(avg, 1e-12) / (static_cast<double>(n) * h));
        CHECK(std::abs(hist.f[i] - avg) <= 3.0 * se + 2e-4);
    }
}

TEST_CASE("warm density at maximal squeezing shows the two rainbow humps") {
    const double tau = 1.84, sigma = 0.1;
    const auto grid = periodic_grid(512);
    const auto d = spatial_density(tau, sigma, grid);
    const double fmax = *std::max_element(d.f.begin(), d.f.end());
    const auto caustics = rainbow_positions(tau);
    int humps = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t l = (i + grid.size() - 1) % grid.size();
        const std::size_t r = (i + 1) % grid.size();
        if (d.f[i] > d.f[l] && d.f[i] >= d.f[r] && d.f[i] > 0.6 * fmax) {
            ++humps;
            const double near = std::min(std::abs(grid[i] - caustics.first),
                                         std::abs(grid[i] - caustics.second));
            CHECK(near < 0.2);  // humps sit by the caustic positions
        }
    }
    CHECK(humps == 2);
}

TEST_CASE("cold spatial density integrates to 1 away from the caustics") {
    const double tau = 1.84;
    const auto caustics = rainbow_positions(tau);
    const double keep_out = 0.01;
    const std::size_t n_grid = 32768;
    const auto grid = periodic_grid(n_grid);
    const auto d = spatial_density(tau, 0.0, grid);

    const auto included = [&](double x) {
        return std::abs(wrap_angle(x - caustics.first)) >= keep_out &&
               std::abs(wrap_angle(x - caustics.second)) >= keep_out;
    };
    NeumaierSum s;
    for (std::size_t i = 0; i < n_grid; ++i)
        if (included(grid[i])) s.add(d.f[i]);
    const double quad = s.value() * two_pi / static_cast<double>(n_grid);

    // reference mass of the included set: the flow is measure preserving, so
    // it equals the fraction of uniformly drawn x0 whose image lands inside
    const std::size_t n0 = 4000000;
    std::size_t inside = 0;
    for (std::size_t i = 0; i < n0; ++i) {
        const double x0 = -pi + two_pi * (static_cast<double>(i) + 0.5) / static_cast<double>(n0);
        if (included(wrap_angle(x0 - tau * std::sin(x0)))) ++inside;
    }
    const double expected = static_cast<double>(inside) / static_cast<double>(n0);
    CHECK(quad == doctest::Approx(expected).epsilon(1.5e-3));
}

TEST_CASE("drift preserves a uniform phase-space distribution (chi-squared)") {
    const std::size_t n = 1000000;
    Xoshiro256pp rng(314159);
    ClassicalEnsemble e;
    e.x.resize(n);
    e.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        e.x[i] = rng.uniform_angle();
        e.v[i] = -2.0 + 4.0 * rng.uniform01();
    }
    drift_in_place(e, 0.7);

    const std::size_t bins = 64;
    std::vector<double> counts(bins, 0.0);
    const double h = two_pi / static_cast<double>(bins);
    for (double x : e.x) {
        auto b = static_cast<std::size_t>((x + pi) / h);
        if (b >= bins) b = bins - 1;
        counts[b] += 1.0;
    }
    const double expect = static_cast<double>(n) / static_cast<double>(bins);
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - expect) * (c - expect) / expect;

    // 99% quantile of chi-squared with 63 dof via Wilson-Hilferty
    const double df = static_cast<double>(bins - 1);
    const double z = 2.3263478740408408;
    const double crit = df * std::pow(1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df)), 3.0);
    CHECK(chi2 < crit);
}

TEST_CASE("kick and drift have unit phase-space Jacobian") {
    Xoshiro256pp rng(2718);
    const double eps = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
        const double x = rng.uniform_angle();
        const double v = -1.5 + 3.0 * rng.uniform01();
        const double dt = 2.0 * rng.uniform01();
        const auto map = [dt](double x0, double v0) {
            const double v1 = v0 - std::sin(x0);          // kick
            return std::pair{x0 + v1 * dt, v1};           // then drift (unwrapped)
        };
        const auto [xp, vp] = map(x + eps, v);
        const auto [xm, vm] = map(x - eps, v);
        const auto [xq, vq] = map(x, v + eps);
        const auto [xr, vr] = map(x, v - eps);
        const double dxdx = (xp - xm) / (2 * eps), dvdx = (vp - vm) / (2 * eps);
        const double dxdv = (xq - xr) / (2 * eps), dvdv = (vq - vr) / (2 * eps);
        CHECK(std::abs(dxdx * dvdv - dxdv * dvdx - 1.0) < 1e-6);
    }
}

TEST_CASE("run_classical: empty sequence stays uniform") {
    const std::vector<double> times{0.5, 1.0, 2.0, 4.0};
    const auto trace = run_classical(PulseSequence{}, 0.3, 200000, times, 99);
    for (const auto& s : trace.samples()) CHECK(std::abs(s.L - 1.0) < 3.0 / std::sqrt(2e5));
}

TEST_CASE("run_classical single kick tracks the closed form") {
    const std::size_t n = 1000000;
    std::vector<double> times;
    for (int i = 1; i <= 30; ++i) times.push_back(0.2 * i);
    for (double sigma : {0.0, 0.2, 1.0}) {
        const auto trace = run_classical(single_kick(), sigma, n, times, 4242);
        // reuse one ensemble per sigma for the error bars
        auto e = sample_thermal(n, sigma, 4242);
        kick_in_place(e);
        double prev = 0.0;
        for (const auto& s : trace.samples()) {
            drift_in_place(e, s.tau - prev);
            prev = s.tau;
            const auto stats = cos_statistics(e);
            const double se = stats.stddev / std::sqrt(static_cast<double>(n));
            CHECK(std::abs(s.L - localization_factor_closed(s.tau, sigma)) <= 4.0 * se);
        }
    }
}

TEST_CASE("quadrature ensemble reproduces the closed form exactly") {
    QuadratureEnsemble cold(0.0);
    cold.kick();
    CHECK(cold.localization_after(1.8411837813406593) ==
          doctest::Approx(0.41813477571840362).epsilon(1e-12));
    CHECK(cold.localization_after(1.0) == doctest::Approx(0.55994941425506648).epsilon(1e-12));

    QuadratureEnsemble warm(0.5, 2048, 64);
    warm.kick();
    for (double tau : {0.5, 1.0, 2.0, 4.0}) {
        CHECK(warm.localization_after(tau) ==
              doctest::Approx(localization_factor_closed(tau, 0.5)).epsilon(1e-9));
    }
}
