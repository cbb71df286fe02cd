#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>

#include "latsq/bessel.hpp"
#include "latsq/numeric.hpp"
#include "latsq/quantum.hpp"

using namespace latsq;

TEST_CASE("free evolution: identity at dtau = 0, pure phase on a plane wave") {
    auto s = plane_wave(2, 0.0, 8);
    const auto s0 = s;
    free_evolve_in_place(s, 0.0);
    CHECK(s.c == s0.c);

    free_evolve_in_place(s, 1.7);
    CHECK(std::abs(std::abs(s.at(2)) - 1.0) < 1e-15);
    CHECK(localization_factor(s) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("free evolution revives after 4 pi") {
    auto s = kick(plane_wave(0, 0.0, 40), 2.0);
    free_evolve_in_place(s, 0.9);
    const double L0 = localization_factor(s);
    const auto d0 = spatial_density_quantum(s, periodic_grid(64));
    auto s2 = free_evolve(s, 2.0 * two_pi);
    CHECK(std::abs(localization_factor(s2) - L0) < 1e-10);
    const auto d1 = spatial_density_quantum(s2, periodic_grid(64));
    for (std::size_t i = 0; i < d0.f.size(); ++i) CHECK(std::abs(d0.f[i] - d1.f[i]) < 1e-10);
}

TEST_CASE("kick on a plane wave populates |c_n|^2 = J_n(P)^2") {
    const auto s = kick(plane_wave(0, 0.0, 30), 1.0);
    CHECK(std::norm(s.at(0)) == doctest::Approx(0.58552749951366402).epsilon(1e-13));
    const auto j = bessel_j_sequence(6, 1.0);
    for (int n = 0; n <= 6; ++n) {
        CHECK(std::norm(s.at(n)) == doctest::Approx(j[static_cast<std::size_t>(n)] *
                                                    j[static_cast<std::size_t>(n)])
                                        .epsilon(1e-12));
        CHECK(std::norm(s.at(-n)) == doctest::Approx(std::norm(s.at(n))).epsilon(1e-12));
    }
    CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("kick with P = 0 is the identity") {
    auto s = kick(plane_wave(1, 0.25, 20), 1.0);
    const auto before = s;
    kick_in_place(s, 0.0);
    for (int n = -20; n <= 20; ++n) CHECK(std::abs(s.at(n) - before.at(n)) < 1e-15);
}

TEST_CASE("back-to-back kicks merge like one kick of the summed strength") {
    const int n_max = required_n_max(0, 3.0);
    auto a = plane_wave(0, 0.1, n_max);
    kick_in_place(a, 1.0);
    kick_in_place(a, 2.0);
    const auto b = kick(plane_wave(0, 0.1, n_max), 3.0);
    for (int n = -n_max; n <= n_max; ++n) CHECK(std::abs(a.at(n) - b.at(n)) < 1e-10);
}

TEST_CASE("norm drift stays below 1e-12 per operation, 1e-9 per thousand") {
    const int n_ops = 1000;
    auto s = plane_wave(0, 0.0, required_n_max(0, 0.5 * n_ops / 2 + 2));
    double worst = 0.0;
    for (int i = 0; i < n_ops / 2; ++i) {
        kick_in_place(s, 0.5);
        worst = std::max(worst, std::abs(s.norm_squared() - 1.0));
        free_evolve_in_place(s, 2.0 * two_pi);  // full revival keeps support bounded
        worst = std::max(worst, std::abs(s.norm_squared() - 1.0));
    }
    CHECK(worst < 1e-12 * n_ops);  // cumulative bound
    CHECK(std::abs(s.norm_squared() - 1.0) < 1e-9);
}

TEST_CASE("localization factor of simple states") {
    CHECK(localization_factor(plane_wave(3, 0.0, 10)) == doctest::Approx(1.0));
    // c_0 = sqrt(0.8), c_{+-1} = sqrt(0.1): L = 1 - 2 sqrt(0.08)
    QuantumState s;
    s.n_max = 2;
    s.nu0 = 0.0;
    s.c.assign(5, {0.0, 0.0});
    s.at(0) = std::sqrt(0.8);
    s.at(1) = std::sqrt(0.1);
    s.at(-1) = std::sqrt(0.1);
    CHECK(localization_factor(s) == doctest::Approx(0.43431457505076198).epsilon(1e-14));
}

TEST_CASE("localization_factor_after agrees with evolve-then-measure") {
    auto s = kick(plane_wave(1, -0.3, 25), 1.5);
    free_evolve_in_place(s, 0.4);
    for (double dt : {0.0, 0.3, 1.9, 7.7}) {
        const double peek = localization_factor_after(s, dt);
        const double moved = localization_factor(free_evolve(s, dt));
        CHECK(peek == doctest::Approx(moved).epsilon(1e-13));
    }
}

TEST_CASE("closed single-kick localization factor") {
    CHECK(localization_closed_single_kick(0.0, 3.0, 0.7) == doctest::Approx(1.0));
    // half revival null: sin(tau/2) = 0
    CHECK(localization_closed_single_kick(two_pi, 5.0, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // P = 10 optimum: 2 P sin(tau/2) hits the first maximum of J_1
    CHECK(localization_closed_single_kick(0.18437943893823540, 10.0, 0.0) ==
          doctest::Approx(0.41813477571840362).epsilon(1e-12));
}

TEST_CASE("closed thermal localization factor") {
    // huge sigma wipes the contrast
    CHECK(localization_closed_thermal(1.0, 1.0, 50.0) == doctest::Approx(1.0).epsilon(1e-12));
    // P = 0.5 optimum sits at tau = pi with L = 1 - J_1(1)
    CHECK(localization_closed_thermal(pi, 0.5, 0.0) ==
          doctest::Approx(0.55994941425506648).epsilon(1e-12));
    // short-time limit reduces to the classical form with tau -> P tau
    for (double P : {0.5, 2.0, 10.0}) {
        for (double tau : {0.01, 0.05, 0.1}) {
            for (double sigma : {0.0, 0.5}) {
                const double quantum = localization_closed_thermal(tau, P, sigma);
                const double classical =
                    1.0 - std::exp(-0.5 * sigma * sigma * tau * tau) * bessel_j1(P * tau);
                CHECK(std::abs(quantum - classical) <= 1e-3);
            }
        }
    }
}

TEST_CASE("thermal momentum grid: sigma = 1 needs integer offsets up to 6") {
    CHECK(thermal_n0_halfwidth(1.0) == 6);
    CHECK(thermal_n0_halfwidth(0.0) == 0);
    const auto members = thermal_members(1.0, 32);
    double mass = 0.0;
    for (const auto& m : members) mass += m.weight;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(mass <= 1.0 + 1e-12);
}

TEST_CASE("thermal average of a single kick matches the closed form to 1e-8") {
    const double P = 1.0, sigma = 0.7;
    std::vector<double> times{0.4, 1.3, 2.9, 5.5};
    const auto member = [&](int n0, double nu0) {
        auto s = kick(plane_wave(n0, nu0, required_n_max(n0, P)), P);
        std::vector<double> out;
        for (double t : times) out.push_back(localization_factor_after(s, t));
        return out;
    };
    const auto avg = thermal_average(sigma, times.size(), member);
    for (std::size_t i = 0; i < times.size(); ++i)
        CHECK(std::abs(avg[i] - localization_closed_thermal(times[i], P, sigma)) < 1e-8);

    const auto via_spec = thermal_average(ThermalSpec(sigma), times.size(), member);
    CHECK(via_spec == avg);
}

TEST_CASE("quantum density: plane wave is uniform, kicked state stays normalized and even") {
    const auto grid = periodic_grid(512);
    const auto flat = spatial_density_quantum(plane_wave(0, 0.2, 10), grid);
    for (double f : flat.f) CHECK(f == doctest::Approx(1.0 / two_pi).epsilon(1e-12));

    auto s = kick(plane_wave(0, 0.0, required_n_max(0, 10.0)), 10.0);
    free_evolve_in_place(s, 0.18437943893823540);
    const auto d = spatial_density_quantum(s, grid);
    CHECK(d.integral() == doctest::Approx(1.0).epsilon(1e-8));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t mirror = grid.size() - 1 - i;  // midpoint grid is symmetric
        CHECK(std::abs(d.f[i] - d.f[mirror]) < 1e-10);
    }
}

TEST_CASE("strong kick at maximal squeezing gives a bimodal rainbow profile") {
    auto s = kick(plane_wave(0, 0.0, required_n_max(0, 10.0)), 10.0);
    free_evolve_in_place(s, 0.18437943893823540);
    const auto grid = periodic_grid(1024);
    const auto d = spatial_density_quantum(s, grid);
    const double fmax = *std::max_element(d.f.begin(), d.f.end());
    int dominant = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t l = (i + grid.size() - 1) % grid.size();
        const std::size_t r = (i + 1) % grid.size();
        if (d.f[i] > d.f[l] && d.f[i] >= d.f[r] && d.f[i] > 0.6 * fmax) ++dominant;
    }
    CHECK(dominant == 2);
}

TEST_CASE("weak kick on a warm ensemble gives one broad central hump") {
    const auto grid = periodic_grid(512);
    const double P = 1.0;
    const auto d = spatial_density_thermal(0.5, grid, [&](int n0, double nu0) {
        auto s = kick(plane_wave(n0, nu0, required_n_max(n0, P)), P);
        free_evolve_in_place(s, 1.0 / P);  // classical focal time
        return s;
    });
    CHECK(d.integral() == doctest::Approx(1.0).epsilon(1e-8));
    const double fmax = *std::max_element(d.f.begin(), d.f.end());
    int dominant = 0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t l = (i + grid.size() - 1) % grid.size();
        const std::size_t r = (i + 1) % grid.size();
        if (d.f[i] > d.f[l] && d.f[i] >= d.f[r] && d.f[i] > 0.5 * fmax) {
            ++dominant;
            arg = i;
        }
    }
    CHECK(dominant == 1);
    CHECK(std::abs(grid[arg]) < 0.2);  // centered on the potential minimum
}

TEST_CASE("undersized basis is rejected with a growth hint") {
    auto s = plane_wave(0, 0.0, 5);
    CHECK_THROWS_AS(kick_in_place(s, 10.0), BasisTooSmall);
    try {
        kick_in_place(s, 10.0);
    } catch (const BasisTooSmall& e) {
        CHECK(e.suggested_n_max == 10);
        CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));  // state unharmed
    }
}

TEST_CASE("run_quantum: empty sequence is flat, single kick matches the closed form") {
    std::vector<double> times{0.5, 1.0, 3.0, 6.0, 9.0, 12.0};
    const auto flat = run_quantum(PulseSequence{}, 0.5, times);
    for (const auto& smp : flat.samples()) CHECK(smp.L == doctest::Approx(1.0).epsilon(1e-10));

    for (double sigma : {0.0, 0.2}) {
        const auto tr = run_quantum(single_kick(1.0), sigma, times);
        for (const auto& smp : tr.samples())
            CHECK(std::abs(smp.L - localization_closed_thermal(smp.tau, 1.0, sigma)) < 1e-8);
    }
}

TEST_CASE("quantum-classical correspondence for a strong kick at short times") {
    auto s = kick(plane_wave(0, 0.0, required_n_max(0, 10.0)), 10.0);
    for (double tau = 0.02; tau <= 0.2001; tau += 0.02) {
        const double quantum = localization_factor_after(s, tau);
        const double classical = 1.0 - bessel_j1(10.0 * tau);
        CHECK(std::abs(quantum - classical) <= 0.02);
    }
}
