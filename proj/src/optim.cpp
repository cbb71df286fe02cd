#include "latsq/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "latsq/rng.hpp"

namespace latsq {

ScalarMin golden_section(const Objective1D& f, double a, double b, double xtol) {
    constexpr double inv_phi = 0.6180339887498949;
    long evals = 0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    evals += 2;
    while (std::abs(b - a) > xtol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++evals;
    }
    ScalarMin r;
    if (fc < fd) {
        r.x = c;
        r.f = fc;
    } else {
        r.x = d;
        r.f = fd;
    }
    r.evaluations = evals;
    return r;
}

ScalarMin first_local_min(const Objective1D& f, double t0, double step, double tmax,
                          double xtol) {
    long evals = 0;
    double t = t0;
    double ft = f(t);
    ++evals;
    bool descended = false;
    while (t - t0 <= tmax) {
        const double tn = t + step;
        const double fn = f(tn);
        ++evals;
        if (fn < ft) descended = true;
        if (descended && fn > ft) {
            ScalarMin r = golden_section(f, std::max(t0, t - step), tn, xtol);
            r.evaluations += evals;
            return r;
        }
        t = tn;
        ft = fn;
    }
    throw BracketError("first_local_min: no dip bracketed in [" + std::to_string(t0) + ", " +
                       std::to_string(t0 + tmax) + "] with step " + std::to_string(step));
}

ScalarMin scan_min(const Objective1D& f, double a, double b, double step, double xtol) {
    long evals = 0;
    double best_t = a;
    double best_f = f(a);
    ++evals;
    for (double t = a + step; t <= b + 1e-15; t += step) {
        const double v = f(t);
        ++evals;
        if (v < best_f) {
            best_f = v;
            best_t = t;
        }
    }
    ScalarMin r = golden_section(f, std::max(a, best_t - step), std::min(b, best_t + step), xtol);
    r.evaluations += evals;
    if (best_f < r.f) {
        r.x = best_t;
        r.f = best_f;
    }
    return r;
}

SimplexResult nelder_mead(const ObjectiveND& f, const std::vector<double>& x0,
                          const SimplexOptions& opts) {
    const std::size_t dim = x0.size();
    const std::size_t np = dim + 1;
    std::vector<std::vector<double>> simplex(np, x0);
    std::vector<double> fv(np);
    long evals = 0;

    for (std::size_t i = 1; i < np; ++i)
        simplex[i][i - 1] += opts.initial_step;
    for (std::size_t i = 0; i < np; ++i) {
        fv[i] = f(simplex[i]);
        ++evals;
    }

    std::vector<std::size_t> order(np);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> s2(np);
        std::vector<double> f2(np);
        for (std::size_t i = 0; i < np; ++i) {
            s2[i] = simplex[order[i]];
            f2[i] = fv[order[i]];
        }
        simplex.swap(s2);
        fv.swap(f2);
    };
    sort_simplex();

    std::vector<double> centroid(dim), xr(dim), xe(dim), xc(dim);
    while (evals < opts.max_evaluations) {
        // convergence: simplex extent and function spread
        double xspread = 0.0;
        for (std::size_t i = 1; i < np; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                xspread = std::max(xspread, std::abs(simplex[i][j] - simplex[0][j]));
        if (xspread < opts.xatol && std::abs(fv[np - 1] - fv[0]) < opts.fatol) break;

        for (std::size_t j = 0; j < dim; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i + 1 < np; ++i) s += simplex[i][j];
            centroid[j] = s / static_cast<double>(dim);
        }
        for (std::size_t j = 0; j < dim; ++j) xr[j] = centroid[j] + (centroid[j] - simplex[np - 1][j]);
        const double fr = f(xr);
        ++evals;
        if (fr < fv[0]) {
            for (std::size_t j = 0; j < dim; ++j)
                xe[j] = centroid[j] + 2.0 * (centroid[j] - simplex[np - 1][j]);
            const double fe = f(xe);
            ++evals;
            if (fe < fr) {
                simplex[np - 1] = xe;
                fv[np - 1] = fe;
            } else {
                simplex[np - 1] = xr;
                fv[np - 1] = fr;
            }
        } else if (fr < fv[np - 2]) {
            simplex[np - 1] = xr;
            fv[np - 1] = fr;
        } else {
            const bool outside = fr < fv[np - 1];
            for (std::size_t j = 0; j < dim; ++j) {
                const double towards = outside ? xr[j] : simplex[np - 1][j];
                xc[j] = centroid[j] + 0.5 * (towards - centroid[j]);
            }
            const double fcv = f(xc);
            ++evals;
            if (fcv < std::min(fr, fv[np - 1])) {
                simplex[np - 1] = xc;
                fv[np - 1] = fcv;
            } else {
                for (std::size_t i = 1; i < np; ++i) {
                    for (std::size_t j = 0; j < dim; ++j)
                        simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                    fv[i] = f(simplex[i]);
                    ++evals;
                }
            }
        }
        sort_simplex();
    }

    SimplexResult r;
    r.x = simplex[0];
    r.f = fv[0];
    r.evaluations = evals;
    return r;
}

std::vector<std::vector<double>> latin_hypercube(int count, int dim, double lo, double hi,
                                                 std::uint64_t seed) {
    Xoshiro256pp rng(seed);
    std::vector<std::vector<double>> pts(static_cast<std::size_t>(count),
                                         std::vector<double>(static_cast<std::size_t>(dim)));
    for (int j = 0; j < dim; ++j) {
        std::vector<int> perm(static_cast<std::size_t>(count));
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = count - 1; i > 0; --i) {
            const int k = static_cast<int>(rng.next() % static_cast<std::uint64_t>(i + 1));
            std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(k)]);
        }
        for (int i = 0; i < count; ++i) {
            const double u = (perm[static_cast<std::size_t>(i)] + rng.uniform01()) /
                             static_cast<double>(count);
            pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = lo + (hi - lo) * u;
        }
    }
    return pts;
}

}  // namespace latsq
