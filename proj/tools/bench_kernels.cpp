#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "anisostable/density.hpp"
#include "anisostable/harmonic.hpp"
#include "anisostable/simulate.hpp"
#include "anisostable/symbol.hpp"

using namespace astab;

namespace {

double time_once(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const std::string& name, const std::function<void(ExecMode)>& fn) {
    fn(ExecMode::serial); // warm caches and tables
    const double ts = time_once([&] { fn(ExecMode::serial); });
    const double tp = time_once([&] { fn(ExecMode::parallel); });
    std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %.2fx\n", name.c_str(),
                ts, tp, ts / tp);
}

} // namespace

int main() {
    const ModelParams iso = make_isotropic_model(1.0);
    const ModelParams prod =
        make_atomic_model(2, 1.0, {{vec2(1, 0), 2.0 / M_PI}, {vec2(0, 1), 2.0 / M_PI}});

    row("density-grid N=512", [&](ExecMode mode) {
        GridSpec g;
        g.extent = 32.0;
        g.points_per_axis = 512;
        density_grid(prod, g, MultiIndex{}, mode);
    });

    row("exit-ensemble n=20000", [&](ExecMode mode) {
        SimScheme s;
        s.mode = SimMode::jump_split;
        s.eps = 1e-3;
        s.seed = 5;
        s.bias_budget = 1.0;
        expected_exit_time(iso, s, Domain::ball({0, 0, 0}, 1.0), {0, 0, 0}, 20000, mode);
    });

    row("exit-ensemble atomic n=20000", [&](ExecMode mode) {
        SimScheme s;
        s.mode = SimMode::atomic_exact;
        s.seed = 5;
        expected_exit_time(prod, s, Domain::ball({0, 0, 0}, 1.0), {0, 0, 0}, 20000, mode);
    });

    row("poisson-eval n_mc=20000", [&](ExecMode mode) {
        SimScheme s;
        s.mode = SimMode::jump_split;
        s.eps = 1e-3;
        s.seed = 6;
        s.bias_budget = 1.0;
        PoissonEstimator pe(iso, s, {0, 0, 0}, 20000, mode);
        pe.eval(vec2(2, 0));
    });

    return 0;
}
