#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "anisostable/config.hpp"
#include "anisostable/density.hpp"
#include "anisostable/errors.hpp"
#include "anisostable/harmonic.hpp"
#include "anisostable/levy_measure.hpp"
#include "anisostable/potential.hpp"
#include "anisostable/reports.hpp"
#include "anisostable/simulate.hpp"
#include "anisostable/symbol.hpp"

namespace {

using astab::Vec;

Vec parse_vec(const std::string& s) {
    Vec v{0, 0, 0};
    std::istringstream in(s);
    std::string tok;
    int i = 0;
    while (std::getline(in, tok, ',') && i < 3) v[i++] = std::stod(tok);
    return v;
}

astab::MultiIndex parse_beta(const std::string& s) {
    astab::MultiIndex b;
    std::istringstream in(s);
    std::string tok;
    int i = 0;
    while (std::getline(in, tok, ',') && i < 3) b.k[i++] = std::stoi(tok);
    return b;
}

astab::GridSpec parse_grid(const std::string& s, double t) {
    astab::GridSpec g;
    g.t = t;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw astab::ConfigError("bad --grid, use L=64,N=1024");
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "L")
            g.extent = std::stod(val);
        else if (key == "N")
            g.points_per_axis = std::stoi(val);
        else
            throw astab::ConfigError("bad --grid key: " + key);
    }
    return g;
}

astab::Domain parse_domain(const std::string& s) {
    std::istringstream in(s);
    std::string kind;
    std::getline(in, kind, ':');
    if (kind == "ball") {
        std::string c, r;
        std::getline(in, c, ':');
        std::getline(in, r);
        return astab::Domain::ball(parse_vec(c), std::stod(r));
    }
    if (kind == "annulus") {
        std::string r, R;
        std::getline(in, r, ':');
        std::getline(in, R);
        return astab::Domain::annulus(std::stod(r), std::stod(R));
    }
    throw astab::ConfigError("domain must be ball:cx,cy:r or annulus:r:R");
}

astab::SimScheme make_scheme(const astab::ModelParams& m, const std::string& mode,
                             double eps, std::uint64_t seed) {
    astab::SimScheme s;
    if (mode == "auto")
        s.mode = m.mu.kind == astab::MeasureKind::atomic ? astab::SimMode::atomic_exact
                                                         : astab::SimMode::jump_split;
    else if (mode == "atomic-exact")
        s.mode = astab::SimMode::atomic_exact;
    else if (mode == "jump-split")
        s.mode = astab::SimMode::jump_split;
    else
        throw astab::ConfigError("mode must be auto, atomic-exact or jump-split");
    s.eps = eps;
    s.seed = seed;
    s.bias_budget = 1.0;
    s.dt_max = 0.02;
    s.dt_cal = 0.05;
    return s;
}

void print_estimate(const astab::McEstimate& e) {
    nlohmann::json j;
    j["estimate"] = e.estimate;
    j["stderr"] = e.stderr_;
    j["n"] = e.n;
    j["seed"] = e.seed;
    if (e.high_variance_flag) j["high_variance"] = true;
    std::cout << j.dump() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"anisotropic stable semigroup toolkit"};
    app.require_subcommand(1);

    std::string config, u_str, x_str, v_str, z_str, dir_str, beta_str, out_path, grid_str;
    std::string domain_str = "ball:0,0:1", data_str = "halfplane:1", mode_str = "auto";
    std::string range_str = "0.5:50:32", suite_str = "fast";
    double t = 1.0, eps = 5e-4;
    long n = 100000;
    std::uint64_t seed = 7;

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config, "model config JSON")->required();
    };

    auto* sym = app.add_subcommand("symbol", "evaluate the characteristic exponent");
    add_config(sym);
    sym->add_option("--u", u_str, "frequency vector x,y")->required();

    auto* den = app.add_subcommand("density", "transition density field or point value");
    add_config(den);
    den->add_option("--t", t, "time");
    den->add_option("--grid", grid_str, "grid spec L=64,N=1024");
    den->add_option("--point", x_str, "evaluate at a single point x,y");
    den->add_option("--beta", beta_str, "derivative multi-index i,j");
    den->add_option("--out", out_path, "CSV output path for the field");

    auto* pot = app.add_subcommand("potential", "potential kernel value");
    add_config(pot);
    pot->add_option("--x", x_str, "point x,y")->required();
    pot->add_option("--beta", beta_str, "derivative multi-index i,j");

    auto* prof = app.add_subcommand("potential-profile", "V along a ray");
    add_config(prof);
    prof->add_option("--dir", dir_str, "direction x,y")->required();
    prof->add_option("--r", range_str, "radii lo:hi:n");
    prof->add_option("--out", out_path, "CSV output path");

    auto* exi = app.add_subcommand("exit", "first-exit samples");
    add_config(exi);
    exi->add_option("--domain", domain_str, "ball:cx,cy:r or annulus:r:R");
    exi->add_option("--x0", x_str, "start point")->required();
    exi->add_option("--n", n, "number of paths");
    exi->add_option("--seed", seed, "seed");
    exi->add_option("--mode", mode_str, "auto, atomic-exact or jump-split");
    exi->add_option("--eps", eps, "jump-split truncation radius");
    exi->add_option("--out", out_path, "CSV output path")->required();

    auto* grn = app.add_subcommand("green", "Green function of the unit ball");
    add_config(grn);
    grn->add_option("--x", x_str)->required();
    grn->add_option("--v", v_str)->required();
    grn->add_option("--n", n);
    grn->add_option("--seed", seed);
    grn->add_option("--mode", mode_str);
    grn->add_option("--eps", eps);

    auto* poi = app.add_subcommand("poisson", "Poisson kernel of the unit ball");
    add_config(poi);
    poi->add_option("--x", x_str)->required();
    poi->add_option("--z", z_str)->required();
    poi->add_option("--n", n);
    poi->add_option("--seed", seed);
    poi->add_option("--mode", mode_str);
    poi->add_option("--eps", eps);

    auto* har = app.add_subcommand("harmonic", "harmonic extension of boundary data");
    add_config(har);
    har->add_option("--data", data_str, "halfplane:k, ball:cx,cy:r or cos:k");
    har->add_option("--x", x_str)->required();
    har->add_option("--n", n);
    har->add_option("--seed", seed);
    har->add_option("--mode", mode_str);
    har->add_option("--eps", eps);

    auto* ind = app.add_subcommand("indices", "gamma and regularity indices");
    add_config(ind);

    auto* ver = app.add_subcommand("verify", "run the verification experiments");
    add_config(ver);
    ver->add_option("--suite", suite_str, "fast or full");
    ver->add_option("--seed", seed);
    ver->add_option("--out", out_path, "report directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ver->parsed()) {
            const astab::Suite suite =
                suite_str == "full" ? astab::Suite::full : astab::Suite::fast;
            const astab::ExperimentReport rep =
                astab::run_experiment(config, suite, seed, out_path);
            for (const auto& c : rep.checks)
                std::printf("[%s] %-28s measured=%.6g predicted=%.6g tol=%.2g\n",
                            c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured,
                            c.predicted, c.tolerance);
            if (!rep.validation_error.empty())
                std::fprintf(stderr, "validation error: %s\n", rep.validation_error.c_str());
            return rep.all_pass() ? 0 : 1;
        }

        const astab::ModelParams m = astab::load_model_config(config);

        if (sym->parsed()) {
            std::printf("%.17g\n", astab::char_exponent(m, parse_vec(u_str)));
        } else if (den->parsed()) {
            if (!x_str.empty()) {
                if (beta_str.empty())
                    std::printf("%.17g\n", astab::density_point(m, t, parse_vec(x_str)));
                else
                    std::printf("%.17g\n", astab::density_derivative_point(
                                               m, t, parse_vec(x_str), parse_beta(beta_str)));
            } else {
                astab::GridSpec g =
                    grid_str.empty() ? astab::GridSpec{} : parse_grid(grid_str, t);
                g.t = t;
                const astab::MultiIndex beta =
                    beta_str.empty() ? astab::MultiIndex{} : parse_beta(beta_str);
                const astab::DensityField f = astab::density_grid(m, g, beta);
                std::ostream* os = &std::cout;
                std::ofstream file;
                if (!out_path.empty()) {
                    file.open(out_path);
                    os = &file;
                }
                const int N = g.points_per_axis;
                *os << (m.d == 2 ? "x1,x2,value\n" : "x1,x2,x3,value\n");
                for (int ix = 0; ix < N; ++ix)
                    for (int iy = 0; iy < N; ++iy) {
                        if (m.d == 2) {
                            *os << f.coord(ix) << "," << f.coord(iy) << "," << f.at(ix, iy)
                                << "\n";
                        } else {
                            for (int iz = 0; iz < N; ++iz)
                                *os << f.coord(ix) << "," << f.coord(iy) << ","
                                    << f.coord(iz) << "," << f.at(ix, iy, iz) << "\n";
                        }
                    }
            }
        } else if (pot->parsed()) {
            if (beta_str.empty())
                std::printf("%.17g\n", astab::potential(m, parse_vec(x_str)));
            else
                std::printf("%.17g\n",
                            astab::potential_derivative(m, parse_vec(x_str),
                                                        parse_beta(beta_str))
                                .value);
        } else if (prof->parsed()) {
            double lo = 0.5, hi = 50.0;
            int cnt = 32;
            {
                std::istringstream in(range_str);
                std::string a, b, c;
                std::getline(in, a, ':');
                std::getline(in, b, ':');
                std::getline(in, c);
                lo = std::stod(a);
                hi = std::stod(b);
                cnt = std::stoi(c);
            }
            std::ostream* os = &std::cout;
            std::ofstream file;
            if (!out_path.empty()) {
                file.open(out_path);
                os = &file;
            }
            const Vec dir = astab::normalized(parse_vec(dir_str));
            *os << "r,V\n";
            for (int i = 0; i < cnt; ++i) {
                const double r = lo * std::pow(hi / lo, cnt == 1 ? 0.0 : double(i) / (cnt - 1));
                *os << r << "," << astab::potential(m, astab::scale(dir, r)) << "\n";
            }
        } else if (exi->parsed()) {
            const astab::Domain dom = parse_domain(domain_str);
            const astab::SimScheme s = make_scheme(m, mode_str, eps, seed);
            const Vec x0 = parse_vec(x_str);
            std::ofstream file(out_path);
            file << (m.d == 2 ? "tau,x1,x2,overshoot,steps\n" : "tau,x1,x2,x3,overshoot,steps\n");
            const astab::JumpSampler js(m, s.mode == astab::SimMode::jump_split ? s.eps : 1.0);
            for (long i = 0; i < n; ++i) {
                astab::CounterRng rng(seed, static_cast<std::uint64_t>(i));
                const astab::ExitSample e = astab::sample_exit(m, s, dom, x0, rng, &js);
                file << e.tau << "," << e.x_exit[0] << "," << e.x_exit[1] << ",";
                if (m.d == 3) file << e.x_exit[2] << ",";
                file << e.overshoot << "," << e.n_steps << "\n";
            }
        } else if (grn->parsed()) {
            const astab::SimScheme s = make_scheme(m, mode_str, eps, seed);
            print_estimate(astab::green_function(m, s, parse_vec(x_str), parse_vec(v_str), n));
        } else if (poi->parsed()) {
            const astab::SimScheme s = make_scheme(m, mode_str, eps, seed);
            const astab::PoissonEstimator pe(m, s, parse_vec(x_str), n);
            print_estimate(pe.eval(parse_vec(z_str)));
        } else if (har->parsed()) {
            const astab::SimScheme s = make_scheme(m, mode_str, eps, seed);
            print_estimate(astab::harmonic_eval(m, s, astab::make_boundary_data(data_str),
                                                parse_vec(x_str), n));
        } else if (ind->parsed()) {
            const astab::SmoothnessIndices si = astab::gamma_estimate(m);
            nlohmann::json j;
            j["gamma"] = si.gamma;
            j["kappa0"] = si.kappa0;
            j["kappa1"] = si.kappa1;
            j["potential_class"] = astab::to_string(si.potential_class);
            if (si.rho) j["rho"] = *si.rho;
            j["modulus_model"] = astab::to_string(si.modulus_model);
            j["fit_warning"] = si.fit_warning;
            if (si.fitted_gamma) j["fitted_gamma"] = *si.fitted_gamma;
            std::cout << j.dump(2) << "\n";
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
