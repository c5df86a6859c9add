// fnls: pseudospectral simulator and sharp-threshold classifier for the
// focusing L^2-supercritical fractional NLS
//   i u_t - (-Delta)^s u + |u|^{p-1} u = 0  on  [-L, L)^N.
//
// Subcommands: ground-state | classify | evolve | check.
// Exit codes: 0 success, 1 usage/config error, 2 solver failure,
//             3 run halted on blowup (outputs still written).

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "fnls/admissible.hpp"
#include "fnls/config.hpp"
#include "fnls/criteria.hpp"
#include "fnls/csv.hpp"
#include "fnls/diagnostics.hpp"
#include "fnls/evolution.hpp"
#include "fnls/ground_state.hpp"
#include "fnls/initial_data.hpp"
#include "fnls/snapshot.hpp"
#include "fnls/spectral.hpp"

namespace fs = std::filesystem;
using namespace fnls;

namespace {

RunConfig resolve_config(const std::string& config_path,
                         const std::string& out_dir) {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    for (const auto& w : cfg.warnings)
        std::cerr << "warning: " << w << "\n";
    return cfg;
}

GroundState solve_from_config(const RunConfig& cfg, const GridPtr& grid) {
    GroundStateOptions opt;
    opt.tol = cfg.gs_tol;
    opt.max_iter = cfg.gs_max_iter;
    GroundState gs = solve_ground_state(cfg.params, grid, opt);
    for (const auto& w : gs.warnings) std::cerr << "warning: " << w << "\n";
    return gs;
}

void write_ground_state_report(const std::string& path, const GroundState& gs,
                               const PhysParams& params) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "# fnls-ground-state v1\n";
    out << "quantity,measured,closed_form,residual\n";
    const auto row = [&out](const std::string& name, double v) {
        out << name << ',' << csv_double(v) << ",,\n";
    };
    row("mass", gs.mass);
    row("kinetic", gs.kinetic);
    row("potential", gs.potential);
    row("energy", gs.energy);
    row("gn_constant", gs.gn_constant);
    row("iterations", gs.iterations);
    row("residual", gs.residual);
    row("stabilizer_defect", gs.stabilizer_defect);
    for (const auto& r : pohozaev_report(gs, params).rows)
        out << r.name << ',' << csv_double(r.measured) << ','
            << csv_double(r.closed_form) << ',' << csv_double(r.residual)
            << '\n';
}

int cmd_ground_state(const RunConfig& cfg) {
    const GridPtr grid =
        make_grid(cfg.params.dim, cfg.grid_points, cfg.half_length);
    const GroundState gs = solve_from_config(cfg, grid);
    fs::create_directories(cfg.out_dir);
    write_snapshot((fs::path(cfg.out_dir) / "q.snap").string(), gs.profile,
                   0.0, cfg.params.s, cfg.params.p);
    write_ground_state_report((fs::path(cfg.out_dir) / "q_report.csv").string(),
                              gs, cfg.params);
    std::cout << "ground state: iterations=" << gs.iterations
              << " residual=" << csv_double(gs.residual)
              << " mass=" << csv_double(gs.mass)
              << " kinetic=" << csv_double(gs.kinetic)
              << " energy=" << csv_double(gs.energy)
              << " C_GN=" << csv_double(gs.gn_constant) << "\n";
    return 0;
}

int cmd_classify(const RunConfig& cfg) {
    if (!(cfg.params.s_critical() > 0.0)) {
        std::cerr << "error: L2-critical or subcritical: products undefined\n";
        return 1;
    }
    const GridPtr grid =
        make_grid(cfg.params.dim, cfg.grid_points, cfg.half_length);
    const GroundState gs = solve_from_config(cfg, grid);
    const Field u0 = sample_initial_data(cfg.initial, grid, &gs);
    const ThresholdReport rep = classify(u0, cfg.params, gs);

    fs::create_directories(cfg.out_dir);
    const std::string path = (fs::path(cfg.out_dir) / "classify.csv").string();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "# fnls-classify v1\n";
    out << "product_energy,product_kinetic,threshold_energy,threshold_kinetic,"
           "flag_radial,flag_s_range,flag_dim,flag_window,verdict,note\n";
    out << csv_double(rep.product_energy) << ','
        << csv_double(rep.product_kinetic) << ','
        << csv_double(rep.threshold_energy) << ','
        << csv_double(rep.threshold_kinetic) << ','
        << rep.hypothesis_flags.radial_data << ','
        << rep.hypothesis_flags.s_in_range << ','
        << rep.hypothesis_flags.dim_ok << ',' << rep.hypothesis_flags.window
        << ',' << to_string(rep.verdict) << ',' << rep.note << '\n';

    std::cout << "P_E=" << csv_double(rep.product_energy)
              << " T_E=" << csv_double(rep.threshold_energy)
              << " P_K=" << csv_double(rep.product_kinetic)
              << " T_K=" << csv_double(rep.threshold_kinetic) << "\n";
    std::cout << "verdict=" << to_string(rep.verdict);
    if (!rep.note.empty()) std::cout << " (" << rep.note << ")";
    std::cout << "\n";
    return 0;
}

int cmd_evolve(const RunConfig& cfg) {
    const GridPtr grid =
        make_grid(cfg.params.dim, cfg.grid_points, cfg.half_length);

    const bool need_ground =
        cfg.initial.family == InitialData::Family::GroundStateMultiple;
    std::optional<GroundState> gs;
    if (cfg.params.s_critical() > 0.0 &&
        cfg.params.in_supercritical_window()) {
        gs = solve_from_config(cfg, grid);
    } else if (need_ground) {
        std::cerr << "error: ground_state_multiple initial data needs the "
                     "supercritical window\n";
        return 1;
    }

    const Field u0 =
        sample_initial_data(cfg.initial, grid, gs ? &*gs : nullptr);
    if (boundary_amplitude_ratio(u0) > 1e-8)
        std::cerr << "warning: initial data reaches the box boundary\n";

    EvolveOptions opt;
    opt.dt = cfg.dt;
    opt.sample_every = cfg.sample_every;
    opt.sponge = cfg.sponge;
    opt.sponge_sigma0 = cfg.sponge_sigma0;
    opt.dealias = cfg.dealias;

    VirialConfig virial = make_virial_config(cfg.effective_virial_radius(),
                                             cfg.m_nodes, cfg.params.s,
                                             cfg.m_rule);
    DiagnosticsCollector collector(cfg.params, gs ? &*gs : nullptr,
                                   std::move(virial), cfg.virial_rate_every,
                                   cfg.sponge);

    fs::create_directories(cfg.out_dir);
    long snapshot_counter = 0, sample_counter = 0;
    const auto callback = [&](const EvolutionState& st) -> bool {
        const bool keep_going = collector.sample(st);
        if (cfg.snapshot_every > 0 && sample_counter % cfg.snapshot_every == 0) {
            char name[32];
            std::snprintf(name, sizeof name, "state_%06ld.snap",
                          snapshot_counter++);
            write_snapshot((fs::path(cfg.out_dir) / name).string(), st.field,
                           st.time, cfg.params.s, cfg.params.p);
        }
        ++sample_counter;
        return keep_going;
    };

    const EvolveResult result = evolve(u0, cfg.params, cfg.T, opt, callback);
    if (result.reason == HaltReason::Overflow) collector.mark_overflow();

    write_diagnostics_csv((fs::path(cfg.out_dir) / "diagnostics.csv").string(),
                          collector.history());
    write_snapshot((fs::path(cfg.out_dir) / "state_final.snap").string(),
                   result.state.field, result.state.time, cfg.params.s,
                   cfg.params.p);

    const ConservationDrift drift =
        conservation_drift(collector.history(), cfg.sponge);
    if (cfg.sponge)
        std::cout << "sponge mass loss: " << csv_double(drift.mass_loss)
                  << "\n";
    else
        std::cout << "mass drift: " << csv_double(drift.mass_drift)
                  << ", energy drift: " << csv_double(drift.energy_drift)
                  << "\n";

    std::cout << "halt=" << to_string(result.reason)
              << " t=" << csv_double(result.state.time)
              << " detector=" << csv_flags(collector.flags()) << "\n";
    return result.reason == HaltReason::Completed ? 0 : 3;
}

struct CheckLine {
    std::string name;
    double measured;
    double bound;
    bool pass;
};

int cmd_check() {
    std::vector<CheckLine> lines;
    const auto require = [&lines](const std::string& name, double measured,
                                  double bound) {
        lines.push_back({name, measured, bound, measured <= bound});
    };

    PhysParams params{2, 0.75, 3.0};
    const GridPtr grid = make_grid(2, 64, 10.0);
    auto ws = Spectral::for_grid(grid);

    // multiplier eigenmode: (-Delta)^s e^{ikx} = |k|^{2s} e^{ikx}
    {
        Field f(grid);
        const double kx = grid->wavenumbers()[3], ky = grid->wavenumbers()[5];
        std::size_t idx[3];
        for (std::size_t i = 0; i < f.size(); ++i) {
            grid->unflatten(i, idx);
            f.values[i] = std::polar(
                1.0, kx * grid->coord(idx[0]) + ky * grid->coord(idx[1]));
        }
        const Field g = fractional_laplacian(f, params.s);
        const double expected = std::pow(kx * kx + ky * ky, params.s);
        double worst = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            worst = std::max(worst,
                             std::abs(g.values[i] - expected * f.values[i]));
        require("multiplier_eigenmode", worst / expected, 1e-12);
    }

    // Parseval on a deterministic pseudo-random field
    {
        Field f(grid);
        std::mt19937_64 rng(12345);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (auto& z : f.values) z = Complex(unif(rng), unif(rng));
        const double phys = std::pow(norm_l2(f), 2);
        std::vector<Complex> spec = f.values;
        ws->forward(spec);
        KahanSum s2;
        for (const auto& z : spec) s2.add(std::norm(z));
        const double specside = grid->cell_volume() /
                                static_cast<double>(grid->size()) * s2.value();
        require("parseval", std::abs(phys - specside) / phys, 1e-12);
    }

    // single-mode resolvent identity, both m-rules
    {
        Field f(grid);
        const double kx = grid->wavenumbers()[4];
        std::size_t idx[3];
        for (std::size_t i = 0; i < f.size(); ++i) {
            grid->unflatten(i, idx);
            f.values[i] = std::polar(1.0, kx * grid->coord(idx[0]));
        }
        const auto jr = resolvent_identity_check(
            f, params, resolvent_m_rule(200, params.s));
        require("resolvent_identity_single_mode", jr.relerr, 1e-6);
        const auto tr = resolvent_identity_check(
            f, params,
            resolvent_m_rule(200, params.s, MRuleKind::TanLegendre));
        lines.push_back({"resolvent_identity_tan_legendre(reference)",
                         tr.relerr, 0.0, true});
    }

    // diagonal pair admissibility across the (N, s, p) window
    {
        int failures = 0, total = 0;
        for (int dim = 2; dim <= 3 && total < 50; ++dim) {
            const double s_lo = static_cast<double>(dim) / (2.0 * dim - 1.0);
            for (int i = 0; i < 5 && total < 50; ++i) {
                const double s = s_lo + (0.999 - s_lo) * i / 4.0;
                PhysParams pp{dim, s, 3.0};
                const double plo = pp.mass_critical_power();
                const double phi_ = pp.energy_critical_power();
                for (int j = 1; j <= 5 && total < 50; ++j) {
                    pp.p = plo + (phi_ - plo) * j / 6.0;
                    const AdmissiblePair d = diagonal_pair(pp);
                    if (!is_admissible(d.q, d.r, d.level, pp)) ++failures;
                    ++total;
                }
            }
        }
        lines.push_back({"diagonal_pair_admissible_window_sample(" +
                             std::to_string(total) + ")",
                         static_cast<double>(failures), 0.0, failures == 0});
    }

    // window boundary identities (dyadic parameters, exact arithmetic)
    for (int dim = 2; dim <= 3; ++dim) {
        PhysParams pp{dim, 0.75, 0.0};
        pp.p = pp.mass_critical_power();
        require("s_c_at_mass_critical_N" + std::to_string(dim),
                std::abs(pp.s_critical()), 0.0);
        pp.p = pp.energy_critical_power();
        require("s_c_at_energy_critical_N" + std::to_string(dim),
                std::abs(pp.s_critical() - pp.s), 0.0);
    }

    bool all = true;
    for (const auto& l : lines) {
        std::cout << (l.pass ? "PASS " : "FAIL ") << l.name
                  << "  measured=" << csv_double(l.measured);
        if (l.bound > 0.0) std::cout << "  bound=" << csv_double(l.bound);
        std::cout << "\n";
        all = all && l.pass;
    }
    std::cout << (all ? "check: all identities pass\n"
                      : "check: FAILURES present\n");
    return all ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "fnls: pseudospectral fractional NLS simulator and sharp-threshold "
        "classifier"};
    app.footer(config_help() +
               "\nenvironment:\n  FNLS_THREADS  caps FFT parallelism "
               "(default 1)\n");
    app.require_subcommand(1);

    std::string config_path, out_dir;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "path to key=value config");
        sub->add_option("--out", out_dir, "output directory override");
    };

    CLI::App* sc_ground = app.add_subcommand(
        "ground-state", "solve Q and write q.snap + certification report");
    add_common(sc_ground);
    CLI::App* sc_classify = app.add_subcommand(
        "classify", "evaluate the scattering/blowup threshold products");
    add_common(sc_classify);
    CLI::App* sc_evolve = app.add_subcommand(
        "evolve", "integrate the equation and stream diagnostics");
    add_common(sc_evolve);
    app.add_subcommand("check", "run the built-in analytic identity suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("check")) return cmd_check();
        const RunConfig cfg = resolve_config(config_path, out_dir);
        if (app.got_subcommand("ground-state")) return cmd_ground_state(cfg);
        if (app.got_subcommand("classify")) return cmd_classify(cfg);
        if (app.got_subcommand("evolve")) return cmd_evolve(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
