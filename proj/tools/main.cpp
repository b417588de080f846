// wtbouss: batch driver for the weakly transverse Boussinesq toolkit.
//
// Subcommands: simulate, sweep, dispersion, consistency, verify, report.
// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 guard violation.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "wtbouss/config.hpp"
#include "wtbouss/verify.hpp"

namespace fs = std::filesystem;
using namespace wtbouss;

namespace {

struct CommonOpts {
    std::string config;
    std::vector<std::string> sets;
    std::string out = ".";
    long seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "config file (key = value lines)")->required();
    cmd->add_option("--set", o.sets, "override, key=value (repeatable)");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--seed", o.seed, "override the config seed");
}

RunConfig load(const CommonOpts& o) {
    std::vector<std::string> sets = o.sets;
    if (o.seed >= 0) sets.push_back("seed=" + std::to_string(o.seed));
    RunConfig cfg = parse_config(o.config, sets);
    cfg.out_dir = o.out;
    return cfg;
}

ExtraKeys load_extra(const CommonOpts& o) {
    std::vector<std::string> sets = o.sets;
    if (o.seed >= 0) sets.push_back("seed=" + std::to_string(o.seed));
    return parse_extra_keys(o.config, sets);
}

void write_plot_script(const std::string& out_dir, const std::string& which) {
    fs::create_directories(out_dir);
    std::ofstream gp(fs::path(out_dir) / "plots.gp", std::ios::binary);
    gp << "# gnuplot script generated by wtbouss\n"
       << "set datafile separator ','\n"
       << "set key autotitle columnhead\n";
    if (which == "simulate" || which == "report") {
        gp << "set terminal pngcairo size 900,600\n"
           << "set output 'energy.png'\n"
           << "set xlabel 'time'\n"
           << "plot 'diagnostics.csv' using 1:2 with lines title 'e_total', \\\n"
           << "     'diagnostics.csv' using 1:3 with lines title 'e_low', \\\n"
           << "     'diagnostics.csv' using 1:4 with lines title 'e_high'\n"
           << "set output 'curl.png'\n"
           << "set logscale y\n"
           << "plot 'diagnostics.csv' using 1:6 with lines title 'curl residual'\n";
    } else if (which == "sweep") {
        gp << "set terminal pngcairo size 900,600\n"
           << "set output 'growth.png'\n"
           << "set xlabel 'eps'\n"
           << "set logscale x\n"
           << "plot 'summary.csv' using 1:5 with linespoints title 'max E(t)/E(0)'\n";
    }
}

int cmd_simulate(const CommonOpts& o) {
    RunConfig cfg = load(o);
    require_valid(cfg.params);
    RunResult res = integrate(cfg);
    write_diagnostics_csv((fs::path(o.out) / "diagnostics.csv").string(), res.records);
    write_plot_script(o.out, "simulate");
    if (!res.ok) {
        append_error_record(o.out, "simulate", res.error_code, res.error);
        std::cerr << "simulate: " << res.error << "\n";
        return res.error_code;
    }
    std::cout << "simulate: " << res.records.size() << " records, t_end = "
              << format_double(res.final_state.time) << "\n";
    return 0;
}

int cmd_sweep(const CommonOpts& o) {
    RunConfig cfg = load(o);
    ExtraKeys ex = load_extra(o);
    std::vector<double> eps_list = ex.eps_list;
    if (eps_list.empty()) eps_list = {0.1, 0.05, 0.025};
    std::vector<SweepRow> rows = long_time_sweep(cfg, eps_list);
    write_summary_csv((fs::path(o.out) / "summary.csv").string(), rows);
    write_plot_script(o.out, "sweep");
    int code = 0;
    for (const auto& r : rows) {
        std::cout << "sweep eps=" << format_double(r.eps)
                  << " growth=" << format_double(r.growth_ratio)
                  << (r.ok ? "" : (" ERROR " + r.error)) << "\n";
        if (!r.ok) {
            append_error_record(o.out, "sweep", 3, r.error);
            code = 3;
        }
    }
    return code;
}

int cmd_dispersion(const CommonOpts& o) {
    RunConfig cfg = load(o);
    ExtraKeys ex = load_extra(o);
    std::vector<std::pair<int, int>> modes = ex.modes;
    if (modes.empty())
        modes = {{1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}, {2, 1}, {1, 2}, {3, 0}, {2, 2}, {3, 1}};
    const double T = cfg.t_end_over_eps ? 10.0 : cfg.t_end;
    const double dt = cfg.dt > 0.0 ? cfg.dt : 1e-3;
    auto rows = dispersion_sweep(cfg.system, cfg.params, cfg.grid, modes, T, dt);
    fs::create_directories(o.out);
    CsvWriter csv((fs::path(o.out) / "dispersion.csv").string(),
                  "wtbouss dispersion schema v1", {"k1", "k2", "predicted", "measured", "rel_err"});
    double worst = 0.0;
    for (const auto& r : rows) {
        csv.row({double(r.k1), double(r.k2), r.predicted, r.measured, r.rel_err});
        worst = std::max(worst, r.rel_err);
    }
    std::cout << "dispersion: " << rows.size() << " modes, worst rel_err = "
              << format_double(worst) << "\n";
    return 0;
}

int cmd_consistency(const CommonOpts& o) {
    RunConfig cfg = load(o);
    ExtraKeys ex = load_extra(o);
    std::vector<double> eps_list = ex.eps_list;
    if (eps_list.empty()) eps_list = {0.1, 0.05, 0.025};
    fs::create_directories(o.out);
    CsvWriter csv((fs::path(o.out) / "consistency.csv").string(),
                  "wtbouss consistency schema v1",
                  {"eps", "res_v", "res_w", "res_zeta", "total", "ratio_vs_prev"});
    double prev = 0.0;
    State s = consistency_profile(cfg.grid, cfg.amplitude);
    for (size_t i = 0; i < eps_list.size(); ++i) {
        ModelParams p = cfg.params;
        p.eps = eps_list[i];
        ConsistencyResidual r = consistency_residual(s, p, ex.consistency_n);
        const double ratio = i == 0 ? 0.0 : prev / r.total;
        csv.row({eps_list[i], r.per_equation[0], r.per_equation[1], r.per_equation[2], r.total,
                 ratio});
        std::cout << "consistency eps=" << format_double(eps_list[i])
                  << " total=" << format_double(r.total)
                  << (i > 0 ? " ratio=" + format_double(ratio) : "") << "\n";
        prev = r.total;
    }
    return 0;
}

int cmd_verify(const CommonOpts& o) {
    RunConfig cfg = load(o);
    ExtraKeys ex = load_extra(o);
    std::vector<double> eps_list = ex.eps_list;
    if (eps_list.empty()) eps_list = {0.1, 0.01};
    fs::create_directories(o.out);
    CsvWriter csv((fs::path(o.out) / "verify.csv").string(), "wtbouss verify schema v1",
                  {"check", "eps", "value", "extra"});
    auto put = [&](const std::string& name, double eps, double value, double extra) {
        csv.raw_row("\"" + name + "\"," + format_double(eps) + "," + format_double(value) + "," +
                    format_double(extra));
    };

    const int band = std::max(2, cfg.grid.nx / 12);
    for (double eps : eps_list) {
        for (CaseTag tag : {CaseTag::Case1, CaseTag::Case2}) {
            const char* cname = tag == CaseTag::Case1 ? "case1" : "case2";
            State st = random_curl_free_state(tag, cfg.grid, eps, band, 0.02, cfg.seed);
            auto pres = ptheta_residual(tag, st, eps, cfg.sobolev_s);
            put(std::string("ptheta_residual_p_") + cname, eps, pres.first.l2, pres.first.hs);
            put(std::string("ptheta_residual_theta_") + cname, eps, pres.second.l2,
                pres.second.hs);
            auto tres = tilde_residual(tag, st, eps, cfg.sobolev_s, cfg.resolvent);
            put(std::string("tilde_residual_p_") + cname, eps, tres.first.l2, tres.first.hs);
            put(std::string("tilde_residual_theta_") + cname, eps, tres.second.l2,
                tres.second.hs);
            auto eq = equivalence_check(tag, st, cfg.sobolev_s, eps, cfg.resolvent);
            put(std::string("equivalence_ratio_") + cname, eps, eq.ratio, 0.0);
            put(std::string("tilde_dp_") + cname, eps, eq.tilde_dp, eq.tilde_dp_bound);
            put(std::string("tilde_dtheta_") + cname, eps, eq.tilde_dtheta,
                eq.tilde_dtheta_bound);
        }
        for (const char* id : {"L2.1.1", "L2.1.2", "L2.1.3", "L2.1.4", "L2.2.1", "L2.2.2",
                               "L2.2.3", "L2.2.4", "product_J", "adjoint"}) {
            auto rows = lemma_sampler(id, ex.samples, {eps}, cfg.grid, cfg.seed);
            put(std::string("lemma_") + id, eps, rows[0].max_ratio, double(rows[0].used));
        }
    }
    std::cout << "verify: report written to " << (fs::path(o.out) / "verify.csv").string()
              << "\n";
    return 0;
}

int cmd_report(const CommonOpts& o) {
    fs::path diag = fs::path(o.out) / "diagnostics.csv";
    std::ifstream in(diag);
    if (!in) throw ConfigError("report: no diagnostics.csv in " + o.out);
    std::string line;
    std::getline(in, line);  // comment
    std::getline(in, line);  // header
    double e0 = -1.0, emax = 0.0, curlmax = 0.0, tlast = 0.0;
    long rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(is, tok, ',')) vals.push_back(std::strtod(tok.c_str(), nullptr));
        if (vals.size() < 8) continue;
        if (e0 < 0.0) e0 = vals[1];
        emax = std::max(emax, vals[1]);
        curlmax = std::max(curlmax, vals[5]);
        tlast = vals[0];
        ++rows;
    }
    CsvWriter csv((fs::path(o.out) / "report.csv").string(), "wtbouss report schema v1",
                  {"records", "t_last", "e0", "e_max", "growth_ratio", "max_curl"});
    csv.row({double(rows), tlast, e0, emax, e0 > 0.0 ? emax / e0 : 1.0, curlmax});
    write_plot_script(o.out, "report");
    std::cout << "report: growth_ratio = " << format_double(e0 > 0.0 ? emax / e0 : 1.0)
              << ", max_curl = " << format_double(curlmax) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weakly transverse Boussinesq simulator and verification toolkit"};
    app.require_subcommand(1);

    CommonOpts opts[6];
    const char* names[6] = {"simulate", "sweep", "dispersion", "consistency", "verify", "report"};
    const char* descs[6] = {"integrate one configuration and write diagnostics.csv",
                            "long-time growth sweep over eps_list, write summary.csv",
                            "plane-wave frequency vs dispersion symbols",
                            "reduced-system consistency residuals over eps_list",
                            "operator/identity verification suite",
                            "summarize an existing run directory"};
    CLI::App* sub[6];
    for (int i = 0; i < 6; ++i) {
        sub[i] = app.add_subcommand(names[i], descs[i]);
        if (i == 5) {
            sub[i]->add_option("--out", opts[i].out, "run directory to summarize");
        } else {
            add_common(sub[i], opts[i]);
        }
    }

    CLI11_PARSE(app, argc, argv);

    int which = -1;
    for (int i = 0; i < 6; ++i)
        if (sub[i]->parsed()) which = i;

    const std::string cmd = names[which];
    try {
        switch (which) {
            case 0: return cmd_simulate(opts[0]);
            case 1: return cmd_sweep(opts[1]);
            case 2: return cmd_dispersion(opts[2]);
            case 3: return cmd_consistency(opts[3]);
            case 4: return cmd_verify(opts[4]);
            case 5: return cmd_report(opts[5]);
        }
    } catch (const ConfigError& e) {
        append_error_record(opts[which].out, cmd, 2, e.what());
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const GuardError& e) {
        append_error_record(opts[which].out, cmd, 4, e.what());
        std::cerr << "guard violation: " << e.what() << "\n";
        return 4;
    } catch (const ArgumentError& e) {
        append_error_record(opts[which].out, cmd, 2, e.what());
        std::cerr << "argument error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        append_error_record(opts[which].out, cmd, 3, e.what());
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
