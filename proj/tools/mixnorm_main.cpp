// Command-line front end: norms, sparseness, experiment and simulate
// subcommands with reproducible CSV/JSON outputs and a run manifest.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mixnorm/experiments.hpp"
#include "mixnorm/field_io.hpp"
#include "mixnorm/manifest.hpp"
#include "mixnorm/nse.hpp"
#include "mixnorm/sparse.hpp"

using nlohmann::json;
using namespace mixnorm;

namespace {

// exit-code taxonomy: 0 ok, 2 I/O/format, 3 parameter, 4 missing artifact,
// 5 numerical rejection
constexpr int kExitFormat = 2;
constexpr int kExitParam = 3;
constexpr int kExitMissing = 4;
constexpr int kExitRejected = 5;

struct MissingArtifact : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        // accept simple fractions like 1/8
        auto slash = tok.find('/');
        if (slash != std::string::npos)
            out.push_back(std::stod(tok.substr(0, slash)) / std::stod(tok.substr(slash + 1)));
        else
            out.push_back(std::stod(tok));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

json report_json(const SparsenessReport& r) {
    const char* kind = r.kind == SparseKind::OneD    ? "oneD"
                       : r.kind == SparseKind::ThreeD ? "threeD"
                                                      : "semiMixed";
    json j;
    j["kind"] = kind;
    j["scale"] = r.scale;
    j["ratio"] = r.ratio;
    j["point"] = {r.point[0], r.point[1], r.point[2]};
    if (r.kind == SparseKind::OneD) {
        j["direction"] = {r.direction[0], r.direction[1], r.direction[2]};
        j["ndir"] = r.ndir;
    }
    j["delta_target"] = r.delta_target;
    j["pass"] = r.pass;
    return j;
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open output " + path, 0);
    out << body;
}

// BESOV_SPARSE_THREADS caps internal parallelism; the current implementation
// is single-threaded, so the cap is recorded and trivially honored.
int thread_cap() {
    const char* env = std::getenv("BESOV_SPARSE_THREADS");
    if (!env) return 1;
    int cap = std::atoi(env);
    if (cap < 1) throw InvalidInput("BESOV_SPARSE_THREADS must be a positive integer");
    return std::min(cap, 1);
}

RunManifest make_manifest(int argc, char** argv, const json& config_echo) {
    RunManifest m;
    std::string cmd;
    for (int i = 0; i < argc; ++i) {
        if (i) cmd += ' ';
        cmd += argv[i];
    }
    m.command = cmd;
    json echo = config_echo;
    echo["threads"] = thread_cap();
    m.config_echo = echo.dump();
    return m;
}

void finish_manifest(RunManifest& m, const std::string& out_path,
                     std::chrono::steady_clock::time_point start) {
    m.outputs.push_back(out_path);
    m.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(m, out_path + ".manifest.json");
}

// ---------------------------------------------------------------- norms ----

int cmd_norms(int argc, char** argv, const std::string& input, const std::string& s_csv,
              const std::string& eps_csv, const std::string& out, bool subtract_mean) {
    const auto start = std::chrono::steady_clock::now();
    AnyField any = read_field(input);
    const Grid3& grid =
        std::holds_alternative<ScalarField>(any) ? std::get<ScalarField>(any).grid
                                                 : std::get<VectorField>(any).grid;
    LPBank bank = build_lp_bank(grid);

    std::ostringstream csv;
    csv << "norm,param,component,value,attaining_j\n";
    auto add = [&](const std::string& norm, double param, int comp, double value, int j) {
        csv << norm << ',' << fmt_g17(param) << ',' << comp << ',' << fmt_g17(value) << ','
            << j << '\n';
    };

    if (auto* f = std::get_if<ScalarField>(&any)) {
        add("linf", 0.0, 0, linf_norm(*f), -99);
        for (double s : parse_list(s_csv)) {
            BesovResult r = besov_inf_inf(*f, s, bank, subtract_mean);
            add("besov_inf_inf", s, 0, r.value, r.attaining_j);
        }
        for (double e : parse_list(eps_csv))
            add("besov_11_fd", e, 0, besov_11_fd(*f, e, grid.L() / 4.0), -99);
    } else {
        auto& u = std::get<VectorField>(any);
        add("linf", 0.0, -1, linf_norm(u), -99);
        for (double s : parse_list(s_csv)) {
            BesovResult r = besov_inf_inf(u, s, bank, subtract_mean);
            add("besov_inf_inf", s, r.attaining_component, r.value, r.attaining_j);
        }
        for (double e : parse_list(eps_csv))
            for (int c = 0; c < 3; ++c)
                add("besov_11_fd", e, c, besov_11_fd(u.component(c), e, grid.L() / 4.0), -99);
    }
    write_text(out, csv.str());

    RunManifest m = make_manifest(argc, argv, json{{"input", input},
                                                   {"s", s_csv},
                                                   {"eps", eps_csv},
                                                   {"subtract_mean", subtract_mean}});
    finish_manifest(m, out, start);
    return 0;
}

// ----------------------------------------------------------- sparseness ----

int cmd_sparseness(int argc, char** argv, const std::string& input, const std::string& mode,
                   int component, const std::string& sign_s, double lambda, double scale,
                   double delta, const std::string& x0_csv, int ndir, const std::string& out) {
    const auto start = std::chrono::steady_clock::now();
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must be in (0,1)");
    const Sign sign = sign_s == "-" ? Sign::Minus : Sign::Plus;

    AnyField any = read_field(input);
    LevelSet S = std::holds_alternative<ScalarField>(any)
                     ? scalar_superlevel(std::get<ScalarField>(any), sign, lambda)
                     : component_superlevel(std::get<VectorField>(any), component, sign, lambda);

    std::array<double, 3> x0{0.0, 0.0, 0.0};
    if (!x0_csv.empty()) {
        auto v = parse_list(x0_csv);
        if (v.size() != 3) throw InvalidInput("--x0 needs three comma-separated coordinates");
        x0 = {v[0], v[1], v[2]};
    }

    json j;
    if (mode == "1d") {
        j = report_json(sparseness_1d(S, x0, scale, delta, ndir));
    } else if (mode == "3d") {
        j = report_json(sparseness_3d(S, x0, scale, delta));
    } else if (mode == "semi") {
        j = report_json(semi_mixed(S, scale, delta));
    } else if (mode == "mixed") {
        MixedReport r = mixed(S, scale, delta);
        j["set"] = report_json(r.set);
        j["complement"] = report_json(r.complement);
        j["pass"] = r.pass;
    } else if (mode == "remark") {
        RemarkReport r = remark_3d_implies_1d(S, x0, scale, delta, ndir);
        j["three_d"] = report_json(r.three_d);
        j["vacuous"] = r.vacuous;
        j["witness_found"] = r.witness_found;
        j["rho"] = r.rho;
        j["direction"] = {r.direction[0], r.direction[1], r.direction[2]};
        j["ratio"] = r.ratio;
        j["target"] = r.target;
    } else {
        throw InvalidInput("unknown mode '" + mode + "'");
    }
    write_text(out, j.dump(2) + "\n");

    RunManifest m = make_manifest(
        argc, argv,
        json{{"input", input}, {"mode", mode}, {"component", component}, {"sign", sign_s},
             {"lambda", lambda}, {"scale", scale}, {"delta", delta}, {"ndir", ndir}});
    finish_manifest(m, out, start);
    return 0;
}

// ----------------------------------------------------------- experiment ----

int cmd_experiment(int argc, char** argv, const std::string& name, int grid_n, double grid_L,
                   const std::string& calib_path, const std::string& out,
                   const std::string& n_csv, const std::string& eps_csv, int trials,
                   std::uint64_t seed, double eta, double lambda, double delta,
                   double scale, const std::string& preset, const std::string& input) {
    const auto start = std::chrono::steady_clock::now();
    RunManifest m = make_manifest(argc, argv,
                                  json{{"experiment", name}, {"grid", {{"n", grid_n}, {"L", grid_L}}},
                                       {"seed", seed}});
    m.seed = seed;

    // --eps doubles as the single smoothness exponent (calibrate/lemma) and
    // the mollifier-scale list (mollified-log); fractions like 1/8 are fine
    std::vector<double> eps_values =
        eps_csv.empty() ? std::vector<double>{1.0} : parse_list(eps_csv);
    const double eps = eps_values.front();

    if (name == "calibrate") {
        Grid3 grid(grid_n, grid_L);
        if (eta <= 0.0) eta = mixing_constant(lambda, delta, eps, 1.0).eta;
        Calibration cal = calibrate_cstar(grid, eta, eps, trials, seed);
        save_calibration(cal, out);
        finish_manifest(m, out, start);
        return 0;
    }

    if (name == "lemma") {
        if (calib_path.empty() || !std::filesystem::exists(calib_path))
            throw MissingArtifact("calibration file required; run `mixnorm experiment calibrate` first");
        Calibration cal = load_calibration(calib_path);
        Grid3 grid(grid_n, grid_L);
        VectorField u = input.empty() ? make_preset(preset, grid, seed)
                                      : read_vector_field(input);
        MixingParams params = mixing_constant(lambda, delta, eps, cal.c_star);
        const double r = scale > 0.0 ? scale : grid.L() / 8.0;
        LemmaVerdict v = verify_mixing_lemma(u, params, r);

        json j;
        j["calibration"] = {{"path", calib_path}, {"hash", file_hash(calib_path)}};
        j["params"] = {{"lambda", params.lambda}, {"delta", params.delta},
                       {"eps", params.eps},       {"eta", params.eta},
                       {"c_star", params.c_star}, {"c_lambda_delta", params.c_lambda_delta}};
        j["vacuous"] = v.vacuous;
        j["lhs"] = v.lhs;
        j["rhs"] = v.rhs;
        j["linf"] = v.linf;
        j["scale"] = v.scale;
        j["hypothesis_met"] = v.hypothesis_met;
        j["all_semi_mixed"] = v.all_semi_mixed;
        j["contrapositive_holds"] = v.contrapositive_holds;
        j["sets"] = json::array();
        for (const auto& sr : v.sets) {
            json s = report_json(sr.semi);
            s["component"] = sr.component;
            s["sign"] = sr.sign == Sign::Plus ? "+" : "-";
            j["sets"].push_back(s);
        }
        write_text(out, j.dump(2) + "\n");
        m.calibration_path = calib_path;
        m.calibration_hash = file_hash(calib_path);
        finish_manifest(m, out, start);
        return 0;
    }

    if (name == "counterexample") {
        Grid3 grid(grid_n, grid_L);
        std::vector<int> ns = n_csv.empty() ? std::vector<int>{8, 16, 32, 64}
                                            : parse_int_list(n_csv);
        CounterexampleTable table = counterexample_report(ns, grid);
        std::ostringstream csv;
        csv << "n,r_linf,besov_lower,ratio,rod_resolved\n";
        for (const auto& r : table.rows)
            csv << r.n << ',' << fmt_g17(r.r_linf) << ',' << fmt_g17(r.besov_lower) << ','
                << fmt_g17(r.ratio) << ',' << (r.rod_resolved ? 1 : 0) << '\n';
        write_text(out, csv.str());
        finish_manifest(m, out, start);
        return 0;
    }

    if (name == "mollified-log") {
        Grid3 grid(grid_n, grid_L);
        std::vector<double> es = eps_csv.empty()
                                     ? std::vector<double>{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64}
                                     : eps_values;
        MollifiedLogTable table = mollified_log_report(es, grid);
        std::ostringstream csv;
        csv << "eps_m,linf,besov0,ratio\n";
        for (const auto& r : table.rows)
            csv << fmt_g17(r.eps_m) << ',' << fmt_g17(r.linf) << ',' << fmt_g17(r.besov0)
                << ',' << fmt_g17(r.ratio) << '\n';
        csv << "# fit_slope," << fmt_g17(table.fit_slope) << "\n# fit_r2,"
            << fmt_g17(table.fit_r2) << "\n# besov0_maxmin," << fmt_g17(table.besov0_maxmin)
            << "\n# ratio_increasing," << (table.ratio_increasing ? 1 : 0) << '\n';
        write_text(out, csv.str());
        finish_manifest(m, out, start);
        return 0;
    }

    throw InvalidInput("unknown experiment '" + name + "'");
}

// ------------------------------------------------------------- simulate ----

int cmd_simulate(int argc, char** argv, const std::string& config_path,
                 const std::string& out) {
    const auto start = std::chrono::steady_clock::now();
    std::ifstream in(config_path);
    if (!in) throw FormatError("cannot open config " + config_path, 0);
    json cfg = json::parse(in);

    SimConfig sim;
    sim.n = cfg.at("grid").at("n");
    sim.L = cfg.at("grid").value("L", 2.0 * M_PI);
    sim.nu = cfg.value("nu", 1.0);
    sim.dt = cfg.at("dt");
    sim.t_end = cfg.at("t_end");
    sim.cadence = cfg.value("cadence", 100);
    sim.preset = cfg.value("preset", "shear");
    sim.input_path = cfg.value("input", std::string());
    sim.seed = cfg.value("seed", std::uint64_t(1));
    sim.subtract_mean = cfg.value("flags", json::object()).value("subtract_mean", false);
    const json consts = cfg.value("constants", json::object());
    sim.consts.M = compute_M();
    sim.consts.C_M = consts.value("C_M", 1.0);
    sim.consts.Ctilde_M = consts.value("Ctilde_M", 1.0);
    sim.consts.c_star = consts.value("c_star", 1.0);
    const json snaps = cfg.value("snapshots", json::object());
    sim.snapshot_dir = snaps.value("dir", std::string());
    sim.snapshot_every = snaps.value("every", 0);

    Trajectory traj = simulate(sim);

    std::ostringstream csv;
    csv << "t,linf,besov_m1,besov_0,r,f1p,f1m,f2p,f2m,f3p,f3m,"
           "smallness,nonsmallness,sparsity,scale_clamped\n";
    for (const auto& r : traj.records) {
        csv << fmt_g17(r.t) << ',' << fmt_g17(r.linf) << ',' << fmt_g17(r.besov_m1) << ','
            << fmt_g17(r.besov_0) << ',' << fmt_g17(r.scale);
        for (double f : r.fractions) csv << ',' << fmt_g17(f);
        csv << ',' << (r.smallness ? 1 : 0) << ',' << (r.nonsmallness ? 1 : 0) << ','
            << (r.sparsity ? 1 : 0) << ',' << (r.scale_clamped ? 1 : 0) << '\n';
    }
    for (const auto& e : find_escape_times(traj))
        csv << "# escape_time," << e.index << ',' << fmt_g17(e.t) << ',' << fmt_g17(e.s_lo)
            << ',' << fmt_g17(e.s_hi) << '\n';
    write_text(out, csv.str());

    RunManifest m = make_manifest(argc, argv, cfg);
    m.seed = sim.seed;
    finish_manifest(m, out, start);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Besov norms, sparseness/mixing statistics and NSE regularity monitoring"};
    app.require_subcommand(1);

    // norms
    auto* norms = app.add_subcommand("norms", "Besov and sup norms of a BSF1 field");
    std::string n_input, n_s = "-1,-0.5,0", n_eps = "1", n_out = "norms.csv";
    bool n_subtract = false;
    norms->add_option("--input", n_input)->required();
    norms->add_option("--s", n_s, "comma-separated smoothness exponents");
    norms->add_option("--eps", n_eps, "comma-separated B^eps_{1,1} exponents");
    norms->add_option("--out", n_out);
    norms->add_flag("--subtract-mean", n_subtract);

    // sparseness
    auto* sp = app.add_subcommand("sparseness", "sparseness / semi-mixedness reports");
    std::string s_input, s_mode = "semi", s_sign = "+", s_x0, s_out = "sparseness.json";
    int s_comp = 1, s_ndir = 64;
    double s_lambda = 0.5, s_scale = 0.0, s_delta = 0.75;
    sp->add_option("--input", s_input)->required();
    sp->add_option("--mode", s_mode, "1d | 3d | semi | mixed | remark");
    sp->add_option("--component", s_comp);
    sp->add_option("--sign", s_sign);
    sp->add_option("--lambda", s_lambda);
    sp->add_option("--scale", s_scale)->required();
    sp->add_option("--delta", s_delta);
    sp->add_option("--x0", s_x0, "center as x,y,z");
    sp->add_option("--ndir", s_ndir);
    sp->add_option("--out", s_out);

    // experiment
    auto* ex = app.add_subcommand("experiment", "lemma | counterexample | mollified-log | calibrate");
    std::string e_name, e_calib, e_out = "experiment.out", e_n, e_eps, e_preset = "random-band",
                e_input;
    int e_grid_n = 64, e_trials = 30;
    double e_grid_L = 2.0 * M_PI, e_eta = 0.0, e_lambda = 0.5, e_delta = 0.75, e_scale = 0.0;
    std::uint64_t e_seed = 20240901;
    ex->add_option("name", e_name)->required();
    ex->add_option("--grid-n", e_grid_n);
    ex->add_option("--grid-L", e_grid_L);
    ex->add_option("--calibration", e_calib);
    ex->add_option("--out", e_out);
    ex->add_option("--n", e_n, "counterexample n list");
    ex->add_option("--trials", e_trials);
    ex->add_option("--seed", e_seed);
    ex->add_option("--eta", e_eta);
    ex->add_option("--eps", e_eps, "smoothness exponent, or mollifier scale list");
    ex->add_option("--lambda", e_lambda);
    ex->add_option("--delta", e_delta);
    ex->add_option("--scale", e_scale);
    ex->add_option("--preset", e_preset);
    ex->add_option("--input", e_input);

    // simulate
    auto* si = app.add_subcommand("simulate", "pseudo-spectral NSE run with monitoring");
    std::string si_config, si_out = "monitor.csv";
    si->add_option("--config", si_config)->required();
    si->add_option("--out", si_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitParam;
    }

    try {
        if (norms->parsed())
            return cmd_norms(argc, argv, n_input, n_s, n_eps, n_out, n_subtract);
        if (sp->parsed())
            return cmd_sparseness(argc, argv, s_input, s_mode, s_comp, s_sign, s_lambda,
                                  s_scale, s_delta, s_x0, s_ndir, s_out);
        if (ex->parsed())
            return cmd_experiment(argc, argv, e_name, e_grid_n, e_grid_L, e_calib, e_out, e_n,
                                  e_eps, e_trials, e_seed, e_eta, e_lambda, e_delta,
                                  e_scale, e_preset, e_input);
        if (si->parsed()) return cmd_simulate(argc, argv, si_config, si_out);
    } catch (const MissingArtifact& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMissing;
    } catch (const StepRejected& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRejected;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFormat;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParam;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFormat;
    }
    return kExitParam;
}
