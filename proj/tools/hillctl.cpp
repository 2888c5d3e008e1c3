// hillctl: command-line driver for the libration-point dynamics library.
//
// Subcommands expose each pipeline stage with deterministic CSV/JSON output:
//   constants   model constants, thresholds, coefficient-table audit (JSON)
//   tables      raw coefficient tables (JSON)
//   equilibria  reduced-flow equilibria at a given L' (JSON)
//   sphere      level curves on the reduced sphere (CSV)
//   orbit       analytic orbit synthesis (JSON record + samples)
//   propagate   numerical propagation of the exact equations (CSV)
//   correct     differential correction to a periodic orbit (JSON record)
//   family      pseudo-arclength family continuation (CSV)
//
// Exit codes: 0 success, 2 domain/usage errors, 3 numerical failures.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hill/hill.hpp"

using json = nlohmann::ordered_json;

namespace {

struct Config {
    std::map<std::string, std::string> kv;

    double number(const std::string& key, double fallback) const {
        const auto it = kv.find(key);
        return it == kv.end() ? fallback : hill::parse_double(it->second);
    }
};

Config load_config(const std::string& path) {
    Config cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw hill::domain_error("config file not readable: " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw hill::domain_error("config line is not key=value: " + line);
            continue;
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        cfg.kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
}

/// Resolve an output path against the HILL_OUTPUT_DIR override, then write.
void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::string resolved = path;
    if (const char* dir = std::getenv("HILL_OUTPUT_DIR"); dir && path.front() != '/')
        resolved = std::string(dir) + "/" + path;
    std::ofstream out(resolved);
    if (!out) throw hill::domain_error("cannot open output file: " + resolved);
    out << text;
}

json state_json(const hill::RotState& s) {
    return json::array({s.px, s.py, s.pz, s.Px, s.Py, s.Pz});
}

/// Accept either an inline "px,py,pz,Px,Py,Pz" list or a JSON orbit record.
struct IcInput {
    hill::RotState ic;
    std::optional<double> period;
    std::optional<std::string> family;
    std::optional<double> Lp;
};

IcInput read_ic(const std::string& arg) {
    IcInput in;
    if (arg.find(',') != std::string::npos) {
        const auto v = hill::split_doubles(arg);
        if (v.size() != 6)
            throw hill::domain_error("inline state needs exactly six comma-separated values");
        in.ic = hill::RotState{v[0], v[1], v[2], v[3], v[4], v[5]};
        return in;
    }
    std::ifstream f(arg);
    if (!f) throw hill::domain_error("state file not readable: " + arg);
    json doc;
    try {
        f >> doc;
    } catch (const std::exception& e) {
        throw hill::domain_error(std::string("state file is not valid JSON: ") + e.what());
    }
    if (!doc.contains("ic") || !doc["ic"].is_array() || doc["ic"].size() != 6)
        throw hill::domain_error("state file lacks a six-element \"ic\" array");
    for (int i = 0; i < 6; ++i)
        if (!doc["ic"][i].is_number())
            throw hill::domain_error("state file \"ic\" entries must be numbers");
    in.ic = hill::RotState{doc["ic"][0], doc["ic"][1], doc["ic"][2],
                           doc["ic"][3], doc["ic"][4], doc["ic"][5]};
    if (doc.contains("period") && doc["period"].is_number()) in.period = doc["period"];
    if (doc.contains("family") && doc["family"].is_string()) in.family = doc["family"];
    if (doc.contains("Lp") && doc["Lp"].is_number()) in.Lp = doc["Lp"];
    return in;
}

json equilibrium_json(const hill::ReducedEquilibrium& eq, const hill::ModelConstants& c) {
    bool warned = false;
    const double T = hill::period_estimate(eq, c, &warned);
    json j;
    j["family"] = hill::to_string(eq.family);
    j["I1"] = eq.point.I1;
    j["I2"] = eq.point.I2;
    j["I3"] = eq.point.I3;
    j["stability"] = hill::to_string(eq.stability);
    j["orbit"] = hill::to_string(eq.orbit);
    j["energy"] = hill::reduced_hamiltonian(eq.point, c);
    j["period_estimate"] = T;
    j["period_warning"] = warned;
    return j;
}

json table_entry_json(const hill::TrigTableEntry& e) {
    json j;
    j["g_mult"] = e.g_mult;
    j["l_mult"] = e.l_mult;
    j["num_const"] = e.num_const;
    j["num_om2"] = e.num_om2;
    j["den"] = e.den;
    j["dpow"] = e.dpow;
    j["spow"] = e.spow;
    return j;
}

int cmd_constants(const std::string& output) {
    const hill::ModelConstants c = hill::build_constants();
    const hill::BifurcationThresholds th = hill::thresholds(c);
    json j;
    j["rho"] = c.rho;
    j["lambda"] = c.lambda;
    j["omega"] = c.omega;
    j["nu"] = c.nu;
    j["delta"] = c.delta;
    j["delta_star"] = c.delta_star;
    j["sigma"] = c.sigma;
    j["tau"] = c.tau;
    j["k0"] = c.k0;
    j["k1"] = c.k1;
    j["k2"] = c.k2;
    j["k3"] = c.k3;
    j["k4"] = c.k4;
    json A = json::array(), Ai = json::array();
    for (int i = 0; i < 4; ++i) {
        json row = json::array(), rowi = json::array();
        for (int k = 0; k < 4; ++k) {
            row.push_back(c.A[i][k]);
            rowi.push_back(c.A_inv[i][k]);
        }
        A.push_back(row);
        Ai.push_back(rowi);
    }
    j["A"] = A;
    j["A_inv"] = Ai;
    j["thresholds"] = {{"L0", th.L0}, {"L1", th.L1}, {"Ltilde", th.Ltilde}, {"L2", th.L2}};
    j["tables"] = {{"oscillator_even_terms", hill::a1_even_entries.size()},
                   {"oscillator_odd_terms", hill::a1_odd_entries.size()},
                   {"oscillator_second_order_terms", hill::a2_entries.size()},
                   {"correction_rows", hill::correction_rows().size()}};
    json audit = json::array();
    for (const auto& row : hill::correction_audit()) {
        json a;
        a["g_mult"] = row.g_mult;
        a["l_mult"] = row.l_mult;
        a["column"] = std::string(1, row.column);
        a["bounded_as_d_to_0"] = row.bounded_d0;
        a["bounded_as_s_to_0"] = row.bounded_s0;
        audit.push_back(a);
    }
    j["correction_audit"] = audit;
    write_text(output, j.dump(2) + "\n");
    return 0;
}

int cmd_tables(const std::string& output) {
    json j;
    json even = json::array(), odd = json::array(), second = json::array();
    for (const auto& e : hill::a1_even_entries) even.push_back(table_entry_json(e));
    for (const auto& e : hill::a1_odd_entries) odd.push_back(table_entry_json(e));
    for (const auto& e : hill::a2_entries) second.push_back(table_entry_json(e));
    j["oscillator_even"] = even;
    j["oscillator_odd"] = odd;
    j["oscillator_second_order"] = second;
    json rows = json::array();
    for (const auto& row : hill::correction_rows()) {
        json r;
        r["g_mult"] = row.g_mult;
        r["l_mult"] = row.l_mult;
        json L = json::array(), ell = json::array(), g = json::array();
        for (const auto& e : row.L) L.push_back(table_entry_json(e));
        for (const auto& e : row.ell) ell.push_back(table_entry_json(e));
        for (const auto& e : row.g) g.push_back(table_entry_json(e));
        r["L"] = L;
        r["ell"] = ell;
        r["g"] = g;
        rows.push_back(r);
    }
    j["short_period_rows"] = rows;
    write_text(output, j.dump(2) + "\n");
    return 0;
}

int cmd_equilibria(double Lp, const std::string& output) {
    const hill::ModelConstants c = hill::build_constants();
    const auto eqs = hill::equilibria(Lp, c);
    json j;
    j["Lp"] = Lp;
    j["count"] = eqs.size();
    json list = json::array();
    for (const auto& eq : eqs) list.push_back(equilibrium_json(eq, c));
    j["equilibria"] = list;
    write_text(output, j.dump(2) + "\n");
    return 0;
}

int cmd_sphere(double Lp, std::optional<double> h, int nodes, const std::string& output) {
    const hill::ModelConstants c = hill::build_constants();
    std::vector<double> energies;
    if (h) {
        energies.push_back(*h);
    } else {
        // Auto grid: midpoints between consecutive distinct equilibrium
        // energies bracket every separatrix.
        std::vector<double> es;
        for (const auto& eq : hill::equilibria(Lp, c))
            es.push_back(hill::reduced_hamiltonian(eq.point, c));
        std::sort(es.begin(), es.end());
        es.erase(std::unique(es.begin(), es.end(),
                             [](double a, double b) {
                                 return std::abs(a - b) <=
                                        1e-13 * std::max(std::abs(a), std::abs(b));
                             }),
                 es.end());
        for (std::size_t i = 0; i + 1 < es.size(); ++i)
            energies.push_back(0.5 * (es[i] + es[i + 1]));
        if (energies.empty()) energies.push_back(es.front());
    }
    std::string csv = "Lp,h,I1,I2,I3,branch\n";
    for (double energy : energies)
        for (const auto& pt : hill::level_curve(Lp, energy, nodes, c)) {
            csv += hill::csv_row({Lp, energy, pt.p.I1, pt.p.I2, pt.p.I3,
                                  static_cast<double>(pt.branch)});
        }
    write_text(output, csv);
    return 0;
}

int cmd_orbit(const std::string& family_name, double Lp, std::optional<double> phase,
              int n_samples, const std::string& output) {
    const hill::ModelConstants c = hill::build_constants();
    const hill::OrbitKind kind = hill::parse_orbit_kind(family_name);
    const hill::SynthesizedOrbit orbit = hill::synthesize(kind, Lp, n_samples, c);
    const double seed_phase = phase ? *phase : orbit.seed_phase;
    const hill::ReducedEquilibrium eq = hill::equilibrium_for(kind, Lp, c);
    const hill::RotState ic = hill::synthesized_state(eq, seed_phase, c);

    json j;
    j["family"] = hill::to_string(kind);
    j["Lp"] = Lp;
    j["ic"] = state_json(ic);
    j["period"] = orbit.period;
    j["energy"] = hill::hamiltonian(ic);
    j["s1"] = nullptr;
    j["s2"] = nullptr;
    j["residual"] = nullptr;
    j["phase"] = seed_phase;
    j["recommended_phase"] = orbit.seed_phase;
    j["period_warning"] = orbit.period_warning;
    j["corrections_skipped"] = orbit.corrections_skipped;
    json samples = json::array();
    for (const auto& smp : orbit.samples) {
        json row = json::array();
        row.push_back(smp.ell);
        for (double v : smp.state.to_array()) row.push_back(v);
        samples.push_back(row);
    }
    j["samples"] = samples;
    write_text(output, j.dump(2) + "\n");
    return 0;
}

int cmd_propagate(const std::string& ic_arg, double t_span, double tol,
                  const std::string& output) {
    const IcInput in = read_ic(ic_arg);
    const hill::Trajectory tr = hill::propagate(in.ic, t_span, tol);
    std::string csv = "t,px,py,pz,Px,Py,Pz,H\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const auto& s = tr.states[i];
        csv += hill::csv_row({tr.times[i], s.px, s.py, s.pz, s.Px, s.Py, s.Pz,
                              hill::hamiltonian(s)});
    }
    write_text(output, csv);
    return 0;
}

int cmd_correct(const std::string& ic_arg, std::optional<double> period,
                const std::string& constraint, std::optional<double> target,
                const std::string& symmetry, double tol, int max_iter,
                const std::string& output) {
    const IcInput in = read_ic(ic_arg);
    double T = 0.0;
    if (period)
        T = *period;
    else if (in.period)
        T = *in.period;
    else
        throw hill::domain_error("correct: supply --T or an input file with a period");

    hill::CorrectorOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    if (symmetry == "on")
        opts.symmetry = hill::SymmetryMode::on;
    else if (symmetry == "off")
        opts.symmetry = hill::SymmetryMode::off;
    else if (symmetry != "auto")
        throw hill::domain_error("correct: symmetry must be auto, on, or off");
    if (constraint == "energy")
        opts.constraint = hill::CorrectorConstraint::energy;
    else if (constraint == "period")
        opts.constraint = hill::CorrectorConstraint::period;
    else if (constraint != "none")
        throw hill::domain_error("correct: constraint must be none, energy, or period");
    if (target) opts.target = *target;

    const hill::PeriodicOrbit orbit = hill::correct(in.ic, T, opts);
    json j;
    j["family"] = in.family ? *in.family : "corrected";
    if (in.Lp)
        j["Lp"] = *in.Lp;
    else
        j["Lp"] = nullptr;
    j["ic"] = state_json(orbit.ic);
    j["period"] = orbit.period;
    j["energy"] = orbit.energy;
    j["s1"] = orbit.s1;
    j["s2"] = orbit.s2;
    j["residual"] = orbit.residual;
    j["iterations"] = orbit.iterations;
    j["planar"] = orbit.planar;
    write_text(output, j.dump(2) + "\n");
    return 0;
}

int cmd_family(const std::string& start_arg, int members, int direction, double step,
               double tol, const std::string& output) {
    const IcInput in = read_ic(start_arg);
    if (!in.period)
        throw hill::domain_error("family: the start file must contain a period");
    hill::CorrectorOptions copts;
    copts.tol = tol;
    const hill::PeriodicOrbit seed = hill::correct(in.ic, *in.period, copts);
    hill::ContinuationOptions opts;
    opts.tol = tol;
    if (step > 0.0) opts.initial_step = step;
    const auto family = hill::continue_family(seed, direction, members, opts);
    if (static_cast<int>(family.size()) < members)
        std::fprintf(stderr, "family terminated after %zu of %d members\n", family.size(),
                     members);
    std::string csv = "energy,period,s1_scaled,s2_scaled\n";
    csv += hill::csv_row({seed.energy, seed.period, hill::scaled_stability_index(seed.s1),
                          hill::scaled_stability_index(seed.s2)});
    for (const auto& m : family)
        csv += hill::csv_row({m.energy, m.period, hill::scaled_stability_index(m.s1),
                              hill::scaled_stability_index(m.s2)});
    write_text(output, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"libration-point dynamics toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "key=value file with tolerance defaults");

    std::string output;
    auto add_output = [&output](CLI::App* sub) {
        sub->add_option("--output", output,
                        "write to this file instead of stdout (HILL_OUTPUT_DIR overrides "
                        "the directory for relative paths)");
    };

    auto* sc_constants = app.add_subcommand("constants", "model constants and thresholds");
    add_output(sc_constants);

    auto* sc_tables = app.add_subcommand("tables", "raw coefficient tables");
    add_output(sc_tables);

    double eq_L = 0.0;
    auto* sc_eq = app.add_subcommand("equilibria", "reduced-flow equilibria at L'");
    sc_eq->add_option("--L", eq_L, "sphere parameter L'")->required();
    add_output(sc_eq);

    double sp_L = 0.0, sp_h = 0.0;
    int sp_nodes = 400;
    auto* sc_sphere = app.add_subcommand("sphere", "level curves on the reduced sphere");
    sc_sphere->set_help_flag("--help", "print help");  // frees -h for the energy flag
    sc_sphere->add_option("--L", sp_L, "sphere parameter L'")->required();
    auto* sp_h_opt = sc_sphere->add_option("--h", sp_h, "energy level (default: auto grid)");
    sc_sphere->add_option("--nodes", sp_nodes, "sweep nodes per curve");
    add_output(sc_sphere);

    std::string orb_family;
    double orb_L = 0.0, orb_phase = 0.0;
    int orb_samples = 256;
    auto* sc_orbit = app.add_subcommand("orbit", "analytic orbit synthesis");
    sc_orbit->add_option("--family", orb_family, "orbit family name")->required();
    sc_orbit->add_option("--L", orb_L, "sphere parameter L'")->required();
    auto* orb_phase_opt =
        sc_orbit->add_option("--phase", orb_phase, "seed phase (default: recommended)");
    sc_orbit->add_option("--samples", orb_samples, "number of samples");
    add_output(sc_orbit);

    std::string prop_ic;
    double prop_t = 0.0, prop_tol = 0.0;
    auto* sc_prop = app.add_subcommand("propagate", "numerical propagation");
    sc_prop->add_option("--ic", prop_ic, "inline state or JSON orbit file")->required();
    sc_prop->add_option("--t", prop_t, "propagation span")->required();
    auto* prop_tol_opt = sc_prop->add_option("--tol", prop_tol, "integrator tolerance");
    add_output(sc_prop);

    std::string cor_ic, cor_constraint = "energy", cor_symmetry = "auto";
    double cor_T = 0.0, cor_target = 0.0, cor_tol = 0.0;
    int cor_max_iter = 15;
    auto* sc_cor = app.add_subcommand("correct", "differential correction");
    sc_cor->add_option("--ic", cor_ic, "inline state or JSON orbit file")->required();
    auto* cor_T_opt = sc_cor->add_option("--T", cor_T, "period guess");
    sc_cor->add_option("--constraint", cor_constraint, "none|energy|period");
    auto* cor_target_opt = sc_cor->add_option("--target", cor_target, "constraint value");
    sc_cor->add_option("--symmetry", cor_symmetry,
                       "auto|on|off (half-period mode for symmetric seeds)");
    auto* cor_tol_opt = sc_cor->add_option("--tol", cor_tol, "convergence tolerance");
    sc_cor->add_option("--max-iter", cor_max_iter, "iteration cap");
    add_output(sc_cor);

    std::string fam_start;
    int fam_members = 10, fam_direction = 1;
    double fam_step = 0.0, fam_tol = 0.0;
    auto* sc_fam = app.add_subcommand("family", "family continuation");
    sc_fam->add_option("--start", fam_start, "JSON orbit file to continue from")->required();
    sc_fam->add_option("--members", fam_members, "number of members");
    sc_fam->add_option("--direction", fam_direction, "+1 or -1 (energy sense)");
    sc_fam->add_option("--step", fam_step, "initial arclength step");
    auto* fam_tol_opt = sc_fam->add_option("--tol", fam_tol, "corrector tolerance");
    add_output(sc_fam);

    try {
        app.parse(argc, argv);
        const Config cfg = load_config(config_path);

        if (sc_constants->parsed()) return cmd_constants(output);
        if (sc_tables->parsed()) return cmd_tables(output);
        if (sc_eq->parsed()) return cmd_equilibria(eq_L, output);
        if (sc_sphere->parsed()) {
            std::optional<double> h;
            if (sp_h_opt->count()) h = sp_h;
            return cmd_sphere(sp_L, h, sp_nodes, output);
        }
        if (sc_orbit->parsed()) {
            std::optional<double> phase;
            if (orb_phase_opt->count()) phase = orb_phase;
            return cmd_orbit(orb_family, orb_L, phase, orb_samples, output);
        }
        if (sc_prop->parsed()) {
            const double tol =
                prop_tol_opt->count() ? prop_tol : cfg.number("tol", 1e-12);
            return cmd_propagate(prop_ic, prop_t, tol, output);
        }
        if (sc_cor->parsed()) {
            std::optional<double> period, target;
            if (cor_T_opt->count()) period = cor_T;
            if (cor_target_opt->count()) target = cor_target;
            const double tol =
                cor_tol_opt->count() ? cor_tol : cfg.number("corrector_tol", 1e-12);
            return cmd_correct(cor_ic, period, cor_constraint, target, cor_symmetry, tol,
                               cor_max_iter, output);
        }
        if (sc_fam->parsed()) {
            const double tol =
                fam_tol_opt->count() ? fam_tol : cfg.number("corrector_tol", 1e-12);
            return cmd_family(fam_start, fam_members, fam_direction, fam_step, tol, output);
        }
        return 2;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const hill::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const hill::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
