// Command line front end: geometry scans, truncation studies, gate-count
// tables, and single-point runs, all emitting deterministic CSV.

#include "noqe/io.hpp"
#include "noqe/noqe.hpp"
#include "noqe/resources.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

struct SystemSpec {
    std::function<noqe::Molecule(double)> geometry;
    int d = 0;       // radical sites = electrons
    int n_refs = 0;  // spin-recoupled references
};

SystemSpec pick_system(const std::string& name) {
    if (name == "h2") return {[](double r) { return noqe::make_h2(r); }, 2, 2};
    if (name == "h4") return {[](double a) { return noqe::make_h4_square(a); }, 4, 6};
    throw noqe::Error("unknown system '" + name + "' (expected h2 or h4)");
}

// Config-file values fill in any flag the user did not pass on the command
// line; the flag always wins. Keys are the long flag names.
void merge_config(CLI::App* sub, const std::string& path,
                  const std::vector<std::pair<std::string, std::string*>>& keys) {
    if (path.empty()) return;
    auto cfg = noqe::parse_config_file(path);
    std::set<std::string> known;
    for (const auto& [flag, target] : keys) {
        known.insert(flag);
        auto it = cfg.find(flag);
        if (it == cfg.end()) continue;
        if (sub->count("--" + flag) == 0) *target = it->second;
    }
    for (const auto& [key, value] : cfg)
        if (!known.count(key)) throw noqe::Error("config key '" + key + "' is not a flag of this command");
}

int parse_int(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(text, &pos);
        if (pos != text.size()) throw noqe::Error("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw noqe::Error("cannot parse " + what + " from '" + text + "'");
    }
}

double parse_real(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw noqe::Error("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw noqe::Error("cannot parse " + what + " from '" + text + "'");
    }
}

std::string sanitize(std::string s) {
    for (char& c : s) {
        if (c == ',' ) c = ';';
        if (c == '\n') c = ' ';
    }
    return s;
}

// Shared textual options of scan and single-point.
struct RunArgs {
    std::string system = "h2";
    std::string basis = "6-311g";
    std::string scale = "uniform:1.0";
    std::string mode = "exact";
    std::string threshold = "1e-4";
    std::string out;
    std::string config;
};

noqe::NoqeOptions make_options(const RunArgs& a) {
    noqe::NoqeOptions opts;
    opts.scaling = noqe::parse_scale(a.scale);
    opts.overlap_threshold = parse_real(a.threshold, "overlap threshold");
    noqe::ModeSpec mode = noqe::parse_mode(a.mode);
    if (mode.lowrank) opts.lowrank = mode.opts;
    return opts;
}

int write_scan_csv(const std::string& path, const std::vector<noqe::ScanRow>& rows, int m) {
    noqe::CsvWriter csv(path);
    std::vector<std::string> cols{"r"};
    for (int j = 0; j < m; ++j) cols.push_back("fci_e" + std::to_string(j));
    for (int j = 0; j < m; ++j) cols.push_back("noqe_e" + std::to_string(j));
    for (int j = 0; j < m; ++j) cols.push_back("noci_e" + std::to_string(j));
    cols.push_back("gap");
    for (int j = 0; j < m; ++j) cols.push_back("s2_" + std::to_string(j));
    for (int j = 0; j < m; ++j) cols.push_back("infid_" + std::to_string(j));
    cols.push_back("cf");
    cols.push_back("error");
    csv.header(cols);

    int failed = 0;
    for (const noqe::ScanRow& row : rows) {
        csv.field(row.r);
        if (!row.ok) {
            for (int j = 0; j < 5 * m + 2; ++j) csv.field("");
            csv.field(sanitize(row.error));
            csv.end_row();
            std::cerr << "r = " << noqe::format_sig(row.r) << ": " << row.error << "\n";
            ++failed;
            continue;
        }
        const noqe::PointResult& p = row.result;
        const int nfci = static_cast<int>(p.e_fci.size());
        const int nq = static_cast<int>(p.noqe.size());
        const int nc = static_cast<int>(p.noci.size());
        for (int j = 0; j < m; ++j) {
            if (j < nfci) csv.field(p.e_fci[j]); else csv.field("");
        }
        for (int j = 0; j < m; ++j) {
            if (j < nq) csv.field(p.noqe[j].energy); else csv.field("");
        }
        for (int j = 0; j < m; ++j) {
            if (j < nc) csv.field(p.noci[j].energy); else csv.field("");
        }
        csv.field(noqe::spin_gap(p));
        for (int j = 0; j < m; ++j) {
            if (j < nq) csv.field(p.noqe[j].s2); else csv.field("");
        }
        for (int j = 0; j < m; ++j) {
            if (j < nq) csv.field(p.noqe[j].infidelity); else csv.field("");
        }
        csv.field(p.broken ? 1 : 0);
        csv.field("");
        csv.end_row();
    }
    return failed;
}

int cmd_scan(const RunArgs& a, const std::string& grid_text, const std::string& jobs_text) {
    SystemSpec sys = pick_system(a.system);
    noqe::BasisLibrary lib = noqe::load_basis_library(a.basis);
    noqe::NoqeOptions opts = make_options(a);
    std::vector<double> grid = noqe::parse_grid(grid_text);
    int jobs = parse_int(jobs_text, "jobs");
    if (jobs < 1) throw noqe::Error("jobs must be >= 1");

    auto rows = noqe::scan_grid(grid, sys.geometry, lib, sys.d, opts, jobs);
    int failed = write_scan_csv(a.out, rows, sys.n_refs);
    if (failed) std::cerr << failed << " of " << rows.size() << " grid points failed\n";
    return failed ? 1 : 0;
}

int cmd_single_point(const RunArgs& a, const std::string& r_text) {
    SystemSpec sys = pick_system(a.system);
    noqe::BasisLibrary lib = noqe::load_basis_library(a.basis);
    noqe::NoqeOptions opts = make_options(a);
    double r = parse_real(r_text, "geometry parameter");

    auto rows = noqe::scan_grid({r}, sys.geometry, lib, sys.d, opts, 1);
    int failed = write_scan_csv(a.out, rows, sys.n_refs);
    return failed ? 1 : 0;
}

int cmd_truncate_study(const RunArgs& a, const std::string& r_text, const std::string& eps_text) {
    SystemSpec sys = pick_system(a.system);
    noqe::BasisLibrary lib = noqe::load_basis_library(a.basis);
    double r = parse_real(r_text, "geometry parameter");
    std::vector<double> eps_grid = noqe::parse_grid(eps_text);
    noqe::Molecule mol = sys.geometry(r);

    noqe::CsvWriter csv(a.out);
    std::vector<std::string> cols{"eps"};
    for (int j = 0; j < sys.n_refs; ++j) {
        cols.push_back("l_trunc_" + std::to_string(j));
        cols.push_back("l_eff_" + std::to_string(j));
    }
    cols.insert(cols.end(), {"e_s0", "delta_e", "cost_reduction", "error"});
    csv.header(cols);

    int failed = 0;
    double e_full = 0.0;
    bool have_full = false;
    for (double eps : eps_grid) {
        csv.field(eps);
        try {
            noqe::NoqeOptions opts = make_options(a);
            opts.lowrank = noqe::LowRankOptions{eps, 1, 0};  // truncation-only dressing
            opts.with_fci = false;
            noqe::PointResult p = noqe::analyze_point(mol, lib, sys.d, opts);

            int sum_trunc = 0, sum_eff = 0;
            for (const noqe::ReferenceDiag& d : p.refs) {
                csv.field(d.l_trunc);
                csv.field(d.l_eff);
                sum_trunc += d.l_trunc;
                sum_eff += d.l_eff;
            }
            noqe::Vec e(p.noqe.size()), s2(p.noqe.size());
            for (std::size_t k = 0; k < p.noqe.size(); ++k) {
                e[k] = p.noqe[k].energy;
                s2[k] = p.noqe[k].s2;
            }
            int i0 = noqe::pick_state(e, s2, 0.0);
            if (i0 < 0) throw noqe::Error("no singlet among the retained states");
            double e_s0 = e[i0];
            // the eps grid starts at 0, so the full-rank energy is the first row
            if (!have_full) {
                e_full = e_s0;
                have_full = true;
            }
            csv.field(e_s0);
            csv.field(e_s0 - e_full);
            csv.field(1.0 - static_cast<double>(sum_trunc) / sum_eff);
            csv.field("");
        } catch (const std::exception& ex) {
            for (int j = 0; j < 2 * sys.n_refs + 3; ++j) csv.field("");
            csv.field(sanitize(ex.what()));
            std::cerr << "eps = " << noqe::format_sig(eps) << ": " << ex.what() << "\n";
            ++failed;
        }
        csv.end_row();
    }
    return failed ? 1 : 0;
}

int cmd_resources(const std::string& out, const std::string& n_text, const std::string& d_text,
                  const std::string& k_text) {
    std::vector<double> n_grid = noqe::parse_grid(n_text);
    int k = parse_int(k_text, "trotter steps");

    std::vector<int> d_list;
    {
        std::stringstream ss(d_text);
        std::string item;
        while (std::getline(ss, item, ',')) d_list.push_back(parse_int(item, "site count"));
    }
    if (d_list.empty()) throw noqe::Error("need at least one site count");

    noqe::CsvWriter csv(out);
    csv.header({"n", "d", "m_refs", "policy", "l", "k", "cnot_total", "rz_total", "t_total",
                "depth", "qubits_full", "qubits_reduced"});

    for (int d : d_list) {
        if (d % 2 != 0) throw noqe::Error("site counts must be even (m_s = 0 references)");
        noqe::ReferenceCounts rc = noqe::reference_counts(d, d / 2, d / 2);
        for (double n_real : n_grid) {
            int n = static_cast<int>(n_real);
            if (n <= 0 || n % 2 != 0) throw noqe::Error("spin-orbital counts must be positive and even");

            struct Policy {
                const char* name;
                int l;
                noqe::Ansatz ansatz;
            };
            const Policy policies[] = {
                {"full", n * n, noqe::Ansatz::noucc},
                {"trunc", static_cast<int>(std::llround(0.04 * n * n)), noqe::Ansatz::noucc},
                {"ucj", 1, noqe::Ansatz::noucj},
            };
            for (const Policy& pol : policies) {
                noqe::CostModel cm;
                cm.n_so = n;
                cm.n_refs = static_cast<int>(rc.m);
                cm.k_steps = pol.ansatz == noqe::Ansatz::noucc ? k : 1;
                cm.m_blocks = 2;
                cm.l_values = pol.l;
                cm.ansatz = pol.ansatz;
                noqe::GateCounts g = noqe::gate_counts(cm);

                std::int64_t depth;
                if (pol.ansatz == noqe::Ansatz::noucc) {
                    depth = noqe::schedule_depth(n, noqe::FactorMethod::takagi, pol.l);
                } else {
                    // UCJ layer: two complex basis rotations around one
                    // Jastrow block of N parallel layers
                    depth = 2LL * pol.l * (2 * n) + static_cast<std::int64_t>(pol.l) * n;
                }

                csv.field(n);
                csv.field(d);
                csv.field(static_cast<std::int64_t>(rc.m));
                csv.field(std::string(pol.name));
                csv.field(pol.l);
                csv.field(cm.k_steps);
                csv.field(g.cnot_total);
                csv.field(g.rz_total);
                csv.field(g.t_total);
                csv.field(depth);
                csv.field(g.qubits_full);
                csv.field(g.qubits_reduced);
                csv.end_row();
            }
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Non-orthogonal eigensolver pipeline for hydrogen clusters.\n"
        "Any flag may also appear in a config file (key = value, keys named like\n"
        "the long flags without dashes); command-line flags override the file.\n"
        "Basis .dat files are searched in NOQE_BASIS_PATH when that is set,\n"
        "otherwise in the compiled-in data directory."};
    app.require_subcommand(1);

    RunArgs scan_args, point_args, trunc_args;
    std::string scan_grid = "0.5:3.5:0.05", scan_jobs = "1";
    std::string point_r = "1.0";
    std::string trunc_r = "0.75", trunc_eps = "0:0.028:0.002";
    std::string res_out = "resources.csv", res_n = "8:64:8", res_d = "2,4,6", res_k = "1";
    std::string res_config;

    auto add_run_flags = [](CLI::App* sub, RunArgs& a) {
        sub->add_option("--system", a.system, "h2 (dimer) or h4 (square)")->capture_default_str();
        sub->add_option("--basis", a.basis, "basis library name or .dat path")->capture_default_str();
        sub->add_option("--scale", a.scale,
                        "amplitude scaling: uniform:S | scs:SS,OS | sos:OS")->capture_default_str();
        sub->add_option("--mode", a.mode,
                        "exact | lowrank:k=K,eps=E[,order=P] (k>1 implies order=2 unless given)")
            ->capture_default_str();
        sub->add_option("--threshold", a.threshold, "overlap eigenvalue cutoff")->capture_default_str();
        sub->add_option("--config", a.config, "key = value defaults file");
    };

    CLI::App* scan = app.add_subcommand("scan", "NOQE/NOCI/FCI energies over a geometry grid");
    add_run_flags(scan, scan_args);
    scan->add_option("--grid", scan_grid, "start:stop:step in angstrom, inclusive")->capture_default_str();
    scan->add_option("--jobs", scan_jobs, "worker threads")->capture_default_str();
    scan->add_option("--out", scan_args.out, "output CSV path")->required();

    CLI::App* point = app.add_subcommand("single-point", "one geometry, same columns as scan");
    add_run_flags(point, point_args);
    point->add_option("--r", point_r, "geometry parameter in angstrom")->capture_default_str();
    point->add_option("--out", point_args.out, "output CSV path")->required();

    CLI::App* trunc = app.add_subcommand(
        "truncate-study", "energy and cost versus the factorization truncation threshold");
    add_run_flags(trunc, trunc_args);
    trunc->add_option("--r", trunc_r, "geometry parameter in angstrom")->capture_default_str();
    trunc->add_option("--eps", trunc_eps, "threshold grid start:stop:step (start at 0 for the full-rank row)")
        ->capture_default_str();
    trunc->add_option("--out", trunc_args.out, "output CSV path")->required();

    CLI::App* res = app.add_subcommand("resources", "gate counts over spin-orbital and site grids");
    res->add_option("--n", res_n, "spin-orbital grid start:stop:step")->capture_default_str();
    res->add_option("--d", res_d, "comma-separated radical site counts")->capture_default_str();
    res->add_option("--k", res_k, "Trotter steps for the factorized ansatz")->capture_default_str();
    res->add_option("--config", res_config, "key = value defaults file");
    res->add_option("--out", res_out, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (scan->parsed()) {
            merge_config(scan, scan_args.config,
                         {{"system", &scan_args.system},
                          {"basis", &scan_args.basis},
                          {"scale", &scan_args.scale},
                          {"mode", &scan_args.mode},
                          {"threshold", &scan_args.threshold},
                          {"grid", &scan_grid},
                          {"jobs", &scan_jobs},
                          {"out", &scan_args.out}});
            return cmd_scan(scan_args, scan_grid, scan_jobs);
        }
        if (point->parsed()) {
            merge_config(point, point_args.config,
                         {{"system", &point_args.system},
                          {"basis", &point_args.basis},
                          {"scale", &point_args.scale},
                          {"mode", &point_args.mode},
                          {"threshold", &point_args.threshold},
                          {"r", &point_r},
                          {"out", &point_args.out}});
            return cmd_single_point(point_args, point_r);
        }
        if (trunc->parsed()) {
            merge_config(trunc, trunc_args.config,
                         {{"system", &trunc_args.system},
                          {"basis", &trunc_args.basis},
                          {"scale", &trunc_args.scale},
                          {"mode", &trunc_args.mode},
                          {"threshold", &trunc_args.threshold},
                          {"r", &trunc_r},
                          {"eps", &trunc_eps},
                          {"out", &trunc_args.out}});
            return cmd_truncate_study(trunc_args, trunc_r, trunc_eps);
        }
        if (res->parsed()) {
            merge_config(res, res_config,
                         {{"n", &res_n}, {"d", &res_d}, {"k", &res_k}, {"out", &res_out}});
            return cmd_resources(res_out, res_n, res_d, res_k);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 2;
}
