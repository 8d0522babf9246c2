// fracplanar: stability analysis and solvers for planar incommensurate
// fractional systems.  Subcommands: stability, solve, specfun, analyze,
// reproduce.  Exit codes: 0 success (or "asymptotically stable"), 1 parse /
// validation / solver failure, 2 not asymptotically stable, 3 inconclusive.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracplanar/analysis.hpp"
#include "fracplanar/examples.hpp"
#include "fracplanar/io.hpp"
#include "fracplanar/solver.hpp"
#include "fracplanar/specfun.hpp"
#include "fracplanar/stability.hpp"

namespace {

using nlohmann::json;
using namespace fracplanar;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// JSON forbids inf/nan literals; report them as strings instead of null.
json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

Vec2 parse_pair(const std::string& text, const char* what) {
    const auto comma = text.find(',');
    if (comma == std::string::npos || comma + 1 >= text.size())
        throw ParseError(std::string(what) + ": expected 'a,b', got '" + text + "'");
    try {
        std::size_t used = 0;
        const double a = std::stod(text.substr(0, comma), &used);
        if (used != comma) throw std::invalid_argument("");
        const std::string rest = text.substr(comma + 1);
        const double b = std::stod(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("");
        return {a, b};
    } catch (const std::logic_error&) {
        throw ParseError(std::string(what) + ": expected 'a,b', got '" + text + "'");
    }
}

std::pair<double, double> parse_time_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos || dots == 0 || dots + 2 >= text.size())
        throw ParseError("--t: expected 'lo..hi', got '" + text + "'");
    try {
        std::size_t used = 0;
        const double lo = std::stod(text.substr(0, dots), &used);
        if (used != dots) throw std::invalid_argument("");
        const std::string rest = text.substr(dots + 2);
        const double hi = std::stod(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("");
        if (!(lo > 0.0) || !(hi >= lo))
            throw ParseError("--t: need 0 < lo <= hi, got '" + text + "'");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw ParseError("--t: expected 'lo..hi', got '" + text + "'");
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    return out;
}

json verdict_to_json(const PlanarSystem& sys, const StabilityVerdict& v) {
    const CharTriple tr = char_coeffs(sys);
    const TrigConsts tc = trig_consts(sys.orders);
    json criteria = json::array();
    for (CriterionTag tag : v.criteria_hit) criteria.push_back(to_string(tag));
    json out = {
        {"status", to_string(v.status)},
        {"criteria", criteria},
        {"winding_count", v.winding_count ? json(*v.winding_count) : json(nullptr)},
        {"imaginary_zero_free",
         v.imaginary_zero_free ? json(*v.imaginary_zero_free) : json(nullptr)},
        {"diagnostics", v.diagnostics},
        {"alpha", {sys.orders.alpha1(), sys.orders.alpha2()}},
        {"triple", {{"a", tr.a}, {"b", tr.b}, {"c", tr.c}}},
        {"constants",
         {{"rho1", tc.rho1}, {"rho2", tc.rho2}, {"q1", tc.q1}, {"q2", tc.q2}}},
    };
    return out;
}

int verdict_exit_code(Stability s) {
    switch (s) {
        case Stability::AsymptoticallyStable: return 0;
        case Stability::NotAsymptoticallyStable: return 2;
        case Stability::Inconclusive: return 3;
    }
    return 3;
}

int run_stability(const std::string& spec_path, bool as_json, bool allow_equal) {
    const PlanarSystem sys = load_system(spec_path, allow_equal);
    const StabilityVerdict v = stability_verdict(sys);
    if (as_json) {
        std::cout << verdict_to_json(sys, v).dump(2) << "\n";
    } else {
        const CharTriple tr = char_coeffs(sys);
        const TrigConsts tc = trig_consts(sys.orders);
        std::cout << "status: " << to_string(v.status) << "\n";
        std::cout << "criteria:";
        if (v.criteria_hit.empty()) std::cout << " (none)";
        for (CriterionTag tag : v.criteria_hit) std::cout << " " << to_string(tag);
        std::cout << "\n";
        std::cout << "winding zeros: "
                  << (v.winding_count ? std::to_string(*v.winding_count) : "n/a") << "\n";
        std::cout << "imaginary-axis zero-free: "
                  << (v.imaginary_zero_free ? (*v.imaginary_zero_free ? "yes" : "no")
                                            : "n/a")
                  << "\n";
        std::cout << "a = " << fmt17(tr.a) << "  b = " << fmt17(tr.b)
                  << "  c = " << fmt17(tr.c) << "\n";
        std::cout << "rho1 = " << fmt17(tc.rho1) << "  rho2 = " << fmt17(tc.rho2)
                  << "  q1 = " << fmt17(tc.q1) << "  q2 = " << fmt17(tc.q2) << "\n";
        if (!v.diagnostics.empty()) std::cout << "diagnostics: " << v.diagnostics << "\n";
    }
    return verdict_exit_code(v.status);
}

struct SolveArgs {
    std::string spec_path;
    std::string method = "pi";
    std::string x0_text = "0,0";
    double h = 1.0 / 200.0;
    double t_end = 1.0;
    std::string out_path; // empty -> stdout
    bool allow_equal = false;
};

int run_solve(const SolveArgs& args) {
    const PlanarSystem sys = load_system(args.spec_path, args.allow_equal);
    const Vec2 x0 = parse_pair(args.x0_text, "--x0");
    Trajectory traj;
    if (args.method == "pi") {
        StepperConfig cfg;
        cfg.h = args.h;
        cfg.t_end = args.t_end;
        traj = solve_pi_trapezoidal(sys, x0, cfg);
    } else if (args.method == "voc") {
        traj = linear_voc_solution(sys, x0, args.h, args.t_end);
    } else {
        std::string warning;
        traj = solve_nonlinear_picard(sys, x0, args.h, args.t_end, {}, &warning);
        if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
    }
    if (args.out_path.empty()) {
        write_trajectory_csv(std::cout, traj);
    } else {
        write_trajectory_csv(args.out_path, traj);
    }
    return 0;
}

struct SpecfunArgs {
    std::string spec_path;
    std::string family;      // "R" or "S"
    std::string index;       // 0 | alpha1 | alpha2 | l
    std::string range_text;  // "lo..hi"
    int points = 64;
    std::string out_path;
    bool allow_equal = false;
};

int run_specfun(const SpecfunArgs& args) {
    const PlanarSystem sys = load_system(args.spec_path, args.allow_equal);
    const auto [lo, hi] = parse_time_range(args.range_text);
    if (args.points < 1) throw ParseError("--points: need at least 1");

    std::optional<RIndex> r_index;
    std::optional<SIndex> s_index;
    if (args.family == "R") {
        if (args.index == "0") r_index = RIndex::Zero;
        else if (args.index == "alpha1") r_index = RIndex::Alpha1;
        else if (args.index == "alpha2") r_index = RIndex::Alpha2;
        else throw ParseError("--index: family R takes 0, alpha1 or alpha2");
    } else {
        if (args.index == "alpha1") s_index = SIndex::Alpha1;
        else if (args.index == "alpha2") s_index = SIndex::Alpha2;
        else if (args.index == "l") s_index = SIndex::L;
        else throw ParseError("--index: family S takes alpha1, alpha2 or l");
    }

    const LaplaceKernels kernels(char_coeffs(sys), sys.orders);
    const int n = (hi > lo) ? args.points : 1;
    const double ratio = (n > 1) ? std::pow(hi / lo, 1.0 / (n - 1)) : 1.0;

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!args.out_path.empty()) {
        file = open_output(args.out_path);
        out = &file;
    }
    *out << "t,value,family,index\n";
    for (int i = 0; i < n; ++i) {
        const double t = (i + 1 == n) ? hi : lo * std::pow(ratio, i);
        const double value = r_index ? kernels.eval_R(*r_index, t)
                                     : kernels.eval_S(*s_index, t);
        const std::string idx = r_index ? to_string(*r_index) : to_string(*s_index);
        *out << fmt17(t) << "," << fmt17(value) << "," << args.family << "," << idx
             << "\n";
    }
    return 0;
}

struct AnalyzeArgs {
    std::string traj_path;
    double nu = 0.0;
    std::string window_text;           // "lo,hi"; empty -> [t_end/2, t_end]
    std::optional<double> m_bound;
    std::string spec_path;             // optional, enables the basin estimate
    double epsilon = 0.5;
    std::string out_path;
    bool allow_equal = false;
};

int run_analyze(const AnalyzeArgs& args) {
    const Trajectory traj = read_trajectory_csv(args.traj_path);
    const double t_end = traj.t(traj.size() - 1);
    double lo = t_end / 2.0;
    double hi = t_end;
    if (!args.window_text.empty()) {
        const Vec2 w = parse_pair(args.window_text, "--window");
        lo = w.x1;
        hi = w.x2;
    }
    if (lo <= 0.0) lo = traj.h;

    const DecayReport decay = decay_exponent(traj, args.nu, lo, hi);
    const double wnorm = weighted_norm(traj, args.nu);

    json report = {
        {"fitted_mu", num(decay.fitted_mu)},
        {"tail_sup", num(decay.tail_sup)},
        {"verdict", to_string(decay.verdict)},
        {"weighted_norm", num(wnorm)},
        {"delta", nullptr},
        {"nu", args.nu},
        {"window", {decay.window_lo, decay.window_hi}},
    };
    if (args.m_bound) {
        report["m_bound"] = *args.m_bound;
        report["ml_stable"] = ml_stability_check(traj, args.nu, *args.m_bound);
    }
    if (!args.spec_path.empty()) {
        const PlanarSystem sys = load_system(args.spec_path, args.allow_equal);
        const BasinReport basin = basin_estimate_detail(sys, args.epsilon);
        report["delta"] = num(basin.delta);
        report["basin"] = {{"epsilon", basin.epsilon}, {"r0", num(basin.r0)},
                           {"C", num(basin.C)},        {"M_alpha1", num(basin.M_alpha1)},
                           {"M_alpha2", num(basin.M_alpha2)}, {"M_l", num(basin.M_l)},
                           {"denominator", num(basin.denominator)}};
    }
    if (args.out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        open_output(args.out_path) << report.dump(2) << "\n";
    }
    return 0;
}

struct ReproduceArgs {
    int example = 1;
    std::string out_dir;
    double h = 1.0 / 200.0;
    double t_end = 100.0;
};

json decay_run_json(const Trajectory& traj, double nu, double window_lo,
                    double window_hi) {
    const DecayReport decay = decay_exponent(traj, nu, window_lo, window_hi);
    return {
        {"fitted_mu", num(decay.fitted_mu)},
        {"tail_sup", num(decay.tail_sup)},
        {"verdict", to_string(decay.verdict)},
        {"weighted_norm", num(weighted_norm(traj, nu))},
        {"window", {decay.window_lo, decay.window_hi}},
    };
}

int run_reproduce(const ReproduceArgs& args) {
    const ExampleSpec ex = paper_example(args.example);
    const std::filesystem::path dir =
        args.out_dir.empty() ? std::filesystem::path("example" + std::to_string(args.example))
                             : std::filesystem::path(args.out_dir);
    std::filesystem::create_directories(dir);

    StepperConfig cfg;
    cfg.h = args.h;
    cfg.t_end = args.t_end;
    const double window_lo = std::max(1.0, args.t_end / 2.0);
    const double window_hi = args.t_end;

    const StabilityVerdict verdict = stability_verdict(ex.system);
    json report = {
        {"example", args.example},
        {"alpha", {ex.system.orders.alpha1(), ex.system.orders.alpha2()}},
        {"nu", ex.nu},
        {"h", cfg.h},
        {"t_end", cfg.t_end},
        {"method", "pi"},
        {"stability", verdict_to_json(ex.system, verdict)},
        {"runs", json::array()},
    };

    const Trajectory traj = solve_pi_trapezoidal(ex.system, ex.x0, cfg);
    write_trajectory_csv((dir / "solution.csv").string(), traj);
    write_scaled_csv((dir / "scaled.csv").string(), traj, ex.nu);
    json run = decay_run_json(traj, ex.nu, window_lo, window_hi);
    run["x0"] = {ex.x0.x1, ex.x0.x2};
    run["solution"] = "solution.csv";
    run["scaled"] = "scaled.csv";
    report["runs"].push_back(run);

    if (ex.x0_alt) {
        json alt;
        alt["x0"] = {ex.x0_alt->x1, ex.x0_alt->x2};
        try {
            const Trajectory traj_alt = solve_pi_trapezoidal(ex.system, *ex.x0_alt, cfg);
            write_trajectory_csv((dir / "solution_alt.csv").string(), traj_alt);
            write_scaled_csv((dir / "scaled_alt.csv").string(), traj_alt, ex.nu);
            alt.update(decay_run_json(traj_alt, ex.nu, window_lo, window_hi));
            alt["solution"] = "solution_alt.csv";
            alt["scaled"] = "scaled_alt.csv";
        } catch (const Error& e) {
            // far initial states may genuinely escape; record that instead of failing
            alt["verdict"] = "Unbounded";
            alt["error"] = e.what();
        }
        report["runs"].push_back(alt);
    }

    open_output((dir / "report.json").string()) << report.dump(2) << "\n";
    std::cout << "wrote " << (dir / "report.json").string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"planar incommensurate fractional systems: stability, kernels, solvers"};
    // keep -h free: solve/reproduce take the step size as --h
    app.set_help_flag("--help", "print usage");
    app.require_subcommand(1);

    // stability
    std::string st_spec;
    bool st_json = false;
    bool st_allow_equal = false;
    CLI::App* st = app.add_subcommand(
        "stability", "classify a system spec (exit 0 stable, 2 not stable, 3 inconclusive)");
    st->set_help_flag("--help", "print usage");
    st->add_option("spec", st_spec, "system spec JSON file")->required();
    st->add_flag("--json", st_json, "emit a JSON report");
    st->add_flag("--allow-equal-orders", st_allow_equal,
                 "accept alpha1 == alpha2 at parse time (analysis still rejects it)");

    // solve
    SolveArgs so;
    CLI::App* solve = app.add_subcommand("solve", "integrate a system and emit t,x1,x2 CSV");
    solve->set_help_flag("--help", "print usage");
    solve->add_option("spec", so.spec_path, "system spec JSON file")->required();
    solve->add_option("--h", so.h, "step size")->capture_default_str();
    solve->add_option("--t-end", so.t_end, "final time")->capture_default_str();
    solve->add_option("--method", so.method, "pi | voc | picard")
        ->check(CLI::IsMember({"pi", "voc", "picard"}))
        ->capture_default_str();
    solve->add_option("--x0", so.x0_text, "initial state 'a,b' (use --x0=-1,2 for a leading minus)")
        ->capture_default_str();
    solve->add_option("--out", so.out_path, "output CSV path (default stdout)");
    solve->add_flag("--allow-equal-orders", so.allow_equal,
                    "accept alpha1 == alpha2 (pi method only)");

    // specfun
    SpecfunArgs sf;
    CLI::App* specfun =
        app.add_subcommand("specfun", "tabulate a kernel function as t,value,family,index CSV");
    specfun->set_help_flag("--help", "print usage");
    specfun->add_option("spec", sf.spec_path, "system spec JSON file")->required();
    specfun->add_option("--family", sf.family, "R | S")
        ->check(CLI::IsMember({"R", "S"}))
        ->required();
    specfun->add_option("--index", sf.index, "R: 0|alpha1|alpha2;  S: alpha1|alpha2|l")
        ->required();
    specfun->add_option("--t", sf.range_text, "time range 'lo..hi', lo > 0")->required();
    specfun->add_option("--points", sf.points, "number of log-spaced samples")
        ->capture_default_str();
    specfun->add_option("--out", sf.out_path, "output CSV path (default stdout)");
    specfun->add_flag("--allow-equal-orders", sf.allow_equal, "accept alpha1 == alpha2");

    // analyze
    AnalyzeArgs an;
    double an_m_bound = 0.0;
    CLI::App* analyze =
        app.add_subcommand("analyze", "fit the decay exponent of a trajectory CSV");
    analyze->set_help_flag("--help", "print usage");
    analyze->add_option("trajectory", an.traj_path, "t,x1,x2 CSV file")->required();
    analyze->add_option("--nu", an.nu, "expected decay exponent (alpha1)")->required();
    analyze->add_option("--window", an.window_text,
                        "fit window 'lo,hi' (default second half of the run)");
    CLI::Option* mopt =
        analyze->add_option("--m-bound", an_m_bound, "weighted-norm bound to check");
    analyze->add_option("--spec", an.spec_path,
                        "system spec JSON; adds the basin-radius estimate delta");
    analyze->add_option("--epsilon", an.epsilon, "target ball radius for the basin estimate")
        ->capture_default_str();
    analyze->add_option("--out", an.out_path, "output JSON path (default stdout)");
    analyze->add_flag("--allow-equal-orders", an.allow_equal, "accept alpha1 == alpha2");

    // reproduce
    ReproduceArgs re;
    CLI::App* reproduce = app.add_subcommand(
        "reproduce", "run a built-in example end to end and write solution/scaled/report files");
    reproduce->set_help_flag("--help", "print usage");
    reproduce->add_option("example", re.example, "example number 1..8")
        ->required()
        ->check(CLI::Range(1, 8));
    reproduce->add_option("--out", re.out_dir, "output directory (default example<n>)");
    reproduce->add_option("--h", re.h, "step size")->capture_default_str();
    reproduce->add_option("--t-end", re.t_end, "final time")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (app.got_subcommand(st)) return run_stability(st_spec, st_json, st_allow_equal);
        if (app.got_subcommand(solve)) return run_solve(so);
        if (app.got_subcommand(specfun)) return run_specfun(sf);
        if (app.got_subcommand(analyze)) {
            if (mopt->count() > 0) an.m_bound = an_m_bound;
            return run_analyze(an);
        }
        if (app.got_subcommand(reproduce)) return run_reproduce(re);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
