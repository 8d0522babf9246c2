#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fracplanar/charfun.hpp"
#include "fracplanar/io.hpp"

namespace fs = std::filesystem;
using namespace fracplanar;

namespace {

const fs::path& scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("fracplanar_cli_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
    REQUIRE(out.good());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

// invoke the installed binary through the shell, capturing both streams
RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = scratch() / ("stdout_" + std::to_string(counter) + ".txt");
    const fs::path err = scratch() / ("stderr_" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = std::string("\"") + FRACPLANAR_CLI_PATH + "\" " + args +
                            " > \"" + out.string() + "\" 2> \"" + err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* kStableSpec =
    R"({"alpha": [0.4, 0.5], "A": [[-1, 2], [-5, 4]]})";
const char* kUnstableSpec =
    R"({"alpha": [0.3333333333333333, 0.5], "A": [[0, 1], [-0.5, 3]]})";
const char* kForcedSpec =
    R"({"alpha": [0.3333333333333333, 0.5], "A": [[0, 1], [-0.5, 1]], "forcing": "paper"})";
const char* kPlainSpec =
    R"({"alpha": [0.3333333333333333, 0.5], "A": [[0, 1], [-0.5, 1]]})";
const char* kNonlinearSpec =
    R"({"alpha": [0.6, 0.8], "A": [[-1, 1], [-1, -1]],
        "nonlinearity": {"x1": [[1, 2, 2]], "x2": [[1, 2, 0], [1, 0, 2]]}})";

} // namespace

TEST_CASE("stability: verdicts map onto exit codes") {
    const fs::path stable = scratch() / "stable.json";
    const fs::path unstable = scratch() / "unstable.json";
    write_file(stable, kStableSpec);
    write_file(unstable, kUnstableSpec);

    RunResult r = run_cli("stability \"" + stable.string() + "\"");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "AsymptoticallyStable"));

    r = run_cli("stability \"" + stable.string() + "\" --json");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "\"status\""));
    CHECK(contains(r.out, "\"winding_count\""));

    r = run_cli("stability \"" + unstable.string() + "\"");
    CHECK(r.code == 2);
    CHECK(contains(r.out, "NotAsymptoticallyStable"));
}

TEST_CASE("stability: an axis zero defeats both the criteria and the winding count") {
    // coefficients constructed so that Q(1.2 i) = 0 to machine accuracy
    const FracOrders orders(1.0 / 3.0, 0.5);
    const TrigConsts tc = trig_consts(orders);
    const double w = 1.2, c = 1.0;
    const double a = tc.rho2 * std::pow(w, orders.alpha1()) -
                     c * tc.rho1 * std::pow(w, -orders.alpha2());
    const double b = c * tc.rho2 * std::pow(w, -orders.alpha1()) -
                     tc.rho1 * std::pow(w, orders.alpha2());
    const std::string spec = "{\"alpha\": [0.3333333333333333, 0.5], \"A\": [[" +
                             fmt17(a) + ", 1], [" + fmt17(a * b - c) + ", " + fmt17(b) +
                             "]]}";
    const fs::path p = scratch() / "oncurve.json";
    write_file(p, spec);
    const RunResult r = run_cli("stability \"" + p.string() + "\"");
    CHECK(r.code == 3);
    CHECK(contains(r.out, "Inconclusive"));
}

TEST_CASE("stability: bad inputs exit 1 with a message") {
    const fs::path broken = scratch() / "broken.json";
    write_file(broken, "{\"alpha\": [0.4, 0.5");
    CHECK(run_cli("stability \"" + broken.string() + "\"").code == 1);

    const fs::path unknown = scratch() / "unknown.json";
    write_file(unknown, R"({"alpha": [0.4, 0.5], "A": [[-1, 2], [-5, 4]], "extra": 1})");
    const RunResult r1 = run_cli("stability \"" + unknown.string() + "\"");
    CHECK(r1.code == 1);
    CHECK(contains(r1.err, "error"));

    const fs::path equal = scratch() / "equal.json";
    write_file(equal, R"({"alpha": [0.5, 0.5], "A": [[-1, 0], [0, -1]]})");
    CHECK(run_cli("stability \"" + equal.string() + "\"").code == 1);
    // even with the opt-in flag the criteria need distinct orders
    CHECK(run_cli("stability \"" + equal.string() + "\" --allow-equal-orders").code == 1);

    CHECK(run_cli("stability \"" + (scratch() / "absent.json").string() + "\"").code == 1);
}

TEST_CASE("solve: writes a trajectory the readers accept") {
    const fs::path spec = scratch() / "forced.json";
    write_file(spec, kForcedSpec);
    const fs::path csv = scratch() / "sol.csv";

    RunResult r = run_cli("solve \"" + spec.string() + "\" --method pi --h 0.02" +
                          " --t-end 1 --x0 1,2 --out \"" + csv.string() + "\"");
    REQUIRE(r.code == 0);
    const std::string text = slurp(csv);
    CHECK(contains(text, "t,x1,x2"));

    const Trajectory traj = read_trajectory_csv(csv.string());
    CHECK(traj.size() == 51);
    CHECK(traj.samples[0].x1 == 1.0);
    CHECK(traj.samples[0].x2 == 2.0);
    CHECK(traj.h == doctest::Approx(0.02).epsilon(1e-12));

    // variation of constants accepts the same linear problem
    r = run_cli("solve \"" + spec.string() + "\" --method voc --h 0.02 --t-end 1" +
                " --out \"" + (scratch() / "voc.csv").string() + "\"");
    CHECK(r.code == 0);

    CHECK(run_cli("solve \"" + spec.string() + "\" --method rk4").code == 1);
    CHECK(run_cli("solve \"" + spec.string() + "\" --x0 \"1;2\"").code == 1);
}

TEST_CASE("specfun: tabulates a kernel family on a log grid") {
    const fs::path spec = scratch() / "plain.json";
    write_file(spec, kPlainSpec);
    const fs::path csv = scratch() / "kernel.csv";

    const RunResult r = run_cli("specfun \"" + spec.string() +
                                "\" --family R --index 0 --t 0.1..2 --points 5 --out \"" +
                                csv.string() + "\"");
    REQUIRE(r.code == 0);
    std::istringstream in(slurp(csv));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "t,value,family,index");
    int rows = 0;
    std::string last;
    while (std::getline(in, line) && !line.empty()) {
        last = line;
        ++rows;
    }
    CHECK(rows == 5);
    CHECK(last.substr(0, 2) == "2,"); // grid ends exactly at the upper limit
    CHECK(contains(last, ",R,0"));

    CHECK(run_cli("specfun \"" + spec.string() + "\" --family R --index l --t 0.1..2").code == 1);
    CHECK(run_cli("specfun \"" + spec.string() + "\" --family S --index 0 --t 0.1..2").code == 1);
    CHECK(run_cli("specfun \"" + spec.string() + "\" --family S --index l --t 2..0.1").code == 1);
}

TEST_CASE("analyze: decay fit with and without a basin estimate") {
    const fs::path spec = scratch() / "forced2.json";
    write_file(spec, kForcedSpec);
    const fs::path csv = scratch() / "sol2.csv";
    REQUIRE(run_cli("solve \"" + spec.string() + "\" --h 0.02 --t-end 2 --x0 1,2 --out \"" +
                    csv.string() + "\"")
                .code == 0);

    RunResult r = run_cli("analyze \"" + csv.string() +
                          "\" --nu 0.3333333333333333 --window 1,2");
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "\"fitted_mu\""));
    CHECK(contains(r.out, "\"tail_sup\""));
    CHECK(contains(r.out, "\"verdict\""));
    CHECK(contains(r.out, "\"weighted_norm\""));
    CHECK(contains(r.out, "\"delta\": null"));

    const fs::path nl = scratch() / "nonlinear.json";
    write_file(nl, kNonlinearSpec);
    r = run_cli("analyze \"" + csv.string() + "\" --nu 0.3333333333333333 --window 1,2" +
                " --spec \"" + nl.string() + "\" --epsilon 0.5");
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "\"basin\""));
    CHECK(!contains(r.out, "\"delta\": null"));
}

TEST_CASE("reproduce: full artifact set, byte-identical across runs") {
    const fs::path d1 = scratch() / "repro1";
    const fs::path d2 = scratch() / "repro2";
    for (const fs::path& d : {d1, d2}) {
        const RunResult r =
            run_cli("reproduce 2 --h 0.02 --t-end 1.5 --out \"" + d.string() + "\"");
        REQUIRE(r.code == 0);
        for (const char* name :
             {"solution.csv", "scaled.csv", "solution_alt.csv", "scaled_alt.csv", "report.json"})
            CHECK(fs::exists(d / name));
    }
    CHECK(slurp(d1 / "report.json") == slurp(d2 / "report.json"));
    CHECK(slurp(d1 / "solution.csv") == slurp(d2 / "solution.csv"));
    CHECK(slurp(d1 / "solution_alt.csv") == slurp(d2 / "solution_alt.csv"));

    CHECK(run_cli("reproduce 9").code == 1);
    CHECK(run_cli("").code != 0); // a subcommand is required
}
