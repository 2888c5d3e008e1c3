#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include <hill/hill.hpp>

using json = nlohmann::json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

const std::string& scratch_dir() {
    static const std::string dir = [] {
        char tmpl[] = "/tmp/hillctl_test.XXXXXX";
        const char* d = mkdtemp(tmpl);
        REQUIRE(d != nullptr);
        return std::string(d);
    }();
    return dir;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    const std::string out_path = scratch_dir() + "/stdout.txt";
    const std::string err_path = scratch_dir() + "/stderr.txt";
    const std::string cmd = env_prefix + "\"" + HILLCTL_PATH + "\" " + args + " > " +
                            out_path + " 2> " + err_path;
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = read_file(out_path);
    r.err = read_file(err_path);
    return r;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string f;
    while (std::getline(in, f, ',')) fields.push_back(f);
    return fields;
}

}  // namespace

TEST_CASE("constants: reproducible JSON with full-precision values") {
    const RunResult a = run("constants");
    REQUIRE(a.code == 0);
    // At least 15 correct significant digits of rho = 3^(-1/3) in the raw text.
    CHECK(a.out.find("\"rho\": 0.6933612743506") != std::string::npos);
    const json j = json::parse(a.out);
    // The JSON text must round-trip the library value bit-for-bit.
    CHECK(j["rho"].get<double>() == hill::build_constants().rho);
    CHECK(j["lambda"].get<double>() == Catch::Approx(2.5082867902473156).epsilon(1e-15));
    CHECK(j["thresholds"]["L0"].get<double>() ==
          Catch::Approx(0.07686064020440647).epsilon(1e-14));
    CHECK(j["tables"]["correction_rows"].get<int>() == 11);
    CHECK(j["correction_audit"].size() == 22);

    // Byte-identical on rerun.
    const RunResult b = run("constants");
    REQUIRE(b.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("tables: every coefficient table is emitted") {
    const RunResult r = run("tables");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["oscillator_even"].size() == 7);
    CHECK(j["oscillator_odd"].size() == 10);
    CHECK(j["oscillator_second_order"].size() == 22);
    CHECK(j["short_period_rows"].size() == 11);
    CHECK(j["short_period_rows"][0].contains("L"));
    CHECK(j["short_period_rows"][0].contains("ell"));
    CHECK(j["short_period_rows"][0].contains("g"));
}

TEST_CASE("equilibria: exactly two families below the first threshold") {
    const RunResult r = run("equilibria --L 0.05");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["Lp"].get<double>() == 0.05);
    REQUIRE(j["count"].get<int>() == 2);
    REQUIRE(j["equilibria"].size() == 2);
    CHECK(j["equilibria"][0]["family"] == "E+1");
    CHECK(j["equilibria"][0]["orbit"] == "vertical-lyapunov");
    CHECK(j["equilibria"][0]["stability"] == "elliptic");
    CHECK(j["equilibria"][1]["family"] == "E-1");
    CHECK(j["equilibria"][1]["orbit"] == "planar-lyapunov");
    CHECK(j["equilibria"][1]["stability"] == "elliptic");
    for (const auto& eq : j["equilibria"]) {
        CHECK(eq["period_warning"].get<bool>() == false);
        CHECK(eq["period_estimate"].get<double>() > 2.9);
        CHECK(eq["period_estimate"].get<double>() < 3.3);
    }
}

TEST_CASE("orbit -> correct -> propagate round trip through files") {
    const std::string dir = scratch_dir();
    const std::string orbit_path = dir + "/orbit.json";
    const std::string corrected_path = dir + "/corrected.json";
    const std::string traj_path = dir + "/traj.csv";

    const RunResult orb =
        run("orbit --family vertical-lyapunov --L 0.001 --output " + orbit_path);
    REQUIRE(orb.code == 0);
    const json oj = json::parse(read_file(orbit_path));
    CHECK(oj["family"] == "vertical-lyapunov");
    CHECK(oj["period"].get<double>() == Catch::Approx(3.13965).margin(1e-4));
    REQUIRE(oj["samples"].size() == 257);
    REQUIRE(oj["samples"][0].size() == 7);
    CHECK(oj["samples"][0][0].get<double>() == 0.0);
    for (int i = 0; i < 6; ++i)
        CHECK(oj["samples"][0][i + 1].get<double>() == oj["ic"][i].get<double>());
    CHECK(oj["s1"].is_null());  // synthesis reports no numeric stability
    CHECK(oj["residual"].is_null());

    // The emitted record seeds the corrector without editing.
    const RunResult cor = run("correct --ic " + orbit_path + " --output " + corrected_path);
    REQUIRE(cor.code == 0);
    const json cj = json::parse(read_file(corrected_path));
    CHECK(cj["family"] == "vertical-lyapunov");
    CHECK(cj["Lp"].get<double>() == 0.001);
    CHECK(cj["residual"].get<double>() <= 1e-12);
    CHECK(cj["iterations"].get<int>() <= 10);
    CHECK(cj["energy"].get<double>() == Catch::Approx(-2.1613734973).margin(1e-8));
    CHECK(cj["period"].get<double>() == Catch::Approx(3.1421002486).margin(1e-8));
    CHECK(cj["planar"].get<bool>() == false);

    // And the corrected record feeds propagation without editing.
    const RunResult prop =
        run("propagate --ic " + corrected_path + " --t 3.2 --output " + traj_path);
    REQUIRE(prop.code == 0);
    const auto lines = split_lines(read_file(traj_path));
    REQUIRE(lines.size() >= 10);
    CHECK(lines[0] == "t,px,py,pz,Px,Py,Pz,H");
    const auto first = split_fields(lines[1]);
    REQUIRE(first.size() == 8);
    // CSV doubles are shortest-round-trip: parsing them recovers the exact
    // binary64 value the JSON carries.
    CHECK(std::stod(first[1]) == cj["ic"][0].get<double>());
    CHECK(std::stod(first[5]) == cj["ic"][4].get<double>());
    const double H0 = std::stod(split_fields(lines[1])[7]);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split_fields(lines[i]);
        REQUIRE(f.size() == 8);
        CHECK(std::abs(std::stod(f[7]) - H0) <= 1e-9);
    }
}

TEST_CASE("family: short continuation emits the seed plus members") {
    const std::string dir = scratch_dir();
    const std::string corrected_path = dir + "/corrected.json";
    if (read_file(corrected_path).empty()) {
        REQUIRE(run("orbit --family vertical-lyapunov --L 0.001 --output " + dir +
                    "/orbit.json").code == 0);
        REQUIRE(run("correct --ic " + dir + "/orbit.json --output " + corrected_path).code ==
                0);
    }
    const std::string fam_path = dir + "/family.csv";
    const RunResult fam = run("family --start " + corrected_path +
                              " --members 3 --direction -1 --output " + fam_path);
    REQUIRE(fam.code == 0);
    const auto lines = split_lines(read_file(fam_path));
    REQUIRE(lines.size() == 5);  // header + seed + 3 members
    CHECK(lines[0] == "energy,period,s1_scaled,s2_scaled");
    double prev_energy = 0.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split_fields(lines[i]);
        REQUIRE(f.size() == 4);
        const double e = std::stod(f[0]);
        if (i > 1) CHECK(e < prev_energy);  // direction -1: energy decreases
        prev_energy = e;
        CHECK(std::stod(f[2]) > 0.0);  // scaled in-plane index of an unstable orbit
    }
}

TEST_CASE("sphere: auto level grid and explicit level") {
    const RunResult autog = run("sphere --L 0.05 --nodes 120");
    REQUIRE(autog.code == 0);
    const auto lines = split_lines(autog.out);
    REQUIRE(lines.size() > 10);
    CHECK(lines[0] == "Lp,h,I1,I2,I3,branch");
    for (std::size_t i = 1; i < lines.size(); ++i)
        CHECK(split_fields(lines[i]).size() == 6);

    // Explicit level between the two equilibrium energies.
    const json ej = json::parse(run("equilibria --L 0.05").out);
    const double h = 0.5 * (ej["equilibria"][0]["energy"].get<double>() +
                            ej["equilibria"][1]["energy"].get<double>());
    std::ostringstream cmd;
    cmd << "sphere --L 0.05 --nodes 80 --h " << std::setprecision(17) << h;
    const RunResult level = run(cmd.str());
    REQUIRE(level.code == 0);
    CHECK(split_lines(level.out).size() > 10);
    CHECK(run("sphere --help").code == 0);
}

TEST_CASE("orbit: explicit phase overrides the recommended one") {
    const RunResult r = run("orbit --family planar-lyapunov --L 0.02 --phase 0 --samples 32");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["phase"].get<double>() == 0.0);
    CHECK(j["recommended_phase"].get<double>() == Catch::Approx(M_PI));
    CHECK(j["samples"].size() == 33);
}

TEST_CASE("config file supplies tolerance defaults") {
    const std::string dir = scratch_dir();
    const std::string cfg_path = dir + "/hill.cfg";
    write_file(cfg_path, "# integration settings\ntol = 1e-8\ncorrector_tol = 1e-10\n");
    const std::string ic = "0.6931528075981269,0,0,0,0.6928173472492271,0.0632613228738434";

    const RunResult coarse =
        run("--config " + cfg_path + " propagate --ic " + ic + " --t 20");
    const RunResult fine = run("propagate --ic " + ic + " --t 20");
    REQUIRE(coarse.code == 0);
    REQUIRE(fine.code == 0);
    // Default tolerance is 1e-12; the config loosens it to 1e-8, so the
    // integrator takes visibly fewer steps.
    CHECK(split_lines(coarse.out).size() * 2 < split_lines(fine.out).size());

    // An explicit flag beats the config.
    const RunResult flagged =
        run("--config " + cfg_path + " propagate --ic " + ic + " --t 20 --tol 1e-12");
    REQUIRE(flagged.code == 0);
    CHECK(split_lines(flagged.out).size() == split_lines(fine.out).size());

    write_file(dir + "/bad.cfg", "this line has no equals sign\n");
    CHECK(run("--config " + dir + "/bad.cfg constants").code == 2);
    CHECK(run("--config " + dir + "/nonexistent.cfg constants").code == 2);
}

TEST_CASE("output directory override applies to relative paths only") {
    const std::string dir = scratch_dir();
    const std::string sub = dir + "/outdir";
    std::filesystem::create_directory(sub);
    const RunResult rel =
        run("constants --output rel_constants.json", "HILL_OUTPUT_DIR=" + sub + " ");
    REQUIRE(rel.code == 0);
    CHECK(std::filesystem::exists(sub + "/rel_constants.json"));

    const std::string abs_path = dir + "/abs_constants.json";
    const RunResult abs =
        run("constants --output " + abs_path, "HILL_OUTPUT_DIR=" + sub + " ");
    REQUIRE(abs.code == 0);
    CHECK(std::filesystem::exists(abs_path));
    CHECK_FALSE(std::filesystem::exists(sub + "/" + abs_path));
}

TEST_CASE("usage and domain errors exit 2, numerical failures exit 3") {
    CHECK(run("").code == 2);                    // a subcommand is required
    CHECK(run("bogus").code == 2);               // unknown subcommand
    CHECK(run("equilibria").code == 2);          // missing required option
    CHECK(run("equilibria --L -1").code == 2);   // domain error
    CHECK(run("equilibria --L 0").code == 2);
    CHECK(run("propagate --ic 1,2,3 --t 1").code == 2);  // not a six-element state
    CHECK(run("propagate --ic " + scratch_dir() + "/missing.json --t 1").code == 2);
    CHECK(run("correct --ic 0.7,0,0,0,0.7,0.06").code == 2);  // no period anywhere
    CHECK(run("correct --ic 0.7,0,0,0,0.7,0.06 --T 3 --constraint speed").code == 2);
    CHECK(run("correct --ic 0.7,0,0,0,0.7,0.06 --T 3 --symmetry maybe").code == 2);
    CHECK(run("propagate --ic 0.7,0,0,0,0.7,0.06 --t 1 --tol 1e-20").code == 2);
    CHECK(run("orbit --family spiral --L 0.01").code == 2);
    CHECK(run("orbit --family halo-north --L 0.01").code == 2);  // below its threshold

    const std::string dir = scratch_dir();
    write_file(dir + "/broken.json", "{ not json");
    CHECK(run("propagate --ic " + dir + "/broken.json --t 1").code == 2);
    write_file(dir + "/no_ic.json", "{\"period\": 3.0}");
    CHECK(run("propagate --ic " + dir + "/no_ic.json --t 1").code == 2);

    // Numerical failures: collision during flight, non-converging correction.
    CHECK(run("propagate --ic 0.3,0.05,0.1,0.02,0.1,0.05 --t 3").code == 3);
    CHECK(run("correct --ic 0.75,0,0,0,0.9,0 --T 3").code == 3);
    const RunResult hopeless = run("correct --ic 0.75,0,0,0,0.9,0 --T 3");
    CHECK(hopeless.err.find("numerical error") != std::string::npos);
}

TEST_CASE("help screens exist for every subcommand") {
    CHECK(run("--help").code == 0);
    for (const char* sub :
         {"constants", "tables", "equilibria", "sphere", "orbit", "propagate", "correct",
          "family"})
        CHECK(run(std::string(sub) + " --help").code == 0);
}
