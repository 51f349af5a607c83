#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = ROTARN_CLI_PATH;
const std::string kData = ROTARN_DATA_DIR;

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path temp_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("rotarn_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("model build exports all blocks plus metadata and manifest") {
    fs::path out = temp_dir("build");
    REQUIRE(run("model build " + kData + "/tiny8.cfg -o " + out.string()) == 0);
    for (const char* name : {"M0", "C1", "K0", "K1", "Mr", "Kr", "Cb"}) {
        CHECK(fs::exists(out / (std::string(name) + ".mtx")));
    }
    CHECK(fs::exists(out / "metadata.json"));
    CHECK(fs::exists(out / "manifest.json"));
    CHECK(slurp(out / "metadata.json").find("\"dof\": 8") != std::string::npos);
}

TEST_CASE("malformed config exits with status 2 naming the field") {
    fs::path cfg = fs::temp_directory_path() / "rotarn_bad.cfg";
    std::ofstream(cfg) << R"({"nodes": [0.0, 1.0], "shaft_segments": [
        {"start_node": 0, "end_node": 9, "outer_diameter": 0.1,
         "inner_diameter": 0.0, "density": 1.0, "youngs_modulus": 1.0}]})";
    CHECK(run("model build " + cfg.string() + " -o " + temp_dir("bad").string()) == 2);
    CHECK(run("model build /nonexistent.cfg -o " + temp_dir("bad2").string()) == 2);
}

TEST_CASE("solve writes eigenvalue tables for both analysis kinds") {
    fs::path mats = temp_dir("mats");
    REQUIRE(run("model build " + kData + "/tiny8.cfg -o " + mats.string()) == 0);

    fs::path modal = temp_dir("modal");
    REQUIRE(run("solve " + mats.string() +
                " --kind modal --omega 100 --method exact --k 6 -o " + modal.string()) == 0);
    std::string csv = slurp(modal / "eigenvalues.csv");
    CHECK(csv.find("damping_ratio") != std::string::npos);
    CHECK(fs::exists(modal / "result.json"));

    fs::path crit = temp_dir("crit");
    REQUIRE(run("solve " + mats.string() +
                " --kind critical --n 1 --method exact --k 6 -o " + crit.string()) == 0);
    CHECK(slurp(crit / "eigenvalues.csv").find("critical_speed") != std::string::npos);

    fs::path red = temp_dir("red");
    REQUIRE(run("solve " + mats.string() +
                " --kind modal --omega 100 --method tgsar --m 4 --k 4 -o " +
                red.string()) == 0);
    CHECK(fs::exists(red / "eigenvalues.csv"));
}

TEST_CASE("usage errors exit with status 2") {
    fs::path mats = temp_dir("mats2");
    REQUIRE(run("model build " + kData + "/tiny8.cfg -o " + mats.string()) == 0);
    CHECK(run("solve " + mats.string() + " --m 0") == 2);
    CHECK(run("solve " + mats.string() + " --kind bogus") == 2);
    CHECK(run("compare") == 2);
    CHECK(run("") == 2);
}

TEST_CASE("compare sweeps methods over an m range") {
    fs::path mats = temp_dir("mats3");
    REQUIRE(run("model build " + kData + "/tiny8.cfg -o " + mats.string()) == 0);
    fs::path out = temp_dir("cmp");
    REQUIRE(run("compare " + mats.string() +
                " --kind modal --omega 100 --methods soar tgsar --m-range 2:4:2 --k 4 -o " +
                out.string()) == 0);
    std::string errors = slurp(out / "errors.csv");
    // header + 2 methods x 2 m values
    CHECK(std::count(errors.begin(), errors.end(), '\n') == 5);
    CHECK(fs::exists(out / "scores.csv"));
    CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("table replay reproduces the recorded error rows") {
    fs::path out = temp_dir("replay");
    REQUIRE(run("compare --from-tables " + kData + "/tables.json -o " + out.string()) == 0);
    std::string json = slurp(out / "replay_errors.json");
    CHECK(json.find("modal") != std::string::npos);
    CHECK(json.find("critical") != std::string::npos);
    CHECK(json.find("tgsar") != std::string::npos);
}

TEST_CASE("campbell emits frequency and crossing tables") {
    fs::path mats = temp_dir("mats4");
    REQUIRE(run("model build " + kData + "/tiny8.cfg -o " + mats.string()) == 0);
    fs::path out = temp_dir("camp");
    REQUIRE(run("campbell " + mats.string() +
                " --omega-grid 0:2000:1000 --n-list 1 --k 2 --method exact -o " +
                out.string()) == 0);
    CHECK(slurp(out / "frequencies.csv").find("damped_frequency") != std::string::npos);
    CHECK(fs::exists(out / "crossings.csv"));
}

TEST_CASE("identical invocations produce byte-identical outputs") {
    fs::path mats = temp_dir("mats5");
    REQUIRE(run("model build " + kData + "/tiny8.cfg -o " + mats.string()) == 0);
    fs::path a = temp_dir("det_a"), b = temp_dir("det_b");
    const std::string args =
        " --kind modal --omega 250 --method tgsar --m 4 --k 4 -o ";
    REQUIRE(run("solve " + mats.string() + args + a.string()) == 0);
    REQUIRE(run("solve " + mats.string() + args + b.string()) == 0);
    CHECK(slurp(a / "eigenvalues.csv") == slurp(b / "eigenvalues.csv"));
    CHECK(slurp(a / "result.json") == slurp(b / "result.json"));
}
