// Runs the cyclebound executable on the sample files.

#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(CYCLEBOUND_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string sample(const std::string& name) { return std::string(SAMPLES_DIR) + "/" + name; }

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "cyclebound_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

using nlohmann::ordered_json;

} // namespace

TEST(Cli, LyapunovOnZeroAndHamiltonianFields) {
    for (const char* f : {"zero_quadratic.field", "hamiltonian_quadratic.field"}) {
        auto r = run("lyapunov --field " + sample(f) + " --order 7");
        ASSERT_EQ(r.code, 0) << f;
        auto j = ordered_json::parse(r.out);
        ASSERT_EQ(j["results"]["L"].size(), 6u);
        for (const auto& e : j["results"]["L"]) EXPECT_EQ(e["value"]["value"].get<double>(), 0.0) << e.dump();
    }
}

TEST(Cli, ReportLayoutIsStable) {
    auto j = ordered_json::parse(run("lyapunov --field " + sample("zero_quadratic.field") + " --order 4").out);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    EXPECT_EQ(keys, (std::vector<std::string>{"schema", "command", "inputs", "results", "certificates", "violations",
                                              "timings"}));
    EXPECT_EQ(j["schema"], 1);
}

TEST(Cli, SymbolicReportIsByteIdenticalAndRoundTrips) {
    std::string args = "lyapunov --field " + sample("symbolic_quadratic.field") + " --order 9 --symbolic --no-timings";
    auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(ordered_json::parse(a.out).dump(2) + "\n", a.out);
}

TEST(Cli, TextFormat) {
    auto r = run("--format text lyapunov --field " + sample("zero_quadratic.field") + " --order 3");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("command"), std::string::npos);
    EXPECT_FALSE(ordered_json::accept(r.out));
}

TEST(Cli, InputErrorsExitWithOne) {
    auto bad = scratch("bad.field");
    write(bad, "degree 2\na 2 0 one\n");
    EXPECT_EQ(run("lyapunov --field " + bad.string()).code, 1);
    EXPECT_EQ(run("lyapunov --field /nonexistent.field").code, 1);
    EXPECT_EQ(run("lyapunov").code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
    auto badpt = scratch("bad.lambda");
    write(badpt, "a20 1/20\na20 1/20\n");
    EXPECT_EQ(run("certify --field " + sample("symbolic_quadratic.field") + " --lambda " + badpt.string()).code, 1);
    EXPECT_EQ(run("melnikov --field " + sample("radial.field") + " --kmax 40").code, 1);
}

TEST(Cli, MalformedPointFileNamesTheLine) {
    auto badpt = scratch("bad2.lambda");
    write(badpt, "a20 1/20\nzz 3\n");
    std::string cmd = std::string(CYCLEBOUND_CLI) + " certify --field " + sample("symbolic_quadratic.field") +
                      " --lambda " + badpt.string() + " 2>&1 >/dev/null";
    FILE* p = ::popen(cmd.c_str(), "r");
    ASSERT_TRUE(p);
    std::array<char, 4096> buf{};
    std::string err(buf.data(), std::fread(buf.data(), 1, buf.size(), p));
    ::pclose(p);
    EXPECT_NE(err.find("line 2:"), std::string::npos) << err;
}

TEST(Cli, ComputationFailureExitsWithTwo) {
    // Huge coefficients: the polar chart degenerates inside the certified disc.
    auto f = scratch("huge.field");
    write(f, "degree 2\nb 2 0 1000000000000\na 2 0 1\n");
    EXPECT_EQ(run("certify --field " + f.string()).code, 2);
}

TEST(Cli, MelnikovRadialAndHamiltonian) {
    auto r = run("melnikov --field " + sample("radial.field") + " --kmax 3");
    ASSERT_EQ(r.code, 0);
    auto j = ordered_json::parse(r.out);
    EXPECT_EQ(j["results"]["k_star"], 1);
    EXPECT_EQ(j["results"]["M"]["value"], "8*pi^1*c^2");
    auto h = ordered_json::parse(run("melnikov --field " + sample("hamiltonian_quadratic.field")).out);
    EXPECT_EQ(h["results"]["k_star"], "none");
}

TEST(Cli, MelnikovValidateAddsScalingTable) {
    auto r = run("melnikov --field " + sample("quadratic_melnikov.field") + " --kmax 3 --validate");
    ASSERT_EQ(r.code, 0);
    auto j = ordered_json::parse(r.out);
    EXPECT_TRUE(j["results"].contains("epsilon_scaling"));
    EXPECT_TRUE(j["violations"].empty());
}

TEST(Cli, OutWritesTheSameDocumentAtomically) {
    auto path = scratch("report.json");
    std::filesystem::remove(path);
    std::string args = "lyapunov --field " + sample("symbolic_quadratic.field") + " --order 5 --no-timings";
    auto r = run(args + " --out " + path.string());
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), run(args).out);
    for (const auto& e : std::filesystem::directory_iterator(path.parent_path()))
        EXPECT_EQ(e.path().string().find(".tmp."), std::string::npos) << e.path();
}

TEST(Cli, CertifyConcretePointWithoutLambda) {
    auto r = run("certify --field " + sample("zero_quadratic.field") + " --order 5");
    ASSERT_EQ(r.code, 0);
    auto j = ordered_json::parse(r.out);
    EXPECT_TRUE(j["violations"].empty());
}
