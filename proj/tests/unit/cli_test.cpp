#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
};

Result run(const std::string& args) {
    const std::string cmd = std::string(DIFFGEO_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::fgets(buf, sizeof buf, pipe)) out += buf;
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("diffgeo_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    fs::path dir_;
};

TEST_F(Cli, SampleThenEstimate) {
    const auto csv = path("torus.csv");
    ASSERT_EQ(run(R"(sample --spec '{"kind":"torus_revolution","params":{"r":1,"R":2}}' --n 1200 --seed 3 --out )" + csv +
                  " --truth-out " + path("truth.csv"))
                  .code,
              0);
    const auto dim = run("dim " + csv + " --out " + path("frames.csv"));
    EXPECT_EQ(dim.code, 0);
    EXPECT_EQ(dim.out, "2\n");
    EXPECT_TRUE(fs::exists(path("frames.csv")));
    EXPECT_EQ(run("tangent " + csv + " --method lpca:8 --dim 2 --out " + path("lpca.csv")).code, 0);
    EXPECT_EQ(run("curvature " + csv + " --riemann --out " + path("curv.csv")).code, 0);
    std::ifstream curv(path("curv.csv"));
    std::string header;
    std::getline(curv, header);
    EXPECT_EQ(header.rfind("index,S,Ric11", 0), 0u);
    EXPECT_NE(header.find("R1212"), std::string::npos);
}

TEST_F(Cli, BenchWritesTableAndManifest) {
    const auto cfg = path("cfg.json");
    std::ofstream(cfg) << R"({"manifolds":[{"kind":"circle","params":{"R":1}}],"n_values":[300],"sigma_values":[0],"runs":2})";
    const auto r = run("bench dim --config " + cfg + " --seed 4 --out " + path("res.csv") + " --manifest " + path("m.json"));
    EXPECT_EQ(r.code, 0);
    std::ifstream res(path("res.csv"));
    std::stringstream text;
    text << res.rdbuf();
    EXPECT_NE(text.str().find("accuracy_pct,100,"), std::string::npos) << text.str();
    EXPECT_TRUE(fs::exists(path("m.json")));
}

TEST_F(Cli, InputErrorsExitTwo) {
    EXPECT_EQ(run("dim " + path("missing.csv")).code, 2);
    std::ofstream(path("bad.csv")) << "1,2\n3,x\n";
    EXPECT_EQ(run("dim " + path("bad.csv")).code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("dim").code, 2);
    EXPECT_EQ(run(R"(sample --spec '{"kind":"sphere","params":{"d":9}}' --n 10)").code, 2);
}

TEST_F(Cli, NumericalFailuresExitThree) {
    std::ofstream same(path("same.csv"));
    for (int i = 0; i < 20; ++i) same << "1,1,1\n";
    same.close();
    EXPECT_EQ(run("dim " + path("same.csv")).code, 3);
}

}  // namespace
