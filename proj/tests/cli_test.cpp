#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "cubes/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
};

std::string bin() {
    const char* b = std::getenv("CUBES_BIN");
    return b ? b : CUBES_BIN_PATH;
}

fs::path data(const std::string& name) {
    const char* d = std::getenv("CUBES_DATA_DIR");
    return fs::path(d ? d : CUBES_DATA_PATH) / name;
}

Outcome run(const std::string& args, bool merge_stderr = false) {
    std::string cmd = bin() + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    Outcome o;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return o;
    std::array<char, 4096> buf{};
    while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) o.out.append(buf.data(), n);
    int status = pclose(p);
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return o;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / ("cubes_cli_" + std::to_string(::getpid()) + "_" +
                                           ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    fs::path write(const std::string& name, const std::string& text) {
        auto p = dir / name;
        std::ofstream(p) << text;
        return p;
    }

    fs::path dir;
};

}  // namespace

TEST_F(Cli, RunCombinedPipelineEmitsCsv) {
    auto script = write("combined.R",
                        "data |>\n  filter(blue > 3) |>\n  select(red, yellow, blue)|>\n  mutate(green = blue - 1)\n");
    auto o = run("run " + script.string() + " --data " + data("figure1.csv").string());
    EXPECT_EQ(o.code, 0);
    EXPECT_EQ(o.out, "red,yellow,blue,green\n4,5,6,5\n5,3,4,3\n");
}

TEST_F(Cli, RunVerbPerLineScript) {
    auto script = write("lines.R", "filter(red == 3 | green > 4)\nselect(red, green)\n");
    auto o = run("run " + script.string());
    EXPECT_EQ(o.code, 0);
    EXPECT_EQ(o.out, "red,green\n3,6\n5,5\n");
}

TEST_F(Cli, EmptyScriptEchoesInput) {
    auto script = write("empty.R", "\n");
    auto o = run("run " + script.string() + " --data " + data("figure1.csv").string());
    EXPECT_EQ(o.code, 0);
    EXPECT_EQ(o.out, cubes::to_csv(cubes::figure1()));
}

TEST_F(Cli, JsonOutputRoundTrips) {
    auto script = write("s.R", "data |> arrange(desc(red))");
    auto out = dir / "out.json";
    auto o = run("run " + script.string() + " --out " + out.string());
    EXPECT_EQ(o.code, 0);
    auto f = cubes::load_frame(out);
    EXPECT_EQ(f.find("red")->cells[0], cubes::Cell(5.0));
    auto again = run("run " + write("id.R", "").string() + " --data " + out.string() + " --format csv");
    EXPECT_EQ(again.code, 0);
    EXPECT_EQ(cubes::parse_csv(again.out), f);
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run("run " + write("p.R", "data |> fliter(red == 3)").string()).code, 2);
    auto eval = run("run " + write("e.R", "data |> filter(gren > 4)").string(), true);
    EXPECT_EQ(eval.code, 3);
    EXPECT_NE(eval.out.find("green"), std::string::npos);
    EXPECT_EQ(run("run " + (dir / "missing.R").string()).code, 4);
    EXPECT_EQ(run("run " + write("ok.R", "data").string() + " --data " + (dir / "nope.csv").string()).code, 4);
    EXPECT_EQ(run("serve --listen not-an-address").code, 5);
}

TEST_F(Cli, RenderNoColor) {
    auto o = run("render --no-color --data figure1");
    EXPECT_EQ(o.code, 0);
    EXPECT_NE(o.out.find("T    S       P       H      T     S"), std::string::npos);
    EXPECT_NE(run("render --width 10").code, 0);
}

TEST_F(Cli, ExercisesListAndCheck) {
    auto list = run("exercises list");
    EXPECT_EQ(list.code, 0);
    EXPECT_NE(list.out.find("filter-1"), std::string::npos);
    auto good = write("good.R", "filter(red == 3 | green > 4)");
    auto check = run("exercises check filter-1 --answer " + good.string());
    EXPECT_EQ(check.code, 0);
    EXPECT_EQ(check.out, "correct\n");
    auto bad = write("bad.R", "filter(red == 3 & green > 4)");
    auto wrong = run("exercises check filter-1 --json --answer " + bad.string());
    EXPECT_EQ(wrong.code, 1);
    EXPECT_NE(wrong.out.find("\"verdict\": \"incorrect\""), std::string::npos);
}

TEST_F(Cli, ReplReadsStdin) {
    auto input = write("in.txt", "data |> filter(red == 3 | green > 4)\n:check filter-1\n:quit\n");
    auto o = run("repl --no-color < " + input.string());
    EXPECT_EQ(o.code, 0);
    EXPECT_NE(o.out.find("rows kept: 1,3"), std::string::npos) << o.out;
    EXPECT_NE(o.out.find("correct"), std::string::npos);
}
