#include "bcinv/cli/commands.hpp"
#include "bcinv/error.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace bcinv;
using namespace bcinv::cli;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("bcinv_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path path(const std::string& name) const { return dir_ / name; }

    void write(const std::string& name, const std::string& text) const { write_text_file(path(name), text); }

    static std::string read(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    }

    int run(const std::string& args) const {
        const std::string cmd = "cd '" + dir_.string() + "' && '" BCINV_EXECUTABLE "' " + args + " >out.log 2>err.log";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    fs::path dir_;
};

const char* nonsymmetric_config(int m) {
    static std::string text;
    text = R"({"N": 2, "T": 1.0, "M": )" + std::to_string(m) + R"(,
  "potential": {"family": "trigonometric", "entries": [
    [{"amplitude": 1, "function": "sin"}, {"offset": 0.3}],
    [{"offset": -0.1}, {"amplitude": 1, "function": "cos"}]]}})";
    return text.c_str();
}

}  // namespace

TEST(FormatDouble, SeventeenDigitsAndSignedZero) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(-0.0), "0");
    EXPECT_EQ(format_double(-2.5e-300), "-2.5e-300");
    EXPECT_EQ(format_double(1e21), "1e+21");
    for (double v : {0.1, 1.0 / 3.0, -7.25e12, 4.9e-324}) EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
    EXPECT_THROW(format_double(std::nan("")), InvalidInput);
}

TEST(JsonFiles, PotentialAndResponseRoundTripExactly) {
    const SpaceTimeGrid g(2, 1.0, 12);
    const auto v = bcinv::testing::sample_potential(g, bcinv::testing::nonsymmetric);
    const auto v2 = potential_from_json(Json::parse(dump_json(potential_to_json(v))));
    EXPECT_EQ(MatrixFunction1D::max_difference(v, v2), 0.0);
    const auto r = forward_response(v);
    const auto r2 = response_from_json(Json::parse(dump_json(response_to_json(r))));
    EXPECT_EQ(MatrixFunction1D::max_difference(r.values(), r2.values()), 0.0);
    EXPECT_THROW(response_from_json(potential_to_json(v)), InvalidInput);
    Json short_doc = response_to_json(r);
    short_doc["samples"].erase(0);
    EXPECT_THROW(response_from_json(short_doc), InvalidInput);
}

TEST(Config, PotentialFamilies) {
    const SpaceTimeGrid g(2, 2.0, 8);
    RunConfig c = config_from_json(Json::parse(R"({"N": 2, "T": 2.0, "M": 8,
        "potential": {"family": "polynomial", "coefficients": [[1, 0, 0, 1], [0, 2, 0, 0], [0, 0, 3, 0]]}})"));
    EXPECT_TRUE(c.grid_explicit);
    auto v = evaluate_potential(c, g);
    EXPECT_DOUBLE_EQ(v[8](0, 1), 2.0 * 2.0);
    EXPECT_DOUBLE_EQ(v[8](1, 0), 3.0 * 4.0);
    EXPECT_DOUBLE_EQ(v[8](1, 1), 1.0);

    c.potential = Json::parse(R"({"family": "constant", "value": [1, 2, 3, 4]})");
    EXPECT_EQ(evaluate_potential(c, g)[3](1, 0), 3.0);

    c.potential = Json::parse(R"({"family": "trigonometric", "entries": [
        [{"offset": 1, "amplitude": 2, "frequency": 3, "phase": 0.5}, {}],
        [{"function": "cos", "amplitude": 1}, {"offset": -1}]]})");
    v = evaluate_potential(c, g);
    EXPECT_DOUBLE_EQ(v[2](0, 0), 1.0 + 2.0 * std::sin(3.0 * 0.5 + 0.5));
    EXPECT_DOUBLE_EQ(v[2](1, 0), std::cos(0.5));
    EXPECT_EQ(v[2](0, 1), 0.0);

    c.potential = Json::parse(R"({"family": "samples", "samples": [[0,0,0,0]]})");
    EXPECT_THROW(evaluate_potential(c, g), InvalidInput);
    c.potential = Json::parse(R"({"family": "spline"})");
    EXPECT_THROW(evaluate_potential(c, g), InvalidInput);

    RunConfig small = config_from_json(Json::parse(R"({"M": 4})"));
    EXPECT_THROW(small.validate(), InvalidInput);
    EXPECT_THROW(config_from_json(Json::parse(R"({"method": "bogus"})")), InvalidInput);
}

TEST_F(CliTest, ForwardZeroPotential) {
    write("cfg.json", R"({"N": 2, "T": 1.0, "M": 10, "potential": {"family": "constant", "value": [0, 0, 0, 0]}})");
    ASSERT_EQ(run("forward --config cfg.json --out r.json"), 0);
    const auto r = response_from_json(read_json_file(path("r.json")));
    EXPECT_EQ(r.values().max_abs(), 0.0);
    EXPECT_EQ(r.size(), 21);
}

TEST_F(CliTest, ForwardTraceAndDeterminism) {
    write("cfg.json", R"({"N": 1, "T": 1.0, "M": 400, "potential": {"family": "constant", "value": [1]}})");
    ASSERT_EQ(run("forward --config cfg.json --out a.json"), 0);
    ASSERT_EQ(run("forward --config cfg.json --out b.json"), 0);
    EXPECT_EQ(read(path("a.json")), read(path("b.json")));
    EXPECT_NEAR(response_from_json(read_json_file(path("a.json")))[0](0, 0), -0.5, 1e-3);
}

TEST_F(CliTest, InvertZeroResponse) {
    write("r.json", dump_json(response_to_json(ResponseFunction::zeros(SpaceTimeGrid(1, 1.0, 12)))));
    ASSERT_EQ(run("invert --response r.json --out v.json"), 0);
    EXPECT_EQ(potential_from_json(read_json_file(path("v.json"))).max_abs(), 0.0);
    EXPECT_TRUE(fs::exists(path("v.rcond.csv")));
}

TEST_F(CliTest, ForwardThenInvertRoundTrip) {
    write("cfg.json", nonsymmetric_config(50));
    ASSERT_EQ(run("forward --config cfg.json --out r.json"), 0);
    for (const char* method : {"amplitude", "resolvent"}) {
        ASSERT_EQ(run(std::string("invert --config cfg.json --response r.json --out v.json --method ") + method), 0);
        const auto v = potential_from_json(read_json_file(path("v.json")));
        const auto exact = bcinv::testing::sample_potential(v.grid(), bcinv::testing::nonsymmetric);
        EXPECT_LE(MatrixFunction1D::max_difference(v, exact), 5e-3);
    }
    const std::string csv = read(path("v.rcond.csv"));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "xi_index,xi,rcond,pass");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 51);
}

TEST_F(CliTest, CorruptedResponseIsInputError) {
    write("r.json", "{\"kind\": \"response\", \"N\": 1,");
    EXPECT_EQ(run("invert --response r.json --out v.json"), 1);
    EXPECT_FALSE(fs::exists(path("v.json")));
    EXPECT_NE(read(path("err.log")).find("error:"), std::string::npos);
    EXPECT_EQ(run("invert --response missing.json --out v.json"), 1);
    EXPECT_EQ(run("invert --out v.json"), 1);
}

TEST_F(CliTest, GridMismatchIsInputError) {
    write("r.json", dump_json(response_to_json(ResponseFunction::zeros(SpaceTimeGrid(1, 1.0, 12)))));
    EXPECT_EQ(run("invert --response r.json --M 16 --out v.json"), 1);
}

TEST_F(CliTest, CharacterizeFullReport) {
    write("cfg.json", nonsymmetric_config(20));
    ASSERT_EQ(run("forward --config cfg.json --out r.json"), 0);
    ASSERT_EQ(run("characterize --response r.json --out c.json --full --stride 2"), 0);
    const Json report = read_json_file(path("c.json"));
    EXPECT_EQ(report["verdict"], "pass");
    EXPECT_EQ(report["records"].size(), 10u);
    EXPECT_TRUE(report["first_failure_xi"].is_null());
    EXPECT_LE(report["identities"]["projector_idempotency"].get<double>(), 1e-8);
    EXPECT_LE(report["identities"]["factorization_residual"].get<double>(), 1e-2);
}

TEST_F(CliTest, SimulateFreeWave) {
    write("cfg.json", R"({"N": 1, "T": 1.0, "M": 10, "potential": {"family": "constant", "value": [0]}})");
    std::vector<Vector> s;
    for (int j = 0; j <= 10; ++j) s.push_back(Vector::Constant(1, j * 0.5));
    write("f.json", dump_json(control_to_json(Control(SpaceTimeGrid(1, 1.0, 10), s))));
    ASSERT_EQ(run("simulate --config cfg.json --control f.json --time 0.6 --out u.csv"), 0);
    std::istringstream csv(read(path("u.csv")));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "x,u0");
    for (int i = 0; i <= 10; ++i) {
        std::getline(csv, line);
        const double u = std::stod(line.substr(line.find(',') + 1));
        EXPECT_EQ(u, i <= 6 ? (6 - i) * 0.5 : 0.0);
    }
    EXPECT_EQ(run("simulate --config cfg.json --control f.json --time 0.65 --out u.csv"), 1);
}

TEST_F(CliTest, RoundtripTable) {
    write("cfg.json", R"({"N": 1, "T": 1.0, "M": 10,
        "potential": {"family": "trigonometric", "entries": [[{"function": "cos", "amplitude": 1}]]}})");
    ASSERT_EQ(run("roundtrip --config cfg.json --out rt.csv"), 0);
    std::istringstream csv(read(path("rt.csv")));
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(csv, line)) lines.push_back(line);
    ASSERT_EQ(lines.size(), 4u);
    EXPECT_EQ(lines[0], "M,h,error,ratio");
    EXPECT_EQ(lines[3].substr(0, 3), "40,");
}

TEST_F(CliTest, BadUsage) {
    EXPECT_EQ(run(""), 1);
    EXPECT_EQ(run("forward --stride -3"), 1);
    EXPECT_EQ(run("forward"), 1);
    EXPECT_EQ(run("invert --response r.json --method gelfand"), 1);
    EXPECT_EQ(run("--help"), 0);
}
