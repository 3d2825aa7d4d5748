#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "test_support.hpp"

using namespace altbase;
using namespace altbase::testing;

namespace {

const std::string kSqrt13Base = "(1+sqrt(13))/2,(5+sqrt(13))/6";

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::vector<std::vector<double>> read_csv(const std::string& text, std::string& header) {
    std::istringstream in(text);
    std::getline(in, header);
    std::vector<std::vector<double>> rows;
    for (std::string line; std::getline(in, line);) {
        std::vector<double> row;
        std::istringstream cells(line);
        for (std::string cell; std::getline(cells, cell, ',');) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

class TempDir {
public:
    TempDir() : path_(std::filesystem::temp_directory_path() / ("altbase_cli_" + std::to_string(::getpid()))) {
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

}  // namespace

TEST(CliExpand, SqrtFivePointDigits) {
    auto r = run({"expand", "--base", kSqrt13Base, "--x", "(1+sqrt(5))/5", "--mode", "greedy", "--digits", "5"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(first_line(r.out), "10102");
    r = run({"expand", "--base", kSqrt13Base, "--x", "(1+sqrt(5))/5", "--mode", "lazy", "--digits", "5"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(first_line(r.out), "01112");
    r = run({"expand", "--base", kSqrt13Base, "--x", "0", "--digits", "5"});
    EXPECT_EQ(first_line(r.out), "00000");
}

TEST(CliExpand, ExitCodes) {
    EXPECT_EQ(run({"expand", "--base", "2+", "--x", "0.5"}).code, 2);
    EXPECT_EQ(run({"expand", "--base", "2", "--x", "0.5", "--mode", "sideways"}).code, 2);
    EXPECT_EQ(run({"expand", "--x", "0.5"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"expand", "--base", "2", "--x", "1.5"}).code, 3);
    EXPECT_EQ(run({"expand", "--base", "1/2", "--x", "0.1"}).code, 3);
    EXPECT_EQ(run({"expand", "--base", "2", "--x", "0", "--mode", "lazy"}).code, 3);
    const auto bad = run({"expand", "--base", "2*y", "--x", "0.5"});
    EXPECT_NE(bad.err.find("position 2"), std::string::npos);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliDensity, Examples) {
    auto r = run({"density", "--base", kSqrt13Base, "--slot", "0"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(first_line(r.out).substr(0, 12), "K=3, C=1.565");
    const double C = std::stod(first_line(r.out).substr(7));
    EXPECT_NEAR(C, 1.0 + 3.0 / (kBeta0 * kBeta0), 1e-12);
    r = run({"density", "--base", "2"});
    EXPECT_EQ(first_line(r.out), "K=0, density=1");
    EXPECT_EQ(run({"density", "--base", kSqrt13Base, "--truncation", "5"}).code, 4);
    EXPECT_EQ(run({"density", "--base", kSqrt13Base, "--slot", "2"}).code, 3);
}

TEST(CliDensity, GoldenSquareCsvMatchesParry) {
    TempDir dir;
    const auto path = dir.file("density.csv");
    ASSERT_EQ(run({"density", "--base", "phi*phi", "--csv", path}).code, 0);
    std::string header;
    const auto rows = read_csv(slurp(path), header);
    EXPECT_EQ(header, "x,density");
    EXPECT_GE(rows.size(), 2048u);
    const ParryDensity parry(static_cast<long double>(kPhi * kPhi), 60);
    for (const auto& row : rows) {
        ASSERT_EQ(row.size(), 2u);
        // The only jump is at 1/phi, whose floating-point orbit drifts; skip its neighbourhood.
        if (std::abs(row[0] - 1.0 / kPhi) < 1e-6) continue;
        EXPECT_NEAR(row[1], parry(row[0]), 1e-9) << "x=" << row[0];
    }
}

TEST(CliMeasure, Sqrt13FirstCylinder) {
    const auto r = run({"measure", "--base", kSqrt13Base, "--slot", "0", "--interval", "0,2/(1+sqrt(13))"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NEAR(std::stod(r.out), 0.638675, 1e-6);
    EXPECT_NEAR(std::stod(r.out), (13.0 + kSqrt13) / 26.0, 1e-9);
    EXPECT_EQ(run({"measure", "--base", kSqrt13Base, "--interval", "0.5,0.2"}).code, 3);
    EXPECT_EQ(run({"measure", "--base", kSqrt13Base, "--interval", "0.5"}).code, 2);
}

TEST(CliEntropy, Binary) {
    const auto r = run({"entropy", "--base", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NEAR(std::stod(r.out), 0.693147, 1e-6);
}

TEST(CliFreq, ClosedFormAndEmpirical) {
    const auto r = run({"freq", "--base", "2", "--digit", "0", "--empirical", "100000", "--seed", "3"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(first_line(r.out), "frequency=0.5");
    EXPECT_NE(r.out.find("empirical=0.4"), std::string::npos);
}

TEST(CliFreq, SeedFromEnvironment) {
    const std::vector<std::string> args{"freq", "--base", kSqrt13Base, "--digit", "1", "--empirical", "1000", "--json"};
    ::setenv("ALTBASE_SEED", "17", 1);
    const auto a = run(args);
    const auto explicit_seed = [&] {
        auto v = args;
        v.insert(v.end(), {"--seed", "17"});
        return run(v);
    }();
    ::setenv("ALTBASE_SEED", "not-a-number", 1);
    const auto bad = run(args);
    ::unsetenv("ALTBASE_SEED");
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, explicit_seed.out);
    EXPECT_EQ(bad.code, 2);
    EXPECT_EQ(cli::Json::parse(a.out)["payload"]["empirical"]["seed"], 17);
}

TEST(CliCompare, HalfRoots) {
    const auto r = run({"compare", "--base", "sqrt(5)/2,sqrt(6)/2,sqrt(7)/2", "--json"});
    EXPECT_EQ(r.code, 0);
    const auto j = cli::Json::parse(r.out);
    const auto& rows = j["payload"]["intervals"];
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_NEAR(rows[0]["lo"].get<double>(), 1.28, 1e-2);
    EXPECT_NEAR(rows[0]["hi"].get<double>(), 1.44, 1e-2);
    EXPECT_GE(rows[0]["lo"].get<double>(), 1.0);
    EXPECT_EQ(first_line(run({"compare", "--base", "3/2,3/2,4"}).out), "coincide");
    const auto text = run({"compare", "--base", "phi,phi,sqrt(5)"});
    EXPECT_EQ(text.out.substr(0, 5), "[0.72");
    const auto lazy = run({"compare", "--base", "phi,phi,sqrt(5)", "--lazy"});
    EXPECT_EQ(lazy.out.substr(0, 1), "(");
    EXPECT_EQ(run({"compare", "--base", "20.5,20.5,20.5,20.5,20.5,20.5"}).code, 5);
}

TEST(CliOrbit, CsvTrajectory) {
    const auto r = run({"orbit", "--base", kSqrt13Base, "--x", "(1+sqrt(5))/5", "--steps", "5"});
    EXPECT_EQ(r.code, 0);
    std::string header;
    const auto rows = read_csv(r.out, header);
    EXPECT_EQ(header, "step,slot,x,digit");
    ASSERT_EQ(rows.size(), 5u);
    const std::vector<double> digits{1, 0, 1, 0, 2};
    for (std::size_t k = 0; k < 5; ++k) {
        EXPECT_EQ(rows[k][0], static_cast<double>(k));
        EXPECT_EQ(rows[k][1], static_cast<double>(k % 2));
        EXPECT_EQ(rows[k][3], digits[k]);
    }
    EXPECT_NEAR(rows[0][2], (1.0 + kSqrt5) / 5.0, 1e-16);
}

TEST(CliGraph, BothModesWriteTwoFiles) {
    TempDir dir;
    const auto path = dir.file("graph.csv");
    const auto r = run({"graph", "--base", kSqrt13Base, "--csv", path});
    EXPECT_EQ(r.code, 0);
    for (const std::string mode : {"greedy", "lazy"}) {
        std::string header;
        const auto rows = read_csv(slurp(dir.file("graph_" + mode + ".csv")), header);
        EXPECT_EQ(header, "x,y,branch_index,slot");
        std::size_t per_slot[2] = {0, 0};
        for (const auto& row : rows) ++per_slot[static_cast<std::size_t>(row[3])];
        EXPECT_GE(per_slot[0], 3000u);
        EXPECT_GE(per_slot[1], 3000u);
    }
    EXPECT_EQ(run({"graph", "--base", kSqrt13Base}).code, 2);
    const auto single = run({"graph", "--base", "2", "--mode", "greedy", "--samples", "8"});
    EXPECT_EQ(single.code, 0);
    // 8 grid points on [0, 1) plus both sides of the cut 1/2.
    EXPECT_EQ(std::count(single.out.begin(), single.out.end(), '\n'), 1 + 8 + 2);
}

TEST(CliJson, RoundTripAndDeterminism) {
    const std::vector<std::vector<std::string>> commands{
        {"expand", "--base", kSqrt13Base, "--x", "0.3", "--json"},
        {"density", "--base", kSqrt13Base, "--json"},
        {"measure", "--base", kSqrt13Base, "--interval", "0,0.5", "--json"},
        {"freq", "--base", kSqrt13Base, "--digit", "0", "--empirical", "5000", "--seed", "9", "--json"},
        {"entropy", "--base", kSqrt13Base, "--json"},
        {"compare", "--base", "phi,phi,sqrt(5)", "--json"},
        {"orbit", "--base", kSqrt13Base, "--x", "0.3", "--json"},
    };
    for (const auto& args : commands) {
        const auto a = run(args);
        const auto b = run(args);
        ASSERT_EQ(a.code, 0) << args[0] << ": " << a.err;
        EXPECT_EQ(a.out, b.out);
        const auto j = cli::Json::parse(a.out);
        EXPECT_EQ(j["schema_version"], cli::kSchemaVersion);
        EXPECT_EQ(j["command"], args[0]);
        EXPECT_EQ(cli::Json::parse(j.dump()), j);
        const auto betas = j["base"].get<std::vector<double>>();
        EXPECT_EQ(betas, parse_base(args[2]));
    }
}
