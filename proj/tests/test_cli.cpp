#include <gtest/gtest.h>

#include <sstream>

#include "arsys/cli.hpp"

namespace {

struct Outcome {
    int status;
    std::string out;
    std::string err;
};

Outcome run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int status = arsys::cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(ARSYS_SAMPLES_DIR) + "/" + name; }

const std::string kA3 =
    R"({"context": {"free_rank": 1, "torsion_order": 1}, "vertices": ["g1", "g1", "g1"], "edges": [[0, 1, "g1^-1"], [1, 2, "g1^-1"]]})";

} // namespace

TEST(Cli, CheckExitCodes) {
    EXPECT_EQ(run({"check", sample("table2-row1.json")}).status, 0);
    EXPECT_EQ(run({"check", sample("not-full.json")}).status, 1);
    const auto affine = run({"check", sample("affine-a1.json")});
    EXPECT_EQ(affine.status, 2);
    EXPECT_NE(affine.out.find("max_root_norm"), std::string::npos);
}

TEST(Cli, InputErrors) {
    EXPECT_EQ(run({"check", "{\"context\": "}).status, 3);
    EXPECT_EQ(run({"check", "/nonexistent/file.json"}).status, 3);
    EXPECT_EQ(run({"check", kA3, "--caps-norm", "0"}).status, 3);
    EXPECT_EQ(run({"frobnicate"}).status, 3);
    EXPECT_EQ(run({"classify", "--torsion", "0"}).status, 3);
}

TEST(Cli, CapsOverride) { EXPECT_EQ(run({"check", kA3, "--caps-objects", "2"}).status, 2); }

TEST(Cli, RootsAsJson) {
    const auto r = run({"roots", kA3, "--format", "json"});
    ASSERT_EQ(r.status, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("positive_roots").size(), 6u);
}

TEST(Cli, DiagramRoundTrip) {
    const auto first = run({"diagram", kA3, "--format", "json"});
    ASSERT_EQ(first.status, 0) << first.err;
    const auto second = run({"diagram", first.out, "--format", "json"});
    ASSERT_EQ(second.status, 0) << second.err;
    EXPECT_EQ(nlohmann::json::parse(first.out), nlohmann::json::parse(second.out));
}

TEST(Cli, GraphAsDot) {
    const auto r = run({"graph", kA3, "--format", "dot"});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out.rfind("digraph", 0), 0u);
}

TEST(Cli, WBGroup) {
    const auto r = run({"wb-group", sample("table2-row16.json"), "--format", "json"});
    ASSERT_EQ(r.status, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("order"), 12);
}

TEST(Cli, Restrict) {
    const auto r = run({"restrict", kA3, "--roots", "1,1,0;0,1,1", "--format", "json"});
    ASSERT_EQ(r.status, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("E_H").size(), 2u);
    EXPECT_EQ(run({"restrict", kA3, "--roots", "2,0,0"}).status, 3);
}

TEST(Cli, VerifyAndClassify) {
    EXPECT_EQ(run({"verify", "--table", "1"}).status, 0);
    EXPECT_EQ(run({"classify", "--torsion", "3"}).status, 0);
}
