#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <functional>

#include "hcs/config.hpp"

using namespace hcs;

namespace {

std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

std::string write_temp(const std::string& name, const std::string& text) {
    const auto dir = std::filesystem::temp_directory_path() / "hcs_config_tests";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / name).string();
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST(Config, KeyValueSyntax) {
    const auto kv = parse_key_values("# header\n a = 1 \n\nb=two # trailing\n", "t");
    ASSERT_EQ(kv.size(), 2u);
    EXPECT_EQ(kv.at("a"), "1");
    EXPECT_EQ(kv.at("b"), "two");
    EXPECT_EQ(error_code([] { parse_key_values("a 1\n", "t"); }), "config.syntax");
    EXPECT_EQ(error_code([] { parse_key_values("a =\n", "t"); }), "config.syntax");
    EXPECT_EQ(error_code([] { parse_key_values(" = 1\n", "t"); }), "config.syntax");
    EXPECT_EQ(error_code([] { parse_key_values("a = 1\na = 2\n", "t"); }), "config.duplicate");
}

TEST(Config, Settings) {
    RunConfig c;
    apply_setting(c, "degree", "4");
    apply_setting(c, "normalization", "positive");
    apply_setting(c, "tol", "1e-9");
    apply_setting(c, "profile", "quick");
    EXPECT_EQ(c.degree, 4);
    EXPECT_EQ(c.normalization, Normalization::positive);
    EXPECT_EQ(c.tol, 1e-9);
    EXPECT_EQ(c.profile, "quick");
    EXPECT_NO_THROW(c.validate());

    EXPECT_EQ(error_code([&] { apply_setting(c, "colour", "red"); }), "config.unknown_key");
    EXPECT_EQ(error_code([&] { apply_setting(c, "degree", "3.5"); }), "config.value");
    EXPECT_EQ(error_code([&] { apply_setting(c, "tol", "small"); }), "config.value");
    EXPECT_EQ(error_code([&] { apply_setting(c, "seed", "-1"); }), "config.value");
    EXPECT_EQ(error_code([&] { apply_setting(c, "normalization", "sideways"); }), "config.value");
}

TEST(Config, Ranges) {
    EXPECT_NO_THROW(RunConfig{}.validate());
    const std::vector<std::pair<std::string, std::string>> bad{
        {"degree", "1"},     {"degree", "7"},         {"resolution", "0"}, {"tol", "0"},
        {"amplitude", "-1"}, {"steps_per_unit", "0"}, {"stencil", "45"},   {"profile", "slow"}};
    for (const auto& [k, v] : bad) {
        RunConfig c;
        apply_setting(c, k, v);
        EXPECT_EQ(error_code([&] { c.validate(); }), "config.range") << k << " = " << v;
    }
}

TEST(Config, Files) {
    const RunConfig c = load_config(write_temp("ok.cfg", "schema_version = 1\nresolution = 3\nseed = 9\n"));
    EXPECT_EQ(c.resolution, 3);
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.surface().resolution, 3);
    EXPECT_EQ(c.to_json()["seed"], 9);

    EXPECT_EQ(error_code([] { load_config(write_temp("nover.cfg", "resolution = 3\n")); }), "config.schema");
    EXPECT_EQ(error_code([] { load_config(write_temp("v2.cfg", "schema_version = 2\n")); }), "config.schema");
    EXPECT_EQ(error_code([] { load_config("/nonexistent/hcs.cfg"); }), "config.read");
}
