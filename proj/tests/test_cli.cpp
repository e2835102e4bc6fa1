#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "symhom/cli.hpp"

using namespace symhom;
using nlohmann::json;
namespace fs = std::filesystem;

namespace
{

struct Outcome
{
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string algebra(const std::string& file) { return std::string(SYMHOM_DATA_DIR) + "/algebras/" + file; }

fs::path scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / ("symhom_test_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

} // namespace

TEST_CASE("sym-homology and epi-count reports")
{
    auto r = invoke({"--no-cache", "sym-homology", "--p", "3", "--ring", "Z"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["result"]["poincare"] == "7t^2+6t^3");
    CHECK(j["result"]["torsion_free_certified"] == true);
    CHECK(j["schema"] == cli::kSchemaVersion);
    CHECK(j["version"] == cli::kVersion);
    CHECK(j["input_hash"].get<std::string>().size() == 16);

    auto e = invoke({"--no-cache", "epi-count", "--m", "2", "--n", "1"});
    REQUIRE(e.code == 0);
    CHECK(json::parse(e.out)["result"]["epis"] == "12");
    CHECK(json::parse(e.out)["result"]["enumerated"] == 12);
}

TEST_CASE("hs reports echo the truncation")
{
    auto r = invoke({"--no-cache", "hs", "--algebra", algebra("k.json"), "--degree", "0", "--ring", "Q"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out)["result"];
    CHECK(j["betti"] == 1);
    CHECK(j["m"] == 2);
    CHECK(j["certified"] == true);
    CHECK(j["weight"].is_null());

    auto t = invoke({"--no-cache", "--threads", "2", "hs", "--algebra", algebra("free_t.json"), "--degree", "1",
                     "--ring", "Z", "--weight", "3"});
    REQUIRE(t.code == 0);
    CHECK(json::parse(t.out)["result"]["torsion"] == json::array({2}));

    auto c = invoke({"--no-cache", "hc-compare", "--algebra", algebra("m2.json"), "--ring", "Q"});
    REQUIRE(c.code == 0);
    auto cj = json::parse(c.out)["result"];
    CHECK(cj["hc"]["h0"]["betti"] == 1);
    CHECK(cj["hs"]["h0"]["betti"] == 0);
    CHECK(cj["on_h0"].empty());
}

TEST_CASE("exit codes")
{
    CHECK(invoke({"sym-homology", "--p", "3"}).code == cli::kValidation);
    CHECK(invoke({"sym-homology", "--p", "3", "--ring", "F4"}).code == cli::kValidation);
    CHECK(invoke({"frobnicate"}).code == cli::kValidation);
    CHECK(invoke({"hs-low", "--algebra", "/nonexistent.json", "--ring", "Q"}).code == cli::kValidation);

    auto dir = scratch("bad");
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "bad.json");
        f << R"({"kind":"finite_dim","basis":["a"],"mul":[[0,0,0,2]],"unit":[1]})";
    }
    auto bad = invoke({"hs-low", "--algebra", (dir / "bad.json").string(), "--ring", "Q"});
    CHECK(bad.code == cli::kValidation);
    CHECK(bad.err.find("unit") != std::string::npos);

    auto guard = invoke({"--no-cache", "hs", "--algebra", algebra("m2.json"), "--degree", "1", "--ring", "Q"});
    CHECK(guard.code == cli::kResource);
    CHECK(guard.err.find("cells") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("result cache")
{
    auto dir = scratch("cache");
    std::vector<std::string> args{"--cache-dir", dir.string(), "sym-homology", "--p", "4", "--ring", "Z"};
    auto first = invoke(args);
    auto second = invoke(args);
    REQUIRE(first.code == 0);
    CHECK(second.out == first.out);
    CHECK(second.err.find("served from cache") != std::string::npos);

    auto j = json::parse(first.out);
    auto key = j["input_hash"].get<std::string>();
    CHECK(fs::exists(dir / (key + ".json")));

    // corrupt entries are ignored and recomputed
    {
        std::ofstream f(dir / (key + ".json"), std::ios::trunc);
        f << "{not json";
    }
    auto third = invoke(args);
    CHECK(third.out == first.out);
    CHECK(third.err.find("warning") != std::string::npos);

    auto off = invoke({"--no-cache", "sym-homology", "--p", "4", "--ring", "Z"});
    CHECK(off.out == first.out);

    // the key depends on the version and every parameter
    json a = {{"command", "sym-homology"}, {"params", {{"p", 4}, {"ring", "Z"}}}};
    json b = {{"command", "sym-homology"}, {"params", {{"p", 4}, {"ring", "Q"}}}};
    CHECK(cli::cache_key(a) != cli::cache_key(b));
    CHECK(cli::cache_key(a) == cli::cache_key(a));
    fs::remove_all(dir);
}

TEST_CASE("matrix export and output file")
{
    auto dir = scratch("export");
    auto r = invoke({"--no-cache", "--export-matrices", dir.string(), "--output", (dir / "report.json").string(),
                     "sym-homology", "--p", "2", "--ring", "Z"});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    CHECK(fs::exists(dir / "sym2_d1.mtx"));
    CHECK(fs::exists(dir / "sym2_d2.mtx"));
    std::ifstream report(dir / "report.json");
    CHECK(json::parse(report)["result"]["poincare"] == "t+2t^2");
    fs::remove_all(dir);
}

TEST_CASE("sym-rep report")
{
    auto r = invoke({"--no-cache", "sym-rep", "--p", "2"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out)["result"];
    CHECK(j["top_degree_is_induced_cyclic"] == true);
    CHECK(j["degrees"].size() == 3);
    CHECK(j["degrees"][2]["dimension"] == "2");
}

TEST_CASE("sym-homology with equivariant ranks")
{
    auto r = invoke({"--no-cache", "sym-homology", "--p", "4", "--ring", "Q", "--ranks", "equivariant"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["params"]["ranks"] == "equivariant");
    CHECK(j["result"]["poincare"] == "43t^3+24t^4");
    CHECK(j["result"]["homology"][4]["rank_method"] == "equivariant multimodular");
    CHECK(invoke({"--no-cache", "sym-homology", "--p", "4", "--ring", "Z", "--ranks", "equivariant"}).code == 2);
    CHECK(invoke({"--no-cache", "sym-homology", "--p", "4", "--ring", "Q", "--ranks", "blocks"}).code == 2);
}
