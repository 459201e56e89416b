#include "fixtures.hpp"

#include "matsim/cli.hpp"
#include "matsim/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sstream>

using namespace matsim;

namespace {

struct Result {
    int status = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "matsim");
    std::ostringstream out, err;
    const int status = cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

} // namespace

TEST_CASE("featurize writes 1056 OFM columns")
{
    const auto dir = fixtures::scratch_dir("featurize");
    const auto r = run({"featurize", "--manifest", MATSIM_TOY_MANIFEST, "--descriptor", "ofm", "--out", dir.string()});
    REQUIRE(r.status == 0);
    const auto table = parse_csv(read_text(dir / "features.csv"));
    CHECK(table.header().size() == 1057);
    CHECK(table.header()[0] == "id");
    CHECK(table.rows().size() == 22);
    const auto meta = nlohmann::json::parse(read_text(dir / "features.json"));
    CHECK(meta["dimension"] == 1056);
    CHECK(meta["descriptor"] == "ofm");
}

TEST_CASE("appendix-a output is byte-identical across runs")
{
    const auto a = fixtures::scratch_dir("appendix_a1");
    const auto b = fixtures::scratch_dir("appendix_a2");
    REQUIRE(run({"appendix-a", "--seed", "7", "--out", a.string()}).status == 0);
    REQUIRE(run({"appendix-a", "--seed", "7", "--out", b.string()}).status == 0);
    CHECK(read_text(a / "appendix_a.csv") == read_text(b / "appendix_a.csv"));
    CHECK(read_text(a / "appendix_a.json") == read_text(b / "appendix_a.json"));
    CHECK(parse_csv(read_text(a / "appendix_a.csv")).header() ==
          std::vector<std::string>{"x", "y_true", "y_noisy", "pred_k4", "pred_k8", "pred_k10"});
}

TEST_CASE("missing energy label is a data error naming the id")
{
    const auto dir = fixtures::scratch_dir("unlabelled");
    const auto s = fixtures::bcc("Fe", 2.87);
    write_text(dir / "fe.json", structure_to_json(s));
    std::string manifest = "id,path,formation_energy\n";
    for (int i = 0; i < 5; ++i) manifest += "fe" + std::to_string(i) + ",fe.json,0." + std::to_string(i) + "\n";
    manifest += "mystery,fe.json,\n";
    write_text(dir / "manifest.csv", manifest);

    const auto r = run({"regress", "--manifest", (dir / "manifest.csv").string(), "--folds", "2", "--out",
                        (dir / "out").string()});
    CHECK(r.status == 2);
    CHECK(r.err.find("mystery") != std::string::npos);
    CHECK(r.err.rfind("matsim: data: ", 0) == 0);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    CHECK(!std::filesystem::exists(dir / "out" / "report.json"));
}

TEST_CASE("usage errors")
{
    const auto dir = fixtures::scratch_dir("usage");
    CHECK(run({}).status == 1);
    CHECK(run({"transmogrify"}).status == 1);
    CHECK(run({"featurize", "--manifest", MATSIM_TOY_MANIFEST, "--descriptor", "soap", "--out", dir.string()}).status ==
          1);
    CHECK(run({"featurize", "--manifest", (dir / "nope.csv").string()}).status == 1);
    CHECK(run({"regress", "--manifest", MATSIM_TOY_MANIFEST, "--kernel", "poly"}).status == 1);
    CHECK(run({"analyze-similarity", "--manifest", MATSIM_TOY_MANIFEST, "--measure", "l1,chebyshev"}).status == 1);
    CHECK(run({"appendix-a", "--sampling", "sobol"}).status == 1);
    const auto r = run({"appendix-a", "--n", "many"});
    CHECK(r.status == 1);
    CHECK(r.err.rfind("matsim: usage: ", 0) == 0);
    CHECK(run({"--help"}).status == 0);
}

TEST_CASE("config file with flag precedence")
{
    const auto dir = fixtures::scratch_dir("config");
    write_text(dir / "run.json", R"({"n": 30, "k": [2, 4], "seed": 3, "sigma": 0.0})");
    const auto r = run({"appendix-a", "--config", (dir / "run.json").string(), "--n", "40", "--out", dir.string()});
    REQUIRE(r.status == 0);
    const auto meta = nlohmann::json::parse(read_text(dir / "appendix_a.json"));
    CHECK(meta["n"] == 40);
    CHECK(meta["seed"] == 3);
    CHECK(meta["sigma"] == 0.0);
    CHECK(meta["metrics"].size() == 2);
    CHECK(meta["metrics"][1]["k"] == 4);

    write_text(dir / "bad.json", R"({"kernel": "rbf"})");
    CHECK(run({"appendix-a", "--config", (dir / "bad.json").string(), "--out", dir.string()}).status == 1);
    write_text(dir / "broken.json", "{");
    CHECK(run({"appendix-a", "--config", (dir / "broken.json").string(), "--out", dir.string()}).status == 1);
}

TEST_CASE("inputs are left untouched")
{
    const auto before = read_text(MATSIM_TOY_MANIFEST);
    const auto dir = fixtures::scratch_dir("untouched");
    REQUIRE(run({"project", "--manifest", MATSIM_TOY_MANIFEST, "--out", dir.string()}).status == 0);
    CHECK(read_text(MATSIM_TOY_MANIFEST) == before);
    const auto table = parse_csv(read_text(dir / "projection.csv"));
    CHECK(table.header() == std::vector<std::string>{"id", "pc1", "pc2", "group", "formation_energy"});
}
