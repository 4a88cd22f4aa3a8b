#include "tqd/cli.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

using tqd::cli::run;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> result;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        result.push_back(line);
    }
    return result;
}

class TempFile {
public:
    explicit TempFile(const std::string& contents)
        : path_(std::filesystem::temp_directory_path() /
                ("tqd_spec_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + ".json"))
    {
        std::ofstream(path_) << contents;
    }
    ~TempFile() { std::filesystem::remove(path_); }
    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;
    std::string path() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

} // namespace

TEST_CASE("spectrum command")
{
    const auto r = invoke({"spectrum", "--model", "spin", "--j1", "2", "--j", "1"});
    CHECK(r.code == tqd::cli::kExitOk);
    CHECK(r.err.empty());
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 9);
    CHECK(rows[0] == "index,numeric,analytic,abs_deviation,max_deviation");
    CHECK(rows[1].rfind("1,-7,-7,", 0) == 0);

    const auto magnetic = invoke({"spectrum", "--model", "magnetic", "--j", "1", "--b", "2", "--format", "json"});
    CHECK(magnetic.code == 0);
    const auto doc = nlohmann::json::parse(magnetic.out);
    REQUIRE(doc.size() == 8);
    CHECK(doc[7]["analytic"].get<double>() == doctest::Approx(5.0));
}

TEST_CASE("spectrum beyond the eigensolver's absolute accuracy exits 2")
{
    const auto r = invoke({"spectrum", "--model", "spin", "--j1", "1e8", "--j", "1"});
    CHECK(r.code == tqd::cli::kExitNumerical);
    CHECK(r.err.find("differ") != std::string::npos);
}

TEST_CASE("usage errors exit 1")
{
    CHECK(invoke({}).code == tqd::cli::kExitUsage);
    CHECK(invoke({"nonsense"}).code == tqd::cli::kExitUsage);
    CHECK(invoke({"spectrum"}).code == tqd::cli::kExitUsage);
    CHECK(invoke({"spectrum", "--model", "spin", "--b", "1"}).code == tqd::cli::kExitUsage);
    CHECK(invoke({"spectrum", "--model", "magnetic", "--j1", "1"}).code == tqd::cli::kExitUsage);
    CHECK(invoke({"discord", "--model", "spin", "--temp", "-1"}).code == tqd::cli::kExitUsage);
    CHECK(invoke({"discord", "--model", "spin", "--bipartition", "pair_21"}).code == tqd::cli::kExitUsage);
    CHECK(invoke({"discord", "--model", "spin", "--format", "xml"}).code == tqd::cli::kExitUsage);
    CHECK(invoke({"figure", "--figure", "5"}).code == tqd::cli::kExitUsage);
    CHECK(invoke({"figure", "--figure", "1"}).code == tqd::cli::kExitUsage);
    CHECK(invoke({"figure", "--figure", "4", "--panel", "a"}).code == tqd::cli::kExitUsage);
    CHECK(invoke({"fit", "--j", "1", "--branch", "sideways"}).code == tqd::cli::kExitUsage);
    CHECK(invoke({"fit", "--j", "1", "--branch", "j1_positive", "--tmin", "3", "--tmax", "2"}).code ==
          tqd::cli::kExitUsage);
    CHECK(invoke({"sweep", "--spec", "/nonexistent/spec.json"}).code == tqd::cli::kExitUsage);
}

TEST_CASE("help exits 0")
{
    const auto r = invoke({"--help"});
    CHECK(r.code == tqd::cli::kExitOk);
    CHECK(r.out.find("spectrum") != std::string::npos);
}

TEST_CASE("discord command")
{
    const auto r = invoke({"discord", "--model", "spin", "--j1", "2", "--j", "1", "--temp", "0"});
    CHECK(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "model,j1,j,b,temp,bipartition,mutual_information,classical_correlation,discord,method");
    CHECK(rows[1].rfind("spin,2,1,,0,pair_12,", 0) == 0);
    CHECK(rows[1].find("xstate_analytic") != std::string::npos);

    const auto j = invoke({"discord", "--model", "spin", "--j1", "2", "--j", "1", "--temp", "0", "--format", "json"});
    const auto doc = nlohmann::json::parse(j.out);
    REQUIRE(doc.size() == 1);
    CHECK(doc[0]["discord"].get<double>() == doctest::Approx(0.4425037).epsilon(1e-6));
    CHECK(doc[0]["b"].is_null());
    for (const char* key : {"model", "j1", "j", "b", "temp", "bipartition", "mutual_information",
                            "classical_correlation", "discord", "method"}) {
        CHECK(doc[0].contains(key));
    }

    const auto rest = invoke({"discord", "--model", "magnetic", "--j", "1", "--b", "3", "--temp", "0.25",
                              "--bipartition", "one_vs_rest_1_23", "--format", "json"});
    CHECK(rest.code == 0);
    const auto rest_doc = nlohmann::json::parse(rest.out);
    CHECK(rest_doc[0]["method"] == "grid_refined");
    CHECK(rest_doc[0]["j1"].is_null());
}

TEST_CASE("commands are deterministic")
{
    const std::vector<std::string> args{"discord", "--model", "magnetic", "--j", "1", "--b", "4", "--temp", "0.7",
                                        "--bipartition", "pair_23"};
    CHECK(invoke(args).out == invoke(args).out);
}

TEST_CASE("fit command layout")
{
    const auto r = invoke({"fit", "--j", "1", "--branch", "j1_positive", "--tmin", "2", "--tmax", "4", "--tpoints",
                           "3", "--format", "json"});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.size() == 4);
    CHECK(doc[0]["record"] == "sample");
    CHECK(doc[0]["slope"].is_null());
    CHECK(doc[3]["record"] == "fit");
    CHECK(doc[3]["j1c"].is_null());
    CHECK(doc[3]["slope"].get<double>() > 3.0);
}

TEST_CASE("sweep command from a spec file")
{
    const TempFile spec(R"({"model": "magnetic",
        "swept": {"parameter": "b", "from": 0, "to": 2, "points": 3},
        "fixed": {"j": 1},
        "temperatures": [0.25],
        "bipartitions": ["pair_12", "pair_23"]})");
    const auto r = invoke({"sweep", "--spec", spec.path(), "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.size() == 6);
    CHECK(doc[0]["b"] == 0.0);
    CHECK(doc[0]["bipartition"] == "pair_12");
    CHECK(doc[1]["bipartition"] == "pair_23");
    CHECK(doc[5]["b"] == 2.0);
}

TEST_CASE("parse_sweep_spec validation")
{
    using tqd::cli::parse_sweep_spec;
    const std::string good = R"({"model": "spin", "swept": {"parameter": "j1", "from": -1, "to": 1, "points": 3},
        "fixed": {"j": -1}, "temperatures": [1], "bipartitions": ["pair_13"]})";
    const auto spec = parse_sweep_spec(good);
    CHECK(spec.j == -1.0);
    CHECK(spec.swept.points == 3);
    CHECK(spec.bipartitions.front() == tqd::Bipartition::pair_13);

    CHECK_THROWS_AS(parse_sweep_spec("{"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_spec("[]"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_spec(R"({"model": "ising"})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_spec(R"({"model": "spin", "swept": {"parameter": "j1", "from": 0, "to": 1,
        "points": 3}, "fixed": {"j1": 2}, "temperatures": [1], "bipartitions": ["pair_12"]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_spec(R"({"model": "spin", "swept": {"parameter": "j1", "from": 0, "to": 1,
        "points": 3}, "fixed": {"b": 2}, "temperatures": [1], "bipartitions": ["pair_12"]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_spec(R"({"model": "spin", "swept": {"parameter": "j1", "from": 0, "to": 1,
        "points": -3}, "temperatures": [1], "bipartitions": ["pair_12"]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_spec(R"({"model": "spin", "swept": {"parameter": "j1", "from": 0, "to": 1,
        "points": 3}, "temperatures": [1], "bipartitions": ["pair_99"]})"),
                    std::invalid_argument);
}

TEST_CASE("figure specs")
{
    const auto f2 = tqd::cli::figure_spec(2, 'b');
    CHECK(f2.j == -1.0);
    CHECK(f2.swept.points == 401);
    CHECK(f2.bipartitions.front() == tqd::Bipartition::pair_23);
    const auto f4 = tqd::cli::figure_spec(4, 0);
    CHECK(f4.family == tqd::ModelFamily::magnetic);
    CHECK(f4.temperatures == std::vector<double>{0.25});
    CHECK_THROWS_AS(tqd::cli::figure_spec(1, 'c'), std::invalid_argument);
}

namespace {

double discord_of(const Outcome& r)
{
    return nlohmann::json::parse(r.out)[0]["discord"].get<double>();
}

} // namespace

TEST_CASE("discord command examples")
{
    const auto singlet = invoke({"discord", "--model", "spin", "--j1", "0", "--j", "1", "--temp", "0",
                                 "--bipartition", "pair_23", "--format", "json"});
    CHECK(discord_of(singlet) == doctest::Approx(1.0).epsilon(1e-9));

    const auto free_spins = invoke({"discord", "--model", "spin", "--j1", "0", "--j", "0", "--temp", "1",
                                    "--format", "json"});
    CHECK(std::abs(discord_of(free_spins)) < 1e-12);

    double previous = 0.8;
    for (const char* b : {"10", "12", "15"}) {
        const auto r = invoke({"discord", "--model", "magnetic", "--j", "1", "--b", b, "--temp", "0.25",
                               "--bipartition", "pair_23", "--format", "json"});
        const double d = discord_of(r);
        CHECK(d > previous);
        previous = d;
    }
}

TEST_CASE("figure datasets")
{
    const auto r = invoke({"figure", "--figure", "1", "--panel", "a", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.size() == 401 * 3);
    CHECK(doc.front()["j1"] == -12.0);
    CHECK(doc.back()["j1"] == 8.0);
    CHECK(doc.front()["discord"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-2));
    CHECK(doc.back()["discord"].get<double>() == doctest::Approx(0.4425).epsilon(1e-2));

    const auto b = invoke({"figure", "--figure", "2", "--panel", "b", "--format", "json"});
    const auto rows = nlohmann::json::parse(b.out);
    for (std::size_t i : {std::size_t{0}, std::size_t{1}, std::size_t{2}, rows.size() - 3, rows.size() - 2,
                          rows.size() - 1}) {
        CHECK(std::abs(rows[i]["discord"].get<double>() - 1.0 / 3.0) < 1e-3);
    }

    CHECK(invoke({"figure", "--figure", "4"}).out == invoke({"figure", "--figure", "4"}).out);
}
