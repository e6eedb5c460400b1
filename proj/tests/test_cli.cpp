#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "filippov/cli.hpp"
#include "filippov/errors.hpp"
#include "filippov/json_io.hpp"
#include "filippov/random.hpp"
#include "filippov/standard_algebras.hpp"

using namespace filippov;
using json_io::Json;

namespace
{

const std::string data = FILIPPOV_TEST_DATA;

std::string at(const std::string &name)
{
    return data + "/" + name;
}

struct Run
{
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string scratch(const std::string &name, const std::string &text)
{
    auto dir = std::filesystem::temp_directory_path() / "filippov_cli_test";
    std::filesystem::create_directories(dir);
    auto p = dir / name;
    std::ofstream(p) << text;
    return p.string();
}

} // namespace

TEST_CASE("rationals and vectors on the wire")
{
    CHECK(json_io::rational_from_json(Json("3/6")) == Rational(1, 2));
    CHECK(json_io::rational_from_json(Json(-4)) == -4);
    CHECK(json_io::to_json(Rational(-7, 3)) == Json("-7/3"));
    CHECK_THROWS_AS(json_io::rational_from_json(Json(1.5)), input_error);
    Vector v{0, Rational(1, 2), 0, -3};
    CHECK(json_io::sparse_from_json(json_io::sparse_to_json(v), 4) == v);
    CHECK(json_io::sparse_from_json(Json::parse(R"(["0","1/2",0,-3])"), 4) == v);
    CHECK_THROWS_AS(json_io::sparse_from_json(Json::parse(R"({"5":"1"})"), 4), input_error);
}

TEST_CASE("round trips")
{
    Rng rng(2);
    auto eps = epsilon_algebra();
    CHECK(json_io::algebra_from_json(json_io::to_json(eps)) == eps);
    for (int t = 0; t < 5; ++t) {
        auto a = random_bracket(rng, 3, 4);
        CHECK(json_io::algebra_from_json(json_io::to_json(a)) == a);
    }
    auto ad = adjoint_representation(eps);
    CHECK(json_io::representation_from_json(json_io::to_json(ad)) == ad);
    for (int p = -1; p <= 2; ++p) {
        Cochain c(3, 4, p);
        for (auto &v : c.values())
            if (rng.chance(30))
                v = rng.small_rational();
        CHECK(json_io::cochain_from_json(json_io::to_json(c)) == c);
    }
    auto m = rng.small_matrix(3, 4);
    CHECK(json_io::matrix_from_json(json_io::to_json(m)) == m);
    auto p = rng.small_poly(3, 3);
    CHECK(json_io::poly_from_json(json_io::to_json(p), 3) == p);
    DeformationPath path{eps, {from_bracket(eps), Cochain(3, 4, 1)}};
    auto back = json_io::path_from_json(json_io::to_json(path));
    CHECK(back.base == path.base);
    CHECK(back.terms == path.terms);
    auto top = example_tangent_topform(3, 2);
    CHECK(json_io::algebroid_from_json(json_io::to_json(top)) == top);
    auto fc = example_tangent_fc(eps, MultiPoly::variable(4, 0));
    CHECK(json_io::algebroid_from_json(json_io::to_json(fc)) == fc);
}

TEST_CASE("unsorted entries carry their sign")
{
    auto j = Json::parse(R"({"arity":3,"dim":4,"brackets":[{"on":[1,2,3],"value":{"4":"1"}}]})");
    auto a = json_io::algebra_from_json(j);
    auto c = Json::parse(
        R"({"arity":3,"dim":4,"degree":1,"entries":[{"tensor_blocks":[],"wedge":[2,1,3],"value":{"4":"-1"}}]})");
    CHECK(json_io::cochain_from_json(c) == from_bracket(a));
    auto rep = Json::parse(
        R"({"arity":3,"dim":4,"degree":1,"entries":[{"tensor_blocks":[],"wedge":[1,1,3],"value":{"4":"1"}}]})");
    CHECK_THROWS_AS(json_io::cochain_from_json(rep), input_error);
    auto dup = Json::parse(
        R"({"arity":3,"dim":4,"brackets":[{"on":[1,2,3],"value":{"4":"1"}},{"on":[1,2,3],"value":{"4":"1"}}]})");
    CHECK_THROWS_AS(json_io::algebra_from_json(dup), input_error);
    auto unsorted = Json::parse(R"({"arity":3,"dim":4,"brackets":[{"on":[2,1,3],"value":{"4":"1"}}]})");
    CHECK_THROWS_AS(json_io::algebra_from_json(unsorted), input_error);
}

TEST_CASE("parse errors name a location")
{
    try {
        json_io::parse_text("{\"arity\": 3,", "x.json");
        CHECK(false);
    } catch (const input_error &e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
    try {
        json_io::algebra_from_json(Json::parse(R"({"arity":3,"dim":4,"brackets":[{"on":[1,2,9],"value":{}}]})"));
        CHECK(false);
    } catch (const input_error &e) {
        CHECK(std::string(e.what()).find("/brackets/0") != std::string::npos);
    }
}

TEST_CASE("check verb")
{
    auto ok = run({"check", at("epsilon.json")});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("fundamental identity: holds") != std::string::npos);
    auto bad = run({"check", at("fi_violating.json")});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("witness") != std::string::npos);
    auto js = run({"check", at("fi_violating.json"), "--format", "json"});
    auto j = Json::parse(js.out);
    CHECK(j["status"] == "fails");
    // the reported witness replays through the library
    auto w = j["fundamental_identity"]["witness"];
    std::vector<int> x, y;
    for (const auto &i : w["tuples"][0])
        x.push_back(i.get<int>() - 1);
    for (const auto &i : w["tuples"][1])
        y.push_back(i.get<int>() - 1);
    CHECK(!is_zero(fi_defect(fi_violating_example(), x, y)));
    auto rep = run({"check", at("epsilon.json"), "--rep", at("adjoint_epsilon.json"), "--o-operator",
                    at("n_scalar.json")});
    CHECK(rep.code == 1);
    CHECK(rep.out.find("representation: holds") != std::string::npos);
}

TEST_CASE("cohomology verb")
{
    auto r = run({"cohomology", at("zero_m4_n3.json"), "--degree", "2", "--format", "json"});
    CHECK(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["cohomology"][0]["betti"] == 16);
    CHECK(run({"cohomology", at("epsilon.json"), "--degree", "4"}).code == 2);
    CHECK(run({"cohomology", at("fi_violating.json")}).code == 1);
}

TEST_CASE("deform verbs")
{
    auto ext = run({"deform", "extend", at("path_zero_eps.json"), "--format", "json"});
    CHECK(ext.code == 0);
    auto j = Json::parse(ext.out);
    CHECK(j["status"] == "extends");
    auto next = json_io::cochain_from_json(j["next"]);
    CHECK(next.is_zero());
    CHECK(next.degree() == 1);
    auto obs = run({"deform", "extend", at("path_zero_bad.json")});
    CHECK(obs.code == 1);
    CHECK(obs.out.find("certificate") != std::string::npos);
    CHECK(run({"deform", "check", at("path_eps_nijenhuis.json"), "--full"}).code == 0);
    CHECK(run({"deform", "check", at("path_zero_bad.json"), "--full"}).code == 1);
    CHECK(run({"deform", "equiv", at("path_eps_constant.json"), at("path_eps_nijenhuis.json"), at("equiv_id_tn.json")})
              .code == 0);
    CHECK(run({"deform", "equiv", at("path_eps_nijenhuis.json"), at("path_eps_nijenhuis.json"), at("equiv_id_tn.json")})
              .code == 1);
    CHECK(run({"deform", "rigidity", at("sl2.json"), "--max-order", "2", "--trials", "2"}).code == 0);
    CHECK(run({"deform", "rigidity", at("zero_m4_n3.json"), "--max-order", "1", "--trials", "2"}).code == 1);
    CHECK(run({"obstruction", at("path_zero_bad.json")}).code == 0);
}

TEST_CASE("nijenhuis verb")
{
    auto r = run({"nijenhuis", at("epsilon.json"), at("n_scalar.json"), "--generate-path", "--format", "json"});
    CHECK(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["path_checks"]["deformation_equations"] == true);
    CHECK(j["path_checks"]["trivial_identity"] == true);
    CHECK(j["path_checks"]["phi1_equals_coboundary_of_N"] == true);
    CHECK(json_io::path_from_json(j["path"]).order() == 2);
    CHECK(run({"nijenhuis", at("epsilon.json"), at("sl2.json")}).code == 2);
}

TEST_CASE("algebroid verbs")
{
    CHECK(run({"algebroid", "example-topform", "--m-base", "3", "--n", "2", "--check", "--symbol"}).code == 0);
    CHECK(run({"algebroid", "example-topform", "--m-base", "2", "--n", "3"}).code == 2);
    CHECK(run({"algebroid", "example-fc", at("epsilon.json"), "--f", R"([{"exponents":[2,0,0,0],"coeff":"1"}])",
               "--check"})
              .code == 0);
    auto built = run({"algebroid", "example-topform", "--m-base", "3", "--n", "2", "--format", "json"});
    auto file = scratch("top.json", Json::parse(built.out)["algebroid"].dump());
    CHECK(run({"algebroid", "check", file, "--anchor-sections", "--sections-degree", "2"}).code == 0);
}

TEST_CASE("reduce-lie verb")
{
    auto r = run({"reduce-lie", at("sl2.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("degree 2: agree") != std::string::npos);
    CHECK(run({"reduce-lie", at("epsilon.json")}).code == 2);
}

TEST_CASE("input errors exit 2")
{
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"check", at("missing.json")}).code == 2);
    auto broken = run({"check", scratch("broken.json", "{\"arity\": 3, \"dim\": ")});
    CHECK(broken.code == 2);
    CHECK(broken.err.find("byte") != std::string::npos);
    auto shape = scratch("shape.json", R"({"arity":3,"dim":4,"brackets":[{"on":[1,2,3],"value":["1","2"]}]})");
    CHECK(run({"check", shape}).code == 2);
    CHECK(run({"--format", "yaml", "check", at("epsilon.json")}).code == 2);
}

TEST_CASE("reports are byte-stable")
{
    std::vector<std::string> args{"--format", "json", "cohomology", at("epsilon.json")};
    auto a = run(args), b = run(args);
    CHECK(a.out == b.out);
    auto c = run({"--threads", "1", "--format", "json", "cohomology", at("epsilon.json")});
    CHECK(c.out == a.out);
    auto j = Json::parse(a.out);
    CHECK(j["tool"] == tool_name);
    CHECK(j["version"] == tool_version);
    CHECK(j["input_digest"].get<std::string>().rfind("sha256:", 0) == 0);
    CHECK(!j.contains("timing_ms"));
    auto t = Json::parse(run({"--format", "json", "--timing", "cohomology", at("epsilon.json")}).out);
    CHECK(t.contains("timing_ms"));
    // flags after the verb work too
    CHECK(run({"cohomology", at("epsilon.json"), "--format", "json"}).out == a.out);
    auto s1 = run({"--seed", "5", "deform", "rigidity", at("sl2.json"), "--format", "json"});
    auto s2 = run({"--seed", "5", "deform", "rigidity", at("sl2.json"), "--format", "json"});
    CHECK(s1.out == s2.out);
}
