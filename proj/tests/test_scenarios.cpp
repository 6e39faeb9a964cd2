#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gmf/scenario.hpp"

using namespace gmf;

TEST_CASE("every catalogue scenario passes at its declared bounds") {
    for (const auto& name : catalogue_names()) {
        const std::string* text = catalogue_text(name);
        REQUIRE(text != nullptr);
        auto file = parse_scenario(*text);
        CHECK(file.name == name);
        auto rep = run_scenario(file);
        INFO("scenario ", name);
        for (const auto& c : rep.checks) {
            INFO(c.name, " -> ", c.status, " ", c.detail);
            CHECK(c.status != "fail");
            CHECK(c.status != "error");
        }
    }
}

TEST_CASE("catalogue scenarios serialize and re-parse identically") {
    for (const auto& name : catalogue_names()) {
        auto file = parse_scenario(*catalogue_text(name));
        std::string once = serialize_scenario(file);
        auto file2 = parse_scenario(once);
        std::string twice = serialize_scenario(file2);
        CHECK(once == twice);
        CHECK(file2.checks.size() == file.checks.size());
        CHECK(file2.objects.size() == file.objects.size());
    }
}

TEST_CASE("malformed scenarios are rejected with positions") {
    CHECK_THROWS_AS(parse_scenario("name = \"x\"\n"), ParseError);  // missing format
    CHECK_THROWS_AS(parse_scenario("format = 1\n"), ParseError);    // missing name
    CHECK_THROWS_AS(parse_scenario("format = 1\nname = \"t\"\n[nope]\n"), ParseError);
    try {
        parse_scenario("format = 1\nname = \"t\"\nbroken\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("duplicate variables are a semantic error naming the variable") {
    std::string text = R"(format = 1
name = "dup"
[ring]
coh_denominator = 1
aux_moduli = []
[[var]]
name = "x"
coh = 1
aux = []
[[var]]
name = "x"
coh = 2
aux = []
)";
    try {
        parse_scenario(text);
        FAIL("expected a duplicate-variable error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("'x'") != std::string::npos);
    }
}

TEST_CASE("unknown check operations surface as check errors, not aborts") {
    std::string text = R"(format = 1
name = "strange"
[ring]
coh_denominator = 1
aux_moduli = []
[[var]]
name = "x"
coh = 1
aux = []
[[object]]
name = "lp"
kind = "loop"
f = "x"
[[check]]
name = "fine"
op = "validate"
object = "lp"
[[check]]
name = "nonsense"
op = "frobnicate"
)";
    auto rep = run_scenario(parse_scenario(text));
    REQUIRE(rep.checks.size() == 2);
    CHECK(rep.checks[0].status == "pass");
    CHECK(rep.checks[1].status == "error");
    CHECK(rep.any_failure());
}

TEST_CASE("overrides raise the bound without changing results") {
    auto file = parse_scenario(*catalogue_text("odd-knoerrer-point"));
    RunOverrides over;
    over.poly_bound = 14;
    auto rep = run_scenario(file, over);
    CHECK(rep.poly_bound == 14);
    for (const auto& c : rep.checks) CHECK(c.status == "pass");
}

TEST_CASE("reports serialize deterministically apart from the timestamp") {
    auto file = parse_scenario(*catalogue_text("clifford-split"));
    auto rep = run_scenario(file);
    std::string a = report_to_json(rep, false);
    std::string b = report_to_json(run_scenario(file), false);
    CHECK(a == b);
    CHECK(a.find("\"schema\"") != std::string::npos);
    CHECK(a.find("generated_at") == std::string::npos);
    std::string with_time = report_to_json(rep, true);
    CHECK(with_time.find("generated_at") != std::string::npos);
}
