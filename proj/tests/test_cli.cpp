#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gmf/cli.hpp"
#include "gmf/homalg.hpp"
#include "gmf/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace gmf;

namespace {

struct CliRun {
    int exit_code;
    std::string out, err;
};

CliRun cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

std::string strip_timestamp(const std::string& json) {
    std::istringstream is(json);
    std::ostringstream os;
    std::string line;
    while (std::getline(is, line)) {
        if (line.find("generated_at") != std::string::npos) continue;
        os << line << "\n";
    }
    return os.str();
}

std::string write_temp(const std::string& name, const std::string& text) {
    std::string path = "/tmp/gmf_test_" + name;
    std::ofstream f(path);
    f << text;
    return path;
}

}  // namespace

TEST_CASE("the shipped starting scenario parses to one ring, two objects, three checks") {
    auto file = parse_scenario(*catalogue_text("odd-knoerrer-point"));
    CHECK(file.vars.size() == 1);  // one ring declaration with one variable
    CHECK(file.objects.size() == 2);
    CHECK(file.checks.size() == 3);
}

TEST_CASE("fractional charges parse; sign-requiring machinery rejects them cleanly") {
    std::string text = R"(format = 1
name = "half"
[ring]
coh_denominator = 2
aux_moduli = []
[[var]]
name = "x"
coh = 1
aux = []
[cover]
f = "1"
w = "x^4"
q = "q"
q_coh = 1
q_aux = []
y = "y"
y_coh = 1
y_aux = []
)";
    auto file = parse_scenario(text);  // parses fine
    CHECK(file.coh_denominator == 2);
    // the fiber coordinate would carry degree 1/2, for which no Koszul sign
    // exists; instantiation reports this
    CHECK_THROWS_AS(instantiate(file), NonIntegralDegreeError);

    // the same failure mode at the level of a single morphism
    Ring::Options o;
    o.coh_denominator = 2;
    auto half = Ring::create({{"x", {1, {}}}}, o);
    auto t = trivial_mf(parse_expr(half, "x^4"));
    MfMorphism m = zero_morphism(t, t, DegreeVector{1, {}});  // degree 1/2
    CHECK_THROWS_AS(hom_differential(m), NonIntegralDegreeError);
}

TEST_CASE("run-builtin emits a deterministic JSON report") {
    auto a = cli({"run-builtin", "odd-knoerrer-point", "--json", "-"});
    auto b = cli({"run-builtin", "odd-knoerrer-point", "--json", "-"});
    CHECK(a.exit_code == 0);
    CHECK(strip_timestamp(a.out) == strip_timestamp(b.out));
    CHECK(a.out.find("\"status\": \"pass\"") != std::string::npos);
}

TEST_CASE("exit codes follow the contract") {
    CHECK(cli({"run", "/nonexistent/missing.toml"}).exit_code == 2);
    CHECK(cli({"frobnicate"}).exit_code == 2);
    CHECK(cli({}).exit_code == 2);
    CHECK(cli({"run-builtin", "no-such-entry"}).exit_code == 2);
    CHECK(cli({"catalogue"}).exit_code == 0);

    // a failing check yields exit 1
    std::string text = R"(format = 1
name = "failing"
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
name = "wrong expectation"
op = "end_dims"
object = "lp"
expect = "0:2"
)";
    auto path = write_temp("failing.toml", text);
    auto r = cli({"run", path});
    CHECK(r.exit_code == 1);
    std::remove(path.c_str());
}

TEST_CASE("run with a bad file reports the parse position and exits 2") {
    auto path = write_temp("bad.toml", "format = 1\nname = \"x\"\nbroken line\n");
    auto r = cli({"run", path});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("line 3") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("ext and contract subcommands work on scenario files") {
    std::string text = R"(format = 1
name = "tools"
[bounds]
poly_bound = 8
window = "-4..4"
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
[[object]]
name = "T"
kind = "trivial"
w = "x^2"
)";
    auto path = write_temp("tools.toml", text);
    auto r = cli({"ext", path, "--from", "lp", "--to", "lp"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("degree 0: 1") != std::string::npos);

    auto c1 = cli({"contract", path, "--object", "T"});
    CHECK(c1.exit_code == 0);
    CHECK(c1.out.find("found") != std::string::npos);

    auto c2 = cli({"contract", path, "--object", "lp"});
    CHECK(c2.exit_code == 1);

    auto c3 = cli({"ext", path, "--from", "lp", "--to", "nothere"});
    CHECK(c3.exit_code == 2);
    std::remove(path.c_str());
}

TEST_CASE("json reports land in files when requested") {
    std::string path = "/tmp/gmf_test_report.json";
    auto r = cli({"run-builtin", "orbifold-z2", "--json", path});
    CHECK(r.exit_code == 0);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find("\"scenario\": \"orbifold-z2\"") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("the branched line passes its adjunction checks at a lower bound too") {
    auto r = cli({"run-builtin", "cover-line-fa", "--bound", "8"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("[pass] unit complex") != std::string::npos);
    CHECK(r.out.find("[pass] counit") != std::string::npos);
}

TEST_CASE("window overrides reach the runner") {
    auto r = cli({"run-builtin", "odd-knoerrer-point", "--window", "-3..3", "--bound", "6"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("window -3..3") != std::string::npos);
}
